// SPDX-License-Identifier: Apache-2.0

//! Self-similar groups given by wreath recursions.

mod action;
mod presentation;
mod word;

pub use action::{
    act, first_letter_step, is_trivial_at_level, level_permutation, order_at_level, portrait,
    root_permutation, section, LevelAction, Portrait,
};
pub use presentation::{GeneratorRule, WreathPresentation};
pub use word::{Letter, Word, WordDisplay};
