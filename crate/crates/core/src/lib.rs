// SPDX-License-Identifier: Apache-2.0

//! Parabolic suborbits, orbital association schemes and quasi-regular
//! decompositions for self-similar groups acting on regular rooted trees.
//!
//! A group is given by a wreath recursion ([`wreath::WreathPresentation`]).
//! For a ray `e` and a level `n` the stabilizer `P_n` of the level-`n` prefix
//! of `e` is reached through a Schreier transversal of the level action
//! ([`level`]). Its orbits on the level give the orbital scheme of the pair
//! `(G_n, P_n)` ([`scheme`]), whose intersection numbers are the structure
//! constants of the Hecke algebra. When that algebra is commutative its
//! common eigensystem yields the degrees of the irreducible components of
//! the permutation representation on the level ([`spectral`]).

pub mod catalog;
pub mod dot;
pub mod error;
pub mod level;
pub mod perm;
pub mod scheme;
pub mod spectral;
pub mod tree;
pub mod verify;
pub mod wreath;

pub use error::{Error, Result};
