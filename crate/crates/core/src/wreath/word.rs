// SPDX-License-Identifier: Apache-2.0

use std::fmt;

/// A generator reference with a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize) -> Self {
        Letter {
            generator,
            inverse: false,
        }
    }

    pub fn inv(generator: usize) -> Self {
        Letter {
            generator,
            inverse: true,
        }
    }

    pub fn inverted(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }
}

/// A group element as a product of signed generators.
///
/// Words act on the left: the rightmost letter is applied first, so
/// `uv` acts as `x ↦ u(v(x))`. Words are kept exactly as built; reduction
/// happens only through [`Word::free_reduce`] or
/// [`WreathPresentation::reduce`](super::WreathPresentation::reduce).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn generator(g: usize) -> Self {
        Word(vec![Letter::new(g)])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.0.push(letter);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    /// `self · other` (apply `other` first).
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Cancels adjacent `g g^-1` and `g^-1 g` pairs.
    pub fn free_reduce(&self) -> Word {
        reduce_with(self.0.iter().copied(), |_| false)
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// Stack reduction; generators flagged involutive also cancel `g g`, and
/// their inverse letters are normalised to the positive letter.
pub(crate) fn reduce_with(
    letters: impl Iterator<Item = Letter>,
    involutive: impl Fn(usize) -> bool,
) -> Word {
    let mut stack: Vec<Letter> = Vec::new();
    for mut letter in letters {
        let invol = involutive(letter.generator);
        if invol {
            letter.inverse = false;
        }
        match stack.last() {
            Some(top)
                if top.generator == letter.generator
                    && (top.inverse != letter.inverse || invol) =>
            {
                stack.pop();
            }
            _ => stack.push(letter),
        }
    }
    Word(stack)
}

/// Renders a word against a list of generator names; the empty word is `e`.
pub struct WordDisplay<'a> {
    pub(crate) word: &'a Word,
    pub(crate) names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("e");
        }
        for (k, l) in self.word.letters().iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.names[l.generator])?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}
