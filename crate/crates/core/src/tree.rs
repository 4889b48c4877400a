// SPDX-License-Identifier: Apache-2.0

//! Vertices of the regular rooted tree over the alphabet `{1, …, d}`.
//!
//! A vertex is a finite string of letters; its length is its level and the
//! empty string is the root. The vertices of a level are indexed by their
//! lexicographic rank, and every permutation or matrix elsewhere in the crate
//! is expressed in that indexing.

use std::fmt;

use crate::error::{Error, Result};

/// Default limit on the number of points of a single level.
pub const DEFAULT_POINT_CAP: usize = 1 << 20;

/// Highest degree that can be rendered with one digit per letter.
pub const MAX_DEGREE: usize = 9;

/// Number of vertices `d^n` on level `n`, or a size-cap error.
pub fn level_size(degree: usize, level: usize, cap: usize) -> Result<usize> {
    let mut size: u128 = 1;
    for _ in 0..level {
        size = size.saturating_mul(degree as u128);
        if size > cap as u128 {
            // keep multiplying so the error names the true d^n when it fits
            let full = (degree as u128)
                .checked_pow(level as u32)
                .unwrap_or(u128::MAX);
            return Err(Error::SizeCap {
                what: "level points d^n",
                requested: full,
                cap: cap as u128,
            });
        }
    }
    Ok(size as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    degree: u8,
    letters: Vec<u8>,
}

impl Vertex {
    pub fn root(degree: usize) -> Self {
        Vertex {
            degree: degree as u8,
            letters: Vec::new(),
        }
    }

    /// Builds a vertex from 1-based letters.
    pub fn new(degree: usize, letters: Vec<u8>) -> Result<Self> {
        if !(2..=MAX_DEGREE).contains(&degree) {
            return Err(Error::DegreeOutOfRange { degree });
        }
        if let Some(&bad) = letters.iter().find(|&&l| l == 0 || l as usize > degree) {
            return Err(Error::InvalidVertex {
                text: render_letters(&letters),
                message: format!("letter {bad} outside 1..={degree}"),
            });
        }
        Ok(Vertex {
            degree: degree as u8,
            letters,
        })
    }

    /// Parses a digit string; `-` or the empty string is the root.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "-" || text.is_empty() {
            return Vertex::new(degree, Vec::new());
        }
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            let digit = c.to_digit(10).ok_or_else(|| Error::InvalidVertex {
                text: text.to_string(),
                message: format!("`{c}` is not a digit"),
            })?;
            letters.push(digit as u8);
        }
        Vertex::new(degree, letters)
    }

    /// Inverse of [`Vertex::index`].
    pub fn from_index(degree: usize, level: usize, mut index: usize) -> Self {
        let mut letters = vec![0u8; level];
        for slot in letters.iter_mut().rev() {
            *slot = (index % degree) as u8 + 1;
            index /= degree;
        }
        Vertex {
            degree: degree as u8,
            letters,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn level(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn is_root(&self) -> bool {
        self.letters.is_empty()
    }

    /// Lexicographic rank among the vertices of the same level.
    pub fn index(&self) -> usize {
        letters_index(self.degree(), &self.letters)
    }

    pub fn prefix(&self, len: usize) -> Vertex {
        Vertex {
            degree: self.degree,
            letters: self.letters[..len.min(self.letters.len())].to_vec(),
        }
    }

    pub fn concat(&self, other: &Vertex) -> Vertex {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Vertex {
            degree: self.degree,
            letters,
        }
    }

    pub fn split_first(&self) -> Option<(u8, Vertex)> {
        self.letters.split_first().map(|(&head, tail)| {
            (
                head,
                Vertex {
                    degree: self.degree,
                    letters: tail.to_vec(),
                },
            )
        })
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_letters(&self.letters))
    }
}

pub(crate) fn letters_index(degree: usize, letters: &[u8]) -> usize {
    letters
        .iter()
        .fold(0usize, |acc, &l| acc * degree + (l as usize - 1))
}

fn render_letters(letters: &[u8]) -> String {
    if letters.is_empty() {
        "-".to_string()
    } else {
        letters.iter().map(|l| char::from(b'0' + l)).collect()
    }
}

/// All `d^n` vertices of level `n` in lexicographic order.
pub fn vertices_at_level(degree: usize, level: usize, cap: usize) -> Result<Vec<Vertex>> {
    if !(2..=MAX_DEGREE).contains(&degree) {
        return Err(Error::DegreeOutOfRange { degree });
    }
    let size = level_size(degree, level, cap)?;
    Ok((0..size)
        .map(|i| Vertex::from_index(degree, level, i))
        .collect())
}

/// An eventually periodic ray: a finite head followed by a repeated tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ray {
    head: Vertex,
    tail: Vec<u8>,
}

impl Ray {
    pub fn new(head: Vertex, tail: Vec<u8>) -> Result<Self> {
        let degree = head.degree();
        if tail.is_empty() {
            return Err(Error::InvalidRay {
                text: head.to_string(),
                message: "periodic tail must be nonempty".into(),
            });
        }
        if tail.iter().any(|&l| l == 0 || l as usize > degree) {
            return Err(Error::InvalidRay {
                text: render_letters(&tail),
                message: format!("tail letters must lie in 1..={degree}"),
            });
        }
        Ok(Ray { head, tail })
    }

    /// The rightmost ray `ddd…`.
    pub fn constant(degree: usize) -> Self {
        Ray {
            head: Vertex::root(degree),
            tail: vec![degree as u8],
        }
    }

    /// Parses `dinf` / `d^inf` (the all-`d` ray), `HEAD(TAIL)`, or a plain
    /// digit string which is taken as the periodic tail.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        let bad = |message: &str| Error::InvalidRay {
            text: text.to_string(),
            message: message.to_string(),
        };
        if matches!(text, "dinf" | "d^inf" | "") {
            return Ok(Ray::constant(degree));
        }
        let (head, tail) = match text.find('(') {
            Some(open) => {
                let inner = text[open + 1..]
                    .strip_suffix(')')
                    .ok_or_else(|| bad("missing closing parenthesis"))?;
                (&text[..open], inner)
            }
            None => ("", text),
        };
        let head = if head.is_empty() {
            Vertex::root(degree)
        } else {
            Vertex::parse(degree, head).map_err(|_| bad("head must be digits in 1..=d"))?
        };
        let tail = Vertex::parse(degree, tail).map_err(|_| bad("tail must be digits in 1..=d"))?;
        Ray::new(head, tail.letters().to_vec())
    }

    pub fn degree(&self) -> usize {
        self.head.degree()
    }

    pub fn head(&self) -> &Vertex {
        &self.head
    }

    pub fn tail(&self) -> &[u8] {
        &self.tail
    }

    /// `e_1 … e_n`.
    pub fn prefix(&self, n: usize) -> Vertex {
        let head = self.head.letters();
        let letters = (0..n)
            .map(|i| {
                if i < head.len() {
                    head[i]
                } else {
                    self.tail[(i - head.len()) % self.tail.len()]
                }
            })
            .collect();
        Vertex {
            degree: self.head.degree,
            letters,
        }
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.head.is_root() {
            write!(f, "{}", self.head)?;
        }
        write!(f, "({})", render_letters(&self.tail))
    }
}

/// `ray.prefix(n)`.
pub fn ray_prefix(ray: &Ray, n: usize) -> Vertex {
    ray.prefix(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn strings(vs: &[Vertex]) -> Vec<String> {
        vs.iter().map(|v| v.to_string()).collect()
    }

    #[test]
    fn level_zero_is_root() {
        let vs = vertices_at_level(2, 0, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(strings(&vs), ["-"]);
        assert!(vs[0].is_root());
    }

    #[test]
    fn binary_level_two() {
        let vs = vertices_at_level(2, 2, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(strings(&vs), ["11", "12", "21", "22"]);
    }

    #[test]
    fn ternary_level_two() {
        let vs = vertices_at_level(3, 2, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(vs.len(), 9);
        assert_eq!(strings(&vs[..4]), ["11", "12", "13", "21"]);
    }

    #[test]
    fn cap_names_point_count() {
        let err = vertices_at_level(2, 21, DEFAULT_POINT_CAP).unwrap_err();
        match err {
            Error::SizeCap { requested, .. } => assert_eq!(requested, 1 << 21),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ray_prefixes() {
        let constant = Ray::constant(2);
        assert_eq!(constant.prefix(3).to_string(), "222");
        assert!(constant.prefix(0).is_root());
        let ray = Ray::new(Vertex::parse(3, "13").unwrap(), vec![2]).unwrap();
        assert_eq!(ray_prefix(&ray, 4).to_string(), "1322");
        assert_eq!(ray.prefix(1).to_string(), "1");
    }

    #[test]
    fn ray_parsing() {
        assert_eq!(Ray::parse(3, "dinf").unwrap(), Ray::constant(3));
        assert_eq!(Ray::parse(3, "d^inf").unwrap(), Ray::constant(3));
        assert_eq!(
            Ray::parse(3, "13(2)").unwrap().prefix(5).to_string(),
            "13222"
        );
        assert_eq!(Ray::parse(3, "12").unwrap().prefix(5).to_string(), "12121");
        assert!(Ray::parse(2, "3").is_err());
        assert!(Ray::parse(2, "1(").is_err());
        assert!(Ray::parse(2, "1()").is_err());
    }

    #[test]
    fn vertex_parsing_rejects_bad_letters() {
        assert!(Vertex::parse(2, "13").is_err());
        assert!(Vertex::parse(2, "1x").is_err());
        assert!(Vertex::parse(10, "1").is_err());
        assert_eq!(Vertex::parse(2, "-").unwrap(), Vertex::root(2));
    }

    proptest! {
        #[test]
        fn index_round_trips(d in 2usize..=4, n in 0usize..=6) {
            let vs = vertices_at_level(d, n, DEFAULT_POINT_CAP).unwrap();
            prop_assert_eq!(vs.len(), d.pow(n as u32));
            for (i, v) in vs.iter().enumerate() {
                prop_assert_eq!(v.index(), i);
                prop_assert_eq!(&Vertex::from_index(d, n, i), v);
            }
        }

        #[test]
        fn prefixes_extend(head in proptest::collection::vec(1u8..=3, 0..4),
                           tail in proptest::collection::vec(1u8..=3, 1..4),
                           n in 0usize..12) {
            let ray = Ray::new(Vertex::new(3, head).unwrap(), tail).unwrap();
            let short = ray.prefix(n);
            let long = ray.prefix(n + 1);
            prop_assert_eq!(long.prefix(n), short);
        }
    }
}
