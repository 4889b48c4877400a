// SPDX-License-Identifier: Apache-2.0

//! The recursive action of words on the tree.
//!
//! A generator `g` acts on a vertex `iτ` as `g(iτ) = π_g(i) · g|_i(τ)`. For a
//! product the sections follow the cocycle rule `(gh)|_σ = g|_{h(σ)} · h|_σ`
//! and an inverse letter uses `(g⁻¹)|_σ = (g|_{g⁻¹(σ)})⁻¹`.
//!
//! Two independent routes are provided. [`act`] and [`section`] walk a single
//! vertex letter by letter, carrying the current section word. [`LevelAction`]
//! tabulates every generator as a permutation of a whole level, built bottom
//! up from the tables of the level below; words are then evaluated by table
//! lookups.

use num_bigint::BigUint;

use super::presentation::WreathPresentation;
use super::word::{Letter, Word};
use crate::error::Result;
use crate::perm::Permutation;
use crate::tree::{level_size, Vertex};

/// Image of the first letter (0-based) under `w`, and the section of `w`
/// at that letter, reduced.
pub fn first_letter_step(pres: &WreathPresentation, w: &Word, letter: usize) -> (usize, Word) {
    let mut point = letter;
    let mut pieces: Vec<Letter> = Vec::new();
    // pieces are gathered right to left and reversed at the end
    for l in w.letters().iter().rev() {
        let rule = pres.rule(l.generator);
        if l.inverse {
            let pre = rule.root_inverse().apply(point);
            pieces.extend(rule.sections()[pre].letters().iter().map(|x| x.inverted()));
            point = pre;
        } else {
            pieces.extend(rule.sections()[point].letters().iter().rev().copied());
            point = rule.root_perm().apply(point);
        }
    }
    pieces.reverse();
    (point, pres.reduce(&Word::from_letters(pieces)))
}

/// `w(v)`.
pub fn act(pres: &WreathPresentation, w: &Word, v: &Vertex) -> Vertex {
    debug_assert_eq!(v.degree(), pres.degree());
    let mut current = pres.reduce(w);
    let mut out = Vec::with_capacity(v.level());
    let letters = v.letters();
    for (pos, &x) in letters.iter().enumerate() {
        if current.is_empty() {
            out.extend_from_slice(&letters[pos..]);
            break;
        }
        let (image, next) = first_letter_step(pres, &current, x as usize - 1);
        out.push(image as u8 + 1);
        current = next;
    }
    Vertex::new(pres.degree(), out).expect("images stay in the alphabet")
}

/// `w|_v`, reduced.
pub fn section(pres: &WreathPresentation, w: &Word, v: &Vertex) -> Word {
    debug_assert_eq!(v.degree(), pres.degree());
    let mut current = pres.reduce(w);
    for &x in v.letters() {
        if current.is_empty() {
            break;
        }
        current = first_letter_step(pres, &current, x as usize - 1).1;
    }
    current
}

/// The permutation of level 1 induced by `w`.
pub fn root_permutation(pres: &WreathPresentation, w: &Word) -> Permutation {
    let images = (0..pres.degree())
        .map(|i| {
            let mut point = i;
            for l in w.letters().iter().rev() {
                let rule = pres.rule(l.generator);
                point = if l.inverse {
                    rule.root_inverse().apply(point)
                } else {
                    rule.root_perm().apply(point)
                };
            }
            point as u32
        })
        .collect();
    Permutation::from_images_unchecked(images)
}

/// Generator permutations of one level, in canonical vertex indexing.
#[derive(Debug, Clone)]
pub struct LevelAction {
    degree: usize,
    level: usize,
    size: usize,
    forward: Vec<Permutation>,
    backward: Vec<Permutation>,
}

impl LevelAction {
    pub fn new(pres: &WreathPresentation, level: usize, cap: usize) -> Result<Self> {
        let degree = pres.degree();
        let size = level_size(degree, level, cap)?;
        let gens = pres.generator_count();
        let mut tables = LevelAction {
            degree,
            level: 0,
            size: 1,
            forward: vec![Permutation::identity(1); gens],
            backward: vec![Permutation::identity(1); gens],
        };
        for k in 1..=level {
            let block = tables.size;
            let mut forward = Vec::with_capacity(gens);
            for rule in pres.rules() {
                let below: Vec<Permutation> = rule
                    .sections()
                    .iter()
                    .map(|w| tables.word_permutation(w))
                    .collect();
                let mut images = vec![0u32; block * degree];
                for i in 0..degree {
                    let target = rule.root_perm().apply(i) * block;
                    for t in 0..block {
                        images[i * block + t] = (target + below[i].apply(t)) as u32;
                    }
                }
                forward.push(Permutation::from_images_unchecked(images));
            }
            let backward = forward.iter().map(Permutation::inverse).collect();
            tables = LevelAction {
                degree,
                level: k,
                size: block * degree,
                forward,
                backward,
            };
        }
        debug_assert_eq!(tables.size, size);
        Ok(tables)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Number of points, `d^n`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn generator_count(&self) -> usize {
        self.forward.len()
    }

    pub fn generator(&self, g: usize) -> &Permutation {
        &self.forward[g]
    }

    pub fn generator_inverse(&self, g: usize) -> &Permutation {
        &self.backward[g]
    }

    #[inline]
    pub fn apply_letter(&self, letter: Letter, point: usize) -> usize {
        if letter.inverse {
            self.backward[letter.generator].apply(point)
        } else {
            self.forward[letter.generator].apply(point)
        }
    }

    pub fn apply_word(&self, w: &Word, point: usize) -> usize {
        w.letters()
            .iter()
            .rev()
            .fold(point, |p, &l| self.apply_letter(l, p))
    }

    pub fn word_permutation(&self, w: &Word) -> Permutation {
        let mut images: Vec<u32> = (0..self.size as u32).collect();
        for &l in w.letters().iter().rev() {
            let table = if l.inverse {
                &self.backward[l.generator]
            } else {
                &self.forward[l.generator]
            };
            for x in images.iter_mut() {
                *x = table.apply(*x as usize) as u32;
            }
        }
        Permutation::from_images_unchecked(images)
    }
}

/// The image of `w` in the level-`n` quotient.
pub fn level_permutation(
    pres: &WreathPresentation,
    w: &Word,
    level: usize,
    cap: usize,
) -> Result<Permutation> {
    Ok(LevelAction::new(pres, level, cap)?.word_permutation(w))
}

pub fn is_trivial_at_level(
    pres: &WreathPresentation,
    w: &Word,
    level: usize,
    cap: usize,
) -> Result<bool> {
    Ok(level_permutation(pres, w, level, cap)?.is_identity())
}

pub fn order_at_level(
    pres: &WreathPresentation,
    w: &Word,
    level: usize,
    cap: usize,
) -> Result<BigUint> {
    Ok(level_permutation(pres, w, level, cap)?.order())
}

/// Root permutations of the sections of a word down to a fixed depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Portrait {
    pub vertex: Vertex,
    pub root_perm: Permutation,
    pub children: Vec<Portrait>,
    /// Present exactly on the nodes at the requested depth.
    pub word: Option<Word>,
}

impl Portrait {
    /// Depth-first traversal, parents before children.
    pub fn nodes(&self) -> Vec<&Portrait> {
        let mut out = vec![self];
        for c in &self.children {
            out.extend(c.nodes());
        }
        out
    }
}

pub fn portrait(pres: &WreathPresentation, w: &Word, depth: usize) -> Portrait {
    fn build(pres: &WreathPresentation, w: Word, at: Vertex, depth: usize) -> Portrait {
        let root_perm = root_permutation(pres, &w);
        if depth == 0 {
            return Portrait {
                vertex: at,
                root_perm,
                children: Vec::new(),
                word: Some(w),
            };
        }
        let children = (0..pres.degree())
            .map(|i| {
                let child = at.concat(&Vertex::new(pres.degree(), vec![i as u8 + 1]).unwrap());
                build(pres, first_letter_step(pres, &w, i).1, child, depth - 1)
            })
            .collect();
        Portrait {
            vertex: at,
            root_perm,
            children,
            word: None,
        }
    }
    build(pres, pres.reduce(w), Vertex::root(pres.degree()), depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::tree::{vertices_at_level, DEFAULT_POINT_CAP};

    fn grig() -> WreathPresentation {
        builtin("grigorchuk").unwrap().presentation
    }

    fn v(d: usize, s: &str) -> Vertex {
        Vertex::parse(d, s).unwrap()
    }

    #[test]
    fn act_examples() {
        let p = grig();
        let a = p.parse_word("a").unwrap();
        let b = p.parse_word("b").unwrap();
        assert_eq!(act(&p, &a, &v(2, "12")).to_string(), "22");
        assert_eq!(act(&p, &b, &v(2, "12")).to_string(), "11");
        assert_eq!(act(&p, &Word::empty(), &v(2, "2121")).to_string(), "2121");
    }

    #[test]
    fn section_examples() {
        let p = grig();
        let b = p.parse_word("b").unwrap();
        assert_eq!(p.render_word(&section(&p, &b, &v(2, "2"))), "c");
        assert_eq!(p.render_word(&section(&p, &b, &v(2, "22"))), "d");
        let gs = builtin("gupta-sidki").unwrap().presentation;
        let t = gs.parse_word("t").unwrap();
        assert_eq!(gs.render_word(&section(&gs, &t, &v(3, "2"))), "a^-1");
    }

    #[test]
    fn level_permutation_examples() {
        let p = grig();
        let a = level_permutation(&p, &p.parse_word("a").unwrap(), 1, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(a.to_string(), "(1 2)");
        let d = level_permutation(&p, &p.parse_word("d").unwrap(), 1, DEFAULT_POINT_CAP).unwrap();
        assert!(d.is_identity());
        let gamma = builtin("gamma").unwrap().presentation;
        let a3 = level_permutation(
            &gamma,
            &gamma.parse_word("a").unwrap(),
            1,
            DEFAULT_POINT_CAP,
        )
        .unwrap();
        assert_eq!(a3.to_string(), "(1 2 3)");
    }

    /// Brute force: evaluate `w` on every vertex through the section walk.
    fn moves_some_vertex(p: &WreathPresentation, w: &Word, n: usize) -> bool {
        vertices_at_level(p.degree(), n, DEFAULT_POINT_CAP)
            .unwrap()
            .iter()
            .any(|x| act(p, w, x) != *x)
    }

    #[test]
    fn triviality_examples() {
        let p = grig();
        let dd = p.parse_word("d d").unwrap();
        let d = p.parse_word("d").unwrap();
        assert!(is_trivial_at_level(&p, &dd, 5, DEFAULT_POINT_CAP).unwrap());
        assert!(is_trivial_at_level(&p, &d, 1, DEFAULT_POINT_CAP).unwrap());
        // d = (1, b) and b fixes level 1, so d only starts moving vertices at
        // level 3 (d(211) = 212).
        assert!(!moves_some_vertex(&p, &d, 2));
        assert!(moves_some_vertex(&p, &d, 3));
        assert!(is_trivial_at_level(&p, &d, 2, DEFAULT_POINT_CAP).unwrap());
        assert!(!is_trivial_at_level(&p, &d, 3, DEFAULT_POINT_CAP).unwrap());
        assert_eq!(act(&p, &d, &v(2, "211")).to_string(), "212");
    }

    /// Brute force: smallest k with w^k fixing every vertex, by the section walk.
    fn brute_order(p: &WreathPresentation, w: &Word, n: usize) -> u64 {
        let verts = vertices_at_level(p.degree(), n, DEFAULT_POINT_CAP).unwrap();
        let mut images = verts.clone();
        for k in 1.. {
            images = images.iter().map(|x| act(p, w, x)).collect();
            if images == verts {
                return k;
            }
        }
        unreachable!()
    }

    #[test]
    fn order_examples() {
        let p = grig();
        let a = p.parse_word("a").unwrap();
        let ab = p.parse_word("a b").unwrap();
        assert_eq!(
            order_at_level(&p, &a, 3, DEFAULT_POINT_CAP).unwrap(),
            BigUint::from(2u32)
        );
        assert_eq!(
            order_at_level(&p, &Word::empty(), 4, DEFAULT_POINT_CAP).unwrap(),
            BigUint::from(1u32)
        );
        // (ab)² = (ca, ac), (ac)² = (da, ad), (ad)² = (b, b): ab reaches its
        // full order 16 only from level 5 on
        assert_eq!(brute_order(&p, &ab, 4), 8);
        assert_eq!(brute_order(&p, &ab, 5), 16);
        assert_eq!(
            order_at_level(&p, &ab, 4, DEFAULT_POINT_CAP).unwrap(),
            BigUint::from(8u32)
        );
        assert_eq!(
            order_at_level(&p, &ab, 5, DEFAULT_POINT_CAP).unwrap(),
            BigUint::from(16u32)
        );
        assert_eq!(
            order_at_level(&p, &ab, 9, DEFAULT_POINT_CAP).unwrap(),
            BigUint::from(16u32)
        );
    }

    #[test]
    fn portrait_examples() {
        let p = grig();
        let d = portrait(&p, &p.parse_word("d").unwrap(), 1);
        assert!(d.root_perm.is_identity());
        assert_eq!(d.children.len(), 2);
        assert_eq!(p.render_word(d.children[0].word.as_ref().unwrap()), "e");
        assert_eq!(p.render_word(d.children[1].word.as_ref().unwrap()), "b");

        let a = portrait(&p, &p.parse_word("a").unwrap(), 1);
        assert_eq!(a.root_perm.to_string(), "(1 2)");
        assert!(a
            .children
            .iter()
            .all(|c| c.word.as_ref().unwrap().is_empty()));

        let gb = builtin("gamma-bar").unwrap().presentation;
        let s = portrait(&gb, &gb.parse_word("s").unwrap(), 1);
        assert!(s.root_perm.is_identity());
        let leaves: Vec<String> = s
            .children
            .iter()
            .map(|c| gb.render_word(c.word.as_ref().unwrap()))
            .collect();
        assert_eq!(leaves, ["a", "a", "s"]);

        let e = portrait(&p, &Word::empty(), 3);
        assert!(e.nodes().iter().all(|n| n.root_perm.is_identity()));
        assert_eq!(e.nodes().len(), 1 + 2 + 4 + 8);
    }

    #[test]
    fn cap_is_enforced() {
        let p = grig();
        assert!(LevelAction::new(&p, 11, 1024).is_err());
        assert!(LevelAction::new(&p, 10, 1024).is_ok());
    }
}
