// SPDX-License-Identifier: Apache-2.0

//! Dense permutations of `0..len`, stored as image arrays.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation {
            images: (0..len as u32).collect(),
        }
    }

    /// Returns `None` unless `images` is a bijection of `0..images.len()`.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen.get_mut(i as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_some());
        Permutation { images }
    }

    /// Builds a permutation of `0..len` from disjoint 0-based cycles.
    pub fn from_cycles(len: usize, cycles: &[Vec<usize>]) -> Option<Self> {
        let mut images: Vec<u32> = (0..len as u32).collect();
        let mut touched = vec![false; len];
        for cycle in cycles {
            for (k, &from) in cycle.iter().enumerate() {
                let to = cycle[(k + 1) % cycle.len()];
                if from >= len || to >= len || touched[from] {
                    return None;
                }
                touched[from] = true;
                images[from] = to as u32;
            }
        }
        Permutation::from_images(images)
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Self {
        Permutation {
            images: other
                .images
                .iter()
                .map(|&j| self.images[j as usize])
                .collect(),
        }
    }

    /// Nontrivial cycles, each starting at its least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.apply(start);
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.apply(next);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycles().iter().fold(BigUint::from(1u32), |acc, c| {
            acc.lcm(&BigUint::from(c.len()))
        })
    }
}

/// Cycle notation with 1-based points; the identity is `()`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (k, p) in cycle.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation() {
        let p = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        assert_eq!(p.to_string(), "(1 2 3)");
        assert_eq!(p.apply(2), 0);
        assert_eq!(Permutation::identity(4).to_string(), "()");
    }

    #[test]
    fn compose_applies_right_first() {
        let swap = Permutation::from_cycles(3, &[vec![0, 1]]).unwrap();
        let cyc = Permutation::from_cycles(3, &[vec![0, 1, 2]]).unwrap();
        // swap ∘ cyc : 0 -> 1 -> 0
        assert_eq!(swap.compose(&cyc).apply(0), 0);
        assert_eq!(cyc.compose(&swap).apply(0), 2);
        assert!(cyc.compose(&cyc.inverse()).is_identity());
    }

    #[test]
    fn order_is_lcm() {
        let p = Permutation::from_cycles(5, &[vec![0, 1], vec![2, 3, 4]]).unwrap();
        assert_eq!(p.order(), BigUint::from(6u32));
        assert_eq!(Permutation::identity(3).order(), BigUint::from(1u32));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_none());
        assert!(Permutation::from_images(vec![2, 0]).is_none());
        assert!(Permutation::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_none());
    }
}
