// SPDX-License-Identifier: Apache-2.0

//! Built-in groups: the first Grigorchuk group, its overgroup with `b̃, c̃, d̃`,
//! the ternary groups `Γ = ⟨a, r⟩`, `Γ̄ = ⟨a, s⟩` and the Gupta–Sidki group
//! `⟨a, t⟩`. Each entry carries the rightmost ray as its default and the
//! expected degrees of the level-`n` quasi-regular decomposition.

use crate::error::{Error, Result};
use crate::tree::Ray;
use crate::wreath::WreathPresentation;

pub const KEYS: [&str; 5] = [
    "grigorchuk",
    "grigorchuk-tilde",
    "gamma",
    "gamma-bar",
    "gupta-sidki",
];

const GRIGORCHUK: &str = "\
degree: 2
involutions: a, b, c, d
gen a = perm (1 2) | e, e
gen b = perm () | a, c
gen c = perm () | a, d
gen d = perm () | e, b
";

const GRIGORCHUK_TILDE: &str = "\
degree: 2
involutions: a, bt, ct, dt
gen a = perm (1 2) | e, e
gen bt = perm () | a, ct
gen ct = perm () | e, dt
gen dt = perm () | e, bt
";

const GAMMA: &str = "\
degree: 3
gen a = perm (1 2 3) | e, e, e
gen r = perm () | a, e, r
";

const GAMMA_BAR: &str = "\
degree: 3
gen a = perm (1 2 3) | e, e, e
gen s = perm () | a, a, s
";

const GUPTA_SIDKI: &str = "\
degree: 3
gen a = perm (1 2 3) | e, e, e
gen t = perm () | a, a^-1, t
";

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub presentation: WreathPresentation,
    pub default_ray: Ray,
}

impl CatalogEntry {
    pub fn degree(&self) -> usize {
        self.presentation.degree()
    }

    /// `n + 1` for binary entries, `2n + 1` for ternary ones.
    pub fn expected_rank(&self, n: usize) -> usize {
        (self.degree() - 1) * n + 1
    }

    /// Sorted degrees: `d - 1` ones plus one more, then `d - 1` copies of
    /// `d^i` for `1 ≤ i ≤ n - 1`. At `n = 0` only the trivial component.
    pub fn expected_degrees(&self, n: usize) -> Vec<u64> {
        let d = self.degree() as u64;
        if n == 0 {
            return vec![1];
        }
        let mut out = vec![1; self.degree()];
        for i in 1..n {
            for _ in 0..self.degree() - 1 {
                out.push(d.pow(i as u32));
            }
        }
        out
    }

    pub fn source_text(&self) -> &'static str {
        source(self.key).expect("catalog keys have sources")
    }
}

fn source(key: &str) -> Option<&'static str> {
    Some(match key {
        "grigorchuk" => GRIGORCHUK,
        "grigorchuk-tilde" => GRIGORCHUK_TILDE,
        "gamma" => GAMMA,
        "gamma-bar" => GAMMA_BAR,
        "gupta-sidki" => GUPTA_SIDKI,
        _ => return None,
    })
}

pub fn builtin(key: &str) -> Result<CatalogEntry> {
    let text = source(key).ok_or_else(|| Error::UnknownGroup {
        key: key.to_string(),
    })?;
    let key = KEYS.iter().copied().find(|k| *k == key).unwrap();
    let presentation = WreathPresentation::parse(text)?;
    let default_ray = Ray::constant(presentation.degree());
    Ok(CatalogEntry {
        key,
        presentation,
        default_ray,
    })
}

pub fn all() -> Vec<CatalogEntry> {
    KEYS.iter().map(|k| builtin(k).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{Vertex, DEFAULT_POINT_CAP};
    use crate::wreath::{level_permutation, section};

    #[test]
    fn all_entries_parse() {
        let entries = all();
        assert_eq!(entries.len(), 5);
        for e in &entries {
            assert_eq!(e.presentation.to_string(), e.source_text());
        }
        assert!(matches!(
            builtin("lamplighter"),
            Err(Error::UnknownGroup { .. })
        ));
    }

    #[test]
    fn gupta_sidki_section() {
        let gs = builtin("gupta-sidki").unwrap().presentation;
        let t = gs.parse_word("t").unwrap();
        let sec = section(&gs, &t, &Vertex::parse(3, "2").unwrap());
        assert_eq!(gs.render_word(&sec), "a^-1");
    }

    #[test]
    fn expected_degree_examples() {
        assert_eq!(builtin("grigorchuk").unwrap().expected_degrees(1), [1, 1]);
        assert_eq!(
            builtin("gamma").unwrap().expected_degrees(2),
            [1, 1, 1, 3, 3]
        );
        assert_eq!(
            builtin("grigorchuk").unwrap().expected_degrees(5),
            [1, 1, 2, 4, 8, 16]
        );
    }

    #[test]
    fn rank_and_degrees_agree() {
        for e in all() {
            for n in 1..=4 {
                let degs = e.expected_degrees(n);
                assert_eq!(degs.len(), e.expected_rank(n));
                assert_eq!(degs.iter().sum::<u64>(), (e.degree() as u64).pow(n as u32));
            }
        }
    }

    #[test]
    fn involutions_only_for_binary_entries() {
        for e in all() {
            let p = &e.presentation;
            let any = (0..p.generator_count()).any(|g| p.is_involutive(g));
            assert_eq!(any, e.degree() == 2, "{}", e.key);
        }
    }

    #[test]
    fn tilde_group_contains_grigorchuk() {
        let g = builtin("grigorchuk").unwrap().presentation;
        let gt = builtin("grigorchuk-tilde").unwrap().presentation;
        // d̃b̃ = (a, b̃c̃), b̃c̃ = (a, c̃d̃), c̃d̃ = (1, d̃b̃) mirror b, c, d
        let pairs = [("a", "a"), ("b", "dt bt"), ("c", "bt ct"), ("d", "ct dt")];
        for n in 0..=5 {
            for (x, y) in pairs {
                let lhs =
                    level_permutation(&g, &g.parse_word(x).unwrap(), n, DEFAULT_POINT_CAP).unwrap();
                let rhs = level_permutation(&gt, &gt.parse_word(y).unwrap(), n, DEFAULT_POINT_CAP)
                    .unwrap();
                assert_eq!(lhs, rhs, "{x} vs {y} at level {n}");
            }
        }
    }
}
