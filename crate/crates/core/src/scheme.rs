// SPDX-License-Identifier: Apache-2.0

//! The orbital association scheme of `(G_n, P_n)`.
//!
//! Ordered pairs of level vertices are split into `G`-orbits (orbitals). The
//! orbital of `(x, y)` is named after the suborbit containing `u_x⁻¹(y)`, so
//! class `i` corresponds to the double coset `P_n g P_n` with `g(ω)` in block
//! `i`. The intersection numbers `p[i][j][k]` are the structure constants of
//! the Hecke algebra in the basis of double cosets; everything here is exact
//! integer arithmetic.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::level::{ParabolicLevel, MATERIALIZE_LIMIT};
use crate::tree::Ray;
use crate::wreath::WreathPresentation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitalScheme {
    points: usize,
    rank: usize,
    valencies: Vec<u64>,
    pairing: Vec<usize>,
    #[serde(rename = "p")]
    intersection: Vec<Vec<Vec<u64>>>,
}

impl OrbitalScheme {
    /// Wraps raw scheme data without checking it; see
    /// [`verify_scheme_axioms`].
    pub fn from_parts(
        points: usize,
        valencies: Vec<u64>,
        pairing: Vec<usize>,
        intersection: Vec<Vec<Vec<u64>>>,
    ) -> Self {
        OrbitalScheme {
            points,
            rank: valencies.len(),
            valencies,
            pairing,
            intersection,
        }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn valencies(&self) -> &[u64] {
        &self.valencies
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// `p[i][j][k]`.
    #[inline]
    pub fn p(&self, i: usize, j: usize, k: usize) -> u64 {
        self.intersection[i][j][k]
    }

    pub fn intersection_numbers(&self) -> &[Vec<Vec<u64>>] {
        &self.intersection
    }

    pub fn intersection_numbers_mut(&mut self) -> &mut Vec<Vec<Vec<u64>>> {
        &mut self.intersection
    }
}

/// A scheme together with the level data it was computed from.
#[derive(Debug, Clone)]
pub struct OrbitalStructure {
    parabolic: ParabolicLevel,
    labels: Option<Vec<u32>>,
    scheme: OrbitalScheme,
}

impl OrbitalStructure {
    pub fn build(pres: &WreathPresentation, level: usize, ray: &Ray, cap: usize) -> Result<Self> {
        Self::from_parabolic(ParabolicLevel::new(pres, level, ray, cap)?)
    }

    pub fn from_parabolic(parabolic: ParabolicLevel) -> Result<Self> {
        let size = parabolic.point_count();
        let labels = (size <= MATERIALIZE_LIMIT).then(|| {
            let sub = parabolic.suborbits();
            let mut table = vec![0u32; size * size];
            table.par_chunks_mut(size).enumerate().for_each(|(x, row)| {
                match parabolic.rep_permutation(x) {
                    Some(rep) => {
                        // row x is block_of(u_x⁻¹(y)); invert u_x by scattering
                        for (z, &y) in rep.images().iter().enumerate() {
                            row[y as usize] = sub.block_of(z) as u32;
                        }
                    }
                    None => {
                        for (y, slot) in row.iter_mut().enumerate() {
                            *slot = sub.block_of(parabolic.rep_inverse_apply(x, y)) as u32;
                        }
                    }
                }
            });
            table
        });
        let mut structure = OrbitalStructure {
            parabolic,
            labels,
            scheme: OrbitalScheme::from_parts(0, Vec::new(), Vec::new(), Vec::new()),
        };
        structure.scheme = structure.count();
        let report = verify_scheme_axioms(&structure.scheme);
        if !report.is_empty() {
            return Err(Error::Integrity(format!(
                "computed scheme violates {}",
                report[0]
            )));
        }
        Ok(structure)
    }

    pub fn parabolic(&self) -> &ParabolicLevel {
        &self.parabolic
    }

    pub fn scheme(&self) -> &OrbitalScheme {
        &self.scheme
    }

    pub fn into_scheme(self) -> OrbitalScheme {
        self.scheme
    }

    pub fn point_count(&self) -> usize {
        self.parabolic.point_count()
    }

    /// Class of the ordered pair `(x, y)`.
    #[inline]
    pub fn label(&self, x: usize, y: usize) -> usize {
        match &self.labels {
            Some(t) => t[x * self.point_count() + y] as usize,
            None => self
                .parabolic
                .suborbits()
                .block_of(self.parabolic.rep_inverse_apply(x, y)),
        }
    }

    /// Column `k` of the intersection numbers, counted over the pair `(x, y)`
    /// which must lie in class `k`: `counts[i][j] = #{z : label(x,z)=i, label(z,y)=j}`.
    pub fn count_through(&self, x: usize, y: usize) -> Vec<Vec<u64>> {
        let r = self.parabolic.suborbits().block_count();
        let mut counts = vec![vec![0u64; r]; r];
        for z in 0..self.point_count() {
            counts[self.label(x, z)][self.label(z, y)] += 1;
        }
        counts
    }

    fn count(&self) -> OrbitalScheme {
        let sub = self.parabolic.suborbits();
        let r = sub.block_count();
        let base = sub.base_index();
        let columns: Vec<Vec<Vec<u64>>> = (0..r)
            .into_par_iter()
            .map(|k| self.count_through(base, sub.blocks()[k][0]))
            .collect();
        let intersection = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| (0..r).map(|k| columns[k][i][j]).collect())
                    .collect()
            })
            .collect();
        let valencies = sub.sizes().into_iter().map(|s| s as u64).collect();
        let pairing = (0..r)
            .map(|i| self.label(sub.blocks()[i][0], base))
            .collect();
        OrbitalScheme::from_parts(self.point_count(), valencies, pairing, intersection)
    }
}

pub fn build_scheme(
    pres: &WreathPresentation,
    level: usize,
    ray: &Ray,
    cap: usize,
) -> Result<OrbitalScheme> {
    Ok(OrbitalStructure::build(pres, level, ray, cap)?.scheme)
}

/// True iff `p[i][j][k] = p[j][i][k]` everywhere, i.e. the Hecke algebra is
/// commutative and `(G_n, P_n)` is a Gelfand pair.
pub fn is_commutative(scheme: &OrbitalScheme) -> bool {
    let r = scheme.rank();
    (0..r).all(|i| (0..i).all(|j| (0..r).all(|k| scheme.p(i, j, k) == scheme.p(j, i, k))))
}

/// Number of double cosets, the dimension of the Hecke algebra.
pub fn hecke_dimension(scheme: &OrbitalScheme) -> usize {
    scheme.rank()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub identity: &'static str,
    pub indices: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at {:?}: {}",
            self.identity, self.indices, self.detail
        )
    }
}

pub const AXIOM_SHAPE: &str = "p is r×r×r with r valencies and r pairings";
pub const AXIOM_TRIVIAL_VALENCY: &str = "k_0 = 1";
pub const AXIOM_VALENCY_SUM: &str = "Σ_i k_i = N";
pub const AXIOM_IDENTITY_CLASS: &str = "p[i][0][k] = δ_ik";
pub const AXIOM_ROW_SUM: &str = "Σ_j p[i][j][k] = k_i";
pub const AXIOM_VALENCY_PRODUCT: &str = "k_i·k_j = Σ_k p[i][j][k]·k_k";
pub const AXIOM_PAIRED_VALENCY: &str = "k_{i*} = k_i";
pub const AXIOM_PAIRING_INVOLUTION: &str = "pairing is an involution with 0* = 0";

const MAX_REPORTED: usize = 10;

/// The first violations of the scheme identities, empty when all hold.
pub fn verify_scheme_axioms(scheme: &OrbitalScheme) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    let r = scheme.rank();
    let k = scheme.valencies();
    let shape_ok = scheme.pairing().len() == r
        && scheme.intersection_numbers().len() == r
        && scheme
            .intersection_numbers()
            .iter()
            .all(|row| row.len() == r && row.iter().all(|c| c.len() == r));
    if !shape_ok || r == 0 {
        out.push(AxiomViolation {
            identity: AXIOM_SHAPE,
            indices: vec![],
            detail: format!("rank {r}"),
        });
        return out;
    }
    let mut report = |identity, indices: Vec<usize>, detail: String| {
        if out.len() < MAX_REPORTED {
            out.push(AxiomViolation {
                identity,
                indices,
                detail,
            });
        }
    };

    if k[0] != 1 {
        report(AXIOM_TRIVIAL_VALENCY, vec![0], format!("k_0 = {}", k[0]));
    }
    let total: u64 = k.iter().sum();
    if total != scheme.points() as u64 {
        report(
            AXIOM_VALENCY_SUM,
            vec![],
            format!("{total} != {}", scheme.points()),
        );
    }
    for i in 0..r {
        for kk in 0..r {
            let want = u64::from(i == kk);
            if scheme.p(i, 0, kk) != want {
                report(
                    AXIOM_IDENTITY_CLASS,
                    vec![i, 0, kk],
                    format!("{} != {want}", scheme.p(i, 0, kk)),
                );
            }
        }
    }
    for i in 0..r {
        for kk in 0..r {
            let sum: u64 = (0..r).map(|j| scheme.p(i, j, kk)).sum();
            if sum != k[i] {
                report(AXIOM_ROW_SUM, vec![i, kk], format!("{sum} != {}", k[i]));
            }
        }
    }
    for i in 0..r {
        for j in 0..r {
            let sum: u64 = (0..r).map(|kk| scheme.p(i, j, kk) * k[kk]).sum();
            if sum != k[i] * k[j] {
                report(
                    AXIOM_VALENCY_PRODUCT,
                    vec![i, j],
                    format!("{sum} != {}", k[i] * k[j]),
                );
            }
        }
    }
    let pairing = scheme.pairing();
    if pairing[0] != 0 {
        report(
            AXIOM_PAIRING_INVOLUTION,
            vec![0],
            format!("0* = {}", pairing[0]),
        );
    }
    for i in 0..r {
        let star = pairing[i];
        if star >= r || pairing[star] != i {
            report(AXIOM_PAIRING_INVOLUTION, vec![i], format!("{i}* = {star}"));
            continue;
        }
        if k[star] != k[i] {
            report(
                AXIOM_PAIRED_VALENCY,
                vec![i, star],
                format!("{} != {}", k[star], k[i]),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::builtin;
    use crate::tree::DEFAULT_POINT_CAP;

    fn scheme_of(key: &str, n: usize) -> OrbitalScheme {
        let e = builtin(key).unwrap();
        build_scheme(&e.presentation, n, &e.default_ray, DEFAULT_POINT_CAP).unwrap()
    }

    #[test]
    fn two_point_scheme() {
        let s = scheme_of("grigorchuk", 1);
        assert_eq!(s.rank(), 2);
        assert_eq!(s.valencies(), [1, 1]);
        assert_eq!(s.p(1, 1, 0), 1);
        assert_eq!(s.p(1, 1, 1), 0);
        assert_eq!(s.pairing(), [0, 1]);
    }

    #[test]
    fn grigorchuk_level_two() {
        let s = scheme_of("grigorchuk", 2);
        assert_eq!(s.rank(), 3);
        // classes: {22}, {11, 12}, {21}
        assert_eq!(s.valencies(), [1, 2, 1]);
        assert!(is_commutative(&s));
    }

    #[test]
    fn cyclic_three_scheme() {
        let s = scheme_of("gupta-sidki", 1);
        assert_eq!(s.rank(), 3);
        assert_eq!(s.valencies(), [1, 1, 1]);
        // (3, 1) transposes to (1, 3) which lies in the class of 2
        assert_eq!(s.pairing(), [0, 2, 1]);
        assert!(is_commutative(&s));
        assert!(verify_scheme_axioms(&s).is_empty());
    }

    #[test]
    fn level_zero_scheme() {
        let s = scheme_of("gamma", 0);
        assert_eq!(s.rank(), 1);
        assert_eq!(hecke_dimension(&s), 1);
        assert!(is_commutative(&s));
        assert!(verify_scheme_axioms(&s).is_empty());
    }

    #[test]
    fn hecke_dimensions() {
        assert_eq!(hecke_dimension(&scheme_of("grigorchuk", 4)), 5);
        assert_eq!(hecke_dimension(&scheme_of("gamma-bar", 3)), 7);
    }

    /// Independent count over the full N×N×N triple set, ordered by z first.
    fn brute_intersections(st: &OrbitalStructure) -> Vec<Vec<Vec<u64>>> {
        let n = st.point_count();
        let r = st.scheme().rank();
        let mut totals = vec![vec![vec![0u64; r]; r]; r];
        let mut class_size = vec![0u64; r];
        for x in 0..n {
            for y in 0..n {
                class_size[st.label(x, y)] += 1;
            }
        }
        for z in 0..n {
            for x in 0..n {
                for y in 0..n {
                    totals[st.label(x, z)][st.label(z, y)][st.label(x, y)] += 1;
                }
            }
        }
        for row in totals.iter_mut() {
            for col in row.iter_mut() {
                for (k, v) in col.iter_mut().enumerate() {
                    assert_eq!(*v % class_size[k], 0);
                    *v /= class_size[k];
                }
            }
        }
        totals
    }

    #[test]
    fn grigorchuk_level_three_matches_brute_count() {
        let e = builtin("grigorchuk").unwrap();
        let st =
            OrbitalStructure::build(&e.presentation, 3, &e.default_ray, DEFAULT_POINT_CAP).unwrap();
        assert!(verify_scheme_axioms(st.scheme()).is_empty());
        assert_eq!(brute_intersections(&st), st.scheme().intersection_numbers());
        let g = builtin("gupta-sidki").unwrap();
        let st =
            OrbitalStructure::build(&g.presentation, 2, &g.default_ray, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(brute_intersections(&st), st.scheme().intersection_numbers());
    }

    #[test]
    fn perturbation_is_reported() {
        let mut s = scheme_of("grigorchuk", 3);
        s.intersection_numbers_mut()[1][1][0] += 1;
        let report = verify_scheme_axioms(&s);
        assert!(!report.is_empty());
        assert!(
            report.iter().any(|v| v.identity == AXIOM_ROW_SUM),
            "{report:?}"
        );
        assert!(report.len() <= 10);
    }

    #[test]
    fn labels_are_invariant_and_representative_free() {
        let e = builtin("gamma").unwrap();
        let st =
            OrbitalStructure::build(&e.presentation, 3, &e.default_ray, DEFAULT_POINT_CAP).unwrap();
        let action = st.parabolic().action();
        let n = st.point_count();
        for g in 0..action.generator_count() {
            let perm = action.generator(g);
            for x in 0..n {
                for y in 0..n {
                    assert_eq!(st.label(x, y), st.label(perm.apply(x), perm.apply(y)));
                }
            }
        }
        let s = st.scheme();
        for x in 0..n {
            for y in 0..n {
                let k = st.label(x, y);
                let counts = st.count_through(x, y);
                for i in 0..s.rank() {
                    for j in 0..s.rank() {
                        assert_eq!(counts[i][j], s.p(i, j, k));
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_shape() {
        // binary groups: every class self-paired; ternary: the classes of
        // 3^i 1 Σ* and 3^i 2 Σ* are swapped
        for key in crate::catalog::KEYS {
            let e = builtin(key).unwrap();
            for n in 1..=3 {
                let st =
                    OrbitalStructure::build(&e.presentation, n, &e.default_ray, DEFAULT_POINT_CAP)
                        .unwrap();
                let s = st.scheme();
                let sub = st.parabolic().suborbits();
                for i in 0..s.rank() {
                    let star = s.pairing()[i];
                    if e.degree() == 2 || i == 0 {
                        assert_eq!(star, i, "{key} n={n}");
                    } else {
                        let a = crate::tree::Vertex::from_index(3, n, sub.blocks()[i][0]);
                        let b = crate::tree::Vertex::from_index(3, n, sub.blocks()[star][0]);
                        let lead = a.letters().iter().take_while(|&&l| l == 3).count();
                        assert_eq!(lead, b.letters().iter().take_while(|&&l| l == 3).count());
                        assert_ne!(a.letters()[lead], b.letters()[lead], "{key} n={n}");
                    }
                }
            }
        }
    }
}
