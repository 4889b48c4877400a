// SPDX-License-Identifier: Apache-2.0

//! Degrees of the irreducible components of the quasi-regular representation.
//!
//! When the orbital scheme is commutative, its intersection matrices
//! `B_i[k][j] = p[i][j][k]` form a commuting family whose common eigenvectors
//! are the characters of the Hecke algebra. The eigenvalue table `P` then
//! gives the multiplicities (component degrees) through
//! `m_j = N / Σ_i |P[j][i]|² / k_i`.
//!
//! The commuting check is exact; floating point enters only afterwards, on
//! `r × r` matrices. The dense `N × N` route lives in
//! [`dense_commutant_oracle`] as an independent check.

use std::cmp::Ordering;

use nalgebra::{DMatrix, Schur, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::level::{DEFAULT_PAIR_CAP, MATERIALIZE_LIMIT};
use crate::scheme::{is_commutative, OrbitalScheme, OrbitalStructure};
use crate::tree::Ray;
use crate::wreath::{LevelAction, WreathPresentation};

pub const DEFAULT_SEED: u64 = 0x5EED;

/// Relative gap below which two eigenvalues of the generic combination are
/// treated as one.
pub const CLUSTER_TOLERANCE: f64 = 1e-8;

/// Allowed distance of a computed multiplicity from the nearest integer.
pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;

/// Largest level size accepted by the dense oracle.
pub const DENSE_ORACLE_LIMIT: usize = 243;

const ATTEMPTS: usize = 5;
const SCHUR_ITERATIONS: usize = 10_000;

/// Square integer matrix, row major.
pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Debug, Clone)]
pub struct SpectralData {
    pub rank: usize,
    /// `eigenvalues[j][i]`: eigenvalue of class `i` on eigenspace `j`; row 0
    /// is the trivial eigenspace.
    pub eigenvalues: Vec<Vec<Complex64>>,
    pub multiplicities: Vec<u64>,
    pub tolerance_used: f64,
    /// Seed of the combination that separated the spectrum.
    pub seed_used: u64,
}

impl SpectralData {
    /// Largest entry of `|S S* - I|` with `S[j][i] = sqrt(m_j / (N k_i)) P[j][i]`.
    pub fn orthogonality_residual(&self, valencies: &[u64]) -> f64 {
        let n: u64 = valencies.iter().sum();
        let r = self.rank;
        let s: Vec<Vec<Complex64>> = (0..r)
            .map(|j| {
                (0..r)
                    .map(|i| {
                        let scale =
                            (self.multiplicities[j] as f64 / (n * valencies[i]) as f64).sqrt();
                        self.eigenvalues[j][i] * scale
                    })
                    .collect()
            })
            .collect();
        let mut worst: f64 = 0.0;
        for a in 0..r {
            for b in 0..r {
                let dot: Complex64 = (0..r).map(|i| s[a][i] * s[b][i].conj()).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).norm());
            }
        }
        worst
    }
}

/// `B_i[k][j] = p[i][j][k]`, checked to satisfy `B_i B_j = Σ_k p[i][j][k] B_k`.
pub fn intersection_matrices(scheme: &OrbitalScheme) -> Result<Vec<IntMatrix>> {
    let r = scheme.rank();
    let mats: Vec<IntMatrix> = (0..r)
        .map(|i| {
            (0..r)
                .map(|k| (0..r).map(|j| scheme.p(i, j, k) as i64).collect())
                .collect()
        })
        .collect();
    for i in 0..r {
        for j in 0..r {
            let product = mat_mul(&mats[i], &mats[j]);
            for a in 0..r {
                for b in 0..r {
                    let combo: i64 = (0..r)
                        .map(|k| scheme.p(i, j, k) as i64 * mats[k][a][b])
                        .sum();
                    if product[a][b] != combo {
                        return Err(Error::Integrity(format!(
                            "B_{i} B_{j} differs from Σ_k p[{i}][{j}][k] B_k at ({a}, {b})"
                        )));
                    }
                }
            }
        }
    }
    Ok(mats)
}

fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let r = a.len();
    (0..r)
        .map(|x| {
            (0..r)
                .map(|y| (0..r).map(|z| a[x][z] * b[z][y]).sum())
                .collect()
        })
        .collect()
}

/// Exact pairwise commutation of a family of integer matrices.
pub fn check_commuting(mats: &[IntMatrix]) -> Result<()> {
    for i in 0..mats.len() {
        for j in 0..i {
            if mat_mul(&mats[i], &mats[j]) != mat_mul(&mats[j], &mats[i]) {
                return Err(Error::NonCommuting { i, j });
            }
        }
    }
    Ok(())
}

fn coefficients(seed: u64, count: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Single-linkage clusters of complex numbers within `tol`, as index lists.
fn cluster(values: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = values.len();
    let mut roots: Vec<usize> = (0..n).collect();
    fn find(r: &mut [usize], mut x: usize) -> usize {
        while r[x] != x {
            r[x] = r[r[x]];
            x = r[x];
        }
        x
    }
    for a in 0..n {
        for b in 0..a {
            if (values[a] - values[b]).norm() <= tol {
                let (ra, rb) = (find(&mut roots, a), find(&mut roots, b));
                roots[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for x in 0..n {
        let root = find(&mut roots, x);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(x);
    }
    groups
}

fn spectral_scale(values: &[Complex64]) -> f64 {
    values.iter().map(|v| v.norm()).fold(1.0, f64::max)
}

/// Null vector of `m - λ I` from the smallest singular value.
fn eigenvector(m: &DMatrix<Complex64>, lambda: Complex64) -> Vec<Complex64> {
    let r = m.nrows();
    let shifted = m - DMatrix::<Complex64>::identity(r, r) * lambda;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(Ordering::Equal))
        .expect("nonempty matrix");
    (0..r).map(|c| v_t[(idx, c)].conj()).collect()
}

fn rayleigh(b: &IntMatrix, v: &[Complex64]) -> Complex64 {
    let r = v.len();
    let mut num = Complex64::new(0.0, 0.0);
    let mut den = 0.0;
    for x in 0..r {
        let bv: Complex64 = (0..r).map(|y| v[y] * b[x][y] as f64).sum();
        num += v[x].conj() * bv;
        den += v[x].norm_sqr();
    }
    num / den
}

/// Multiplicities from the eigenvalue table.
pub fn multiplicities(
    eigenvalues: &[Vec<Complex64>],
    valencies: &[u64],
    points: usize,
) -> Result<Vec<u64>> {
    let mut out = Vec::with_capacity(eigenvalues.len());
    for row in eigenvalues {
        let norm: f64 = row
            .iter()
            .zip(valencies)
            .map(|(p, &k)| p.norm_sqr() / k as f64)
            .sum();
        let m = points as f64 / norm;
        let rounded = m.round();
        if !m.is_finite() || (m - rounded).abs() > INTEGRALITY_TOLERANCE || rounded < 1.0 {
            return Err(Error::Numerical(format!(
                "multiplicity {m} is not within {INTEGRALITY_TOLERANCE} of a positive integer"
            )));
        }
        out.push(rounded as u64);
    }
    let total: u64 = out.iter().sum();
    if total != points as u64 {
        return Err(Error::Numerical(format!(
            "multiplicities sum to {total}, expected {points}"
        )));
    }
    Ok(out)
}

fn round_key(row: &[Complex64]) -> Vec<(i64, i64)> {
    row.iter()
        .map(|c| ((c.re * 1e6).round() as i64, (c.im * 1e6).round() as i64))
        .collect()
}

/// Common eigensystem of a commuting family of intersection matrices.
///
/// The valencies and point count are read off the matrices themselves
/// (row sums of `B_i` are `k_i`).
pub fn common_eigensystem(mats: &[IntMatrix], seed: u64) -> Result<SpectralData> {
    let r = mats.len();
    if r == 0 {
        return Err(Error::Integrity(
            "empty family of intersection matrices".into(),
        ));
    }
    check_commuting(mats)?;
    let valencies: Vec<u64> = mats
        .iter()
        .map(|b| b[0].iter().sum::<i64>() as u64)
        .collect();
    let points: u64 = valencies.iter().sum();

    for attempt in 0..ATTEMPTS {
        let seed_used = seed.wrapping_add(attempt as u64);
        let coeffs = coefficients(seed_used, r);
        let real = DMatrix::<f64>::from_fn(r, r, |a, b| {
            (0..r).map(|i| coeffs[i] * mats[i][a][b] as f64).sum()
        });
        let Some(schur) = Schur::try_new(real.clone(), f64::EPSILON, SCHUR_ITERATIONS) else {
            continue;
        };
        let lambdas: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
        let tol = CLUSTER_TOLERANCE * spectral_scale(&lambdas);
        let groups = cluster(&lambdas, tol);
        if groups.iter().any(|g| g.len() > 1) {
            continue;
        }
        let m = real.map(|x| Complex64::new(x, 0.0));
        let mut rows: Vec<Vec<Complex64>> = lambdas
            .iter()
            .map(|&lambda| {
                let v = eigenvector(&m, lambda);
                mats.iter().map(|b| rayleigh(b, &v)).collect()
            })
            .collect();

        // trivial eigenspace: the row closest to the valencies
        let distance = |row: &Vec<Complex64>| -> f64 {
            row.iter()
                .zip(&valencies)
                .map(|(p, &k)| (p - Complex64::new(k as f64, 0.0)).norm())
                .sum()
        };
        let trivial = (0..r)
            .min_by(|&a, &b| distance(&rows[a]).partial_cmp(&distance(&rows[b])).unwrap())
            .unwrap();
        let trivial_row = rows.remove(trivial);
        let mut eigenvalues = vec![trivial_row];
        eigenvalues.extend(rows);
        let mults = multiplicities(&eigenvalues, &valencies, points as usize)?;
        // order the nontrivial rows by multiplicity, then by rounded values
        let mut order: Vec<usize> = (1..r).collect();
        order.sort_by(|&a, &b| {
            mults[a]
                .cmp(&mults[b])
                .then_with(|| round_key(&eigenvalues[a]).cmp(&round_key(&eigenvalues[b])))
        });
        let mut sorted_rows = vec![eigenvalues[0].clone()];
        let mut sorted_mults = vec![mults[0]];
        for j in order {
            sorted_rows.push(eigenvalues[j].clone());
            sorted_mults.push(mults[j]);
        }
        let data = SpectralData {
            rank: r,
            eigenvalues: sorted_rows,
            multiplicities: sorted_mults,
            tolerance_used: tol,
            seed_used,
        };
        let residual = data.orthogonality_residual(&valencies);
        if residual > INTEGRALITY_TOLERANCE {
            return Err(Error::Numerical(format!(
                "eigenvalue table fails orthogonality by {residual:e}"
            )));
        }
        return Ok(data);
    }
    Err(Error::DegenerateSpectrum { attempts: ATTEMPTS })
}

/// Spectral data of an already built scheme.
pub fn spectral_data(scheme: &OrbitalScheme, seed: u64) -> Result<SpectralData> {
    if !is_commutative(scheme) {
        // report a concrete non-commuting pair
        let mats = intersection_matrices(scheme)?;
        check_commuting(&mats)?;
    }
    let mats = intersection_matrices(scheme)?;
    let data = common_eigensystem(&mats, seed)?;
    if data.multiplicities[0] != 1 {
        return Err(Error::Numerical(format!(
            "trivial component has multiplicity {}",
            data.multiplicities[0]
        )));
    }
    Ok(data)
}

/// Sorted degrees of the irreducible components on level `n`.
pub fn degree_multiset(
    pres: &WreathPresentation,
    level: usize,
    ray: &Ray,
    cap: usize,
    seed: u64,
) -> Result<Vec<u64>> {
    let structure = OrbitalStructure::build(pres, level, ray, cap)?;
    degrees_of(structure.scheme(), seed)
}

pub fn degrees_of(scheme: &OrbitalScheme, seed: u64) -> Result<Vec<u64>> {
    let mut degrees = spectral_data(scheme, seed)?.multiplicities;
    degrees.sort_unstable();
    Ok(degrees)
}

/// Whether `small` is contained in `large` as a multiset; both sorted.
pub fn is_submultiset(small: &[u64], large: &[u64]) -> bool {
    let mut rest = large.iter();
    'outer: for x in small {
        for &y in rest.by_ref() {
            match y.cmp(x) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Degrees at level `n` form a sub-multiset of the degrees at level `n + 1`.
pub fn tower_nesting_check(
    pres: &WreathPresentation,
    level: usize,
    ray: &Ray,
    cap: usize,
    seed: u64,
) -> Result<bool> {
    let lower = degree_multiset(pres, level, ray, cap, seed)?;
    let upper = degree_multiset(pres, level + 1, ray, cap, seed)?;
    Ok(is_submultiset(&lower, &upper))
}

/// Degrees from the `N × N` class adjacency matrices.
///
/// Classes are taken from the `G`-orbits on ordered pairs, independently of
/// the transversal. A generic Hermitian combination of the adjacency matrices
/// `c_i (A_i + A_iᵀ) + i c'_i (A_i - A_iᵀ)` is diagonalised and its
/// eigenvalue clusters counted.
pub fn dense_commutant_oracle(
    pres: &WreathPresentation,
    level: usize,
    ray: &Ray,
    seed: u64,
) -> Result<Vec<u64>> {
    if ray.degree() != pres.degree() {
        return Err(Error::InvalidRay {
            text: ray.to_string(),
            message: "ray degree differs from group degree".into(),
        });
    }
    let action = LevelAction::new(pres, level, DENSE_ORACLE_LIMIT)?;
    let n = action.size();
    debug_assert!(n <= MATERIALIZE_LIMIT && n * n <= DEFAULT_PAIR_CAP);
    let classes = pair_classes(&action);
    let class_count = classes.iter().max().map_or(0, |&c| c + 1);

    for attempt in 0..ATTEMPTS {
        let coeffs = coefficients(seed.wrapping_add(attempt as u64), 2 * class_count);
        let (re, im) = coeffs.split_at(class_count);
        let entries: Vec<Complex64> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (x, y) = (idx / n, idx % n);
                let (a, b) = (classes[idx], classes[y * n + x]);
                Complex64::new(re[a] + re[b], im[a] - im[b])
            })
            .collect();
        let m = DMatrix::<Complex64>::from_row_slice(n, n, &entries);
        let Some(eigen) = SymmetricEigen::try_new(m, f64::EPSILON, SCHUR_ITERATIONS) else {
            continue;
        };
        let lambdas: Vec<Complex64> = eigen
            .eigenvalues
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        let scale = spectral_scale(&lambdas);
        let tol = 1e-6 * scale;
        let groups = cluster(&lambdas, tol);
        // clusters must also be well apart from each other
        let centers: Vec<Complex64> = groups
            .iter()
            .map(|g| g.iter().map(|&i| lambdas[i]).sum::<Complex64>() / g.len() as f64)
            .collect();
        let separated = (0..centers.len())
            .all(|a| (0..a).all(|b| (centers[a] - centers[b]).norm() > 1e3 * tol));
        if !separated || groups.len() != class_count {
            continue;
        }
        let mut sizes: Vec<u64> = groups.iter().map(|g| g.len() as u64).collect();
        sizes.sort_unstable();
        return Ok(sizes);
    }
    Err(Error::DegenerateSpectrum { attempts: ATTEMPTS })
}

/// Orbital index of every ordered pair (row-major), numbered by first
/// appearance.
fn pair_classes(action: &LevelAction) -> Vec<usize> {
    let n = action.size();
    let mut roots: Vec<usize> = (0..n * n).collect();
    fn find(r: &mut [usize], mut x: usize) -> usize {
        while r[x] != x {
            r[x] = r[r[x]];
            x = r[x];
        }
        x
    }
    for g in 0..action.generator_count() {
        let perm = action.generator(g);
        for x in 0..n {
            for y in 0..n {
                let (a, b) = (x * n + y, perm.apply(x) * n + perm.apply(y));
                let (ra, rb) = (find(&mut roots, a), find(&mut roots, b));
                if ra != rb {
                    roots[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut number = vec![usize::MAX; n * n];
    let mut next = 0;
    (0..n * n)
        .map(|p| {
            let root = find(&mut roots, p);
            if number[root] == usize::MAX {
                number[root] = next;
                next += 1;
            }
            number[root]
        })
        .collect()
}
