// SPDX-License-Identifier: Apache-2.0

//! Randomized invariant suites for one group at one level.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::error::Result;
use crate::scheme::{hecke_dimension, is_commutative, verify_scheme_axioms, OrbitalStructure};
use crate::spectral::{degrees_of, DEFAULT_SEED};
use crate::tree::{Ray, Vertex};
use crate::wreath::{act, section, Letter, LevelAction, Word, WreathPresentation};

pub const DEFAULT_CASES: usize = 200;

/// Words are compared as permutations of this many levels.
const COMPARE_DEPTH_BINARY: usize = 5;
const COMPARE_DEPTH_TERNARY: usize = 3;
const MAX_WORD_LEN: usize = 8;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub cases: usize,
    pub seed: u64,
    pub cap: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            cases: DEFAULT_CASES,
            seed: DEFAULT_SEED,
            cap: crate::tree::DEFAULT_POINT_CAP,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

impl CheckResult {
    fn new(name: &'static str) -> Self {
        CheckResult {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
            skipped: None,
        }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.skipped.is_some() {
            "SKIP"
        } else if self.passed() {
            "PASS"
        } else {
            "FAIL"
        };
        write!(
            f,
            "{status} {} ({} cases, {} failures)",
            self.name, self.cases, self.failures
        )?;
        if let Some(s) = &self.skipped {
            write!(f, ": {s}")?;
        }
        if let Some(s) = &self.first_failure {
            write!(f, ": {s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub level: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const ACTION_COMPATIBILITY: &str = "action compatibility";
pub const COCYCLE: &str = "cocycle identity";
pub const INVERSE: &str = "inverse identity";
pub const REDUCTION: &str = "reduction invariance";
pub const LABEL_INVARIANCE: &str = "label G-invariance";
pub const SCHEME_AXIOMS: &str = "scheme axioms";
pub const SEED_INDEPENDENCE: &str = "seed independence";
pub const CATALOG_SHAPE: &str = "catalog expectations";

fn random_word(rng: &mut ChaCha8Rng, gens: usize) -> Word {
    let len = rng.random_range(0..=MAX_WORD_LEN);
    Word::from_letters(
        (0..len)
            .map(|_| {
                let g = rng.random_range(0..gens);
                if rng.random_bool(0.5) {
                    Letter::inv(g)
                } else {
                    Letter::new(g)
                }
            })
            .collect(),
    )
}

fn random_vertex(rng: &mut ChaCha8Rng, degree: usize, len: usize) -> Vertex {
    let letters = (0..len)
        .map(|_| rng.random_range(1..=degree as u8))
        .collect();
    Vertex::new(degree, letters).expect("letters in range")
}

/// Runs every suite. `expected` adds the catalog shape checks for builtins.
pub fn verify_level(
    pres: &WreathPresentation,
    level: usize,
    ray: &Ray,
    expected: Option<&CatalogEntry>,
    config: &VerifyConfig,
) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let d = pres.degree();
    let gens = pres.generator_count();
    let depth = if d == 2 {
        COMPARE_DEPTH_BINARY
    } else {
        COMPARE_DEPTH_TERNARY
    };
    let compare = LevelAction::new(pres, depth, config.cap)?;
    let same = |a: &Word, b: &Word| compare.word_permutation(a) == compare.word_permutation(b);
    let mut checks = Vec::new();

    let mut c = CheckResult::new(ACTION_COMPATIBILITY);
    for _ in 0..config.cases {
        let g = random_word(&mut rng, gens);
        let head_len = rng.random_range(0..=level.max(1));
        let sigma = random_vertex(&mut rng, d, head_len);
        let tau_len = rng.random_range(0..=3);
        let tau = random_vertex(&mut rng, d, tau_len);
        let whole = act(pres, &g, &sigma.concat(&tau));
        let split = act(pres, &g, &sigma).concat(&act(pres, &section(pres, &g, &sigma), &tau));
        c.record(whole == split, || {
            format!("g={} σ={sigma} τ={tau}", pres.render_word(&g))
        });
    }
    checks.push(c);

    let mut c = CheckResult::new(COCYCLE);
    for _ in 0..config.cases {
        let g = random_word(&mut rng, gens);
        let h = random_word(&mut rng, gens);
        let len = rng.random_range(0..=level.max(1));
        let sigma = random_vertex(&mut rng, d, len);
        let lhs = section(pres, &g.concat(&h), &sigma);
        let rhs = section(pres, &g, &act(pres, &h, &sigma)).concat(&section(pres, &h, &sigma));
        c.record(same(&lhs, &rhs), || {
            format!(
                "g={} h={} σ={sigma}",
                pres.render_word(&g),
                pres.render_word(&h)
            )
        });
    }
    checks.push(c);

    let mut c = CheckResult::new(INVERSE);
    for _ in 0..config.cases {
        let g = random_word(&mut rng, gens);
        let len = rng.random_range(0..=level.max(1));
        let sigma = random_vertex(&mut rng, d, len);
        let lhs = section(pres, &g.inverse(), &sigma);
        let rhs = section(pres, &g, &act(pres, &g.inverse(), &sigma)).inverse();
        c.record(same(&lhs, &rhs), || {
            format!("g={} σ={sigma}", pres.render_word(&g))
        });
    }
    checks.push(c);

    let mut c = CheckResult::new(REDUCTION);
    for _ in 0..config.cases {
        let g = random_word(&mut rng, gens);
        c.record(same(&g, &pres.reduce(&g)), || pres.render_word(&g));
    }
    checks.push(c);

    let structure = OrbitalStructure::build(pres, level, ray, config.cap)?;
    let n = structure.point_count();
    let action = structure.parabolic().action();
    let scheme = structure.scheme();

    let mut c = CheckResult::new(LABEL_INVARIANCE);
    for _ in 0..config.cases {
        let g = random_word(&mut rng, gens);
        let (x, y) = (rng.random_range(0..n), rng.random_range(0..n));
        let (gx, gy) = (action.apply_word(&g, x), action.apply_word(&g, y));
        c.record(structure.label(x, y) == structure.label(gx, gy), || {
            format!("g={} x={x} y={y}", pres.render_word(&g))
        });
    }
    checks.push(c);

    let mut c = CheckResult::new(SCHEME_AXIOMS);
    for v in verify_scheme_axioms(scheme) {
        c.record(false, || v.to_string());
    }
    for _ in 0..config.cases {
        let (x, y) = (rng.random_range(0..n), rng.random_range(0..n));
        let k = structure.label(x, y);
        let counts = structure.count_through(x, y);
        let r = scheme.rank();
        let ok = (0..r).all(|i| (0..r).all(|j| counts[i][j] == scheme.p(i, j, k)));
        c.record(ok, || format!("pair ({x}, {y}) in class {k}"));
    }
    checks.push(c);

    let mut c = CheckResult::new(SEED_INDEPENDENCE);
    if is_commutative(scheme) {
        let reference = degrees_of(scheme, config.seed)?;
        for _ in 0..config.cases {
            let seed: u64 = rng.random();
            let got = degrees_of(scheme, seed);
            c.record(got.as_ref() == Ok(&reference), || {
                format!("seed {seed}: {got:?}")
            });
        }
    } else {
        c.skipped = Some("scheme is not commutative".into());
    }
    checks.push(c);

    if let Some(entry) = expected {
        let mut c = CheckResult::new(CATALOG_SHAPE);
        let rank = hecke_dimension(scheme);
        c.record(rank == entry.expected_rank(level), || {
            format!("rank {rank}, expected {}", entry.expected_rank(level))
        });
        c.record(is_commutative(scheme), || {
            "scheme is not commutative".into()
        });
        let degrees = degrees_of(scheme, config.seed);
        let want = entry.expected_degrees(level);
        c.record(degrees.as_ref() == Ok(&want), || {
            format!("degrees {degrees:?}, expected {want:?}")
        });
        checks.push(c);
    }

    Ok(VerifyReport { level, checks })
}
