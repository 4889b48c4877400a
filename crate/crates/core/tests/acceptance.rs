// SPDX-License-Identifier: Apache-2.0

//! Acceptance run: one line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use branch_hecke::catalog::{builtin, CatalogEntry, KEYS};
use branch_hecke::level::{
    bfs_group_order, oracle_suborbits, pair_orbit_suborbits, stabilizer_suborbits,
    DEFAULT_GROUP_CAP, DEFAULT_PAIR_CAP,
};
use branch_hecke::scheme::{build_scheme, hecke_dimension, is_commutative};
use branch_hecke::spectral::{
    degree_multiset, dense_commutant_oracle, spectral_data, tower_nesting_check, DEFAULT_SEED,
};
use branch_hecke::tree::{Vertex, DEFAULT_POINT_CAP};
use branch_hecke::verify::{verify_level, VerifyConfig, DEFAULT_CASES};

const CAP: usize = DEFAULT_POINT_CAP;
const BINARY: [&str; 2] = ["grigorchuk", "grigorchuk-tilde"];
const TERNARY: [&str; 3] = ["gamma", "gamma-bar", "gupta-sidki"];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn max_level(e: &CatalogEntry) -> usize {
    if e.degree() == 2 {
        8
    } else {
        6
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

/// `{d^n}` and, for `0 ≤ i < n` and each letter `l < d`, the block of all
/// vertices starting with `d^i l`.
fn expected_blocks(d: usize, n: usize) -> BTreeSet<Vec<usize>> {
    let top = d as u8;
    let mut blocks = BTreeSet::new();
    blocks.insert(vec![Vertex::new(d, vec![top; n]).unwrap().index()]);
    for i in 0..n {
        for l in 1..top {
            let free = n - 1 - i;
            let mut block: Vec<usize> = (0..d.pow(free as u32))
                .map(|tail| {
                    let mut letters = vec![top; i];
                    letters.push(l);
                    letters.extend(Vertex::from_index(d, free, tail).letters());
                    Vertex::new(d, letters).unwrap().index()
                })
                .collect();
            block.sort_unstable();
            blocks.insert(block);
        }
    }
    blocks
}

fn suborbit_shapes(
    keys: &[&str],
    levels: std::ops::RangeInclusive<usize>,
    blocks: impl Fn(usize) -> usize,
) -> Outcome {
    let mut checked = 0;
    for key in keys {
        let e = builtin(key).unwrap();
        for n in levels.clone() {
            let sub = stabilizer_suborbits(&e.presentation, n, &e.default_ray, CAP)
                .map_err(|err| format!("{key} n={n}: {err}"))?;
            ensure(sub.block_count() == blocks(n), || {
                format!(
                    "{key} n={n}: {} blocks, expected {}",
                    sub.block_count(),
                    blocks(n)
                )
            })?;
            ensure(sub.as_sets() == expected_blocks(e.degree(), n), || {
                format!("{key} n={n}: blocks {:?}", sub.rendered())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} levels"))
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let out = suborbit_shapes(&BINARY, 1..=8, |n| n + 1)?;
    within(t.elapsed(), Duration::from_secs(10), "d=2 orbit check")?;
    Ok(format!("{out} in {:?}", t.elapsed()))
}

fn criterion_2() -> Outcome {
    let mut times = Vec::new();
    for key in TERNARY {
        let t = Instant::now();
        suborbit_shapes(&[key], 1..=6, |n| 2 * n + 1)?;
        within(t.elapsed(), Duration::from_secs(60), key)?;
        times.push(format!("{key} {:?}", t.elapsed()));
    }
    Ok(times.join(", "))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for key in KEYS {
        let e = builtin(key).unwrap();
        for n in 1..=max_level(&e) {
            let s = build_scheme(&e.presentation, n, &e.default_ray, CAP)
                .map_err(|err| format!("{key} n={n}: {err}"))?;
            ensure(is_commutative(&s), || {
                format!("{key} n={n}: not commutative")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} schemes commutative"))
}

fn expected_degrees(d: u64, n: usize) -> Vec<u64> {
    let mut out = vec![1; d as usize];
    for i in 1..n as u32 {
        for _ in 1..d {
            out.push(d.pow(i));
        }
    }
    out.sort_unstable();
    out
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for key in KEYS {
        let e = builtin(key).unwrap();
        let d = e.degree() as u64;
        let top = if d == 2 { 8 } else { 5 };
        for n in 1..=top {
            let s = build_scheme(&e.presentation, n, &e.default_ray, CAP)
                .map_err(|err| format!("{key} n={n}: {err}"))?;
            let data =
                spectral_data(&s, DEFAULT_SEED).map_err(|err| format!("{key} n={n}: {err}"))?;
            for row in &data.eigenvalues {
                let norm: f64 = row
                    .iter()
                    .zip(s.valencies())
                    .map(|(p, &k)| p.norm_sqr() / k as f64)
                    .sum();
                let m = s.points() as f64 / norm;
                worst = worst.max((m - m.round()).abs());
            }
            let mut degrees = data.multiplicities.clone();
            degrees.sort_unstable();
            ensure(degrees == expected_degrees(d, n), || {
                format!("{key} n={n}: degrees {degrees:?}")
            })?;
            ensure(degrees.iter().sum::<u64>() == d.pow(n as u32), || {
                format!(
                    "{key} n={n}: degrees sum to {}",
                    degrees.iter().sum::<u64>()
                )
            })?;
            checked += 1;
        }
    }
    ensure(worst <= 1e-6, || {
        format!("largest distance from an integer {worst:e}")
    })?;
    Ok(format!(
        "{checked} levels, largest distance from an integer {worst:.1e}"
    ))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    for key in KEYS {
        let e = builtin(key).unwrap();
        for n in 0..=max_level(&e) {
            let s = build_scheme(&e.presentation, n, &e.default_ray, CAP)
                .map_err(|err| format!("{key} n={n}: {err}"))?;
            let want = (e.degree() - 1) * n + 1;
            ensure(hecke_dimension(&s) == want, || {
                format!(
                    "{key} n={n}: dimension {}, expected {want}",
                    hecke_dimension(&s)
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} levels"))
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for key in KEYS {
        let e = builtin(key).unwrap();
        for n in 0..max_level(&e) {
            let nested = tower_nesting_check(&e.presentation, n, &e.default_ray, CAP, DEFAULT_SEED)
                .map_err(|err| format!("{key} n={n}: {err}"))?;
            ensure(nested, || {
                format!("{key}: level {n} does not nest in level {}", n + 1)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} consecutive pairs"))
}

fn criterion_7() -> Outcome {
    let t = Instant::now();
    let mut notes = Vec::new();
    let g = builtin("grigorchuk").unwrap();
    for (n, want) in [(1, 2), (2, 8), (3, 128)] {
        let order = bfs_group_order(&g.presentation, n, CAP, DEFAULT_GROUP_CAP)
            .map_err(|err| format!("order n={n}: {err}"))?;
        ensure(order == want, || {
            format!("|G_{n}| = {order}, expected {want}")
        })?;
    }
    notes.push("|G_n| = 2, 8, 128".to_string());

    let (mut enumerated, mut paired, mut dense) = (0, 0, 0);
    for key in KEYS {
        let e = builtin(key).unwrap();
        let top = if e.degree() == 2 { 3 } else { 5 };
        for n in 0..=top {
            let ray = &e.default_ray;
            let fast = stabilizer_suborbits(&e.presentation, n, ray, CAP)
                .map_err(|err| format!("{key} n={n}: {err}"))?;
            // full enumeration of G_n is feasible up to |G_3| = 3^10 for d=3
            if e.degree() == 2 || n <= 3 {
                let slow = oracle_suborbits(&e.presentation, n, ray, CAP, DEFAULT_GROUP_CAP)
                    .map_err(|err| format!("{key} n={n} enumeration: {err}"))?;
                ensure(slow.blocks() == fast.blocks(), || {
                    format!(
                        "{key} n={n}: enumeration oracle {:?} vs {:?}",
                        slow.rendered(),
                        fast.rendered()
                    )
                })?;
                enumerated += 1;
            }
            let pairs = pair_orbit_suborbits(&e.presentation, n, ray, CAP, DEFAULT_PAIR_CAP)
                .map_err(|err| format!("{key} n={n} pair orbits: {err}"))?;
            ensure(pairs.blocks() == fast.blocks(), || {
                format!(
                    "{key} n={n}: pair-orbit oracle {:?} vs {:?}",
                    pairs.rendered(),
                    fast.rendered()
                )
            })?;
            paired += 1;

            let primary = degree_multiset(&e.presentation, n, ray, CAP, DEFAULT_SEED)
                .map_err(|err| format!("{key} n={n}: {err}"))?;
            let check = dense_commutant_oracle(&e.presentation, n, ray, DEFAULT_SEED)
                .map_err(|err| format!("{key} n={n} dense: {err}"))?;
            ensure(primary == check, || {
                format!("{key} n={n}: dense {check:?} vs {primary:?}")
            })?;
            dense += 1;
        }
    }
    within(t.elapsed(), Duration::from_secs(60), "oracle comparisons")?;
    notes.push(format!(
        "{enumerated} enumeration, {paired} pair-orbit, {dense} dense comparisons in {:?}",
        t.elapsed()
    ));
    Ok(notes.join("; "))
}

fn criterion_8() -> Outcome {
    let config = VerifyConfig::default();
    let mut runs = 0;
    let mut min_cases = usize::MAX;
    for key in KEYS {
        let e = builtin(key).unwrap();
        for n in 1..=max_level(&e) {
            let report = verify_level(&e.presentation, n, &e.default_ray, Some(&e), &config)
                .map_err(|err| format!("{key} n={n}: {err}"))?;
            for c in &report.checks {
                ensure(c.passed() && c.skipped.is_none(), || {
                    format!("{key} n={n}: {c}")
                })?;
                if c.name != branch_hecke::verify::CATALOG_SHAPE {
                    min_cases = min_cases.min(c.cases);
                }
            }
            runs += 1;
        }
    }
    ensure(min_cases >= DEFAULT_CASES, || {
        format!("only {min_cases} cases in some suite")
    })?;
    Ok(format!(
        "{runs} group levels, at least {min_cases} cases per suite, seed {:#x}",
        config.seed
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 suborbit shapes d=2", criterion_1),
        ("2 suborbit shapes d=3", criterion_2),
        ("3 gelfand pairs", criterion_3),
        ("4 decomposition degrees", criterion_4),
        ("5 hecke dimensions", criterion_5),
        ("6 tower nesting", criterion_6),
        ("7 oracle equivalence", criterion_7),
        ("8 property suites", criterion_8),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
