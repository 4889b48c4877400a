// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write;
use std::fs;

use branch_hecke::catalog::{self, CatalogEntry};
use branch_hecke::dot::{orbital_graph_dot, portrait_dot};
use branch_hecke::scheme::{hecke_dimension, is_commutative, OrbitalScheme, OrbitalStructure};
use branch_hecke::spectral::{
    degrees_of, dense_commutant_oracle, is_submultiset, DENSE_ORACLE_LIMIT,
};
use branch_hecke::tree::{level_size, Ray, Vertex};
use branch_hecke::verify::{verify_level, VerifyConfig};
use branch_hecke::wreath::{act, order_at_level, portrait, section, Portrait, WreathPresentation};
use serde_json::{json, Value};

use crate::args::{CatalogAction, Cli, Command, GroupSource, LevelArgs};
use crate::cache::{fingerprint, Cache};
use crate::output::{CliError, Output};

struct Group {
    label: String,
    pres: WreathPresentation,
    entry: Option<CatalogEntry>,
}

impl Group {
    fn resolve(source: &GroupSource) -> Result<Self, CliError> {
        if let Some(key) = &source.group {
            let entry = catalog::builtin(key)?;
            return Ok(Group {
                label: key.clone(),
                pres: entry.presentation.clone(),
                entry: Some(entry),
            });
        }
        let path = source.file.as_ref().expect("clap requires a group source");
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Ok(Group {
            label: path.display().to_string(),
            pres: WreathPresentation::parse(&text)?,
            entry: None,
        })
    }

    fn ray(&self, text: Option<&str>) -> Result<Ray, CliError> {
        Ok(match (text, &self.entry) {
            (Some(t), _) => Ray::parse(self.pres.degree(), t)?,
            (None, Some(e)) => e.default_ray.clone(),
            (None, None) => Ray::constant(self.pres.degree()),
        })
    }
}

struct Context<'a> {
    cli: &'a Cli,
    cache: Option<Cache>,
}

impl Context<'_> {
    fn scheme(
        &self,
        group: &Group,
        args: &LevelArgs,
        ray: &Ray,
    ) -> Result<OrbitalScheme, CliError> {
        let points = level_size(group.pres.degree(), args.level, args.cap)?;
        let key = fingerprint(&group.pres, args.level, ray);
        if let Some(cached) = self
            .cache
            .as_ref()
            .and_then(|c| c.load_scheme(&key, points))
        {
            return Ok(cached);
        }
        let scheme = OrbitalStructure::build(&group.pres, args.level, ray, args.cap)?.into_scheme();
        if let Some(c) = &self.cache {
            c.store_scheme(&key, &scheme);
        }
        Ok(scheme)
    }

    fn degrees(
        &self,
        group: &Group,
        level: usize,
        ray: &Ray,
        scheme: &OrbitalScheme,
    ) -> Result<Vec<u64>, CliError> {
        let seed = self.cli.seed;
        let key = fingerprint(&group.pres, level, ray);
        if let Some(cached) = self
            .cache
            .as_ref()
            .and_then(|c| c.load_degrees(&key, seed, scheme))
        {
            return Ok(cached);
        }
        let degrees = degrees_of(scheme, seed)?;
        if let Some(c) = &self.cache {
            c.store_degrees(&key, seed, &degrees);
        }
        Ok(degrees)
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let ctx = Context {
        cli,
        cache: cli.cache_dir.as_deref().map(Cache::new),
    };
    match &cli.command {
        Command::Catalog { action } => run_catalog(action),
        Command::Act {
            source,
            word,
            vertex,
        } => {
            let g = Group::resolve(source)?;
            let w = g.pres.parse_word(word)?;
            let v = Vertex::parse(g.pres.degree(), vertex)?;
            let image = act(&g.pres, &w, &v).to_string();
            Ok(Output {
                group: Some(g.label),
                level: Some(v.level()),
                text: format!("{image}\n"),
                json: json!({ "word": g.pres.render_word(&w), "vertex": v.to_string(), "image": image }),
                failed: false,
            })
        }
        Command::Section {
            source,
            word,
            vertex,
        } => {
            let g = Group::resolve(source)?;
            let w = g.pres.parse_word(word)?;
            let v = Vertex::parse(g.pres.degree(), vertex)?;
            let s = g.pres.render_word(&section(&g.pres, &w, &v));
            Ok(Output {
                group: Some(g.label),
                level: Some(v.level()),
                text: format!("{s}\n"),
                json: json!({ "word": g.pres.render_word(&w), "vertex": v.to_string(), "section": s }),
                failed: false,
            })
        }
        Command::Order {
            source,
            word,
            level,
            cap,
        } => {
            let g = Group::resolve(source)?;
            let w = g.pres.parse_word(word)?;
            let order = order_at_level(&g.pres, &w, *level, *cap)?;
            let value = match u64::try_from(&order) {
                Ok(small) => json!(small),
                Err(_) => json!(order.to_string()),
            };
            Ok(Output {
                group: Some(g.label),
                level: Some(*level),
                text: format!("{order}\n"),
                json: json!({ "word": g.pres.render_word(&w), "order": value }),
                failed: false,
            })
        }
        Command::Portrait {
            source,
            word,
            depth,
            dot,
        } => {
            let g = Group::resolve(source)?;
            let w = g.pres.parse_word(word)?;
            let p = portrait(&g.pres, &w, *depth);
            let text = if *dot {
                portrait_dot(&g.pres, &p)
            } else {
                let mut out = String::new();
                for node in p.nodes() {
                    let indent = "  ".repeat(node.vertex.level());
                    match &node.word {
                        Some(leaf) => writeln!(
                            out,
                            "{indent}{}: {} [{}]",
                            node.vertex,
                            node.root_perm,
                            g.pres.render_word(leaf)
                        ),
                        None => writeln!(out, "{indent}{}: {}", node.vertex, node.root_perm),
                    }
                    .unwrap();
                }
                out
            };
            Ok(Output {
                group: Some(g.label),
                level: Some(*depth),
                json: json!({ "word": g.pres.render_word(&w), "portrait": portrait_json(&g.pres, &p) }),
                text,
                failed: false,
            })
        }
        Command::Orbits(args) => {
            let g = Group::resolve(&args.source)?;
            let ray = g.ray(args.ray.as_deref())?;
            let structure = OrbitalStructure::build(&g.pres, args.level, &ray, args.cap)?;
            let sub = structure.parabolic().suborbits();
            let blocks = sub.rendered();
            let mut text = format!(
                "level {}, base {}, {} blocks\n",
                args.level,
                sub.base(),
                blocks.len()
            );
            for (i, b) in blocks.iter().enumerate() {
                writeln!(text, "{i}: {{{}}}", b.join(", ")).unwrap();
            }
            Ok(Output {
                group: Some(g.label),
                level: Some(args.level),
                text,
                json: json!({ "base": sub.base().to_string(), "blocks": blocks }),
                failed: false,
            })
        }
        Command::Scheme { level: args, dot } => {
            let g = Group::resolve(&args.source)?;
            let ray = g.ray(args.ray.as_deref())?;
            if *dot {
                let structure = OrbitalStructure::build(&g.pres, args.level, &ray, args.cap)?;
                let scheme = structure.scheme();
                return Ok(Output {
                    group: Some(g.label),
                    level: Some(args.level),
                    json: scheme_json(scheme),
                    text: orbital_graph_dot(&structure),
                    failed: false,
                });
            }
            let scheme = ctx.scheme(&g, args, &ray)?;
            let mut text = format!(
                "rank {}\nvalencies {:?}\npairing {:?}\ncommutative {}\n",
                scheme.rank(),
                scheme.valencies(),
                scheme.pairing(),
                is_commutative(&scheme)
            );
            for k in 0..scheme.rank() {
                writeln!(text, "p[.][.][{k}]:").unwrap();
                for i in 0..scheme.rank() {
                    let row: Vec<String> = (0..scheme.rank())
                        .map(|j| scheme.p(i, j, k).to_string())
                        .collect();
                    writeln!(text, "  {}", row.join(" ")).unwrap();
                }
            }
            Ok(Output {
                group: Some(g.label),
                level: Some(args.level),
                text,
                json: scheme_json(&scheme),
                failed: false,
            })
        }
        Command::Decompose {
            level: args,
            oracle,
        } => run_decompose(&ctx, args, *oracle),
        Command::Verify { level: args, cases } => {
            let g = Group::resolve(&args.source)?;
            let ray = g.ray(args.ray.as_deref())?;
            let config = VerifyConfig {
                cases: *cases,
                seed: cli.seed,
                cap: args.cap,
            };
            let report = verify_level(&g.pres, args.level, &ray, g.entry.as_ref(), &config)?;
            let mut text = String::new();
            for c in &report.checks {
                writeln!(text, "{c}").unwrap();
            }
            let passed = report.passed();
            writeln!(
                text,
                "{}",
                if passed {
                    "all checks passed"
                } else {
                    "verification FAILED"
                }
            )
            .unwrap();
            Ok(Output {
                group: Some(g.label),
                level: Some(args.level),
                text,
                json: json!({ "passed": passed, "checks": report.checks }),
                failed: !passed,
            })
        }
    }
}

fn run_catalog(action: &CatalogAction) -> Result<Output, CliError> {
    match action {
        CatalogAction::List => {
            let entries = catalog::all();
            let mut text = String::new();
            for e in &entries {
                writeln!(
                    text,
                    "{:<18} degree {}  generators {}",
                    e.key,
                    e.degree(),
                    e.presentation.generator_count()
                )
                .unwrap();
            }
            let list: Vec<Value> = entries
                .iter()
                .map(|e| {
                    json!({
                        "key": e.key,
                        "degree": e.degree(),
                        "generators": e.presentation.names(),
                    })
                })
                .collect();
            Ok(Output {
                group: None,
                level: None,
                text,
                json: json!({ "groups": list }),
                failed: false,
            })
        }
        CatalogAction::Show { key } => {
            let e = catalog::builtin(key)?;
            Ok(Output {
                group: Some(e.key.to_string()),
                level: None,
                text: e.source_text().to_string(),
                json: json!({ "presentation": e.presentation.to_string() }),
                failed: false,
            })
        }
    }
}

fn run_decompose(ctx: &Context, args: &LevelArgs, oracle: bool) -> Result<Output, CliError> {
    let g = Group::resolve(&args.source)?;
    let ray = g.ray(args.ray.as_deref())?;
    let scheme = ctx.scheme(&g, args, &ray)?;
    let rank = hecke_dimension(&scheme);
    let gelfand = is_commutative(&scheme);
    if !gelfand {
        return Err(CliError::Computation(format!(
            "level {} is not a Gelfand pair: the rank-{rank} scheme is not commutative",
            args.level
        )));
    }
    let degrees = ctx.degrees(&g, args.level, &ray, &scheme)?;
    let next = LevelArgs {
        source: GroupSource {
            group: args.source.group.clone(),
            file: args.source.file.clone(),
        },
        level: args.level + 1,
        ray: args.ray.clone(),
        cap: args.cap,
    };
    let nested = match level_size(g.pres.degree(), next.level, next.cap) {
        Ok(_) => {
            let upper_scheme = ctx.scheme(&g, &next, &ray)?;
            let upper = ctx.degrees(&g, next.level, &ray, &upper_scheme)?;
            Some(is_submultiset(&degrees, &upper))
        }
        Err(_) => None,
    };
    let render = |d: &[u64]| d.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let mut text = format!(
        "level {}\nrank {rank}\ngelfand {gelfand}\ndegrees {}\nnested in next level {}\n",
        args.level,
        render(&degrees),
        nested.map_or("n/a".to_string(), |b| b.to_string())
    );
    let mut json = json!({
        "rank": rank,
        "degrees": degrees,
        "gelfand": gelfand,
        "nested_in_next": nested,
    });
    let mut failed = nested == Some(false);
    if oracle {
        if scheme.points() > DENSE_ORACLE_LIMIT {
            return Err(CliError::Usage(format!(
                "--oracle needs at most {DENSE_ORACLE_LIMIT} points, level {} has {}",
                args.level,
                scheme.points()
            )));
        }
        let dense = dense_commutant_oracle(&g.pres, args.level, &ray, ctx.cli.seed)?;
        let agrees = dense == degrees;
        failed |= !agrees;
        writeln!(
            text,
            "dense oracle {} ({})",
            render(&dense),
            if agrees { "agrees" } else { "DISAGREES" }
        )
        .unwrap();
        json["oracle"] = json!({ "degrees": dense, "agrees": agrees });
    }
    Ok(Output {
        group: Some(g.label),
        level: Some(args.level),
        text,
        json,
        failed,
    })
}

fn scheme_json(scheme: &OrbitalScheme) -> Value {
    json!({
        "rank": scheme.rank(),
        "valencies": scheme.valencies(),
        "pairing": scheme.pairing(),
        "commutative": is_commutative(scheme),
        "p": scheme.intersection_numbers(),
    })
}

fn portrait_json(pres: &WreathPresentation, p: &Portrait) -> Value {
    let mut node = json!({
        "vertex": p.vertex.to_string(),
        "root_perm": p.root_perm.to_string(),
    });
    match &p.word {
        Some(w) => node["word"] = json!(pres.render_word(w)),
        None => {
            node["children"] =
                Value::Array(p.children.iter().map(|c| portrait_json(pres, c)).collect())
        }
    }
    node
}
