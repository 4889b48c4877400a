// SPDX-License-Identifier: Apache-2.0

//! Advisory on-disk cache of schemes and degree lists.
//!
//! Entries are keyed by a SHA-256 fingerprint of the canonical presentation,
//! the level and the ray. Anything that fails to load or validate is ignored
//! and recomputed.

use std::fs;
use std::path::{Path, PathBuf};

use branch_hecke::scheme::{verify_scheme_axioms, OrbitalScheme};
use branch_hecke::tree::Ray;
use branch_hecke::wreath::WreathPresentation;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Debug, Serialize, Deserialize)]
struct DegreeEntry {
    seed: u64,
    degrees: Vec<u64>,
}

pub fn fingerprint(pres: &WreathPresentation, level: usize, ray: &Ray) -> String {
    let mut hasher = Sha256::new();
    hasher.update(pres.to_string().as_bytes());
    hasher.update(format!("\nlevel {level}\nray {ray}\n").as_bytes());
    hex::encode(hasher.finalize())
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache {
            dir: dir.to_path_buf(),
        }
    }

    fn path(&self, key: &str, kind: &str) -> PathBuf {
        self.dir.join(format!("{key}.{kind}.json"))
    }

    fn store<T: Serialize>(&self, path: &Path, value: &T) {
        // the cache is advisory: write failures only cost a recomputation
        if fs::create_dir_all(&self.dir).is_ok() {
            if let Ok(text) = serde_json::to_string(value) {
                let tmp = path.with_extension("tmp");
                if fs::write(&tmp, text).is_ok() {
                    let _ = fs::rename(&tmp, path);
                }
            }
        }
    }

    pub fn load_scheme(&self, key: &str, points: usize) -> Option<OrbitalScheme> {
        let text = fs::read_to_string(self.path(key, "scheme")).ok()?;
        let scheme: OrbitalScheme = serde_json::from_str(&text).ok()?;
        let shaped = scheme.points() == points
            && scheme.rank() >= 1
            && scheme.valencies().len() == scheme.rank()
            && scheme.pairing().len() == scheme.rank()
            && scheme.intersection_numbers().len() == scheme.rank()
            && scheme.intersection_numbers().iter().all(|m| {
                m.len() == scheme.rank() && m.iter().all(|row| row.len() == scheme.rank())
            })
            && scheme.pairing().iter().all(|&i| i < scheme.rank());
        (shaped && verify_scheme_axioms(&scheme).is_empty()).then_some(scheme)
    }

    pub fn store_scheme(&self, key: &str, scheme: &OrbitalScheme) {
        self.store(&self.path(key, "scheme"), scheme);
    }

    pub fn load_degrees(&self, key: &str, seed: u64, scheme: &OrbitalScheme) -> Option<Vec<u64>> {
        let text = fs::read_to_string(self.path(key, &format!("degrees-{seed}"))).ok()?;
        let entry: DegreeEntry = serde_json::from_str(&text).ok()?;
        let valid = entry.seed == seed
            && entry.degrees.len() == scheme.rank()
            && entry.degrees.iter().all(|&m| m >= 1)
            && entry.degrees.windows(2).all(|w| w[0] <= w[1])
            && entry.degrees.iter().sum::<u64>() == scheme.points() as u64;
        valid.then_some(entry.degrees)
    }

    pub fn store_degrees(&self, key: &str, seed: u64, degrees: &[u64]) {
        let entry = DegreeEntry {
            seed,
            degrees: degrees.to_vec(),
        };
        self.store(&self.path(key, &format!("degrees-{seed}")), &entry);
    }
}
