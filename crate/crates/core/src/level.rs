// SPDX-License-Identifier: Apache-2.0

//! The action on one level and the orbits of the parabolic stabilizer.
//!
//! `P_n` is the stabilizer of `ω = e_1 … e_n`. Its image in the level
//! quotient `G_n` is generated by the Schreier elements `u_{s(x)}⁻¹ s u_x`
//! built from a breadth-first transversal `{u_x}`; their orbits on the level
//! are the suborbits of `(G_n, P_n)`.
//!
//! Two oracles sit beside the Schreier route: full enumeration of `G_n`
//! (tiny levels only) and the orbits of `G` on ordered pairs.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::tree::{Ray, Vertex};
use crate::wreath::{Letter, LevelAction, Word, WreathPresentation};

/// Largest level on which transversal permutations and pair labels are kept
/// in memory.
pub const MATERIALIZE_LIMIT: usize = 4096;

/// Default cap on the number of group elements enumerated by the oracles.
pub const DEFAULT_GROUP_CAP: usize = 1 << 18;

/// Default cap on the number of ordered pairs the pair-orbit oracle touches.
pub const DEFAULT_PAIR_CAP: usize = 1 << 22;

/// Breadth-first spanning tree of the level from the base point.
///
/// `u_x = s · u_{parent(x)}`, so `u_x(ω) = x`.
#[derive(Debug, Clone)]
pub struct Transversal {
    degree: usize,
    level: usize,
    base: usize,
    parent: Vec<Option<(usize, usize)>>,
    bfs_order: Vec<usize>,
}

impl Transversal {
    pub fn base(&self) -> Vertex {
        Vertex::from_index(self.degree, self.level, self.base)
    }

    pub fn base_index(&self) -> usize {
        self.base
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Points in the order the search reached them, base first.
    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs_order
    }

    /// Parent point and generator of the tree edge into `x`.
    pub fn parent(&self, x: usize) -> Option<(usize, usize)> {
        self.parent[x]
    }

    pub fn depth(&self, mut x: usize) -> usize {
        let mut depth = 0;
        while let Some((p, _)) = self.parent[x] {
            depth += 1;
            x = p;
        }
        depth
    }

    /// `u_x`.
    pub fn word(&self, mut x: usize) -> Word {
        let mut word = Word::empty();
        while let Some((p, g)) = self.parent[x] {
            word.push(Letter::new(g));
            x = p;
        }
        word
    }

    /// All representatives, indexed by point.
    pub fn reps(&self) -> Vec<Word> {
        (0..self.len()).map(|x| self.word(x)).collect()
    }

    /// `u_x⁻¹(y)` by walking from `x` up to the base.
    pub fn apply_rep_inverse(&self, action: &LevelAction, mut x: usize, mut y: usize) -> usize {
        while let Some((p, g)) = self.parent[x] {
            y = action.generator_inverse(g).apply(y);
            x = p;
        }
        y
    }

    /// `u_x(y)`.
    pub fn apply_rep(&self, action: &LevelAction, x: usize, y: usize) -> usize {
        action.apply_word(&self.word(x), y)
    }
}

/// Breadth-first orbit of `ω` under the generators, in declaration order.
pub fn build_transversal(action: &LevelAction, base: &Vertex) -> Result<Transversal> {
    let size = action.size();
    let start = base.index();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; size];
    let mut seen = vec![false; size];
    let mut bfs_order = Vec::with_capacity(size);
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(x) = queue.pop_front() {
        bfs_order.push(x);
        for g in 0..action.generator_count() {
            let y = action.generator(g).apply(x);
            if !seen[y] {
                seen[y] = true;
                parent[y] = Some((x, g));
                queue.push_back(y);
            }
        }
    }
    if bfs_order.len() != size {
        return Err(Error::NotTransitive {
            level: action.level(),
            reached: bfs_order.len(),
            total: size,
        });
    }
    Ok(Transversal {
        degree: action.degree(),
        level: action.level(),
        base: start,
        parent,
        bfs_order,
    })
}

/// A Schreier element of `P_n` with its permutation of the level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchreierGenerator {
    pub word: Word,
    pub perm: Permutation,
}

/// Orbits of `P_n` on the level, block 0 being `{ω}` and the other blocks
/// ordered by their least point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuborbitPartition {
    degree: usize,
    level: usize,
    base: usize,
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl SuborbitPartition {
    /// Canonicalises a point-to-root labelling (any representative per class).
    pub fn from_roots(degree: usize, level: usize, base: usize, roots: &[usize]) -> Result<Self> {
        let size = roots.len();
        let mut by_root: std::collections::HashMap<usize, Vec<usize>> = Default::default();
        for (x, &r) in roots.iter().enumerate() {
            by_root.entry(r).or_default().push(x);
        }
        let base_block = by_root.remove(&roots[base]).expect("base has a class");
        if base_block != [base] {
            return Err(Error::Integrity(format!(
                "base point shares its orbit with {} other points",
                base_block.len() - 1
            )));
        }
        let mut rest: Vec<Vec<usize>> = by_root.into_values().collect();
        rest.sort_by_key(|b| b[0]);
        let mut blocks = vec![base_block];
        blocks.extend(rest);
        let mut block_of = vec![0; size];
        for (i, b) in blocks.iter().enumerate() {
            for &x in b {
                block_of[x] = i;
            }
        }
        Ok(SuborbitPartition {
            degree,
            level,
            base,
            blocks,
            block_of,
        })
    }

    pub fn base(&self) -> Vertex {
        Vertex::from_index(self.degree, self.level, self.base)
    }

    pub fn base_index(&self) -> usize {
        self.base
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn point_count(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    /// Blocks as vertex strings.
    pub fn rendered(&self) -> Vec<Vec<String>> {
        self.blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&x| Vertex::from_index(self.degree, self.level, x).to_string())
                    .collect()
            })
            .collect()
    }

    /// Blocks as a set of sets, for order-free comparison.
    pub fn as_sets(&self) -> std::collections::BTreeSet<Vec<usize>> {
        self.blocks.iter().cloned().collect()
    }
}

fn find(roots: &mut [usize], mut x: usize) -> usize {
    while roots[x] != x {
        roots[x] = roots[roots[x]];
        x = roots[x];
    }
    x
}

fn union(roots: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(roots, a), find(roots, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        roots[hi] = lo;
    }
}

/// Everything computed for one `(G, n, ray)`: the level action, the
/// transversal, the Schreier generators and the suborbits.
#[derive(Debug, Clone)]
pub struct ParabolicLevel {
    action: LevelAction,
    transversal: Transversal,
    rep_perms: Option<Vec<Permutation>>,
    schreier: Vec<SchreierGenerator>,
    suborbits: SuborbitPartition,
}

impl ParabolicLevel {
    pub fn new(pres: &WreathPresentation, level: usize, ray: &Ray, cap: usize) -> Result<Self> {
        check_ray(pres, ray)?;
        let action = LevelAction::new(pres, level, cap)?;
        let transversal = build_transversal(&action, &ray.prefix(level))?;
        let rep_perms = (action.size() <= MATERIALIZE_LIMIT).then(|| {
            let mut perms = vec![Permutation::identity(0); action.size()];
            perms[transversal.base] = Permutation::identity(action.size());
            for &x in &transversal.bfs_order[1..] {
                let (p, g) = transversal.parent[x].unwrap();
                perms[x] = action.generator(g).compose(&perms[p]);
            }
            perms
        });
        let schreier = schreier_set(pres, &action, &transversal, rep_perms.as_deref());
        let size = action.size();
        let mut roots: Vec<usize> = (0..size).collect();
        for s in &schreier {
            for x in 0..size {
                union(&mut roots, x, s.perm.apply(x));
            }
        }
        for x in 0..size {
            roots[x] = find(&mut roots, x);
        }
        let suborbits =
            SuborbitPartition::from_roots(pres.degree(), level, transversal.base, &roots)?;
        Ok(ParabolicLevel {
            action,
            transversal,
            rep_perms,
            schreier,
            suborbits,
        })
    }

    pub fn action(&self) -> &LevelAction {
        &self.action
    }

    pub fn transversal(&self) -> &Transversal {
        &self.transversal
    }

    pub fn schreier_generators(&self) -> &[SchreierGenerator] {
        &self.schreier
    }

    pub fn suborbits(&self) -> &SuborbitPartition {
        &self.suborbits
    }

    pub fn level(&self) -> usize {
        self.action.level()
    }

    pub fn point_count(&self) -> usize {
        self.action.size()
    }

    /// `u_x` as a permutation, when materialised.
    pub fn rep_permutation(&self, x: usize) -> Option<&Permutation> {
        self.rep_perms.as_ref().map(|p| &p[x])
    }

    /// `u_x⁻¹(y)`.
    pub fn rep_inverse_apply(&self, x: usize, y: usize) -> usize {
        self.transversal.apply_rep_inverse(&self.action, x, y)
    }
}

fn check_ray(pres: &WreathPresentation, ray: &Ray) -> Result<()> {
    if ray.degree() != pres.degree() {
        return Err(Error::InvalidRay {
            text: ray.to_string(),
            message: format!(
                "ray has degree {}, group has degree {}",
                ray.degree(),
                pres.degree()
            ),
        });
    }
    Ok(())
}

fn schreier_set(
    pres: &WreathPresentation,
    action: &LevelAction,
    tv: &Transversal,
    rep_perms: Option<&[Permutation]>,
) -> Vec<SchreierGenerator> {
    let gens = action.generator_count();
    let candidates: Vec<(usize, usize)> = tv
        .bfs_order
        .iter()
        .flat_map(|&x| (0..gens).map(move |g| (x, g)))
        .filter(|&(x, g)| {
            let y = action.generator(g).apply(x);
            tv.parent[y] != Some((x, g))
        })
        .collect();
    let built: Vec<Option<SchreierGenerator>> = candidates
        .par_iter()
        .map(|&(x, g)| {
            let y = action.generator(g).apply(x);
            let raw = tv
                .word(y)
                .inverse()
                .concat(&Word::generator(g))
                .concat(&tv.word(x));
            let word = pres.reduce(&raw);
            if word.is_empty() {
                return None;
            }
            let perm = match rep_perms {
                Some(reps) => reps[y]
                    .inverse()
                    .compose(action.generator(g))
                    .compose(&reps[x]),
                None => action.word_permutation(&word),
            };
            Some(SchreierGenerator { word, perm })
        })
        .collect();
    let mut seen = HashSet::new();
    built
        .into_iter()
        .flatten()
        .filter(|s| seen.insert(s.perm.clone()))
        .collect()
}

pub fn orbit_transversal(
    pres: &WreathPresentation,
    level: usize,
    ray: &Ray,
    cap: usize,
) -> Result<Transversal> {
    check_ray(pres, ray)?;
    let action = LevelAction::new(pres, level, cap)?;
    build_transversal(&action, &ray.prefix(level))
}

/// Schreier words for `P_n`, reduced, nonempty, one per level permutation.
pub fn schreier_generators(
    pres: &WreathPresentation,
    level: usize,
    ray: &Ray,
    cap: usize,
) -> Result<Vec<Word>> {
    Ok(ParabolicLevel::new(pres, level, ray, cap)?
        .schreier
        .into_iter()
        .map(|s| s.word)
        .collect())
}

pub fn stabilizer_suborbits(
    pres: &WreathPresentation,
    level: usize,
    ray: &Ray,
    cap: usize,
) -> Result<SuborbitPartition> {
    Ok(ParabolicLevel::new(pres, level, ray, cap)?.suborbits)
}

/// All elements of `G_n` as permutations, by breadth-first closure.
pub fn enumerate_level_group(action: &LevelAction, cap: usize) -> Result<Vec<Permutation>> {
    let identity = Permutation::identity(action.size());
    let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
    let mut elements = vec![identity];
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for g in 0..action.generator_count() {
            let next = action.generator(g).compose(&current);
            if !seen.contains(&next) {
                if elements.len() >= cap {
                    return Err(Error::EnumerationCap {
                        partial: elements.len(),
                        cap,
                    });
                }
                seen.insert(next.clone());
                elements.push(next);
            }
        }
    }
    Ok(elements)
}

/// `|G_n|` by exhaustive closure.
pub fn bfs_group_order(
    pres: &WreathPresentation,
    level: usize,
    point_cap: usize,
    group_cap: usize,
) -> Result<usize> {
    let action = LevelAction::new(pres, level, point_cap)?;
    Ok(enumerate_level_group(&action, group_cap)?.len())
}

/// Suborbits from the full list of elements of `G_n` fixing `ω`.
pub fn oracle_suborbits(
    pres: &WreathPresentation,
    level: usize,
    ray: &Ray,
    point_cap: usize,
    group_cap: usize,
) -> Result<SuborbitPartition> {
    check_ray(pres, ray)?;
    let action = LevelAction::new(pres, level, point_cap)?;
    let base = ray.prefix(level).index();
    let stabilizer: Vec<Permutation> = enumerate_level_group(&action, group_cap)?
        .into_iter()
        .filter(|g| g.apply(base) == base)
        .collect();
    let size = action.size();
    let mut roots: Vec<usize> = (0..size).collect();
    for y in 0..size {
        if roots[y] != y {
            continue;
        }
        for g in &stabilizer {
            let z = g.apply(y);
            if z > y {
                roots[z] = y;
            }
        }
    }
    SuborbitPartition::from_roots(pres.degree(), level, base, &roots)
}

/// Suborbits from the `G`-orbits on ordered pairs: `y` and `z` share a
/// suborbit exactly when `(ω, y)` and `(ω, z)` share a pair orbit.
pub fn pair_orbit_suborbits(
    pres: &WreathPresentation,
    level: usize,
    ray: &Ray,
    point_cap: usize,
    pair_cap: usize,
) -> Result<SuborbitPartition> {
    check_ray(pres, ray)?;
    let action = LevelAction::new(pres, level, point_cap)?;
    let size = action.size();
    let pairs = size * size;
    if pairs > pair_cap {
        return Err(Error::SizeCap {
            what: "ordered pairs",
            requested: pairs as u128,
            cap: pair_cap as u128,
        });
    }
    let mut roots: Vec<usize> = (0..pairs).collect();
    for g in 0..action.generator_count() {
        let perm = action.generator(g);
        for x in 0..size {
            let gx = perm.apply(x);
            for y in 0..size {
                union(&mut roots, x * size + y, gx * size + perm.apply(y));
            }
        }
    }
    let base = ray.prefix(level).index();
    let row: Vec<usize> = (0..size)
        .map(|y| find(&mut roots, base * size + y))
        .collect();
    SuborbitPartition::from_roots(pres.degree(), level, base, &row)
}
