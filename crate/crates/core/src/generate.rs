//! Seeded random instances. The same seed and parameters always produce the
//! same instance.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph_manifold::{Block, Edge, End, GluingMatrix, GraphManifold, Retwist};
use crate::halfplane::{validate_pattern, GeodesicWallPattern, Orbit, Rule};
use crate::wallspace::Wallspace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("unsatisfiable parameters: {0}")]
    Unsatisfiable(String),
    #[error("no valid instance after {0} attempts")]
    Exhausted(usize),
}

pub type Result<T> = std::result::Result<T, GenerateError>;

const ATTEMPTS: usize = 10_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldParams {
    pub blocks: usize,
    pub max_genus: u32,
    pub max_boundary: u32,
    /// Bound on the absolute value of every matrix entry.
    pub max_entry: i64,
    /// Longest word in the generators of GL(2, Z).
    pub word_len: usize,
    /// Boundary tori left unglued.
    pub free_tori: usize,
}

impl Default for ManifoldParams {
    fn default() -> Self {
        ManifoldParams { blocks: 2, max_genus: 1, max_boundary: 3, max_entry: 3, word_len: 4, free_tori: 0 }
    }
}

fn mul(x: GluingMatrix, y: GluingMatrix) -> Option<GluingMatrix> {
    let f = |u: i64, v: i64, s: i64, t: i64| u.checked_mul(v)?.checked_add(s.checked_mul(t)?);
    Some(GluingMatrix {
        a: f(x.a, y.a, x.p, y.b)?,
        p: f(x.a, y.p, x.p, y.q)?,
        b: f(x.b, y.a, x.q, y.b)?,
        q: f(x.b, y.p, x.q, y.q)?,
    })
}

/// Product of a random word in the shears, the quarter turn and the
/// reflection, resampled until `a != 0` and every entry is within bounds.
pub fn random_gluing<R: Rng>(rng: &mut R, max_entry: i64, word_len: usize) -> Result<GluingMatrix> {
    if max_entry < 1 {
        return Err(GenerateError::Unsatisfiable("matrix entry bound must be at least 1".into()));
    }
    let gens = [
        GluingMatrix::new(1, 0, 1, 1),
        GluingMatrix::new(1, 0, -1, 1),
        GluingMatrix::new(1, 1, 0, 1),
        GluingMatrix::new(1, -1, 0, 1),
        GluingMatrix::new(0, 1, -1, 0),
        GluingMatrix::new(0, -1, 1, 0),
        GluingMatrix::new(1, 0, 0, -1),
    ];
    for _ in 0..ATTEMPTS {
        let len = rng.gen_range(1..=word_len.max(1));
        let mut m = Some(GluingMatrix::new(1, 0, 0, 1));
        for _ in 0..len {
            m = m.and_then(|m| mul(m, *gens.choose(rng).unwrap()));
        }
        if let Some(m) = m {
            if m.a != 0 && [m.a, m.b, m.p, m.q].iter().all(|x| x.abs() <= max_entry) {
                return Ok(m);
            }
        }
    }
    Err(GenerateError::Exhausted(ATTEMPTS))
}

pub fn random_manifold(seed: u64, params: &ManifoldParams) -> Result<GraphManifold> {
    let p = params;
    if p.blocks == 0 {
        return Err(GenerateError::Unsatisfiable("at least one block is required".into()));
    }
    if p.max_boundary == 0 {
        return Err(GenerateError::Unsatisfiable("blocks need at least one boundary torus".into()));
    }
    if p.max_genus == 0 && p.max_boundary < 3 {
        return Err(GenerateError::Unsatisfiable("genus 0 bases need at least 3 boundary circles".into()));
    }
    let mut rng = rng(seed);
    for _ in 0..ATTEMPTS {
        let mut blocks = Vec::with_capacity(p.blocks);
        for k in 0..p.blocks {
            let genus = loop {
                let g = rng.gen_range(0..=p.max_genus);
                if g > 0 || p.max_boundary >= 3 {
                    break g;
                }
            };
            let min_b = if genus == 0 { 3 } else { 1 };
            let boundary = rng.gen_range(min_b..=p.max_boundary);
            blocks.push(Block { id: format!("v{k}"), genus, boundary });
        }
        let mut slots: Vec<(usize, u32)> =
            blocks.iter().enumerate().flat_map(|(k, b)| (0..b.boundary).map(move |t| (k, t))).collect();
        if slots.len() <= p.free_tori || (slots.len() - p.free_tori) % 2 == 1 {
            continue;
        }
        slots.shuffle(&mut rng);
        let glued = &slots[p.free_tori..];
        let used: BTreeSet<usize> = glued.iter().map(|s| s.0).collect();
        if used.len() != blocks.len() {
            continue;
        }
        let mut edges = Vec::with_capacity(glued.len() / 2);
        for pair in glued.chunks(2) {
            let g = random_gluing(&mut rng, p.max_entry, p.word_len)?;
            let o = g.opposite().expect("generators are unimodular");
            edges.push(Edge {
                ends: [
                    End { block: pair[0].0, torus: pair[0].1, matrix: g },
                    End { block: pair[1].0, torus: pair[1].1, matrix: o },
                ],
            });
        }
        if let Ok(m) = GraphManifold::new(blocks, edges) {
            if m.components() == 1 {
                return Ok(m);
            }
        }
    }
    Err(GenerateError::Exhausted(ATTEMPTS))
}

/// Twists with entries in `[-max, max]` summing to zero on every block.
pub fn random_retwist<R: Rng>(rng: &mut R, m: &GraphManifold, max: i64) -> Retwist {
    let mut r = Retwist::default();
    for (v, b) in m.blocks().iter().enumerate() {
        let n = b.boundary as usize;
        let mut ms: Vec<i64> = (0..n).map(|_| rng.gen_range(-max..=max)).collect();
        let sum: i64 = ms.iter().sum();
        ms[n - 1] -= sum;
        r.twists.insert(v, ms);
    }
    r
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallspaceParams {
    pub points: usize,
    pub walls: usize,
}

/// Distinct bipartitions of `points` points with both sides nonempty.
pub fn random_wallspace(seed: u64, params: &WallspaceParams) -> Result<Wallspace> {
    let n = params.points;
    if n < 2 {
        return Err(GenerateError::Unsatisfiable("at least two points are needed for a wall".into()));
    }
    if n > 64 {
        return Err(GenerateError::Unsatisfiable("at most 64 points".into()));
    }
    let available = (1u128 << (n - 1)) - 1;
    if params.walls as u128 > available {
        return Err(GenerateError::Unsatisfiable(format!("{n} points admit only {available} distinct walls")));
    }
    let mut rng = rng(seed);
    let mut seen = BTreeSet::new();
    let mut walls = Vec::with_capacity(params.walls);
    while walls.len() < params.walls {
        // point 0 always lies on side 0
        let mask: u64 = rng.gen::<u64>() & ((u64::MAX >> (64 - n)) & !1);
        if mask == 0 || !seen.insert(mask) {
            continue;
        }
        let side1: BTreeSet<usize> = (0..n).filter(|&i| (mask >> i) & 1 == 1).collect();
        let side0: BTreeSet<usize> = (0..n).filter(|i| !side1.contains(i)).collect();
        walls.push((side0, side1, 1));
    }
    Wallspace::bipartition(n, walls).map_err(|e| GenerateError::Unsatisfiable(e.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternParams {
    pub orbits: usize,
    pub m: u64,
    pub max_r: u64,
    /// Probability that a pair of distinct orbits always crosses.
    pub always: f64,
}

impl Default for PatternParams {
    fn default() -> Self {
        PatternParams { orbits: 2, m: 3, max_r: 3, always: 0.2 }
    }
}

/// Random rules, resampled until the pattern passes validation.
pub fn random_pattern(seed: u64, params: &PatternParams) -> Result<GeodesicWallPattern> {
    let p = params;
    if p.orbits == 0 || p.orbits as u64 > p.m {
        return Err(GenerateError::Unsatisfiable(format!("{} orbits do not fit in period {}", p.orbits, p.m)));
    }
    if !(0.0..=1.0).contains(&p.always) {
        return Err(GenerateError::Unsatisfiable("crossing probability must lie in [0, 1]".into()));
    }
    let mut rng = rng(seed);
    for _ in 0..ATTEMPTS {
        let mut positions: Vec<u64> = (0..p.m).collect();
        positions.shuffle(&mut rng);
        let mut positions = positions[..p.orbits].to_vec();
        positions.sort_unstable();
        let orbits: Vec<Orbit> =
            positions.iter().enumerate().map(|(k, &pos)| Orbit { id: orbit_name(k), pos }).collect();
        let mut rules = Vec::new();
        for i in 0..p.orbits {
            for j in i..p.orbits {
                let rule = if i != j && rng.gen_bool(p.always) {
                    Rule::Always
                } else if p.max_r > 0 && rng.gen_bool(0.5) {
                    let cap = if i == j { p.max_r.min(p.m - 1) } else { p.max_r };
                    if cap == 0 {
                        Rule::Never
                    } else {
                        Rule::Within(rng.gen_range(1..=cap))
                    }
                } else {
                    Rule::Never
                };
                if rule != Rule::Never {
                    rules.push(((i, j), rule));
                }
            }
        }
        let Ok(pattern) = GeodesicWallPattern::new(p.m, orbits, rules) else { continue };
        if matches!(validate_pattern(&pattern, pattern.check_window()), Ok(None)) {
            return Ok(pattern);
        }
    }
    Err(GenerateError::Exhausted(ATTEMPTS))
}

fn orbit_name(k: usize) -> String {
    let letters = b"abcdefghijklmnopqrstuvwxyz";
    if k < letters.len() {
        (letters[k] as char).to_string()
    } else {
        format!("o{k}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifolds_are_deterministic_and_valid() {
        let params = ManifoldParams::default();
        for seed in 0..50 {
            let m = random_manifold(seed, &params).unwrap();
            assert_eq!(m, random_manifold(seed, &params).unwrap());
            assert_eq!(m.components(), 1);
            for b in 0..m.blocks().len() {
                assert!(m.is_fully_glued(b));
            }
            for e in m.edges() {
                for end in &e.ends {
                    let g = end.matrix;
                    assert!(g.a != 0 && [g.a, g.b, g.p, g.q].iter().all(|x| x.abs() <= 3));
                }
            }
        }
        let free = ManifoldParams { free_tori: 1, ..params };
        let m = random_manifold(3, &free).unwrap();
        assert_eq!((0..m.blocks().len()).map(|b| m.free_tori(b).len()).sum::<usize>(), 1);
    }

    #[test]
    fn unsatisfiable_parameters() {
        let bad = ManifoldParams { max_boundary: 0, ..ManifoldParams::default() };
        assert!(matches!(random_manifold(0, &bad), Err(GenerateError::Unsatisfiable(_))));
        assert!(random_wallspace(0, &WallspaceParams { points: 3, walls: 4 }).is_err());
        assert!(random_pattern(0, &PatternParams { orbits: 4, m: 3, ..PatternParams::default() }).is_err());
    }

    #[test]
    fn wallspaces_and_patterns() {
        let ws = random_wallspace(11, &WallspaceParams { points: 5, walls: 10 }).unwrap();
        assert_eq!(ws.walls().len(), 10);
        let p = random_pattern(5, &PatternParams::default()).unwrap();
        assert_eq!(p, random_pattern(5, &PatternParams::default()).unwrap());
    }

    #[test]
    fn retwists_sum_to_zero() {
        let m = random_manifold(1, &ManifoldParams::default()).unwrap();
        let r = random_retwist(&mut rng(9), &m, 3);
        for ms in r.twists.values() {
            assert_eq!(ms.iter().sum::<i64>(), 0);
        }
    }
}
