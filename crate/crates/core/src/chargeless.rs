//! The chargeless condition: every block carries integers `n_e != 0` on its
//! glued ends with `sum n_e [fiber of the neighbor at e] = 0` in the block's
//! first homology.
//!
//! For a fully glued block the coefficient vector on the boundary classes
//! must be a multiple `t` of the relation, so `n_e = t / a_e`, and the fiber
//! coefficient vanishes exactly when `sum b_e / a_e = 0`. That sum is the
//! block's charge.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{format_rational, lcm_i64, rat, Rational};
use crate::graph_manifold::{h1_block, retwist, BlockHomology, EndRef, GraphManifold, ManifoldError, Retwist};
use crate::smith::{integer_kernel, IntMatrix, RowLattice};
use crate::SCHEMA;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChargeError {
    #[error(transparent)]
    Manifold(#[from] ManifoldError),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    BudgetExceeded { size: u128, cap: u128 },
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("internal inconsistency: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, ChargeError>;

/// Default cap on brute-force candidates.
pub const DEFAULT_SEARCH_CAP: u128 = 50_000_000;

/// One integer per glued end of a block, in torus order.
pub type Witness = Vec<(EndRef, i64)>;

fn block_or_err(m: &GraphManifold, block: usize) -> Result<()> {
    if block < m.blocks().len() {
        Ok(())
    } else {
        Err(ChargeError::InvalidInput(format!("no block with index {block}")))
    }
}

/// Class of `sum n_e (a_e c_e + b_e h)` in the generators of `h`.
pub fn witness_class(m: &GraphManifold, h: &BlockHomology, witness: &[(EndRef, i64)]) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); h.generator_count()];
    for &(r, n) in witness {
        let end = m.end(r);
        let g = end.matrix;
        v[h.boundary_index(end.torus)] += BigInt::from(n) * g.a;
        v[h.fiber_index()] += BigInt::from(n) * g.b;
    }
    v
}

/// Whether the witness is nonzero on every glued end and sums to zero in
/// the block's homology.
pub fn verify_witness(m: &GraphManifold, block: usize, witness: &[(EndRef, i64)]) -> bool {
    let b = &m.blocks()[block];
    let ends = m.ends_of(block);
    if witness.len() != ends.len() || witness.iter().zip(&ends).any(|(&(r, n), &e)| r != e || n == 0) {
        return false;
    }
    let h = h1_block(b.genus, b.boundary);
    h.is_zero(&witness_class(m, &h, witness))
}

/// `sum b_e / a_e` over the ends of a fully glued block.
pub fn block_charge(m: &GraphManifold, block: usize) -> Result<Rational> {
    block_or_err(m, block)?;
    if !m.is_fully_glued(block) {
        return Err(ChargeError::Unsupported(format!(
            "block {:?} has free boundary tori {:?}; its verdict comes from the literal homology solver",
            m.blocks()[block].id,
            m.free_tori(block)
        )));
    }
    Ok(m.ends_of(block)
        .into_iter()
        .map(|r| {
            let g = m.end(r).matrix;
            rat(g.b, g.a)
        })
        .sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Chargeless(Witness),
    Obstructed(String),
}

impl Verdict {
    pub fn is_chargeless(&self) -> bool {
        matches!(self, Verdict::Chargeless(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Chargeless(w) => Some(w),
            Verdict::Obstructed(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockReport {
    pub block: usize,
    pub id: String,
    /// Present for fully glued blocks.
    pub charge: Option<Rational>,
    pub free_tori: Vec<u32>,
    pub verdict: Verdict,
    /// For blocks with free tori: the verdict in homology relative to them.
    pub relative: Option<Verdict>,
}

impl BlockReport {
    pub fn chargeless(&self) -> bool {
        self.verdict.is_chargeless()
    }

    pub fn interpretation_sensitive(&self) -> bool {
        self.relative.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeReport {
    pub blocks: Vec<BlockReport>,
}

impl ChargeReport {
    pub fn chargeless(&self) -> bool {
        self.blocks.iter().all(BlockReport::chargeless)
    }

    /// Verdict with free tori absorbing homology wherever present.
    pub fn relative_chargeless(&self) -> bool {
        self.blocks.iter().all(|b| b.relative.as_ref().map_or(b.chargeless(), Verdict::is_chargeless))
    }

    pub fn interpretation_sensitive(&self) -> bool {
        self.blocks.iter().any(BlockReport::interpretation_sensitive)
    }

    pub fn flags(&self) -> Vec<bool> {
        self.blocks.iter().map(BlockReport::chargeless).collect()
    }
}

fn closed_form(m: &GraphManifold, block: usize) -> Result<(Rational, Verdict)> {
    let charge = block_charge(m, block)?;
    let b = &m.blocks()[block];
    if !charge.is_zero() {
        let why = format!(
            "charge {} is nonzero, so every choice n_e = t/a_e leaves t*({})*h != 0",
            format_rational(&charge),
            format_rational(&charge)
        );
        return Ok((charge, Verdict::Obstructed(why)));
    }
    let ends = m.ends_of(block);
    let t = lcm_i64(ends.iter().map(|&r| m.end(r).matrix.a))
        .ok_or_else(|| ChargeError::Overflow(format!("lcm of the a entries at block {:?}", b.id)))?;
    let witness: Witness = ends.iter().map(|&r| (r, t / m.end(r).matrix.a)).collect();
    if !verify_witness(m, block, &witness) {
        return Err(ChargeError::Structural(format!("closed-form witness for block {:?} fails substitution", b.id)));
    }
    Ok((charge, Verdict::Chargeless(witness)))
}

/// Solves `sum n_e x_e in rows(h)` over the integers with every `n_e != 0`.
fn literal_solve(m: &GraphManifold, block: usize, h: &BlockHomology) -> Result<Verdict> {
    let ends = m.ends_of(block);
    let k = ends.len();
    let gens = h.generator_count();
    let rels = h.relations.rows();
    // unknowns: n_1..n_k then one multiplier per relation
    let mut rows = vec![vec![BigInt::zero(); k + rels]; gens];
    for (j, &r) in ends.iter().enumerate() {
        let end = m.end(r);
        rows[h.boundary_index(end.torus)][j] += end.matrix.a;
        rows[h.fiber_index()][j] += end.matrix.b;
    }
    for r in 0..rels {
        for (g, row) in rows.iter_mut().enumerate() {
            row[k + r] = -h.relations[(r, g)].clone();
        }
    }
    let kernel = integer_kernel(&IntMatrix::from_rows(&rows));
    if let Some(j) = (0..k).find(|&j| kernel.iter().all(|v| v[j].is_zero())) {
        return Ok(Verdict::Obstructed(format!("every solution has n = 0 at {}", ends[j])));
    }
    // a combination with coefficients 1, t, t^2, ... misses the finitely
    // many roots of each coordinate polynomial for some small t
    let bound = k * kernel.len() + 2;
    let mut found = None;
    for t in 1..=bound as i64 {
        let mut x = vec![BigInt::zero(); k + rels];
        let mut c = BigInt::from(1);
        for v in &kernel {
            for (xi, vi) in x.iter_mut().zip(v) {
                *xi += &c * vi;
            }
            c *= t;
        }
        if x[..k].iter().all(|n| !n.is_zero()) {
            found = Some(x);
            break;
        }
    }
    let mut x = found.ok_or_else(|| ChargeError::Structural("no nonvanishing kernel combination".into()))?;
    let g = x.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    for v in x.iter_mut() {
        *v /= &g;
    }
    let lattice = RowLattice::new(&h.relations);
    let probe = |n: &[BigInt]| {
        let w: Witness = ends.iter().zip(n).map(|(&r, v)| (r, v.to_i64().unwrap_or(0))).collect();
        lattice.contains(&witness_class(m, h, &w))
    };
    let mut n: Vec<BigInt> = x[..k].to_vec();
    let ng = n.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    let reduced: Vec<BigInt> = n.iter().map(|v| v / &ng).collect();
    if reduced.iter().all(|v| v.to_i64().is_some()) && probe(&reduced) {
        n = reduced;
    }
    if n[0].is_negative() {
        n.iter_mut().for_each(|v| *v = -v.clone());
    }
    let mut witness = Witness::with_capacity(k);
    for (&r, v) in ends.iter().zip(&n) {
        let v = v.to_i64().ok_or_else(|| ChargeError::Overflow(format!("witness entry {v} at {r}")))?;
        witness.push((r, v));
    }
    if !lattice.contains(&witness_class(m, h, &witness)) {
        return Err(ChargeError::Structural("literal witness fails substitution".into()));
    }
    Ok(Verdict::Chargeless(witness))
}

/// Verdict from the integer-linear system in the block's homology.
pub fn literal_verdict(m: &GraphManifold, block: usize) -> Result<Verdict> {
    block_or_err(m, block)?;
    let b = &m.blocks()[block];
    literal_solve(m, block, &h1_block(b.genus, b.boundary))
}

/// Verdict in homology relative to the block's free tori.
pub fn relative_verdict(m: &GraphManifold, block: usize) -> Result<Verdict> {
    block_or_err(m, block)?;
    let b = &m.blocks()[block];
    literal_solve(m, block, &h1_block(b.genus, b.boundary).relative_to(&m.free_tori(block)))
}

pub fn block_report(m: &GraphManifold, block: usize) -> Result<BlockReport> {
    block_or_err(m, block)?;
    let b = &m.blocks()[block];
    let free_tori = m.free_tori(block);
    let (charge, verdict, relative) = if free_tori.is_empty() {
        let (charge, verdict) = closed_form(m, block)?;
        (Some(charge), verdict, None)
    } else {
        (None, literal_verdict(m, block)?, Some(relative_verdict(m, block)?))
    };
    Ok(BlockReport { block, id: b.id.clone(), charge, free_tori, verdict, relative })
}

pub fn is_chargeless(m: &GraphManifold) -> Result<ChargeReport> {
    let blocks = (0..m.blocks().len()).map(|v| block_report(m, v)).collect::<Result<_>>()?;
    Ok(ChargeReport { blocks })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForce {
    Found(Witness),
    Exhausted(u64),
}

/// Search order of the values in `[-n, n] \ {0}`: 1, -1, 2, -2, ...
fn value_at(i: u64) -> i64 {
    let k = (i / 2 + 1) as i64;
    if i % 2 == 0 {
        k
    } else {
        -k
    }
}

/// Exhaustive search for the first witness with entries in `[-n, n] \ {0}`,
/// ordered lexicographically by ends in torus order and values as 1, -1, 2,
/// -2, ... . Each candidate is tested by membership in the homology
/// relations. `parallel` splits the search over the first end; the result
/// does not depend on it.
pub fn brute_force_witness(m: &GraphManifold, block: usize, n: u64, cap: u128, parallel: bool) -> Result<BruteForce> {
    block_or_err(m, block)?;
    if n == 0 {
        return Err(ChargeError::InvalidInput("search bound must be at least 1".into()));
    }
    if n > i64::MAX as u64 / 2 {
        return Err(ChargeError::InvalidInput(format!("search bound {n} is too large")));
    }
    let ends = m.ends_of(block);
    let width = 2 * n as u128;
    let size = (0..ends.len()).try_fold(1u128, |acc, _| acc.checked_mul(width)).unwrap_or(u128::MAX);
    if size > cap {
        return Err(ChargeError::BudgetExceeded { size, cap });
    }
    let b = &m.blocks()[block];
    let h = h1_block(b.genus, b.boundary);
    let lattice = RowLattice::new(&h.relations);
    let classes: Vec<Vec<BigInt>> = ends
        .iter()
        .map(|&r| {
            let end = m.end(r);
            h.torus_class(end.torus, end.matrix.a, end.matrix.b)
        })
        .collect();
    if ends.is_empty() {
        return Ok(BruteForce::Exhausted(n));
    }
    let search_from = |first: u64| -> Option<Witness> {
        let mut idx = vec![0u64; ends.len()];
        idx[0] = first;
        loop {
            let mut total = vec![BigInt::zero(); h.generator_count()];
            for (cls, &i) in classes.iter().zip(&idx) {
                let v = value_at(i);
                for (t, c) in total.iter_mut().zip(cls) {
                    *t += c * v;
                }
            }
            if lattice.contains(&total) {
                return Some(ends.iter().zip(&idx).map(|(&r, &i)| (r, value_at(i))).collect());
            }
            let mut j = ends.len() - 1;
            loop {
                if j == 0 {
                    return None;
                }
                idx[j] += 1;
                if idx[j] < 2 * n {
                    break;
                }
                idx[j] = 0;
                j -= 1;
            }
        }
    };
    let found = if parallel {
        (0..2 * n).into_par_iter().find_map_first(search_from)
    } else {
        (0..2 * n).find_map(search_from)
    };
    Ok(found.map_or(BruteForce::Exhausted(n), BruteForce::Found))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnulusEntry {
    pub edge: usize,
    pub end: usize,
    /// Torus of the surface's block where the annuli attach.
    pub torus: u32,
    /// Block holding the vertical annuli.
    pub host: String,
    pub host_torus: u32,
    pub n: i64,
    pub copies: u64,
    /// `n * (a, b)`: the boundary class in the near `(c, h)` basis.
    pub slope: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurbineBlock {
    pub block: String,
    pub surface_copies: u32,
    pub annuli: Vec<AnnulusEntry>,
    /// Free tori of the block, each carrying one vertical annulus.
    pub vertical_annuli: Vec<u32>,
    /// Whether the witness came from homology relative to the free tori.
    pub relative: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurbineManifest {
    pub schema: String,
    pub blocks: Vec<TurbineBlock>,
}

/// Doubled horizontal surfaces with `2|n_e|` annuli per end. With
/// `allow_relative`, blocks obstructed only by their free tori use the
/// relative witness.
pub fn turbine_manifest(m: &GraphManifold, report: &ChargeReport, allow_relative: bool) -> Result<TurbineManifest> {
    let mut blocks = Vec::with_capacity(report.blocks.len());
    for b in &report.blocks {
        let (witness, relative) = match (&b.verdict, &b.relative) {
            (Verdict::Chargeless(w), _) => (w, false),
            (_, Some(Verdict::Chargeless(w))) if allow_relative => (w, true),
            _ => {
                return Err(ChargeError::InvalidInput(format!(
                    "block {:?} is not chargeless, so there is no turbine collection",
                    b.id
                )))
            }
        };
        let annuli = witness
            .iter()
            .map(|&(r, n)| {
                let near = m.end(r);
                let far = m.end(r.opposite());
                let overflow = || ChargeError::Overflow(format!("slope at {r}"));
                Ok(AnnulusEntry {
                    edge: r.edge,
                    end: r.side + 1,
                    torus: near.torus,
                    host: m.blocks()[far.block].id.clone(),
                    host_torus: far.torus,
                    n,
                    copies: 2 * n.unsigned_abs(),
                    slope: [
                        n.checked_mul(near.matrix.a).ok_or_else(overflow)?,
                        n.checked_mul(near.matrix.b).ok_or_else(overflow)?,
                    ],
                })
            })
            .collect::<Result<_>>()?;
        blocks.push(TurbineBlock {
            block: b.id.clone(),
            surface_copies: 2,
            annuli,
            vertical_annuli: b.free_tori.clone(),
            relative,
        });
    }
    Ok(TurbineManifest { schema: SCHEMA.to_string(), blocks })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetwistCheck {
    pub retwisted: GraphManifold,
    pub before: Vec<bool>,
    pub after: Vec<bool>,
}

impl RetwistCheck {
    pub fn unchanged(&self) -> bool {
        self.before == self.after
    }
}

pub fn retwist_invariance_check(m: &GraphManifold, r: &Retwist) -> Result<RetwistCheck> {
    let retwisted = retwist(m, r)?;
    let before = is_chargeless(m)?.flags();
    let after = is_chargeless(&retwisted)?.flags();
    Ok(RetwistCheck { retwisted, before, after })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub edge: usize,
    pub end: usize,
    pub torus: u32,
    pub n: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictDoc {
    pub chargeless: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<WitnessDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReportDoc {
    pub block: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub charge: Option<String>,
    pub free_tori: Vec<u32>,
    #[serde(flatten)]
    pub verdict: VerdictDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relative: Option<VerdictDoc>,
    pub interpretation_sensitive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeReportDoc {
    pub schema: String,
    pub chargeless: bool,
    pub interpretation_sensitive: bool,
    pub relative_chargeless: bool,
    pub blocks: Vec<BlockReportDoc>,
}

fn verdict_doc(m: &GraphManifold, v: &Verdict) -> VerdictDoc {
    match v {
        Verdict::Chargeless(w) => VerdictDoc {
            chargeless: true,
            witness: Some(
                w.iter()
                    .map(|&(r, n)| WitnessDoc { edge: r.edge, end: r.side + 1, torus: m.end(r).torus, n })
                    .collect(),
            ),
            obstruction: None,
        },
        Verdict::Obstructed(why) => VerdictDoc { chargeless: false, witness: None, obstruction: Some(why.clone()) },
    }
}

impl ChargeReport {
    pub fn to_doc(&self, m: &GraphManifold) -> ChargeReportDoc {
        ChargeReportDoc {
            schema: SCHEMA.to_string(),
            chargeless: self.chargeless(),
            interpretation_sensitive: self.interpretation_sensitive(),
            relative_chargeless: self.relative_chargeless(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockReportDoc {
                    block: b.id.clone(),
                    charge: b.charge.as_ref().map(format_rational),
                    free_tori: b.free_tori.clone(),
                    verdict: verdict_doc(m, &b.verdict),
                    relative: b.relative.as_ref().map(|v| verdict_doc(m, v)),
                    interpretation_sensitive: b.interpretation_sensitive(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Chargeless(w) => {
                let parts: Vec<String> = w.iter().map(|(r, n)| format!("{r}={n}")).collect();
                write!(f, "chargeless, witness {}", parts.join(" "))
            }
            Verdict::Obstructed(why) => write!(f, "not chargeless: {why}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_manifold::tests::{block, edge, flip};
    use crate::graph_manifold::GluingMatrix;
    use std::collections::BTreeMap;

    fn two_end_pair() -> GraphManifold {
        let g = GluingMatrix::new(2, 1, 1, 1);
        GraphManifold::new(
            vec![block("v", 1, 2), block("w", 1, 2)],
            vec![edge(0, 0, 1, 1, g), edge(0, 1, 1, 0, g.opposite().unwrap())],
        )
        .unwrap()
    }

    fn single_end(g: GluingMatrix) -> GraphManifold {
        GraphManifold::new(vec![block("v", 1, 1), block("w", 1, 1)], vec![edge(0, 0, 1, 0, g)]).unwrap()
    }

    fn ns(w: &Witness) -> Vec<i64> {
        w.iter().map(|&(_, n)| n).collect()
    }

    #[test]
    fn charges() {
        assert_eq!(block_charge(&flip(), 0).unwrap(), rat(0, 1));
        assert_eq!(block_charge(&single_end(GluingMatrix::new(1, 1, 0, 1)), 0).unwrap(), rat(1, 1));
        let m = two_end_pair();
        assert_eq!(
            m.ends_of(0).iter().map(|&r| (m.end(r).matrix.a, m.end(r).matrix.b)).collect::<Vec<_>>(),
            vec![(2, 1), (2, -1)]
        );
        assert_eq!(block_charge(&m, 0).unwrap(), rat(0, 1));
    }

    #[test]
    fn worked_examples() {
        let r = is_chargeless(&flip()).unwrap();
        assert!(r.chargeless());
        for b in &r.blocks {
            assert_eq!(ns(b.verdict.witness().unwrap()), vec![1]);
        }

        let r = is_chargeless(&single_end(GluingMatrix::new(1, 1, 0, 1))).unwrap();
        assert!(!r.chargeless());
        assert!(!r.blocks[0].chargeless());

        let m = two_end_pair();
        let r = is_chargeless(&m).unwrap();
        assert!(r.chargeless());
        assert_eq!(ns(r.blocks[0].verdict.witness().unwrap()), vec![1, 1]);
        assert_eq!(ns(r.blocks[1].verdict.witness().unwrap()), vec![1, 1]);
    }

    #[test]
    fn brute_force_examples() {
        let found = |m: &GraphManifold, n| match brute_force_witness(m, 0, n, DEFAULT_SEARCH_CAP, false).unwrap() {
            BruteForce::Found(w) => Some(ns(&w)),
            BruteForce::Exhausted(_) => None,
        };
        assert_eq!(found(&flip(), 1), Some(vec![1]));
        assert_eq!(found(&two_end_pair(), 1), Some(vec![1, 1]));
        assert_eq!(found(&single_end(GluingMatrix::new(1, 1, 0, 1)), 20), None);

        // ends (2,1) and (3,1): 2 and 3 have no common multiple below 2, 3
        let m = GraphManifold::new(
            vec![block("v", 0, 3), block("w", 1, 1), block("x", 1, 1), block("y", 1, 1)],
            vec![
                edge(0, 0, 1, 0, GluingMatrix::new(2, 1, 1, 1)),
                edge(0, 1, 2, 0, GluingMatrix::new(3, 1, 2, 1)),
                edge(0, 2, 3, 0, GluingMatrix::new(1, 0, 0, 1)),
            ],
        )
        .unwrap();
        assert_eq!(block_charge(&m, 0).unwrap(), rat(5, 6));
        assert_eq!(found(&m, 20), None);
        assert!(matches!(brute_force_witness(&m, 0, 1000, 1000, false), Err(ChargeError::BudgetExceeded { .. })));
        assert_eq!(
            brute_force_witness(&two_end_pair(), 0, 4, DEFAULT_SEARCH_CAP, true).unwrap(),
            brute_force_witness(&two_end_pair(), 0, 4, DEFAULT_SEARCH_CAP, false).unwrap()
        );
    }

    #[test]
    fn literal_solver_matches_closed_form() {
        for m in [flip(), two_end_pair(), single_end(GluingMatrix::new(1, 1, 0, 1))] {
            let r = is_chargeless(&m).unwrap();
            for b in &r.blocks {
                let lit = literal_verdict(&m, b.block).unwrap();
                assert_eq!(lit.is_chargeless(), b.chargeless());
                if let Some(w) = lit.witness() {
                    assert!(verify_witness(&m, b.block, w));
                }
            }
        }
    }

    #[test]
    fn free_boundary_blocks_report_both_verdicts() {
        let m = GraphManifold::new(
            vec![block("v", 0, 3), block("w", 1, 1)],
            vec![edge(0, 0, 1, 0, GluingMatrix::new(2, 1, 1, 1))],
        )
        .unwrap();
        assert!(matches!(block_charge(&m, 0), Err(ChargeError::Unsupported(_))));
        let r = is_chargeless(&m).unwrap();
        let v = &r.blocks[0];
        assert!(v.interpretation_sensitive());
        assert!(!v.chargeless());
        assert!(v.relative.as_ref().unwrap().is_chargeless());
        assert!(r.interpretation_sensitive());
        assert!(!r.chargeless());
    }

    #[test]
    fn turbine_counts() {
        let m = flip();
        let t = turbine_manifest(&m, &is_chargeless(&m).unwrap(), false).unwrap();
        for b in &t.blocks {
            assert_eq!(b.surface_copies, 2);
            assert_eq!(b.annuli.iter().map(|a| a.copies).collect::<Vec<_>>(), vec![2]);
        }
        let m = two_end_pair();
        let t = turbine_manifest(&m, &is_chargeless(&m).unwrap(), false).unwrap();
        assert_eq!(t.blocks[0].annuli.iter().map(|a| a.copies).collect::<Vec<_>>(), vec![2, 2]);
        assert_eq!(t.blocks[0].annuli[0].host, "w");
        assert_eq!(t.blocks[0].annuli[0].slope, [2, 1]);

        // a witness of 3 gives 6 annuli
        let report = ChargeReport {
            blocks: vec![BlockReport {
                block: 0,
                id: "v".into(),
                charge: Some(rat(0, 1)),
                free_tori: vec![],
                verdict: Verdict::Chargeless(vec![(EndRef { edge: 0, side: 0 }, 3)]),
                relative: None,
            }],
        };
        let t = turbine_manifest(&flip(), &report, false).unwrap();
        assert_eq!(t.blocks[0].annuli[0].copies, 6);

        let bad = single_end(GluingMatrix::new(1, 1, 0, 1));
        assert!(turbine_manifest(&bad, &is_chargeless(&bad).unwrap(), false).is_err());
    }

    #[test]
    fn retwist_examples() {
        let m = two_end_pair();
        let zero = Retwist { twists: BTreeMap::from([(0, vec![0, 0])]) };
        assert!(retwist_invariance_check(&m, &zero).unwrap().unchanged());
        let r = Retwist { twists: BTreeMap::from([(0, vec![1, -1])]) };
        let check = retwist_invariance_check(&m, &r).unwrap();
        assert!(check.unchanged());
        let ends = check.retwisted.ends_of(0);
        let charges: Vec<Rational> = ends
            .iter()
            .map(|&e| {
                let g = check.retwisted.end(e).matrix;
                rat(g.b, g.a)
            })
            .collect();
        assert_eq!(charges, vec![rat(1, 2) - rat(1, 1), rat(-1, 2) + rat(1, 1)]);
    }
}
