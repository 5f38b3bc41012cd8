//! Graph manifolds as graphs of blocks, each a product of a circle with a
//! compact surface with boundary, glued along boundary tori.
//!
//! On boundary torus `i` of a block the basis is `(c_i, h)`: the boundary
//! circle of the base surface and the fiber. A gluing matrix at an edge end
//! expresses the far block's classes in the near basis:
//! `fiber' = a c_i + b h` and `section' = p c_i + q h`. In JSON the matrix
//! is written by rows, `[[a, p], [b, q]]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::smith::{cokernel, in_row_lattice, IntMatrix};
use crate::SCHEMA;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported block: {0}")]
    Unsupported(String),
    #[error("invalid retwist: {0}")]
    InvalidRetwist(String),
}

pub type Result<T> = std::result::Result<T, ManifoldError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(ManifoldError::InvalidInput(msg.into()))
}

/// Parses JSON, reporting syntax and shape errors with their position.
pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| ManifoldError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub id: String,
    pub genus: u32,
    pub boundary: u32,
}

impl Block {
    /// Euler characteristic of the base surface.
    pub fn base_euler(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary as i64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GluingMatrix {
    pub a: i64,
    pub b: i64,
    pub p: i64,
    pub q: i64,
}

impl GluingMatrix {
    pub fn new(a: i64, b: i64, p: i64, q: i64) -> Self {
        GluingMatrix { a, b, p, q }
    }

    /// From rows `[[a, p], [b, q]]`.
    pub fn from_rows(rows: [[i64; 2]; 2]) -> Self {
        GluingMatrix { a: rows[0][0], p: rows[0][1], b: rows[1][0], q: rows[1][1] }
    }

    pub fn to_rows(self) -> [[i64; 2]; 2] {
        [[self.a, self.p], [self.b, self.q]]
    }

    pub fn det(self) -> i128 {
        self.a as i128 * self.q as i128 - self.b as i128 * self.p as i128
    }

    /// The matrix the other end of the same torus must carry: the near and
    /// far roles swap, so the fiber and section slots swap along with the
    /// inverse.
    pub fn opposite(self) -> Option<GluingMatrix> {
        let det = self.det();
        if det.abs() != 1 {
            return None;
        }
        let s = det as i64;
        Some(GluingMatrix { a: s * self.a, b: -s * self.p, p: -s * self.b, q: s * self.q })
    }

    /// `self * S * other * S == I` with `S` the slot swap.
    pub fn coheres_with(self, other: GluingMatrix) -> bool {
        let m1 = [[self.a as i128, self.p as i128], [self.b as i128, self.q as i128]];
        // S * other * S swaps both rows and columns of other
        let m2 = [[other.q as i128, other.b as i128], [other.p as i128, other.a as i128]];
        let prod = |i: usize, j: usize| m1[i][0] * m2[0][j] + m1[i][1] * m2[1][j];
        prod(0, 0) == 1 && prod(0, 1) == 0 && prod(1, 0) == 0 && prod(1, 1) == 1
    }

    /// Basis change `c -> c + m h` on the near torus.
    pub fn twist_near(self, m: i64) -> GluingMatrix {
        GluingMatrix { b: self.b - self.a * m, q: self.q - self.p * m, ..self }
    }

    /// Basis change `c' -> c' + m h'` on the far torus.
    pub fn twist_far(self, m: i64) -> GluingMatrix {
        GluingMatrix { p: self.p + m * self.a, q: self.q + m * self.b, ..self }
    }
}

impl fmt::Display for GluingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.p, self.b, self.q)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct End {
    pub block: usize,
    pub torus: u32,
    pub matrix: GluingMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub ends: [End; 2],
}

/// One end of one edge; `side` is 0 for `end1`, 1 for `end2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndRef {
    pub edge: usize,
    pub side: usize,
}

impl EndRef {
    pub fn opposite(self) -> EndRef {
        EndRef { edge: self.edge, side: 1 - self.side }
    }
}

impl fmt::Display for EndRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}.end{}", self.edge, self.side + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphManifold {
    blocks: Vec<Block>,
    edges: Vec<Edge>,
    // glued[block][torus]
    glued: Vec<Vec<Option<EndRef>>>,
}

impl GraphManifold {
    /// Validates base hyperbolicity, torus usage, matrix entries and the
    /// coherence of the two ends of every edge.
    pub fn new(blocks: Vec<Block>, edges: Vec<Edge>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        for b in &blocks {
            if !ids.insert(b.id.as_str()) {
                return invalid(format!("block id {:?} is used twice", b.id));
            }
            if b.boundary == 0 {
                return invalid(format!("block {:?} has no boundary", b.id));
            }
            if b.base_euler() >= 0 {
                return invalid(format!(
                    "block {:?} has base of genus {} with {} boundary circles, which is not hyperbolic (2 - 2g - b = {})",
                    b.id,
                    b.genus,
                    b.boundary,
                    b.base_euler()
                ));
            }
        }
        if edges.is_empty() {
            return invalid("manifold has no edges");
        }
        let mut glued: Vec<Vec<Option<EndRef>>> = blocks.iter().map(|b| vec![None; b.boundary as usize]).collect();
        for (e, edge) in edges.iter().enumerate() {
            for (side, end) in edge.ends.iter().enumerate() {
                let at = EndRef { edge: e, side };
                let Some(block) = blocks.get(end.block) else {
                    return invalid(format!("{at} refers to block index {}", end.block));
                };
                let Some(slot) = glued[end.block].get_mut(end.torus as usize) else {
                    return invalid(format!(
                        "{at} uses torus {} of block {:?}, which has {} boundary tori",
                        end.torus, block.id, block.boundary
                    ));
                };
                if let Some(prev) = slot {
                    return invalid(format!(
                        "torus {} of block {:?} is glued by both {prev} and {at}",
                        end.torus, block.id
                    ));
                }
                *slot = Some(at);
                let m = end.matrix;
                if m.det().abs() != 1 {
                    return invalid(format!("{at} matrix {m} has determinant {}", m.det()));
                }
                if m.a == 0 {
                    return invalid(format!("{at} matrix {m} has a = 0: the fibers of both sides are parallel"));
                }
            }
            if !edge.ends[0].matrix.coheres_with(edge.ends[1].matrix) {
                return invalid(format!(
                    "edge {e}: end2 matrix {} does not match end1 matrix {} (expected {})",
                    edge.ends[1].matrix,
                    edge.ends[0].matrix,
                    edge.ends[0].matrix.opposite().unwrap()
                ));
            }
        }
        for (k, slots) in glued.iter().enumerate() {
            if slots.iter().all(Option::is_none) {
                return invalid(format!("block {:?} is not glued to anything", blocks[k].id));
            }
        }
        Ok(GraphManifold { blocks, edges, glued })
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn block_index(&self, id: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.id == id)
    }

    pub fn end(&self, r: EndRef) -> &End {
        &self.edges[r.edge].ends[r.side]
    }

    /// The end glued to `torus` of `block`, if any.
    pub fn end_at(&self, block: usize, torus: u32) -> Option<EndRef> {
        self.glued[block].get(torus as usize).copied().flatten()
    }

    /// Glued ends of a block, by torus.
    pub fn ends_of(&self, block: usize) -> Vec<EndRef> {
        self.glued[block].iter().flatten().copied().collect()
    }

    pub fn free_tori(&self, block: usize) -> Vec<u32> {
        (0..self.blocks[block].boundary).filter(|&t| self.glued[block][t as usize].is_none()).collect()
    }

    pub fn is_fully_glued(&self, block: usize) -> bool {
        self.free_tori(block).is_empty()
    }

    /// The block across the torus of `r`.
    pub fn neighbor(&self, r: EndRef) -> usize {
        self.end(r.opposite()).block
    }

    /// Number of connected components of the underlying graph.
    pub fn components(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.blocks.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for e in &self.edges {
            let (x, y) = (find(&mut parent, e.ends[0].block), find(&mut parent, e.ends[1].block));
            parent[x.max(y)] = x.min(y);
        }
        (0..self.blocks.len()).filter(|&x| find(&mut parent, x) == x).count()
    }

    pub fn from_doc(doc: &ManifoldDoc) -> Result<Self> {
        let mut blocks = Vec::with_capacity(doc.blocks.len());
        for b in &doc.blocks {
            let exceptional = b.exceptional_fibers.as_ref().is_some_and(|f| !f.is_empty());
            let twisted = b.euler.is_some_and(|e| e != 0);
            if exceptional || twisted {
                return Err(ManifoldError::Unsupported(format!(
                    "block {:?} carries exceptional fibers or a nonzero Euler number; only products of a circle \
                     and a surface are modeled, which is always reachable by passing to a finite cover",
                    b.id
                )));
            }
            blocks.push(Block { id: b.id.clone(), genus: b.genus, boundary: b.boundary });
        }
        let find = |id: &str| {
            blocks
                .iter()
                .position(|b| b.id == id)
                .ok_or_else(|| ManifoldError::InvalidInput(format!("edge refers to unknown block {id:?}")))
        };
        let mut edges = Vec::with_capacity(doc.edges.len());
        for e in &doc.edges {
            let end = |d: &EndDoc| -> Result<End> {
                Ok(End { block: find(&d.block)?, torus: d.torus, matrix: GluingMatrix::from_rows(d.matrix) })
            };
            edges.push(Edge { ends: [end(&e.end1)?, end(&e.end2)?] });
        }
        GraphManifold::new(blocks, edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        GraphManifold::from_doc(&parse_json(text)?)
    }

    pub fn to_doc(&self) -> ManifoldDoc {
        let end =
            |e: &End| EndDoc { block: self.blocks[e.block].id.clone(), torus: e.torus, matrix: e.matrix.to_rows() };
        ManifoldDoc {
            schema: Some(SCHEMA.to_string()),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockDoc {
                    id: b.id.clone(),
                    genus: b.genus,
                    boundary: b.boundary,
                    exceptional_fibers: None,
                    euler: None,
                })
                .collect(),
            edges: self.edges.iter().map(|e| EdgeDoc { end1: end(&e.ends[0]), end2: end(&e.ends[1]) }).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDoc {
    pub id: String,
    pub genus: u32,
    pub boundary: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exceptional_fibers: Option<Vec<serde_json::Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndDoc {
    pub block: String,
    pub torus: u32,
    pub matrix: [[i64; 2]; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub end1: EndDoc,
    pub end2: EndDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub blocks: Vec<BlockDoc>,
    pub edges: Vec<EdgeDoc>,
}

/// First homology of a block as generators modulo relations. Generators, in
/// order: `2g` handle classes, the boundary classes `c_1 .. c_b`, and the
/// fiber `h`. The one relation says the boundary classes sum to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockHomology {
    pub genus: u32,
    pub boundary: u32,
    pub relations: IntMatrix,
}

pub fn h1_block(genus: u32, boundary: u32) -> BlockHomology {
    let n = 2 * genus as usize + boundary as usize + 1;
    let mut row = vec![0i64; n];
    for i in 0..boundary as usize {
        row[2 * genus as usize + i] = 1;
    }
    BlockHomology { genus, boundary, relations: IntMatrix::from_rows(&[row]) }
}

impl BlockHomology {
    pub fn generator_count(&self) -> usize {
        self.relations.cols()
    }

    /// Free rank and torsion of the group presented.
    pub fn structure(&self) -> (usize, Vec<BigInt>) {
        cokernel(&self.relations)
    }

    pub fn rank(&self) -> usize {
        self.structure().0
    }

    pub fn boundary_index(&self, torus: u32) -> usize {
        2 * self.genus as usize + torus as usize
    }

    pub fn fiber_index(&self) -> usize {
        self.generator_count() - 1
    }

    /// The class `x c_torus + y h`.
    pub fn torus_class(&self, torus: u32, x: i64, y: i64) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.generator_count()];
        v[self.boundary_index(torus)] += x;
        v[self.fiber_index()] += y;
        v
    }

    pub fn is_zero(&self, class: &[BigInt]) -> bool {
        in_row_lattice(&self.relations, class)
    }

    /// Homology relative to the listed boundary tori: their section classes
    /// and the fiber become zero.
    pub fn relative_to(&self, tori: &[u32]) -> BlockHomology {
        if tori.is_empty() {
            return self.clone();
        }
        let n = self.generator_count();
        let mut rows: Vec<Vec<BigInt>> = (0..self.relations.rows()).map(|i| self.relations.row(i).to_vec()).collect();
        let unit = |k: usize| (0..n).map(|j| BigInt::from((j == k) as i64)).collect::<Vec<_>>();
        rows.push(unit(self.fiber_index()));
        for &t in tori {
            rows.push(unit(self.boundary_index(t)));
        }
        BlockHomology { relations: IntMatrix::from_rows(&rows), ..self.clone() }
    }
}

/// `(a, b)` of the neighboring fiber `a c_torus + b h` at a glued torus.
pub fn neighbor_fiber_class(m: &GraphManifold, block: usize, torus: u32) -> Result<(i64, i64)> {
    let Some(b) = m.blocks.get(block) else {
        return invalid(format!("no block with index {block}"));
    };
    match m.end_at(block, torus) {
        Some(r) => {
            let g = m.end(r).matrix;
            Ok((g.a, g.b))
        }
        None => invalid(format!("torus {torus} of block {:?} is free", b.id)),
    }
}

/// A covering of the underlying graph: every edge lifts to `degree` edges,
/// copy `k` of its end1 block joined to copy `perm[k]` of its end2 block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphCover {
    pub degree: usize,
    pub perms: Vec<Vec<usize>>,
}

impl GraphCover {
    pub fn identity(m: &GraphManifold, degree: usize) -> Self {
        GraphCover { degree, perms: vec![(0..degree).collect(); m.edges.len()] }
    }

    pub fn from_doc(m: &GraphManifold, doc: &CoverDoc) -> Result<Self> {
        let mut cover = GraphCover::identity(m, doc.degree);
        let mut seen = BTreeSet::new();
        for e in &doc.edges {
            if e.edge >= m.edges.len() {
                return invalid(format!("cover lists edge {} of {}", e.edge, m.edges.len()));
            }
            if !seen.insert(e.edge) {
                return invalid(format!("cover lists edge {} twice", e.edge));
            }
            cover.perms[e.edge] = e.perm.clone();
        }
        Ok(cover)
    }

    pub fn to_doc(&self) -> CoverDoc {
        CoverDoc {
            degree: self.degree,
            edges: self
                .perms
                .iter()
                .enumerate()
                .filter(|(_, p)| p.iter().enumerate().any(|(k, &x)| k != x))
                .map(|(edge, perm)| CoverEdgeDoc { edge, perm: perm.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverEdgeDoc {
    pub edge: usize,
    pub perm: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDoc {
    pub degree: usize,
    #[serde(default)]
    pub edges: Vec<CoverEdgeDoc>,
}

#[derive(Debug, Clone)]
pub struct LiftedManifold {
    pub manifold: GraphManifold,
    /// `(base block, copy)` of each lifted block.
    pub lifts: Vec<(usize, usize)>,
    pub components: usize,
}

/// Lifts every block `degree` times (copy `k` of block `v` is `"v.k"`) and
/// every edge along its permutation, copying gluing matrices.
pub fn induced_cover(m: &GraphManifold, cover: &GraphCover) -> Result<LiftedManifold> {
    let d = cover.degree;
    if d == 0 {
        return invalid("cover degree must be positive");
    }
    if cover.perms.len() != m.edges.len() {
        return invalid(format!("cover has {} edge permutations for {} edges", cover.perms.len(), m.edges.len()));
    }
    for (e, perm) in cover.perms.iter().enumerate() {
        if perm.len() != d {
            return invalid(format!("edge {e}: permutation has length {}, degree is {d}", perm.len()));
        }
        let mut hit = vec![false; d];
        for &x in perm {
            if x >= d || hit[x] {
                let end2 = &m.blocks[m.edges[e].ends[1].block].id;
                return invalid(format!(
                    "edge {e}: not a covering at block {end2:?}, copy {x} is hit twice or out of range"
                ));
            }
            hit[x] = true;
        }
    }
    let lifts: Vec<(usize, usize)> = (0..m.blocks.len()).flat_map(|v| (0..d).map(move |k| (v, k))).collect();
    let blocks = lifts
        .iter()
        .map(|&(v, k)| {
            let b = &m.blocks[v];
            Block { id: format!("{}.{k}", b.id), genus: b.genus, boundary: b.boundary }
        })
        .collect();
    let mut edges = Vec::with_capacity(m.edges.len() * d);
    for (e, edge) in m.edges.iter().enumerate() {
        for k in 0..d {
            let [e1, e2] = &edge.ends;
            edges.push(Edge {
                ends: [
                    End { block: e1.block * d + k, ..e1.clone() },
                    End { block: e2.block * d + cover.perms[e][k], ..e2.clone() },
                ],
            });
        }
    }
    let manifold = GraphManifold::new(blocks, edges)?;
    let components = manifold.components();
    Ok(LiftedManifold { manifold, lifts, components })
}

/// Section changes `c_i -> c_i + m_i h`, per block and torus.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Retwist {
    pub twists: BTreeMap<usize, Vec<i64>>,
}

impl Retwist {
    pub fn from_doc(m: &GraphManifold, doc: &RetwistDoc) -> Result<Self> {
        let mut twists = BTreeMap::new();
        for t in &doc.twists {
            let Some(v) = m.block_index(&t.block) else {
                return Err(ManifoldError::InvalidRetwist(format!("unknown block {:?}", t.block)));
            };
            if twists.insert(v, t.m.clone()).is_some() {
                return Err(ManifoldError::InvalidRetwist(format!("block {:?} is listed twice", t.block)));
            }
        }
        Ok(Retwist { twists })
    }

    pub fn to_doc(&self, m: &GraphManifold) -> RetwistDoc {
        RetwistDoc {
            twists: self
                .twists
                .iter()
                .map(|(&v, ms)| TwistDoc { block: m.blocks[v].id.clone(), m: ms.clone() })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistDoc {
    pub block: String,
    pub m: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetwistDoc {
    pub twists: Vec<TwistDoc>,
}

/// Rewrites every gluing matrix in the twisted section bases. Each block's
/// twists must sum to zero so the boundary relation survives.
pub fn retwist(m: &GraphManifold, r: &Retwist) -> Result<GraphManifold> {
    let mut edges = m.edges.clone();
    for (&v, ms) in &r.twists {
        let block = &m.blocks[v];
        if ms.len() != block.boundary as usize {
            return Err(ManifoldError::InvalidRetwist(format!(
                "block {:?} has {} tori, twist lists {}",
                block.id,
                block.boundary,
                ms.len()
            )));
        }
        let sum: i128 = ms.iter().map(|&x| x as i128).sum();
        if sum != 0 {
            return Err(ManifoldError::InvalidRetwist(format!("twists of block {:?} sum to {sum}", block.id)));
        }
        for (t, &mi) in ms.iter().enumerate() {
            if mi == 0 {
                continue;
            }
            if let Some(at) = m.end_at(v, t as u32) {
                let near = &mut edges[at.edge].ends[at.side].matrix;
                *near = near.twist_near(mi);
                let far = &mut edges[at.edge].ends[1 - at.side].matrix;
                *far = far.twist_far(mi);
            }
        }
    }
    GraphManifold::new(m.blocks.clone(), edges)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn block(id: &str, genus: u32, boundary: u32) -> Block {
        Block { id: id.into(), genus, boundary }
    }

    pub(crate) fn edge(v: usize, t: u32, w: usize, s: u32, g: GluingMatrix) -> Edge {
        Edge {
            ends: [End { block: v, torus: t, matrix: g }, End { block: w, torus: s, matrix: g.opposite().unwrap() }],
        }
    }

    pub(crate) fn flip() -> GraphManifold {
        GraphManifold::new(
            vec![block("v", 1, 1), block("w", 1, 1)],
            vec![edge(0, 0, 1, 0, GluingMatrix::new(1, 0, 0, 1))],
        )
        .unwrap()
    }

    #[test]
    fn h1_ranks() {
        for g in 0..=3 {
            for b in 1..=4 {
                let h = h1_block(g, b);
                assert_eq!(h.structure(), (2 * g as usize + b as usize, vec![]));
            }
        }
        let h = h1_block(1, 1);
        assert!(h.is_zero(&h.torus_class(0, 5, 0)));
        assert!(!h.is_zero(&h.torus_class(0, 0, 1)));
        let h = h1_block(0, 3);
        let mut sum = h.torus_class(0, 1, 0);
        for (x, y) in sum.iter_mut().zip(h.torus_class(1, 1, 0)) {
            *x += y;
        }
        assert!(!h.is_zero(&sum));
        for (x, y) in sum.iter_mut().zip(h.torus_class(2, 1, 0)) {
            *x += y;
        }
        assert!(h.is_zero(&sum));
    }

    #[test]
    fn opposite_matrices() {
        let g = GluingMatrix::new(2, 1, 1, 1);
        let o = g.opposite().unwrap();
        assert_eq!(o, GluingMatrix::new(2, -1, -1, 1));
        assert!(g.coheres_with(o) && o.coheres_with(g));
        assert_eq!(o.opposite().unwrap(), g);
        let flip = GluingMatrix::new(1, 0, 0, 1);
        assert_eq!(flip.opposite().unwrap(), flip);
        let reversing = GluingMatrix::new(3, 1, 2, 1);
        assert_eq!(reversing.det(), 1);
        let neg = GluingMatrix::new(1, 1, 2, 1);
        assert_eq!(neg.det(), -1);
        assert!(neg.coheres_with(neg.opposite().unwrap()));
    }

    #[test]
    fn neighbor_classes() {
        let m = flip();
        assert_eq!(neighbor_fiber_class(&m, 0, 0).unwrap(), (1, 0));
        let m = GraphManifold::new(
            vec![block("v", 1, 1), block("w", 1, 1)],
            vec![edge(0, 0, 1, 0, GluingMatrix::new(2, 1, 1, 1))],
        )
        .unwrap();
        assert_eq!(neighbor_fiber_class(&m, 0, 0).unwrap(), (2, 1));
        assert_eq!(neighbor_fiber_class(&m, 1, 0).unwrap(), (2, -1));
        let free = GraphManifold::new(
            vec![block("v", 0, 3), block("w", 1, 1)],
            vec![edge(0, 0, 1, 0, GluingMatrix::new(1, 0, 0, 1))],
        )
        .unwrap();
        assert!(neighbor_fiber_class(&free, 0, 2).is_err());
    }

    #[test]
    fn validation() {
        let good = GluingMatrix::new(1, 0, 0, 1);
        assert!(GraphManifold::new(vec![block("v", 0, 2)], vec![edge(0, 0, 0, 1, good)]).is_err());
        assert!(GraphManifold::new(vec![block("v", 1, 1)], vec![]).is_err());
        let bad_det = Edge {
            ends: [
                End { block: 0, torus: 0, matrix: GluingMatrix::new(2, 0, 0, 1) },
                End { block: 1, torus: 0, matrix: GluingMatrix::new(2, 0, 0, 1) },
            ],
        };
        assert!(GraphManifold::new(vec![block("v", 1, 1), block("w", 1, 1)], vec![bad_det]).is_err());
        let a_zero = GluingMatrix::new(0, 1, 1, 0);
        assert!(GraphManifold::new(vec![block("v", 1, 1), block("w", 1, 1)], vec![edge(0, 0, 1, 0, a_zero)]).is_err());
        let literal_inverse = Edge {
            ends: [
                End { block: 0, torus: 0, matrix: GluingMatrix::new(2, 1, 1, 1) },
                End { block: 1, torus: 0, matrix: GluingMatrix::new(1, -1, -1, 2) },
            ],
        };
        assert!(GraphManifold::new(vec![block("v", 1, 1), block("w", 1, 1)], vec![literal_inverse]).is_err());
        let reused = vec![edge(0, 0, 1, 0, good), edge(0, 0, 1, 1, good)];
        assert!(GraphManifold::new(vec![block("v", 1, 1), block("w", 1, 2)], reused).is_err());
    }

    #[test]
    fn twisted_blocks_rejected() {
        let text = r#"{"blocks":[{"id":"v","genus":1,"boundary":1,"euler":1},{"id":"w","genus":1,"boundary":1}],
            "edges":[{"end1":{"block":"v","torus":0,"matrix":[[1,0],[0,1]]},
                      "end2":{"block":"w","torus":0,"matrix":[[1,0],[0,1]]}}]}"#;
        assert!(matches!(GraphManifold::from_json(text), Err(ManifoldError::Unsupported(_))));
        let broken = "{\"blocks\": [\n  {\"id\": \"v\", \"genus\": }\n]}";
        let Err(ManifoldError::Parse { line, .. }) = GraphManifold::from_json(broken) else {
            panic!("expected a parse error")
        };
        assert_eq!(line, 2);
    }

    #[test]
    fn doc_round_trip() {
        let m = flip();
        let text = serde_json::to_string(&m.to_doc()).unwrap();
        assert_eq!(GraphManifold::from_json(&text).unwrap(), m);
    }

    #[test]
    fn loop_cover() {
        let m =
            GraphManifold::new(vec![block("v", 1, 2)], vec![edge(0, 0, 0, 1, GluingMatrix::new(1, 0, 0, 1))]).unwrap();
        let cover = GraphCover { degree: 2, perms: vec![vec![1, 0]] };
        let lifted = induced_cover(&m, &cover).unwrap();
        assert_eq!(lifted.manifold.blocks().len(), 2);
        assert_eq!(lifted.manifold.edges().len(), 2);
        assert_eq!(lifted.components, 1);
        for e in lifted.manifold.edges() {
            assert_ne!(e.ends[0].block, e.ends[1].block);
            assert_eq!(e.ends[0].matrix, GluingMatrix::new(1, 0, 0, 1));
        }
        let ident = induced_cover(&m, &GraphCover::identity(&m, 1)).unwrap();
        assert_eq!(ident.manifold.edges(), m.edges());
        let tree = induced_cover(&flip(), &GraphCover::identity(&flip(), 3)).unwrap();
        assert_eq!(tree.components, 3);
        assert!(induced_cover(&m, &GraphCover { degree: 2, perms: vec![vec![1, 1]] }).is_err());
    }

    #[test]
    fn retwist_rules() {
        let m = GraphManifold::new(
            vec![block("v", 1, 2), block("w", 1, 1), block("x", 1, 1)],
            vec![edge(0, 0, 1, 0, GluingMatrix::new(2, 1, 1, 1)), edge(0, 1, 2, 0, GluingMatrix::new(2, -1, 1, 0))],
        )
        .unwrap();
        let r = Retwist { twists: BTreeMap::from([(0, vec![1, -1])]) };
        let t = retwist(&m, &r).unwrap();
        assert_eq!(t.edges()[0].ends[0].matrix, GluingMatrix::new(2, -1, 1, 0));
        assert_eq!(t.edges()[1].ends[0].matrix, GluingMatrix::new(2, 1, 1, 1));
        assert!(retwist(&m, &Retwist { twists: BTreeMap::from([(0, vec![1, 0])]) }).is_err());
        assert_eq!(retwist(&m, &Retwist::default()).unwrap(), m);
    }
}
