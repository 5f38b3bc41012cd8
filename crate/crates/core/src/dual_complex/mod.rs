//! The CAT(0) cube complex dual to a finite wall system, and the
//! combinatorial toolkit on top of it.
//!
//! Vertices are orientations (one closed side per wall) whose chosen sides
//! pairwise meet. They are discovered by breadth-first search from a start
//! orientation, flipping one wall at a time, so only the connected component
//! of the start is ever materialized. Orientations are bitsets: bit `i` set
//! means wall `i` is on side 1.
//!
//! Cells of every dimension are stored uniformly as a [`Cell`]: a base vertex
//! (the corner that comes first in BFS order) and the mask of walls the cell
//! spans. Vertices are the 0-cells.

mod export;
mod ops;
mod subcomplex;
mod system;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::wallspace::{principal_orientation, Basepoint, Side, Wallspace, WallspaceError};

pub use export::{crossing_dot, skeleton_dot, ComplexDoc, CubeDoc, HyperplaneDoc};
pub use ops::{
    decompose_product, essential_core, hyperplane_depths, is_isometrically_embedded, median, vertex_side, Embedding,
    Factor, ProductDecomposition,
};
pub use subcomplex::{convex_hull, cubical_neighborhood, hull_vertices, Subcomplex};
pub use system::{mask_of_len, restrict_bits, side_of, WallSystem};

/// Orientation bitset.
pub type Bits = u128;

/// Upper bound on wall instances per complex, set by the width of [`Bits`].
pub const MAX_WALLS: usize = 128;

pub const DEFAULT_VERTEX_BUDGET: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualError {
    #[error(transparent)]
    Wallspace(#[from] WallspaceError),
    #[error("{count} walls exceed the supported maximum of {max}")]
    TooManyWalls { count: usize, max: usize },
    #[error("vertex budget {budget} exhausted: {} vertices found, {} still queued", vertices.len(), frontier.len())]
    BudgetExceeded { budget: usize, vertices: Vec<Bits>, frontier: Vec<Bits> },
    #[error("start orientation is not pairwise consistent")]
    InconsistentStart,
    #[error("structural failure: {0}")]
    Structural(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, DualError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub base: usize,
    pub walls: Bits,
}

impl Cell {
    pub fn dim(&self) -> usize {
        self.walls.count_ones() as usize
    }

    pub fn wall_list(&self) -> Vec<usize> {
        bit_positions(self.walls).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    pub wall: usize,
    /// Vertex indices on side 0 and side 1.
    pub halfspaces: [Vec<usize>; 2],
}

#[derive(Debug, Clone)]
pub struct CubeComplex {
    system: Arc<WallSystem>,
    vertices: Vec<Bits>,
    index: HashMap<Bits, usize>,
    cells: Vec<Vec<Cell>>,
    cell_index: HashMap<(usize, Bits), usize>,
    adjacency: Vec<Vec<(usize, usize)>>,
    hyperplanes: Vec<Hyperplane>,
    crossings: BTreeSet<(usize, usize)>,
}

/// Dual of a finite wallspace, explored from the principal orientation of
/// `basepoint`.
pub fn build_dual(ws: &Wallspace, basepoint: &Basepoint, budget: usize) -> Result<CubeComplex> {
    let start = principal_orientation(ws, basepoint)?;
    let system = WallSystem::from_wallspace(ws)?;
    let bits = start.sides.iter().enumerate().fold(0 as Bits, |acc, (i, s)| acc | ((s.index() as Bits) << i));
    build_from_system(Arc::new(system), bits, budget)
}

/// Breadth-first exploration of consistent orientations from `start`.
/// Neighbors are tried in increasing wall order, which fixes vertex order.
pub fn build_from_system(system: Arc<WallSystem>, start: Bits, budget: usize) -> Result<CubeComplex> {
    let start = start & system.full_mask();
    if !system.is_consistent(start) {
        return Err(DualError::InconsistentStart);
    }
    let n = system.len();
    let mut vertices = vec![start];
    let mut index = HashMap::from([(start, 0usize)]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for w in 0..n {
            let u = v ^ ((1 as Bits) << w);
            if index.contains_key(&u) || !system.side_compatible(u, w, side_of(u, w)) {
                continue;
            }
            if vertices.len() >= budget {
                queue.push_front(v);
                return Err(DualError::BudgetExceeded { budget, vertices, frontier: queue.into_iter().collect() });
            }
            index.insert(u, vertices.len());
            vertices.push(u);
            queue.push_back(u);
        }
    }
    Ok(CubeComplex::assemble(system, vertices, index))
}

impl CubeComplex {
    fn assemble(system: Arc<WallSystem>, vertices: Vec<Bits>, index: HashMap<Bits, usize>) -> Self {
        let n = system.len();
        let mut cells: Vec<Vec<Cell>> = vec![(0..vertices.len()).map(|i| Cell { base: i, walls: 0 }).collect()];
        for (vi, &v) in vertices.iter().enumerate() {
            let flippable: Vec<usize> = (0..n).filter(|&w| index.contains_key(&(v ^ (1 << w)))).collect();
            let mut corners = vec![vi];
            grow_cubes(&vertices, &index, vi, &flippable, 0, 0, &mut corners, &mut cells);
        }
        for dim in cells.iter_mut().skip(1) {
            dim.sort();
        }
        let mut cell_index = HashMap::new();
        for dim in &cells {
            for (k, cell) in dim.iter().enumerate() {
                cell_index.insert((cell.base, cell.walls), k);
            }
        }
        let mut adjacency = vec![Vec::new(); vertices.len()];
        if let Some(edges) = cells.get(1) {
            for e in edges {
                let w = e.walls.trailing_zeros() as usize;
                let other = index[&(vertices[e.base] ^ e.walls)];
                adjacency[e.base].push((other, w));
                adjacency[other].push((e.base, w));
            }
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(_, w)| w);
        }
        let hyperplanes = (0..n)
            .filter_map(|w| {
                let (mut s0, mut s1) = (Vec::new(), Vec::new());
                for (i, &v) in vertices.iter().enumerate() {
                    if side_of(v, w) == Side::S0 {
                        s0.push(i);
                    } else {
                        s1.push(i);
                    }
                }
                (!s0.is_empty() && !s1.is_empty()).then_some(Hyperplane { wall: w, halfspaces: [s0, s1] })
            })
            .collect();
        let crossings = cells
            .get(2)
            .map(|squares| {
                squares
                    .iter()
                    .map(|sq| {
                        let ws = sq.wall_list();
                        (ws[0], ws[1])
                    })
                    .collect()
            })
            .unwrap_or_default();
        CubeComplex { system, vertices, index, cells, cell_index, adjacency, hyperplanes, crossings }
    }

    pub fn system(&self) -> &Arc<WallSystem> {
        &self.system
    }

    pub fn wall_count(&self) -> usize {
        self.system.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Bits] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Bits {
        self.vertices[i]
    }

    pub fn index_of(&self, bits: Bits) -> Option<usize> {
        self.index.get(&bits).copied()
    }

    /// Cells of dimension `dim` (vertices for 0, edges for 1, ...).
    pub fn cells(&self, dim: usize) -> &[Cell] {
        self.cells.get(dim).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cell(&self, dim: usize, k: usize) -> Cell {
        self.cells[dim][k]
    }

    pub fn edge_count(&self) -> usize {
        self.cells(1).len()
    }

    /// Number of cells per dimension, starting with vertices.
    pub fn f_vector(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn dimension(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane_walls(&self) -> Vec<usize> {
        self.hyperplanes.iter().map(|h| h.wall).collect()
    }

    /// Pairs of walls `(i, j)`, `i < j`, whose hyperplanes cross (span a square).
    pub fn crossings(&self) -> &BTreeSet<(usize, usize)> {
        &self.crossings
    }

    pub fn hyperplanes_cross(&self, i: usize, j: usize) -> bool {
        let key = if i < j { (i, j) } else { (j, i) };
        self.crossings.contains(&key)
    }

    /// 1-skeleton distance, which equals the number of separating walls.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        (self.vertices[u] ^ self.vertices[v]).count_ones() as usize
    }

    /// Vertex indices of a cell's corners.
    pub fn corners(&self, cell: &Cell) -> Vec<usize> {
        let base = self.vertices[cell.base];
        submasks(cell.walls).map(|s| self.index[&(base ^ s)]).collect()
    }

    /// Looks up the cell spanned by `walls` at the corner `bits`.
    pub fn cell_at(&self, bits: Bits, walls: Bits) -> Option<(usize, usize)> {
        let mut base = usize::MAX;
        for s in submasks(walls) {
            base = base.min(*self.index.get(&(bits ^ s))?);
        }
        let dim = walls.count_ones() as usize;
        self.cell_index.get(&(base, walls)).map(|&k| (dim, k))
    }

    /// Orientation of vertex `v` as a `0`/`1` string, wall 0 first.
    pub fn bitstring(&self, v: usize) -> String {
        let bits = self.vertices[v];
        (0..self.wall_count()).map(|w| if (bits >> w) & 1 == 1 { '1' } else { '0' }).collect()
    }
}

#[allow(clippy::too_many_arguments)]
fn grow_cubes(
    vertices: &[Bits],
    index: &HashMap<Bits, usize>,
    base: usize,
    flippable: &[usize],
    from: usize,
    walls: Bits,
    corners: &mut Vec<usize>,
    cells: &mut Vec<Vec<Cell>>,
) {
    for (k, &w) in flippable.iter().enumerate().skip(from) {
        let bit = (1 as Bits) << w;
        let mut extra = Vec::with_capacity(corners.len());
        let mut ok = true;
        for &c in corners.iter() {
            match index.get(&(vertices[c] ^ bit)) {
                // A corner earlier than `base` means the cube is recorded elsewhere,
                // and so is every cube containing it.
                Some(&u) if u > base => extra.push(u),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let grown = walls | bit;
        let dim = grown.count_ones() as usize;
        if cells.len() <= dim {
            cells.resize_with(dim + 1, Vec::new);
        }
        cells[dim].push(Cell { base, walls: grown });
        let before = corners.len();
        corners.extend(extra);
        grow_cubes(vertices, index, base, flippable, k + 1, grown, corners, cells);
        corners.truncate(before);
    }
}

/// All submasks of `mask`, including 0 and `mask`.
pub fn submasks(mask: Bits) -> impl Iterator<Item = Bits> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

pub fn bit_positions(mask: Bits) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let w = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(w)
    })
}
