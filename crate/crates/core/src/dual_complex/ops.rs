use std::collections::VecDeque;
use std::sync::Arc;

use super::{build_from_system, restrict_bits, side_of, Bits, CubeComplex, DualError, Result, Subcomplex};
use crate::wallspace::Side;

/// Coordinatewise majority of three vertices.
pub fn median(c: &CubeComplex, u: usize, v: usize, w: usize) -> Result<usize> {
    let (a, b, d) = (c.vertex(u), c.vertex(v), c.vertex(w));
    let m = (a & b) | (a & d) | (b & d);
    c.index_of(m).ok_or_else(|| {
        DualError::Structural(format!(
            "majority of vertices {u}, {v}, {w} is not a vertex; the complex is truncated or malformed"
        ))
    })
}

/// Dual of the walls `h` such that `sub` reaches depth `horizon` from `h` on
/// both sides. The depth of a vertex is its 1-skeleton distance to the carrier
/// of `h`, so carrier vertices sit at depth 0. Reaching a fixed depth stands in
/// for "not contained in any bounded neighborhood of `h`", which has no finite
/// witness. With no essential walls the result is a single vertex.
pub fn essential_core(c: &CubeComplex, sub: &Subcomplex, horizon: usize) -> Result<CubeComplex> {
    if sub.vertices().is_empty() {
        return Err(DualError::InvalidInput("essential core of an empty subcomplex".into()));
    }
    if horizon == 0 {
        return Err(DualError::InvalidInput("horizon must be at least 1".into()));
    }
    let essential: Vec<usize> = c
        .hyperplanes()
        .iter()
        .filter(|h| {
            (0..2).all(|s| {
                let dist = distances_from(c, h.halfspaces[1 - s].iter().copied());
                h.halfspaces[s].iter().any(|&x| sub.vertices().contains(&x) && dist[x] > horizon)
            })
        })
        .map(|h| h.wall)
        .collect();
    let system = Arc::new(c.system().restrict(&essential));
    let first = *sub.vertices().iter().next().unwrap();
    let start = restrict_bits(c.vertex(first), &essential);
    build_from_system(system, start, usize::MAX)
}

/// Depth of every vertex from the hyperplane of `wall`.
pub fn hyperplane_depths(c: &CubeComplex, wall: usize) -> Vec<usize> {
    let h = c.hyperplanes().iter().find(|h| h.wall == wall).expect("wall has a hyperplane");
    let far = [distances_from(c, h.halfspaces[1].iter().copied()), distances_from(c, h.halfspaces[0].iter().copied())];
    (0..c.vertex_count()).map(|x| far[side_of(c.vertex(x), wall).index()][x] - 1).collect()
}

fn distances_from(c: &CubeComplex, sources: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut dist = vec![usize::MAX; c.vertex_count()];
    let mut queue = VecDeque::new();
    for s in sources {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(v) = queue.pop_front() {
        for &(u, _) in c.neighbors(v) {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

#[derive(Debug, Clone)]
pub struct Factor {
    /// Walls of the parent complex carried by this factor, increasing.
    pub walls: Vec<usize>,
    pub complex: CubeComplex,
}

#[derive(Debug, Clone)]
pub struct ProductDecomposition {
    pub factors: Vec<Factor>,
    /// First combination of factor vertices (as a parent orientation) that is
    /// not a parent vertex, when the factors do not multiply back.
    pub obstruction: Option<Bits>,
}

impl ProductDecomposition {
    pub fn is_product(&self) -> bool {
        self.obstruction.is_none()
    }

    pub fn is_irreducible(&self) -> bool {
        self.factors.len() <= 1
    }
}

/// Splits the hyperplanes into connected components of the complement of
/// the crossing graph and builds one factor per component.
pub fn decompose_product(c: &CubeComplex) -> ProductDecomposition {
    let walls = c.hyperplane_walls();
    let n = walls.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !c.hyperplanes_cross(walls[i], walls[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(walls[i]);
    }
    let base = c.vertex(0);
    let factors: Vec<Factor> = groups
        .into_iter()
        .map(|ws| {
            let system = Arc::new(c.system().restrict(&ws));
            let complex = build_from_system(system, restrict_bits(base, &ws), usize::MAX)
                .expect("restriction of a consistent orientation is consistent");
            Factor { walls: ws, complex }
        })
        .collect();

    let product: Option<usize> = factors.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.complex.vertex_count()));
    let obstruction = if product == Some(c.vertex_count()) { None } else { find_obstruction(c, &factors) };
    ProductDecomposition { factors, obstruction }
}

fn compose(base: Bits, factors: &[Factor], choice: &[usize]) -> Bits {
    let mut bits = base;
    for (f, &k) in factors.iter().zip(choice) {
        let local = f.complex.vertex(k);
        for (pos, &w) in f.walls.iter().enumerate() {
            let bit = (1 as Bits) << w;
            if (local >> pos) & 1 == 1 {
                bits |= bit;
            } else {
                bits &= !bit;
            }
        }
    }
    bits
}

fn find_obstruction(c: &CubeComplex, factors: &[Factor]) -> Option<Bits> {
    let base = c.vertex(0);
    let mut choice = vec![0usize; factors.len()];
    loop {
        let bits = compose(base, factors, &choice);
        if c.index_of(bits).is_none() {
            return Some(bits);
        }
        let mut k = 0;
        loop {
            if k == factors.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < factors[k].complex.vertex_count() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub isometric: bool,
    /// A vertex pair whose distance inside the subcomplex exceeds the number
    /// of separating hyperplanes.
    pub witness: Option<(usize, usize)>,
}

/// Compares edge-path distance inside `sub` with the separating-wall count
/// for every vertex pair of `sub`.
pub fn is_isometrically_embedded(c: &CubeComplex, sub: &Subcomplex) -> Result<Embedding> {
    if !sub.is_connected(c) {
        return Err(DualError::InvalidInput("subcomplex is not connected".into()));
    }
    for &u in sub.vertices() {
        let dist = sub.bfs_distances(c, u);
        for &v in sub.vertices() {
            if v > u && dist[&v] != c.distance(u, v) {
                return Ok(Embedding { isometric: false, witness: Some((u, v)) });
            }
        }
    }
    Ok(Embedding { isometric: true, witness: None })
}

/// Side of `wall` at vertex `v`.
pub fn vertex_side(c: &CubeComplex, v: usize, wall: usize) -> Side {
    side_of(c.vertex(v), wall)
}
