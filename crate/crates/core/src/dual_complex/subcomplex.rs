use std::collections::BTreeSet;

use super::{submasks, Bits, CubeComplex};

/// A subcomplex of a [`CubeComplex`], stored as cell indices per dimension.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Subcomplex {
    cells: Vec<BTreeSet<usize>>,
}

impl Subcomplex {
    /// The subcomplex spanned by a vertex set: every cell all of whose
    /// corners are in the set.
    pub fn spanned(c: &CubeComplex, vertices: impl IntoIterator<Item = usize>) -> Self {
        let verts: BTreeSet<usize> = vertices.into_iter().collect();
        let mut cells = vec![verts.clone()];
        for dim in 1..=c.dimension() {
            let chosen: BTreeSet<usize> = c
                .cells(dim)
                .iter()
                .enumerate()
                .filter(|(_, cell)| c.corners(cell).iter().all(|v| verts.contains(v)))
                .map(|(k, _)| k)
                .collect();
            if chosen.is_empty() {
                break;
            }
            cells.push(chosen);
        }
        Subcomplex { cells }
    }

    pub fn whole(c: &CubeComplex) -> Self {
        Subcomplex { cells: (0..=c.dimension()).map(|d| (0..c.cells(d).len()).collect()).collect() }
    }

    fn from_cells(mut cells: Vec<BTreeSet<usize>>) -> Self {
        while cells.len() > 1 && cells.last().is_some_and(BTreeSet::is_empty) {
            cells.pop();
        }
        Subcomplex { cells }
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        static EMPTY: BTreeSet<usize> = BTreeSet::new();
        self.cells.first().unwrap_or(&EMPTY)
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = usize> + '_ {
        self.cells.get(dim).into_iter().flatten().copied()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, BTreeSet::len)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.cells.iter().map(BTreeSet::len).collect()
    }

    pub fn dimension(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn contains(&self, dim: usize, k: usize) -> bool {
        self.cells.get(dim).is_some_and(|s| s.contains(&k))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(d, s)| if d % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) }).sum()
    }

    /// Neighbors of `v` along edges of this subcomplex.
    pub fn neighbors<'a>(&'a self, c: &'a CubeComplex, v: usize) -> impl Iterator<Item = usize> + 'a {
        c.neighbors(v).iter().filter_map(move |&(u, w)| {
            let bits = c.vertex(v);
            let (dim, k) = c.cell_at(bits, (1 as Bits) << w)?;
            self.contains(dim, k).then_some(u)
        })
    }

    pub fn is_connected(&self, c: &CubeComplex) -> bool {
        let Some(&start) = self.vertices().iter().next() else {
            return true;
        };
        self.bfs_distances(c, start).len() == self.vertices().len()
    }

    /// Edge-path distances inside the subcomplex from `start`.
    pub fn bfs_distances(&self, c: &CubeComplex, start: usize) -> std::collections::HashMap<usize, usize> {
        let mut dist = std::collections::HashMap::from([(start, 0usize)]);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            for u in self.neighbors(c, v) {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(u) {
                    e.insert(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}

/// Vertices not separated from `set` by any hyperplane: those agreeing with
/// `set` on every wall where all of `set` lies on one side.
pub fn hull_vertices(c: &CubeComplex, set: &BTreeSet<usize>) -> BTreeSet<usize> {
    let full = c.system().full_mask();
    let mut all_ones = full;
    let mut any_ones: Bits = 0;
    for &v in set {
        all_ones &= c.vertex(v);
        any_ones |= c.vertex(v);
    }
    let unanimous = (all_ones | !any_ones) & full;
    (0..c.vertex_count()).filter(|&x| (c.vertex(x) ^ all_ones) & unanimous == 0).collect()
}

/// Cubical convex hull of a nonempty vertex set.
pub fn convex_hull(c: &CubeComplex, set: &BTreeSet<usize>) -> Subcomplex {
    assert!(!set.is_empty(), "convex hull of an empty vertex set");
    Subcomplex::spanned(c, hull_vertices(c, set))
}

/// Union of all closed cubes meeting `sub`, iterated `k` times.
pub fn cubical_neighborhood(c: &CubeComplex, sub: &Subcomplex, k: usize) -> Subcomplex {
    let mut current = sub.clone();
    for _ in 0..k {
        let verts = current.vertices().clone();
        let mut cells: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); c.dimension() + 1];
        for dim in 0..=c.dimension() {
            for cell in c.cells(dim) {
                let corners = c.corners(cell);
                if !corners.iter().any(|v| verts.contains(v)) {
                    continue;
                }
                let base = c.vertex(cell.base);
                for face_walls in submasks(cell.walls) {
                    for offset in submasks(cell.walls & !face_walls) {
                        let (d, idx) = c.cell_at(base ^ offset, face_walls).expect("faces of cells are cells");
                        cells[d].insert(idx);
                    }
                }
            }
        }
        current = Subcomplex::from_cells(cells);
    }
    current
}

#[cfg(test)]
mod tests {
    use super::super::tests::planar;
    use super::super::{build_dual, CubeComplex};
    use super::*;
    use crate::exact::rat;
    use crate::wallspace::{Basepoint, Point};

    fn cube3() -> CubeComplex {
        let ws = planar(&[(1, 0, 0), (0, 1, 0), (1, 1, 2)]);
        build_dual(&ws, &Basepoint::Coords(Point::new(rat(1, 2), rat(1, 2))), 100).unwrap()
    }

    fn v(c: &CubeComplex, s: &str) -> usize {
        let bits = s.chars().enumerate().fold(0 as Bits, |acc, (i, ch)| acc | (((ch == '1') as Bits) << i));
        c.index_of(bits).unwrap()
    }

    #[test]
    fn hull_examples() {
        let c = cube3();
        let opposite = convex_hull(&c, &[v(&c, "000"), v(&c, "111")].into());
        assert_eq!(opposite.f_vector(), vec![8, 12, 6, 1]);
        let adjacent = convex_hull(&c, &[v(&c, "000"), v(&c, "100")].into());
        assert_eq!(adjacent.f_vector(), vec![2, 1]);
        let square = convex_hull(&c, &[v(&c, "000"), v(&c, "110")].into());
        let expected: BTreeSet<usize> = ["000", "100", "010", "110"].iter().map(|s| v(&c, s)).collect();
        assert_eq!(square.vertices(), &expected);
        assert_eq!(square.f_vector(), vec![4, 4, 1]);
    }

    #[test]
    fn neighborhood_examples() {
        let c = cube3();
        let point = Subcomplex::spanned(&c, [v(&c, "000")]);
        assert_eq!(cubical_neighborhood(&c, &point, 0), point);
        assert_eq!(cubical_neighborhood(&c, &point, 1).f_vector(), vec![8, 12, 6, 1]);
    }

    #[test]
    fn euler_characteristic_of_cube() {
        let c = cube3();
        assert_eq!(Subcomplex::whole(&c).euler_characteristic(), 1);
    }
}
