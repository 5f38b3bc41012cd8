use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{bit_positions, CubeComplex, Subcomplex};
use crate::SCHEMA;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubeDoc {
    /// Index of the base vertex.
    pub base: usize,
    pub walls: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperplaneDoc {
    pub wall: usize,
    pub label: String,
    pub side0: Vec<usize>,
    pub side1: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub schema: String,
    pub walls: Vec<String>,
    /// Orientations as `0`/`1` strings, wall 0 first, in BFS order.
    pub vertices: Vec<String>,
    pub edges: Vec<[usize; 2]>,
    /// `cubes[k]` lists the cubes of dimension `k + 2`.
    pub cubes: Vec<Vec<CubeDoc>>,
    pub f_vector: Vec<usize>,
    pub hyperplanes: Vec<HyperplaneDoc>,
    pub crossings: Vec<[usize; 2]>,
}

impl ComplexDoc {
    pub fn new(c: &CubeComplex) -> Self {
        let edges = c
            .cells(1)
            .iter()
            .map(|e| {
                let corners = c.corners(e);
                [corners[0], corners[1]]
            })
            .collect();
        let cubes = (2..=c.dimension())
            .map(|d| c.cells(d).iter().map(|cell| CubeDoc { base: cell.base, walls: cell.wall_list() }).collect())
            .collect();
        let hyperplanes = c
            .hyperplanes()
            .iter()
            .map(|h| HyperplaneDoc {
                wall: h.wall,
                label: c.system().label(h.wall).to_string(),
                side0: h.halfspaces[0].clone(),
                side1: h.halfspaces[1].clone(),
            })
            .collect();
        ComplexDoc {
            schema: SCHEMA.to_string(),
            walls: c.system().labels().to_vec(),
            vertices: (0..c.vertex_count()).map(|v| c.bitstring(v)).collect(),
            edges,
            cubes,
            f_vector: c.f_vector(),
            hyperplanes,
            crossings: c.crossings().iter().map(|&(a, b)| [a, b]).collect(),
        }
    }
}

/// DOT rendering of the 1-skeleton, optionally restricted to a subcomplex.
pub fn skeleton_dot(c: &CubeComplex, sub: Option<&Subcomplex>) -> String {
    let mut out = String::from("graph skeleton {\n  node [shape=circle, fontsize=9];\n");
    for v in 0..c.vertex_count() {
        if sub.is_some_and(|s| !s.vertices().contains(&v)) {
            continue;
        }
        writeln!(out, "  v{v} [label=\"{}\"];", c.bitstring(v)).unwrap();
    }
    for (k, e) in c.cells(1).iter().enumerate() {
        if sub.is_some_and(|s| !s.contains(1, k)) {
            continue;
        }
        let corners = c.corners(e);
        let wall = bit_positions(e.walls).next().unwrap();
        writeln!(out, "  v{} -- v{} [label=\"{}\"];", corners[0], corners[1], c.system().label(wall)).unwrap();
    }
    out.push_str("}\n");
    out
}

/// DOT rendering of the crossing graph of hyperplanes.
pub fn crossing_dot(c: &CubeComplex) -> String {
    let mut out = String::from("graph crossing {\n");
    for h in c.hyperplanes() {
        writeln!(out, "  h{} [label=\"{}\"];", h.wall, c.system().label(h.wall)).unwrap();
    }
    for &(a, b) in c.crossings() {
        writeln!(out, "  h{a} -- h{b};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::build_dual;
    use super::super::tests::planar;
    use super::*;
    use crate::exact::rat;
    use crate::wallspace::{Basepoint, Point};

    #[test]
    fn json_round_trip_and_dot() {
        let ws = planar(&[(1, 0, 0), (0, 1, 0), (1, 1, 2)]);
        let c = build_dual(&ws, &Basepoint::Coords(Point::new(rat(1, 2), rat(1, 2))), 100).unwrap();
        let doc = ComplexDoc::new(&c);
        assert_eq!(doc.vertices.len(), 8);
        assert_eq!(doc.edges.len(), 12);
        assert_eq!(doc.cubes[0].len(), 6);
        assert_eq!(doc.cubes[1].len(), 1);
        let text = serde_json::to_string(&doc).unwrap();
        let back: ComplexDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        let dot = skeleton_dot(&c, None);
        assert_eq!(dot.matches(" -- ").count(), 12);
        assert_eq!(crossing_dot(&c).matches(" -- ").count(), 3);
    }
}
