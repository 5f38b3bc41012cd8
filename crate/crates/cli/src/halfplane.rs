use std::path::Path;

use cubuland::dual_complex::skeleton_dot;
use cubuland::halfplane::{
    build_halfplane, classify, classify_two_patterns, partition_ab, validate_pattern, Classification,
    GeodesicWallPattern, PatternDoc, TwoPatternCase, Which,
};
use cubuland::SCHEMA;
use serde::Serialize;

use crate::args::{Format, HalfplaneCommand};
use crate::error::{read_json, Result};
use crate::output::Output;

fn load(path: &Path) -> Result<GeodesicWallPattern> {
    let doc: PatternDoc = read_json(path)?;
    Ok(GeodesicWallPattern::from_doc(&doc)?)
}

fn ids(p: &GeodesicWallPattern, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| p.orbits()[i].id.clone()).collect()
}

fn f_text(f: &[usize]) -> String {
    f.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run(cmd: &HalfplaneCommand, out: &mut Output) -> Result<u8> {
    match cmd {
        HalfplaneCommand::Validate { pattern, window } => {
            out.require(&[Format::Text, Format::Json])?;
            let p = load(pattern)?;
            let len = window.unwrap_or_else(|| p.check_window());
            let violation = validate_pattern(&p, len)?;
            if out.is_json() {
                #[derive(Serialize)]
                struct ValidateOut {
                    schema: &'static str,
                    window: u64,
                    valid: bool,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    violation: Option<String>,
                }
                out.json(&ValidateOut {
                    schema: SCHEMA,
                    window: len,
                    valid: violation.is_none(),
                    violation: violation.as_ref().map(ToString::to_string),
                })?;
            } else {
                out.provenance(
                    "pattern hypotheses: separated translates of each orbit, crossings closed under betweenness",
                );
                out.line(format!("window: {len}"));
                match &violation {
                    None => out.line("valid: yes"),
                    Some(v) => out.line(format!("valid: no, {v}")),
                }
            }
            Ok(if violation.is_none() { 0 } else { 1 })
        }
        HalfplaneCommand::Classify { pattern } => {
            out.require(&[Format::Text, Format::Json])?;
            let p = load(pattern)?;
            let c = classify(&p);
            if out.is_json() {
                #[derive(Serialize)]
                struct ClassifyOut {
                    schema: &'static str,
                    case: u8,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    witness: Option<[String; 2]>,
                    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
                    r: Option<u64>,
                }
                let doc = match c {
                    Classification::Case1 { a, b } => ClassifyOut {
                        schema: SCHEMA,
                        case: 1,
                        witness: Some([p.orbits()[a].id.clone(), p.orbits()[b].id.clone()]),
                        r: None,
                    },
                    Classification::Case2 { r } => ClassifyOut { schema: SCHEMA, case: 2, witness: None, r: Some(r) },
                };
                out.json(&doc)?;
            } else {
                out.provenance(
                    "crossing dichotomy: some orbit pair crosses at every distance, or all crossings are bounded",
                );
                match c {
                    Classification::Case1 { a, b } => {
                        out.line(format!("Case1 witness=({}, {})", p.orbits()[a].id, p.orbits()[b].id))
                    }
                    Classification::Case2 { r } => out.line(format!("Case2 R={r}")),
                }
            }
            Ok(0)
        }
        HalfplaneCommand::Partition { pattern } => {
            out.require(&[Format::Text, Format::Json])?;
            let p = load(pattern)?;
            let part = partition_ab(&p)?;
            let (a, b) = (ids(&p, &part.a), ids(&p, &part.b));
            let witness = [p.orbits()[part.witness.0].id.clone(), p.orbits()[part.witness.1].id.clone()];
            if out.is_json() {
                #[derive(Serialize)]
                struct PartitionOut {
                    schema: &'static str,
                    witness: [String; 2],
                    a: Vec<String>,
                    b: Vec<String>,
                    window: u64,
                }
                out.json(&PartitionOut { schema: SCHEMA, witness, a, b, window: p.check_window() })?;
            } else {
                out.provenance("A/B split: B holds the orbits that always cross the first witness orbit");
                out.line(format!("witness: ({}, {})", witness[0], witness[1]));
                out.line(format!("A: {}", a.join(", ")));
                out.line(format!("B: {}", b.join(", ")));
                out.line(format!(
                    "verified: every A wall crosses every later B wall on a window of {}",
                    p.check_window()
                ));
            }
            Ok(0)
        }
        HalfplaneCommand::Build { pattern, window } => {
            let p = load(pattern)?;
            let h = build_halfplane(&p, *window)?;
            match out.format() {
                Format::Dot => out.raw(&skeleton_dot(&h.dual, Some(&h.halfplane))),
                Format::Json => {
                    #[derive(Serialize)]
                    struct BuildOut {
                        schema: &'static str,
                        window: u64,
                        a: Vec<String>,
                        b: Vec<String>,
                        walls: Vec<String>,
                        /// `[x, y, vertex]` for each pair `x <= y`.
                        pairs: Vec<[u64; 3]>,
                        vertices: Vec<String>,
                        f_vector: Vec<usize>,
                        diagonal: Vec<String>,
                    }
                    out.json(&BuildOut {
                        schema: SCHEMA,
                        window: h.window_len,
                        a: ids(&p, &h.partition.a),
                        b: ids(&p, &h.partition.b),
                        walls: h.walls.iter().map(|&w| p.label(w)).collect(),
                        pairs: h.pairs.iter().map(|(&(x, y), &v)| [x, y, v as u64]).collect(),
                        vertices: h.halfplane.vertices().iter().map(|&v| h.dual.bitstring(v)).collect(),
                        f_vector: h.halfplane.f_vector(),
                        diagonal: h.diagonal.iter().map(|&v| h.dual.bitstring(v)).collect(),
                    })?
                }
                Format::Text => {
                    out.provenance("combinatorial half-plane: pairs x <= y joined across A walls then B walls");
                    out.line(format!("window: {}", h.window_len));
                    out.line(format!("A: {}", ids(&p, &h.partition.a).join(", ")));
                    out.line(format!("B: {}", ids(&p, &h.partition.b).join(", ")));
                    out.line(format!("vertices: {}", h.vertex_count()));
                    out.line(format!("f-vector: {}", f_text(&h.halfplane.f_vector())));
                    out.line(format!("diagonal: {} vertices", h.diagonal.len()));
                    out.line(format!("euler characteristic: {}", h.halfplane.euler_characteristic()));
                    out.line("certified: isometric 1-skeleton, simply connected");
                }
            }
            Ok(0)
        }
        HalfplaneCommand::Two { alpha, beta, window, line } => {
            out.require(&[Format::Text, Format::Json])?;
            let (a, b) = (load(alpha)?, load(beta)?);
            let case = classify_two_patterns(&a, &b, *window, *line)?;
            #[derive(Serialize)]
            struct TwoOut {
                schema: &'static str,
                case: &'static str,
                #[serde(skip_serializing_if = "Option::is_none")]
                which: Option<&'static str>,
                #[serde(skip_serializing_if = "Option::is_none")]
                f_vector: Option<Vec<usize>>,
                #[serde(skip_serializing_if = "Option::is_none")]
                per_period: Option<[usize; 3]>,
            }
            let doc = match &case {
                TwoPatternCase::HalfplaneFactor { which, f_vector, .. } => TwoOut {
                    schema: SCHEMA,
                    case: "halfplane-factor",
                    which: Some(match which {
                        Which::Alpha => "alpha",
                        Which::Beta => "beta",
                    }),
                    f_vector: Some(f_vector.clone()),
                    per_period: None,
                },
                TwoPatternCase::CocompactHull { alpha, beta, per_period } => TwoOut {
                    schema: SCHEMA,
                    case: "cocompact-hull",
                    which: None,
                    f_vector: None,
                    per_period: Some([*alpha, *beta, *per_period]),
                },
            };
            if out.is_json() {
                out.json(&doc)?;
            } else {
                out.provenance("two families: a half-plane factor when crossings are unbounded, else a cocompact hull");
                match case {
                    TwoPatternCase::HalfplaneFactor { which, f_vector, line_len, .. } => {
                        let name = if which == Which::Alpha { "alpha" } else { "beta" };
                        out.line(format!("half-plane of {name} times a segment of {line_len} edges"));
                        out.line(format!("f-vector: {}", f_text(&f_vector)));
                    }
                    TwoPatternCase::CocompactHull { alpha, beta, per_period } => {
                        out.line(format!("cocompact hull: {alpha} x {beta} = {per_period} vertices per period"));
                    }
                }
            }
            Ok(0)
        }
    }
}
