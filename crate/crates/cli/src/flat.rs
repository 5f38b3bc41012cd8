use cubuland::dual_complex::{skeleton_dot, ComplexDoc};
use cubuland::exact::format_rational;
use cubuland::planar::{
    build_y, classify_families, dual_flat, parallel_families, Budget, DualFlat, Family, FamilyCase,
    ParallelFamilyReport, PeriodicArrangement,
};
use cubuland::wallspace::{WallspaceDoc, Window};
use cubuland::SCHEMA;
use serde::Serialize;

use crate::args::{FlatCommand, FlatSource, Format};
use crate::error::{read_json, Result};
use crate::output::Output;

fn load(path: &std::path::Path) -> Result<PeriodicArrangement> {
    let doc: WallspaceDoc = read_json(path)?;
    Ok(PeriodicArrangement::from_doc(&doc)?)
}

fn source(s: &FlatSource) -> Result<(PeriodicArrangement, Window, Budget)> {
    Ok((load(&s.arrangement)?, Window::parse(&s.window)?, Budget { walls: s.wall_budget, vertices: s.budget }))
}

#[derive(Serialize)]
struct FamilyOut {
    normal: [String; 2],
    direction: [String; 2],
    step: String,
    lines: Vec<usize>,
    offsets: Vec<String>,
    pattern: Vec<u32>,
}

fn family_out(f: &Family) -> FamilyOut {
    FamilyOut {
        normal: [f.normal.0.to_string(), f.normal.1.to_string()],
        direction: [f.direction.0.to_string(), f.direction.1.to_string()],
        step: f.step.to_string(),
        lines: f.lines.clone(),
        offsets: f.period.iter().map(|(c, _)| format_rational(c)).collect(),
        pattern: f.pattern(),
    }
}

fn families_text(out: &mut Output, report: &ParallelFamilyReport) {
    out.line(format!("families: {}", report.n()));
    for (k, f) in report.families.iter().enumerate() {
        let offsets: Vec<String> = f
            .period
            .iter()
            .map(|(c, m)| if *m == 1 { format_rational(c) } else { format!("{} (x{m})", format_rational(c)) })
            .collect();
        out.line(format!(
            "  family {k}: normal ({}, {}), direction ({}, {}), step {}, offsets [{}]",
            f.normal.0,
            f.normal.1,
            f.direction.0,
            f.direction.1,
            f.step,
            offsets.join(", ")
        ));
    }
}

#[derive(Serialize)]
struct FlatOut {
    schema: &'static str,
    n: usize,
    window: String,
    families: Vec<FamilyOut>,
    chains: Vec<Vec<u32>>,
    factor_vertex_counts: Vec<usize>,
    complex: ComplexDoc,
}

fn flat_out(flat: &DualFlat) -> FlatOut {
    FlatOut {
        schema: SCHEMA,
        n: flat.n(),
        window: flat.window.to_string(),
        families: flat.families.families.iter().map(family_out).collect(),
        chains: flat.chains.clone(),
        factor_vertex_counts: flat.factor_vertex_counts(),
        complex: ComplexDoc::new(&flat.complex),
    }
}

fn flat_text(out: &mut Output, flat: &DualFlat) {
    out.line(format!("window: {}", flat.window));
    families_text(out, &flat.families);
    for (k, chain) in flat.chains.iter().enumerate() {
        let dims: Vec<String> = chain.iter().map(u32::to_string).collect();
        out.line(format!("  chain {k}: cube dimensions [{}]", dims.join(", ")));
    }
    let counts: Vec<String> = flat.factor_vertex_counts().iter().map(usize::to_string).collect();
    out.line(format!("factor vertices: {}", counts.join(" x ")));
    let f: Vec<String> = flat.complex.f_vector().iter().map(usize::to_string).collect();
    out.line(format!("f-vector: {}", f.join(" ")));
    out.line("certified: product of chains of cubes");
}

pub fn run(cmd: &FlatCommand, out: &mut Output) -> Result<u8> {
    match cmd {
        FlatCommand::Families { arrangement } => {
            out.require(&[Format::Text, Format::Json])?;
            let report = parallel_families(&load(arrangement)?)?;
            if out.is_json() {
                #[derive(Serialize)]
                struct FamiliesOut {
                    schema: &'static str,
                    n: usize,
                    families: Vec<FamilyOut>,
                }
                out.json(&FamiliesOut {
                    schema: SCHEMA,
                    n: report.n(),
                    families: report.families.iter().map(family_out).collect(),
                })?;
            } else {
                out.provenance("parallel families: lines sharing a direction, with all lattice translates");
                families_text(out, &report);
            }
            Ok(0)
        }
        FlatCommand::Dual { source: s } => {
            let (arr, window, budget) = source(s)?;
            let flat = dual_flat(&arr, &window, budget)?;
            match out.format() {
                Format::Json => out.json(&flat_out(&flat))?,
                Format::Dot => out.raw(&skeleton_dot(&flat.complex, None)),
                Format::Text => {
                    out.provenance("combinatorial flat: dual of a window, certified as a product of cube chains");
                    flat_text(out, &flat);
                }
            }
            Ok(0)
        }
        FlatCommand::Y { source: s } => {
            let (arr, window, budget) = source(s)?;
            let y = build_y(&arr, &window, budget)?;
            match out.format() {
                Format::Json => {
                    #[derive(Serialize)]
                    struct YOut {
                        schema: &'static str,
                        window: String,
                        frozen: Vec<usize>,
                        essential_walls: Vec<usize>,
                        y_vertices: Vec<String>,
                        y_f_vector: Vec<usize>,
                        relaxed_f_vector: Vec<usize>,
                        ambient: ComplexDoc,
                    }
                    out.json(&YOut {
                        schema: SCHEMA,
                        window: y.flat.window.to_string(),
                        frozen: y.frozen.clone(),
                        essential_walls: y.essential_walls.clone(),
                        y_vertices: y.y.vertices().iter().map(|&v| y.ambient.bitstring(v)).collect(),
                        y_f_vector: y.y.f_vector(),
                        relaxed_f_vector: y.relaxed.f_vector(),
                        ambient: ComplexDoc::new(&y.ambient),
                    })?
                }
                Format::Dot => out.raw(&skeleton_dot(&y.ambient, Some(&y.y))),
                Format::Text => {
                    out.provenance(
                        "extra walls held on designated sides cut a copy of the flat out of the ambient dual",
                    );
                    let fmt = |f: Vec<usize>| f.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
                    out.line(format!("window: {}", y.flat.window));
                    out.line(format!("extra walls: {}", y.frozen.len()));
                    out.line(format!("ambient f-vector: {}", fmt(y.ambient.f_vector())));
                    out.line(format!("Y f-vector: {}", fmt(y.y.f_vector())));
                    out.line(format!("flat f-vector: {}", fmt(y.flat.complex.f_vector())));
                    out.line(format!("relaxed f-vector: {}", fmt(y.relaxed.f_vector())));
                    out.line("certified: Y is isometric and maps bijectively onto the flat");
                }
            }
            Ok(0)
        }
        FlatCommand::Classify { source: s } => {
            out.require(&[Format::Text, Format::Json])?;
            let (arr, window, budget) = source(s)?;
            let case = classify_families(&arr, &window, budget)?;
            match (&case, out.is_json()) {
                (FamilyCase::Flat(flat), true) => out.json(&flat_out(flat))?,
                (FamilyCase::Flat(flat), false) => {
                    out.provenance("three or more families: the window's dual is a certified flat");
                    flat_text(out, flat);
                }
                (FamilyCase::TwoFamilies(report), true) => {
                    #[derive(Serialize)]
                    struct TwoOut {
                        schema: &'static str,
                        n: usize,
                        families: Vec<FamilyOut>,
                    }
                    out.json(&TwoOut {
                        schema: SCHEMA,
                        n: 2,
                        families: report.families.iter().map(family_out).collect(),
                    })?
                }
                (FamilyCase::TwoFamilies(report), false) => {
                    out.provenance("two families: the planar case hands over to the crossing-pattern analysis");
                    families_text(out, report);
                }
            }
            Ok(0)
        }
    }
}
