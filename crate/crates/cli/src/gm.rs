use std::path::Path;

use cubuland::chargeless::{
    brute_force_witness, is_chargeless, retwist_invariance_check, turbine_manifest, BruteForce, ChargeReport,
    WitnessDoc,
};
use cubuland::exact::format_rational;
use cubuland::graph_manifold::{induced_cover, CoverDoc, GraphCover, GraphManifold, ManifoldDoc, Retwist, RetwistDoc};
use cubuland::SCHEMA;
use serde::Serialize;

use crate::args::{Format, Global, GmCommand};
use crate::error::{read_json, Result};
use crate::output::{yes_no, Output};

fn load(path: &Path) -> Result<GraphManifold> {
    let doc: ManifoldDoc = read_json(path)?;
    Ok(GraphManifold::from_doc(&doc)?)
}

fn exit_for(chargeless: bool) -> u8 {
    if chargeless {
        0
    } else {
        1
    }
}

pub fn run(cmd: &GmCommand, global: &Global, out: &mut Output) -> Result<u8> {
    out.require(&[Format::Text, Format::Json])?;
    match cmd {
        GmCommand::Charge { manifold } => {
            let m = load(manifold)?;
            let report = is_chargeless(&m)?;
            if out.is_json() {
                out.json(&report.to_doc(&m))?;
            } else {
                out.provenance("chargeless condition: per-block charge sum b/a, witnesses n = lcm|a| / a");
                write_report(out, &report);
            }
            Ok(exit_for(report.chargeless()))
        }
        GmCommand::Witness { manifold, brute, cap } => {
            let m = load(manifold)?;
            match brute {
                None => {
                    let report = is_chargeless(&m)?;
                    if out.is_json() {
                        out.json(&report.to_doc(&m))?;
                    } else {
                        out.provenance("witness integers from the closed form, verified in block homology");
                        for b in &report.blocks {
                            out.line(format!("block {}: {}", b.id, b.verdict));
                        }
                    }
                    Ok(exit_for(report.chargeless()))
                }
                Some(n) => brute_witnesses(&m, *n, *cap, global.parallel, out),
            }
        }
        GmCommand::Turbine { manifold, relative } => {
            let m = load(manifold)?;
            let report = is_chargeless(&m)?;
            let manifest = turbine_manifest(&m, &report, *relative)?;
            if out.is_json() {
                out.json(&manifest)?;
            } else {
                out.provenance("turbine collection: two copies of each horizontal surface, 2|n| annuli per end");
                for b in &manifest.blocks {
                    let rel = if b.relative { " (relative witness)" } else { "" };
                    out.line(format!("block {}: {} surface copies{rel}", b.block, b.surface_copies));
                    for a in &b.annuli {
                        out.line(format!(
                            "  e{}.end{} torus {}: {} annuli in block {} torus {}, n = {}, slope ({}, {})",
                            a.edge, a.end, a.torus, a.copies, a.host, a.host_torus, a.n, a.slope[0], a.slope[1]
                        ));
                    }
                    for t in &b.vertical_annuli {
                        out.line(format!("  torus {t}: 1 vertical annulus"));
                    }
                }
            }
            Ok(0)
        }
        GmCommand::Cover { manifold, cover } => {
            let m = load(manifold)?;
            let doc: CoverDoc = read_json(cover)?;
            let lifted = induced_cover(&m, &GraphCover::from_doc(&m, &doc)?)?;
            let before = is_chargeless(&m)?;
            let after = is_chargeless(&lifted.manifold)?;
            if out.is_json() {
                #[derive(Serialize)]
                struct CoverOut {
                    schema: &'static str,
                    components: usize,
                    chargeless_base: bool,
                    chargeless_cover: bool,
                    manifold: ManifoldDoc,
                }
                out.json(&CoverOut {
                    schema: SCHEMA,
                    components: lifted.components,
                    chargeless_base: before.chargeless(),
                    chargeless_cover: after.chargeless(),
                    manifold: lifted.manifold.to_doc(),
                })?;
            } else {
                out.provenance("induced cover: blocks lifted along a covering of the underlying graph");
                out.line(format!(
                    "degree {}: {} blocks, {} edges, {} component(s)",
                    doc.degree,
                    lifted.manifold.blocks().len(),
                    lifted.manifold.edges().len(),
                    lifted.components
                ));
                out.line(format!("chargeless (base): {}", yes_no(before.chargeless())));
                out.line(format!("chargeless (cover): {}", yes_no(after.chargeless())));
            }
            Ok(exit_for(after.chargeless()))
        }
        GmCommand::RetwistCheck { manifold, retwist } => {
            let m = load(manifold)?;
            let doc: RetwistDoc = read_json(retwist)?;
            let r = Retwist::from_doc(&m, &doc)?;
            let check = retwist_invariance_check(&m, &r)?;
            if out.is_json() {
                #[derive(Serialize)]
                struct RetwistOut {
                    schema: &'static str,
                    unchanged: bool,
                    before: Vec<bool>,
                    after: Vec<bool>,
                    manifold: ManifoldDoc,
                }
                out.json(&RetwistOut {
                    schema: SCHEMA,
                    unchanged: check.unchanged(),
                    before: check.before.clone(),
                    after: check.after.clone(),
                    manifold: check.retwisted.to_doc(),
                })?;
            } else {
                out.provenance("section change c_i -> c_i + m_i h with zero-sum twists per block");
                for (k, b) in m.blocks().iter().enumerate() {
                    out.line(format!(
                        "block {}: chargeless {} -> {}",
                        b.id,
                        yes_no(check.before[k]),
                        yes_no(check.after[k])
                    ));
                }
                out.line(format!("unchanged: {}", yes_no(check.unchanged())));
            }
            Ok(if check.unchanged() { 0 } else { 1 })
        }
    }
}

fn write_report(out: &mut Output, report: &ChargeReport) {
    for b in &report.blocks {
        match &b.charge {
            Some(q) => out.line(format!("block {}: charge {}, {}", b.id, format_rational(q), b.verdict)),
            None => {
                out.line(format!("block {}: free tori {:?}", b.id, b.free_tori));
                out.line(format!("  literal: {}", b.verdict));
                if let Some(rel) = &b.relative {
                    out.line(format!("  relative to free tori: {rel}"));
                }
            }
        }
    }
    if report.interpretation_sensitive() {
        out.line("interpretation-sensitive: yes (blocks with free tori; relative verdict shown alongside)");
        out.line(format!("chargeless relative to the boundary: {}", yes_no(report.relative_chargeless())));
    }
    out.line(format!("chargeless: {}", yes_no(report.chargeless())));
}

fn brute_witnesses(m: &GraphManifold, n: u64, cap: u128, parallel: bool, out: &mut Output) -> Result<u8> {
    #[derive(Serialize)]
    struct BlockOut {
        block: String,
        found: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Vec<WitnessDoc>>,
    }
    #[derive(Serialize)]
    struct BruteOut {
        schema: &'static str,
        bound: u64,
        chargeless: bool,
        blocks: Vec<BlockOut>,
    }
    let mut blocks = Vec::new();
    for (v, b) in m.blocks().iter().enumerate() {
        let found = match brute_force_witness(m, v, n, cap, parallel)? {
            BruteForce::Found(w) => Some(w),
            BruteForce::Exhausted(_) => None,
        };
        blocks.push(BlockOut {
            block: b.id.clone(),
            found: found.is_some(),
            witness: found.map(|w| {
                w.iter().map(|&(r, n)| WitnessDoc { edge: r.edge, end: r.side + 1, torus: m.end(r).torus, n }).collect()
            }),
        });
    }
    let all = blocks.iter().all(|b| b.found);
    if out.is_json() {
        out.json(&BruteOut { schema: SCHEMA, bound: n, chargeless: all, blocks })?;
    } else {
        out.provenance("exhaustive witness search over [-N, N] \\ {0}, tested in block homology");
        for b in &blocks {
            match &b.witness {
                Some(w) => {
                    let parts: Vec<String> = w.iter().map(|x| format!("e{}.end{}={}", x.edge, x.end, x.n)).collect();
                    out.line(format!("block {}: chargeless, witness {}", b.block, parts.join(" ")));
                }
                None => out.line(format!("block {}: no witness with |n| <= {n}", b.block)),
            }
        }
        out.line(format!("chargeless: {}", yes_no(all)));
    }
    Ok(exit_for(all))
}
