use std::collections::BTreeSet;

use cubuland::dual_complex::{
    build_dual, convex_hull, crossing_dot, cubical_neighborhood, decompose_product, essential_core,
    is_isometrically_embedded, median, skeleton_dot, Bits, ComplexDoc, CubeComplex, Subcomplex,
};
use cubuland::wallspace::{expand_window, Basepoint, Point, Wallspace, WallspaceDoc, WallspaceKind, Window};
use cubuland::SCHEMA;
use serde::Serialize;

use crate::args::{ComplexSource, CubeCommand, Format, Graph};
use crate::error::{read_json, CliError, Result};
use crate::output::{yes_no, Output};

const PROVENANCE: &str = "dual cube complex: vertices are pairwise-consistent choices of closed sides";

pub fn load(source: &ComplexSource) -> Result<CubeComplex> {
    let doc: WallspaceDoc = read_json(&source.wallspace)?;
    if !doc.extra_walls.is_empty() {
        return Err(CliError::invalid("extra walls belong to `flat y`; `cube` takes plain wallspaces"));
    }
    let mut ws: Wallspace = doc.to_wallspace()?;
    if ws.kind() == WallspaceKind::PeriodicPlanar {
        let Some(window) = &source.window else {
            return Err(CliError::invalid("periodic wallspaces need --window x0,y0,x1,y1"));
        };
        ws = expand_window(&ws, &Window::parse(window)?, source.wall_budget)?;
    } else if source.window.is_some() {
        return Err(CliError::invalid("--window applies only to periodic wallspaces"));
    }
    let basepoint = match (&source.basepoint, source.point) {
        (Some(_), Some(_)) => return Err(CliError::invalid("give at most one of --basepoint and --point")),
        (Some(p), None) => Basepoint::Coords(Point::parse(p)?),
        (None, Some(i)) => Basepoint::Point(i),
        (None, None) => ws.default_basepoint()?,
    };
    Ok(build_dual(&ws, &basepoint, source.budget)?)
}

fn parse_vertex(c: &CubeComplex, text: &str) -> Result<usize> {
    let n = c.wall_count();
    if text.len() != n || !text.chars().all(|ch| ch == '0' || ch == '1') {
        return Err(CliError::invalid(format!("vertex {text:?} must be a 0/1 string of length {n}")));
    }
    let bits = text.chars().enumerate().fold(0 as Bits, |acc, (i, ch)| acc | (((ch == '1') as Bits) << i));
    c.index_of(bits).ok_or_else(|| CliError::invalid(format!("{text} is not a vertex of the complex")))
}

fn parse_vertices(c: &CubeComplex, texts: &[String]) -> Result<BTreeSet<usize>> {
    texts.iter().map(|t| parse_vertex(c, t)).collect()
}

fn bits_string(bits: Bits, n: usize) -> String {
    (0..n).map(|w| if (bits >> w) & 1 == 1 { '1' } else { '0' }).collect()
}

fn f_vector_text(f: &[usize]) -> String {
    f.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn summary(out: &mut Output, c: &CubeComplex) {
    out.line(format!("walls: {}", c.wall_count()));
    out.line(format!("vertices: {}", c.vertex_count()));
    out.line(format!("f-vector: {}", f_vector_text(&c.f_vector())));
    out.line(format!("dimension: {}", c.dimension()));
    out.line(format!("hyperplanes: {}", c.hyperplanes().len()));
    out.line(format!("crossings: {}", c.crossings().len()));
}

#[derive(Serialize)]
struct SubcomplexOut {
    schema: &'static str,
    vertices: Vec<String>,
    f_vector: Vec<usize>,
}

fn subcomplex_out(c: &CubeComplex, sub: &Subcomplex) -> SubcomplexOut {
    SubcomplexOut {
        schema: SCHEMA,
        vertices: sub.vertices().iter().map(|&v| c.bitstring(v)).collect(),
        f_vector: sub.f_vector(),
    }
}

pub fn run(cmd: &CubeCommand, out: &mut Output) -> Result<u8> {
    match cmd {
        CubeCommand::Dual { source, graph } => {
            let c = load(source)?;
            match out.format() {
                Format::Json => out.json(&ComplexDoc::new(&c))?,
                Format::Dot => match graph {
                    Graph::Skeleton => out.raw(&skeleton_dot(&c, None)),
                    Graph::Crossing => out.raw(&crossing_dot(&c)),
                },
                Format::Text => {
                    out.provenance(PROVENANCE);
                    summary(out, &c);
                }
            }
            Ok(0)
        }
        CubeCommand::Median { source, u, v, w } => {
            out.require(&[Format::Text, Format::Json])?;
            let c = load(source)?;
            let (u, v, w) = (parse_vertex(&c, u)?, parse_vertex(&c, v)?, parse_vertex(&c, w)?);
            let m = median(&c, u, v, w)?;
            if out.is_json() {
                #[derive(Serialize)]
                struct MedianOut {
                    schema: &'static str,
                    median: String,
                }
                out.json(&MedianOut { schema: SCHEMA, median: c.bitstring(m) })?;
            } else {
                out.provenance("median: the side chosen by at least two of the three vertices, wall by wall");
                out.line(format!("median: {}", c.bitstring(m)));
            }
            Ok(0)
        }
        CubeCommand::Hull { source, vertices, k } => {
            let c = load(source)?;
            let set = parse_vertices(&c, vertices)?;
            let hull = cubical_neighborhood(&c, &convex_hull(&c, &set), *k);
            match out.format() {
                Format::Json => out.json(&subcomplex_out(&c, &hull))?,
                Format::Dot => out.raw(&skeleton_dot(&c, Some(&hull))),
                Format::Text => {
                    out.provenance("cubical convex hull: vertices no hyperplane separates from the set");
                    if *k > 0 {
                        out.line(format!("thickened by {k} layer(s) of closed cubes"));
                    }
                    out.line(format!("f-vector: {}", f_vector_text(&hull.f_vector())));
                    for &v in hull.vertices() {
                        out.line(c.bitstring(v));
                    }
                }
            }
            Ok(0)
        }
        CubeCommand::Core { source, vertices, horizon } => {
            out.require(&[Format::Text, Format::Json])?;
            let c = load(source)?;
            let sub = if vertices.is_empty() {
                Subcomplex::whole(&c)
            } else {
                Subcomplex::spanned(&c, parse_vertices(&c, vertices)?)
            };
            let core = essential_core(&c, &sub, *horizon)?;
            if out.is_json() {
                out.json(&ComplexDoc::new(&core))?;
            } else {
                out.provenance(
                    "essential core: dual of the walls the subcomplex passes at depth horizon on both sides",
                );
                out.line(format!("horizon: {horizon}"));
                out.line(format!("essential walls: {}", core.system().labels().join(", ")));
                summary(out, &core);
            }
            Ok(0)
        }
        CubeCommand::Product { source } => {
            out.require(&[Format::Text, Format::Json])?;
            let c = load(source)?;
            let d = decompose_product(&c);
            let labels = |ws: &[usize]| ws.iter().map(|&w| c.system().label(w).to_string()).collect::<Vec<_>>();
            if out.is_json() {
                #[derive(Serialize)]
                struct FactorOut {
                    walls: Vec<String>,
                    f_vector: Vec<usize>,
                }
                #[derive(Serialize)]
                struct ProductOut {
                    schema: &'static str,
                    product: bool,
                    irreducible: bool,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    obstruction: Option<String>,
                    factors: Vec<FactorOut>,
                }
                out.json(&ProductOut {
                    schema: SCHEMA,
                    product: d.is_product(),
                    irreducible: d.is_irreducible(),
                    obstruction: d.obstruction.map(|b| bits_string(b, c.wall_count())),
                    factors: d
                        .factors
                        .iter()
                        .map(|f| FactorOut { walls: labels(&f.walls), f_vector: f.complex.f_vector() })
                        .collect(),
                })?;
            } else {
                out.provenance("product decomposition: components of the non-crossing graph of hyperplanes");
                out.line(format!("factors: {}", d.factors.len()));
                for (k, f) in d.factors.iter().enumerate() {
                    out.line(format!(
                        "  factor {k}: walls [{}], f-vector {}",
                        labels(&f.walls).join(", "),
                        f_vector_text(&f.complex.f_vector())
                    ));
                }
                out.line(format!("irreducible: {}", yes_no(d.is_irreducible())));
                match d.obstruction {
                    None => out.line("product: yes"),
                    Some(b) => out.line(format!("product: no, {} is missing", bits_string(b, c.wall_count()))),
                }
            }
            Ok(0)
        }
        CubeCommand::Isometric { source, vertices } => {
            out.require(&[Format::Text, Format::Json])?;
            let c = load(source)?;
            let sub = Subcomplex::spanned(&c, parse_vertices(&c, vertices)?);
            let e = is_isometrically_embedded(&c, &sub)?;
            let witness = e.witness.map(|(a, b)| [c.bitstring(a), c.bitstring(b)]);
            if out.is_json() {
                #[derive(Serialize)]
                struct IsoOut {
                    schema: &'static str,
                    isometric: bool,
                    #[serde(skip_serializing_if = "Option::is_none")]
                    witness: Option<[String; 2]>,
                }
                out.json(&IsoOut { schema: SCHEMA, isometric: e.isometric, witness })?;
            } else {
                out.provenance("isometric embedding: path distance inside the subcomplex equals separating walls");
                out.line(format!("isometric: {}", yes_no(e.isometric)));
                if let Some([a, b]) = witness {
                    out.line(format!("witness: {a} {b}"));
                }
            }
            Ok(if e.isometric { 0 } else { 1 })
        }
    }
}
