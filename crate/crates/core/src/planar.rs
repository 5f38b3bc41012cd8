//! Periodic line arrangements in the plane: parallel families, the cube
//! complexes dual to finite windows of them (combinatorial flats), and the
//! complex obtained by adding walls that stay off the window.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::dual_complex::{
    build_dual, decompose_product, is_isometrically_embedded, restrict_bits, Bits, CubeComplex, DualError, Subcomplex,
    DEFAULT_VERTEX_BUDGET,
};
use crate::exact::{self, Rational};
use crate::wallspace::{
    expand_window, ExtraWallDoc, Lattice, Line, LineDoc, Point, Side, Wallspace, WallspaceDoc, WallspaceError, Window,
    DEFAULT_WALL_BUDGET,
};
use crate::SCHEMA;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanarError {
    #[error(transparent)]
    Wallspace(#[from] WallspaceError),
    #[error(transparent)]
    Dual(#[from] DualError),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{n} parallel famil{} found; {message}", if *n == 1 { "y" } else { "ies" })]
    BelowMinimum { n: usize, message: String },
    #[error("structural failure: {0}")]
    Structural(String),
}

pub type Result<T> = std::result::Result<T, PlanarError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(PlanarError::InvalidInput(msg.into()))
}

fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(PlanarError::Structural(msg.into()))
}

/// Caps applied when expanding windows and building duals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub walls: usize,
    pub vertices: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { walls: DEFAULT_WALL_BUDGET, vertices: DEFAULT_VERTEX_BUDGET }
    }
}

/// Lines listed modulo a lattice, plus finitely many extra walls that each
/// carry a designated side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicArrangement {
    lattice: Lattice,
    lines: Vec<(Line, u32)>,
    extra_walls: Vec<(Line, Side)>,
}

impl PeriodicArrangement {
    pub fn new(lattice: Lattice, lines: Vec<(Line, u32)>, extra_walls: Vec<(Line, Side)>) -> Result<Self> {
        if lines.is_empty() {
            return invalid("arrangement has no lines");
        }
        // reuses the translate and duplicate checks
        Wallspace::periodic_planar(lattice, lines.clone())?;
        let mut seen = BTreeSet::new();
        for (k, (line, _)) in extra_walls.iter().enumerate() {
            if !seen.insert(line.clone()) {
                return invalid(format!("extra wall {k} ({line}) is listed twice"));
            }
        }
        Ok(PeriodicArrangement { lattice, lines, extra_walls })
    }

    pub fn from_doc(doc: &WallspaceDoc) -> Result<Self> {
        if doc.kind != "periodic-planar" {
            return invalid(format!("arrangement must be periodic-planar, got {:?}", doc.kind));
        }
        let ws = doc.to_wallspace()?;
        let lines = ws.walls().iter().map(|w| (w.geometry.line().unwrap().clone(), w.multiplicity)).collect();
        let mut extra = Vec::with_capacity(doc.extra_walls.len());
        for (k, e) in doc.extra_walls.iter().enumerate() {
            let side = match e.side {
                0 => Side::S0,
                1 => Side::S1,
                s => return invalid(format!("extra wall {k} has side {s}; expected 0 or 1")),
            };
            if e.line.mult.is_some_and(|m| m != 1) {
                return invalid(format!("extra wall {k} has a multiplicity; extra walls are single"));
            }
            extra.push((e.line.to_line()?, side));
        }
        PeriodicArrangement::new(*ws.lattice().unwrap(), lines, extra)
    }

    pub fn to_doc(&self) -> WallspaceDoc {
        WallspaceDoc {
            schema: Some(SCHEMA.to_string()),
            kind: "periodic-planar".into(),
            points: None,
            lattice: Some([self.lattice.u, self.lattice.v]),
            lines: self.lines.iter().map(|(l, m)| LineDoc::from_line(l, Some(*m))).collect(),
            walls: Vec::new(),
            extra_walls: self
                .extra_walls
                .iter()
                .map(|(l, s)| ExtraWallDoc { line: LineDoc::from_line(l, None), side: s.index() as u8 })
                .collect(),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn lines(&self) -> &[(Line, u32)] {
        &self.lines
    }

    pub fn extra_walls(&self) -> &[(Line, Side)] {
        &self.extra_walls
    }

    /// The arrangement without its extra walls.
    pub fn essential(&self) -> PeriodicArrangement {
        PeriodicArrangement { extra_walls: Vec::new(), ..self.clone() }
    }

    pub fn wallspace(&self) -> Wallspace {
        Wallspace::periodic_planar(self.lattice, self.lines.clone()).expect("validated at construction")
    }

    /// Same lines under a different basis of the same lattice.
    pub fn with_lattice(&self, lattice: Lattice) -> Result<Self> {
        if lattice.determinant().abs() != self.lattice.determinant().abs() {
            return Err(PlanarError::InvalidLattice("new basis spans a different lattice".into()));
        }
        let contains = |w: [i64; 2]| {
            // w = s u + t v with integer s, t
            let det = self.lattice.determinant();
            let s = w[0] as i128 * self.lattice.v[1] as i128 - w[1] as i128 * self.lattice.v[0] as i128;
            let t = self.lattice.u[0] as i128 * w[1] as i128 - self.lattice.u[1] as i128 * w[0] as i128;
            s % det == 0 && t % det == 0
        };
        if !contains(lattice.u) || !contains(lattice.v) {
            return Err(PlanarError::InvalidLattice("new basis spans a different lattice".into()));
        }
        PeriodicArrangement::new(lattice, self.lines.clone(), self.extra_walls.clone())
    }
}

/// One parallel family: all listed lines sharing a normal, with their
/// lattice translates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    /// Canonical normal `(A, B)`.
    pub normal: (BigInt, BigInt),
    /// Primitive direction vector.
    pub direction: (BigInt, BigInt),
    /// Spacing between consecutive translates of any one line.
    pub step: BigInt,
    /// Indices into the arrangement's lines.
    pub lines: Vec<usize>,
    /// Offsets reduced into `[0, step)`, increasing, with multiplicities.
    pub period: Vec<(Rational, u32)>,
}

impl Family {
    /// Cube dimensions met along one period.
    pub fn pattern(&self) -> Vec<u32> {
        self.period.iter().map(|(_, m)| *m).collect()
    }

    pub fn is_standard(&self) -> bool {
        self.period.iter().all(|(_, m)| *m == 1)
    }

    fn contains(&self, line: &Line) -> bool {
        line.a() == &self.normal.0 && line.b() == &self.normal.1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelFamilyReport {
    pub families: Vec<Family>,
}

impl ParallelFamilyReport {
    pub fn n(&self) -> usize {
        self.families.len()
    }

    pub fn directions(&self) -> Vec<(BigInt, BigInt)> {
        self.families.iter().map(|f| f.direction.clone()).collect()
    }

    fn family_of(&self, line: &Line) -> Option<usize> {
        self.families.iter().position(|f| f.contains(line))
    }
}

fn reduce_offset(c: &Rational, step: &BigInt) -> Rational {
    let s = Rational::from_integer(step.clone());
    let k = exact::floor(&(c / &s));
    c - Rational::from_integer(k) * s
}

/// Groups the essential lines by direction, in order of first appearance.
pub fn parallel_families(arr: &PeriodicArrangement) -> Result<ParallelFamilyReport> {
    let mut families: Vec<Family> = Vec::new();
    for (i, (line, _)) in arr.lines.iter().enumerate() {
        if let Some(f) = families.iter_mut().find(|f| f.contains(line)) {
            f.lines.push(i);
            continue;
        }
        let step = arr.lattice.offset_step(line.a(), line.b());
        if step.is_zero() {
            return Err(PlanarError::InvalidLattice(format!("no lattice translate of {line} differs from it")));
        }
        families.push(Family {
            normal: (line.a().clone(), line.b().clone()),
            direction: line.direction(),
            step,
            lines: vec![i],
            period: Vec::new(),
        });
    }
    for f in &mut families {
        let mut period: BTreeMap<Rational, u32> = BTreeMap::new();
        for &i in &f.lines {
            let (line, mult) = &arr.lines[i];
            *period.entry(reduce_offset(line.c(), &f.step)).or_insert(0) += mult;
        }
        f.period = period.into_iter().collect();
    }
    Ok(ParallelFamilyReport { families })
}

fn corner_on_line(report: &ParallelFamilyReport, arr: &PeriodicArrangement, p: &Point) -> bool {
    report.families.iter().any(|f| {
        let line = &arr.lines[f.lines[0]].0;
        let level = line.level(p);
        let step = Rational::from_integer(f.step.clone());
        f.period.iter().any(|(c, _)| ((&level - c) / &step).is_integer())
    })
}

/// Shifts the window off every line. The shift is `delta * (1, t)` with `t`
/// the least natural number making no family normal orthogonal to `(1, t)`,
/// and `delta` starting at half the smallest resulting level gap, halved
/// until all four corners are clear. Returns the window unchanged when no
/// corner lies on a line.
pub fn nudge_window(arr: &PeriodicArrangement, window: &Window) -> Result<Window> {
    let report = parallel_families(arr)?;
    let clear = |w: &Window| w.corners().iter().all(|p| !corner_on_line(&report, arr, p));
    if clear(window) {
        return Ok(window.clone());
    }
    let t = (0i64..).find(|&t| report.families.iter().all(|f| !(&f.normal.0 + &f.normal.1 * t).is_zero())).unwrap();
    let mut delta = report
        .families
        .iter()
        .map(|f| {
            let rate = (&f.normal.0 + &f.normal.1 * t).abs();
            Rational::new(f.step.clone(), rate)
        })
        .min()
        .unwrap()
        / exact::int(2);
    loop {
        let shifted = window.translate(&delta, &(&delta * exact::int(t)));
        if clear(&shifted) {
            return Ok(shifted);
        }
        delta /= exact::int(2);
    }
}

/// Dual of a window of an arrangement together with its certified product
/// structure.
#[derive(Debug, Clone)]
pub struct DualFlat {
    pub complex: CubeComplex,
    pub families: ParallelFamilyReport,
    /// The window actually used, after nudging.
    pub window: Window,
    /// Wall instances of the complex in each family, in offset order.
    pub family_walls: Vec<Vec<usize>>,
    /// Cube dimensions along each family factor, in offset order.
    pub chains: Vec<Vec<u32>>,
}

impl DualFlat {
    pub fn n(&self) -> usize {
        self.families.n()
    }

    /// Predicted vertex count of each family factor.
    pub fn factor_vertex_counts(&self) -> Vec<usize> {
        self.chains.iter().map(|c| chain_vertex_count(c)).collect()
    }
}

/// Vertices of a chain of cubes glued at opposite corners.
fn chain_vertex_count(dims: &[u32]) -> usize {
    if dims.is_empty() {
        return 1;
    }
    dims.iter().map(|&d| 1usize << d).sum::<usize>() - (dims.len() - 1)
}

fn expanded_groups(ws: &Wallspace) -> Vec<(Line, Vec<usize>)> {
    let mut out = Vec::new();
    let mut next = 0;
    for w in ws.walls() {
        let m = w.multiplicity as usize;
        out.push((w.geometry.line().unwrap().clone(), (next..next + m).collect()));
        next += m;
    }
    out
}

/// Builds the dual of the arrangement's essential lines meeting `window`
/// and certifies it against the predicted product of chains of cubes.
pub fn dual_flat(arr: &PeriodicArrangement, window: &Window, budget: Budget) -> Result<DualFlat> {
    let families = parallel_families(arr)?;
    let window = nudge_window(arr, window)?;
    let finite = expand_window(&arr.wallspace(), &window, budget.walls)?;
    let groups = expanded_groups(&finite);
    let mut per_family: Vec<Vec<(Rational, Vec<usize>)>> = vec![Vec::new(); families.n()];
    for (line, instances) in groups {
        let f = families.family_of(&line).expect("expanded lines belong to listed families");
        per_family[f].push((line.c().clone(), instances));
    }
    for (f, lines) in per_family.iter_mut().enumerate() {
        if lines.is_empty() {
            return invalid(format!(
                "window {window} meets no line of family {f} (direction {:?})",
                families.families[f].direction
            ));
        }
        lines.sort_by(|a, b| a.0.cmp(&b.0));
    }
    let basepoint = finite.default_basepoint()?;
    let complex = build_dual(&finite, &basepoint, budget.vertices)?;
    let family_walls: Vec<Vec<usize>> =
        per_family.iter().map(|ls| ls.iter().flat_map(|(_, ws)| ws.iter().copied()).collect()).collect();
    let chains: Vec<Vec<u32>> =
        per_family.iter().map(|ls| ls.iter().map(|(_, ws)| ws.len() as u32).collect()).collect();
    let flat = DualFlat { complex, families, window, family_walls, chains };
    certify_flat(&flat, &per_family)?;
    Ok(flat)
}

fn certify_flat(flat: &DualFlat, per_family: &[Vec<(Rational, Vec<usize>)>]) -> Result<()> {
    let c = &flat.complex;
    let predicted: usize = flat.factor_vertex_counts().iter().product();
    if c.vertex_count() != predicted {
        return structural(format!(
            "dual has {} vertices, the product of family chains predicts {predicted}",
            c.vertex_count()
        ));
    }
    for (f, ws) in flat.family_walls.iter().enumerate() {
        for (g, other) in flat.family_walls.iter().enumerate().skip(f + 1) {
            for &i in ws {
                for &j in other {
                    if !c.hyperplanes_cross(i, j) {
                        return structural(format!("walls {i} and {j} of families {f} and {g} do not cross"));
                    }
                }
            }
        }
    }
    for (f, lines) in per_family.iter().enumerate() {
        certify_chain(c, f, lines)?;
    }
    let decomposition = decompose_product(c);
    if !decomposition.is_product() {
        return structural("factors of the flat do not multiply back to it");
    }
    for factor in &decomposition.factors {
        let fam: BTreeSet<usize> =
            factor.walls.iter().map(|w| flat.family_walls.iter().position(|ws| ws.contains(w)).unwrap()).collect();
        if fam.len() != 1 {
            return structural(format!("product factor on walls {:?} mixes families", factor.walls));
        }
    }
    Ok(())
}

/// Checks that one family's walls give a chain of cubes of the predicted
/// dimensions, each glued to the next at a single vertex opposite the one
/// shared with the previous cube.
fn certify_chain(c: &CubeComplex, f: usize, lines: &[(Rational, Vec<usize>)]) -> Result<()> {
    let mut corner_sets: Vec<BTreeSet<Bits>> = Vec::new();
    for (_, instances) in lines {
        let mask: Bits = instances.iter().fold(0, |m, &w| m | ((1 as Bits) << w));
        let dim = instances.len();
        let cubes: Vec<_> = c.cells(dim).iter().filter(|cell| cell.walls == mask).collect();
        if cubes.is_empty() {
            return structural(format!("family {f}: no {dim}-cube spanned by walls {instances:?}"));
        }
        // project corners onto this family's walls; other families only
        // contribute parallel copies of the same cube
        let all: Vec<usize> = lines.iter().flat_map(|(_, ws)| ws.iter().copied()).collect();
        let projected: BTreeSet<BTreeSet<Bits>> = cubes
            .iter()
            .map(|cell| c.corners(cell).iter().map(|&v| restrict_bits(c.vertex(v), &all)).collect())
            .collect();
        if projected.len() != 1 {
            return structural(format!(
                "family {f}: walls {instances:?} span {} distinct cubes in the family factor",
                projected.len()
            ));
        }
        corner_sets.push(projected.into_iter().next().unwrap());
    }
    let mut previous_joint: Option<Bits> = None;
    for k in 0..corner_sets.len().saturating_sub(1) {
        let shared: Vec<&Bits> = corner_sets[k].intersection(&corner_sets[k + 1]).collect();
        if shared.len() != 1 {
            return structural(format!(
                "family {f}: cubes {k} and {} share {} vertices instead of one",
                k + 1,
                shared.len()
            ));
        }
        let joint = *shared[0];
        if let Some(prev) = previous_joint {
            let width = lines[k].1.len() as u32;
            if (prev ^ joint).count_ones() != width {
                return structural(format!("family {f}: cube {k} is not entered and left at opposite corners"));
            }
        }
        previous_joint = Some(joint);
    }
    for (k, set) in corner_sets.iter().enumerate() {
        for (l, other) in corner_sets.iter().enumerate().skip(k + 2) {
            if !set.is_disjoint(other) {
                return structural(format!("family {f}: non-consecutive cubes {k} and {l} touch"));
            }
        }
    }
    Ok(())
}

/// The ambient dual of essential lines plus extra walls, and inside it the
/// subcomplex with every extra wall held on its designated side.
#[derive(Debug, Clone)]
pub struct YComplex {
    pub ambient: CubeComplex,
    pub y: Subcomplex,
    /// Ambient wall instances of the extra walls.
    pub frozen: Vec<usize>,
    /// Ambient wall instances of the essential lines.
    pub essential_walls: Vec<usize>,
    pub flat: DualFlat,
    /// Vertices whose essential sides are those of a vertex of `y`, extra
    /// walls unconstrained.
    pub relaxed: Subcomplex,
}

/// Adds the extra walls to a window of the arrangement and cuts out the
/// subcomplex they leave on their designated sides. Each designated side
/// must contain the window and every two of them must meet.
pub fn build_y(arr: &PeriodicArrangement, window: &Window, budget: Budget) -> Result<YComplex> {
    let flat = dual_flat(&arr.essential(), window, budget)?;
    let window = flat.window.clone();
    for (k, (line, side)) in arr.extra_walls.iter().enumerate() {
        if !window.corners().iter().all(|p| line.closed_side_contains(*side, p)) {
            return invalid(format!(
                "extra wall {k} ({line}) has designated side {} not containing the window {window}",
                side.index()
            ));
        }
    }
    for (i, (li, si)) in arr.extra_walls.iter().enumerate() {
        for (j, (lj, sj)) in arr.extra_walls.iter().enumerate().skip(i + 1) {
            if !crate::wallspace::halfplanes_intersect(li, *si, lj, *sj) {
                return invalid(format!("designated sides of extra walls {i} and {j} are disjoint"));
            }
        }
    }
    let finite = expand_window(&arr.essential().wallspace(), &window, budget.walls)?;
    let essential_lines: Vec<Line> = finite.walls().iter().map(|w| w.geometry.line().unwrap().clone()).collect();
    let mut all: Vec<(Line, u32)> =
        finite.walls().iter().map(|w| (w.geometry.line().unwrap().clone(), w.multiplicity)).collect();
    for (k, (line, _)) in arr.extra_walls.iter().enumerate() {
        if essential_lines.contains(line) {
            return invalid(format!("extra wall {k} ({line}) coincides with an essential line in the window"));
        }
        all.push((line.clone(), 1));
    }
    let ambient_ws = Wallspace::finite_planar(all)?;
    if ambient_ws.instance_count() > budget.walls {
        return Err(WallspaceError::BudgetExceeded { count: ambient_ws.instance_count(), budget: budget.walls }.into());
    }
    let basepoint = ambient_ws.default_basepoint()?;
    let ambient = build_dual(&ambient_ws, &basepoint, budget.vertices)?;
    let essential_count = finite.instance_count();
    let essential_walls: Vec<usize> = (0..essential_count).collect();
    let frozen: Vec<usize> = (essential_count..ambient.wall_count()).collect();
    let designated: Bits =
        arr.extra_walls.iter().enumerate().fold(0, |m, (k, (_, s))| m | ((s.index() as Bits) << (essential_count + k)));
    let frozen_mask: Bits = frozen.iter().fold(0, |m, &w| m | ((1 as Bits) << w));
    let y_vertices: Vec<usize> =
        (0..ambient.vertex_count()).filter(|&v| ambient.vertex(v) & frozen_mask == designated).collect();
    let y = Subcomplex::spanned(&ambient, y_vertices.iter().copied());
    let essential_mask = !frozen_mask & ambient.system().full_mask();
    let y_sides: BTreeSet<Bits> = y_vertices.iter().map(|&v| ambient.vertex(v) & essential_mask).collect();
    let relaxed = Subcomplex::spanned(
        &ambient,
        (0..ambient.vertex_count()).filter(|&v| y_sides.contains(&(ambient.vertex(v) & essential_mask))),
    );
    let out = YComplex { ambient, y, frozen, essential_walls, flat, relaxed };
    certify_y(&out)?;
    Ok(out)
}

fn certify_y(yc: &YComplex) -> Result<()> {
    let flat = &yc.flat.complex;
    // The flat and the ambient expand the same essential lines in the same
    // order, so essential wall k of one is essential wall k of the other.
    let projected: BTreeSet<Bits> =
        yc.y.vertices().iter().map(|&v| restrict_bits(yc.ambient.vertex(v), &yc.essential_walls)).collect();
    let flat_vertices: BTreeSet<Bits> = flat.vertices().iter().copied().collect();
    if projected.len() != yc.y.vertices().len() || projected != flat_vertices {
        return structural(format!(
            "subcomplex on designated sides has {} vertices projecting to {} distinct orientations; the flat has {}",
            yc.y.vertices().len(),
            projected.len(),
            flat.vertex_count()
        ));
    }
    if yc.y.f_vector() != flat.f_vector() {
        return structural(format!(
            "subcomplex on designated sides has cell counts {:?}, the flat has {:?}",
            yc.y.f_vector(),
            flat.f_vector()
        ));
    }
    let embedding = is_isometrically_embedded(&yc.ambient, &yc.y)?;
    if let Some((u, v)) = embedding.witness {
        return structural(format!("1-skeleton is not isometrically embedded: vertices {u} and {v}"));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub enum FamilyCase {
    /// Three or more families: the window's dual is a certified flat.
    Flat(DualFlat),
    /// Exactly two families.
    TwoFamilies(ParallelFamilyReport),
}

/// Splits arrangements by family count. With three or more families the
/// flat over `window` is built and certified.
pub fn classify_families(arr: &PeriodicArrangement, window: &Window, budget: Budget) -> Result<FamilyCase> {
    let report = parallel_families(arr)?;
    match report.n() {
        0 | 1 => Err(PlanarError::BelowMinimum {
            n: report.n(),
            message: "the construction starts from two hyperplanes intersecting transversely, \
                      which needs lines of at least two directions"
                .into(),
        }),
        2 => Ok(FamilyCase::TwoFamilies(report)),
        _ => Ok(FamilyCase::Flat(dual_flat(arr, window, budget)?)),
    }
}
