//! Walls, wallspaces and the closed-halfspace intersection predicate.
//!
//! Three kinds are supported: finite bipartitions of a point set, finite
//! arrangements of rational lines in the plane, and lattice-periodic line
//! arrangements. Coinciding walls are never listed twice; they carry a
//! multiplicity instead, and every consumer expands a wall of multiplicity
//! `m` into `m` parallel copies ("wall instances").
//!
//! A line `A x + B y = C` is stored with `(A, B)` a primitive integer pair
//! whose first nonzero entry is positive and `C` rational. Side 0 is the closed
//! halfplane `A x + B y <= C`, side 1 is `A x + B y >= C`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{self, format_rational, parse_rational, Rational};
use crate::SCHEMA;

pub const DEFAULT_WALL_BUDGET: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WallspaceError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("basepoint lies on wall {wall}")]
    DegenerateBasepoint { wall: usize },
    #[error("window contains {count} walls, budget is {budget}")]
    BudgetExceeded { count: usize, budget: usize },
    #[error("cannot compare a {0} wall with a {1} wall")]
    MixedKinds(&'static str, &'static str),
}

type Result<T> = std::result::Result<T, WallspaceError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(WallspaceError::InvalidInput(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    S0,
    S1,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::S0 => 0,
            Side::S1 => 1,
        }
    }

    pub fn from_index(i: usize) -> Side {
        if i == 0 {
            Side::S0
        } else {
            Side::S1
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::S0 => Side::S1,
            Side::S1 => Side::S0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    /// Parses `"x,y"` with rational coordinates.
    pub fn parse(text: &str) -> Result<Self> {
        let Some((x, y)) = text.split_once(',') else {
            return invalid(format!("point {text:?} must be written \"x,y\""));
        };
        let x = parse_rational(x).map_err(|e| WallspaceError::InvalidInput(e.to_string()))?;
        let y = parse_rational(y).map_err(|e| WallspaceError::InvalidInput(e.to_string()))?;
        Ok(Point { x, y })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rational(&self.x), format_rational(&self.y))
    }
}

/// A rational line in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    a: BigInt,
    b: BigInt,
    c: Rational,
}

impl Line {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return invalid("line has (A, B) = (0, 0)");
        }
        // Clear denominators of (A, B), then divide by their gcd.
        let den = a.denom().lcm(b.denom());
        let scale = Rational::from_integer(den);
        let (a, b, c) = (&a * &scale, &b * &scale, &c * &scale);
        let (ai, bi) = (a.to_integer(), b.to_integer());
        let g = ai.gcd(&bi);
        let mut line = Line { a: &ai / &g, b: &bi / &g, c: c / Rational::from_integer(g) };
        let first = if line.a.is_zero() { &line.b } else { &line.a };
        if first.is_negative() {
            line.a = -line.a;
            line.b = -line.b;
            line.c = -line.c;
        }
        Ok(line)
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        Line::new(exact::int(a), exact::int(b), exact::int(c))
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    /// `A x + B y` at `p`.
    pub fn level(&self, p: &Point) -> Rational {
        Rational::from_integer(self.a.clone()) * &p.x + Rational::from_integer(self.b.clone()) * &p.y
    }

    /// Side strictly containing `p`, or `None` when `p` is on the line.
    pub fn side_of(&self, p: &Point) -> Option<Side> {
        match self.level(p).cmp(&self.c) {
            std::cmp::Ordering::Less => Some(Side::S0),
            std::cmp::Ordering::Greater => Some(Side::S1),
            std::cmp::Ordering::Equal => None,
        }
    }

    /// Whether the closed side `side` contains `p`.
    pub fn closed_side_contains(&self, side: Side, p: &Point) -> bool {
        match self.side_of(p) {
            None => true,
            Some(s) => s == side,
        }
    }

    pub fn is_parallel(&self, other: &Line) -> bool {
        self.a == other.a && self.b == other.b
    }

    /// Primitive direction vector `(B, -A)`, sign-normalized so the first
    /// nonzero entry is positive.
    pub fn direction(&self) -> (BigInt, BigInt) {
        let (dx, dy) = (self.b.clone(), -self.a.clone());
        let first = if dx.is_zero() { &dy } else { &dx };
        if first.is_negative() {
            (-dx, -dy)
        } else {
            (dx, dy)
        }
    }

    /// Translate of this line by the integer vector `v`.
    pub fn translate(&self, v: (&BigInt, &BigInt)) -> Line {
        let shift = &self.a * v.0 + &self.b * v.1;
        Line { a: self.a.clone(), b: self.b.clone(), c: &self.c + Rational::from_integer(shift) }
    }

    pub fn with_offset(&self, c: Rational) -> Line {
        Line { a: self.a.clone(), b: self.b.clone(), c }
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.a, self.b, format_rational(&self.c))
    }
}

/// Whether the closed sides of two lines meet. Transverse lines always meet;
/// parallel lines meet unless the sides face away from each other with a gap.
pub fn halfplanes_intersect(l1: &Line, s1: Side, l2: &Line, s2: Side) -> bool {
    if !l1.is_parallel(l2) {
        return true;
    }
    match (s1, s2) {
        (Side::S0, Side::S0) | (Side::S1, Side::S1) => true,
        // {<= c1} meets {>= c2} iff c2 <= c1.
        (Side::S0, Side::S1) => l2.c <= l1.c,
        (Side::S1, Side::S0) => l1.c <= l2.c,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WallGeometry {
    Bipartition { side0: BTreeSet<usize>, side1: BTreeSet<usize> },
    HalfplanePair(Line),
}

impl WallGeometry {
    fn kind_name(&self) -> &'static str {
        match self {
            WallGeometry::Bipartition { .. } => "bipartition",
            WallGeometry::HalfplanePair(_) => "halfplane",
        }
    }

    pub fn line(&self) -> Option<&Line> {
        match self {
            WallGeometry::HalfplanePair(l) => Some(l),
            WallGeometry::Bipartition { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub id: usize,
    pub geometry: WallGeometry,
    pub multiplicity: u32,
}

/// Whether side `s1` of `w1` meets side `s2` of `w2` (closed sides).
pub fn sides_intersect(w1: &Wall, s1: Side, w2: &Wall, s2: Side) -> Result<bool> {
    geometries_intersect(&w1.geometry, s1, &w2.geometry, s2)
}

pub fn geometries_intersect(g1: &WallGeometry, s1: Side, g2: &WallGeometry, s2: Side) -> Result<bool> {
    match (g1, g2) {
        (WallGeometry::HalfplanePair(l1), WallGeometry::HalfplanePair(l2)) => Ok(halfplanes_intersect(l1, s1, l2, s2)),
        (WallGeometry::Bipartition { side0: a0, side1: a1 }, WallGeometry::Bipartition { side0: b0, side1: b1 }) => {
            let x = if s1 == Side::S0 { a0 } else { a1 };
            let y = if s2 == Side::S0 { b0 } else { b1 };
            Ok(!x.is_disjoint(y))
        }
        _ => Err(WallspaceError::MixedKinds(g1.kind_name(), g2.kind_name())),
    }
}

/// Two walls cross when all four side pairs meet.
pub fn walls_cross(g1: &WallGeometry, g2: &WallGeometry) -> Result<bool> {
    for s1 in [Side::S0, Side::S1] {
        for s2 in [Side::S0, Side::S1] {
            if !geometries_intersect(g1, s1, g2, s2)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallspaceKind {
    FiniteBipartition,
    FinitePlanar,
    PeriodicPlanar,
}

impl WallspaceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WallspaceKind::FiniteBipartition => "finite-bipartition",
            WallspaceKind::FinitePlanar => "finite-planar",
            WallspaceKind::PeriodicPlanar => "periodic-planar",
        }
    }
}

/// Two linearly independent integer translation vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lattice {
    pub u: [i64; 2],
    pub v: [i64; 2],
}

impl Lattice {
    pub fn new(u: [i64; 2], v: [i64; 2]) -> Result<Self> {
        let lattice = Lattice { u, v };
        if lattice.determinant() == 0 {
            return invalid(format!("lattice vectors {u:?}, {v:?} are linearly dependent"));
        }
        Ok(lattice)
    }

    pub fn determinant(&self) -> i128 {
        self.u[0] as i128 * self.v[1] as i128 - self.u[1] as i128 * self.v[0] as i128
    }

    /// Spacing of the translates of a line with normal `(a, b)`: the positive
    /// generator of `{ (a, b) . w : w in lattice }`.
    pub fn offset_step(&self, a: &BigInt, b: &BigInt) -> BigInt {
        let du = a * self.u[0] + b * self.u[1];
        let dv = a * self.v[0] + b * self.v[1];
        du.gcd(&dv)
    }
}

/// Point-id or planar coordinates, depending on the wallspace kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Basepoint {
    Point(usize),
    Coords(Point),
}

/// Side choice for every wall instance (copies of a multiple wall included).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Orientation {
    pub sides: Vec<Side>,
}

impl Orientation {
    pub fn side(&self, wall: usize) -> Side {
        self.sides[wall]
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sides.is_empty()
    }
}

/// A rational box `[min.x, max.x] x [min.y, max.y]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub min: Point,
    pub max: Point,
}

impl Window {
    pub fn new(min: Point, max: Point) -> Result<Self> {
        if min.x >= max.x || min.y >= max.y {
            return invalid(format!("window {min} .. {max} is degenerate"));
        }
        Ok(Window { min, max })
    }

    pub fn square(lo: Rational, hi: Rational) -> Result<Self> {
        Window::new(Point::new(lo.clone(), lo), Point::new(hi.clone(), hi))
    }

    /// Parses `"x0,y0,x1,y1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').collect();
        if parts.len() != 4 {
            return invalid(format!("window {text:?} must be written \"x0,y0,x1,y1\""));
        }
        let mut vals = Vec::with_capacity(4);
        for p in parts {
            vals.push(parse_rational(p).map_err(|e| WallspaceError::InvalidInput(e.to_string()))?);
        }
        let y1 = vals.pop().unwrap();
        let x1 = vals.pop().unwrap();
        let y0 = vals.pop().unwrap();
        let x0 = vals.pop().unwrap();
        Window::new(Point::new(x0, y0), Point::new(x1, y1))
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            self.min.clone(),
            Point::new(self.max.x.clone(), self.min.y.clone()),
            Point::new(self.min.x.clone(), self.max.y.clone()),
            self.max.clone(),
        ]
    }

    /// Range of `A x + B y` over the closed box.
    pub fn level_range(&self, line: &Line) -> (Rational, Rational) {
        let levels: Vec<Rational> = self.corners().iter().map(|p| line.level(p)).collect();
        let lo = levels.iter().min().unwrap().clone();
        let hi = levels.iter().max().unwrap().clone();
        (lo, hi)
    }

    pub fn meets_line(&self, line: &Line) -> bool {
        let (lo, hi) = self.level_range(line);
        lo <= line.c && line.c <= hi
    }

    /// Whether the closed side of `line` meets the box.
    pub fn meets_side(&self, line: &Line, side: Side) -> bool {
        self.corners().iter().any(|p| line.closed_side_contains(side, p))
    }

    pub fn translate(&self, dx: &Rational, dy: &Rational) -> Window {
        Window {
            min: Point::new(&self.min.x + dx, &self.min.y + dy),
            max: Point::new(&self.max.x + dx, &self.max.y + dy),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            format_rational(&self.min.x),
            format_rational(&self.max.x),
            format_rational(&self.min.y),
            format_rational(&self.max.y)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wallspace {
    kind: WallspaceKind,
    points: usize,
    walls: Vec<Wall>,
    lattice: Option<Lattice>,
}

impl Wallspace {
    pub fn bipartition(points: usize, walls: Vec<(BTreeSet<usize>, BTreeSet<usize>, u32)>) -> Result<Self> {
        let mut seen: BTreeSet<(BTreeSet<usize>, BTreeSet<usize>)> = BTreeSet::new();
        let mut out = Vec::with_capacity(walls.len());
        for (id, (side0, side1, mult)) in walls.into_iter().enumerate() {
            if mult == 0 {
                return invalid(format!("wall {id} has multiplicity 0"));
            }
            if side0.is_empty() || side1.is_empty() {
                return invalid(format!("wall {id} has an empty side"));
            }
            if !side0.is_disjoint(&side1) {
                return invalid(format!("wall {id} has overlapping sides"));
            }
            if side0.len() + side1.len() != points || side0.iter().chain(&side1).any(|&p| p >= points) {
                return invalid(format!("wall {id} does not partition points 0..{points}"));
            }
            let key = if side0 < side1 { (side0.clone(), side1.clone()) } else { (side1.clone(), side0.clone()) };
            if !seen.insert(key) {
                return invalid(format!("wall {id} duplicates an earlier wall; record a multiplicity instead"));
            }
            out.push(Wall { id, geometry: WallGeometry::Bipartition { side0, side1 }, multiplicity: mult });
        }
        Ok(Wallspace { kind: WallspaceKind::FiniteBipartition, points, walls: out, lattice: None })
    }

    pub fn finite_planar(lines: Vec<(Line, u32)>) -> Result<Self> {
        let walls = Self::line_walls(lines)?;
        Ok(Wallspace { kind: WallspaceKind::FinitePlanar, points: 0, walls, lattice: None })
    }

    pub fn periodic_planar(lattice: Lattice, lines: Vec<(Line, u32)>) -> Result<Self> {
        let walls = Self::line_walls(lines)?;
        for (i, wi) in walls.iter().enumerate() {
            for wj in &walls[i + 1..] {
                let (li, lj) = (wi.geometry.line().unwrap(), wj.geometry.line().unwrap());
                if li.is_parallel(lj) {
                    let step = Rational::from_integer(lattice.offset_step(li.a(), li.b()));
                    let ratio = (lj.c() - li.c()) / step;
                    if ratio.is_integer() {
                        return invalid(format!(
                            "lines {} and {} are lattice translates; list one with a multiplicity",
                            wi.id, wj.id
                        ));
                    }
                }
            }
        }
        Ok(Wallspace { kind: WallspaceKind::PeriodicPlanar, points: 0, walls, lattice: Some(lattice) })
    }

    fn line_walls(lines: Vec<(Line, u32)>) -> Result<Vec<Wall>> {
        let mut seen = BTreeSet::new();
        let mut walls = Vec::with_capacity(lines.len());
        for (id, (line, mult)) in lines.into_iter().enumerate() {
            if mult == 0 {
                return invalid(format!("line {id} has multiplicity 0"));
            }
            if !seen.insert(line.clone()) {
                return invalid(format!("line {id} ({line}) is listed twice; record a multiplicity instead"));
            }
            walls.push(Wall { id, geometry: WallGeometry::HalfplanePair(line), multiplicity: mult });
        }
        Ok(walls)
    }

    pub fn kind(&self) -> WallspaceKind {
        self.kind
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref()
    }

    pub fn is_finite(&self) -> bool {
        self.kind != WallspaceKind::PeriodicPlanar
    }

    /// Total number of wall instances, multiplicities expanded.
    pub fn instance_count(&self) -> usize {
        self.walls.iter().map(|w| w.multiplicity as usize).sum()
    }

    /// `(wall index, copy)` for each wall instance, in listing order.
    pub fn instances(&self) -> Vec<(usize, u32)> {
        self.walls.iter().enumerate().flat_map(|(i, w)| (0..w.multiplicity).map(move |k| (i, k))).collect()
    }

    pub fn instance_labels(&self) -> Vec<String> {
        self.instances()
            .into_iter()
            .map(|(i, k)| if self.walls[i].multiplicity > 1 { format!("w{i}.{k}") } else { format!("w{i}") })
            .collect()
    }

    /// Picks a point off every line, deterministically: the first `y` from a
    /// fixed candidate list avoiding all horizontal lines, then the first
    /// such `x` avoiding every other line at that height.
    pub fn default_basepoint(&self) -> Result<Basepoint> {
        match self.kind {
            WallspaceKind::FiniteBipartition => {
                if self.points == 0 {
                    return invalid("wallspace has no points");
                }
                Ok(Basepoint::Point(0))
            }
            WallspaceKind::FinitePlanar => {
                let lines: Vec<&Line> = self.walls.iter().filter_map(|w| w.geometry.line()).collect();
                let candidates = basepoint_candidates();
                let y = candidates
                    .iter()
                    .find(|y| {
                        lines
                            .iter()
                            .all(|l| !(l.a().is_zero() && &(Rational::from_integer(l.b().clone()) * *y) == l.c()))
                    })
                    .cloned()
                    .expect("finitely many horizontal lines");
                let x = candidates
                    .iter()
                    .find(|x| {
                        let p = Point::new((*x).clone(), y.clone());
                        lines.iter().all(|l| l.side_of(&p).is_some())
                    })
                    .cloned()
                    .expect("finitely many lines");
                Ok(Basepoint::Coords(Point::new(x, y)))
            }
            WallspaceKind::PeriodicPlanar => invalid("periodic wallspaces need a window before choosing a basepoint"),
        }
    }
}

fn basepoint_candidates() -> Vec<Rational> {
    // 1/2, -1/2, 1/3, -1/3, 3/2, ... : enough distinct values for any input
    // of realistic size; the list is extended on demand by the caller's find.
    let mut out = Vec::new();
    for den in 2..=64i64 {
        for num in 1..=(2 * den) {
            if num.gcd(&den) == 1 {
                out.push(exact::rat(num, den));
                out.push(exact::rat(-num, den));
            }
        }
    }
    out
}

/// Orientation choosing, for every wall, the side containing the basepoint.
pub fn principal_orientation(ws: &Wallspace, basepoint: &Basepoint) -> Result<Orientation> {
    let mut sides = Vec::with_capacity(ws.instance_count());
    match (ws.kind, basepoint) {
        (WallspaceKind::FiniteBipartition, Basepoint::Point(p)) => {
            if *p >= ws.points {
                return invalid(format!("basepoint {p} is not a point of the wallspace"));
            }
            for w in &ws.walls {
                let WallGeometry::Bipartition { side0, .. } = &w.geometry else { unreachable!() };
                let side = if side0.contains(p) { Side::S0 } else { Side::S1 };
                sides.extend(std::iter::repeat(side).take(w.multiplicity as usize));
            }
        }
        (WallspaceKind::FinitePlanar, Basepoint::Coords(p)) => {
            for w in &ws.walls {
                let line = w.geometry.line().unwrap();
                let side = line.side_of(p).ok_or(WallspaceError::DegenerateBasepoint { wall: w.id })?;
                sides.extend(std::iter::repeat(side).take(w.multiplicity as usize));
            }
        }
        (WallspaceKind::PeriodicPlanar, _) => {
            return invalid("principal orientation needs a finite wallspace; expand a window first")
        }
        (kind, _) => return invalid(format!("basepoint kind does not match a {} wallspace", kind.as_str())),
    }
    Ok(Orientation { sides })
}

/// All lattice translates of the listed lines meeting the closed window, with
/// multiplicities, ordered lexicographically by canonical form.
pub fn expand_window(ws: &Wallspace, window: &Window, budget: usize) -> Result<Wallspace> {
    let Some(lattice) = ws.lattice else {
        return invalid("expand_window needs a periodic-planar wallspace");
    };
    let mut ranges = Vec::with_capacity(ws.walls.len());
    let mut count = BigInt::zero();
    for w in &ws.walls {
        let line = w.geometry.line().unwrap();
        let step = lattice.offset_step(line.a(), line.b());
        let step_q = Rational::from_integer(step.clone());
        let (lo, hi) = window.level_range(line);
        let k_lo = exact::ceil(&((lo - line.c()) / &step_q));
        let k_hi = exact::floor(&((hi - line.c()) / &step_q));
        if k_hi >= k_lo {
            count += (&k_hi - &k_lo + 1) * BigInt::from(w.multiplicity);
        }
        ranges.push((line, step, k_lo, k_hi, w.multiplicity));
    }
    if count > BigInt::from(budget) {
        let count = usize::try_from(&count).unwrap_or(usize::MAX);
        return Err(WallspaceError::BudgetExceeded { count, budget });
    }
    let mut found: BTreeMap<Line, u32> = BTreeMap::new();
    for (line, step, k_lo, k_hi, mult) in ranges {
        let mut k = k_lo;
        while k <= k_hi {
            let c = line.c() + Rational::from_integer(&k * &step);
            *found.entry(line.with_offset(c)).or_insert(0) += mult;
            k += BigInt::one();
        }
    }
    Wallspace::finite_planar(found.into_iter().collect())
}

// ---------------------------------------------------------------- JSON

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineDoc {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "C")]
    pub c: String,
    #[serde(default = "one", skip_serializing_if = "Option::is_none")]
    pub mult: Option<u32>,
}

fn one() -> Option<u32> {
    Some(1)
}

impl LineDoc {
    pub fn to_line(&self) -> Result<Line> {
        let p = |s: &str| parse_rational(s).map_err(|e| WallspaceError::InvalidInput(e.to_string()));
        Line::new(p(&self.a)?, p(&self.b)?, p(&self.c)?)
    }

    pub fn from_line(line: &Line, mult: Option<u32>) -> Self {
        LineDoc { a: line.a().to_string(), b: line.b().to_string(), c: format_rational(line.c()), mult }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BipartitionDoc {
    pub side0: Vec<usize>,
    pub side1: Vec<usize>,
    #[serde(default = "one", skip_serializing_if = "Option::is_none")]
    pub mult: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtraWallDoc {
    pub line: LineDoc,
    pub side: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WallspaceDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<[[i64; 2]; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lines: Vec<LineDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub walls: Vec<BipartitionDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_walls: Vec<ExtraWallDoc>,
}

impl WallspaceDoc {
    pub fn to_wallspace(&self) -> Result<Wallspace> {
        let lines = || -> Result<Vec<(Line, u32)>> {
            self.lines.iter().map(|l| Ok((l.to_line()?, l.mult.unwrap_or(1)))).collect()
        };
        match self.kind.as_str() {
            "finite-bipartition" => {
                let Some(points) = self.points else {
                    return invalid("finite-bipartition wallspace needs \"points\"");
                };
                let walls = self
                    .walls
                    .iter()
                    .map(|w| {
                        let s0: BTreeSet<usize> = w.side0.iter().copied().collect();
                        let s1: BTreeSet<usize> = w.side1.iter().copied().collect();
                        if s0.len() != w.side0.len() || s1.len() != w.side1.len() {
                            return invalid("bipartition side lists a point twice");
                        }
                        Ok((s0, s1, w.mult.unwrap_or(1)))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Wallspace::bipartition(points, walls)
            }
            "finite-planar" => Wallspace::finite_planar(lines()?),
            "periodic-planar" => {
                let Some([u, v]) = self.lattice else {
                    return invalid("periodic-planar wallspace needs \"lattice\"");
                };
                Wallspace::periodic_planar(Lattice::new(u, v)?, lines()?)
            }
            other => invalid(format!("unknown wallspace kind {other:?}")),
        }
    }

    pub fn from_wallspace(ws: &Wallspace) -> Self {
        let mut doc = WallspaceDoc {
            schema: Some(SCHEMA.to_string()),
            kind: ws.kind.as_str().to_string(),
            points: None,
            lattice: ws.lattice.map(|l| [l.u, l.v]),
            lines: Vec::new(),
            walls: Vec::new(),
            extra_walls: Vec::new(),
        };
        for w in &ws.walls {
            match &w.geometry {
                WallGeometry::HalfplanePair(line) => doc.lines.push(LineDoc::from_line(line, Some(w.multiplicity))),
                WallGeometry::Bipartition { side0, side1 } => doc.walls.push(BipartitionDoc {
                    side0: side0.iter().copied().collect(),
                    side1: side1.iter().copied().collect(),
                    mult: Some(w.multiplicity),
                }),
            }
        }
        if ws.kind == WallspaceKind::FiniteBipartition {
            doc.points = Some(ws.points);
        }
        doc
    }
}
