//! Periodic crossing patterns of hyperplanes along a combinatorial geodesic:
//! validation, the bounded/unbounded crossing dichotomy, the two-class
//! partition and the combinatorial half-plane it spans.
//!
//! A pattern lists orbits of walls under a translation by `m` steps. Orbit
//! `o` with base position `p` contributes a wall at every position
//! `p + k m`; the geodesic crosses that wall between its vertices `q` and
//! `q + 1`. Whether two concrete walls cross is decided by the rule of
//! their orbit pair and the distance between their positions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dual_complex::{
    build_from_system, is_isometrically_embedded, Bits, CubeComplex, DualError, Subcomplex, WallSystem,
    DEFAULT_VERTEX_BUDGET,
};
use crate::wallspace::Side;
use crate::SCHEMA;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HalfplaneError {
    #[error("invalid pattern: {0}")]
    InvalidInput(String),
    #[error("pattern has bounded crossings (R = {0}); a half-plane needs a pair of orbits that always cross")]
    NotUnbounded(u64),
    #[error("structural failure: {0}")]
    Structural(String),
    #[error(transparent)]
    Dual(#[from] DualError),
}

pub type Result<T> = std::result::Result<T, HalfplaneError>;

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(HalfplaneError::InvalidInput(msg.into()))
}

fn structural<T>(msg: impl Into<String>) -> Result<T> {
    Err(HalfplaneError::Structural(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    Always,
    Never,
    /// Cross exactly when positions differ by at most `R`.
    Within(u64),
}

impl Rule {
    pub fn crosses_at(self, distance: u64) -> bool {
        match self {
            Rule::Always => true,
            Rule::Never => false,
            Rule::Within(r) => distance <= r,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Always => write!(f, "always"),
            Rule::Never => write!(f, "never"),
            Rule::Within(r) => write!(f, "within {r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub id: String,
    pub pos: u64,
}

/// Rules are symmetric; pairs not listed never cross.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeodesicWallPattern {
    m: u64,
    orbits: Vec<Orbit>,
    rules: BTreeMap<(usize, usize), Rule>,
}

/// A concrete translate: orbit index and absolute position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConcreteWall {
    pub pos: u64,
    pub orbit: usize,
}

impl GeodesicWallPattern {
    pub fn new(m: u64, orbits: Vec<Orbit>, rules: Vec<((usize, usize), Rule)>) -> Result<Self> {
        if m == 0 {
            return invalid("period m must be positive");
        }
        if orbits.is_empty() {
            return invalid("pattern has no orbits");
        }
        let mut ids = BTreeSet::new();
        let mut positions = BTreeSet::new();
        for o in &orbits {
            if !ids.insert(o.id.as_str()) {
                return invalid(format!("orbit id {:?} is listed twice", o.id));
            }
            if o.pos >= m {
                return invalid(format!("orbit {:?} has position {} outside [0, {m})", o.id, o.pos));
            }
            if !positions.insert(o.pos) {
                return invalid(format!("two orbits share position {}", o.pos));
            }
        }
        let mut table = BTreeMap::new();
        for ((i, j), rule) in rules {
            if i >= orbits.len() || j >= orbits.len() {
                return invalid(format!("rule refers to orbit index {} of {}", i.max(j), orbits.len()));
            }
            let key = (i.min(j), i.max(j));
            if table.insert(key, rule).is_some() {
                return invalid(format!("rule for pair ({}, {}) is given twice", orbits[key.0].id, orbits[key.1].id));
            }
        }
        Ok(GeodesicWallPattern { m, orbits, rules: table })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn orbit_index(&self, id: &str) -> Option<usize> {
        self.orbits.iter().position(|o| o.id == id)
    }

    pub fn rule(&self, i: usize, j: usize) -> Rule {
        self.rules.get(&(i.min(j), i.max(j))).copied().unwrap_or(Rule::Never)
    }

    /// Largest `Within` threshold, 0 when there is none.
    pub fn max_r(&self) -> u64 {
        self.rules
            .values()
            .filter_map(|r| match r {
                Rule::Within(r) => Some(*r),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Window length at which the checks are run: `4 m (max R + 1)`.
    pub fn check_window(&self) -> u64 {
        4 * self.m * (self.max_r() + 1)
    }

    /// Translates with positions in `[0, len)`, by position.
    pub fn walls(&self, len: u64) -> Vec<ConcreteWall> {
        let mut out: Vec<ConcreteWall> = self
            .orbits
            .iter()
            .enumerate()
            .flat_map(|(k, o)| (o.pos..len).step_by(self.m as usize).map(move |pos| ConcreteWall { pos, orbit: k }))
            .collect();
        out.sort();
        out
    }

    pub fn cross(&self, h: ConcreteWall, g: ConcreteWall) -> bool {
        h != g && self.rule(h.orbit, g.orbit).crosses_at(h.pos.abs_diff(g.pos))
    }

    pub fn label(&self, h: ConcreteWall) -> String {
        format!("{}@{}", self.orbits[h.orbit].id, h.pos)
    }

    pub fn from_doc(doc: &PatternDoc) -> Result<Self> {
        let orbits: Vec<Orbit> = doc.orbits.iter().map(|o| Orbit { id: o.id.clone(), pos: o.pos }).collect();
        let find = |id: &str| {
            orbits
                .iter()
                .position(|o| o.id == id)
                .ok_or_else(|| HalfplaneError::InvalidInput(format!("rule names unknown orbit {id:?}")))
        };
        let mut rules = Vec::with_capacity(doc.rules.len());
        for r in &doc.rules {
            let pair = (find(&r.pair[0])?, find(&r.pair[1])?);
            let rule = match (r.rule.as_str(), r.r) {
                ("always", None) => Rule::Always,
                ("never", None) => Rule::Never,
                ("within", Some(t)) => Rule::Within(t),
                ("within", None) => return invalid(format!("rule {:?} is \"within\" without \"R\"", r.pair)),
                ("always" | "never", Some(_)) => {
                    return invalid(format!("rule {:?} is {:?} and must not carry \"R\"", r.pair, r.rule))
                }
                (other, _) => return invalid(format!("unknown rule {other:?}")),
            };
            rules.push((pair, rule));
        }
        GeodesicWallPattern::new(doc.m, orbits, rules)
    }

    pub fn to_doc(&self) -> PatternDoc {
        PatternDoc {
            schema: Some(SCHEMA.to_string()),
            m: self.m,
            orbits: self.orbits.iter().map(|o| OrbitDoc { id: o.id.clone(), pos: o.pos }).collect(),
            rules: self
                .rules
                .iter()
                .map(|(&(i, j), rule)| {
                    let (name, r) = match rule {
                        Rule::Always => ("always", None),
                        Rule::Never => ("never", None),
                        Rule::Within(t) => ("within", Some(*t)),
                    };
                    RuleDoc { pair: [self.orbits[i].id.clone(), self.orbits[j].id.clone()], rule: name.to_string(), r }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDoc {
    pub id: String,
    pub pos: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleDoc {
    pub pair: [String; 2],
    pub rule: String,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub m: u64,
    pub orbits: Vec<OrbitDoc>,
    #[serde(default)]
    pub rules: Vec<RuleDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// Translates of one orbit may cross.
    SameOrbit { orbit: String, rule: Rule },
    /// `first < middle < last`, the outer two cross and the middle one
    /// crosses neither.
    Betweenness { first: String, middle: String, last: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SameOrbit { orbit, rule } => {
                write!(f, "translates of orbit {orbit} may cross (rule {rule}, period too short)")
            }
            Violation::Betweenness { first, middle, last } => {
                write!(f, "{first} and {last} cross but {middle} between them crosses neither")
            }
        }
    }
}

/// Checks same-orbit separation and betweenness on `[0, window_len)`.
/// Returns the first violation, ordered by positions.
pub fn validate_pattern(p: &GeodesicWallPattern, window_len: u64) -> Result<Option<Violation>> {
    if window_len < p.check_window() {
        return invalid(format!("window {window_len} is shorter than 4 m (max R + 1) = {}", p.check_window()));
    }
    for (k, o) in p.orbits.iter().enumerate() {
        let rule = p.rule(k, k);
        let separated = match rule {
            Rule::Always => false,
            Rule::Never => true,
            Rule::Within(r) => r < p.m,
        };
        if !separated {
            return Ok(Some(Violation::SameOrbit { orbit: o.id.clone(), rule }));
        }
    }
    let walls = p.walls(window_len);
    for i in 0..walls.len() {
        for k in (i + 2)..walls.len() {
            if !p.cross(walls[i], walls[k]) {
                continue;
            }
            for &mid in &walls[i + 1..k] {
                if !p.cross(walls[i], mid) && !p.cross(mid, walls[k]) {
                    return Ok(Some(Violation::Betweenness {
                        first: p.label(walls[i]),
                        middle: p.label(mid),
                        last: p.label(walls[k]),
                    }));
                }
            }
        }
    }
    Ok(None)
}

fn ensure_valid(p: &GeodesicWallPattern) -> Result<()> {
    match validate_pattern(p, p.check_window())? {
        None => Ok(()),
        Some(v) => invalid(format!("pattern fails validation: {v}")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// Unbounded crossings, witnessed by two orbit indices.
    Case1 { a: usize, b: usize },
    /// All crossings happen within distance `R`.
    Case2 { r: u64 },
}

/// The witness pair is the first `Always` pair of distinct orbits in
/// listing order.
pub fn classify(p: &GeodesicWallPattern) -> Classification {
    let n = p.orbits.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if p.rule(i, j) == Rule::Always {
                return Classification::Case1 { a: i, b: j };
            }
        }
    }
    Classification::Case2 { r: p.max_r() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    /// Witness orbits `(a, b)`.
    pub witness: (usize, usize),
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// An orbit goes to `B` when it always crosses the witness orbit `a`, and to
/// `A` otherwise. Verified on the check window: every `A` wall crosses every
/// later `B` wall.
pub fn partition_ab(p: &GeodesicWallPattern) -> Result<Partition> {
    partition_ab_on(p, p.check_window())
}

/// [`partition_ab`] verified on a window of the given length.
pub fn partition_ab_on(p: &GeodesicWallPattern, window_len: u64) -> Result<Partition> {
    let Classification::Case1 { a: wa, b: wb } = classify(p) else {
        return Err(HalfplaneError::NotUnbounded(p.max_r()));
    };
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for o in 0..p.orbits.len() {
        if p.rule(o, wa) == Rule::Always {
            b.push(o);
        } else {
            a.push(o);
        }
    }
    let in_b: BTreeSet<usize> = b.iter().copied().collect();
    let walls = p.walls(window_len);
    for (i, &h) in walls.iter().enumerate() {
        if in_b.contains(&h.orbit) {
            continue;
        }
        for &g in &walls[i + 1..] {
            if in_b.contains(&g.orbit) && !p.cross(h, g) {
                return structural(format!("{} in A and the later {} in B do not cross", p.label(h), p.label(g)));
            }
        }
    }
    Ok(Partition { witness: (wa, wb), a, b })
}

/// Wall system of the concrete walls in `[0, len)`: crossing walls have all
/// four sides meeting, and for non-crossing walls the part before the
/// earlier one misses the part after the later one. Side 1 is "after".
pub fn window_system(p: &GeodesicWallPattern, len: u64) -> Result<(Vec<ConcreteWall>, WallSystem)> {
    let walls = p.walls(len);
    let labels = walls.iter().map(|&h| p.label(h)).collect();
    let system = WallSystem::from_fn(labels, |i, si, j, sj| {
        if p.cross(walls[i], walls[j]) {
            return true;
        }
        let (first, second) = if walls[i].pos < walls[j].pos { (si, sj) } else { (sj, si) };
        !(first == Side::S0 && second == Side::S1)
    })?;
    Ok((walls, system))
}

/// The dual of a window together with the half-plane spanned by vertex
/// pairs of the geodesic.
#[derive(Debug, Clone)]
pub struct HalfplaneComplex {
    pub window_len: u64,
    pub partition: Partition,
    pub walls: Vec<ConcreteWall>,
    pub dual: CubeComplex,
    pub halfplane: Subcomplex,
    /// Dual vertex of each pair `(x, x')` of geodesic vertices, `x <= x'`.
    pub pairs: BTreeMap<(u64, u64), usize>,
    /// Dual vertices `(x, x)` in order.
    pub diagonal: Vec<usize>,
}

impl HalfplaneComplex {
    pub fn vertex_count(&self) -> usize {
        self.halfplane.vertices().len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.halfplane.neighbors(&self.dual, v).count()
    }
}

/// Builds the half-plane over a window of `window_len` wall positions. The
/// geodesic has one vertex before the first wall and one just past each wall,
/// named by position: `0` and `pos + 1`. Empty positions add no vertex. Pair
/// `(x, x')` takes the sides of vertex `x` on `A` walls and of vertex `x'` on
/// `B` walls.
pub fn build_halfplane(p: &GeodesicWallPattern, window_len: u64) -> Result<HalfplaneComplex> {
    ensure_valid(p)?;
    let partition = partition_ab_on(p, window_len.max(p.check_window()))?;
    if partition.b.is_empty() {
        return invalid("class B is empty");
    }
    let (walls, system) = window_system(p, window_len)?;
    let dual = build_from_system(Arc::new(system), 0, DEFAULT_VERTEX_BUDGET)?;
    let in_b: BTreeSet<usize> = partition.b.iter().copied().collect();
    let stops: Vec<u64> = std::iter::once(0).chain(walls.iter().map(|h| h.pos + 1)).collect();
    let mut pairs = BTreeMap::new();
    for (i, &x) in stops.iter().enumerate() {
        for &y in &stops[i..] {
            let bits = walls.iter().enumerate().fold(0 as Bits, |acc, (k, h)| {
                let at = if in_b.contains(&h.orbit) { y } else { x };
                acc | (((at > h.pos) as Bits) << k)
            });
            let Some(v) = dual.index_of(bits) else {
                return structural(format!("pair ({x}, {y}) is not a vertex of the window's dual"));
            };
            pairs.insert((x, y), v);
        }
    }
    let diagonal: Vec<usize> = stops.iter().map(|&x| pairs[&(x, x)]).collect();
    let halfplane = Subcomplex::spanned(&dual, pairs.values().copied());
    let out = HalfplaneComplex { window_len, partition, walls, dual, halfplane, pairs, diagonal };
    certify_halfplane(&out)?;
    Ok(out)
}

fn certify_halfplane(hp: &HalfplaneComplex) -> Result<()> {
    if hp.halfplane.dimension() > 2 {
        return structural(format!("half-plane has a {}-cube", hp.halfplane.dimension()));
    }
    let distinct: BTreeSet<usize> = hp.diagonal.iter().copied().collect();
    if distinct.len() != hp.diagonal.len() {
        return structural("diagonal revisits a vertex");
    }
    for w in hp.diagonal.windows(2) {
        if hp.dual.distance(w[0], w[1]) != 1 {
            return structural("consecutive diagonal vertices are not adjacent");
        }
    }
    let chi = hp.halfplane.euler_characteristic();
    if chi != 1 {
        return structural(format!("half-plane has Euler characteristic {chi}"));
    }
    let embedding = is_isometrically_embedded(&hp.dual, &hp.halfplane)?;
    if let Some((u, v)) = embedding.witness {
        return structural(format!(
            "half-plane 1-skeleton is not isometric: {} and {}",
            hp.dual.bitstring(u),
            hp.dual.bitstring(v)
        ));
    }
    Ok(())
}

/// Vertex count of the dual of `periods` periods of walls.
fn hull_vertices(p: &GeodesicWallPattern, periods: u64) -> Result<usize> {
    let (_, system) = window_system(p, periods * p.m)?;
    Ok(build_from_system(Arc::new(system), 0, DEFAULT_VERTEX_BUDGET)?.vertex_count())
}

/// Growth of the geodesic's hull per period, read off as the difference of
/// vertex counts of consecutive windows once it has stabilized.
pub fn hull_per_period(p: &GeodesicWallPattern) -> Result<usize> {
    ensure_valid(p)?;
    if let Classification::Case1 { .. } = classify(p) {
        return invalid("hull grows without bound across the geodesic for unbounded crossings");
    }
    let settle = p.max_r() / p.m + 2;
    let counts: Vec<usize> = (settle..=settle + 3).map(|k| hull_vertices(p, k)).collect::<Result<_>>()?;
    let diffs: Vec<usize> = counts.windows(2).map(|w| w[1] - w[0]).collect();
    if diffs.iter().any(|&d| d != diffs[0]) {
        return structural(format!("hull growth {diffs:?} did not stabilize"));
    }
    Ok(diffs[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    Alpha,
    Beta,
}

#[derive(Debug, Clone)]
pub enum TwoPatternCase {
    /// One pattern has unbounded crossings; its half-plane times a line
    /// segment of `line_len` edges.
    HalfplaneFactor {
        which: Which,
        halfplane: HalfplaneComplex,
        line_len: u64,
        /// Cell counts of the product.
        f_vector: Vec<usize>,
    },
    /// Both bounded; vertices per period of the product of the two hulls.
    CocompactHull { alpha: usize, beta: usize, per_period: usize },
}

/// Prefers `alpha` when both patterns have unbounded crossings.
pub fn classify_two_patterns(
    alpha: &GeodesicWallPattern,
    beta: &GeodesicWallPattern,
    window_len: u64,
    line_len: u64,
) -> Result<TwoPatternCase> {
    ensure_valid(alpha)?;
    ensure_valid(beta)?;
    let pick = match (classify(alpha), classify(beta)) {
        (Classification::Case1 { .. }, _) => Some((Which::Alpha, alpha)),
        (_, Classification::Case1 { .. }) => Some((Which::Beta, beta)),
        _ => None,
    };
    if let Some((which, p)) = pick {
        let halfplane = build_halfplane(p, window_len)?;
        let f = halfplane.halfplane.f_vector();
        let (segment_v, segment_e) = (line_len as usize + 1, line_len as usize);
        let f_vector = (0..=f.len())
            .map(|k| {
                let here = f.get(k).copied().unwrap_or(0) * segment_v;
                let below = if k > 0 { f[k - 1] * segment_e } else { 0 };
                here + below
            })
            .filter(|&c| c > 0)
            .collect();
        return Ok(TwoPatternCase::HalfplaneFactor { which, halfplane, line_len, f_vector });
    }
    let (a, b) = (hull_per_period(alpha)?, hull_per_period(beta)?);
    Ok(TwoPatternCase::CocompactHull { alpha: a, beta: b, per_period: a * b })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn pattern(m: u64, orbits: &[(&str, u64)], rules: &[(&str, &str, Rule)]) -> GeodesicWallPattern {
        let os: Vec<Orbit> = orbits.iter().map(|&(id, pos)| Orbit { id: id.into(), pos }).collect();
        let idx = |id: &str| os.iter().position(|o| o.id == id).unwrap();
        let rs = rules.iter().map(|&(x, y, r)| ((idx(x), idx(y)), r)).collect();
        GeodesicWallPattern::new(m, os.clone(), rs).unwrap()
    }

    fn ab_always() -> GeodesicWallPattern {
        pattern(2, &[("a", 0), ("b", 1)], &[("a", "b", Rule::Always)])
    }

    #[test]
    fn validation_examples() {
        let p = ab_always();
        assert_eq!(validate_pattern(&p, p.check_window()).unwrap(), None);
        let lone = pattern(1, &[("a", 0)], &[("a", "a", Rule::Within(0))]);
        assert_eq!(validate_pattern(&lone, 4).unwrap(), None);
        let bad = pattern(3, &[("a", 0), ("b", 1), ("c", 2)], &[("a", "c", Rule::Within(2))]);
        assert_eq!(
            validate_pattern(&bad, bad.check_window()).unwrap(),
            Some(Violation::Betweenness { first: "a@0".into(), middle: "b@1".into(), last: "c@2".into() })
        );
        let self_cross = pattern(2, &[("a", 0)], &[("a", "a", Rule::Within(2))]);
        assert!(matches!(validate_pattern(&self_cross, 100).unwrap(), Some(Violation::SameOrbit { .. })));
        assert!(validate_pattern(&p, 3).is_err());
    }

    #[test]
    fn classification_examples() {
        let within = pattern(
            4,
            &[("a", 0), ("b", 1), ("c", 2)],
            &[("a", "b", Rule::Within(3)), ("b", "c", Rule::Within(3)), ("a", "c", Rule::Within(3))],
        );
        assert_eq!(classify(&within), Classification::Case2 { r: 3 });
        assert_eq!(classify(&ab_always()), Classification::Case1 { a: 0, b: 1 });
        let none = pattern(2, &[("a", 0), ("b", 1)], &[]);
        assert_eq!(classify(&none), Classification::Case2 { r: 0 });
    }

    #[test]
    fn partition_examples() {
        let part = partition_ab(&ab_always()).unwrap();
        assert_eq!((part.a, part.b), (vec![0], vec![1]));

        let three = pattern(
            3,
            &[("a", 0), ("b", 1), ("c", 2)],
            &[("a", "b", Rule::Always), ("a", "c", Rule::Always), ("b", "c", Rule::Always)],
        );
        let part = partition_ab(&three).unwrap();
        assert_eq!((part.a, part.b), (vec![0], vec![1, 2]));

        let with_d = pattern(
            3,
            &[("a", 0), ("b", 1), ("d", 2)],
            &[("a", "b", Rule::Always), ("a", "d", Rule::Within(2)), ("b", "d", Rule::Always)],
        );
        assert_eq!(validate_pattern(&with_d, with_d.check_window()).unwrap(), None);
        let part = partition_ab(&with_d).unwrap();
        assert_eq!((part.a.clone(), part.b.clone()), (vec![0, 2], vec![1]));
        // enlarging the window keeps the assignment
        assert_eq!(partition_ab_on(&with_d, 5 * with_d.check_window()).unwrap(), part);

        assert!(matches!(partition_ab(&pattern(2, &[("a", 0)], &[])), Err(HalfplaneError::NotUnbounded(0))));
    }

    #[test]
    fn staircase_halfplane() {
        let hp = build_halfplane(&ab_always(), 8).unwrap();
        // pairs collapse to (A walls passed, B walls passed) = (i, j) with j >= i - 1
        let oracle = (0..=4).flat_map(|i| (0..=4).map(move |j| (i, j))).filter(|&(i, j)| j + 1 >= i).count();
        assert_eq!(oracle, 19);
        assert_eq!(hp.vertex_count(), oracle);
        assert_eq!(hp.diagonal.len(), 9);
        assert_eq!(hp.halfplane.dimension(), 2);
        for &v in hp.halfplane.vertices() {
            assert!(hp.degree(v) <= 4);
        }
    }

    #[test]
    fn minimal_window() {
        let hp = build_halfplane(&ab_always(), 1).unwrap();
        assert_eq!(hp.halfplane.f_vector(), vec![2, 1]);
    }

    #[test]
    fn two_patterns() {
        let a2 = pattern(3, &[("a", 0), ("b", 1)], &[("a", "b", Rule::Within(2))]);
        let b3 = pattern(4, &[("c", 0), ("d", 2)], &[("c", "d", Rule::Within(3))]);
        let Ok(TwoPatternCase::CocompactHull { alpha, beta, per_period }) = classify_two_patterns(&a2, &b3, 8, 3)
        else {
            panic!("expected a cocompact hull")
        };
        assert_eq!(per_period, alpha * beta);
        assert_eq!(alpha, hull_vertices(&a2, 6).unwrap() - hull_vertices(&a2, 5).unwrap());

        let Ok(TwoPatternCase::HalfplaneFactor { which, .. }) = classify_two_patterns(&ab_always(), &a2, 4, 2) else {
            panic!("expected a half-plane factor")
        };
        assert_eq!(which, Which::Alpha);
        let Ok(TwoPatternCase::HalfplaneFactor { which, f_vector, halfplane, .. }) =
            classify_two_patterns(&a2, &ab_always(), 4, 2)
        else {
            panic!("expected a half-plane factor")
        };
        assert_eq!(which, Which::Beta);
        assert_eq!(f_vector[0], halfplane.vertex_count() * 3);
        let Ok(TwoPatternCase::HalfplaneFactor { which, .. }) = classify_two_patterns(&ab_always(), &ab_always(), 4, 2)
        else {
            panic!("expected a half-plane factor")
        };
        assert_eq!(which, Which::Alpha);
    }

    #[test]
    fn doc_round_trip() {
        let p = pattern(
            3,
            &[("a", 0), ("b", 1), ("d", 2)],
            &[("a", "b", Rule::Always), ("a", "d", Rule::Within(2)), ("b", "b", Rule::Never)],
        );
        let text = serde_json::to_string(&p.to_doc()).unwrap();
        let back: PatternDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(GeodesicWallPattern::from_doc(&back).unwrap(), p);
        let dup: PatternDoc = serde_json::from_str(
            r#"{"m":2,"orbits":[{"id":"a","pos":0},{"id":"b","pos":1}],
                "rules":[{"pair":["a","b"],"rule":"always"},{"pair":["b","a"],"rule":"never"}]}"#,
        )
        .unwrap();
        assert!(GeodesicWallPattern::from_doc(&dup).is_err());
    }
}
