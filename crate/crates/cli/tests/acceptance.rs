//! One check per acceptance criterion. Runs without the test harness so the
//! pass/fail lines always print; exits nonzero if any criterion fails.

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use cubuland::chargeless::{
    brute_force_witness, is_chargeless, retwist_invariance_check, BruteForce, DEFAULT_SEARCH_CAP,
};
use cubuland::dual_complex::{build_dual, decompose_product, is_isometrically_embedded, median, Bits, CubeComplex};
use cubuland::exact::{lcm_i64, rat};
use cubuland::generate::{
    random_manifold, random_pattern, random_retwist, random_wallspace, rng, ManifoldParams, PatternParams,
    WallspaceParams,
};
use cubuland::graph_manifold::{induced_cover, GraphCover, GraphManifold};
use cubuland::halfplane::{
    build_halfplane, classify, partition_ab, Classification, GeodesicWallPattern, PatternDoc, Rule,
};
use cubuland::planar::{dual_flat, parallel_families, Budget, PeriodicArrangement};
use cubuland::wallspace::{expand_window, Basepoint, Line, Point, WallGeometry, Wallspace, WallspaceDoc, Window};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn data(name: &str) -> String {
    std::fs::read_to_string(data_path(name)).unwrap()
}

fn wallspace(name: &str) -> Wallspace {
    serde_json::from_str::<WallspaceDoc>(&data(name)).unwrap().to_wallspace().unwrap()
}

fn arrangement(name: &str) -> PeriodicArrangement {
    PeriodicArrangement::from_doc(&serde_json::from_str::<WallspaceDoc>(&data(name)).unwrap()).unwrap()
}

fn pattern(name: &str) -> GeodesicWallPattern {
    GeodesicWallPattern::from_doc(&serde_json::from_str::<PatternDoc>(&data(name)).unwrap()).unwrap()
}

fn dual(ws: &Wallspace) -> CubeComplex {
    build_dual(ws, &ws.default_basepoint().unwrap(), 1 << 16).unwrap()
}

fn planar(lines: &[(i64, i64, i64)]) -> CubeComplex {
    let ws = Wallspace::finite_planar(lines.iter().map(|&(a, b, c)| (Line::from_ints(a, b, c).unwrap(), 1)).collect())
        .unwrap();
    build_dual(&ws, &Basepoint::Coords(Point::new(rat(-1, 3), rat(-1, 7))), 1 << 16).unwrap()
}

/// Cubes of every dimension as (lowest corner, wall mask).
fn cube_sets(c: &CubeComplex) -> Vec<BTreeSet<(Bits, Bits)>> {
    (0..=c.dimension())
        .map(|d| c.cells(d).iter().map(|cell| (c.vertex(cell.base) & !cell.walls, cell.walls)).collect())
        .collect()
}

/// All orientations whose chosen sides pairwise share a point, with cubes
/// grown one wall at a time.
fn exhaustive_dual(ws: &Wallspace) -> Vec<BTreeSet<(Bits, Bits)>> {
    let sides: Vec<[BTreeSet<usize>; 2]> = ws
        .walls()
        .iter()
        .map(|w| match &w.geometry {
            WallGeometry::Bipartition { side0, side1 } => [side0.clone(), side1.clone()],
            WallGeometry::HalfplanePair(_) => unreachable!(),
        })
        .collect();
    let n = sides.len();
    let side = |bits: Bits, i: usize| &sides[i][((bits >> i) & 1) as usize];
    let vertices: HashSet<Bits> = (0..(1 as Bits) << n)
        .filter(|&b| (0..n).all(|i| (i + 1..n).all(|j| !side(b, i).is_disjoint(side(b, j)))))
        .collect();
    let mut levels = vec![vertices.iter().map(|&v| (v, 0 as Bits)).collect::<BTreeSet<_>>()];
    loop {
        let prev = levels.last().unwrap();
        let mut next = BTreeSet::new();
        for &(base, mask) in prev {
            let top = (Bits::BITS - mask.leading_zeros()) as usize;
            for w in top..n {
                let bit = (1 as Bits) << w;
                if base & bit == 0 && prev.contains(&(base | bit, mask)) {
                    next.insert((base, mask | bit));
                }
            }
        }
        if next.is_empty() {
            return levels;
        }
        levels.push(next);
    }
}

fn dual_matches_enumeration() -> Check {
    let start = Instant::now();
    for seed in 0..200u64 {
        let points = 2 + (seed % 4) as usize;
        let walls = (1 + (seed / 4) % 10).min((1 << (points - 1)) - 1) as usize;
        let ws = random_wallspace(seed, &WallspaceParams { points, walls }).unwrap();
        ensure(cube_sets(&dual(&ws)) == exhaustive_dual(&ws), format!("seed {seed} differs"))?;
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(10), format!("took {took:?}"))?;
    Ok(format!("200 wallspaces identical in {took:.2?}"))
}

fn cube_shapes() -> Check {
    let tri = dual(&wallspace("triangle.json")).f_vector();
    ensure(tri == vec![8, 12, 6, 1], format!("triangle gives {tri:?}"))?;
    for p in 1..=5usize {
        for q in 1..=5usize {
            let lines: Vec<(i64, i64, i64)> =
                (0..p as i64).map(|k| (1, 0, k)).chain((0..q as i64).map(|k| (0, 1, k))).collect();
            let f = planar(&lines).f_vector();
            ensure(f[0] == (p + 1) * (q + 1) && f[2] == p * q, format!("{p} x {q} grid gives {f:?}"))?;
        }
    }
    Ok("triangle 8/12/6/1, all 25 grids exact".into())
}

fn glued_cubes() -> Check {
    let arr = arrangement("glued_cubes.json");
    let pattern = parallel_families(&arr).map_err(|e| e.to_string())?.families[0].pattern();
    ensure(pattern == vec![2, 1], format!("multiplicity pattern {pattern:?}"))?;
    // step 2, so a height of 9 spans four periods
    let flat = dual_flat(&arr, &Window::parse("-1,-1,1,8").unwrap(), Budget::default()).map_err(|e| e.to_string())?;
    let chain = &flat.chains[0];
    let periods = chain.len() / 2;
    ensure(periods >= 4, format!("only {periods} periods"))?;
    ensure(chain.chunks(2).all(|c| c == [2, 1] || c == [1, 2] || c.len() == 1), format!("chain {chain:?}"))?;
    Ok(format!("chain of cube dimensions {chain:?} certified"))
}

fn median_violations(c: &CubeComplex) -> usize {
    let n = c.vertex_count();
    let mut bad = 0;
    for u in 0..n {
        for v in u..n {
            for w in v..n {
                let ok = median(c, u, v, w).is_ok_and(|m| {
                    [(u, v), (v, w), (u, w)]
                        .iter()
                        .all(|&(x, y)| c.distance(x, m) + c.distance(m, y) == c.distance(x, y))
                });
                bad += usize::from(!ok);
            }
        }
    }
    bad
}

fn median_axioms() -> Check {
    let mut complexes: Vec<CubeComplex> =
        ["triangle.json", "grid_2x1.json", "bipartition.json"].iter().map(|n| dual(&wallspace(n))).collect();
    let lattice =
        expand_window(&wallspace("square_lattice.json"), &Window::parse("-1/2,-1/2,5/2,5/2").unwrap(), 12).unwrap();
    complexes.push(dual(&lattice));
    complexes.extend((0..20).map(|s| dual(&random_wallspace(s, &WallspaceParams { points: 5, walls: 8 }).unwrap())));
    let mut triples = 0;
    for c in &complexes {
        ensure(c.wall_count() <= 12, "corpus complex above 12 walls")?;
        let bad = median_violations(c);
        ensure(bad == 0, format!("{bad} violations"))?;
        let n = c.vertex_count();
        triples += n * (n + 1) * (n + 2) / 6;
    }
    Ok(format!("{} complexes, {triples} triples, zero violations", complexes.len()))
}

fn crossing_dichotomy() -> Check {
    let r = classify(&pattern("pattern_bounded.json"));
    ensure(r == Classification::Case2 { r: 3 }, format!("bounded pattern gives {r:?}"))?;
    let stairs = pattern("pattern_staircase.json");
    ensure(matches!(classify(&stairs), Classification::Case1 { .. }), "staircase is not Case1")?;
    let mut patterns = vec![stairs];
    patterns.extend((0..40).map(|s| {
        random_pattern(s, &PatternParams { orbits: 2 + (s % 2) as usize, m: 3, max_r: 3, always: 0.5 }).unwrap()
    }));
    let mut case1 = 0;
    for p in &patterns {
        let n = p.orbits().len();
        let always = (0..n).any(|i| (i + 1..n).any(|j| p.rule(i, j) == Rule::Always));
        match classify(p) {
            Classification::Case2 { r } => {
                let max = (0..n)
                    .flat_map(|i| (i..n).map(move |j| (i, j)))
                    .filter_map(|(i, j)| if let Rule::Within(r) = p.rule(i, j) { Some(r) } else { None })
                    .max()
                    .unwrap_or(0);
                ensure(!always && r == max, "Case2 with the wrong R")?;
            }
            Classification::Case1 { .. } => {
                ensure(always, "Case1 without an always pair")?;
                case1 += 1;
                let part = partition_ab(p).map_err(|e| e.to_string())?;
                let walls = p.walls(p.check_window());
                for &h in walls.iter().filter(|h| part.a.contains(&h.orbit)) {
                    for &g in walls.iter().filter(|g| part.b.contains(&g.orbit) && g.pos > h.pos) {
                        ensure(p.cross(h, g), "an A wall misses a later B wall")?;
                    }
                }
                for len in 1..=10 {
                    let hp = build_halfplane(p, len).map_err(|e| e.to_string())?;
                    ensure(hp.halfplane.euler_characteristic() == 1, "V - E + F != 1")?;
                    ensure(
                        is_isometrically_embedded(&hp.dual, &hp.halfplane).map_err(|e| e.to_string())?.isometric,
                        "half-plane not isometric",
                    )?;
                }
            }
        }
    }
    Ok(format!("{} patterns, {case1} unbounded with half-planes up to window 10", patterns.len()))
}

fn small_manifold(seed: u64) -> GraphManifold {
    let params = ManifoldParams { blocks: 1 + (seed % 3) as usize, max_entry: 3, ..ManifoldParams::default() };
    random_manifold(seed, &params).unwrap()
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut blocks = 0;
    for seed in 0..300 {
        let m = small_manifold(seed);
        let report = is_chargeless(&m).map_err(|e| e.to_string())?;
        for (v, b) in report.blocks.iter().enumerate() {
            let n = lcm_i64(m.ends_of(v).iter().map(|&r| m.end(r).matrix.a)).unwrap() as u64;
            let found = matches!(
                brute_force_witness(&m, v, n, DEFAULT_SEARCH_CAP, false).map_err(|e| e.to_string())?,
                BruteForce::Found(_)
            );
            ensure(found == b.chargeless(), format!("seed {seed} block {v} disagrees"))?;
            blocks += 1;
        }
    }
    let took = start.elapsed();
    ensure(took < Duration::from_secs(60), format!("took {took:?}"))?;
    Ok(format!("300 manifolds, {blocks} blocks, zero disagreements in {took:.2?}"))
}

fn exit_code(args: &[&str], file: &str) -> i32 {
    let path = data_path(file);
    Command::new(env!("CARGO_BIN_EXE_cubuland")).args(args).arg(path).output().unwrap().status.code().unwrap()
}

fn worked_examples() -> Check {
    let witnesses = |name: &str| -> Vec<Vec<i64>> {
        let m = GraphManifold::from_json(&data(name)).unwrap();
        let report = is_chargeless(&m).unwrap();
        report
            .blocks
            .iter()
            .map(|b| b.verdict.witness().map(|w| w.iter().map(|&(_, n)| n).collect()).unwrap_or_default())
            .collect()
    };
    ensure(witnesses("flip.json").iter().all(|w| w == &[1]), "flip witness is not n = 1")?;
    ensure(exit_code(&["gm", "charge"], "flip.json") == 0, "flip exit code")?;
    ensure(exit_code(&["gm", "charge"], "single_end.json") == 1, "single end exit code")?;
    ensure(witnesses("two_ends.json").iter().all(|w| w == &[1, 1]), "two-end witness is not (1, 1)")?;
    ensure(exit_code(&["gm", "charge"], "two_ends.json") == 0, "two-end exit code")?;
    Ok("flip n = 1, single end rejected, two ends (1, 1)".into())
}

fn invariances() -> Check {
    let mut r = rng(2024);
    for seed in 0..100 {
        let m = small_manifold(seed);
        let check = retwist_invariance_check(&m, &random_retwist(&mut r, &m, 3)).map_err(|e| e.to_string())?;
        ensure(check.unchanged(), format!("retwist {seed} changed the verdict"))?;
    }
    let mut covers = 0;
    for seed in 0..60 {
        let m = small_manifold(seed);
        let before = is_chargeless(&m).unwrap().flags();
        for degree in 1..=3usize {
            let perms = (0..m.edges().len()).map(|e| (0..degree).map(|k| (k + e + 1) % degree).collect()).collect();
            let lifted = induced_cover(&m, &GraphCover { degree, perms }).map_err(|e| e.to_string())?;
            let after = is_chargeless(&lifted.manifold).unwrap().flags();
            let lifted_before: Vec<bool> = lifted.lifts.iter().map(|&(v, _)| before[v]).collect();
            ensure(after == lifted_before, format!("cover of seed {seed}, degree {degree} changed the verdict"))?;
            covers += 1;
        }
    }
    Ok(format!("100 retwists and {covers} covers unchanged"))
}

fn product_decomposition() -> Check {
    let window = Window::parse("-2,-2,2,2").unwrap();
    for (name, n) in [("square_lattice.json", 2), ("three_families.json", 3)] {
        let flat = dual_flat(&arrangement(name), &window, Budget::default()).map_err(|e| e.to_string())?;
        let d = decompose_product(&flat.complex);
        ensure(
            flat.n() == n && d.is_product() && d.factors.len() == n,
            format!("{name}: {} factors", d.factors.len()),
        )?;
    }
    for k in 1..=6 {
        let lines: Vec<(i64, i64, i64)> = (0..k).map(|c| (1, 0, c)).collect();
        ensure(decompose_product(&planar(&lines)).is_irreducible(), format!("path of {k} edges splits"))?;
    }
    Ok("2 and 3 families split into 2 and 3 factors, paths irreducible".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("dual complex equals exhaustive enumeration", dual_matches_enumeration),
        ("cube shapes of the triangle and grids", cube_shapes),
        ("multiplicity family gives glued cubes", glued_cubes),
        ("median axioms on the corpus", median_axioms),
        ("crossing dichotomy and half-planes", crossing_dichotomy),
        ("closed form agrees with brute force", oracle_equivalence),
        ("worked charge examples", worked_examples),
        ("retwist and cover invariance", invariances),
        ("product decomposition of flats", product_decomposition),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: pass ({name}: {detail})", k + 1),
            Err(why) => {
                println!("criterion {}: fail ({name}: {why})", k + 1);
                failed.push(k + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
