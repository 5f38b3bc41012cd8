use cubuland::dual_complex::{decompose_product, is_isometrically_embedded};
use cubuland::generate::{random_pattern, PatternParams};
use cubuland::halfplane::{
    build_halfplane, classify, classify_two_patterns, partition_ab, partition_ab_on, validate_pattern, Classification,
    GeodesicWallPattern, PatternDoc, Rule, TwoPatternCase,
};
use cubuland::planar::{dual_flat, parallel_families, Budget, PeriodicArrangement};
use cubuland::wallspace::{Line, WallspaceDoc, Window};

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn arrangement(name: &str) -> PeriodicArrangement {
    PeriodicArrangement::from_doc(&serde_json::from_str::<WallspaceDoc>(&data(name)).unwrap()).unwrap()
}

fn pattern(name: &str) -> GeodesicWallPattern {
    GeodesicWallPattern::from_doc(&serde_json::from_str::<PatternDoc>(&data(name)).unwrap()).unwrap()
}

#[test]
fn multiplicity_pattern_gives_glued_cubes() {
    let arr = arrangement("glued_cubes.json");
    let family = &parallel_families(&arr).unwrap().families[0];
    assert_eq!(family.pattern(), vec![2, 1]);
    // four periods of length 2 across the family
    let flat = dual_flat(&arr, &Window::parse("-1,-1,1,8").unwrap(), Budget::default()).unwrap();
    let chain = &flat.chains[0];
    assert!(chain.len() >= 8);
    assert!(chain.chunks(2).all(|c| c == [2, 1] || c == [1, 2] || c.len() == 1));
    let expected: usize = chain.iter().map(|&d| 1usize << d).sum::<usize>() - (chain.len() - 1);
    assert_eq!(flat.complex.vertex_count(), expected);
    assert_eq!(flat.complex.dimension(), 2);

    // the same family crossed with a vertical one
    let lines: Vec<(Line, u32)> = arr.lines().iter().cloned().chain([(Line::from_ints(1, 0, 0).unwrap(), 1)]).collect();
    let arr2 = PeriodicArrangement::new(arr.lattice().clone(), lines, vec![]).unwrap();
    let flat = dual_flat(&arr2, &Window::parse("-3/2,-1,3/2,8").unwrap(), Budget::default()).unwrap();
    assert_eq!(flat.n(), 2);
    let counts = flat.factor_vertex_counts();
    assert_eq!(flat.complex.vertex_count(), counts.iter().product::<usize>());
    assert_eq!(flat.complex.dimension(), 3);
}

#[test]
fn product_factors_match_family_count() {
    let square =
        dual_flat(&arrangement("square_lattice.json"), &Window::parse("-2,-2,2,2").unwrap(), Budget::default())
            .unwrap();
    let d = decompose_product(&square.complex);
    assert!(d.is_product());
    assert_eq!((square.n(), d.factors.len()), (2, 2));

    let three = dual_flat(&arrangement("three_families.json"), &Window::parse("-2,-2,2,2").unwrap(), Budget::default())
        .unwrap();
    let d = decompose_product(&three.complex);
    assert!(d.is_product());
    assert_eq!((three.n(), d.factors.len()), (3, 3));

    let glued =
        dual_flat(&arrangement("glued_cubes.json"), &Window::parse("-1,-1,1,8").unwrap(), Budget::default()).unwrap();
    assert!(decompose_product(&glued.complex).is_irreducible());
}

#[test]
fn corpus_patterns_classify_exactly() {
    assert_eq!(classify(&pattern("pattern_bounded.json")), Classification::Case2 { r: 3 });
    assert_eq!(classify(&pattern("pattern_violation.json")), Classification::Case2 { r: 2 });
    assert!(matches!(classify(&pattern("pattern_staircase.json")), Classification::Case1 { .. }));

    let staircase = pattern("pattern_staircase.json");
    assert!(validate_pattern(&staircase, staircase.check_window()).unwrap().is_none());
    let violation = pattern("pattern_violation.json");
    assert!(validate_pattern(&violation, violation.check_window()).unwrap().is_some());
}

fn assert_partition_verified(p: &GeodesicWallPattern) {
    let part = partition_ab(p).unwrap();
    let walls = p.walls(p.check_window());
    for &h in &walls {
        for &g in &walls {
            if part.a.contains(&h.orbit) && part.b.contains(&g.orbit) && h.pos < g.pos {
                assert!(p.cross(h, g));
            }
        }
    }
}

fn assert_halfplanes(p: &GeodesicWallPattern) {
    for len in 1..=10 {
        let hp = build_halfplane(p, len).unwrap();
        assert_eq!(hp.halfplane.euler_characteristic(), 1);
        assert!(is_isometrically_embedded(&hp.dual, &hp.halfplane).unwrap().isometric);
        assert_eq!(hp.diagonal.len(), p.walls(len).len() + 1);
    }
}

#[test]
fn dichotomy_on_random_patterns() {
    let mut case1 = 0;
    for seed in 0..60 {
        let params = PatternParams { orbits: 2 + (seed % 2) as usize, m: 3, max_r: 3, always: 0.5 };
        let p = random_pattern(seed, &params).unwrap();
        let n = p.orbits().len();
        let always = (0..n).any(|i| (i + 1..n).any(|j| p.rule(i, j) == Rule::Always));
        match classify(&p) {
            Classification::Case1 { a, b } => {
                assert!(always);
                assert_eq!(p.rule(a, b), Rule::Always);
                assert_partition_verified(&p);
                case1 += 1;
                if seed < 10 {
                    assert_halfplanes(&p);
                }
            }
            Classification::Case2 { r } => {
                assert!(!always);
                let max = (0..n)
                    .flat_map(|i| (i..n).map(move |j| (i, j)))
                    .filter_map(|(i, j)| match p.rule(i, j) {
                        Rule::Within(r) => Some(r),
                        _ => None,
                    })
                    .max()
                    .unwrap_or(0);
                assert_eq!(r, max);
                assert!(partition_ab(&p).is_err());
            }
        }
    }
    assert!(case1 > 0);
}

#[test]
fn staircase_halfplane_windows() {
    let p = pattern("pattern_staircase.json");
    assert_partition_verified(&p);
    assert_halfplanes(&p);
    let part = partition_ab_on(&p, 4 * p.m() * (p.max_r() + 1)).unwrap();
    assert_eq!(part.witness, (0, 1));
}

#[test]
fn two_patterns_prefer_the_unbounded_one() {
    let (bounded, stairs) = (pattern("pattern_bounded.json"), pattern("pattern_staircase.json"));
    assert!(matches!(
        classify_two_patterns(&bounded, &stairs, 4, 2).unwrap(),
        TwoPatternCase::HalfplaneFactor { which: cubuland::halfplane::Which::Beta, .. }
    ));
    match classify_two_patterns(&bounded, &bounded, 4, 2).unwrap() {
        TwoPatternCase::CocompactHull { alpha, beta, per_period } => assert_eq!(alpha * beta, per_period),
        other => panic!("expected a cocompact hull, got {other:?}"),
    }
}

#[test]
fn pattern_json_round_trips() {
    for name in ["pattern_bounded.json", "pattern_staircase.json", "pattern_violation.json"] {
        let p = pattern(name);
        let text = serde_json::to_string(&p.to_doc()).unwrap();
        let again = GeodesicWallPattern::from_doc(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(again, p, "{name}");
    }
    let arr = arrangement("extra_walls.json");
    let text = serde_json::to_string(&arr.to_doc()).unwrap();
    assert_eq!(PeriodicArrangement::from_doc(&serde_json::from_str(&text).unwrap()).unwrap(), arr);
}
