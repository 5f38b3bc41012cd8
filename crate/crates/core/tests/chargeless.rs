use cubuland::chargeless::{
    brute_force_witness, is_chargeless, retwist_invariance_check, turbine_manifest, verify_witness, BruteForce,
    DEFAULT_SEARCH_CAP,
};
use cubuland::dual_complex::build_dual;
use cubuland::exact::lcm_i64;
use cubuland::generate::{
    random_manifold, random_pattern, random_retwist, random_wallspace, rng, ManifoldParams, PatternParams,
    WallspaceParams,
};
use cubuland::graph_manifold::{induced_cover, GraphCover, GraphManifold, ManifoldDoc};
use cubuland::halfplane::validate_pattern;
use rand::seq::SliceRandom;

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn manifold(name: &str) -> GraphManifold {
    GraphManifold::from_json(&data(name)).unwrap()
}

fn small(seed: u64) -> GraphManifold {
    let params = ManifoldParams { blocks: 1 + (seed % 3) as usize, max_entry: 3, ..ManifoldParams::default() };
    random_manifold(seed, &params).unwrap()
}

#[test]
fn closed_form_agrees_with_brute_force() {
    let mut disagreements = Vec::new();
    let (mut yes, mut no) = (0, 0);
    for seed in 0..320 {
        let m = small(seed);
        let report = is_chargeless(&m).unwrap();
        for (v, b) in report.blocks.iter().enumerate() {
            let n = lcm_i64(m.ends_of(v).iter().map(|&r| m.end(r).matrix.a.abs())).unwrap() as u64;
            let found =
                matches!(brute_force_witness(&m, v, n, DEFAULT_SEARCH_CAP, false).unwrap(), BruteForce::Found(_));
            if found != b.chargeless() {
                disagreements.push((seed, v));
            }
            if let Some(w) = b.verdict.witness() {
                assert!(verify_witness(&m, v, w), "seed {seed} block {v}");
            }
            if found {
                yes += 1
            } else {
                no += 1
            }
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:?}");
    assert!(yes > 0 && no > 0);
}

#[test]
fn worked_examples() {
    let flip = is_chargeless(&manifold("flip.json")).unwrap();
    assert!(flip.chargeless());
    for b in &flip.blocks {
        assert!(b.verdict.witness().unwrap().iter().all(|&(_, n)| n == 1));
    }
    assert!(!is_chargeless(&manifold("single_end.json")).unwrap().chargeless());

    let two = manifold("two_ends.json");
    let report = is_chargeless(&two).unwrap();
    assert!(report.chargeless());
    for b in &report.blocks {
        let ns: Vec<i64> = b.verdict.witness().unwrap().iter().map(|&(_, n)| n).collect();
        assert_eq!(ns, vec![1, 1]);
    }
    let turbine = turbine_manifest(&two, &report, false).unwrap();
    assert!(turbine.blocks.iter().all(|b| b.surface_copies == 2 && b.annuli.iter().all(|a| a.copies == 2)));
}

#[test]
fn zero_sum_retwists_keep_the_verdict() {
    let mut r = rng(99);
    for seed in 0..100 {
        let m = small(seed);
        let twist = random_retwist(&mut r, &m, 3);
        let check = retwist_invariance_check(&m, &twist).unwrap();
        assert!(check.unchanged(), "seed {seed}");
    }
    let m = manifold("two_ends.json");
    let doc = serde_json::from_str(&data("retwist.json")).unwrap();
    let twist = cubuland::graph_manifold::Retwist::from_doc(&m, &doc).unwrap();
    assert!(retwist_invariance_check(&m, &twist).unwrap().unchanged());
}

#[test]
fn covers_keep_the_verdict() {
    let base = manifold("loop.json");
    let before = is_chargeless(&base).unwrap().chargeless();
    for degree in 1..=3 {
        // the loop unwraps into a single cycle of `degree` blocks
        let perm: Vec<usize> = (0..degree).map(|k| (k + 1) % degree).collect();
        let lifted = induced_cover(&base, &GraphCover { degree, perms: vec![perm] }).unwrap();
        assert_eq!(lifted.components, 1);
        assert_eq!(is_chargeless(&lifted.manifold).unwrap().chargeless(), before);
    }
    let mut r = rng(5);
    for seed in 0..60 {
        let m = small(seed);
        let degree = 1 + (seed % 3) as usize;
        let perms = m
            .edges()
            .iter()
            .map(|_| {
                let mut p: Vec<usize> = (0..degree).collect();
                p.shuffle(&mut r);
                p
            })
            .collect();
        let lifted = induced_cover(&m, &GraphCover { degree, perms }).unwrap();
        let (a, b) = (is_chargeless(&m).unwrap(), is_chargeless(&lifted.manifold).unwrap());
        assert_eq!(a.chargeless(), b.chargeless(), "seed {seed}");
        for (k, &(v, _)) in lifted.lifts.iter().enumerate() {
            assert_eq!(a.blocks[v].chargeless(), b.blocks[k].chargeless());
        }
    }
}

#[test]
fn generators_produce_valid_instances() {
    for seed in 0..100 {
        let m = random_manifold(seed, &ManifoldParams::default()).unwrap();
        let text = serde_json::to_string(&m.to_doc()).unwrap();
        assert_eq!(GraphManifold::from_json(&text).unwrap().to_doc(), m.to_doc());
        assert_eq!(m.components(), 1);
    }
    for seed in 0..50 {
        let ws = random_wallspace(seed, &WallspaceParams { points: 5, walls: 10 }).unwrap();
        assert!(build_dual(&ws, &ws.default_basepoint().unwrap(), 1 << 16).is_ok());
        let p = random_pattern(seed, &PatternParams::default()).unwrap();
        assert!(validate_pattern(&p, p.check_window()).unwrap().is_none());
    }
    let a = random_manifold(7, &ManifoldParams::default()).unwrap().to_doc();
    let b = random_manifold(7, &ManifoldParams::default()).unwrap().to_doc();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn manifold_documents_round_trip() {
    for name in ["flip.json", "single_end.json", "two_ends.json", "free_boundary.json", "loop.json"] {
        let m = manifold(name);
        let text = serde_json::to_string(&m.to_doc()).unwrap();
        let doc: ManifoldDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(GraphManifold::from_doc(&doc).unwrap().to_doc(), m.to_doc(), "{name}");
    }
}

#[test]
fn free_boundary_reports_both_readings() {
    let report = is_chargeless(&manifold("free_boundary.json")).unwrap();
    assert!(report.interpretation_sensitive());
    assert!(!report.chargeless());
    assert!(report.blocks.iter().any(|b| b.relative.is_some()));
}
