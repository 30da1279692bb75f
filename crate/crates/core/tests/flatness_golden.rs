//! Frozen flatness certificates. Set `MINORKIT_REGEN=1` to rewrite them.

use minorkit::flatness::{compute_tilt, plane_fixture, tilt_conditions, validate_flatness, Check, FlatnessDocument};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/flatness")
}

/// (file, wall height, seed, subdivision p, flap p)
const GOLDEN: [(&str, usize, u64, f64, f64); 3] = [
    ("wall3_plain.json", 3, 11, 0.0, 0.0),
    ("wall5_flaps.json", 5, 12, 0.0, 0.6),
    ("wall7_subdivided.json", 7, 14, 0.3, 0.6),
];

fn generate(r: usize, seed: u64, sp: f64, fp: f64) -> FlatnessDocument {
    plane_fixture(r, sp, fp, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

/// One flap edge copied into a second flap.
fn edge_mutant(mut d: FlatnessDocument) -> FlatnessDocument {
    let r = &mut d.certificate.rendition;
    let e = r.sigma[0].edges[0];
    let f = r.sigma.last_mut().unwrap();
    for v in [e.0, e.1] {
        if !f.vertices.contains(&v) {
            f.vertices.push(v);
        }
    }
    f.edges.push(e);
    d
}

/// Omega read in the opposite direction to the painting's boundary.
fn boundary_mutant(mut d: FlatnessDocument) -> FlatnessDocument {
    d.certificate.rendition.omega.reverse();
    d
}

fn load(name: &str) -> FlatnessDocument {
    let s = std::fs::read_to_string(dir().join(name)).unwrap();
    FlatnessDocument::from_json(&s).unwrap()
}

#[test]
fn goldens() {
    let mut all: Vec<(String, FlatnessDocument)> =
        GOLDEN.iter().map(|&(f, r, s, sp, fp)| (f.to_string(), generate(r, s, sp, fp))).collect();
    let base = all[1].1.clone();
    all.push(("wall5_mutant_edge_twice.json".into(), edge_mutant(base.clone())));
    all.push(("wall5_mutant_boundary_order.json".into(), boundary_mutant(base)));
    if std::env::var("MINORKIT_REGEN").is_ok() {
        for (f, d) in &all {
            std::fs::write(dir().join(f), d.to_json() + "\n").unwrap();
        }
    }
    for (f, d) in &all {
        let frozen = load(f);
        assert_eq!(frozen.to_json(), d.to_json(), "{f} drifted from its generator");
    }
}

#[test]
fn golden_verdicts() {
    for &(f, ..) in &GOLDEN {
        let d = load(f);
        let v = validate_flatness(&d.graph, &d.wall().unwrap(), &d.certificate);
        assert!(v.is_valid(), "{f}: {v:?}");
    }
    let d = load("wall5_mutant_edge_twice.json");
    let v = validate_flatness(&d.graph, &d.wall().unwrap(), &d.certificate);
    assert_eq!(v.failed, Some(Check::EdgeDisjoint));
    assert_eq!(v.failed.and_then(Check::axiom), Some(2));
    let d = load("wall5_mutant_boundary_order.json");
    let v = validate_flatness(&d.graph, &d.wall().unwrap(), &d.certificate);
    assert_eq!(v.failed.and_then(Check::axiom), Some(5), "{v:?}");
}

#[test]
fn golden_tilt() {
    let d = load("wall7_subdivided.json");
    let w = d.wall().unwrap();
    let sub = w.central_subwall(3).unwrap();
    let t = compute_tilt(&d.graph, &w, &d.certificate, &sub).map_err(|e| e.to_string()).unwrap();
    assert_eq!(tilt_conditions(&d.graph, &w, &d.certificate, &sub, &t).unwrap(), [true; 5]);
}
