//! Shared generators for the integration suites: random rooted graphs,
//! certified profiles and partially synchronized initial conditions.

use std::f64::consts::TAU;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use pcosim::{
    NetworkConfig, OscillatorProfile, Phase, PhaseResponseCurve, PhaseVector, Topology,
};

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(name)
}

/// Influence arcs of the bundled four-node reference graph: a leader
/// feeding a strongly connected trio.
pub fn leader_trio_arcs() -> Vec<(usize, usize)> {
    vec![(0, 1), (1, 2), (2, 1), (1, 3), (3, 1)]
}

/// Rooted by construction: a random directed spanning tree plus a few
/// random extra arcs.
pub fn random_rooted_topology<R: Rng>(rng: &mut R, n: usize) -> Topology {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut arcs = Vec::new();
    for k in 1..n {
        let parent = order[rng.gen_range(0..k)];
        arcs.push((parent, order[k]));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            arcs.push((a, b));
        }
    }
    Topology::new(n, &arcs).expect("valid random topology")
}

pub fn random_certified_profile<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> OscillatorProfile {
    let prc = match rng.gen_range(0..3u8) {
        0 => PhaseResponseCurve::sawtooth(),
        1 => PhaseResponseCurve::triangle(),
        _ => PhaseResponseCurve::negative_sine(),
    };
    OscillatorProfile::new(prc, rng.gen_range(lo..hi)).expect("positive gain")
}

/// Phases confined to a random arc of length below `max_spread` (itself
/// below `π`), randomly rotated: a partially synchronized start.
pub fn random_partial_sync_phases<R: Rng>(rng: &mut R, n: usize, max_spread: f64) -> PhaseVector {
    let spread = rng.gen_range(0.0..max_spread);
    let rotation = rng.gen_range(0.0..TAU);
    PhaseVector::new(
        (0..n)
            .map(|_| Phase::wrap(rotation + rng.gen_range(0.0..=spread)).expect("finite"))
            .collect(),
    )
    .expect("n >= 1")
}

/// A full random certified, rooted, partially synchronized configuration.
pub fn random_certified_rooted_config<R: Rng>(
    rng: &mut R,
    n: usize,
    gain_lo: f64,
    gain_hi: f64,
) -> NetworkConfig {
    let topology = random_rooted_topology(rng, n);
    let profiles = (0..n)
        .map(|_| random_certified_profile(rng, gain_lo, gain_hi))
        .collect();
    let phases = random_partial_sync_phases(rng, n, 0.95 * std::f64::consts::PI);
    NetworkConfig::new(1.0, profiles, topology, phases).expect("valid config")
}
