//! Exact event-driven simulation and verification of pulse-coupled
//! oscillator networks.
//!
//! A pulse-coupled oscillator (PCO) is a periodic unit whose phase grows
//! linearly on `[0, 2π]` and, upon reaching `2π`, resets to `0` while
//! emitting an instantaneous pulse to its out-neighbors in a directed
//! interaction graph. A receiving oscillator absorbs each pulse through its
//! phase transition curve `Ψ(θ) = θ + c·Φ(θ)`. For delay-advance response
//! curves `Φ` and moderate gains, partially synchronized ensembles
//! (diameter below `π`) synchronize exactly when the graph is rooted.
//!
//! The crate provides:
//!
//! * [`phase`] — circle geometry: wrapping, diameter, the shortest
//!   containing arc and its endpoint sets;
//! * [`prc`] — built-in and tabulated response curves, PTC iteration and
//!   numeric certification of the contraction bounds;
//! * [`topology`] — directed graphs with the implicit self-loop
//!   convention, rootedness and strong-connectivity queries;
//! * [`engine`] — the exact event-driven simulator with analytic event
//!   times, plus a fixed-step cross-validation oracle;
//! * [`monitors`] — trace checks of the synchronization theory and Monte
//!   Carlo estimators of its non-constructive constants;
//! * [`scenario`] / [`output`] — the JSON scenario schema and the CSV/JSON
//!   artifact writers used by the CLI;
//! * [`batch`] — deterministic batch evaluation, rayon-parallel under the
//!   `parallel` feature (default).

#![forbid(unsafe_code)]

pub mod batch;
pub mod engine;
pub mod error;
pub mod monitors;
pub mod output;
pub mod phase;
pub mod prc;
pub mod scenario;
pub mod topology;

pub use engine::{
    apply_event, next_event, run, simulate_fixed_step, EventRecord, NetworkConfig, NetworkState,
    StopRule, Termination, Trace, EPS_FIRE,
};
pub use error::{Error, Result};
pub use monitors::{
    check_arc_containment, check_diameter_monotone, check_firing_gaps, check_round_contraction,
    contraction_window, detect_sync, estimate_contraction_epsilon, estimate_first_fire_delay,
    run_monitors, CheckResult, CheckStatus, MonitorReport, MonitorSettings,
};
pub use phase::{
    arc_contains, circular_distance, diameter, shortest_arc, sync_error, CircularArc, Phase,
    PhaseVector, EPS_GEOM,
};
pub use prc::{
    CertificationReport, OscillatorProfile, PhaseResponseCurve, PrcKind, DEFAULT_CERT_GRID,
};
pub use scenario::ScenarioFile;
pub use topology::Topology;
