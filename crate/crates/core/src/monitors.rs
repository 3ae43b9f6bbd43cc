//! Online verification of the synchronization theory along traces.
//!
//! For certified delay-advance profiles and a partially synchronized start
//! (initial diameter below `π`), an exact trace must satisfy, regardless of
//! the graph:
//!
//! * the diameter is non-increasing, and constant between events;
//! * the shortest containing arc only ever shrinks, up to the rigid
//!   rotation of the free flow;
//! * consecutive firings of one oscillator are separated by more than
//!   `T/2`, and every oscillator fires in any window of length `3T/2`.
//!
//! On a rooted graph the diameter additionally contracts strictly over
//! every window of length `T_N = 3T(N−1)/2` until synchronization. The
//! contraction rate and the minimal first-firing delay have no closed
//! forms; [`estimate_contraction_epsilon`] and [`estimate_first_fire_delay`]
//! estimate them by Monte Carlo over random initial conditions (batched
//! through [`crate::batch`], so they parallelize under the `parallel`
//! feature).
//!
//! Checks are pure functions of the trace: enabling them never perturbs a
//! simulation. Margins are signed, negative meaning violation; a check
//! whose preconditions fail is reported as skipped, not failed.

use std::f64::consts::{PI, TAU};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::batch;
use crate::engine::{run, NetworkConfig, StopRule, Trace};
use crate::error::{Error, Result};
use crate::phase::{
    containment_margin, diameter, shortest_arc, Phase, PhaseVector, EPS_GEOM,
};
use crate::prc::DEFAULT_CERT_GRID;

pub const CHECK_DIAMETER_MONOTONE: &str = "diameter_monotone";
pub const CHECK_FIRING_GAPS: &str = "firing_gaps";
pub const CHECK_ARC_CONTAINMENT: &str = "arc_containment";
pub const CHECK_ROUND_CONTRACTION: &str = "round_contraction";

/// Default diameter threshold for synchronization detection.
pub const DEFAULT_SYNC_EPSILON: f64 = 1e-3;

/// Default numerical-sync floor below which strict decrease is no longer
/// demanded.
pub const DEFAULT_EPS_SYNC: f64 = 1e-6;

/// Window length `T_N = 3T(N−1)/2` guaranteeing `N−1` full firing rounds.
pub fn contraction_window(n: usize, period: f64) -> f64 {
    1.5 * period * (n as f64 - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnabledChecks {
    pub diameter_monotone: bool,
    pub firing_gaps: bool,
    pub arc_containment: bool,
    pub round_contraction: bool,
}

impl Default for EnabledChecks {
    fn default() -> Self {
        EnabledChecks {
            diameter_monotone: true,
            firing_gaps: true,
            arc_containment: true,
            round_contraction: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MonitorSettings {
    /// Geometric tolerance for diameter and arc comparisons.
    pub eps_geom: f64,
    /// Numerical-sync floor for the strictness of round contraction.
    pub eps_sync: f64,
    /// Diameter threshold used by synchronization detection.
    pub sync_epsilon: f64,
    /// Grid size for profile certification.
    pub cert_grid: usize,
    pub enabled: EnabledChecks,
}

impl Default for MonitorSettings {
    fn default() -> Self {
        MonitorSettings {
            eps_geom: EPS_GEOM,
            eps_sync: DEFAULT_EPS_SYNC,
            sync_epsilon: DEFAULT_SYNC_EPSILON,
            cert_grid: DEFAULT_CERT_GRID,
            enabled: EnabledChecks::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped { reason: String },
}

/// Outcome of one check: worst signed margin (negative = violation) and
/// when it occurred.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(flatten)]
    pub status: CheckStatus,
    pub worst_margin: Option<f64>,
    pub worst_time: Option<f64>,
}

impl CheckResult {
    fn skipped(name: &str, reason: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: CheckStatus::Skipped {
                reason: reason.into(),
            },
            worst_margin: None,
            worst_time: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

/// Aggregated verification evidence for one trace.
#[derive(Debug, Clone, Serialize)]
pub struct MonitorReport {
    pub checks: Vec<CheckResult>,
    /// `(t, d)` at the initial state, both sides of every event, every
    /// sample and the final state.
    pub diameter_series: Vec<(f64, f64)>,
    /// Earliest time after which the diameter stays below the detection
    /// threshold for the rest of the trace.
    pub sync_time: Option<f64>,
}

impl MonitorReport {
    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.failed())
    }
}

/// Runs every enabled check plus synchronization detection.
pub fn run_monitors(trace: &Trace, settings: &MonitorSettings) -> MonitorReport {
    let mut checks = Vec::new();
    if settings.enabled.diameter_monotone {
        checks.push(check_diameter_monotone(trace, settings));
    }
    if settings.enabled.firing_gaps {
        checks.push(check_firing_gaps(trace, settings));
    }
    if settings.enabled.arc_containment {
        checks.push(check_arc_containment(trace, settings));
    }
    if settings.enabled.round_contraction {
        checks.push(check_round_contraction(trace, settings));
    }
    MonitorReport {
        checks,
        diameter_series: diameter_series(trace),
        sync_time: detect_sync(trace, settings.sync_epsilon),
    }
}

/// The ordered sequence of distinguishable states along a trace: initial
/// state, both sides of every event, all samples, final state. Rank breaks
/// ties at event instants (pre before post).
fn state_series(trace: &Trace) -> Vec<(f64, u8, PhaseVector)> {
    let mut points: Vec<(f64, u8, PhaseVector)> = Vec::new();
    points.push((0.0, 0, trace.config().initial_phases().clone()));
    for e in trace.events() {
        points.push((e.t, 0, e.pre_phases.clone()));
        points.push((e.t, 1, e.post_phases.clone()));
    }
    for (t, v) in trace.samples() {
        points.push((*t, 0, v.clone()));
    }
    let fs = trace.final_state();
    points.push((fs.t, 2, fs.phases.clone()));
    points.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    points
}

/// `(t, d)` along the trace; between events the diameter is provably
/// constant, so this series loses nothing.
pub fn diameter_series(trace: &Trace) -> Vec<(f64, f64)> {
    state_series(trace)
        .iter()
        .map(|(t, _, v)| (*t, diameter(v)))
        .collect()
}

struct Worst {
    margin: f64,
    time: f64,
    violated: bool,
}

impl Worst {
    fn new() -> Self {
        Worst {
            margin: f64::INFINITY,
            time: f64::NAN,
            violated: false,
        }
    }

    fn record(&mut self, margin: f64, time: f64, strict: bool) {
        if margin < self.margin {
            self.margin = margin;
            self.time = time;
        }
        if margin < 0.0 || (strict && margin <= 0.0) {
            self.violated = true;
        }
    }

    fn into_result(self, name: &str) -> CheckResult {
        CheckResult {
            name: name.into(),
            status: if self.violated {
                CheckStatus::Fail
            } else {
                CheckStatus::Pass
            },
            worst_margin: if self.margin.is_finite() {
                Some(self.margin)
            } else {
                None
            },
            worst_time: if self.time.is_nan() {
                None
            } else {
                Some(self.time)
            },
        }
    }
}

fn certification_skip_reason(trace: &Trace, cert_grid: usize) -> Option<String> {
    for (i, profile) in trace.config().profiles().iter().enumerate() {
        let report = profile.certify(cert_grid);
        // Only strictly negative margins invalidate the non-strict
        // conclusions checked here; boundary profiles whose PTC touches the
        // identity (zero coupling) keep them.
        if report.worst_margin < 0.0 {
            return Some(format!(
                "profile of oscillator {} fails certification (worst margin {:.3e} at theta {:.6})",
                i + 1,
                report.worst_margin,
                report.worst_theta
            ));
        }
    }
    None
}

fn partial_sync_skip_reason(trace: &Trace) -> Option<String> {
    let d0 = diameter(trace.config().initial_phases());
    if d0 < PI {
        None
    } else {
        Some(format!(
            "initial diameter {d0:.6} is not below pi; the trace is outside the \
             partially synchronized regime"
        ))
    }
}

/// Diameter never increases at events and stays constant between them
/// (the free flow is a rigid rotation), within `eps_geom`.
pub fn check_diameter_monotone(trace: &Trace, settings: &MonitorSettings) -> CheckResult {
    if let Some(reason) = partial_sync_skip_reason(trace) {
        return CheckResult::skipped(CHECK_DIAMETER_MONOTONE, reason);
    }
    if let Some(reason) = certification_skip_reason(trace, settings.cert_grid) {
        return CheckResult::skipped(CHECK_DIAMETER_MONOTONE, reason);
    }

    let series = state_series(trace);
    let mut worst = Worst::new();
    for pair in series.windows(2) {
        let (t0, r0, ref v0) = pair[0];
        let (t1, r1, ref v1) = pair[1];
        let (d0, d1) = (diameter(v0), diameter(v1));
        let margin = if t1 == t0 && r0 < r1 && r1 == 1 {
            // Across a jump: decrease required.
            d0 - d1 + settings.eps_geom
        } else {
            // Within a segment: constancy required.
            settings.eps_geom - (d1 - d0).abs()
        };
        worst.record(margin, t1, false);
    }
    worst.into_result(CHECK_DIAMETER_MONOTONE)
}

/// Same-oscillator inter-event gaps lie strictly inside `(T/2, 3T/2)`, and
/// every oscillator fires within the first window of length `3T/2`.
pub fn check_firing_gaps(trace: &Trace, settings: &MonitorSettings) -> CheckResult {
    if let Some(reason) = partial_sync_skip_reason(trace) {
        return CheckResult::skipped(CHECK_FIRING_GAPS, reason);
    }
    if let Some(reason) = certification_skip_reason(trace, settings.cert_grid) {
        return CheckResult::skipped(CHECK_FIRING_GAPS, reason);
    }

    let period = trace.config().period();
    let (half, three_halves) = (period / 2.0, 1.5 * period);
    let t_end = trace.t_end();
    let mut worst = Worst::new();
    for i in 0..trace.config().n() {
        let times = trace.firing_times(i);
        match times.first() {
            Some(&first) => worst.record(three_halves - first, first, true),
            None => {
                if t_end >= three_halves {
                    worst.record(three_halves - t_end, t_end, true);
                }
            }
        }
        for w in times.windows(2) {
            let gap = w[1] - w[0];
            worst.record((gap - half).min(three_halves - gap), w[1], true);
        }
        // A truncated trace cannot witness the next firing; only an
        // overdue one is a violation.
        if let Some(&last) = times.last() {
            if t_end - last >= three_halves {
                worst.record(three_halves - (t_end - last), t_end, true);
            }
        }
    }
    worst.into_result(CHECK_FIRING_GAPS)
}

/// The shortest containing arc at any later time lies inside the earlier
/// arc rigidly rotated by the flow, and jumps only shrink it.
pub fn check_arc_containment(trace: &Trace, settings: &MonitorSettings) -> CheckResult {
    if let Some(reason) = partial_sync_skip_reason(trace) {
        return CheckResult::skipped(CHECK_ARC_CONTAINMENT, reason);
    }

    let omega = trace.config().omega();
    let series = state_series(trace);
    let arcs: Vec<_> = series
        .iter()
        .map(|(_, _, v)| shortest_arc(v, settings.eps_geom))
        .collect();
    let mut worst = Worst::new();
    for (pair, arc_pair) in series.windows(2).zip(arcs.windows(2)) {
        let (t0, _, _) = pair[0];
        let (t1, _, _) = pair[1];
        let rotated = arc_pair[0].rotated(omega * (t1 - t0));
        let margin = containment_margin(&rotated, &arc_pair[1], settings.eps_geom)
            + settings.eps_geom;
        worst.record(margin, t1, false);
    }
    worst.into_result(CHECK_ARC_CONTAINMENT)
}

/// Strict diameter decrease over every complete window of length
/// `T_N = 3T(N−1)/2` on a rooted graph, demanded only while the diameter
/// exceeds the numerical-sync floor.
pub fn check_round_contraction(trace: &Trace, settings: &MonitorSettings) -> CheckResult {
    let config = trace.config();
    if !config.topology().is_rooted() {
        return CheckResult::skipped(CHECK_ROUND_CONTRACTION, "graph is not rooted");
    }
    let d0 = diameter(config.initial_phases());
    if d0 == 0.0 {
        return CheckResult::skipped(CHECK_ROUND_CONTRACTION, "already synchronized at t = 0");
    }
    if let Some(reason) = partial_sync_skip_reason(trace) {
        return CheckResult::skipped(CHECK_ROUND_CONTRACTION, reason);
    }
    if config.n() < 2 {
        return CheckResult::skipped(CHECK_ROUND_CONTRACTION, "single-oscillator network");
    }
    let window = contraction_window(config.n(), config.period());
    if trace.t_end() < window {
        return CheckResult::skipped(
            CHECK_ROUND_CONTRACTION,
            format!(
                "trace ends at {:.3}, before one full contraction window {:.3}",
                trace.t_end(),
                window
            ),
        );
    }

    let mut worst = Worst::new();
    let mut k = 1usize;
    let mut d_prev = d0;
    loop {
        let t_k = k as f64 * window;
        if t_k > trace.t_end() {
            break;
        }
        let d_k = diameter(
            &trace
                .state_at(t_k)
                .expect("window inside trace span")
                .phases,
        );
        if d_prev > settings.eps_sync {
            worst.record(d_prev - d_k, t_k, true);
        }
        d_prev = d_k;
        k += 1;
    }
    worst.into_result(CHECK_ROUND_CONTRACTION)
}

/// Earliest time after which the diameter stays below `epsilon` for the
/// remainder of the trace; `None` if it never does.
pub fn detect_sync(trace: &Trace, epsilon: f64) -> Option<f64> {
    assert!(epsilon > 0.0, "sync threshold must be positive");
    let series = diameter_series(trace);
    let last_above = series.iter().rposition(|&(_, d)| d >= epsilon);
    match last_above {
        None => Some(series.first().map(|&(t, _)| t).unwrap_or(0.0)),
        Some(i) if i + 1 < series.len() => Some(series[i + 1].0),
        Some(_) => None,
    }
}

/// Diameter drop `d(0) − d(w)` of one trajectory over a window `w`.
pub fn window_contraction(config: &NetworkConfig, window: f64) -> Result<f64> {
    let trace = run(config, &StopRule::at_time(window), None)?;
    let d0 = diameter(config.initial_phases());
    let dw = diameter(&trace.state_at(window)?.phases);
    Ok(d0 - dw)
}

/// Empirical contraction estimate for a window.
#[derive(Debug, Clone, Serialize)]
pub struct ContractionEstimate {
    /// Worst observed diameter drop over the window; the empirical lower
    /// bound for the contraction constant.
    pub min_drop: f64,
    /// Sample index attaining the minimum.
    pub worst_sample: usize,
    pub samples: usize,
    pub window: f64,
}

/// Empirical first-firing delay estimate.
#[derive(Debug, Clone, Serialize)]
pub struct FirstFireEstimate {
    /// Smallest observed first-firing time of the designated oscillator.
    pub min_first_fire: f64,
    pub worst_sample: usize,
    pub samples: usize,
    /// Draws discarded because the designated oscillator started above
    /// `2π − δ`.
    pub rejected: usize,
    /// Samples where an initially leading oscillator failed to fire before
    /// every oscillator starting at least `δ` below the leader.
    pub ordering_violations: usize,
}

fn sample_rng(seed: u64, sample: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(sample as u64 + 1);
    rng
}

/// Phases spanning an arc of exactly `length` (both endpoints occupied),
/// randomly rotated. `length` below `π` makes the diameter equal `length`.
fn random_arc_phases<R: Rng>(rng: &mut R, n: usize, length: f64) -> PhaseVector {
    let rotation = rng.gen_range(0.0..TAU);
    let mut positions = Vec::with_capacity(n);
    positions.push(0.0);
    positions.push(length);
    for _ in 2..n {
        positions.push(rng.gen_range(0.0..=length));
    }
    positions.shuffle(rng);
    PhaseVector::new(
        positions
            .iter()
            .map(|&p| Phase::wrap(p + rotation).expect("finite phase"))
            .collect(),
    )
    .expect("n >= 2")
}

/// Monte Carlo lower-bound estimate of the per-window diameter contraction
/// over random initial conditions with diameters in `[d1, d2]`.
///
/// The initial phases of `base` are ignored; each sample draws its own.
/// Sampling is deterministic in `seed` and independent of the batch
/// execution order.
pub fn estimate_contraction_epsilon(
    base: &NetworkConfig,
    d1: f64,
    d2: f64,
    samples: usize,
    window: f64,
    seed: u64,
) -> Result<ContractionEstimate> {
    if base.n() < 2 {
        return Err(Error::Config(
            "contraction estimation needs at least two oscillators".into(),
        ));
    }
    if !(d1 > 0.0 && d1 <= d2 && d2 < PI) {
        return Err(Error::Config(format!(
            "diameter shell must satisfy 0 < d1 <= d2 < pi, got [{d1}, {d2}]"
        )));
    }
    if samples == 0 {
        return Err(Error::Config("at least one sample required".into()));
    }
    if !window.is_finite() || window <= 0.0 {
        return Err(Error::OutOfRange {
            what: "window",
            value: window,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }

    let drops = batch::map(samples, |i| -> Result<f64> {
        let mut rng = sample_rng(seed, i);
        let length = if d1 == d2 {
            d1
        } else {
            rng.gen_range(d1..=d2)
        };
        let phases = random_arc_phases(&mut rng, base.n(), length);
        let config = base.clone().with_initial_phases(phases)?;
        window_contraction(&config, window)
    });

    let mut min_drop = f64::INFINITY;
    let mut worst_sample = 0;
    for (i, drop) in drops.into_iter().enumerate() {
        let drop = drop?;
        if drop < min_drop {
            min_drop = drop;
            worst_sample = i;
        }
    }
    Ok(ContractionEstimate {
        min_drop,
        worst_sample,
        samples,
        window,
    })
}

/// Monte Carlo lower-bound estimate of the first-firing time of
/// `oscillator` over random initial conditions with diameter below
/// `d_star` and the oscillator starting at least `delta` below `2π`.
///
/// Also verifies, per sample, that initially leading oscillators fire
/// before every oscillator starting at least `delta` below the leader.
pub fn estimate_first_fire_delay(
    base: &NetworkConfig,
    delta: f64,
    d_star: f64,
    oscillator: usize,
    samples: usize,
    seed: u64,
) -> Result<FirstFireEstimate> {
    if base.n() < 2 {
        return Err(Error::Config(
            "first-fire estimation needs at least two oscillators".into(),
        ));
    }
    if oscillator >= base.n() {
        return Err(Error::NodeIndex {
            index: oscillator,
            n: base.n(),
        });
    }
    if !(delta > 0.0 && delta < TAU) {
        return Err(Error::Config(format!(
            "delta must lie in (0, 2pi), got {delta}"
        )));
    }
    if !(d_star > 0.0 && d_star < PI) {
        return Err(Error::Config(format!(
            "d_star must lie in (0, pi), got {d_star}"
        )));
    }
    if samples == 0 {
        return Err(Error::Config("at least one sample required".into()));
    }

    const MAX_REJECTIONS: usize = 10_000;
    const LEADER_BAND: f64 = 1e-9;
    let horizon = 2.5 * base.period();

    struct SampleOutcome {
        first_fire: f64,
        rejected: usize,
        ordering_ok: bool,
    }

    let outcomes = batch::map(samples, |i| -> Result<SampleOutcome> {
        let mut rng = sample_rng(seed, i);
        let mut rejected = 0usize;
        let phases = loop {
            let length = rng.gen_range(0.0..d_star);
            let candidate = random_arc_phases(&mut rng, base.n(), length);
            if candidate[oscillator].radians() <= TAU - delta {
                break candidate;
            }
            rejected += 1;
            if rejected > MAX_REJECTIONS {
                return Err(Error::Config(format!(
                    "rejection sampling failed: delta = {delta} leaves no room for \
                     oscillator {oscillator} below 2pi - delta"
                )));
            }
        };

        let initial = phases.radians();
        let config = base.clone().with_initial_phases(phases)?;
        let trace = run(&config, &StopRule::at_time(horizon), None)?;
        let first_fire = *trace.firing_times(oscillator).first().ok_or_else(|| {
            Error::Contract(format!(
                "oscillator {oscillator} never fired within {horizon} s"
            ))
        })?;

        let lead = initial.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let leaders: Vec<usize> = (0..base.n())
            .filter(|&j| lead - initial[j] <= LEADER_BAND)
            .collect();
        let laggards: Vec<usize> = (0..base.n())
            .filter(|&j| lead - initial[j] >= delta)
            .collect();
        let mut ordering_ok = true;
        if !laggards.is_empty() {
            let latest_leader = leaders
                .iter()
                .filter_map(|&j| trace.firing_times(j).first().copied())
                .fold(f64::NEG_INFINITY, f64::max);
            let earliest_laggard = laggards
                .iter()
                .filter_map(|&j| trace.firing_times(j).first().copied())
                .fold(f64::INFINITY, f64::min);
            ordering_ok = latest_leader < earliest_laggard;
        }
        Ok(SampleOutcome {
            first_fire,
            rejected,
            ordering_ok,
        })
    });

    let mut estimate = FirstFireEstimate {
        min_first_fire: f64::INFINITY,
        worst_sample: 0,
        samples,
        rejected: 0,
        ordering_violations: 0,
    };
    for (i, outcome) in outcomes.into_iter().enumerate() {
        let outcome = outcome?;
        estimate.rejected += outcome.rejected;
        if !outcome.ordering_ok {
            estimate.ordering_violations += 1;
        }
        if outcome.first_fire < estimate.min_first_fire {
            estimate.min_first_fire = outcome.first_fire;
            estimate.worst_sample = i;
        }
    }
    Ok(estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, StopRule};
    use crate::prc::{OscillatorProfile, PhaseResponseCurve};
    use crate::topology::Topology;
    use std::f64::consts::FRAC_PI_2;

    fn pv(values: &[f64]) -> PhaseVector {
        PhaseVector::from_radians(values).unwrap()
    }

    fn sine_profiles(n: usize, gain: f64) -> Vec<OscillatorProfile> {
        vec![OscillatorProfile::new(PhaseResponseCurve::negative_sine(), gain).unwrap(); n]
    }

    /// A leader feeding a strongly connected trio; rooted, not strong.
    fn leader_trio_config() -> NetworkConfig {
        let topology = Topology::new(4, &[(0, 1), (1, 2), (2, 1), (1, 3), (3, 1)]).unwrap();
        NetworkConfig::new(
            1.0,
            sine_profiles(4, 0.4),
            topology,
            pv(&[FRAC_PI_2, 0.3 * PI, 0.03 * PI, 0.9 * PI]),
        )
        .unwrap()
    }

    fn chain_config(theta0: f64) -> NetworkConfig {
        let topology = Topology::new(3, &[(0, 1), (1, 2)]).unwrap();
        let profiles =
            vec![OscillatorProfile::new(PhaseResponseCurve::sawtooth(), 0.5).unwrap(); 3];
        NetworkConfig::new(1.0, profiles, topology, pv(&[0.0, theta0, theta0])).unwrap()
    }

    fn zero_coupling_config() -> NetworkConfig {
        let flat = PhaseResponseCurve::tabulated(vec![(0.0, 0.0), (TAU, 0.0)]).unwrap();
        let topology = Topology::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let profiles = vec![OscillatorProfile::new(flat, 1e-9).unwrap(); 3];
        NetworkConfig::new(1.0, profiles, topology, pv(&[0.0, 0.5, 1.0])).unwrap()
    }

    #[test]
    fn zero_coupling_trace_keeps_diameter_constant() {
        let config = zero_coupling_config();
        let trace = run(&config, &StopRule::at_time(3.0 * TAU), Some(0.5)).unwrap();
        let settings = MonitorSettings::default();

        let monotone = check_diameter_monotone(&trace, &settings);
        assert!(monotone.passed(), "{monotone:?}");
        let containment = check_arc_containment(&trace, &settings);
        assert!(containment.passed(), "{containment:?}");
        let gaps = check_firing_gaps(&trace, &settings);
        assert!(gaps.passed(), "{gaps:?}");

        let series = diameter_series(&trace);
        let d0 = series[0].1;
        for &(_, d) in &series {
            assert!((d - d0).abs() < 1e-12);
        }
    }

    #[test]
    fn free_running_gap_is_exactly_one_period() {
        let config = zero_coupling_config();
        let trace = run(&config, &StopRule::at_time(4.0 * TAU), None).unwrap();
        for i in 0..3 {
            let times = trace.firing_times(i);
            for w in times.windows(2) {
                assert!((w[1] - w[0] - TAU).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn antipodal_start_skips_partial_sync_checks() {
        let topology = Topology::new(2, &[(0, 1), (1, 0)]).unwrap();
        let config =
            NetworkConfig::new(1.0, sine_profiles(2, 0.4), topology, pv(&[0.0, PI])).unwrap();
        let trace = run(&config, &StopRule::at_time(5.0 * TAU), None).unwrap();
        let settings = MonitorSettings::default();
        assert!(matches!(
            check_diameter_monotone(&trace, &settings).status,
            CheckStatus::Skipped { .. }
        ));
        assert!(matches!(
            check_firing_gaps(&trace, &settings).status,
            CheckStatus::Skipped { .. }
        ));
        assert_eq!(detect_sync(&trace, 1e-3), None);
    }

    #[test]
    fn uncertified_profile_skips_monotone_check() {
        let topology = Topology::new(2, &[(0, 1), (1, 0)]).unwrap();
        let profiles =
            vec![OscillatorProfile::new(PhaseResponseCurve::sawtooth(), 1.5).unwrap(); 2];
        let config = NetworkConfig::new(1.0, profiles, topology, pv(&[0.0, 1.0])).unwrap();
        let trace = run(&config, &StopRule::at_time(1.0), None).unwrap();
        let result = check_diameter_monotone(&trace, &MonitorSettings::default());
        assert!(matches!(result.status, CheckStatus::Skipped { .. }));
    }

    #[test]
    fn chain_holds_diameter_over_one_round_but_contracts_over_the_window() {
        // One full round leaves the chain's diameter untouched; the full
        // window T_N = 3T forces strict contraction.
        let config = chain_config(FRAC_PI_2);
        let period = config.period();
        let one_round = window_contraction(&config, period).unwrap();
        assert!(one_round.abs() < 1e-12, "drop over one period: {one_round}");
        let full_window =
            window_contraction(&config, contraction_window(3, period)).unwrap();
        assert!(full_window > 1e-3, "drop over T_N: {full_window}");
    }

    #[test]
    fn round_contraction_passes_on_rooted_runs() {
        let config = leader_trio_config();
        let trace = run(&config, &StopRule::at_time(120.0), Some(0.5)).unwrap();
        let result = check_round_contraction(&trace, &MonitorSettings::default());
        assert!(result.passed(), "{result:?}");
    }

    #[test]
    fn round_contraction_skips_unrooted_graphs() {
        let topology = Topology::new(2, &[]).unwrap();
        let config =
            NetworkConfig::new(1.0, sine_profiles(2, 0.4), topology, pv(&[0.0, 1.0])).unwrap();
        let trace = run(&config, &StopRule::at_time(60.0), None).unwrap();
        let result = check_round_contraction(&trace, &MonitorSettings::default());
        assert!(matches!(result.status, CheckStatus::Skipped { .. }));
    }

    #[test]
    fn detect_sync_finds_the_settling_time() {
        let topology = Topology::new(2, &[(0, 1), (1, 0)]).unwrap();
        let profiles =
            vec![OscillatorProfile::new(PhaseResponseCurve::sawtooth(), 0.5).unwrap(); 2];
        let config = NetworkConfig::new(1.0, profiles, topology, pv(&[0.0, 1.0])).unwrap();
        let trace = run(&config, &StopRule::at_time(40.0 * TAU), None).unwrap();
        let sync = detect_sync(&trace, 1e-3).expect("coupled pair synchronizes");
        assert!(sync > 0.0 && sync < trace.t_end());
        // Already-synchronized start detects at the first series point.
        let synced =
            NetworkConfig::new(1.0, sine_profiles(2, 0.4), Topology::new(2, &[]).unwrap(), pv(&[1.0, 1.0]))
                .unwrap();
        let trace = run(&synced, &StopRule::at_time(1.0), None).unwrap();
        assert_eq!(detect_sync(&trace, 1e-3), Some(0.0));
    }

    #[test]
    fn contraction_estimate_is_positive_on_rooted_configs() {
        let config = leader_trio_config();
        let window = contraction_window(4, config.period());
        let estimate =
            estimate_contraction_epsilon(&config, 0.1 * PI, 0.8 * PI, 20, window, 7).unwrap();
        assert!(estimate.min_drop > 0.0, "{estimate:?}");
        // Degenerate shell d1 = d2 still works and still contracts.
        let estimate =
            estimate_contraction_epsilon(&config, 0.5 * PI, 0.5 * PI, 5, window, 7).unwrap();
        assert!(estimate.min_drop > 0.0);
    }

    #[test]
    fn chain_window_of_one_period_can_fail_to_contract() {
        // Demonstrates why the full window matters: over a single period a
        // chain admits zero contraction, so the estimate is not positive
        // for initial conditions near the degenerate family.
        let drop = window_contraction(&chain_config(FRAC_PI_2), TAU).unwrap();
        assert!(drop <= 0.0 + 1e-12);
    }

    #[test]
    fn first_fire_estimate_is_positive_and_ordered() {
        let config = leader_trio_config();
        let estimate =
            estimate_first_fire_delay(&config, FRAC_PI_2 / 2.0, 0.8 * PI, 0, 20, 11).unwrap();
        assert!(estimate.min_first_fire > 0.0, "{estimate:?}");
        assert_eq!(estimate.ordering_violations, 0, "{estimate:?}");
    }

    #[test]
    fn estimator_rejects_bad_shells() {
        let config = leader_trio_config();
        assert!(estimate_contraction_epsilon(&config, 0.0, 1.0, 5, 10.0, 0).is_err());
        assert!(estimate_contraction_epsilon(&config, 2.0, 1.0, 5, 10.0, 0).is_err());
        assert!(estimate_first_fire_delay(&config, 0.0, 1.0, 0, 5, 0).is_err());
        assert!(estimate_first_fire_delay(&config, 1.0, PI, 0, 5, 0).is_err());
    }

    #[test]
    fn estimators_are_deterministic_in_the_seed() {
        let config = leader_trio_config();
        let a = estimate_contraction_epsilon(&config, 0.2, 1.0, 8, 10.0, 42).unwrap();
        let b = estimate_contraction_epsilon(&config, 0.2, 1.0, 8, 10.0, 42).unwrap();
        assert_eq!(a.min_drop, b.min_drop);
        assert_eq!(a.worst_sample, b.worst_sample);
    }

    #[test]
    fn run_monitors_reports_each_enabled_check_once() {
        let config = leader_trio_config();
        let trace = run(&config, &StopRule::at_time(60.0), Some(0.5)).unwrap();
        let mut settings = MonitorSettings::default();
        settings.enabled.round_contraction = false;
        let report = run_monitors(&trace, &settings);
        assert_eq!(report.checks.len(), 3);
        assert!(report
            .checks
            .iter()
            .all(|c| c.name != CHECK_ROUND_CONTRACTION));
        assert!(!report.any_failed());
    }
}
