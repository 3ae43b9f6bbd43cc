//! Exact event-driven simulation of a pulse-coupled oscillator network.
//!
//! Between events every phase grows linearly at the common rate `ω`, so the
//! next firing instant is available in closed form: `t + (2π − max θ_i)/ω`.
//! At that instant the firing set `I = {i : θ_i = 2π}` is resolved, each
//! oscillator `i` absorbs `k_i = |I ∩ N_i|` pulses through its PTC, firing
//! oscillators reset to exactly `0`, and the linear flow resumes. A run is
//! a pure function of its configuration: identical configs give bitwise
//! identical traces.
//!
//! Coinciding phases stay coincident in exact arithmetic; in doubles the
//! firing set is the band of oscillators within `eps_fire` radians of `2π`
//! at the event instant, and the cumulative effect of the grouped events
//! equals that of simultaneous ones.
//!
//! [`simulate_fixed_step`] is a deliberately naive small-step integrator
//! with threshold detection at step boundaries. It shares the jump rule but
//! nothing of the event logic, serving as an independent cross-check for
//! the exact engine.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::phase::{diameter, PhaseVector};
use crate::prc::OscillatorProfile;
use crate::topology::Topology;

/// Default simultaneity band in radians: oscillators within this distance
/// of `2π` at an event instant fire together.
pub const EPS_FIRE: f64 = 1e-9;

/// Fallback event budget when no time horizon is given.
const FALLBACK_EVENT_BUDGET: usize = 100_000;

/// Immutable description of a network: common frequency, per-oscillator
/// pulse-response profiles, interaction graph and initial phases.
#[derive(Debug, Clone)]
pub struct NetworkConfig {
    omega: f64,
    profiles: Vec<OscillatorProfile>,
    topology: Topology,
    initial_phases: PhaseVector,
    eps_fire: f64,
}

impl NetworkConfig {
    pub fn new(
        omega: f64,
        profiles: Vec<OscillatorProfile>,
        topology: Topology,
        initial_phases: PhaseVector,
    ) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::NonFinite {
                what: "omega",
                value: omega,
            });
        }
        if omega <= 0.0 {
            return Err(Error::OutOfRange {
                what: "omega",
                value: omega,
                min: f64::MIN_POSITIVE,
                max: f64::INFINITY,
            });
        }
        if profiles.len() != topology.n() {
            return Err(Error::Config(format!(
                "{} profiles for a graph on {} nodes",
                profiles.len(),
                topology.n()
            )));
        }
        if initial_phases.len() != topology.n() {
            return Err(Error::Config(format!(
                "{} initial phases for a graph on {} nodes",
                initial_phases.len(),
                topology.n()
            )));
        }
        Ok(NetworkConfig {
            omega,
            profiles,
            topology,
            initial_phases,
            eps_fire: EPS_FIRE,
        })
    }

    pub fn with_eps_fire(mut self, eps_fire: f64) -> Result<Self> {
        if !eps_fire.is_finite() || eps_fire <= 0.0 {
            return Err(Error::OutOfRange {
                what: "eps_fire",
                value: eps_fire,
                min: f64::MIN_POSITIVE,
                max: f64::INFINITY,
            });
        }
        self.eps_fire = eps_fire;
        Ok(self)
    }

    /// Replaces the initial phases, keeping everything else.
    pub fn with_initial_phases(mut self, phases: PhaseVector) -> Result<Self> {
        if phases.len() != self.topology.n() {
            return Err(Error::Config(format!(
                "{} initial phases for a graph on {} nodes",
                phases.len(),
                self.topology.n()
            )));
        }
        self.initial_phases = phases;
        Ok(self)
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Common period `T = 2π/ω`.
    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    pub fn n(&self) -> usize {
        self.topology.n()
    }

    pub fn profiles(&self) -> &[OscillatorProfile] {
        &self.profiles
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn initial_phases(&self) -> &PhaseVector {
        &self.initial_phases
    }

    pub fn eps_fire(&self) -> f64 {
        self.eps_fire
    }
}

/// Instantaneous network state; between events all phases are strictly
/// below `2π`, at an event instant at least one equals `2π` (within the
/// firing band).
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub t: f64,
    pub phases: PhaseVector,
}

/// One event: who fired, the phases immediately before and after, and the
/// pulse count `k_i = |I ∩ N_i|` absorbed by each oscillator.
#[derive(Debug, Clone, PartialEq)]
pub struct EventRecord {
    pub t: f64,
    /// Sorted, 0-based indices of the oscillators that fired.
    pub firing_set: Vec<usize>,
    pub pre_phases: PhaseVector,
    pub post_phases: PhaseVector,
    pub pulse_counts: Vec<usize>,
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Reached the time horizon.
    TMax,
    /// Post-event diameter dropped below the requested threshold.
    Synchronized,
    /// Event budget exhausted before the horizon — suspected runaway event
    /// cascade from an uncertified profile.
    EventBudget,
}

/// Stopping rule for [`run`]; at least one criterion must be set.
#[derive(Debug, Clone, Default)]
pub struct StopRule {
    pub t_max: Option<f64>,
    /// Stop once the post-event diameter falls below this value.
    pub sync_diameter: Option<f64>,
    pub max_events: Option<usize>,
}

impl StopRule {
    pub fn at_time(t_max: f64) -> Self {
        StopRule {
            t_max: Some(t_max),
            sync_diameter: None,
            max_events: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.t_max.is_none() && self.sync_diameter.is_none() && self.max_events.is_none() {
            return Err(Error::Config(
                "stopping rule needs a time horizon, a sync threshold or an event budget".into(),
            ));
        }
        if let Some(t) = self.t_max {
            if !t.is_finite() || t <= 0.0 {
                return Err(Error::OutOfRange {
                    what: "t_max",
                    value: t,
                    min: f64::MIN_POSITIVE,
                    max: f64::INFINITY,
                });
            }
        }
        if let Some(e) = self.sync_diameter {
            if !e.is_finite() || e <= 0.0 {
                return Err(Error::OutOfRange {
                    what: "sync_diameter",
                    value: e,
                    min: f64::MIN_POSITIVE,
                    max: f64::INFINITY,
                });
            }
        }
        Ok(())
    }
}

/// Full history of a run.
#[derive(Debug, Clone)]
pub struct Trace {
    config: NetworkConfig,
    events: Vec<EventRecord>,
    samples: Vec<(f64, PhaseVector)>,
    sample_dt: Option<f64>,
    termination: Termination,
    final_state: NetworkState,
}

impl Trace {
    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn events(&self) -> &[EventRecord] {
        &self.events
    }

    /// Sampled `(t, phases)` pairs on the fixed grid, left-continuous at
    /// event instants. Empty when sampling was disabled.
    pub fn samples(&self) -> &[(f64, PhaseVector)] {
        &self.samples
    }

    pub fn sample_dt(&self) -> Option<f64> {
        self.sample_dt
    }

    pub fn termination(&self) -> Termination {
        self.termination
    }

    pub fn final_state(&self) -> &NetworkState {
        &self.final_state
    }

    pub fn initial_state(&self) -> NetworkState {
        NetworkState {
            t: 0.0,
            phases: self.config.initial_phases.clone(),
        }
    }

    /// Duration covered by the trace.
    pub fn t_end(&self) -> f64 {
        self.final_state.t
    }

    /// Exact state at time `t` reconstructed from the event history by
    /// linear flow; left-continuous, so at an event instant this is the
    /// pre-jump state.
    pub fn state_at(&self, t: f64) -> Result<NetworkState> {
        if !t.is_finite() || t < 0.0 || t > self.final_state.t {
            return Err(Error::OutOfRange {
                what: "trace time",
                value: t,
                min: 0.0,
                max: self.final_state.t,
            });
        }
        let k = self.events.partition_point(|e| e.t < t);
        let (base_t, base) = if k == 0 {
            (0.0, &self.config.initial_phases)
        } else {
            (self.events[k - 1].t, &self.events[k - 1].post_phases)
        };
        let advance = self.config.omega * (t - base_t);
        let phases = base.iter().map(|p| p.radians() + advance).collect();
        Ok(NetworkState {
            t,
            phases: PhaseVector::from_raw_clamped(phases),
        })
    }

    /// Firing instants of oscillator `i`, in order.
    pub fn firing_times(&self, i: usize) -> Vec<f64> {
        self.events
            .iter()
            .filter(|e| e.firing_set.contains(&i))
            .map(|e| e.t)
            .collect()
    }
}

/// Closed-form next event of the free flow: the instant the leading phase
/// reaches `2π` and the band of oscillators firing there. Phases already at
/// `2π` fire immediately (time `state.t`).
pub fn next_event(state: &NetworkState, omega: f64, eps_fire: f64) -> (f64, Vec<usize>) {
    let max_phase = state
        .phases
        .iter()
        .map(|p| p.radians())
        .fold(f64::NEG_INFINITY, f64::max);
    let dt = (TAU - max_phase) / omega;
    let firing = state
        .phases
        .iter()
        .enumerate()
        .filter(|(_, p)| max_phase - p.radians() <= eps_fire)
        .map(|(i, _)| i)
        .collect();
    (state.t + dt, firing)
}

/// Applies one event to a state whose firing oscillators sit at `2π`
/// (within the firing band): every oscillator `i` absorbs
/// `k_i = |firing ∩ N_i|` pulses through `Ψ_i`, firing oscillators reset to
/// exactly `0`, oscillators with `k_i = 0` are untouched.
///
/// A firing oscillator's own membership in `N_i` is only formal: its post
/// state is the reset, independent of `k_i`.
pub fn apply_event(
    state: &NetworkState,
    firing_set: &[usize],
    config: &NetworkConfig,
) -> Result<(NetworkState, EventRecord)> {
    let n = state.phases.len();
    if firing_set.is_empty() {
        return Err(Error::Contract("empty firing set".into()));
    }
    let mut firing: Vec<usize> = firing_set.to_vec();
    firing.sort_unstable();
    firing.dedup();
    for &i in &firing {
        if i >= n {
            return Err(Error::NodeIndex { index: i, n });
        }
        let th = state.phases[i].radians();
        if TAU - th > config.eps_fire {
            return Err(Error::Contract(format!(
                "oscillator {i} fires at phase {th}, not at 2pi"
            )));
        }
    }

    let mut pulse_counts = vec![0usize; n];
    let mut post = Vec::with_capacity(n);
    for i in 0..n {
        let k = config
            .topology
            .in_neighbors(i)?
            .iter()
            .filter(|j| firing.binary_search(j).is_ok())
            .count();
        pulse_counts[i] = k;
        if firing.binary_search(&i).is_ok() {
            post.push(0.0);
        } else if k == 0 {
            post.push(state.phases[i].radians());
        } else {
            let psi = config.profiles[i].ptc_iter(state.phases[i], k)?.radians();
            // Reduce modulo 2pi as the jump rule demands; for certified
            // profiles this is a no-op.
            post.push(if psi >= TAU { psi - TAU } else { psi });
        }
    }

    let record = EventRecord {
        t: state.t,
        firing_set: firing,
        pre_phases: state.phases.clone(),
        post_phases: PhaseVector::from_raw_clamped(post.clone()),
        pulse_counts,
    };
    let new_state = NetworkState {
        t: state.t,
        phases: record.post_phases.clone(),
    };
    Ok((new_state, record))
}

fn default_budget(n: usize, t_max: Option<f64>, period: f64) -> usize {
    match t_max {
        Some(t) => 10 * n * (t / period).ceil().max(1.0) as usize,
        None => FALLBACK_EVENT_BUDGET,
    }
}

/// Runs the exact event-driven simulation until the stopping rule fires.
///
/// `sample_dt`, when given, records the exact state on the fixed grid
/// `0, Δt, 2Δt, …` (linear interpolation of the flow, which is exact;
/// left-continuous at event instants).
pub fn run(config: &NetworkConfig, stop: &StopRule, sample_dt: Option<f64>) -> Result<Trace> {
    stop.validate()?;
    if let Some(dt) = sample_dt {
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::OutOfRange {
                what: "sample_dt",
                value: dt,
                min: f64::MIN_POSITIVE,
                max: f64::INFINITY,
            });
        }
    }

    let omega = config.omega;
    let budget = stop
        .max_events
        .unwrap_or_else(|| default_budget(config.n(), stop.t_max, config.period()));

    let mut phases: Vec<f64> = config.initial_phases.radians();
    let mut t = 0.0f64;
    let mut events: Vec<EventRecord> = Vec::new();
    let mut samples: Vec<(f64, PhaseVector)> = Vec::new();
    let mut next_sample = 0usize;

    // Samples on [seg_t, limit] interpolated from the current segment.
    let emit_samples =
        |samples: &mut Vec<(f64, PhaseVector)>, next_sample: &mut usize, seg_t: f64, seg: &[f64], limit: f64| {
            let Some(dt) = sample_dt else { return };
            loop {
                let ts = *next_sample as f64 * dt;
                if ts > limit {
                    break;
                }
                let advance = omega * (ts - seg_t);
                let v: Vec<f64> = seg.iter().map(|&p| p + advance).collect();
                samples.push((ts, PhaseVector::from_raw_clamped(v)));
                *next_sample += 1;
            }
        };

    let termination = loop {
        let max_phase = phases.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let advance = TAU - max_phase;
        let te = t + advance / omega;

        if let Some(tm) = stop.t_max {
            if te > tm {
                emit_samples(&mut samples, &mut next_sample, t, &phases, tm);
                let shift = omega * (tm - t);
                for p in phases.iter_mut() {
                    *p += shift;
                }
                t = tm;
                break Termination::TMax;
            }
        }

        emit_samples(&mut samples, &mut next_sample, t, &phases, te);

        if events.len() >= budget {
            break Termination::EventBudget;
        }

        // Advance to the event instant. The leading phase lands on 2pi up
        // to one rounding step; the band keeps its true offsets so the
        // recorded pre-state is the exact left limit.
        let firing: Vec<usize> = phases
            .iter()
            .enumerate()
            .filter(|(_, &p)| max_phase - p <= config.eps_fire)
            .map(|(i, _)| i)
            .collect();
        for p in phases.iter_mut() {
            *p = (*p + advance).min(TAU);
        }
        t = te;

        let state = NetworkState {
            t,
            phases: PhaseVector::from_raw_clamped(phases.clone()),
        };
        let (new_state, record) = apply_event(&state, &firing, config)?;
        debug_assert!(
            events.last().map_or(true, |last| record.t > last.t),
            "event times must strictly increase"
        );
        phases = new_state.phases.radians();
        events.push(record);

        if let Some(eps) = stop.sync_diameter {
            if diameter(&events.last().expect("just pushed").post_phases) < eps {
                break Termination::Synchronized;
            }
        }
    };

    Ok(Trace {
        config: config.clone(),
        events,
        samples,
        sample_dt,
        termination,
        final_state: NetworkState {
            t,
            phases: PhaseVector::from_raw_clamped(phases),
        },
    })
}

/// Brute-force cross-validation oracle: explicit small-step integration of
/// the linear flow with threshold-crossing detection at step boundaries and
/// the same jump rule as the exact engine.
///
/// Event times carry an `O(h)` error by construction. The trace ends at the
/// last step boundary not exceeding `t_max` and carries no samples.
pub fn simulate_fixed_step(config: &NetworkConfig, h: f64, t_max: f64) -> Result<Trace> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::OutOfRange {
            what: "step size",
            value: h,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    if !t_max.is_finite() || t_max <= 0.0 {
        return Err(Error::OutOfRange {
            what: "t_max",
            value: t_max,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }

    let step = config.omega * h;
    let mut phases: Vec<f64> = config.initial_phases.radians();
    let mut events: Vec<EventRecord> = Vec::new();

    let process = |t: f64, phases: &mut Vec<f64>, events: &mut Vec<EventRecord>| -> Result<()> {
        if !phases.iter().any(|&p| p >= TAU) {
            return Ok(());
        }
        let firing: Vec<usize> = phases
            .iter()
            .enumerate()
            .filter(|(_, &p)| p >= TAU)
            .map(|(i, _)| i)
            .collect();
        for &i in &firing {
            phases[i] = TAU;
        }
        let state = NetworkState {
            t,
            phases: PhaseVector::from_raw_clamped(phases.clone()),
        };
        let (new_state, record) = apply_event(&state, &firing, config)?;
        *phases = new_state.phases.radians();
        events.push(record);
        Ok(())
    };

    process(0.0, &mut phases, &mut events)?;

    let mut t = 0.0;
    let mut k = 0u64;
    loop {
        k += 1;
        let tk = k as f64 * h;
        if tk > t_max {
            break;
        }
        for p in phases.iter_mut() {
            *p += step;
        }
        t = tk;
        process(t, &mut phases, &mut events)?;
    }

    Ok(Trace {
        config: config.clone(),
        events,
        samples: Vec::new(),
        sample_dt: None,
        termination: Termination::TMax,
        final_state: NetworkState {
            t,
            phases: PhaseVector::from_raw_clamped(phases),
        },
    })
}
