//! Phase response and phase transition curves.
//!
//! A pulse hitting an oscillator at phase `θ` displaces it by `c·Φ(θ)`,
//! where `Φ` is the phase response curve (PRC) and `c > 0` the coupling
//! gain; the induced phase transition curve (PTC) is `Ψ(θ) = θ + c·Φ(θ)`,
//! iterated once per simultaneous incoming pulse.
//!
//! Delay-advance couplings (`Φ < 0` below `π`, `Φ > 0` above) pull phases
//! toward the firing reference without overshoot whenever the PTC stays
//! inside the cones `0 < Ψ(θ) < θ` on `(0, π)` and `θ < Ψ(θ) < 2π` on
//! `(π, 2π)` with fixed endpoints. [`OscillatorProfile::certify`] verifies
//! those bounds numerically on a dense grid.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::Phase;

/// Default number of grid samples used by the certification checks.
pub const DEFAULT_CERT_GRID: usize = 10_001;

/// Built-in PRC families plus tabulated curves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrcKind {
    /// Two descending ramps with a jump at `π`: `−θ` below, `2π − θ` above.
    Sawtooth,
    /// Continuous zigzag: `−θ`, then `θ − π`, then `2π − θ`, with corners
    /// at `π/2` and `3π/2`.
    Triangle,
    /// `Φ(θ) = −sin θ`.
    NegativeSine,
    /// Piecewise-linear interpolation through explicit breakpoints.
    Tabulated,
}

/// A phase response curve `Φ: [0, 2π] → R` with `Φ(0) = Φ(2π) = 0`.
///
/// A single discontinuity at `θ = π` is allowed; the value taken there is
/// an explicit choice (`value_at_pi`) so evaluation stays deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseResponseCurve {
    kind: PrcKind,
    breakpoints: Vec<(f64, f64)>,
    value_at_pi: f64,
}

impl PhaseResponseCurve {
    pub fn sawtooth() -> Self {
        PhaseResponseCurve {
            kind: PrcKind::Sawtooth,
            breakpoints: Vec::new(),
            value_at_pi: 0.0,
        }
    }

    pub fn triangle() -> Self {
        PhaseResponseCurve {
            kind: PrcKind::Triangle,
            breakpoints: Vec::new(),
            value_at_pi: 0.0,
        }
    }

    pub fn negative_sine() -> Self {
        PhaseResponseCurve {
            kind: PrcKind::NegativeSine,
            breakpoints: Vec::new(),
            value_at_pi: 0.0,
        }
    }

    /// A curve interpolating linearly between `(angle, value)` breakpoints.
    ///
    /// Angles must be strictly increasing and span exactly `[0, 2π]`, with
    /// zero values at both ends.
    pub fn tabulated(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::Config(
                "tabulated PRC needs at least two breakpoints".into(),
            ));
        }
        for &(a, v) in &breakpoints {
            if !a.is_finite() || !v.is_finite() {
                return Err(Error::Config(format!(
                    "non-finite tabulated breakpoint ({a}, {v})"
                )));
            }
        }
        for w in breakpoints.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Config(format!(
                    "tabulated breakpoint angles must be strictly increasing \
                     ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        let first = breakpoints[0];
        let last = breakpoints[breakpoints.len() - 1];
        if first.0 != 0.0 || last.0 != TAU {
            return Err(Error::Config(format!(
                "tabulated breakpoints must span [0, 2pi], got [{}, {}]",
                first.0, last.0
            )));
        }
        if first.1 != 0.0 || last.1 != 0.0 {
            return Err(Error::Config(
                "tabulated PRC must vanish at 0 and 2pi".into(),
            ));
        }
        let value_at_pi = interpolate(&breakpoints, PI);
        Ok(PhaseResponseCurve {
            kind: PrcKind::Tabulated,
            breakpoints,
            value_at_pi,
        })
    }

    /// Overrides the value taken at the allowed discontinuity `θ = π`.
    pub fn with_value_at_pi(mut self, value: f64) -> Self {
        self.value_at_pi = value;
        self
    }

    pub fn kind(&self) -> PrcKind {
        self.kind
    }

    pub fn value_at_pi(&self) -> f64 {
        self.value_at_pi
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    /// Evaluates `Φ(θ)`.
    ///
    /// The endpoints return exactly `0` and `θ = π` returns `value_at_pi`,
    /// regardless of the kind's branch formulas.
    pub fn eval(&self, theta: Phase) -> f64 {
        let th = theta.radians();
        if th == 0.0 || th == TAU {
            return 0.0;
        }
        if th == PI {
            return self.value_at_pi;
        }
        match self.kind {
            PrcKind::Sawtooth => {
                if th < PI {
                    -th
                } else {
                    TAU - th
                }
            }
            PrcKind::Triangle => {
                if th < FRAC_PI_2 {
                    -th
                } else if th <= 3.0 * FRAC_PI_2 {
                    th - PI
                } else {
                    TAU - th
                }
            }
            PrcKind::NegativeSine => -th.sin(),
            PrcKind::Tabulated => interpolate(&self.breakpoints, th),
        }
    }

    /// Interior angles where a piecewise definition changes branch
    /// (excluding `π`, handled separately by the certifiers).
    pub fn breakpoint_angles(&self) -> Vec<f64> {
        match self.kind {
            PrcKind::Sawtooth | PrcKind::NegativeSine => Vec::new(),
            PrcKind::Triangle => vec![FRAC_PI_2, 3.0 * FRAC_PI_2],
            PrcKind::Tabulated => self
                .breakpoints
                .iter()
                .map(|&(a, _)| a)
                .filter(|&a| a > 0.0 && a < TAU && a != PI)
                .collect(),
        }
    }

    /// Grid check of the delay-advance sign condition: `Φ(θ) < 0` on
    /// `(0, π)` and `Φ(θ) > 0` on `(π, 2π)`.
    pub fn is_delay_advance(&self, grid_size: usize) -> DelayAdvanceReport {
        assert!(grid_size >= 2, "grid_size must be at least 2");
        let mut report = DelayAdvanceReport {
            holds: true,
            samples_checked: 0,
            worst_margin: f64::INFINITY,
            worst_theta: f64::NAN,
            violations: Vec::new(),
        };
        for th in sample_grid(grid_size, &self.breakpoint_angles()) {
            let phi = self.eval(Phase::new(th).expect("grid angle in range"));
            let margin = if th < PI { -phi } else { phi };
            report.samples_checked += 1;
            if margin < report.worst_margin {
                report.worst_margin = margin;
                report.worst_theta = th;
            }
            if margin <= 0.0 {
                report.holds = false;
                report.violations.push((th, phi));
            }
        }
        report
    }
}

fn interpolate(breakpoints: &[(f64, f64)], th: f64) -> f64 {
    let k = breakpoints.partition_point(|&(a, _)| a <= th);
    if k == 0 {
        return breakpoints[0].1;
    }
    if k == breakpoints.len() {
        return breakpoints[k - 1].1;
    }
    let (a0, v0) = breakpoints[k - 1];
    let (a1, v1) = breakpoints[k];
    v0 + (v1 - v0) * (th - a0) / (a1 - a0)
}

/// Uniform interior grid over `(0, 2π)` excluding `π`, augmented with the
/// given breakpoint angles.
fn sample_grid(grid_size: usize, extra: &[f64]) -> Vec<f64> {
    let mut grid: Vec<f64> = (1..=grid_size)
        .map(|j| TAU * j as f64 / (grid_size + 1) as f64)
        .filter(|&th| th != PI && th > 0.0 && th < TAU)
        .collect();
    grid.extend(extra.iter().copied().filter(|&a| a != PI));
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    grid
}

/// Result of the delay-advance sign check.
#[derive(Debug, Clone, Serialize)]
pub struct DelayAdvanceReport {
    pub holds: bool,
    pub samples_checked: usize,
    /// Smallest signed sign margin seen; positive means the condition held
    /// strictly everywhere.
    pub worst_margin: f64,
    pub worst_theta: f64,
    /// `(θ, Φ(θ))` for every sample violating the strict sign condition.
    pub violations: Vec<(f64, f64)>,
}

/// One sampled violation of the PTC contraction bounds.
#[derive(Debug, Clone, Serialize)]
pub struct CertSample {
    pub theta: f64,
    pub psi: f64,
    /// Distance to the nearest bound; non-positive means violated.
    pub margin: f64,
}

/// Grid certification of the PTC contraction bounds for one profile.
///
/// This is a sampling check, not a proof: it verifies the bounds at the
/// grid points and all branch breakpoints, plus the exact endpoint fixed
/// points `Ψ(0) = 0` and `Ψ(2π) = 2π`.
#[derive(Debug, Clone, Serialize)]
pub struct CertificationReport {
    pub passed: bool,
    pub samples_checked: usize,
    pub worst_margin: f64,
    pub worst_theta: f64,
    pub violations: Vec<CertSample>,
}

/// A PRC together with its coupling gain: the complete pulse-response
/// behaviour of one oscillator.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorProfile {
    prc: PhaseResponseCurve,
    gain: f64,
}

impl OscillatorProfile {
    pub fn new(prc: PhaseResponseCurve, gain: f64) -> Result<Self> {
        if !gain.is_finite() {
            return Err(Error::NonFinite {
                what: "coupling gain",
                value: gain,
            });
        }
        if gain <= 0.0 {
            return Err(Error::OutOfRange {
                what: "coupling gain",
                value: gain,
                min: f64::MIN_POSITIVE,
                max: f64::INFINITY,
            });
        }
        Ok(OscillatorProfile { prc, gain })
    }

    pub fn prc(&self) -> &PhaseResponseCurve {
        &self.prc
    }

    pub fn gain(&self) -> f64 {
        self.gain
    }

    /// Evaluates the PTC `Ψ(θ) = θ + c·Φ(θ)`, not reduced modulo `2π`.
    ///
    /// A result outside `[0, 2π]` means the profile breaks the contraction
    /// bounds at this phase and is reported as an error.
    pub fn ptc(&self, theta: Phase) -> Result<Phase> {
        let th = theta.radians();
        let psi = th + self.gain * self.prc.eval(theta);
        if !psi.is_finite() || !(0.0..=TAU).contains(&psi) {
            return Err(Error::PtcRange { theta: th, psi });
        }
        Ok(Phase::new(psi).expect("range checked"))
    }

    /// `k`-fold composition `Ψ^k(θ)`; `k = 0` is the identity.
    pub fn ptc_iter(&self, theta: Phase, k: usize) -> Result<Phase> {
        let mut current = theta;
        for _ in 0..k {
            current = self.ptc(current)?;
        }
        Ok(current)
    }

    /// Verifies the contraction bounds on a uniform grid over
    /// `(0, π) ∪ (π, 2π)` plus all branch breakpoints: `0 < Ψ(θ) < θ`
    /// below `π`, `θ < Ψ(θ) < 2π` above, and the endpoint fixed points.
    ///
    /// Violations are report content, never errors.
    pub fn certify(&self, grid_size: usize) -> CertificationReport {
        assert!(grid_size >= 2, "grid_size must be at least 2");
        let mut report = CertificationReport {
            passed: true,
            samples_checked: 0,
            worst_margin: f64::INFINITY,
            worst_theta: f64::NAN,
            violations: Vec::new(),
        };
        let record = |report: &mut CertificationReport, th: f64, psi: f64, margin: f64| {
            report.samples_checked += 1;
            if margin < report.worst_margin {
                report.worst_margin = margin;
                report.worst_theta = th;
            }
            if margin <= 0.0 {
                report.passed = false;
                report.violations.push(CertSample {
                    theta: th,
                    psi,
                    margin,
                });
            }
        };

        // Endpoint fixed points must hold exactly.
        for th in [0.0, TAU] {
            let psi = th + self.gain * self.prc.eval(Phase::new(th).unwrap());
            let err = (psi - th).abs();
            let margin = if err == 0.0 { f64::INFINITY } else { -err };
            record(&mut report, th, psi, margin);
        }

        for th in sample_grid(grid_size, &self.prc.breakpoint_angles()) {
            let psi = th + self.gain * self.prc.eval(Phase::new(th).unwrap());
            let margin = if th < PI {
                (psi - 0.0).min(th - psi)
            } else {
                (psi - th).min(TAU - psi)
            };
            record(&mut report, th, psi, margin);
        }
        report
    }
}
