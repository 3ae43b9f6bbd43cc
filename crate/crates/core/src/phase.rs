//! Circle geometry: phase wrapping, circular distances, the ensemble
//! diameter and the shortest containing arc with its endpoint index sets.
//!
//! The diameter of a phase vector is the length of the shortest arc of the
//! unit circle containing every point `e^{i theta_j}`. It is the Lyapunov
//! quantity of the synchronization analysis: for delay-advance oscillators
//! it never grows along a trajectory, and on rooted graphs it contracts.

use std::f64::consts::TAU;

use crate::error::{Error, Result};

/// Default tolerance for geometric comparisons on the circle, in radians.
///
/// Exact reals in the theory, IEEE doubles here: arc membership and endpoint
/// classification are tolerant to this band.
pub const EPS_GEOM: f64 = 1e-12;

/// An oscillator phase in radians, confined to `[0, 2π]`.
///
/// The boundary value `2π` is a legal pre-firing state; every geometric
/// operation identifies it with `0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);
    /// The firing boundary `2π`.
    pub const FULL: Phase = Phase(TAU);

    /// Validates `radians` as a phase in `[0, 2π]` (both ends inclusive).
    pub fn new(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::NonFinite {
                what: "phase",
                value: radians,
            });
        }
        if !(0.0..=TAU).contains(&radians) {
            return Err(Error::OutOfRange {
                what: "phase",
                value: radians,
                min: 0.0,
                max: TAU,
            });
        }
        Ok(Phase(radians))
    }

    /// Reduces an arbitrary finite angle modulo `2π` into `[0, 2π)`.
    ///
    /// The boundary value `2π` is never produced here; construct it
    /// explicitly through [`Phase::FULL`] when a pre-firing state is meant.
    pub fn wrap(radians: f64) -> Result<Self> {
        if !radians.is_finite() {
            return Err(Error::NonFinite {
                what: "angle",
                value: radians,
            });
        }
        let mut r = radians.rem_euclid(TAU);
        // rem_euclid can round up to the modulus itself.
        if r >= TAU {
            r = 0.0;
        }
        Ok(Phase(r))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Value on the circle with `2π` identified with `0`.
    pub(crate) fn s1(self) -> f64 {
        if self.0 >= TAU {
            0.0
        } else {
            self.0
        }
    }
}

/// A fixed-length vector of phases, one per oscillator.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseVector(Vec<Phase>);

impl PhaseVector {
    pub fn new(phases: Vec<Phase>) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::Empty("phase vector"));
        }
        Ok(PhaseVector(phases))
    }

    pub fn from_radians(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Empty("phase vector"));
        }
        let phases = values
            .iter()
            .map(|&v| Phase::new(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(PhaseVector(phases))
    }

    /// Internal constructor for engine-produced values. Clamps float
    /// overshoot at the `2π` boundary instead of failing.
    pub(crate) fn from_raw_clamped(values: Vec<f64>) -> Self {
        debug_assert!(!values.is_empty());
        PhaseVector(
            values
                .into_iter()
                .map(|v| {
                    debug_assert!(v.is_finite() && v >= 0.0 && v <= TAU + 1e-9);
                    Phase(v.min(TAU))
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn phases(&self) -> &[Phase] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Phase> + '_ {
        self.0.iter().copied()
    }

    pub fn radians(&self) -> Vec<f64> {
        self.0.iter().map(|p| p.radians()).collect()
    }
}

impl std::ops::Index<usize> for PhaseVector {
    type Output = Phase;
    fn index(&self, i: usize) -> &Phase {
        &self.0[i]
    }
}

/// A closed arc of the unit circle, running counterclockwise from `start`
/// over `length` radians.
///
/// When computed from a phase vector via [`shortest_arc`], the endpoint
/// index sets record which oscillators sit on each end: `lower_endpoints`
/// on the start (the shortest turn from them to `upper_endpoints` is
/// counterclockwise).
#[derive(Debug, Clone, PartialEq)]
pub struct CircularArc {
    start: Phase,
    length: f64,
    lower_endpoints: Vec<usize>,
    upper_endpoints: Vec<usize>,
}

impl CircularArc {
    /// An arc with no endpoint attribution (not derived from a phase vector).
    pub fn new(start: Phase, length: f64) -> Result<Self> {
        if !length.is_finite() || !(0.0..=TAU).contains(&length) {
            return Err(Error::OutOfRange {
                what: "arc length",
                value: length,
                min: 0.0,
                max: TAU,
            });
        }
        Ok(CircularArc {
            start,
            length,
            lower_endpoints: Vec::new(),
            upper_endpoints: Vec::new(),
        })
    }

    pub fn start(&self) -> Phase {
        self.start
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    /// Counterclockwise end of the arc, wrapped into `[0, 2π)`.
    pub fn end(&self) -> Phase {
        Phase::wrap(self.start.s1() + self.length).expect("finite arc end")
    }

    /// Indices attaining the start endpoint (`J−`).
    pub fn lower_endpoints(&self) -> &[usize] {
        &self.lower_endpoints
    }

    /// Indices attaining the far endpoint (`J+`).
    pub fn upper_endpoints(&self) -> &[usize] {
        &self.upper_endpoints
    }

    /// The arc rigidly rotated by `angle` radians (counterclockwise).
    /// Endpoint attribution is preserved.
    pub fn rotated(&self, angle: f64) -> CircularArc {
        CircularArc {
            start: Phase::wrap(self.start.s1() + angle).expect("finite rotation"),
            length: self.length,
            lower_endpoints: self.lower_endpoints.clone(),
            upper_endpoints: self.upper_endpoints.clone(),
        }
    }

    /// Whether the point lies on the arc, within `eps` radians.
    pub fn contains_point(&self, p: Phase, eps: f64) -> bool {
        let d = (p.s1() - self.start.s1()).rem_euclid(TAU);
        d <= self.length + eps || d >= TAU - eps
    }
}

/// Circular distance between two phases: the shorter of the two arcs, in
/// `[0, π]`.
pub fn circular_distance(a: Phase, b: Phase) -> f64 {
    let delta = (a.s1() - b.s1()).abs();
    delta.min(TAU - delta)
}

/// Length of the shortest arc containing all phases: `2π` minus the widest
/// circular gap between consecutive sorted points. Zero iff all points
/// coincide on the circle.
pub fn diameter(v: &PhaseVector) -> f64 {
    let mut pts: Vec<f64> = v.iter().map(|p| p.s1()).collect();
    pts.sort_by(|a, b| a.total_cmp(b));
    let n = pts.len();
    let mut max_gap = pts[0] + TAU - pts[n - 1];
    for w in pts.windows(2) {
        max_gap = max_gap.max(w[1] - w[0]);
    }
    (TAU - max_gap).max(0.0)
}

/// The shortest arc containing all phases, with endpoint index sets.
///
/// Equal-length candidates (possible only in symmetric configurations with
/// diameter at least `π`) are resolved by removing the widest gap whose
/// start angle is smallest; `eps` controls gap ties and endpoint
/// classification.
pub fn shortest_arc(v: &PhaseVector, eps: f64) -> CircularArc {
    let n = v.len();
    let mut pts: Vec<(f64, usize)> = v.iter().enumerate().map(|(i, p)| (p.s1(), i)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let gap = |k: usize| -> f64 {
        if k + 1 == n {
            pts[0].0 + TAU - pts[n - 1].0
        } else {
            pts[k + 1].0 - pts[k].0
        }
    };

    let mut max_gap = gap(0);
    for k in 1..n {
        max_gap = max_gap.max(gap(k));
    }
    let best = (0..n)
        .find(|&k| gap(k) >= max_gap - eps)
        .expect("non-empty vector has a widest gap");

    let start_val = pts[(best + 1) % n].0;
    let length = (TAU - max_gap).max(0.0);
    let end_val = {
        let mut e = (start_val + length).rem_euclid(TAU);
        if e >= TAU {
            e = 0.0;
        }
        e
    };

    let near = |x: f64, target: f64| -> bool {
        let delta = (x - target).abs();
        delta.min(TAU - delta) <= eps
    };
    let lower: Vec<usize> = (0..n).filter(|&i| near(v[i].s1(), start_val)).collect();
    let upper: Vec<usize> = (0..n).filter(|&i| near(v[i].s1(), end_val)).collect();

    CircularArc {
        start: Phase(start_val),
        length,
        lower_endpoints: lower,
        upper_endpoints: upper,
    }
}

/// Signed containment slack of `inner` inside `outer`; non-negative (up to
/// `-eps`) iff every point of `inner` lies in `outer`.
pub fn containment_margin(outer: &CircularArc, inner: &CircularArc, eps: f64) -> f64 {
    if outer.length >= TAU - eps {
        return outer.length - inner.length;
    }
    let mut offset = (inner.start.s1() - outer.start.s1()).rem_euclid(TAU);
    // A start sitting just clockwise of the outer start counts as coincident.
    if offset >= TAU - eps {
        offset -= TAU;
    }
    outer.length - offset - inner.length
}

/// Whether every point of `inner` lies in `outer`, with comparisons
/// tolerant to `eps` radians.
pub fn arc_contains(outer: &CircularArc, inner: &CircularArc, eps: f64) -> bool {
    containment_margin(outer, inner, eps) >= -eps
}

/// Worst pairwise chord distance `max |e^{i a} − e^{i b}|`; zero iff all
/// phases coincide on the circle.
pub fn sync_error(v: &PhaseVector) -> f64 {
    let n = v.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let circ = circular_distance(v[i], v[j]);
            worst = worst.max(2.0 * (circ / 2.0).sin());
        }
    }
    worst
}
