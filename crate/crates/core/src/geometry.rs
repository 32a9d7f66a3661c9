//! Points on the unit circle, represented by their angles.
//!
//! Every angle is kept in the principal range `[-π, π)`. Arcs run
//! counter-clockwise from their start, and membership at an arc endpoint is
//! decided with the absolute tolerance [`ANGLE_EPS`]: a point within
//! `ANGLE_EPS` of an endpoint is treated as lying on it.
//!
//! A [`Configuration`] is a finite *sequence* of points: coincident points
//! are kept and counted with multiplicity.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance (radians) for deciding endpoint membership.
pub const ANGLE_EPS: f64 = 1e-12;

/// An angle in radians, normalized to `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Angle(f64);

impl Angle {
    pub fn new(theta: f64) -> Result<Self> {
        normalize_angle(theta)
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// The point `exp(i·θ)`.
    pub fn to_unit(self) -> Complex64 {
        Complex64::new(self.0.cos(), self.0.sin())
    }
}

impl From<Angle> for f64 {
    fn from(angle: Angle) -> f64 {
        angle.0
    }
}

/// Reduces `theta` modulo 2π into `[-π, π)`.
///
/// Values already in range are returned bit-for-bit unchanged, so normalizing
/// twice is the identity.
pub fn normalize_angle(theta: f64) -> Result<Angle> {
    if !theta.is_finite() {
        return Err(Error::InvalidInput(format!("angle {theta} is not finite")));
    }
    if (-PI..PI).contains(&theta) {
        return Ok(Angle(theta));
    }
    let mut value = (theta + PI).rem_euclid(TAU) - PI;
    // Rounding in the reduction can land just below π for inputs that are odd
    // multiples of π; those belong at the closed end of the range.
    if !(-PI..PI - ANGLE_EPS).contains(&value) {
        value = -PI;
    }
    Ok(Angle(value))
}

/// Counter-clockwise angular distance from `from` to `to`, in `[0, 2π)`.
pub(crate) fn forward_distance(from: f64, to: f64) -> f64 {
    let d = (to - from).rem_euclid(TAU);
    if d >= TAU {
        0.0
    } else {
        d
    }
}

fn near_zero_mod_tau(d: f64) -> bool {
    d <= ANGLE_EPS || d >= TAU - ANGLE_EPS
}

/// Which endpoints of an arc belong to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Closure {
    /// `(u, v)`
    Open,
    /// `(u, v]`
    OpenClosed,
    /// `[u, v)`
    ClosedOpen,
}

/// The arc swept counter-clockwise from `start` through `length` radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArcWindow {
    start: Angle,
    length: f64,
    closure: Closure,
}

impl ArcWindow {
    pub fn new(start: f64, length: f64, closure: Closure) -> Result<Self> {
        check_arc_length(length)?;
        Ok(Self {
            start: normalize_angle(start)?,
            length,
            closure,
        })
    }

    pub fn open(start: f64, length: f64) -> Result<Self> {
        Self::new(start, length, Closure::Open)
    }

    pub fn start(&self) -> Angle {
        self.start
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn closure(&self) -> Closure {
        self.closure
    }

    pub fn contains(&self, point: Angle) -> bool {
        let d = forward_distance(self.start.0, point.0);
        let at_start = near_zero_mod_tau(d);
        let at_end = near_zero_mod_tau(forward_distance(self.start.0 + self.length, point.0));
        let interior = !at_start && !at_end && d < self.length - ANGLE_EPS;
        match self.closure {
            Closure::Open => interior,
            Closure::OpenClosed => interior || at_end,
            Closure::ClosedOpen => interior || at_start,
        }
    }
}

fn check_arc_length(length: f64) -> Result<()> {
    if length.is_finite() && length > 0.0 && length <= TAU {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "arc length {length} is outside (0, 2π]"
        )))
    }
}

/// The triple `(n, δ, φ)`: at most `n` points in any open arc of length
/// `φ`, at most one in any open arc of length `δ`.
///
/// `n·δ ≤ φ` is not enforced; when it fails the density condition is implied
/// by the separation condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibleParams {
    n: u64,
    delta: f64,
    phi: f64,
}

impl AdmissibleParams {
    pub fn new(n: u64, delta: f64, phi: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        for (name, v) in [("δ", delta), ("φ", phi)] {
            if !(v.is_finite() && v > 0.0 && v <= PI) {
                return Err(Error::InvalidParameter(format!("{name} = {v} is outside (0, π]")));
            }
        }
        Ok(Self { n, delta, phi })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// A finite sequence of points on the unit circle, stored in sorted angular
/// order. Duplicates are allowed.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Configuration {
    angles: Vec<Angle>,
}

#[derive(Deserialize)]
struct ConfigurationFile {
    angles: Vec<f64>,
}

impl Configuration {
    pub fn new(mut angles: Vec<Angle>) -> Self {
        angles.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self { angles }
    }

    /// Builds a configuration from raw radians in any range.
    pub fn from_radians(radians: &[f64]) -> Result<Self> {
        let angles = radians
            .iter()
            .map(|&r| normalize_angle(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(angles))
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[Angle] {
        &self.angles
    }

    pub fn radians(&self) -> Vec<f64> {
        self.angles.iter().map(|a| a.0).collect()
    }

    /// Rotates every point counter-clockwise by `by` radians.
    pub fn rotated(&self, by: f64) -> Result<Self> {
        let rotated = self.angles.iter().map(|a| a.0 + by).collect::<Vec<_>>();
        Self::from_radians(&rotated)
    }

    /// `S = Σ exp(i·θ_j)`; zero for the empty configuration.
    pub fn sum(&self) -> Complex64 {
        self.angles
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc + a.to_unit())
    }

    /// Number of points on `window`, with multiplicity.
    pub fn count_arc(&self, window: &ArcWindow) -> usize {
        self.angles.iter().filter(|&&a| window.contains(a)).count()
    }

    /// Maximum of [`count_arc`](Self::count_arc) over every placement of an
    /// arc of the given length and closure.
    ///
    /// For finitely many points the maximum is attained by an arc whose
    /// closed (or, for an open arc, infinitesimally shifted) edge sits on a
    /// point, so only `N` candidate placements are scanned. Open and
    /// closed-open arcs are anchored at their start, open-closed arcs at
    /// their end.
    pub fn max_arc_count(&self, length: f64, closure: Closure) -> Result<usize> {
        check_arc_length(length)?;
        let n = self.angles.len();
        if n == 0 {
            return Ok(0);
        }
        let reach = length - ANGLE_EPS;
        let mut best = 0;
        match closure {
            Closure::Open | Closure::ClosedOpen => {
                best = self.densest_arc_from_start(length).0;
            }
            Closure::OpenClosed => {
                // ext[j] = a[j] - 2π followed by a[j]
                let ext = |j: usize| {
                    if j < n {
                        self.angles[j].0 - TAU
                    } else {
                        self.angles[j - n].0
                    }
                };
                let mut lo = 2 * n;
                for i in (n..2 * n).rev() {
                    lo = lo.min(i);
                    while lo > i + 1 - n && ext(i) - ext(lo - 1) < reach {
                        lo -= 1;
                    }
                    best = best.max(i + 1 - lo);
                }
            }
        }
        Ok(best)
    }

    /// Densest arc anchored at its start: returns `(count, i)` where the
    /// points `i, i+1, ...` (cyclically) at forward distance below
    /// `length - ANGLE_EPS` from point `i` number `count`, maximal over `i`.
    /// The smallest such `i` is returned. `(0, 0)` when empty.
    pub(crate) fn densest_arc_from_start(&self, length: f64) -> (usize, usize) {
        let n = self.angles.len();
        let reach = length - ANGLE_EPS;
        // ext[j] = a[j] followed by a[j] + 2π
        let ext = |j: usize| {
            if j < n {
                self.angles[j].0
            } else {
                self.angles[j - n].0 + TAU
            }
        };
        let (mut best, mut anchor) = (0, 0);
        let mut hi = 0;
        for i in 0..n {
            hi = hi.max(i + 1);
            while hi < i + n && ext(hi) - ext(i) < reach {
                hi += 1;
            }
            if hi - i > best {
                best = hi - i;
                anchor = i;
            }
        }
        (best, anchor)
    }

    /// Smallest counter-clockwise gap between circularly consecutive points.
    /// Zero when two points coincide.
    pub fn min_circular_gap(&self) -> Result<f64> {
        let n = self.angles.len();
        if n < 2 {
            return Err(Error::UndefinedGap);
        }
        let wrap = self.angles[0].0 + TAU - self.angles[n - 1].0;
        Ok(self
            .angles
            .windows(2)
            .map(|w| w[1].0 - w[0].0)
            .fold(wrap, f64::min))
    }

    /// `K(θ)`: the number of points with an argument in `[θ - π, θ)`.
    ///
    /// Endpoints are resolved with [`ANGLE_EPS`] in a way that keeps
    /// `K(θ) + K(θ + π) = N` exact.
    pub fn k_function(&self, theta: f64) -> usize {
        self.angles
            .iter()
            .filter(|a| {
                let x = forward_distance(theta, a.0);
                if near_zero_mod_tau(x) {
                    false
                } else {
                    x >= PI - ANGLE_EPS
                }
            })
            .count()
    }

    /// `∫_{-π}^{π} K(θ) sin θ dθ`, integrated exactly over each interval on
    /// which the step function `K` is constant.
    pub fn k_sine_integral(&self) -> f64 {
        let mut breaks = Vec::with_capacity(2 * self.angles.len() + 2);
        breaks.push(-PI);
        breaks.push(PI);
        for a in &self.angles {
            breaks.push(a.0);
            let opposite = if a.0 < 0.0 { a.0 + PI } else { a.0 - PI };
            breaks.push(opposite);
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        breaks
            .windows(2)
            .map(|w| {
                let (lo, hi) = (w[0], w[1]);
                let mid = 0.5 * (lo + hi);
                // exact count at an interior point, no endpoint tolerance needed
                let k = self
                    .angles
                    .iter()
                    .filter(|a| (a.0 - mid).rem_euclid(TAU) >= PI)
                    .count();
                k as f64 * (lo.cos() - hi.cos())
            })
            .sum()
    }

    /// Serializes as `{"angles": [...]}` with 17 significant digits per
    /// angle, which reads back bit-exactly.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\"angles\":[");
        for (i, a) in self.angles.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write!(out, "{}", format_f64(a.0)).unwrap();
        }
        out.push_str("]}");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConfigurationFile = serde_json::from_str(text)?;
        Self::from_radians(&file.angles)
    }
}

/// Renders a double with 17 significant digits.
pub fn format_f64(value: f64) -> String {
    format!("{value:.16e}")
}

impl FromIterator<Angle> for Configuration {
    fn from_iter<I: IntoIterator<Item = Angle>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}
