//! Numerical checks of the bounds against concrete configurations.
//!
//! * [`check_admissible`] decides the density and separation conditions.
//! * [`check_theorems`] derives `n` and `δ` from a configuration and
//!   compares its sum against every bound whose hypotheses hold.
//! * [`LatticeOracle`] maximizes `|S|` exhaustively over subsets of a
//!   uniform grid, deciding admissibility in exact integer arithmetic.
//! * [`ascent_optimize`] pushes single points along the circle while the
//!   sum grows and both conditions still hold.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::thread;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::bounds::{self, BoundReport, BoundValue};
use crate::error::{Error, Result};
use crate::geometry::{
    forward_distance, AdmissibleParams, ArcWindow, Closure, Configuration, ANGLE_EPS,
};

/// Margins above `-MARGIN_TOLERANCE` count as the bound holding.
pub const MARGIN_TOLERANCE: f64 = 1e-9;

/// Rejection cap for [`random_admissible`].
pub const MAX_REJECTIONS: usize = 100_000;

/// Corollary arcs `2π/k` checked by [`check_theorems`].
pub const CONFORMANCE_COROLLARY_KS: std::ops::RangeInclusive<u64> = 2..=8;

/// An open arc holding more points than allowed, and which points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub window: ArcWindow,
    /// Indices into the configuration's sorted angles.
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    /// At most `n` points in every open arc of length `φ`.
    pub satisfies_i: bool,
    /// At most one point in every open arc of length `δ`.
    pub satisfies_ii: bool,
    pub witness_i: Option<Witness>,
    pub witness_ii: Option<Witness>,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.satisfies_i && self.satisfies_ii
    }
}

/// An open window of length `length` around the densest start-anchored arc,
/// if it holds more than `limit` points.
fn overfull_arc(config: &Configuration, length: f64, limit: usize) -> Result<Option<Witness>> {
    let (count, anchor) = config.densest_arc_from_start(length);
    if count <= limit {
        return Ok(None);
    }
    let n = config.len();
    let angles = config.angles();
    let a = |j: usize| angles[j % n].radians();
    let last = forward_distance(a(anchor), a(anchor + count - 1));
    let prev_gap = forward_distance(a(anchor + n - 1), a(anchor));
    let prev_gap = if prev_gap > ANGLE_EPS && count < n { prev_gap } else { TAU };
    let shift = 0.5 * prev_gap.min(length - last);
    let window = ArcWindow::open(a(anchor) - shift, length)?;
    Ok(Some(Witness {
        window,
        indices: (anchor..anchor + count).map(|j| j % n).collect(),
    }))
}

pub fn check_admissible(config: &Configuration, params: &AdmissibleParams) -> Result<AdmissibilityReport> {
    let witness_i = overfull_arc(config, params.phi(), params.n() as usize)?;
    let witness_ii = overfull_arc(config, params.delta(), 1)?;
    Ok(AdmissibilityReport {
        satisfies_i: witness_i.is_none(),
        satisfies_ii: witness_ii.is_none(),
        witness_i,
        witness_ii,
    })
}

/// One bound compared against a configuration's `|S|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    /// The arc count the bound was evaluated with.
    pub n: u64,
    /// The separation the bound was evaluated with.
    pub delta: f64,
    pub value: f64,
    /// `value - |S|`.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformanceReport {
    #[serde(rename = "N")]
    pub total: usize,
    pub phi: f64,
    /// Most points in any open arc of length `φ`.
    pub derived_n: u64,
    /// Most points in any open semicircle.
    pub derived_n_semicircle: u64,
    /// Minimum circular gap (π for a single point, absent when empty).
    pub derived_delta: Option<f64>,
    pub sum_magnitude: f64,
    pub applicable_bounds: Option<BoundReport>,
    pub checks: Vec<BoundCheck>,
    pub min_margin: Option<f64>,
}

impl ConformanceReport {
    pub fn is_conformant(&self) -> bool {
        self.min_margin.is_none_or(|m| m >= -MARGIN_TOLERANCE)
    }

    pub fn margin(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.margin)
    }
}

/// Compares `|S|` with every bound whose hypotheses the configuration
/// itself satisfies.
///
/// The separation `δ` is the minimum circular gap. Where a bound needs
/// `n·δ ≤ φ` (or `n·δ ≤ π`, `n·δ ≤ 2π/k`) and the gap is larger, the bound is
/// evaluated at `δ = φ/n` instead; separation by the gap implies separation
/// by any smaller `δ`. Freiman- and Lev-type bounds use the open-semicircle
/// count, the corollary bounds the count for arcs of length `2π/k`.
pub fn check_theorems(config: &Configuration, phi: f64) -> Result<ConformanceReport> {
    if !(phi.is_finite() && phi > 0.0 && phi <= PI) {
        return Err(Error::InvalidParameter(format!("φ = {phi} is outside (0, π]")));
    }
    let total = config.len();
    let sum_magnitude = config.sum().norm();
    if total == 0 {
        return Ok(ConformanceReport {
            total,
            phi,
            derived_n: 0,
            derived_n_semicircle: 0,
            derived_delta: None,
            sum_magnitude,
            applicable_bounds: None,
            checks: Vec::new(),
            min_margin: None,
        });
    }
    let n = config.max_arc_count(phi, Closure::Open)? as u64;
    let n_semi = config.max_arc_count(PI, Closure::Open)? as u64;
    let gap = if total >= 2 {
        config.min_circular_gap()?.min(PI)
    } else {
        PI
    };
    let fit = |limit: f64, count: u64| gap.min(limit / count as f64);
    let big_n = total as u64;

    let delta_density = fit(phi, n);
    let mut report = bounds::evaluate_all(n, big_n, delta_density, phi);
    let delta_semi = fit(PI, n_semi);
    report.freiman = bounds::freiman_bound(n_semi, big_n).into();
    report.lev = bounds::lev_bound(n_semi, big_n, delta_semi).into();
    report.spacing = bounds::spacing_bound(big_n, gap).into();

    let mut checks = Vec::new();
    let mut push = |name: String, n: u64, delta: f64, value: &BoundValue| {
        if let Some(value) = value.value() {
            checks.push(BoundCheck {
                name,
                n,
                delta,
                value,
                margin: value - sum_magnitude,
            });
        }
    };
    push("freiman".into(), n_semi, 0.0, &report.freiman);
    push("lev".into(), n_semi, delta_semi, &report.lev);
    push("spacing".into(), big_n, gap, &report.spacing);
    push("main".into(), n, delta_density, &report.main);
    push("smooth".into(), n, delta_density, &report.smooth);
    for (k, value) in &report.lk {
        push(format!("lk_{k}"), n, delta_density, value);
    }

    let mut corollary = BTreeMap::new();
    for k in CONFORMANCE_COROLLARY_KS {
        let n_k = config.max_arc_count(TAU / k as f64, Closure::Open)? as u64;
        let delta_k = fit(TAU / k as f64, n_k);
        let value: BoundValue = bounds::corollary_bound(n_k, big_n, delta_k, k).into();
        push(format!("corollary_{k}"), n_k, delta_k, &value);
        corollary.insert(k, value);
    }
    report.corollary = corollary;

    let min_margin = checks.iter().map(|c| c.margin).reduce(f64::min);
    Ok(ConformanceReport {
        total,
        phi,
        derived_n: n,
        derived_n_semicircle: n_semi,
        derived_delta: Some(gap),
        sum_magnitude,
        applicable_bounds: Some(report),
        checks,
        min_margin,
    })
}

/// Samples an admissible configuration of `total` points.
///
/// Gaps are `δ` plus a random share of the slack `2π - N·δ`, so the
/// separation condition always holds; samples failing the density condition
/// are rejected, at most `max_rejections` times. Shares are drawn from
/// heavy-tailed weights, and some gaps are pinned to exactly `δ`, so that
/// clustered configurations near the extremal ones are sampled too.
pub fn random_admissible<R: Rng + ?Sized>(
    params: &AdmissibleParams,
    total: usize,
    rng: &mut R,
    max_rejections: usize,
) -> Result<Configuration> {
    let slack = TAU - total as f64 * params.delta();
    if slack < 0.0 {
        return Err(Error::EmptyFeasible(format!(
            "{total} points cannot be separated by δ = {}",
            params.delta()
        )));
    }
    if total == 0 {
        return Ok(Configuration::default());
    }
    for _ in 0..=max_rejections {
        let power = rng.gen_range(1.0..4.0);
        let pin_probability = if rng.gen_bool(0.5) { rng.gen_range(0.0..0.8) } else { 0.0 };
        let mut weights: Vec<f64> = (0..total)
            .map(|_| {
                if rng.gen_bool(pin_probability) {
                    0.0
                } else {
                    let exp: f64 = -(1.0 - rng.gen::<f64>()).ln();
                    exp.powf(power)
                }
            })
            .collect();
        let weight_sum: f64 = weights.iter().sum();
        if weight_sum <= 0.0 {
            weights.iter_mut().for_each(|w| *w = 1.0);
        }
        let weight_sum: f64 = weights.iter().sum();
        let mut theta = rng.gen_range(-PI..PI);
        let mut angles = Vec::with_capacity(total);
        for w in &weights {
            angles.push(theta);
            theta += params.delta() + slack * w / weight_sum;
        }
        let config = Configuration::from_radians(&angles)?;
        if check_admissible(&config, params)?.is_admissible() {
            return Ok(config);
        }
    }
    Err(Error::EmptyFeasible(format!(
        "no admissible sample after {max_rejections} rejections"
    )))
}

/// Outcome of an exhaustive lattice search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleResult {
    pub max_abs_sum: f64,
    pub argmax_angles: Vec<f64>,
    /// Grid indices `t` of the maximizer, angle `2πt/M`.
    pub argmax_indices: Vec<usize>,
    pub enumerated_count: u64,
    pub feasible_count: u64,
}

/// Exhaustive maximization of `|S|` over admissible `N`-subsets of the grid
/// `{2πt/M : t = 0..M}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeOracle {
    /// Largest number of subsets `C(M, N)` that may be enumerated.
    pub budget: u128,
    pub workers: usize,
}

impl Default for LatticeOracle {
    /// Budget `C(24, 6)`, one worker.
    fn default() -> Self {
        Self {
            budget: binomial(24, 6),
            workers: 1,
        }
    }
}

pub(crate) fn binomial(m: u64, k: u64) -> u128 {
    if k > m {
        return 0;
    }
    let k = k.min(m - k);
    (0..k).fold(1u128, |acc, i| acc * (m - i) as u128 / (i + 1) as u128)
}

/// Smallest integer `H` with `d < h ⇔ d < H` for every integer `d`, where
/// `h` within 1e-9 of an integer is taken to be that integer.
fn grid_threshold(h: f64) -> usize {
    let r = h.round();
    if (h - r).abs() <= 1e-9 {
        r as usize
    } else {
        h.ceil() as usize
    }
}

struct Lattice {
    grid: usize,
    /// Consecutive chosen indices must be at least this far apart.
    separation: usize,
    /// Points at forward index distance below this share a density arc.
    density_reach: usize,
    n: usize,
    table: Vec<Complex64>,
}

impl Lattice {
    fn admissible(&self, t: &[usize]) -> bool {
        let k = t.len();
        if k >= 2 {
            let wrap = t[0] + self.grid - t[k - 1];
            if wrap < self.separation || t.windows(2).any(|w| w[1] - w[0] < self.separation) {
                return false;
            }
        }
        if k > self.n {
            let mut hi = 0;
            for i in 0..k {
                hi = hi.max(i + 1);
                while hi < i + k {
                    let idx = if hi < k { t[hi] } else { t[hi - k] + self.grid };
                    if idx - t[i] < self.density_reach {
                        hi += 1;
                    } else {
                        break;
                    }
                }
                if hi - i > self.n {
                    return false;
                }
            }
        }
        true
    }

    fn abs_sum(&self, t: &[usize]) -> f64 {
        t.iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &i| acc + self.table[i])
            .norm()
    }
}

#[derive(Default)]
struct Partial {
    best: Option<(f64, Vec<usize>)>,
    enumerated: u64,
    feasible: u64,
}

impl Partial {
    fn offer(&mut self, value: f64, t: &[usize]) {
        let better = match &self.best {
            None => true,
            Some((bv, bt)) => value > *bv || (value == *bv && t < bt.as_slice()),
        };
        if better {
            self.best = Some((value, t.to_vec()));
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        self.enumerated += other.enumerated;
        self.feasible += other.feasible;
        if let Some((v, t)) = other.best {
            self.offer(v, &t);
        }
        self
    }
}

impl LatticeOracle {
    pub fn run(&self, params: &AdmissibleParams, total: usize, grid: usize) -> Result<OracleResult> {
        if grid == 0 || total > grid {
            return Err(Error::InvalidParameter(format!(
                "need N ≤ M and M ≥ 1, got N = {total}, M = {grid}"
            )));
        }
        let needed = binomial(grid as u64, total as u64);
        if needed > self.budget {
            return Err(Error::BudgetExceeded {
                needed,
                budget: self.budget,
            });
        }
        let units = grid as f64 / TAU;
        let lattice = Lattice {
            grid,
            separation: grid_threshold(params.delta() * units),
            density_reach: grid_threshold(params.phi() * units),
            n: params.n() as usize,
            table: (0..grid)
                .map(|t| {
                    let theta = TAU * t as f64 / grid as f64;
                    Complex64::new(theta.cos(), theta.sin())
                })
                .collect(),
        };

        let partial = if total == 0 {
            let mut p = Partial {
                enumerated: 1,
                feasible: 1,
                ..Partial::default()
            };
            p.offer(0.0, &[]);
            p
        } else {
            let workers = self.workers.clamp(1, grid - total + 1);
            thread::scope(|scope| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        let lattice = &lattice;
                        scope.spawn(move || {
                            let mut partial = Partial::default();
                            let mut first = w;
                            while first + total <= grid {
                                enumerate_from(lattice, first, total, &mut partial);
                                first += workers;
                            }
                            partial
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("oracle worker panicked"))
                    .fold(Partial::default(), Partial::merge)
            })
        };

        let (max_abs_sum, argmax_indices) = partial.best.ok_or_else(|| {
            Error::EmptyFeasible(format!("no admissible {total}-subset of the {grid}-point grid"))
        })?;
        Ok(OracleResult {
            max_abs_sum,
            argmax_angles: argmax_indices
                .iter()
                .map(|&t| crate::geometry::normalize_angle(TAU * t as f64 / grid as f64).map(f64::from))
                .collect::<Result<_>>()?,
            argmax_indices,
            enumerated_count: partial.enumerated,
            feasible_count: partial.feasible,
        })
    }
}

/// All `total`-subsets whose smallest element is `first`, in lexicographic
/// order.
fn enumerate_from(lattice: &Lattice, first: usize, total: usize, partial: &mut Partial) {
    let grid = lattice.grid;
    let mut t: Vec<usize> = (first..first + total).collect();
    loop {
        partial.enumerated += 1;
        if lattice.admissible(&t) {
            partial.feasible += 1;
            let value = lattice.abs_sum(&t);
            partial.offer(value, &t);
        }
        // advance positions 1..total, keeping t[0] fixed
        let mut i = total;
        loop {
            if i <= 1 {
                return;
            }
            i -= 1;
            if t[i] < grid - (total - i) {
                break;
            }
        }
        t[i] += 1;
        for j in i + 1..total {
            t[j] = t[j - 1] + 1;
        }
    }
}

/// [`LatticeOracle::run`] with the default budget and a single worker.
pub fn lattice_bruteforce_max(params: &AdmissibleParams, total: usize, grid: usize) -> Result<OracleResult> {
    LatticeOracle::default().run(params, total, grid)
}

/// Step sizes for [`ascent_optimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSchedule {
    pub initial: f64,
    pub floor: f64,
}

impl Default for StepSchedule {
    fn default() -> Self {
        Self {
            initial: 0.25,
            floor: 1e-12,
        }
    }
}

fn abs_sum(angles: &[f64]) -> f64 {
    angles
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, a| acc + Complex64::new(a.cos(), a.sin()))
        .norm()
}

/// Greedy single-point ascent of `|S|` inside the admissible set.
///
/// Each iteration ranks points by `|d|S|/dθ_j| = |sin(θ_j - arg S)|` (lowest
/// index first on ties) and rotates the best-ranked point that can move
/// toward `arg S`, by the largest step `ε ≤ current step` that keeps the
/// configuration admissible and strictly increases `|S|`. Trial steps halve
/// down to the schedule's floor. The current step doubles back toward the
/// initial step after each accepted move. Stops after `max_iters` moves or
/// when no point can move.
pub fn ascent_optimize(
    config: &Configuration,
    params: &AdmissibleParams,
    max_iters: usize,
    schedule: StepSchedule,
) -> Result<Configuration> {
    if !check_admissible(config, params)?.is_admissible() {
        return Err(Error::InvalidInput(
            "starting configuration is not admissible".into(),
        ));
    }
    let mut angles = config.radians();
    let mut step = schedule.initial;
    for _ in 0..max_iters {
        let sum: Complex64 = angles
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, a| acc + Complex64::new(a.cos(), a.sin()));
        let current = sum.norm();
        let direction = if current > 0.0 { sum.arg() } else { 0.0 };
        let mut candidates: Vec<(usize, f64)> = angles
            .iter()
            .enumerate()
            .map(|(j, &a)| (j, -(a - direction).sin()))
            .filter(|(_, g)| *g != 0.0)
            .collect();
        candidates.sort_by(|x, y| y.1.abs().total_cmp(&x.1.abs()).then(x.0.cmp(&y.0)));

        let mut accepted = None;
        'candidates: for (j, gradient) in candidates {
            let mut eps = step;
            while eps >= schedule.floor {
                let mut trial = angles.clone();
                trial[j] += gradient.signum() * eps;
                if abs_sum(&trial) > current {
                    let trial = Configuration::from_radians(&trial)?;
                    if check_admissible(&trial, params)?.is_admissible() {
                        accepted = Some((trial, eps));
                        break 'candidates;
                    }
                }
                eps *= 0.5;
            }
        }
        match accepted {
            Some((trial, eps)) => {
                angles = trial.radians();
                step = (2.0 * eps).min(schedule.initial);
            }
            None => break,
        }
    }
    Configuration::from_radians(&angles)
}
