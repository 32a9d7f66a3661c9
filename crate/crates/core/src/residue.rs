//! Fourier bias and interval concentration for sets of residue classes.
//!
//! For `A ⊆ Z/mZ` of size `N`, the coefficient
//! `1̂_A(x) = Σ_{a∈A} exp(2πi·a·x/m)` at `x = 1` forces some interval
//! `[u, v]` with `v - u < m/k` to hold at least
//!
//! ```text
//! n₀ = ⌈ (N + arcsin(|1̂_A(1)|·sin(π/m)) / (π/m)) / k ⌉
//! ```
//!
//! elements of `A`. This is the corollary bound with `δ = 2π/m` and
//! `φ = 2π/k`, solved for the arc count.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Arcsine arguments above 1 by at most this much are rounding and clamped.
pub const ARCSIN_CLAMP: f64 = 1e-9;

/// Slack subtracted before taking the ceiling in `n₀`, so that values that
/// are integers in exact arithmetic do not round up.
pub const CEIL_SLACK: f64 = 1e-9;

/// A subset of `Z/mZ`, stored as sorted distinct representatives in `[0, m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueClassSet {
    m: u64,
    elements: Vec<u64>,
}

impl ResidueClassSet {
    /// Reduces every element modulo `m` and drops repeats.
    pub fn new(m: u64, elements: impl IntoIterator<Item = i64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(format!("modulus {m} must exceed 1")));
        }
        let mut elements: Vec<u64> = elements
            .into_iter()
            .map(|a| a.rem_euclid(m as i64) as u64)
            .collect();
        elements.sort_unstable();
        elements.dedup();
        Ok(Self { m, elements })
    }

    /// All of `Z/mZ`.
    pub fn full(m: u64) -> Result<Self> {
        Self::new(m, 0..m as i64)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The image `{x·a : a ∈ A}`; requires `gcd(x, m) = 1` so that no two
    /// elements collide.
    pub fn dilate(&self, x: u64) -> Result<Self> {
        if gcd(x % self.m, self.m) != 1 {
            return Err(Error::InvalidParameter(format!(
                "dilation by {x} is not invertible modulo {}",
                self.m
            )));
        }
        let m = self.m as u128;
        let image = self
            .elements
            .iter()
            .map(|&a| ((a as u128 * x as u128) % m) as i64);
        Self::new(self.m, image)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `exp(2πi·t/m)` for `t = 0..m`, with `table[m-t]` the exact conjugate of
/// `table[t]`, so that `|1̂_A(x)| = |1̂_A(m-x)|` holds bit-for-bit.
struct RootTable(Vec<Complex64>);

impl RootTable {
    fn new(m: u64) -> Self {
        let m = m as usize;
        let mut table = vec![Complex64::new(1.0, 0.0); m];
        for t in 1..=m / 2 {
            if 2 * t == m {
                table[t] = Complex64::new(-1.0, 0.0);
                continue;
            }
            let theta = TAU * t as f64 / m as f64;
            table[t] = Complex64::new(theta.cos(), theta.sin());
            table[m - t] = table[t].conj();
        }
        Self(table)
    }

    fn coefficient(&self, set: &ResidueClassSet, x: u64) -> Complex64 {
        let m = set.m as u128;
        let x = (x as u128) % m;
        set.elements
            .iter()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| {
                acc + self.0[((a as u128 * x) % m) as usize]
            })
    }
}

/// `Σ_{a∈A} exp(2πi·a·x/m)`, by direct summation.
pub fn fourier_coefficient(set: &ResidueClassSet, x: i64) -> Complex64 {
    let m = set.m as i64;
    let x = x.rem_euclid(m) as u128;
    let m = m as u128;
    set.elements
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| {
            let t = (a as u128 * x) % m;
            let theta = TAU * t as f64 / m as f64;
            acc + Complex64::new(theta.cos(), theta.sin())
        })
}

/// The full spectrum `1̂_A(x)` for `x = 0..m`.
pub fn spectrum(set: &ResidueClassSet) -> Vec<Complex64> {
    let table = RootTable::new(set.m);
    (0..set.m).map(|x| table.coefficient(set, x)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierReport {
    pub coefficient_at_1: [f64; 2],
    /// `max_{x≠0} |1̂_A(x)|`.
    pub max_nontrivial: f64,
    /// Smallest `x` attaining the maximum.
    pub x_star: u64,
    /// `max_nontrivial / N` (0 for the empty set).
    pub bias_ratio: f64,
}

pub fn max_fourier_bias(set: &ResidueClassSet) -> FourierReport {
    let table = RootTable::new(set.m);
    let mut best = (0.0, 1);
    for x in 1..set.m {
        let magnitude = table.coefficient(set, x).norm();
        if magnitude > best.0 {
            best = (magnitude, x);
        }
    }
    let c1 = table.coefficient(set, 1);
    let total = set.len() as f64;
    FourierReport {
        coefficient_at_1: [c1.re, c1.im],
        max_nontrivial: best.0,
        x_star: best.1,
        bias_ratio: if set.is_empty() { 0.0 } else { best.0 / total },
    }
}

/// The guaranteed count `n₀` from the coefficient at `x = 1`.
///
/// Returns 0 for the empty set. Fails with
/// [`Error::InternalInconsistency`] if `|1̂_A(1)|·sin(π/m)` exceeds 1 by more
/// than [`ARCSIN_CLAMP`], which the spacing bound rules out.
pub fn concentration_lower_bound(set: &ResidueClassSet, k: u64) -> Result<u64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k = {k} must be at least 2")));
    }
    if set.is_empty() {
        return Ok(0);
    }
    let step = PI / set.m as f64;
    let mut arg = fourier_coefficient(set, 1).norm() * step.sin();
    if arg > 1.0 + ARCSIN_CLAMP {
        return Err(Error::InternalInconsistency(format!(
            "|1̂_A(1)|·sin(π/m) = {arg} exceeds 1"
        )));
    }
    arg = arg.min(1.0);
    let value = (set.len() as f64 + arg.asin() / step) / k as f64;
    Ok((value - CEIL_SLACK).ceil().max(0.0) as u64)
}

/// An interval `[u, v]` of integers, `v - u < m/k`, and how many elements of
/// `A` its image in `Z/mZ` holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConcentrationWindow {
    pub u: u64,
    pub v: u64,
    pub count: u64,
}

/// The densest window `[u, u + ⌈m/k⌉ - 1]` over `u = 0..m`, smallest `u` on
/// ties.
pub fn best_interval(set: &ResidueClassSet, k: u64) -> Result<ConcentrationWindow> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k = {k} must be at least 2")));
    }
    let m = set.m as usize;
    let width = set.m.div_ceil(k) as usize;
    let mut member = vec![0u64; m];
    for &a in &set.elements {
        member[a as usize] = 1;
    }
    let mut count: u64 = member[..width].iter().sum();
    let mut best = ConcentrationWindow {
        u: 0,
        v: width as u64 - 1,
        count,
    };
    for u in 1..m {
        count = count - member[u - 1] + member[(u + width - 1) % m];
        if count > best.count {
            best = ConcentrationWindow {
                u: u as u64,
                v: (u + width - 1) as u64,
                count,
            };
        }
    }
    Ok(best)
}

/// The concentration bound after dilating `A` by `x*`, which moves the
/// largest nontrivial coefficient to position 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilatedAnalysis {
    pub multiplier: u64,
    pub n0: u64,
    pub window: ConcentrationWindow,
}

/// Everything the residue application reports for one `(A, k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidueReport {
    pub m: u64,
    #[serde(rename = "N")]
    pub total: u64,
    pub coefficient_at_1: [f64; 2],
    pub x_star: u64,
    pub max_bias: f64,
    pub bias_ratio: f64,
    pub k: u64,
    pub n0: u64,
    pub best_u: u64,
    pub best_v: u64,
    pub best_count: u64,
    /// Set when `A` is empty and the guarantee is vacuous.
    pub degenerate: bool,
    /// Absent when `gcd(x*, m) ≠ 1`.
    pub dilated: Option<DilatedAnalysis>,
}

pub fn analyze(set: &ResidueClassSet, k: u64) -> Result<ResidueReport> {
    let fourier = max_fourier_bias(set);
    let n0 = concentration_lower_bound(set, k)?;
    let window = best_interval(set, k)?;
    let dilated = match set.dilate(fourier.x_star) {
        Ok(image) if fourier.x_star != 1 => Some(DilatedAnalysis {
            multiplier: fourier.x_star,
            n0: concentration_lower_bound(&image, k)?,
            window: best_interval(&image, k)?,
        }),
        Ok(_) => Some(DilatedAnalysis {
            multiplier: 1,
            n0,
            window,
        }),
        Err(_) => None,
    };
    Ok(ResidueReport {
        m: set.m,
        total: set.len() as u64,
        coefficient_at_1: fourier.coefficient_at_1,
        x_star: fourier.x_star,
        max_bias: fourier.max_nontrivial,
        bias_ratio: fourier.bias_ratio,
        k,
        n0,
        best_u: window.u,
        best_v: window.v,
        best_count: window.count,
        degenerate: set.is_empty(),
        dilated,
    })
}
