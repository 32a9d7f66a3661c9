//! Closed-form upper bounds for `|z_1 + ... + z_N|`.
//!
//! Every bound is a sum of products of the Dirichlet-kernel ratio
//! [`dkr`]`(t, θ) = sin(tθ/2) / sin(θ/2)`, the modulus of a `t`-term
//! geometric sum on the circle with angular step `θ`.
//!
//! The parameters are shared across the module:
//!
//! * `n`: the most points any open arc of length `φ` may contain,
//! * `total` (the `N` of the literature): the number of points,
//! * `delta`: the minimum separation, every open arc of length `δ` holds at
//!   most one point,
//! * `phi`: the arc length in the density condition.
//!
//! Each bound checks its own hypotheses and returns
//! [`Error::Inapplicable`] instead of extrapolating outside them.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{inapplicable, Error, Result};

/// Relative slack admitted on precondition comparisons such as `n·δ ≤ φ`.
pub const PRECONDITION_SLACK: f64 = 1e-12;

/// Below this step [`dkr`] returns its `θ → 0` limit `t`.
pub const DKR_SMALL_ANGLE: f64 = 1e-9;

/// Largest number of `k` values reported for the corollary family.
pub const COROLLARY_REPORT_CAP: u64 = 16;

/// `a ≤ b` up to [`PRECONDITION_SLACK`] relative slack.
pub(crate) fn le_slack(a: f64, b: f64) -> bool {
    a <= b + PRECONDITION_SLACK * b.abs().max(a.abs()).max(1.0)
}

/// `floor(x)` that snaps values within slack of an integer upward first.
fn floor_slack(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= PRECONDITION_SLACK * x.abs().max(1.0) {
        r.max(0.0) as u64
    } else {
        x.floor().max(0.0) as u64
    }
}

/// Dirichlet-kernel ratio `sin(tθ/2) / sin(θ/2)`.
///
/// Negative `t` is evaluated as written (the ratio is odd in `t`). For
/// `θ < 1e-9` the limit value `t` is returned.
pub fn dkr(t: i64, theta: f64) -> Result<f64> {
    if !(theta.is_finite() && theta > 0.0 && theta < TAU) {
        return Err(Error::InvalidParameter(format!(
            "Dirichlet ratio step {theta} is outside (0, 2π)"
        )));
    }
    if t == 0 {
        return Ok(0.0);
    }
    if theta < DKR_SMALL_ANGLE {
        return Ok(t as f64);
    }
    let half = 0.5 * theta;
    Ok((t as f64 * half).sin() / half.sin())
}

/// The decomposition `N = κ·n + r` with `1 ≤ r ≤ n`.
///
/// Unlike the usual remainder, `r = n` (not 0) when `n` divides `N`, so that
/// `κ = ⌈N/n⌉ - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub kappa: u64,
    pub r: u64,
}

impl Decomposition {
    pub fn new(n: u64, total: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive".into()));
        }
        if total == 0 {
            return Err(Error::InvalidParameter(
                "N = κn + r with 1 ≤ r ≤ n needs N ≥ 1".into(),
            ));
        }
        let kappa = total.div_ceil(n) - 1;
        Ok(Self {
            kappa,
            r: total - kappa * n,
        })
    }
}

fn check_step(bound: &'static str, name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 && value <= PI {
        Ok(())
    } else {
        inapplicable(bound, format!("{name} = {value} is outside (0, π]"))
    }
}

fn check_n(bound: &'static str, n: u64) -> Result<()> {
    if n == 0 {
        inapplicable(bound, "n must be positive")
    } else {
        Ok(())
    }
}

/// `2n - N`, valid when every open semicircle holds at most `n` points.
pub fn freiman_bound(n: u64, total: u64) -> Result<f64> {
    const NAME: &str = "freiman";
    check_n(NAME, n)?;
    if total > 2 * n {
        return inapplicable(NAME, format!("N = {total} exceeds 2n = {}", 2 * n));
    }
    Ok((2 * n - total) as f64)
}

/// `dkr(2n - N, δ)`: the semicircle bound for points separated by `δ`.
pub fn lev_bound(n: u64, total: u64, delta: f64) -> Result<f64> {
    const NAME: &str = "lev";
    check_n(NAME, n)?;
    check_step(NAME, "δ", delta)?;
    if !le_slack(n as f64 * delta, PI) {
        return inapplicable(NAME, format!("n·δ = {} exceeds π", n as f64 * delta));
    }
    if total > 2 * n {
        return inapplicable(NAME, format!("N = {total} exceeds 2n = {}", 2 * n));
    }
    dkr((2 * n - total) as i64, delta)
}

/// `dkr(N, δ)`: the sum of an `N`-term progression with step `δ`, the
/// maximum under the separation condition alone.
pub fn spacing_bound(total: u64, delta: f64) -> Result<f64> {
    check_step("spacing", "δ", delta)?;
    dkr(total as i64, delta)
}

fn check_density(bound: &'static str, n: u64, delta: f64, phi: f64) -> Result<()> {
    check_n(bound, n)?;
    check_step(bound, "δ", delta)?;
    check_step(bound, "φ", phi)?;
    if !le_slack(n as f64 * delta, phi) {
        return inapplicable(
            bound,
            format!("n·δ = {} exceeds φ = {phi}", n as f64 * delta),
        );
    }
    Ok(())
}

/// The sharp bound
/// `dkr(r, δ)·dkr(κ+1, φ) + dkr(n-r, δ)·dkr(κ, φ)` with `N = κn + r`.
///
/// Requires `n·δ ≤ φ` and `(κ+1)·φ ≤ 2π`.
pub fn main_bound(n: u64, total: u64, delta: f64, phi: f64) -> Result<f64> {
    const NAME: &str = "main";
    check_density(NAME, n, delta, phi)?;
    if total == 0 {
        return inapplicable(NAME, "needs N ≥ 1");
    }
    let Decomposition { kappa, r } = Decomposition::new(n, total)?;
    if !le_slack((kappa + 1) as f64 * phi, TAU) {
        return inapplicable(
            NAME,
            format!("(κ+1)·φ = {} exceeds 2π", (kappa + 1) as f64 * phi),
        );
    }
    Ok(dkr(r as i64, delta)? * dkr(kappa as i64 + 1, phi)?
        + dkr((n - r) as i64, delta)? * dkr(kappa as i64, phi)?)
}

/// `L_k`, the bound family indexed by `1 ≤ k ≤ 2π/φ`:
/// `dkr(N-(k-1)n, δ)·dkr(k, φ) + dkr(kn-N, δ)·dkr(k-1, φ)`.
///
/// Negative first arguments are evaluated as written. The minimum over `k`
/// sits at `k = ⌈N/n⌉`, where `L_k` coincides with [`main_bound`].
pub fn alt_bound(n: u64, total: u64, delta: f64, phi: f64, k: u64) -> Result<f64> {
    const NAME: &str = "alt";
    check_density(NAME, n, delta, phi)?;
    check_k_range(NAME, phi, k)?;
    let (n, total, k) = (n as i64, total as i64, k as i64);
    Ok(dkr(total - (k - 1) * n, delta)? * dkr(k, phi)? + dkr(k * n - total, delta)? * dkr(k - 1, phi)?)
}

fn check_k_range(bound: &'static str, phi: f64, k: u64) -> Result<()> {
    if k == 0 || !le_slack(k as f64 * phi, TAU) {
        return inapplicable(bound, format!("k = {k} is outside [1, 2π/φ]"));
    }
    Ok(())
}

/// Largest `k` with `k·φ ≤ 2π` (with slack).
pub fn max_k(phi: f64) -> u64 {
    floor_slack(TAU / phi)
}

/// Closed form of `L_{k+1} - L_k`:
/// `2·dkr(kn-N, δ)·dkr(k, φ)·(cos(nδ/2) - cos(φ/2))`.
pub fn lk_difference(n: u64, total: u64, delta: f64, phi: f64, k: u64) -> Result<f64> {
    const NAME: &str = "alt";
    check_density(NAME, n, delta, phi)?;
    check_k_range(NAME, phi, k)?;
    check_k_range(NAME, phi, k + 1)?;
    let (ni, ti, ki) = (n as i64, total as i64, k as i64);
    let cos_gap = (0.5 * n as f64 * delta).cos() - (0.5 * phi).cos();
    Ok(2.0 * dkr(ki * ni - ti, delta)? * dkr(ki, phi)? * cos_gap)
}

/// `dkr(n, δ)·sin(φN/(2n)) / sin(φ/2)`, a smooth relaxation of
/// [`main_bound`].
pub fn smooth_bound(n: u64, total: u64, delta: f64, phi: f64) -> Result<f64> {
    const NAME: &str = "smooth";
    check_density(NAME, n, delta, phi)?;
    let arg = phi * total as f64 / (2.0 * n as f64);
    if !le_slack(arg, PI) {
        return inapplicable(NAME, format!("φN/(2n) = {arg} exceeds π"));
    }
    Ok(dkr(n as i64, delta)? * arg.sin() / (0.5 * phi).sin())
}

/// `dkr(kn - N, δ)` for points with at most `n` in any open arc of length
/// `2π/k`, `k ≥ 2`.
pub fn corollary_bound(n: u64, total: u64, delta: f64, k: u64) -> Result<f64> {
    const NAME: &str = "corollary";
    check_n(NAME, n)?;
    check_step(NAME, "δ", delta)?;
    if k < 2 {
        return inapplicable(NAME, format!("k = {k} must be at least 2"));
    }
    if !le_slack(n as f64 * delta, TAU / k as f64) {
        return inapplicable(
            NAME,
            format!("n·δ = {} exceeds 2π/k", n as f64 * delta),
        );
    }
    if total > k * n {
        return inapplicable(NAME, format!("N = {total} exceeds kn = {}", k * n));
    }
    dkr((k * n - total) as i64, delta)
}

/// Either a bound's value or the reason its hypotheses fail.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundValue {
    Value(f64),
    Inapplicable(String),
}

impl BoundValue {
    pub fn value(&self) -> Option<f64> {
        match self {
            BoundValue::Value(v) => Some(*v),
            BoundValue::Inapplicable(_) => None,
        }
    }

    pub fn is_applicable(&self) -> bool {
        matches!(self, BoundValue::Value(_))
    }
}

impl From<Result<f64>> for BoundValue {
    fn from(result: Result<f64>) -> Self {
        match result {
            Ok(v) => BoundValue::Value(v),
            Err(Error::Inapplicable { reason, .. }) => BoundValue::Inapplicable(reason),
            Err(other) => BoundValue::Inapplicable(other.to_string()),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        match self {
            BoundValue::Value(v) => map.serialize_entry("value", v)?,
            BoundValue::Inapplicable(reason) => map.serialize_entry("inapplicable", reason)?,
        }
        map.end()
    }
}

/// Every bound evaluated for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    #[serde(rename = "N")]
    pub total: u64,
    pub delta: f64,
    pub phi: f64,
    pub freiman: BoundValue,
    pub lev: BoundValue,
    pub spacing: BoundValue,
    pub main: BoundValue,
    pub smooth: BoundValue,
    /// `L_k` for `k = 1..=⌊2π/φ⌋`.
    pub lk: BTreeMap<u64, BoundValue>,
    /// The corollary for the `k` whose arcs `2π/k` are no longer than `φ`,
    /// so that the density condition at `φ` implies the corollary's.
    pub corollary: BTreeMap<u64, BoundValue>,
}

impl BoundReport {
    /// All applicable bounds as `(name, value)` pairs, `L_k` entries named
    /// `lk_<k>` and corollary entries `corollary_<k>`.
    pub fn applicable(&self) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        for (name, value) in [
            ("freiman", &self.freiman),
            ("lev", &self.lev),
            ("spacing", &self.spacing),
            ("main", &self.main),
            ("smooth", &self.smooth),
        ] {
            if let Some(v) = value.value() {
                out.push((name.to_string(), v));
            }
        }
        for (k, value) in &self.lk {
            if let Some(v) = value.value() {
                out.push((format!("lk_{k}"), v));
            }
        }
        for (k, value) in &self.corollary {
            if let Some(v) = value.value() {
                out.push((format!("corollary_{k}"), v));
            }
        }
        out
    }

    /// The `k` minimizing the applicable `L_k` (smallest `k` on exact ties).
    pub fn lk_argmin(&self) -> Option<u64> {
        self.lk
            .iter()
            .filter_map(|(&k, v)| v.value().map(|v| (k, v)))
            .fold(None, |best: Option<(u64, f64)>, (k, v)| match best {
                Some((_, bv)) if bv <= v => best,
                _ => Some((k, v)),
            })
            .map(|(k, _)| k)
    }

    /// CSV rows `n,N,delta,phi,bound_name,value` for the applicable bounds.
    pub fn csv_rows(&self) -> String {
        let mut out = String::new();
        for (name, value) in self.applicable() {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                self.n, self.total, self.delta, self.phi, name, value
            )
            .unwrap();
        }
        out
    }
}

/// Header matching [`BoundReport::csv_rows`].
pub const CSV_HEADER: &str = "n,N,delta,phi,bound_name,value";

/// Evaluates every bound; inapplicable ones carry the reason.
pub fn evaluate_all(n: u64, total: u64, delta: f64, phi: f64) -> BoundReport {
    let mut lk = BTreeMap::new();
    if check_density("alt", n, delta, phi).is_ok() {
        for k in 1..=max_k(phi) {
            lk.insert(k, alt_bound(n, total, delta, phi, k).into());
        }
    }
    BoundReport {
        n,
        total,
        delta,
        phi,
        freiman: freiman_bound(n, total).into(),
        lev: lev_bound(n, total, delta).into(),
        spacing: spacing_bound(total, delta).into(),
        main: main_bound(n, total, delta, phi).into(),
        smooth: smooth_bound(n, total, delta, phi).into(),
        lk,
        corollary: corollary_family(n, total, delta, phi),
    }
}

/// Corollary values for `k` from the smallest admissible value upward, at
/// most [`COROLLARY_REPORT_CAP`] entries.
pub(crate) fn corollary_family(n: u64, total: u64, delta: f64, phi: f64) -> BTreeMap<u64, BoundValue> {
    let mut out = BTreeMap::new();
    if n == 0 || !(phi.is_finite() && phi > 0.0) {
        return out;
    }
    // 2π/k ≤ φ  ⇔  k ≥ 2π/φ
    let by_arc = {
        let x = TAU / phi;
        let r = x.round();
        if (x - r).abs() <= PRECONDITION_SLACK * x.max(1.0) {
            r as u64
        } else {
            x.ceil() as u64
        }
    };
    let lo = by_arc.max(2).max(total.div_ceil(n));
    for k in lo..lo + COROLLARY_REPORT_CAP {
        match corollary_bound(n, total, delta, k) {
            Ok(v) => {
                out.insert(k, BoundValue::Value(v));
            }
            Err(err) => {
                // k ≥ N/n here, so only n·δ ≤ 2π/k can fail, and then it
                // fails for every larger k too
                if out.is_empty() {
                    out.insert(k, Err(err).into());
                }
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn dkr_examples() {
        for theta in [0.1, 1.0, PI, 6.0] {
            assert_eq!(dkr(1, theta).unwrap(), 1.0);
            assert_eq!(dkr(0, theta).unwrap(), 0.0);
        }
        assert!(close(dkr(2, PI / 3.0).unwrap(), 3f64.sqrt(), 1e-15));
        assert_eq!(dkr(5, 1e-10).unwrap(), 5.0);
        assert!(close(dkr(-3, 0.4).unwrap(), -dkr(3, 0.4).unwrap(), 0.0));
        assert!(dkr(1, 0.0).is_err());
        assert!(dkr(1, TAU).is_err());
        assert!(dkr(1, f64::NAN).is_err());
    }

    #[test]
    fn decomposition_uses_r_equal_n_on_divisibility() {
        assert_eq!(Decomposition::new(3, 6).unwrap(), Decomposition { kappa: 1, r: 3 });
        assert_eq!(Decomposition::new(3, 7).unwrap(), Decomposition { kappa: 2, r: 1 });
        assert_eq!(Decomposition::new(5, 3).unwrap(), Decomposition { kappa: 0, r: 3 });
        assert!(Decomposition::new(0, 3).is_err());
        assert!(Decomposition::new(3, 0).is_err());
    }

    #[test]
    fn freiman_examples() {
        assert_eq!(freiman_bound(3, 5).unwrap(), 1.0);
        assert_eq!(freiman_bound(4, 8).unwrap(), 0.0);
        assert_eq!(freiman_bound(4, 4).unwrap(), 4.0);
        assert!(matches!(freiman_bound(3, 7), Err(Error::Inapplicable { bound: "freiman", .. })));
    }

    #[test]
    fn lev_examples() {
        assert!(close(lev_bound(2, 3, PI / 2.0).unwrap(), 1.0, 1e-15));
        assert!(close(lev_bound(2, 2, PI / 2.0).unwrap(), 2f64.sqrt(), 1e-15));
        assert!(close(lev_bound(3, 4, 1e-9).unwrap(), 2.0, 1e-6));
        assert!(lev_bound(3, 4, 1.5).is_err());
        assert!(lev_bound(2, 5, 0.1).is_err());
    }

    #[test]
    fn spacing_examples() {
        assert!(close(spacing_bound(1, 0.7).unwrap(), 1.0, 1e-15));
        assert!(close(spacing_bound(4, PI / 2.0).unwrap(), 0.0, 1e-15));
        assert!(close(spacing_bound(3, PI / 2.0).unwrap(), 1.0, 1e-15));
    }

    #[test]
    fn main_examples() {
        assert!(close(main_bound(2, 3, 0.2, PI).unwrap(), 1.0, 1e-12));
        assert!(close(main_bound(1, 2, 0.5, 2.0).unwrap(), 1.0806046117362795, 1e-12));
        assert!(close(main_bound(1, 2, 0.5, 2.0).unwrap(), 2.0 * 1f64.cos(), 1e-12));
        assert!(close(main_bound(5, 3, 0.1, 1.0).unwrap(), 2.990008330556052, 1e-12));
        assert_eq!(
            main_bound(5, 3, 0.1, 1.0).unwrap(),
            spacing_bound(3, 0.1).unwrap()
        );
    }

    #[test]
    fn main_preconditions() {
        // n·δ > φ
        assert!(main_bound(3, 4, 0.5, 1.0).is_err());
        // (κ+1)φ > 2π: N = 7, n = 2 gives κ = 3, 4·2 > 2π
        assert!(main_bound(2, 7, 0.1, 2.0).is_err());
        assert!(main_bound(2, 0, 0.1, 2.0).is_err());
        // exact boundary (κ+1)φ = 2π is admitted
        assert!(main_bound(2, 6, 0.1, TAU / 3.0).is_ok());
    }

    #[test]
    fn alt_examples() {
        let l2 = alt_bound(2, 3, 0.2, PI, 2).unwrap();
        assert!(close(l2, 1.0, 1e-12));
        assert!(close(l2, main_bound(2, 3, 0.2, PI).unwrap(), 1e-12));
        let l1 = alt_bound(2, 3, 0.2, 1.0, 1).unwrap();
        assert!(close(l1, 2.9601331556824833, 1e-12));
        // n | N: k = N/n and N/n + 1 tie
        let a = alt_bound(2, 4, 0.2, 1.0, 2).unwrap();
        let b = alt_bound(2, 4, 0.2, 1.0, 3).unwrap();
        assert!(close(a, b, 1e-12));
        assert!(alt_bound(2, 3, 0.2, 1.0, 0).is_err());
        assert!(alt_bound(2, 3, 0.2, 1.0, 7).is_err());
    }

    #[test]
    fn lk_difference_examples() {
        assert_eq!(lk_difference(2, 4, 0.2, 1.0, 2).unwrap(), 0.0);
        assert!(close(lk_difference(2, 3, 0.5, 1.0, 1).unwrap(), 0.0, 1e-15));
        let d = lk_difference(2, 3, 0.2, 1.0, 1).unwrap();
        let fd = alt_bound(2, 3, 0.2, 1.0, 2).unwrap() - alt_bound(2, 3, 0.2, 1.0, 1).unwrap();
        assert!(close(d, fd, 1e-12 * 3.0));
        assert!(lk_difference(2, 3, 0.2, 1.0, 6).is_err());
    }

    #[test]
    fn smooth_examples() {
        assert!(close(smooth_bound(2, 3, 0.2, 1.0).unwrap(), 2.8293558, 1e-5));
        let s = smooth_bound(3, 3, 0.2, 1.0).unwrap();
        assert!(close(s, dkr(3, 0.2).unwrap(), 1e-12));
        assert!(smooth_bound(1, 10, 0.1, 1.0).is_err());
    }

    #[test]
    fn corollary_examples() {
        assert_eq!(corollary_bound(3, 9, 0.1, 3).unwrap(), 0.0);
        assert!(close(corollary_bound(1, 2, PI / 6.0, 4).unwrap(), 1.9318516525781366, 1e-12));
        for (n, total, delta) in [(2, 3, 0.2), (4, 5, 0.7), (1, 2, 3.0)] {
            assert_eq!(
                corollary_bound(n, total, delta, 2).unwrap(),
                lev_bound(n, total, delta).unwrap()
            );
        }
        assert!(corollary_bound(1, 2, 0.1, 1).is_err());
        assert!(corollary_bound(1, 5, 0.1, 4).is_err());
    }

    #[test]
    fn evaluate_all_examples() {
        let report = evaluate_all(2, 3, 0.2, PI);
        assert_eq!(report.freiman, BoundValue::Value(1.0));
        assert!(close(report.lev.value().unwrap(), 1.0, 1e-12));
        assert!(close(report.main.value().unwrap(), 1.0, 1e-12));
        assert!(close(
            report.spacing.value().unwrap(),
            0.3f64.sin() / 0.1f64.sin(),
            1e-12
        ));
        assert!(report.corollary.contains_key(&2));

        let report = evaluate_all(3, 7, 0.1, PI);
        assert!(!report.freiman.is_applicable());

        let report = evaluate_all(2, 3, 0.2, 1.0);
        assert_eq!(report.lk.keys().copied().collect::<Vec<_>>(), (1..=6).collect::<Vec<_>>());
        assert_eq!(report.lk_argmin(), Some(2));
    }

    #[test]
    fn report_json_shape() {
        let json = serde_json::to_value(evaluate_all(3, 7, 0.1, PI)).unwrap();
        assert!(json["freiman"]["inapplicable"].is_string());
        assert!(json["spacing"]["value"].is_number());
        assert_eq!(json["N"], 7);
    }

    #[test]
    fn csv_rows_have_six_columns() {
        let rows = evaluate_all(2, 3, 0.2, 1.0).csv_rows();
        assert!(rows.lines().count() > 5);
        for line in rows.lines() {
            assert_eq!(line.split(',').count(), 6);
        }
    }
}
