//! Configurations attaining the sharp bound.
//!
//! A δ-progression of length `r` centered at `u` is the set of angles
//! `u + (r-1-2j)·δ/2`, `j = 0..r`: `r` points at spacing `δ`, symmetric
//! about `u`. The extremal configuration for `(n, N, δ, φ)` with
//! `N = κn + r` is the union of
//!
//! * `κ+1` progressions of length `r` centered at `(-κ+2j)·φ/2`,
//!   `j = 0..=κ`, and
//! * `κ` progressions of length `n-r` centered at `(-κ+1+2j)·φ/2`,
//!   `j = 0..κ`.
//!
//! Its sum is real, non-negative, and equal to [`bounds::main_bound`].

use std::f64::consts::TAU;

use serde::Serialize;

use crate::bounds::{self, Decomposition, PRECONDITION_SLACK};
use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, Angle, Configuration};

/// `length` points spaced `step` apart, symmetric about `center`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaProgression {
    pub center: Angle,
    pub step: f64,
    pub length: usize,
}

impl DeltaProgression {
    pub fn new(center: f64, step: f64, length: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "progression step {step} must be positive"
            )));
        }
        Ok(Self {
            center: normalize_angle(center)?,
            step,
            length,
        })
    }

    /// Angles from first (`center + (r-1)·δ/2`) to end (`center - (r-1)·δ/2`).
    pub fn angles(&self) -> Vec<Angle> {
        let half = 0.5 * self.step;
        let r = self.length as i64;
        (0..r)
            .map(|j| {
                let theta = self.center.radians() + (r - 1 - 2 * j) as f64 * half;
                normalize_angle(theta).expect("finite by construction")
            })
            .collect()
    }

    pub fn to_configuration(&self) -> Configuration {
        Configuration::new(self.angles())
    }
}

pub fn build_delta_progression(center: f64, delta: f64, length: usize) -> Result<Configuration> {
    Ok(DeltaProgression::new(center, delta, length)?.to_configuration())
}

/// Parameters and cluster layout of the extremal configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalSpec {
    pub n: u64,
    #[serde(rename = "N")]
    pub total: u64,
    pub delta: f64,
    pub phi: f64,
    pub kappa: u64,
    pub r: u64,
    /// `ω = exp(iφ/2)` as `[re, im]`.
    pub half_phi_rotation: [f64; 2],
    /// Centers of the `κ+1` clusters of length `r`.
    pub r_cluster_centers: Vec<f64>,
    /// Centers of the `κ` clusters of length `n-r`.
    pub nr_cluster_centers: Vec<f64>,
    /// Set when `n·δ = φ` or `(κ+1)·φ = 2π` up to slack.
    pub boundary: bool,
}

impl ExtremalSpec {
    /// Requires `N ≥ 1`, `n·δ ≤ φ` and `(κ+1)·φ ≤ 2π`.
    pub fn new(n: u64, total: u64, delta: f64, phi: f64) -> Result<Self> {
        bounds::main_bound(n, total, delta, phi).map_err(|err| match err {
            Error::Inapplicable { reason, .. } => Error::Inapplicable {
                bound: "extremal",
                reason,
            },
            other => other,
        })?;
        let Decomposition { kappa, r } = Decomposition::new(n, total)?;
        let half_phi = 0.5 * phi;
        let kappa_i = kappa as i64;
        let r_cluster_centers = (0..=kappa_i)
            .map(|j| (-kappa_i + 2 * j) as f64 * half_phi)
            .collect();
        let nr_cluster_centers = (0..kappa_i)
            .map(|j| (-kappa_i + 1 + 2 * j) as f64 * half_phi)
            .collect();
        let near = |a: f64, b: f64| (a - b).abs() <= PRECONDITION_SLACK * b.abs().max(1.0);
        let boundary = near(n as f64 * delta, phi) || near((kappa + 1) as f64 * phi, TAU);
        Ok(Self {
            n,
            total,
            delta,
            phi,
            kappa,
            r,
            half_phi_rotation: [half_phi.cos(), half_phi.sin()],
            r_cluster_centers,
            nr_cluster_centers,
            boundary,
        })
    }

    /// Each angle is formed once as `a·(φ/2) + b·(δ/2)` from integer
    /// coefficients, so the spacing inside a cluster carries no accumulated
    /// round-off.
    pub fn build(&self) -> Configuration {
        let half_phi = 0.5 * self.phi;
        let half_delta = 0.5 * self.delta;
        let kappa = self.kappa as i64;
        let mut angles = Vec::with_capacity(self.total as usize);
        let mut push_cluster = |center_coeff: i64, length: i64| {
            for j in 0..length {
                let theta = center_coeff as f64 * half_phi + (length - 1 - 2 * j) as f64 * half_delta;
                angles.push(normalize_angle(theta).expect("finite by construction"));
            }
        };
        for j in 0..=kappa {
            push_cluster(-kappa + 2 * j, self.r as i64);
        }
        for j in 0..kappa {
            push_cluster(-kappa + 1 + 2 * j, (self.n - self.r) as i64);
        }
        Configuration::new(angles)
    }
}

/// The extremal configuration for `(n, N, δ, φ)`.
pub fn build_extremal(n: u64, total: u64, delta: f64, phi: f64) -> Result<Configuration> {
    Ok(ExtremalSpec::new(n, total, delta, phi)?.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn delta_progression_examples() {
        assert!(build_delta_progression(0.0, 0.3, 0).unwrap().is_empty());

        let two = build_delta_progression(0.0, 0.2, 2).unwrap();
        let r = two.radians();
        assert!((r[0] + 0.1).abs() < 1e-15 && (r[1] - 0.1).abs() < 1e-15);
        let expected = bounds::dkr(2, 0.2).unwrap();
        assert!((two.sum().norm() - expected).abs() < 1e-14);
        assert!((two.sum().norm() - 2.0 * 0.1f64.cos()).abs() < 1e-14);

        let one = build_delta_progression(FRAC_PI_2, 0.4, 1).unwrap();
        assert_eq!(one.radians(), vec![FRAC_PI_2]);

        assert!(build_delta_progression(0.0, 0.0, 3).is_err());
    }

    #[test]
    fn progression_sum_points_at_center() {
        let p = build_delta_progression(1.2, 0.3, 5).unwrap();
        let s = p.sum();
        assert!((s.arg() - 1.2).abs() < 1e-12);
        assert!((s.norm() - bounds::dkr(5, 0.3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn extremal_examples() {
        let c = build_extremal(1, 2, 0.5, 2.0).unwrap();
        let r = c.radians();
        assert!((r[0] + 1.0).abs() < 1e-15 && (r[1] - 1.0).abs() < 1e-15);
        assert!((c.sum().norm() - 1.0806046117362795).abs() < 1e-12);

        let spec = ExtremalSpec::new(2, 2, 0.2, PI).unwrap();
        assert_eq!((spec.kappa, spec.r), (0, 2));
        let c = spec.build();
        assert_eq!(c.len(), 2);
        assert!((c.sum().norm() - bounds::dkr(2, 0.2).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn extremal_point_count_and_centers() {
        let spec = ExtremalSpec::new(3, 8, 0.1, 1.5).unwrap();
        assert_eq!((spec.kappa, spec.r), (2, 2));
        assert_eq!(spec.r_cluster_centers, vec![-1.5, 0.0, 1.5]);
        assert_eq!(spec.nr_cluster_centers, vec![-0.75, 0.75]);
        assert_eq!(spec.build().len(), 8);
        assert!(!spec.boundary);
    }

    #[test]
    fn boundary_parameters_are_flagged() {
        assert!(ExtremalSpec::new(2, 3, 0.5, 1.0).unwrap().boundary);
        assert!(ExtremalSpec::new(1, 3, 0.5, TAU / 3.0).unwrap().boundary);
    }

    #[test]
    fn inapplicable_parameters() {
        assert!(matches!(
            build_extremal(2, 3, 0.6, 1.0),
            Err(Error::Inapplicable { bound: "extremal", .. })
        ));
        assert!(build_extremal(2, 0, 0.1, 1.0).is_err());
        assert!(build_extremal(1, 4, 0.1, 2.0).is_err());
    }

    #[test]
    fn sidecar_json_fields() {
        let json = serde_json::to_value(ExtremalSpec::new(3, 8, 0.1, 1.5).unwrap()).unwrap();
        for key in ["n", "N", "delta", "phi", "kappa", "r", "r_cluster_centers", "nr_cluster_centers"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
    }
}
