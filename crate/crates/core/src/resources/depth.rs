//! Closed-form channel counts.
//!
//! Every depth below is a ratio of two logarithms, so the base cancels; natural
//! logarithms are used throughout. The returned values are real; round up to
//! get an integer number of channels.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;

use crate::error::{Error, Result};
use crate::schedule::check_q;

/// Depth needed when the central interval is replaced by its edge point and the
/// edge amplitude must match the centre to `1 − 10^−m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccuracyModel {
    m: u32,
}

impl AccuracyModel {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("m", 0.0, "m >= 1"));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn epsilon(&self) -> f64 {
        10f64.powi(-(self.m as i32))
    }

    /// `A_N = π/4 − arcsin((1 − 10^−m)/√2)`
    pub fn gap_half_width(&self) -> f64 {
        FRAC_PI_4 - ((1.0 - self.epsilon()) * FRAC_1_SQRT_2).asin()
    }

    pub fn depth(&self, q: f64) -> Result<f64> {
        check_q(q)?;
        let eps = self.epsilon();
        Ok((2.0 * eps - eps * eps).ln() / (2.0 * q - 1.0).ln())
    }
}

/// `N = log(2·10^−m − 10^−2m) / log(2q − 1)`
pub fn appendix_a_depth(q: f64, m: u32) -> Result<f64> {
    AccuracyModel::new(m)?.depth(q)
}

fn check_open_unit(name: &'static str, value: f64, lo: f64) -> Result<()> {
    if value > lo && value < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(
            name,
            value,
            if lo == 0.0 { "0 < f_min < 1" } else { "0.5 < f_min < 1" },
        ))
    }
}

/// Depth at which the maximally entangled fallback keeps overlap fidelity
/// `≥ f_min`: `N = log(1 − f_min²) / (2·log(2q − 1))`. One extra maximally
/// entangled channel is needed on top of these `N`.
pub fn improved1_depth(q: f64, f_min: f64) -> Result<f64> {
    check_q(q)?;
    check_open_unit("f_min", f_min, 0.0)?;
    Ok((-f_min * f_min).ln_1p() / (2.0 * (2.0 * q - 1.0).ln()))
}

/// `F_min = √(1 − (2q−1)^{2N})`, the inverse of [`improved1_depth`].
pub fn improved1_min_fidelity(q: f64, depth: f64) -> Result<f64> {
    check_q(q)?;
    Ok((1.0 - (2.0 * q - 1.0).powf(2.0 * depth)).sqrt())
}

/// Depth at which the filtered fallback keeps success probability `≥ f_min`:
/// `N = log(1/f_min − 1) / log(2q − 1)`.
pub fn appendix_b_depth(q: f64, f_min: f64) -> Result<f64> {
    check_q(q)?;
    check_open_unit("f_min", f_min, 0.5)?;
    Ok((1.0 / f_min - 1.0).ln() / (2.0 * q - 1.0).ln())
}

/// `1 / ((2q−1)^N + 1)`, the inverse of [`appendix_b_depth`].
pub fn appendix_b_min_success(q: f64, depth: f64) -> Result<f64> {
    check_q(q)?;
    Ok(1.0 / ((2.0 * q - 1.0).powf(depth) + 1.0))
}

/// The three resource formulas, with their fixed second parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResourceKind {
    AppendixA { m: u32 },
    Improved1 { f_min: f64 },
    AppendixB { f_min: f64 },
}

impl ResourceKind {
    pub fn depth(&self, q: f64) -> Result<f64> {
        match *self {
            ResourceKind::AppendixA { m } => appendix_a_depth(q, m),
            ResourceKind::Improved1 { f_min } => improved1_depth(q, f_min),
            ResourceKind::AppendixB { f_min } => appendix_b_depth(q, f_min),
        }
    }

    /// The fallback protocols spend one maximally entangled channel on top of `N`.
    pub fn adds_central_channel(&self) -> bool {
        !matches!(self, ResourceKind::AppendixA { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ResourceKind::AppendixA { .. } => "appendixA",
            ResourceKind::Improved1 { .. } => "improved1",
            ResourceKind::AppendixB { .. } => "appendixB",
        }
    }
}

impl fmt::Display for ResourceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResourceKind::AppendixA { m } => write!(f, "appendixA(m={m})"),
            ResourceKind::Improved1 { f_min } => write!(f, "improved1(f_min={f_min})"),
            ResourceKind::AppendixB { f_min } => write!(f, "appendixB(f_min={f_min})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::schedule_value;
    use approx::assert_abs_diff_eq;

    #[test]
    fn accuracy_model_identity() {
        for m in 1..=8 {
            let model = AccuracyModel::new(m).unwrap();
            let w = model.gap_half_width();
            assert_abs_diff_eq!(
                (FRAC_PI_4 - w).sin() / FRAC_PI_4.sin(),
                1.0 - model.epsilon(),
                epsilon = 1e-12
            );
        }
        assert!(AccuracyModel::new(0).is_err());
    }

    #[test]
    fn real_depth_reaches_the_modelled_gap() {
        // (2q−1)^N = 2ε − ε² is exactly sin(2·A_N) for the modelled gap.
        for &q in &[0.9, 0.95, 0.99] {
            for m in [2, 4] {
                let n = appendix_a_depth(q, m).unwrap();
                let a_n = 0.5 * (2.0 * q - 1.0).powf(n).asin();
                assert_abs_diff_eq!(a_n, AccuracyModel::new(m).unwrap().gap_half_width(), epsilon = 1e-12);
                let ceiled = n.ceil() as usize;
                assert!(schedule_value(q, ceiled).unwrap() <= a_n);
            }
        }
    }

    #[test]
    fn appendix_a_samples() {
        assert_abs_diff_eq!(appendix_a_depth(0.90, 2).unwrap(), 17.55, epsilon = 0.01);
        assert_abs_diff_eq!(appendix_a_depth(0.99, 6).unwrap(), 649.54, epsilon = 0.01);
        assert_abs_diff_eq!(AccuracyModel::new(2).unwrap().gap_half_width(), 9.95066e-3, epsilon = 1e-8);
    }

    #[test]
    fn improved1_samples() {
        assert_abs_diff_eq!(improved1_depth(0.95, 0.99).unwrap() + 1.0, 19.59, epsilon = 0.01);
        assert_abs_diff_eq!(improved1_depth(0.99, 0.9999).unwrap() + 1.0, 211.80, epsilon = 0.01);
        assert!(improved1_depth(0.9, 1e-9).unwrap() < 1e-15);
        assert!(improved1_depth(0.9, 1e-9).unwrap() > 0.0);
    }

    #[test]
    fn appendix_b_samples_and_round_trip() {
        assert_abs_diff_eq!(appendix_b_depth(0.95, 0.97).unwrap() + 1.0, 33.99, epsilon = 0.01);
        assert_abs_diff_eq!(appendix_b_depth(0.99, 0.99).unwrap() + 1.0, 228.45, epsilon = 0.01);
        for &q in &[0.7, 0.9, 0.99] {
            for n in [1.0, 3.5, 7.5] {
                let f = appendix_b_min_success(q, n).unwrap();
                assert_abs_diff_eq!(appendix_b_depth(q, f).unwrap(), n, epsilon = 1e-9);
                let f = improved1_min_fidelity(q, n).unwrap();
                assert_abs_diff_eq!(improved1_depth(q, f).unwrap(), n, epsilon = 1e-6 * n);
            }
        }
    }

    #[test]
    fn domains() {
        assert!(appendix_a_depth(0.5, 2).is_err());
        assert!(appendix_a_depth(1.0, 2).is_err());
        assert!(improved1_depth(0.9, 1.0).is_err());
        assert!(improved1_depth(0.9, 0.0).is_err());
        assert!(appendix_b_depth(0.9, 0.5).is_err());
        assert!(appendix_b_depth(0.9, 0.4).is_err());
    }

    #[test]
    fn fallback_comparison() {
        // For f_min above ≈ 0.5437 (root of f³ + f² + f − 1) the filtered
        // fallback needs more channels than the approximate one.
        for i in 0..=20 {
            let q = 0.55 + 0.44 * i as f64 / 20.0;
            for j in 0..=20 {
                let f = 0.55 + 0.4499 * j as f64 / 20.0;
                assert!(appendix_b_depth(q, f).unwrap() > improved1_depth(q, f).unwrap());
            }
        }
    }
}
