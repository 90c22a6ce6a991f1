//! The angle schedule `A_n = ½·arcsin((2q−1)^n)`, the regions it cuts
//! `θ ∈ [0, π/2]` into, and the channel and ancilla assigned to each region.
//!
//! Region `n` of the lower half is `[π/4 − A_n, π/4 − A_{n+1}]`, region `n` of
//! the upper half is `[π/4 + A_{n+1}, π/4 + A_n]`. With a finite depth `N`
//! the open interval `(π/4 − A_N, π/4 + A_N)` stays uncovered.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{PureState, EXACT_TOL};

/// Rejects `q` outside the open interval `(½, 1)`.
pub fn check_q(q: f64) -> Result<()> {
    if q > 0.5 && q < 1.0 {
        Ok(())
    } else {
        Err(Error::domain("q", q, "0.5 < q < 1"))
    }
}

/// `A_n = ½·arcsin((2q−1)^n)`
pub fn schedule_value(q: f64, n: usize) -> Result<f64> {
    check_q(q)?;
    Ok(angle(q, n))
}

fn angle(q: f64, n: usize) -> f64 {
    0.5 * (2.0 * q - 1.0).powi(n as i32).asin()
}

/// `C_n = tan(π/4 − A_n)`, the Schmidt ratio of the lower-half channel whose
/// region ends at `π/4 − A_n`.
pub fn channel_coefficient(q: f64, n: usize) -> Result<f64> {
    check_q(q)?;
    Ok((FRAC_PI_4 - angle(q, n)).tan())
}

/// Smallest depth `N` with `A_N ≤ half_width`.
pub fn min_depth_for_gap(q: f64, half_width: f64) -> Result<usize> {
    check_q(q)?;
    if !(half_width > 0.0) {
        return Err(Error::domain("half_width", half_width, "half_width > 0"));
    }
    if half_width >= FRAC_PI_4 {
        return Ok(0);
    }
    let r = 2.0 * q - 1.0;
    let estimate = ((2.0 * half_width).sin().ln() / r.ln()).ceil().max(0.0) as usize;
    let mut n = estimate.saturating_sub(1);
    while angle(q, n) > half_width {
        n += 1;
    }
    Ok(n)
}

/// The prefix `A_0, …, A_depth` of the schedule for one value of `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    q: f64,
    values: Vec<f64>,
}

impl Schedule {
    pub fn new(q: f64, depth: usize) -> Result<Self> {
        check_q(q)?;
        if depth == 0 {
            return Err(Error::domain("depth", 0.0, "depth >= 1"));
        }
        let values = (0..=depth).map(|n| angle(q, n)).collect();
        Ok(Self { q, values })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn depth(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `A_n` for `n ≤ depth`.
    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// Half-width `A_depth` of the uncovered central interval.
    pub fn gap_half_width(&self) -> f64 {
        self.values[self.depth()]
    }

    pub fn in_central_gap(&self, theta: f64) -> bool {
        let w = self.gap_half_width();
        theta > FRAC_PI_4 - w && theta < FRAC_PI_4 + w
    }

    pub fn interval(&self, region: RegionIndex) -> (f64, f64) {
        let (outer, inner) = (self.values[region.n], self.values[region.n + 1]);
        match region.half {
            Half::Lower => (FRAC_PI_4 - outer, FRAC_PI_4 - inner),
            Half::Upper => (FRAC_PI_4 + inner, FRAC_PI_4 + outer),
        }
    }

    /// Region containing `theta`; on a shared boundary the smaller `n` wins.
    pub fn locate(&self, theta: f64) -> Result<RegionIndex> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::domain("theta", theta, "0 <= theta <= pi/2"));
        }
        if self.in_central_gap(theta) {
            let w = self.gap_half_width();
            return Err(Error::CentralGap {
                theta,
                lower: FRAC_PI_4 - w,
                upper: FRAC_PI_4 + w,
                depth: self.depth(),
            });
        }
        let inner = &self.values[1..];
        let (half, n) = if theta <= FRAC_PI_4 {
            (Half::Lower, inner.partition_point(|&a| FRAC_PI_4 - a < theta))
        } else {
            (Half::Upper, inner.partition_point(|&a| FRAC_PI_4 + a > theta))
        };
        debug_assert!(n < self.depth());
        Ok(RegionIndex { half, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Half {
    /// `θ ≤ π/4`
    Lower,
    /// `θ ≥ π/4`
    Upper,
}

impl fmt::Display for Half {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Half::Lower => "lower",
            Half::Upper => "upper",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RegionIndex {
    pub half: Half,
    pub n: usize,
}

pub fn locate_region(theta: f64, q: f64, depth: usize) -> Result<RegionIndex> {
    Schedule::new(q, depth)?.locate(theta)
}

/// The shared state `(|00⟩ + t|11⟩)/√(1+t²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelState {
    t: f64,
}

impl ChannelState {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::domain("t", t, "t > 0"));
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn as_state(&self) -> PureState {
        PureState::from_real(&[1.0, 0.0, 0.0, self.t]).expect("nonzero channel")
    }

    /// The channel obtained by flipping both qubits, `|00⟩ + (1/t)|11⟩`.
    pub fn mirrored(&self) -> Self {
        Self { t: 1.0 / self.t }
    }
}

/// Lower half: `t = tan(π/4 − A_{n+1})`; upper half: `t = tan(π/4 + A_{n+1})`.
pub fn channel_for_region(region: RegionIndex, q: f64) -> Result<ChannelState> {
    check_q(q)?;
    let a = angle(q, region.n + 1);
    let t = match region.half {
        Half::Lower => (FRAC_PI_4 - a).tan(),
        Half::Upper => (FRAC_PI_4 + a).tan(),
    };
    ChannelState::new(t)
}

/// Receiver's ancilla `|0⟩ + y|1⟩` with `y = a + i·√radicand`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AncillaParam {
    pub a: f64,
    pub y: Complex64,
}

impl AncillaParam {
    pub fn state(&self) -> PureState {
        PureState::new(vec![Complex64::new(1.0, 0.0), self.y]).expect("nonzero ancilla")
    }
}

/// Picks the ancilla that cancels the off-diagonal part of the receiver's state.
///
/// With `K = ±cot(2A_{n+1})/tan(2θ)` (sign `+` in the lower half) the
/// constraint is `|y|² + 1 = 2aK`; `a = K` maximizes the radicand `K² − 1`,
/// which is nonnegative everywhere in the region. At `θ ∈ {0, π/2}` the
/// off-diagonal term is proportional to `Re y` alone and `y = i` is used.
pub fn ancilla_param(theta: f64, region: RegionIndex, q: f64) -> Result<AncillaParam> {
    let schedule = Schedule::new(q, region.n + 1)?;
    let (lo, hi) = schedule.interval(region);
    if theta < lo - EXACT_TOL || theta > hi + EXACT_TOL {
        return Err(Error::domain("theta", theta, "theta inside the given region"));
    }
    if theta == 0.0 || theta == FRAC_PI_2 {
        return Ok(AncillaParam {
            a: 0.0,
            y: Complex64::new(0.0, 1.0),
        });
    }
    let two_a = 2.0 * schedule.get(region.n + 1);
    let (s2, c2) = (2.0 * theta).sin_cos();
    let sign = match region.half {
        Half::Lower => 1.0,
        Half::Upper => -1.0,
    };
    let k = sign * c2 / (two_a.tan() * s2);
    let a = k;
    let radicand = 2.0 * a * k - a * a - 1.0;
    if radicand < -EXACT_TOL {
        return Err(Error::Invariant(format!(
            "ancilla radicand {radicand:e} < 0 at theta = {theta}"
        )));
    }
    Ok(AncillaParam {
        a,
        y: Complex64::new(a, radicand.max(0.0).sqrt()),
    })
}
