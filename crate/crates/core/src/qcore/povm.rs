use nalgebra::DMatrix;
use num_complex::Complex64;

use super::gate::apply_matrix;
use super::measure::NULL_BRANCH_TOL;
use super::state::{PureState, EXACT_TOL, ONE, ZERO};
use crate::error::{Error, Result};

/// A single-qubit measurement operator `M` with `0 ≤ M†M ≤ I`.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmElement {
    matrix: DMatrix<Complex64>,
}

impl PovmElement {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.shape() != (2, 2) {
            return Err(Error::Operands(format!(
                "POVM element must be 2x2, got {:?}",
                matrix.shape()
            )));
        }
        let effect = matrix.adjoint() * &matrix;
        let eig = effect.symmetric_eigenvalues();
        if eig.iter().any(|&e| !(-EXACT_TOL..=1.0 + EXACT_TOL).contains(&e)) {
            return Err(Error::Operands(format!(
                "POVM element has M†M eigenvalues {:?} outside [0, 1]",
                eig.as_slice()
            )));
        }
        Ok(Self { matrix })
    }

    /// `diag(d0, d1)` with real entries.
    pub fn diagonal(d0: f64, d1: f64) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(
            2,
            2,
            &[Complex64::new(d0, 0.0), ZERO, ZERO, Complex64::new(d1, 0.0)],
        ))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `M†M`
    pub fn effect(&self) -> DMatrix<Complex64> {
        self.matrix.adjoint() * &self.matrix
    }
}

/// A two-outcome measurement `{M₀, M₁}`; outcome 0 is the one the protocols want.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmPair {
    pub success: PovmElement,
    pub failure: PovmElement,
}

impl PovmPair {
    /// Completes a diagonal success element with `M₁ = √(I − M₀²)`.
    fn from_diagonal_success(d0: f64, d1: f64) -> Result<Self> {
        let complement = |d: f64| {
            let r = 1.0 - d * d;
            if r < -EXACT_TOL {
                Err(Error::Operands(format!(
                    "success element entry {d} exceeds 1"
                )))
            } else {
                Ok(r.max(0.0).sqrt())
            }
        };
        Ok(Self {
            success: PovmElement::diagonal(d0, d1)?,
            failure: PovmElement::diagonal(complement(d0)?, complement(d1)?)?,
        })
    }

    /// Local filter on the sender's qubit turning the channel `|00⟩ + b|11⟩`
    /// into `|00⟩ + c|11⟩` with success probability exactly `p`.
    ///
    /// Requires `0 ≤ c ≤ b` and `c² ≥ p·b² + p − 1`.
    pub fn channel_conversion(b: f64, c: f64, p: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::domain("B", b, "B > 0"));
        }
        if !(0.0..=b * (1.0 + EXACT_TOL)).contains(&c) {
            return Err(Error::domain("C", c, "0 <= C <= B"));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain("P", p, "0 < P <= 1"));
        }
        let scale = ((b * b + 1.0) / (c * c + 1.0)).sqrt() * p.sqrt();
        Self::from_diagonal_success(scale, scale * c / b)
    }

    /// `M₀ = diag(1, tan²θ)`, `M₁ = diag(0, √(1 − tan⁴θ))` for `θ ≤ π/4`.
    pub fn lower_half_filter(theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_4 + EXACT_TOL).contains(&theta) {
            return Err(Error::domain("theta", theta, "0 <= theta <= pi/4"));
        }
        let t2 = theta.tan().powi(2).min(1.0);
        Self::from_diagonal_success(1.0, t2)
    }

    /// `M₀′ = diag(cot²θ, 1)`, `M₁′ = diag(√(1 − cot⁴θ), 0)` for `θ ≥ π/4`.
    pub fn upper_half_filter(theta: f64) -> Result<Self> {
        if !(std::f64::consts::FRAC_PI_4 - EXACT_TOL..=std::f64::consts::FRAC_PI_2)
            .contains(&theta)
        {
            return Err(Error::domain("theta", theta, "pi/4 <= theta <= pi/2"));
        }
        let c2 = (1.0 / theta.tan()).powi(2).min(1.0);
        Self::from_diagonal_success(c2, 1.0)
    }

    /// Largest entry of `|M₀†M₀ + M₁†M₁ − I|`.
    pub fn completeness_defect(&self) -> f64 {
        let sum = self.success.effect() + self.failure.effect();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { ONE } else { ZERO };
                worst = worst.max((sum[(i, j)] - expected).norm());
            }
        }
        worst
    }
}

/// Applies one POVM outcome to `qubit`: returns `⟨ψ|M†M|ψ⟩` and `M|ψ⟩` renormalized.
pub fn apply_povm_element(
    state: &PureState,
    element: &PovmElement,
    qubit: usize,
) -> Result<(f64, PureState)> {
    let amps = apply_matrix(state, element.matrix(), &[qubit])?;
    let probability: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if probability < NULL_BRANCH_TOL {
        return Err(Error::DegenerateBranch { probability });
    }
    let post = PureState::new(amps)?;
    Ok((probability, post))
}
