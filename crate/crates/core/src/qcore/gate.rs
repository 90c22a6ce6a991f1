use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::{check_qubit, PureState, EXACT_TOL, ONE, ZERO};
use crate::error::{Error, Result};

/// A one- or two-qubit unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    matrix: DMatrix<Complex64>,
}

impl Gate {
    /// Checks that `matrix` is 2×2 or 4×4 and unitary to within `1e-12`.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || !(matrix.nrows() == 2 || matrix.nrows() == 4) {
            return Err(Error::Operands(format!(
                "gate matrix must be 2x2 or 4x4, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = unitarity_defect(&matrix);
        if defect > EXACT_TOL {
            return Err(Error::Operands(format!(
                "gate matrix is not unitary (max |UU† - I| = {defect:e})"
            )));
        }
        Ok(Self { matrix })
    }

    fn from_rows(rows: &[&[Complex64]]) -> Self {
        let n = rows.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        Self::new(matrix).expect("built-in gate is unitary")
    }

    pub fn arity(&self) -> usize {
        if self.matrix.nrows() == 2 {
            1
        } else {
            2
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn identity() -> Self {
        Self::from_rows(&[&[ONE, ZERO], &[ZERO, ONE]])
    }

    pub fn pauli_x() -> Self {
        Self::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
    }

    /// `diag(1, −1)`
    pub fn pauli_z() -> Self {
        Self::from_rows(&[&[ONE, ZERO], &[ZERO, -ONE]])
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::from_rows(&[&[h, h], &[h, -h]])
    }

    /// Controlled NOT; the first target is the control.
    pub fn cnot() -> Self {
        Self::from_rows(&[
            &[ONE, ZERO, ZERO, ZERO],
            &[ZERO, ONE, ZERO, ZERO],
            &[ZERO, ZERO, ZERO, ONE],
            &[ZERO, ZERO, ONE, ZERO],
        ])
    }

    /// Sender's rotation for the non-maximally entangled channel:
    /// `(1/√2)[[1, e^{iφ}], [e^{−iφ}, −1]]`.
    pub fn phased_hadamard(phi: f64) -> Self {
        let h = FRAC_1_SQRT_2;
        Self::from_rows(&[
            &[Complex64::new(h, 0.0), Complex64::from_polar(h, phi)],
            &[Complex64::from_polar(h, -phi), Complex64::new(-h, 0.0)],
        ])
    }

    /// Sender's rotation on a maximally entangled channel:
    /// `[[cos θ, sin θ e^{iφ}], [sin θ e^{−iφ}, −cos θ]]`.
    pub fn target_reflection(theta: f64, phi: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_rows(&[
            &[Complex64::new(c, 0.0), Complex64::from_polar(s, phi)],
            &[Complex64::from_polar(s, -phi), Complex64::new(-c, 0.0)],
        ])
    }

    /// Real rotation `[[cos θ, −sin θ], [sin θ, cos θ]]`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_rows(&[
            &[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            &[Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    /// `diag(1, e^{iφ})` with an extra sign on the lower entry when `negate` is set.
    pub fn phase(phi: f64, negate: bool) -> Self {
        let sign = if negate { -1.0 } else { 1.0 };
        Self::from_rows(&[&[ONE, ZERO], &[ZERO, Complex64::from_polar(sign, phi)]])
    }

    /// `[[0, 1], [e^{iφ}, 0]]`
    pub fn phased_flip(phi: f64) -> Self {
        Self::from_rows(&[&[ZERO, ONE], &[Complex64::from_polar(1.0, phi), ZERO]])
    }
}

fn unitarity_defect(m: &DMatrix<Complex64>) -> f64 {
    let prod = m * m.adjoint();
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { ONE } else { ZERO };
            worst = worst.max((prod[(i, j)] - expected).norm());
        }
    }
    worst
}

/// Applies a unitary to the listed qubits; `targets[0]` is the gate's most
/// significant qubit (the control, for CNOT).
pub fn apply_gate(state: &PureState, gate: &Gate, targets: &[usize]) -> Result<PureState> {
    if targets.len() != gate.arity() {
        return Err(Error::Operands(format!(
            "gate of arity {} applied to {} targets",
            gate.arity(),
            targets.len()
        )));
    }
    let amps = apply_matrix(state, gate.matrix(), targets)?;
    Ok(PureState::from_normalized_unchecked(state.num_qubits(), amps))
}

/// Applies an arbitrary (not necessarily unitary) matrix to the target qubits
/// and returns the raw, unnormalized amplitudes.
pub(crate) fn apply_matrix(
    state: &PureState,
    matrix: &DMatrix<Complex64>,
    targets: &[usize],
) -> Result<Vec<Complex64>> {
    let n = state.num_qubits();
    let k = targets.len();
    if matrix.nrows() != 1 << k {
        return Err(Error::Operands(format!(
            "{}x{} matrix on {k} targets",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    for (i, &t) in targets.iter().enumerate() {
        check_qubit(t, n)?;
        if targets[..i].contains(&t) {
            return Err(Error::Operands(format!("repeated target qubit {t}")));
        }
    }
    let shifts: Vec<usize> = targets.iter().map(|&t| n - 1 - t).collect();
    let sub_index = |idx: usize| {
        shifts
            .iter()
            .fold(0usize, |acc, &s| (acc << 1) | ((idx >> s) & 1))
    };
    let with_sub_index = |idx: usize, sub: usize| {
        shifts.iter().enumerate().fold(idx, |acc, (j, &s)| {
            let bit = (sub >> (k - 1 - j)) & 1;
            (acc & !(1 << s)) | (bit << s)
        })
    };
    let amps = state.amplitudes();
    let out = (0..amps.len())
        .map(|idx| {
            let row = sub_index(idx);
            (0..1 << k)
                .map(|col| matrix[(row, col)] * amps[with_sub_index(idx, col)])
                .sum()
        })
        .collect();
    Ok(out)
}
