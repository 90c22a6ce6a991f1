use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::{check_qubit, PureState, EXACT_TOL, ZERO};
use crate::error::{Error, Result};

/// A Hermitian, positive semidefinite, unit-trace matrix over one to three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and positivity, then rescales to unit trace.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = entries.nrows();
        let num_qubits = match (dim, entries.ncols()) {
            (2, 2) => 1,
            (4, 4) => 2,
            (8, 8) => 3,
            (r, c) => {
                return Err(Error::Operands(format!(
                    "density matrix must be 2x2, 4x4 or 8x8, got {r}x{c}"
                )))
            }
        };
        let trace = entries.trace();
        if trace.re < 1e-300 || trace.im.abs() > EXACT_TOL * trace.re {
            return Err(Error::Operands(format!("density matrix trace {trace}")));
        }
        let entries = entries.map(|z| z / trace.re);
        let herm = (&entries - entries.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        if herm > EXACT_TOL {
            return Err(Error::Operands(format!(
                "density matrix is not Hermitian (defect {herm:e})"
            )));
        }
        let rho = Self {
            num_qubits,
            entries,
        };
        let min_eig = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -EXACT_TOL {
            return Err(Error::Operands(format!(
                "density matrix has negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(rho)
    }

    pub fn from_pure(state: &PureState) -> Self {
        let v = state.amplitudes();
        let n = v.len();
        Self {
            num_qubits: state.num_qubits(),
            entries: DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()),
        }
    }

    /// Probability-weighted mixture of equally sized density matrices.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Operands("empty mixture".into()))?;
        let dim = first.1.dim();
        let mut acc = DMatrix::from_element(dim, dim, ZERO);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::Operands("mixture of different dimensions".into()));
            }
            acc += rho.entries.map(|z| z * *w);
        }
        Self::new(acc)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace().re
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect()
    }

    /// `⟨bra|ρ|ket⟩`
    pub fn matrix_element(&self, bra: &PureState, ket: &PureState) -> Result<Complex64> {
        if bra.dim() != self.dim() || ket.dim() != self.dim() {
            return Err(Error::Operands(format!(
                "matrix element of {}-qubit operator between {}- and {}-qubit states",
                self.num_qubits,
                bra.num_qubits(),
                ket.num_qubits()
            )));
        }
        let b = bra.amplitudes();
        let k = ket.amplitudes();
        let mut acc = ZERO;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                acc += b[i].conj() * self.entries[(i, j)] * k[j];
            }
        }
        Ok(acc)
    }
}

/// Either kind of state, for operations that accept both.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(s: &'a PureState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(s: &'a DensityMatrix) -> Self {
        StateRef::Mixed(s)
    }
}

/// Reduced state on the `keep` qubits (listed in ascending order in the result).
pub fn partial_trace<'a>(state: impl Into<StateRef<'a>>, keep: &[usize]) -> Result<DensityMatrix> {
    let owned;
    let rho = match state.into() {
        StateRef::Mixed(rho) => rho,
        StateRef::Pure(psi) => {
            owned = DensityMatrix::from_pure(psi);
            &owned
        }
    };
    let n = rho.num_qubits();
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() || keep.len() >= n {
        return Err(Error::Operands(format!(
            "partial trace must keep a nonempty proper subset of {n} qubits, got {keep:?}"
        )));
    }
    for &q in &keep {
        check_qubit(q, n)?;
    }
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let compose = |kept_bits: usize, traced_bits: usize| {
        let mut idx = 0usize;
        for (j, &q) in keep.iter().enumerate() {
            idx |= ((kept_bits >> (keep.len() - 1 - j)) & 1) << (n - 1 - q);
        }
        for (j, &q) in traced.iter().enumerate() {
            idx |= ((traced_bits >> (traced.len() - 1 - j)) & 1) << (n - 1 - q);
        }
        idx
    };
    let out_dim = 1 << keep.len();
    let entries = DMatrix::from_fn(out_dim, out_dim, |i, j| {
        (0..1usize << traced.len())
            .map(|t| rho.entries[(compose(i, t), compose(j, t))])
            .sum()
    });
    DensityMatrix::new(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn product_state_reduces_to_factor() {
        let s = PureState::basis(2, 0b01).unwrap();
        let rho = partial_trace(&s, &[0]).unwrap();
        assert_abs_diff_eq!(rho.entries()[(0, 0)].re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(rho.entries()[(1, 1)].re, 0.0, epsilon = 1e-15);
        let rho = partial_trace(&s, &[1]).unwrap();
        assert_abs_diff_eq!(rho.entries()[(1, 1)].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bell_state_is_maximally_mixed() {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        for keep in [0, 1] {
            let rho = partial_trace(&bell, &[keep]).unwrap();
            assert_abs_diff_eq!(rho.entries()[(0, 0)].re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(rho.entries()[(1, 1)].re, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(rho.entries()[(0, 1)].norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn keep_set_must_be_proper() {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(partial_trace(&bell, &[]).is_err());
        assert!(partial_trace(&bell, &[0, 1]).is_err());
        assert!(partial_trace(&bell, &[2]).is_err());
    }

    #[test]
    fn trace_of_mixed_input() {
        let ghz = PureState::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let rho01 = partial_trace(&ghz, &[0, 1]).unwrap();
        let rho0 = partial_trace(&rho01, &[0]).unwrap();
        assert_abs_diff_eq!(rho0.entries()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(rho01.purity(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn rejects_non_positive() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.5, 0.0),
                ZERO,
                ZERO,
                Complex64::new(-0.5, 0.0),
            ],
        );
        assert!(DensityMatrix::new(m).is_err());
    }

    proptest! {
        #[test]
        fn product_states_stay_pure(a in prop::collection::vec(-1.0f64..1.0, 4), b in prop::collection::vec(-1.0f64..1.0, 8)) {
            prop_assume!(a.iter().map(|x| x * x).sum::<f64>() > 1e-3);
            prop_assume!(b.iter().map(|x| x * x).sum::<f64>() > 1e-3);
            let sa = PureState::new(vec![Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3])]).unwrap();
            let sb = PureState::new((0..4).map(|i| Complex64::new(b[2 * i], b[2 * i + 1])).collect()).unwrap();
            let s = sa.tensor(&sb).unwrap();
            for keep in [vec![0], vec![1, 2]] {
                let rho = partial_trace(&s, &keep).unwrap();
                prop_assert!((rho.purity() - 1.0).abs() < 1e-10);
                prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
            }
        }
    }
}
