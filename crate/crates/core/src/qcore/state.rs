use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for "is this normalized / unitary / Hermitian" checks.
pub const EXACT_TOL: f64 = 1e-12;

pub(crate) const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A normalized pure state of one to three qubits.
///
/// Amplitudes are stored big-endian: qubit 0 is the most significant bit of
/// the basis index, so `|q0 q1 q2⟩` sits at index `q0·4 + q1·2 + q2`.
#[derive(Clone, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    pub const MAX_QUBITS: usize = 3;

    /// Builds a state from (possibly unnormalized) amplitudes and normalizes it.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let num_qubits = match amps.len() {
            2 => 1,
            4 => 2,
            8 => 3,
            len => {
                return Err(Error::Operands(format!(
                    "state vector length {len} is not 2, 4 or 8"
                )))
            }
        };
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::Operands("state vector has zero norm".into()));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(Self { num_qubits, amps })
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|index⟩` on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if !(1..=Self::MAX_QUBITS).contains(&num_qubits) || index >= 1 << num_qubits {
            return Err(Error::Operands(format!(
                "basis state {index} on {num_qubits} qubits"
            )));
        }
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[index] = ONE;
        Ok(Self { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Operands(format!(
                "inner product of {}-qubit and {}-qubit states",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `self ⊗ other`, with `self` on the lower qubit indices.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        if self.num_qubits + other.num_qubits > Self::MAX_QUBITS {
            return Err(Error::Operands(format!(
                "tensor product would have {} qubits",
                self.num_qubits + other.num_qubits
            )));
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Ok(PureState {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        })
    }

    /// Equal up to a global phase: `|⟨a|b⟩| ≥ 1 − 1e−12`.
    pub fn equivalent_up_to_phase(&self, other: &PureState) -> bool {
        self.inner(other)
            .map(|z| z.norm() >= 1.0 - EXACT_TOL)
            .unwrap_or(false)
    }

    /// Removes a qubit that is in a definite computational basis state
    /// (e.g. right after it was measured) and returns the remaining register.
    pub fn discard_measured(&self, qubit: usize) -> Result<PureState> {
        check_qubit(qubit, self.num_qubits)?;
        if self.num_qubits == 1 {
            return Err(Error::Operands("cannot discard the only qubit".into()));
        }
        let shift = self.num_qubits - 1 - qubit;
        let weight_one: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> shift) & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        let bit = if weight_one >= 1.0 - EXACT_TOL {
            1
        } else if weight_one <= EXACT_TOL {
            0
        } else {
            return Err(Error::Operands(format!(
                "qubit {qubit} is not in a basis state (P(1) = {weight_one})"
            )));
        };
        let amps = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> shift) & 1 == bit)
            .map(|(_, a)| *a)
            .collect();
        PureState::new(amps)
    }

    pub(crate) fn from_normalized_unchecked(num_qubits: usize, amps: Vec<Complex64>) -> Self {
        Self { num_qubits, amps }
    }
}

impl fmt::Debug for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PureState[")?;
        for (i, a) in self.amps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:.6}{:+.6}i", a.re, a.im)?;
        }
        write!(f, "]")
    }
}

pub(crate) fn check_qubit(qubit: usize, num_qubits: usize) -> Result<()> {
    if qubit >= num_qubits {
        return Err(Error::Operands(format!(
            "qubit index {qubit} out of range for {num_qubits} qubits"
        )));
    }
    Ok(())
}

/// The pair `(θ, φ)` fixing `|φ⟩ = cos θ|0⟩ + sin θ e^{iφ}|1⟩` on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetQubit {
    theta: f64,
    phi: f64,
}

impl TargetQubit {
    /// `0 ≤ θ ≤ π/2`, `0 ≤ φ < 2π`.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::domain("theta", theta, "0 <= theta <= pi/2"));
        }
        if !(0.0..std::f64::consts::TAU).contains(&phi) {
            return Err(Error::domain("phi", phi, "0 <= phi < 2*pi"));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `cos θ|0⟩ + sin θ e^{iφ}|1⟩`
    pub fn state(&self) -> PureState {
        let (s, c) = self.theta.sin_cos();
        PureState::from_normalized_unchecked(
            1,
            vec![Complex64::new(c, 0.0), Complex64::from_polar(s, self.phi)],
        )
    }

    /// The orthonormal partner `sin θ|0⟩ − cos θ e^{iφ}|1⟩`.
    pub fn partner(&self) -> PureState {
        let (s, c) = self.theta.sin_cos();
        PureState::from_normalized_unchecked(
            1,
            vec![Complex64::new(s, 0.0), -Complex64::from_polar(c, self.phi)],
        )
    }
}

pub fn make_target_state(theta: f64, phi: f64) -> Result<PureState> {
    TargetQubit::new(theta, phi).map(|t| t.state())
}
