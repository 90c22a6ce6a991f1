use num_complex::Complex64;

use super::state::{check_qubit, PureState, ZERO};
use crate::error::Result;

/// Branches with less weight than this carry no post-measurement state.
pub const NULL_BRANCH_TOL: f64 = 1e-15;

/// One outcome of a computational-basis measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBranch {
    pub outcome: u8,
    pub probability: f64,
    /// Renormalized post-measurement state; `None` marks a zero-probability branch.
    pub state: Option<PureState>,
}

/// Enumerates both outcomes of measuring `qubit` in the `{|0⟩, |1⟩}` basis.
/// The measured qubit stays in the register, collapsed onto the outcome.
pub fn measure_enumerate(state: &PureState, qubit: usize) -> Result<Vec<MeasurementBranch>> {
    let n = state.num_qubits();
    check_qubit(qubit, n)?;
    let shift = n - 1 - qubit;
    let branches = (0..2u8)
        .map(|outcome| {
            let projected: Vec<Complex64> = state
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    if (i >> shift) & 1 == outcome as usize {
                        *a
                    } else {
                        ZERO
                    }
                })
                .collect();
            let probability: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
            let state = if probability < NULL_BRANCH_TOL {
                None
            } else {
                let norm = probability.sqrt();
                Some(PureState::from_normalized_unchecked(
                    n,
                    projected.into_iter().map(|a| a / norm).collect(),
                ))
            };
            MeasurementBranch {
                outcome,
                probability,
                state,
            }
        })
        .collect();
    Ok(branches)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gate::{apply_gate, Gate};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn bell_state_branches() {
        let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        let b = measure_enumerate(&bell, 0).unwrap();
        assert_abs_diff_eq!(b[0].probability, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(b[1].probability, 0.5, epsilon = 1e-15);
        assert_eq!(b[0].state.as_ref().unwrap(), &PureState::basis(2, 0).unwrap());
        assert_eq!(b[1].state.as_ref().unwrap(), &PureState::basis(2, 3).unwrap());
    }

    #[test]
    fn eigenstate_has_null_branch() {
        let zero = PureState::basis(1, 0).unwrap();
        let b = measure_enumerate(&zero, 0).unwrap();
        assert_eq!(b[0].probability, 1.0);
        assert_eq!(b[1].probability, 0.0);
        assert!(b[1].state.is_none());
        assert!(measure_enumerate(&zero, 1).is_err());
    }

    #[test]
    fn channel_after_sender_rotation_splits_evenly() {
        let t = 0.3230;
        let channel = PureState::from_real(&[1.0, 0.0, 0.0, t]).unwrap();
        let phi = 0.9;
        let rotated = apply_gate(&channel, &Gate::phased_hadamard(phi), &[0]).unwrap();
        // Oracle: U|0⟩ = (|0⟩ + e^{-iφ}|1⟩)/√2 and U|1⟩ = (e^{iφ}|0⟩ − |1⟩)/√2, so the
        // unnormalized outcome-a component is (|0⟩ ± t e^{±iφ}|1⟩)/√2 with norm² (1+t²)/2.
        let unnormalized_branch_norm = (1.0 + t * t) / 2.0;
        let expected = unnormalized_branch_norm / (1.0 + t * t);
        for b in measure_enumerate(&rotated, 0).unwrap() {
            assert_abs_diff_eq!(b.probability, expected, epsilon = 1e-15);
            assert_abs_diff_eq!(b.probability, 0.5, epsilon = 1e-15);
        }
    }

    proptest! {
        #[test]
        fn probabilities_sum_to_one(seed in prop::collection::vec(-1.0f64..1.0, 16), q in 0usize..3) {
            prop_assume!(seed.iter().map(|x| x * x).sum::<f64>() > 1e-3);
            let amps = (0..8).map(|i| Complex64::new(seed[2 * i], seed[2 * i + 1])).collect();
            let s = PureState::new(amps).unwrap();
            let total: f64 = measure_enumerate(&s, q).unwrap().iter().map(|b| b.probability).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
