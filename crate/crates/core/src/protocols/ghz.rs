//! Two cbits over a GHZ state; exact for every `(θ, φ)`.
//!
//! Qubits 0 and 1 belong to the sender, qubit 2 to the receiver.

use super::{BranchRecord, FidelityReport, Protocol, ProtocolOutcome};
use crate::error::{Error, Result};
use crate::qcore::{
    apply_gate, measure_enumerate, Convention, DensityMatrix, Gate, PureState, TargetQubit,
};

/// First round: rotate and measure qubit 0, then apply the corrections for
/// outcome `k`. Returns `(k, probability, state of qubits 1 and 2)`; both
/// states equal `cos θ|00⟩ + sin θ e^{iφ}|11⟩` up to phase.
pub fn ghz_first_round(target: &TargetQubit) -> Result<Vec<(u8, f64, PureState)>> {
    let ghz = PureState::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0])?;
    let register = apply_gate(&ghz, &Gate::rotation(target.theta()), &[0])?;
    let mut out = Vec::with_capacity(2);
    for branch in measure_enumerate(&register, 0)? {
        let state = branch
            .state
            .ok_or_else(|| Error::Invariant("GHZ first-round branch has zero weight".into()))?;
        let state = match branch.outcome {
            0 => apply_gate(&state, &Gate::phase(target.phi(), true), &[1])?,
            _ => {
                let s = apply_gate(&state, &Gate::phased_flip(target.phi()), &[1])?;
                apply_gate(&s, &Gate::pauli_x(), &[2])?
            }
        };
        out.push((branch.outcome, branch.probability, state.discard_measured(0)?));
    }
    Ok(out)
}

fn shared_pair(target: &TargetQubit) -> PureState {
    let t = target.state();
    let (c, se) = (t.amplitude(0), t.amplitude(1));
    let zero = num_complex::Complex64::new(0.0, 0.0);
    PureState::new(vec![c, zero, zero, se]).expect("unit vector")
}

pub fn run_ghz(target: &TargetQubit) -> Result<ProtocolOutcome> {
    let expected = shared_pair(target);
    let phi = target.state();
    let mut branches = Vec::with_capacity(4);
    for (k, pk, pair) in ghz_first_round(target)? {
        if !pair.equivalent_up_to_phase(&expected) {
            return Err(Error::Invariant(format!(
                "first round k={k} left {pair:?}, expected {expected:?}"
            )));
        }
        let pair = apply_gate(&pair, &Gate::hadamard(), &[0])?;
        for branch in measure_enumerate(&pair, 0)? {
            let state = branch
                .state
                .ok_or_else(|| Error::Invariant("GHZ second-round branch has zero weight".into()))?;
            let state = if branch.outcome == 1 {
                apply_gate(&state, &Gate::pauli_z(), &[1])?
            } else {
                state
            };
            let bob = state.discard_measured(0)?;
            let f = bob.inner(&phi)?.norm().min(1.0);
            branches.push(BranchRecord::delivered(
                format!("k={k}/m={}", branch.outcome),
                2,
                pk * branch.probability,
                DensityMatrix::from_pure(&bob),
                f,
            ));
        }
    }
    let mut report = FidelityReport::from_branches(Convention::Overlap, branches)?;
    report.analytic_fidelity = Some(1.0);
    report.fidelity_floor = Some(1.0);
    let mut outcome = ProtocolOutcome::assemble(Protocol::Ghz, report)?.with_basis_coefficients(target)?;
    outcome.analytic_success_probability = Some(1.0);
    Ok(outcome)
}
