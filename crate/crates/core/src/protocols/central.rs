//! Fallbacks for the central interval `[π/4 − A_N, π/4 + A_N]`, both over one
//! maximally entangled pair.

use std::f64::consts::FRAC_PI_4;

use super::{BranchRecord, BranchStatus, FidelityReport, Protocol, ProtocolOutcome};
use crate::error::{Error, Result};
use crate::qcore::{
    apply_gate, apply_povm_element, measure_enumerate, Convention, DensityMatrix, Gate, PovmPair,
    PureState, TargetQubit, EXACT_TOL,
};
use crate::resources::{appendix_b_min_success, improved1_min_fidelity};
use crate::schedule::Schedule;

fn check_central(target: &TargetQubit, q: f64, depth: usize) -> Result<()> {
    let w = Schedule::new(q, depth)?.gap_half_width();
    let (lower, upper) = (FRAC_PI_4 - w, FRAC_PI_4 + w);
    let theta = target.theta();
    if theta < lower - EXACT_TOL || theta > upper + EXACT_TOL {
        return Err(Error::OutsideCentralRegion { theta, lower, upper });
    }
    Ok(())
}

/// Receiver's qubit on each sender outcome: `|φ⟩` on 0, `s|0⟩ + c e^{iφ}|1⟩` on 1.
fn bell_branches(target: &TargetQubit) -> Result<Vec<(u8, f64, PureState)>> {
    let bell = PureState::from_real(&[1.0, 0.0, 0.0, 1.0])?;
    let register = apply_gate(
        &bell,
        &Gate::target_reflection(target.theta(), target.phi()),
        &[0],
    )?;
    let mut out = Vec::with_capacity(2);
    for branch in measure_enumerate(&register, 0)? {
        let mut state = branch
            .state
            .ok_or_else(|| Error::Invariant("maximally entangled branch has zero weight".into()))?;
        if branch.outcome == 1 {
            state = apply_gate(&state, &Gate::pauli_z(), &[1])?;
        }
        out.push((branch.outcome, branch.probability, state.discard_measured(0)?));
    }
    Ok(out)
}

fn overlap(target: &TargetQubit, state: &PureState) -> Result<f64> {
    Ok(state.inner(&target.state())?.norm().min(1.0))
}

/// The receiver keeps whatever arrives: `|φ⟩` or `|φ′⟩`, each with probability ½.
/// Fidelities are overlaps; the worst case is `sin 2θ`.
pub fn run_improved1_central(target: &TargetQubit, q: f64, depth: usize) -> Result<ProtocolOutcome> {
    check_central(target, q, depth)?;
    let mut branches = Vec::with_capacity(2);
    for (outcome, p, state) in bell_branches(target)? {
        let f = overlap(target, &state)?;
        branches.push(BranchRecord::delivered(
            format!("a={outcome}"),
            1,
            p,
            DensityMatrix::from_pure(&state),
            f,
        ));
    }
    let mut report = FidelityReport::from_branches(Convention::Overlap, branches)?;
    report.analytic_fidelity = Some((2.0 * target.theta()).sin());
    report.fidelity_floor = Some(improved1_min_fidelity(q, depth as f64)?);
    ProtocolOutcome::assemble(Protocol::Improved1, report)?.with_basis_coefficients(target)
}

/// As [`run_improved1_central`], but the receiver filters `|φ′⟩` into `|φ⟩`,
/// accepting a failure outcome. `θ = π/4` uses the lower-half filter.
pub fn run_appendix_b_central(target: &TargetQubit, q: f64, depth: usize) -> Result<ProtocolOutcome> {
    check_central(target, q, depth)?;
    let theta = target.theta();
    let lower = theta <= FRAC_PI_4;
    let filter = if lower {
        PovmPair::lower_half_filter(theta)?
    } else {
        PovmPair::upper_half_filter(theta)?
    };
    let mut branches = Vec::with_capacity(3);
    for (outcome, p, state) in bell_branches(target)? {
        if outcome == 0 {
            let f = overlap(target, &state)?;
            branches.push(BranchRecord::delivered(
                "a=0".into(),
                1,
                p,
                DensityMatrix::from_pure(&state),
                f,
            ));
            continue;
        }
        for (m, element) in [(0, &filter.success), (1, &filter.failure)] {
            let label = format!("a=1/M={m}");
            match apply_povm_element(&state, element, 0) {
                Ok((pm, post)) if m == 0 => {
                    let f = overlap(target, &post)?;
                    branches.push(BranchRecord::delivered(
                        label,
                        1,
                        p * pm,
                        DensityMatrix::from_pure(&post),
                        f,
                    ));
                }
                Ok((pm, _)) => {
                    branches.push(BranchRecord::empty(label, 1, p * pm, BranchStatus::Failed))
                }
                Err(Error::DegenerateBranch { probability }) => branches.push(BranchRecord::empty(
                    label,
                    1,
                    p * probability,
                    BranchStatus::Null,
                )),
                Err(e) => return Err(e),
            }
        }
    }
    let mut report = FidelityReport::from_branches(Convention::Overlap, branches)?;
    report.analytic_fidelity = Some(1.0);
    report.fidelity_floor = Some(1.0);
    let mut outcome =
        ProtocolOutcome::assemble(Protocol::AppendixB, report)?.with_basis_coefficients(target)?;
    let ratio = if lower { theta.tan() } else { 1.0 / theta.tan() };
    outcome.analytic_success_probability = Some((1.0 + ratio * ratio) / 2.0);
    outcome.success_floor = Some(appendix_b_min_success(q, depth as f64)?);
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schedule::schedule_value;
    use approx::assert_abs_diff_eq;

    #[test]
    fn improved1_branch_law() {
        let (q, depth) = (0.95, 19);
        let w = schedule_value(q, depth).unwrap();
        for i in 0..=20 {
            let theta = FRAC_PI_4 - w + 2.0 * w * i as f64 / 20.0;
            let target = TargetQubit::new(theta, 0.8).unwrap();
            let out = run_improved1_central(&target, q, depth).unwrap();
            let b = &out.report.branches;
            assert_abs_diff_eq!(b[0].probability, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(b[1].probability, 0.5, epsilon = 1e-15);
            assert_abs_diff_eq!(b[0].fidelity.unwrap(), 1.0, epsilon = 1e-12);
            assert_abs_diff_eq!(b[1].fidelity.unwrap(), (2.0 * theta).sin(), epsilon = 1e-12);
            assert!(out.report.simulated_fidelity >= out.report.fidelity_floor.unwrap() - 1e-12);
        }
    }

    #[test]
    fn improved1_floor_at_gap_edge() {
        let (q, depth) = (0.95, 19);
        let edge = FRAC_PI_4 - schedule_value(q, depth).unwrap();
        let out = run_improved1_central(&TargetQubit::new(edge, 3.0).unwrap(), q, depth).unwrap();
        let floor = (1.0 - 0.9f64.powi(38)).sqrt();
        assert_abs_diff_eq!(out.report.fidelity_floor.unwrap(), floor, epsilon = 1e-15);
        assert_abs_diff_eq!(out.report.simulated_fidelity, floor, epsilon = 1e-12);
    }

    #[test]
    fn appendix_b_success_law() {
        let (q, depth) = (0.9, 6);
        let w = schedule_value(q, depth).unwrap();
        for i in 0..=16 {
            let theta = FRAC_PI_4 - w + 2.0 * w * i as f64 / 16.0;
            let target = TargetQubit::new(theta, 4.4).unwrap();
            let out = run_appendix_b_central(&target, q, depth).unwrap();
            assert_abs_diff_eq!(
                out.success_probability,
                out.analytic_success_probability.unwrap(),
                epsilon = 1e-12
            );
            assert!(out.success_probability >= out.success_floor.unwrap() - 1e-12);
            assert!(out.report.simulated_fidelity >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn appendix_b_quarter_pi() {
        let target = TargetQubit::new(FRAC_PI_4, 1.0).unwrap();
        let out = run_appendix_b_central(&target, 0.95, 5).unwrap();
        assert_abs_diff_eq!(out.success_probability, 1.0, epsilon = 1e-12);
        assert_eq!(out.report.branches[2].status, BranchStatus::Null);
    }

    #[test]
    fn appendix_b_minimum_at_edge() {
        let (q, depth) = (0.95, 12);
        let edge = FRAC_PI_4 - schedule_value(q, depth).unwrap();
        let out = run_appendix_b_central(&TargetQubit::new(edge, 0.0).unwrap(), q, depth).unwrap();
        assert_abs_diff_eq!(
            out.success_probability,
            1.0 / (0.9f64.powi(12) + 1.0),
            epsilon = 1e-12
        );
    }

    #[test]
    fn outside_region_is_refused() {
        let target = TargetQubit::new(0.2, 0.0).unwrap();
        assert!(matches!(
            run_improved1_central(&target, 0.95, 10),
            Err(Error::OutsideCentralRegion { .. })
        ));
        assert!(run_appendix_b_central(&target, 0.95, 10).is_err());
    }
}
