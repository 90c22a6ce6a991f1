//! One cbit over a region-matched non-maximally entangled channel.

use super::{BranchRecord, BranchStatus, ChannelFamily, FidelityReport, Protocol, ProtocolOutcome};
use crate::error::Result;
use crate::qcore::{
    apply_gate, measure_enumerate, partial_trace, Convention, Gate, PureState, TargetQubit,
};
use crate::schedule::{ancilla_param, channel_for_region, Half, RegionIndex, Schedule};

/// `χ = (cos 2θ ∓ sin 2A)/(cos 2θ ± sin 2A)` with `A = A_{n+1}`; the upper
/// signs belong to the lower half.
pub fn explicit_chi(theta: f64, region: RegionIndex, q: f64) -> Result<f64> {
    let s = (2.0 * Schedule::new(q, region.n + 1)?.get(region.n + 1)).sin();
    let c = (2.0 * theta).cos();
    Ok(match region.half {
        Half::Lower => (c - s) / (c + s),
        Half::Upper => (c + s) / (c - s),
    })
}

/// [`run_explicit_with`] using a separate channel family per half.
pub fn run_explicit(target: &TargetQubit, q: f64, depth: usize) -> Result<ProtocolOutcome> {
    run_explicit_with(target, q, depth, ChannelFamily::PerHalf)
}

pub fn run_explicit_with(
    target: &TargetQubit,
    q: f64,
    depth: usize,
    family: ChannelFamily,
) -> Result<ProtocolOutcome> {
    let region = Schedule::new(q, depth)?.locate(target.theta())?;
    let channel = region_channel(region, q, family)?;
    let branches = deliver(target, &channel, region, q, "", 1.0)?;
    finish(Protocol::Explicit, target, region, q, branches)
}

/// The two-qubit channel (sender qubit 0) assigned to `region`.
pub(crate) fn region_channel(region: RegionIndex, q: f64, family: ChannelFamily) -> Result<PureState> {
    let channel = channel_for_region(region, q)?;
    match (family, region.half) {
        (ChannelFamily::LowerOnly, Half::Upper) => flip_both(&channel.mirrored().as_state()),
        _ => Ok(channel.as_state()),
    }
}

pub(crate) fn flip_both(state: &PureState) -> Result<PureState> {
    let x = Gate::pauli_x();
    apply_gate(&apply_gate(state, &x, &[0])?, &x, &[1])
}

/// Runs the sender and receiver steps on `channel`, scaling every branch
/// probability by `weight`.
pub(crate) fn deliver(
    target: &TargetQubit,
    channel: &PureState,
    region: RegionIndex,
    q: f64,
    label_prefix: &str,
    weight: f64,
) -> Result<Vec<BranchRecord>> {
    let ancilla = ancilla_param(target.theta(), region, q)?.state();
    let register = channel.tensor(&ancilla)?;
    let register = apply_gate(&register, &Gate::phased_hadamard(target.phi()), &[0])?;
    let phi = target.state();
    let mut records = Vec::with_capacity(2);
    for branch in measure_enumerate(&register, 0)? {
        let label = format!("{label_prefix}a={}", branch.outcome);
        let probability = weight * branch.probability;
        let Some(mut state) = branch.state else {
            records.push(BranchRecord::empty(label, 1, probability, BranchStatus::Null));
            continue;
        };
        if branch.outcome == 1 {
            state = apply_gate(&state, &Gate::pauli_z(), &[1])?;
        }
        state = apply_gate(&state, &Gate::cnot(), &[1, 2])?;
        let rho = partial_trace(&state, &[1])?;
        let f = rho.matrix_element(&phi, &phi)?.re;
        records.push(BranchRecord::delivered(label, 1, probability, rho, f));
    }
    Ok(records)
}

pub(crate) fn finish(
    protocol: Protocol,
    target: &TargetQubit,
    region: RegionIndex,
    q: f64,
    branches: Vec<BranchRecord>,
) -> Result<ProtocolOutcome> {
    let chi = explicit_chi(target.theta(), region, q)?;
    let mut report = FidelityReport::from_branches(Convention::Probability, branches)?;
    report.chi = Some(chi);
    report.analytic_fidelity = Some(1.0 / (1.0 + chi));
    report.fidelity_floor = Some(q);
    let mut outcome = ProtocolOutcome::assemble(protocol, report)?.with_basis_coefficients(target)?;
    outcome.region = Some(region);
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::schedule::schedule_value;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_PI_4;

    /// Hand-expanded evolution of `channel ⊗ ancilla` on eight amplitudes,
    /// sharing no code with the gate and measurement layer.
    fn oracle(theta: f64, phi: f64, t: f64, y: Complex64) -> f64 {
        let norm = ((1.0 + t * t) * (1.0 + y.norm_sqr())).sqrt();
        // index = 4·alice + 2·bob + ancilla
        let mut psi = [Complex64::new(0.0, 0.0); 8];
        psi[0] = Complex64::new(1.0 / norm, 0.0);
        psi[1] = y / norm;
        psi[6] = Complex64::new(t / norm, 0.0);
        psi[7] = y * t / norm;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let e = Complex64::from_polar(1.0, phi);
        let (c, s) = (theta.cos(), theta.sin());
        let target = [Complex64::new(c, 0.0), e * s];
        let mut fid = 0.0;
        for outcome in 0..2 {
            // ⟨outcome|U on Alice's qubit: row `outcome` of U.
            let row = if outcome == 0 {
                [Complex64::new(h, 0.0), e * h]
            } else {
                [e.conj() * h, Complex64::new(-h, 0.0)]
            };
            let mut bob_anc = [Complex64::new(0.0, 0.0); 4];
            for ba in 0..4 {
                bob_anc[ba] = row[0] * psi[ba] + row[1] * psi[4 + ba];
            }
            if outcome == 1 {
                bob_anc[2] = -bob_anc[2];
                bob_anc[3] = -bob_anc[3];
            }
            bob_anc.swap(2, 3);
            // ⟨φ|ρ_B|φ⟩ = Σ_anc |⟨φ|_B ψ(·, anc)|²
            for anc in 0..2 {
                let amp = target[0].conj() * bob_anc[anc] + target[1].conj() * bob_anc[2 + anc];
                fid += amp.norm_sqr();
            }
        }
        fid
    }

    #[test]
    fn matches_independent_evolution() {
        let (theta, phi, q) = (0.3, 1.7, 0.95);
        let target = TargetQubit::new(theta, phi).unwrap();
        let out = run_explicit(&target, q, 10).unwrap();
        let region = out.region.unwrap();
        assert_eq!(region, RegionIndex { half: Half::Lower, n: 1 });
        let t = channel_for_region(region, q).unwrap().t();
        let y = ancilla_param(theta, region, q).unwrap().y;
        assert_abs_diff_eq!(out.report.simulated_fidelity, oracle(theta, phi, t, y), epsilon = 1e-12);
        let sin2a = (2.0 * schedule_value(q, 2).unwrap()).sin();
        let chi = (0.6f64.cos() - sin2a) / (0.6f64.cos() + sin2a);
        assert_abs_diff_eq!(out.report.simulated_fidelity, 1.0 / (1.0 + chi), epsilon = 1e-9);
    }

    #[test]
    fn region_edges() {
        for &q in &[0.9, 0.95, 0.99] {
            for n in 0..5 {
                let inner = FRAC_PI_4 - schedule_value(q, n + 1).unwrap();
                let out = run_explicit(&TargetQubit::new(inner, 0.4).unwrap(), q, 8).unwrap();
                assert_abs_diff_eq!(out.report.simulated_fidelity, 1.0, epsilon = 1e-12);
                // The outer edge of region n > 0 is shared with region n − 1 and
                // resolves there (F = 1); approach it from inside region n.
                let outer = FRAC_PI_4 - schedule_value(q, n).unwrap() + if n == 0 { 0.0 } else { 1e-12 };
                let out = run_explicit(&TargetQubit::new(outer, 0.4).unwrap(), q, 8).unwrap();
                assert_eq!(out.region.unwrap().n, n);
                assert_abs_diff_eq!(out.report.simulated_fidelity, q, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn branches_are_even_and_identical() {
        let target = TargetQubit::new(1.2, 5.0).unwrap();
        let out = run_explicit(&target, 0.9, 6).unwrap();
        let b = &out.report.branches;
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|r| r.classical_bits == 1));
        assert_abs_diff_eq!(b[0].probability, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b[0].fidelity.unwrap(), b[1].fidelity.unwrap(), epsilon = 1e-12);
        assert!(out.report.off_diagonal.unwrap() < 1e-12);
        assert_abs_diff_eq!(out.report.simulated_chi.unwrap(), out.report.chi.unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn lower_only_family_gives_the_same_output() {
        for &theta in &[1.0, 1.3, 1.5707963267948966] {
            let target = TargetQubit::new(theta, 2.2).unwrap();
            let a = run_explicit_with(&target, 0.95, 12, ChannelFamily::PerHalf).unwrap();
            let b = run_explicit_with(&target, 0.95, 12, ChannelFamily::LowerOnly).unwrap();
            assert_abs_diff_eq!(
                a.report.simulated_fidelity,
                b.report.simulated_fidelity,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn central_gap_is_refused() {
        let target = TargetQubit::new(FRAC_PI_4, 0.0).unwrap();
        assert!(matches!(
            run_explicit(&target, 0.95, 10),
            Err(Error::CentralGap { depth: 10, .. })
        ));
    }
}
