//! Explicit protocol fed from a compressed channel set: the sender converts
//! the section head into the channel the region needs, then proceeds as usual.

use super::explicit::{deliver, finish, flip_both};
use super::{BranchRecord, BranchStatus, Protocol, ProtocolOutcome};
use crate::error::{Error, Result};
use crate::qcore::{apply_povm_element, PovmPair, PureState, TargetQubit};
use crate::resources::CompressionPlan;
use crate::schedule::{channel_coefficient, Half, Schedule};

/// Runs with the plan's `q`, `P` and deepest index as the schedule depth.
///
/// The filter's failure outcome is recorded as a failed branch costing one
/// cbit (the notice to the receiver).
pub fn run_improved2(target: &TargetQubit, plan: &CompressionPlan) -> Result<ProtocolOutcome> {
    let q = plan.q();
    let region = Schedule::new(q, plan.n_channels())?.locate(target.theta())?;
    let channel = region.n + 1;
    let section = plan.section_for_channel(channel).ok_or(Error::NoSection {
        theta: target.theta(),
        channel,
    })?;
    let c = channel_coefficient(q, channel)?;
    let filter = PovmPair::channel_conversion(section.b, c, plan.p())?;
    let head = PureState::from_real(&[1.0, 0.0, 0.0, section.b])?;

    let mut branches = Vec::with_capacity(3);
    let (p_ok, converted) = apply_povm_element(&head, &filter.success, 0)?;
    let converted = match region.half {
        Half::Lower => converted,
        Half::Upper => flip_both(&converted)?,
    };
    branches.extend(deliver(target, &converted, region, q, "M=0/", p_ok)?);
    branches.push(match apply_povm_element(&head, &filter.failure, 0) {
        Ok((p, _)) => BranchRecord::empty("M=1".into(), 1, p, BranchStatus::Failed),
        Err(Error::DegenerateBranch { probability }) => {
            BranchRecord::empty("M=1".into(), 1, probability, BranchStatus::Null)
        }
        Err(e) => return Err(e),
    });

    let mut outcome = finish(Protocol::Improved2, target, region, q, branches)?;
    outcome.report.fidelity_floor = Some(q * plan.p());
    outcome.analytic_success_probability = Some(plan.p());
    outcome.success_floor = Some(plan.p());
    Ok(outcome)
}
