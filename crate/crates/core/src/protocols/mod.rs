//! Branch-enumerating drivers for each protocol.
//!
//! Every driver evolves the full register through every measurement outcome
//! and returns a [`ProtocolOutcome`] with one [`BranchRecord`] per leaf.
//! Branch probabilities of a run always sum to one.

mod central;
mod explicit;
mod ghz;
mod improved2;
mod montecarlo;
mod sweep;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::{Convention, DensityMatrix, TargetQubit};
use crate::resources::CompressionPlan;
use crate::schedule::{RegionIndex, Schedule};

pub use central::{run_appendix_b_central, run_improved1_central};
pub use explicit::{explicit_chi, run_explicit, run_explicit_with};
pub use ghz::{ghz_first_round, run_ghz};
pub use improved2::run_improved2;
pub use montecarlo::{run_monte_carlo, EmpiricalBranch, EmpiricalReport};
pub use sweep::{fidelity_sweep, sweep_grid, sweep_to_csv, SweepRow};

/// Tolerance on the sum of branch probabilities.
pub const PROBABILITY_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    Explicit,
    Improved1,
    AppendixB,
    Improved2,
    Ghz,
}

impl Protocol {
    pub const ALL: [Protocol; 5] = [
        Protocol::Explicit,
        Protocol::Improved1,
        Protocol::AppendixB,
        Protocol::Improved2,
        Protocol::Ghz,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Explicit => "explicit",
            Protocol::Improved1 => "improved1",
            Protocol::AppendixB => "appendixB",
            Protocol::Improved2 => "improved2",
            Protocol::Ghz => "ghz",
        }
    }

    /// Classical bits sent on every branch.
    pub fn classical_bits(&self) -> usize {
        match self {
            Protocol::Ghz => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Protocol::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownProtocol(s.to_string()))
    }
}

/// Which channel family the explicit protocol draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelFamily {
    /// Lower regions use `t < 1`, upper regions `t > 1`.
    #[default]
    PerHalf,
    /// Only `t < 1` channels are stored; upper regions flip both qubits of
    /// the mirrored lower channel with `X ⊗ X`.
    LowerOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchStatus {
    /// The receiver holds an output state.
    Delivered,
    /// A filter reported failure; no output state is claimed.
    Failed,
    /// Probability below the null-branch tolerance.
    Null,
}

impl fmt::Display for BranchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchStatus::Delivered => "delivered",
            BranchStatus::Failed => "failed",
            BranchStatus::Null => "null",
        })
    }
}

/// One leaf of the protocol's outcome tree.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchRecord {
    /// Outcomes along the path, e.g. `a=1/M=0`.
    pub label: String,
    pub classical_bits: usize,
    pub probability: f64,
    pub status: BranchStatus,
    /// Receiver's final qubit (delivered branches only).
    pub state: Option<DensityMatrix>,
    /// In the report's convention (delivered branches only).
    pub fidelity: Option<f64>,
}

impl BranchRecord {
    pub(crate) fn delivered(
        label: String,
        classical_bits: usize,
        probability: f64,
        state: DensityMatrix,
        fidelity: f64,
    ) -> Self {
        Self {
            label,
            classical_bits,
            probability,
            status: BranchStatus::Delivered,
            state: Some(state),
            fidelity: Some(fidelity),
        }
    }

    pub(crate) fn empty(label: String, classical_bits: usize, probability: f64, status: BranchStatus) -> Self {
        Self {
            label,
            classical_bits,
            probability,
            status,
            state: None,
            fidelity: None,
        }
    }

    /// Probability that the output passes a projective test onto the target.
    pub fn projection_probability(&self, target: &TargetQubit) -> Option<f64> {
        let t = target.state();
        self.state
            .as_ref()
            .map(|rho| rho.matrix_element(&t, &t).map(|z| z.re.clamp(0.0, 1.0)).unwrap_or(0.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    pub convention: Convention,
    /// Worst case over delivered branches.
    pub simulated_fidelity: f64,
    /// Probability-weighted mean over delivered branches.
    pub mean_fidelity: f64,
    /// Closed form of `simulated_fidelity`.
    pub analytic_fidelity: Option<f64>,
    /// Closed-form `C₁/C₀`.
    pub chi: Option<f64>,
    /// `⟨φ̄|ρ|φ̄⟩ / ⟨φ|ρ|φ⟩` of the averaged output.
    pub simulated_chi: Option<f64>,
    /// `|⟨φ|ρ|φ̄⟩|` of the averaged output.
    pub off_diagonal: Option<f64>,
    /// Guaranteed lower bound for the configuration.
    pub fidelity_floor: Option<f64>,
    pub branches: Vec<BranchRecord>,
}

impl FidelityReport {
    fn from_branches(convention: Convention, branches: Vec<BranchRecord>) -> Result<Self> {
        let total: f64 = branches.iter().map(|b| b.probability).sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::Invariant(format!("branch probabilities sum to {total}")));
        }
        let delivered = || {
            branches
                .iter()
                .filter_map(|b| b.fidelity.map(|f| (b.probability, f)))
        };
        let weight: f64 = delivered().map(|(p, _)| p).sum();
        if weight <= 0.0 {
            return Err(Error::Invariant("no delivered branch".into()));
        }
        let simulated_fidelity = delivered().map(|(_, f)| f).fold(f64::INFINITY, f64::min);
        let mean_fidelity = delivered().map(|(p, f)| p * f).sum::<f64>() / weight;
        Ok(Self {
            convention,
            simulated_fidelity,
            mean_fidelity,
            analytic_fidelity: None,
            chi: None,
            simulated_chi: None,
            off_diagonal: None,
            fidelity_floor: None,
            branches,
        })
    }

    /// `|simulated − analytic|`, when a closed form exists.
    pub fn abs_diff(&self) -> Option<f64> {
        self.analytic_fidelity
            .map(|a| (a - self.simulated_fidelity).abs())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolOutcome {
    pub protocol: Protocol,
    pub report: FidelityReport,
    /// Receiver's state averaged over delivered branches.
    pub rho_b: DensityMatrix,
    /// Total probability of delivered branches.
    pub success_probability: f64,
    pub analytic_success_probability: Option<f64>,
    pub success_floor: Option<f64>,
    /// Region of the schedule used, for the channel-based protocols.
    pub region: Option<RegionIndex>,
}

impl ProtocolOutcome {
    fn assemble(protocol: Protocol, report: FidelityReport) -> Result<Self> {
        let parts: Vec<(f64, &DensityMatrix)> = report
            .branches
            .iter()
            .filter_map(|b| b.state.as_ref().map(|s| (b.probability, s)))
            .collect();
        let rho_b = DensityMatrix::mixture(&parts)?;
        let success_probability = parts.iter().map(|(p, _)| p).sum();
        Ok(Self {
            protocol,
            report,
            rho_b,
            success_probability,
            analytic_success_probability: None,
            success_floor: None,
            region: None,
        })
    }

    /// Fills `simulated_chi` and `off_diagonal` from the averaged output.
    fn with_basis_coefficients(mut self, target: &TargetQubit) -> Result<Self> {
        let (phi, bar) = (target.state(), target.partner());
        let c0 = self.rho_b.matrix_element(&phi, &phi)?.re;
        let c1 = self.rho_b.matrix_element(&bar, &bar)?.re;
        let c2 = self.rho_b.matrix_element(&phi, &bar)?;
        self.report.simulated_chi = Some(c1 / c0);
        self.report.off_diagonal = Some(c2.norm());
        Ok(self)
    }
}

/// A protocol together with the parameters it needs.
#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolSpec {
    Explicit {
        q: f64,
        depth: usize,
        family: ChannelFamily,
    },
    Improved1 {
        q: f64,
        depth: usize,
    },
    AppendixB {
        q: f64,
        depth: usize,
    },
    Improved2 {
        plan: CompressionPlan,
    },
    Ghz,
}

impl ProtocolSpec {
    pub fn protocol(&self) -> Protocol {
        match self {
            ProtocolSpec::Explicit { .. } => Protocol::Explicit,
            ProtocolSpec::Improved1 { .. } => Protocol::Improved1,
            ProtocolSpec::AppendixB { .. } => Protocol::AppendixB,
            ProtocolSpec::Improved2 { .. } => Protocol::Improved2,
            ProtocolSpec::Ghz => Protocol::Ghz,
        }
    }

    pub fn run(&self, target: &TargetQubit) -> Result<ProtocolOutcome> {
        match self {
            ProtocolSpec::Explicit { q, depth, family } => run_explicit_with(target, *q, *depth, *family),
            ProtocolSpec::Improved1 { q, depth } => run_improved1_central(target, *q, *depth),
            ProtocolSpec::AppendixB { q, depth } => run_appendix_b_central(target, *q, *depth),
            ProtocolSpec::Improved2 { plan } => run_improved2(target, plan),
            ProtocolSpec::Ghz => run_ghz(target),
        }
    }

    /// Closed `θ` intervals the protocol accepts, in ascending order.
    pub fn theta_domain(&self) -> Result<Vec<(f64, f64)>> {
        let outer = |q: f64, depth: usize| -> Result<Vec<(f64, f64)>> {
            let w = Schedule::new(q, depth)?.gap_half_width();
            Ok(vec![(0.0, FRAC_PI_4 - w), (FRAC_PI_4 + w, FRAC_PI_2)])
        };
        let central = |q: f64, depth: usize| -> Result<Vec<(f64, f64)>> {
            let w = Schedule::new(q, depth)?.gap_half_width();
            Ok(vec![(FRAC_PI_4 - w, FRAC_PI_4 + w)])
        };
        match self {
            ProtocolSpec::Explicit { q, depth, .. } => outer(*q, *depth),
            ProtocolSpec::Improved1 { q, depth } | ProtocolSpec::AppendixB { q, depth } => {
                central(*q, *depth)
            }
            ProtocolSpec::Improved2 { plan } => outer(plan.q(), plan.n_channels()),
            ProtocolSpec::Ghz => Ok(vec![(0.0, FRAC_PI_2)]),
        }
    }
}
