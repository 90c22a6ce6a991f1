//! Seeded sampling of protocol runs.
//!
//! Each trial draws one leaf of the exact outcome tree and, on delivered
//! leaves, one projective test of the output onto the target. The pass rate
//! estimates `⟨φ|ρ|φ⟩`, which equals the squared overlap for pure outputs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BranchStatus, Protocol, ProtocolSpec};
use crate::error::{Error, Result};
use crate::qcore::TargetQubit;

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalBranch {
    pub label: String,
    pub status: BranchStatus,
    pub exact_probability: f64,
    pub count: u64,
}

impl EmpiricalBranch {
    pub fn frequency(&self, trials: u64) -> f64 {
        self.count as f64 / trials as f64
    }

    /// Binomial standard deviation of the frequency.
    pub fn std_dev(&self, trials: u64) -> f64 {
        let p = self.exact_probability;
        (p * (1.0 - p) / trials as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalReport {
    pub protocol: Protocol,
    pub trials: u64,
    pub seed: u64,
    pub branches: Vec<EmpiricalBranch>,
    /// Trials that ended on a delivered branch.
    pub delivered: u64,
    /// Delivered trials whose output passed the projection onto the target.
    pub passed: u64,
    pub exact_success_probability: f64,
    /// Exact `⟨φ|ρ|φ⟩` averaged over delivered branches.
    pub exact_projection: f64,
}

impl EmpiricalReport {
    pub fn empirical_success_probability(&self) -> f64 {
        self.delivered as f64 / self.trials as f64
    }

    /// Pass rate among delivered trials; `NaN` when none was delivered.
    pub fn empirical_projection(&self) -> f64 {
        self.passed as f64 / self.delivered as f64
    }

    /// Largest `|frequency − exact| / σ` over branches with `0 < p < 1`.
    pub fn max_z_score(&self) -> f64 {
        self.branches
            .iter()
            .filter(|b| b.exact_probability > 0.0 && b.exact_probability < 1.0)
            .map(|b| (b.frequency(self.trials) - b.exact_probability).abs() / b.std_dev(self.trials))
            .fold(0.0, f64::max)
    }

    /// Columns `row,label,exact,empirical,count`: one row per branch, then
    /// `success` and `projection` summary rows.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = |e: csv::Error| Error::Operands(format!("csv: {e}"));
        w.write_record(["row", "label", "exact", "empirical", "count"]).map_err(io)?;
        for b in &self.branches {
            w.write_record([
                "branch".to_string(),
                b.label.clone(),
                format!("{:.6}", b.exact_probability),
                format!("{:.6}", b.frequency(self.trials)),
                b.count.to_string(),
            ])
            .map_err(io)?;
        }
        w.write_record([
            "success".to_string(),
            String::new(),
            format!("{:.6}", self.exact_success_probability),
            format!("{:.6}", self.empirical_success_probability()),
            self.delivered.to_string(),
        ])
        .map_err(io)?;
        w.write_record([
            "projection".to_string(),
            String::new(),
            format!("{:.6}", self.exact_projection),
            format!("{:.6}", self.empirical_projection()),
            self.passed.to_string(),
        ])
        .map_err(io)?;
        let bytes = w.into_inner().map_err(|e| Error::Operands(format!("csv: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::Operands(format!("csv: {e}")))
    }
}

pub fn run_monte_carlo(
    spec: &ProtocolSpec,
    target: &TargetQubit,
    trials: u64,
    seed: u64,
) -> Result<EmpiricalReport> {
    if trials == 0 {
        return Err(Error::domain("trials", 0.0, "trials >= 1"));
    }
    let outcome = spec.run(target)?;
    let leaves = &outcome.report.branches;
    let projections: Vec<Option<f64>> = leaves.iter().map(|b| b.projection_probability(target)).collect();
    let mut cumulative = Vec::with_capacity(leaves.len());
    let mut acc = 0.0;
    for b in leaves {
        acc += b.probability;
        cumulative.push(acc);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; leaves.len()];
    let (mut delivered, mut passed) = (0u64, 0u64);
    for _ in 0..trials {
        let u: f64 = rng.random::<f64>() * acc;
        let i = cumulative.partition_point(|&c| c <= u).min(leaves.len() - 1);
        counts[i] += 1;
        if let Some(p_pass) = projections[i] {
            delivered += 1;
            if rng.random::<f64>() < p_pass {
                passed += 1;
            }
        }
    }

    let weight: f64 = leaves
        .iter()
        .zip(&projections)
        .filter_map(|(b, p)| p.map(|_| b.probability))
        .sum();
    let exact_projection = leaves
        .iter()
        .zip(&projections)
        .filter_map(|(b, p)| p.map(|p| b.probability * p))
        .sum::<f64>()
        / weight;
    Ok(EmpiricalReport {
        protocol: outcome.protocol,
        trials,
        seed,
        branches: leaves
            .iter()
            .zip(counts)
            .map(|(b, count)| EmpiricalBranch {
                label: b.label.clone(),
                status: b.status,
                exact_probability: b.probability,
                count,
            })
            .collect(),
        delivered,
        passed,
        exact_success_probability: outcome.success_probability,
        exact_projection,
    })
}
