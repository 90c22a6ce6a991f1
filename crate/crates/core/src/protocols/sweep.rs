//! Fidelity over a grid of `θ` covering a protocol's domain.

use rayon::prelude::*;

use super::ProtocolSpec;
use crate::error::{Error, Result};
use crate::qcore::TargetQubit;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub analytic: f64,
    pub simulated: f64,
}

impl SweepRow {
    pub fn abs_diff(&self) -> f64 {
        (self.analytic - self.simulated).abs()
    }
}

/// `grid` points spaced evenly by arc length over the union of `domain`'s
/// intervals, first and last endpoints included. A point landing on the seam
/// between two intervals goes to the earlier one.
pub fn sweep_grid(domain: &[(f64, f64)], grid: usize) -> Result<Vec<f64>> {
    if grid < 2 {
        return Err(Error::domain("grid", grid as f64, "grid >= 2"));
    }
    let total: f64 = domain.iter().map(|(a, b)| b - a).sum();
    let (Some(first), Some(last)) = (domain.first(), domain.last()) else {
        return Err(Error::Operands("empty sweep domain".into()));
    };
    let mut points = Vec::with_capacity(grid);
    for i in 0..grid {
        if i == 0 {
            points.push(first.0);
            continue;
        }
        if i + 1 == grid {
            points.push(last.1);
            continue;
        }
        let mut s = total * i as f64 / (grid - 1) as f64;
        let mut theta = last.1;
        for &(a, b) in domain {
            if s <= b - a {
                theta = a + s;
                break;
            }
            s -= b - a;
        }
        points.push(theta);
    }
    Ok(points)
}

/// Rows ordered by `θ`; evaluation runs in parallel.
pub fn fidelity_sweep(spec: &ProtocolSpec, grid: usize, phi: f64) -> Result<Vec<SweepRow>> {
    let thetas = sweep_grid(&spec.theta_domain()?, grid)?;
    thetas
        .par_iter()
        .map(|&theta| {
            let out = spec.run(&TargetQubit::new(theta, phi)?)?;
            let analytic = out
                .report
                .analytic_fidelity
                .ok_or_else(|| Error::Invariant("protocol has no closed-form fidelity".into()))?;
            Ok(SweepRow {
                theta,
                analytic,
                simulated: out.report.simulated_fidelity,
            })
        })
        .collect()
}

/// Columns `theta,analytic_F,simulated_F,abs_diff`; the difference is printed
/// in scientific notation so that sub-1e−6 deviations stay visible.
pub fn sweep_to_csv(rows: &[SweepRow]) -> Result<String> {
    let io = |e: csv::Error| Error::Operands(format!("csv: {e}"));
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(["theta", "analytic_F", "simulated_F", "abs_diff"]).map_err(io)?;
    for r in rows {
        w.write_record([
            format!("{:.6}", r.theta),
            format!("{:.6}", r.analytic),
            format!("{:.6}", r.simulated),
            format!("{:.6e}", r.abs_diff()),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Operands(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Operands(format!("csv: {e}")))
}
