//! Depth-versus-`q` tabulation for plotting.

use rayon::prelude::*;

use super::depth::ResourceKind;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub q: f64,
    /// Real-valued depth, without the extra central channel.
    pub n: f64,
}

/// `samples` evenly spaced `q` values from `q_lo` to `q_hi` inclusive, in ascending order.
pub fn sweep_curve(kind: ResourceKind, q_lo: f64, q_hi: f64, samples: usize) -> Result<Vec<CurvePoint>> {
    if samples < 2 {
        return Err(Error::domain("samples", samples as f64, "samples >= 2"));
    }
    if !(q_lo < q_hi) {
        return Err(Error::Operands(format!("empty q range [{q_lo}, {q_hi}]")));
    }
    let step = (q_hi - q_lo) / (samples - 1) as f64;
    (0..samples)
        .into_par_iter()
        .map(|i| {
            let q = if i + 1 == samples { q_hi } else { q_lo + step * i as f64 };
            kind.depth(q).map(|n| CurvePoint { q, n })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn improved1_rises_slowly_then_steeply() {
        let pts = sweep_curve(ResourceKind::Improved1 { f_min: 0.99 }, 0.51, 0.9, 40).unwrap();
        assert!(pts.windows(2).all(|w| w[1].n > w[0].n));
        let early = pts[10].n - pts[0].n;
        let late = pts[39].n - pts[29].n;
        assert!(late > early);
    }

    #[test]
    fn table_point_appears() {
        let pts = sweep_curve(ResourceKind::AppendixA { m: 2 }, 0.90, 0.99, 10).unwrap();
        let p = pts.iter().find(|p| (p.q - 0.98).abs() < 1e-12).unwrap();
        assert!((p.n - 95.95).abs() < 0.01, "{}", p.n);
        assert_eq!(pts[0].q, 0.90);
        assert_eq!(pts[9].q, 0.99);
    }

    #[test]
    fn range_endpoints_are_checked() {
        assert!(sweep_curve(ResourceKind::AppendixB { f_min: 0.9 }, 0.5, 0.9, 5).is_err());
        assert!(sweep_curve(ResourceKind::AppendixB { f_min: 0.9 }, 0.6, 0.9, 1).is_err());
        assert!(sweep_curve(ResourceKind::AppendixB { f_min: 0.9 }, 0.9, 0.6, 5).is_err());
    }
}
