//! Greedy channel compression.
//!
//! Channel `f` (for `1 ≤ f ≤ N`) is `|00⟩ + C_f|11⟩` with `C_f = tan(π/4 − A_f)`.
//! A section keeps only its deepest channel, the head `h`, with `B = C_h`; any
//! shallower channel `f` with `C_f ≥ √(P·B² + P − 1)` can be recovered from
//! the head by a local filter that succeeds with probability `P`. Walking down
//! from `h = N`, each section reaches as far as that bound allows, and the next
//! head is the first channel it cannot reach.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::schedule::{channel_coefficient, check_q, Half, Schedule};

/// Boundaries computed within this distance of an integer snap to it.
const SNAP_TOL: f64 = 1e-9;

/// Channels `lowest..=head` served by one shared head channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Section {
    pub head: usize,
    pub lowest: usize,
    /// `B = C_head`
    pub b: f64,
}

impl Section {
    pub fn contains(&self, channel: usize) -> bool {
        (self.lowest..=self.head).contains(&channel)
    }

    pub fn len(&self) -> usize {
        self.head - self.lowest + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressionPlan {
    q: f64,
    p: f64,
    n_channels: usize,
    /// Deepest first.
    sections: Vec<Section>,
}

/// `√(max(0, P·C_h² + P − 1))`: the smallest Schmidt ratio reachable from head `h`.
pub fn reach_threshold(q: f64, head: usize, p: f64) -> Result<f64> {
    let c = channel_coefficient(q, head)?;
    Ok((p * c * c + p - 1.0).max(0.0).sqrt())
}

/// The real index `f` at which `C_f` equals the reach threshold of `head`
/// (0 when every shallower channel is reachable).
pub fn reach_index(q: f64, head: usize, p: f64) -> Result<f64> {
    check_q(q)?;
    check_p(p)?;
    let r = 2.0 * q - 1.0;
    // tan²(π/4 − A) = (1 − sin 2A)/(1 + sin 2A) and sin 2A_h = r^h.
    let rh = r.powi(head as i32);
    let c2 = (1.0 - rh) / (1.0 + rh);
    let t2 = p * c2 + p - 1.0;
    if t2 <= 0.0 {
        return Ok(0.0);
    }
    Ok(((1.0 - t2) / (1.0 + t2)).ln() / r.ln())
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain("P", p, "0 < P <= 1"))
    }
}

/// Lower limit `1/(B² + 1)` on the success probability of the filter for head `h`.
pub fn probability_floor(q: f64, head: usize) -> Result<f64> {
    let b = channel_coefficient(q, head)?;
    Ok(1.0 / (b * b + 1.0))
}

/// Builds the plan by walking heads down from `n`.
///
/// Heads whose floor `1/(B²+1)` exceeds `p` are accepted (the filter is
/// still a valid measurement there); see [`CompressionPlan::floor_violations`]
/// and [`greedy_compress_strict`].
pub fn greedy_compress(q: f64, n: usize, p: f64) -> Result<CompressionPlan> {
    check_q(q)?;
    check_p(p)?;
    if n == 0 {
        return Err(Error::domain("N", 0.0, "N >= 1"));
    }
    let mut sections = Vec::new();
    let mut head = n;
    while head >= 1 {
        let f = reach_index(q, head, p)?;
        let snapped = if (f - f.round()).abs() < SNAP_TOL {
            f.round()
        } else {
            f.ceil()
        };
        let lowest = (snapped as usize).clamp(1, head);
        sections.push(Section {
            head,
            lowest,
            b: channel_coefficient(q, head)?,
        });
        head = lowest - 1;
    }
    Ok(CompressionPlan {
        q,
        p,
        n_channels: n,
        sections,
    })
}

/// Like [`greedy_compress`], but fails on the first head with `P < 1/(B²+1)`.
pub fn greedy_compress_strict(q: f64, n: usize, p: f64) -> Result<CompressionPlan> {
    let plan = greedy_compress(q, n, p)?;
    if let Some(&head) = plan.floor_violations().first() {
        return Err(Error::InfeasiblePlan {
            head,
            p,
            floor: probability_floor(q, head)?,
        });
    }
    Ok(plan)
}

impl CompressionPlan {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Deepest channel index `N`.
    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    /// Number of sections `M`.
    pub fn m(&self) -> usize {
        self.sections.len()
    }

    /// Sections, deepest first.
    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    /// Head indices in descending order.
    pub fn heads(&self) -> Vec<usize> {
        self.sections.iter().map(|s| s.head).collect()
    }

    /// Ascending boundaries `l_0 = 1 < l_1 < … < l_M = N`. Each inner boundary
    /// is the lowest channel of the deeper section, so section `k` (counting
    /// from the shallow end) covers `l_{k−1} ..= l_k − 1`, and the deepest one
    /// covers `l_{M−1} ..= N`.
    pub fn section_bounds(&self) -> Vec<usize> {
        let mut bounds = vec![1];
        bounds.extend(self.sections.iter().rev().skip(1).map(|s| s.lowest));
        bounds.push(self.n_channels);
        bounds
    }

    pub fn section_for_channel(&self, channel: usize) -> Option<&Section> {
        self.sections.iter().find(|s| s.contains(channel))
    }

    /// Heads whose filter floor `1/(B²+1)` is above `P`.
    pub fn floor_violations(&self) -> Vec<usize> {
        self.sections
            .iter()
            .filter(|s| self.p < 1.0 / (s.b * s.b + 1.0))
            .map(|s| s.head)
            .collect()
    }

    /// The `θ` intervals served by a section, one per half.
    pub fn theta_intervals(&self, section: &Section) -> Result<[(Half, f64, f64); 2]> {
        let schedule = Schedule::new(self.q, section.head)?;
        let outer = schedule.get(section.lowest - 1);
        let inner = schedule.get(section.head);
        Ok([
            (Half::Lower, FRAC_PI_4 - outer, FRAC_PI_4 - inner),
            (Half::Upper, FRAC_PI_4 + inner, FRAC_PI_4 + outer),
        ])
    }

    /// Re-checks the plan from scratch: contiguous sections from `N` down to
    /// channel 1, every member reachable from its head, and every section as
    /// long as the greedy rule allows.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        let Some(first) = self.sections.first() else {
            return fail("empty plan".into());
        };
        if first.head != self.n_channels {
            return fail(format!("first head {} != N {}", first.head, self.n_channels));
        }
        if self.sections.last().map(|s| s.lowest) != Some(1) {
            return fail("plan does not reach channel 1".into());
        }
        for pair in self.sections.windows(2) {
            if pair[1].head + 1 != pair[0].lowest {
                return fail(format!(
                    "sections headed {} and {} are not contiguous",
                    pair[0].head, pair[1].head
                ));
            }
        }
        for s in &self.sections {
            let b = channel_coefficient(self.q, s.head)?;
            let threshold = (self.p * b * b + self.p - 1.0).max(0.0).sqrt();
            let c_low = channel_coefficient(self.q, s.lowest)?;
            if c_low < threshold * (1.0 - 1e-12) {
                return fail(format!(
                    "channel {} (C = {c_low}) unreachable from head {} (threshold {threshold})",
                    s.lowest, s.head
                ));
            }
            if s.lowest > 1 {
                let c_next = channel_coefficient(self.q, s.lowest - 1)?;
                if c_next >= threshold * (1.0 + 1e-12) {
                    return fail(format!(
                        "section {} stops at {} although channel {} is reachable",
                        s.head,
                        s.lowest,
                        s.lowest - 1
                    ));
                }
            }
        }
        Ok(())
    }
}
