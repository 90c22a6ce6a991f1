use std::fmt;
use std::str::FromStr;

use super::density::StateRef;
use super::state::PureState;
use crate::error::{Error, Result};

/// Which of the two fidelity conventions a number is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    /// `⟨φ|ρ|φ⟩`, used for mixed outputs.
    Probability,
    /// `|⟨ψ|φ⟩|`, used when comparing two pure states.
    Overlap,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Probability => "probability",
            Convention::Overlap => "overlap",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "probability" => Ok(Convention::Probability),
            "overlap" => Ok(Convention::Overlap),
            other => Err(Error::Operands(format!("unknown fidelity convention '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fidelity {
    pub value: f64,
    pub convention: Convention,
}

/// Fidelity of `actual` with the pure `target`: `⟨φ|ρ|φ⟩` for a density
/// matrix, `|⟨ψ|φ⟩|` for a pure state. The two are not interchangeable; the
/// returned value records which one was used.
pub fn fidelity<'a>(target: &PureState, actual: impl Into<StateRef<'a>>) -> Result<Fidelity> {
    let (value, convention) = match actual.into() {
        StateRef::Pure(psi) => (psi.inner(target)?.norm(), Convention::Overlap),
        StateRef::Mixed(rho) => (
            rho.matrix_element(target, target)?.re,
            Convention::Probability,
        ),
    };
    Ok(Fidelity {
        value: value.clamp(0.0, 1.0),
        convention,
    })
}
