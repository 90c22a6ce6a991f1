//! Remote state preparation of a qubit `cos θ|0⟩ + sin θ e^{iφ}|1⟩` when the
//! receiver knows `θ`, using one classical bit and a family of
//! non-maximally entangled channels.
//!
//! * [`qcore`]: exact state vectors, gates, measurements, POVMs, partial traces.
//! * [`schedule`]: the angle schedule, region lookup, channel and ancilla choice.
//! * [`protocols`]: branch-enumerating drivers for every protocol variant.
//! * [`resources`]: closed-form channel counts and the greedy channel compression.

pub mod error;
pub mod protocols;
pub mod qcore;
pub mod resources;
pub mod schedule;

pub use error::{Error, Result};
