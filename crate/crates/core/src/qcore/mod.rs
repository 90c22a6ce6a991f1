//! Exact state-vector mechanics for registers of at most three qubits.

mod density;
mod fidelity;
mod gate;
mod measure;
mod povm;
mod state;

pub use density::{partial_trace, DensityMatrix, StateRef};
pub use fidelity::{fidelity, Convention, Fidelity};
pub use gate::{apply_gate, Gate};
pub use measure::{measure_enumerate, MeasurementBranch, NULL_BRANCH_TOL};
pub use povm::{apply_povm_element, PovmElement, PovmPair};
pub use state::{make_target_state, PureState, TargetQubit, EXACT_TOL};
