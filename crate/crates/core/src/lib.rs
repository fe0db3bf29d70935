//! Fermionic Hamiltonians on a simulated quantum computer.
//!
//! The pipeline runs in five stages, one module each:
//!
//! 1. [`fermion`] builds two-body Hamiltonians (pairing, Hubbard, custom)
//!    in a canonical coefficient form.
//! 2. [`pauli`] and [`jw`] map ladder operators onto Pauli strings with the
//!    Jordan-Wigner transformation.
//! 3. [`compiler`] lowers each string's time evolution to one- and two-qubit
//!    gates, Trotterizes, and builds controlled evolutions.
//! 4. [`statevector`] executes gate sequences and the inverse QFT.
//! 5. [`phase_estimation`] runs the full eigenvalue-estimation circuit and
//!    maps work-register outcomes to energies.
//!
//! [`oracle`] holds the independent ground truth used to check every stage:
//! Fock-basis matrices, a Jacobi eigensolver and the analytic phase-estimation
//! distribution.
//!
//! Conventions shared by every module: qubits and levels are numbered from 1;
//! qubit 1 is the most significant bit of a basis index; a qubit in `|0>`
//! represents an occupied level, so `Z` has eigenvalue +1 on occupied levels.

pub mod compiler;
pub mod error;
pub mod fermion;
pub mod jw;
pub mod oracle;
pub mod pauli;
pub mod phase_estimation;
pub mod statevector;

pub use compiler::{GateCounts, GateOp, GateSequence, RotationAxis, TrotterOrder};
pub use error::{Error, Result};
pub use fermion::{FermionHamiltonian, LadderKind, LadderTerm};
pub use num_complex::Complex64;
pub use pauli::{Pauli, PauliHamiltonian, PauliString, PauliSum};
pub use phase_estimation::{Engine, InputState, PeConfig, SpectrumHistogram};
pub use statevector::{RngStream, StateVector};

/// Bit mask of qubit `q` (1-based) in an `n`-qubit basis index.
#[inline]
pub(crate) fn qubit_mask(q: usize, n: usize) -> usize {
    1usize << (n - q)
}
