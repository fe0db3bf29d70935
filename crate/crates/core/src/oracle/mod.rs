//! Independent ground truth: Fock-basis matrices built from the
//! occupation-number action of ladder operators, dense eigensolvers, and the
//! analytic phase-estimation distribution.

pub mod fock;
pub mod jacobi;
pub mod matrix;
pub mod pe_exact;

pub use fock::{fock_matrix, fock_spectrum, gate_matrix, gate_op_matrix, ladder_matrix, pauli_matrix, pauli_string_matrix, sparse_spectrum};
pub use jacobi::{eigensolve, expm_hermitian, unitary_eigen, EigenSolution, Level, UnitaryEigen, DEFAULT_CLUSTER_TOL};
pub use matrix::{CMatrix, RMatrix, SparseMatrix};
pub use pe_exact::{dirichlet_weight, pe_exact_distribution, PeEvolution, PeInput};
