//! Matrices built directly from their definitions: occupation-number action
//! of ladder operators, Kronecker expansion of Pauli strings and gates.

use num_complex::Complex64;

use super::jacobi::{eigensolve, EigenSolution, MAX_DENSE_DIM};
use super::matrix::{CMatrix, SparseMatrix};
use crate::compiler::{GateOp, GateSequence, RotationAxis};
use crate::error::{check_index, Error, Result};
use crate::fermion::{FermionHamiltonian, LadderKind, LadderTerm};
use crate::pauli::{Pauli, PauliHamiltonian, PauliString};

pub const MAX_FOCK_LEVELS: usize = 14;
pub const MAX_PAULI_QUBITS: usize = 12;
pub const MAX_GATE_QUBITS: usize = 8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Level `i` is occupied when its bit is 0.
#[inline]
fn occupied(state: usize, level: usize, n: usize) -> bool {
    state & (1 << (n - level)) == 0
}

/// Act with one ladder operator on an occupation state. The sign is the
/// product over lower levels of `+1` (occupied) or `-1` (empty), the string
/// the Jordan-Wigner `Z` factors produce under the occupied-is-0 convention.
fn ladder_action(kind: LadderKind, level: usize, state: usize, n: usize) -> Option<(usize, f64)> {
    let occ = occupied(state, level, n);
    let allowed = match kind {
        LadderKind::Create => !occ,
        LadderKind::Annihilate => occ,
    };
    if !allowed {
        return None;
    }
    let empty_below = (1..level).filter(|&k| !occupied(state, k, n)).count();
    let sign = if empty_below % 2 == 0 { 1.0 } else { -1.0 };
    Some((state ^ (1 << (n - level)), sign))
}

fn term_action(term: &LadderTerm, state: usize, n: usize) -> Option<(usize, f64)> {
    let mut s = state;
    let mut sign = 1.0;
    for &(kind, level) in term.factors.iter().rev() {
        let (next, f) = ladder_action(kind, level, s, n)?;
        s = next;
        sign *= f;
    }
    Some((s, sign * term.coeff))
}

fn check_levels(n: usize) -> Result<()> {
    if n > MAX_FOCK_LEVELS {
        return Err(Error::Resource(format!("{n} levels exceeds the Fock-matrix cap of {MAX_FOCK_LEVELS}")));
    }
    Ok(())
}

/// Matrix of a product of ladder operators over all `2^n` occupation states.
pub fn ladder_term_matrix(term: &LadderTerm, n: usize) -> Result<SparseMatrix> {
    check_levels(n)?;
    for &(_, level) in &term.factors {
        check_index(level, n)?;
    }
    let dim = 1usize << n;
    let mut m = SparseMatrix::zeros(dim);
    for col in 0..dim {
        if let Some((row, v)) = term_action(term, col, n) {
            m.add_entry(row, col, Complex64::new(v, 0.0));
        }
    }
    Ok(m)
}

/// `a†_level` or `a_level` on `n` levels.
pub fn ladder_matrix(kind: LadderKind, level: usize, n: usize) -> Result<SparseMatrix> {
    ladder_term_matrix(&LadderTerm::new(vec![(kind, level)], 1.0), n)
}

/// Fock-basis matrix of the Hamiltonian.
pub fn fock_matrix(h: &FermionHamiltonian) -> Result<SparseMatrix> {
    let n = h.n_levels();
    check_levels(n)?;
    let dim = 1usize << n;
    let terms = h.operator_terms();
    let mut m = SparseMatrix::zeros(dim);
    for col in 0..dim {
        if h.e0() != 0.0 {
            m.add_entry(col, col, Complex64::new(h.e0(), 0.0));
        }
        for term in &terms {
            if let Some((row, v)) = term_action(term, col, n) {
                m.add_entry(row, col, Complex64::new(v, 0.0));
            }
        }
    }
    m.prune(0.0);
    Ok(m)
}

/// Letter phase: `σ|in⟩ = phase · |in ⊕ flip⟩`.
fn letter_action(p: Pauli, bit: bool) -> Complex64 {
    match (p, bit) {
        (Pauli::I, _) | (Pauli::X, _) | (Pauli::Z, false) => ONE,
        (Pauli::Z, true) => -ONE,
        (Pauli::Y, false) => Complex64::new(0.0, 1.0),
        (Pauli::Y, true) => Complex64::new(0.0, -1.0),
    }
}

/// Matrix of one Pauli string (coefficient included).
pub fn pauli_string_matrix(p: &PauliString) -> Result<SparseMatrix> {
    let n = p.n_qubits();
    if n > MAX_PAULI_QUBITS {
        return Err(Error::Resource(format!("{n} qubits exceeds the Pauli-matrix cap of {MAX_PAULI_QUBITS}")));
    }
    let letters = p.letters();
    let flip: usize = letters.iter().filter(|(_, l)| matches!(l, Pauli::X | Pauli::Y)).map(|&(q, _)| 1 << (n - q)).sum();
    let dim = 1usize << n;
    let mut m = SparseMatrix::zeros(dim);
    for col in 0..dim {
        let phase: Complex64 = letters.iter().map(|&(q, l)| letter_action(l, col & (1 << (n - q)) != 0)).product();
        m.add_entry(col ^ flip, col, p.coeff * phase);
    }
    Ok(m)
}

pub fn pauli_matrix(h: &PauliHamiltonian) -> Result<SparseMatrix> {
    let n = h.n_qubits();
    if n > MAX_PAULI_QUBITS {
        return Err(Error::Resource(format!("{n} qubits exceeds the Pauli-matrix cap of {MAX_PAULI_QUBITS}")));
    }
    let dim = 1usize << n;
    let mut m = SparseMatrix::identity(dim).scale(Complex64::new(h.constant(), 0.0));
    for s in h.strings() {
        m = m.add(&pauli_string_matrix(s)?);
    }
    m.prune(0.0);
    Ok(m)
}

type Local = [[Complex64; 2]; 2];

fn pauli_local(axis: RotationAxis) -> Local {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match axis {
        RotationAxis::X => [[ZERO, ONE], [ONE, ZERO]],
        RotationAxis::Y => [[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]],
        RotationAxis::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

const IDENTITY: Local = [[ONE, ZERO], [ZERO, ONE]];

fn lin(a: Local, ca: Complex64, b: Local, cb: Complex64) -> Local {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = ca * a[i][j] + cb * b[i][j];
        }
    }
    out
}

/// Tensor product of local 2×2 factors on the listed qubits, identity elsewhere.
fn embed(n: usize, factors: &[(usize, Local)]) -> SparseMatrix {
    let dim = 1usize << n;
    let mut m = SparseMatrix::zeros(dim);
    let masks: Vec<usize> = factors.iter().map(|&(q, _)| 1 << (n - q)).collect();
    for col in 0..dim {
        for combo in 0..1usize << factors.len() {
            let mut row = col;
            let mut v = ONE;
            for (k, (&(_, local), &mask)) in factors.iter().zip(&masks).enumerate() {
                let out_bit = (combo >> k) & 1;
                let in_bit = usize::from(col & mask != 0);
                v *= local[out_bit][in_bit];
                row = if out_bit == 1 { row | mask } else { row & !mask };
            }
            if v != ZERO {
                m.add_entry(row, col, v);
            }
        }
    }
    m
}

/// Full-register matrix of a single gate.
pub fn gate_op_matrix(op: &GateOp, n: usize) -> Result<SparseMatrix> {
    let dim = 1usize << n;
    let i = Complex64::new(0.0, 1.0);
    for q in op.qubits() {
        check_index(q, n)?;
    }
    Ok(match *op {
        GateOp::Rot { axis, qubit, angle } => {
            embed(n, &[(qubit, lin(IDENTITY, Complex64::new(angle.cos(), 0.0), pauli_local(axis), -i * angle.sin()))])
        }
        GateOp::H { qubit } => {
            let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            embed(n, &[(qubit, [[r, r], [r, -r]])])
        }
        GateOp::ZZ { a, b, angle } => {
            let z = pauli_local(RotationAxis::Z);
            SparseMatrix::identity(dim).scale(Complex64::new(angle.cos(), 0.0)).add(&embed(n, &[(a, z), (b, z)]).scale(-i * angle.sin()))
        }
        GateOp::CRotZ { control, target, angle } => {
            let p0 = [[ONE, ZERO], [ZERO, ZERO]];
            let p1 = [[ZERO, ZERO], [ZERO, ONE]];
            let rz = lin(IDENTITY, Complex64::new(angle.cos(), 0.0), pauli_local(RotationAxis::Z), -i * angle.sin());
            embed(n, &[(control, p0)]).add(&embed(n, &[(control, p1), (target, rz)]))
        }
        GateOp::CPhase { control, angle } => embed(n, &[(control, [[ONE, ZERO], [ZERO, Complex64::from_polar(1.0, -angle)]])]),
        GateOp::GlobalPhase { angle } => SparseMatrix::identity(dim).scale(Complex64::from_polar(1.0, -angle)),
    })
}

/// Product of the gate matrices in application order.
pub fn gate_matrix(seq: &GateSequence) -> Result<CMatrix> {
    let n = seq.n_qubits();
    if n > MAX_GATE_QUBITS {
        return Err(Error::Resource(format!("{n} qubits exceeds the gate-matrix cap of {MAX_GATE_QUBITS}")));
    }
    let dim = 1usize << n;
    let mut m = CMatrix::identity(dim);
    for op in seq.ops() {
        let g = gate_op_matrix(op, n)?;
        let mut next = CMatrix::zeros(dim);
        for r in 0..dim {
            for &(k, v) in g.row(r) {
                for c in 0..dim {
                    let cur = next.get(r, c);
                    next.set(r, c, cur + v * m.get(k, c));
                }
            }
        }
        m = next;
    }
    Ok(m)
}

/// Spectrum of a sparse Hermitian matrix, solving each connected block densely.
pub fn sparse_spectrum(m: &SparseMatrix, cluster_tol: f64) -> Result<EigenSolution> {
    let mut values = Vec::with_capacity(m.dim());
    for block in m.components(0.0) {
        if block.len() > MAX_DENSE_DIM {
            return Err(Error::Resource(format!("block of dimension {} exceeds {MAX_DENSE_DIM}", block.len())));
        }
        let sol = eigensolve(&m.submatrix(&block), cluster_tol)?;
        values.extend(sol.eigenvalues);
    }
    values.sort_by(f64::total_cmp);
    Ok(EigenSolution { eigenvalues: values, eigenvectors: None, cluster_tol })
}

/// Exact spectrum of a fermionic Hamiltonian.
pub fn fock_spectrum(h: &FermionHamiltonian, cluster_tol: f64) -> Result<EigenSolution> {
    sparse_spectrum(&fock_matrix(h)?, cluster_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile_string_evolution;
    use crate::oracle::jacobi::expm_hermitian;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn number_operator_on_one_level() {
        let m = ladder_term_matrix(&LadderTerm::one_body(1, 1, 1.0), 1).unwrap().to_dense().unwrap();
        assert_eq!(m, CMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]));
    }

    #[test]
    fn z1_ordering() {
        let p = PauliString::from_label("ZI", c(1.0, 0.0)).unwrap();
        let m = pauli_string_matrix(&p).unwrap();
        let diag: Vec<f64> = (0..4).map(|i| m.get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn hadamard_matrix() {
        let seq = GateSequence::from_ops(1, vec![GateOp::H { qubit: 1 }]).unwrap();
        let m = gate_matrix(&seq).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let expect = CMatrix::from_rows(&[vec![c(r, 0.0), c(r, 0.0)], vec![c(r, 0.0), c(-r, 0.0)]]).unwrap();
        assert!(m.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn five_level_hopping_matches_jw_form() {
        // a†_2 a_4 on five levels = 1 ⊗ (σ+ σz) ⊗ σz ⊗ σ- ⊗ 1
        let fock = ladder_term_matrix(&LadderTerm::one_body(2, 4, 1.0), 5).unwrap().to_dense().unwrap();
        let id = CMatrix::identity(2);
        let sp = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let sm = sp.adjoint();
        let sz = CMatrix::from_diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        let expect = id.kron(&sp.mul(&sz)).kron(&sz).kron(&sm).kron(&id);
        assert!(fock.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn compiled_xzx_matches_exponential() {
        let p = PauliString::from_label("XZX", c(1.0, 0.0)).unwrap();
        let theta = 0.37;
        let u = gate_matrix(&compile_string_evolution(&p, theta).unwrap()).unwrap();
        let exact = expm_hermitian(&pauli_string_matrix(&p).unwrap().to_dense().unwrap(), theta).unwrap();
        assert!(u.max_abs_diff(&exact) < 1e-10);
    }

    #[test]
    fn caps() {
        assert!(matches!(fock_matrix(&FermionHamiltonian::new(15).unwrap()), Err(Error::Resource(_))));
        assert!(gate_matrix(&GateSequence::new(9)).is_err());
    }
}
