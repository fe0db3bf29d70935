//! Jordan-Wigner mapping from ladder operators to Pauli strings.
//!
//! `a†_i -> Z_1 ... Z_{i-1} σ+_i` and `a_i -> Z_1 ... Z_{i-1} σ-_i` with
//! `σ± = (X ± iY)/2`. A qubit in `|0⟩` is an occupied level, so `Z = +1` there
//! and `n_i = (1 + Z_i)/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::fermion::{FermionHamiltonian, LadderKind, LadderTerm};
use crate::pauli::{Pauli, PauliHamiltonian, PauliString, PauliSum};

/// Pauli expansion of a single creation or annihilation operator.
pub fn jw_ladder(kind: LadderKind, level: usize, n: usize) -> Result<PauliSum> {
    check_index(level, n)?;
    let mut z_prefix: Vec<(usize, Pauli)> = (1..level).map(|q| (q, Pauli::Z)).collect();
    let y_coeff = match kind {
        LadderKind::Create => Complex64::new(0.0, 0.5),
        LadderKind::Annihilate => Complex64::new(0.0, -0.5),
    };
    let mut sum = PauliSum::new(n)?;
    z_prefix.push((level, Pauli::X));
    sum.add(&PauliString::from_letters(n, Complex64::new(0.5, 0.0), &z_prefix)?)?;
    z_prefix.pop();
    z_prefix.push((level, Pauli::Y));
    sum.add(&PauliString::from_letters(n, y_coeff, &z_prefix)?)?;
    Ok(sum)
}

/// Symbolic product of the factor expansions, scaled by the term coefficient.
pub fn jw_term(term: &LadderTerm, n: usize) -> Result<PauliSum> {
    let mut acc = PauliSum::new(n)?;
    acc.add(&PauliString::identity(n, Complex64::new(term.coeff, 0.0))?)?;
    for &(kind, level) in &term.factors {
        acc = acc.multiply(&jw_ladder(kind, level, n)?)?;
    }
    Ok(acc)
}

/// Map a fermionic Hamiltonian (Hermitian partners included) to real Pauli strings.
pub fn jw_hamiltonian(h: &FermionHamiltonian) -> Result<PauliHamiltonian> {
    let n = h.n_levels();
    let mut sum = PauliSum::new(n)?;
    sum.add(&PauliString::identity(n, Complex64::new(h.e0(), 0.0))?)?;
    for term in h.operator_terms() {
        sum.add_sum(&jw_term(&term, n)?)?;
    }
    PauliHamiltonian::from_sum(&sum)
}

/// The three orderings of creation (C) and annihilation (A) indices along the
/// qubit line that a four-index term can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwoBodyGroup {
    /// `C C A A` (or mirrored `A A C C`).
    I,
    /// `C A C A` (or `A C A C`).
    II,
    /// `C A A C` (or `A C C A`).
    III,
}

/// Classify `a†_i a†_j a_l a_k` by the order of its indices and return the
/// group together with `-ε`, where `ε` is the sign of the permutation that
/// sorts the labels `i=1, j=2, l=3, k=4`.
pub fn classify_two_body_group(i: usize, j: usize, l: usize, k: usize) -> Result<(TwoBodyGroup, i8)> {
    let idx = [i, j, l, k];
    for a in 0..4 {
        for b in a + 1..4 {
            if idx[a] == idx[b] {
                return Err(Error::PauliPrinciple(format!("indices ({i},{j},{l},{k}) are not all distinct")));
            }
        }
    }
    let mut order = [0usize, 1, 2, 3];
    order.sort_by_key(|&p| idx[p]);
    let creators: Vec<bool> = order.iter().map(|&p| p < 2).collect();
    let group = match creators.as_slice() {
        [true, true, false, false] | [false, false, true, true] => TwoBodyGroup::I,
        [true, false, true, false] | [false, true, false, true] => TwoBodyGroup::II,
        _ => TwoBodyGroup::III,
    };
    let mut inversions = 0;
    for a in 0..4 {
        for b in a + 1..4 {
            if order[a] > order[b] {
                inversions += 1;
            }
        }
    }
    let epsilon = if inversions % 2 == 0 { 1 } else { -1 };
    Ok((group, -epsilon))
}
