#![allow(dead_code)]

use fermisim_core::oracle::CMatrix;
use fermisim_core::{Complex64, FermionHamiltonian, Pauli, PauliString};
use rand::{Rng, RngCore};

/// Every one-body coefficient and a random selection of two-body keys,
/// all uniform in [-1, 1].
pub fn random_hamiltonian(rng: &mut impl RngCore, n: usize) -> FermionHamiltonian {
    let mut h = FermionHamiltonian::new(n).unwrap();
    h.set_e0(rng.random_range(-1.0..=1.0)).unwrap();
    for i in 1..=n {
        for j in i..=n {
            h.add_one_body(i, j, rng.random_range(-1.0..=1.0)).unwrap();
        }
    }
    if n >= 2 {
        for _ in 0..2 * n {
            let mut pick = || {
                let a = rng.random_range(1..=n);
                let mut b = rng.random_range(1..=n);
                while b == a {
                    b = rng.random_range(1..=n);
                }
                (a, b)
            };
            let (i, j) = pick();
            let (k, l) = pick();
            h.add_two_body(i, j, k, l, rng.random_range(-1.0..=1.0)).unwrap();
        }
    }
    h
}

/// A Pauli string of a shape the compiler accepts: zero, one, two or four
/// X/Y letters with arbitrary I/Z elsewhere (at most two Z for pure-Z strings).
pub fn random_in_scope_string(rng: &mut impl RngCore, n: usize) -> PauliString {
    let choices: Vec<usize> = [0, 1, 2, 4].into_iter().filter(|&k| k <= n).collect();
    let k = choices[rng.random_range(0..choices.len())];
    let mut qubits: Vec<usize> = (1..=n).collect();
    for i in (1..qubits.len()).rev() {
        qubits.swap(i, rng.random_range(0..=i));
    }
    let mut letters = Vec::new();
    for &q in &qubits[..k] {
        letters.push((q, if rng.random_bool(0.5) { Pauli::X } else { Pauli::Y }));
    }
    let mut z_budget = if k == 0 { 2 } else { n };
    for &q in &qubits[k..] {
        if z_budget > 0 && rng.random_bool(0.5) {
            letters.push((q, Pauli::Z));
            z_budget -= 1;
        }
    }
    PauliString::from_letters(n, Complex64::new(rng.random_range(-1.0..=1.0), 0.0), &letters).unwrap()
}

pub fn dense(m: &fermisim_core::oracle::SparseMatrix) -> CMatrix {
    m.to_dense().unwrap()
}
