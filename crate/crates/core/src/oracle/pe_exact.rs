//! Analytic outcome distribution of phase estimation.
//!
//! An eigenvector of the step unitary with phase `φ` (eigenvalue `e^{2πiφ}`)
//! contributes `|sin(πNδ) / (N sin(πδ))|²` to bin `m`, with `δ = φ - m/N`,
//! weighted by the input state's overlap with it.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::fock::{gate_matrix, pauli_matrix, pauli_string_matrix, MAX_PAULI_QUBITS};
use super::jacobi::{eigensolve, unitary_eigen, DEFAULT_CLUSTER_TOL};
use super::matrix::SparseMatrix;
use crate::compiler::{compile_trotter_step, trotter_factors};
use crate::error::{Error, Result};
use crate::fermion::FermionHamiltonian;
use crate::jw::jw_hamiltonian;
use crate::pauli::PauliHamiltonian;
use crate::phase_estimation::PeConfig;

/// Input state of the analytic distribution.
#[derive(Debug, Clone, Copy)]
pub enum PeInput<'a> {
    /// The maximally mixed state, equal to the average over random inputs.
    Mixed,
    State(&'a [Complex64]),
}

/// Which unitary the work register reads out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeEvolution {
    /// The product formula the simulator runs, evaluated with exact
    /// exponentials of each string.
    Trotter,
    /// `exp(-i(H - e_max)dt)` itself.
    Exact,
    /// The matrix of the compiled gate sequence (at most 8 qubits).
    CompiledGates,
}

/// `|sin(πNδ) / (N sin(πδ))|²`, equal to 1 at integer `δ`.
pub fn dirichlet_weight(delta: f64, bins: usize) -> f64 {
    let n = bins as f64;
    let s = (PI * delta).sin();
    if s.abs() < 1e-12 {
        return 1.0;
    }
    let r = (PI * n * delta).sin() / (n * s);
    r * r
}

/// Eigenphases `φ_k ∈ [0, 1)` of the readout unitary paired with the weight
/// of the input on each eigenvector.
fn weighted_phases(p: &PauliHamiltonian, cfg: &PeConfig, input: PeInput, evolution: PeEvolution) -> Result<Vec<(f64, f64)>> {
    let n = p.n_qubits();
    let dim = 1usize << n;
    if n > MAX_PAULI_QUBITS {
        return Err(Error::Resource(format!("{n} qubits exceeds the analytic-distribution cap of {MAX_PAULI_QUBITS}")));
    }
    if let PeInput::State(psi) = input {
        if psi.len() != dim {
            return Err(Error::Dimension(format!("input of length {} for {n} qubits", psi.len())));
        }
    }
    let weight = |v: &[Complex64], block: &[usize]| -> f64 {
        match input {
            PeInput::Mixed => 1.0 / dim as f64,
            PeInput::State(psi) => block.iter().zip(v).map(|(&i, a)| a.conj() * psi[i]).sum::<Complex64>().norm_sqr(),
        }
    };
    let shifted = p.shifted(cfg.e_max);
    let reps = cfg.intervals as f64;
    let mut out = Vec::with_capacity(dim);
    match evolution {
        PeEvolution::Exact => {
            let hm = pauli_matrix(&shifted)?;
            for block in hm.components(0.0) {
                let sol = eigensolve(&hm.submatrix(&block), DEFAULT_CLUSTER_TOL)?;
                let vecs = sol.eigenvectors.expect("eigensolve returns vectors");
                for (e, v) in sol.eigenvalues.iter().zip(&vecs) {
                    out.push(((-e * cfg.dt / (2.0 * PI)).rem_euclid(1.0), weight(v, &block)));
                }
            }
        }
        PeEvolution::Trotter | PeEvolution::CompiledGates => {
            let step_dt = cfg.dt / reps;
            let step = if evolution == PeEvolution::Trotter {
                let mut u = SparseMatrix::identity(dim);
                for (s, t) in trotter_factors(&shifted, step_dt, cfg.trotter_order) {
                    let theta = s.coeff.re * t;
                    let unit = s.clone().scaled(Complex64::new(1.0 / s.coeff.re, 0.0));
                    let f = SparseMatrix::identity(dim)
                        .scale(Complex64::new(theta.cos(), 0.0))
                        .add(&pauli_string_matrix(&unit)?.scale(Complex64::new(0.0, -theta.sin())));
                    u = f.mul(&u);
                }
                u.scale(Complex64::from_polar(1.0, -shifted.constant() * step_dt))
            } else {
                let g = gate_matrix(&compile_trotter_step(&shifted, step_dt, cfg.trotter_order)?)?;
                let mut u = SparseMatrix::zeros(dim);
                for r in 0..dim {
                    for c in 0..dim {
                        let v = g.get(r, c);
                        if v != Complex64::new(0.0, 0.0) {
                            u.add_entry(r, c, v);
                        }
                    }
                }
                u
            };
            for block in step.components(0.0) {
                let eig = unitary_eigen(&step.submatrix(&block))?;
                for (mu, v) in eig.values.iter().zip(&eig.vectors) {
                    out.push(((reps * mu.arg() / (2.0 * PI)).rem_euclid(1.0), weight(v, &block)));
                }
            }
        }
    }
    Ok(out)
}

/// Probability of each work-register outcome, the distribution the
/// simulator samples from when run with the same configuration.
pub fn pe_exact_distribution(h: &FermionHamiltonian, cfg: &PeConfig, input: PeInput, evolution: PeEvolution) -> Result<Vec<f64>> {
    cfg.validate()?;
    let p = jw_hamiltonian(h)?;
    let bins = cfg.bins();
    let mut dist = vec![0.0; bins];
    for (phi, w) in weighted_phases(&p, cfg, input, evolution)? {
        if w == 0.0 {
            continue;
        }
        for (m, d) in dist.iter_mut().enumerate() {
            *d += w * dirichlet_weight(phi - m as f64 / bins as f64, bins);
        }
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::TrotterOrder;
    use crate::phase_estimation::{Engine, InputState};

    fn cfg(w: usize, dt: f64, e_max: f64) -> PeConfig {
        PeConfig {
            work_qubits: w,
            dt,
            intervals: 1,
            trotter_order: TrotterOrder::First,
            e_max,
            shots: 1,
            seed: 0,
            input: InputState::Random,
            fresh_per_shot: true,
            engine: Engine::Factored,
        }
    }

    #[test]
    fn dyadic_phase_is_a_single_bin() {
        // n_1 has eigenvalues 0 and 1; dt = 2π/4 puts them on bins 0 and 3.
        let mut h = FermionHamiltonian::new(1).unwrap();
        h.add_one_body(1, 1, 1.0).unwrap();
        let c = cfg(2, 2.0 * PI / 4.0, 0.0);
        for ev in [PeEvolution::Trotter, PeEvolution::Exact, PeEvolution::CompiledGates] {
            let d = pe_exact_distribution(&h, &c, PeInput::Mixed, ev).unwrap();
            assert!((d[0] - 0.5).abs() < 1e-12 && (d[3] - 0.5).abs() < 1e-12, "{ev:?}: {d:?}");
        }
    }

    #[test]
    fn off_grid_phase_sums_to_one() {
        let h = crate::fermion::build_pairing(2, 0.7, 0.4).unwrap();
        let c = cfg(4, 0.37, 1.3);
        let d = pe_exact_distribution(&h, &c, PeInput::Mixed, PeEvolution::Trotter).unwrap();
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }
}
