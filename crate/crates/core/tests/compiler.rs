mod common;

use fermisim_core::compiler::{compile_controlled_evolution, compile_string_evolution, compile_trotter_step};
use fermisim_core::oracle::{expm_hermitian, gate_matrix, pauli_matrix, pauli_string_matrix, CMatrix};
use fermisim_core::{GateSequence, PauliHamiltonian, TrotterOrder};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn string_evolution_is_exact(seed in any::<u64>(), n in 1usize..=6, dt in -2.0f64..2.0) {
        let p = common::random_in_scope_string(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let got = gate_matrix(&compile_string_evolution(&p, dt).unwrap()).unwrap();
        let want = expm_hermitian(&pauli_string_matrix(&p).unwrap().to_dense().unwrap(), dt).unwrap();
        prop_assert!(got.max_abs_diff(&want) <= 1e-10, "{p}: {}", got.max_abs_diff(&want));
    }

    #[test]
    fn controlled_evolution_acts_only_when_control_is_set(seed in any::<u64>(), n in 1usize..=4, dt in -1.5f64..1.5, reps in 1usize..=3) {
        let p = common::random_in_scope_string(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let h = PauliHamiltonian::from_labels(0.3, &[(&p.label(), p.coeff.re)]).unwrap();
        let seq = compile_controlled_evolution(&h, dt, 1, n + 1, reps, TrotterOrder::First).unwrap();
        let full = gate_matrix(&GateSequence::from_ops(n + 1, seq.ops().to_vec()).unwrap()).unwrap();
        let u = gate_matrix(&compile_trotter_step(&h, dt * reps as f64, TrotterOrder::First).unwrap()).unwrap();
        let dim = 1 << n;
        let mut err_off: f64 = 0.0;
        let mut err_on: f64 = 0.0;
        let mut leak: f64 = 0.0;
        for r in 0..dim {
            for c in 0..dim {
                let id = if r == c { 1.0 } else { 0.0 };
                err_off = err_off.max((full.get(2 * r, 2 * c) - id).norm());
                err_on = err_on.max((full.get(2 * r + 1, 2 * c + 1) - u.get(r, c)).norm());
                leak = leak.max(full.get(2 * r + 1, 2 * c).norm()).max(full.get(2 * r, 2 * c + 1).norm());
            }
        }
        prop_assert!(err_off <= 1e-10 && err_on <= 1e-10 && leak <= 1e-10, "{p}: {err_off} {err_on} {leak}");
    }

    #[test]
    fn gate_text_round_trips(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let strings: Vec<_> = (0..4).map(|_| common::random_in_scope_string(&mut rng, n)).collect();
        let labels: Vec<(String, f64)> = strings.iter().map(|s| (s.label(), s.coeff.re)).collect();
        let refs: Vec<(&str, f64)> = labels.iter().map(|(l, c)| (l.as_str(), *c)).collect();
        let h = PauliHamiltonian::from_labels(0.1, &refs).unwrap();
        let seq = compile_trotter_step(&h, 0.37, TrotterOrder::Second).unwrap();
        prop_assert_eq!(GateSequence::parse_text(&seq.to_text()).unwrap(), seq);
    }
}

#[test]
fn second_order_step_is_time_symmetric() {
    let h = PauliHamiltonian::from_labels(0.2, &[("XZX", 0.8), ("ZZI", -0.4), ("IYY", 0.6)]).unwrap();
    let fwd = gate_matrix(&compile_trotter_step(&h, 0.3, TrotterOrder::Second).unwrap()).unwrap();
    let back = gate_matrix(&compile_trotter_step(&h, -0.3, TrotterOrder::Second).unwrap()).unwrap();
    assert!(fwd.mul(&back).max_abs_diff(&CMatrix::identity(8)) < 1e-12);
}

#[test]
fn commuting_terms_are_exact_at_any_step() {
    let h = PauliHamiltonian::from_labels(-0.7, &[("ZZI", 0.8), ("IZZ", -0.4), ("ZIZ", 0.6), ("ZII", 1.1)]).unwrap();
    let got = gate_matrix(&compile_trotter_step(&h, 1.7, TrotterOrder::First).unwrap()).unwrap();
    let want = expm_hermitian(&pauli_matrix(&h).unwrap().to_dense().unwrap(), 1.7).unwrap();
    assert!(got.max_abs_diff(&want) < 1e-12);
}
