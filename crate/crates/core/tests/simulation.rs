mod common;

use std::f64::consts::PI;

use fermisim_core::fermion::build_pairing;
use fermisim_core::jw::jw_hamiltonian;
use fermisim_core::oracle::{pe_exact_distribution, PeEvolution, PeInput};
use fermisim_core::phase_estimation::{
    mixed_work_distribution, run_phase_estimation, trotter_propagator, work_distribution, PeakThreshold,
};
use fermisim_core::{Complex64, Engine, GateOp, GateSequence, InputState, PeConfig, RngStream, RotationAxis, StateVector, TrotterOrder};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_ops(rng: &mut impl Rng, n: usize, len: usize) -> Vec<GateOp> {
    (0..len)
        .map(|_| {
            let q = rng.random_range(1..=n);
            let mut r = rng.random_range(1..=n);
            while n > 1 && r == q {
                r = rng.random_range(1..=n);
            }
            let angle = rng.random_range(-PI..PI);
            match rng.random_range(0..if n > 1 { 6 } else { 3 }) {
                0 => GateOp::Rot { axis: [RotationAxis::X, RotationAxis::Y, RotationAxis::Z][rng.random_range(0..3)], qubit: q, angle },
                1 => GateOp::H { qubit: q },
                2 => GateOp::GlobalPhase { angle },
                3 => GateOp::ZZ { a: q, b: r, angle },
                4 => GateOp::CRotZ { control: q, target: r, angle },
                _ => GateOp::CPhase { control: q, angle },
            }
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gates_preserve_the_norm(seed in any::<u64>(), n in 1usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = StateVector::new_random_state(n, &mut rng).unwrap();
        s.apply_sequence(&GateSequence::from_ops(n, random_ops(&mut rng, n, 40)).unwrap()).unwrap();
        prop_assert!((s.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sequence_then_inverse_is_identity(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s0 = StateVector::new_random_state(n, &mut rng).unwrap();
        let seq = GateSequence::from_ops(n, random_ops(&mut rng, n, 30)).unwrap();
        let mut s = s0.clone();
        s.apply_sequence(&seq).unwrap();
        s.apply_sequence(&seq.inverse()).unwrap();
        let err = s.amplitudes().iter().zip(s0.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn fast_and_gate_qft_agree(seed in any::<u64>(), s in 0usize..=3, w in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let state = StateVector::new_random_state(s + w, &mut rng).unwrap();
        let (mut a, mut b) = (state.clone(), state);
        a.inverse_qft(s + 1, w).unwrap();
        b.inverse_qft_via_gates(s + 1, w).unwrap();
        let err = a.amplitudes().iter().zip(b.amplitudes()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn energy_and_bin_mappings_invert(w in 1usize..=10, dt in 0.01f64..3.0, e_max in -5.0f64..5.0) {
        let h = fermisim_core::FermionHamiltonian::new(1).unwrap();
        let c = PeConfig { dt, e_max, ..PeConfig::for_hamiltonian(&h, w).unwrap() };
        for m in 0..c.bins() {
            prop_assert_eq!(c.bin_from_energy(c.energy_from_bin(m).unwrap()), m);
        }
    }

    #[test]
    fn analytic_distribution_is_normalized(seed in any::<u64>(), n in 1usize..=4, w in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = common::random_hamiltonian(&mut rng, n);
        let c = PeConfig { intervals: rng.random_range(1..=3), ..PeConfig::for_hamiltonian(&h, w).unwrap() };
        let psi = StateVector::new_random_state(n, &mut rng).unwrap();
        for input in [PeInput::Mixed, PeInput::State(psi.amplitudes())] {
            for ev in [PeEvolution::Trotter, PeEvolution::Exact] {
                let d = pe_exact_distribution(&h, &c, input, ev).unwrap();
                prop_assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            }
        }
    }
}

fn config(w: usize, order: TrotterOrder, intervals: usize) -> impl Fn(&fermisim_core::FermionHamiltonian) -> PeConfig {
    move |h| PeConfig { trotter_order: order, intervals, ..PeConfig::for_hamiltonian(h, w).unwrap() }
}

#[test]
fn simulated_distribution_matches_the_analytic_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, order, intervals) in [(2, TrotterOrder::First, 1), (3, TrotterOrder::Second, 2), (4, TrotterOrder::First, 3)] {
        let h = common::random_hamiltonian(&mut rng, n);
        let c = config(5, order, intervals)(&h);
        let p = jw_hamiltonian(&h).unwrap();
        let prop = trotter_propagator(&p, &c).unwrap();
        let psi = StateVector::new_random_state(n, &mut rng).unwrap();
        let sim = work_distribution(&prop, 5, psi.amplitudes());
        for ev in [PeEvolution::Trotter, PeEvolution::CompiledGates] {
            let exact = pe_exact_distribution(&h, &c, PeInput::State(psi.amplitudes()), ev).unwrap();
            let err = sim.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-9, "n={n} {ev:?}: {err}");
        }
        let mixed = mixed_work_distribution(&prop, 5).unwrap();
        let exact = pe_exact_distribution(&h, &c, PeInput::Mixed, PeEvolution::Trotter).unwrap();
        let err = mixed.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-9, "mixed n={n}: {err}");
    }
}

#[test]
fn spectral_mixed_path_matches_column_average() {
    // Five qubits is above the threshold where the spectral path takes over.
    let h = common::random_hamiltonian(&mut ChaCha8Rng::seed_from_u64(5), 5);
    let c = config(4, TrotterOrder::First, 1)(&h);
    let prop = trotter_propagator(&jw_hamiltonian(&h).unwrap(), &c).unwrap();
    let spectral = mixed_work_distribution(&prop, 4).unwrap();
    let mut direct = vec![0.0; 16];
    for y in 0..32 {
        let mut e = vec![Complex64::new(0.0, 0.0); 32];
        e[y] = Complex64::new(1.0, 0.0);
        for (acc, v) in direct.iter_mut().zip(work_distribution(&prop, 4, &e)) {
            *acc += v / 32.0;
        }
    }
    let err = spectral.iter().zip(&direct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-10, "{err}");
}

#[test]
fn runs_are_reproducible_from_the_seed() {
    let h = build_pairing(2, 0.5, 1.0).unwrap();
    for engine in [Engine::Factored, Engine::Circuit] {
        for fresh in [true, false] {
            let c = PeConfig { engine, fresh_per_shot: fresh, shots: 300, seed: 42, ..PeConfig::for_hamiltonian(&h, 4).unwrap() };
            let a = run_phase_estimation(&h, &c).unwrap();
            let b = run_phase_estimation(&h, &c).unwrap();
            assert_eq!(a.to_csv(true), b.to_csv(true));
            let other = run_phase_estimation(&h, &PeConfig { seed: 43, ..c.clone() }).unwrap();
            assert_ne!(a.counts, other.counts, "{engine:?} fresh={fresh}");
        }
    }
}

#[test]
fn circuit_engine_with_fresh_inputs_matches_the_mixed_distribution() {
    let h = build_pairing(1, 0.3, 1.0).unwrap();
    let c = PeConfig { engine: Engine::Circuit, shots: 4000, seed: 3, ..PeConfig::for_hamiltonian(&h, 4).unwrap() };
    let hist = run_phase_estimation(&h, &c).unwrap();
    let exact = pe_exact_distribution(&h, &c, PeInput::Mixed, PeEvolution::Trotter).unwrap();
    let tv: f64 = (0..16).map(|m| (hist.probability(m) - exact[m]).abs()).sum::<f64>() / 2.0;
    assert!(tv < 0.05, "{tv}");
}

#[test]
fn basis_input_lands_on_its_energy() {
    // n_1 + 2 n_2 is diagonal: |occupied, empty> has energy 1.
    let mut h = fermisim_core::FermionHamiltonian::new(2).unwrap();
    h.add_one_body(1, 1, 1.0).unwrap();
    h.add_one_body(2, 2, 2.0).unwrap();
    let c = PeConfig {
        work_qubits: 3,
        dt: 2.0 * PI / 8.0,
        e_max: 4.0,
        input: InputState::Basis("01".into()),
        fresh_per_shot: false,
        ..PeConfig::for_hamiltonian(&h, 3).unwrap()
    };
    let hist = run_phase_estimation(&h, &c).unwrap();
    let peaks = hist.peaks(PeakThreshold::default());
    assert_eq!(peaks.len(), 1);
    assert!((peaks[0].energy - 1.0).abs() < 1e-12);
    assert_eq!(peaks[0].probability, 1.0);
}

#[test]
fn fixed_input_reuses_one_state() {
    let a = StateVector::new_random_state(3, &mut RngStream::new(9, u64::MAX)).unwrap();
    let b = StateVector::new_random_state(3, &mut RngStream::new(9, u64::MAX)).unwrap();
    assert_eq!(a, b);
}
