use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fermisim_core::compiler::compile_trotter_step;
use fermisim_core::fermion::{build_hubbard, build_pairing};
use fermisim_core::jw::jw_hamiltonian;
use fermisim_core::oracle::fock_spectrum;
use fermisim_core::phase_estimation::run_phase_estimation;
use fermisim_core::{PeConfig, RngStream, StateVector, TrotterOrder};

fn jordan_wigner(c: &mut Criterion) {
    let mut g = c.benchmark_group("jordan_wigner");
    for levels in [2, 4, 6] {
        let h = build_pairing(levels, 1.0, 1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("pairing", 2 * levels), &h, |b, h| b.iter(|| jw_hamiltonian(black_box(h)).unwrap()));
    }
    g.finish();
}

fn compile(c: &mut Criterion) {
    let mut g = c.benchmark_group("compile_trotter_step");
    for levels in [2, 4, 6] {
        let p = jw_hamiltonian(&build_pairing(levels, 1.0, 1.0).unwrap()).unwrap();
        g.bench_with_input(BenchmarkId::new("pairing", 2 * levels), &p, |b, p| {
            b.iter(|| compile_trotter_step(black_box(p), 0.1, TrotterOrder::First).unwrap())
        });
    }
    g.finish();
}

fn apply_step(c: &mut Criterion) {
    let mut g = c.benchmark_group("apply_trotter_step");
    g.sample_size(20);
    for sites in [3, 5, 6] {
        let p = jw_hamiltonian(&build_hubbard(sites, 1.0, 1.0, 2.0, false).unwrap()).unwrap();
        let seq = compile_trotter_step(&p, 0.1, TrotterOrder::First).unwrap();
        let state = StateVector::new_random_state(2 * sites, &mut RngStream::new(1, 0)).unwrap();
        g.bench_with_input(BenchmarkId::new("hubbard", 2 * sites), &seq, |b, seq| {
            b.iter_batched(|| state.clone(), |mut s| s.apply_sequence(seq).unwrap(), criterion::BatchSize::LargeInput)
        });
    }
    g.finish();
}

fn phase_estimation(c: &mut Criterion) {
    let mut g = c.benchmark_group("phase_estimation");
    g.sample_size(10);
    let h = build_hubbard(3, 1.0, 1.0, 2.0, false).unwrap();
    for fresh in [false, true] {
        let cfg = PeConfig { fresh_per_shot: fresh, shots: 1000, ..PeConfig::for_hamiltonian(&h, 8).unwrap() };
        let name = if fresh { "fresh_input" } else { "fixed_input" };
        g.bench_function(name, |b| b.iter(|| run_phase_estimation(&h, black_box(&cfg)).unwrap()));
    }
    g.finish();
}

fn exact_spectrum(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact_spectrum");
    g.sample_size(10);
    for levels in [3, 4, 5] {
        let h = build_pairing(levels, 1.0, 1.0).unwrap();
        g.bench_with_input(BenchmarkId::new("pairing", 2 * levels), &h, |b, h| b.iter(|| fock_spectrum(black_box(h), 1e-6).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, jordan_wigner, compile, apply_step, phase_estimation, exact_spectrum);
criterion_main!(benches);
