//! Phase estimation of `exp(-i(H - e_max)dt)`: configuration, the two
//! simulation engines, histograms, peak finding and the aliasing scan.
//!
//! Work qubit `j` (register qubit `s + j`) controls `2^(j-1)` applications of
//! the evolution. An eigenvalue `E` produces the phase
//! `φ = (e_max - E)·dt / 2π (mod 1)`, read out as `m ≈ φ·2^w`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::compiler::{compile_controlled_evolution, compile_trotter_step, GateSequence, TrotterOrder};
use crate::error::{Error, Result};
use crate::fermion::FermionHamiltonian;
use crate::jw::jw_hamiltonian;
use crate::oracle::jacobi::MAX_DENSE_DIM;
use crate::oracle::{dirichlet_weight, unitary_eigen, Level, SparseMatrix};
use crate::pauli::PauliHamiltonian;
use crate::statevector::{PreparedSequence, RngStream, Sampler, StateVector, FIXED_INPUT_STREAM, MAX_QUBITS};

/// Initial state of the simulation register.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputState {
    /// Gaussian random amplitudes, normalized.
    Random,
    /// A computational basis state, qubit 1 first.
    Basis(String),
    /// Explicit normalized amplitudes.
    Amplitudes(Vec<Complex64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Simulate only the system register: the work register is a product of
    /// `|t⟩` branches, so the state after the controlled evolutions is
    /// `Σ_t |t⟩ ⊗ V^t ψ`, and the inverse QFT is an FFT along `t`.
    Factored,
    /// The literal circuit on `s + w` qubits with controlled gates.
    Circuit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeConfig {
    pub work_qubits: usize,
    pub dt: f64,
    pub intervals: usize,
    pub trotter_order: TrotterOrder,
    pub e_max: f64,
    pub shots: usize,
    pub seed: u64,
    pub input: InputState,
    /// Draw a new random input state for every shot.
    pub fresh_per_shot: bool,
    pub engine: Engine,
}

/// Largest time step that keeps the energy range `[lo, hi]` inside one
/// period of the phase.
pub fn max_dt(lo: f64, hi: f64) -> Result<f64> {
    if !(hi > lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Config(format!("degenerate energy interval [{lo}, {hi}]")));
    }
    Ok(2.0 * PI / (hi - lo))
}

/// `±(|e0| + Σ|c| + |constant|)` over the Pauli form, which bounds the
/// spectrum because every Pauli string has unit norm.
pub fn default_energy_bounds(h: &FermionHamiltonian) -> Result<(f64, f64)> {
    let p = jw_hamiltonian(h)?;
    let b = h.e0().abs() + p.strings().iter().map(|s| s.coeff.re.abs()).sum::<f64>() + p.constant().abs();
    if b == 0.0 {
        Ok((-1.0, 1.0))
    } else {
        Ok((-b, b))
    }
}

/// `(e_max, dt)` for `w` work qubits such that the readout window
/// `[e_max - 2π/dt, e_max]` has one bin of margin on each side of `[lo, hi]`
/// (only above `hi` when `w = 1`).
pub fn default_window(lo: f64, hi: f64, w: usize) -> Result<(f64, f64)> {
    max_dt(lo, hi)?;
    let bins = (1u64 << w) as f64;
    let margins = if w >= 2 { 2.0 } else { 1.0 };
    let width = (hi - lo) * bins / (bins - margins);
    Ok((hi + width / bins, 2.0 * PI / width))
}

impl PeConfig {
    /// Defaults for `h`: window from [`default_energy_bounds`], first-order
    /// Trotter with one interval, fresh random input per shot.
    pub fn for_hamiltonian(h: &FermionHamiltonian, work_qubits: usize) -> Result<Self> {
        if work_qubits == 0 {
            return Err(Error::Config("at least one work qubit is required".into()));
        }
        let (lo, hi) = default_energy_bounds(h)?;
        let (e_max, dt) = default_window(lo, hi, work_qubits)?;
        Ok(Self {
            work_qubits,
            dt,
            intervals: 1,
            trotter_order: TrotterOrder::First,
            e_max,
            shots: 10_000,
            seed: 0,
            input: InputState::Random,
            fresh_per_shot: true,
            engine: Engine::Factored,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.work_qubits == 0 {
            return Err(Error::Config("at least one work qubit is required".into()));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("time step must be positive, got {}", self.dt)));
        }
        if self.intervals == 0 {
            return Err(Error::Config("intervals must be positive".into()));
        }
        if self.shots == 0 {
            return Err(Error::Config("shots must be positive".into()));
        }
        if !self.e_max.is_finite() {
            return Err(Error::Config(format!("e_max must be finite, got {}", self.e_max)));
        }
        Ok(())
    }

    pub fn bins(&self) -> usize {
        1 << self.work_qubits
    }

    /// Energy spanned by one bin.
    pub fn bin_width(&self) -> f64 {
        2.0 * PI / (self.dt * self.bins() as f64)
    }

    pub fn phi(&self, m: usize) -> f64 {
        m as f64 / self.bins() as f64
    }

    pub fn energy_from_bin(&self, m: usize) -> Result<f64> {
        if m >= self.bins() {
            return Err(Error::IndexOutOfRange { index: m, n: self.bins() - 1 });
        }
        Ok(self.energy_from_phi(self.phi(m)))
    }

    pub fn energy_from_phi(&self, phi: f64) -> f64 {
        self.e_max - 2.0 * PI * phi / self.dt
    }

    /// Nearest bin, wrapping energies outside the window.
    pub fn bin_from_energy(&self, energy: f64) -> usize {
        let phi = (self.e_max - energy) * self.dt / (2.0 * PI);
        let m = (phi * self.bins() as f64).round() as i64;
        m.rem_euclid(self.bins() as i64) as usize
    }
}

/// A unitary step acting in place on a system-register amplitude vector.
pub trait Propagator: Sync {
    fn n_qubits(&self) -> usize;
    fn apply(&self, amps: &mut [Complex64]);
}

/// A gate sequence applied a fixed number of times.
pub struct RepeatedSequence {
    prepared: PreparedSequence,
    repetitions: usize,
}

impl RepeatedSequence {
    pub fn new(seq: &GateSequence, n_qubits: usize, repetitions: usize) -> Result<Self> {
        Ok(Self { prepared: PreparedSequence::new(seq, n_qubits)?, repetitions })
    }
}

impl Propagator for RepeatedSequence {
    fn n_qubits(&self) -> usize {
        self.prepared.n_qubits()
    }

    fn apply(&self, amps: &mut [Complex64]) {
        for _ in 0..self.repetitions {
            self.prepared.apply(amps);
        }
    }
}

/// The Trotterized `exp(-i(H - e_max)dt)` as `intervals` steps of `dt/intervals`.
pub fn trotter_propagator(p: &PauliHamiltonian, cfg: &PeConfig) -> Result<RepeatedSequence> {
    let step = compile_trotter_step(&p.shifted(cfg.e_max), cfg.dt / cfg.intervals as f64, cfg.trotter_order)?;
    RepeatedSequence::new(&step, p.n_qubits(), cfg.intervals)
}

/// Outcome distribution of the work register for input `psi`.
pub fn work_distribution<P: Propagator + ?Sized>(prop: &P, work_qubits: usize, psi: &[Complex64]) -> Vec<f64> {
    let dim = psi.len();
    let bins = 1usize << work_qubits;
    let mut table = vec![Complex64::new(0.0, 0.0); dim * bins];
    let mut cur = psi.to_vec();
    for t in 0..bins {
        for (x, a) in cur.iter().enumerate() {
            table[x * bins + t] = *a;
        }
        if t + 1 < bins {
            prop.apply(&mut cur);
        }
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(bins);
    let norm = 1.0 / (bins as f64 * bins as f64);
    let rows: Vec<Vec<f64>> = table
        .par_chunks_mut(bins)
        .map(|row| {
            fft.process(row);
            row.iter().map(|z| z.norm_sqr() * norm).collect()
        })
        .collect();
    let mut p = vec![0.0; bins];
    for row in rows {
        for (acc, v) in p.iter_mut().zip(row) {
            *acc += v;
        }
    }
    p
}

/// Outcome distribution averaged over Haar-random inputs, i.e. for the
/// maximally mixed state.
///
/// Small registers average the basis-state distributions directly. Larger
/// ones use the equivalent spectral form: every eigenvector of the step
/// carries weight `1/d`, so only the eigenphases of the step are needed,
/// found block by block from its matrix.
pub fn mixed_work_distribution<P: Propagator + ?Sized>(prop: &P, work_qubits: usize) -> Result<Vec<f64>> {
    let dim = 1usize << prop.n_qubits();
    let bins = 1usize << work_qubits;
    let mut p = vec![0.0; bins];
    if dim <= SMALL_MIXED_DIM {
        let parts: Vec<Vec<f64>> = (0..dim)
            .into_par_iter()
            .map(|y| {
                let mut e = vec![Complex64::new(0.0, 0.0); dim];
                e[y] = Complex64::new(1.0, 0.0);
                work_distribution(prop, work_qubits, &e)
            })
            .collect();
        for part in parts {
            for (acc, v) in p.iter_mut().zip(part) {
                *acc += v / dim as f64;
            }
        }
        return Ok(p);
    }
    for phi in step_eigenphases(prop)? {
        for (m, acc) in p.iter_mut().enumerate() {
            *acc += dirichlet_weight(phi - m as f64 / bins as f64, bins) / dim as f64;
        }
    }
    Ok(p)
}

const SMALL_MIXED_DIM: usize = 16;

/// Entries below this are rounding residue of cancelled amplitudes.
const STEP_ENTRY_TOL: f64 = 1e-13;

/// Eigenphases in `[0, 1)` of the step, with multiplicity.
pub fn step_eigenphases<P: Propagator + ?Sized>(prop: &P) -> Result<Vec<f64>> {
    let dim = 1usize << prop.n_qubits();
    let columns: Vec<Vec<(usize, Complex64)>> = (0..dim)
        .into_par_iter()
        .map(|y| {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[y] = Complex64::new(1.0, 0.0);
            prop.apply(&mut e);
            e.into_iter().enumerate().filter(|(_, a)| a.norm() > STEP_ENTRY_TOL).collect()
        })
        .collect();
    let mut step = SparseMatrix::zeros(dim);
    for (y, col) in columns.into_iter().enumerate() {
        for (x, a) in col {
            step.add_entry(x, y, a);
        }
    }
    let blocks = step.components(0.0);
    let phases: Vec<Vec<f64>> = blocks
        .par_iter()
        .map(|block| {
            if block.len() > MAX_DENSE_DIM {
                return Err(Error::Resource(format!("step block of dimension {} exceeds {MAX_DENSE_DIM}", block.len())));
            }
            let eig = unitary_eigen(&step.submatrix(block))?;
            Ok(eig.values.iter().map(|mu| (mu.arg() / (2.0 * PI)).rem_euclid(1.0)).collect())
        })
        .collect::<Result<_>>()?;
    Ok(phases.concat())
}

/// The fixed input vector for configurations that do not redraw per shot.
pub fn input_vector(input: &InputState, n: usize, seed: u64) -> Result<Vec<Complex64>> {
    let state = match input {
        InputState::Random => StateVector::new_random_state(n, &mut RngStream::new(seed, FIXED_INPUT_STREAM))?,
        InputState::Basis(bits) => StateVector::new_basis_state(n, bits)?,
        InputState::Amplitudes(a) => {
            if a.len() != 1 << n {
                return Err(Error::Dimension(format!("{} amplitudes for a {n}-qubit register", a.len())));
            }
            StateVector::from_amplitudes(a.clone())?
        }
    };
    Ok(state.amplitudes().to_vec())
}

fn check_resources(s: usize, cfg: &PeConfig) -> Result<()> {
    if s + cfg.work_qubits > MAX_QUBITS {
        return Err(Error::Resource(format!(
            "{s} simulation + {} work qubits exceeds the {MAX_QUBITS}-qubit budget",
            cfg.work_qubits
        )));
    }
    Ok(())
}

fn sample_histogram(p: &[f64], cfg: &PeConfig) -> Result<Vec<u64>> {
    let sampler = Sampler::new(p)?;
    let mut counts = vec![0u64; p.len()];
    for k in 0..cfg.shots {
        counts[sampler.draw(&mut RngStream::new(cfg.seed, k as u64))] += 1;
    }
    Ok(counts)
}

/// Exact outcome distribution the configured simulation samples from.
pub fn outcome_distribution<P: Propagator + ?Sized>(prop: &P, cfg: &PeConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = prop.n_qubits();
    check_resources(n, cfg)?;
    if cfg.fresh_per_shot && cfg.input == InputState::Random {
        mixed_work_distribution(prop, cfg.work_qubits)
    } else {
        Ok(work_distribution(prop, cfg.work_qubits, &input_vector(&cfg.input, n, cfg.seed)?))
    }
}

/// Phase estimation with an arbitrary system-register step `V = exp(-i(H - e_max)dt)`.
///
/// With a fresh random input per shot the outcome of each shot is distributed
/// according to the input-averaged distribution, so shots are drawn from it
/// directly.
pub fn run_with_propagator<P: Propagator + ?Sized>(prop: &P, cfg: &PeConfig) -> Result<SpectrumHistogram> {
    let p = outcome_distribution(prop, cfg)?;
    let counts = sample_histogram(&p, cfg)?;
    Ok(SpectrumHistogram { config: cfg.clone(), counts })
}

fn circuit_marginal(p: &PauliHamiltonian, cfg: &PeConfig, psi: StateVector, controlled: &[PreparedSequence]) -> Result<Vec<f64>> {
    let s = p.n_qubits();
    let w = cfg.work_qubits;
    let mut plus = StateVector::new_basis_state(w, &"0".repeat(w))?;
    for q in 1..=w {
        plus.apply_gate(&crate::compiler::GateOp::H { qubit: q })?;
    }
    let mut state = psi.tensor(&plus)?;
    let mut amps = state.amplitudes().to_vec();
    for (j, seq) in controlled.iter().enumerate() {
        for _ in 0..1usize << j {
            seq.apply(&mut amps);
        }
    }
    state = StateVector::from_amplitudes(amps)?;
    state.inverse_qft_via_gates(s + 1, w)?;
    state.work_marginal(s + 1, w)
}

fn run_circuit(p: &PauliHamiltonian, cfg: &PeConfig) -> Result<SpectrumHistogram> {
    let s = p.n_qubits();
    let n = s + cfg.work_qubits;
    let shifted = p.shifted(cfg.e_max);
    let controlled = (1..=cfg.work_qubits)
        .map(|j| {
            let seq = compile_controlled_evolution(&shifted, cfg.dt, cfg.intervals, s + j, 1, cfg.trotter_order)?;
            PreparedSequence::new(&seq, n)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts = vec![0u64; cfg.bins()];
    if cfg.fresh_per_shot && cfg.input == InputState::Random {
        for k in 0..cfg.shots {
            let mut rng = RngStream::new(cfg.seed, k as u64);
            let psi = StateVector::new_random_state(s, &mut rng)?;
            let marginal = circuit_marginal(p, cfg, psi, &controlled)?;
            counts[Sampler::new(&marginal)?.draw(&mut rng)] += 1;
        }
    } else {
        let psi = StateVector::from_amplitudes(input_vector(&cfg.input, s, cfg.seed)?)?;
        let marginal = circuit_marginal(p, cfg, psi, &controlled)?;
        counts = sample_histogram(&marginal, cfg)?;
    }
    Ok(SpectrumHistogram { config: cfg.clone(), counts })
}

/// Full pipeline: Jordan-Wigner map, compile, simulate, sample.
pub fn run_phase_estimation(h: &FermionHamiltonian, cfg: &PeConfig) -> Result<SpectrumHistogram> {
    cfg.validate()?;
    check_resources(h.n_levels(), cfg)?;
    let p = jw_hamiltonian(h)?;
    match cfg.engine {
        Engine::Factored => run_with_propagator(&trotter_propagator(&p, cfg)?, cfg),
        Engine::Circuit => run_circuit(&p, cfg),
    }
}

/// Minimum bin count for a peak: the larger of an absolute floor and a
/// fraction of the shots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakThreshold {
    pub min_count: u64,
    pub min_fraction: f64,
}

impl Default for PeakThreshold {
    fn default() -> Self {
        Self { min_count: 5, min_fraction: 0.01 }
    }
}

impl PeakThreshold {
    pub fn count(&self, shots: usize) -> u64 {
        self.min_count.max((self.min_fraction * shots as f64).ceil() as u64)
    }
}

/// A run of adjacent above-threshold bins (cyclically).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub bins: Vec<usize>,
    /// Count-weighted mean phase.
    pub phi: f64,
    pub energy: f64,
    pub count: u64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumHistogram {
    pub config: PeConfig,
    pub counts: Vec<u64>,
}

impl SpectrumHistogram {
    pub fn shots(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn probability(&self, m: usize) -> f64 {
        self.counts[m] as f64 / self.shots() as f64
    }

    pub fn energy(&self, m: usize) -> f64 {
        self.config.energy_from_phi(self.config.phi(m))
    }

    /// `bin,phi,energy,count,probability` rows; zero-count bins only when `dense`.
    pub fn to_csv(&self, dense: bool) -> String {
        let mut out = String::from("bin,phi,energy,count,probability\n");
        for (m, &c) in self.counts.iter().enumerate() {
            if c == 0 && !dense {
                continue;
            }
            let _ = writeln!(out, "{},{},{},{},{}", m, self.config.phi(m), self.energy(m), c, self.probability(m));
        }
        out
    }

    pub fn peaks(&self, threshold: PeakThreshold) -> Vec<Peak> {
        let bins = self.counts.len();
        let cut = threshold.count(self.shots() as usize);
        let above: Vec<bool> = self.counts.iter().map(|&c| c >= cut && c > 0).collect();
        if !above.iter().any(|&a| a) {
            return Vec::new();
        }
        // Start scanning just after a below-threshold bin so wrapped runs stay whole.
        let start = match above.iter().position(|&a| !a) {
            Some(p) => p,
            None => 0,
        };
        let mut peaks = Vec::new();
        let mut run: Vec<usize> = Vec::new();
        for k in 0..bins {
            let m = (start + k) % bins;
            if above[m] {
                run.push(m);
            } else if !run.is_empty() {
                peaks.push(self.make_peak(std::mem::take(&mut run)));
            }
        }
        if !run.is_empty() {
            peaks.push(self.make_peak(run));
        }
        peaks.sort_by(|a, b| a.energy.total_cmp(&b.energy));
        peaks
    }

    fn make_peak(&self, bins: Vec<usize>) -> Peak {
        let n = self.counts.len() as f64;
        let first = bins[0] as f64;
        let count: u64 = bins.iter().map(|&m| self.counts[m]).sum();
        let weighted: f64 = bins
            .iter()
            .map(|&m| {
                let unwrapped = if (m as f64) < first { m as f64 + n } else { m as f64 };
                unwrapped * self.counts[m] as f64
            })
            .sum();
        let phi = (weighted / count as f64 / n).rem_euclid(1.0);
        Peak {
            bins,
            phi,
            energy: self.config.energy_from_phi(phi),
            count,
            probability: count as f64 / self.shots() as f64,
        }
    }
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        let mut r = vec![0.0; v.len()];
        let mut k = 0;
        while k < idx.len() {
            let mut end = k;
            while end + 1 < idx.len() && v[idx[end + 1]] == v[idx[k]] {
                end += 1;
            }
            let avg = 0.5 * (k + end) as f64 + 1.0;
            for &i in &idx[k..=end] {
                r[i] = avg;
            }
            k = end + 1;
        }
        r
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    if va == 0.0 || vb == 0.0 {
        // Constant sequences carry no ordering to disagree with.
        return 1.0;
    }
    cov / (va * vb).sqrt()
}

/// Histogram mass within one bin of each level.
pub fn level_masses(hist: &SpectrumHistogram, levels: &[Level]) -> Vec<f64> {
    let bins = hist.counts.len();
    levels
        .iter()
        .map(|l| {
            let m = hist.config.bin_from_energy(l.energy);
            let around = [(m + bins - 1) % bins, m, (m + 1) % bins];
            let mut seen = Vec::with_capacity(3);
            around
                .iter()
                .filter(|b| {
                    let fresh = !seen.contains(*b);
                    seen.push(**b);
                    fresh
                })
                .map(|&b| hist.counts[b] as f64)
                .sum::<f64>()
                / hist.shots() as f64
        })
        .collect()
}

/// Rank correlation between the histogram mass near each exact level and
/// the level's degeneracy. Only meaningful when every shot used a fresh
/// random input, since only then is the expected mass proportional to the
/// degeneracy.
pub fn multiplicity_profile(hist: &SpectrumHistogram, levels: &[Level]) -> Result<f64> {
    if !(hist.config.fresh_per_shot && hist.config.input == InputState::Random) {
        return Err(Error::NotApplicable("multiplicity needs a fresh random input state per shot".into()));
    }
    if levels.is_empty() {
        return Err(Error::NotApplicable("no exact levels given".into()));
    }
    let masses = level_masses(hist, levels);
    let degeneracies: Vec<f64> = levels.iter().map(|l| l.degeneracy as f64).collect();
    Ok(spearman(&masses, &degeneracies))
}

/// Time-step shifts whose ratios to `dt` are far from simple fractions.
pub fn default_scan_shifts(dt: f64) -> Vec<f64> {
    vec![-dt * (2f64.sqrt() - 1.0) / 5.0, -dt * (3f64.sqrt() - 1.0) / 6.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPeak {
    pub energy: f64,
    pub probability: f64,
    /// Nearest peak energy in each shifted run, if that run had any peak.
    pub shifted_energies: Vec<Option<f64>>,
    pub aliased: bool,
}

/// Repeat phase estimation at `dt + δ` for every shift and classify each
/// base peak: a true eigenvalue keeps its energy estimate (within one bin),
/// an aliased one moves because its wrapped phase scales with the time step.
pub fn spectrum_scan(h: &FermionHamiltonian, cfg: &PeConfig, shifts: &[f64], threshold: PeakThreshold) -> Result<Vec<ScanPeak>> {
    if shifts.is_empty() || shifts.iter().any(|&d| d == 0.0) {
        return Err(Error::Config("a scan needs at least one nonzero time-step shift".into()));
    }
    let base = run_phase_estimation(h, cfg)?;
    let shifted = shifts
        .iter()
        .map(|&d| {
            let c = PeConfig { dt: cfg.dt + d, ..cfg.clone() };
            run_phase_estimation(h, &c)
        })
        .collect::<Result<Vec<_>>>()?;
    let shifted_peaks: Vec<(Vec<Peak>, f64)> = shifted.iter().map(|hst| (hst.peaks(threshold), hst.config.bin_width())).collect();
    Ok(base
        .peaks(threshold)
        .into_iter()
        .map(|p| {
            let mut aliased = false;
            let shifted_energies = shifted_peaks
                .iter()
                .map(|(peaks, width)| {
                    let nearest = peaks.iter().map(|q| q.energy).min_by(|a, b| (a - p.energy).abs().total_cmp(&(b - p.energy).abs()));
                    let tol = width.max(cfg.bin_width());
                    if nearest.is_none_or(|e| (e - p.energy).abs() > tol) {
                        aliased = true;
                    }
                    nearest
                })
                .collect();
            ScanPeak { energy: p.energy, probability: p.probability, shifted_energies, aliased }
        })
        .collect())
}
