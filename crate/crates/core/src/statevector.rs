//! Dense statevector simulation, the inverse QFT and work-register sampling.
//!
//! Qubit `q` of an `n`-qubit register is bit `n - q` of the basis index, so
//! qubit 1 is the most significant bit.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::compiler::{GateOp, GateSequence, RotationAxis};
use crate::error::{Error, Result};
use crate::qubit_mask;

/// Largest register the engine will allocate.
pub const MAX_QUBITS: usize = 24;

/// Arrays shorter than this are processed on one thread.
const PAR_THRESHOLD: usize = 1 << 14;

/// Stream reserved for drawing a fixed input state shared by all shots.
pub const FIXED_INPUT_STREAM: u64 = u64::MAX;

/// ChaCha8 generator keyed by `(seed, stream)`.
///
/// Identical pairs give identical draws, and distinct streams are
/// independent, so shot `k` can use stream `k` regardless of execution order.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::Resource(format!("{n} qubits is outside the supported range 1..={MAX_QUBITS}")));
    }
    Ok(())
}

impl StateVector {
    /// `|b_1 b_2 ... b_n⟩` from a string of `0`/`1` characters, qubit 1 first.
    pub fn new_basis_state(n: usize, bits: &str) -> Result<Self> {
        check_size(n)?;
        if bits.chars().count() != n {
            return Err(Error::Dimension(format!("bitstring {bits:?} does not have {n} characters")));
        }
        let mut index = 0usize;
        for c in bits.chars() {
            index = (index << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    other => return Err(Error::Config(format!("bitstring contains {other:?}"))),
                };
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits: n, amps })
    }

    /// Independent standard-normal real and imaginary parts, normalized.
    pub fn new_random_state(n: usize, rng: &mut impl Rng) -> Result<Self> {
        check_size(n)?;
        let mut amps: Vec<Complex64> =
            (0..1usize << n).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_qubits: n, amps })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!("{len} amplitudes is not a power of two")));
        }
        let n = len.trailing_zeros() as usize;
        check_size(n)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Contract(format!("amplitudes have squared norm {norm}")));
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        check_size(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Ok(Self { n_qubits: n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn apply_gate(&mut self, op: &GateOp) -> Result<()> {
        check_op(op, self.n_qubits)?;
        apply_op(&mut self.amps, self.n_qubits, op);
        Ok(())
    }

    /// Apply every op in order; consecutive diagonal gates share one pass.
    pub fn apply_sequence(&mut self, seq: &GateSequence) -> Result<()> {
        if seq.n_qubits() > self.n_qubits {
            return Err(Error::Dimension(format!(
                "{}-qubit sequence on a {}-qubit state",
                seq.n_qubits(),
                self.n_qubits
            )));
        }
        apply_ops(&mut self.amps, self.n_qubits, seq.ops());
        Ok(())
    }

    /// Inverse QFT on qubits `first..first+w` via a direct FFT.
    ///
    /// The input coordinate `t` weights work qubit `j` by `2^(j-1)`; the output
    /// `m` is the plain register value with qubit `first` most significant.
    pub fn inverse_qft(&mut self, first: usize, w: usize) -> Result<()> {
        check_register(first, w, self.n_qubits)?;
        let n = self.n_qubits;
        let size = 1usize << w;
        let shift = n + 1 - first - w;
        let fft = FftPlanner::<f64>::new().plan_fft_forward(size);
        let scale = 1.0 / (size as f64).sqrt();
        let low_count = 1usize << shift;
        let high_count = 1usize << (first - 1);
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for high in 0..high_count {
            for low in 0..low_count {
                let base = (high << (shift + w)) | low;
                for (t, slot) in buf.iter_mut().enumerate() {
                    *slot = self.amps[base | (reverse_bits(t, w) << shift)];
                }
                fft.process(&mut buf);
                for (m, v) in buf.iter().enumerate() {
                    self.amps[base | (m << shift)] = v * scale;
                }
            }
        }
        Ok(())
    }

    /// Same transform as [`StateVector::inverse_qft`] through its gate network.
    pub fn inverse_qft_via_gates(&mut self, first: usize, w: usize) -> Result<()> {
        check_register(first, w, self.n_qubits)?;
        let seq = inverse_qft_gates(first, w, self.n_qubits)?;
        self.apply_sequence(&seq)
    }

    /// Probability of each work-register value `m` (qubit `first` most significant).
    pub fn work_marginal(&self, first: usize, w: usize) -> Result<Vec<f64>> {
        check_register(first, w, self.n_qubits)?;
        let shift = self.n_qubits + 1 - first - w;
        let mask = (1usize << w) - 1;
        let mut p = vec![0.0; 1 << w];
        for (idx, a) in self.amps.iter().enumerate() {
            p[(idx >> shift) & mask] += a.norm_sqr();
        }
        Ok(p)
    }

    /// `shots` independent outcomes of measuring the work register; shot `k`
    /// draws from stream `k` of `seed`.
    pub fn sample_work_register(&self, first: usize, w: usize, seed: u64, shots: usize) -> Result<Vec<usize>> {
        let p = self.work_marginal(first, w)?;
        let sampler = Sampler::new(&p)?;
        Ok((0..shots).map(|k| sampler.draw(&mut RngStream::new(seed, k as u64))).collect())
    }
}

/// Inverse-CDF sampling from a discrete distribution.
pub(crate) struct Sampler {
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn new(p: &[f64]) -> Result<Self> {
        let mut acc = 0.0;
        let cdf: Vec<f64> = p
            .iter()
            .map(|&x| {
                acc += x.max(0.0);
                acc
            })
            .collect();
        if !(acc > 0.0 && acc.is_finite()) {
            return Err(Error::Consistency(format!("distribution has total mass {acc}")));
        }
        Ok(Self { cdf })
    }

    pub fn draw(&self, rng: &mut impl Rng) -> usize {
        let total = *self.cdf.last().expect("non-empty");
        let u = rng.random::<f64>() * total;
        self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
    }
}

fn check_register(first: usize, w: usize, n: usize) -> Result<()> {
    if w == 0 || first == 0 || first + w - 1 > n {
        return Err(Error::Wiring(format!("work register {first}..{} does not fit in {n} qubits", first + w)));
    }
    Ok(())
}

fn check_op(op: &GateOp, n: usize) -> Result<()> {
    let qs = op.qubits();
    if let Some(&q) = qs.iter().find(|&&q| q == 0 || q > n) {
        return Err(Error::IndexOutOfRange { index: q, n });
    }
    if qs.len() == 2 && qs[0] == qs[1] {
        return Err(Error::Wiring(format!("two-qubit gate on a single qubit {}", qs[0])));
    }
    Ok(())
}

pub(crate) fn reverse_bits(x: usize, bits: usize) -> usize {
    if bits == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS as usize - bits)
    }
}

/// Gate network of the inverse QFT on qubits `first..first+w` in an `n`-qubit
/// register: for each qubit from the highest-weight one down, undo the phases
/// contributed by the already-decoded qubits, then apply a Hadamard.
pub fn inverse_qft_gates(first: usize, w: usize, n: usize) -> Result<GateSequence> {
    check_register(first, w, n)?;
    let mut seq = GateSequence::new(n);
    for k in (1..=w).rev() {
        let target = first + k - 1;
        for kp in k + 1..=w {
            let theta = -2.0 * std::f64::consts::PI / (1u64 << (kp - k + 1)) as f64;
            let control = first + kp - 1;
            // diag(1,1,1,e^{iθ}) on (control, target)
            seq.push(GateOp::CRotZ { control, target, angle: 0.5 * theta })?;
            seq.push(GateOp::CPhase { control, angle: -0.5 * theta })?;
        }
        seq.push(GateOp::H { qubit: target })?;
    }
    Ok(seq)
}

/// Phase angle contributed by a diagonal gate at basis index `idx`; the
/// amplitude is multiplied by `e^{-i·angle}`.
#[inline]
fn diagonal_angle(op: &GateOp, idx: usize, n: usize) -> f64 {
    let z = |q: usize| if idx & qubit_mask(q, n) == 0 { 1.0 } else { -1.0 };
    let on = |q: usize| idx & qubit_mask(q, n) != 0;
    match *op {
        GateOp::Rot { axis: RotationAxis::Z, qubit, angle } => angle * z(qubit),
        GateOp::ZZ { a, b, angle } => angle * z(a) * z(b),
        GateOp::CRotZ { control, target, angle } => {
            if on(control) {
                angle * z(target)
            } else {
                0.0
            }
        }
        GateOp::CPhase { control, angle } => {
            if on(control) {
                angle
            } else {
                0.0
            }
        }
        GateOp::GlobalPhase { angle } => angle,
        _ => unreachable!("not a diagonal gate"),
    }
}

fn apply_diagonal_run(amps: &mut [Complex64], n: usize, run: &[GateOp]) {
    let kernel = |(idx, a): (usize, &mut Complex64)| {
        let theta: f64 = run.iter().map(|op| diagonal_angle(op, idx, n)).sum();
        *a *= Complex64::from_polar(1.0, -theta);
    };
    if amps.len() >= PAR_THRESHOLD {
        amps.par_iter_mut().enumerate().for_each(kernel);
    } else {
        amps.iter_mut().enumerate().for_each(kernel);
    }
}

/// Apply the 2×2 matrix `[[m00, m01], [m10, m11]]` on one qubit.
fn apply_single(amps: &mut [Complex64], n: usize, qubit: usize, m: [Complex64; 4]) {
    let half = qubit_mask(qubit, n);
    let kernel = |chunk: &mut [Complex64]| {
        let (lo, hi) = chunk.split_at_mut(half);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a0, *a1);
            *a0 = m[0] * x + m[1] * y;
            *a1 = m[2] * x + m[3] * y;
        }
    };
    if amps.len() >= PAR_THRESHOLD && amps.len() / (2 * half) > 1 {
        amps.par_chunks_mut(2 * half).for_each(kernel);
    } else {
        amps.chunks_mut(2 * half).for_each(kernel);
    }
}

fn single_qubit_matrix(op: &GateOp) -> Option<(usize, [Complex64; 4])> {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match *op {
        GateOp::H { qubit } => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            Some((qubit, [c(r, 0.0), c(r, 0.0), c(r, 0.0), c(-r, 0.0)]))
        }
        GateOp::Rot { axis: RotationAxis::X, qubit, angle } => {
            let (s, co) = angle.sin_cos();
            Some((qubit, [c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)]))
        }
        GateOp::Rot { axis: RotationAxis::Y, qubit, angle } => {
            let (s, co) = angle.sin_cos();
            Some((qubit, [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]))
        }
        _ => None,
    }
}

fn apply_op(amps: &mut [Complex64], n: usize, op: &GateOp) {
    match single_qubit_matrix(op) {
        Some((q, m)) => apply_single(amps, n, q, m),
        None => apply_diagonal_run(amps, n, std::slice::from_ref(op)),
    }
}

pub(crate) fn apply_ops(amps: &mut [Complex64], n: usize, ops: &[GateOp]) {
    let mut k = 0;
    while k < ops.len() {
        if ops[k].is_diagonal() {
            let end = ops[k..].iter().position(|o| !o.is_diagonal()).map_or(ops.len(), |p| k + p);
            apply_diagonal_run(amps, n, &ops[k..end]);
            k = end;
        } else {
            apply_op(amps, n, &ops[k]);
            k += 1;
        }
    }
}

enum Segment {
    Phases(Vec<Complex64>),
    Ops(Vec<GateOp>),
}

/// A gate sequence prepared for repeated application to one register size:
/// each run of diagonal gates is folded into a precomputed phase vector.
pub struct PreparedSequence {
    n_qubits: usize,
    segments: Vec<Segment>,
}

/// Memory budget for precomputed phase vectors.
const PHASE_BUDGET_BYTES: usize = 512 << 20;

impl PreparedSequence {
    pub fn new(seq: &GateSequence, n_qubits: usize) -> Result<Self> {
        check_size(n_qubits)?;
        if seq.n_qubits() > n_qubits {
            return Err(Error::Dimension(format!("{}-qubit sequence on {n_qubits} qubits", seq.n_qubits())));
        }
        let dim = 1usize << n_qubits;
        let ops = seq.ops();
        let mut runs = Vec::new();
        let mut k = 0;
        while k < ops.len() {
            let diagonal = ops[k].is_diagonal();
            let end = ops[k..].iter().position(|o| o.is_diagonal() != diagonal).map_or(ops.len(), |p| k + p);
            runs.push((diagonal, &ops[k..end]));
            k = end;
        }
        let diag_runs = runs.iter().filter(|(d, _)| *d).count();
        let precompute = diag_runs * dim * std::mem::size_of::<Complex64>() <= PHASE_BUDGET_BYTES;
        let segments = runs
            .into_iter()
            .map(|(diagonal, run)| {
                if diagonal && precompute {
                    let phases = (0..dim)
                        .map(|idx| {
                            let theta: f64 = run.iter().map(|op| diagonal_angle(op, idx, n_qubits)).sum();
                            Complex64::from_polar(1.0, -theta)
                        })
                        .collect();
                    Segment::Phases(phases)
                } else {
                    Segment::Ops(run.to_vec())
                }
            })
            .collect();
        Ok(Self { n_qubits, segments })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn apply(&self, amps: &mut [Complex64]) {
        debug_assert_eq!(amps.len(), 1 << self.n_qubits);
        for seg in &self.segments {
            match seg {
                Segment::Phases(p) => {
                    if amps.len() >= PAR_THRESHOLD {
                        amps.par_iter_mut().zip(p.par_iter()).for_each(|(a, f)| *a *= f);
                    } else {
                        amps.iter_mut().zip(p).for_each(|(a, f)| *a *= f);
                    }
                }
                Segment::Ops(ops) => apply_ops(amps, self.n_qubits, ops),
            }
        }
    }
}
