//! Lowering of Pauli-string evolutions `exp(-iθP)` to native one- and
//! two-qubit gates, Trotter steps, and controlled evolutions.
//!
//! Every string is reduced to a `Z` or `ZZ` core by a ladder of conjugators
//! `C = exp(-i π/4 A)` where `A` (a single `X`/`Y` or a `ZZ` pair) anticommutes
//! with the current string. Such a conjugation maps `P` to `i P A`, so the signs
//! are tracked symbolically by the Pauli algebra instead of being tabulated.

use std::f64::consts::FRAC_PI_4;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::fermion::FermionHamiltonian;
use crate::jw::jw_hamiltonian;
use crate::pauli::{Pauli, PauliHamiltonian, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RotationAxis {
    X,
    Y,
    Z,
}

impl RotationAxis {
    fn symbol(self) -> char {
        match self {
            RotationAxis::X => 'x',
            RotationAxis::Y => 'y',
            RotationAxis::Z => 'z',
        }
    }
}

/// A native gate. Qubits are 1-based.
///
/// * `Rot`: `exp(-i·angle·σ_axis)`
/// * `ZZ`: `exp(-i·angle·Z_a Z_b)`
/// * `CRotZ`: `exp(-i·angle·Z_target)` when the control is `|1⟩`
/// * `CPhase`: `diag(1, e^{-i·angle})` on the control
/// * `GlobalPhase`: `e^{-i·angle}` on the whole register
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateOp {
    Rot { axis: RotationAxis, qubit: usize, angle: f64 },
    ZZ { a: usize, b: usize, angle: f64 },
    H { qubit: usize },
    CRotZ { control: usize, target: usize, angle: f64 },
    CPhase { control: usize, angle: f64 },
    GlobalPhase { angle: f64 },
}

impl GateOp {
    pub fn inverse(&self) -> GateOp {
        match *self {
            GateOp::Rot { axis, qubit, angle } => GateOp::Rot { axis, qubit, angle: -angle },
            GateOp::ZZ { a, b, angle } => GateOp::ZZ { a, b, angle: -angle },
            GateOp::H { qubit } => GateOp::H { qubit },
            GateOp::CRotZ { control, target, angle } => GateOp::CRotZ { control, target, angle: -angle },
            GateOp::CPhase { control, angle } => GateOp::CPhase { control, angle: -angle },
            GateOp::GlobalPhase { angle } => GateOp::GlobalPhase { angle: -angle },
        }
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateOp::Rot { qubit, .. } | GateOp::H { qubit } => vec![qubit],
            GateOp::ZZ { a, b, .. } => vec![a, b],
            GateOp::CRotZ { control, target, .. } => vec![control, target],
            GateOp::CPhase { control, .. } => vec![control],
            GateOp::GlobalPhase { .. } => vec![],
        }
    }

    /// Whether the gate is diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        !matches!(self, GateOp::H { .. } | GateOp::Rot { axis: RotationAxis::X | RotationAxis::Y, .. })
    }

    fn angle(&self) -> Option<f64> {
        match *self {
            GateOp::Rot { angle, .. }
            | GateOp::ZZ { angle, .. }
            | GateOp::CRotZ { angle, .. }
            | GateOp::CPhase { angle, .. }
            | GateOp::GlobalPhase { angle } => Some(angle),
            GateOp::H { .. } => None,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            check_index(q, n)?;
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::Wiring(format!("two-qubit gate on a single qubit {}", qs[0])));
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(Error::Config(format!("non-finite gate angle {a}")));
            }
        }
        Ok(())
    }
}

/// Decimal notation with 17 significant digits.
pub fn format_angle(x: f64) -> String {
    if x == 0.0 {
        return format!("{:.16}", 0.0);
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateOp::Rot { axis, qubit, angle } => write!(f, "R {} {} {}", axis.symbol(), qubit, format_angle(angle)),
            GateOp::ZZ { a, b, angle } => write!(f, "ZZ {} {} {}", a, b, format_angle(angle)),
            GateOp::H { qubit } => write!(f, "H {qubit}"),
            GateOp::CRotZ { control, target, angle } => write!(f, "CRZ {} {} {}", control, target, format_angle(angle)),
            GateOp::CPhase { control, angle } => write!(f, "CPHASE {} {}", control, format_angle(angle)),
            GateOp::GlobalPhase { angle } => write!(f, "GPHASE {}", format_angle(angle)),
        }
    }
}

impl FromStr for GateOp {
    type Err = Error;

    fn from_str(line: &str) -> Result<Self> {
        let bad = || Error::Config(format!("malformed gate line {line:?}"));
        let tok: Vec<&str> = line.split_whitespace().collect();
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad());
        let real = |s: &str| s.parse::<f64>().map_err(|_| bad());
        match tok.as_slice() {
            ["R", axis, q, a] => {
                let axis = match *axis {
                    "x" => RotationAxis::X,
                    "y" => RotationAxis::Y,
                    "z" => RotationAxis::Z,
                    _ => return Err(bad()),
                };
                Ok(GateOp::Rot { axis, qubit: int(q)?, angle: real(a)? })
            }
            ["ZZ", a, b, t] => Ok(GateOp::ZZ { a: int(a)?, b: int(b)?, angle: real(t)? }),
            ["H", q] => Ok(GateOp::H { qubit: int(q)? }),
            ["CRZ", c, t, a] => Ok(GateOp::CRotZ { control: int(c)?, target: int(t)?, angle: real(a)? }),
            ["CPHASE", c, a] => Ok(GateOp::CPhase { control: int(c)?, angle: real(a)? }),
            ["GPHASE", a] => Ok(GateOp::GlobalPhase { angle: real(a)? }),
            _ => Err(bad()),
        }
    }
}

/// An ordered gate program; `ops[0]` acts on the state first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSequence {
    n_qubits: usize,
    ops: Vec<GateOp>,
}

impl GateSequence {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ops: Vec::new() }
    }

    pub fn from_ops(n_qubits: usize, ops: Vec<GateOp>) -> Result<Self> {
        let mut s = Self::new(n_qubits);
        for op in ops {
            s.push(op)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn extend(&mut self, other: &GateSequence) -> Result<()> {
        if other.n_qubits > self.n_qubits {
            return Err(Error::Dimension(format!(
                "cannot append a {}-qubit sequence to a {}-qubit one",
                other.n_qubits, self.n_qubits
            )));
        }
        self.ops.extend_from_slice(&other.ops);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn inverse(&self) -> GateSequence {
        Self { n_qubits: self.n_qubits, ops: self.ops.iter().rev().map(GateOp::inverse).collect() }
    }

    pub fn counts(&self) -> GateCounts {
        let mut c = GateCounts::default();
        for op in &self.ops {
            match op {
                GateOp::ZZ { .. } => c.zz += 1,
                GateOp::CRotZ { .. } => c.controlled_rz += 1,
                GateOp::CPhase { .. } => c.controlled_phase += 1,
                GateOp::Rot { .. } | GateOp::H { .. } => c.single_qubit += 1,
                GateOp::GlobalPhase { .. } => c.global_phase += 1,
            }
        }
        c
    }

    /// One op per line, preceded by a `# qubits` header.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(32 * self.ops.len() + 16);
        let _ = writeln!(out, "# qubits {}", self.n_qubits);
        for op in &self.ops {
            let _ = writeln!(out, "{op}");
        }
        out
    }

    /// Inverse of [`GateSequence::to_text`]. Comment lines are skipped; without
    /// a `# qubits` header the width is the largest qubit index used.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut ops = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(n) = comment.trim().strip_prefix("qubits") {
                    declared = Some(n.trim().parse::<usize>().map_err(|_| Error::Config(format!("bad header {line:?}")))?);
                }
                continue;
            }
            ops.push(line.parse::<GateOp>()?);
        }
        let n = declared.unwrap_or_else(|| ops.iter().flat_map(|o| o.qubits()).max().unwrap_or(0));
        Self::from_ops(n, ops)
    }
}

/// Gate tallies by kind.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub zz: usize,
    pub controlled_rz: usize,
    pub controlled_phase: usize,
    pub single_qubit: usize,
    pub global_phase: usize,
}

impl GateCounts {
    /// ZZ couplers plus controlled-Rz gates.
    pub fn two_qubit(&self) -> usize {
        self.zz + self.controlled_rz
    }

    /// Every gate that acts on qubits (global phases excluded).
    pub fn native(&self) -> usize {
        self.zz + self.controlled_rz + self.controlled_phase + self.single_qubit
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrotterOrder {
    First,
    Second,
}

impl TrotterOrder {
    pub fn from_int(order: u32) -> Result<Self> {
        match order {
            1 => Ok(TrotterOrder::First),
            2 => Ok(TrotterOrder::Second),
            other => Err(Error::Config(format!("Trotter order must be 1 or 2, got {other}"))),
        }
    }
}

/// `pre`, then `core`, then `post` realize one string's evolution.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct StringEvolution {
    pub pre: Vec<GateOp>,
    pub core: GateOp,
    pub post: Vec<GateOp>,
}

impl StringEvolution {
    fn emit(&self, out: &mut Vec<GateOp>) {
        out.extend_from_slice(&self.pre);
        out.push(self.core);
        out.extend_from_slice(&self.post);
    }
}

/// Conjugation ladder under construction.
struct Ladder {
    current: PauliString,
    ops: Vec<GateOp>,
}

impl Ladder {
    fn new(p: &PauliString) -> Self {
        let mut current = *p;
        current.coeff = Complex64::new(1.0, 0.0);
        Self { current, ops: Vec::new() }
    }

    fn conjugate(&mut self, generator: PauliString, gate: GateOp) -> Result<()> {
        debug_assert!(!generator.commutes_with(&self.current));
        let next = self.current.multiply(&generator)?.scaled(Complex64::new(0.0, 1.0));
        if next.coeff.im.abs() > 1e-12 || (next.coeff.re.abs() - 1.0).abs() > 1e-12 {
            return Err(Error::Consistency(format!("conjugation left a non-unit coefficient on {next}")));
        }
        self.current = next;
        self.ops.push(gate);
        Ok(())
    }

    /// Turn an `X`/`Y` letter on `q` into `Z`.
    fn rotate_to_z(&mut self, q: usize) -> Result<()> {
        let n = self.current.n_qubits();
        let (letter, axis) = match self.current.letter(q) {
            Pauli::X => (Pauli::Y, RotationAxis::Y),
            Pauli::Y => (Pauli::X, RotationAxis::X),
            _ => return Ok(()),
        };
        let generator = PauliString::from_letters(n, Complex64::new(1.0, 0.0), &[(q, letter)])?;
        self.conjugate(generator, GateOp::Rot { axis, qubit: q, angle: FRAC_PI_4 })
    }

    /// Remove the letter on `member` using the `X`/`Y` letter on `carrier`.
    fn absorb(&mut self, carrier: usize, member: usize) -> Result<()> {
        self.rotate_to_z(member)?;
        let n = self.current.n_qubits();
        let generator = PauliString::from_letters(n, Complex64::new(1.0, 0.0), &[(carrier, Pauli::Z), (member, Pauli::Z)])?;
        self.conjugate(generator, GateOp::ZZ { a: carrier, b: member, angle: FRAC_PI_4 })
    }

    /// Sign of the reduced string and the ladder split into pre/post halves.
    fn finish(self, core: impl FnOnce(f64) -> GateOp) -> StringEvolution {
        let sign = self.current.coeff.re.signum();
        let post = self.ops.iter().rev().map(GateOp::inverse).collect();
        StringEvolution { pre: self.ops, core: core(sign), post }
    }
}

/// Decompose `exp(-iθP)` for a string with real coefficient `c`, `θ = c·dt`.
pub(crate) fn string_evolution(p: &PauliString, dt: f64) -> Result<StringEvolution> {
    if p.coeff.im.abs() > 1e-12 {
        return Err(Error::Contract(format!("string {p} has a complex coefficient")));
    }
    let theta = p.coeff.re * dt;
    let support: Vec<usize> = p.letters().into_iter().map(|(q, _)| q).collect();
    let ends = p.endpoints();
    let unsupported = || Error::UnsupportedShape(format!("{} (letters on qubits {:?})", p.label(), support));
    match ends.len() {
        0 => {
            let core = match support.as_slice() {
                [] => GateOp::GlobalPhase { angle: theta },
                [a] => GateOp::Rot { axis: RotationAxis::Z, qubit: *a, angle: theta },
                [a, b] => GateOp::ZZ { a: *a, b: *b, angle: theta },
                _ => return Err(unsupported()),
            };
            Ok(StringEvolution { pre: vec![], core, post: vec![] })
        }
        1 | 2 => {
            let carrier = ends[0];
            let mut ladder = Ladder::new(p);
            for &q in support.iter().filter(|&&q| q != carrier) {
                ladder.absorb(carrier, q)?;
            }
            ladder.rotate_to_z(carrier)?;
            Ok(ladder.finish(|s| GateOp::Rot { axis: RotationAxis::Z, qubit: carrier, angle: s * theta }))
        }
        4 => {
            let (first, second) = (ends[0], ends[2]);
            let mut ladder = Ladder::new(p);
            for &q in support.iter().filter(|&&q| q != first && q < second) {
                ladder.absorb(first, q)?;
            }
            for &q in support.iter().filter(|&&q| q > second) {
                ladder.absorb(second, q)?;
            }
            ladder.rotate_to_z(first)?;
            ladder.rotate_to_z(second)?;
            Ok(ladder.finish(|s| GateOp::ZZ { a: first, b: second, angle: s * theta }))
        }
        _ => Err(unsupported()),
    }
}

/// Gate sequence for `exp(-i·c·dt·P)`.
pub fn compile_string_evolution(p: &PauliString, dt: f64) -> Result<GateSequence> {
    let mut ops = Vec::new();
    string_evolution(p, dt)?.emit(&mut ops);
    GateSequence::from_ops(p.n_qubits(), ops)
}

/// A compiled Trotter step kept in per-string form so that cores can be
/// controlled without recompiling.
#[derive(Debug, Clone)]
pub(crate) struct TrotterStep {
    pub n_qubits: usize,
    /// Phase angle of the identity component for the whole step.
    pub constant_angle: f64,
    pub parts: Vec<StringEvolution>,
}

impl TrotterStep {
    pub fn new(h: &PauliHamiltonian, dt: f64, order: TrotterOrder) -> Result<Self> {
        if !dt.is_finite() {
            return Err(Error::Config(format!("time step must be finite, got {dt}")));
        }
        let parts = trotter_factors(h, dt, order)
            .iter()
            .map(|(p, t)| string_evolution(p, *t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_qubits: h.n_qubits(), constant_angle: h.constant() * dt, parts })
    }

    pub fn to_sequence(&self) -> GateSequence {
        let mut ops = Vec::new();
        if self.constant_angle != 0.0 {
            ops.push(GateOp::GlobalPhase { angle: self.constant_angle });
        }
        for part in &self.parts {
            part.emit(&mut ops);
        }
        GateSequence { n_qubits: self.n_qubits, ops }
    }

    /// The step with every core controlled by `control`; the constant is left out.
    pub fn controlled_ops(&self, control: usize) -> Vec<GateOp> {
        let mut ops = Vec::new();
        for part in &self.parts {
            ops.extend_from_slice(&part.pre);
            controlled_core(part.core, control, &mut ops);
            ops.extend_from_slice(&part.post);
        }
        ops
    }
}

/// The product-formula schedule of one step: `(string, duration)` pairs,
/// applied left to right, for the non-identity strings of `h`.
pub fn trotter_factors(h: &PauliHamiltonian, dt: f64, order: TrotterOrder) -> Vec<(PauliString, f64)> {
    let strings = h.strings();
    match order {
        TrotterOrder::First => strings.iter().map(|s| (s.clone(), dt)).collect(),
        TrotterOrder::Second => {
            let mut out = Vec::with_capacity(2 * strings.len());
            if let Some((last, rest)) = strings.split_last() {
                out.extend(rest.iter().map(|s| (s.clone(), 0.5 * dt)));
                out.push((last.clone(), dt));
                out.extend(rest.iter().rev().map(|s| (s.clone(), 0.5 * dt)));
            }
            out
        }
    }
}

fn controlled_core(core: GateOp, control: usize, out: &mut Vec<GateOp>) {
    match core {
        GateOp::Rot { axis: RotationAxis::Z, qubit, angle } => out.push(GateOp::CRotZ { control, target: qubit, angle }),
        GateOp::ZZ { a, b, angle } => {
            // Reduce Z_a Z_b to a single Z_a with the same ladder machinery.
            let n = a.max(b);
            let zz = PauliString::from_letters(n, Complex64::new(1.0, 0.0), &[(a, Pauli::Z), (b, Pauli::Z)])
                .expect("valid qubits");
            let mut ladder = Ladder::new(&zz);
            ladder.conjugate(
                PauliString::from_letters(n, Complex64::new(1.0, 0.0), &[(a, Pauli::Y)]).expect("valid qubit"),
                GateOp::Rot { axis: RotationAxis::Y, qubit: a, angle: FRAC_PI_4 },
            )
            .expect("Y anticommutes with Z");
            ladder.absorb(a, b).expect("ZZ conjugation");
            ladder.rotate_to_z(a).expect("single-qubit rotation");
            let reduced = ladder.finish(|s| GateOp::CRotZ { control, target: a, angle: s * angle });
            reduced.emit(out);
        }
        GateOp::GlobalPhase { angle } => out.push(GateOp::CPhase { control, angle }),
        other => unreachable!("not a compiled core: {other:?}"),
    }
}

/// One Trotter step `exp(-iH·dt)` of the given order.
pub fn compile_trotter_step(h: &PauliHamiltonian, dt: f64, order: TrotterOrder) -> Result<GateSequence> {
    Ok(TrotterStep::new(h, dt, order)?.to_sequence())
}

/// `U^R` with `U = exp(-iH·dt)` approximated by `intervals` Trotter steps of
/// `dt/intervals`, controlled by qubit `control` (which must lie above the
/// simulation register). Only the cores are controlled; the identity
/// component becomes one `CPhase` of the full accumulated angle.
pub fn compile_controlled_evolution(
    h: &PauliHamiltonian,
    dt: f64,
    intervals: usize,
    control: usize,
    repetitions: usize,
    order: TrotterOrder,
) -> Result<GateSequence> {
    if control <= h.n_qubits() {
        return Err(Error::Wiring(format!(
            "control qubit {control} overlaps the simulation register 1..={}",
            h.n_qubits()
        )));
    }
    if intervals == 0 || repetitions == 0 {
        return Err(Error::Config("intervals and repetitions must be positive".into()));
    }
    let step = TrotterStep::new(h, dt / intervals as f64, order)?;
    let body = step.controlled_ops(control);
    let total = intervals * repetitions;
    let mut ops = Vec::with_capacity(body.len() * total + 1);
    let phase = h.constant() * dt * repetitions as f64;
    if phase != 0.0 {
        ops.push(GateOp::CPhase { control, angle: phase });
    }
    for _ in 0..total {
        ops.extend_from_slice(&body);
    }
    GateSequence::from_ops(control, ops)
}

/// ZZ couplers in a sequence.
pub fn count_two_qubit_gates(seq: &GateSequence) -> usize {
    seq.counts().zz
}

/// Gate tallies of one first-order Trotter step of `h`.
pub fn count_report(h: &FermionHamiltonian, dt: f64) -> Result<GateCounts> {
    let p = jw_hamiltonian(h)?;
    Ok(compile_trotter_step(&p, dt, TrotterOrder::First)?.counts())
}
