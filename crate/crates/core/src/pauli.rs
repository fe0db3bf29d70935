//! Pauli strings over at most 64 qubits in the symplectic (x, z) bitmask form.
//!
//! Bit `q - 1` of `x`/`z` belongs to qubit `q`. A letter is I `(0,0)`, X `(1,0)`,
//! Z `(0,1)` or Y `(1,1)`, where Y is stored literally (not as `XZ`).

use std::collections::HashMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};

/// Strings whose merged coefficient falls below this are dropped.
pub const MERGE_TOL: f64 = 1e-14;
/// Largest imaginary part that may be truncated when finalizing a Hamiltonian.
pub const IMAG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// Sort code: I < X < Y < Z.
    fn code(self) -> u128 {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

const I_POW: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PauliString {
    pub coeff: Complex64,
    x: u64,
    z: u64,
    n_qubits: usize,
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > 64 {
        return Err(Error::Dimension(format!("{n_qubits} qubits is outside 1..=64")));
    }
    Ok(())
}

impl PauliString {
    pub fn identity(n_qubits: usize, coeff: Complex64) -> Result<Self> {
        check_width(n_qubits)?;
        Ok(Self { coeff, x: 0, z: 0, n_qubits })
    }

    /// Build from `(qubit, letter)` pairs; later entries overwrite earlier ones.
    pub fn from_letters(n_qubits: usize, coeff: Complex64, letters: &[(usize, Pauli)]) -> Result<Self> {
        let mut s = Self::identity(n_qubits, coeff)?;
        for &(q, p) in letters {
            s.set(q, p)?;
        }
        Ok(s)
    }

    /// Parse a dense label like `"XZIY"`, qubit 1 first.
    pub fn from_label(label: &str, coeff: Complex64) -> Result<Self> {
        let mut s = Self::identity(label.chars().count(), coeff)?;
        for (k, c) in label.chars().enumerate() {
            let p = match c {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => return Err(Error::InvalidModel(format!("unknown Pauli letter {other:?}"))),
            };
            s.set(k + 1, p)?;
        }
        Ok(s)
    }

    pub fn set(&mut self, qubit: usize, p: Pauli) -> Result<()> {
        check_index(qubit, self.n_qubits)?;
        let bit = 1u64 << (qubit - 1);
        let (x, z) = p.bits();
        self.x = if x { self.x | bit } else { self.x & !bit };
        self.z = if z { self.z | bit } else { self.z & !bit };
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        if qubit == 0 || qubit > self.n_qubits {
            return Pauli::I;
        }
        let bit = 1u64 << (qubit - 1);
        Pauli::from_bits(self.x & bit != 0, self.z & bit != 0)
    }

    /// Non-identity letters in increasing qubit order.
    pub fn letters(&self) -> Vec<(usize, Pauli)> {
        let mut support = self.x | self.z;
        let mut out = Vec::with_capacity(support.count_ones() as usize);
        while support != 0 {
            let q = support.trailing_zeros() as usize + 1;
            out.push((q, self.letter(q)));
            support &= support - 1;
        }
        out
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Qubits carrying X or Y.
    pub fn endpoints(&self) -> Vec<usize> {
        let mut m = self.x;
        let mut out = Vec::new();
        while m != 0 {
            out.push(m.trailing_zeros() as usize + 1);
            m &= m - 1;
        }
        out
    }

    /// Whether two strings act with the same letters, ignoring coefficients.
    pub fn same_letters(&self, other: &Self) -> bool {
        self.x == other.x && self.z == other.z && self.n_qubits == other.n_qubits
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Base-4 key with qubit 1 most significant; orders strings lexicographically
    /// by their dense label under I < X < Y < Z.
    pub fn order_key(&self) -> u128 {
        (1..=self.n_qubits).fold(0u128, |acc, q| (acc << 2) | self.letter(q).code())
    }

    pub fn label(&self) -> String {
        (1..=self.n_qubits).map(|q| self.letter(q).symbol()).collect()
    }

    pub fn scaled(mut self, c: Complex64) -> Self {
        self.coeff *= c;
        self
    }

    /// Product `self * other` with the phase accumulated from the per-qubit products.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension(format!(
                "cannot multiply strings on {} and {} qubits",
                self.n_qubits, other.n_qubits
            )));
        }
        // With P(x,z) = i^{x.z} X^x Z^z, moving Z^z1 past X^x2 costs (-1)^{z1.x2}.
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let exponent = (self.x & self.z).count_ones() + (other.x & other.z).count_ones() + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        Ok(Self { coeff: self.coeff * other.coeff * I_POW[(exponent % 4) as usize], x, z, n_qubits: self.n_qubits })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+e}{:+e}i) ", self.coeff.re, self.coeff.im)?;
        let letters = self.letters();
        if letters.is_empty() {
            return write!(f, "I");
        }
        for (k, (q, p)) in letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", p.symbol(), q)?;
        }
        Ok(())
    }
}

/// Accumulator of complex-coefficient Pauli strings with exact letter merging.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: HashMap<(u64, u64), Complex64>,
}

impl PauliSum {
    pub fn new(n_qubits: usize) -> Result<Self> {
        check_width(n_qubits)?;
        Ok(Self { n_qubits, terms: HashMap::new() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn add(&mut self, s: &PauliString) -> Result<()> {
        if s.n_qubits != self.n_qubits {
            return Err(Error::Dimension(format!("string on {} qubits added to a {}-qubit sum", s.n_qubits, self.n_qubits)));
        }
        *self.terms.entry((s.x, s.z)).or_insert(Complex64::new(0.0, 0.0)) += s.coeff;
        Ok(())
    }

    pub fn add_sum(&mut self, other: &PauliSum) -> Result<()> {
        for s in other.strings() {
            self.add(&s)?;
        }
        Ok(())
    }

    pub fn scale(&mut self, c: Complex64) {
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    pub fn multiply(&self, other: &PauliSum) -> Result<PauliSum> {
        let mut out = PauliSum::new(self.n_qubits)?;
        for a in self.strings() {
            for b in other.strings() {
                out.add(&a.multiply(&b)?)?;
            }
        }
        Ok(out)
    }

    /// Surviving strings (|coeff| > merge tolerance) in canonical order.
    pub fn strings(&self) -> Vec<PauliString> {
        let mut out: Vec<PauliString> = self
            .terms
            .iter()
            .filter(|(_, c)| c.norm() > MERGE_TOL)
            .map(|(&(x, z), &coeff)| PauliString { coeff, x, z, n_qubits: self.n_qubits })
            .collect();
        out.sort_by_key(|s| s.order_key());
        out
    }

    pub fn len(&self) -> usize {
        self.strings().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Real Pauli-string Hamiltonian: an identity constant plus sorted, merged strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliHamiltonian {
    n_qubits: usize,
    constant: f64,
    strings: Vec<PauliString>,
}

impl PauliHamiltonian {
    /// Finalize a sum: the identity part becomes the constant, imaginary
    /// parts below [`IMAG_TOL`] are truncated and larger ones are an error.
    pub fn from_sum(sum: &PauliSum) -> Result<Self> {
        let mut constant = 0.0;
        let mut strings = Vec::new();
        for s in sum.strings() {
            if s.coeff.im.abs() >= IMAG_TOL {
                return Err(Error::Consistency(format!("string {s} kept an imaginary coefficient")));
            }
            if s.is_identity() {
                constant = s.coeff.re;
            } else if s.coeff.re.abs() > MERGE_TOL {
                strings.push(PauliString { coeff: Complex64::new(s.coeff.re, 0.0), ..s });
            }
        }
        Ok(Self { n_qubits: sum.n_qubits, constant, strings })
    }

    /// Build directly from real `(label, coeff)` pairs; labels are dense, qubit 1 first.
    pub fn from_labels(constant: f64, terms: &[(&str, f64)]) -> Result<Self> {
        let n = terms.first().map(|(l, _)| l.len()).ok_or_else(|| Error::Dimension("no strings given".into()))?;
        let mut sum = PauliSum::new(n)?;
        sum.add(&PauliString::identity(n, Complex64::new(constant, 0.0))?)?;
        for (label, c) in terms {
            sum.add(&PauliString::from_label(label, Complex64::new(*c, 0.0))?)?;
        }
        Self::from_sum(&sum)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn strings(&self) -> &[PauliString] {
        &self.strings
    }

    /// `|constant| + Σ|c|`, an upper bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.constant.abs() + self.strings.iter().map(|s| s.coeff.re.abs()).sum::<f64>()
    }

    pub fn is_diagonal(&self) -> bool {
        self.strings.iter().all(|s| s.x_mask() == 0)
    }

    /// `self - shift * identity`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self { constant: self.constant - shift, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn s(label: &str) -> PauliString {
        PauliString::from_label(label, c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn single_qubit_products() {
        let xz = s("X").multiply(&s("Z")).unwrap();
        assert_eq!(xz.label(), "Y");
        assert_eq!(xz.coeff, c(0.0, -1.0));
        let zz = s("Z").multiply(&s("Z")).unwrap();
        assert!(zz.is_identity());
        assert_eq!(zz.coeff, c(1.0, 0.0));
        let table = [("X", "Y", "Z", c(0.0, 1.0)), ("Y", "Z", "X", c(0.0, 1.0)), ("Z", "X", "Y", c(0.0, 1.0))];
        for (a, b, prod, phase) in table {
            let ab = s(a).multiply(&s(b)).unwrap();
            assert_eq!(ab.label(), prod);
            assert_eq!(ab.coeff, phase);
            let ba = s(b).multiply(&s(a)).unwrap();
            assert_eq!(ba.coeff, -phase);
        }
    }

    #[test]
    fn two_qubit_product() {
        let p = s("XZ").multiply(&s("YZ")).unwrap();
        assert_eq!(p.label(), "ZI");
        assert_eq!(p.coeff, c(0.0, 1.0));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(s("X").multiply(&s("XX")), Err(Error::Dimension(_))));
    }

    #[test]
    fn ordering_is_lexicographic_by_label() {
        let mut v = vec![s("ZI"), s("IZ"), s("XX"), s("YI"), s("II")];
        v.sort_by_key(|p| p.order_key());
        let labels: Vec<String> = v.iter().map(|p| p.label()).collect();
        assert_eq!(labels, ["II", "IZ", "XX", "YI", "ZI"]);
    }

    #[test]
    fn imaginary_residual_is_an_error() {
        let mut sum = PauliSum::new(2).unwrap();
        sum.add(&PauliString::from_label("XY", c(0.5, 0.1)).unwrap()).unwrap();
        assert!(matches!(PauliHamiltonian::from_sum(&sum), Err(Error::Consistency(_))));
    }

    #[test]
    fn merge_cancels() {
        let mut sum = PauliSum::new(2).unwrap();
        sum.add(&PauliString::from_label("XY", c(0.5, 0.0)).unwrap()).unwrap();
        sum.add(&PauliString::from_label("XY", c(-0.5, 0.0)).unwrap()).unwrap();
        assert!(sum.is_empty());
    }

    #[test]
    fn letters_and_endpoints() {
        let p = s("XZIY");
        assert_eq!(p.letters(), vec![(1, Pauli::X), (2, Pauli::Z), (4, Pauli::Y)]);
        assert_eq!(p.endpoints(), vec![1, 4]);
        assert_eq!(p.weight(), 3);
        assert!(!s("XI").commutes_with(&s("ZI")));
        assert!(s("XX").commutes_with(&s("ZZ")));
    }
}
