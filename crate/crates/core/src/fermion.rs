//! Fermionic two-body Hamiltonians and the pairing and Hubbard model builders.
//!
//! A [`FermionHamiltonian`] stores coefficients in a canonical, Hermitian form:
//!
//! * `one_body[(i, j)]` with `i <= j`: `E_ii n_i` on the diagonal, and
//!   `E_ij (a†_i a_j + a†_j a_i)` off the diagonal.
//! * `two_body[(i, j, k, l)]`: `V (a†_i a†_j a_l a_k + h.c.)`, or just
//!   `V a†_i a†_j a_l a_k` when the operator is self-adjoint (`{i,j} = {k,l}`).
//!   The key is the lexicographically smallest member of its equivalence class
//!   under `i<->j`, `k<->l` (each a sign flip) and Hermitian conjugation.
//!
//! Two ways in: [`FermionHamiltonian::add_one_body`] / [`FermionHamiltonian::add_two_body`]
//! take coefficients already in that Hermitian form, while
//! [`FermionHamiltonian::from_terms`] takes literal ladder-operator products and
//! keeps their Hermitian part.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};

/// Coefficients smaller than this are dropped after merging.
pub const ZERO_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LadderKind {
    Create,
    Annihilate,
}

/// A coefficient times an ordered product of creation/annihilation operators.
///
/// The product is read left to right as written, so the rightmost factor acts
/// on a state first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderTerm {
    pub factors: Vec<(LadderKind, usize)>,
    pub coeff: f64,
}

impl LadderTerm {
    pub fn new(factors: Vec<(LadderKind, usize)>, coeff: f64) -> Self {
        Self { factors, coeff }
    }

    /// `coeff * a†_i a_j`.
    pub fn one_body(i: usize, j: usize, coeff: f64) -> Self {
        Self::new(vec![(LadderKind::Create, i), (LadderKind::Annihilate, j)], coeff)
    }

    /// `coeff * a†_i a†_j a_l a_k`; the argument order follows the
    /// `V_ijkl` labelling, not the operator order.
    pub fn two_body(i: usize, j: usize, k: usize, l: usize, coeff: f64) -> Self {
        Self::new(
            vec![
                (LadderKind::Create, i),
                (LadderKind::Create, j),
                (LadderKind::Annihilate, l),
                (LadderKind::Annihilate, k),
            ],
            coeff,
        )
    }

    /// Hermitian conjugate (real coefficients).
    pub fn adjoint(&self) -> Self {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|&(kind, level)| {
                let kind = match kind {
                    LadderKind::Create => LadderKind::Annihilate,
                    LadderKind::Annihilate => LadderKind::Create,
                };
                (kind, level)
            })
            .collect();
        Self::new(factors, self.coeff)
    }

    fn validate(&self, n: usize) -> Result<()> {
        if !self.coeff.is_finite() {
            return Err(Error::InvalidModel(format!("non-finite coefficient {}", self.coeff)));
        }
        for &(_, level) in &self.factors {
            check_index(level, n)?;
        }
        Ok(())
    }

    /// Recognise `a†_i a_j`.
    fn as_one_body(&self) -> Option<(usize, usize)> {
        match self.factors.as_slice() {
            [(LadderKind::Create, i), (LadderKind::Annihilate, j)] => Some((*i, *j)),
            _ => None,
        }
    }

    /// Recognise `a†_i a†_j a_l a_k` and return `(i, j, k, l)`.
    fn as_two_body(&self) -> Option<[usize; 4]> {
        match self.factors.as_slice() {
            [(LadderKind::Create, i), (LadderKind::Create, j), (LadderKind::Annihilate, l), (LadderKind::Annihilate, k)] => {
                Some([*i, *j, *k, *l])
            }
            _ => None,
        }
    }
}

/// Where a two-body key sits inside its canonical class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBodyClass {
    /// Smallest `(i, j, k, l)` of the class.
    pub representative: [usize; 4],
    /// `+1` or `-1`: the operator equals `sign * O_rep` (or `sign * O_rep†`).
    pub sign: f64,
    /// Whether the operator is the representative itself (up to sign) rather
    /// than its Hermitian conjugate.
    pub direct: bool,
    /// `O_rep` is self-adjoint.
    pub self_adjoint: bool,
}

fn antisymmetric_variants(key: [usize; 4]) -> [([usize; 4], f64); 4] {
    let [i, j, k, l] = key;
    [([i, j, k, l], 1.0), ([j, i, k, l], -1.0), ([i, j, l, k], -1.0), ([j, i, l, k], 1.0)]
}

/// Classify a two-body key `(i, j, k, l)` (operator `a†_i a†_j a_l a_k`).
pub fn two_body_class(key: [usize; 4]) -> Result<TwoBodyClass> {
    let [i, j, k, l] = key;
    if i == j || k == l {
        return Err(Error::PauliPrinciple(format!(
            "two-body term ({i},{j},{k},{l}) repeats a creation or annihilation index"
        )));
    }
    let direct = antisymmetric_variants(key);
    let conjugate = antisymmetric_variants([k, l, i, j]);
    let self_adjoint = {
        let mut a = [i, j];
        let mut b = [k, l];
        a.sort_unstable();
        b.sort_unstable();
        a == b
    };
    let (rep_key, rep_sign, in_direct) = direct
        .iter()
        .map(|&(key, sign)| (key, sign, true))
        .chain(conjugate.iter().map(|&(key, sign)| (key, sign, false)))
        .min_by(|a, b| a.0.cmp(&b.0))
        .expect("non-empty");
    // O_key' = rep_sign * O (direct) or rep_sign * O† (conjugate), and the
    // signs are involutive, so O = rep_sign * O_rep (or its adjoint).
    Ok(TwoBodyClass {
        representative: rep_key,
        sign: rep_sign,
        direct: in_direct || self_adjoint,
        self_adjoint,
    })
}

/// Merge literal two-body terms into canonical coefficients.
///
/// The result represents the Hermitian part of the summed operator, which is
/// the operator itself whenever the input is Hermitian.
pub fn canonicalize_two_body(n_levels: usize, raw: &[LadderTerm]) -> Result<BTreeMap<[usize; 4], f64>> {
    // (coefficient on O_rep, coefficient on O_rep†)
    let mut acc: BTreeMap<[usize; 4], (f64, f64, bool)> = BTreeMap::new();
    for term in raw {
        term.validate(n_levels)?;
        let key = term.as_two_body().ok_or_else(|| {
            Error::InvalidModel(format!("expected a†a†aa two-body term, got {:?}", term.factors))
        })?;
        let class = two_body_class(key)?;
        let entry = acc.entry(class.representative).or_insert((0.0, 0.0, class.self_adjoint));
        if class.direct {
            entry.0 += class.sign * term.coeff;
        } else {
            entry.1 += class.sign * term.coeff;
        }
    }
    Ok(acc
        .into_iter()
        .map(|(key, (direct, conj, self_adjoint))| {
            let v = if self_adjoint { direct } else { 0.5 * (direct + conj) };
            (key, v)
        })
        .filter(|(_, v)| v.abs() > ZERO_TOL)
        .collect())
}

fn canonicalize_one_body(n_levels: usize, raw: &[LadderTerm]) -> Result<BTreeMap<(usize, usize), f64>> {
    let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for term in raw {
        term.validate(n_levels)?;
        let (i, j) = term
            .as_one_body()
            .ok_or_else(|| Error::InvalidModel(format!("expected a†a one-body term, got {:?}", term.factors)))?;
        let weight = if i == j { 1.0 } else { 0.5 };
        *acc.entry((i.min(j), i.max(j))).or_insert(0.0) += weight * term.coeff;
    }
    acc.retain(|_, v| v.abs() > ZERO_TOL);
    Ok(acc)
}

/// Constant + one-body + two-body fermionic Hamiltonian over `n_levels` levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FermionHamiltonian {
    n_levels: usize,
    e0: f64,
    one_body: BTreeMap<(usize, usize), f64>,
    two_body: BTreeMap<[usize; 4], f64>,
}

impl FermionHamiltonian {
    pub fn new(n_levels: usize) -> Result<Self> {
        if n_levels == 0 {
            return Err(Error::InvalidModel("a Hamiltonian needs at least one level".into()));
        }
        if n_levels > 64 {
            return Err(Error::InvalidModel(format!("{n_levels} levels exceeds the 64-qubit limit")));
        }
        Ok(Self { n_levels, e0: 0.0, one_body: BTreeMap::new(), two_body: BTreeMap::new() })
    }

    /// Build from literal ladder-operator products.
    pub fn from_terms(n_levels: usize, e0: f64, terms: &[LadderTerm]) -> Result<Self> {
        let mut h = Self::new(n_levels)?;
        h.set_e0(e0)?;
        let (one, two): (Vec<LadderTerm>, Vec<LadderTerm>) =
            terms.iter().cloned().partition(|t| t.factors.len() == 2);
        if let Some(bad) = two.iter().find(|t| t.factors.len() != 4) {
            return Err(Error::InvalidModel(format!(
                "only one- and two-body terms are supported, got {} factors",
                bad.factors.len()
            )));
        }
        h.one_body = canonicalize_one_body(n_levels, &one)?;
        h.two_body = canonicalize_two_body(n_levels, &two)?;
        Ok(h)
    }

    pub fn set_e0(&mut self, e0: f64) -> Result<()> {
        if !e0.is_finite() {
            return Err(Error::InvalidModel(format!("non-finite constant energy {e0}")));
        }
        self.e0 = e0;
        Ok(())
    }

    /// Add `c n_i` (`i == j`) or `c (a†_i a_j + a†_j a_i)`.
    pub fn add_one_body(&mut self, i: usize, j: usize, c: f64) -> Result<()> {
        check_index(i, self.n_levels)?;
        check_index(j, self.n_levels)?;
        if !c.is_finite() {
            return Err(Error::InvalidModel(format!("non-finite coefficient {c}")));
        }
        let key = (i.min(j), i.max(j));
        let v = self.one_body.entry(key).or_insert(0.0);
        *v += c;
        if v.abs() <= ZERO_TOL {
            self.one_body.remove(&key);
        }
        Ok(())
    }

    /// Add `c (a†_i a†_j a_l a_k + h.c.)`, or `c a†_i a†_j a_l a_k` when that
    /// operator is self-adjoint.
    pub fn add_two_body(&mut self, i: usize, j: usize, k: usize, l: usize, c: f64) -> Result<()> {
        for idx in [i, j, k, l] {
            check_index(idx, self.n_levels)?;
        }
        if !c.is_finite() {
            return Err(Error::InvalidModel(format!("non-finite coefficient {c}")));
        }
        let class = two_body_class([i, j, k, l])?;
        let v = self.two_body.entry(class.representative).or_insert(0.0);
        *v += class.sign * c;
        if v.abs() <= ZERO_TOL {
            self.two_body.remove(&class.representative);
        }
        Ok(())
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn one_body(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.one_body
    }

    pub fn two_body(&self) -> &BTreeMap<[usize; 4], f64> {
        &self.two_body
    }

    /// Number of off-diagonal one-body entries (hopping pairs).
    pub fn hopping_count(&self) -> usize {
        self.one_body.keys().filter(|(i, j)| i != j).count()
    }

    pub fn diagonal_one_body_count(&self) -> usize {
        self.one_body.keys().filter(|(i, j)| i == j).count()
    }

    pub fn is_zero(&self) -> bool {
        self.e0 == 0.0 && self.one_body.is_empty() && self.two_body.is_empty()
    }

    /// The full operator as literal ladder products, Hermitian partners included.
    /// The constant `e0` is not part of the list.
    pub fn operator_terms(&self) -> Vec<LadderTerm> {
        let mut out = Vec::new();
        for (&(i, j), &e) in &self.one_body {
            out.push(LadderTerm::one_body(i, j, e));
            if i != j {
                out.push(LadderTerm::one_body(j, i, e));
            }
        }
        for (&[i, j, k, l], &v) in &self.two_body {
            let term = LadderTerm::two_body(i, j, k, l, v);
            let self_adjoint = two_body_class([i, j, k, l]).map(|c| c.self_adjoint).unwrap_or(false);
            if !self_adjoint {
                out.push(term.adjoint());
            }
            out.push(term);
        }
        out
    }
}

fn check_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!("{name} must be finite, got {x}")))
    }
}

/// Qubit carrying the spin-up state of level/site `p` (1-based).
pub fn spin_up(p: usize) -> usize {
    2 * p - 1
}

/// Qubit carrying the spin-down (time-reversed) partner of level/site `p`.
pub fn spin_down(p: usize) -> usize {
    2 * p
}

/// The literal summands `-(g/2) a†_{p↑} a†_{p↓} a_{q↓} a_{q↑}` over every
/// ordered pair of levels `(p, q)`, diagonal included.
pub fn pairing_raw_terms(n_levels: usize, g: f64) -> Vec<LadderTerm> {
    let mut raw = Vec::with_capacity(n_levels * n_levels);
    for p in 1..=n_levels {
        for q in 1..=n_levels {
            raw.push(LadderTerm::new(
                vec![
                    (LadderKind::Create, spin_up(p)),
                    (LadderKind::Create, spin_down(p)),
                    (LadderKind::Annihilate, spin_down(q)),
                    (LadderKind::Annihilate, spin_up(q)),
                ],
                -0.5 * g,
            ));
        }
    }
    raw
}

/// Pairing model with `n_levels` doubly degenerate levels at energies `p*d`
/// and pairing strength `g`.
pub fn build_pairing(n_levels: usize, d: f64, g: f64) -> Result<FermionHamiltonian> {
    if n_levels == 0 {
        return Err(Error::InvalidModel("pairing model needs at least one level".into()));
    }
    check_finite("level spacing", d)?;
    check_finite("pairing strength", g)?;
    let mut terms = Vec::new();
    for p in 1..=n_levels {
        let eps = p as f64 * d;
        if eps != 0.0 {
            terms.push(LadderTerm::one_body(spin_up(p), spin_up(p), eps));
            terms.push(LadderTerm::one_body(spin_down(p), spin_down(p), eps));
        }
    }
    if g != 0.0 {
        terms.extend(pairing_raw_terms(n_levels, g));
    }
    FermionHamiltonian::from_terms(2 * n_levels, 0.0, &terms)
}

/// Spin-1/2 Hubbard chain with `n_sites` sites.
///
/// The wrap-around bond is added only when `periodic` is set and there are at
/// least three sites; for one or two sites a ring and a chain coincide.
pub fn build_hubbard(n_sites: usize, eps: f64, t: f64, u: f64, periodic: bool) -> Result<FermionHamiltonian> {
    if n_sites == 0 {
        return Err(Error::InvalidModel("Hubbard model needs at least one site".into()));
    }
    check_finite("eps", eps)?;
    check_finite("t", t)?;
    check_finite("U", u)?;
    let mut terms = Vec::new();
    if eps != 0.0 {
        for q in 1..=2 * n_sites {
            terms.push(LadderTerm::one_body(q, q, eps));
        }
    }
    if t != 0.0 {
        let mut bonds: Vec<(usize, usize)> = (1..n_sites).map(|i| (i, i + 1)).collect();
        if periodic && n_sites >= 3 {
            bonds.push((n_sites, 1));
        }
        for (a, b) in bonds {
            for spin in [spin_up as fn(usize) -> usize, spin_down] {
                terms.push(LadderTerm::one_body(spin(b), spin(a), -t));
                terms.push(LadderTerm::one_body(spin(a), spin(b), -t));
            }
        }
    }
    if u != 0.0 {
        for i in 1..=n_sites {
            terms.push(LadderTerm::new(
                vec![
                    (LadderKind::Create, spin_up(i)),
                    (LadderKind::Create, spin_down(i)),
                    (LadderKind::Annihilate, spin_down(i)),
                    (LadderKind::Annihilate, spin_up(i)),
                ],
                u,
            ));
        }
    }
    FermionHamiltonian::from_terms(2 * n_sites, 0.0, &terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_single_level() {
        let h = build_pairing(1, 0.0, 1.0).unwrap();
        assert_eq!(h.n_levels(), 2);
        assert_eq!(h.e0(), 0.0);
        assert!(h.one_body().is_empty());
        assert_eq!(h.two_body().len(), 1);
        // a†_1 a†_2 a_2 a_1 is stored under (i,j,k,l) = (1,2,1,2).
        assert_eq!(h.two_body().get(&[1, 2, 1, 2]), Some(&-0.5));
    }

    #[test]
    fn pairing_raw_summand_count() {
        assert_eq!(pairing_raw_terms(6, 1.0).len(), 36);
        let h = build_pairing(6, 0.0, 1.0).unwrap();
        assert_eq!(h.n_levels(), 12);
        // 6 diagonal classes plus 15 Hermitian pairs.
        assert_eq!(h.two_body().len(), 6 + 15);
    }

    #[test]
    fn pairing_single_particle_energies() {
        let h = build_pairing(4, 0.5, 1.0).unwrap();
        assert_eq!(h.n_levels(), 8);
        let diag: Vec<f64> = (1..=8).map(|q| h.one_body()[&(q, q)]).collect();
        assert_eq!(diag, vec![0.5, 0.5, 1.0, 1.0, 1.5, 1.5, 2.0, 2.0]);
        assert_eq!(h.hopping_count(), 0);
    }

    #[test]
    fn hubbard_term_counts() {
        let h = build_hubbard(4, 1.0, 0.0, 1.0, false).unwrap();
        assert_eq!(h.diagonal_one_body_count(), 8);
        assert_eq!(h.hopping_count(), 0);
        assert_eq!(h.two_body().len(), 4);

        let h = build_hubbard(2, 0.0, 1.0, 0.0, false).unwrap();
        assert_eq!(h.hopping_count(), 2);
        assert!(h.two_body().is_empty());
        assert_eq!(h.one_body()[&(1, 3)], -1.0);
        assert_eq!(h.one_body()[&(2, 4)], -1.0);

        let h = build_hubbard(3, 1.0, 0.5, 2.0, true).unwrap();
        assert_eq!(h.hopping_count(), 6);
    }

    #[test]
    fn invalid_models() {
        assert!(matches!(build_pairing(0, 0.0, 1.0), Err(Error::InvalidModel(_))));
        assert!(matches!(build_pairing(2, f64::NAN, 1.0), Err(Error::InvalidModel(_))));
        assert!(matches!(build_hubbard(0, 1.0, 1.0, 1.0, false), Err(Error::InvalidModel(_))));
        assert!(matches!(build_hubbard(2, 1.0, f64::INFINITY, 1.0, false), Err(Error::InvalidModel(_))));
    }

    #[test]
    fn diagonal_sign_relation_merges() {
        // V_1221 a†1 a†2 a1 a2 = -V_1221 a†1 a†2 a2 a1, so these combine into V_1212 = -1.
        let raw = [LadderTerm::two_body(1, 2, 2, 1, 0.5), LadderTerm::two_body(1, 2, 1, 2, -0.5)];
        let map = canonicalize_two_body(2, &raw).unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(map[&[1, 2, 1, 2]], -1.0);
    }

    #[test]
    fn canonical_key_is_kept() {
        let map = canonicalize_two_body(4, &[LadderTerm::two_body(1, 2, 3, 4, 1.0), LadderTerm::two_body(3, 4, 1, 2, 1.0)])
            .unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!(map[&[1, 2, 3, 4]], 1.0);
        // A lone non-Hermitian summand keeps only its Hermitian half.
        let map = canonicalize_two_body(4, &[LadderTerm::two_body(1, 2, 3, 4, 1.0)]).unwrap();
        assert_eq!(map[&[1, 2, 3, 4]], 0.5);
    }

    #[test]
    fn pauli_principle_rejected() {
        let err = canonicalize_two_body(3, &[LadderTerm::two_body(1, 1, 2, 3, 1.0)]).unwrap_err();
        assert!(matches!(err, Error::PauliPrinciple(_)));
        let mut h = FermionHamiltonian::new(3).unwrap();
        assert!(matches!(h.add_two_body(1, 2, 3, 3, 1.0), Err(Error::PauliPrinciple(_))));
    }

    #[test]
    fn class_signs() {
        let c = two_body_class([2, 1, 3, 4]).unwrap();
        assert_eq!(c.representative, [1, 2, 3, 4]);
        assert_eq!(c.sign, -1.0);
        let c = two_body_class([4, 3, 1, 2]).unwrap();
        assert_eq!(c.representative, [1, 2, 3, 4]);
        assert!(!c.direct);
        assert_eq!(c.sign, -1.0);
        let c = two_body_class([2, 1, 1, 2]).unwrap();
        assert!(c.self_adjoint);
        assert_eq!(c.representative, [1, 2, 1, 2]);
        assert_eq!(c.sign, -1.0);
    }

    #[test]
    fn entry_api_matches_literal_terms() {
        let mut a = FermionHamiltonian::new(4).unwrap();
        a.add_two_body(3, 4, 1, 2, 0.7).unwrap();
        a.add_one_body(3, 1, 0.2).unwrap();
        let b = FermionHamiltonian::from_terms(
            4,
            0.0,
            &[
                LadderTerm::two_body(3, 4, 1, 2, 0.7),
                LadderTerm::two_body(1, 2, 3, 4, 0.7),
                LadderTerm::one_body(1, 3, 0.2),
                LadderTerm::one_body(3, 1, 0.2),
            ],
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn index_errors() {
        let mut h = FermionHamiltonian::new(2).unwrap();
        assert!(matches!(h.add_one_body(0, 1, 1.0), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(h.add_one_body(1, 3, 1.0), Err(Error::IndexOutOfRange { .. })));
        assert!(FermionHamiltonian::new(0).is_err());
    }
}
