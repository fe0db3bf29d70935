use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension("matrix rows are not square".into()));
        }
        Ok(Self { dim, data: rows.concat() })
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.data[i * self.dim..(i + 1) * self.dim].iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, c: Complex64) -> CMatrix {
        CMatrix { dim: self.dim, data: self.data.iter().map(|a| a * c).collect() }
    }

    /// `self ⊗ other`, with `self` on the more significant index.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (a, b) = (self.dim, other.dim);
        let n = a * b;
        let mut out = CMatrix::zeros(n);
        for i in 0..a {
            for j in 0..a {
                let x = self.get(i, j);
                if x == ZERO {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * n + j * b + l] = x * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest singular value, by power iteration on `A†A`.
    pub fn spectral_norm(&self) -> f64 {
        let n = self.dim;
        if n == 0 {
            return 0.0;
        }
        let adj = self.adjoint();
        let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + 0.01 * i as f64, 0.3)).collect();
        let mut estimate = 0.0;
        for _ in 0..500 {
            let w = adj.mul_vec(&self.mul_vec(&v));
            let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if norm == 0.0 {
                return 0.0;
            }
            v = w.iter().map(|x| x / norm).collect();
            let converged = (norm - estimate).abs() <= 1e-14 * norm;
            estimate = norm;
            if converged {
                break;
            }
        }
        estimate.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| (i..self.dim).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }

    pub fn is_real_symmetric(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.data.iter().all(|a| a.im.abs() <= tol)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }
}

/// Dense real symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl RMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Dimension("matrix rows are not square".into()));
        }
        Ok(Self { dim, data: rows.concat() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.dim).all(|i| (i + 1..self.dim).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol))
    }

    /// `[[Re, -Im], [Im, Re]]` of a complex matrix.
    pub fn real_embedding(m: &CMatrix) -> Self {
        let n = m.dim();
        let mut out = Self::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = m.get(i, j);
                out.set(i, j, z.re);
                out.set(i + n, j + n, z.re);
                out.set(i, j + n, -z.im);
                out.set(i + n, j, z.im);
            }
        }
        out
    }
}

/// Complex sparse square matrix stored as sorted rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, rows: (0..dim).map(|i| vec![(i, ONE)]).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[(usize, Complex64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        match self.rows[i].binary_search_by_key(&j, |&(c, _)| c) {
            Ok(k) => self.rows[i][k].1,
            Err(_) => ZERO,
        }
    }

    pub fn add_entry(&mut self, i: usize, j: usize, v: Complex64) {
        let row = &mut self.rows[i];
        match row.binary_search_by_key(&j, |&(c, _)| c) {
            Ok(k) => row[k].1 += v,
            Err(k) => row.insert(k, (j, v)),
        }
    }

    /// Drop entries with modulus at or below `tol`.
    pub fn prune(&mut self, tol: f64) {
        for row in &mut self.rows {
            row.retain(|(_, v)| v.norm() > tol);
        }
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = self.clone();
        for (i, row) in other.rows.iter().enumerate() {
            for &(j, v) in row {
                out.add_entry(i, j, v);
            }
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> SparseMatrix {
        SparseMatrix { dim: self.dim, rows: self.rows.iter().map(|r| r.iter().map(|&(j, v)| (j, v * c)).collect()).collect() }
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(k, a) in row {
                for &(j, b) in &other.rows[k] {
                    out.add_entry(i, j, a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.rows.iter().map(|row| row.iter().map(|&(j, a)| a * v[j]).sum()).collect()
    }

    pub fn adjoint(&self) -> SparseMatrix {
        let mut out = SparseMatrix::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out.rows[j].push((i, v.conj()));
            }
        }
        out
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &SparseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for &(j, v) in &self.rows[i] {
                worst = worst.max((v - other.get(i, j)).norm());
            }
            for &(j, v) in &other.rows[i] {
                worst = worst.max((v - self.get(i, j)).norm());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.rows.iter().flatten().map(|(_, v)| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| row.iter().all(|&(j, v)| (v - self.get(j, i).conj()).norm() <= tol))
    }

    pub fn is_real_symmetric(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.rows.iter().flatten().all(|(_, v)| v.im.abs() <= tol)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.rows.iter().enumerate().all(|(i, row)| row.iter().all(|&(j, v)| j == i || v.norm() <= tol))
    }

    pub fn to_dense(&self) -> Result<CMatrix> {
        if self.dim > 4096 {
            return Err(Error::Resource(format!("dense matrix of dimension {} exceeds 4096", self.dim)));
        }
        let mut m = CMatrix::zeros(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Index sets of the connected components of the nonzero pattern.
    pub fn components(&self, tol: f64) -> Vec<Vec<usize>> {
        let mut parent: Vec<usize> = (0..self.dim).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                if v.norm() > tol {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = std::collections::BTreeMap::new();
        for i in 0..self.dim {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// Dense block on the given (sorted) indices.
    pub fn submatrix(&self, indices: &[usize]) -> CMatrix {
        let mut m = CMatrix::zeros(indices.len());
        for (a, &i) in indices.iter().enumerate() {
            for &(j, v) in &self.rows[i] {
                if let Ok(b) = indices.binary_search(&j) {
                    m.set(a, b, v);
                }
            }
        }
        m
    }
}
