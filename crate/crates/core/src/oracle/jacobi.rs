//! Cyclic Jacobi eigensolver and the decompositions built on it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{CMatrix, RMatrix};
use crate::error::{Error, Result};

/// Default absolute tolerance for grouping equal eigenvalues.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// Largest dense block handed to the eigensolver.
pub const MAX_DENSE_DIM: usize = 4096;

/// Eigenvalues (ascending) and eigenvectors of a real symmetric matrix.
/// `vectors[k]` is the eigenvector of `values[k]`.
pub fn jacobi_symmetric(m: &RMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = m.dim();
    if n > 2 * MAX_DENSE_DIM {
        return Err(Error::Resource(format!("dense eigenproblem of dimension {n} is too large")));
    }
    if !m.is_symmetric(1e-12 * (1.0 + m.data().iter().fold(0.0f64, |a, b| a.max(b.abs())))) {
        return Err(Error::Contract("matrix is not symmetric".into()));
    }
    let mut a = m.data().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= 1e-15 * frob || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let vectors = order.iter().map(|&k| (0..n).map(|i| v[i * n + k]).collect()).collect();
    Ok((values, vectors))
}

/// Group sorted values whose neighbours differ by at most `tol`; each group is
/// reported by its mean and size.
pub fn cluster(sorted: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=sorted.len() {
        if k == sorted.len() || sorted[k] - sorted[k - 1] > tol {
            if k > start {
                let mean = sorted[start..k].iter().sum::<f64>() / (k - start) as f64;
                out.push((mean, k - start));
            }
            start = k;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub energy: f64,
    pub degeneracy: usize,
}

/// Eigenvalues sorted ascending, optionally with orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
    pub cluster_tol: f64,
}

impl EigenSolution {
    pub fn levels(&self) -> Vec<Level> {
        cluster(&self.eigenvalues, self.cluster_tol)
            .into_iter()
            .map(|(energy, degeneracy)| Level { energy, degeneracy })
            .collect()
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.len()
    }
}

fn residual_check(m: &CMatrix, values: &[f64], vectors: &[Vec<Complex64>]) -> Result<()> {
    let scale = m.max_abs().max(1e-300) * m.dim() as f64;
    for (lambda, v) in values.iter().zip(vectors) {
        let mv = m.mul_vec(v);
        let r = mv.iter().zip(v).map(|(a, b)| (a - b * lambda).norm_sqr()).sum::<f64>().sqrt();
        if r > 1e-8 * scale {
            return Err(Error::Consistency(format!("eigenpair residual {r:e} for eigenvalue {lambda}")));
        }
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Real symmetric input goes straight to Jacobi; complex input is embedded as
/// `[[A, -B], [B, A]]`, whose spectrum repeats each eigenvalue twice, and one
/// complex eigenvector per duplicate is recovered by Gram-Schmidt.
pub fn eigensolve(m: &CMatrix, cluster_tol: f64) -> Result<EigenSolution> {
    let n = m.dim();
    if n > MAX_DENSE_DIM {
        return Err(Error::Resource(format!("dense eigenproblem of dimension {n} exceeds {MAX_DENSE_DIM}")));
    }
    let scale = 1.0 + m.max_abs();
    if !m.is_hermitian(1e-12 * scale) {
        return Err(Error::Contract("matrix is not Hermitian".into()));
    }
    let real = (0..n).all(|i| (0..n).all(|j| m.get(i, j).im == 0.0));
    let (values, vectors) = if real {
        let mut r = RMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                r.set(i, j, m.get(i, j).re);
            }
        }
        let (values, vecs) = jacobi_symmetric(&r)?;
        let vectors = vecs.into_iter().map(|v| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect()).collect();
        (values, vectors)
    } else {
        embedded_eigen(m)?
    };
    residual_check(m, &values, &vectors)?;
    Ok(EigenSolution { eigenvalues: values, eigenvectors: Some(vectors), cluster_tol })
}

fn embedded_eigen(m: &CMatrix) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let n = m.dim();
    let (values, vecs) = jacobi_symmetric(&RMatrix::real_embedding(m))?;
    let tol = 1e-9 * (1.0 + m.max_abs());
    let mut out_values = Vec::with_capacity(n);
    let mut out_vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    for k in 1..=values.len() {
        if k < values.len() && values[k] - values[k - 1] <= tol {
            continue;
        }
        let size = k - start;
        if size % 2 != 0 {
            return Err(Error::Consistency("real embedding produced an unpaired eigenvalue".into()));
        }
        let mut candidates: Vec<Vec<Complex64>> =
            vecs[start..k].iter().map(|v| (0..n).map(|i| Complex64::new(v[i], v[i + n])).collect()).collect();
        let mean = values[start..k].iter().sum::<f64>() / size as f64;
        let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(size / 2);
        for _ in 0..size / 2 {
            // Greedy pivot: the candidate with the largest remaining component.
            let (best, norm) = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty cluster");
            if norm < 1e-6 {
                return Err(Error::Consistency("eigenvector extraction lost rank".into()));
            }
            let q: Vec<Complex64> = candidates.swap_remove(best).iter().map(|x| x / norm).collect();
            for c in &mut candidates {
                let overlap: Complex64 = q.iter().zip(c.iter()).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in c.iter_mut().zip(&q) {
                    *x -= overlap * y;
                }
            }
            basis.push(q);
        }
        for q in basis {
            out_values.push(mean);
            out_vectors.push(q);
        }
        start = k;
    }
    Ok((out_values, out_vectors))
}

/// `exp(-i·t·A)` for Hermitian `A`.
pub fn expm_hermitian(a: &CMatrix, t: f64) -> Result<CMatrix> {
    let sol = eigensolve(a, DEFAULT_CLUSTER_TOL)?;
    let vectors = sol.eigenvectors.expect("eigensolve returns vectors");
    let n = a.dim();
    let mut out = CMatrix::zeros(n);
    for (lambda, v) in sol.eigenvalues.iter().zip(&vectors) {
        let phase = Complex64::from_polar(1.0, -t * lambda);
        for i in 0..n {
            let vi = v[i] * phase;
            for j in 0..n {
                let cur = out.get(i, j);
                out.set(i, j, cur + vi * v[j].conj());
            }
        }
    }
    Ok(out)
}

/// Eigenvalues (unit modulus) and orthonormal eigenvectors of a unitary matrix.
#[derive(Debug, Clone)]
pub struct UnitaryEigen {
    pub values: Vec<Complex64>,
    pub vectors: Vec<Vec<Complex64>>,
}

const SPLIT_WEIGHTS: [f64; 4] = [0.618_033_988_7, 0.271_828_182_8, 1.414_213_562_3, 0.173_205_080_8];

/// Decompose a unitary `U` through the Hermitian `K = (U + U†)/2 + λ(U - U†)/(2i)`,
/// which shares its eigenvectors. Eigenvalues of `U` that collide in `K`
/// are separated by recursing on the invariant subspace with another `λ`.
pub fn unitary_eigen(u: &CMatrix) -> Result<UnitaryEigen> {
    let n = u.dim();
    let dev = u.mul(&u.adjoint()).max_abs_diff(&CMatrix::identity(n));
    if dev > 1e-9 {
        return Err(Error::Contract(format!("matrix deviates from unitarity by {dev:e}")));
    }
    let basis: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| Complex64::new((i == j) as u8 as f64, 0.0)).collect()).collect();
    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    split_unitary(u, &basis, 0, &mut values, &mut vectors)?;
    Ok(UnitaryEigen { values, vectors })
}

fn split_unitary(
    u: &CMatrix,
    basis: &[Vec<Complex64>],
    depth: usize,
    values: &mut Vec<Complex64>,
    vectors: &mut Vec<Vec<Complex64>>,
) -> Result<()> {
    let k = basis.len();
    // Restriction of U to span(basis).
    let images: Vec<Vec<Complex64>> = basis.iter().map(|b| u.mul_vec(b)).collect();
    let mut r = CMatrix::zeros(k);
    for a in 0..k {
        for b in 0..k {
            let z: Complex64 = basis[a].iter().zip(&images[b]).map(|(x, y)| x.conj() * y).sum();
            r.set(a, b, z);
        }
    }
    let mean = r.trace() / k as f64;
    if r.max_abs_diff(&CMatrix::identity(k).scale(mean)) < 1e-10 {
        let mu = mean / mean.norm();
        for b in basis {
            values.push(mu);
            vectors.push(b.clone());
        }
        return Ok(());
    }
    let lambda = *SPLIT_WEIGHTS
        .get(depth)
        .ok_or_else(|| Error::Consistency("unitary eigendecomposition did not separate eigenvalues".into()))?;
    let radj = r.adjoint();
    let herm = r.add(&radj).scale(Complex64::new(0.5, 0.0)).add(&r.sub(&radj).scale(Complex64::new(0.0, -0.5 * lambda)));
    let sol = eigensolve(&herm, DEFAULT_CLUSTER_TOL)?;
    let local = sol.eigenvectors.expect("eigensolve returns vectors");
    let lift = |v: &Vec<Complex64>| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); basis[0].len()];
        for (coef, b) in v.iter().zip(basis) {
            for (o, x) in out.iter_mut().zip(b) {
                *o += coef * x;
            }
        }
        out
    };
    let mut start = 0;
    for idx in 1..=sol.eigenvalues.len() {
        if idx < sol.eigenvalues.len() && sol.eigenvalues[idx] - sol.eigenvalues[idx - 1] <= 1e-9 {
            continue;
        }
        let sub: Vec<Vec<Complex64>> = local[start..idx].iter().map(lift).collect();
        split_unitary(u, &sub, depth + 1, values, vectors)?;
        start = idx;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_is_exact() {
        let m = CMatrix::from_diagonal(&[c(3.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]);
        let sol = eigensolve(&m, 1e-6).unwrap();
        assert_eq!(sol.eigenvalues, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let (a, b, d) = (0.3, -1.7, 2.2);
        let m = CMatrix::from_rows(&[vec![c(a, 0.0), c(b, 0.0)], vec![c(b, 0.0), c(d, 0.0)]]).unwrap();
        let sol = eigensolve(&m, 1e-6).unwrap();
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b * b).sqrt();
        assert!((sol.eigenvalues[0] - (mid - rad)).abs() < 1e-12);
        assert!((sol.eigenvalues[1] - (mid + rad)).abs() < 1e-12);
    }

    #[test]
    fn complex_hermitian_via_embedding() {
        // Pauli Y has eigenvalues ±1.
        let y = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, -1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]).unwrap();
        let sol = eigensolve(&y, 1e-6).unwrap();
        assert!((sol.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((sol.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]).unwrap();
        assert!(matches!(eigensolve(&m, 1e-6), Err(Error::Contract(_))));
    }

    #[test]
    fn clustering() {
        let levels = cluster(&[-1.0, -1.0 + 1e-9, 0.0, 2.0, 2.0, 2.0], 1e-6);
        assert_eq!(levels.len(), 3);
        assert_eq!(levels[0].1, 2);
        assert_eq!(levels[2], (2.0, 3));
    }

    #[test]
    fn unitary_with_colliding_hermitian_part() {
        // Phases θ and 2·atan(λ) - θ share the same value of cos θ + λ sin θ.
        let lambda: f64 = 0.618_033_988_7;
        let theta: f64 = 0.4;
        let other = 2.0 * lambda.atan() - theta;
        let u = CMatrix::from_diagonal(&[Complex64::from_polar(1.0, theta), Complex64::from_polar(1.0, other), c(-1.0, 0.0)]);
        let eig = unitary_eigen(&u).unwrap();
        let mut phases: Vec<f64> = eig.values.iter().map(|z| z.arg()).collect();
        phases.sort_by(f64::total_cmp);
        let mut expect = vec![theta, other, std::f64::consts::PI];
        expect.sort_by(f64::total_cmp);
        for (a, b) in phases.iter().zip(&expect) {
            assert!((a.abs() - b.abs()).abs() < 1e-9, "{phases:?} vs {expect:?}");
        }
        for (mu, v) in eig.values.iter().zip(&eig.vectors) {
            let uv = u.mul_vec(v);
            assert!(uv.iter().zip(v).all(|(a, b)| (a - mu * b).norm() < 1e-9));
        }
    }
}
