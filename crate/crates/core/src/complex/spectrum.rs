//! Eigendecomposition of `−Δ_k` with each eigenvector labeled by the Hodge
//! summand it lives in.
//!
//! `−Δ_k` is self-adjoint for the weighted inner product only, so the solve
//! runs on `W^{1/2} M W^{−1/2}` with `W = diag(μ_k)`. Eigenvalue clusters
//! are rotated so that every returned vector lies in a single summand.

use std::fmt;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::Complex;
use crate::error::{Error, Result};
use crate::rational::to_f64;

/// Default relative threshold for treating an eigenvalue as zero.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralLabel {
    Harmonic,
    /// Eigenvector in `d_{k−1} D_{k−1}`.
    DSpectrum,
    /// Eigenvector in `δ_{k+1} D_{k+1}`.
    DeltaSpectrum,
}

impl fmt::Display for SpectralLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpectralLabel::Harmonic => "harmonic",
            SpectralLabel::DSpectrum => "d-spectrum",
            SpectralLabel::DeltaSpectrum => "delta-spectrum",
        })
    }
}

#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub eigenvalue: f64,
    /// Coordinates on `E_k`, unit length in the weighted norm.
    pub eigenvector: Vec<f64>,
    pub label: SpectralLabel,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    pub degree: usize,
    pub tol: f64,
    pub eigenpairs: Vec<Eigenpair>,
}

/// One row of the grouped spectrum table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub degree: usize,
    pub eigenvalue: f64,
    pub label: SpectralLabel,
    pub multiplicity: usize,
}

impl SpectrumReport {
    /// Eigenvalues carrying the given label, ascending.
    pub fn eigenvalues(&self, label: SpectralLabel) -> Vec<f64> {
        let mut v: Vec<f64> =
            self.eigenpairs.iter().filter(|p| p.label == label).map(|p| p.eigenvalue).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn max_abs(&self) -> f64 {
        self.eigenpairs.iter().map(|p| p.eigenvalue.abs()).fold(0.0, f64::max)
    }

    /// Groups equal eigenvalues (within `tol · max|λ|`) of the same label.
    pub fn rows(&self) -> Vec<SpectrumRow> {
        let cut = self.tol * self.max_abs().max(1.0);
        let mut pairs: Vec<(f64, SpectralLabel)> =
            self.eigenpairs.iter().map(|p| (p.eigenvalue, p.label)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut rows: Vec<SpectrumRow> = Vec::new();
        for (lambda, label) in pairs {
            match rows.iter_mut().rev().find(|r| r.label == label && (r.eigenvalue - lambda).abs() <= cut) {
                Some(r) => r.multiplicity += 1,
                None => rows.push(SpectrumRow { degree: self.degree, eigenvalue: lambda, label, multiplicity: 1 }),
            }
        }
        rows
    }
}

impl Complex {
    /// `W^{1/2} M W^{−1/2}` for `M` the matrix of `−Δ_k`.
    fn symmetrized(&self, m: &DMatrix<f64>, k: usize) -> (DMatrix<f64>, Vec<f64>) {
        let w: Vec<f64> = self.weights(k).iter().map(|x| to_f64(x).sqrt()).collect();
        let n = w.len();
        let mut s = DMatrix::from_fn(n, n, |i, j| w[i] * m[(i, j)] / w[j]);
        let t = s.transpose();
        s = (s + t) * 0.5;
        (s, w)
    }

    /// Full labeled eigendecomposition of `−Δ_k`.
    pub fn spectrum(&self, k: usize, tol: f64) -> Result<SpectrumReport> {
        if !(tol > 0.0) {
            return Err(Error::InvalidInput(format!("tolerance {tol} must be positive")));
        }
        self.check_degree(k)?;
        let n = self.count(k);
        let m = self.laplacian_matrix(k)?.to_f64();
        let (s, sqrt_w) = self.symmetrized(&m, k);
        let eig = symmetric_eigen(s)?;
        let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
        let cut = tol * scale;

        // projector onto the exact summand, in symmetrized coordinates
        let exact_proj = if k > 0 {
            let a = self.d_matrix(k - 1)?.mul(&self.delta_matrix(k)?).to_f64();
            let (sa, _) = self.symmetrized(&a, k);
            let ea = symmetric_eigen(sa)?;
            let a_cut = tol * ea.eigenvalues.amax().max(f64::MIN_POSITIVE);
            let mut p = DMatrix::zeros(n, n);
            for (i, lambda) in ea.eigenvalues.iter().enumerate() {
                if *lambda > a_cut {
                    let u = ea.eigenvectors.column(i);
                    p += &u * u.transpose();
                }
            }
            Some(p)
        } else {
            None
        };

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let mut pairs = Vec::with_capacity(n);
        let mut start = 0;
        while start < n {
            let mut end = start + 1;
            while end < n && eig.eigenvalues[order[end]] - eig.eigenvalues[order[end - 1]] <= cut {
                end += 1;
            }
            let idx = &order[start..end];
            let lambdas: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
            let block = DMatrix::from_fn(n, idx.len(), |r, c| eig.eigenvectors[(r, idx[c])]);
            let mean = lambdas.iter().sum::<f64>() / lambdas.len() as f64;
            let (vectors, exact_weight): (DMatrix<f64>, Vec<f64>) = if mean.abs() < cut {
                (block, vec![0.0; idx.len()])
            } else if let Some(p) = &exact_proj {
                let b = block.transpose() * p * &block;
                let rot = symmetric_eigen((b.clone() + b.transpose()) * 0.5)?;
                (&block * &rot.eigenvectors, rot.eigenvalues.iter().copied().collect())
            } else {
                (block, vec![0.0; idx.len()])
            };
            for c in 0..idx.len() {
                let label = if mean.abs() < cut {
                    SpectralLabel::Harmonic
                } else if exact_weight[c] > 0.5 {
                    SpectralLabel::DSpectrum
                } else {
                    SpectralLabel::DeltaSpectrum
                };
                let u = vectors.column(c);
                // Rayleigh quotient keeps the value tied to the rotated vector
                let lambda = if idx.len() == 1 { lambdas[0] } else { (u.transpose() * self_sym(&m, &sqrt_w) * u)[0] };
                let eigenvector = (0..n).map(|i| u[i] / sqrt_w[i]).collect();
                pairs.push(Eigenpair { eigenvalue: lambda, eigenvector, label });
            }
            start = end;
        }
        Ok(SpectrumReport { degree: k, tol, eigenpairs: pairs })
    }

    /// Maximum of `‖−Δ_k d f − λ d f‖ / ‖d f‖` (weighted norms) over the
    /// δ-spectrum eigenpairs `(λ, f)` of `−Δ_{k−1}`; `k ≥ 1`.
    pub fn transfer_residual(&self, lower: &SpectrumReport) -> Result<f64> {
        let k = lower.degree + 1;
        self.check_degree(k)?;
        let d = self.d_matrix(k - 1)?.to_f64();
        let lap = self.laplacian_matrix(k)?.to_f64();
        let w: Vec<f64> = self.weights(k).iter().map(to_f64).collect();
        let norm = |v: &DVector<f64>| v.iter().zip(&w).map(|(x, w)| w * x * x).sum::<f64>().sqrt();
        let mut worst: f64 = 0.0;
        for p in lower.eigenpairs.iter().filter(|p| p.label == SpectralLabel::DeltaSpectrum) {
            let df = &d * DVector::from_column_slice(&p.eigenvector);
            let r = &lap * &df - &df * p.eigenvalue;
            worst = worst.max(norm(&r) / norm(&df));
        }
        Ok(worst)
    }
}

fn self_sym(m: &DMatrix<f64>, sqrt_w: &[f64]) -> DMatrix<f64> {
    let n = sqrt_w.len();
    let s = DMatrix::from_fn(n, n, |i, j| sqrt_w[i] * m[(i, j)] / sqrt_w[j]);
    (s.clone() + s.transpose()) * 0.5
}

fn symmetric_eigen(m: DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numeric("symmetric eigensolver did not converge".into()))
}

/// Compares two ascending eigenvalue lists as multisets.
pub fn multisets_agree(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[cfg(test)]
mod tests {
    use super::super::testing::triangle;
    use super::*;

    #[test]
    fn triangle_spectra() {
        let c = triangle();
        let s0 = c.spectrum(0, DEFAULT_TOL).unwrap();
        assert_eq!(s0.eigenvalues(SpectralLabel::Harmonic).len(), 1);
        let delta = s0.eigenvalues(SpectralLabel::DeltaSpectrum);
        assert!(multisets_agree(&delta, &[9.0, 9.0], 1e-9));
        let s1 = c.spectrum(1, DEFAULT_TOL).unwrap();
        assert!(multisets_agree(&s1.eigenvalues(SpectralLabel::DSpectrum), &[9.0, 9.0], 1e-9));
        assert!(multisets_agree(&s1.eigenvalues(SpectralLabel::DeltaSpectrum), &[3.0], 1e-9));
        assert!(c.transfer_residual(&s0).unwrap() < 1e-12);
        let rows = s0.rows();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].multiplicity, 2);
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        assert!(matches!(triangle().spectrum(0, 0.0), Err(Error::InvalidInput(_))));
    }
}
