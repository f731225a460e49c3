//! Orthogonal splitting `D_k = d D_{k−1} ⊕ δ D_{k+1} ⊕ H_k`.
//!
//! The exact piece is `d g` where `δ_k d_{k−1} g = δ_k f`; the coexact piece
//! is `δ w` where `d_k δ_{k+1} w = d_k f`. Both systems are singular but
//! consistent, so any particular solution gives the same projection.

use nalgebra::{DMatrix, DVector};

use super::{apply_rows, Complex, KForm};
use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, SparseEchelon};
use crate::rational::Rational;

/// Exact or floating-point projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ArithmeticMode {
    #[default]
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HodgeParts {
    pub exact: KForm,
    pub coexact: KForm,
    pub harmonic: KForm,
}

/// Dimensions of the three Hodge summands of `D_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HodgeDimensions {
    pub total: usize,
    pub exact: usize,
    pub coexact: usize,
    pub harmonic: usize,
}

/// Per-degree exact projector; reuse it to decompose many forms.
pub struct HodgeSolver<'a> {
    complex: &'a Complex,
    degree: usize,
    lower: Option<RationalMatrix>,
    upper: Option<RationalMatrix>,
}

impl<'a> HodgeSolver<'a> {
    pub fn new(complex: &'a Complex, degree: usize) -> Result<Self> {
        complex.check_degree(degree)?;
        let lower = if degree > 0 {
            Some(complex.delta_matrix(degree)?.mul(&complex.d_matrix(degree - 1)?))
        } else {
            None
        };
        let upper = if degree < complex.max_degree() && complex.count(degree + 1) > 0 {
            Some(complex.d_matrix(degree)?.mul(&complex.delta_matrix(degree + 1)?))
        } else {
            None
        };
        Ok(Self { complex, degree, lower, upper })
    }

    pub fn decompose(&self, f: &KForm) -> Result<HodgeParts> {
        Ok(self.decompose_many(std::slice::from_ref(f))?.remove(0))
    }

    pub fn decompose_many(&self, forms: &[KForm]) -> Result<Vec<HodgeParts>> {
        let c = self.complex;
        let k = self.degree;
        for f in forms {
            c.check_form(f)?;
            if f.degree() != k {
                return Err(Error::DegreeMismatch { expected: k, found: f.degree() });
            }
        }
        let n = c.count(k);
        let zero_parts = || vec![vec![Rational::default(); n]; forms.len()];

        let exact = match &self.lower {
            None => zero_parts(),
            Some(m) => {
                let rows = c.delta_rows(k);
                let rhs: Vec<Vec<Rational>> = forms.iter().map(|f| apply_rows(&rows, f.values())).collect();
                let g = solve_columns(m, &rhs)?;
                let d_rows = c.d_rows(k - 1);
                g.iter().map(|g| apply_rows(&d_rows, g)).collect()
            }
        };
        let coexact = match &self.upper {
            None => zero_parts(),
            Some(m) => {
                let rows = c.d_rows(k);
                let rhs: Vec<Vec<Rational>> = forms.iter().map(|f| apply_rows(&rows, f.values())).collect();
                let w = solve_columns(m, &rhs)?;
                let s_rows = c.delta_rows(k + 1);
                w.iter().map(|w| apply_rows(&s_rows, w)).collect()
            }
        };
        Ok(forms
            .iter()
            .zip(exact.into_iter().zip(coexact))
            .map(|(f, (ex, co))| {
                let harmonic: Vec<Rational> =
                    f.values().iter().zip(ex.iter().zip(&co)).map(|(v, (a, b))| v - a - b).collect();
                HodgeParts {
                    exact: KForm::raw(c.id(), k, ex),
                    coexact: KForm::raw(c.id(), k, co),
                    harmonic: KForm::raw(c.id(), k, harmonic),
                }
            })
            .collect())
    }
}

fn solve_columns(m: &RationalMatrix, rhs: &[Vec<Rational>]) -> Result<Vec<Vec<Rational>>> {
    let b = RationalMatrix::from_columns(rhs, m.nrows());
    let x = m
        .solve(&b)
        .ok_or_else(|| Error::Consistency("Hodge normal equations are inconsistent".into()))?;
    Ok((0..x.ncols()).map(|j| x.column(j)).collect())
}

impl Complex {
    /// Exact Hodge decomposition of one form.
    pub fn hodge_decompose(&self, f: &KForm) -> Result<HodgeParts> {
        HodgeSolver::new(self, f.degree())?.decompose(f)
    }

    /// Floating-point Hodge decomposition by least squares; returns
    /// `(exact, coexact, harmonic)` value vectors.
    pub fn hodge_decompose_float(&self, k: usize, f: &[f64]) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        self.check_degree(k)?;
        let n = self.count(k);
        if f.len() != n {
            return Err(Error::LengthMismatch { degree: k, expected: n, found: f.len() });
        }
        let fv = DVector::from_column_slice(f);
        let exact = if k > 0 {
            let delta = self.delta_matrix(k)?.to_f64();
            let d = self.d_matrix(k - 1)?.to_f64();
            let g = least_squares(&delta * &d, &delta * &fv)?;
            d * g
        } else {
            DVector::zeros(n)
        };
        let coexact = if k < self.max_degree() && self.count(k + 1) > 0 {
            let d = self.d_matrix(k)?.to_f64();
            let delta = self.delta_matrix(k + 1)?.to_f64();
            let w = least_squares(&d * &delta, &d * &fv)?;
            delta * w
        } else {
            DVector::zeros(n)
        };
        let harmonic = &fv - &exact - &coexact;
        Ok((exact.as_slice().to_vec(), coexact.as_slice().to_vec(), harmonic.as_slice().to_vec()))
    }

    /// Dimensions of the Hodge summands by exact ranks.
    pub fn hodge_dimensions(&self, k: usize) -> Result<HodgeDimensions> {
        self.check_degree(k)?;
        let rank_of = |rows: Vec<super::SparseRow>, ncols: usize| {
            let mut e = SparseEchelon::new(ncols);
            for r in &rows {
                e.insert(r);
            }
            e.rank()
        };
        let exact = if k > 0 { rank_of(self.d_rows(k - 1), self.count(k - 1)) } else { 0 };
        let coexact = rank_of(self.d_rows(k), self.count(k));
        Ok(HodgeDimensions {
            total: self.count(k),
            exact,
            coexact,
            harmonic: self.harmonic_dimension(k)?,
        })
    }
}

fn least_squares(a: DMatrix<f64>, b: DVector<f64>) -> Result<DVector<f64>> {
    let scale = a.amax().max(1.0);
    let svd = a.svd(true, true);
    svd.solve(&b, 1e-12 * scale)
        .map_err(|e| Error::Numeric(format!("least squares failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::super::testing::triangle;
    use super::*;
    use crate::rational::int;

    #[test]
    fn exact_form_has_no_other_parts() {
        let c = triangle();
        let g = KForm::new(&c, 0, vec![int(1), int(5), int(-2)]).unwrap();
        let f = c.d(&g).unwrap();
        let parts = c.hodge_decompose(&f).unwrap();
        assert_eq!(parts.exact, f);
        assert!(parts.coexact.is_zero() && parts.harmonic.is_zero());
    }

    #[test]
    fn triangle_one_forms_split_into_exact_and_coexact() {
        let c = triangle();
        let f = KForm::new(&c, 1, vec![int(3), int(0), int(0)]).unwrap();
        let p = c.hodge_decompose(&f).unwrap();
        assert!(p.harmonic.is_zero());
        assert_eq!(p.coexact.values(), &[int(1), int(1), int(1)]);
        assert_eq!(c.inner(&p.exact, &p.coexact).unwrap(), int(0));
        let dims = c.hodge_dimensions(1).unwrap();
        assert_eq!((dims.exact, dims.coexact, dims.harmonic), (2, 1, 0));
    }

    #[test]
    fn float_mode_agrees_with_exact() {
        let c = triangle();
        let f = KForm::new(&c, 1, vec![int(3), int(-1), int(2)]).unwrap();
        let p = c.hodge_decompose(&f).unwrap();
        let (ex, co, h) = c.hodge_decompose_float(1, &[3.0, -1.0, 2.0]).unwrap();
        for (a, b) in ex.iter().zip(p.exact.values()) {
            assert!((a - crate::rational::to_f64(b)).abs() < 1e-12);
        }
        for (a, b) in co.iter().zip(p.coexact.values()) {
            assert!((a - crate::rational::to_f64(b)).abs() < 1e-12);
        }
        assert!(h.iter().all(|x| x.abs() < 1e-12));
    }
}
