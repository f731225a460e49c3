use num_traits::Zero;
use serde::Serialize;

use super::{apply_rows, Complex};
use crate::error::{Error, Result};
use crate::linalg::{RationalMatrix, SparseEchelon};
use crate::rational::{primitive_integer_vector, zero, Rational};

/// A degree-`k` form: one exact rational per `k`-cell of its complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KForm {
    complex: String,
    degree: usize,
    #[serde(skip)]
    values: Vec<Rational>,
}

impl KForm {
    pub fn new(complex: &Complex, degree: usize, values: Vec<Rational>) -> Result<Self> {
        complex.check_degree(degree)?;
        let expected = complex.count(degree);
        if values.len() != expected {
            return Err(Error::LengthMismatch { degree, expected, found: values.len() });
        }
        Ok(Self { complex: complex.id().to_string(), degree, values })
    }

    pub fn zero(complex: &Complex, degree: usize) -> Result<Self> {
        Self::new(complex, degree, vec![zero(); complex.count(degree)])
    }

    /// Form with unchecked values; the caller guarantees the length.
    pub(crate) fn raw(complex: &str, degree: usize, values: Vec<Rational>) -> Self {
        Self { complex: complex.to_string(), degree, values }
    }

    pub fn complex_id(&self) -> &str {
        &self.complex
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn value(&self, index: usize) -> &Rational {
        &self.values[index]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Self { values, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { values, ..self.clone() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { values: self.values.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.complex != other.complex {
            return Err(Error::ComplexMismatch { expected: self.complex.clone(), found: other.complex.clone() });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(())
    }
}

impl Complex {
    pub(crate) fn check_form(&self, f: &KForm) -> Result<()> {
        if f.complex != self.id {
            return Err(Error::ComplexMismatch { expected: self.id.clone(), found: f.complex.clone() });
        }
        self.check_degree(f.degree)?;
        if f.values.len() != self.count(f.degree) {
            return Err(Error::LengthMismatch {
                degree: f.degree,
                expected: self.count(f.degree),
                found: f.values.len(),
            });
        }
        Ok(())
    }

    /// Exterior derivative `(d f)(e_{k+1}) = Σ sgn(e_k, e_{k+1}) f(e_k)`.
    ///
    /// At the top degree the result is the zero form on the (empty) class
    /// of degree `n + 1`.
    pub fn d(&self, f: &KForm) -> Result<KForm> {
        self.check_form(f)?;
        let values = apply_rows(&self.d_rows(f.degree), &f.values);
        Ok(KForm::raw(&self.id, f.degree + 1, values))
    }

    /// Codifferential, the adjoint of `d` in the weighted inner products.
    pub fn delta(&self, f: &KForm) -> Result<KForm> {
        self.check_form(f)?;
        if f.degree == 0 {
            return Err(Error::BottomDegree);
        }
        let values = apply_rows(&self.delta_rows(f.degree), &f.values);
        Ok(KForm::raw(&self.id, f.degree - 1, values))
    }

    /// `⟨f, g⟩_k = Σ μ_k(e) f(e) g(e)`.
    pub fn inner(&self, f: &KForm, g: &KForm) -> Result<Rational> {
        self.check_form(f)?;
        self.check_form(g)?;
        if f.degree != g.degree {
            return Err(Error::DegreeMismatch { expected: f.degree, found: g.degree });
        }
        Ok(self.weighted_dot(f.degree, &f.values, &g.values))
    }

    pub(crate) fn weighted_dot(&self, k: usize, a: &[Rational], b: &[Rational]) -> Rational {
        self.weights(k)
            .iter()
            .zip(a.iter().zip(b))
            .filter(|(_, (x, y))| !x.is_zero() && !y.is_zero())
            .map(|(w, (x, y))| w * x * y)
            .sum()
    }

    /// `E_k(f, g) = ⟨df, dg⟩ + ⟨δf, δg⟩`, dropping absent terms at the
    /// extreme degrees.
    pub fn energy_pair(&self, f: &KForm, g: &KForm) -> Result<Rational> {
        self.check_form(f)?;
        self.check_form(g)?;
        let k = f.degree;
        let mut e = zero();
        if k < self.max_degree() {
            let (df, dg) = (self.d(f)?, self.d(g)?);
            e += self.weighted_dot(k + 1, &df.values, &dg.values);
        }
        if k > 0 {
            let (sf, sg) = (self.delta(f)?, self.delta(g)?);
            e += self.weighted_dot(k - 1, &sf.values, &sg.values);
        }
        Ok(e)
    }

    pub fn energy(&self, f: &KForm) -> Result<Rational> {
        self.energy_pair(f, f)
    }

    /// `−Δ_k f = δ_{k+1} d_k f + d_{k−1} δ_k f`.
    pub fn neg_laplacian(&self, f: &KForm) -> Result<KForm> {
        self.check_form(f)?;
        let k = f.degree;
        let mut out = vec![zero(); self.count(k)];
        if k < self.max_degree() {
            let ddf = apply_rows(&self.delta_rows(k + 1), &apply_rows(&self.d_rows(k), &f.values));
            out.iter_mut().zip(ddf).for_each(|(o, v)| *o += v);
        }
        if k > 0 {
            let dsf = apply_rows(&self.d_rows(k - 1), &apply_rows(&self.delta_rows(k), &f.values));
            out.iter_mut().zip(dsf).for_each(|(o, v)| *o += v);
        }
        Ok(KForm::raw(&self.id, k, out))
    }

    /// Matrix of `d_k` (`#E_{k+1} × #E_k`).
    pub fn d_matrix(&self, k: usize) -> Result<RationalMatrix> {
        self.check_degree(k)?;
        Ok(rows_to_matrix(&self.d_rows(k), self.count(k + 1), self.count(k)))
    }

    /// Matrix of `δ_k` (`#E_{k−1} × #E_k`); `k ≥ 1`.
    pub fn delta_matrix(&self, k: usize) -> Result<RationalMatrix> {
        self.check_degree(k)?;
        if k == 0 {
            return Err(Error::BottomDegree);
        }
        Ok(rows_to_matrix(&self.delta_rows(k), self.count(k - 1), self.count(k)))
    }

    /// Matrix of `−Δ_k` acting on coordinate forms.
    pub fn laplacian_matrix(&self, k: usize) -> Result<RationalMatrix> {
        self.check_degree(k)?;
        let n = self.count(k);
        let mut m = RationalMatrix::zeros(n, n);
        if k < self.max_degree() {
            m = self.delta_matrix(k + 1)?.mul(&self.d_matrix(k)?);
        }
        if k > 0 {
            let lower = self.d_matrix(k - 1)?.mul(&self.delta_matrix(k)?);
            for i in 0..n {
                for j in 0..n {
                    if !lower[(i, j)].is_zero() {
                        let v = &m[(i, j)] + &lower[(i, j)];
                        m[(i, j)] = v;
                    }
                }
            }
        }
        Ok(m)
    }

    /// Echelon form of the stacked constraints `d_k f = 0`, `δ_k f = 0`.
    pub fn harmonic_constraints(&self, k: usize) -> Result<SparseEchelon> {
        self.check_degree(k)?;
        let mut ech = SparseEchelon::new(self.count(k));
        for row in self.d_rows(k).iter().chain(self.delta_rows(k).iter()) {
            ech.insert(row);
        }
        Ok(ech)
    }

    /// `dim ker d_k ∩ ker δ_k`.
    pub fn harmonic_dimension(&self, k: usize) -> Result<usize> {
        Ok(self.harmonic_constraints(k)?.nullity())
    }

    /// Basis of harmonic `k`-forms from the exact nullspace of the stacked
    /// constraints, each scaled to coprime integers.
    pub fn harmonic_basis(&self, k: usize) -> Result<Vec<KForm>> {
        let ech = self.harmonic_constraints(k)?;
        Ok(ech
            .nullspace()
            .into_iter()
            .map(|v| KForm::raw(&self.id, k, primitive_integer_vector(&v)))
            .collect())
    }
}

fn rows_to_matrix(rows: &[super::SparseRow], nrows: usize, ncols: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row {
            m[(r, *c)] = v.clone();
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::super::testing::triangle;
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn form(c: &Complex, k: usize, v: &[i64]) -> KForm {
        KForm::new(c, k, v.iter().map(|&x| int(x)).collect()).unwrap()
    }

    #[test]
    fn constants_are_closed() {
        let c = triangle();
        let df = c.d(&form(&c, 0, &[4, 4, 4])).unwrap();
        assert!(df.is_zero());
        assert_eq!(c.energy(&form(&c, 0, &[4, 4, 4])).unwrap(), int(0));
    }

    #[test]
    fn codifferential_of_zero_form_is_flagged() {
        let c = triangle();
        assert_eq!(c.delta(&form(&c, 0, &[1, 2, 3])), Err(Error::BottomDegree));
    }

    #[test]
    fn top_degree_derivative_is_empty_zero_form() {
        let c = triangle();
        let top = c.d(&form(&c, 2, &[5])).unwrap();
        assert_eq!(top.degree(), 3);
        assert!(top.values().is_empty());
    }

    #[test]
    fn triangle_laplacians() {
        let c = triangle();
        let l0 = c.laplacian_matrix(0).unwrap();
        // rows Σ (μ1/μ0)(f(x) − f(y)) = 3·(2, −1, −1)
        assert_eq!(l0.row(0), &[int(6), int(-3), int(-3)]);
        let l2 = c.laplacian_matrix(2).unwrap();
        assert_eq!(l2, RationalMatrix::from_rows(&[vec![int(3)]]));
    }

    #[test]
    fn no_harmonic_one_forms_on_triangle() {
        let c = triangle();
        assert!(c.harmonic_basis(1).unwrap().is_empty());
        let h0 = c.harmonic_basis(0).unwrap();
        assert_eq!(h0.len(), 1);
        assert_eq!(h0[0].values(), &[int(1), int(1), int(1)]);
    }

    #[test]
    fn mismatched_forms_are_rejected() {
        let c = triangle();
        let f = form(&c, 0, &[1, 2, 3]);
        let g = form(&c, 1, &[1, 2, 3]);
        assert!(matches!(c.inner(&f, &g), Err(Error::DegreeMismatch { .. })));
        assert!(matches!(KForm::new(&c, 1, vec![int(1)]), Err(Error::LengthMismatch { .. })));
        let other = Complex::new(
            "other",
            vec![Complex::plain_cells(0, 3)],
            vec![],
            vec![vec![rat(1, 3); 3]],
        )
        .unwrap();
        let h = form(&other, 0, &[1, 2, 3]);
        assert!(matches!(c.inner(&f, &h), Err(Error::ComplexMismatch { .. })));
    }

    proptest! {
        #[test]
        fn duality_and_energy_identity(
            f0 in proptest::collection::vec(-9i64..10, 3),
            f1 in proptest::collection::vec(-9i64..10, 3),
            g1 in proptest::collection::vec(-9i64..10, 3),
        ) {
            let c = triangle();
            let (f0, f1, g1) = (form(&c, 0, &f0), form(&c, 1, &f1), form(&c, 1, &g1));
            // ⟨δf, g⟩ = ⟨f, dg⟩
            prop_assert_eq!(
                c.inner(&c.delta(&f1).unwrap(), &f0).unwrap(),
                c.inner(&f1, &c.d(&f0).unwrap()).unwrap()
            );
            // ⟨−Δf, g⟩ = E(f, g)
            prop_assert_eq!(
                c.inner(&c.neg_laplacian(&f1).unwrap(), &g1).unwrap(),
                c.energy_pair(&f1, &g1).unwrap()
            );
            prop_assert!(c.d(&c.d(&f0).unwrap()).unwrap().is_zero());
        }
    }
}
