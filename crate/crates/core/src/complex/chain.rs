use std::collections::BTreeMap;

use num_traits::Zero;

use super::{Complex, KForm};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Formal rational combination of `k`-cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chain {
    degree: usize,
    coefficients: BTreeMap<usize, Rational>,
}

impl Chain {
    pub fn new(degree: usize) -> Self {
        Self { degree, coefficients: BTreeMap::new() }
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut c = Self::new(degree);
        for (i, a) in terms {
            c.add_term(i, a);
        }
        c
    }

    pub fn add_term(&mut self, cell: usize, coefficient: Rational) {
        let entry = self.coefficients.entry(cell).or_insert_with(Rational::zero);
        *entry += coefficient;
        if entry.is_zero() {
            self.coefficients.remove(&cell);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coefficients(&self) -> &BTreeMap<usize, Rational> {
        &self.coefficients
    }

    pub fn coefficient(&self, cell: usize) -> Rational {
        self.coefficients.get(&cell).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

impl Complex {
    fn check_chain(&self, ch: &Chain) -> Result<()> {
        self.check_degree(ch.degree)?;
        if let Some((&i, _)) = ch.coefficients.iter().find(|(&i, _)| i >= self.count(ch.degree)) {
            return Err(Error::NoSuchCell { degree: ch.degree, index: i });
        }
        Ok(())
    }

    /// `∂ e_k = Σ sgn(e_{k−1}, e_k) e_{k−1}`, extended linearly.
    pub fn boundary(&self, ch: &Chain) -> Result<Chain> {
        self.check_chain(ch)?;
        if ch.degree == 0 {
            return Err(Error::BottomDegree);
        }
        let inc = self.incidence(ch.degree - 1);
        let mut out = Chain::new(ch.degree - 1);
        for (&cell, a) in &ch.coefficients {
            for &(lower, s) in inc.faces(cell) {
                out.add_term(lower, if s > 0 { a.clone() } else { -a.clone() });
            }
        }
        Ok(out)
    }

    /// `∫_C f = Σ a_e f(e)`.
    pub fn integrate(&self, f: &KForm, ch: &Chain) -> Result<Rational> {
        self.check_form(f)?;
        self.check_chain(ch)?;
        if f.degree() != ch.degree {
            return Err(Error::DegreeMismatch { expected: ch.degree, found: f.degree() });
        }
        Ok(ch.coefficients.iter().map(|(&i, a)| a * f.value(i)).sum())
    }
}

#[cfg(test)]
mod tests {
    use super::super::testing::triangle;
    use super::*;
    use crate::rational::{int, one};
    use proptest::prelude::*;

    #[test]
    fn boundary_of_boundary_vanishes() {
        let c = triangle();
        let face = Chain::from_terms(2, [(0, one())]);
        let edges = c.boundary(&face).unwrap();
        assert_eq!(edges, Chain::from_terms(1, [(0, one()), (1, one()), (2, one())]));
        assert!(c.boundary(&edges).unwrap().is_zero());
    }

    #[test]
    fn single_edge_boundary_is_head_minus_tail() {
        let c = triangle();
        let b = c.boundary(&Chain::from_terms(1, [(0, one())])).unwrap();
        assert_eq!(b, Chain::from_terms(0, [(1, one()), (0, -one())]));
    }

    #[test]
    fn path_integral_of_exact_form() {
        let c = triangle();
        let f0 = KForm::new(&c, 0, vec![int(2), int(7), int(-4)]).unwrap();
        let df = c.d(&f0).unwrap();
        let path = Chain::from_terms(1, [(0, one()), (1, one())]);
        assert_eq!(c.integrate(&df, &path).unwrap(), int(-4 - 2));
        let closed = Chain::from_terms(1, [(0, one()), (1, one()), (2, one())]);
        assert_eq!(c.integrate(&df, &closed).unwrap(), int(0));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let c = triangle();
        let f0 = KForm::new(&c, 0, vec![int(2), int(7), int(-4)]).unwrap();
        assert!(matches!(
            c.integrate(&f0, &Chain::from_terms(1, [(0, one())])),
            Err(Error::DegreeMismatch { .. })
        ));
    }

    proptest! {
        #[test]
        fn stokes(coeffs in proptest::collection::vec(-5i64..6, 3), vals in proptest::collection::vec(-5i64..6, 3)) {
            let c = triangle();
            let ch = Chain::from_terms(1, coeffs.iter().enumerate().map(|(i, &a)| (i, int(a))));
            let f0 = KForm::new(&c, 0, vals.iter().map(|&v| int(v)).collect()).unwrap();
            let lhs = c.integrate(&c.d(&f0).unwrap(), &ch).unwrap();
            let rhs = c.integrate(&f0, &c.boundary(&ch).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
