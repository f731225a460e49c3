use std::fmt;

use serde::Serialize;

use crate::complex::KForm;
use crate::fractal::{Family, Word};
use crate::rational::Rational;

/// Where a harmonic 1-form came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// The level-1 generator seated on `F_ω` and extended.
    Generator { word: Word },
    /// Basis form `index` of the level-1 family seated on `F_ω`.
    Seated { index: usize, word: Word },
    /// Level-1 placement leaving sub-simplex `empty` at zero.
    Placement { empty: usize },
    /// Member of the family dual to the cycles.
    Dual { word: Word },
    Combination,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Generator { word } => write!(f, "h({word})"),
            Provenance::Seated { index, word } => write!(f, "A{}({word})", index + 1),
            Provenance::Placement { empty } => write!(f, "P{empty}"),
            Provenance::Dual { word } => write!(f, "dual({word})"),
            Provenance::Combination => f.write_str("combination"),
        }
    }
}

/// A 1-form on a level-m gasket complex with its origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicOneForm {
    pub family: Family,
    pub level: usize,
    pub form: KForm,
    pub provenance: Provenance,
}

impl HarmonicOneForm {
    pub(crate) fn from_values(family: Family, level: usize, values: Vec<Rational>, provenance: Provenance) -> Self {
        Self { family, level, form: KForm::raw(&family.complex_id(level), 1, values), provenance }
    }

    pub fn values(&self) -> &[Rational] {
        self.form.values()
    }
}

/// Linear combination `Σ c_i v_i` of equal-length value vectors.
pub(crate) fn combine<'a>(len: usize, terms: impl IntoIterator<Item = (&'a Rational, &'a [Rational])>) -> Vec<Rational> {
    use num_traits::Zero;
    let mut out = vec![Rational::zero(); len];
    for (c, v) in terms {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o += c * x;
            }
        }
    }
    out
}
