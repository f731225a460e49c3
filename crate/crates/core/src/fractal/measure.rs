use num_traits::{One, Zero};

use super::{Family, FractalSpec, Word};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Values on the level-n cells `F_ω(K)`, indexed by word in lexicographic
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMeasure {
    pub family: Family,
    pub level: usize,
    pub values: Vec<Rational>,
}

impl CellMeasure {
    pub fn new(family: Family, level: usize, values: Vec<Rational>) -> Result<Self> {
        let expected = family.arity().pow(level as u32);
        if values.len() != expected {
            return Err(Error::LengthMismatch { degree: family.arity() - 1, expected, found: values.len() });
        }
        Ok(Self { family, level, values })
    }

    pub fn value(&self, word: &Word) -> &Rational {
        &self.values[word.index(self.family.arity())]
    }

    pub fn total(&self) -> Rational {
        self.values.iter().sum()
    }

    /// Mass of a coarser cell `F_ω(K)`, `|ω| ≤ level`.
    pub fn mass(&self, word: &Word) -> Rational {
        let arity = self.family.arity();
        let span = arity.pow((self.level - word.len()) as u32);
        let start = word.index(arity) * span;
        self.values[start..start + span].iter().sum()
    }

    /// Same measure one level coarser: each cell gets the sum of its
    /// children.
    pub fn coarsen(&self) -> Result<Self> {
        if self.level == 0 {
            return Err(Error::InsufficientDepth { needed: 1, available: 0 });
        }
        let arity = self.family.arity();
        let values = self.values.chunks(arity).map(|c| c.iter().sum()).collect();
        Self::new(self.family, self.level - 1, values)
    }

    /// Multiplies each cell value by `density(ω)`.
    pub fn weighted(&self, density: impl Fn(&Word) -> Rational) -> Self {
        let arity = self.family.arity();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v * density(&Word::from_index(self.level, i, arity)))
            .collect();
        Self { family: self.family, level: self.level, values }
    }
}

/// Self-similar probability measure assigning `b₀^ω = Π b₀^{ω_j}` to each
/// level-n cell.
pub fn standard_measure(spec: &FractalSpec, n: usize) -> Result<CellMeasure> {
    let total: Rational = spec.scaling[0].iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidInput(format!("degree-0 scaling factors sum to {total}, not 1")));
    }
    let arity = spec.arity();
    let mut values = vec![Rational::one()];
    for _ in 0..n {
        values = values.iter().flat_map(|v| spec.scaling[0].iter().map(move |b| v * b)).collect();
    }
    debug_assert_eq!(values.len(), arity.pow(n as u32));
    debug_assert!(!values.iter().any(Zero::is_zero));
    CellMeasure::new(spec.family, n, values)
}
