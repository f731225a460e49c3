//! Finite graph complexes with signed incidence and positive weights, and
//! the calculus of k-forms on them: `d`, `δ`, inner products, energies,
//! Laplacians and harmonic forms.

mod chain;
mod form;
pub mod hodge;
pub mod spectrum;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use chain::Chain;
pub use form::KForm;

/// One cell of a complex. `(degree, index)` is unique within its complex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub degree: usize,
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Signed incidence between degree `k` and degree `k + 1`.
#[derive(Debug, Clone, Default)]
pub struct Incidence {
    /// For each `(k+1)`-cell, its `k`-faces with signs.
    faces: Vec<Vec<(usize, i8)>>,
    /// For each `k`-cell, the `(k+1)`-cells containing it with signs.
    cofaces: Vec<Vec<(usize, i8)>>,
}

impl Incidence {
    fn new(lower: usize, upper: usize, triplets: &[(usize, usize, i8)]) -> Result<Self> {
        let mut faces = vec![Vec::new(); upper];
        let mut cofaces = vec![Vec::new(); lower];
        let mut seen = BTreeMap::new();
        for &(lo, up, sign) in triplets {
            if lo >= lower || up >= upper {
                return Err(Error::InvalidComplex(format!("incidence ({lo}, {up}) out of range")));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::InvalidComplex(format!("sign {sign} at ({lo}, {up}) is not ±1")));
            }
            if seen.insert((lo, up), sign).is_some() {
                return Err(Error::InvalidComplex(format!("duplicate incidence ({lo}, {up})")));
            }
            faces[up].push((lo, sign));
            cofaces[lo].push((up, sign));
        }
        for f in faces.iter_mut().chain(cofaces.iter_mut()) {
            f.sort_unstable();
        }
        Ok(Self { faces, cofaces })
    }

    /// Signed faces of an upper cell.
    pub fn faces(&self, upper: usize) -> &[(usize, i8)] {
        &self.faces[upper]
    }

    /// Signed cofaces of a lower cell.
    pub fn cofaces(&self, lower: usize) -> &[(usize, i8)] {
        &self.cofaces[lower]
    }

    pub fn sign(&self, lower: usize, upper: usize) -> i8 {
        self.faces[upper]
            .iter()
            .find(|(l, _)| *l == lower)
            .map_or(0, |(_, s)| *s)
    }

    /// Every incidence as `(lower, upper, sign)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        self.faces
            .iter()
            .enumerate()
            .flat_map(|(u, fs)| fs.iter().map(move |&(l, s)| (l, u, s)))
    }
}

/// Strictly positive weights `μ_k` per degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightScheme {
    per_degree: Vec<Vec<Rational>>,
}

impl WeightScheme {
    pub fn new(per_degree: Vec<Vec<Rational>>) -> Result<Self> {
        for (k, ws) in per_degree.iter().enumerate() {
            if let Some(i) = ws.iter().position(|w| !w.is_positive()) {
                return Err(Error::InvalidComplex(format!("weight of cell ({k}, {i}) is not positive")));
            }
        }
        Ok(Self { per_degree })
    }

    pub fn degree(&self, k: usize) -> &[Rational] {
        &self.per_degree[k]
    }
}

/// A finite leveled cell family `E_0, …, E_n` with signed incidence between
/// adjacent degrees and positive weights.
#[derive(Debug, Clone)]
pub struct Complex {
    id: String,
    cells: Vec<Vec<Cell>>,
    incidence: Vec<Incidence>,
    weights: WeightScheme,
}

/// One failed identity found by [`Complex::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `Σ_{e_k} sgn(e_{k-1}, e_k) sgn(e_k, e_{k+1}) ≠ 0` for the pair
    /// `(lower, upper)` of degrees `(degree, degree + 2)`.
    Parity { degree: usize, lower: usize, upper: usize, sum: i64 },
    /// A cell of intermediate degree with no face or no coface.
    Chain { degree: usize, index: usize, missing_face: bool },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Parity { degree, lower, upper, sum } => write!(
                f,
                "parity sum {sum} != 0 for ({degree}-cell {lower}, {}-cell {upper})",
                degree + 2
            ),
            Violation::Chain { degree, index, missing_face: true } => {
                write!(f, "{degree}-cell {index} has no {}-face", degree - 1)
            }
            Violation::Chain { degree, index, missing_face: false } => {
                write!(f, "{degree}-cell {index} lies in no {}-cell", degree + 1)
            }
        }
    }
}

impl Complex {
    /// Assembles a complex from cell counts, incidence triplets
    /// `(lower, upper, sign)` for each adjacent degree pair, and weights.
    ///
    /// Shape errors are rejected here; parity identities are checked by
    /// [`Complex::validate`] so that broken complexes can still be inspected.
    pub fn new(
        id: impl Into<String>,
        cells: Vec<Vec<Cell>>,
        incidence: Vec<Vec<(usize, usize, i8)>>,
        weights: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidComplex("no degree classes".into()));
        }
        let n = cells.len() - 1;
        if incidence.len() != n || weights.len() != n + 1 {
            return Err(Error::InvalidComplex(format!(
                "top degree {n} needs {n} incidence tables and {} weight vectors",
                n + 1
            )));
        }
        for (k, cs) in cells.iter().enumerate() {
            for (i, c) in cs.iter().enumerate() {
                if c.degree != k || c.index != i {
                    return Err(Error::InvalidComplex(format!(
                        "cell ({}, {}) stored at ({k}, {i})",
                        c.degree, c.index
                    )));
                }
            }
            if weights[k].len() != cs.len() {
                return Err(Error::InvalidComplex(format!("degree {k} weight count mismatch")));
            }
        }
        let incidence = incidence
            .iter()
            .enumerate()
            .map(|(k, t)| Incidence::new(cells[k].len(), cells[k + 1].len(), t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { id: id.into(), cells, incidence, weights: WeightScheme::new(weights)? })
    }

    /// Unlabeled cells `0..count` of one degree.
    pub fn plain_cells(degree: usize, count: usize) -> Vec<Cell> {
        (0..count).map(|index| Cell { degree, index, label: None }).collect()
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn max_degree(&self) -> usize {
        self.cells.len() - 1
    }

    /// Number of `k`-cells; degrees above the top are empty.
    pub fn count(&self, k: usize) -> usize {
        self.cells.get(k).map_or(0, Vec::len)
    }

    pub fn cells(&self, k: usize) -> &[Cell] {
        &self.cells[k]
    }

    pub fn cell(&self, k: usize, index: usize) -> Result<&Cell> {
        self.cells
            .get(k)
            .and_then(|cs| cs.get(index))
            .ok_or(Error::NoSuchCell { degree: k, index })
    }

    /// Incidence between degree `k` and `k + 1`.
    pub fn incidence(&self, k: usize) -> &Incidence {
        &self.incidence[k]
    }

    pub fn weights(&self, k: usize) -> &[Rational] {
        self.weights.degree(k)
    }

    pub fn weight_scheme(&self) -> &WeightScheme {
        &self.weights
    }

    /// Lists every violated parity identity and chain condition; empty iff
    /// the complex is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut report = Vec::new();
        let n = self.max_degree();
        for k in 1..n {
            let (below, above) = (&self.incidence[k - 1], &self.incidence[k]);
            for upper in 0..self.count(k + 1) {
                let mut sums: BTreeMap<usize, i64> = BTreeMap::new();
                for &(mid, s_up) in above.faces(upper) {
                    for &(lower, s_lo) in below.faces(mid) {
                        *sums.entry(lower).or_default() += i64::from(s_lo * s_up);
                    }
                }
                for (lower, sum) in sums.into_iter().filter(|(_, s)| *s != 0) {
                    report.push(Violation::Parity { degree: k - 1, lower, upper, sum });
                }
            }
        }
        for k in 1..n {
            let has_upper = self.count(k + 1) > 0;
            for index in 0..self.count(k) {
                if self.incidence[k - 1].faces(index).is_empty() {
                    report.push(Violation::Chain { degree: k, index, missing_face: true });
                }
                if has_upper && self.incidence[k].cofaces(index).is_empty() {
                    report.push(Violation::Chain { degree: k, index, missing_face: false });
                }
            }
        }
        report
    }

    /// Returns a copy with one incidence sign negated.
    pub fn with_flipped_sign(&self, k: usize, lower: usize, upper: usize) -> Result<Self> {
        let mut triplets: Vec<Vec<(usize, usize, i8)>> =
            self.incidence.iter().map(|inc| inc.triplets().collect()).collect();
        let entry = triplets
            .get_mut(k)
            .and_then(|t| t.iter_mut().find(|(l, u, _)| *l == lower && *u == upper))
            .ok_or(Error::NoSuchCell { degree: k, index: lower })?;
        entry.2 = -entry.2;
        Complex::new(
            format!("{}-flipped", self.id),
            self.cells.clone(),
            triplets,
            self.weights.per_degree.clone(),
        )
    }

    pub(crate) fn check_degree(&self, k: usize) -> Result<()> {
        if k > self.max_degree() {
            Err(Error::DegreeOutOfRange { degree: k, max: self.max_degree() })
        } else {
            Ok(())
        }
    }
}

/// A weighted sparse row `Σ coeff · x[col]`.
pub(crate) type SparseRow = Vec<(usize, Rational)>;

impl Complex {
    /// Rows of `d_k`, one per `(k+1)`-cell.
    pub(crate) fn d_rows(&self, k: usize) -> Vec<SparseRow> {
        if k >= self.max_degree() {
            return Vec::new();
        }
        let inc = &self.incidence[k];
        (0..self.count(k + 1))
            .map(|u| inc.faces(u).iter().map(|&(l, s)| (l, Rational::from_integer(s.into()))).collect())
            .collect()
    }

    /// Rows of `δ_k`, one per `(k-1)`-cell. Empty for `k = 0`.
    pub(crate) fn delta_rows(&self, k: usize) -> Vec<SparseRow> {
        if k == 0 || k > self.max_degree() {
            return Vec::new();
        }
        let inc = &self.incidence[k - 1];
        let (mu_hi, mu_lo) = (self.weights(k), self.weights(k - 1));
        (0..self.count(k - 1))
            .map(|l| {
                inc.cofaces(l)
                    .iter()
                    .map(|&(u, s)| {
                        let w = &mu_hi[u] / &mu_lo[l];
                        (u, if s > 0 { w } else { -w })
                    })
                    .collect()
            })
            .collect()
    }
}

pub(crate) fn apply_rows(rows: &[SparseRow], v: &[Rational]) -> Vec<Rational> {
    rows.iter()
        .map(|row| {
            row.iter()
                .filter(|(c, _)| !v[*c].is_zero())
                .map(|(c, a)| a * &v[*c])
                .sum()
        })
        .collect()
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;
    use crate::rational::{int, rat};

    /// Counterclockwise triangle: vertices 0,1,2; edges 0→1, 1→2, 2→0;
    /// one face. Weights μ_0 = 1/3, μ_1 = μ_2 = 1.
    pub fn triangle() -> Complex {
        Complex::new(
            "triangle",
            vec![Complex::plain_cells(0, 3), Complex::plain_cells(1, 3), Complex::plain_cells(2, 1)],
            vec![
                vec![(0, 0, -1), (1, 0, 1), (1, 1, -1), (2, 1, 1), (2, 2, -1), (0, 2, 1)],
                vec![(0, 0, 1), (1, 0, 1), (2, 0, 1)],
            ],
            vec![vec![rat(1, 3); 3], vec![int(1); 3], vec![int(1)]],
        )
        .unwrap()
    }
}
