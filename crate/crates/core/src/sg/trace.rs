//! Discrete approximants of the 2-form trace onto an edge and of the
//! derivative of such traces on a cell.

use crate::error::{Error, Result};
use crate::fractal::{CellMeasure, Family, Word, SG_EDGES};
use crate::rational::{pow, rat, Rational};

fn check_sg(measure: &CellMeasure) -> Result<()> {
    if measure.family != Family::Sg {
        return Err(Error::InvalidInput("trace approximants are defined on SG".into()));
    }
    Ok(())
}

/// `(3/2)^n Σ (f·μ)(σ)` over the level-n cells `σ` that meet the edge
/// `F_ω(e)` along a segment. Cells meeting it at a single vertex are left
/// out. The measure carries `f·μ` at level `n`.
pub fn delta2_trace(f_mu: &CellMeasure, word: &Word, edge: usize) -> Result<Rational> {
    check_sg(f_mu)?;
    word.check_arity(3)?;
    let n = f_mu.level;
    if n < word.len() {
        return Err(Error::InsufficientDepth { needed: word.len(), available: n });
    }
    if edge >= 3 {
        return Err(Error::NoSuchCell { degree: 1, index: edge });
    }
    let sum: Rational = segment_cells(word, edge, n - word.len()).map(|w| f_mu.value(&w).clone()).sum();
    Ok(pow(&rat(3, 2), n as u32) * sum)
}

/// Cells `F_ωτ`, `τ ∈ {a, b}^depth`, lying along the edge `a → b` of
/// `F_ω`, ordered from `a` to `b`.
pub(crate) fn segment_cells(word: &Word, edge: usize, depth: usize) -> impl Iterator<Item = Word> + '_ {
    let (a, b) = SG_EDGES[edge];
    (0..1usize << depth).map(move |bits| {
        let tail: Vec<u8> = (0..depth).rev().map(|i| if bits >> i & 1 == 0 { a as u8 } else { b as u8 }).collect();
        word.concat(&Word::new(tail))
    })
}

/// [`delta2_trace`] on every level-`edge_level` edge, indexed by edge id.
pub fn trace_edge_data(f_mu: &CellMeasure, edge_level: usize) -> Result<Vec<Rational>> {
    Word::all(edge_level, 3)
        .flat_map(|w| (0..3).map(move |e| (w.clone(), e)))
        .map(|(w, e)| delta2_trace(f_mu, &w, e))
        .collect()
}

/// `(2/3)^n Σ f₁(σ)` over the level-n edges `σ` inside the cell `F_ω(K)`.
/// `edge_data` holds one value per level-n edge.
pub fn d1_approx(edge_data: &[Rational], word: &Word, n: usize) -> Result<Rational> {
    word.check_arity(3)?;
    if n < word.len() {
        return Err(Error::InsufficientDepth { needed: word.len(), available: n });
    }
    let expected = 3usize.pow(n as u32 + 1);
    if edge_data.len() != expected {
        return Err(Error::LengthMismatch { degree: 1, expected, found: edge_data.len() });
    }
    let span = 3usize.pow((n - word.len()) as u32);
    let start = 3 * word.index(3) * span;
    let sum: Rational = edge_data[start..start + 3 * span].iter().sum();
    Ok(pow(&rat(2, 3), n as u32) * sum)
}
