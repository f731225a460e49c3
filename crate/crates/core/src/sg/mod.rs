//! Harmonic 1-forms on the level-m Sierpinski gasket graphs.
//!
//! Edge `e` of cell `ω` has id `3·index(ω) + e`, with base edges
//! `q0→q1`, `q1→q2`, `q2→q0`.

mod cycles;
mod trace;
mod witness;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractal::{build_sg, Family, Word};
use crate::harmonic::{HarmonicOneForm, Provenance};
use crate::rational::{int, rat, Rational};

pub use cycles::{boundary_chain, cycle_chain, cycle_integral, dual_basis, pairing_table, realize_cycle_data, PairingTable};
pub use trace::{d1_approx, delta2_trace, trace_edge_data};
pub(crate) use trace::segment_cells;
pub use witness::{
    divergent_series_witness, oscillation_counterexample, oscillation_counterexample_f64, DivergenceWitness,
    OscillationWitness,
};

/// Ids of the three edges of the level-1 upside-down triangle, one per
/// cell: `(cell 0, e1)`, `(cell 1, e2)`, `(cell 2, e0)`.
pub const INNER_EDGES: [usize; 3] = [1, 5, 6];

/// The harmonic 1-form spanning `H₁` of the level-1 graph, scaled so the
/// inner edges carry 2. Computed from the exact nullspace.
pub fn base_generator() -> Result<HarmonicOneForm> {
    let g = build_sg(1)?;
    let basis = g.complex().harmonic_basis(1)?;
    if basis.len() != 1 {
        return Err(Error::Consistency(format!("level-1 harmonic space has dimension {}", basis.len())));
    }
    let raw = basis[0].values();
    let pivot = &raw[INNER_EDGES[0]];
    if pivot.is_zero() {
        return Err(Error::Consistency("generator vanishes on an inner edge".into()));
    }
    let scale = int(2) / pivot;
    let values = raw.iter().map(|v| v * &scale).collect();
    Ok(HarmonicOneForm::from_values(Family::Sg, 1, values, Provenance::Generator { word: Word::empty() }))
}

/// One step of the local extension: every cell with edge values `(x, y, z)`
/// hands its three children the values fixed by the potential extension.
pub fn extend_values(values: &[Rational]) -> Result<Vec<Rational>> {
    if values.len() % 3 != 0 {
        return Err(Error::InvalidInput(format!("{} edge values is not a multiple of 3", values.len())));
    }
    let fifth = rat(1, 5);
    let three = int(3);
    let mut out = Vec::with_capacity(values.len() * 3);
    for (cell, chunk) in values.chunks(3).enumerate() {
        let (x, y, z) = (&chunk[0], &chunk[1], &chunk[2]);
        if !(x + y + z).is_zero() {
            return Err(Error::NotClosed(format!("cell {cell} has edge sum {}", x + y + z)));
        }
        if x.is_zero() && y.is_zero() {
            out.extend(std::iter::repeat_n(Rational::zero(), 9));
            continue;
        }
        let t = |a: &Rational, b: &Rational| (&three * a + b) * &fifth;
        out.extend([
            t(x, y), y * &fifth, t(z, y),
            t(x, z), t(y, z), z * &fifth,
            x * &fifth, t(y, x), t(z, x),
        ]);
    }
    Ok(out)
}

/// Harmonic extension to the next level.
pub fn extend(h: &HarmonicOneForm) -> Result<HarmonicOneForm> {
    if h.family != Family::Sg {
        return Err(Error::InvalidInput("SG extension applied to a non-SG form".into()));
    }
    let values = extend_values(h.values())?;
    Ok(HarmonicOneForm::from_values(Family::Sg, h.level + 1, values, h.provenance.clone()))
}

/// Generator values placed on the level-`|ω|+1` children of `F_ω`.
pub(crate) fn seat(pattern: &[Rational], word: &Word, arity: usize, edges_per_cell: usize) -> Vec<Rational> {
    let level = word.len() + 1;
    let cells = arity.pow(level as u32);
    let mut values = vec![Rational::zero(); cells * edges_per_cell];
    let first = word.index(arity) * arity * edges_per_cell;
    values[first..first + pattern.len()].clone_from_slice(pattern);
    values
}

/// `h_ω`: the generator miniaturized to `F_ω` and extended to level `m`.
pub fn seated_generator(generator: &HarmonicOneForm, word: &Word, m: usize) -> Result<HarmonicOneForm> {
    word.check_arity(3)?;
    if word.len() >= m {
        return Err(Error::InvalidInput(format!("word `{word}` too long for level {m}")));
    }
    let mut values = seat(generator.values(), word, 3, 3);
    for _ in word.len() + 1..m {
        values = extend_values(&values)?;
    }
    Ok(HarmonicOneForm::from_values(Family::Sg, m, values, Provenance::Generator { word: word.clone() }))
}

/// `{h_ω : |ω| ≤ m − 1}` in order of word length, then lexicographic.
pub fn basis(m: usize) -> Result<Vec<HarmonicOneForm>> {
    if m == 0 {
        return Err(Error::InvalidInput("the harmonic basis needs level m ≥ 1".into()));
    }
    let generator = base_generator()?;
    Word::up_to(m - 1, 3).par_iter().map(|w| seated_generator(&generator, w, m)).collect()
}
