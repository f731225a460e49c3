//! Two explicit families showing that energy does not control variation
//! along an edge, and that square-summable coefficients do not control
//! edge values.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::base_generator;
use crate::error::{Error, Result};
use crate::fractal::{vertex_id, Word};
use crate::rational::{int, pow, rat, Rational};

/// 0-form alternating `±a` along the bottom edge at level `m`, zero
/// elsewhere, with `a = 2^{−m/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillationWitness {
    pub level: usize,
    pub amplitude: Rational,
    /// Renormalized graph energy `(5/3)^m Σ_e |d f(e)|²`.
    pub energy: Rational,
    /// `Σ_e |d f(e)|²` over all edges.
    pub square_sum: Rational,
    /// `Σ_e |d f(e)|²` over the bottom-edge segments only.
    pub bottom_square_sum: Rational,
    /// `Σ |d f|` along the bottom edge.
    pub variation: Rational,
}

fn even_level(m: usize) -> Result<usize> {
    if m == 0 || m % 2 != 0 {
        return Err(Error::InvalidInput(format!("exact witnesses need an even level m ≥ 2, got {m}")));
    }
    Ok(m / 2)
}

/// Bottom-edge cells `F_ω K`, `ω ∈ {0, 1}^m`, in left-to-right order.
fn bottom_words(m: usize) -> impl Iterator<Item = Word> {
    (0..1usize << m).map(move |bits| Word::new((0..m).rev().map(|i| (bits >> i & 1) as u8).collect()))
}

/// Exact witness for even `m`. Only the cells along the bottom edge carry
/// nonzero differences, so the sums run over those cells.
pub fn oscillation_counterexample(m: usize) -> Result<OscillationWitness> {
    let half = even_level(m)?;
    let amplitude = rat(1, 1 << half);
    let mut values: HashMap<usize, Rational> = HashMap::new();
    for (position, w) in bottom_words(m).enumerate() {
        for (corner, offset) in [(0usize, 0usize), (1, 1)] {
            let sign = if (position + offset) % 2 == 0 { int(1) } else { int(-1) };
            values.insert(vertex_id(3, w.symbols(), corner), sign * &amplitude);
        }
    }
    let at = |id: usize| values.get(&id).cloned().unwrap_or_else(Rational::zero);
    let (mut square_sum, mut bottom_square_sum, mut variation) = (Rational::zero(), Rational::zero(), Rational::zero());
    for w in bottom_words(m) {
        let q: Vec<Rational> = (0..3).map(|k| at(vertex_id(3, w.symbols(), k))).collect();
        for (t, h) in crate::fractal::SG_EDGES {
            let diff = &q[h] - &q[t];
            square_sum += &diff * &diff;
            if (t, h) == (0, 1) {
                bottom_square_sum += &diff * &diff;
                variation += diff.abs();
            }
        }
    }
    let energy = pow(&rat(5, 3), m as u32) * &square_sum;
    Ok(OscillationWitness { level: m, amplitude, energy, square_sum, bottom_square_sum, variation })
}

/// Floating-point witness for any `m ≥ 1`: `(energy, variation)`.
pub fn oscillation_counterexample_f64(m: usize) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(Error::InvalidInput("level must be ≥ 1".into()));
    }
    let a2 = 2f64.powi(-(m as i32));
    let cells = 2f64.powi(m as i32);
    // per cell: bottom segment (2a)², two slanted edges a² each
    let square_sum = cells * 6.0 * a2;
    let energy = (5.0f64 / 3.0).powi(m as i32) * square_sum;
    let variation = cells * 2.0 * a2.sqrt();
    Ok((energy, variation))
}

/// `Σ c_ω h_ω` over `ω ∈ {0, 1}^m` with `c_ω = (3/10)^{m/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceWitness {
    pub level: usize,
    pub coefficient: Rational,
    /// `Σ (5/3)^{|ω|} |c_ω|²`.
    pub norm_proxy: Rational,
    /// `‖Σ c_ω h_ω‖² / 30` in the weighted inner product at level `m+1`.
    pub weighted_norm_ratio: Rational,
    /// `∫` of the form along the bottom edge of `K`.
    pub edge_value: Rational,
}

pub fn divergent_series_witness(m: usize) -> Result<DivergenceWitness> {
    let half = even_level(m)?;
    let coefficient = pow(&rat(3, 10), half as u32);
    let generator = base_generator()?;
    let level = m + 1;
    let edge_count = 3usize.pow(level as u32 + 1);
    let mut values = vec![Rational::zero(); edge_count];
    let mut norm_proxy = Rational::zero();
    let pattern: Vec<Rational> = generator.values().iter().map(|v| v * &coefficient).collect();
    for w in bottom_words(m) {
        // children F_ωj of F_ω hold edges 9·index(ω) .. 9·index(ω) + 9
        let start = 9 * w.index(3);
        values[start..start + 9].clone_from_slice(&pattern);
        norm_proxy += pow(&rat(5, 3), m as u32) * &coefficient * &coefficient;
    }
    let mu1 = pow(&rat(5, 3), level as u32);
    let weighted: Rational = values.iter().filter(|v| !v.is_zero()).map(|v| v * v).sum::<Rational>() * mu1;
    // bottom edge of K at level m+1: edge 0 of the cells in {0,1}^{m+1}
    let edge_value = bottom_words(level).map(|w| values[3 * w.index(3)].clone()).sum();
    Ok(DivergenceWitness { level: m, coefficient, norm_proxy, weighted_norm_ratio: weighted / int(30), edge_value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::KForm;
    use crate::fractal::{build_sg, graph_energy};
    use crate::rational::to_f64;

    #[test]
    fn oscillation_matches_full_complex() {
        for m in [2, 4] {
            let w = oscillation_counterexample(m).unwrap();
            let g = build_sg(m).unwrap();
            let c = g.complex();
            let mut v = vec![Rational::zero(); c.count(0)];
            for (position, word) in bottom_words(m).enumerate() {
                for (corner, offset) in [(0usize, 0usize), (1, 1)] {
                    let sign = if (position + offset) % 2 == 0 { int(1) } else { int(-1) };
                    v[g.vertex_id(&word, corner)] = sign * &w.amplitude;
                }
            }
            let f = KForm::new(c, 0, v).unwrap();
            assert_eq!(graph_energy(&g, &f).unwrap(), w.energy);
            assert_eq!(w.variation, int(2) * int(1 << (m / 2)));
            assert_eq!(w.bottom_square_sum, int(4));
            let (e, var) = oscillation_counterexample_f64(m).unwrap();
            assert!((e - to_f64(&w.energy)).abs() < 1e-9 * e);
            assert!((var - to_f64(&w.variation)).abs() < 1e-9);
        }
        assert!(oscillation_counterexample(3).is_err());
    }

    #[test]
    fn divergence_values() {
        let w = divergent_series_witness(2).unwrap();
        assert_eq!(w.norm_proxy, int(1));
        assert_eq!(w.weighted_norm_ratio, int(1));
        assert_eq!(w.edge_value, rat(-12, 5));
        let w = divergent_series_witness(6).unwrap();
        assert_eq!(w.edge_value, int(-2) * pow(&rat(6, 5), 3));
    }
}
