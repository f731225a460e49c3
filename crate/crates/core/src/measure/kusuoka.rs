//! Energy measures of SG harmonic functions, the Kusuoka measure, and the
//! growth of their mass near a boundary edge.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fractal::{CellMeasure, Family, Word, DEFAULT_CELL_CAP, SG_EDGES};
use crate::rational::{int, pow, rat, to_f64, Rational};

/// Deepest growth computation (`2^25` leaf cells).
pub const GROWTH_DEPTH_CAP: usize = 25;

/// `(17 + √73)/30`, the per-level decay of the energy mass near an edge.
pub fn growth_base() -> f64 {
    (17.0 + 73f64.sqrt()) / 30.0
}

/// Harmonic values on the corners of child `j`, given the parent corners.
fn child_triple(x: &[Rational; 3], j: usize) -> [Rational; 3] {
    let fifth = rat(1, 5);
    std::array::from_fn(|k| {
        if k == j {
            x[j].clone()
        } else {
            let l = 3 - j - k;
            (int(2) * &x[j] + int(2) * &x[k] + &x[l]) * &fifth
        }
    })
}

fn triangle_energy(x: &[Rational; 3]) -> Rational {
    SG_EDGES.iter().map(|&(a, b)| (&x[a] - &x[b]) * (&x[a] - &x[b])).sum()
}

fn check_cells(n: usize) -> Result<()> {
    match 3usize.checked_pow(n as u32) {
        Some(cells) if cells <= DEFAULT_CELL_CAP => Ok(()),
        _ => Err(Error::ResourceCap(format!("3^{n} cells exceed the cap {DEFAULT_CELL_CAP}"))),
    }
}

/// `ν_h(F_ω K) = (5/3)^n E₀(h ∘ F_ω)` on every level-n cell, for the
/// harmonic function with corner values `h`.
pub fn energy_measure(h: &[Rational; 3], n: usize) -> Result<CellMeasure> {
    check_cells(n)?;
    let mut triples = vec![h.clone()];
    for _ in 0..n {
        triples = triples.iter().flat_map(|x| (0..3).map(move |j| child_triple(x, j))).collect();
    }
    let scale = pow(&rat(5, 3), n as u32);
    CellMeasure::new(Family::Sg, n, triples.iter().map(|x| triangle_energy(x) * &scale).collect())
}

/// `ν = ν_{h₁} + ν_{h₂}` for the energy-orthonormal pair
/// `h₁ = (1, −1, 0)/√6`, `h₂ = (1, 1, −2)/√18`.
pub fn kusuoka_measure(n: usize) -> Result<CellMeasure> {
    let first = energy_measure(&[int(1), int(-1), int(0)], n)?;
    let second = energy_measure(&[int(1), int(1), int(-2)], n)?;
    let (w1, w2) = (rat(1, 6), rat(1, 18));
    let values = first.values.iter().zip(&second.values).map(|(a, b)| a * &w1 + b * &w2).collect();
    CellMeasure::new(Family::Sg, n, values)
}

/// Integer corner values scaled by `5` per level, so children stay integral.
fn scaled_child(x: &[i128; 3], j: usize) -> Option<[i128; 3]> {
    let mut out = [0i128; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        *slot = if k == j {
            x[j].checked_mul(5)?
        } else {
            let l = 3 - j - k;
            x[j].checked_mul(2)?.checked_add(x[k].checked_mul(2)?)?.checked_add(x[l])?
        };
    }
    Some(out)
}

fn scaled_energy(x: &[i128; 3]) -> Option<i128> {
    let mut total = 0i128;
    for &(a, b) in &SG_EDGES {
        let diff = x[a].checked_sub(x[b])?;
        total = total.checked_add(diff.checked_mul(diff)?)?;
    }
    Some(total)
}

fn overflow() -> Error {
    Error::ResourceCap("integer energy sums overflow 128 bits".into())
}

/// Adds the scaled energies of the subtree below `x` at `depth` into
/// `sums[depth..]`.
fn accumulate(x: &[i128; 3], depth: usize, children: (usize, usize), sums: &mut [i128]) -> Result<()> {
    sums[depth] = sums[depth].checked_add(scaled_energy(x).ok_or_else(overflow)?).ok_or_else(overflow)?;
    if depth + 1 < sums.len() {
        for j in [children.0, children.1] {
            let child = scaled_child(x, j).ok_or_else(overflow)?;
            accumulate(&child, depth + 1, children, sums)?;
        }
    }
    Ok(())
}

/// Clears denominators: integer triple and the common denominator.
fn integer_seed(h: &[Rational; 3]) -> Result<([i128; 3], BigInt)> {
    let lcm = h.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let mut out = [0i128; 3];
    for (slot, v) in out.iter_mut().zip(h) {
        let scaled = (v * Rational::from_integer(lcm.clone())).to_integer();
        *slot = scaled.to_i128().ok_or_else(overflow)?;
    }
    Ok((out, lcm))
}

/// `ν_h(Ω_d)` for `d = 0..=n`, where `Ω_d` is the union of the level-d
/// cells along base edge `edge`.
pub fn edge_masses(h: &[Rational; 3], edge: usize, n: usize) -> Result<Vec<Rational>> {
    if edge >= 3 {
        return Err(Error::NoSuchCell { degree: 1, index: edge });
    }
    if n > GROWTH_DEPTH_CAP {
        return Err(Error::ResourceCap(format!("growth depth {n} exceeds the cap {GROWTH_DEPTH_CAP}")));
    }
    let (seed, lcm) = integer_seed(h)?;
    let children = SG_EDGES[edge];
    // split the tree at a fixed depth and sum the subtrees in parallel
    let split = n.min(8);
    let mut sums = vec![0i128; n + 1];
    let mut frontier = vec![seed];
    for depth in 0..split {
        for x in &frontier {
            sums[depth] = sums[depth].checked_add(scaled_energy(x).ok_or_else(overflow)?).ok_or_else(overflow)?;
        }
        frontier = frontier
            .iter()
            .flat_map(|x| [children.0, children.1].map(|j| scaled_child(x, j)))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(overflow)?;
    }
    let partial: Vec<Vec<i128>> = frontier
        .par_iter()
        .map(|x| {
            let mut local = vec![0i128; n + 1];
            accumulate(x, split, children, &mut local).map(|()| local)
        })
        .collect::<Result<_>>()?;
    for local in partial {
        for (total, v) in sums.iter_mut().zip(local) {
            *total = total.checked_add(v).ok_or_else(overflow)?;
        }
    }
    let lcm_sq = Rational::from_integer(&lcm * &lcm);
    Ok(sums
        .into_iter()
        .enumerate()
        .map(|(d, s)| Rational::from_integer(BigInt::from(s)) / (pow(&int(15), d as u32) * &lcm_sq))
        .collect())
}

/// One row of the growth table.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    pub mass: Rational,
    /// `mass_n / mass_{n−1}`; absent for `n = 0` or a zero previous mass.
    pub ratio: Option<f64>,
}

/// Growth table of `ν_h(Ω_n)` along the bottom edge for `0..=n`.
pub fn kusuoka_growth(h: &[Rational; 3], n: usize) -> Result<Vec<GrowthRow>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("growth depth must be at least 2, got {n}")));
    }
    Ok(growth_rows(edge_masses(h, 0, n)?))
}

fn growth_rows(masses: Vec<Rational>) -> Vec<GrowthRow> {
    let mut rows: Vec<GrowthRow> = Vec::with_capacity(masses.len());
    for (n, mass) in masses.into_iter().enumerate() {
        let ratio = rows.last().filter(|prev| !prev.mass.is_zero()).map(|prev| to_f64(&(&mass / &prev.mass)));
        rows.push(GrowthRow { n, mass, ratio });
    }
    rows
}

type Mat3 = [[Rational; 3]; 3];

/// Matrix of `x ↦ child_triple(x, j)`.
fn child_matrix(j: usize) -> Mat3 {
    std::array::from_fn(|k| {
        let unit = |c: usize| -> [Rational; 3] { std::array::from_fn(|i| if i == c { int(1) } else { int(0) }) };
        std::array::from_fn(|c| child_triple(&unit(c), j)[k].clone())
    })
}

/// `ν_h(Ω_n)` from `Y_n = (5/3) Σ_j A_jᵀ Y_{n−1} A_j`, `Y₀ = Q`, where `Q`
/// is the energy matrix of the triangle: `ν_h(Ω_n) = hᵀ Y_n h`.
pub fn edge_masses_by_matrices(h: &[Rational; 3], edge: usize, n: usize) -> Result<Vec<Rational>> {
    if edge >= 3 {
        return Err(Error::NoSuchCell { degree: 1, index: edge });
    }
    let (a, b) = SG_EDGES[edge];
    let energy_matrix: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { int(2) } else { int(-1) }));
    let maps = [child_matrix(a), child_matrix(b)];
    let factor = rat(5, 3);
    let quad = |y: &Mat3| -> Rational { (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| &h[i] * &y[i][j] * &h[j]).sum() };
    let mut y = energy_matrix;
    let mut out = vec![quad(&y)];
    for _ in 0..n {
        y = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut acc = Rational::zero();
                for m in &maps {
                    for k in 0..3 {
                        for l in 0..3 {
                            acc += &m[k][i] * &y[k][l] * &m[l][j];
                        }
                    }
                }
                acc * &factor
            })
        });
        out.push(quad(&y));
    }
    Ok(out)
}

/// `(30/(17+√73))^n Σ (f ν)(σ)` over the level-n cells `σ` along the edge
/// `F_ω(e)`, with `f ν` given as a cell measure at level `n`.
pub fn delta2_prime_approx(f_nu: &CellMeasure, word: &Word, edge: usize) -> Result<f64> {
    let sum = delta2_prime_sum(f_nu, word, edge)?;
    Ok(growth_base().powi(-(f_nu.level as i32)) * to_f64(&sum))
}

/// Exact cell sum inside [`delta2_prime_approx`].
pub fn delta2_prime_sum(f_nu: &CellMeasure, word: &Word, edge: usize) -> Result<Rational> {
    if f_nu.family != Family::Sg {
        return Err(Error::InvalidInput("edge approximants are defined on SG".into()));
    }
    word.check_arity(3)?;
    if edge >= 3 {
        return Err(Error::NoSuchCell { degree: 1, index: edge });
    }
    if f_nu.level < word.len() {
        return Err(Error::InsufficientDepth { needed: word.len(), available: f_nu.level });
    }
    Ok(crate::sg::segment_cells(word, edge, f_nu.level - word.len()).map(|w| f_nu.value(&w).clone()).sum())
}

/// [`delta2_prime_approx`] for `f ≡ 1`, the Kusuoka measure and a base
/// edge of `K`, at every `n ≤ max_n`. Uses the edge sums directly so deep
/// levels never materialize a full cell measure.
pub fn delta2_prime_unit_sequence(edge: usize, max_n: usize) -> Result<Vec<f64>> {
    let first = edge_masses(&[int(1), int(-1), int(0)], edge, max_n)?;
    let second = edge_masses(&[int(1), int(1), int(-2)], edge, max_n)?;
    let base = growth_base();
    Ok(first
        .iter()
        .zip(&second)
        .enumerate()
        .map(|(n, (a, b))| base.powi(-(n as i32)) * to_f64(&(a * rat(1, 6) + b * rat(1, 18))))
        .collect())
}

/// Largest `|ratio − base|` over the rows from `from` on.
pub fn ratio_error(rows: &[GrowthRow], from: usize) -> Option<f64> {
    rows.iter().filter(|r| r.n >= from).map(|r| r.ratio.map(|q| (q - growth_base()).abs())).collect::<Option<Vec<_>>>()?.into_iter().reduce(f64::max)
}
