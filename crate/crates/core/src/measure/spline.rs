//! Vertex weights induced by a measure through the piecewise harmonic
//! splines of a level, and the divergence they define.

use num_traits::Zero;

use crate::complex::KForm;
use crate::error::{Error, Result};
use crate::fractal::{vertex_count, vertex_id, CellMeasure, Family, Gasket, Word};
use crate::rational::{int, pow, rat, Rational};

/// Default number of levels between the spline level and the quadrature
/// level.
pub const SPLINE_DEPTH: usize = 6;

/// Quadrature weight of every depth-`d` subcell for the spline equal to 1
/// at corner `k` of a cell: the average of its three corner values.
fn corner_averages(depth: usize) -> [Vec<Rational>; 3] {
    let third = rat(1, 3);
    let fifth = rat(1, 5);
    std::array::from_fn(|k| {
        let mut triples: Vec<[Rational; 3]> = vec![std::array::from_fn(|i| if i == k { int(1) } else { int(0) })];
        for _ in 0..depth {
            triples = triples
                .iter()
                .flat_map(|x| {
                    (0..3).map(|j| {
                        std::array::from_fn(|c| {
                            if c == j {
                                x[j].clone()
                            } else {
                                (int(2) * &x[j] + int(2) * &x[c] + &x[3 - j - c]) * &fifth
                            }
                        })
                    })
                })
                .collect();
        }
        triples.iter().map(|x| x.iter().sum::<Rational>() * &third).collect()
    })
}

/// `μ'₀(v) ≈ ∫ Ψ_v dν` for every level-m vertex, where `Ψ_v` is the
/// piecewise harmonic spline at `v`. Each level-n cell contributes its
/// mass times the mean of `Ψ_v` over its corners, which is exact when
/// `ν` is the standard measure.
pub fn nu_vertex_weights(nu: &CellMeasure, m: usize) -> Result<Vec<Rational>> {
    if nu.family != Family::Sg {
        return Err(Error::InvalidInput("vertex weights are defined on SG".into()));
    }
    if nu.level < m + SPLINE_DEPTH {
        return Err(Error::InsufficientDepth { needed: m + SPLINE_DEPTH, available: nu.level });
    }
    let depth = nu.level - m;
    let averages = corner_averages(depth);
    let span = 3usize.pow(depth as u32);
    let mut weights = vec![Rational::zero(); vertex_count(3, m)];
    for cell in Word::all(m, 3) {
        let block = &nu.values[cell.index(3) * span..(cell.index(3) + 1) * span];
        for (k, avg) in averages.iter().enumerate() {
            let share: Rational = block.iter().zip(avg).filter(|(v, _)| !v.is_zero()).map(|(v, a)| v * a).sum();
            weights[vertex_id(3, cell.symbols(), k)] += share;
        }
    }
    Ok(weights)
}

/// `(δ'₁ f)(v) = (5/3)^m / μ'₀(v) · Σ_e sgn(v, e) f(e)` on the level-m
/// gasket, with vertex weights from [`nu_vertex_weights`].
pub fn delta1_prime(gasket: &Gasket, f1: &KForm, weights: &[Rational]) -> Result<KForm> {
    let c = gasket.complex();
    c.check_form(f1)?;
    if f1.degree() != 1 {
        return Err(Error::DegreeMismatch { expected: 1, found: f1.degree() });
    }
    if weights.len() != c.count(0) {
        return Err(Error::LengthMismatch { degree: 0, expected: c.count(0), found: weights.len() });
    }
    let edge_weight = pow(&rat(5, 3), gasket.level() as u32);
    let values = (0..c.count(0))
        .map(|v| {
            if weights[v].is_zero() {
                return Err(Error::Numeric(format!("vertex {v} has zero weight")));
            }
            let flux: Rational = c.incidence(0).cofaces(v).iter().map(|&(e, s)| int(s.into()) * f1.value(e)).sum();
            Ok(flux * &edge_weight / &weights[v])
        })
        .collect::<Result<Vec<_>>>()?;
    KForm::new(c, 0, values)
}
