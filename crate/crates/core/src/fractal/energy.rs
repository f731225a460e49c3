use num_traits::Zero;

use super::{Gasket, Word};
use crate::complex::KForm;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// `E₀^m(f) = Σ_e μ₁(e) |f(head) − f(tail)|²`, which is
/// `(5/3)^m Σ_e |d f(e)|²` for SG.
pub fn graph_energy(gasket: &Gasket, f0: &KForm) -> Result<Rational> {
    let c = gasket.complex();
    check_vertex_form(gasket, f0)?;
    let mu1 = c.weights(1);
    Ok(gasket
        .edge_endpoints()
        .iter()
        .zip(mu1)
        .map(|(&(t, h), w)| {
            let diff = f0.value(h) - f0.value(t);
            w * &diff * &diff
        })
        .sum())
}

fn check_vertex_form(gasket: &Gasket, f0: &KForm) -> Result<()> {
    let c = gasket.complex();
    if f0.complex_id() != c.id() {
        return Err(Error::ComplexMismatch { expected: c.id().into(), found: f0.complex_id().into() });
    }
    if f0.degree() != 0 {
        return Err(Error::DegreeMismatch { expected: 0, found: f0.degree() });
    }
    Ok(())
}

/// Renormalized graph Laplacian from neighbor lists:
/// `(μ₁/μ₀(x)) Σ_{y∼x} (f(x) − f(y))`, which is `(3/2)·5^m Σ` at interior
/// SG vertices and `3·5^m Σ` at the corners. This is `−Δ₀ = δ₁d₀`.
pub fn renormalized_laplacian0(gasket: &Gasket, f0: &KForm) -> Result<KForm> {
    check_vertex_form(gasket, f0)?;
    let c = gasket.complex();
    let arity = gasket.arity();
    let m = gasket.level();
    let spec = gasket.spec();
    let mut sums = vec![Rational::zero(); c.count(0)];
    // edges are the corner pairs of every level-m cell
    for word in Word::all(m, arity) {
        let corners = gasket.corners(&word);
        for a in 0..arity {
            for b in 0..arity {
                if a != b {
                    let diff = f0.value(corners[a]) - f0.value(corners[b]);
                    sums[corners[a]] += diff;
                }
            }
        }
    }
    let mu1 = spec.scale(1, &Word::new(vec![0; m])) * &spec.base.weights(1)[0];
    let values = sums.into_iter().zip(c.weights(0)).map(|(s, mu0)| s * &mu1 / mu0).collect();
    KForm::new(c, 0, values)
}

/// Extends vertex values from level `from` to level `to` by the midpoint
/// rule of the harmonic structure. Input length must be the level-`from`
/// vertex count; nested ids make the old values a prefix of the output.
pub fn harmonic_extension(gasket_spec: &super::FractalSpec, values: &[Rational], from: usize, to: usize) -> Result<Vec<Rational>> {
    let arity = gasket_spec.arity();
    let have = super::vertex_count(arity, from);
    if values.len() != have {
        return Err(Error::LengthMismatch { degree: 0, expected: have, found: values.len() });
    }
    if to < from {
        return Err(Error::InvalidInput(format!("cannot extend from level {from} down to {to}")));
    }
    let mut out = values.to_vec();
    out.resize(super::vertex_count(arity, to), Rational::zero());
    for level in from..to {
        for word in Word::all(level, arity) {
            let ids: Vec<usize> = (0..arity).map(|q| super::vertex_id(arity, word.symbols(), q)).collect();
            let corners: Vec<Rational> = ids.iter().map(|&i| out[i].clone()).collect();
            for a in 0..arity {
                for b in a + 1..arity {
                    let id = super::vertex_id(arity, word.child(a as u8).symbols(), b);
                    out[id] = gasket_spec.midpoint_value(&corners, a, b);
                }
            }
        }
    }
    Ok(out)
}
