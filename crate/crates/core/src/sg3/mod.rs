//! Harmonic 1-forms on the level-m graphs of the 3-dimensional gasket.
//!
//! Edge `e` of cell `ω` has id `6·index(ω) + e`, base edges ordered
//! `(0,1), (0,2), (0,3), (1,2), (1,3), (2,3)` and oriented from the lower
//! label to the higher one.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::complex::{Chain, KForm};
use crate::error::{Error, Result};
use crate::fractal::{build_sg3, Family, Word, SG3_EDGES, SG3_FACES};
use crate::harmonic::{combine, HarmonicOneForm, Provenance};
use crate::linalg::RationalMatrix;
use crate::rational::{int, rat, Rational};

/// SG³ forms share the SG representation.
pub type TetraForm = HarmonicOneForm;

const EDGES: usize = 6;

/// Id of the base edge joining `a` and `b`, with the sign of `a → b`.
fn directed(a: usize, b: usize) -> (usize, i8) {
    let (lo, hi, s) = if a < b { (a, b, 1) } else { (b, a, -1) };
    (SG3_EDGES.iter().position(|&e| e == (lo, hi)).expect("tetrahedron edge"), s)
}

fn directed_value(values: &[Rational], a: usize, b: usize) -> Rational {
    let (e, s) = directed(a, b);
    if s > 0 {
        values[e].clone()
    } else {
        -values[e].clone()
    }
}

/// Unweighted divergence `Σ_e sgn(v, e) f(e)` at each corner.
fn divergence(values: &[Rational]) -> Vec<Rational> {
    let mut div = vec![Rational::zero(); 4];
    for (e, &(t, h)) in SG3_EDGES.iter().enumerate() {
        div[h] += &values[e];
        div[t] -= &values[e];
    }
    div
}

/// The 1-form on the six tetrahedron edges that is closed on every face
/// and has divergence `(0, 0, 2, −2)`. The divergence here is the
/// unweighted incidence sum; the weighted `δ` differs by the constant
/// `μ₁/μ₀`.
pub fn base_form() -> Result<KForm> {
    let g = build_sg3(0)?;
    let c = g.complex();
    let d1 = c.d_matrix(1)?;
    let mut rows: Vec<Vec<Rational>> = (0..d1.nrows()).map(|r| d1.row(r).to_vec()).collect();
    let mut rhs = vec![Rational::zero(); rows.len()];
    for v in 0..4 {
        let mut row = vec![Rational::zero(); EDGES];
        for &(e, s) in c.incidence(0).cofaces(v) {
            row[e] = int(s.into());
        }
        rows.push(row);
    }
    rhs.extend([int(0), int(0), int(2), int(-2)]);
    let m = RationalMatrix::from_rows(&rows);
    if m.rank() != EDGES {
        return Err(Error::Consistency(format!("base form system has rank {} < 6", m.rank())));
    }
    let x = m
        .solve(&RationalMatrix::from_columns(&[rhs], rows.len()))
        .ok_or_else(|| Error::Consistency("base form system is inconsistent".into()))?;
    let values = x.column(0);
    if divergence(&values) != [int(0), int(0), int(2), int(-2)] {
        return Err(Error::Consistency("base form divergence is off target".into()));
    }
    KForm::new(c, 1, values)
}

/// Sign of a permutation of `0..4`.
fn is_even(p: &[usize; 4]) -> bool {
    let mut inversions = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 0
}

/// The twelve orientation-preserving relabelings of the corners.
pub fn even_permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct && is_even(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// `f ∘ π⁻¹`: the value on edge `π(i) → π(j)` is the old value on `i → j`.
pub fn rotate(values: &[Rational], perm: &[usize; 4]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); EDGES];
    for (e, &(i, j)) in SG3_EDGES.iter().enumerate() {
        let (target, s) = directed(perm[i], perm[j]);
        out[target] = if s > 0 { values[e].clone() } else { -values[e].clone() };
    }
    out
}

/// Rotated base form with divergence `+2` at `plus`, `−2` at `minus` and
/// zero at the other two corners, by an even relabeling.
pub fn base_form_at(plus: usize, minus: usize) -> Result<Vec<Rational>> {
    if plus == minus || plus > 3 || minus > 3 {
        return Err(Error::InvalidInput(format!("corners {plus}, {minus} must be distinct and < 4")));
    }
    let base = base_form()?;
    let rest: Vec<usize> = (0..4).filter(|&v| v != plus && v != minus).collect();
    let perm = [[rest[0], rest[1], plus, minus], [rest[1], rest[0], plus, minus]]
        .into_iter()
        .find(is_even)
        .expect("one ordering is even");
    Ok(rotate(base.values(), &perm))
}

/// Cyclic order of the three corners other than `s`, read from the
/// outward orientation of the face opposite `q_s`.
fn cycle_opposite(s: usize) -> [usize; 3] {
    *SG3_FACES.iter().find(|f| !f.contains(&s)).expect("opposite face")
}

/// Level-1 placement leaving sub-simplex `empty` at zero. Sub-simplex `t`
/// carries a rotated base form with `+2` toward the next sub-simplex and
/// `−2` toward the previous one in the cyclic order of the opposite face,
/// so the contributions cancel at every shared midpoint.
pub fn placement(empty: usize) -> Result<TetraForm> {
    if empty > 3 {
        return Err(Error::InvalidInput(format!("sub-simplex {empty} does not exist")));
    }
    let cyc = cycle_opposite(empty);
    let mut values = vec![Rational::zero(); 4 * EDGES];
    for (i, &t) in cyc.iter().enumerate() {
        let local = base_form_at(cyc[(i + 1) % 3], cyc[(i + 2) % 3])?;
        values[t * EDGES..(t + 1) * EDGES].clone_from_slice(&local);
    }
    Ok(HarmonicOneForm::from_values(Family::Sg3, 1, values, Provenance::Placement { empty }))
}

pub fn placements() -> Result<Vec<TetraForm>> {
    (0..4).map(placement).collect()
}

/// Orthogonal basis `A₁, A₂, A₃` of the span of the placements, by exact
/// Gram–Schmidt in the weighted inner product.
pub fn level1_basis() -> Result<Vec<TetraForm>> {
    let g = build_sg3(1)?;
    let c = g.complex();
    let placed = placements()?;
    let rank = RationalMatrix::from_rows(&placed.iter().map(|p| p.values().to_vec()).collect::<Vec<_>>()).rank();
    if rank != 3 {
        return Err(Error::Consistency(format!("placements span dimension {rank}, expected 3")));
    }
    let mut out: Vec<KForm> = Vec::new();
    for p in &placed {
        let mut v = p.form.clone();
        for a in &out {
            let coeff = c.inner(&v, a)? / c.inner(a, a)?;
            v = v.sub(&a.scale(&coeff))?;
        }
        if !v.is_zero() {
            out.push(v);
        }
    }
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(index, form)| {
            HarmonicOneForm::from_values(Family::Sg3, 1, form.into_values(), Provenance::Seated { index, word: Word::empty() })
        })
        .collect())
}

/// Values at the six edge midpoints, in base edge order, of the harmonic
/// function with the given corner values.
pub fn harmonic_map_extend(corners: &[Rational; 4]) -> [Rational; 6] {
    let third = rat(1, 3);
    let sixth = rat(1, 6);
    SG3_EDGES.map(|(a, b)| {
        let others: Rational = (0..4).filter(|&v| v != a && v != b).map(|v| &corners[v]).sum();
        &third * (&corners[a] + &corners[b]) + &sixth * others
    })
}

/// Harmonic extension of a closed 1-form to the next level: corner edges
/// `q_a → p_ab` get `H(a,b)/3 + (H(a,c) + H(a,d))/6`, midpoint edges
/// `p_ai → p_aj` get `H(i,j)/6`.
pub fn extend_values(values: &[Rational]) -> Result<Vec<Rational>> {
    if values.len() % EDGES != 0 {
        return Err(Error::InvalidInput(format!("{} edge values is not a multiple of 6", values.len())));
    }
    let third = rat(1, 3);
    let sixth = rat(1, 6);
    let mut out = Vec::with_capacity(values.len() * 4);
    for (cell, h) in values.chunks(EDGES).enumerate() {
        for face in SG3_FACES {
            let sum: Rational = (0..3).map(|i| directed_value(h, face[i], face[(i + 1) % 3])).sum();
            if !sum.is_zero() {
                return Err(Error::NotClosed(format!("cell {cell} face {face:?} sums to {sum}")));
            }
        }
        if h.iter().all(Zero::is_zero) {
            out.extend(std::iter::repeat_n(Rational::zero(), 4 * EDGES));
            continue;
        }
        for a in 0..4 {
            let corner = |b: usize| {
                let rest: Rational = (0..4).filter(|&v| v != a && v != b).map(|v| directed_value(h, a, v)).sum();
                &third * directed_value(h, a, b) + &sixth * rest
            };
            for &(i, j) in &SG3_EDGES {
                out.push(if i == a {
                    corner(j)
                } else if j == a {
                    -corner(i)
                } else {
                    &sixth * directed_value(h, i, j)
                });
            }
        }
    }
    Ok(out)
}

pub fn extend_form(h: &TetraForm) -> Result<TetraForm> {
    if h.family != Family::Sg3 {
        return Err(Error::InvalidInput("SG3 extension applied to a non-SG3 form".into()));
    }
    Ok(HarmonicOneForm::from_values(Family::Sg3, h.level + 1, extend_values(h.values())?, h.provenance.clone()))
}

/// `A_j` seated on `F_ω` and extended to level `m`.
pub fn seated(level1: &[TetraForm], index: usize, word: &Word, m: usize) -> Result<TetraForm> {
    word.check_arity(4)?;
    if word.len() >= m {
        return Err(Error::InvalidInput(format!("word `{word}` too long for level {m}")));
    }
    let mut values = crate::sg::seat(level1[index].values(), word, 4, EDGES);
    for _ in word.len() + 1..m {
        values = extend_values(&values)?;
    }
    Ok(HarmonicOneForm::from_values(Family::Sg3, m, values, Provenance::Seated { index, word: word.clone() }))
}

/// `{A_j ∘ F_ω⁻¹ : |ω| ≤ m − 1, j = 1, 2, 3}` extended to level `m`,
/// ordered by word (length, then lexicographic) and then by `j`.
pub fn basis(m: usize) -> Result<Vec<TetraForm>> {
    if m == 0 {
        return Err(Error::InvalidInput("the harmonic basis needs level m ≥ 1".into()));
    }
    let level1 = level1_basis()?;
    let jobs: Vec<(Word, usize)> =
        Word::up_to(m - 1, 4).into_iter().flat_map(|w| (0..3).map(move |j| (w.clone(), j))).collect();
    jobs.par_iter().map(|(w, j)| seated(&level1, *j, w, m)).collect()
}

/// Inner triangle of face `face` of `F_ω`, refined to level `m`: the
/// midpoint triangle `p_ab → p_bc → p_ca` for the face cycle `[a, b, c]`.
pub fn face_cycle_chain(word: &Word, face: usize, m: usize) -> Result<Chain> {
    word.check_arity(4)?;
    if face > 3 {
        return Err(Error::InvalidInput(format!("face {face} does not exist")));
    }
    if word.len() >= m {
        return Err(Error::InvalidInput(format!("face cycle `{word}` needs level > {}, got {m}", word.len())));
    }
    let cyc = SG3_FACES[face];
    // p_xy → p_yz lies in sub-simplex y as its edge x → z
    let mut edges: Vec<(Word, usize, Rational)> = (0..3)
        .map(|i| {
            let (x, y, z) = (cyc[i], cyc[(i + 1) % 3], cyc[(i + 2) % 3]);
            let (e, s) = directed(x, z);
            (word.child(y as u8), e, int(s.into()))
        })
        .collect();
    while edges[0].0.len() < m {
        edges = edges
            .into_iter()
            .flat_map(|(w, e, c)| {
                let (a, b) = SG3_EDGES[e];
                [(w.child(a as u8), e, c.clone()), (w.child(b as u8), e, c)]
            })
            .collect();
    }
    Ok(Chain::from_terms(1, edges.into_iter().map(|(w, e, c)| (EDGES * w.index(4) + e, c))))
}

/// Integrals over the four face cycles of `F_ω`.
pub fn face_cycle_integrals(h: &TetraForm, word: &Word) -> Result<[Rational; 4]> {
    let mut out: [Rational; 4] = Default::default();
    for (face, slot) in out.iter_mut().enumerate() {
        let chain = face_cycle_chain(word, face, h.level)?;
        *slot = chain.coefficients().iter().map(|(&e, c)| c * &h.values()[e]).sum();
    }
    Ok(out)
}

/// `∫` over the refined boundary of face `face` of `F_ω` expressed through
/// cycle data: the face splits into its middle cycle and three corner
/// faces, each a face of a child simplex, down to level `m`.
fn face_boundary_from_data(data: &BTreeMap<(Word, usize), Rational>, word: &Word, face: usize, m: usize) -> Rational {
    if word.len() >= m {
        return Rational::zero();
    }
    let here = data.get(&(word.clone(), face)).cloned().unwrap_or_else(Rational::zero);
    SG3_FACES[face].iter().fold(here, |acc, &corner| acc + face_boundary_from_data(data, &word.child(corner as u8), face, m))
}

/// Per-simplex consistency of face-cycle data. The four face boundaries of
/// `F_ω` cancel, so `Σ_j ∫γ_j(ω) = Σ_i ∫∂(face of F_ωi opposite q_i)`; the
/// right side vanishes when no finer cycle carries flux. Returns the words
/// where the data violates this, with the defect.
pub fn face_sum_defects(data: &BTreeMap<(Word, usize), Rational>, m: usize) -> Vec<(Word, Rational)> {
    Word::up_to(m.saturating_sub(1), 4)
        .into_iter()
        .filter(|_| m > 0)
        .filter_map(|w| {
            let total: Rational = (0..4).filter_map(|f| data.get(&(w.clone(), f))).sum();
            let inner: Rational = (0..4).map(|i| face_boundary_from_data(data, &w.child(i as u8), 3 - i, m)).sum();
            let defect = total - inner;
            (!defect.is_zero()).then_some((w, defect))
        })
        .collect()
}

/// Face-cycle integrals of `h` over every simplex below its level.
pub fn face_cycle_data(h: &TetraForm) -> Result<BTreeMap<(Word, usize), Rational>> {
    let mut out = BTreeMap::new();
    for w in Word::up_to(h.level.saturating_sub(1), 4) {
        if h.level == 0 {
            break;
        }
        for (f, v) in face_cycle_integrals(h, &w)?.into_iter().enumerate() {
            out.insert((w.clone(), f), v);
        }
    }
    Ok(out)
}

/// The unique member of `span(basis(m))` with the prescribed face-cycle
/// integrals; the data must pass [`face_sum_defects`].
pub fn realize_face_data(data: &BTreeMap<(Word, usize), Rational>, m: usize) -> Result<TetraForm> {
    let words = Word::up_to(m - 1, 4);
    for (w, _) in data.keys() {
        if !words.contains(w) {
            return Err(Error::InvalidInput(format!("face cycle word `{w}` does not exist below level {m}")));
        }
    }
    if let Some((w, defect)) = face_sum_defects(data, m).into_iter().next() {
        return Err(Error::InvalidInput(format!("face data at `{w}` is inconsistent by {defect}")));
    }
    let forms = basis(m)?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let integrals: Vec<Vec<[Rational; 4]>> = forms
        .iter()
        .map(|f| words.iter().map(|w| face_cycle_integrals(f, w)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    for (wi, w) in words.iter().enumerate() {
        for face in 0..4 {
            rows.push(integrals.iter().map(|per_form| per_form[wi][face].clone()).collect::<Vec<_>>());
            rhs.push(data.get(&(w.clone(), face)).cloned().unwrap_or_else(Rational::zero));
        }
    }
    let matrix = RationalMatrix::from_rows(&rows);
    if matrix.rank() != forms.len() {
        return Err(Error::Consistency("face-cycle pairing does not determine the basis coefficients".into()));
    }
    let x = matrix
        .solve(&RationalMatrix::from_columns(&[rhs], rows.len()))
        .ok_or_else(|| Error::Consistency("face-cycle data cannot be realized".into()))?
        .column(0);
    let values = combine(forms[0].values().len(), x.iter().zip(forms.iter().map(|f| f.values())));
    Ok(HarmonicOneForm::from_values(Family::Sg3, m, values, Provenance::Combination))
}

/// Outgoing edge sums `Σ_b H(a, b)` at each corner `a` of each cell.
pub fn corner_sums(values: &[Rational]) -> Vec<[Rational; 4]> {
    values
        .chunks(EDGES)
        .map(|h| {
            let mut out: [Rational; 4] = Default::default();
            for (a, slot) in out.iter_mut().enumerate() {
                *slot = (0..4).filter(|&b| b != a).map(|b| directed_value(h, a, b)).sum();
            }
            out
        })
        .collect()
}
