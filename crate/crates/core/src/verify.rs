//! Invariant suites for one gasket level, reported check by check.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Complex, KForm};
use crate::error::{Error, Result};
use crate::fractal::{build, Family, Gasket, Word};
use crate::harmonic::HarmonicOneForm;
use crate::linalg::SparseEchelon;
use crate::rational::{int, rat, Rational};
use crate::{sg, sg3};

/// Highest level each family's suite accepts.
pub fn level_cap(family: Family) -> usize {
    match family {
        Family::Sg => 5,
        Family::Sg3 => 3,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "ok" } else { "FAIL" };
        write!(f, "{status:4} {}: {}", self.name, self.detail)
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name, passed, detail: detail.into() }
}

/// Random rational form with numerators in `−9..=9` and denominators in
/// `1..=4`, reproducible from `seed`.
pub fn random_form(complex: &Complex, degree: usize, seed: u64) -> Result<KForm> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..complex.count(degree)).map(|_| rat(rng.random_range(-9..=9), rng.random_range(1..=4))).collect();
    KForm::new(complex, degree, values)
}

/// Rank of a family of value vectors.
pub fn family_rank<'a>(vectors: impl IntoIterator<Item = &'a [Rational]>) -> usize {
    let mut echelon: Option<SparseEchelon> = None;
    for v in vectors {
        echelon.get_or_insert_with(|| SparseEchelon::new(v.len())).insert_dense(v);
    }
    echelon.map_or(0, |e| e.rank())
}

fn all_harmonic(c: &Complex, forms: &[HarmonicOneForm]) -> Result<usize> {
    let mut bad = 0;
    for h in forms {
        if !(c.d(&h.form)?.is_zero() && c.delta(&h.form)?.is_zero()) {
            bad += 1;
        }
    }
    Ok(bad)
}

fn nonorthogonal_pairs(c: &Complex, forms: &[HarmonicOneForm]) -> Result<usize> {
    let mut bad = 0;
    for (i, a) in forms.iter().enumerate() {
        for b in &forms[i + 1..] {
            if !c.inner(&a.form, &b.form)?.is_zero() {
                bad += 1;
            }
        }
    }
    Ok(bad)
}

/// `−Δ_top` applied to each indicator, compared with `3 (μ_top/μ_{top−1})`.
fn top_laplacian_is_scalar(g: &Gasket) -> Result<Check> {
    let c = g.complex();
    let top = c.max_degree();
    let mut bad = 0;
    for cell in 0..c.count(top) {
        let mut values = vec![Rational::zero(); c.count(top)];
        values[cell] = int(1);
        let out = c.neg_laplacian(&KForm::new(c, top, values)?)?;
        let faces = c.incidence(top - 1).faces(cell);
        let expected: Rational =
            faces.iter().map(|&(e, _)| &c.weights(top)[cell] / &c.weights(top - 1)[e]).sum();
        let ok = out.values().iter().enumerate().all(|(i, v)| if i == cell { *v == expected } else { v.is_zero() });
        if !ok {
            bad += 1;
        }
    }
    Ok(check("top-laplacian", bad == 0, format!("{bad} of {} columns differ from a multiple of the identity", c.count(top))))
}

fn hodge_checks(c: &Complex, seed: u64, samples: usize) -> Result<Check> {
    let solver = crate::complex::hodge::HodgeSolver::new(c, 1)?;
    let mut bad = 0;
    for s in 0..samples {
        let f = random_form(c, 1, seed.wrapping_add(s as u64))?;
        let parts = solver.decompose(&f)?;
        let sum = parts.exact.add(&parts.coexact)?.add(&parts.harmonic)?;
        let orthogonal = c.inner(&parts.exact, &parts.coexact)?.is_zero()
            && c.inner(&parts.exact, &parts.harmonic)?.is_zero()
            && c.inner(&parts.coexact, &parts.harmonic)?.is_zero();
        if sum != f || !orthogonal {
            bad += 1;
        }
    }
    Ok(check("hodge", bad == 0, format!("{bad} of {samples} random forms fail reconstruction or orthogonality")))
}

fn sg_suite(m: usize, seed: u64) -> Result<Vec<Check>> {
    let g = build(Family::Sg, m)?;
    let c = g.complex();
    let mut out = Vec::new();
    let violations = c.validate();
    out.push(check("parity", violations.is_empty(), format!("{} violations", violations.len())));
    let expected = (3usize.pow(m as u32) - 1) / 2;
    let nullity = c.harmonic_dimension(1)?;
    out.push(check("harmonic-dimension", nullity == expected, format!("nullity {nullity}, expected {expected}")));
    out.push(top_laplacian_is_scalar(&g)?);
    let dims = c.hodge_dimensions(1)?;
    let identity = dims.total == (c.count(0) - 1) + 3usize.pow(m as u32) + expected;
    out.push(check(
        "hodge-dimensions",
        identity && dims.exact + dims.coexact + dims.harmonic == dims.total,
        format!("{} = {} + {} + {}", dims.total, dims.exact, dims.coexact, dims.harmonic),
    ));
    if m <= 3 {
        out.push(hodge_checks(c, seed, 5)?);
    }
    if m == 0 {
        return Ok(out);
    }
    let basis = sg::basis(m)?;
    let rank = family_rank(basis.iter().map(|h| h.values()));
    out.push(check("basis-rank", rank == expected, format!("{} forms of rank {rank}", basis.len())));
    let bad = all_harmonic(c, &basis)?;
    out.push(check("basis-harmonic", bad == 0, format!("{bad} forms fail d = 0 or δ = 0")));
    let bad = nonorthogonal_pairs(c, &basis)?;
    out.push(check("basis-orthogonal", bad == 0, format!("{bad} nonorthogonal pairs")));
    let mut split_failures = 0;
    for h in basis.iter().take(3) {
        let next = sg::extend_values(h.values())?;
        for (id, v) in h.values().iter().enumerate() {
            let (cell, e) = (id / 3, id % 3);
            let (a, b) = crate::fractal::SG_EDGES[e];
            if &next[3 * (3 * cell + a) + e] + &next[3 * (3 * cell + b) + e] != *v {
                split_failures += 1;
            }
        }
    }
    out.push(check("extension-split", split_failures == 0, format!("{split_failures} edges fail the split")));
    let (_, table) = sg::pairing_table(m)?;
    let predicted_ok = table.forms.iter().enumerate().all(|(i, f)| {
        table.cycles.iter().enumerate().all(|(j, cyc)| table.entries[i][j] == predicted_pairing(f, cyc))
    });
    out.push(check("pairing-table", predicted_ok, format!("{}×{} entries", table.forms.len(), table.cycles.len())));
    let (_, dual) = sg::dual_basis(m)?;
    out.push(check("dual-basis", dual.is_identity(), "dual pairing is the identity"));
    Ok(out)
}

/// `6` on the diagonal; `−2` when `ω = ω' s τ` with `s` absent from `τ`.
pub fn predicted_pairing(form: &Word, cycle: &Word) -> Rational {
    if form == cycle {
        return int(6);
    }
    if form.len() > cycle.len() && form.starts_with(cycle) {
        let s = form.symbols()[cycle.len()];
        if !form.symbols()[cycle.len() + 1..].contains(&s) {
            return int(-2);
        }
    }
    int(0)
}

fn sg3_suite(m: usize, seed: u64) -> Result<Vec<Check>> {
    let g = build(Family::Sg3, m)?;
    let c = g.complex();
    let mut out = Vec::new();
    let violations = c.validate();
    out.push(check("parity", violations.is_empty(), format!("{} violations", violations.len())));
    let expected = 4usize.pow(m as u32) - 1;
    let nullity = c.harmonic_dimension(1)?;
    out.push(check("harmonic-dimension", nullity == expected, format!("nullity {nullity}, expected {expected}")));
    out.push(top_laplacian_is_scalar(&g)?);
    if m <= 2 {
        out.push(hodge_checks(c, seed, 3)?);
    }
    if m == 0 {
        return Ok(out);
    }
    let basis = sg3::basis(m)?;
    let rank = family_rank(basis.iter().map(|h| h.values()));
    out.push(check("basis-rank", rank == expected, format!("{} forms of rank {rank}", basis.len())));
    let bad = all_harmonic(c, &basis)?;
    out.push(check("basis-harmonic", bad == 0, format!("{bad} forms fail d = 0 or δ = 0")));
    let bad = nonorthogonal_pairs(c, &basis)?;
    out.push(check("basis-orthogonal", bad == 0, format!("{bad} nonorthogonal pairs")));
    let mut defects = 0;
    let mut seat_sums = 0;
    for h in &basis {
        let data = sg3::face_cycle_data(h)?;
        defects += sg3::face_sum_defects(&data, m).len();
        if let crate::harmonic::Provenance::Seated { word, .. } = &h.provenance {
            if !(0..4).filter_map(|f| data.get(&(word.clone(), f))).sum::<Rational>().is_zero() {
                seat_sums += 1;
            }
        }
    }
    out.push(check(
        "face-cycle-sums",
        defects == 0 && seat_sums == 0,
        format!("{defects} simplices break the nested flux balance, {seat_sums} forms have a nonzero sum where seated"),
    ));
    Ok(out)
}

/// Runs the suite for `family` at level `m`; random inputs derive from `seed`.
pub fn run(family: Family, m: usize, seed: u64) -> Result<Vec<Check>> {
    let cap = level_cap(family);
    if m > cap {
        return Err(Error::ResourceCap(format!("verify supports {} levels up to {cap}, got {m}", family.name())));
    }
    match family {
        Family::Sg => sg_suite(m, seed),
        Family::Sg3 => sg3_suite(m, seed),
    }
}
