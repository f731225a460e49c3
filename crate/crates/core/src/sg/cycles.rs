use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::basis;
use crate::complex::Chain;
use crate::error::{Error, Result};
use crate::fractal::{Family, Word, SG_EDGES};
use crate::harmonic::{combine, HarmonicOneForm, Provenance};
use crate::rational::Rational;

/// Edges `(word, base edge, coefficient)` refined one level: the edge
/// `a→b` of `F_ω` becomes the edges `a→b` of `F_ωa` and `F_ωb`.
fn refine(edges: Vec<(Word, usize, Rational)>) -> Vec<(Word, usize, Rational)> {
    edges
        .into_iter()
        .flat_map(|(w, e, c)| {
            let (a, b) = SG_EDGES[e];
            [(w.child(a as u8), e, c.clone()), (w.child(b as u8), e, c)]
        })
        .collect()
}

fn to_chain(edges: Vec<(Word, usize, Rational)>, m: usize) -> Chain {
    let mut edges = edges;
    while edges.first().is_some_and(|(w, _, _)| w.len() < m) {
        edges = refine(edges);
    }
    Chain::from_terms(1, edges.into_iter().map(|(w, e, c)| (3 * w.index(3) + e, c)))
}

/// `F_ω' γ` at level `m`: the inner triangle of `F_ω'`, refined.
pub fn cycle_chain(word: &Word, m: usize) -> Result<Chain> {
    word.check_arity(3)?;
    if word.len() >= m {
        return Err(Error::InvalidInput(format!("cycle `{word}` needs level > {}, got {m}", word.len())));
    }
    let inner = vec![
        (word.child(0), 1, Rational::one()),
        (word.child(1), 2, Rational::one()),
        (word.child(2), 0, Rational::one()),
    ];
    Ok(to_chain(inner, m))
}

/// `∂K` traversed counterclockwise at level `m`.
pub fn boundary_chain(m: usize) -> Chain {
    to_chain((0..3).map(|e| (Word::empty(), e, Rational::one())).collect(), m)
}

/// `∫_{F_ω' γ} h`.
pub fn cycle_integral(h: &HarmonicOneForm, word: &Word) -> Result<Rational> {
    let chain = cycle_chain(word, h.level)?;
    Ok(chain.coefficients().iter().map(|(&e, c)| c * &h.values()[e]).sum())
}

/// Cycle integrals of a family of forms: `entries[i][j] = ∫_{γ_j} forms_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingTable {
    pub forms: Vec<Word>,
    pub cycles: Vec<Word>,
    pub entries: Vec<Vec<Rational>>,
}

impl PairingTable {
    pub fn entry(&self, form: &Word, cycle: &Word) -> Option<&Rational> {
        let i = self.forms.iter().position(|w| w == form)?;
        let j = self.cycles.iter().position(|w| w == cycle)?;
        Some(&self.entries[i][j])
    }

    pub fn max_nonzeros_per_row(&self) -> usize {
        self.entries.iter().map(|r| r.iter().filter(|x| !x.is_zero()).count()).max().unwrap_or(0)
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, r)| {
            r.iter().enumerate().all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
        })
    }
}

fn table_for(forms: &[HarmonicOneForm], words: &[Word], m: usize) -> Result<PairingTable> {
    let chains: Vec<Chain> = words.iter().map(|w| cycle_chain(w, m)).collect::<Result<_>>()?;
    let entries = forms
        .iter()
        .map(|h| {
            chains
                .iter()
                .map(|ch| ch.coefficients().iter().map(|(&e, c)| c * &h.values()[e]).sum())
                .collect()
        })
        .collect();
    let labels = forms
        .iter()
        .map(|h| match &h.provenance {
            Provenance::Generator { word } | Provenance::Dual { word } => word.clone(),
            _ => Word::empty(),
        })
        .collect();
    Ok(PairingTable { forms: labels, cycles: words.to_vec(), entries })
}

/// Pairing of the basis `{h_ω}` against the cycles `{F_ω' γ}`, `|ω|, |ω'| < m`.
pub fn pairing_table(m: usize) -> Result<(Vec<HarmonicOneForm>, PairingTable)> {
    let forms = basis(m)?;
    let words = Word::up_to(m - 1, 3);
    let table = table_for(&forms, &words, m)?;
    Ok((forms, table))
}

/// Forms `h̃_ω` with `∫_{F_ω' γ} h̃_ω = δ_{ω,ω'}`, together with their
/// pairing table (the identity when everything is consistent).
///
/// Nonzero pairings only occur for cycles at prefixes of `ω`, so the basis
/// table is lower triangular and is inverted by substitution from the
/// longest words down.
pub fn dual_basis(m: usize) -> Result<(Vec<HarmonicOneForm>, PairingTable)> {
    let (forms, table) = pairing_table(m)?;
    let n = forms.len();
    let p = &table.entries;
    for (i, row) in p.iter().enumerate() {
        if row[i].is_zero() || row[i + 1..].iter().any(|x| !x.is_zero()) {
            return Err(Error::Consistency(format!("pairing table is singular or not triangular at row {i}")));
        }
    }
    // solve C·P = I row by row
    let mut inverse = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in (0..=i).rev() {
            let mut acc = if i == j { Rational::one() } else { Rational::zero() };
            for k in j + 1..=i {
                if !inverse[i][k].is_zero() && !p[k][j].is_zero() {
                    acc -= &inverse[i][k] * &p[k][j];
                }
            }
            inverse[i][j] = acc / &p[j][j];
        }
    }
    let len = forms[0].values().len();
    let dual: Vec<HarmonicOneForm> = inverse
        .iter()
        .zip(&table.forms)
        .map(|(row, word)| {
            let values = combine(len, row.iter().zip(forms.iter().map(|f| f.values())));
            HarmonicOneForm::from_values(Family::Sg, m, values, Provenance::Dual { word: word.clone() })
        })
        .collect();
    let dual_table = table_for(&dual, &table.cycles, m)?;
    Ok((dual, dual_table))
}

/// `Σ c_ω h̃_ω`, realizing the prescribed integrals `c_ω'` over `F_ω' γ`.
pub fn realize_cycle_data(data: &BTreeMap<Word, Rational>, m: usize) -> Result<HarmonicOneForm> {
    let (dual, table) = dual_basis(m)?;
    for w in data.keys() {
        if !table.cycles.contains(w) {
            return Err(Error::InvalidInput(format!("cycle `{w}` does not exist below level {m}")));
        }
    }
    let coefficients: Vec<Rational> =
        table.forms.iter().map(|w| data.get(w).cloned().unwrap_or_else(Rational::zero)).collect();
    let values = combine(dual[0].values().len(), coefficients.iter().zip(dual.iter().map(|f| f.values())));
    Ok(HarmonicOneForm::from_values(Family::Sg, m, values, Provenance::Combination))
}

#[cfg(test)]
mod tests {
    use super::super::base_generator;
    use super::*;
    use crate::fractal::build_sg;
    use crate::rational::{int, rat};

    /// `6` on the diagonal; `−2` when `ω = ω' s τ` and `s` does not occur in
    /// `τ` (the cell `F_ω K` meets the inner triangle of `F_ω'`); else 0.
    fn predicted(form: &Word, cycle: &Word) -> Rational {
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

    #[test]
    fn chains_are_cycles() {
        let g = build_sg(3).unwrap();
        for w in Word::up_to(2, 3) {
            let ch = cycle_chain(&w, 3).unwrap();
            assert!(g.complex().boundary(&ch).unwrap().is_zero());
        }
        assert!(g.complex().boundary(&boundary_chain(3)).unwrap().is_zero());
    }

    #[test]
    fn generator_integrals() {
        let h = base_generator().unwrap();
        assert_eq!(cycle_integral(&h, &Word::empty()).unwrap(), int(6));
        let g = build_sg(1).unwrap();
        let around = g.complex().integrate(&h.form, &boundary_chain(1)).unwrap();
        assert_eq!(around, int(-6));
    }

    #[test]
    fn pairing_matches_prediction() {
        let (_, table) = pairing_table(3).unwrap();
        for (i, f) in table.forms.iter().enumerate() {
            for (j, c) in table.cycles.iter().enumerate() {
                assert_eq!(table.entries[i][j], predicted(f, c), "form {f} cycle {c}");
            }
        }
        assert!(table.max_nonzeros_per_row() <= 4);
    }

    #[test]
    fn dual_family() {
        let (dual, table) = dual_basis(2).unwrap();
        assert!(table.is_identity());
        let (forms, _) = pairing_table(2).unwrap();
        assert_eq!(dual[0].values().to_vec(), forms[0].values().iter().map(|v| v * rat(1, 6)).collect::<Vec<_>>());
        // h̃_(0) = h_(0)/6 + h_∅/18
        let expected = combine(27, [(&rat(1, 6), forms[1].values()), (&rat(1, 18), forms[0].values())]);
        assert_eq!(dual[1].values(), expected.as_slice());
        let (d1, _) = dual_basis(1).unwrap();
        assert_eq!(d1[0].values()[1], rat(1, 3));
    }

    #[test]
    fn prescribed_data_is_realized() {
        let mut data = BTreeMap::new();
        data.insert("1".parse::<Word>().unwrap(), rat(7, 3));
        data.insert(Word::empty(), int(-2));
        let h = realize_cycle_data(&data, 3).unwrap();
        for w in Word::up_to(2, 3) {
            let expected = data.get(&w).cloned().unwrap_or_default();
            assert_eq!(cycle_integral(&h, &w).unwrap(), expected);
        }
    }
}
