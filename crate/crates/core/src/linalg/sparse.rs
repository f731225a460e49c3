use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{zero, Rational};

/// Sparse integer row, sorted by column with no explicit zeros.
type IntRow = Vec<(usize, BigInt)>;

/// Incremental row echelon form over the integers.
///
/// Rows are inserted one at a time and reduced fraction-free against the
/// stored pivot rows; each stored row has a distinct leading column and is
/// divided by its content, so entries stay small on the sparse incidence
/// systems this crate produces.
#[derive(Debug, Clone)]
pub struct SparseEchelon {
    ncols: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl SparseEchelon {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, pivots: BTreeMap::new() }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.ncols - self.rank()
    }

    /// Inserts a rational row given as `(column, value)` pairs; returns
    /// whether the rank grew.
    pub fn insert(&mut self, entries: &[(usize, Rational)]) -> bool {
        let lcm = entries.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let mut row: IntRow = entries
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| {
                assert!(*c < self.ncols, "column {c} out of range");
                (*c, (v * &lcm).to_integer())
            })
            .collect();
        row.sort_by_key(|(c, _)| *c);
        merge_duplicates(&mut row);
        self.insert_int(row)
    }

    /// Inserts a dense rational row.
    pub fn insert_dense(&mut self, row: &[Rational]) -> bool {
        assert_eq!(row.len(), self.ncols);
        let entries: Vec<(usize, Rational)> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(c, v)| (c, v.clone()))
            .collect();
        self.insert(&entries)
    }

    fn insert_int(&mut self, mut row: IntRow) -> bool {
        loop {
            let Some((col, lead)) = row.first() else {
                return false;
            };
            match self.pivots.get(col) {
                None => {
                    let col = *col;
                    normalize(&mut row);
                    self.pivots.insert(col, row);
                    return true;
                }
                Some(pivot) => {
                    let b = &pivot[0].1;
                    let g = lead.gcd(b);
                    let (fa, fb) = (b / &g, lead / &g);
                    // fa * row - fb * pivot cancels the leading entry
                    let mut next = combine(&row, &fa, pivot, &fb);
                    normalize(&mut next);
                    row = next;
                }
            }
        }
    }

    /// Basis of the nullspace (one vector per non-pivot column) by back
    /// substitution.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> = (0..self.ncols).filter(|c| !self.pivots.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![zero(); self.ncols];
                x[f] = Rational::one();
                for (&col, row) in self.pivots.iter().rev() {
                    let mut acc = Rational::zero();
                    for (c, v) in &row[1..] {
                        if !x[*c].is_zero() {
                            acc += &x[*c] * Rational::from_integer(v.clone());
                        }
                    }
                    if !acc.is_zero() {
                        x[col] = -acc / Rational::from_integer(row[0].1.clone());
                    }
                }
                x
            })
            .collect()
    }
}

fn merge_duplicates(row: &mut IntRow) {
    let mut out: IntRow = Vec::with_capacity(row.len());
    for (c, v) in row.drain(..) {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    *row = out;
}

fn combine(a: &[(usize, BigInt)], fa: &BigInt, b: &[(usize, BigInt)], fb: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|x| x.0);
        let cb = b.get(j).map(|x| x.0);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = fa * &a[i].1 - fb * &b[j].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push((x, fa * &a[i].1));
                i += 1;
            }
            (Some(_), None) => {
                out.push((a[i].0, fa * &a[i].1));
                i += 1;
            }
            _ => {
                out.push((b[j].0, -(fb * &b[j].1)));
                j += 1;
            }
        }
    }
    out
}

fn normalize(row: &mut IntRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    let neg = row.first().is_some_and(|(_, v)| v.is_negative());
    if g.is_zero() {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v = &*v / &g;
        if neg {
            *v = -&*v;
        }
    }
}
