//! Level-m graph complexes of the simplex gaskets: SG (three contractions of
//! a triangle) and SG³ (four contractions of a tetrahedron).
//!
//! Cells of degree `k ≥ 1` at level `m` are pairs `(ω, base cell)` with
//! `|ω| = m`, numbered `word_index · #E_k⁰ + base_index`. Vertices are
//! identified through a canonical key, so that `F_j q_k = F_k q_j`; their
//! ids are nested, meaning a level-m vertex keeps its id at every finer
//! level.

mod energy;
mod measure;
mod word;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::complex::{Cell, Complex};
use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};

pub use energy::{graph_energy, harmonic_extension, renormalized_laplacian0};
pub use measure::{standard_measure, CellMeasure};
pub use word::Word;

/// Default per-degree cell cap.
pub const DEFAULT_CELL_CAP: usize = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Sg,
    Sg3,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sg => "sg",
            Family::Sg3 => "sg3",
        }
    }

    /// Number of contractions, which equals the number of simplex corners.
    pub fn arity(self) -> usize {
        match self {
            Family::Sg => 3,
            Family::Sg3 => 4,
        }
    }

    pub fn complex_id(self, level: usize) -> String {
        format!("{}-{level}", self.name())
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sg" => Ok(Family::Sg),
            "sg3" => Ok(Family::Sg3),
            other => Err(Error::InvalidInput(format!("unknown family `{other}`"))),
        }
    }
}

/// Level-0 complex, per-branch scaling factors, and the midpoint rule of
/// the harmonic structure.
#[derive(Debug, Clone)]
pub struct FractalSpec {
    pub family: Family,
    pub base: Complex,
    /// `scaling[k][j] = b_k^j`.
    pub scaling: Vec<Vec<Rational>>,
    /// Harmonic midpoint value `pair · (f_a + f_b) + other · Σ f_rest`.
    pub midpoint_pair: Rational,
    pub midpoint_other: Rational,
    pub cell_cap: usize,
}

/// Base edge endpoints `(tail, head)` of the SG triangle: counterclockwise.
pub const SG_EDGES: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

/// Base edges of the tetrahedron, oriented from lower to higher label.
pub const SG3_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Tetrahedron faces with their cyclic vertex order seen from outside.
pub const SG3_FACES: [[usize; 3]; 4] = [[0, 1, 2], [1, 0, 3], [2, 3, 0], [3, 2, 1]];

/// Incidence triplets `(tail, e, −1)`, `(head, e, +1)` for oriented edges.
fn edge_incidence(edges: &[(usize, usize)]) -> Vec<(usize, usize, i8)> {
    edges.iter().enumerate().flat_map(|(e, &(t, h))| [(t, e, -1), (h, e, 1)]).collect()
}

/// Sign of a directed edge `from → to` inside a list of oriented edges.
fn oriented_edge(edges: &[(usize, usize)], from: usize, to: usize) -> (usize, i8) {
    edges
        .iter()
        .enumerate()
        .find_map(|(e, &(t, h))| match (t == from && h == to, t == to && h == from) {
            (true, _) => Some((e, 1)),
            (_, true) => Some((e, -1)),
            _ => None,
        })
        .expect("base edge exists")
}

impl FractalSpec {
    /// SG with weights `μ₀⁰ = 1/3`, `μ₁⁰ = μ₂⁰ = 1` and
    /// `(b₀, b₁, b₂) = (1/3, 5/3, 1/3)` on every branch.
    pub fn sg() -> Self {
        let base = Complex::new(
            Family::Sg.complex_id(0),
            vec![Complex::plain_cells(0, 3), Complex::plain_cells(1, 3), Complex::plain_cells(2, 1)],
            vec![edge_incidence(&SG_EDGES), vec![(0, 0, 1), (1, 0, 1), (2, 0, 1)]],
            vec![vec![rat(1, 3); 3], vec![int(1); 3], vec![int(1)]],
        )
        .expect("SG base complex");
        Self {
            family: Family::Sg,
            base,
            scaling: vec![vec![rat(1, 3); 3], vec![rat(5, 3); 3], vec![rat(1, 3); 3]],
            midpoint_pair: rat(2, 5),
            midpoint_other: rat(1, 5),
            cell_cap: DEFAULT_CELL_CAP,
        }
    }

    /// SG³ with `μ₀⁰ = 1/4`, unit weights above degree 0, energy factor
    /// `b₁ = 3/2` and `b₀ = b₂ = b₃ = 1/4`.
    pub fn sg3() -> Self {
        Self::sg3_with_energy_factor(rat(3, 2))
    }

    pub fn sg3_with_energy_factor(b1: Rational) -> Self {
        let faces: Vec<(usize, usize, i8)> = SG3_FACES
            .iter()
            .enumerate()
            .flat_map(|(f, cyc)| {
                (0..3).map(move |i| {
                    let (e, s) = oriented_edge(&SG3_EDGES, cyc[i], cyc[(i + 1) % 3]);
                    (e, f, s)
                })
            })
            .collect();
        let base = Complex::new(
            Family::Sg3.complex_id(0),
            (0..4).map(|k| Complex::plain_cells(k, [4, 6, 4, 1][k])).collect(),
            vec![edge_incidence(&SG3_EDGES), faces, (0..4).map(|f| (f, 0, 1)).collect()],
            vec![vec![rat(1, 4); 4], vec![int(1); 6], vec![int(1); 4], vec![int(1)]],
        )
        .expect("SG3 base complex");
        Self {
            family: Family::Sg3,
            base,
            scaling: vec![vec![rat(1, 4); 4], vec![b1; 4], vec![rat(1, 4); 4], vec![rat(1, 4); 4]],
            midpoint_pair: rat(1, 3),
            midpoint_other: rat(1, 6),
            cell_cap: DEFAULT_CELL_CAP,
        }
    }

    pub fn for_family(family: Family) -> Self {
        match family {
            Family::Sg => Self::sg(),
            Family::Sg3 => Self::sg3(),
        }
    }

    pub fn arity(&self) -> usize {
        self.family.arity()
    }

    /// Base edges as `(tail, head)` read off the level-0 incidence.
    pub fn base_edges(&self) -> Vec<(usize, usize)> {
        let inc = self.base.incidence(0);
        (0..self.base.count(1))
            .map(|e| {
                let faces = inc.faces(e);
                let tail = faces.iter().find(|f| f.1 < 0).map(|f| f.0).expect("edge tail");
                let head = faces.iter().find(|f| f.1 > 0).map(|f| f.0).expect("edge head");
                (tail, head)
            })
            .collect()
    }

    /// Harmonic value at the midpoint of corners `a`, `b` of a cell.
    pub fn midpoint_value(&self, corners: &[Rational], a: usize, b: usize) -> Rational {
        let pair = &corners[a] + &corners[b];
        let rest: Rational = corners.iter().enumerate().filter(|(i, _)| *i != a && *i != b).map(|(_, v)| v).sum();
        &self.midpoint_pair * pair + &self.midpoint_other * rest
    }

    /// Product `b_k^ω`.
    pub fn scale(&self, k: usize, word: &Word) -> Rational {
        word.symbols().iter().fold(Rational::one(), |acc, &s| acc * &self.scaling[k][usize::from(s)])
    }
}

/// Canonical key of a level-m vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum VertexKey {
    /// Corner `q_k` of `K`.
    Boundary(usize),
    /// Image under `F_ω` of the midpoint between corners `a < b`.
    Midpoint { word: Word, a: usize, b: usize },
}

impl std::fmt::Display for VertexKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VertexKey::Boundary(k) => write!(f, "q{k}"),
            VertexKey::Midpoint { word, a, b } => write!(f, "{word}:p{a}{b}"),
        }
    }
}

/// Address `F_ω(e)` of a base cell `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellAddress {
    pub word: Word,
    pub degree: usize,
    pub base: usize,
}

impl CellAddress {
    pub fn new(word: Word, degree: usize, base: usize) -> Self {
        Self { word, degree, base }
    }
}

fn pair_count(arity: usize) -> usize {
    arity * (arity - 1) / 2
}

/// Lexicographic index of the unordered pair `{a, b}`, `a ≠ b`.
fn pair_index(arity: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    (0..a).map(|i| arity - 1 - i).sum::<usize>() + (b - a - 1)
}

fn pair_from_index(arity: usize, mut index: usize) -> (usize, usize) {
    for a in 0..arity {
        let span = arity - 1 - a;
        if index < span {
            return (a, a + 1 + index);
        }
        index -= span;
    }
    unreachable!("pair index in range")
}

/// Number of vertices of the level-m gasket with `arity` corners.
pub fn vertex_count(arity: usize, m: usize) -> usize {
    arity + pair_count(arity) * (arity.pow(m as u32) - 1) / (arity - 1)
}

/// Id of the vertex `F_ω q_k`. Ids do not depend on the level.
pub fn vertex_id(arity: usize, word: &[u8], corner: usize) -> usize {
    let mut len = word.len();
    while len > 0 && usize::from(word[len - 1]) == corner {
        len -= 1;
    }
    if len == 0 {
        return corner;
    }
    let j = usize::from(word[len - 1]);
    let prefix = &word[..len - 1];
    let prefix_index = prefix.iter().fold(0, |acc, &s| acc * arity + usize::from(s));
    vertex_count(arity, prefix.len()) + pair_count(arity) * prefix_index + pair_index(arity, j, corner)
}

pub fn vertex_key(arity: usize, id: usize) -> VertexKey {
    if id < arity {
        return VertexKey::Boundary(id);
    }
    let mut len = 0;
    while vertex_count(arity, len + 1) <= id {
        len += 1;
    }
    let offset = id - vertex_count(arity, len);
    let p = pair_count(arity);
    let (a, b) = pair_from_index(arity, offset % p);
    VertexKey::Midpoint { word: Word::from_index(len, offset / p, arity), a, b }
}

/// A built level-m complex together with the data needed to address it.
#[derive(Debug, Clone)]
pub struct Gasket {
    spec: FractalSpec,
    level: usize,
    complex: Complex,
}

impl Gasket {
    pub fn build(spec: &FractalSpec, m: usize) -> Result<Self> {
        let arity = spec.arity();
        let base = &spec.base;
        let top = base.max_degree();
        let words = checked_pow(arity, m).ok_or_else(|| too_big(spec, m))?;
        let mut counts = vec![vertex_count_checked(arity, m).ok_or_else(|| too_big(spec, m))?];
        for k in 1..=top {
            counts.push(words.checked_mul(base.count(k)).ok_or_else(|| too_big(spec, m))?);
        }
        if counts.iter().any(|&c| c > spec.cell_cap) {
            return Err(too_big(spec, m));
        }

        let edges = spec.base_edges();
        let mut cells = vec![(0..counts[0])
            .map(|i| Cell { degree: 0, index: i, label: Some(vertex_key(arity, i).to_string()) })
            .collect::<Vec<_>>()];
        let mut incidence: Vec<Vec<(usize, usize, i8)>> = vec![Vec::with_capacity(2 * counts[1])];
        let mut weights = vec![vec![Rational::default(); counts[0]]];
        for k in 1..=top {
            cells.push(Vec::with_capacity(counts[k]));
            weights.push(Vec::with_capacity(counts[k]));
            if k < top {
                incidence.push(Vec::new());
            }
        }

        for w in 0..words {
            let word = Word::from_index(m, w, arity);
            let syms = word.symbols();
            // vertex weights accumulate over the cells sharing a vertex
            let s0 = spec.scale(0, &word);
            for q in 0..arity {
                weights[0][vertex_id(arity, syms, q)] += &s0 * &base.weights(0)[q];
            }
            for (e, &(t, h)) in edges.iter().enumerate() {
                let id = w * edges.len() + e;
                incidence[0].push((vertex_id(arity, syms, t), id, -1));
                incidence[0].push((vertex_id(arity, syms, h), id, 1));
            }
            for k in 1..=top {
                let n_k = base.count(k);
                let sk = spec.scale(k, &word);
                for b in 0..n_k {
                    let id = w * n_k + b;
                    cells[k].push(Cell { degree: k, index: id, label: Some(format!("{word}:{b}")) });
                    weights[k].push(&sk * &base.weights(k)[b]);
                }
                if k < top {
                    let n_up = base.count(k + 1);
                    for (l, u, s) in base.incidence(k).triplets() {
                        incidence[k].push((w * n_k + l, w * n_up + u, s));
                    }
                }
            }
        }
        let complex = Complex::new(spec.family.complex_id(m), cells, incidence, weights)?;
        Ok(Self { spec: spec.clone(), level: m, complex })
    }

    pub fn spec(&self) -> &FractalSpec {
        &self.spec
    }

    pub fn family(&self) -> Family {
        self.spec.family
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn arity(&self) -> usize {
        self.spec.arity()
    }

    /// Id of the cell `F_ω(e)` of degree `k ≥ 1`.
    pub fn cell_id(&self, degree: usize, word: &Word, base: usize) -> usize {
        word.index(self.arity()) * self.spec.base.count(degree) + base
    }

    pub fn vertex_id(&self, word: &Word, corner: usize) -> usize {
        vertex_id(self.arity(), word.symbols(), corner)
    }

    /// Corner ids of the level-m cell `F_ω(K)`.
    pub fn corners(&self, word: &Word) -> Vec<usize> {
        (0..self.arity()).map(|q| self.vertex_id(word, q)).collect()
    }

    /// Resolves an address of the current level to its cell.
    pub fn resolve(&self, addr: &CellAddress) -> Result<Cell> {
        addr.word.check_arity(self.arity())?;
        if addr.word.len() != self.level {
            return Err(Error::InvalidInput(format!(
                "word `{}` has length {}, complex has level {}",
                addr.word,
                addr.word.len(),
                self.level
            )));
        }
        let base_count = self.spec.base.count(addr.degree);
        if addr.degree > self.complex.max_degree() || addr.base >= base_count {
            return Err(Error::NoSuchCell { degree: addr.degree, index: addr.base });
        }
        let index = if addr.degree == 0 {
            self.vertex_id(&addr.word, addr.base)
        } else {
            self.cell_id(addr.degree, &addr.word, addr.base)
        };
        self.complex.cell(addr.degree, index).cloned()
    }

    /// `(tail, head)` vertex ids of every edge.
    pub fn edge_endpoints(&self) -> Vec<(usize, usize)> {
        let inc = self.complex.incidence(0);
        (0..self.complex.count(1))
            .map(|e| {
                let f = inc.faces(e);
                if f[0].1 < 0 {
                    (f[0].0, f[1].0)
                } else {
                    (f[1].0, f[0].0)
                }
            })
            .collect()
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

fn vertex_count_checked(arity: usize, m: usize) -> Option<usize> {
    let pow = checked_pow(arity, m)?;
    pair_count(arity).checked_mul(pow - 1).map(|x| arity + x / (arity - 1))
}

fn too_big(spec: &FractalSpec, m: usize) -> Error {
    Error::ResourceCap(format!(
        "{} level {m} exceeds the cap of {} cells per degree",
        spec.family.name(),
        spec.cell_cap
    ))
}

pub fn build_sg(m: usize) -> Result<Gasket> {
    Gasket::build(&FractalSpec::sg(), m)
}

pub fn build_sg3(m: usize) -> Result<Gasket> {
    Gasket::build(&FractalSpec::sg3(), m)
}

pub fn build(family: Family, m: usize) -> Result<Gasket> {
    Gasket::build(&FractalSpec::for_family(family), m)
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use super::*;

    /// Alias table built by brute force over all `(ω, q)` pairs using the
    /// rule `F_j q_k = F_k q_j`, independent of the closed-form ids.
    fn brute_force_classes(arity: usize, m: usize) -> usize {
        // union-find on (word index, corner)
        let words = arity.pow(m as u32);
        let mut parent: Vec<usize> = (0..words * arity).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        // cells ω'j and ω'k share F_ω'j q_k = F_ω'k q_j, after descending
        // to level m along corner k (resp. j)
        for len in 0..m {
            for w in Word::all(len, arity) {
                for j in 0..arity {
                    for k in 0..arity {
                        if j == k {
                            continue;
                        }
                        let mut left = w.child(j as u8);
                        let mut right = w.child(k as u8);
                        while left.len() < m {
                            left = left.child(k as u8);
                            right = right.child(j as u8);
                        }
                        let a = find(&mut parent, left.index(arity) * arity + k);
                        let b = find(&mut parent, right.index(arity) * arity + j);
                        parent[a] = b;
                    }
                }
            }
        }
        let mut roots = HashMap::new();
        for x in 0..words * arity {
            let r = find(&mut parent, x);
            roots.entry(r).or_insert(x);
        }
        roots.len()
    }

    #[test]
    fn sg_counts_and_validity() {
        for m in 0..=6 {
            let g = build_sg(m).unwrap();
            let c = g.complex();
            let p = 3usize.pow(m as u32);
            assert_eq!(c.count(0), (3 * p + 3) / 2);
            assert_eq!(c.count(1), 3 * p);
            assert_eq!(c.count(2), p);
            if m <= 3 {
                assert!(c.validate().is_empty());
                assert_eq!(c.count(0), brute_force_classes(3, m));
            }
        }
    }

    #[test]
    fn sg3_counts_and_face_parity() {
        for m in 0..=4 {
            let g = build_sg3(m).unwrap();
            let c = g.complex();
            let p = 4usize.pow(m as u32);
            assert_eq!([c.count(0), c.count(1), c.count(2), c.count(3)], [2 * p + 2, 6 * p, 4 * p, p]);
            if m <= 3 {
                assert!(c.validate().is_empty());
                for e in 0..c.count(1) {
                    let cof = c.incidence(1).cofaces(e);
                    assert_eq!(cof.len(), 2);
                    assert_eq!(cof.iter().map(|x| i32::from(x.1)).sum::<i32>(), 0);
                }
            }
            if m <= 2 {
                assert_eq!(c.count(0), brute_force_classes(4, m));
            }
        }
    }

    #[test]
    fn sg_weights_follow_transport() {
        let g = build_sg(1).unwrap();
        let w0 = g.complex().weights(0);
        assert_eq!(w0[0], rat(1, 9));
        assert_eq!(w0[3], rat(2, 9));
        assert_eq!(w0.iter().sum::<Rational>(), int(1));
        assert_eq!(g.complex().weights(1)[0], rat(5, 3));
        assert_eq!(g.complex().weights(2)[0], rat(1, 3));
    }

    #[test]
    fn aliases_resolve_to_one_vertex() {
        let g = build_sg3(1).unwrap();
        for j in 0..4u8 {
            for k in 0..4u8 {
                let a = g.resolve(&CellAddress::new(Word::new(vec![j]), 0, k.into())).unwrap();
                let b = g.resolve(&CellAddress::new(Word::new(vec![k]), 0, j.into())).unwrap();
                assert_eq!(a.index, b.index);
            }
        }
        let g0 = build_sg(0).unwrap();
        assert_eq!(g0.resolve(&CellAddress::new(Word::empty(), 1, 2)).unwrap().index, 2);
        assert!(g.resolve(&CellAddress::new(Word::new(vec![4]), 1, 0)).is_err());
    }

    #[test]
    fn vertex_key_inverts_vertex_id() {
        for arity in [3, 4] {
            for id in 0..vertex_count(arity, 3) {
                match vertex_key(arity, id) {
                    VertexKey::Boundary(k) => assert_eq!(k, id),
                    VertexKey::Midpoint { word, a, b } => {
                        assert_eq!(vertex_id(arity, word.child(a as u8).symbols(), b), id)
                    }
                }
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let mut spec = FractalSpec::sg();
        spec.cell_cap = 100;
        assert!(matches!(Gasket::build(&spec, 4), Err(Error::ResourceCap(_))));
        assert!(matches!(build_sg(40), Err(Error::ResourceCap(_))));
    }
}
