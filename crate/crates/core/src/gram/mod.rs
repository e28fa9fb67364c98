//! Gram matrices of potential vectors: unknowns, minor residuals, solving,
//! certification, realization and prism gluing.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebraic::AlgebraicReal;
use crate::diagram::cosine_entry;
use crate::label::CoxeterLabel;
use crate::pasting::PotentialVector;
use crate::polytope::PairIndex;

mod certify;
mod elim;
mod prism;
mod solve;

pub use certify::{realize, signature, verify, Realization};
pub use prism::{compact_prisms, equivalent, glue_closure, glue_prism, PrismSpec};
pub use solve::{solve, solve_for, SolveReport, SolveStage, SolverConfig};

/// Kind of an unknown Gram entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UnknownKind {
    /// `-cosh ρ` for a divergent pair, domain `(-∞, -1)`.
    Length,
    /// `-cos(π/n)` with `n ≥ 7`, domain `(-1, -cos(π/7)]`.
    Angle,
}

/// An unknown entry of a Gram candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Unknown {
    pub kind: UnknownKind,
    /// Facet pair, 1-based, ascending.
    pub pair: (u8, u8),
    pub slot: usize,
}

impl Unknown {
    /// Whether `v` lies in the domain of this unknown.
    pub fn admits(&self, v: f64) -> bool {
        match self.kind {
            UnknownKind::Length => v < -1.0,
            UnknownKind::Angle => v > -1.0 && v <= ANGLE_UPPER + 1e-9,
        }
    }
}

/// Largest admissible angle entry, `-cos(π/7)`.
pub const ANGLE_UPPER: f64 = -0.900_968_867_902_419_1;

/// An off-diagonal entry of a Gram candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entry {
    Known(AlgebraicReal),
    /// Index into [`GramCandidate::unknowns`].
    Unknown(usize),
}

/// Symbolic Gram matrix of a potential vector.
#[derive(Clone, Debug)]
pub struct GramCandidate {
    pub vector: PotentialVector,
    /// Entries in slot order.
    pub entries: Vec<Entry>,
    pub unknowns: Vec<Unknown>,
}

/// Replace labels 2..6 by exact cosines, label 7 by an angle unknown and
/// `INFINITY` by a length unknown. Unknowns are numbered in slot order.
pub fn instantiate(v: &PotentialVector) -> GramCandidate {
    let mut entries = Vec::with_capacity(28);
    let mut unknowns = Vec::new();
    for (slot, l) in v.labels().into_iter().enumerate() {
        let kind = match l {
            CoxeterLabel::INFINITY => Some(UnknownKind::Length),
            CoxeterLabel::SEVEN => Some(UnknownKind::Angle),
            _ => None,
        };
        entries.push(match kind {
            Some(kind) => {
                unknowns.push(Unknown {
                    kind,
                    pair: PairIndex::pair(slot),
                    slot,
                });
                Entry::Unknown(unknowns.len() - 1)
            }
            None => Entry::Known(cosine_entry(l).expect("exact label")),
        });
    }
    GramCandidate {
        vector: *v,
        entries,
        unknowns,
    }
}

impl GramCandidate {
    pub fn length_unknowns(&self) -> impl Iterator<Item = &Unknown> {
        self.unknowns.iter().filter(|u| u.kind == UnknownKind::Length)
    }

    pub fn angle_unknowns(&self) -> impl Iterator<Item = &Unknown> {
        self.unknowns.iter().filter(|u| u.kind == UnknownKind::Angle)
    }

    /// Whether the diagram, dotted edges included, is connected. The Gram
    /// matrix of a compact polytope is indecomposable.
    pub fn is_connected(&self) -> bool {
        let mut reached = 1u8;
        loop {
            let mut next = reached;
            for (slot, &l) in self.vector.labels().iter().enumerate() {
                let (i, j) = PairIndex::pair(slot);
                let (bi, bj) = (1u8 << (i - 1), 1u8 << (j - 1));
                if l.angle() != Some(2) && (reached & (bi | bj)) != 0 {
                    next |= bi | bj;
                }
            }
            if next == reached {
                return reached == u8::MAX;
            }
            reached = next;
        }
    }

    /// Entry `(i, j)`, 1-based; the diagonal is 1.
    pub fn entry(&self, i: u8, j: u8) -> Option<&Entry> {
        (i != j).then(|| &self.entries[PairIndex::slot(i, j)])
    }

    /// Numeric matrix with the given unknown values.
    pub fn numeric(&self, values: &[f64]) -> GramMatrix {
        let mut m = GramMatrix::identity();
        for (slot, e) in self.entries.iter().enumerate() {
            let (i, j) = PairIndex::pair(slot);
            let v = match e {
                Entry::Known(a) => a.to_f64(),
                Entry::Unknown(k) => values[*k],
            };
            m.set(i as usize - 1, j as usize - 1, v);
        }
        m
    }

    /// The 28 residuals: for each pair `{i, j}` in slot order, the principal
    /// 6×6 minor deleting `i` and `j`, as an exact polynomial in the unknowns.
    pub fn residual_system(&self) -> Vec<Polynomial> {
        PairIndex::pairs()
            .iter()
            .map(|&(i, j)| {
                let keep: Vec<u8> = (1..=8).filter(|&f| f != i && f != j).collect();
                self.minor_polynomial(&keep)
            })
            .collect()
    }

    /// Principal minor on the given facets as a polynomial (Leibniz expansion).
    pub fn minor_polynomial(&self, facets: &[u8]) -> Polynomial {
        let n = facets.len();
        let mut poly = Polynomial::zero(self.unknowns.len());
        let mut exps = vec![0u8; self.unknowns.len()];
        let mut used = vec![false; n];
        self.expand(facets, 0, &mut used, AlgebraicReal::one(), &mut exps, 0, &mut poly);
        poly.terms.retain(|_, c| !c.is_zero());
        poly
    }

    #[allow(clippy::too_many_arguments)]
    fn expand(
        &self,
        facets: &[u8],
        row: usize,
        used: &mut [bool],
        coeff: AlgebraicReal,
        exps: &mut [u8],
        inversions: usize,
        poly: &mut Polynomial,
    ) {
        let n = facets.len();
        if row == n {
            let c = if inversions % 2 == 0 { coeff } else { -coeff };
            let slot = poly.terms.entry(exps.to_vec()).or_default();
            *slot = &*slot + &c;
            return;
        }
        for col in 0..n {
            if used[col] {
                continue;
            }
            // columns chosen so far that are greater than `col`
            let inv = used[col + 1..].iter().filter(|&&u| u).count();
            let (next, var) = if row == col {
                (coeff.clone(), None)
            } else {
                match self.entry(facets[row], facets[col]).unwrap() {
                    Entry::Known(a) if a.is_zero() => continue,
                    Entry::Known(a) => (&coeff * a, None),
                    Entry::Unknown(k) => (coeff.clone(), Some(*k)),
                }
            };
            used[col] = true;
            if let Some(k) = var {
                exps[k] += 1;
            }
            self.expand(facets, row + 1, used, next, exps, inversions + inv, poly);
            if let Some(k) = var {
                exps[k] -= 1;
            }
            used[col] = false;
        }
    }
}

/// Sparse multivariate polynomial with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    pub nvars: usize,
    /// Exponent vector to coefficient.
    pub terms: BTreeMap<Vec<u8>, AlgebraicReal>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&d| d as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&k| self.terms.keys().any(|e| e[k] > 0))
            .collect()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(x)
                    .fold(c.to_f64(), |acc, (&d, &v)| acc * v.powi(d as i32))
            })
            .sum()
    }

    /// Coefficient of a monomial, zero if absent.
    pub fn coefficient(&self, exps: &[u8]) -> AlgebraicReal {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// Render with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { p: self, names }
    }
}

struct PolyDisplay<'a> {
    p: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.p.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (k, &d) in e.iter().enumerate() {
                match d {
                    0 => {}
                    1 => write!(f, "*{}", self.names[k])?,
                    _ => write!(f, "*{}^{d}", self.names[k])?,
                }
            }
        }
        Ok(())
    }
}

/// Dense symmetric 8×8 matrix of doubles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GramMatrix(pub [[f64; 8]; 8]);

impl GramMatrix {
    pub fn identity() -> Self {
        let mut m = [[0.0; 8]; 8];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self(m)
    }

    /// Entry `(i, j)`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.0[i][j] = v;
        self.0[j][i] = v;
    }

    /// Principal submatrix on 0-based indices, row-major.
    pub fn principal(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter()
            .flat_map(|&i| idx.iter().map(move |&j| self.0[i][j]))
            .collect()
    }

    /// Principal minor on 0-based indices divided by the product of the row
    /// norms, so that it lies in `[-1, 1]`.
    pub fn normalized_minor(&self, idx: &[usize]) -> f64 {
        let n = idx.len();
        let mut a = self.principal(idx);
        let scale: f64 = a.chunks(n).map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt()).product();
        crate::diagram::det_f64(&mut a, n) / scale
    }

    /// Largest absolute normalized principal 6×6 minor.
    pub fn max_residual(&self) -> f64 {
        minor_complements()
            .iter()
            .map(|idx| self.normalized_minor(idx).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_nalgebra(&self) -> nalgebra::SMatrix<f64, 8, 8> {
        nalgebra::SMatrix::from_fn(|i, j| self.0[i][j])
    }

    /// Relabel facets: entry `(σ(i), σ(j))` of the result is entry `(i, j)`.
    pub fn permuted(&self, sigma: &crate::polytope::Permutation) -> Self {
        let mut m = Self::identity();
        for i in 0..8 {
            for j in 0..8 {
                let (a, b) = (sigma.apply(i as u8 + 1) - 1, sigma.apply(j as u8 + 1) - 1);
                m.0[a as usize][b as usize] = self.0[i][j];
            }
        }
        m
    }

    /// Largest entry-wise difference.
    pub fn distance(&self, other: &Self) -> f64 {
        (0..8)
            .flat_map(|i| (0..8).map(move |j| (i, j)))
            .map(|(i, j)| (self.0[i][j] - other.0[i][j]).abs())
            .fold(0.0, f64::max)
    }
}

/// For each pair slot, the six 0-based indices left after deleting the pair.
pub fn minor_complements() -> &'static [[usize; 6]; 28] {
    static OUT: std::sync::OnceLock<[[usize; 6]; 28]> = std::sync::OnceLock::new();
    OUT.get_or_init(|| {
        std::array::from_fn(|s| {
            let (i, j) = PairIndex::pair(s);
            let keep: Vec<usize> = (0..8).filter(|&f| f != i as usize - 1 && f != j as usize - 1).collect();
            keep.try_into().unwrap()
        })
    })
}

/// A certified solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "SolvedGramRepr", try_from = "SolvedGramRepr")]
pub struct SolvedGram {
    pub values: GramMatrix,
    /// Error estimate per entry.
    pub radius: [[f64; 8]; 8],
    /// Angle pair to `n` with entry `-cos(π/n)`.
    pub angle_integers: BTreeMap<(u8, u8), u32>,
    /// Length pair to `cosh ρ = -entry`.
    pub lengths: BTreeMap<(u8, u8), f64>,
    pub signature: (usize, usize),
    /// Largest normalized 6×6 minor.
    pub residual: f64,
}

/// On-disk form: decimal strings for the matrix, `"i,j"` keys.
#[derive(Serialize, Deserialize)]
struct SolvedGramRepr {
    matrix: Vec<Vec<String>>,
    radius: Vec<Vec<f64>>,
    angles: BTreeMap<String, u32>,
    lengths: BTreeMap<String, f64>,
    signature: (usize, usize),
    residual: f64,
}

fn pair_key((i, j): (u8, u8)) -> String {
    format!("{i},{j}")
}

fn parse_pair(k: &str) -> Result<(u8, u8), String> {
    let (i, j) = k.split_once(',').ok_or_else(|| format!("bad pair `{k}`"))?;
    Ok((
        i.trim().parse().map_err(|_| format!("bad pair `{k}`"))?,
        j.trim().parse().map_err(|_| format!("bad pair `{k}`"))?,
    ))
}

impl From<SolvedGram> for SolvedGramRepr {
    fn from(s: SolvedGram) -> Self {
        Self {
            matrix: s
                .values
                .0
                .iter()
                .map(|row| row.iter().map(|v| format!("{:.18}", v + 0.0)).collect())
                .collect(),
            radius: s.radius.iter().map(|row| row.to_vec()).collect(),
            angles: s.angle_integers.iter().map(|(&p, &n)| (pair_key(p), n)).collect(),
            lengths: s.lengths.iter().map(|(&p, &v)| (pair_key(p), v)).collect(),
            signature: s.signature,
            residual: s.residual,
        }
    }
}

impl TryFrom<SolvedGramRepr> for SolvedGram {
    type Error = String;
    fn try_from(r: SolvedGramRepr) -> Result<Self, String> {
        if r.matrix.len() != 8 || r.matrix.iter().any(|row| row.len() != 8) {
            return Err("matrix must be 8×8".into());
        }
        let mut values = GramMatrix::identity();
        for (i, row) in r.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                values.0[i][j] = v.parse().map_err(|_| format!("bad entry `{v}`"))?;
            }
        }
        if r.radius.len() != 8 || r.radius.iter().any(|row| row.len() != 8) {
            return Err("radius must be 8×8".into());
        }
        let radius = std::array::from_fn(|i| std::array::from_fn(|j| r.radius[i][j]));
        Ok(Self {
            values,
            radius,
            angle_integers: r
                .angles
                .iter()
                .map(|(k, &n)| Ok((parse_pair(k)?, n)))
                .collect::<Result<_, String>>()?,
            lengths: r
                .lengths
                .iter()
                .map(|(k, &v)| Ok((parse_pair(k)?, v)))
                .collect::<Result<_, String>>()?,
            signature: r.signature,
            residual: r.residual,
        })
    }
}

impl Serialize for GramMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::parse_tuple;

    fn vector(s: &str) -> PotentialVector {
        PotentialVector::from_labels(&parse_tuple(s).unwrap()).unwrap()
    }

    #[test]
    fn unknown_counts() {
        let mut labels = vec![CoxeterLabel::RIGHT; 28];
        for s in [0, 5, 9, 14, 20, 27] {
            labels[s] = CoxeterLabel::INFINITY;
        }
        labels[3] = CoxeterLabel::SEVEN;
        let g = instantiate(&PotentialVector::from_labels(&labels).unwrap());
        assert_eq!(g.length_unknowns().count(), 6);
        assert_eq!(g.angle_unknowns().count(), 1);
        assert_eq!(g.unknowns[1].pair, PairIndex::pair(3));
    }

    #[test]
    fn identity_residuals_are_one() {
        let g = instantiate(&vector(&vec!["2"; 28].join(",")));
        let res = g.residual_system();
        assert!(res.iter().all(|p| p.terms.len() == 1 && p.eval(&[]) == 1.0));
        assert_eq!(g.numeric(&[]).max_residual(), 1.0);
    }

    #[test]
    fn polynomial_matches_numeric_determinant() {
        let mut labels = parse_tuple(&vec!["3"; 28].join(",")).unwrap();
        labels[0] = CoxeterLabel::INFINITY;
        labels[7] = CoxeterLabel::SEVEN;
        labels[12] = CoxeterLabel::new(5).unwrap();
        let g = instantiate(&PotentialVector::from_labels(&labels).unwrap());
        let x = [-1.7, -0.93];
        let m = g.numeric(&x);
        for (s, p) in g.residual_system().iter().enumerate() {
            let idx = minor_complements()[s];
            let mut a = m.principal(&idx);
            let d = crate::diagram::det_f64(&mut a, 6);
            assert!((p.eval(&x) - d).abs() < 1e-12, "slot {s}");
        }
    }
}
