//! Coxeter labels, small Coxeter matrices and their packed tuple encoding.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Entry of a Coxeter matrix: `1` on the diagonal, `2..=7` for the angle
/// `π/k` (7 standing in for any `k ≥ 7`), or `INFINITY` for a divergent pair.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxeterLabel(u8);

impl CoxeterLabel {
    pub const DIAGONAL: Self = Self(1);
    pub const RIGHT: Self = Self(2);
    /// Truncation stand-in for every angle `π/k` with `k ≥ 7`.
    pub const SEVEN: Self = Self(7);
    pub const INFINITY: Self = Self(8);

    /// Angle labels usable off the diagonal in enumerations.
    pub const ANGLES: [Self; 6] = [Self(2), Self(3), Self(4), Self(5), Self(6), Self(7)];

    pub fn new(value: u8) -> Result<Self, Error> {
        match value {
            1..=7 => Ok(Self(value)),
            _ => Err(Error::BadLabel(value.to_string())),
        }
    }

    /// Nibble code used in packed tuples; `INFINITY` is 8 so it sorts above 7.
    pub const fn code(self) -> u8 {
        self.0
    }

    /// Inverse of [`code`](Self::code); panics on codes outside `1..=8`.
    pub fn from_code(code: u8) -> Self {
        assert!((1..=8).contains(&code), "invalid label code {code}");
        Self(code)
    }

    pub fn is_infinite(self) -> bool {
        self == Self::INFINITY
    }

    /// Finite angle denominator, `None` for `INFINITY`.
    pub fn angle(self) -> Option<u8> {
        (!self.is_infinite()).then_some(self.0)
    }

    /// `-cos(π/k)` as a double; `-1` for `INFINITY` is never meaningful and
    /// returns `None`.
    pub fn cosine_f64(self) -> Option<f64> {
        self.angle().map(|k| match k {
            2 => 0.0,
            _ => -(std::f64::consts::PI / k as f64).cos(),
        })
    }
}

impl fmt::Display for CoxeterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "INF")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Debug for CoxeterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CoxeterLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(Self::INFINITY);
        }
        let v: u8 = s.parse().map_err(|_| Error::BadLabel(s.to_string()))?;
        Self::new(v)
    }
}

/// Number of unordered pairs among `rank` nodes.
pub const fn pair_count(rank: usize) -> usize {
    rank * rank.saturating_sub(1) / 2
}

/// Lexicographic pairs `(i, j)`, `i < j`, of `0..rank`.
pub fn lex_pairs(rank: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..rank).flat_map(move |i| (i + 1..rank).map(move |j| (i, j)))
}

/// Pack label codes into a `u64`, first entry in the most significant nibble
/// used, so integer order equals lexicographic tuple order for equal length.
pub fn pack_codes(codes: impl IntoIterator<Item = u8>) -> u64 {
    codes.into_iter().fold(0u64, |acc, c| (acc << 4) | c as u64)
}

/// Symmetric Coxeter matrix of rank at most 8.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SmallCoxeterMatrix {
    rank: usize,
    labels: [[CoxeterLabel; 8]; 8],
}

impl SmallCoxeterMatrix {
    /// All off-diagonal entries set to 2 (pairwise orthogonal mirrors).
    pub fn orthogonal(rank: usize) -> Self {
        assert!((1..=8).contains(&rank), "rank must be in 1..=8");
        let mut labels = [[CoxeterLabel::RIGHT; 8]; 8];
        for (i, row) in labels.iter_mut().enumerate() {
            row[i] = CoxeterLabel::DIAGONAL;
        }
        Self { rank, labels }
    }

    /// Build from the upper-triangular tuple in lexicographic pair order.
    pub fn from_tuple(rank: usize, tuple: &[CoxeterLabel]) -> Result<Self, Error> {
        if tuple.len() != pair_count(rank) || !(1..=8).contains(&rank) {
            return Err(Error::TupleLength {
                rank,
                len: tuple.len(),
            });
        }
        let mut m = Self::orthogonal(rank);
        for ((i, j), &l) in lex_pairs(rank).zip(tuple) {
            if l == CoxeterLabel::DIAGONAL {
                return Err(Error::BadLabel("1 off the diagonal".into()));
            }
            m.set(i, j, l);
        }
        Ok(m)
    }

    /// Chain diagram: consecutive nodes carry `edges`, everything else is 2.
    pub fn chain(edges: &[u8]) -> Self {
        let mut m = Self::orthogonal(edges.len() + 1);
        for (i, &e) in edges.iter().enumerate() {
            m.set(i, i + 1, CoxeterLabel::new(e).expect("valid chain label"));
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: usize, j: usize) -> CoxeterLabel {
        self.labels[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, l: CoxeterLabel) {
        assert!(i != j, "diagonal is fixed");
        self.labels[i][j] = l;
        self.labels[j][i] = l;
    }

    pub fn to_tuple(&self) -> Vec<CoxeterLabel> {
        lex_pairs(self.rank).map(|(i, j)| self.labels[i][j]).collect()
    }

    pub fn packed(&self) -> u64 {
        pack_codes(lex_pairs(self.rank).map(|(i, j)| self.labels[i][j].code()))
    }

    /// Principal submatrix on the given node indices, in the given order.
    pub fn submatrix(&self, nodes: &[usize]) -> Self {
        let mut m = Self::orthogonal(nodes.len());
        for (a, &i) in nodes.iter().enumerate() {
            for (b, &j) in nodes.iter().enumerate().skip(a + 1) {
                m.set(a, b, self.labels[i][j]);
            }
        }
        m
    }

    /// Relabel nodes: entry `(perm[i], perm[j])` of the result is entry `(i, j)` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut m = Self::orthogonal(self.rank);
        for (i, j) in lex_pairs(self.rank) {
            m.set(perm[i], perm[j], self.labels[i][j]);
        }
        m
    }

    pub fn has_infinity(&self) -> bool {
        lex_pairs(self.rank).any(|(i, j)| self.labels[i][j].is_infinite())
    }

    pub fn has_seven(&self) -> bool {
        lex_pairs(self.rank).any(|(i, j)| self.labels[i][j] == CoxeterLabel::SEVEN)
    }

    /// Connected components of the diagram (edges are labels other than 2).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = [false; 8];
        let mut out = Vec::new();
        for start in 0..self.rank {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                for w in 0..self.rank {
                    if !seen[w] && w != v && self.labels[v][w] != CoxeterLabel::RIGHT {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Cosine matrix `1` on the diagonal, `-cos(π/k)` off it, as doubles.
    /// `INFINITY` entries become `-1`.
    pub fn cosine_matrix_f64(&self) -> Vec<f64> {
        let n = self.rank;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = if i == j {
                    1.0
                } else {
                    self.labels[i][j].cosine_f64().unwrap_or(-1.0)
                };
            }
        }
        out
    }
}

impl fmt::Debug for SmallCoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmallCoxeterMatrix(rank {}, {:?})", self.rank, self.to_tuple())
    }
}

/// Render a tuple as comma-separated integers and `INF`.
pub fn format_tuple(tuple: &[CoxeterLabel]) -> String {
    tuple
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Parse the comma-separated rendering produced by [`format_tuple`].
pub fn parse_tuple(s: &str) -> Result<Vec<CoxeterLabel>, Error> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}
