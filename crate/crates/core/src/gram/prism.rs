//! Compact Coxeter 4-prisms and gluing them onto orthogonal simplex ends.
//!
//! A prism here has four side facets carrying a Lannér diagram, a near end
//! orthogonal to every side and a far end meeting side `i` at angle
//! `π/end[i]`. The ends diverge with `cosh` of their distance equal to `a`,
//! which the vanishing of the 6×6 Gram determinant fixes:
//! `a² = det(sides + far end) / det(sides)`.

use std::sync::OnceLock;

use nalgebra::{DMatrix, Matrix5, Vector5};
use serde::Serialize;

use super::certify::{realize_matrix, signature_with, verify, Realization};
use super::{GramMatrix, SolvedGram};
use crate::algebraic::AlgebraicReal;
use crate::catalog::generate_lanner4_catalog;
use crate::diagram::cosine_entry;
use crate::error::{Error, Result};
use crate::label::CoxeterLabel;
use crate::polytope::PolytopeData;

/// Side pairs in lexicographic order.
const SIDE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// One compact Coxeter 4-prism with an orthogonal end.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrismSpec {
    /// Labels among the sides, pairs in lexicographic order.
    pub sides: [u8; 6],
    /// Label between the far end and each side.
    pub end: [u8; 4],
    /// Exact square of the dotted-edge value.
    #[serde(serialize_with = "display")]
    pub a_squared: AlgebraicReal,
}

fn display<S: serde::Serializer>(a: &AlgebraicReal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(a)
}

fn cos(code: u8) -> f64 {
    CoxeterLabel::from_code(code).cosine_f64().unwrap()
}

fn exact(code: u8) -> AlgebraicReal {
    cosine_entry(CoxeterLabel::from_code(code)).unwrap()
}

impl PrismSpec {
    /// `a = cosh` of the distance between the ends.
    pub fn a(&self) -> f64 {
        self.a_squared.to_f64().sqrt()
    }

    /// Label between sides `i` and `j`.
    pub fn side_label(&self, i: usize, j: usize) -> u8 {
        let (i, j) = (i.min(j), i.max(j));
        self.sides[SIDE_PAIRS.iter().position(|&p| p == (i, j)).unwrap()]
    }

    /// Gram matrix ordered sides, near end, far end.
    pub fn gram(&self) -> [[f64; 6]; 6] {
        let mut g = [[0.0; 6]; 6];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for (&(i, j), &l) in SIDE_PAIRS.iter().zip(&self.sides) {
            g[i][j] = cos(l);
            g[j][i] = cos(l);
        }
        for (i, &l) in self.end.iter().enumerate() {
            g[i][5] = cos(l);
            g[5][i] = cos(l);
        }
        g[4][5] = -self.a();
        g[5][4] = -self.a();
        g
    }

    fn permuted(&self, perm: &[usize; 4]) -> ([u8; 6], [u8; 4]) {
        let mut sides = [0; 6];
        for (k, &(i, j)) in SIDE_PAIRS.iter().enumerate() {
            sides[k] = self.side_label(perm[i], perm[j]);
        }
        (sides, perm.map(|i| self.end[i]))
    }

    /// Least relabeling of the sides.
    fn canonical(&self) -> ([u8; 6], [u8; 4]) {
        permutations4().iter().map(|p| self.permuted(p)).min().unwrap()
    }
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                if a != b && a != c && b != c {
                    out.push([a, b, c, 6 - a - b - c]);
                }
            }
        }
    }
    out
}

/// Faces of the prism are exactly the subsets of an end plus three sides.
fn prism_faces_ok(g: &[[f64; 6]; 6]) -> bool {
    (1u8..64).all(|mask| {
        let idx: Vec<usize> = (0..6).filter(|&b| mask >> b & 1 == 1).collect();
        let face = (mask & 0b1111).count_ones() <= 3 && mask >> 4 != 0b11;
        let m = DMatrix::from_fn(idx.len(), idx.len(), |r, c| g[idx[r]][idx[c]]);
        let min = m.symmetric_eigenvalues().min();
        if min.abs() <= 1e-9 {
            return false;
        }
        (min > 0.0) == face
    })
}

fn derive() -> Vec<PrismSpec> {
    let mut found: Vec<PrismSpec> = Vec::new();
    for tuple in generate_lanner4_catalog().tuples() {
        let sides: [u8; 6] = std::array::from_fn(|k| tuple[k].code());
        let side_rows: Vec<Vec<AlgebraicReal>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| match i.cmp(&j) {
                        std::cmp::Ordering::Equal => AlgebraicReal::one(),
                        _ => exact(sides[SIDE_PAIRS.iter().position(|&p| p == (i.min(j), i.max(j))).unwrap()]),
                    })
                    .collect()
            })
            .collect();
        let det_sides = AlgebraicReal::determinant(&side_rows);
        for code in 0..625u32 {
            let end: [u8; 4] = std::array::from_fn(|i| (code / 5u32.pow(i as u32) % 5) as u8 + 2);
            // cheap float screen before the exact determinant
            let mut g = [[0.0; 6]; 6];
            for (i, row) in g.iter_mut().enumerate() {
                row[i] = 1.0;
            }
            for (&(i, j), &l) in SIDE_PAIRS.iter().zip(&sides) {
                g[i][j] = cos(l);
                g[j][i] = cos(l);
            }
            for (i, &l) in end.iter().enumerate() {
                g[i][5] = cos(l);
                g[5][i] = cos(l);
            }
            let sub = |idx: &[usize]| DMatrix::from_fn(idx.len(), idx.len(), |r, c| g[idx[r]][idx[c]]).determinant();
            let a2 = sub(&[0, 1, 2, 3, 5]) / sub(&[0, 1, 2, 3]);
            if a2 <= 1.0 + 1e-9 {
                continue;
            }
            g[4][5] = -a2.sqrt();
            g[5][4] = g[4][5];
            if !prism_faces_ok(&g) || !prism_signature_ok(&g) {
                continue;
            }
            let mut rows = side_rows.clone();
            for (i, row) in rows.iter_mut().enumerate() {
                row.push(exact(end[i]));
            }
            let mut last: Vec<AlgebraicReal> = end.iter().map(|&l| exact(l)).collect();
            last.push(AlgebraicReal::one());
            rows.push(last);
            let Some(a_squared) = AlgebraicReal::determinant(&rows).checked_div(&det_sides) else {
                continue;
            };
            let spec = PrismSpec { sides, end, a_squared };
            if !found.iter().any(|f| f.canonical() == spec.canonical()) {
                found.push(spec);
            }
        }
    }
    for f in &mut found {
        let (sides, end) = f.canonical();
        f.sides = sides;
        f.end = end;
    }
    found.sort_by(|x, y| x.a().total_cmp(&y.a()));
    found
}

fn prism_signature_ok(g: &[[f64; 6]; 6]) -> bool {
    let m = DMatrix::from_fn(6, 6, |r, c| g[r][c]);
    let ev = m.symmetric_eigenvalues();
    let zero = ev.iter().filter(|v| v.abs() <= 1e-9).count();
    let neg = ev.iter().filter(|&&v| v < -1e-9).count();
    zero == 1 && neg == 1
}

/// All compact Coxeter 4-prisms with an orthogonal end, up to relabeling the
/// sides, sorted by `a`.
pub fn compact_prisms() -> &'static [PrismSpec] {
    static PRISMS: OnceLock<Vec<PrismSpec>> = OnceLock::new();
    PRISMS.get_or_init(derive)
}

/// Glue `prism` onto the end `b` of `base`, whose neighbours `q` are the
/// facets orthogonal to `b`. Every placement of the sides onto `q` that
/// matches labels gives one result; distinct results are returned.
pub fn glue_prism(base: &SolvedGram, basis: (u8, &[u8]), prism: &PrismSpec) -> Result<Vec<SolvedGram>> {
    let (b, q) = (basis.0 as usize - 1, basis.1);
    if q.len() != 4 {
        return Err(Error::IncompatibleGluing(format!("end of facet {} needs 4 neighbours", basis.0)));
    }
    let q: Vec<usize> = q.iter().map(|&f| f as usize - 1).collect();
    let g = &base.values;
    if q.iter().any(|&f| g.get(b, f).abs() > 1e-9) {
        return Err(Error::IncompatibleGluing(format!("facet {} is not orthogonal to its neighbours", basis.0)));
    }
    let r = realize_matrix(g)?;
    let mut out: Vec<SolvedGram> = Vec::new();
    for perm in permutations4() {
        // side i lies in the hyperplane of facet q[perm[i]]
        let fits = SIDE_PAIRS
            .iter()
            .all(|&(i, j)| (g.get(q[perm[i]], q[perm[j]]) - cos(prism.side_label(i, j))).abs() <= 1e-9);
        if !fits {
            continue;
        }
        let mut lhs = Matrix5::zeros();
        let mut rhs = Vector5::zeros();
        for i in 0..5 {
            let (f, v) = if i < 4 {
                (q[perm[i]], cos(prism.end[i]))
            } else {
                // the prism's near end points back into the base
                (b, prism.a())
            };
            let n = r.normals[f];
            for c in 0..5 {
                lhs[(i, c)] = if c == 4 { -n[c] } else { n[c] };
            }
            rhs[i] = v;
        }
        let Some(e) = lhs.lu().solve(&rhs) else {
            continue;
        };
        let e: [f64; 5] = std::array::from_fn(|c| e[c]);
        if (Realization::form(&e, &e) - 1.0).abs() > 1e-8 {
            continue;
        }
        // only row b changes
        let mut values = *g;
        for j in (0..8).filter(|&j| j != b) {
            values.set(b, j, Realization::form(&e, &r.normals[j]));
        }
        for (i, &l) in prism.end.iter().enumerate() {
            values.set(b, q[perm[i]], cos(l));
        }
        if let Some(s) = certify(base, values, b) {
            if !out.iter().any(|o| o.values.distance(&s.values) < 1e-8) {
                out.push(s);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::IncompatibleGluing(format!(
            "prism ends do not match the link of facet {}",
            basis.0
        )));
    }
    Ok(out)
}

/// Every Gram reachable from `base` by gluing prisms at the ends of `p`'s
/// l4 basis that are still orthogonal, `base` included. Results have the
/// combinatorial type `p` and are distinct up to the symmetry group of `p`.
pub fn glue_closure(base: &SolvedGram, p: &PolytopeData) -> Vec<SolvedGram> {
    let mut out = vec![base.clone()];
    let mut next = 0;
    while next < out.len() {
        let g = out[next].clone();
        next += 1;
        for (b, q) in &p.derived.l4_basis {
            for prism in compact_prisms() {
                let Ok(glued) = glue_prism(&g, (*b, q), prism) else {
                    continue;
                };
                for s in glued {
                    if verify(&s, p) && !out.iter().any(|o| equivalent(&o.values, &s.values, p, 1e-8)) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

/// Whether two Grams agree up to a symmetry of `p`.
pub fn equivalent(a: &GramMatrix, b: &GramMatrix, p: &PolytopeData, tol: f64) -> bool {
    p.symmetry_group.iter().any(|s| a.permuted(s).distance(b) < tol)
}

fn certify(base: &SolvedGram, values: GramMatrix, b: usize) -> Option<SolvedGram> {
    let residual = values.max_residual();
    if residual > 1e-9 || signature_with(&values, 1e-6) != Some((4, 1)) {
        return None;
    }
    let touches = |&(i, j): &(u8, u8)| i as usize - 1 == b || j as usize - 1 == b;
    let angle_integers = base
        .angle_integers
        .iter()
        .filter(|(p, _)| !touches(p))
        .map(|(&p, &n)| (p, n))
        .collect();
    let mut lengths: std::collections::BTreeMap<(u8, u8), f64> = base
        .lengths
        .iter()
        .filter(|(p, _)| !touches(p))
        .map(|(&p, &v)| (p, v))
        .collect();
    let mut radius = base.radius;
    for j in (0..8).filter(|&j| j != b) {
        let v = values.get(b, j);
        if v < -1.0 {
            let pair = ((b.min(j) + 1) as u8, (b.max(j) + 1) as u8);
            lengths.insert(pair, -v);
        }
        radius[b][j] = residual.max(f64::EPSILON);
        radius[j][b] = radius[b][j];
    }
    Some(SolvedGram {
        values,
        radius,
        angle_integers,
        lengths,
        signature: (4, 1),
        residual,
    })
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn six_prisms_with_exact_values() {
        let prisms = compact_prisms();
        let r5 = AlgebraicReal::sqrt(5);
        let expected = [
            // (3 + √5)/4
            (AlgebraicReal::ratio(3, 4) + r5.scale(&q(1, 4))),
            // 3(7 + √5)/22
            (AlgebraicReal::ratio(21, 22) + r5.scale(&q(3, 22))),
            // (7 + √5)/8
            (AlgebraicReal::ratio(7, 8) + r5.scale(&q(1, 8))),
            // 2(3 + √2)/7
            (AlgebraicReal::ratio(6, 7) + AlgebraicReal::sqrt(2).scale(&q(2, 7))),
            // 4(6 + √5)/31
            (AlgebraicReal::ratio(24, 31) + r5.scale(&q(4, 31))),
            // (3 + √5)/2
            (AlgebraicReal::ratio(3, 2) + r5.scale(&q(1, 2))),
        ];
        assert_eq!(prisms.len(), 6);
        for e in &expected {
            assert_eq!(prisms.iter().filter(|p| &p.a_squared == e).count(), 1, "{e}");
        }
    }

    #[test]
    fn prism_gram_is_degenerate_lorentzian() {
        for p in compact_prisms() {
            assert!(prism_signature_ok(&p.gram()));
            assert!(prism_faces_ok(&p.gram()));
        }
    }
}
