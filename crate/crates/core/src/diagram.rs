//! Exact classification of small Coxeter diagrams.

use std::cmp::Ordering;

use num_rational::BigRational;

use crate::algebraic::AlgebraicReal;
use crate::error::{Error, Result};
use crate::label::{CoxeterLabel, SmallCoxeterMatrix};

/// Classes of Coxeter diagrams relevant to compact hyperbolic polytopes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagramClass {
    /// Positive definite cosine matrix (finite reflection group).
    Elliptic,
    /// Connected, positive semidefinite of corank one, all proper
    /// subdiagrams elliptic (affine reflection group).
    ConnectedParabolic,
    /// Disconnected with every component connected parabolic.
    ReducibleParabolicSquare,
    /// Connected, neither elliptic nor parabolic, all proper subdiagrams
    /// elliptic (compact hyperbolic simplex).
    Lanner,
    Other,
}

/// `-cos(π/k)` for `k ≤ 6`, exactly.
pub fn cosine_entry(label: CoxeterLabel) -> Result<AlgebraicReal> {
    let half = |d: i64| AlgebraicReal::sqrt_term(BigRational::new((-1).into(), 2.into()), d);
    match label.code() {
        1 => Ok(AlgebraicReal::one()),
        2 => Ok(AlgebraicReal::zero()),
        3 => Ok(AlgebraicReal::ratio(-1, 2)),
        4 => Ok(half(2)),
        5 => Ok(AlgebraicReal::ratio(-1, 4)
            + AlgebraicReal::sqrt_term(BigRational::new((-1).into(), 4.into()), 5)),
        6 => Ok(half(3)),
        _ => Err(Error::InexactLabel(label.to_string())),
    }
}

/// Exact cosine matrix; fails on labels 7 and `INFINITY`.
pub fn exact_cosine_matrix(m: &SmallCoxeterMatrix) -> Result<Vec<Vec<AlgebraicReal>>> {
    let n = m.rank();
    let mut rows = vec![vec![AlgebraicReal::zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = if i == j {
                AlgebraicReal::one()
            } else {
                cosine_entry(m.get(i, j))?
            };
        }
    }
    Ok(rows)
}

/// Determinant of a small dense matrix in doubles by partial pivoting.
pub(crate) fn det_f64(a: &mut [f64], n: usize) -> f64 {
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&x, &y| a[x * n + c].abs().total_cmp(&a[y * n + c].abs()))
            .unwrap();
        if a[p * n + c] == 0.0 {
            return 0.0;
        }
        if p != c {
            for k in 0..n {
                a.swap(p * n + k, c * n + k);
            }
            det = -det;
        }
        let piv = a[c * n + c];
        det *= piv;
        for r in c + 1..n {
            let f = a[r * n + c] / piv;
            if f != 0.0 {
                for k in c..n {
                    a[r * n + k] -= f * a[c * n + k];
                }
            }
        }
    }
    det
}

/// Below this magnitude the float determinant of a cosine matrix is not
/// trusted. Entries lie in `[-1, 1]` and `n ≤ 8`, so rounding error of the
/// elimination is below `1e-12`.
const FLOAT_SIGN_THRESHOLD: f64 = 1e-9;

/// Sign of the determinant of the cosine matrix of a 7-free diagram.
///
/// A float evaluation decides signs far from zero; anything close to zero is
/// settled in exact arithmetic.
pub fn cosine_det_sign(m: &SmallCoxeterMatrix) -> Ordering {
    let n = m.rank();
    let mut a = m.cosine_matrix_f64();
    let d = det_f64(&mut a, n);
    if d.abs() > FLOAT_SIGN_THRESHOLD {
        return d.partial_cmp(&0.0).unwrap();
    }
    let rows = exact_cosine_matrix(m).expect("exact labels only");
    AlgebraicReal::determinant(&rows).signum()
}

fn component_is_elliptic(m: &SmallCoxeterMatrix) -> bool {
    // I2(k) is elliptic for every k; a label ≥ 7 inside a larger connected
    // diagram never is (connected elliptic diagrams of rank ≥ 3 have labels ≤ 5).
    if m.has_seven() {
        return m.rank() == 2;
    }
    (1..=m.rank()).all(|k| {
        let lead: Vec<usize> = (0..k).collect();
        cosine_det_sign(&m.submatrix(&lead)) == Ordering::Greater
    })
}

/// Whether a diagram without `INFINITY` entries is elliptic.
pub fn is_elliptic(m: &SmallCoxeterMatrix) -> bool {
    m.components()
        .iter()
        .all(|c| component_is_elliptic(&m.submatrix(c)))
}

fn classify_connected(m: &SmallCoxeterMatrix) -> DiagramClass {
    if component_is_elliptic(m) {
        return DiagramClass::Elliptic;
    }
    let r = m.rank();
    let proper_elliptic = (0..r).all(|skip| {
        let nodes: Vec<usize> = (0..r).filter(|&i| i != skip).collect();
        is_elliptic(&m.submatrix(&nodes))
    });
    if !proper_elliptic {
        return DiagramClass::Other;
    }
    if m.has_seven() {
        // Proper subdiagrams elliptic forces rank 3 here; no affine diagram
        // carries a label ≥ 7.
        return DiagramClass::Lanner;
    }
    match cosine_det_sign(m) {
        Ordering::Equal => DiagramClass::ConnectedParabolic,
        Ordering::Less => DiagramClass::Lanner,
        Ordering::Greater => DiagramClass::Elliptic,
    }
}

/// Classify a Coxeter diagram exactly. Label 7 is read as exactly 7.
pub fn classify_diagram(m: &SmallCoxeterMatrix) -> Result<DiagramClass> {
    if m.has_infinity() {
        return Err(Error::DivergentPair);
    }
    let comps = m.components();
    if comps.len() == 1 {
        return Ok(classify_connected(m));
    }
    let classes: Vec<DiagramClass> = comps
        .iter()
        .map(|c| classify_connected(&m.submatrix(c)))
        .collect();
    Ok(if classes.iter().all(|&c| c == DiagramClass::Elliptic) {
        DiagramClass::Elliptic
    } else if classes
        .iter()
        .all(|&c| c == DiagramClass::ConnectedParabolic)
    {
        DiagramClass::ReducibleParabolicSquare
    } else {
        DiagramClass::Other
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::parse_tuple;

    fn from(rank: usize, s: &str) -> SmallCoxeterMatrix {
        SmallCoxeterMatrix::from_tuple(rank, &parse_tuple(s).unwrap()).unwrap()
    }

    #[test]
    fn cosine_values() {
        let c5 = cosine_entry(CoxeterLabel::new(5).unwrap()).unwrap();
        assert!((c5.to_f64() + (std::f64::consts::PI / 5.0).cos()).abs() < 1e-15);
        let c6 = cosine_entry(CoxeterLabel::new(6).unwrap()).unwrap();
        assert_eq!(&c6 * &c6, AlgebraicReal::ratio(3, 4));
        assert!(cosine_entry(CoxeterLabel::SEVEN).is_err());
        assert!(cosine_entry(CoxeterLabel::INFINITY).is_err());
    }

    #[test]
    fn small_examples() {
        assert_eq!(
            classify_diagram(&SmallCoxeterMatrix::orthogonal(1)).unwrap(),
            DiagramClass::Elliptic
        );
        assert_eq!(
            classify_diagram(&from(3, "3,3,3")).unwrap(),
            DiagramClass::ConnectedParabolic
        );
        assert_eq!(
            classify_diagram(&SmallCoxeterMatrix::chain(&[5, 3, 5])).unwrap(),
            DiagramClass::Lanner
        );
        assert_eq!(
            classify_diagram(&SmallCoxeterMatrix::chain(&[5, 3, 3])).unwrap(),
            DiagramClass::Elliptic
        );
        assert_eq!(
            classify_diagram(&SmallCoxeterMatrix::chain(&[4, 4])).unwrap(),
            DiagramClass::ConnectedParabolic
        );
        assert_eq!(
            classify_diagram(&SmallCoxeterMatrix::chain(&[7, 3])).unwrap(),
            DiagramClass::Lanner
        );
        assert_eq!(
            classify_diagram(&SmallCoxeterMatrix::chain(&[7])).unwrap(),
            DiagramClass::Elliptic
        );
        assert!(classify_diagram(&from(2, "INF")).is_err());
    }

    #[test]
    fn e8_and_two_affine_components() {
        // E8: chain of 7 nodes with one extra node on the third.
        let mut e8 = SmallCoxeterMatrix::orthogonal(8);
        let three = CoxeterLabel::new(3).unwrap();
        for i in 0..6 {
            e8.set(i, i + 1, three);
        }
        e8.set(2, 7, three);
        assert_eq!(classify_diagram(&e8).unwrap(), DiagramClass::Elliptic);

        let mut squares = SmallCoxeterMatrix::orthogonal(6);
        squares.set(0, 1, three);
        squares.set(1, 2, three);
        squares.set(0, 2, three);
        let four = CoxeterLabel::new(4).unwrap();
        squares.set(3, 4, four);
        squares.set(4, 5, four);
        assert_eq!(
            classify_diagram(&squares).unwrap(),
            DiagramClass::ReducibleParabolicSquare
        );
    }

    #[test]
    fn permutation_invariance_on_rank4() {
        let m = SmallCoxeterMatrix::chain(&[5, 3, 5]);
        let perms = [[1, 0, 3, 2], [3, 1, 2, 0], [2, 3, 0, 1]];
        for p in perms {
            assert_eq!(
                classify_diagram(&m.permuted(&p)).unwrap(),
                DiagramClass::Lanner
            );
        }
    }
}
