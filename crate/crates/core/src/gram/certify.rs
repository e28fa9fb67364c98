//! Signature, face-structure verification and Lorentzian realization.

use nalgebra::{DMatrix, SymmetricEigen};

use super::{GramMatrix, SolvedGram};
use crate::error::{Error, Result};
use crate::polytope::PolytopeData;

/// Eigenvalues this close to zero count as zero in face tests.
const FACE_TOLERANCE: f64 = 1e-9;

/// Signature `(positive, negative)` of a rank-5 Gram matrix: the three
/// eigenvalues nearest zero must lie within `tol` of it and the other five
/// at least `tol` away. `None` if the rank is not 5 in that sense.
pub fn signature_with(g: &GramMatrix, tol: f64) -> Option<(usize, usize)> {
    let mut ev: Vec<f64> = SymmetricEigen::new(g.to_nalgebra()).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    if ev[..3].iter().any(|v| v.abs() > tol) || ev[3..].iter().any(|v| v.abs() <= tol) {
        return None;
    }
    Some((
        ev[3..].iter().filter(|&&v| v > 0.0).count(),
        ev[3..].iter().filter(|&&v| v < 0.0).count(),
    ))
}

/// Signature with the default separation `1e-6`.
pub fn signature(g: &GramMatrix) -> Option<(usize, usize)> {
    signature_with(g, 1e-6)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Definiteness {
    Positive,
    Degenerate,
    Indefinite,
}

fn definiteness(g: &GramMatrix, idx: &[usize]) -> Definiteness {
    let n = idx.len();
    let m = DMatrix::from_row_slice(n, n, &g.principal(idx));
    let min = m
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min > FACE_TOLERANCE {
        Definiteness::Positive
    } else if min < -FACE_TOLERANCE {
        Definiteness::Indefinite
    } else {
        Definiteness::Degenerate
    }
}

/// Whether a solution is the Gram matrix of a compact polytope of type `p`:
/// signature (4,1), acute angles, a facet set spans a face exactly when its
/// Gram submatrix is positive definite, and no principal submatrix is
/// degenerate positive semidefinite.
pub fn verify(s: &SolvedGram, p: &PolytopeData) -> bool {
    if signature(&s.values) != Some((4, 1)) {
        return false;
    }
    if (0..8).any(|i| (0..8).any(|j| i != j && s.values.get(i, j) > 1e-12)) {
        return false;
    }
    let chunks = p.chunk_masks();
    (1u16..256).all(|mask| {
        let mask = mask as u8;
        let idx: Vec<usize> = (0..8).filter(|&b| mask >> b & 1 == 1).collect();
        let face = chunks.iter().any(|&c| c & mask == mask);
        match definiteness(&s.values, &idx) {
            Definiteness::Positive => face,
            Definiteness::Indefinite => !face,
            Definiteness::Degenerate => false,
        }
    })
}

/// Outward unit normals in `R^{4,1}` with form `diag(1, 1, 1, 1, -1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub normals: [[f64; 5]; 8],
}

impl Realization {
    /// Lorentzian inner product.
    pub fn form(a: &[f64; 5], b: &[f64; 5]) -> f64 {
        a[..4].iter().zip(&b[..4]).map(|(x, y)| x * y).sum::<f64>() - a[4] * b[4]
    }

    pub fn inner(&self, i: usize, j: usize) -> f64 {
        Self::form(&self.normals[i], &self.normals[j])
    }

    /// Gram matrix of the normals.
    pub fn gram(&self) -> GramMatrix {
        let mut m = GramMatrix::identity();
        for i in 0..8 {
            for j in 0..8 {
                m.0[i][j] = self.inner(i, j);
            }
        }
        m
    }
}

/// Rank-5 factorization of a signature-(4,1) Gram matrix.
pub fn realize(s: &SolvedGram) -> Result<Realization> {
    realize_matrix(&s.values)
}

pub(crate) fn realize_matrix(g: &GramMatrix) -> Result<Realization> {
    match signature(g) {
        Some((4, 1)) => {}
        other => return Err(Error::NotLorentzian(format!("signature {other:?}"))),
    }
    let eig = SymmetricEigen::new(g.to_nalgebra());
    let mut order: Vec<usize> = (0..8).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    // four largest positive, then the single negative (the smallest)
    let cols = [order[0], order[1], order[2], order[3], order[7]];
    let mut normals = [[0.0; 5]; 8];
    for (c, &k) in cols.iter().enumerate() {
        let w = eig.eigenvalues[k].abs().sqrt();
        for (i, n) in normals.iter_mut().enumerate() {
            n[c] = w * eig.eigenvectors[(i, k)];
        }
    }
    Ok(Realization { normals })
}
