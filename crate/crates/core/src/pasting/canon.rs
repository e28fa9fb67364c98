//! Reduction of potential vectors modulo the combinatorial symmetry group.

use rustc_hash::FxHashSet;

use super::{permute_row, PotentialVector};
use crate::polytope::Permutation;

/// Induced action of a facet permutation group on packed vectors.
#[derive(Clone, Debug)]
pub struct SymmetryCanon {
    maps: Vec<[usize; 28]>,
}

impl SymmetryCanon {
    pub fn new(group: &[Permutation]) -> Self {
        Self {
            maps: group.iter().map(Permutation::slot_map).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.maps.len()
    }

    /// Orbit of a packed row (with repetitions).
    pub fn orbit(&self, row: u128) -> impl Iterator<Item = u128> + '_ {
        self.maps.iter().map(move |m| permute_row(row, m))
    }

    /// Lexicographically least image of a packed row.
    pub fn canon_row(&self, row: u128) -> u128 {
        self.orbit(row).min().unwrap_or(row)
    }
}

/// Lexicographically least image of `v` under the group.
pub fn canonical_form(v: PotentialVector, canon: &SymmetryCanon) -> PotentialVector {
    PotentialVector::from_packed(canon.canon_row(v.packed()))
}

/// One representative per orbit, sorted. Each representative is the least
/// image of its orbit, whether or not that image was in the input.
pub fn canonicalize(vectors: &[PotentialVector], canon: &SymmetryCanon) -> Vec<PotentialVector> {
    let rows: Vec<u128> = vectors.iter().map(PotentialVector::packed).collect();
    canonicalize_rows(&rows, canon)
        .into_iter()
        .map(PotentialVector::from_packed)
        .collect()
}

pub(crate) fn canonicalize_rows(rows: &[u128], canon: &SymmetryCanon) -> Vec<u128> {
    let mut remaining: FxHashSet<u128> = rows.iter().copied().collect();
    let mut sorted: Vec<u128> = remaining.iter().copied().collect();
    sorted.sort_unstable();
    let mut out = Vec::new();
    for r in sorted {
        if !remaining.contains(&r) {
            continue;
        }
        let mut least = r;
        for img in canon.orbit(r) {
            remaining.remove(&img);
            least = least.min(img);
        }
        out.push(least);
    }
    out.sort_unstable();
    out.dedup();
    out
}
