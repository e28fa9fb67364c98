//! Enumeration of potential Coxeter vectors by joining per-vertex blocks.
//!
//! A row is a 28-entry vector packed into a `u128`, slot `p` in the nibble at
//! bit offset `4 * (27 - p)` so that integer order is lexicographic order.
//! Code `0` marks an undetermined entry.

mod canon;
mod join;
mod plan;

use std::fmt;
use std::str::FromStr;

pub use canon::{canonical_form, canonicalize, SymmetryCanon};
pub use join::{enumerate_raw, enumerate_seilper, paste, Enumeration, JoinState, PasteOptions, PasteStats};
pub use plan::{build_blocks, chunk_order, plan_conditions, Block, Condition, ConditionKind, Mode};

use crate::error::{Error, Result};
use crate::label::{parse_tuple, CoxeterLabel, SmallCoxeterMatrix};
use crate::polytope::{PairIndex, Permutation};

#[inline]
pub(crate) const fn shift(slot: usize) -> u32 {
    4 * (27 - slot as u32)
}

#[inline]
pub(crate) const fn slot_mask(slot: usize) -> u128 {
    0xf << shift(slot)
}

#[inline]
pub(crate) const fn nibble(row: u128, slot: usize) -> u8 {
    ((row >> shift(slot)) & 0xf) as u8
}

/// Mask covering all given slots.
pub(crate) fn slots_mask(slots: &[usize]) -> u128 {
    slots.iter().fold(0, |m, &s| m | slot_mask(s))
}

/// Catalog key of the entries at `slots`, in the given order.
#[inline]
pub(crate) fn extract_key(row: u128, slots: &[usize]) -> u64 {
    slots
        .iter()
        .fold(0u64, |k, &s| (k << 4) | nibble(row, s) as u64)
}

/// Image of a row under the induced slot permutation `map`.
#[inline]
pub(crate) fn permute_row(row: u128, map: &[usize; 28]) -> u128 {
    let mut out = 0u128;
    for (s, &t) in map.iter().enumerate() {
        out |= ((row >> shift(s)) & 0xf) << shift(t);
    }
    out
}

/// A fully determined vector of 28 labels over the facet pairs.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PotentialVector(u128);

impl PotentialVector {
    /// Wrap a packed row; panics if any entry is undetermined.
    pub fn from_packed(row: u128) -> Self {
        assert!(
            (0..28).all(|s| nibble(row, s) != 0),
            "potential vector with undetermined entries"
        );
        Self(row)
    }

    pub fn from_labels(labels: &[CoxeterLabel]) -> Result<Self> {
        if labels.len() != 28 {
            return Err(Error::TupleLength {
                rank: 8,
                len: labels.len(),
            });
        }
        Ok(Self(labels.iter().enumerate().fold(0u128, |r, (s, l)| {
            r | (l.code() as u128) << shift(s)
        })))
    }

    pub fn packed(&self) -> u128 {
        self.0
    }

    /// Label of the pair `{i, j}`, 1-based.
    pub fn get(&self, i: u8, j: u8) -> CoxeterLabel {
        self.at(PairIndex::slot(i, j))
    }

    pub fn at(&self, slot: usize) -> CoxeterLabel {
        CoxeterLabel::from_code(nibble(self.0, slot))
    }

    pub fn labels(&self) -> [CoxeterLabel; 28] {
        std::array::from_fn(|s| self.at(s))
    }

    /// Coxeter matrix on all eight facets.
    pub fn matrix(&self) -> SmallCoxeterMatrix {
        SmallCoxeterMatrix::from_tuple(8, &self.labels()).expect("28 labels")
    }

    /// Induced diagram on the given facets (1-based), in the given order.
    pub fn restrict(&self, facets: &[u8]) -> SmallCoxeterMatrix {
        let nodes: Vec<usize> = facets.iter().map(|&f| (f - 1) as usize).collect();
        self.matrix().submatrix(&nodes)
    }

    /// Relabel facets by `sigma`.
    pub fn permuted(&self, sigma: &Permutation) -> Self {
        Self(permute_row(self.0, &sigma.slot_map()))
    }

    /// Slots carrying the given label.
    pub fn slots_with(&self, label: CoxeterLabel) -> Vec<usize> {
        (0..28).filter(|&s| self.at(s) == label).collect()
    }
}

impl fmt::Display for PotentialVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in 0..28 {
            if s > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.at(s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PotentialVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PotentialVector({self})")
    }
}

impl FromStr for PotentialVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_labels(&parse_tuple(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_is_lexicographic() {
        let a: PotentialVector = "2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,7"
            .parse()
            .unwrap();
        let b: PotentialVector = "2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,3,2"
            .parse()
            .unwrap();
        assert!(a < b);
        assert_eq!(a.to_string().parse::<PotentialVector>().unwrap(), a);
        assert_eq!(a.get(7, 8), CoxeterLabel::SEVEN);
    }

    #[test]
    fn permute_row_matches_matrix_relabeling() {
        let v: PotentialVector = "3,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,2,5"
            .parse()
            .unwrap();
        let sigma = Permutation([8, 7, 3, 4, 5, 6, 2, 1]);
        let w = v.permuted(&sigma);
        assert_eq!(w.get(8, 7), CoxeterLabel::new(3).unwrap());
        assert_eq!(w.get(2, 1), CoxeterLabel::new(5).unwrap());
    }
}
