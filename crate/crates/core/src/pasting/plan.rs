//! Blocks, chunk ordering and the placement of saving/killing conditions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{extract_key, shift, slots_mask};
use crate::catalog::{CatalogSet, VectorCatalog};
use crate::error::{Error, Result};
use crate::label::lex_pairs;
use crate::polytope::{PairIndex, PolytopeData};

/// Enumeration mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// All potential vectors.
    Direct,
    /// Vectors with every simplex facet of the l4 basis orthogonal to its
    /// four neighbours; the rest is recovered by gluing prisms.
    Basis,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Direct => "direct",
            Mode::Basis => "basis",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Mode::Direct),
            "basis" => Ok(Mode::Basis),
            _ => Err(Error::Parse(format!("unknown mode `{s}`"))),
        }
    }
}

/// Candidate labelings of one vertex, placed at its six pair slots.
#[derive(Clone, Debug)]
pub struct Block {
    pub chunk_index: usize,
    pub chunk: [u8; 4],
    /// Slots of the chunk's pairs in lexicographic pair order.
    pub label_set: [usize; 6],
    pub rows: Vec<u128>,
}

impl Block {
    pub fn mask(&self) -> u128 {
        slots_mask(&self.label_set)
    }
}

/// Slots of the lexicographic pairs of a facet list.
pub fn pair_slots(facets: &[u8]) -> Vec<usize> {
    lex_pairs(facets.len())
        .map(|(a, b)| PairIndex::slot(facets[a], facets[b]))
        .collect()
}

/// Greedy order: next chunk shares the most slots with those already placed;
/// ties go to the earlier chunk of the listing.
pub fn chunk_order(p: &PolytopeData) -> Vec<usize> {
    let sets: Vec<u128> = p.chunks.iter().map(|c| slots_mask(&pair_slots(c))).collect();
    let mut determined = slots_mask(&p.disjoint_slots());
    let mut order = Vec::with_capacity(sets.len());
    let mut used = vec![false; sets.len()];
    for _ in 0..sets.len() {
        let next = (0..sets.len())
            .filter(|&i| !used[i])
            .max_by_key(|&i| ((sets[i] & determined).count_ones(), std::cmp::Reverse(i)))
            .unwrap();
        used[next] = true;
        determined |= sets[next];
        order.push(next);
    }
    order
}

/// Slots pinned to label 2 in basis mode.
pub fn basis_pins(p: &PolytopeData) -> Vec<usize> {
    let mut pins: Vec<usize> = p
        .derived
        .l4_basis
        .iter()
        .flat_map(|(b, q)| q.iter().map(move |&f| PairIndex::slot(*b, f)))
        .collect();
    pins.sort_unstable();
    pins.dedup();
    pins
}

/// One block per chunk in the given order, rows drawn from the pre-block
/// (the rank-4 elliptic catalog). Rows violating a pinned slot are dropped.
pub fn build_blocks(
    p: &PolytopeData,
    pre_block: &VectorCatalog,
    order: &[usize],
    pins: &[usize],
) -> Vec<Block> {
    order
        .iter()
        .map(|&ci| {
            let chunk = p.chunks[ci];
            let slots = pair_slots(&chunk);
            let label_set: [usize; 6] = slots.clone().try_into().expect("six pairs");
            let rows = pre_block
                .packed()
                .iter()
                .map(|&key| {
                    (0..6).fold(0u128, |r, k| {
                        let code = (key >> (4 * (5 - k))) & 0xf;
                        r | (code as u128) << shift(label_set[k])
                    })
                })
                .filter(|&row| {
                    pins.iter()
                        .all(|&s| !label_set.contains(&s) || super::nibble(row, s) == 2)
                })
                .collect();
            Block {
                chunk_index: ci,
                chunk,
                label_set,
                rows,
            }
        })
        .collect()
}

/// Kinds of obstruction tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConditionKind {
    /// Must be a Lannér diagram.
    L4Saving,
    /// Must not be elliptic (rank in the payload).
    SKilling(usize),
    /// Must not be connected parabolic (rank in the payload).
    EKilling(usize),
    /// Must not be a Euclidean rectangle.
    I2Killing,
}

/// A test on the labels of a facet tuple, run once all its slots are known.
#[derive(Clone, Debug, Serialize)]
pub struct Condition {
    pub kind: ConditionKind,
    pub facets: Vec<u8>,
    /// Slots in the catalog's pair order for `facets`.
    pub slots: Vec<usize>,
    /// Number of pasted blocks after which every slot is determined.
    pub layer: usize,
}

impl Condition {
    fn new(kind: ConditionKind, facets: Vec<u8>) -> Self {
        let slots = pair_slots(&facets);
        Self {
            kind,
            facets,
            slots,
            layer: 0,
        }
    }

    fn catalog<'a>(&self, cats: &'a CatalogSet) -> &'a VectorCatalog {
        match self.kind {
            ConditionKind::L4Saving => cats.lanner4(),
            ConditionKind::SKilling(r) => cats.elliptic(r),
            ConditionKind::EKilling(r) => cats.parabolic(r),
            ConditionKind::I2Killing => cats.square(),
        }
    }

    /// Whether a row with all of this condition's slots determined passes.
    #[inline]
    pub fn holds(&self, row: u128, cats: &CatalogSet) -> bool {
        let hit = self.catalog(cats).contains_packed(extract_key(row, &self.slots));
        match self.kind {
            ConditionKind::L4Saving => hit,
            _ => !hit,
        }
    }
}

/// Every saving and killing condition of the polytope, each assigned to the
/// earliest layer of `order` at which its slots are determined. Slots of
/// disjoint pairs count as determined from the start.
pub fn plan_conditions(p: &PolytopeData, order: &[usize], l4_saving: bool) -> Vec<Condition> {
    let d = &p.derived;
    let mut out = Vec::new();
    if l4_saving {
        out.extend(d.l4.iter().map(|q| Condition::new(ConditionKind::L4Saving, q.clone())));
    }
    for (sets, rank) in [(&d.s3, 3), (&d.s4, 4), (&d.se5, 5), (&d.se6, 6)] {
        out.extend(sets.iter().map(|s| Condition::new(ConditionKind::SKilling(rank), s.clone())));
    }
    for (sets, rank) in [(&d.e3, 3), (&d.e4, 4), (&d.se5, 5), (&d.se6, 6)] {
        out.extend(sets.iter().map(|s| Condition::new(ConditionKind::EKilling(rank), s.clone())));
    }
    out.extend(
        d.i2.iter()
            .map(|t| Condition::new(ConditionKind::I2Killing, t.to_vec())),
    );

    let mut determined = vec![slots_mask(&p.disjoint_slots())];
    for &ci in order {
        let m = slots_mask(&pair_slots(&p.chunks[ci]));
        determined.push(determined.last().unwrap() | m);
    }
    for c in &mut out {
        let need = slots_mask(&c.slots);
        c.layer = (1..determined.len())
            .find(|&i| determined[i] & need == need)
            .expect("every non-disjoint pair lies in a chunk");
    }
    out
}
