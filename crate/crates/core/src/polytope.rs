//! Vertex–facet incidences of simple 4-polytopes with eight facets and the
//! facet sets derived from them.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Number of facets handled throughout.
pub const FACETS: usize = 8;

/// Bijection between unordered facet pairs `{i, j}` (1-based) and the 28
/// slots of a potential vector, in lexicographic order.
#[derive(Clone, Copy, Debug, Default)]
pub struct PairIndex;

impl PairIndex {
    pub const SLOTS: usize = 28;

    /// Slot of the pair `{i, j}`, 1-based facets, either order.
    pub const fn slot(i: u8, j: u8) -> usize {
        assert!(i != j && i >= 1 && j >= 1 && i <= 8 && j <= 8);
        let (a, b) = if i < j { (i - 1, j - 1) } else { (j - 1, i - 1) };
        let (a, b) = (a as usize, b as usize);
        a * (15 - a) / 2 + (b - a - 1)
    }

    /// Pair at a slot, 1-based, ascending.
    pub fn pair(slot: usize) -> (u8, u8) {
        PAIRS[slot]
    }

    /// All 28 pairs in slot order.
    pub fn pairs() -> &'static [(u8, u8); 28] {
        &PAIRS
    }
}

const PAIRS: [(u8, u8); 28] = {
    let mut out = [(0u8, 0u8); 28];
    let mut k = 0;
    let mut i = 1u8;
    while i <= 8 {
        let mut j = i + 1;
        while j <= 8 {
            out[k] = (i, j);
            k += 1;
            j += 1;
        }
        i += 1;
    }
    out
};

/// Bitmask of a facet set: bit `f - 1` for facet `f`.
pub type FacetMask = u8;

pub fn mask_of(facets: &[u8]) -> FacetMask {
    facets.iter().fold(0, |m, &f| m | 1 << (f - 1))
}

pub fn facets_of(mask: FacetMask) -> Vec<u8> {
    (1..=8).filter(|f| mask & (1 << (f - 1)) != 0).collect()
}

/// All facet subsets of the given size as masks, in lexicographic order of
/// their sorted facet lists.
pub fn subsets(size: usize) -> Vec<FacetMask> {
    let mut out: Vec<FacetMask> = (0u16..256)
        .map(|m| m as u8)
        .filter(|m| m.count_ones() as usize == size)
        .collect();
    out.sort_by_key(|&m| facets_of(m));
    out
}

/// Facet permutation: facet `f` maps to `self.0[f - 1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Permutation(pub [u8; 8]);

impl Permutation {
    pub const IDENTITY: Self = Self([1, 2, 3, 4, 5, 6, 7, 8]);

    pub fn apply(&self, f: u8) -> u8 {
        self.0[(f - 1) as usize]
    }

    pub fn apply_mask(&self, m: FacetMask) -> FacetMask {
        facets_of(m)
            .into_iter()
            .fold(0, |acc, f| acc | 1 << (self.apply(f) - 1))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Self(std::array::from_fn(|i| self.apply(other.0[i])))
    }

    pub fn inverse(&self) -> Self {
        let mut out = [0u8; 8];
        for (i, &v) in self.0.iter().enumerate() {
            out[(v - 1) as usize] = i as u8 + 1;
        }
        Self(out)
    }

    /// Induced permutation of the 28 pair slots: slot `s` maps to `out[s]`.
    pub fn slot_map(&self) -> [usize; 28] {
        std::array::from_fn(|s| {
            let (i, j) = PairIndex::pair(s);
            PairIndex::slot(self.apply(i), self.apply(j))
        })
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for v in self.0 {
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Facet sets derived from the incidence data.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DerivedSets {
    pub disjoint_pairs: Vec<(u8, u8)>,
    pub e3: Vec<Vec<u8>>,
    pub e4: Vec<Vec<u8>>,
    pub se5: Vec<Vec<u8>>,
    pub se6: Vec<Vec<u8>>,
    pub s3: Vec<Vec<u8>>,
    pub s4: Vec<Vec<u8>>,
    pub l4: Vec<Vec<u8>>,
    pub l4_basis: Vec<(u8, Vec<u8>)>,
    pub i2: Vec<[u8; 4]>,
}

/// A simple 4-polytope with eight facets, as its list of vertices ("chunks"),
/// each vertex given by the four facets through it.
#[derive(Clone, Debug, Serialize)]
pub struct PolytopeData {
    pub label: u32,
    pub chunks: Vec<[u8; 4]>,
    pub derived: DerivedSets,
    pub symmetry_group: Vec<Permutation>,
}

impl PolytopeData {
    /// Parse and derive everything.
    pub fn parse(text: &str) -> Result<Self> {
        let (label, chunks) = parse_polytope(text)?;
        Ok(Self::from_chunks(label, chunks))
    }

    /// Derive sets and symmetry group of already validated chunks.
    pub fn from_chunks(label: u32, chunks: Vec<[u8; 4]>) -> Self {
        let disjoint = derive_disjoint_pairs(&chunks);
        let derived = derive_sets(&chunks, &disjoint).expect("validated chunks");
        let symmetry_group = compute_symmetry_group(&chunks);
        Self {
            label,
            chunks,
            derived,
            symmetry_group,
        }
    }

    pub fn chunk_masks(&self) -> Vec<FacetMask> {
        self.chunks.iter().map(|c| mask_of(c)).collect()
    }

    /// Slots of the disjoint pairs.
    pub fn disjoint_slots(&self) -> Vec<usize> {
        self.derived
            .disjoint_pairs
            .iter()
            .map(|&(i, j)| PairIndex::slot(i, j))
            .collect()
    }

    /// Listing in the dataset text format.
    pub fn listing(&self) -> String {
        let body: Vec<String> = self
            .chunks
            .iter()
            .map(|c| format!("[{},{},{},{}]", c[0], c[1], c[2], c[3]))
            .collect();
        format!("P{}: {}", self.label, body.join(" "))
    }
}

/// Parse one listing `"[a,b,c,d] [a,b,c,d] …"`, optionally prefixed by
/// `"P<k>:"`. Chunks are sorted internally and deduplicated, keeping the
/// order of first occurrence.
pub fn parse_polytope(text: &str) -> Result<(u32, Vec<[u8; 4]>)> {
    let text = text.split('#').next().unwrap_or("").trim();
    let (label, body) = match text.split_once(':') {
        Some((head, body)) => {
            let head = head.trim();
            let num = head
                .strip_prefix('P')
                .or_else(|| head.strip_prefix('p'))
                .ok_or_else(|| Error::Parse(format!("bad label `{head}`")))?;
            let k: u32 = num
                .trim_start_matches('_')
                .parse()
                .map_err(|_| Error::Parse(format!("bad label `{head}`")))?;
            (k, body)
        }
        None => (0, text),
    };
    let mut chunks: Vec<[u8; 4]> = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let open = rest
            .strip_prefix('[')
            .ok_or_else(|| Error::Parse(format!("expected `[` at `{rest}`")))?;
        let close = open
            .find(']')
            .ok_or_else(|| Error::Parse("unclosed `[`".into()))?;
        let inner = &open[..close];
        let mut facets = Vec::new();
        for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let f: u8 = tok
                .parse()
                .map_err(|_| Error::BadIndex(tok.to_string()))?;
            if !(1..=8).contains(&f) {
                return Err(Error::BadIndex(tok.to_string()));
            }
            facets.push(f);
        }
        facets.sort_unstable();
        facets.dedup();
        if facets.len() != 4 {
            return Err(Error::NotSimple(format!("[{inner}]")));
        }
        let c = [facets[0], facets[1], facets[2], facets[3]];
        if !chunks.contains(&c) {
            chunks.push(c);
        }
        rest = open[close + 1..].trim_start();
    }
    validate_chunks(&chunks)?;
    Ok((label, chunks))
}

/// Structural checks for the chunk list of a simple 4-polytope.
pub fn validate_chunks(chunks: &[[u8; 4]]) -> Result<()> {
    let masks: Vec<FacetMask> = chunks.iter().map(|c| mask_of(c)).collect();
    for f in 1..=8u8 {
        if !masks.iter().any(|m| m & (1 << (f - 1)) != 0) {
            return Err(Error::MissingFacet(f));
        }
    }
    for c in chunks {
        for skip in 0..4 {
            let triple: Vec<u8> = (0..4).filter(|&k| k != skip).map(|k| c[k]).collect();
            let t = mask_of(&triple);
            let count = masks.iter().filter(|&&m| m & t == t).count();
            if count != 2 {
                return Err(Error::InconsistentEdgeFigure {
                    triple: [triple[0], triple[1], triple[2]],
                    count,
                });
            }
        }
    }
    Ok(())
}

/// Facet pairs lying in no common chunk.
pub fn derive_disjoint_pairs(chunks: &[[u8; 4]]) -> Vec<(u8, u8)> {
    let masks: Vec<FacetMask> = chunks.iter().map(|c| mask_of(c)).collect();
    PAIRS
        .iter()
        .copied()
        .filter(|&(i, j)| {
            let p = mask_of(&[i, j]);
            !masks.iter().any(|m| m & p == p)
        })
        .collect()
}

/// Derive e3, e4, se5, se6, s3, s4, l4, the l4 basis and i2.
pub fn derive_sets(chunks: &[[u8; 4]], disjoint: &[(u8, u8)]) -> Result<DerivedSets> {
    let masks: Vec<FacetMask> = chunks.iter().map(|c| mask_of(c)).collect();
    let bad: Vec<FacetMask> = disjoint.iter().map(|&(i, j)| mask_of(&[i, j])).collect();
    let free = |m: FacetMask| !bad.iter().any(|&b| m & b == b);
    let in_chunk = |m: FacetMask| masks.iter().any(|&c| c & m == m);
    let free_sets = |size| -> Vec<FacetMask> { subsets(size).into_iter().filter(|&m| free(m)).collect() };

    let e3 = free_sets(3);
    let e4 = free_sets(4);
    let s3: Vec<FacetMask> = e3.iter().copied().filter(|&m| !in_chunk(m)).collect();
    let s4: Vec<FacetMask> = e4.iter().copied().filter(|&m| !masks.contains(&m)).collect();
    let l4: Vec<FacetMask> = s4
        .iter()
        .copied()
        .filter(|&q| {
            facets_of(q)
                .iter()
                .all(|&f| in_chunk(q & !(1 << (f - 1))))
        })
        .collect();

    let mut l4_basis = Vec::new();
    for b in 1..=8u8 {
        let bit = 1 << (b - 1);
        let around: Vec<FacetMask> = masks.iter().copied().filter(|m| m & bit != 0).collect();
        if around.len() == 4 {
            let q = around.iter().fold(0, |acc, m| acc | m) & !bit;
            if q.count_ones() == 4 {
                l4_basis.push((b, facets_of(q)));
            }
        }
    }

    let mut i2 = Vec::new();
    for &(i, j) in PAIRS.iter() {
        let p = mask_of(&[i, j]);
        let verts: Vec<FacetMask> = masks.iter().copied().filter(|m| m & p == p).collect();
        if verts.len() != 4 {
            continue;
        }
        let adjacent = |a: FacetMask, b: FacetMask| (a & b).count_ones() == 3;
        let mut cycle = vec![0usize];
        while cycle.len() < 4 {
            let last = *cycle.last().unwrap();
            let next = (0..4).find(|&k| !cycle.contains(&k) && adjacent(verts[last], verts[k]));
            match next {
                Some(k) => cycle.push(k),
                None => return Err(Error::Degenerate2Face(i, j)),
            }
        }
        if !adjacent(verts[cycle[3]], verts[cycle[0]])
            || (0..4).any(|k| {
                (0..4)
                    .filter(|&l| l != k && adjacent(verts[k], verts[l]))
                    .count()
                    != 2
            })
        {
            return Err(Error::Degenerate2Face(i, j));
        }
        let third = |a: usize, b: usize| {
            let m = verts[a] & verts[b] & !p;
            m.trailing_zeros() as u8 + 1
        };
        let t = [
            third(cycle[0], cycle[1]),
            third(cycle[1], cycle[2]),
            third(cycle[2], cycle[3]),
            third(cycle[3], cycle[0]),
        ];
        // Only quadrilaterals whose opposite side facets diverge can close up
        // into a Euclidean square; for the others the test is vacuous.
        let diverge = |a: u8, b: u8| bad.contains(&mask_of(&[a, b]));
        if !(diverge(t[0], t[2]) && diverge(t[1], t[3])) {
            continue;
        }
        let t = normalize_cycle(t);
        if !i2.contains(&t) {
            i2.push(t);
        }
    }
    i2.sort_unstable();

    let list = |v: &[FacetMask]| v.iter().map(|&m| facets_of(m)).collect::<Vec<_>>();
    Ok(DerivedSets {
        disjoint_pairs: disjoint.to_vec(),
        e3: list(&e3),
        e4: list(&e4),
        se5: list(&free_sets(5)),
        se6: list(&free_sets(6)),
        s3: list(&s3),
        s4: list(&s4),
        l4: list(&l4),
        l4_basis,
        i2,
    })
}

/// Rotate a cyclic 4-tuple to start at its minimum, walking towards the
/// smaller neighbour.
pub fn normalize_cycle(t: [u8; 4]) -> [u8; 4] {
    let start = (0..4).min_by_key(|&k| t[k]).unwrap();
    let fwd: [u8; 4] = std::array::from_fn(|k| t[(start + k) % 4]);
    let bwd: [u8; 4] = std::array::from_fn(|k| t[(start + 4 - k) % 4]);
    fwd.min(bwd)
}

/// Every facet permutation mapping the chunk set onto itself.
pub fn compute_symmetry_group(chunks: &[[u8; 4]]) -> Vec<Permutation> {
    let mut is_chunk = [false; 256];
    for c in chunks {
        is_chunk[mask_of(c) as usize] = true;
    }
    let masks: Vec<FacetMask> = chunks.iter().map(|c| mask_of(c)).collect();
    let mut out = Vec::new();
    let mut perm = [0u8; 8];
    let mut used = [false; 9];
    search(0, &mut perm, &mut used, &masks, &is_chunk, &mut out);
    out.sort_unstable();
    out
}

fn search(
    k: usize,
    perm: &mut [u8; 8],
    used: &mut [bool; 9],
    masks: &[FacetMask],
    is_chunk: &[bool; 256],
    out: &mut Vec<Permutation>,
) {
    if k == 8 {
        out.push(Permutation(*perm));
        return;
    }
    for v in 1..=8u8 {
        if used[v as usize] {
            continue;
        }
        perm[k] = v;
        // Chunks whose largest facet is k + 1 are now fully mapped.
        let ok = masks.iter().all(|&m| {
            if 8 - m.leading_zeros() as usize != k + 1 {
                return true;
            }
            let img = facets_of(m)
                .iter()
                .fold(0u8, |acc, &f| acc | 1 << (perm[(f - 1) as usize] - 1));
            is_chunk[img as usize]
        });
        if ok {
            used[v as usize] = true;
            search(k + 1, perm, used, masks, is_chunk, out);
            used[v as usize] = false;
        }
    }
}

/// Parse a dataset file: one `P<k>: …` listing per line, `#` comments.
pub fn parse_dataset(text: &str) -> Result<Vec<PolytopeData>> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(PolytopeData::parse)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const P1: &str = "[1,2,4,5] [1,2,3,4] [1,3,4,5] [1,3,5,6] [2,3,5,6] [1,2,3,7] \
        [1,2,6,7] [1,2,5,8] [1,2,6,8] [2,3,4,5] [1,3,6,7] [2,3,6,7] [1,5,6,8] [2,5,6,8]";

    #[test]
    fn pair_index_is_lexicographic() {
        for (s, &(i, j)) in PairIndex::pairs().iter().enumerate() {
            assert_eq!(PairIndex::slot(i, j), s);
            assert_eq!(PairIndex::slot(j, i), s);
        }
        assert_eq!(PairIndex::slot(1, 2), 0);
        assert_eq!(PairIndex::slot(7, 8), 27);
    }

    #[test]
    fn p1_ledger() {
        let p = PolytopeData::parse(&format!("P1: {P1}")).unwrap();
        let d = &p.derived;
        assert_eq!(p.chunks.len(), 14);
        assert_eq!(
            d.disjoint_pairs,
            vec![(3, 8), (4, 6), (4, 7), (4, 8), (5, 7), (7, 8)]
        );
        assert_eq!(d.e3.len(), 28);
        assert_eq!(d.e4.len(), 17);
        assert!(d.s3.is_empty());
        assert_eq!(d.s4, vec![vec![1, 2, 3, 5], vec![1, 2, 3, 6], vec![1, 2, 5, 6]]);
        assert_eq!(d.l4, d.s4);
        assert_eq!(
            d.l4_basis,
            vec![
                (4, vec![1, 2, 3, 5]),
                (7, vec![1, 2, 3, 6]),
                (8, vec![1, 2, 5, 6])
            ]
        );
        assert!(d.i2.is_empty());
        assert!(d.se6.is_empty());
        assert_eq!(p.symmetry_group.len(), 12);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_polytope("[1,2,3]"), Err(Error::NotSimple(_))));
        assert!(matches!(parse_polytope("[1,2,3,9]"), Err(Error::BadIndex(_))));
        assert!(matches!(
            parse_polytope("[1,2,3,4] [1,2,3,5]"),
            Err(Error::MissingFacet(_)) | Err(Error::InconsistentEdgeFigure { .. })
        ));
    }

    #[test]
    fn duplicates_are_dropped() {
        let (_, a) = parse_polytope(P1).unwrap();
        let (_, b) = parse_polytope(&format!("{P1} [5,4,2,1]")).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn permutation_algebra() {
        let p = Permutation([2, 3, 1, 4, 5, 6, 8, 7]);
        assert_eq!(p.compose(&p.inverse()), Permutation::IDENTITY);
        let map = p.slot_map();
        assert_eq!(map[PairIndex::slot(1, 2)], PairIndex::slot(2, 3));
    }
}
