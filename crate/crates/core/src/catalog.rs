//! Obstruction catalogs of small Coxeter diagrams.
//!
//! Catalogs hold label tuples over the lexicographic pairs of `rank` nodes,
//! closed under node relabeling, packed as nibble codes into a `u64`.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::diagram::cosine_det_sign;
use crate::error::{Error, Result};
use crate::label::{
    format_tuple, lex_pairs, pack_codes, pair_count, parse_tuple, CoxeterLabel,
    SmallCoxeterMatrix,
};

/// Format tag written as the first line of cache files.
pub const CACHE_FORMAT: &str = "hypercox-catalogs v1";

/// A set of label tuples of one rank with O(1) membership.
#[derive(Clone)]
pub struct VectorCatalog {
    name: String,
    rank: usize,
    sorted: Vec<u64>,
    set: FxHashSet<u64>,
}

impl VectorCatalog {
    pub fn from_packed(name: impl Into<String>, rank: usize, mut keys: Vec<u64>) -> Self {
        keys.sort_unstable();
        keys.dedup();
        let set = keys.iter().copied().collect();
        Self {
            name: name.into(),
            rank,
            sorted: keys,
            set,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn contains_packed(&self, key: u64) -> bool {
        self.set.contains(&key)
    }

    pub fn contains(&self, tuple: &[CoxeterLabel]) -> bool {
        tuple.len() == pair_count(self.rank)
            && self.contains_packed(pack_codes(tuple.iter().map(|l| l.code())))
    }

    pub fn contains_matrix(&self, m: &SmallCoxeterMatrix) -> bool {
        m.rank() == self.rank && self.contains_packed(m.packed())
    }

    /// Packed keys in ascending (lexicographic tuple) order.
    pub fn packed(&self) -> &[u64] {
        &self.sorted
    }

    /// Tuples in lexicographic order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<CoxeterLabel>> + '_ {
        let len = pair_count(self.rank);
        self.sorted.iter().map(move |&k| unpack(k, len))
    }
}

impl std::fmt::Debug for VectorCatalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "VectorCatalog({} rank {}, {} vectors)", self.name, self.rank, self.len())
    }
}

/// Unpack `len` nibble codes produced by [`pack_codes`].
pub fn unpack(key: u64, len: usize) -> Vec<CoxeterLabel> {
    (0..len)
        .map(|i| CoxeterLabel::from_code(((key >> (4 * (len - 1 - i))) & 0xf) as u8))
        .collect()
}

/// Result of extending all elliptic diagrams of one rank by a node.
struct Extension {
    elliptic: Vec<u64>,
    parabolic: Vec<u64>,
    lanner: Vec<u64>,
}

fn subset_key(m: &SmallCoxeterMatrix, nodes: &[usize]) -> u64 {
    let mut key = 0u64;
    for (a, &i) in nodes.iter().enumerate() {
        for &j in &nodes[a + 1..] {
            key = (key << 4) | m.get(i, j).code() as u64;
        }
    }
    key
}

/// Extend every elliptic diagram of rank `r - 1` by a node `r - 1` in all ways
/// whose proper subdiagrams are elliptic, and sort the results by class.
fn extend(r: usize, elliptic: &[VectorCatalog]) -> Extension {
    let base = &elliptic[r - 1];
    let parts: Vec<Extension> = base
        .packed()
        .par_iter()
        .map(|&key| {
            let tuple = unpack(key, pair_count(r - 1));
            let small = SmallCoxeterMatrix::from_tuple(r - 1, &tuple).expect("catalog tuple");
            let mut m = SmallCoxeterMatrix::orthogonal(r);
            for (i, j) in lex_pairs(r - 1) {
                m.set(i, j, small.get(i, j));
            }
            let mut out = Extension {
                elliptic: Vec::new(),
                parabolic: Vec::new(),
                lanner: Vec::new(),
            };
            extend_node(&mut m, 0, elliptic, &mut out);
            out
        })
        .collect();
    let mut out = Extension {
        elliptic: Vec::new(),
        parabolic: Vec::new(),
        lanner: Vec::new(),
    };
    for p in parts {
        out.elliptic.extend(p.elliptic);
        out.parabolic.extend(p.parabolic);
        out.lanner.extend(p.lanner);
    }
    out
}

fn extend_node(m: &mut SmallCoxeterMatrix, k: usize, elliptic: &[VectorCatalog], out: &mut Extension) {
    let r = m.rank();
    let new = r - 1;
    if k == new {
        // Every (r-1)-subdiagram through the new node must be elliptic.
        for skip in 0..new {
            let nodes: Vec<usize> = (0..r).filter(|&i| i != skip).collect();
            if !elliptic[r - 1].contains_packed(subset_key(m, &nodes)) {
                return;
            }
        }
        classify_extension(m, out);
        return;
    }
    for l in CoxeterLabel::ANGLES {
        m.set(k, new, l);
        let size = k + 2;
        if (3..r).contains(&size) {
            let nodes: Vec<usize> = (0..=k).chain(std::iter::once(new)).collect();
            if !elliptic[size].contains_packed(subset_key(m, &nodes)) {
                continue;
            }
        }
        extend_node(m, k + 1, elliptic, out);
    }
    m.set(k, new, CoxeterLabel::RIGHT);
}

/// Classify a diagram all of whose proper subdiagrams are elliptic.
fn classify_extension(m: &SmallCoxeterMatrix, out: &mut Extension) {
    let key = m.packed();
    if m.components().len() > 1 {
        out.elliptic.push(key);
        return;
    }
    if m.has_seven() {
        // Only I2(7) is elliptic, and a connected triangle with a 7 is Lannér.
        match m.rank() {
            2 => out.elliptic.push(key),
            3 => out.lanner.push(key),
            _ => {}
        }
        return;
    }
    match cosine_det_sign(m) {
        std::cmp::Ordering::Greater => out.elliptic.push(key),
        std::cmp::Ordering::Equal => out.parabolic.push(key),
        std::cmp::Ordering::Less => out.lanner.push(key),
    }
}

/// All catalogs used by the enumeration.
#[derive(Clone, Debug)]
pub struct CatalogSet {
    /// Elliptic catalogs indexed by rank `0..=6` (ranks 0 and 1 hold the empty tuple).
    elliptic: Vec<VectorCatalog>,
    /// Connected parabolic catalogs indexed by rank (ranks 3..=6 populated).
    parabolic: Vec<VectorCatalog>,
    lanner4: VectorCatalog,
    square: VectorCatalog,
}

impl CatalogSet {
    /// Generate every catalog from scratch.
    pub fn generate() -> Self {
        let (mut elliptic, mut parabolic) = low_rank();
        let mut lanner4 = None;
        for r in 3..=6 {
            let ext = extend(r, &elliptic);
            elliptic.push(VectorCatalog::from_packed(format!("S{r}"), r, ext.elliptic));
            parabolic.push(VectorCatalog::from_packed(format!("E{r}"), r, ext.parabolic));
            if r == 4 {
                lanner4 = Some(VectorCatalog::from_packed("L4", 4, ext.lanner));
            }
        }
        Self {
            elliptic,
            parabolic,
            lanner4: lanner4.expect("rank 4 generated"),
            square: square_catalog(),
        }
    }

    pub fn elliptic(&self, rank: usize) -> &VectorCatalog {
        &self.elliptic[rank]
    }

    pub fn parabolic(&self, rank: usize) -> &VectorCatalog {
        assert!((3..=6).contains(&rank), "parabolic catalogs cover ranks 3..=6");
        &self.parabolic[rank]
    }

    pub fn lanner4(&self) -> &VectorCatalog {
        &self.lanner4
    }

    pub fn square(&self) -> &VectorCatalog {
        &self.square
    }

    /// Catalogs in cache order.
    pub fn all(&self) -> Vec<&VectorCatalog> {
        let mut v: Vec<&VectorCatalog> = self.elliptic[3..].iter().collect();
        v.extend(self.parabolic[3..].iter());
        v.push(&self.lanner4);
        v.push(&self.square);
        v
    }

    /// Serialize in the cache format.
    pub fn to_cache_string(&self) -> String {
        let mut s = format!("{CACHE_FORMAT}\n");
        for c in self.all() {
            writeln!(s, ">{} {} {}", c.name(), c.rank(), c.len()).unwrap();
            for t in c.tuples() {
                s.push_str(&format_tuple(&t));
                s.push('\n');
            }
        }
        s
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        let tmp = path.with_extension("tmp");
        let mut f = std::fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
        f.write_all(self.to_cache_string().as_bytes())
            .map_err(|e| Error::io(&tmp, e))?;
        std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
    }

    /// Parse a cache file; the lower-rank elliptic catalogs are rebuilt.
    pub fn read_cache(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(f).lines();
        let first = lines
            .next()
            .transpose()
            .map_err(|e| Error::io(path, e))?
            .unwrap_or_default();
        if first.trim() != CACHE_FORMAT {
            return Err(Error::Cache(format!("unknown format `{first}`")));
        }
        let mut records: Vec<(String, usize, usize, Vec<u64>)> = Vec::new();
        for line in lines {
            let line = line.map_err(|e| Error::io(path, e))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('>') {
                let parts: Vec<&str> = h.split_whitespace().collect();
                let [name, rank, count] = parts[..] else {
                    return Err(Error::Cache(format!("bad header `{line}`")));
                };
                let parse = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Cache(format!("bad header `{line}`")))
                };
                records.push((name.to_string(), parse(rank)?, parse(count)?, Vec::new()));
            } else {
                let rec = records
                    .last_mut()
                    .ok_or_else(|| Error::Cache("tuple before header".into()))?;
                let t = parse_tuple(line)?;
                if t.len() != pair_count(rec.1) {
                    return Err(Error::Cache(format!("tuple `{line}` has wrong length")));
                }
                rec.3.push(pack_codes(t.iter().map(|l| l.code())));
            }
        }
        let mut fresh = Self {
            elliptic: Vec::new(),
            parabolic: Vec::new(),
            lanner4: VectorCatalog::from_packed("L4", 4, vec![]),
            square: VectorCatalog::from_packed("I2", 4, vec![]),
        };
        let mut elliptic: Vec<Option<VectorCatalog>> = vec![None; 7];
        let mut parabolic: Vec<Option<VectorCatalog>> = vec![None; 7];
        for (name, rank, count, keys) in records {
            if keys.len() != count {
                return Err(Error::Cache(format!(
                    "{name}: header says {count}, found {}",
                    keys.len()
                )));
            }
            let cat = VectorCatalog::from_packed(name.clone(), rank, keys);
            match (name.chars().next(), rank) {
                (Some('S'), 3..=6) => elliptic[rank] = Some(cat),
                (Some('E'), 3..=6) => parabolic[rank] = Some(cat),
                (Some('L'), 4) => fresh.lanner4 = cat,
                (Some('I'), 4) => fresh.square = cat,
                _ => return Err(Error::Cache(format!("unexpected record {name}"))),
            }
        }
        let seed = low_rank();
        fresh.elliptic = seed.0;
        fresh.parabolic = seed.1;
        for r in 3..=6 {
            fresh.elliptic.push(
                elliptic[r]
                    .take()
                    .ok_or_else(|| Error::Cache(format!("missing S{r}")))?,
            );
            fresh.parabolic.push(
                parabolic[r]
                    .take()
                    .ok_or_else(|| Error::Cache(format!("missing E{r}")))?,
            );
        }
        if fresh.lanner4.is_empty() || fresh.square.is_empty() {
            return Err(Error::Cache("missing L4 or I2".into()));
        }
        Ok(fresh)
    }

    /// Load from `path` when it holds a valid cache, otherwise generate and
    /// write the cache.
    pub fn load_or_generate(path: &Path) -> Result<Self> {
        if path.exists() {
            if let Ok(c) = Self::read_cache(path) {
                return Ok(c);
            }
        }
        let c = Self::generate();
        c.write_cache(path)?;
        Ok(c)
    }
}

/// Elliptic catalogs of ranks 0..=2 and the (empty) parabolic ones.
fn low_rank() -> (Vec<VectorCatalog>, Vec<VectorCatalog>) {
    let s2 = CoxeterLabel::ANGLES.iter().map(|l| l.code() as u64).collect();
    (
        vec![
            VectorCatalog::from_packed("S0", 0, vec![0]),
            VectorCatalog::from_packed("S1", 1, vec![0]),
            VectorCatalog::from_packed("S2", 2, s2),
        ],
        (0..3)
            .map(|r| VectorCatalog::from_packed(format!("E{r}"), r, vec![]))
            .collect(),
    )
}

/// All elliptic rank-`rank` tuples.
pub fn generate_elliptic_catalog(rank: usize) -> VectorCatalog {
    assert!((3..=6).contains(&rank), "rank must be in 3..=6");
    CatalogSet::generate().elliptic(rank).clone()
}

/// All connected parabolic rank-`rank` tuples.
pub fn generate_parabolic_catalog(rank: usize) -> VectorCatalog {
    assert!((3..=6).contains(&rank), "rank must be in 3..=6");
    CatalogSet::generate().parabolic(rank).clone()
}

/// All rank-4 Lannér tuples.
pub fn generate_lanner4_catalog() -> VectorCatalog {
    let (mut elliptic, _) = low_rank();
    let e3 = extend(3, &elliptic);
    elliptic.push(VectorCatalog::from_packed("S3", 3, e3.elliptic));
    VectorCatalog::from_packed("L4", 4, extend(4, &elliptic).lanner)
}

/// Rank-4 patterns of a Euclidean rectangle: one perfect matching of the
/// four nodes is divergent, the other four pairs are orthogonal.
pub fn generate_square_catalog() -> VectorCatalog {
    square_catalog()
}

fn square_catalog() -> VectorCatalog {
    let matchings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    let keys = matchings
        .iter()
        .map(|pairs| {
            pack_codes(lex_pairs(4).map(|p| {
                if pairs.contains(&p) {
                    CoxeterLabel::INFINITY.code()
                } else {
                    CoxeterLabel::RIGHT.code()
                }
            }))
        })
        .collect();
    VectorCatalog::from_packed("I2", 4, keys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unpack_inverts_pack() {
        let t = parse_tuple("2,INF,7,3,5,6").unwrap();
        let k = pack_codes(t.iter().map(|l| l.code()));
        assert_eq!(unpack(k, 6), t);
    }

    #[test]
    fn square_catalog_contents() {
        let s = generate_square_catalog();
        let got: Vec<String> = s.tuples().map(|t| format_tuple(&t)).collect();
        assert_eq!(
            got,
            vec!["2,2,INF,INF,2,2", "2,INF,2,2,INF,2", "INF,2,2,2,2,INF"]
        );
    }

    #[test]
    fn low_rank_counts() {
        let (mut e, _) = low_rank();
        let x3 = extend(3, &e);
        assert_eq!(x3.elliptic.len(), 31);
        assert_eq!(x3.parabolic.len(), 10);
        e.push(VectorCatalog::from_packed("S3", 3, x3.elliptic));
        let x4 = extend(4, &e);
        assert_eq!(x4.elliptic.len(), 242);
        assert_eq!(x4.parabolic.len(), 27);
        assert_eq!(x4.lanner.len(), 108);
    }
}
