//! The pasting join: depth-first batched equi-joins with optional spill.

use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rustc_hash::FxHashMap;
use serde::Serialize;

use super::canon::{canonicalize_rows, SymmetryCanon};
use super::plan::{basis_pins, build_blocks, chunk_order, plan_conditions, Block, Condition, Mode};
use super::{slots_mask, PotentialVector};
use crate::catalog::CatalogSet;
use crate::error::{Error, Result};
use crate::polytope::PolytopeData;

/// A partially joined relation.
#[derive(Clone, Debug, Default)]
pub struct JoinState {
    /// Nibble mask of determined slots.
    pub determined: u128,
    pub rows: Vec<u128>,
}

impl JoinState {
    /// Single row holding `INF` at the given slots, all else undetermined.
    pub fn initial(disjoint_slots: &[usize]) -> Self {
        let row = disjoint_slots
            .iter()
            .fold(0u128, |r, &s| r | 8u128 << super::shift(s));
        Self {
            determined: slots_mask(disjoint_slots),
            rows: vec![row],
        }
    }
}

/// Index of a block's rows by their entries on the linking key.
struct KeyedBlock {
    key_mask: u128,
    groups: FxHashMap<u128, Vec<u128>>,
}

impl KeyedBlock {
    fn new(block: &Block, determined: u128) -> Self {
        let key_mask = determined & block.mask();
        let mut groups: FxHashMap<u128, Vec<u128>> = FxHashMap::default();
        for &r in &block.rows {
            groups.entry(r & key_mask).or_default().push(r & !key_mask);
        }
        Self { key_mask, groups }
    }

    #[inline]
    fn matches(&self, left: u128) -> &[u128] {
        self.groups
            .get(&(left & self.key_mask))
            .map_or(&[], Vec::as_slice)
    }
}

/// Join `left` with `right` on their shared determined slots, then filter by
/// `conditions`.
pub fn paste(
    left: &JoinState,
    right: &Block,
    conditions: &[&Condition],
    cats: &CatalogSet,
) -> JoinState {
    let keyed = KeyedBlock::new(right, left.determined);
    let rows = left
        .rows
        .iter()
        .flat_map(|&l| keyed.matches(l).iter().map(move |&r| l | r))
        .filter(|&x| conditions.iter().all(|c| c.holds(x, cats)))
        .collect();
    JoinState {
        determined: left.determined | right.mask(),
        rows,
    }
}

/// Knobs for [`enumerate_seilper`].
#[derive(Clone, Debug)]
pub struct PasteOptions {
    pub mode: Mode,
    /// Rows held in memory across all layers before batches are handed on.
    pub row_budget: usize,
    /// When set, full batches are written here instead of being processed
    /// recursively.
    pub spill_dir: Option<PathBuf>,
    /// Chunk order; the greedy overlap order when `None`.
    pub order: Option<Vec<usize>>,
    /// Defer every condition to the end, so layer counts are those of the
    /// plain vertex-wise join.
    pub unpruned: bool,
    /// Override whether the Lannér saving condition is applied; by default
    /// it is applied in basis mode only.
    pub l4_saving: Option<bool>,
}

impl Default for PasteOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Direct,
            row_budget: 50_000_000,
            spill_dir: None,
            order: None,
            unpruned: false,
            l4_saving: None,
        }
    }
}

impl PasteOptions {
    pub fn new(mode: Mode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }
}

/// Counters of one enumeration.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PasteStats {
    pub order: Vec<usize>,
    /// Rows surviving each layer (index 0 is the initial row).
    pub layer_rows: Vec<u64>,
    pub peak_rows: usize,
    pub spilled_batches: usize,
    /// Distinct vectors before symmetry reduction.
    pub raw_vectors: usize,
    pub seconds: f64,
}

/// Result of an enumeration.
#[derive(Clone, Debug)]
pub struct Enumeration {
    pub vectors: Vec<PotentialVector>,
    pub stats: PasteStats,
}

struct Layer {
    keyed: KeyedBlock,
    conditions: Vec<Condition>,
}

struct Engine<'a> {
    layers: Vec<Layer>,
    deferred: Vec<Condition>,
    cats: &'a CatalogSet,
    batch: usize,
    spill_dir: Option<PathBuf>,
    pending: Vec<(usize, PathBuf)>,
    stats: PasteStats,
    live: usize,
    out: Vec<u128>,
    spill_seq: usize,
}

impl Engine<'_> {
    /// Extend rows holding `depth` pasted blocks through all remaining layers.
    fn run(&mut self, depth: usize, rows: &[u128]) -> Result<()> {
        if depth == self.layers.len() {
            let cats = self.cats;
            let deferred = &self.deferred;
            self.out.extend(
                rows.iter()
                    .copied()
                    .filter(|&r| deferred.iter().all(|c| c.holds(r, cats))),
            );
            return Ok(());
        }
        let mut buf: Vec<u128> = Vec::with_capacity(self.batch.min(1 << 16));
        let mut produced = 0u64;
        for &l in rows {
            let layer = &self.layers[depth];
            for &r in layer.keyed.matches(l) {
                let x = l | r;
                if layer.conditions.iter().all(|c| c.holds(x, self.cats)) {
                    buf.push(x);
                }
            }
            if buf.len() >= self.batch {
                produced += buf.len() as u64;
                self.hand_on(depth + 1, &mut buf)?;
            }
        }
        produced += buf.len() as u64;
        if !buf.is_empty() {
            self.hand_on(depth + 1, &mut buf)?;
        }
        self.stats.layer_rows[depth + 1] += produced;
        Ok(())
    }

    fn hand_on(&mut self, depth: usize, buf: &mut Vec<u128>) -> Result<()> {
        if depth < self.layers.len() {
            if let Some(dir) = self.spill_dir.clone() {
                let path = dir.join(format!("batch-{:06}.bin", self.spill_seq));
                self.spill_seq += 1;
                write_rows(&path, buf)?;
                self.pending.push((depth, path));
                self.stats.spilled_batches += 1;
                buf.clear();
                return Ok(());
            }
        }
        self.live += buf.len();
        self.stats.peak_rows = self.stats.peak_rows.max(self.live + self.out.len());
        let rows = std::mem::take(buf);
        self.run(depth, &rows)?;
        self.live -= rows.len();
        *buf = rows;
        buf.clear();
        Ok(())
    }
}

fn write_rows(path: &Path, rows: &[u128]) -> Result<()> {
    let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(f);
    for r in rows {
        w.write_all(&r.to_le_bytes()).map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_rows(path: &Path) -> Result<Vec<u128>> {
    let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut bytes = Vec::new();
    BufReader::new(f)
        .read_to_end(&mut bytes)
        .map_err(|e| Error::io(path, e))?;
    std::fs::remove_file(path).map_err(|e| Error::io(path, e))?;
    Ok(bytes
        .chunks_exact(16)
        .map(|c| u128::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

/// Enumerate the SEILper vectors of a polytope: all potential vectors that
/// pass every condition, one lexicographically minimal representative per
/// symmetry orbit, sorted.
pub fn enumerate_seilper(
    p: &PolytopeData,
    cats: &CatalogSet,
    opts: &PasteOptions,
) -> Result<Enumeration> {
    let start = Instant::now();
    let rows = enumerate_raw(p, cats, opts)?;
    let (raw, mut stats) = rows;
    stats.raw_vectors = raw.len();
    let canon = SymmetryCanon::new(&p.symmetry_group);
    let vectors = canonicalize_rows(&raw, &canon)
        .into_iter()
        .map(PotentialVector::from_packed)
        .collect();
    stats.seconds = start.elapsed().as_secs_f64();
    Ok(Enumeration { vectors, stats })
}

/// All surviving vectors before symmetry reduction, sorted and distinct.
pub fn enumerate_raw(
    p: &PolytopeData,
    cats: &CatalogSet,
    opts: &PasteOptions,
) -> Result<(Vec<u128>, PasteStats)> {
    let pins = match opts.mode {
        Mode::Basis if p.derived.l4_basis.is_empty() => return Err(Error::NoBasis(p.label)),
        Mode::Basis => basis_pins(p),
        Mode::Direct => Vec::new(),
    };
    let order = opts.order.clone().unwrap_or_else(|| chunk_order(p));
    let blocks = build_blocks(p, cats.elliptic(4), &order, &pins);
    let conditions = plan_conditions(p, &order, opts.l4_saving.unwrap_or(opts.mode == Mode::Basis));

    let init = JoinState::initial(&p.disjoint_slots());
    let mut determined = init.determined;
    let mut layers = Vec::with_capacity(blocks.len());
    let mut deferred = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        let keyed = KeyedBlock::new(block, determined);
        determined |= block.mask();
        let here: Vec<Condition> = conditions
            .iter()
            .filter(|c| c.layer == i + 1)
            .cloned()
            .collect();
        if opts.unpruned {
            deferred.extend(here);
            layers.push(Layer {
                keyed,
                conditions: Vec::new(),
            });
        } else {
            layers.push(Layer {
                keyed,
                conditions: here,
            });
        }
    }
    if let Some(dir) = &opts.spill_dir {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let n = layers.len();
    let mut engine = Engine {
        layers,
        deferred,
        cats,
        batch: (opts.row_budget / (n + 1)).max(1024),
        spill_dir: opts.spill_dir.clone(),
        pending: Vec::new(),
        stats: PasteStats {
            order,
            layer_rows: vec![0; n + 1],
            ..PasteStats::default()
        },
        live: 0,
        out: Vec::new(),
        spill_seq: 0,
    };
    engine.stats.layer_rows[0] = init.rows.len() as u64;
    engine.run(0, &init.rows)?;
    while let Some((depth, path)) = engine.pending.pop() {
        let rows = read_rows(&path)?;
        engine.run(depth, &rows)?;
    }
    let mut out = std::mem::take(&mut engine.out);
    out.sort_unstable();
    out.dedup();
    Ok((out, engine.stats))
}
