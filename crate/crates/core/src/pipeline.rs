//! End-to-end runs: enumerate, solve, verify and report, with per-type
//! checkpoints so an interrupted run resumes where it stopped.
//!
//! Files written under the output directory, per type `k` and mode `m`:
//!
//! - `P{k}.{m}.seilper.txt` and `.seilper.json`: the SEILper checkpoint
//! - `P{k}.{m}.json`: certified solutions, byte-identical across runs
//! - `P{k}.{m}.summary.json`: counts and timings, the solve checkpoint
//! - `dot/{m}/P_{k}_{i}.dot`: diagrams of the solutions
//!
//! and `summary.csv` plus `manifest.json` for the whole run.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::CatalogSet;
use crate::dataset;
use crate::dot::export_diagram;
use crate::error::{Error, Result};
use crate::gram::{equivalent, glue_closure, instantiate, solve_for, SolvedGram, SolverConfig};
use crate::pasting::{enumerate_seilper, Mode, PasteOptions, PotentialVector};
use crate::polytope::PolytopeData;

/// What to run and where to put it.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub types: Vec<u32>,
    pub mode: Mode,
    pub paste: PasteOptions,
    pub solver: SolverConfig,
    /// Reports and checkpoints; nothing is written when `None`.
    pub out_dir: Option<PathBuf>,
    /// Progress lines on stderr.
    pub verbose: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            types: dataset::labels(),
            mode: Mode::Direct,
            paste: PasteOptions::default(),
            solver: SolverConfig::default(),
            out_dir: None,
            verbose: false,
        }
    }
}

/// Counts and timings of one type.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeSummary {
    pub polytope: u32,
    pub mode: Mode,
    /// Vertex blocks joined.
    pub blocks: usize,
    pub peak_rows: usize,
    pub seilper: usize,
    pub grams: usize,
    pub unresolved: usize,
    pub enumerate_seconds: f64,
    pub solve_seconds: f64,
}

impl TypeSummary {
    pub fn seconds(&self) -> f64 {
        self.enumerate_seconds + self.solve_seconds
    }
}

/// Totals of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    /// SHA-256 of the catalog cache text.
    pub catalog_checksum: String,
    pub types: Vec<u32>,
    pub modes: Vec<Mode>,
    pub summaries: Vec<TypeSummary>,
    pub total_seilper: usize,
    pub total_grams: usize,
    pub total_unresolved: usize,
    pub wall_seconds: f64,
}

/// A solution with its stable name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedSolution {
    /// `P_{k,i}`, numbered by sorted vector then sorted solution values.
    pub id: String,
    #[serde(flatten)]
    pub gram: SolvedGram,
}

/// Solutions of one SEILper vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub polytope: u32,
    pub vector: String,
    pub solutions: Vec<NamedSolution>,
    /// Set when the solver gave up on this vector.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unresolved: Option<String>,
}

impl ResultRecord {
    pub fn vector(&self) -> Result<PotentialVector> {
        self.vector.parse()
    }
}

/// Contents of `P{k}.{m}.json`: the vectors that have a solution or were
/// left unresolved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeResults {
    pub polytope: u32,
    pub mode: Mode,
    pub seilper: usize,
    pub grams: usize,
    pub unresolved: usize,
    pub records: Vec<ResultRecord>,
}

impl TypeResults {
    pub fn solutions(&self) -> impl Iterator<Item = &NamedSolution> {
        self.records.iter().flat_map(|r| &r.solutions)
    }
}

#[derive(Serialize, Deserialize)]
struct SeilperSidecar {
    polytope: u32,
    mode: Mode,
    count: usize,
    wall_time: f64,
    blocks: usize,
    peak_rows: usize,
    layer_rows: Vec<u64>,
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub manifest: RunManifest,
    pub results: Vec<TypeResults>,
}

/// SHA-256 of the catalog cache text, hex.
pub fn catalog_checksum(cats: &CatalogSet) -> String {
    Sha256::digest(cats.to_cache_string().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn stem(dir: &Path, k: u32, mode: Mode) -> PathBuf {
    dir.join(format!("P{k}.{mode}"))
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Path of the solutions file of type `k`.
pub fn results_path(dir: &Path, k: u32, mode: Mode) -> PathBuf {
    with_suffix(&stem(dir, k, mode), ".json")
}

/// SEILper vectors of one type, from the checkpoint when present.
pub fn enumerate_type(
    p: &PolytopeData,
    cats: &CatalogSet,
    cfg: &RunConfig,
) -> Result<(Vec<PotentialVector>, SeilperInfo)> {
    let mode = cfg.mode;
    let paths = cfg.out_dir.as_deref().map(|d| {
        let s = stem(d, p.label, mode);
        (with_suffix(&s, ".seilper.txt"), with_suffix(&s, ".seilper.json"))
    });
    if let Some((txt, json)) = &paths {
        if txt.exists() && json.exists() {
            let side: SeilperSidecar = read_json(json)?;
            let text = std::fs::read_to_string(txt).map_err(|e| Error::io(txt, e))?;
            let vectors = text
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(str::parse)
                .collect::<Result<Vec<PotentialVector>>>()?;
            if vectors.len() == side.count {
                return Ok((
                    vectors,
                    SeilperInfo {
                        blocks: side.blocks,
                        peak_rows: side.peak_rows,
                        seconds: side.wall_time,
                    },
                ));
            }
        }
    }
    let opts = PasteOptions {
        mode,
        ..cfg.paste.clone()
    };
    let e = enumerate_seilper(p, cats, &opts)?;
    let info = SeilperInfo {
        blocks: e.stats.order.len(),
        peak_rows: e.stats.peak_rows,
        seconds: e.stats.seconds,
    };
    if let Some((txt, json)) = &paths {
        let mut text = String::new();
        for v in &e.vectors {
            text.push_str(&v.to_string());
            text.push('\n');
        }
        write_atomic(txt, &text)?;
        let side = SeilperSidecar {
            polytope: p.label,
            mode,
            count: e.vectors.len(),
            wall_time: e.stats.seconds,
            blocks: info.blocks,
            peak_rows: info.peak_rows,
            layer_rows: e.stats.layer_rows.clone(),
        };
        write_atomic(json, &serde_json::to_string_pretty(&side)?)?;
    }
    Ok((e.vectors, info))
}

/// Enumeration counters carried into the summary.
#[derive(Clone, Copy, Debug)]
pub struct SeilperInfo {
    pub blocks: usize,
    pub peak_rows: usize,
    pub seconds: f64,
}

/// Solve every vector and name the verified solutions.
pub fn solve_type(
    p: &PolytopeData,
    mode: Mode,
    vectors: &[PotentialVector],
    cfg: &SolverConfig,
) -> TypeResults {
    let reports: Vec<_> = vectors
        .par_iter()
        .map(|v| solve_for(p, &instantiate(v), cfg))
        .collect();
    let mut records = Vec::new();
    let mut next = 1;
    for (v, r) in vectors.iter().zip(reports) {
        if r.solutions.is_empty() && r.unresolved.is_none() {
            continue;
        }
        let solutions = r
            .solutions
            .into_iter()
            .map(|gram| {
                let id = format!("P_{{{},{}}}", p.label, next);
                next += 1;
                NamedSolution { id, gram }
            })
            .collect();
        records.push(ResultRecord {
            polytope: p.label,
            vector: v.to_string(),
            solutions,
            unresolved: r.unresolved,
        });
    }
    TypeResults {
        polytope: p.label,
        mode,
        seilper: vectors.len(),
        grams: next - 1,
        unresolved: records.iter().filter(|r| r.unresolved.is_some()).count(),
        records,
    }
}

/// Enumerate and solve one type, reusing checkpoints.
pub fn run_type(p: &PolytopeData, cats: &CatalogSet, cfg: &RunConfig) -> Result<(TypeSummary, TypeResults)> {
    let s = cfg.out_dir.as_deref().map(|d| stem(d, p.label, cfg.mode));
    if let Some(s) = &s {
        let (summary, results) = (with_suffix(s, ".summary.json"), with_suffix(s, ".json"));
        if summary.exists() && results.exists() {
            return Ok((read_json(&summary)?, read_json(&results)?));
        }
    }
    let (vectors, info) = enumerate_type(p, cats, cfg)?;
    if cfg.verbose {
        eprintln!("P{} {}: {} SEILper vectors", p.label, cfg.mode, vectors.len());
    }
    let start = Instant::now();
    let results = solve_type(p, cfg.mode, &vectors, &cfg.solver);
    let summary = TypeSummary {
        polytope: p.label,
        mode: cfg.mode,
        blocks: info.blocks,
        peak_rows: info.peak_rows,
        seilper: results.seilper,
        grams: results.grams,
        unresolved: results.unresolved,
        enumerate_seconds: info.seconds,
        solve_seconds: start.elapsed().as_secs_f64(),
    };
    if cfg.verbose {
        eprintln!(
            "P{} {}: {} Grams, {} unresolved",
            p.label, cfg.mode, summary.grams, summary.unresolved
        );
    }
    if let Some(s) = &s {
        write_atomic(&with_suffix(s, ".json"), &serde_json::to_string_pretty(&results)?)?;
        let dir = cfg.out_dir.as_deref().unwrap();
        for (id, dot) in diagrams(&results)? {
            write_atomic(&dot_path(dir, cfg.mode, &id), &dot)?;
        }
        write_atomic(&with_suffix(s, ".summary.json"), &serde_json::to_string_pretty(&summary)?)?;
    }
    Ok((summary, results))
}

fn dot_path(dir: &Path, mode: Mode, id: &str) -> PathBuf {
    let name: String = id
        .chars()
        .filter(|c| !matches!(c, '{' | '}'))
        .map(|c| if c == ',' { '_' } else { c })
        .collect();
    dir.join("dot").join(mode.to_string()).join(format!("{name}.dot"))
}

/// DOT text of every solution, keyed by id.
pub fn diagrams(results: &TypeResults) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for r in &results.records {
        let v = r.vector()?;
        for s in &r.solutions {
            out.push((s.id.clone(), export_diagram(&s.id, &v, &s.gram)));
        }
    }
    Ok(out)
}

/// Run every requested type and write the run reports.
pub fn run(cfg: &RunConfig, cats: &CatalogSet) -> Result<RunOutput> {
    let start = Instant::now();
    let mut summaries = Vec::new();
    let mut results = Vec::new();
    for &k in &cfg.types {
        let p = dataset::polytope(k)?;
        let (s, r) = run_type(&p, cats, cfg)?;
        summaries.push(s);
        results.push(r);
    }
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        catalog_checksum: catalog_checksum(cats),
        types: cfg.types.clone(),
        modes: vec![cfg.mode],
        total_seilper: summaries.iter().map(|s| s.seilper).sum(),
        total_grams: summaries.iter().map(|s| s.grams).sum(),
        total_unresolved: summaries.iter().map(|s| s.unresolved).sum(),
        summaries,
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    if let Some(dir) = &cfg.out_dir {
        write_atomic(&dir.join("summary.csv"), &summary_csv(&manifest.summaries))?;
        write_atomic(&dir.join("manifest.json"), &serde_json::to_string_pretty(&manifest)?)?;
    }
    Ok(RunOutput { manifest, results })
}

/// CSV with columns type, mode, seilper, grams, unresolved, seconds.
pub fn summary_csv(summaries: &[TypeSummary]) -> String {
    let mut s = String::from("type,mode,seilper,grams,unresolved,seconds\n");
    for t in summaries {
        s.push_str(&format!(
            "{},{},{},{},{},{:.3}\n",
            t.polytope,
            t.mode,
            t.seilper,
            t.grams,
            t.unresolved,
            t.seconds()
        ));
    }
    s
}

/// Basis Grams closed under prism gluing against direct Grams.
#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub polytope: u32,
    pub basis_seilper: usize,
    pub basis_grams: usize,
    pub glued_grams: usize,
    pub direct_seilper: usize,
    pub direct_grams: usize,
    /// Direct solutions not reached by gluing.
    pub missing: Vec<String>,
    /// Glued Grams with no direct counterpart.
    pub extra: usize,
    pub unresolved: usize,
}

impl CrosscheckReport {
    pub fn matches(&self) -> bool {
        self.missing.is_empty() && self.extra == 0 && self.unresolved == 0
    }
}

/// Compare basis mode plus gluing with direct mode, up to the symmetry group
/// and entry-wise `1e-8`.
pub fn crosscheck(types: &[u32], cats: &CatalogSet, cfg: &RunConfig) -> Result<Vec<CrosscheckReport>> {
    let mut out = Vec::new();
    for &k in types {
        let p = dataset::polytope(k)?;
        if p.derived.l4_basis.is_empty() {
            return Err(Error::NoBasis(k));
        }
        let run_mode = |mode| {
            let c = RunConfig {
                mode,
                ..cfg.clone()
            };
            run_type(&p, cats, &c)
        };
        let (bs, basis) = run_mode(Mode::Basis)?;
        let (ds, direct) = run_mode(Mode::Direct)?;
        let mut glued: Vec<SolvedGram> = Vec::new();
        for s in basis.solutions() {
            for g in glue_closure(&s.gram, &p) {
                if !glued.iter().any(|o| equivalent(&o.values, &g.values, &p, 1e-8)) {
                    glued.push(g);
                }
            }
        }
        let missing = direct
            .solutions()
            .filter(|d| !glued.iter().any(|g| equivalent(&g.values, &d.gram.values, &p, 1e-8)))
            .map(|d| d.id.clone())
            .collect();
        let extra = glued
            .iter()
            .filter(|g| !direct.solutions().any(|d| equivalent(&g.values, &d.gram.values, &p, 1e-8)))
            .count();
        out.push(CrosscheckReport {
            polytope: k,
            basis_seilper: bs.seilper,
            basis_grams: bs.grams,
            glued_grams: glued.len(),
            direct_seilper: ds.seilper,
            direct_grams: ds.grams,
            missing,
            extra,
            unresolved: bs.unresolved + ds.unresolved,
        });
    }
    Ok(out)
}
