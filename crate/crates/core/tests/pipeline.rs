use std::path::Path;
use std::sync::OnceLock;

use hypercox::dataset::polytope;
use hypercox::dot::export_diagram;
use hypercox::gram::{instantiate, solve_for, SolverConfig};
use hypercox::label::CoxeterLabel;
use hypercox::pasting::{Mode, PotentialVector};
use hypercox::pipeline::{self, RunConfig, RunManifest};
use hypercox::{CatalogSet, PairIndex};

const P1_54: &str = "5,2,2,2,2,2,2,3,2,3,3,2,2,2,2,2,2,INF,2,INF,INF,INF,2,INF,2,2,2,INF";

fn cats() -> &'static CatalogSet {
    static CATS: OnceLock<CatalogSet> = OnceLock::new();
    CATS.get_or_init(CatalogSet::generate)
}

fn config(types: &[u32], mode: Mode, out: &Path) -> RunConfig {
    let mut cfg = RunConfig {
        types: types.to_vec(),
        mode,
        out_dir: Some(out.to_path_buf()),
        ..RunConfig::default()
    };
    cfg.paste.mode = mode;
    cfg
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn fixture(name: &str) -> String {
    read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name))
        .trim()
        .to_string()
}

#[test]
fn basis_run_of_three_types() {
    let dir = tempfile::tempdir().unwrap();
    let out = pipeline::run(&config(&[1, 2, 3], Mode::Basis, dir.path()), cats()).unwrap();
    let counts: Vec<usize> = out.manifest.summaries.iter().map(|s| s.seilper).collect();
    assert_eq!(counts, [8, 12, 18]);
    assert_eq!(out.manifest.total_unresolved, 0);
    let csv = read(dir.path().join("summary.csv"));
    assert!(csv.starts_with("type,mode,seilper,grams,unresolved,seconds\n"));
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().nth(1).unwrap().starts_with("1,basis,8,"));
}

#[test]
fn results_are_deterministic_and_resumable() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = pipeline::run(&config(&[1, 6], Mode::Direct, a.path()), cats()).unwrap();
    pipeline::run(&config(&[1, 6], Mode::Direct, b.path()), cats()).unwrap();
    for name in ["P1.direct.json", "P6.direct.json", "P1.direct.seilper.txt", "summary.csv"] {
        if name == "summary.csv" {
            // seconds differ between runs
            let strip = |s: String| -> Vec<String> {
                s.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
            };
            assert_eq!(strip(read(a.path().join(name))), strip(read(b.path().join(name))));
        } else {
            assert_eq!(read(a.path().join(name)), read(b.path().join(name)), "{name}");
        }
    }
    assert_eq!(
        read(a.path().join("dot/direct/P_1_54.dot")),
        read(b.path().join("dot/direct/P_1_54.dot"))
    );

    // a second run over the same directory resumes from the checkpoints
    let again = pipeline::run(&config(&[1, 6], Mode::Direct, a.path()), cats()).unwrap();
    let strip = |m: &RunManifest| {
        let mut v = serde_json::to_value(m).unwrap();
        v.as_object_mut().unwrap().remove("wall_seconds");
        v
    };
    assert_eq!(strip(&first.manifest), strip(&again.manifest));
    assert_eq!(again.manifest.total_grams, 131);
    let on_disk: RunManifest = serde_json::from_str(&read(a.path().join("manifest.json"))).unwrap();
    assert_eq!(strip(&on_disk), strip(&again.manifest));
}

#[test]
fn interrupted_run_reuses_the_seilper_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&[2], Mode::Direct, dir.path());
    let full = pipeline::run(&cfg, cats()).unwrap();
    // drop everything after enumeration
    for name in ["P2.direct.json", "P2.direct.summary.json"] {
        std::fs::remove_file(dir.path().join(name)).unwrap();
    }
    let resumed = pipeline::run(&cfg, cats()).unwrap();
    assert_eq!(resumed.manifest.total_grams, full.manifest.total_grams);
    assert_eq!(
        resumed.manifest.summaries[0].enumerate_seconds,
        full.manifest.summaries[0].enumerate_seconds
    );
}

#[test]
fn dot_conventions() {
    let p = polytope(1).unwrap();
    let v: PotentialVector = P1_54.parse().unwrap();
    let s = &solve_for(&p, &instantiate(&v), &SolverConfig::default()).solutions[0];
    let dot = export_diagram("P_{1,54}", &v, s);
    assert!(dot.starts_with("graph \"P_{1,54}\" {\n"));
    let dotted: Vec<&str> = dot.lines().filter(|l| l.contains("dotted")).collect();
    assert_eq!(dotted.len(), 6);
    assert!(dotted.iter().all(|l| l.contains("label=\"1.618034\"")));
    for &(i, j) in PairIndex::pairs() {
        let edge = format!("  {i} -- {j}");
        let line = dot.lines().find(|l| l.starts_with(&format!("{edge};")) || l.starts_with(&format!("{edge} ")));
        match v.get(i, j).angle() {
            Some(2) => assert!(line.is_none(), "{i},{j}"),
            Some(3) => assert_eq!(line, Some(format!("{edge};").as_str())),
            Some(k) => assert_eq!(line, Some(format!("{edge} [label=\"{k}\"];").as_str())),
            None => assert!(line.unwrap().contains("dotted")),
        }
    }
}

#[test]
fn dot_shows_resolved_angle_integers() {
    let p = polytope(17).unwrap();
    let v: PotentialVector = fixture("p17_seven.txt").parse().unwrap();
    let sols = solve_for(&p, &instantiate(&v), &SolverConfig::default()).solutions;
    assert_eq!(sols.len(), 1);
    let (&(i, j), &n) = sols[0].angle_integers.iter().next().unwrap();
    assert_eq!(n, 7);
    assert_eq!(v.get(i, j), CoxeterLabel::SEVEN);
    let dot = export_diagram("P_17", &v, &sols[0]);
    assert!(dot.contains(&format!("  {i} -- {j} [label=\"7\"];")));
}

#[test]
fn export_reads_back_written_results() {
    let dir = tempfile::tempdir().unwrap();
    let out = pipeline::run(&config(&[6], Mode::Direct, dir.path()), cats()).unwrap();
    let text = read(pipeline::results_path(dir.path(), 6, Mode::Direct));
    let back: pipeline::TypeResults = serde_json::from_str(&text).unwrap();
    assert_eq!(back.grams, 1);
    let dots = pipeline::diagrams(&back).unwrap();
    assert_eq!(dots, pipeline::diagrams(&out.results[0]).unwrap());
    assert_eq!(read(dir.path().join("dot/direct/P_6_1.dot")), dots[0].1);
}

#[test]
fn crosscheck_p1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(&[1], Mode::Direct, dir.path());
    let r = &pipeline::crosscheck(&[1], cats(), &cfg).unwrap()[0];
    assert_eq!((r.basis_seilper, r.direct_seilper, r.direct_grams), (8, 130, 130));
    assert!(r.matches(), "{r:?}");
}

#[test]
fn crosscheck_needs_a_basis() {
    let dir = tempfile::tempdir().unwrap();
    assert!(pipeline::crosscheck(&[34], cats(), &config(&[34], Mode::Direct, dir.path())).is_err());
}
