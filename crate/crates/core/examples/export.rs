//! Run one type and print the Coxeter diagrams of its solutions as DOT.
//!
//!     cargo run --release --example export -- 6 | dot -Tsvg > p6.svg

use hypercox::dataset::polytope;
use hypercox::pipeline::{diagrams, run_type, RunConfig};
use hypercox::CatalogSet;

fn main() -> hypercox::Result<()> {
    let k: u32 = std::env::args().nth(1).map_or(6, |a| a.parse().expect("type label"));
    let cfg = RunConfig {
        types: vec![k],
        ..RunConfig::default()
    };
    let (summary, results) = run_type(&polytope(k)?, &CatalogSet::generate(), &cfg)?;
    eprintln!("P{k}: {} SEILper vectors, {} Grams", summary.seilper, summary.grams);
    for (_, dot) in diagrams(&results)? {
        print!("{dot}");
    }
    Ok(())
}
