//! Basis mode plus prism gluing against direct mode for one type.
//!
//!     cargo run --release --example crosscheck -- 7

use hypercox::pipeline::{crosscheck, RunConfig};
use hypercox::CatalogSet;

fn main() -> hypercox::Result<()> {
    let k: u32 = std::env::args().nth(1).map_or(1, |a| a.parse().expect("type label"));
    let out = std::env::temp_dir().join(format!("hypercox-crosscheck-{}", std::process::id()));
    let cfg = RunConfig {
        types: vec![k],
        out_dir: Some(out.clone()),
        ..RunConfig::default()
    };
    let reports = crosscheck(&[k], &CatalogSet::generate(), &cfg)?;
    for r in &reports {
        println!(
            "P{}: {} basis Grams -> {} after gluing, {} direct Grams, {}",
            r.polytope,
            r.basis_grams,
            r.glued_grams,
            r.direct_grams,
            if r.matches() { "equal" } else { "different" }
        );
    }
    std::fs::remove_dir_all(&out).ok();
    Ok(())
}
