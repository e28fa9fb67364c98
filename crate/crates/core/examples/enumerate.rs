//! Paste the vertex blocks of a type into SEILper vectors, in both modes.
//!
//!     cargo run --release --example enumerate -- 7

use hypercox::dataset::polytope;
use hypercox::pasting::{enumerate_seilper, Mode, PasteOptions};
use hypercox::CatalogSet;

fn main() -> hypercox::Result<()> {
    let k: u32 = std::env::args().nth(1).map_or(1, |a| a.parse().expect("type label"));
    let p = polytope(k)?;
    let cats = CatalogSet::generate();
    for mode in [Mode::Basis, Mode::Direct] {
        match enumerate_seilper(&p, &cats, &PasteOptions::new(mode)) {
            Ok(e) => {
                println!(
                    "P{k} {mode}: {} vectors ({} before symmetry), peak {} rows, {:.2}s",
                    e.vectors.len(),
                    e.stats.raw_vectors,
                    e.stats.peak_rows,
                    e.stats.seconds
                );
                println!("  rows per layer {:?}", e.stats.layer_rows);
                if let Some(v) = e.vectors.first() {
                    println!("  first {v}");
                }
            }
            Err(e) => println!("P{k} {mode}: {e}"),
        }
    }
    Ok(())
}
