//! Generate the diagram catalogs and print their sizes.

use std::time::Instant;

use hypercox::CatalogSet;

fn main() {
    let t = Instant::now();
    let cats = CatalogSet::generate();
    for c in cats.all() {
        println!("{:>3}  rank {}  {:>6} vectors", c.name(), c.rank(), c.len());
    }
    println!("generated in {:.2?}", t.elapsed());
}
