//! Derived facet sets of P_1, the type whose vertex listing is reproduced
//! in the literature.

use hypercox::dataset::polytope;

fn main() -> hypercox::Result<()> {
    let p = polytope(1)?;
    println!("{}", p.listing());
    let d = &p.derived;
    println!("disjoint pairs {:?}", d.disjoint_pairs);
    println!("|e3| = {}, |e4| = {}", d.e3.len(), d.e4.len());
    println!("se5 {:?}", d.se5);
    println!("s4 {:?}", d.s4);
    println!("l4 basis {:?}", d.l4_basis);
    println!("symmetry group of order {}", p.symmetry_group.len());
    Ok(())
}
