//! The compact triangular prisms with a Lannér end, and gluing them onto the
//! simplex facets of a P_4 solution.

use hypercox::dataset::polytope;
use hypercox::gram::{compact_prisms, glue_prism, instantiate, solve_for, verify, SolverConfig};
use hypercox::pasting::{enumerate_seilper, Mode, PasteOptions};
use hypercox::CatalogSet;

fn main() -> hypercox::Result<()> {
    for prism in compact_prisms() {
        println!("sides {:?} end {:?}  a = {:.6}", prism.sides, prism.end, prism.a());
    }

    let p = polytope(4)?;
    let cats = CatalogSet::generate();
    let basis = enumerate_seilper(&p, &cats, &PasteOptions::new(Mode::Basis))?;
    let cfg = SolverConfig::default();
    let base = basis
        .vectors
        .iter()
        .flat_map(|v| solve_for(&p, &instantiate(v), &cfg).solutions)
        .next()
        .expect("P4 has basis solutions");
    for (b, q) in &p.derived.l4_basis {
        for prism in compact_prisms() {
            let Ok(glued) = glue_prism(&base, (*b, q), prism) else { continue };
            for g in glued {
                println!(
                    "glued onto facet {b} opposite {q:?}: a = {:.6}, verifies {}",
                    prism.a(),
                    verify(&g, &p)
                );
            }
        }
    }
    Ok(())
}
