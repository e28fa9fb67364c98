//! Solve two potential vectors for their Gram matrices and realize them as
//! unit normals in Minkowski space.

use hypercox::dataset::polytope;
use hypercox::gram::{instantiate, realize, solve_for, SolverConfig};
use hypercox::pasting::PotentialVector;

fn main() -> hypercox::Result<()> {
    let cases = [
        (1, "5,2,2,2,2,2,2,3,2,3,3,2,2,2,2,2,2,INF,2,INF,INF,INF,2,INF,2,2,2,INF"),
        (34, "2,2,2,2,2,2,INF,2,2,2,4,INF,2,2,4,INF,2,2,INF,2,4,2,2,2,3,2,3,3"),
    ];
    for (k, text) in cases {
        let p = polytope(k)?;
        let v: PotentialVector = text.parse()?;
        let g = instantiate(&v);
        println!("P{k} [{v}]: {} unknowns", g.unknowns.len());
        let report = solve_for(&p, &g, &SolverConfig::default());
        println!("  decided by {:?}", report.stage);
        for s in &report.solutions {
            for ((i, j), cosh) in &s.lengths {
                println!("  cosh d({i},{j}) = {cosh:.12}");
            }
            println!("  signature {:?}, largest minor {:.1e}", s.signature, s.residual);
            let r = realize(s)?;
            println!("  realization error {:.1e}", r.gram().distance(&s.values));
        }
    }
    Ok(())
}
