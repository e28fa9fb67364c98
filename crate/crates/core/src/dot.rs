//! Graphviz export of Coxeter diagrams.
//!
//! Label 2 draws no edge, label 3 a plain edge, labels 4..6 and resolved
//! angles `π/n` an edge labelled `n`, and divergent pairs a dotted edge
//! labelled with `cosh` of the distance.

use std::fmt::Write;

use crate::gram::SolvedGram;
use crate::label::CoxeterLabel;
use crate::pasting::PotentialVector;
use crate::polytope::PairIndex;

/// DOT text of the diagram of `vector` with the unknowns of `solution`
/// filled in.
pub fn export_diagram(name: &str, vector: &PotentialVector, solution: &SolvedGram) -> String {
    let mut out = String::new();
    writeln!(out, "graph \"{name}\" {{").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    for f in 1..=8 {
        writeln!(out, "  {f};").unwrap();
    }
    for &(i, j) in PairIndex::pairs() {
        let label = vector.get(i, j);
        let attrs = if label == CoxeterLabel::INFINITY {
            let cosh = solution
                .lengths
                .get(&(i, j))
                .copied()
                .unwrap_or(-solution.values.get(i as usize - 1, j as usize - 1));
            format!(" [style=dotted, label=\"{cosh:.6}\"]")
        } else if label == CoxeterLabel::SEVEN {
            match solution.angle_integers.get(&(i, j)) {
                Some(n) => format!(" [label=\"{n}\"]"),
                None => " [label=\"7\"]".to_string(),
            }
        } else {
            match label.angle() {
                Some(2) => continue,
                Some(3) => String::new(),
                Some(k) => format!(" [label=\"{k}\"]"),
                None => unreachable!(),
            }
        };
        writeln!(out, "  {i} -- {j}{attrs};").unwrap();
    }
    out.push_str("}\n");
    out
}
