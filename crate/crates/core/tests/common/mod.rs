#![allow(dead_code)]

use std::collections::BTreeSet;

use hypercox::catalog::VectorCatalog;
use nalgebra::DMatrix;

/// Float eigenvalue classification of one label tuple, independent of the
/// exact arithmetic used by the generator.
pub struct Oracle {
    pub rank: usize,
    pub labels: Vec<u8>,
}

impl Oracle {
    fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.rank)
            .flat_map(|i| (i + 1..self.rank).map(move |j| (i, j)))
            .collect()
    }

    fn cosine(&self, nodes: &[usize]) -> DMatrix<f64> {
        let pairs = self.pairs();
        DMatrix::from_fn(nodes.len(), nodes.len(), |a, b| {
            if a == b {
                return 1.0;
            }
            let (i, j) = (nodes[a].min(nodes[b]), nodes[a].max(nodes[b]));
            let k = self.labels[pairs.iter().position(|&p| p == (i, j)).unwrap()];
            -(std::f64::consts::PI / k as f64).cos()
        })
    }

    pub fn min_eigen(&self, nodes: &[usize]) -> f64 {
        self.cosine(nodes).symmetric_eigenvalues().min()
    }

    pub fn connected(&self) -> bool {
        let pairs = self.pairs();
        let mut seen = vec![false; self.rank];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for (s, &(a, b)) in pairs.iter().enumerate() {
                if self.labels[s] != 2 && (a == i || b == i) {
                    let o = if a == i { b } else { a };
                    if !seen[o] {
                        seen[o] = true;
                        stack.push(o);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn all(&self) -> Vec<usize> {
        (0..self.rank).collect()
    }

    pub fn elliptic(&self) -> bool {
        self.min_eigen(&self.all()) > 1e-9
    }

    pub fn connected_parabolic(&self) -> bool {
        self.connected() && self.min_eigen(&self.all()).abs() < 1e-9
    }

    pub fn lanner(&self) -> bool {
        let all = self.all();
        self.min_eigen(&all) < -1e-9
            && (0..self.rank).all(|drop| {
                let sub: Vec<usize> = all.iter().copied().filter(|&v| v != drop).collect();
                self.min_eigen(&sub) > 1e-9
            })
    }
}

pub fn brute_force(rank: usize, keep: impl Fn(&Oracle) -> bool) -> BTreeSet<Vec<u8>> {
    let len = rank * (rank - 1) / 2;
    let mut out = BTreeSet::new();
    for code in 0..6usize.pow(len as u32) {
        let mut c = code;
        let labels: Vec<u8> = (0..len)
            .map(|_| {
                let l = 2 + (c % 6) as u8;
                c /= 6;
                l
            })
            .collect();
        let o = Oracle { rank, labels };
        if keep(&o) {
            out.insert(o.labels);
        }
    }
    out
}

pub fn contents(c: &VectorCatalog) -> BTreeSet<Vec<u8>> {
    c.tuples()
        .map(|t| t.iter().map(|l| l.angle().unwrap()).collect())
        .collect()
}
