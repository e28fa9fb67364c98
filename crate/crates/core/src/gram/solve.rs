//! Deterministic staged solver for the minor-vanishing system.
//!
//! Stage A rejects candidates whose diagram is disconnected, which contain
//! two mutually orthogonal non-elliptic subdiagrams, or which have a fully
//! known 6×6 minor that does not vanish. Propagation then repeatedly picks a minor with exactly one
//! undetermined unknown; its determinant is a quadratic in that unknown, so
//! every admissible root spawns a branch. Branches where no such minor
//! remains fall back to damped Gauss–Newton from a fixed multi-start grid
//! (stage B). Angle entries must be `-cos(π/n)` for an integer `n` (stage C),
//! and survivors are certified by signature (stage D).

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::certify::{signature_with, verify};
use super::elim;
use super::{minor_complements, GramCandidate, GramMatrix, SolvedGram, Unknown, UnknownKind};
use crate::label::CoxeterLabel;
use crate::polytope::{PairIndex, PolytopeData};

/// Tolerances and stage budgets.
#[derive(Clone, Debug, Serialize)]
pub struct SolverConfig {
    /// Largest accepted normalized 6×6 minor.
    pub tol_residual: f64,
    /// Largest accepted distance of an angle entry from `-cos(π/n)`.
    pub tol_angle: f64,
    /// Largest admissible `n` of an angle `π/n`.
    pub max_n: u32,
    /// Normalized size below which a fully known minor counts as zero.
    pub tol_kill: f64,
    /// Same, for minors completed during propagation.
    pub tol_branch: f64,
    /// Eigenvalues within this distance of zero count as zero.
    pub tol_eigen: f64,
    /// Solutions closer than this entry-wise are merged.
    pub tol_dedup: f64,
    /// Multi-start box for length entries.
    pub length_box: (f64, f64),
    /// Multi-start grid nodes.
    pub length_grid: Vec<f64>,
    pub angle_grid: Vec<f64>,
    /// Damped Gauss–Newton iteration cap per start.
    pub max_iterations: usize,
    /// Cap on propagation branches plus multi-start runs per candidate.
    pub max_work: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_residual: 1e-10,
            tol_angle: 1e-9,
            max_n: 100,
            tol_kill: 1e-9,
            tol_branch: 1e-7,
            tol_eigen: 1e-6,
            tol_dedup: 1e-8,
            length_box: (-50.0, -1.000001),
            length_grid: vec![-1.05, -1.2, -1.5, -2.0, -3.0],
            angle_grid: vec![-0.92, -0.95, -0.99],
            max_iterations: 100,
            max_work: 200_000,
        }
    }
}

/// Where a candidate was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStage {
    /// A structural obstruction, or a fully known minor does not vanish.
    Killing,
    /// Decided by single-unknown propagation alone.
    Propagation,
    /// Needed the multi-start search.
    MultiStart,
}

/// Outcome of solving one candidate.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    pub solutions: Vec<SolvedGram>,
    pub stage: SolveStage,
    /// Set when a budget ran out; the candidate is then undecided.
    pub unresolved: Option<String>,
    /// Points that satisfied the minors before range analysis and signature.
    pub pre_results: usize,
}

impl SolveReport {
    pub fn is_resolved(&self) -> bool {
        self.unresolved.is_none()
    }
}

struct Solver<'a> {
    g: &'a GramCandidate,
    cfg: &'a SolverConfig,
    base: GramMatrix,
    /// Unknown indices inside each minor.
    inside: Vec<Vec<usize>>,
    work: usize,
    multistart: bool,
    exhausted: bool,
    points: Vec<Vec<f64>>,
}

/// Solve a candidate: all certified points with signature (4,1), angle
/// integrality and vanishing minors.
pub fn solve(g: &GramCandidate, cfg: &SolverConfig) -> SolveReport {
    let base = g.numeric(&vec![0.0; g.unknowns.len()]);
    let inside = minor_complements()
        .iter()
        .map(|idx| {
            g.unknowns
                .iter()
                .enumerate()
                .filter(|(_, u)| {
                    idx.contains(&(u.pair.0 as usize - 1)) && idx.contains(&(u.pair.1 as usize - 1))
                })
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    let mut s = Solver {
        g,
        cfg,
        base,
        inside,
        work: 0,
        multistart: false,
        exhausted: false,
        points: Vec::new(),
    };
    let mut values = vec![f64::NAN; g.unknowns.len()];
    if !g.is_connected() || orthogonal_nonelliptic_pair(g) || !s.consistent_with(&values, cfg.tol_kill) {
        return SolveReport {
            solutions: Vec::new(),
            stage: SolveStage::Killing,
            unresolved: None,
            pre_results: 0,
        };
    }
    s.propagate(&mut values);
    let stage = if s.multistart {
        SolveStage::MultiStart
    } else {
        SolveStage::Propagation
    };
    let pre_results = s.points.len();
    let mut solutions: Vec<SolvedGram> = Vec::new();
    for p in std::mem::take(&mut s.points) {
        if let Some(sol) = s.certify(p) {
            if !solutions
                .iter()
                .any(|o| o.values.distance(&sol.values) < cfg.tol_dedup)
            {
                solutions.push(sol);
            }
        }
    }
    solutions.sort_by(|a, b| {
        let ka: Vec<f64> = a.values.0.iter().flatten().copied().collect();
        let kb: Vec<f64> = b.values.0.iter().flatten().copied().collect();
        ka.partial_cmp(&kb).unwrap()
    });
    SolveReport {
        solutions,
        stage,
        unresolved: s
            .exhausted
            .then(|| format!("work budget of {} exhausted", cfg.max_work)),
        pre_results,
    }
}

/// [`solve`], keeping only solutions whose face structure is that of `p`.
pub fn solve_for(p: &PolytopeData, g: &GramCandidate, cfg: &SolverConfig) -> SolveReport {
    let mut r = solve(g, cfg);
    r.solutions.retain(|s| verify(s, p));
    r
}

impl Solver<'_> {
    fn matrix(&self, values: &[f64]) -> GramMatrix {
        let mut m = self.base;
        for (u, &v) in self.g.unknowns.iter().zip(values) {
            m.set(u.pair.0 as usize - 1, u.pair.1 as usize - 1, v);
        }
        m
    }

    /// Every fully determined minor vanishes up to `tol`.
    fn consistent_with(&self, values: &[f64], tol: f64) -> bool {
        let m = self.matrix(values);
        minor_complements().iter().zip(&self.inside).all(|(idx, ins)| {
            !ins.iter().all(|&k| !values[k].is_nan()) || m.normalized_minor(idx).abs() <= tol
        })
    }

    fn consistent(&self, values: &[f64]) -> bool {
        self.consistent_with(values, self.cfg.tol_branch)
    }

    fn propagate(&mut self, values: &mut Vec<f64>) {
        if self.exhausted {
            return;
        }
        self.work += 1;
        if self.work > self.cfg.max_work {
            self.exhausted = true;
            return;
        }
        if values.iter().all(|v| !v.is_nan()) {
            if let Some(p) = self.polish(values.clone(), &[]) {
                self.points.push(p);
            }
            return;
        }
        // Minors with a single open unknown, fewest total unknowns first.
        let mut open: Vec<(usize, usize)> = self
            .inside
            .iter()
            .enumerate()
            .filter_map(|(s, ins)| {
                let mut free = ins.iter().filter(|&&k| values[k].is_nan());
                match (free.next(), free.next()) {
                    (Some(&k), None) => Some((s, k)),
                    _ => None,
                }
            })
            .collect();
        open.sort_by_key(|&(s, _)| self.inside[s].len());
        for (s, k) in open {
            match self.roots(values, s, k) {
                Roots::Uninformative => continue,
                Roots::Values(rs) => {
                    for r in rs {
                        values[k] = r;
                        if self.consistent(values) {
                            self.propagate(values);
                        }
                    }
                    values[k] = f64::NAN;
                    return;
                }
            }
        }
        if let Some(pairs) = self.bivariate(values) {
            for (u, w, a, b) in pairs {
                values[u] = a;
                values[w] = b;
                if self.consistent(values) {
                    self.propagate(values);
                }
            }
            return;
        }
        // Range analysis: an open angle entry is -cos(π/n) for an integer n.
        // Branch on the angle with the fewest values passing the minors that
        // it leaves with at most one open unknown.
        let angles: Vec<usize> = (0..values.len())
            .filter(|&k| values[k].is_nan() && self.g.unknowns[k].kind == UnknownKind::Angle)
            .collect();
        if !angles.is_empty() {
            let (k, ns) = angles
                .into_iter()
                .map(|k| (k, self.feasible_angles(values, k)))
                .min_by_key(|(_, ns)| ns.len())
                .unwrap();
            for n in ns {
                values[k] = angle_entry(n);
                self.propagate(values);
            }
            values[k] = f64::NAN;
            return;
        }
        self.multistart(values);
    }

    /// Admissible roots of the minor `s` as a quadratic in unknown `k`.
    fn roots(&self, values: &mut [f64], s: usize, k: usize) -> Roots {
        let idx = &minor_complements()[s];
        let mut f = |t: f64| {
            values[k] = t;
            let m = self.matrix(values);
            let mut a = m.principal(idx);
            crate::diagram::det_f64(&mut a, 6)
        };
        let (f0, f1, fm) = (f(0.0), f(1.0), f(-1.0));
        values[k] = f64::NAN;
        let scale = {
            let mut probe = values.to_vec();
            probe[k] = -2.0;
            for v in probe.iter_mut() {
                if v.is_nan() {
                    *v = -2.0;
                }
            }
            let m = self.matrix(&probe);
            let a = m.principal(idx);
            a.chunks(6)
                .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
                .product::<f64>()
        };
        let c0 = f0 / scale;
        let c1 = (f1 - fm) / 2.0 / scale;
        let c2 = ((f1 + fm) / 2.0 - f0) / scale;
        let eps = 1e-11;
        let mut out = Vec::new();
        if c2.abs() < eps && c1.abs() < eps {
            if c0.abs() < self.cfg.tol_kill {
                return Roots::Uninformative;
            }
        } else if c2.abs() < eps {
            out.push(-c0 / c1);
        } else {
            let disc = c1 * c1 - 4.0 * c2 * c0;
            let tiny = 1e-10 * (c1 * c1 + (4.0 * c2 * c0).abs());
            if disc >= -tiny {
                let sq = disc.max(0.0).sqrt();
                let q = -0.5 * (c1 + c1.signum() * sq);
                if q == 0.0 {
                    out.push(0.0);
                } else {
                    out.push(q / c2);
                    out.push(c0 / q);
                }
            }
        }
        let u = &self.g.unknowns[k];
        out.retain(|&r| admits(u, r));
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        Roots::Values(out)
    }

    /// Common solutions of the minors with exactly two open unknowns `u`,
    /// `w`: the resultant in `w` of two such minors has the `u`-coordinates
    /// among its real roots. Tries pairs of open unknowns until one admits a
    /// nonvanishing resultant; `None` if there is none. On return `values`
    /// is unchanged.
    fn bivariate(&mut self, values: &mut [f64]) -> Option<Vec<(usize, usize, f64, f64)>> {
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for s in 0..28 {
            let free: Vec<usize> = self.inside[s].iter().copied().filter(|&k| values[k].is_nan()).collect();
            if let [u, w] = free[..] {
                groups.entry((u, w)).or_default().push(s);
            }
        }
        let mut groups: Vec<((usize, usize), Vec<usize>)> =
            groups.into_iter().filter(|(_, ss)| ss.len() >= 2).collect();
        groups.sort_by_key(|(_, ss)| std::cmp::Reverse(ss.len()));
        for ((u, w), minors) in groups {
            self.work += 1;
            let polys: Vec<[[f64; 3]; 3]> = minors.iter().map(|&s| self.biquadratic(values, s, u, w)).collect();
            let Some(us) = self.eliminate(&polys, u) else {
                continue;
            };
            let mut out = Vec::new();
            for a in us {
                // w from the first minor that is not identically zero at u = a
                let ws = polys.iter().find_map(|c| {
                    let q: Vec<f64> = (0..3).map(|j| (0..3).map(|i| c[i][j] * a.powi(i as i32)).sum()).collect();
                    elim::real_roots(&q, elim::magnitude(&q).max(1e-300)).filter(|_| elim::magnitude(&q) > 1e-12)
                });
                let Some(ws) = ws else { continue };
                for b in ws {
                    if !admits(&self.g.unknowns[w], b) {
                        continue;
                    }
                    if let Some((a, b)) = self.polish_pair(values, &minors, (u, w), (a, b)) {
                        if !out.iter().any(|&(_, _, x, y): &(usize, usize, f64, f64)| (x - a).abs() < 1e-9 && (y - b).abs() < 1e-9) {
                            out.push((u, w, a, b));
                        }
                    }
                }
            }
            return Some(out);
        }
        None
    }

    /// `c[i][j]` of `u^i w^j` in the normalized minor `s`.
    fn biquadratic(&self, values: &mut [f64], s: usize, u: usize, w: usize) -> [[f64; 3]; 3] {
        let idx = &minor_complements()[s];
        let scale = self.scale(values, s);
        let c = elim::biquadratic(|a, b| {
            values[u] = a;
            values[w] = b;
            let mut m = self.matrix(values).principal(idx);
            crate::diagram::det_f64(&mut m, 6) / scale
        });
        values[u] = f64::NAN;
        values[w] = f64::NAN;
        c
    }

    /// Product of row norms of minor `s`, open unknowns read as -2.
    fn scale(&self, values: &[f64], s: usize) -> f64 {
        let probe: Vec<f64> = values.iter().map(|v| if v.is_nan() { -2.0 } else { *v }).collect();
        let a = self.matrix(&probe).principal(&minor_complements()[s]);
        a.chunks(6)
            .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
            .product::<f64>()
    }

    /// Admissible `u` roots of the first pair of minors with a nonvanishing
    /// resultant, or `None` if every pairwise resultant vanishes.
    fn eliminate(&self, polys: &[[[f64; 3]; 3]], u: usize) -> Option<Vec<f64>> {
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                let r = elim::resultant_w(&polys[i], &polys[j]);
                let scale = elim::magnitude(polys[i].as_flattened()) * elim::magnitude(polys[j].as_flattened());
                let scale = scale * scale;
                if elim::magnitude(&r) <= 1e-12 * scale {
                    continue;
                }
                let roots = elim::real_roots(&r, scale)?;
                return Some(
                    roots
                        .into_iter()
                        .filter(|&a| admits_loosely(&self.g.unknowns[u], a))
                        .collect(),
                );
            }
        }
        None
    }

    /// Gauss–Newton on the given minors over two unknowns.
    fn polish_pair(
        &self,
        values: &mut [f64],
        minors: &[usize],
        (u, w): (usize, usize),
        (mut a, mut b): (f64, f64),
    ) -> Option<(f64, f64)> {
        let mut eval = |a: f64, b: f64| -> Vec<f64> {
            values[u] = a;
            values[w] = b;
            let m = self.matrix(values);
            minors
                .iter()
                .map(|&s| m.normalized_minor(&minor_complements()[s]))
                .collect()
        };
        for _ in 0..30 {
            let r = eval(a, b);
            if r.iter().all(|v| v.abs() < 1e-14) {
                break;
            }
            let (ha, hb) = (1e-7 * a.abs().max(1.0), 1e-7 * b.abs().max(1.0));
            let (ra, rb) = (eval(a + ha, b), eval(a, b + hb));
            // normal equations of the 2-column Jacobian
            let (mut s11, mut s12, mut s22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for k in 0..r.len() {
                let ja = (ra[k] - r[k]) / ha;
                let jb = (rb[k] - r[k]) / hb;
                s11 += ja * ja;
                s12 += ja * jb;
                s22 += jb * jb;
                g1 += ja * r[k];
                g2 += jb * r[k];
            }
            let det = s11 * s22 - s12 * s12;
            if det.abs() < 1e-30 * (s11 * s22).max(1e-300) {
                break;
            }
            let da = (s22 * g1 - s12 * g2) / det;
            let db = (s11 * g2 - s12 * g1) / det;
            if !da.is_finite() || da.abs() > 0.1 * a.abs().max(1.0) || db.abs() > 0.1 * b.abs().max(1.0) {
                break;
            }
            a -= da;
            b -= db;
            if da.abs() < 1e-15 * a.abs().max(1.0) && db.abs() < 1e-15 * b.abs().max(1.0) {
                break;
            }
        }
        let r = eval(a, b);
        values[u] = f64::NAN;
        values[w] = f64::NAN;
        let ok = admits(&self.g.unknowns[u], a)
            && admits(&self.g.unknowns[w], b)
            && r.iter().all(|v| v.abs() <= self.cfg.tol_branch);
        ok.then_some((a, b))
    }

    /// Integers `n` for which setting unknown `k` to `-cos(π/n)` leaves
    /// every minor with at most one open unknown solvable.
    fn feasible_angles(&mut self, values: &mut [f64], k: usize) -> Vec<u32> {
        // Only minors through k can change status.
        let touched: Vec<usize> = (0..28).filter(|&s| self.inside[s].contains(&k)).collect();
        let mut out = Vec::new();
        for n in 7..=self.cfg.max_n {
            self.work += 1;
            values[k] = angle_entry(n);
            let m = self.matrix(values);
            let ok = touched.iter().all(|&s| {
                let mut free = self.inside[s].iter().filter(|&&u| values[u].is_nan());
                match (free.next(), free.next()) {
                    (None, _) => {
                        m.normalized_minor(&minor_complements()[s]).abs() <= self.cfg.tol_branch
                    }
                    (Some(&u), None) => {
                        !matches!(self.roots(values, s, u), Roots::Values(ref r) if r.is_empty())
                    }
                    _ => true,
                }
            });
            if ok {
                out.push(n);
            }
        }
        values[k] = f64::NAN;
        out
    }

    /// Stage B over the open unknowns, others fixed.
    fn multistart(&mut self, values: &[f64]) {
        self.multistart = true;
        let open: Vec<usize> = (0..values.len()).filter(|&k| values[k].is_nan()).collect();
        let grids: Vec<&[f64]> = open
            .iter()
            .map(|&k| match self.g.unknowns[k].kind {
                UnknownKind::Length => self.cfg.length_grid.as_slice(),
                UnknownKind::Angle => self.cfg.angle_grid.as_slice(),
            })
            .collect();
        let total: usize = grids.iter().map(|g| g.len()).product();
        let mut found: Vec<Vec<f64>> = Vec::new();
        for mut code in 0..total {
            self.work += 1;
            if self.work > self.cfg.max_work {
                self.exhausted = true;
                return;
            }
            let mut start = values.to_vec();
            for (&k, g) in open.iter().zip(&grids) {
                start[k] = g[code % g.len()];
                code /= g.len();
            }
            if let Some(p) = self.polish(start, &open) {
                if !found
                    .iter()
                    .any(|q| q.iter().zip(&p).all(|(a, b)| (a - b).abs() < self.cfg.tol_dedup))
                {
                    found.push(p);
                }
            }
        }
        self.points.extend(found);
    }

    /// Damped Gauss–Newton on all 28 normalized minors over the unknowns in
    /// `free` (all unknowns when empty). Returns the converged point if it
    /// stays in the domain and meets the residual tolerance.
    fn polish(&self, mut x: Vec<f64>, free: &[usize]) -> Option<Vec<f64>> {
        let free: Vec<usize> = if free.is_empty() {
            (0..x.len()).collect()
        } else {
            free.to_vec()
        };
        let residuals = |x: &[f64]| -> Vec<f64> {
            let m = self.matrix(x);
            minor_complements()
                .iter()
                .map(|idx| m.normalized_minor(idx))
                .collect()
        };
        let norm = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();
        let mut r = residuals(&x);
        let mut lambda = 1e-3;
        for _ in 0..self.cfg.max_iterations {
            if r.iter().all(|v| v.abs() < self.cfg.tol_residual * 1e-2) {
                break;
            }
            let n = free.len();
            let mut jac = DMatrix::<f64>::zeros(28, n);
            for (c, &k) in free.iter().enumerate() {
                let h = 1e-6 * x[k].abs().max(1.0);
                let mut xp = x.clone();
                xp[k] += h;
                let mut xm = x.clone();
                xm[k] -= h;
                let (rp, rm) = (residuals(&xp), residuals(&xm));
                for i in 0..28 {
                    jac[(i, c)] = (rp[i] - rm[i]) / (2.0 * h);
                }
            }
            let rv = DVector::from_column_slice(&r);
            let jt = jac.transpose();
            let jtj = &jt * &jac;
            let g = &jt * &rv;
            let mut improved = false;
            for _ in 0..12 {
                let mut a = jtj.clone();
                for i in 0..n {
                    a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
                }
                let Some(step) = a.cholesky().map(|c| c.solve(&(-&g))) else {
                    lambda *= 10.0;
                    continue;
                };
                let mut xn = x.clone();
                for (c, &k) in free.iter().enumerate() {
                    xn[k] += step[c];
                }
                let rn = residuals(&xn);
                if norm(&rn) < norm(&r) {
                    x = xn;
                    r = rn;
                    lambda = (lambda / 10.0).max(1e-12);
                    improved = true;
                    break;
                }
                lambda *= 10.0;
            }
            if !improved || free.iter().any(|&k| x[k] < self.cfg.length_box.0 * 4.0) {
                break;
            }
        }
        let ok = r.iter().all(|v| v.abs() < self.cfg.tol_residual)
            && x.iter().zip(&self.g.unknowns).all(|(&v, u)| admits(u, v));
        ok.then_some(x)
    }

    /// Stages C and D.
    fn certify(&self, mut x: Vec<f64>) -> Option<SolvedGram> {
        let mut angle_integers = BTreeMap::new();
        for (k, u) in self.g.unknowns.iter().enumerate() {
            if u.kind == UnknownKind::Angle {
                let n = (std::f64::consts::PI / (-x[k]).acos()).round();
                if !(7.0..=self.cfg.max_n as f64).contains(&n) {
                    return None;
                }
                let exact = -(std::f64::consts::PI / n).cos();
                if (exact - x[k]).abs() > self.cfg.tol_angle {
                    return None;
                }
                x[k] = exact;
                angle_integers.insert(u.pair, n as u32);
            }
        }
        let lengths_free: Vec<usize> = (0..x.len())
            .filter(|&k| self.g.unknowns[k].kind == UnknownKind::Length)
            .collect();
        let before = x.clone();
        if !lengths_free.is_empty() {
            x = self.polish(x, &lengths_free)?;
        }
        let values = self.matrix(&x);
        let residual = values.max_residual();
        if residual > self.cfg.tol_residual {
            return None;
        }
        let signature = signature_with(&values, self.cfg.tol_eigen)?;
        if signature != (4, 1) {
            return None;
        }
        let mut radius = [[0.0; 8]; 8];
        for (k, u) in self.g.unknowns.iter().enumerate() {
            let (i, j) = (u.pair.0 as usize - 1, u.pair.1 as usize - 1);
            let r = ((x[k] - before[k]).abs()).max(residual).max(f64::EPSILON * x[k].abs());
            radius[i][j] = r;
            radius[j][i] = r;
        }
        let lengths = self
            .g
            .unknowns
            .iter()
            .zip(&x)
            .filter(|(u, _)| u.kind == UnknownKind::Length)
            .map(|(u, &v)| (u.pair, -v))
            .collect();
        Some(SolvedGram {
            values,
            radius,
            angle_integers,
            lengths,
            signature,
            residual,
        })
    }
}

/// Whether two disjoint facet sets with only right angles between them are
/// both non-elliptic. In a compact solution each would carry a negative
/// eigenvalue, but no principal submatrix of a signature (4,1) matrix has
/// two. Non-elliptic is decided structurally: a dotted edge, a connected
/// set of three or more facets with an open angle edge, or a known cosine
/// matrix that is not positive definite.
fn orthogonal_nonelliptic_pair(g: &GramCandidate) -> bool {
    let labels = g.vector.labels();
    let mut nb = [0u8; 8];
    for (slot, l) in labels.iter().enumerate() {
        if l.angle() != Some(2) {
            let (i, j) = PairIndex::pair(slot);
            nb[i as usize - 1] |= 1 << (j - 1);
            nb[j as usize - 1] |= 1 << (i - 1);
        }
    }
    let neighbours = |mask: u8| (0..8).filter(|b| mask >> b & 1 == 1).fold(0u8, |m, b| m | nb[b]);
    let base = g.numeric(&vec![0.0; g.unknowns.len()]);
    let mut elliptic = [true; 256];
    let mut minimal = Vec::new();
    for mask in 1..=255u8 {
        let idx: Vec<usize> = (0..8).filter(|b| mask >> b & 1 == 1).collect();
        if idx.iter().any(|&b| !elliptic[(mask ^ (1 << b)) as usize]) {
            elliptic[mask as usize] = false;
            continue;
        }
        // every proper subset is elliptic, so only a connected set can fail
        let mut reached = 1u8 << idx[0];
        loop {
            let next = reached | (neighbours(reached) & mask);
            if next == reached {
                break;
            }
            reached = next;
        }
        if reached != mask {
            continue;
        }
        let mut open = false;
        let mut dotted = false;
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                let l = labels[PairIndex::slot(i as u8 + 1, j as u8 + 1)];
                open |= l == CoxeterLabel::SEVEN;
                dotted |= l == CoxeterLabel::INFINITY;
            }
        }
        let ok = if dotted {
            false
        } else if open {
            idx.len() <= 2
        } else {
            let n = idx.len();
            let m = DMatrix::from_row_slice(n, n, &base.principal(&idx));
            m.cholesky().is_some_and(|c| (0..n).all(|i| c.l_dirty()[(i, i)] > 1e-6))
        };
        if !ok {
            elliptic[mask as usize] = false;
            minimal.push(mask);
        }
    }
    minimal.iter().enumerate().any(|(x, &a)| {
        minimal[x + 1..]
            .iter()
            .any(|&b| a & b == 0 && neighbours(a) & b == 0)
    })
}

enum Roots {
    Uninformative,
    Values(Vec<f64>),
}

fn angle_entry(n: u32) -> f64 {
    -(std::f64::consts::PI / n as f64).cos()
}

/// Domain test with slack for roots that are polished later.
fn admits_loosely(u: &Unknown, v: f64) -> bool {
    v.is_finite()
        && match u.kind {
            UnknownKind::Length => v < -1.0 + 1e-6,
            UnknownKind::Angle => v > -1.0 - 1e-6 && v <= super::ANGLE_UPPER + 1e-6,
        }
}

fn admits(u: &Unknown, v: f64) -> bool {
    v.is_finite() && u.admits(v)
}
