use hypercox::dataset::polytope;
use hypercox::gram::{
    instantiate, realize, signature, solve, solve_for, verify, GramMatrix, SolvedGram, SolverConfig,
};
use hypercox::label::CoxeterLabel;
use hypercox::pasting::PotentialVector;
use hypercox::polytope::{PairIndex, PolytopeData};

const P1_54: &str = "5,2,2,2,2,2,2,3,2,3,3,2,2,2,2,2,2,INF,2,INF,INF,INF,2,INF,2,2,2,INF";
const P34_2: &str = "2,2,2,2,2,2,INF,2,2,2,4,INF,2,2,4,INF,2,2,INF,2,4,2,2,2,3,2,3,3";

/// The doubled Gram matrix shown for the one case of P_17 left to the last
/// round, halved: `-1/2` is a 3, `-1/√2` a 4, `x_i` divergent, `h_1` an
/// unknown angle.
fn p17_blue() -> PotentialVector {
    let rows = [
        "1 3 2 3 3 2 2 INF",
        "3 1 7 2 2 2 2 2",
        "2 7 1 2 2 2 4 2",
        "3 2 2 1 INF 4 3 2",
        "3 2 2 INF 1 4 3 2",
        "2 2 2 4 4 1 INF INF",
        "2 2 4 3 3 INF 1 2",
        "INF 2 2 2 2 INF 2 1",
    ];
    let m: Vec<Vec<&str>> = rows.iter().map(|r| r.split(' ').collect()).collect();
    let labels: Vec<CoxeterLabel> = PairIndex::pairs()
        .iter()
        .map(|&(i, j)| m[i as usize - 1][j as usize - 1].parse().unwrap())
        .collect();
    PotentialVector::from_labels(&labels).unwrap()
}

fn lengths_all(s: &SolvedGram, v: f64) -> bool {
    !s.lengths.is_empty() && s.lengths.values().all(|l| (l - v).abs() < 1e-8)
}

fn solutions(p: &PolytopeData, v: &str) -> Vec<SolvedGram> {
    let v: PotentialVector = v.parse().unwrap();
    solve_for(p, &instantiate(&v), &SolverConfig::default()).solutions
}

#[test]
fn p17_blue_case_unknowns() {
    let g = instantiate(&p17_blue());
    assert_eq!(g.angle_unknowns().count(), 1);
    assert_eq!(g.length_unknowns().count(), 4);
}

#[test]
fn p17_blue_case_minors_match_displayed_polynomials() {
    // Unknowns in slot order: x_1 (1,8), h (2,3), x_2 (4,5), x_3 (6,7), x_4 (6,8).
    // The angle entry is y = -h/2 and the displayed minors are of the doubled
    // matrix, so 64 det = 8 p.
    let g = instantiate(&p17_blue());
    let pairs: Vec<(u8, u8)> = g.unknowns.iter().map(|u| u.pair).collect();
    assert_eq!(pairs, [(1, 8), (2, 3), (4, 5), (6, 7), (6, 8)]);
    let sys = g.residual_system();
    let r2 = std::f64::consts::SQRT_2;
    // the first display, with its stray "5b" read as 5 x_2
    let first = |x: f64, h: f64| {
        -2.0 + 5.0 * x - 3.0 * x * x - r2 * h + r2 * x * h - 2.0 * x * h * h + 2.0 * x * x * h * h
    };
    let second = |x: f64, h: f64| {
        -4.0 + 10.0 * x - 6.0 * x * x + h * h - 3.0 * x * h * h + 2.0 * x * x * h * h
    };
    // The displayed matrix gives the first polynomial from deleting {6,8}
    // and the second from deleting {7,8}.
    let m68 = &sys[PairIndex::slot(6, 8)];
    let m78 = &sys[PairIndex::slot(7, 8)];
    for &(x, h) in &[(-1.3, 1.85), (-2.0, 1.9), (-1.1, 1.95), (0.4, 0.3)] {
        let at = [0.0, -h / 2.0, x, 0.0, 0.0];
        assert!((8.0 * m68.eval(&at) - first(x, h)).abs() < 1e-12);
        assert!((8.0 * m78.eval(&at) - second(x, h)).abs() < 1e-12);
    }
}

#[test]
fn p17_blue_case_critical_point_is_not_an_angle() {
    // Common zero of both displays near h ≈ 1.81129, x_2 ≈ -1.28078.
    let r2 = std::f64::consts::SQRT_2;
    let f = |x: f64, h: f64| {
        [
            -2.0 + 5.0 * x - 3.0 * x * x - r2 * h + r2 * x * h - 2.0 * x * h * h + 2.0 * x * x * h * h,
            -4.0 + 10.0 * x - 6.0 * x * x + h * h - 3.0 * x * h * h + 2.0 * x * x * h * h,
        ]
    };
    let (mut x, mut h) = (-1.28, 1.81);
    for _ in 0..50 {
        let [a, b] = f(x, h);
        let e = 1e-7;
        let [ax, bx] = f(x + e, h);
        let [ah, bh] = f(x, h + e);
        let (j11, j12, j21, j22) = ((ax - a) / e, (ah - a) / e, (bx - b) / e, (bh - b) / e);
        let det = j11 * j22 - j12 * j21;
        x -= (a * j22 - b * j12) / det;
        h -= (j11 * b - j21 * a) / det;
    }
    assert!((h - 1.81129).abs() < 1e-5 && (x + 1.28078).abs() < 1e-5, "{h} {x}");
    let n = std::f64::consts::PI / (h / 2.0).acos();
    assert!((n - n.round()).abs() > 0.1);
}

#[test]
fn p17_blue_case_has_no_solution() {
    let r = solve(&instantiate(&p17_blue()), &SolverConfig::default());
    assert!(r.is_resolved());
    assert!(r.solutions.is_empty());
}

#[test]
fn p1_54_golden_ratio() {
    let p = polytope(1).unwrap();
    let s = solutions(&p, P1_54);
    assert_eq!(s.len(), 1);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert_eq!(s[0].lengths.len(), 6);
    assert!(lengths_all(&s[0], phi));
    assert!(verify(&s[0], &p));
}

#[test]
fn p34_2_dotted_values() {
    let p = polytope(34).unwrap();
    let s = solutions(&p, P34_2);
    assert_eq!(s.len(), 1);
    let a = (3.0 + 5f64.sqrt()).sqrt() / 2.0;
    assert!(lengths_all(&s[0], a));
}

#[test]
fn certified_solutions_have_vanishing_minors() {
    let p = polytope(1).unwrap();
    let s = &solutions(&p, P1_54)[0];
    assert!(s.values.max_residual() <= 1e-9);
    assert_eq!(s.signature, (4, 1));
    for i in 0..8 {
        for j in 0..8 {
            assert!(i == j || s.values.get(i, j) <= 0.0);
        }
    }
}

#[test]
fn realization_round_trip() {
    let p = polytope(34).unwrap();
    let s = &solutions(&p, P34_2)[0];
    let r = realize(s).unwrap();
    for i in 0..8 {
        assert!((r.inner(i, i) - 1.0).abs() < 1e-9);
    }
    assert!(r.gram().distance(&s.values) < 1e-9);
}

#[test]
fn positive_definite_matrix_is_not_realizable() {
    let mut values = GramMatrix::identity();
    values.set(0, 1, -0.5);
    let s = SolvedGram {
        values,
        radius: [[0.0; 8]; 8],
        angle_integers: Default::default(),
        lengths: Default::default(),
        signature: (5, 0),
        residual: 0.0,
    };
    assert!(realize(&s).is_err());
}

#[test]
fn lanner_block_with_orthogonal_dummies_fails_verify() {
    // A compact simplex diagram [5,3,5] on facets 1..4, the rest orthogonal.
    let mut values = GramMatrix::identity();
    let c5 = -(std::f64::consts::PI / 5.0).cos();
    values.set(0, 1, c5);
    values.set(1, 2, -0.5);
    values.set(2, 3, c5);
    let s = SolvedGram {
        values,
        radius: [[0.0; 8]; 8],
        angle_integers: Default::default(),
        lengths: Default::default(),
        signature: (4, 1),
        residual: 0.0,
    };
    assert_ne!(signature(&values), Some((4, 1)));
    for k in [1, 13, 34] {
        assert!(!verify(&s, &polytope(k).unwrap()));
    }
}

#[test]
fn p21_angles_are_twelfths() {
    let p = polytope(21).unwrap();
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/p21.txt")).unwrap();
    let s = solutions(&p, text.trim());
    assert_eq!(s.len(), 1);
    let ns: Vec<u32> = s[0].angle_integers.values().copied().collect();
    assert_eq!(ns, [12, 12]);
}

#[test]
fn solved_gram_json_round_trip() {
    let p = polytope(1).unwrap();
    let s = &solutions(&p, P1_54)[0];
    let text = serde_json::to_string(s).unwrap();
    let back: SolvedGram = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, s);
}
