use std::collections::BTreeSet;
use std::sync::OnceLock;

use hypercox::dataset::polytope;
use hypercox::label::CoxeterLabel;
use hypercox::pasting::{
    canonical_form, canonicalize, enumerate_raw, enumerate_seilper, Mode, PasteOptions, PotentialVector,
    SymmetryCanon,
};
use hypercox::CatalogSet;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn cats() -> &'static CatalogSet {
    static CATS: OnceLock<CatalogSet> = OnceLock::new();
    CATS.get_or_init(CatalogSet::generate)
}

fn seilper(k: u32, opts: &PasteOptions) -> Vec<PotentialVector> {
    enumerate_seilper(&polytope(k).unwrap(), cats(), opts).unwrap().vectors
}

#[test]
fn p1_counts_in_both_modes() {
    assert_eq!(seilper(1, &PasteOptions::new(Mode::Basis)).len(), 8);
    assert_eq!(seilper(1, &PasteOptions::new(Mode::Direct)).len(), 130);
}

#[test]
fn p1_join_order_invariance() {
    let p = polytope(1).unwrap();
    let reference = seilper(1, &PasteOptions::new(Mode::Direct));
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..5 {
        let mut order: Vec<usize> = (0..p.chunks.len()).collect();
        order.shuffle(&mut rng);
        let mut opts = PasteOptions::new(Mode::Direct);
        opts.order = Some(order.clone());
        assert_eq!(seilper(1, &opts), reference, "order {order:?}");
    }
}

#[test]
fn p1_pruned_equals_unpruned_replay() {
    let p = polytope(1).unwrap();
    for mode in [Mode::Basis, Mode::Direct] {
        let pruned = enumerate_raw(&p, cats(), &PasteOptions::new(mode)).unwrap().0;
        let mut opts = PasteOptions::new(mode);
        opts.unpruned = true;
        let (replayed, stats) = enumerate_raw(&p, cats(), &opts).unwrap();
        assert_eq!(pruned, replayed);
        // without pruning every layer is at least as large
        let (_, pruned_stats) = enumerate_raw(&p, cats(), &PasteOptions::new(mode)).unwrap();
        for (a, b) in pruned_stats.layer_rows.iter().zip(&stats.layer_rows) {
            assert!(a <= b);
        }
    }
}

#[test]
fn spilling_and_small_budgets_do_not_change_results() {
    let reference = seilper(2, &PasteOptions::new(Mode::Direct));
    let dir = tempfile::tempdir().unwrap();
    let mut opts = PasteOptions::new(Mode::Direct);
    opts.row_budget = 64;
    let recursed = enumerate_seilper(&polytope(2).unwrap(), cats(), &opts).unwrap();
    assert_eq!(recursed.vectors, reference);
    opts.spill_dir = Some(dir.path().to_path_buf());
    let spilled = enumerate_seilper(&polytope(2).unwrap(), cats(), &opts).unwrap();
    assert_eq!(spilled.vectors, reference);
    assert!(spilled.stats.spilled_batches > 0);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn basis_mode_needs_a_basis() {
    assert!(enumerate_seilper(&polytope(34).unwrap(), cats(), &PasteOptions::new(Mode::Basis)).is_err());
}

#[test]
fn seilper_vectors_are_canonical_and_sorted() {
    let p = polytope(3).unwrap();
    let canon = SymmetryCanon::new(&p.symmetry_group);
    let v = seilper(3, &PasteOptions::new(Mode::Direct));
    assert!(v.windows(2).all(|w| w[0] < w[1]));
    for x in &v {
        assert_eq!(canonical_form(*x, &canon), *x);
    }
}

fn any_vector() -> impl Strategy<Value = PotentialVector> {
    proptest::collection::vec(2u8..=8, 28).prop_map(|codes| {
        let labels: Vec<CoxeterLabel> = codes.into_iter().map(CoxeterLabel::from_code).collect();
        PotentialVector::from_labels(&labels).unwrap()
    })
}

proptest! {
    #[test]
    fn canonicalization_is_idempotent_and_orbit_minimal(v in any_vector(), k in prop::sample::select(vec![1u32, 7, 34])) {
        let p = polytope(k).unwrap();
        let canon = SymmetryCanon::new(&p.symmetry_group);
        let c = canonical_form(v, &canon);
        prop_assert_eq!(canonical_form(c, &canon), c);
        // the orbit through matrix relabeling has the same least member
        let orbit: BTreeSet<PotentialVector> = p.symmetry_group.iter().map(|s| v.permuted(s)).collect();
        prop_assert_eq!(*orbit.first().unwrap(), c);
        prop_assert!(orbit.contains(&c));
        for s in &p.symmetry_group {
            prop_assert_eq!(canonical_form(v.permuted(s), &canon), c);
        }
        prop_assert_eq!(canonicalize(&[v, c], &canon), vec![c]);
    }
}
