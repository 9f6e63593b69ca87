//! Property tests over randomly generated posets, algebras and names.
#![allow(clippy::needless_range_loop)]

use latsheaf::blo::Blo;
use latsheaf::budget::Budget;
use latsheaf::congruence::{congruence_from_ideal, lattice_theta, quotient};
use latsheaf::corpus::lattice_orders_up_to;
use latsheaf::hom::enumerate_homomorphisms;
use latsheaf::ideal::{enumerate_ideals, ideal_generated};
use latsheaf::kj::{names_upto, KjForcing};
use latsheaf::lattice::FiniteLattice;
use latsheaf::mv::MvAlgebra;
use latsheaf::mvset::{name_universe, Evaluator, SubsetMode};
use latsheaf::poset::Poset;
use latsheaf::priestley::{duality_unit, spectrum};
use latsheaf::sheaf::{build_sheaf, eta, regular_ideal_open_iso, sections, StalkMode};
use latsheaf::site::build_site;
use proptest::prelude::*;

/// A random poset built through its linear-extension presentation: element
/// `k` sits above a randomly chosen downward-closed subset of `0..k`.
fn arb_poset(max_points: usize) -> impl Strategy<Value = Poset> {
    (1..=max_points)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<u64>(), n)))
        .prop_map(|(n, picks)| {
            let mut leq = vec![vec![false; n]; n];
            for (i, row) in leq.iter_mut().enumerate() {
                row[i] = true;
            }
            for k in 1..n {
                let mask = picks[k] & ((1 << k) - 1);
                for i in 0..k {
                    if mask & (1 << i) != 0 {
                        // close downward through the existing order
                        for j in 0..=i {
                            if leq[j][i] {
                                leq[j][k] = true;
                            }
                        }
                    }
                }
            }
            Poset::new(leq).expect("construction preserves the order axioms")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn duality_unit_is_an_isomorphism(p in arb_poset(5)) {
        let l = p.downset_lattice();
        let (space, downs, _unit) = duality_unit(&l).expect("unit must be an isomorphism");
        prop_assert_eq!(space.len(), l.join_irreducibles().len());
        prop_assert_eq!(space.len(), p.size());
        prop_assert_eq!(downs.lattice.size(), l.size());
    }

    #[test]
    fn theta_coincides_with_generated_congruence(p in arb_poset(4)) {
        let l = p.downset_lattice();
        for ideal in enumerate_ideals(&l, false) {
            let theta = lattice_theta(&l, &ideal).expect("congruence on distributive hosts");
            let generated = congruence_from_ideal(&l, &ideal);
            prop_assert_eq!(&theta, &generated);
            // on distributive hosts the zero class recovers the ideal
            prop_assert_eq!(&theta.zero_class(&l), &ideal);
        }
    }

    #[test]
    fn quotients_have_one_element_per_block(p in arb_poset(4)) {
        let l = p.downset_lattice();
        let host = Blo::from_lattice(l.clone()).unwrap();
        for ideal in enumerate_ideals(&l, false) {
            let theta = congruence_from_ideal(&l, &ideal);
            let (q, pi) = quotient(&host, &theta).unwrap();
            prop_assert_eq!(q.size(), theta.num_blocks());
            prop_assert!(pi.is_surjective_onto(q.size()));
        }
    }

    #[test]
    fn sheaf_sections_and_supports(p in arb_poset(4)) {
        let l = p.downset_lattice();
        if l.size() > 12 {
            return Ok(());
        }
        let host = Blo::from_lattice(l).unwrap();
        let sheaf = build_sheaf(&host, &[], StalkMode::Congruence).unwrap();
        let gamma = sections(&sheaf, 100_000).unwrap();
        // expected size: the product of stalk sizes
        let product: usize = sheaf.stalks().iter().map(|s| s.algebra.size()).product();
        prop_assert_eq!(gamma.len(), product.max(1));
        let diag = eta(&sheaf, &gamma);
        prop_assert!(diag.injective, "plain lattices embed into their section algebra");
        let report = regular_ideal_open_iso(&sheaf, &gamma);
        prop_assert!(report.bijection_holds());
    }

    #[test]
    fn hom_composition_closure(p in arb_poset(3), q in arb_poset(3)) {
        let a = p.downset_lattice();
        let b = q.downset_lattice();
        let two = FiniteLattice::chain(2);
        let mut budget = Budget::default();
        let ab = enumerate_homomorphisms(&a, &b, &mut budget).unwrap();
        let b2 = enumerate_homomorphisms(&b, &two, &mut budget).unwrap();
        let a2 = enumerate_homomorphisms(&a, &two, &mut budget).unwrap();
        for f in &ab {
            for g in &b2 {
                prop_assert!(a2.contains(&f.then(g)));
            }
        }
    }

    #[test]
    fn kj_restriction_functoriality(p in arb_poset(3)) {
        let site = build_site(p.leq_table().to_vec(), None).unwrap();
        let universe = names_upto(&site, 2, 100_000).unwrap();
        for i in site.points() {
            for a in &universe.per_point[i] {
                for j in site.down(i) {
                    for k in site.down(j) {
                        let chained =
                            a.restrict(&site, j).unwrap().restrict(&site, k).unwrap();
                        prop_assert_eq!(chained, a.restrict(&site, k).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn kj_rank_one_names_count_downsets(p in arb_poset(4)) {
        let site = build_site(p.leq_table().to_vec(), None).unwrap();
        let universe = names_upto(&site, 1, 100_000).unwrap();
        for i in site.points() {
            let down = site.down(i);
            let mut downsets = 0usize;
            for mask in 0u64..(1 << down.len()) {
                let has = |x: usize| mask & (1 << x) != 0;
                let closed = (0..down.len()).all(|a| {
                    !has(a) || (0..down.len()).all(|b| !site.leq(down[b], down[a]) || has(b))
                });
                if closed {
                    downsets += 1;
                }
            }
            prop_assert_eq!(universe.per_point[i].len(), downsets);
        }
    }

    #[test]
    fn mv_equality_laws_over_b4(seed in any::<u64>()) {
        let alg = MvAlgebra::from_boolean(&FiniteLattice::boolean(2)).unwrap();
        let universe = name_universe(&alg, 2, 2, 10_000).unwrap();
        let mut ev = Evaluator::new(&alg, SubsetMode::Standard);
        // sampled triples
        let pick = |s: u64| &universe[(s as usize) % universe.len()];
        let (x, y, z) = (pick(seed), pick(seed >> 13), pick(seed >> 29));
        prop_assert_eq!(ev.equality(x, x).unwrap(), alg.one());
        prop_assert_eq!(ev.equality(x, y).unwrap(), ev.equality(y, x).unwrap());
        let xy = ev.equality(x, y).unwrap();
        let yz = ev.equality(y, z).unwrap();
        let xz = ev.equality(x, z).unwrap();
        prop_assert!(alg.leq(alg.otimes(xy, yz), xz));
    }
}

/// Exhaustive operator sweeps: every valid single-operator algebra on the
/// small lattices satisfies the dimension-set laws, and its fixed-point part
/// agrees with the empty neat reduct.
#[test]
fn operator_laws_exhaustively_on_small_lattices() {
    let mut algebras = 0;
    for l in [
        FiniteLattice::chain(3),
        FiniteLattice::chain(4),
        FiniteLattice::boolean(2),
    ] {
        let n = l.size();
        let mut table = vec![0usize; n];
        loop {
            if let Ok(a) = Blo::new(l.clone(), vec![table.clone()]) {
                algebras += 1;
                for x in 0..n {
                    for y in 0..n {
                        let dx = a.dimension_set(x);
                        let dy = a.dimension_set(y);
                        for target in [l.meet(x, y), l.join(x, y)] {
                            for i in a.dimension_set(target) {
                                assert!(dx.contains(&i) || dy.contains(&i));
                            }
                        }
                    }
                }
                let zd = a.zd();
                let nr = a.nr(&[]).unwrap();
                assert_eq!(zd.embedding, nr.embedding);
                assert!(zd.embedding.contains(&l.bottom()));
                assert!(zd.embedding.contains(&l.top()));
                // operator-closed ideal generation stays inside the algebra
                for g in 0..n {
                    let ideal = ideal_generated(&a, &[g], true);
                    assert!(ideal.is_blo_ideal(&a));
                }
            }
            // advance the table odometer
            let mut k = 0;
            while k < n {
                table[k] += 1;
                if table[k] < n {
                    break;
                }
                table[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    assert!(algebras > 10, "swept {algebras} valid algebras");
}

/// The congruence lattice is meet-closed and bounded, on every lattice with
/// at most five elements.
#[test]
fn congruence_lattices_are_meet_closed() {
    for l in lattice_orders_up_to(5) {
        let mut budget = Budget::default();
        let cs = latsheaf::congruence::congruence_lattice(&l, &mut budget).unwrap();
        assert!(cs.iter().any(|c| c.is_identity()));
        assert!(cs.iter().any(|c| c.is_universal()));
        for a in &cs {
            for b in &cs {
                assert!(cs.contains(&a.meet(b)));
            }
        }
    }
}

/// Spectra agree between a lattice and any isomorphic relabelling.
#[test]
fn spectrum_is_isomorphism_invariant() {
    let b8 = FiniteLattice::boolean(3);
    let perm = [0usize, 4, 2, 6, 1, 5, 3, 7];
    let leq = (0..8)
        .map(|a| (0..8).map(|b| b8.leq(perm[a], perm[b])).collect())
        .collect();
    let other = FiniteLattice::from_leq(leq).unwrap();
    assert_eq!(
        spectrum(&b8).unwrap().len(),
        spectrum(&other).unwrap().len()
    );
}

/// Forcing at the bottom of a chain site behaves classically for the
/// restricted environment (smoke check tying the evaluators together).
#[test]
fn chain_bottom_point_is_classical() {
    let leq = (0..3).map(|a| (0..3).map(|b| a <= b).collect()).collect();
    let site = build_site(leq, None).unwrap();
    let forcing = KjForcing::new(&site, 2, 100_000).unwrap();
    let phi = latsheaf::formula::parse_formula("(or (mem x y) (not (mem x y)))").unwrap();
    // at the bottom point there are no strictly lower worlds, so excluded
    // middle holds for every environment
    for x in forcing.names_at(0) {
        for y in forcing.names_at(0) {
            let mut env = latsheaf::kj::Env::new();
            env.insert("x".into(), x.clone());
            env.insert("y".into(), y.clone());
            assert!(forcing.forces(0, &phi, &env).unwrap());
        }
    }
}
