use proptest::prelude::*;

use gspec_core::axioms::verify_axioms;
use gspec_core::corpus::{boolean, builtin_example, saturating};
use gspec_core::ideals::{enumerate_ideals, ideal_closure, is_prime, PrimeDef};
use gspec_core::iso::{are_isomorphic, homomorphism_failure};
use gspec_core::localization::{localize, mult_closure};
use gspec_core::modules::{self_module, submodules, verify_bimodule};
use gspec_core::spectrum::{compute_spectrum, generate_topology, is_partial_order, order_structure};
use gspec_core::structure::{decompose_direct, direct_sum};
use gspec_core::FiniteGammaSemiring;

fn small(i: usize) -> FiniteGammaSemiring {
    match i % 5 {
        0 => builtin_example("TRIV").unwrap(),
        1 => builtin_example("B3").unwrap(),
        2 => builtin_example("N3").unwrap(),
        3 => builtin_example("B3⊕B3").unwrap(),
        _ => saturating(3, 3),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn mutated_products_fail_reproducibly(which in 0usize..2, index in 0usize..27, value in 0usize..3) {
        let base = if which == 0 { builtin_example("B3").unwrap() } else { builtin_example("N3").unwrap() };
        let index = index % base.mu_table().len();
        let value = value % base.t_size();
        prop_assume!(base.mu_table()[index] != value);
        let broken = base.with_mu_entry(index, value);
        let report = verify_axioms(&broken);
        prop_assert_eq!(&report, &verify_axioms(&broken));
        for v in report.all_violations() {
            prop_assert!(v.replays_on(&broken), "{:?} does not replay", v);
        }
        prop_assert_eq!(report.pass, report.violations.is_empty());
    }

    #[test]
    fn mutated_sums_fail_reproducibly(which in 0usize..2, x in 0usize..3, y in 0usize..3, value in 0usize..3) {
        let base = if which == 0 { builtin_example("B3").unwrap() } else { builtin_example("N3").unwrap() };
        let t = base.t_size();
        let (x, y, value) = (x % t, y % t, value % t);
        prop_assume!(base.add(x, y) != value);
        let broken = base.with_add_entry(x, y, value);
        let report = verify_axioms(&broken);
        for v in report.all_violations() {
            prop_assert!(v.replays_on(&broken));
        }
    }

    #[test]
    fn ideal_closure_is_least(i in 0usize..5, gens in proptest::collection::vec(0usize..4, 0..3)) {
        let s = small(i);
        let gens: Vec<usize> = gens.into_iter().map(|g| g % s.t_size()).collect();
        let closed = ideal_closure(&s, gens.iter().copied());
        let lattice = enumerate_ideals(&s);
        prop_assert!(lattice.ideals().contains(&closed));
        prop_assert!(gens.iter().all(|&g| closed.contains(g)));
        for other in lattice.ideals() {
            if gens.iter().all(|&g| other.contains(g)) {
                prop_assert!(closed.is_subset(other));
            }
        }
    }

    #[test]
    fn localizations_are_algebras(i in 1usize..5, gens in proptest::collection::vec(0usize..4, 0..3)) {
        let s = small(i);
        let gens: Vec<usize> = gens.into_iter().map(|g| g % s.t_size()).collect();
        let system = mult_closure(&s, gens).unwrap();
        let loc = localize(&s, &system).unwrap();
        prop_assert!(verify_axioms(&loc.algebra).pass);
        prop_assert!(homomorphism_failure(&s, &loc.algebra, &loc.canonical_map).is_none());
        prop_assert_eq!(loc.collapsed, system.contains(0));
    }

    #[test]
    fn sums_split_back(i in 0usize..5, j in 0usize..5) {
        let (a, b) = (small(i), small(j));
        let s = direct_sum(&a, &b).unwrap();
        prop_assert!(verify_axioms(&s).pass);
        let r = decompose_direct(&s).unwrap();
        prop_assert!(r.complete);
        let sizes: usize = r.factors.iter().map(|f| f.algebra.t_size()).product();
        prop_assert_eq!(sizes, s.t_size());
    }
}

#[test]
fn spectra_are_t0_posets() {
    for i in 0..5 {
        let s = small(i);
        for def in [PrimeDef::Elementwise, PrimeDef::IdealPair] {
            let spec = compute_spectrum(&s, def);
            let top = generate_topology(&s, &spec);
            assert!(top.t0);
            let order = order_structure(&spec, &top);
            assert!(is_partial_order(&order));
            for (p, a) in spec.points.iter().enumerate() {
                assert!(is_prime(&s, a, def).unwrap());
                for (q, b) in spec.points.iter().enumerate() {
                    assert_eq!(a.is_subset(b), order.specializes(p, q));
                }
            }
        }
    }
}

#[test]
fn regular_modules_are_modules() {
    for i in 0..5 {
        let s = small(i);
        let m = self_module(&s);
        assert!(verify_bimodule(&s, &m).unwrap().pass, "{}", s.name());
        assert!(!submodules(&s, &m).unwrap().is_empty());
    }
}

#[test]
fn one_element_factors_vanish() {
    let triv = builtin_example("TRIV").unwrap();
    for i in 1..5 {
        let a = small(i);
        assert!(are_isomorphic(&direct_sum(&triv, &a).unwrap(), &a));
    }
    let b2 = boolean(2);
    assert!(!are_isomorphic(&direct_sum(&b2, &b2).unwrap(), &b2));
}
