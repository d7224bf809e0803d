//! Independent brute-force oracles for ideals, primes, spectra and
//! topologies. Nothing here calls the closure or lattice code under test;
//! the oracles read only the operation tables.

use gspec_core::corpus::{boolean, builtin_example, saturating};
use gspec_core::ideals::{enumerate_ideals, jacobson_radical, PrimeDef};
use gspec_core::spectrum::{compute_spectrum, generate_topology, order_structure};
use gspec_core::structure::direct_sum;
use gspec_core::FiniteGammaSemiring;

fn tuples(base: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| (0..base).map(move |x| {
                let mut t = t.clone();
                t.push(x);
                t
            }))
            .collect();
    }
    out
}

fn members(mask: u32, t: usize) -> Vec<usize> {
    (0..t).filter(|&x| mask >> x & 1 == 1).collect()
}

/// Every subset of `T` that contains 0, is closed under `+`, and absorbs
/// products with one factor inside, as bitmasks in ascending order.
fn oracle_ideals(s: &FiniteGammaSemiring) -> Vec<u32> {
    let t = s.t_size();
    let xs = tuples(t, s.n());
    let gs = tuples(s.g_size(), s.n() - 1);
    (0u32..1 << t)
        .filter(|&mask| {
            let inside = |x: usize| mask >> x & 1 == 1;
            inside(0)
                && (0..t).all(|a| (0..t).all(|b| !(inside(a) && inside(b)) || inside(s.add(a, b))))
                && xs.iter().all(|x| !x.iter().any(|&v| inside(v)) || gs.iter().all(|g| inside(s.mu(x, g))))
        })
        .collect()
}

fn elementwise_prime(s: &FiniteGammaSemiring, p: u32) -> bool {
    let t = s.t_size();
    if p == (1 << t) - 1 {
        return false;
    }
    let inside = |x: usize| p >> x & 1 == 1;
    let gs = tuples(s.g_size(), s.n() - 1);
    tuples(t, s.n())
        .iter()
        .all(|x| x.iter().any(|&v| inside(v)) || gs.iter().all(|g| !inside(s.mu(x, g))))
}

/// `I` and `J` in two distinct slots, every other slot over all of `T`.
fn pair_products_inside(s: &FiniteGammaSemiring, i: u32, j: u32, p: u32) -> bool {
    let n = s.n();
    let t = s.t_size();
    let gs = tuples(s.g_size(), n - 1);
    tuples(t, n).iter().all(|x| {
        let hit = (0..n).any(|a| (0..n).any(|b| a != b && i >> x[a] & 1 == 1 && j >> x[b] & 1 == 1));
        !hit || gs.iter().all(|g| p >> s.mu(x, g) & 1 == 1)
    })
}

fn ideal_pair_prime(s: &FiniteGammaSemiring, ideals: &[u32], p: u32) -> bool {
    let t = s.t_size();
    if p == (1 << t) - 1 {
        return false;
    }
    let sub = |a: u32, b: u32| a & !b == 0;
    ideals.iter().all(|&i| {
        ideals
            .iter()
            .all(|&j| !pair_products_inside(s, i, j, p) || sub(i, p) || sub(j, p))
    })
}

fn oracle_spectrum(s: &FiniteGammaSemiring, def: PrimeDef) -> Vec<Vec<usize>> {
    let ideals = oracle_ideals(s);
    let mut points: Vec<Vec<usize>> = ideals
        .iter()
        .filter(|&&p| match def {
            PrimeDef::Elementwise => elementwise_prime(s, p),
            PrimeDef::IdealPair => ideal_pair_prime(s, &ideals, p),
        })
        .map(|&p| members(p, s.t_size()))
        .collect();
    points.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    points
}

/// Closure of each point, from the opens characterised pointwise: a point set
/// is open when it contains, with each point, every point lying in all the
/// sets `{Q : a ∉ Q}` that hold that point.
fn oracle_closures(points: &[Vec<usize>], t: usize) -> Vec<Vec<usize>> {
    let k = points.len();
    let neighbourhood = |q: usize| -> u32 {
        (0..k)
            .filter(|&r| (0..t).all(|a| points[q].contains(&a) || !points[r].contains(&a)))
            .fold(0, |m, r| m | 1 << r)
    };
    let opens: Vec<u32> = (0u32..1 << k)
        .filter(|&u| (0..k).all(|q| u >> q & 1 == 0 || neighbourhood(q) & !u == 0))
        .collect();
    (0..k)
        .map(|p| {
            let outside = opens.iter().filter(|&&u| u >> p & 1 == 0).fold(0u32, |m, &u| m | u);
            (0..k).filter(|&q| outside >> q & 1 == 0).collect()
        })
        .collect()
}

fn small_algebras() -> Vec<FiniteGammaSemiring> {
    let mut out: Vec<FiniteGammaSemiring> =
        ["TRIV", "B3", "N3", "B3⊕B3"].iter().map(|n| builtin_example(n).unwrap()).collect();
    out.push(boolean(2));
    out.push(saturating(2, 2));
    out.push(saturating(3, 3));
    out.push(direct_sum(&boolean(2), &boolean(2)).unwrap());
    out
}

#[test]
fn ideal_lattices_match_subset_enumeration() {
    for s in small_algebras() {
        let mut expected: Vec<Vec<usize>> = oracle_ideals(&s).into_iter().map(|m| members(m, s.t_size())).collect();
        expected.sort();
        let mut got: Vec<Vec<usize>> = enumerate_ideals(&s).ideals().iter().map(|i| i.to_vec()).collect();
        got.sort();
        assert_eq!(got, expected, "{}", s.name());
    }
}

#[test]
fn spectra_match_subset_enumeration() {
    for s in small_algebras() {
        for def in [PrimeDef::Elementwise, PrimeDef::IdealPair] {
            let got: Vec<Vec<usize>> = compute_spectrum(&s, def).points.iter().map(|p| p.to_vec()).collect();
            assert_eq!(got, oracle_spectrum(&s, def), "{} {def:?}", s.name());
        }
    }
}

#[test]
fn closures_match_pointwise_topology() {
    for s in small_algebras() {
        for def in [PrimeDef::Elementwise, PrimeDef::IdealPair] {
            let spec = compute_spectrum(&s, def);
            let order = order_structure(&spec, &generate_topology(&s, &spec));
            let points: Vec<Vec<usize>> = spec.points.iter().map(|p| p.to_vec()).collect();
            let got: Vec<Vec<usize>> = order.closures.iter().map(|c| c.to_vec()).collect();
            assert_eq!(got, oracle_closures(&points, s.t_size()), "{} {def:?}", s.name());
        }
    }
}

#[test]
fn frozen_spectrum_fixtures() {
    let triv = builtin_example("TRIV").unwrap();
    assert!(oracle_spectrum(&triv, PrimeDef::IdealPair).is_empty());
    let b3 = builtin_example("B3").unwrap();
    assert_eq!(oracle_spectrum(&b3, PrimeDef::IdealPair), vec![vec![0]]);
    let n3 = builtin_example("N3").unwrap();
    let points = oracle_spectrum(&n3, PrimeDef::Elementwise);
    assert_eq!(points, vec![vec![0], vec![0, 2]]);
    let closures = oracle_closures(&points, 3);
    assert_eq!(closures, vec![vec![0, 1], vec![1]]);
}

#[test]
fn radicals_match_maximal_subsets() {
    for (name, expected) in [("B3", vec![0]), ("N3", vec![0, 2]), ("B3⊕B3", vec![0])] {
        let s = builtin_example(name).unwrap();
        let t = s.t_size();
        let ideals = oracle_ideals(&s);
        let full = (1u32 << t) - 1;
        let maximal: Vec<u32> = ideals
            .iter()
            .copied()
            .filter(|&m| m != full && !ideals.iter().any(|&o| o != full && o != m && m & !o == 0))
            .collect();
        let radical = maximal.iter().fold(full, |acc, &m| acc & m);
        assert_eq!(members(radical, t), expected, "{name}");
        assert_eq!(jacobson_radical(&s).ideal.to_vec(), expected, "{name}");
    }
}
