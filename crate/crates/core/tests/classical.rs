//! Binary, one-parameter algebras are ordinary commutative semirings. Their
//! prime spectrum is computed here with the textbook definition and compared
//! with both primality notions of the library.

use gspec_core::corpus::{boolean, saturating};
use gspec_core::ideals::PrimeDef;
use gspec_core::spectrum::compute_spectrum;
use gspec_core::structure::direct_sum;
use gspec_core::FiniteGammaSemiring;

/// Ideals: `0 ∈ I`, `I + I ⊆ I`, `T·I ⊆ I`. Primes: proper, and `ab ∈ P`
/// forces `a ∈ P` or `b ∈ P`.
fn classical_spec(s: &FiniteGammaSemiring) -> Vec<Vec<usize>> {
    assert_eq!((s.n(), s.g_size()), (2, 1));
    let t = s.t_size();
    let mul = |a: usize, b: usize| s.mu(&[a, b], &[0]);
    let mut primes = Vec::new();
    for mask in 0u32..(1 << t) - 1 {
        let i = |x: usize| mask >> x & 1 == 1;
        let ideal = i(0)
            && (0..t).all(|a| (0..t).all(|b| !(i(a) && i(b)) || i(s.add(a, b))))
            && (0..t).all(|a| (0..t).all(|b| !i(b) || (i(mul(a, b)) && i(mul(b, a)))));
        let prime = (0..t).all(|a| (0..t).all(|b| !i(mul(a, b)) || i(a) || i(b)));
        if ideal && prime {
            primes.push((0..t).filter(|&x| i(x)).collect::<Vec<_>>());
        }
    }
    primes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    primes
}

#[test]
fn boolean_semiring_spectrum() {
    let b = boolean(2);
    assert_eq!(classical_spec(&b), vec![vec![0]]);
    for def in [PrimeDef::Elementwise, PrimeDef::IdealPair] {
        let got: Vec<Vec<usize>> = compute_spectrum(&b, def).points.iter().map(|p| p.to_vec()).collect();
        assert_eq!(got, classical_spec(&b));
    }
}

#[test]
fn other_binary_semirings() {
    for s in [
        saturating(2, 1),
        saturating(2, 2),
        saturating(2, 4),
        direct_sum(&boolean(2), &boolean(2)).unwrap(),
        direct_sum(&boolean(2), &saturating(2, 2)).unwrap(),
    ] {
        let expected = classical_spec(&s);
        for def in [PrimeDef::Elementwise, PrimeDef::IdealPair] {
            let got: Vec<Vec<usize>> = compute_spectrum(&s, def).points.iter().map(|p| p.to_vec()).collect();
            assert_eq!(got, expected, "{} {def:?}", s.name());
        }
    }
}
