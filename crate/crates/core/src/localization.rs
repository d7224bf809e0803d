//! Multiplicative systems and fraction algebras `T_S`, localizations at primes,
//! residue algebras, and the matching construction for bi-modules.
//!
//! Fractions are pairs `(x, s)` with `s` in the system. Two pairs are related
//! when some `u` in the system equalizes the cross terms,
//! `[u, x, t, e, …, e]_{γ⃗₀} = [u, y, s, e, …, e]_{γ⃗₀}` (for `n = 2`:
//! `[u, [x, t]]` against `[u, [y, s]]`), and the fraction classes are the
//! classes of the generated equivalence relation.

use serde::Serialize;

use crate::algebra::{decode_tuple, tuple_count, FiniteGammaSemiring, UnitWitness};
use crate::axioms::first_failure;
use crate::error::{Error, Result};
use crate::ideals::{ideal_closure, maximal_ideals, quotient_by_ideal, GammaIdeal, Partition};
use crate::modules::BiGammaModule;
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicativeSystem {
    pub members: Subset,
    pub witness: UnitWitness,
}

impl MultiplicativeSystem {
    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.to_vec()
    }
}

/// First tuple of `set` whose product (at some parameter tuple) leaves `set`.
fn first_escape(s: &FiniteGammaSemiring, set: &Subset) -> Option<(Vec<usize>, Vec<usize>)> {
    let members = set.to_vec();
    let n = s.n();
    let m = members.len();
    let gt = s.gamma_tuple_count();
    let mut pick = vec![0; n];
    let mut gs = vec![0; n - 1];
    for i in 0..tuple_count(m, n) {
        decode_tuple(i, m, &mut pick);
        let xs: Vec<usize> = pick.iter().map(|&p| members[p]).collect();
        for g in 0..gt {
            decode_tuple(g, s.g_size(), &mut gs);
            if !set.contains(s.mu(&xs, &gs)) {
                return Some((xs, gs.clone()));
            }
        }
    }
    None
}

/// Smallest set containing `gens` and the unit, closed under every product.
pub fn mult_closure<I: IntoIterator<Item = usize>>(s: &FiniteGammaSemiring, gens: I) -> Result<MultiplicativeSystem> {
    let u = s.require_unit()?.clone();
    let mut set = Subset::from_iter(s.t_size(), gens);
    set.insert(u.element);
    while let Some((xs, gs)) = first_escape(s, &set) {
        set.insert(s.mu(&xs, &gs));
    }
    Ok(MultiplicativeSystem {
        members: set,
        witness: u,
    })
}

/// `T ∖ P`, which must be closed under products.
pub fn prime_complement(s: &FiniteGammaSemiring, p: &GammaIdeal) -> Result<MultiplicativeSystem> {
    if !p.is_proper() {
        return Err(Error::NotProper);
    }
    let u = s.require_unit()?.clone();
    let set = p.members().complement();
    if let Some((tuple, gammas)) = first_escape(s, &set) {
        return Err(Error::ComplementNotClosed {
            prime: p.to_vec(),
            tuple,
            gammas,
        });
    }
    Ok(MultiplicativeSystem {
        members: set,
        witness: u,
    })
}

/// The equalizer `[u, x, t, e, …]` used by the fraction congruence.
fn cross(s: &FiniteGammaSemiring, u: &UnitWitness, w: usize, x: usize, t: usize) -> usize {
    let n = s.n();
    if n == 2 {
        let inner = s.mu(&[x, t], &u.gammas);
        s.mu(&[w, inner], &u.gammas)
    } else {
        let mut xs = vec![u.element; n];
        xs[0] = w;
        xs[1] = x;
        xs[2] = t;
        s.mu(&xs, &u.gammas)
    }
}

fn padded(s: &FiniteGammaSemiring, u: &UnitWitness, a: usize, b: usize) -> usize {
    let mut xs = vec![u.element; s.n()];
    xs[0] = a;
    xs[1] = b;
    s.mu(&xs, &u.gammas)
}

#[derive(Debug, Clone)]
pub struct LocalizedSemiring {
    pub algebra: FiniteGammaSemiring,
    pub system: MultiplicativeSystem,
    /// all fractions `(x, s)`, `x`-major, denominators ascending
    pub pairs: Vec<(usize, usize)>,
    /// class index of each entry of `pairs`
    pub class_of: Vec<usize>,
    /// smallest fraction in each class
    pub reps: Vec<(usize, usize)>,
    /// class of `(x, e)` for each `x`
    pub canonical_map: Vec<usize>,
    /// the system contains 0 and everything collapses
    pub collapsed: bool,
}

impl LocalizedSemiring {
    pub fn class_of_pair(&self, x: usize, s: usize) -> Option<usize> {
        let den = self.system.members.to_vec();
        let j = den.binary_search(&s).ok()?;
        self.class_of.get(x * den.len() + j).copied()
    }
}

impl Serialize for LocalizedSemiring {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("LocalizedSemiring", 6)?;
        st.serialize_field("system", &self.system)?;
        st.serialize_field("classes", &self.reps)?;
        st.serialize_field("canonical_map", &self.canonical_map)?;
        st.serialize_field("collapsed", &self.collapsed)?;
        st.serialize_field("t_size", &self.algebra.t_size())?;
        st.serialize_field("algebra", &self.algebra.to_document())?;
        st.end()
    }
}

/// Fraction algebra `T_S`. Every induced operation is checked on every choice
/// of representatives.
pub fn localize(s: &FiniteGammaSemiring, system: &MultiplicativeSystem) -> Result<LocalizedSemiring> {
    let u = system.witness.clone();
    let den = system.members.to_vec();
    let m = den.len();
    let t = s.t_size();
    let pairs: Vec<(usize, usize)> = (0..t).flat_map(|x| den.iter().map(move |&d| (x, d))).collect();
    let count = pairs.len();
    let mut part = Partition::new(count);
    for (i, &(x, a)) in pairs.iter().enumerate() {
        for (j, &(y, b)) in pairs.iter().enumerate().skip(i + 1) {
            if den.iter().any(|&w| cross(s, &u, w, x, b) == cross(s, &u, w, y, a)) {
                part.union(i, j);
            }
        }
    }
    let (class_of, rep_idx) = part.classes();
    let reps: Vec<(usize, usize)> = rep_idx.iter().map(|&i| pairs[i]).collect();
    let index = |x: usize, d: usize| x * m + den.binary_search(&d).expect("denominator in the system");
    let class = |p: (usize, usize)| class_of[index(p.0, p.1)];

    let add_pair = |(x1, s1): (usize, usize), (x2, s2): (usize, usize)| {
        (s.add(padded(s, &u, x1, s2), padded(s, &u, x2, s1)), padded(s, &u, s1, s2))
    };
    let mu_pair = |ps: &[(usize, usize)], gs: &[usize]| {
        let xs: Vec<usize> = ps.iter().map(|p| p.0).collect();
        let ds: Vec<usize> = ps.iter().map(|p| p.1).collect();
        (s.mu(&xs, gs), s.mu(&ds, &u.gammas))
    };

    let k = reps.len();
    let add_table: Vec<usize> = (0..k * k).map(|i| class(add_pair(reps[i / k], reps[i % k]))).collect();
    if let Some(i) = first_failure(count * count, |i| {
        class(add_pair(pairs[i / count], pairs[i % count])) != add_table[class_of[i / count] * k + class_of[i % count]]
    }) {
        let (a, b) = (pairs[i / count], pairs[i % count]);
        return Err(Error::WellDefinednessFailure {
            operation: "addition".into(),
            left: vec![reps[class(a)], reps[class(b)]],
            right: vec![a, b],
        });
    }

    let n = s.n();
    let gt = s.gamma_tuple_count();
    let decode = |i: usize, base: usize| {
        let mut pick = vec![0; n];
        let mut gs = vec![0; n - 1];
        decode_tuple(i / gt, base, &mut pick);
        decode_tuple(i % gt, s.g_size(), &mut gs);
        (pick, gs)
    };
    let mu_table: Vec<usize> = (0..tuple_count(k, n) * gt)
        .map(|i| {
            let (pick, gs) = decode(i, k);
            let ps: Vec<(usize, usize)> = pick.iter().map(|&c| reps[c]).collect();
            class(mu_pair(&ps, &gs))
        })
        .collect();
    let mu_of_classes = |cs: &[usize], gs: &[usize]| {
        mu_table[cs.iter().fold(0, |acc, &c| acc * k + c) * gt + crate::algebra::encode_tuple(s.g_size(), gs)]
    };
    if let Some(i) = first_failure(tuple_count(count, n) * gt, |i| {
        let (pick, gs) = decode(i, count);
        let ps: Vec<(usize, usize)> = pick.iter().map(|&p| pairs[p]).collect();
        let cs: Vec<usize> = pick.iter().map(|&p| class_of[p]).collect();
        class(mu_pair(&ps, &gs)) != mu_of_classes(&cs, &gs)
    }) {
        let (pick, _) = decode(i, count);
        return Err(Error::WellDefinednessFailure {
            operation: "product".into(),
            left: pick.iter().map(|&p| reps[class_of[p]]).collect(),
            right: pick.iter().map(|&p| pairs[p]).collect(),
        });
    }

    let unit = UnitWitness {
        element: class((u.element, u.element)),
        gammas: u.gammas.clone(),
    };
    let names: Vec<String> = reps
        .iter()
        .map(|&(x, d)| format!("{}/{}", s.elements()[x], s.elements()[d]))
        .collect();
    let algebra = FiniteGammaSemiring::new(
        format!("{}[{:?}⁻¹]", s.name(), den),
        n,
        names,
        s.gamma_names().to_vec(),
        add_table,
        s.gamma_add_table().to_vec(),
        mu_table,
        Some(unit),
    )?;
    let canonical_map = (0..t).map(|x| class((x, u.element))).collect();
    Ok(LocalizedSemiring {
        algebra,
        system: system.clone(),
        pairs,
        class_of,
        reps,
        canonical_map,
        collapsed: system.contains(0),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalAtPrime {
    pub prime: GammaIdeal,
    pub localized: LocalizedSemiring,
    /// ideal of `T_P` generated by the image of `P`
    pub image_ideal: GammaIdeal,
    pub maximal_ideals: Vec<GammaIdeal>,
    pub is_local: bool,
}

pub fn localize_at_prime(s: &FiniteGammaSemiring, p: &GammaIdeal) -> Result<LocalAtPrime> {
    let system = prime_complement(s, p)?;
    let localized = localize(s, &system)?;
    let image_ideal = ideal_closure(&localized.algebra, p.members().iter().map(|x| localized.canonical_map[x]));
    let maximal_ideals = maximal_ideals(&localized.algebra);
    let is_local = maximal_ideals.len() == 1 && maximal_ideals[0] == image_ideal;
    Ok(LocalAtPrime {
        prime: p.clone(),
        localized,
        image_ideal,
        maximal_ideals,
        is_local,
    })
}

/// `T_P` modulo the ideal generated by the image of `P`.
pub fn residue_at(s: &FiniteGammaSemiring, p: &GammaIdeal) -> Result<FiniteGammaSemiring> {
    let local = localize_at_prime(s, p)?;
    let q = quotient_by_ideal(&local.localized.algebra, &local.image_ideal)?;
    Ok(q.algebra.with_name(format!("κ({:?})", p.to_vec())))
}

/// Each `s` in the system makes `[e/s, s/e, e/e, …]_{γ⃗₀}` equal to `e/e`.
pub fn weak_inverse_failure(loc: &LocalizedSemiring) -> Option<usize> {
    let u = &loc.system.witness;
    let one = loc.class_of_pair(u.element, u.element)?;
    loc.system.members.iter().find(|&d| {
        let mut cs = vec![one; loc.algebra.n()];
        cs[0] = loc.class_of_pair(u.element, d).expect("fraction e/s");
        cs[1] = loc.class_of_pair(d, u.element).expect("fraction s/e");
        loc.algebra.mu(&cs, &u.gammas) != one
    })
}

/// Fractions `(m, s)` of a bi-module, viewed as a module over `T` through the
/// canonical map. The action of `x⃗` in slot `j` on `m/s` is
/// `act_j(x⃗, m)/[e, …, s, …, e]` with `s` at slot `j`.
#[derive(Debug, Clone)]
pub struct LocalizedModule {
    pub module: BiGammaModule,
    pub system: MultiplicativeSystem,
    pub pairs: Vec<(usize, usize)>,
    pub class_of: Vec<usize>,
    pub reps: Vec<(usize, usize)>,
    pub collapsed: bool,
}

impl LocalizedModule {
    pub fn class_of_pair(&self, m: usize, s: usize) -> Option<usize> {
        let den = self.system.members.to_vec();
        let j = den.binary_search(&s).ok()?;
        self.class_of.get(m * den.len() + j).copied()
    }
}

fn module_cross(s: &FiniteGammaSemiring, module: &BiGammaModule, u: &UnitWitness, w: usize, m: usize, t: usize) -> usize {
    let n = s.n();
    if n == 2 {
        let inner = module.act(0, &[t], m, &u.gammas);
        module.act(1, &[w], inner, &u.gammas)
    } else {
        let mut others = vec![u.element; n - 1];
        others[0] = w;
        others[1] = t;
        module.act(1, &others, m, &u.gammas)
    }
}

fn module_padded(s: &FiniteGammaSemiring, module: &BiGammaModule, u: &UnitWitness, m: usize, d: usize) -> usize {
    let mut others = vec![u.element; s.n() - 1];
    others[0] = d;
    module.act(0, &others, m, &u.gammas)
}

pub fn localize_module(
    s: &FiniteGammaSemiring,
    module: &BiGammaModule,
    system: &MultiplicativeSystem,
) -> Result<LocalizedModule> {
    let u = system.witness.clone();
    let den = system.members.to_vec();
    let dm = den.len();
    let pairs: Vec<(usize, usize)> = (0..module.size()).flat_map(|x| den.iter().map(move |&d| (x, d))).collect();
    let count = pairs.len();
    let mut part = Partition::new(count);
    for (i, &(x, a)) in pairs.iter().enumerate() {
        for (j, &(y, b)) in pairs.iter().enumerate().skip(i + 1) {
            if den
                .iter()
                .any(|&w| module_cross(s, module, &u, w, x, b) == module_cross(s, module, &u, w, y, a))
            {
                part.union(i, j);
            }
        }
    }
    let (class_of, rep_idx) = part.classes();
    let reps: Vec<(usize, usize)> = rep_idx.iter().map(|&i| pairs[i]).collect();
    let index = |x: usize, d: usize| x * dm + den.binary_search(&d).expect("denominator in the system");
    let class = |p: (usize, usize)| class_of[index(p.0, p.1)];
    let k = reps.len();

    let add_pair = |(m1, s1): (usize, usize), (m2, s2): (usize, usize)| {
        (
            module.madd(module_padded(s, module, &u, m1, s2), module_padded(s, module, &u, m2, s1)),
            padded(s, &u, s1, s2),
        )
    };
    let madd: Vec<usize> = (0..k * k).map(|i| class(add_pair(reps[i / k], reps[i % k]))).collect();
    if let Some(i) = first_failure(count * count, |i| {
        class(add_pair(pairs[i / count], pairs[i % count])) != madd[class_of[i / count] * k + class_of[i % count]]
    }) {
        let (a, b) = (pairs[i / count], pairs[i % count]);
        return Err(Error::WellDefinednessFailure {
            operation: "module addition".into(),
            left: vec![reps[class(a)], reps[class(b)]],
            right: vec![a, b],
        });
    }

    let n = s.n();
    let t = s.t_size();
    let gt = s.gamma_tuple_count();
    let act_pair = |j: usize, others: &[usize], (m, d): (usize, usize), gs: &[usize]| {
        let mut ds = vec![u.element; n];
        ds[j] = d;
        (module.act(j, others, m, gs), s.mu(&ds, &u.gammas))
    };
    let ot = tuple_count(t, n - 1);
    let mut act = Vec::with_capacity(n);
    for j in 0..n {
        let decode = |i: usize| {
            let mut others = vec![0; n - 1];
            let mut gs = vec![0; n - 1];
            decode_tuple(i % gt, s.g_size(), &mut gs);
            decode_tuple(i / gt / count, t, &mut others);
            (others, (i / gt) % count, gs)
        };
        if let Some(i) = first_failure(ot * count * gt, |i| {
            let (others, p, gs) = decode(i);
            let rep = reps[class_of[p]];
            class(act_pair(j, &others, pairs[p], &gs)) != class(act_pair(j, &others, rep, &gs))
        }) {
            let (_, p, _) = decode(i);
            return Err(Error::WellDefinednessFailure {
                operation: format!("action in slot {j}"),
                left: vec![reps[class_of[p]]],
                right: vec![pairs[p]],
            });
        }
        let mut others = vec![0; n - 1];
        let mut gs = vec![0; n - 1];
        let table: Vec<usize> = (0..ot * k * gt)
            .map(|i| {
                decode_tuple(i / gt / k, t, &mut others);
                decode_tuple(i % gt, s.g_size(), &mut gs);
                class(act_pair(j, &others, reps[(i / gt) % k], &gs))
            })
            .collect();
        act.push(table);
    }
    let names = reps
        .iter()
        .map(|&(x, d)| format!("{}/{}", module.elements()[x], s.elements()[d]))
        .collect();
    let localized = BiGammaModule::new(s, format!("{}[{:?}⁻¹]", module.name(), den), names, madd, act)?;
    Ok(LocalizedModule {
        module: localized,
        system: system.clone(),
        pairs,
        class_of,
        reps,
        collapsed: system.contains(0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_axioms;
    use crate::corpus::builtin_example;
    use crate::iso::{are_isomorphic, homomorphism_failure};
    use crate::modules::{quotient_module, self_module, verify_bimodule};

    #[test]
    fn closures() {
        let b3 = builtin_example("B3").unwrap();
        assert_eq!(mult_closure(&b3, [1]).unwrap().to_vec(), vec![1]);
        let n3 = builtin_example("N3").unwrap();
        assert_eq!(mult_closure(&n3, [2]).unwrap().to_vec(), vec![1, 2]);
        assert_eq!(mult_closure(&n3, []).unwrap().to_vec(), vec![1]);
        let triv = builtin_example("TRIV").unwrap();
        assert!(matches!(mult_closure(&triv, []), Err(Error::NoUnitWitness(_))));
    }

    #[test]
    fn fraction_algebras() {
        let b3 = builtin_example("B3").unwrap();
        let n3 = builtin_example("N3").unwrap();
        let l = localize(&b3, &mult_closure(&b3, []).unwrap()).unwrap();
        assert_eq!(l.canonical_map, vec![0, 1]);
        let l = localize(&n3, &mult_closure(&n3, []).unwrap()).unwrap();
        assert_eq!(l.canonical_map, vec![0, 1, 2]);
        assert!(are_isomorphic(&l.algebra, &n3));
        let l = localize(&n3, &mult_closure(&n3, [2]).unwrap()).unwrap();
        assert_eq!(l.algebra.t_size(), 2);
        assert!(are_isomorphic(&l.algebra, &b3));
        assert_eq!(l.class_of_pair(2, 1), l.class_of_pair(1, 1));
        assert!(verify_axioms(&l.algebra).pass);
        assert!(homomorphism_failure(&n3, &l.algebra, &l.canonical_map).is_none());
        assert_eq!(weak_inverse_failure(&l), None);
        let l = localize(&n3, &mult_closure(&n3, [0]).unwrap()).unwrap();
        assert!(l.collapsed);
        assert_eq!(l.algebra.t_size(), 1);
    }

    #[test]
    fn at_primes() {
        let n3 = builtin_example("N3").unwrap();
        let b3 = builtin_example("B3").unwrap();
        let p2 = ideal_closure(&n3, [2]);
        let local = localize_at_prime(&n3, &p2).unwrap();
        assert!(local.is_local);
        assert!(are_isomorphic(&local.localized.algebra, &n3));
        assert_eq!(local.image_ideal.to_vec(), vec![0, 2]);
        let local = localize_at_prime(&n3, &GammaIdeal::zero(&n3)).unwrap();
        assert!(local.is_local);
        assert!(are_isomorphic(&local.localized.algebra, &b3));
        assert!(are_isomorphic(&residue_at(&n3, &GammaIdeal::zero(&n3)).unwrap(), &b3));
        assert_eq!(residue_at(&n3, &p2).unwrap().t_size(), 1);
        assert!(are_isomorphic(&residue_at(&b3, &GammaIdeal::zero(&b3)).unwrap(), &b3));
    }

    #[test]
    fn matrix_zero_ideal_complement_is_not_closed() {
        let m = builtin_example("M2B3").unwrap();
        match localize_at_prime(&m, &GammaIdeal::zero(&m)) {
            Err(Error::ComplementNotClosed { prime, tuple, .. }) => {
                assert_eq!(prime, vec![0]);
                assert_eq!(m.mu(&tuple, &[0, 0]), 0);
            }
            other => panic!("expected ComplementNotClosed, got {other:?}"),
        }
    }

    #[test]
    fn module_fractions() {
        let n3 = builtin_example("N3").unwrap();
        let sys = mult_closure(&n3, [2]).unwrap();
        let regular = localize_module(&n3, &self_module(&n3), &sys).unwrap();
        assert_eq!(regular.module.size(), 2);
        assert!(verify_bimodule(&n3, &regular.module).unwrap().pass);
        let q = quotient_module(&n3, &self_module(&n3), &[(1, 2)]).unwrap();
        let lq = localize_module(&n3, &q, &sys).unwrap();
        assert_eq!(lq.module.size(), 2);
        let collapsed = localize_module(&n3, &q, &mult_closure(&n3, [0]).unwrap()).unwrap();
        assert_eq!(collapsed.module.size(), 1);
    }
}
