//! Γ-ideals: closure, the full ideal lattice, products, primality, maximal
//! ideals, the Jacobson radical and Bourne quotients.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebra::{decode_tuple, FiniteGammaSemiring};
use crate::error::{Error, Result};
use crate::subset::Subset;

/// A subset of `T` containing 0, closed under addition and under insertion
/// into any slot of the structural map.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct GammaIdeal {
    members: Subset,
}

impl GammaIdeal {
    pub fn members(&self) -> &Subset {
        &self.members
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_proper(&self) -> bool {
        !self.members.is_full()
    }

    pub fn is_zero(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subset(&self, other: &GammaIdeal) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.members.to_vec()
    }

    pub fn zero(s: &FiniteGammaSemiring) -> Self {
        GammaIdeal {
            members: Subset::from_iter(s.t_size(), [0]),
        }
    }

    pub fn whole(s: &FiniteGammaSemiring) -> Self {
        GammaIdeal {
            members: Subset::full(s.t_size()),
        }
    }

    /// Wraps `members` after checking both ideal conditions exhaustively.
    pub fn from_subset(s: &FiniteGammaSemiring, members: Subset) -> Result<Self> {
        if is_ideal(s, &members) {
            Ok(GammaIdeal { members })
        } else {
            Err(Error::NotAnIdeal(members.to_vec()))
        }
    }

    pub fn intersection(&self, other: &GammaIdeal) -> GammaIdeal {
        GammaIdeal {
            members: self.members.intersection(&other.members),
        }
    }
}

/// Direct check of the ideal conditions on an arbitrary subset.
pub fn is_ideal(s: &FiniteGammaSemiring, set: &Subset) -> bool {
    if !set.contains(0) {
        return false;
    }
    for x in set.iter() {
        for y in set.iter() {
            if !set.contains(s.add(x, y)) {
                return false;
            }
        }
    }
    let n = s.n();
    let gt = s.gamma_tuple_count();
    let mut xs = vec![0; n];
    s.mu_table().iter().enumerate().all(|(i, &v)| {
        decode_tuple(i / gt, s.t_size(), &mut xs);
        set.contains(v) || !xs.iter().any(|&x| set.contains(x))
    })
}

/// Smallest Γ-ideal containing `gens`.
pub fn ideal_closure<I: IntoIterator<Item = usize>>(s: &FiniteGammaSemiring, gens: I) -> GammaIdeal {
    let mut set = Subset::from_iter(s.t_size(), gens);
    set.insert(0);
    close_ideal(s, &mut set);
    GammaIdeal { members: set }
}

fn close_ideal(s: &FiniteGammaSemiring, set: &mut Subset) {
    let n = s.n();
    let t = s.t_size();
    let gt = s.gamma_tuple_count();
    let mut xs = vec![0; n];
    loop {
        let mut changed = false;
        // additive closure to a fixpoint first; it is cheap
        loop {
            let members = set.to_vec();
            let mut grew = false;
            for &x in &members {
                for &y in &members {
                    grew |= set.insert(s.add(x, y));
                }
            }
            if !grew {
                break;
            }
            changed = true;
        }
        for (i, &v) in s.mu_table().iter().enumerate() {
            if set.contains(v) {
                continue;
            }
            decode_tuple(i / gt, t, &mut xs);
            if xs.iter().any(|&x| set.contains(x)) {
                set.insert(v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// The complete lattice of Γ-ideals in canonical order.
#[derive(Debug, Clone)]
pub struct IdealLattice {
    ideals: Vec<GammaIdeal>,
}

impl IdealLattice {
    pub fn ideals(&self) -> &[GammaIdeal] {
        &self.ideals
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn proper(&self) -> impl Iterator<Item = &GammaIdeal> {
        self.ideals.iter().filter(|i| i.is_proper())
    }
}

/// Join-closure of the principal ideals together with the zero ideal.
pub fn enumerate_ideals(s: &FiniteGammaSemiring) -> IdealLattice {
    let mut found: BTreeSet<GammaIdeal> = BTreeSet::new();
    let mut queue = vec![ideal_closure(s, [])];
    queue.extend((0..s.t_size()).map(|a| ideal_closure(s, [a])));
    while let Some(next) = queue.pop() {
        if found.contains(&next) {
            continue;
        }
        for other in &found {
            let joined = ideal_closure(s, next.members.union(&other.members).iter());
            if !found.contains(&joined) {
                queue.push(joined);
            }
        }
        found.insert(next);
    }
    IdealLattice {
        ideals: found.into_iter().collect(),
    }
}

/// Ideal generated by every product with some slot in `i` and a different
/// slot in `j`; the other slots range over all of `T`.
pub fn mu_ideal_product(s: &FiniteGammaSemiring, i: &GammaIdeal, j: &GammaIdeal) -> GammaIdeal {
    let n = s.n();
    let t = s.t_size();
    let gt = s.gamma_tuple_count();
    let mut xs = vec![0; n];
    let mut gens = Subset::empty(t);
    for (idx, &v) in s.mu_table().iter().enumerate() {
        if gens.contains(v) {
            continue;
        }
        decode_tuple(idx / gt, t, &mut xs);
        let hit = (0..n).any(|a| {
            i.contains(xs[a]) && (0..n).any(|b| b != a && j.contains(xs[b]))
        });
        if hit {
            gens.insert(v);
        }
    }
    ideal_closure(s, gens.iter())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimeDef {
    /// a product lying in P has a factor in P
    Elementwise,
    /// a product of ideals lying in P has a factor ideal inside P
    IdealPair,
}

impl PrimeDef {
    pub fn label(self) -> &'static str {
        match self {
            PrimeDef::Elementwise => "elementwise",
            PrimeDef::IdealPair => "ideal-pair",
        }
    }
}

/// Primality of a proper ideal. `lattice` must be the ideal lattice of `s`.
pub fn is_prime_in(
    s: &FiniteGammaSemiring,
    lattice: &IdealLattice,
    p: &GammaIdeal,
    def: PrimeDef,
) -> Result<bool> {
    if !p.is_proper() {
        return Err(Error::NotProper);
    }
    Ok(match def {
        PrimeDef::Elementwise => {
            let n = s.n();
            let gt = s.gamma_tuple_count();
            let mut xs = vec![0; n];
            s.mu_table().iter().enumerate().all(|(idx, &v)| {
                if !p.contains(v) {
                    return true;
                }
                decode_tuple(idx / gt, s.t_size(), &mut xs);
                xs.iter().any(|&x| p.contains(x))
            })
        }
        PrimeDef::IdealPair => lattice.ideals().iter().all(|i| {
            i.is_subset(p)
                || lattice
                    .ideals()
                    .iter()
                    .all(|j| j.is_subset(p) || !mu_ideal_product(s, i, j).is_subset(p))
        }),
    })
}

pub fn is_prime(s: &FiniteGammaSemiring, p: &GammaIdeal, def: PrimeDef) -> Result<bool> {
    is_prime_in(s, &enumerate_ideals(s), p, def)
}

/// Proper ideals maximal under inclusion; empty when no proper ideal exists.
pub fn maximal_ideals_in(lattice: &IdealLattice) -> Vec<GammaIdeal> {
    let proper: Vec<&GammaIdeal> = lattice.proper().collect();
    proper
        .iter()
        .filter(|a| !proper.iter().any(|b| a.members() != b.members() && a.is_subset(b)))
        .map(|a| (*a).clone())
        .collect()
}

pub fn maximal_ideals(s: &FiniteGammaSemiring) -> Vec<GammaIdeal> {
    maximal_ideals_in(&enumerate_ideals(s))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Radical {
    pub ideal: GammaIdeal,
    /// no proper ideal exists and the radical is reported as all of `T`
    pub degenerate: bool,
}

pub fn jacobson_radical(s: &FiniteGammaSemiring) -> Radical {
    let maximal = maximal_ideals(s);
    match maximal.split_first() {
        None => Radical {
            ideal: GammaIdeal::whole(s),
            degenerate: true,
        },
        Some((first, rest)) => Radical {
            ideal: rest.iter().fold(first.clone(), |acc, m| acc.intersection(m)),
            degenerate: false,
        },
    }
}

#[derive(Debug, Clone)]
pub struct Quotient {
    pub algebra: FiniteGammaSemiring,
    /// element of `T` to its class index
    pub projection: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Union-find partition helper shared by the congruence computations.
pub(crate) struct Partition {
    parent: Vec<usize>,
}

impl Partition {
    pub(crate) fn new(size: usize) -> Self {
        Partition {
            parent: (0..size).collect(),
        }
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = find(&mut self.parent, a);
        let rb = find(&mut self.parent, b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn root(&mut self, a: usize) -> usize {
        find(&mut self.parent, a)
    }

    /// Class index per item: the class of item 0 is 0, the others are
    /// numbered by their smallest member.
    pub(crate) fn classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let size = self.parent.len();
        let mut class_of = vec![usize::MAX; size];
        let mut reps = Vec::new();
        for x in 0..size {
            let r = self.root(x);
            if class_of[r] == usize::MAX {
                class_of[r] = reps.len();
                reps.push(x);
            }
            class_of[x] = class_of[r];
        }
        (class_of, reps)
    }
}

/// Quotient by the Bourne congruence `x ~ y ⇔ x + i = y + j` for some `i, j ∈ I`.
pub fn quotient_by_ideal(s: &FiniteGammaSemiring, ideal: &GammaIdeal) -> Result<Quotient> {
    let t = s.t_size();
    let mut part = Partition::new(t);
    for x in 0..t {
        for i in ideal.members().iter() {
            part.union(x, s.add(x, i));
        }
    }
    let (class_of, reps) = part.classes();
    let names = reps.iter().map(|&r| format!("[{}]", s.elements()[r])).collect();
    let unit = s.unit().map(|u| crate::algebra::UnitWitness {
        element: class_of[u.element],
        gammas: u.gammas.clone(),
    });
    let algebra = FiniteGammaSemiring::from_fns(
        format!("{}/{:?}", s.name(), ideal.to_vec()),
        s.n(),
        names,
        s.gamma_names().to_vec(),
        |a, b| class_of[s.add(reps[a], reps[b])],
        |a, b| s.gamma_add(a, b),
        |xs, gs| {
            let lifted: Vec<usize> = xs.iter().map(|&c| reps[c]).collect();
            class_of[s.mu(&lifted, gs)]
        },
        unit,
    )?;
    Ok(Quotient {
        algebra,
        projection: class_of,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin_example;

    fn ideal(s: &FiniteGammaSemiring, xs: &[usize]) -> GammaIdeal {
        GammaIdeal::from_subset(s, Subset::from_iter(s.t_size(), xs.iter().copied())).unwrap()
    }

    #[test]
    fn closures_on_small_algebras() {
        let b3 = builtin_example("B3").unwrap();
        let n3 = builtin_example("N3").unwrap();
        assert_eq!(ideal_closure(&b3, []).to_vec(), vec![0]);
        assert_eq!(ideal_closure(&b3, [1]).to_vec(), vec![0, 1]);
        assert_eq!(ideal_closure(&n3, [2]).to_vec(), vec![0, 2]);
        assert_eq!(ideal_closure(&n3, [1]).to_vec(), vec![0, 1, 2]);
    }

    #[test]
    fn products_and_primes() {
        let b3 = builtin_example("B3").unwrap();
        let n3 = builtin_example("N3").unwrap();
        let whole = GammaIdeal::whole(&b3);
        assert_eq!(mu_ideal_product(&b3, &whole, &whole).to_vec(), vec![0, 1]);
        let z = GammaIdeal::zero(&n3);
        let p = ideal(&n3, &[0, 2]);
        assert_eq!(mu_ideal_product(&n3, &z, &GammaIdeal::whole(&n3)).to_vec(), vec![0]);
        assert_eq!(mu_ideal_product(&n3, &p, &p).to_vec(), vec![0, 2]);

        assert!(is_prime(&b3, &GammaIdeal::zero(&b3), PrimeDef::Elementwise).unwrap());
        assert!(is_prime(&n3, &p, PrimeDef::Elementwise).unwrap());
        assert!(is_prime(&n3, &z, PrimeDef::IdealPair).unwrap());
        assert_eq!(is_prime(&b3, &whole, PrimeDef::IdealPair), Err(Error::NotProper));
    }

    #[test]
    fn radical_of_trivial_algebra_is_degenerate() {
        let triv = builtin_example("TRIV").unwrap();
        assert!(maximal_ideals(&triv).is_empty());
        let r = jacobson_radical(&triv);
        assert!(r.degenerate);
        assert_eq!(r.ideal.to_vec(), vec![0]);
    }

    #[test]
    fn bourne_quotients() {
        let b3 = builtin_example("B3").unwrap();
        let q = quotient_by_ideal(&b3, &GammaIdeal::zero(&b3)).unwrap();
        assert_eq!(q.projection, vec![0, 1]);
        assert_eq!(q.algebra.mu_table(), b3.mu_table());
        let q = quotient_by_ideal(&b3, &GammaIdeal::whole(&b3)).unwrap();
        assert_eq!(q.algebra.t_size(), 1);
        let n3 = builtin_example("N3").unwrap();
        let q = quotient_by_ideal(&n3, &ideal(&n3, &[0, 2])).unwrap();
        assert_eq!(q.algebra.t_size(), 1);
        assert_eq!(q.projection, vec![0, 0, 0]);
    }

    #[test]
    fn non_ideal_rejected() {
        let n3 = builtin_example("N3").unwrap();
        let bad = Subset::from_iter(3, [0, 1]);
        assert_eq!(GammaIdeal::from_subset(&n3, bad), Err(Error::NotAnIdeal(vec![0, 1])));
    }
}
