//! Prime spectra, their basic opens and the full open-set lattice, with the
//! specialization order read off from the topology.
//!
//! A basic open `D(a, γ⃗)` is the set of points not containing `a`. Inserting
//! a point of the ideal into any slot keeps a product inside the ideal, so
//! the parameters cannot change membership; they are kept as labels.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{all_tuples, FiniteGammaSemiring};
use crate::ideals::{enumerate_ideals, is_prime_in, GammaIdeal, PrimeDef};
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Spectrum {
    pub prime_def: PrimeDef,
    pub points: Vec<GammaIdeal>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: &GammaIdeal) -> Option<usize> {
        self.points.iter().position(|q| q == p)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }
}

/// Proper prime ideals under `def`, in canonical order.
pub fn compute_spectrum(s: &FiniteGammaSemiring, def: PrimeDef) -> Spectrum {
    let lattice = enumerate_ideals(s);
    let points = lattice
        .proper()
        .filter(|p| is_prime_in(s, &lattice, p, def).expect("proper ideals only"))
        .cloned()
        .collect();
    Spectrum { prime_def: def, points }
}

/// Indices of the points not containing `a`. `gammas` does not affect the result.
pub fn basic_open(spec: &Spectrum, a: usize, _gammas: &[usize]) -> Subset {
    Subset::from_iter(spec.len(), spec.points.iter().enumerate().filter(|(_, p)| !p.contains(a)).map(|(i, _)| i))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubbasisSet {
    pub element: usize,
    pub gammas: Vec<usize>,
    pub points: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZariskiTopology {
    pub opens: Vec<Subset>,
    pub subbasis: Vec<SubbasisSet>,
    pub t0: bool,
    /// holds on every finite space
    pub quasi_compact: bool,
}

impl ZariskiTopology {
    pub fn is_open(&self, set: &Subset) -> bool {
        self.opens.binary_search(set).is_ok()
    }

    pub fn index_of_open(&self, set: &Subset) -> Option<usize> {
        self.opens.binary_search(set).ok()
    }

    /// Smallest open containing point `p`.
    pub fn minimal_open(&self, p: usize) -> &Subset {
        self.opens
            .iter()
            .find(|u| u.contains(p) && self.opens.iter().all(|v| !v.contains(p) || u.is_subset(v)))
            .expect("finite topologies have minimal neighbourhoods")
    }

    pub fn closed_sets(&self) -> Vec<Subset> {
        self.opens.iter().map(Subset::complement).collect()
    }
}

pub fn generate_topology(s: &FiniteGammaSemiring, spec: &Spectrum) -> ZariskiTopology {
    let k = spec.len();
    let subbasis: Vec<SubbasisSet> = (0..s.t_size())
        .flat_map(|a| {
            all_tuples(s.g_size(), s.n() - 1).map(move |gs| SubbasisSet {
                points: basic_open(spec, a, &gs),
                element: a,
                gammas: gs,
            })
        })
        .collect();
    let mut opens: BTreeSet<Subset> = BTreeSet::new();
    opens.insert(Subset::empty(k));
    opens.insert(Subset::full(k));
    opens.extend(subbasis.iter().map(|b| b.points.clone()));
    loop {
        let current: Vec<Subset> = opens.iter().cloned().collect();
        let before = opens.len();
        for (i, u) in current.iter().enumerate() {
            for v in &current[i + 1..] {
                opens.insert(u.union(v));
                opens.insert(u.intersection(v));
            }
        }
        if opens.len() == before {
            break;
        }
    }
    let opens: Vec<Subset> = opens.into_iter().collect();
    let t0 = (0..k).all(|p| (p + 1..k).all(|q| opens.iter().any(|u| u.contains(p) != u.contains(q))));
    ZariskiTopology {
        opens,
        subbasis,
        t0,
        quasi_compact: true,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderStructure {
    /// closure of each point, by point index
    pub closures: Vec<Subset>,
    /// `(p, q)` with `q` in the closure of `p`, `p ≠ q`
    pub specialization: Vec<(usize, usize)>,
    pub closed_points: Vec<usize>,
}

impl OrderStructure {
    pub fn specializes(&self, p: usize, q: usize) -> bool {
        self.closures[p].contains(q)
    }
}

pub fn order_structure(spec: &Spectrum, top: &ZariskiTopology) -> OrderStructure {
    let k = spec.len();
    let closed = top.closed_sets();
    let closures: Vec<Subset> = (0..k)
        .map(|p| {
            closed
                .iter()
                .filter(|c| c.contains(p))
                .fold(Subset::full(k), |acc, c| acc.intersection(c))
        })
        .collect();
    let specialization = (0..k)
        .flat_map(|p| closures[p].iter().filter(move |&q| q != p).map(move |q| (p, q)))
        .collect();
    let closed_points = (0..k).filter(|&p| closures[p].len() == 1).collect();
    OrderStructure {
        closures,
        specialization,
        closed_points,
    }
}

/// Reflexive, antisymmetric and transitive on the point set.
pub fn is_partial_order(order: &OrderStructure) -> bool {
    let k = order.closures.len();
    (0..k).all(|p| order.specializes(p, p))
        && (0..k).all(|p| (0..k).all(|q| p == q || !(order.specializes(p, q) && order.specializes(q, p))))
        && (0..k).all(|p| {
            (0..k).all(|q| !order.specializes(p, q) || (0..k).all(|r| !order.specializes(q, r) || order.specializes(p, r)))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin_example;

    fn points(spec: &Spectrum) -> Vec<Vec<usize>> {
        spec.points.iter().map(GammaIdeal::to_vec).collect()
    }

    #[test]
    fn spectra() {
        let triv = builtin_example("TRIV").unwrap();
        assert!(compute_spectrum(&triv, PrimeDef::IdealPair).is_empty());
        let b3 = builtin_example("B3").unwrap();
        assert_eq!(points(&compute_spectrum(&b3, PrimeDef::IdealPair)), vec![vec![0]]);
        let n3 = builtin_example("N3").unwrap();
        for def in [PrimeDef::Elementwise, PrimeDef::IdealPair] {
            assert_eq!(points(&compute_spectrum(&n3, def)), vec![vec![0], vec![0, 2]]);
        }
        let m = builtin_example("M2B3").unwrap();
        assert_eq!(points(&compute_spectrum(&m, PrimeDef::IdealPair)), vec![vec![0]]);
        assert!(compute_spectrum(&m, PrimeDef::Elementwise).is_empty());
    }

    #[test]
    fn n3_topology_and_order() {
        let n3 = builtin_example("N3").unwrap();
        let spec = compute_spectrum(&n3, PrimeDef::Elementwise);
        assert_eq!(basic_open(&spec, 2, &[0, 0]).to_vec(), vec![0]);
        assert_eq!(basic_open(&spec, 1, &[0, 0]).to_vec(), vec![0, 1]);
        assert!(basic_open(&spec, 0, &[0, 0]).is_empty());
        let top = generate_topology(&n3, &spec);
        let opens: Vec<Vec<usize>> = top.opens.iter().map(Subset::to_vec).collect();
        assert_eq!(opens, vec![vec![], vec![0], vec![0, 1]]);
        assert!(top.t0);
        let order = order_structure(&spec, &top);
        assert_eq!(order.closures[0].to_vec(), vec![0, 1]);
        assert_eq!(order.closed_points, vec![1]);
        assert_eq!(order.specialization, vec![(0, 1)]);
        assert!(is_partial_order(&order));
        assert_eq!(top.minimal_open(1).to_vec(), vec![0, 1]);
        assert_eq!(top.minimal_open(0).to_vec(), vec![0]);
    }

    #[test]
    fn empty_and_one_point_spaces() {
        let triv = builtin_example("TRIV").unwrap();
        let spec = compute_spectrum(&triv, PrimeDef::Elementwise);
        let top = generate_topology(&triv, &spec);
        assert_eq!(top.opens.len(), 1);
        let order = order_structure(&spec, &top);
        assert!(order.closed_points.is_empty() && order.closures.is_empty());
        let b3 = builtin_example("B3").unwrap();
        let spec = compute_spectrum(&b3, PrimeDef::IdealPair);
        let top = generate_topology(&b3, &spec);
        assert_eq!(top.opens.len(), 2);
        assert_eq!(order_structure(&spec, &top).closed_points, vec![0]);
    }

    #[test]
    fn direct_sum_spectrum_is_discrete() {
        let s = builtin_example("B3⊕B3").unwrap();
        let spec = compute_spectrum(&s, PrimeDef::Elementwise);
        assert_eq!(points(&spec), vec![vec![0, 1], vec![0, 2]]);
        let top = generate_topology(&s, &spec);
        assert_eq!(top.opens.len(), 4);
        assert_eq!(order_structure(&spec, &top).closed_points, vec![0, 1]);
    }
}
