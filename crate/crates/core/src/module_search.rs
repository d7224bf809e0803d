//! Bounded search for simple bi-modules and the primitive spectrum.
//!
//! For each carrier size and each commutative monoid on that carrier (up to
//! isomorphism) the action tables are found by backtracking over their
//! entries. Entries with a zero argument are fixed to zero; every additivity
//! and substitution law becomes an equation between entries that is
//! propagated as soon as enough of it is known. Solutions are re-checked with
//! [`verify_bimodule`], filtered for simplicity and deduplicated up to
//! isomorphism.

use serde::Serialize;

use crate::algebra::{decode_tuple, encode_tuple, tuple_count, FiniteGammaSemiring};
use crate::error::Result;
use crate::ideals::{enumerate_ideals, is_prime_in, GammaIdeal, PrimeDef};
use crate::iso::{module_isomorphism, DEFAULT_ISO_CAP};
use crate::modules::{annihilator, is_simple, verify_bimodule, BiGammaModule};

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SearchCaps {
    /// backtracking nodes per monoid table
    pub node_cap: u64,
    /// equations per monoid table
    pub equation_cap: usize,
    /// carriers above this size are not searched
    pub largest_supported: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            node_cap: 2_000_000,
            equation_cap: 4_000_000,
            largest_supported: 5,
        }
    }
}

/// Commutative monoid tables on `0..m` with identity 0, one per isomorphism class.
pub fn additive_monoids(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return Vec::new();
    }
    let free: Vec<(usize, usize)> = (1..m).flat_map(|a| (a..m).map(move |b| (a, b))).collect();
    let mut perms = Vec::new();
    permutations(&mut (1..m).collect(), 0, &mut perms);
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut digits = vec![0; free.len()];
    for code in 0..tuple_count(m, free.len()) {
        decode_tuple(code, m, &mut digits);
        let mut table = vec![0; m * m];
        for x in 0..m {
            table[x] = x;
            table[x * m] = x;
        }
        for (&(a, b), &v) in free.iter().zip(&digits) {
            table[a * m + b] = v;
            table[b * m + a] = v;
        }
        let assoc = (0..m * m * m).all(|i| {
            let (a, b, c) = (i / (m * m), (i / m) % m, i % m);
            table[table[a * m + b] * m + c] == table[a * m + table[b * m + c]]
        });
        if !assoc {
            continue;
        }
        let canonical = perms
            .iter()
            .map(|p| {
                let mut img = vec![0; m];
                for (i, &v) in p.iter().enumerate() {
                    img[i + 1] = v;
                }
                let mut relabelled = vec![0; m * m];
                for a in 0..m {
                    for b in 0..m {
                        relabelled[img[a] * m + img[b]] = img[table[a * m + b]];
                    }
                }
                relabelled
            })
            .min()
            .expect("at least the identity permutation");
        if canonical == table {
            found.push(table);
        }
    }
    found
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Term {
    Zero,
    Var(usize),
}

/// Action entry `act_j(others, inner)` whose module argument is itself an entry.
#[derive(Debug, Clone, Copy)]
enum Expr {
    Direct(Term),
    Nested { slot: usize, others: usize, gammas: usize, inner: Term },
}

#[derive(Debug, Clone, Copy)]
enum Equation {
    /// `z = x + y` in the module
    Sum(Term, Term, Term),
    Same(Expr, Expr),
}

struct Layout {
    n: usize,
    t: usize,
    m: usize,
    gt: usize,
    ot: usize,
}

impl Layout {
    fn per_slot(&self) -> usize {
        self.ot * self.m * self.gt
    }

    /// `others` encoded over all of `T`.
    fn term(&self, slot: usize, others: usize, x: usize, gammas: usize) -> Term {
        if x == 0 || self.has_zero(others) {
            Term::Zero
        } else {
            Term::Var(slot * self.per_slot() + (others * self.m + x) * self.gt + gammas)
        }
    }

    fn has_zero(&self, others: usize) -> bool {
        let mut rest = others;
        (0..self.n - 1).any(|_| {
            let d = rest % self.t;
            rest /= self.t;
            d == 0
        })
    }
}

struct Csp<'a> {
    layout: Layout,
    madd: &'a [usize],
    equations: Vec<Equation>,
    watch: Vec<Vec<usize>>,
    value: Vec<Option<usize>>,
    trail: Vec<usize>,
    nodes: u64,
    cap: u64,
}

impl Csp<'_> {
    fn val(&self, t: Term) -> Option<usize> {
        match t {
            Term::Zero => Some(0),
            Term::Var(v) => self.value[v],
        }
    }

    fn resolve(&self, e: Expr) -> Option<Term> {
        match e {
            Expr::Direct(t) => Some(t),
            Expr::Nested { slot, others, gammas, inner } => {
                let w = self.val(inner)?;
                Some(self.layout.term(slot, others, w, gammas))
            }
        }
    }

    fn set(&mut self, t: Term, v: usize, queue: &mut Vec<usize>) -> bool {
        match t {
            Term::Zero => v == 0,
            Term::Var(id) => match self.value[id] {
                Some(old) => old == v,
                None => {
                    self.value[id] = Some(v);
                    self.trail.push(id);
                    queue.extend_from_slice(&self.watch[id]);
                    true
                }
            },
        }
    }

    fn unique_summand(&self, known: usize, total: usize) -> Result<Option<usize>, ()> {
        let m = self.layout.m;
        let mut hit = None;
        for y in 0..m {
            if self.madd[known * m + y] == total {
                if hit.is_some() {
                    return Ok(None);
                }
                hit = Some(y);
            }
        }
        hit.map(Some).ok_or(())
    }

    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        let m = self.layout.m;
        while let Some(e) = queue.pop() {
            match self.equations[e] {
                Equation::Sum(z, x, y) => {
                    let (vz, vx, vy) = (self.val(z), self.val(x), self.val(y));
                    match (vx, vy) {
                        (Some(a), Some(b)) => {
                            if !self.set(z, self.madd[a * m + b], &mut queue) {
                                return false;
                            }
                        }
                        (Some(a), None) | (None, Some(a)) => {
                            if let Some(total) = vz {
                                let other = if vx.is_some() { y } else { x };
                                match self.unique_summand(a, total) {
                                    Err(()) => return false,
                                    Ok(Some(v)) => {
                                        if !self.set(other, v, &mut queue) {
                                            return false;
                                        }
                                    }
                                    Ok(None) => {}
                                }
                            }
                        }
                        (None, None) => {}
                    }
                }
                Equation::Same(a, b) => {
                    let (Some(ta), Some(tb)) = (self.resolve(a), self.resolve(b)) else { continue };
                    match (self.val(ta), self.val(tb)) {
                        (Some(p), Some(q)) => {
                            if p != q {
                                return false;
                            }
                        }
                        (Some(p), None) => {
                            if !self.set(tb, p, &mut queue) {
                                return false;
                            }
                        }
                        (None, Some(q)) => {
                            if !self.set(ta, q, &mut queue) {
                                return false;
                            }
                        }
                        (None, None) => {}
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let id = self.trail.pop().expect("trail non-empty");
            self.value[id] = None;
        }
    }

    /// Visits every complete assignment; `false` from `visit` stops early.
    /// Returns `false` when the node cap was hit.
    fn solve(&mut self, from: usize, visit: &mut dyn FnMut(&[Option<usize>]) -> bool) -> Option<bool> {
        let Some(var) = (from..self.value.len()).find(|&v| self.value[v].is_none()) else {
            return Some(visit(&self.value));
        };
        for v in 0..self.layout.m {
            self.nodes += 1;
            if self.nodes > self.cap {
                return None;
            }
            let mark = self.trail.len();
            let mut queue = Vec::new();
            let fine = self.set(Term::Var(var), v, &mut queue) && self.propagate(queue);
            if fine {
                match self.solve(var + 1, visit) {
                    None => return None,
                    Some(false) => return Some(false),
                    Some(true) => {}
                }
            }
            self.undo_to(mark);
        }
        Some(true)
    }
}

fn build_equations(s: &FiniteGammaSemiring, layout: &Layout, madd: &[usize], cap: usize) -> Option<Vec<Equation>> {
    let (n, t, m, gt, ot) = (layout.n, layout.t, layout.m, layout.gt, layout.ot);
    let g = s.g_size();
    let mut eqs = Vec::new();
    let mut others = vec![0; n - 1];
    for j in 0..n {
        for o in 0..ot {
            if layout.has_zero(o) {
                continue;
            }
            for gi in 0..gt {
                for x in 1..m {
                    for y in x..m {
                        eqs.push(Equation::Sum(
                            layout.term(j, o, madd[x * m + y], gi),
                            layout.term(j, o, x, gi),
                            layout.term(j, o, y, gi),
                        ));
                    }
                }
            }
        }
        // additivity in T-argument k; the other arguments of `others` range freely
        for k in 0..n - 1 {
            for o in 0..ot {
                decode_tuple(o, t, &mut others);
                if others[k] != 1.min(t - 1) || layout.has_zero(o) {
                    continue;
                }
                for a in 1..t {
                    for b in a..t {
                        let sum = s.add(a, b);
                        let with = |v: usize| {
                            let mut w = others.clone();
                            w[k] = v;
                            if v == 0 {
                                None
                            } else {
                                Some(encode_tuple(t, &w))
                            }
                        };
                        let (oa, ob, os) = (with(a), with(b), with(sum));
                        for gi in 0..gt {
                            for x in 1..m {
                                let pick = |code: Option<usize>| code.map_or(Term::Zero, |c| layout.term(j, c, x, gi));
                                eqs.push(Equation::Sum(pick(os), pick(oa), pick(ob)));
                            }
                        }
                    }
                }
            }
        }
        if eqs.len() > cap {
            return None;
        }
    }
    // substitution: module at position p of a (2n-1)-sequence, bracket b against bracket 0
    let len = 2 * n - 1;
    let mut ts = vec![0; 2 * n - 2];
    let mut outer = vec![0; n - 1];
    let mut inner = vec![0; n - 1];
    let nz = t - 1;
    if nz == 0 {
        return Some(eqs);
    }
    for p in 0..len {
        for code in 0..tuple_count(nz, 2 * n - 2) {
            decode_tuple(code, nz, &mut ts);
            for v in ts.iter_mut() {
                *v += 1;
            }
            for x in 1..m {
                let mut xs = ts.clone();
                xs.insert(p, x);
                for go in 0..gt {
                    decode_tuple(go, g, &mut outer);
                    for gi in 0..gt {
                        decode_tuple(gi, g, &mut inner);
                        let side0 = bracket_expr(s, layout, &xs, p, &outer, &inner, 0);
                        for b in 1..n {
                            let side = bracket_expr(s, layout, &xs, p, &outer, &inner, b);
                            eqs.push(Equation::Same(side, side0));
                        }
                    }
                }
            }
            if eqs.len() > cap {
                return None;
            }
        }
    }
    Some(eqs)
}

/// The bracket-`i` value of a sequence whose position `p` holds the module element.
fn bracket_expr(
    s: &FiniteGammaSemiring,
    layout: &Layout,
    xs: &[usize],
    p: usize,
    outer: &[usize],
    inner: &[usize],
    i: usize,
) -> Expr {
    let n = layout.n;
    let t = layout.t;
    let g = s.g_size();
    let go = encode_tuple(g, outer);
    let gi = encode_tuple(g, inner);
    if (i..i + n).contains(&p) {
        let mut block: Vec<usize> = xs[i..i + n].to_vec();
        let m = block.remove(p - i);
        let inner_term = layout.term(p - i, encode_tuple(t, &block), m, gi);
        let mut rest: Vec<usize> = xs[..i].to_vec();
        rest.extend_from_slice(&xs[i + n..]);
        Expr::Nested {
            slot: i,
            others: encode_tuple(t, &rest),
            gammas: go,
            inner: inner_term,
        }
    } else {
        let v = s.mu(&xs[i..i + n], inner);
        let mut seq: Vec<usize> = xs[..i].to_vec();
        seq.push(v);
        seq.extend_from_slice(&xs[i + n..]);
        let q = if p < i { p } else { p - (n - 1) };
        let m = seq.remove(q);
        Expr::Direct(layout.term(q, encode_tuple(t, &seq), m, go))
    }
}

fn watches(eqs: &[Equation], layout: &Layout, vars: usize) -> Vec<Vec<usize>> {
    let mut watch = vec![Vec::new(); vars];
    let add = |t: Term, e: usize, watch: &mut Vec<Vec<usize>>| {
        if let Term::Var(v) = t {
            watch[v].push(e);
        }
    };
    for (e, eq) in eqs.iter().enumerate() {
        match *eq {
            Equation::Sum(z, x, y) => {
                add(z, e, &mut watch);
                add(x, e, &mut watch);
                add(y, e, &mut watch);
            }
            Equation::Same(a, b) => {
                for side in [a, b] {
                    match side {
                        Expr::Direct(t) => add(t, e, &mut watch),
                        Expr::Nested { slot, others, gammas, inner } => {
                            add(inner, e, &mut watch);
                            for w in 1..layout.m {
                                add(layout.term(slot, others, w, gammas), e, &mut watch);
                            }
                        }
                    }
                }
            }
        }
    }
    for w in &mut watch {
        w.sort_unstable();
        w.dedup();
    }
    watch
}

#[derive(Debug, Clone, Serialize)]
pub struct FoundModule {
    pub size: usize,
    pub annihilator: GammaIdeal,
    /// slots whose action table has a non-zero entry
    pub acting_slots: Vec<usize>,
    pub module: crate::modules::ModuleDocument,
}

#[derive(Debug, Clone)]
pub struct SimpleModuleSearch {
    pub max_size: usize,
    pub modules: Vec<BiGammaModule>,
    pub annihilators: Vec<GammaIdeal>,
    pub solutions_examined: u64,
    pub truncations: Vec<String>,
}

impl SimpleModuleSearch {
    pub fn found(&self) -> Vec<FoundModule> {
        self.modules
            .iter()
            .zip(&self.annihilators)
            .map(|(m, a)| FoundModule {
                size: m.size(),
                annihilator: a.clone(),
                acting_slots: (0..m.act_tables().len()).filter(|&j| m.act_tables()[j].iter().any(|&v| v != 0)).collect(),
                module: m.to_document(),
            })
            .collect()
    }
}

/// Simple bi-modules with `2 ≤ |M| ≤ max_size`, one per isomorphism class.
pub fn simple_bimodules(s: &FiniteGammaSemiring, max_size: usize) -> Result<SimpleModuleSearch> {
    simple_bimodules_with(s, max_size, &SearchCaps::default())
}

pub fn simple_bimodules_with(s: &FiniteGammaSemiring, max_size: usize, caps: &SearchCaps) -> Result<SimpleModuleSearch> {
    let n = s.n();
    let t = s.t_size();
    let gt = s.gamma_tuple_count();
    let mut modules: Vec<BiGammaModule> = Vec::new();
    let mut truncations = Vec::new();
    let mut examined = 0u64;
    for m in 2..=max_size {
        if m > caps.largest_supported {
            truncations.push(format!("carrier size {m}: above the supported bound {}", caps.largest_supported));
            continue;
        }
        let start = modules.len();
        for madd in additive_monoids(m) {
            let layout = Layout { n, t, m, gt, ot: tuple_count(t, n - 1) };
            let vars = n * layout.per_slot();
            let Some(equations) = build_equations(s, &layout, &madd, caps.equation_cap) else {
                truncations.push(format!("carrier size {m}, addition {madd:?}: more than {} equations", caps.equation_cap));
                continue;
            };
            let watch = watches(&equations, &layout, vars);
            let mut csp = Csp {
                layout,
                madd: &madd,
                equations,
                watch,
                value: vec![None; vars],
                trail: Vec::new(),
                nodes: 0,
                cap: caps.node_cap,
            };
            // entries that can never be read stay fixed at zero
            for id in 0..vars {
                let slot_off = id % csp.layout.per_slot();
                let others = slot_off / csp.layout.gt / m;
                let x = (slot_off / csp.layout.gt) % m;
                if x == 0 || csp.layout.has_zero(others) {
                    csp.value[id] = Some(0);
                }
            }
            let all: Vec<usize> = (0..csp.equations.len()).collect();
            if !csp.propagate(all) {
                continue;
            }
            let mut failure = None;
            let mut visit = |values: &[Option<usize>]| -> bool {
                examined += 1;
                if values.iter().all(|v| *v == Some(0)) {
                    return true;
                }
                let per_slot = tuple_count(t, n - 1) * m * gt;
                let act: Vec<Vec<usize>> = (0..n)
                    .map(|j| (0..per_slot).map(|i| values[j * per_slot + i].unwrap_or(0)).collect())
                    .collect();
                let names = (0..m).map(|i| format!("m{i}")).collect();
                let candidate = match BiGammaModule::new(s, format!("simple{m}"), names, madd.clone(), act) {
                    Ok(c) => c,
                    Err(e) => {
                        failure = Some(e);
                        return false;
                    }
                };
                let ok = verify_bimodule(s, &candidate).map(|r| r.pass).unwrap_or(false)
                    && is_simple(s, &candidate).unwrap_or(false);
                if ok
                    && !modules[start..]
                        .iter()
                        .any(|known| module_isomorphism(s, known, &candidate, DEFAULT_ISO_CAP).is_found())
                {
                    modules.push(candidate);
                }
                true
            };
            if csp.solve(0, &mut visit).is_none() {
                truncations.push(format!(
                    "carrier size {m}, addition {madd:?}: search stopped after {} nodes",
                    caps.node_cap
                ));
            }
            if let Some(e) = failure {
                return Err(e);
            }
        }
    }
    let annihilators = modules.iter().map(|m| annihilator(s, m)).collect::<Result<Vec<_>>>()?;
    let modules = modules
        .into_iter()
        .enumerate()
        .map(|(i, m)| {
            let name = format!("simple #{i} ({} elements)", m.size());
            BiGammaModule::new(s, name, m.elements().to_vec(), m.madd_table().to_vec(), m.act_tables().to_vec())
                .expect("tables already validated")
        })
        .collect();
    Ok(SimpleModuleSearch {
        max_size,
        modules,
        annihilators,
        solutions_examined: examined,
        truncations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimitiveIdeal {
    pub ideal: GammaIdeal,
    /// indices into the simple module list with this annihilator
    pub modules: Vec<usize>,
    pub elementwise_prime: bool,
    pub ideal_pair_prime: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimitiveSpectrum {
    pub max_size: usize,
    pub ideals: Vec<PrimitiveIdeal>,
    pub simple_modules: Vec<FoundModule>,
    pub truncations: Vec<String>,
}

impl PrimitiveSpectrum {
    pub fn ideal_list(&self) -> Vec<GammaIdeal> {
        self.ideals.iter().map(|p| p.ideal.clone()).collect()
    }
}

pub fn primitive_spectrum(s: &FiniteGammaSemiring, max_size: usize) -> Result<PrimitiveSpectrum> {
    primitive_spectrum_of(s, &simple_bimodules(s, max_size)?)
}

pub fn primitive_spectrum_of(s: &FiniteGammaSemiring, search: &SimpleModuleSearch) -> Result<PrimitiveSpectrum> {
    let lattice = enumerate_ideals(s);
    let mut distinct: Vec<GammaIdeal> = search.annihilators.clone();
    distinct.sort();
    distinct.dedup();
    let ideals = distinct
        .into_iter()
        .map(|ideal| {
            let modules = (0..search.annihilators.len()).filter(|&i| search.annihilators[i] == ideal).collect();
            let elementwise_prime = is_prime_in(s, &lattice, &ideal, PrimeDef::Elementwise)?;
            let ideal_pair_prime = is_prime_in(s, &lattice, &ideal, PrimeDef::IdealPair)?;
            Ok(PrimitiveIdeal {
                ideal,
                modules,
                elementwise_prime,
                ideal_pair_prime,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PrimitiveSpectrum {
        max_size: search.max_size,
        ideals,
        simple_modules: search.found(),
        truncations: search.truncations.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin_example;
    use crate::modules::submodules;

    #[test]
    fn monoid_counts() {
        assert_eq!(additive_monoids(1).len(), 1);
        assert_eq!(additive_monoids(2).len(), 2);
        // Z3, Z2 with a zero, Z2 with an identity, the 3-chain, the null semigroup with an identity
        assert_eq!(additive_monoids(3).len(), 5);
    }

    #[test]
    fn trivial_algebra_has_no_simple_modules() {
        let triv = builtin_example("TRIV").unwrap();
        let r = simple_bimodules(&triv, 3).unwrap();
        assert!(r.modules.is_empty());
        assert!(primitive_spectrum(&triv, 3).unwrap().ideals.is_empty());
    }

    #[test]
    fn boolean_simple_modules() {
        let b3 = builtin_example("B3").unwrap();
        let r = simple_bimodules(&b3, 2).unwrap();
        assert!(!r.modules.is_empty());
        assert!(r.annihilators.iter().all(|a| a.to_vec() == vec![0]));
        for m in &r.modules {
            assert_eq!(submodules(&b3, m).unwrap().len(), 2);
        }
        let prim = primitive_spectrum(&b3, 3).unwrap();
        assert_eq!(prim.ideal_list().iter().map(GammaIdeal::to_vec).collect::<Vec<_>>(), vec![vec![0]]);
    }

    #[test]
    fn product_and_saturating_prim() {
        let s = builtin_example("B3⊕B3").unwrap();
        let prim = primitive_spectrum(&s, 3).unwrap();
        let ideals: Vec<Vec<usize>> = prim.ideal_list().iter().map(GammaIdeal::to_vec).collect();
        // factor-wise modules, plus one acting on the left through one factor and on the right through the other
        assert_eq!(ideals, vec![vec![0], vec![0, 1], vec![0, 2]]);
        assert!(!prim.ideals[0].elementwise_prime && !prim.ideals[0].ideal_pair_prime);
        let n3 = builtin_example("N3").unwrap();
        let prim = primitive_spectrum(&n3, 3).unwrap();
        let ideals: Vec<Vec<usize>> = prim.ideal_list().iter().map(GammaIdeal::to_vec).collect();
        assert_eq!(ideals, vec![vec![0]]);
        assert!(prim.truncations.is_empty());
    }

    #[test]
    fn mixed_bimodule_over_product() {
        // elements a·2+b of B⊕B; slots to the left of m read the first coordinate, slots to the right the second
        let s = builtin_example("B3⊕B3").unwrap();
        let m = BiGammaModule::from_fns(&s, "mixed", vec!["0".into(), "1".into()], |a, b| a | b, |j, others, x, _| {
            let left = others[..j].iter().all(|&a| a / 2 == 1);
            let right = others[j..].iter().all(|&a| a % 2 == 1);
            usize::from(x == 1 && left && right)
        })
        .unwrap();
        assert!(verify_bimodule(&s, &m).unwrap().pass);
        assert!(is_simple(&s, &m).unwrap());
        assert_eq!(annihilator(&s, &m).unwrap().to_vec(), vec![0]);
        let found = simple_bimodules(&s, 2).unwrap();
        assert!(found.modules.iter().any(|k| module_isomorphism(&s, k, &m, DEFAULT_ISO_CAP).is_found()));
    }
}
