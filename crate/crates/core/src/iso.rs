//! Brute-force isomorphism search between finite table structures.
//!
//! A [`TableStructure`] is a carrier `0..size` with a list of operations given
//! by full tables. An isomorphism is a bijection fixing 0 that commutes with
//! every operation, operation `k` of one side matched with operation `k` of
//! the other. Algebras become (add, one n-ary operation per Γ-tuple); the
//! parameter semigroup is matched pointwise and never permuted. Modules become
//! (madd, one unary operation per slot, T-arguments and Γ-tuple).
//!
//! The search assigns elements one at a time and propagates every forced
//! image through the operation tables, pruning candidates by a signature of
//! iso-invariant counts.

use serde::Serialize;

use crate::algebra::{decode_tuple, tuple_count, FiniteGammaSemiring};
use crate::modules::BiGammaModule;

pub const DEFAULT_ISO_CAP: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct Operation {
    pub arity: usize,
    pub table: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct TableStructure {
    pub size: usize,
    pub ops: Vec<Operation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "map", rename_all = "kebab-case")]
pub enum IsoOutcome {
    Found(Vec<usize>),
    NotFound,
    /// search cap reached before a decision
    Truncated,
}

impl IsoOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, IsoOutcome::Found(_))
    }

    pub fn map(&self) -> Option<&[usize]> {
        match self {
            IsoOutcome::Found(m) => Some(m),
            _ => None,
        }
    }
}

impl TableStructure {
    pub fn of_algebra(s: &FiniteGammaSemiring) -> Self {
        let gt = s.gamma_tuple_count();
        let mut ops = vec![Operation {
            arity: 2,
            table: s.add_table().to_vec(),
        }];
        for g in 0..gt {
            ops.push(Operation {
                arity: s.n(),
                table: s.mu_table().iter().skip(g).step_by(gt).copied().collect(),
            });
        }
        TableStructure {
            size: s.t_size(),
            ops,
        }
    }

    pub fn of_module(s: &FiniteGammaSemiring, m: &BiGammaModule) -> Self {
        let n = s.n();
        let t = s.t_size();
        let gt = s.gamma_tuple_count();
        let size = m.size();
        let mut ops = vec![Operation {
            arity: 2,
            table: m.madd_table().to_vec(),
        }];
        let mut others = vec![0; n - 1];
        let mut gs = vec![0; n - 1];
        for j in 0..n {
            for ti in 0..tuple_count(t, n - 1) {
                decode_tuple(ti, t, &mut others);
                for g in 0..gt {
                    decode_tuple(g, s.g_size(), &mut gs);
                    ops.push(Operation {
                        arity: 1,
                        table: (0..size).map(|x| m.act(j, &others, x, &gs)).collect(),
                    });
                }
            }
        }
        TableStructure { size, ops }
    }

    fn apply(&self, op: usize, args: &[usize]) -> usize {
        let o = &self.ops[op];
        o.table[args.iter().fold(0, |acc, &a| acc * self.size + a)]
    }

    fn signatures(&self) -> Vec<Vec<u64>> {
        let mut sig = vec![Vec::new(); self.size];
        for (k, o) in self.ops.iter().enumerate() {
            let mut hist = vec![0u64; self.size];
            for &v in &o.table {
                hist[v] += 1;
            }
            for x in 0..self.size {
                let diag = self.apply(k, &vec![x; o.arity]);
                sig[x].push(hist[x]);
                sig[x].push(u64::from(diag == x) | (u64::from(diag == 0) << 1));
                if o.arity == 2 {
                    let fixes = (0..self.size).filter(|&y| self.apply(k, &[x, y]) == x).count();
                    let neutral = (0..self.size).filter(|&y| self.apply(k, &[x, y]) == y).count();
                    sig[x].push(fixes as u64);
                    sig[x].push(neutral as u64);
                }
            }
        }
        sig
    }
}

const FREE: usize = usize::MAX;

struct Search<'a> {
    a: &'a TableStructure,
    b: &'a TableStructure,
    sig_a: Vec<Vec<u64>>,
    sig_b: Vec<Vec<u64>>,
    fwd: Vec<usize>,
    bwd: Vec<usize>,
    trail: Vec<usize>,
    nodes: u64,
    cap: u64,
}

impl Search<'_> {
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            if self.fwd[x] != FREE {
                if self.fwd[x] != y {
                    return false;
                }
                continue;
            }
            if self.bwd[y] != FREE || self.sig_a[x] != self.sig_b[y] {
                return false;
            }
            self.fwd[x] = y;
            self.bwd[y] = x;
            self.trail.push(x);
            if !self.propagate(x, &mut queue) {
                return false;
            }
        }
        true
    }

    /// Checks every operation instance over assigned elements that uses `x`.
    fn propagate(&self, x: usize, queue: &mut Vec<(usize, usize)>) -> bool {
        let assigned = &self.trail;
        let k = assigned.len();
        let mut args = Vec::new();
        let mut images = Vec::new();
        for (op, o) in self.a.ops.iter().enumerate() {
            let others = o.arity - 1;
            let combos = tuple_count(k, others);
            let mut pick = vec![0; others];
            for pos in 0..o.arity {
                for c in 0..combos {
                    decode_tuple(c, k, &mut pick);
                    args.clear();
                    args.extend(pick.iter().map(|&p| assigned[p]));
                    args.insert(pos, x);
                    images.clear();
                    images.extend(args.iter().map(|&v| self.fwd[v]));
                    let r = self.a.apply(op, &args);
                    let r_img = self.b.apply(op, &images);
                    match self.fwd[r] {
                        FREE => match queue.iter().find(|(q, _)| *q == r) {
                            Some(&(_, other)) if other != r_img => return false,
                            Some(_) => {}
                            None => queue.push((r, r_img)),
                        },
                        v if v != r_img => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let x = self.trail.pop().expect("trail non-empty");
            self.bwd[self.fwd[x]] = FREE;
            self.fwd[x] = FREE;
        }
    }

    fn solve(&mut self) -> Option<bool> {
        let Some(x) = (0..self.a.size).find(|&x| self.fwd[x] == FREE) else {
            return Some(true);
        };
        for y in 0..self.b.size {
            if self.bwd[y] != FREE || self.sig_a[x] != self.sig_b[y] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return None;
            }
            let mark = self.trail.len();
            if self.assign(x, y) {
                match self.solve() {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.undo_to(mark);
        }
        Some(false)
    }
}

/// Searches for an isomorphism `a → b`; at most `cap` candidate assignments are tried.
pub fn find_isomorphism(a: &TableStructure, b: &TableStructure, cap: u64) -> IsoOutcome {
    if a.size != b.size
        || a.ops.len() != b.ops.len()
        || a.ops.iter().zip(&b.ops).any(|(p, q)| p.arity != q.arity)
    {
        return IsoOutcome::NotFound;
    }
    let sig_a = a.signatures();
    let sig_b = b.signatures();
    let mut sa = sig_a.clone();
    let mut sb = sig_b.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return IsoOutcome::NotFound;
    }
    let mut search = Search {
        a,
        b,
        sig_a,
        sig_b,
        fwd: vec![FREE; a.size],
        bwd: vec![FREE; b.size],
        trail: Vec::new(),
        nodes: 0,
        cap,
    };
    if !search.assign(0, 0) {
        return IsoOutcome::NotFound;
    }
    match search.solve() {
        Some(true) => IsoOutcome::Found(search.fwd),
        Some(false) => IsoOutcome::NotFound,
        None => IsoOutcome::Truncated,
    }
}

fn same_parameters(a: &FiniteGammaSemiring, b: &FiniteGammaSemiring) -> bool {
    a.n() == b.n() && a.g_size() == b.g_size() && a.gamma_add_table() == b.gamma_add_table()
}

pub fn algebra_isomorphism(a: &FiniteGammaSemiring, b: &FiniteGammaSemiring, cap: u64) -> IsoOutcome {
    if !same_parameters(a, b) {
        return IsoOutcome::NotFound;
    }
    find_isomorphism(&TableStructure::of_algebra(a), &TableStructure::of_algebra(b), cap)
}

pub fn are_isomorphic(a: &FiniteGammaSemiring, b: &FiniteGammaSemiring) -> bool {
    algebra_isomorphism(a, b, DEFAULT_ISO_CAP).is_found()
}

/// Isomorphism of bi-modules over the same algebra `s`.
pub fn module_isomorphism(
    s: &FiniteGammaSemiring,
    a: &BiGammaModule,
    b: &BiGammaModule,
    cap: u64,
) -> IsoOutcome {
    find_isomorphism(&TableStructure::of_module(s, a), &TableStructure::of_module(s, b), cap)
}

/// First input at which `map: a → b` fails to commute with addition or the
/// structural map, as `(operation, arguments, parameters)`.
pub fn homomorphism_failure(
    a: &FiniteGammaSemiring,
    b: &FiniteGammaSemiring,
    map: &[usize],
) -> Option<(&'static str, Vec<usize>, Vec<usize>)> {
    let t = a.t_size();
    for x in 0..t {
        for y in 0..t {
            if map[a.add(x, y)] != b.add(map[x], map[y]) {
                return Some(("add", vec![x, y], vec![]));
            }
        }
    }
    let gt = a.gamma_tuple_count();
    let mut xs = vec![0; a.n()];
    let mut gs = vec![0; a.n() - 1];
    for (i, &v) in a.mu_table().iter().enumerate() {
        decode_tuple(i / gt, t, &mut xs);
        decode_tuple(i % gt, a.g_size(), &mut gs);
        let images: Vec<usize> = xs.iter().map(|&x| map[x]).collect();
        if map[v] != b.mu(&images, &gs) {
            return Some(("mu", xs, gs));
        }
    }
    None
}
