//! Exhaustive axiom checking for finite n-ary Γ-semirings.
//!
//! Every law is checked on every input tuple. For each law (and slot, where
//! the law is positional) the report keeps the lexicographically first failing
//! tuple, so a report is deterministic and each witness can be replayed with
//! [`Violation::replays_on`].

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{decode_tuple, tuple_count, FiniteGammaSemiring};

/// Name of a checked law. Positional laws carry the (0-based) slot or bracket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "law", content = "slot", rename_all = "kebab-case")]
pub enum Law {
    AddIdentity,
    AddCommutative,
    AddAssociative,
    GammaCommutative,
    GammaAssociative,
    SlotAdditive(usize),
    ZeroAbsorbing(usize),
    GammaAdditive(usize),
    /// Substituting the inner product at `bracket` disagrees with bracket 0.
    Associative(usize),
    UnitLaw,
    // bi-module laws
    ModuleAddIdentity,
    ModuleAddCommutative,
    ModuleAddAssociative,
    /// action in slot j: additive in the module argument
    ActionModuleAdditive(usize),
    /// action in slot j is additive in its k-th T-argument: (j, k)
    ActionSlotAdditive(usize, usize),
    ActionGammaAdditive(usize, usize),
    ActionZeroModule(usize),
    ActionZeroAbsorbing(usize, usize),
    /// module at position p of a (2n-1)-sequence, bracket i disagrees with bracket 0
    ActionSubstitution(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    #[serde(flatten)]
    pub law: Law,
    pub witness: Vec<usize>,
}

/// Outcome of an exhaustive check. Additivity in the parameter slots is kept
/// apart from the other laws: it is reported in full but only gates `pass`
/// under [`AxiomReport::strict_pass`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
    pub parameter_additivity: Vec<Violation>,
}

impl Law {
    /// Laws of the form `[…]_{…,γ+δ,…} = […]_{…,γ,…} + […]_{…,δ,…}`.
    pub fn is_parameter_additivity(self) -> bool {
        matches!(self, Law::GammaAdditive(_) | Law::ActionGammaAdditive(_, _))
    }
}

impl AxiomReport {
    pub fn from_violations(mut violations: Vec<Violation>) -> Self {
        violations.sort_by(|a, b| a.law.cmp(&b.law).then_with(|| a.witness.cmp(&b.witness)));
        let (parameter_additivity, violations): (Vec<_>, Vec<_>) =
            violations.into_iter().partition(|v| v.law.is_parameter_additivity());
        AxiomReport {
            pass: violations.is_empty(),
            violations,
            parameter_additivity,
        }
    }

    pub fn strict_pass(&self) -> bool {
        self.pass && self.parameter_additivity.is_empty()
    }

    pub fn all_violations(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().chain(&self.parameter_additivity)
    }
}

/// First index in `0..total` where `fails` holds, searched in parallel.
pub(crate) fn first_failure(total: usize, fails: impl Fn(usize) -> bool + Sync) -> Option<usize> {
    if total < 4096 {
        (0..total).find(|&i| fails(i))
    } else {
        (0..total).into_par_iter().find_first(|&i| fails(i))
    }
}

impl Violation {
    /// Re-evaluates the law at the witness; `true` means the failure reproduces.
    pub fn replays_on(&self, s: &FiniteGammaSemiring) -> bool {
        let w = &self.witness;
        let n = s.n();
        match self.law {
            Law::AddIdentity => s.add(0, w[0]) != w[0] || s.add(w[0], 0) != w[0],
            Law::AddCommutative => s.add(w[0], w[1]) != s.add(w[1], w[0]),
            Law::AddAssociative => {
                s.add(s.add(w[0], w[1]), w[2]) != s.add(w[0], s.add(w[1], w[2]))
            }
            Law::GammaCommutative => s.gamma_add(w[0], w[1]) != s.gamma_add(w[1], w[0]),
            Law::GammaAssociative => {
                s.gamma_add(s.gamma_add(w[0], w[1]), w[2])
                    != s.gamma_add(w[0], s.gamma_add(w[1], w[2]))
            }
            Law::SlotAdditive(k) => {
                let (xs, rest) = w.split_at(n);
                let (y, gs) = (rest[0], &rest[1..]);
                slot_additive_fails(s, k, xs, y, gs)
            }
            Law::ZeroAbsorbing(_) => {
                let (xs, gs) = w.split_at(n);
                s.mu(xs, gs) != 0
            }
            Law::GammaAdditive(k) => {
                let (xs, rest) = w.split_at(n);
                let (gs, d) = rest.split_at(n - 1);
                gamma_additive_fails(s, k, xs, gs, d[0])
            }
            Law::Associative(i) => {
                let (xs, rest) = w.split_at(2 * n - 1);
                let (outer, inner) = rest.split_at(n - 1);
                bracket(s, xs, outer, inner, i) != bracket(s, xs, outer, inner, 0)
            }
            Law::UnitLaw => match s.unit() {
                Some(u) => {
                    let mut xs = vec![u.element; n];
                    xs[0] = w[0];
                    s.mu(&xs, &u.gammas) != w[0]
                }
                None => false,
            },
            _ => false,
        }
    }
}

fn slot_additive_fails(s: &FiniteGammaSemiring, k: usize, xs: &[usize], y: usize, gs: &[usize]) -> bool {
    let mut summed = xs.to_vec();
    summed[k] = s.add(xs[k], y);
    let mut other = xs.to_vec();
    other[k] = y;
    s.mu(&summed, gs) != s.add(s.mu(xs, gs), s.mu(&other, gs))
}

fn gamma_additive_fails(s: &FiniteGammaSemiring, k: usize, xs: &[usize], gs: &[usize], d: usize) -> bool {
    let mut summed = gs.to_vec();
    summed[k] = s.gamma_add(gs[k], d);
    let mut other = gs.to_vec();
    other[k] = d;
    s.mu(xs, &summed) != s.add(s.mu(xs, gs), s.mu(xs, &other))
}

/// Value of the (2n-1)-sequence `xs` with the inner product placed at `i`.
/// Outer parameters are `outer`, inner ones `inner`, at every placement.
pub(crate) fn bracket(
    s: &FiniteGammaSemiring,
    xs: &[usize],
    outer: &[usize],
    inner: &[usize],
    i: usize,
) -> usize {
    let n = s.n();
    let v = s.mu(&xs[i..i + n], inner);
    let mut args = Vec::with_capacity(n);
    args.extend_from_slice(&xs[..i]);
    args.push(v);
    args.extend_from_slice(&xs[i + n..]);
    s.mu(&args, outer)
}

/// Checks every axiom of an n-ary Γ-semiring by exhaustive enumeration.
pub fn verify_axioms(s: &FiniteGammaSemiring) -> AxiomReport {
    let t = s.t_size();
    let g = s.g_size();
    let n = s.n();
    let mut out = Vec::new();
    let mut record = |law: Law, witness: Option<Vec<usize>>| {
        if let Some(witness) = witness {
            out.push(Violation { law, witness });
        }
    };

    record(
        Law::AddIdentity,
        (0..t).find(|&x| s.add(0, x) != x || s.add(x, 0) != x).map(|x| vec![x]),
    );
    record(
        Law::AddCommutative,
        first_failure(t * t, |i| s.add(i / t, i % t) != s.add(i % t, i / t))
            .map(|i| vec![i / t, i % t]),
    );
    record(
        Law::AddAssociative,
        first_failure(t * t * t, |i| {
            let (x, y, z) = (i / (t * t), (i / t) % t, i % t);
            s.add(s.add(x, y), z) != s.add(x, s.add(y, z))
        })
        .map(|i| vec![i / (t * t), (i / t) % t, i % t]),
    );
    record(
        Law::GammaCommutative,
        (0..g * g)
            .find(|&i| s.gamma_add(i / g, i % g) != s.gamma_add(i % g, i / g))
            .map(|i| vec![i / g, i % g]),
    );
    record(
        Law::GammaAssociative,
        (0..g * g * g)
            .find(|&i| {
                let (a, b, c) = (i / (g * g), (i / g) % g, i % g);
                s.gamma_add(s.gamma_add(a, b), c) != s.gamma_add(a, s.gamma_add(b, c))
            })
            .map(|i| vec![i / (g * g), (i / g) % g, i % g]),
    );

    let xt = tuple_count(t, n);
    let gt = tuple_count(g, n - 1);
    let split = |i: usize| {
        let mut xs = vec![0; n];
        let mut gs = vec![0; n - 1];
        decode_tuple(i / gt, t, &mut xs);
        decode_tuple(i % gt, g, &mut gs);
        (xs, gs)
    };

    for k in 0..n {
        let w = first_failure(xt * t * gt, |i| {
            let (xs, gs) = split((i / (gt * t)) * gt + i % gt);
            let y = (i / gt) % t;
            slot_additive_fails(s, k, &xs, y, &gs)
        })
        .map(|i| {
            let (xs, gs) = split((i / (gt * t)) * gt + i % gt);
            let mut w = xs;
            w.push((i / gt) % t);
            w.extend(gs);
            w
        });
        record(Law::SlotAdditive(k), w);
    }

    for k in 0..n {
        let w = first_failure(xt * gt, |i| {
            let (xs, gs) = split(i);
            xs[k] == 0 && s.mu(&xs, &gs) != 0
        })
        .map(|i| {
            let (mut xs, gs) = split(i);
            xs.extend(gs);
            xs
        });
        record(Law::ZeroAbsorbing(k), w);
    }

    for k in 0..n - 1 {
        let w = first_failure(xt * gt * g, |i| {
            let (xs, gs) = split(i / g);
            gamma_additive_fails(s, k, &xs, &gs, i % g)
        })
        .map(|i| {
            let (mut xs, gs) = split(i / g);
            xs.extend(gs);
            xs.push(i % g);
            xs
        });
        record(Law::GammaAdditive(k), w);
    }

    let seq = tuple_count(t, 2 * n - 1);
    let decode_assoc = |i: usize| {
        let mut xs = vec![0; 2 * n - 1];
        let mut outer = vec![0; n - 1];
        let mut inner = vec![0; n - 1];
        decode_tuple(i % gt, g, &mut inner);
        decode_tuple((i / gt) % gt, g, &mut outer);
        decode_tuple(i / (gt * gt), t, &mut xs);
        (xs, outer, inner)
    };
    for b in 1..n {
        let w = first_failure(seq * gt * gt, |i| {
            let (xs, outer, inner) = decode_assoc(i);
            bracket(s, &xs, &outer, &inner, b) != bracket(s, &xs, &outer, &inner, 0)
        })
        .map(|i| {
            let (mut xs, outer, inner) = decode_assoc(i);
            xs.extend(outer);
            xs.extend(inner);
            xs
        });
        record(Law::Associative(b), w);
    }

    if let Some(u) = s.unit() {
        let w = (0..t)
            .find(|&x| {
                let mut xs = vec![u.element; n];
                xs[0] = x;
                s.mu(&xs, &u.gammas) != x
            })
            .map(|x| vec![x]);
        record(Law::UnitLaw, w);
    }

    AxiomReport::from_violations(out)
}
