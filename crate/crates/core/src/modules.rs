//! Finite bi-Γ-modules: a commutative monoid `M` with one positional action
//! per slot `j`, where the module element sits in slot `j` of the structural
//! map and the other `n - 1` slots carry elements of `T`.
//!
//! Action table layout for slot `j`: the `n - 1` T-arguments in slot order
//! (slot `j` skipped) as a base-`t` number, then the module element, then the
//! Γ-tuple: `((others · m) + module) · |Γ|^(n-1) + γ⃗`.

use serde::{Deserialize, Serialize};

use crate::algebra::{decode_tuple, encode_tuple, tuple_count, FiniteGammaSemiring};
use crate::axioms::{first_failure, AxiomReport, Law, Violation};
use crate::error::{Error, Result};
use crate::ideals::{is_ideal, GammaIdeal, Partition};
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiGammaModule {
    name: String,
    n: usize,
    t_size: usize,
    g_size: usize,
    elements: Vec<String>,
    madd: Vec<usize>,
    act: Vec<Vec<usize>>,
}

impl BiGammaModule {
    /// Checks table shapes and ranges against `s`.
    pub fn new(
        s: &FiniteGammaSemiring,
        name: impl Into<String>,
        elements: Vec<String>,
        madd: Vec<usize>,
        act: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let m = elements.len();
        let n = s.n();
        if m == 0 {
            return Err(Error::TableShapeMismatch("module needs a zero element".into()));
        }
        if madd.len() != m * m {
            return Err(Error::TableShapeMismatch(format!(
                "madd has {} entries, expected {}",
                madd.len(),
                m * m
            )));
        }
        let per_slot = tuple_count(s.t_size(), n - 1) * m * s.gamma_tuple_count();
        if act.len() != n {
            return Err(Error::TableShapeMismatch(format!(
                "{} action tables, expected one per slot ({n})",
                act.len()
            )));
        }
        if let Some((j, a)) = act.iter().enumerate().find(|(_, a)| a.len() != per_slot) {
            return Err(Error::TableShapeMismatch(format!(
                "action table {j} has {} entries, expected {per_slot}",
                a.len()
            )));
        }
        if madd.iter().chain(act.iter().flatten()).any(|&v| v >= m) {
            return Err(Error::IndexOutOfRange("module table entry outside the carrier".into()));
        }
        Ok(BiGammaModule {
            name: name.into(),
            n,
            t_size: s.t_size(),
            g_size: s.g_size(),
            elements,
            madd,
            act,
        })
    }

    /// Builds tables by evaluating `act(j, others, m, gammas)`.
    pub fn from_fns(
        s: &FiniteGammaSemiring,
        name: impl Into<String>,
        elements: Vec<String>,
        madd: impl Fn(usize, usize) -> usize,
        act: impl Fn(usize, &[usize], usize, &[usize]) -> usize,
    ) -> Result<Self> {
        let m = elements.len();
        let n = s.n();
        let t = s.t_size();
        let gt = s.gamma_tuple_count();
        let madd_t = (0..m * m).map(|i| madd(i / m, i % m)).collect();
        let mut others = vec![0; n - 1];
        let mut gs = vec![0; n - 1];
        let acts = (0..n)
            .map(|j| {
                (0..tuple_count(t, n - 1) * m * gt)
                    .map(|i| {
                        decode_tuple(i / (m * gt), t, &mut others);
                        decode_tuple(i % gt, s.g_size(), &mut gs);
                        act(j, &others, (i / gt) % m, &gs)
                    })
                    .collect()
            })
            .collect();
        Self::new(s, name, elements, madd_t, acts)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn madd_table(&self) -> &[usize] {
        &self.madd
    }

    pub fn act_tables(&self) -> &[Vec<usize>] {
        &self.act
    }

    #[inline]
    pub fn madd(&self, a: usize, b: usize) -> usize {
        self.madd[a * self.size() + b]
    }

    #[inline]
    pub fn act_index(&self, others: &[usize], m: usize, gs: &[usize]) -> usize {
        let gt = tuple_count(self.g_size, self.n - 1);
        (encode_tuple(self.t_size, others) * self.size() + m) * gt + encode_tuple(self.g_size, gs)
    }

    /// Action with the module element `m` in slot `j`.
    #[inline]
    pub fn act(&self, j: usize, others: &[usize], m: usize, gs: &[usize]) -> usize {
        self.act[j][self.act_index(others, m, gs)]
    }

    pub fn to_document(&self) -> ModuleDocument {
        let m = self.size();
        ModuleDocument {
            name: Some(self.name.clone()),
            m_elements: self.elements.clone(),
            madd: self.madd.chunks(m).map(<[usize]>::to_vec).collect(),
            act: self.act.clone(),
        }
    }
}

/// The algebra acting on itself: every slot action is the structural map.
pub fn self_module(s: &FiniteGammaSemiring) -> BiGammaModule {
    let n = s.n();
    BiGammaModule::from_fns(
        s,
        format!("{} (regular)", s.name()),
        s.elements().to_vec(),
        |a, b| s.add(a, b),
        |j, others, m, gs| {
            let mut xs = others.to_vec();
            xs.insert(j, m);
            debug_assert_eq!(xs.len(), n);
            s.mu(&xs, gs)
        },
    )
    .expect("regular module tables match the algebra")
}

pub fn zero_module(s: &FiniteGammaSemiring) -> BiGammaModule {
    BiGammaModule::from_fns(s, "0", vec!["0".into()], |_, _| 0, |_, _, _, _| 0)
        .expect("zero module tables match the algebra")
}

/// Quotient of `module` by the smallest module congruence identifying each of `pairs`.
pub fn quotient_module(
    s: &FiniteGammaSemiring,
    module: &BiGammaModule,
    pairs: &[(usize, usize)],
) -> Result<BiGammaModule> {
    let m = module.size();
    let n = s.n();
    let t = s.t_size();
    let gt = s.gamma_tuple_count();
    let mut part = Partition::new(m);
    for &(a, b) in pairs {
        part.union(a, b);
    }
    let mut others = vec![0; n - 1];
    let mut gs = vec![0; n - 1];
    loop {
        let mut changed = false;
        for a in 0..m {
            for b in a + 1..m {
                if part.root(a) != part.root(b) {
                    continue;
                }
                for c in 0..m {
                    changed |= part.union(module.madd(a, c), module.madd(b, c));
                }
                for j in 0..n {
                    for ti in 0..tuple_count(t, n - 1) {
                        decode_tuple(ti, t, &mut others);
                        for g in 0..gt {
                            decode_tuple(g, s.g_size(), &mut gs);
                            changed |= part.union(
                                module.act(j, &others, a, &gs),
                                module.act(j, &others, b, &gs),
                            );
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let (class_of, reps) = part.classes();
    let label = pairs
        .iter()
        .map(|(a, b)| format!("{}≡{}", module.elements()[*a], module.elements()[*b]))
        .collect::<Vec<_>>()
        .join(",");
    BiGammaModule::from_fns(
        s,
        format!("{}/({label})", module.name()),
        reps.iter().map(|&r| format!("[{}]", module.elements()[r])).collect(),
        |a, b| class_of[module.madd(reps[a], reps[b])],
        |j, others, x, gs| class_of[module.act(j, others, reps[x], gs)],
    )
}

/// `T/I` with all of `I` collapsed to one zero element and the tables induced
/// by sending results in `I` to zero. This is generally *not* a bi-module in
/// the additive sense; it serves as a negative control for the checker.
pub fn rees_quotient_module(s: &FiniteGammaSemiring, ideal: &GammaIdeal) -> Result<BiGammaModule> {
    let mut reps = vec![0];
    reps.extend((0..s.t_size()).filter(|&x| !ideal.contains(x)));
    let mut class_of = vec![0; s.t_size()];
    for (c, &r) in reps.iter().enumerate() {
        class_of[r] = c;
    }
    BiGammaModule::from_fns(
        s,
        format!("{}/{:?} (Rees)", s.name(), ideal.to_vec()),
        reps.iter().map(|&r| format!("[{}]", s.elements()[r])).collect(),
        |a, b| class_of[s.add(reps[a], reps[b])],
        |j, others, x, gs| {
            let mut xs = others.to_vec();
            xs.insert(j, reps[x]);
            class_of[s.mu(&xs, gs)]
        },
    )
}

/// Value of the (2n-1)-sequence with the module element at position `p` and
/// the inner block starting at `i`; `xs[p]` holds the module element.
fn module_bracket(
    s: &FiniteGammaSemiring,
    module: &BiGammaModule,
    xs: &[usize],
    p: usize,
    outer: &[usize],
    inner: &[usize],
    i: usize,
) -> usize {
    let n = s.n();
    if (i..i + n).contains(&p) {
        let mut block: Vec<usize> = xs[i..i + n].to_vec();
        let m = block.remove(p - i);
        let v = module.act(p - i, &block, m, inner);
        let mut rest: Vec<usize> = xs[..i].to_vec();
        rest.extend_from_slice(&xs[i + n..]);
        module.act(i, &rest, v, outer)
    } else {
        let v = s.mu(&xs[i..i + n], inner);
        let mut seq: Vec<usize> = xs[..i].to_vec();
        seq.push(v);
        seq.extend_from_slice(&xs[i + n..]);
        let q = if p < i { p } else { p - (n - 1) };
        let m = seq.remove(q);
        module.act(q, &seq, m, outer)
    }
}

impl Violation {
    /// Module counterpart of [`Violation::replays_on`].
    pub fn replays_on_module(&self, s: &FiniteGammaSemiring, module: &BiGammaModule) -> bool {
        let w = &self.witness;
        let n = s.n();
        match self.law {
            Law::ModuleAddIdentity => module.madd(0, w[0]) != w[0] || module.madd(w[0], 0) != w[0],
            Law::ModuleAddCommutative => module.madd(w[0], w[1]) != module.madd(w[1], w[0]),
            Law::ModuleAddAssociative => {
                module.madd(module.madd(w[0], w[1]), w[2]) != module.madd(w[0], module.madd(w[1], w[2]))
            }
            Law::ActionModuleAdditive(j) => {
                let (others, rest) = w.split_at(n - 1);
                let (a, b, gs) = (rest[0], rest[1], &rest[2..]);
                module.act(j, others, module.madd(a, b), gs)
                    != module.madd(module.act(j, others, a, gs), module.act(j, others, b, gs))
            }
            Law::ActionSlotAdditive(j, k) => {
                let (others, rest) = w.split_at(n - 1);
                let (y, m, gs) = (rest[0], rest[1], &rest[2..]);
                action_slot_additive_fails(s, module, j, k, others, y, m, gs)
            }
            Law::ActionGammaAdditive(j, k) => {
                let (others, rest) = w.split_at(n - 1);
                let (m, rest) = (rest[0], &rest[1..]);
                let (gs, d) = rest.split_at(n - 1);
                action_gamma_additive_fails(s, module, j, k, others, m, gs, d[0])
            }
            Law::ActionZeroModule(j) => {
                let (others, gs) = w.split_at(n - 1);
                module.act(j, others, 0, gs) != 0
            }
            Law::ActionZeroAbsorbing(j, _) => {
                let (others, rest) = w.split_at(n - 1);
                module.act(j, others, rest[0], &rest[1..]) != 0
            }
            Law::ActionSubstitution(p, i) => {
                let (xs, rest) = w.split_at(2 * n - 1);
                let (outer, inner) = rest.split_at(n - 1);
                module_bracket(s, module, xs, p, outer, inner, i)
                    != module_bracket(s, module, xs, p, outer, inner, 0)
            }
            _ => false,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn action_slot_additive_fails(
    s: &FiniteGammaSemiring,
    module: &BiGammaModule,
    j: usize,
    k: usize,
    others: &[usize],
    y: usize,
    m: usize,
    gs: &[usize],
) -> bool {
    let mut summed = others.to_vec();
    summed[k] = s.add(others[k], y);
    let mut alt = others.to_vec();
    alt[k] = y;
    module.act(j, &summed, m, gs) != module.madd(module.act(j, others, m, gs), module.act(j, &alt, m, gs))
}

#[allow(clippy::too_many_arguments)]
fn action_gamma_additive_fails(
    s: &FiniteGammaSemiring,
    module: &BiGammaModule,
    j: usize,
    k: usize,
    others: &[usize],
    m: usize,
    gs: &[usize],
    d: usize,
) -> bool {
    let mut summed = gs.to_vec();
    summed[k] = s.gamma_add(gs[k], d);
    let mut alt = gs.to_vec();
    alt[k] = d;
    module.act(j, others, m, &summed) != module.madd(module.act(j, others, m, gs), module.act(j, others, m, &alt))
}

fn check_shape(s: &FiniteGammaSemiring, module: &BiGammaModule) -> Result<()> {
    if module.n != s.n() || module.t_size != s.t_size() || module.g_size != s.g_size() {
        return Err(Error::TableShapeMismatch(format!(
            "module {} was built for a different algebra than {}",
            module.name,
            s.name()
        )));
    }
    Ok(())
}

/// Exhaustive check of the monoid, additivity, zero and substitution laws.
pub fn verify_bimodule(s: &FiniteGammaSemiring, module: &BiGammaModule) -> Result<AxiomReport> {
    check_shape(s, module)?;
    let n = s.n();
    let t = s.t_size();
    let g = s.g_size();
    let gt = s.gamma_tuple_count();
    let m = module.size();
    let ot = tuple_count(t, n - 1);
    let mut out = Vec::new();
    let mut record = |law: Law, witness: Option<Vec<usize>>| {
        if let Some(witness) = witness {
            out.push(Violation { law, witness });
        }
    };

    record(
        Law::ModuleAddIdentity,
        (0..m).find(|&x| module.madd(0, x) != x || module.madd(x, 0) != x).map(|x| vec![x]),
    );
    record(
        Law::ModuleAddCommutative,
        (0..m * m)
            .find(|&i| module.madd(i / m, i % m) != module.madd(i % m, i / m))
            .map(|i| vec![i / m, i % m]),
    );
    record(
        Law::ModuleAddAssociative,
        (0..m * m * m)
            .find(|&i| {
                let (a, b, c) = (i / (m * m), (i / m) % m, i % m);
                module.madd(module.madd(a, b), c) != module.madd(a, module.madd(b, c))
            })
            .map(|i| vec![i / (m * m), (i / m) % m, i % m]),
    );

    let decode = |oi: usize, gi: usize| {
        let mut others = vec![0; n - 1];
        let mut gs = vec![0; n - 1];
        decode_tuple(oi, t, &mut others);
        decode_tuple(gi, g, &mut gs);
        (others, gs)
    };

    for j in 0..n {
        // module additivity: index = ((oi·m + a)·m + b)·gt + gi
        let w = first_failure(ot * m * m * gt, |i| {
            let (others, gs) = decode(i / (m * m * gt), i % gt);
            let (a, b) = ((i / (m * gt)) % m, (i / gt) % m);
            module.act(j, &others, module.madd(a, b), &gs)
                != module.madd(module.act(j, &others, a, &gs), module.act(j, &others, b, &gs))
        })
        .map(|i| {
            let (mut others, gs) = decode(i / (m * m * gt), i % gt);
            others.push((i / (m * gt)) % m);
            others.push((i / gt) % m);
            others.extend(gs);
            others
        });
        record(Law::ActionModuleAdditive(j), w);

        record(
            Law::ActionZeroModule(j),
            first_failure(ot * gt, |i| {
                let (others, gs) = decode(i / gt, i % gt);
                module.act(j, &others, 0, &gs) != 0
            })
            .map(|i| {
                let (mut others, gs) = decode(i / gt, i % gt);
                others.extend(gs);
                others
            }),
        );

        for k in 0..n - 1 {
            // index = ((oi·t + y)·m + x)·gt + gi
            let w = first_failure(ot * t * m * gt, |i| {
                let (others, gs) = decode(i / (t * m * gt), i % gt);
                let (y, x) = ((i / (m * gt)) % t, (i / gt) % m);
                action_slot_additive_fails(s, module, j, k, &others, y, x, &gs)
            })
            .map(|i| {
                let (mut others, gs) = decode(i / (t * m * gt), i % gt);
                others.push((i / (m * gt)) % t);
                others.push((i / gt) % m);
                others.extend(gs);
                others
            });
            record(Law::ActionSlotAdditive(j, k), w);

            let w = first_failure(ot * m * gt, |i| {
                let (others, gs) = decode(i / (m * gt), i % gt);
                others[k] == 0 && module.act(j, &others, (i / gt) % m, &gs) != 0
            })
            .map(|i| {
                let (mut others, gs) = decode(i / (m * gt), i % gt);
                others.push((i / gt) % m);
                others.extend(gs);
                others
            });
            record(Law::ActionZeroAbsorbing(j, k), w);

            // index = ((oi·m + x)·gt + gi)·g + d
            let w = first_failure(ot * m * gt * g, |i| {
                let (others, gs) = decode(i / (m * gt * g), (i / g) % gt);
                let x = (i / (gt * g)) % m;
                action_gamma_additive_fails(s, module, j, k, &others, x, &gs, i % g)
            })
            .map(|i| {
                let (mut others, gs) = decode(i / (m * gt * g), (i / g) % gt);
                others.push((i / (gt * g)) % m);
                others.extend(gs);
                others.push(i % g);
                others
            });
            record(Law::ActionGammaAdditive(j, k), w);
        }
    }

    // substitution: T-elements at the 2n-2 positions other than p, module element,
    // outer parameters, inner parameters
    let tt = tuple_count(t, 2 * n - 2);
    for p in 0..2 * n - 1 {
        let decode_sub = |i: usize| {
            let mut ts = vec![0; 2 * n - 2];
            let mut outer = vec![0; n - 1];
            let mut inner = vec![0; n - 1];
            decode_tuple(i % gt, g, &mut inner);
            decode_tuple((i / gt) % gt, g, &mut outer);
            let x = (i / (gt * gt)) % m;
            decode_tuple(i / (gt * gt * m), t, &mut ts);
            ts.insert(p, x);
            (ts, outer, inner)
        };
        for b in 1..n {
            let w = first_failure(tt * m * gt * gt, |i| {
                let (xs, outer, inner) = decode_sub(i);
                module_bracket(s, module, &xs, p, &outer, &inner, b)
                    != module_bracket(s, module, &xs, p, &outer, &inner, 0)
            })
            .map(|i| {
                let (mut xs, outer, inner) = decode_sub(i);
                xs.extend(outer);
                xs.extend(inner);
                xs
            });
            record(Law::ActionSubstitution(p, b), w);
        }
    }

    Ok(AxiomReport::from_violations(out))
}

fn close_submodule(s: &FiniteGammaSemiring, module: &BiGammaModule, set: &mut Subset) {
    let n = s.n();
    let t = s.t_size();
    let gt = s.gamma_tuple_count();
    let mut others = vec![0; n - 1];
    let mut gs = vec![0; n - 1];
    set.insert(0);
    loop {
        let mut changed = false;
        let members = set.to_vec();
        for &a in &members {
            for &b in &members {
                changed |= set.insert(module.madd(a, b));
            }
        }
        for &x in &members {
            for j in 0..n {
                for oi in 0..tuple_count(t, n - 1) {
                    decode_tuple(oi, t, &mut others);
                    for gi in 0..gt {
                        decode_tuple(gi, s.g_size(), &mut gs);
                        changed |= set.insert(module.act(j, &others, x, &gs));
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

/// All sub-bi-modules in canonical order.
pub fn submodules(s: &FiniteGammaSemiring, module: &BiGammaModule) -> Result<Vec<Subset>> {
    check_shape(s, module)?;
    let m = module.size();
    let closure = |gens: &Subset| {
        let mut c = gens.clone();
        close_submodule(s, module, &mut c);
        c
    };
    let mut found = std::collections::BTreeSet::new();
    let mut queue = vec![closure(&Subset::empty(m))];
    queue.extend((0..m).map(|x| closure(&Subset::from_iter(m, [x]))));
    while let Some(next) = queue.pop() {
        if found.contains(&next) {
            continue;
        }
        for other in &found {
            let joined = closure(&next.union(other));
            if !found.contains(&joined) {
                queue.push(joined);
            }
        }
        found.insert(next);
    }
    Ok(found.into_iter().collect())
}

/// `true` if some action value is non-zero.
pub fn acts_nontrivially(module: &BiGammaModule) -> bool {
    module.act.iter().flatten().any(|&v| v != 0)
}

/// Simple: exactly the two submodules `{0}` and `M`, with `M ≠ 0`, and a
/// non-zero action.
pub fn is_simple(s: &FiniteGammaSemiring, module: &BiGammaModule) -> Result<bool> {
    Ok(module.size() >= 2 && acts_nontrivially(module) && submodules(s, module)?.len() == 2)
}

/// Elements of `T` that kill the module from every T-slot of every action.
pub fn annihilator(s: &FiniteGammaSemiring, module: &BiGammaModule) -> Result<GammaIdeal> {
    check_shape(s, module)?;
    let n = s.n();
    let t = s.t_size();
    let gt = s.gamma_tuple_count();
    let mut killed = Subset::full(t);
    let mut others = vec![0; n - 1];
    for j in 0..n {
        for (i, &v) in module.act[j].iter().enumerate() {
            if v == 0 {
                continue;
            }
            decode_tuple(i / (module.size() * gt), t, &mut others);
            for &a in &others {
                killed.remove(a);
            }
        }
    }
    if !is_ideal(s, &killed) {
        return Err(Error::NotAnIdeal(killed.to_vec()));
    }
    GammaIdeal::from_subset(s, killed)
}

/// On-disk module form; mirrors the algebra document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub m_elements: Vec<String>,
    pub madd: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
}

pub fn load_module(s: &FiniteGammaSemiring, document: &str) -> Result<BiGammaModule> {
    let doc: ModuleDocument =
        serde_json::from_str(document).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    let m = doc.m_elements.len();
    if doc.madd.len() != m || doc.madd.iter().any(|r| r.len() != m) {
        return Err(Error::TableShapeMismatch(format!("madd must be {m}×{m}")));
    }
    BiGammaModule::new(
        s,
        doc.name.unwrap_or_else(|| "M".into()),
        doc.m_elements,
        doc.madd.into_iter().flatten().collect(),
        doc.act,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::builtin_example;

    #[test]
    fn regular_and_zero_modules_verify() {
        for name in ["TRIV", "B3", "N3", "B3⊕B3"] {
            let s = builtin_example(name).unwrap();
            assert!(verify_bimodule(&s, &self_module(&s)).unwrap().pass, "{name}");
            assert!(verify_bimodule(&s, &zero_module(&s)).unwrap().pass, "{name}");
        }
    }

    #[test]
    fn mutated_action_fails_with_replayable_witness() {
        let s = builtin_example("B3").unwrap();
        let good = self_module(&s);
        let mut act = good.act_tables().to_vec();
        // action in slot 0 with others (1,1), module element 1
        let idx = good.act_index(&[1, 1], 1, &[0, 0]);
        act[0][idx] = 0;
        let bad = BiGammaModule::new(&s, "bad", good.elements().to_vec(), good.madd_table().to_vec(), act).unwrap();
        let report = verify_bimodule(&s, &bad).unwrap();
        assert!(!report.pass);
        assert!(report.all_violations().all(|v| v.replays_on_module(&s, &bad)));
    }

    #[test]
    fn submodule_lattices() {
        let b3 = builtin_example("B3").unwrap();
        let n3 = builtin_example("N3").unwrap();
        let z = zero_module(&b3);
        assert_eq!(submodules(&b3, &z).unwrap().len(), 1);
        let lat: Vec<Vec<usize>> = submodules(&b3, &self_module(&b3)).unwrap().iter().map(Subset::to_vec).collect();
        assert_eq!(lat, vec![vec![0], vec![0, 1]]);
        let lat: Vec<Vec<usize>> = submodules(&n3, &self_module(&n3)).unwrap().iter().map(Subset::to_vec).collect();
        assert_eq!(lat, vec![vec![0], vec![0, 2], vec![0, 1, 2]]);
    }

    #[test]
    fn annihilators() {
        let b3 = builtin_example("B3").unwrap();
        let n3 = builtin_example("N3").unwrap();
        assert_eq!(annihilator(&b3, &zero_module(&b3)).unwrap().to_vec(), vec![0, 1]);
        assert_eq!(annihilator(&b3, &self_module(&b3)).unwrap().to_vec(), vec![0]);
        let q = quotient_module(&n3, &self_module(&n3), &[(1, 2)]).unwrap();
        assert_eq!(q.size(), 2);
        assert!(verify_bimodule(&n3, &q).unwrap().pass);
        assert_eq!(annihilator(&n3, &q).unwrap().to_vec(), vec![0]);
    }

    #[test]
    fn rees_quotient_of_n3_is_not_additive() {
        let n3 = builtin_example("N3").unwrap();
        let p = crate::ideals::ideal_closure(&n3, [2]);
        let rees = rees_quotient_module(&n3, &p).unwrap();
        assert_eq!(rees.size(), 2);
        let report = verify_bimodule(&n3, &rees).unwrap();
        assert!(!report.pass);
        assert!(report.all_violations().all(|v| v.replays_on_module(&n3, &rees)));
    }

    #[test]
    fn module_document_round_trip() {
        let n3 = builtin_example("N3").unwrap();
        let m = self_module(&n3);
        let text = serde_json::to_string(&m.to_document()).unwrap();
        assert_eq!(load_module(&n3, &text).unwrap(), m);
        let b3 = builtin_example("B3").unwrap();
        assert!(matches!(load_module(&b3, &text), Err(Error::TableShapeMismatch(_))));
    }
}
