//! Direct sums, matrix algebras, direct decomposition and the Wedderburn
//! comparison against matrix algebras over division candidates.

use serde::Serialize;

use crate::algebra::{decode_tuple, tuple_count, FiniteGammaSemiring, UnitWitness};
use crate::error::{Error, Result};
use crate::ideals::{enumerate_ideals, jacobson_radical, mu_ideal_product, GammaIdeal};
use crate::iso::{algebra_isomorphism, homomorphism_failure, IsoOutcome, DEFAULT_ISO_CAP};
use crate::subset::Subset;

/// Default cap on the carrier size of constructed matrix algebras.
pub const DEFAULT_MATRIX_CAP: u128 = 1 << 16;
/// Structural tables above this many entries are refused.
pub const MU_TABLE_CAP: u128 = 1 << 24;

fn check_table_size(t: u128, n: usize, g: usize) -> Result<()> {
    let entries = t.saturating_pow(n as u32).saturating_mul((g as u128).saturating_pow(n as u32 - 1));
    if entries > MU_TABLE_CAP {
        return Err(Error::SizeOverflow(entries, MU_TABLE_CAP));
    }
    Ok(())
}

fn unit_holds(s: &FiniteGammaSemiring, e: usize, gs: &[usize]) -> bool {
    let mut xs = vec![e; s.n()];
    (0..s.t_size()).all(|x| {
        xs[0] = x;
        s.mu(&xs, gs) == x
    })
}

/// Componentwise sum; element `(a, b)` has index `a·|B| + b`.
pub fn direct_sum(a: &FiniteGammaSemiring, b: &FiniteGammaSemiring) -> Result<FiniteGammaSemiring> {
    if a.n() != b.n() {
        return Err(Error::ArityMismatch(a.n(), b.n()));
    }
    if a.g_size() != b.g_size() || a.gamma_add_table() != b.gamma_add_table() {
        return Err(Error::GammaMismatch);
    }
    let n = a.n();
    let tb = b.t_size();
    check_table_size((a.t_size() * tb) as u128, n, a.g_size())?;
    let elements = (0..a.t_size() * tb)
        .map(|i| format!("({},{})", a.elements()[i / tb], b.elements()[i % tb]))
        .collect();
    // A one-element factor accepts any parameter tuple for its zero.
    let unit_of = |s: &FiniteGammaSemiring, gs: &[usize]| -> Option<usize> {
        if s.t_size() == 1 {
            return Some(0);
        }
        s.unit().filter(|u| u.gammas == gs || unit_holds(s, u.element, gs)).map(|u| u.element)
    };
    let candidates: Vec<Vec<usize>> = [a.unit(), b.unit()].into_iter().flatten().map(|u| u.gammas.clone()).collect();
    let unit = candidates.into_iter().find_map(|gs| {
        let ea = unit_of(a, &gs)?;
        let eb = unit_of(b, &gs)?;
        Some(UnitWitness {
            element: ea * tb + eb,
            gammas: gs,
        })
    });
    let mu = |xs: &[usize], gs: &[usize]| -> usize {
        let mut left = vec![0; n];
        let mut right = vec![0; n];
        for (k, &x) in xs.iter().enumerate() {
            left[k] = x / tb;
            right[k] = x % tb;
        }
        a.mu(&left, gs) * tb + b.mu(&right, gs)
    };
    FiniteGammaSemiring::from_fns(
        format!("{}⊕{}", a.name(), b.name()),
        n,
        elements,
        a.gamma_names().to_vec(),
        |x, y| a.add(x / tb, y / tb) * tb + b.add(x % tb, y % tb),
        |x, y| a.gamma_add(x, y),
        mu,
        unit,
    )
}

/// The algebra of `k × k` matrices over `d` with the chain-contraction product
/// `[A¹,…,Aⁿ](i₀,iₙ) = Σ μ_D(A¹(i₀,i₁),…,Aⁿ(iₙ₋₁,iₙ))`. Entries are stored
/// row-major as base-`|D|` digits, entry `(0,0)` most significant.
pub fn matrix_semiring(d: &FiniteGammaSemiring, k: usize) -> Result<FiniteGammaSemiring> {
    matrix_semiring_capped(d, k, DEFAULT_MATRIX_CAP)
}

pub fn matrix_semiring_capped(d: &FiniteGammaSemiring, k: usize, cap: u128) -> Result<FiniteGammaSemiring> {
    if k == 0 {
        return Err(Error::MalformedDocument("matrix degree must be at least 1".into()));
    }
    let u = d.require_unit()?.clone();
    let base = d.t_size();
    let cells = k * k;
    let size = (base as u128).checked_pow(cells as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::SizeOverflow(size, cap));
    }
    let n = d.n();
    check_table_size(size, n, d.g_size())?;
    let size = size as usize;
    let entries = |m: usize| {
        let mut v = vec![0; cells];
        decode_tuple(m, base, &mut v);
        v
    };
    let encode = |v: &[usize]| v.iter().fold(0, |acc, &x| acc * base + x);
    let elements = (0..size)
        .map(|m| {
            let v = entries(m);
            let rows: Vec<String> = v
                .chunks(k)
                .map(|r| format!("[{}]", r.iter().map(|&x| d.elements()[x].as_str()).collect::<Vec<_>>().join(",")))
                .collect();
            format!("[{}]", rows.join(","))
        })
        .collect();
    let mut identity = vec![0; cells];
    for i in 0..k {
        identity[i * k + i] = u.element;
    }
    let unit = UnitWitness {
        element: encode(&identity),
        gammas: u.gammas.clone(),
    };
    let chains = tuple_count(k, n - 1);
    let mu = |xs: &[usize], gs: &[usize]| -> usize {
        let mats: Vec<Vec<usize>> = xs.iter().map(|&m| entries(m)).collect();
        let mut out = vec![0; cells];
        let mut path = vec![0; n + 1];
        let mut args = vec![0; n];
        for i0 in 0..k {
            for i_n in 0..k {
                let mut acc = 0;
                for c in 0..chains {
                    path[0] = i0;
                    path[n] = i_n;
                    decode_tuple(c, k, &mut path[1..n]);
                    for (s, m) in mats.iter().enumerate() {
                        args[s] = m[path[s] * k + path[s + 1]];
                    }
                    acc = d.add(acc, d.mu(&args, gs));
                }
                out[i0 * k + i_n] = acc;
            }
        }
        encode(&out)
    };
    FiniteGammaSemiring::from_fns(
        format!("M{k}({})", d.name()),
        n,
        elements,
        d.gamma_names().to_vec(),
        |x, y| {
            let (a, b) = (entries(x), entries(y));
            let sum: Vec<usize> = a.iter().zip(&b).map(|(&p, &q)| d.add(p, q)).collect();
            encode(&sum)
        },
        |x, y| d.gamma_add(x, y),
        mu,
        Some(unit),
    )
}

/// The operations of `s` restricted to `members`, which must contain 0 and be
/// closed under addition and the structural map. Returns the algebra and the
/// embedding (new index to old index).
pub fn subalgebra(
    s: &FiniteGammaSemiring,
    members: &Subset,
    unit: Option<UnitWitness>,
) -> Result<(FiniteGammaSemiring, Vec<usize>)> {
    let embed = members.to_vec();
    if embed.first() != Some(&0) {
        return Err(Error::NotAnIdeal(embed));
    }
    let mut index = vec![usize::MAX; s.t_size()];
    for (i, &x) in embed.iter().enumerate() {
        index[x] = i;
    }
    let lookup = |x: usize| -> Result<usize> {
        match index[x] {
            usize::MAX => Err(Error::NotAnIdeal(embed.clone())),
            i => Ok(i),
        }
    };
    for &x in &embed {
        for &y in &embed {
            lookup(s.add(x, y))?;
        }
    }
    let n = s.n();
    let mut xs = vec![0; n];
    let mut gs = vec![0; n - 1];
    let m = embed.len();
    let gt = s.gamma_tuple_count();
    for i in 0..tuple_count(m, n) {
        decode_tuple(i, m, &mut xs);
        let lifted: Vec<usize> = xs.iter().map(|&x| embed[x]).collect();
        for g in 0..gt {
            decode_tuple(g, s.g_size(), &mut gs);
            lookup(s.mu(&lifted, &gs))?;
        }
    }
    let unit = match unit {
        Some(u) => Some(UnitWitness {
            element: lookup(u.element)?,
            gammas: u.gammas,
        }),
        None => None,
    };
    let algebra = FiniteGammaSemiring::from_fns(
        format!("{}|{:?}", s.name(), embed),
        n,
        embed.iter().map(|&x| s.elements()[x].clone()).collect(),
        s.gamma_names().to_vec(),
        |a, b| index[s.add(embed[a], embed[b])],
        |a, b| s.gamma_add(a, b),
        |xs, gs| {
            let lifted: Vec<usize> = xs.iter().map(|&x| embed[x]).collect();
            index[s.mu(&lifted, gs)]
        },
        unit,
    )?;
    Ok((algebra, embed))
}

/// A unit witness of `s` found by trying every element and parameter tuple.
pub fn find_unit(s: &FiniteGammaSemiring) -> Option<UnitWitness> {
    if let Some(u) = s.unit() {
        return Some(u.clone());
    }
    let n = s.n();
    let mut gs = vec![0; n - 1];
    for g in 0..s.gamma_tuple_count() {
        decode_tuple(g, s.g_size(), &mut gs);
        for e in 0..s.t_size() {
            if unit_holds(s, e, &gs) {
                return Some(UnitWitness {
                    element: e,
                    gammas: gs,
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixForm {
    /// members of the factor forming the division candidate
    pub division: Vec<usize>,
    pub degree: usize,
    /// factor element to matrix index
    pub isomorphism: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Factor {
    pub algebra: FiniteGammaSemiring,
    /// factor index to element of the decomposed algebra
    pub embedding: Vec<usize>,
}

impl Serialize for Factor {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("Factor", 3)?;
        st.serialize_field("t_size", &self.algebra.t_size())?;
        st.serialize_field("algebra", &self.algebra.to_document())?;
        st.serialize_field("embedding", &self.embedding)?;
        st.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub factors: Vec<Factor>,
    pub complete: bool,
    pub matched_matrix_forms: Vec<Option<MatrixForm>>,
}

/// First ideal pair `(I, J)`, both non-zero, splitting `s` as `I ⊕ J`.
fn find_splitting(s: &FiniteGammaSemiring) -> Option<(GammaIdeal, GammaIdeal)> {
    let t = s.t_size();
    let lattice = enumerate_ideals(s);
    let candidates: Vec<&GammaIdeal> = lattice.proper().filter(|i| !i.is_zero()).collect();
    for (x, i) in candidates.iter().enumerate() {
        for j in &candidates[x + 1..] {
            if i.len() * j.len() != t || !i.intersection(j).is_zero() {
                continue;
            }
            let mut hit = Subset::empty(t);
            let unique = i.members().iter().all(|a| j.members().iter().all(|b| hit.insert(s.add(a, b))));
            if unique && mu_ideal_product(s, i, j).is_zero() {
                return Some(((*i).clone(), (*j).clone()));
            }
        }
    }
    None
}

/// Component of the unit lying in `part`, when `s` has a unit and `e` splits
/// as a sum over the given parts.
fn unit_component(s: &FiniteGammaSemiring, part: &GammaIdeal, other: &GammaIdeal) -> Option<UnitWitness> {
    let u = s.unit()?;
    for a in part.members().iter() {
        for b in other.members().iter() {
            if s.add(a, b) == u.element {
                return Some(UnitWitness {
                    element: a,
                    gammas: u.gammas.clone(),
                });
            }
        }
    }
    None
}

fn split_recursive(s: &FiniteGammaSemiring, out: &mut Vec<Factor>, embed: &[usize]) -> Result<()> {
    match find_splitting(s) {
        None => out.push(Factor {
            algebra: s.clone(),
            embedding: embed.to_vec(),
        }),
        Some((i, j)) => {
            for (part, other) in [(&i, &j), (&j, &i)] {
                let (sub, inner) = subalgebra(s, part.members(), unit_component(s, part, other))?;
                let composed: Vec<usize> = inner.iter().map(|&x| embed[x]).collect();
                split_recursive(&sub, out, &composed)?;
            }
        }
    }
    Ok(())
}

/// Repeatedly splits `s` along ideal pairs. `complete` records whether the
/// evident map from the direct sum of the factors is an isomorphism.
pub fn decompose_direct(s: &FiniteGammaSemiring) -> Result<DecompositionReport> {
    let mut factors = Vec::new();
    let identity: Vec<usize> = (0..s.t_size()).collect();
    split_recursive(s, &mut factors, &identity)?;
    let complete = recombination_failure(s, &factors)?.is_none();
    let matched_matrix_forms = vec![None; factors.len()];
    Ok(DecompositionReport {
        factors,
        complete,
        matched_matrix_forms,
    })
}

/// Where the sum-of-embeddings map from `⊕ factors` to `s` fails to be an
/// isomorphism, as a message; `None` when it is one.
pub fn recombination_failure(s: &FiniteGammaSemiring, factors: &[Factor]) -> Result<Option<String>> {
    let Some((first, rest)) = factors.split_first() else {
        return Ok(Some("no factors".into()));
    };
    let mut sum = first.algebra.clone();
    for f in rest {
        sum = direct_sum(&sum, &f.algebra)?;
    }
    let sizes: Vec<usize> = factors.iter().map(|f| f.algebra.t_size()).collect();
    let mut digits = vec![0; factors.len()];
    let map: Vec<usize> = (0..sum.t_size())
        .map(|i| {
            let mut rem = i;
            for (d, &sz) in digits.iter_mut().zip(&sizes).rev() {
                *d = rem % sz;
                rem /= sz;
            }
            s.sum(digits.iter().zip(factors).map(|(&d, f)| f.embedding[d]))
        })
        .collect();
    if sum.t_size() != s.t_size() {
        return Ok(Some(format!("factor sizes multiply to {}, not {}", sum.t_size(), s.t_size())));
    }
    let mut seen = Subset::empty(s.t_size());
    if !map.iter().all(|&x| seen.insert(x)) {
        return Ok(Some("sum of embeddings is not injective".into()));
    }
    Ok(homomorphism_failure(&sum, s, &map)
        .map(|(op, xs, gs)| format!("sum of embeddings breaks {op} at {xs:?} with parameters {gs:?}")))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct WedderburnCaps {
    pub max_factor_size: usize,
    pub max_degree: usize,
    pub iso_cap: u64,
    /// candidate subsets examined per factor and degree
    pub subset_cap: u64,
}

impl Default for WedderburnCaps {
    fn default() -> Self {
        WedderburnCaps {
            max_factor_size: 64,
            max_degree: 3,
            iso_cap: DEFAULT_ISO_CAP,
            subset_cap: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorMatch {
    pub factor: usize,
    pub t_size: usize,
    pub form: Option<MatrixForm>,
    /// "matched", "no match within caps" or "factor exceeds size cap"
    pub status: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct WedderburnReport {
    pub radical: GammaIdeal,
    pub semisimple: bool,
    pub decomposition: Option<DecompositionReport>,
    pub factors: Vec<FactorMatch>,
    pub truncations: Vec<String>,
}

/// Division candidate test: a unit exists and every non-zero `a` has `b`
/// with `[a, b, e, …, e]_{γ⃗₀} = e`.
pub fn is_division(d: &FiniteGammaSemiring) -> Option<UnitWitness> {
    let u = find_unit(d)?;
    let mut xs = vec![u.element; d.n()];
    let ok = (1..d.t_size()).all(|a| {
        xs[0] = a;
        (0..d.t_size()).any(|b| {
            xs[1] = b;
            d.mu(&xs, &u.gammas) == u.element
        })
    });
    ok.then_some(u)
}

/// Subsets of `0..t` of size `size` containing 0, in lexicographic order,
/// stopping after `cap` subsets. The flag reports truncation.
fn zero_subsets(t: usize, size: usize, cap: u64, mut visit: impl FnMut(&Subset) -> bool) -> bool {
    if size == 0 || size > t {
        return false;
    }
    let mut pick: Vec<usize> = (1..size).collect();
    let mut seen = 0u64;
    loop {
        seen += 1;
        if seen > cap {
            return true;
        }
        let set = Subset::from_iter(t, std::iter::once(0).chain(pick.iter().copied()));
        if visit(&set) {
            return false;
        }
        // next combination of size-1 from 1..t
        let r = pick.len();
        let mut i = r;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if pick[i] < t - (r - i) {
                break;
            }
        }
        pick[i] += 1;
        for j in i + 1..r {
            pick[j] = pick[j - 1] + 1;
        }
    }
}

fn integer_root(value: usize, k: usize) -> Option<usize> {
    let e = (k * k) as u32;
    (1..=value).take_while(|d| d.pow(e) <= value).find(|d| d.pow(e) == value)
}

fn match_factor(
    f: &FiniteGammaSemiring,
    caps: &WedderburnCaps,
    truncations: &mut Vec<String>,
    index: usize,
) -> Option<MatrixForm> {
    for k in 1..=caps.max_degree {
        let Some(dsize) = integer_root(f.t_size(), k) else { continue };
        let mut found = None;
        let truncated = zero_subsets(f.t_size(), dsize, caps.subset_cap, |set| {
            let Ok((sub, _)) = subalgebra(f, set, None) else { return false };
            let Some(unit) = is_division(&sub) else { return false };
            let Ok(d) = FiniteGammaSemiring::new(
                sub.name(),
                sub.n(),
                sub.elements().to_vec(),
                sub.gamma_names().to_vec(),
                sub.add_table().to_vec(),
                sub.gamma_add_table().to_vec(),
                sub.mu_table().to_vec(),
                Some(unit),
            ) else {
                return false;
            };
            let Ok(m) = matrix_semiring(&d, k) else { return false };
            match algebra_isomorphism(f, &m, caps.iso_cap) {
                IsoOutcome::Found(map) => {
                    found = Some(MatrixForm {
                        division: set.to_vec(),
                        degree: k,
                        isomorphism: map,
                    });
                    true
                }
                IsoOutcome::Truncated => {
                    truncations.push(format!("factor {index}: isomorphism search cap reached at degree {k}"));
                    false
                }
                IsoOutcome::NotFound => false,
            }
        });
        if truncated {
            truncations.push(format!("factor {index}: division candidate cap reached at degree {k}"));
        }
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Radical test, then decomposition and a matrix-form search per factor.
pub fn wedderburn_check(s: &FiniteGammaSemiring, caps: &WedderburnCaps) -> Result<WedderburnReport> {
    let radical = jacobson_radical(s).ideal;
    if !radical.is_zero() {
        return Ok(WedderburnReport {
            radical,
            semisimple: false,
            decomposition: None,
            factors: Vec::new(),
            truncations: Vec::new(),
        });
    }
    let mut decomposition = decompose_direct(s)?;
    let mut truncations = Vec::new();
    let mut factors = Vec::new();
    for (index, f) in decomposition.factors.iter().enumerate() {
        let (form, status) = if f.algebra.t_size() > caps.max_factor_size {
            truncations.push(format!(
                "factor {index}: {} elements exceed the cap of {}",
                f.algebra.t_size(),
                caps.max_factor_size
            ));
            (None, "factor exceeds size cap")
        } else {
            match match_factor(&f.algebra, caps, &mut truncations, index) {
                Some(form) => (Some(form), "matched"),
                None => (None, "no match within caps"),
            }
        };
        decomposition.matched_matrix_forms[index] = form.clone();
        factors.push(FactorMatch {
            factor: index,
            t_size: f.algebra.t_size(),
            form,
            status: status.into(),
        });
    }
    assert!(radical.is_zero(), "semisimple report requires a zero radical");
    Ok(WedderburnReport {
        radical,
        semisimple: true,
        decomposition: Some(decomposition),
        factors,
        truncations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_axioms;
    use crate::corpus::{boolean, builtin_example, saturating, trivial};
    use crate::iso::are_isomorphic;

    #[test]
    fn direct_sums() {
        let b3 = boolean(3);
        let n3 = saturating(3, 2);
        let s = direct_sum(&b3, &n3).unwrap();
        assert_eq!(s.t_size(), 6);
        assert!(verify_axioms(&s).pass);
        assert!(s.unit().is_some());
        assert!(are_isomorphic(&direct_sum(&trivial(3), &b3).unwrap(), &b3));
        assert_eq!(direct_sum(&b3, &boolean(2)), Err(Error::ArityMismatch(3, 2)));
    }

    #[test]
    fn matrices() {
        let b3 = boolean(3);
        assert!(are_isomorphic(&matrix_semiring(&b3, 1).unwrap(), &b3));
        let m = matrix_semiring(&b3, 2).unwrap();
        assert_eq!(m.t_size(), 16);
        assert!(verify_axioms(&m).pass);
        assert_eq!(matrix_semiring(&trivial(3), 2), Err(Error::NoUnitWitness("TRIV".into())));
        assert!(matches!(matrix_semiring(&b3, 5), Err(Error::SizeOverflow(_, _))));
    }

    #[test]
    fn binary_matrix_product_is_the_usual_one() {
        let b2 = boolean(2);
        let m = matrix_semiring(&b2, 2).unwrap();
        // E12 · E21 = E11 with entries (0,0),(0,1),(1,0),(1,1) as digits 8,4,2,1
        assert_eq!(m.mu(&[4, 2], &[0]), 8);
        assert_eq!(m.mu(&[2, 4], &[0]), 1);
        assert_eq!(m.mu(&[4, 4], &[0]), 0);
    }

    #[test]
    fn decompositions() {
        let b3 = boolean(3);
        let r = decompose_direct(&builtin_example("B3⊕B3").unwrap()).unwrap();
        assert!(r.complete);
        assert_eq!(r.factors.len(), 2);
        assert!(r.factors.iter().all(|f| are_isomorphic(&f.algebra, &b3)));
        let r = decompose_direct(&b3).unwrap();
        assert_eq!(r.factors.len(), 1);
        assert!(r.complete);
        let r = decompose_direct(&builtin_example("N3").unwrap()).unwrap();
        assert_eq!(r.factors.len(), 1);
    }

    #[test]
    fn wedderburn() {
        let caps = WedderburnCaps::default();
        let r = wedderburn_check(&builtin_example("N3").unwrap(), &caps).unwrap();
        assert!(!r.semisimple);
        assert_eq!(r.radical.to_vec(), vec![0, 2]);
        let r = wedderburn_check(&builtin_example("B3⊕B3").unwrap(), &caps).unwrap();
        assert!(r.semisimple);
        assert!(r.factors.iter().all(|f| f.form.as_ref().is_some_and(|m| m.degree == 1)));
        let r = wedderburn_check(&builtin_example("M2B3").unwrap(), &caps).unwrap();
        assert!(r.semisimple);
        assert_eq!(r.factors[0].form.as_ref().map(|m| m.degree), Some(2));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        zero_subsets(4, 3, 100, |s| {
            seen.push(s.to_vec());
            false
        });
        assert_eq!(seen, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3]]);
    }
}
