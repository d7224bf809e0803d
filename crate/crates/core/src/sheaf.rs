//! The structure sheaf on a finite spectrum and the sheaves associated with
//! bi-modules.
//!
//! Stalks are localizations at the points. For `Q ⊆ P` the transition
//! `T_P → T_Q` sends the class of `(x, s)` to the class of `(x, s)`. A section
//! over an open `U` is a family of stalk values, one per point of `U`, that
//! every transition between points of `U` respects. On a finite space the
//! smallest open around a point computes its stalk.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::algebra::{decode_tuple, tuple_count, FiniteGammaSemiring, UnitWitness};
use crate::error::{Error, Result};
use crate::iso::{algebra_isomorphism, homomorphism_failure, module_isomorphism, IsoOutcome, DEFAULT_ISO_CAP};
use crate::localization::{localize_at_prime, localize_module, mult_closure, LocalAtPrime, LocalizedModule};
use crate::modules::BiGammaModule;
use crate::spectrum::{basic_open, Spectrum, ZariskiTopology};
use crate::subset::Subset;

/// Covers per open are enumerated only up to this many.
pub const COVER_CAP: u64 = 1 << 12;
/// Compatible families per cover are enumerated only up to this many.
pub const FAMILY_CAP: u64 = 1 << 20;

/// Stalk sizes and transition maps; all section bookkeeping works on this.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Presheaf {
    sizes: Vec<usize>,
    transitions: BTreeMap<(usize, usize), Vec<usize>>,
}

impl Presheaf {
    /// Every family over `points` (ascending point indices) respecting the
    /// transitions between those points, in lexicographic order.
    fn families(&self, points: &[usize]) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut values = vec![0; points.len()];
        self.extend(points, &mut values, 0, &mut out);
        out
    }

    fn consistent(&self, points: &[usize], values: &[usize], upto: usize) -> bool {
        let p = points[upto];
        (0..upto).all(|i| {
            let q = points[i];
            self.transitions.get(&(p, q)).is_none_or(|m| m[values[upto]] == values[i])
                && self.transitions.get(&(q, p)).is_none_or(|m| m[values[i]] == values[upto])
        })
    }

    fn extend(&self, points: &[usize], values: &mut Vec<usize>, depth: usize, out: &mut Vec<Vec<usize>>) {
        if depth == points.len() {
            out.push(values.clone());
            return;
        }
        for v in 0..self.sizes[points[depth]] {
            values[depth] = v;
            if self.consistent(points, values, depth) {
                self.extend(points, values, depth + 1, out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SheafSection {
    pub open_set: Subset,
    /// value at each point of `open_set`, in ascending point order
    pub values: Vec<usize>,
}

impl SheafSection {
    pub fn value_at(&self, p: usize) -> Option<usize> {
        self.open_set.iter().position(|q| q == p).map(|i| self.values[i])
    }
}

#[derive(Debug, Clone)]
pub struct StructureSheaf {
    pub spectrum: Spectrum,
    pub topology: ZariskiTopology,
    pub stalks: Vec<LocalAtPrime>,
    /// `(P, Q) ↦` map from classes of `T_P` to classes of `T_Q`
    pub transitions: BTreeMap<(usize, usize), Vec<usize>>,
    /// the algebra the sheaf was built from
    pub base: FiniteGammaSemiring,
}

fn transition_map(
    from: &[(usize, usize)],
    from_class: impl Fn(usize, usize) -> Option<usize>,
    to_class: impl Fn(usize, usize) -> Option<usize>,
    classes: usize,
) -> std::result::Result<Vec<usize>, String> {
    let mut map = vec![usize::MAX; classes];
    for &(x, d) in from {
        let (Some(c), Some(image)) = (from_class(x, d), to_class(x, d)) else {
            return Err(format!("fraction ({x},{d}) has no image"));
        };
        if map[c] == usize::MAX {
            map[c] = image;
        } else if map[c] != image {
            return Err(format!("fraction ({x},{d}) maps to {image}, its class to {}", map[c]));
        }
    }
    Ok(map)
}

/// Comparable pairs `(P, Q)` with `Q ⊊ P`.
fn comparable_pairs(spec: &Spectrum) -> Vec<(usize, usize)> {
    let k = spec.len();
    (0..k)
        .flat_map(|p| (0..k).map(move |q| (p, q)))
        .filter(|&(p, q)| p != q && spec.points[q].is_subset(&spec.points[p]))
        .collect()
}

pub fn build_structure_sheaf(
    s: &FiniteGammaSemiring,
    spec: &Spectrum,
    top: &ZariskiTopology,
) -> Result<StructureSheaf> {
    let stalks: Vec<LocalAtPrime> = spec.points.iter().map(|p| localize_at_prime(s, p)).collect::<Result<_>>()?;
    let mut transitions = BTreeMap::new();
    for (p, q) in comparable_pairs(spec) {
        let (a, b) = (&stalks[p].localized, &stalks[q].localized);
        let map = transition_map(
            &a.pairs,
            |x, d| a.class_of_pair(x, d),
            |x, d| b.class_of_pair(x, d),
            a.algebra.t_size(),
        )
        .map_err(|e| Error::InconsistentSheaf(format!("transition {p}→{q}: {e}")))?;
        transitions.insert((p, q), map);
    }
    Ok(StructureSheaf {
        spectrum: spec.clone(),
        topology: top.clone(),
        stalks,
        transitions,
        base: s.clone(),
    })
}

impl StructureSheaf {
    fn presheaf(&self) -> Presheaf {
        Presheaf {
            sizes: self.stalks.iter().map(|l| l.localized.algebra.t_size()).collect(),
            transitions: self.transitions.clone(),
        }
    }

    pub fn stalk_algebra(&self, p: usize) -> &FiniteGammaSemiring {
        &self.stalks[p].localized.algebra
    }

    /// Copy with the transition `from → to` replaced or added; for building
    /// deliberately inconsistent sheaves.
    pub fn with_transition(&self, from: usize, to: usize, map: Vec<usize>) -> Self {
        let mut out = self.clone();
        out.transitions.insert((from, to), map);
        out
    }

    fn check_open(&self, u: &Subset) -> Result<()> {
        if self.topology.is_open(u) {
            Ok(())
        } else {
            Err(Error::NotOpen(u.to_vec()))
        }
    }
}

/// Sections over one open, with the pointwise algebra structure.
#[derive(Debug, Clone)]
pub struct SectionSpace {
    pub open_set: Subset,
    pub sections: Vec<Vec<usize>>,
    pub algebra: FiniteGammaSemiring,
}

impl SectionSpace {
    pub fn section(&self, i: usize) -> SheafSection {
        SheafSection {
            open_set: self.open_set.clone(),
            values: self.sections[i].clone(),
        }
    }

    pub fn index_of(&self, values: &[usize]) -> Option<usize> {
        self.sections.binary_search_by(|v| v.as_slice().cmp(values)).ok()
    }
}

fn index_or_inconsistent(index: &HashMap<Vec<usize>, usize>, family: &[usize], what: &str) -> Result<usize> {
    index
        .get(family)
        .copied()
        .ok_or_else(|| Error::InconsistentSheaf(format!("pointwise {what} {family:?} is not a section")))
}

pub fn sections(f: &StructureSheaf, u: &Subset) -> Result<SectionSpace> {
    f.check_open(u)?;
    let points = u.to_vec();
    let families = f.presheaf().families(&points);
    let index: HashMap<Vec<usize>, usize> = families.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let stalk = |i: usize| f.stalk_algebra(points[i]);
    let n = f.base.n();
    let t = families.len();
    let g = f.base.g_size();
    let gammas = f.base.unit().map_or_else(|| vec![0; n - 1], |u| u.gammas.clone());
    let mut add = Vec::with_capacity(t * t);
    for a in &families {
        for b in &families {
            let sum: Vec<usize> = (0..points.len()).map(|i| stalk(i).add(a[i], b[i])).collect();
            add.push(index_or_inconsistent(&index, &sum, "sum")?);
        }
    }
    let gt = tuple_count(g, n - 1);
    let mut mu = Vec::with_capacity(tuple_count(t, n) * gt);
    let mut pick = vec![0; n];
    let mut gs = vec![0; n - 1];
    let mut args = vec![0; n];
    for i in 0..tuple_count(t, n) * gt {
        decode_tuple(i / gt, t, &mut pick);
        decode_tuple(i % gt, g, &mut gs);
        let value: Vec<usize> = (0..points.len())
            .map(|p| {
                for (slot, &sec) in pick.iter().enumerate() {
                    args[slot] = families[sec][p];
                }
                stalk(p).mu(&args, &gs)
            })
            .collect();
        mu.push(index_or_inconsistent(&index, &value, "product")?);
    }
    let unit_family: Vec<usize> = (0..points.len())
        .map(|i| stalk(i).unit().map_or(0, |w| w.element))
        .collect();
    let unit = index.get(&unit_family).map(|&e| UnitWitness { element: e, gammas });
    let (gamma_names, gamma_add) = (f.base.gamma_names().to_vec(), f.base.gamma_add_table().to_vec());
    let names = families.iter().map(|v| format!("{v:?}")).collect();
    let algebra = FiniteGammaSemiring::new_unchecked_unit(
        format!("O({:?})", points),
        n,
        names,
        gamma_names,
        add,
        gamma_add,
        mu,
        unit.clone(),
    )?;
    // a corrupted unit family stays available but unverified
    let algebra = match unit {
        Some(_) if !unit_ok(&algebra) => algebra.without_unit(),
        _ => algebra,
    };
    Ok(SectionSpace {
        open_set: u.clone(),
        sections: families,
        algebra,
    })
}

fn unit_ok(s: &FiniteGammaSemiring) -> bool {
    let Some(u) = s.unit() else { return true };
    let mut xs = vec![u.element; s.n()];
    (0..s.t_size()).all(|x| {
        xs[0] = x;
        s.mu(&xs, &u.gammas) == x
    })
}

pub fn restrict(f: &StructureSheaf, sec: &SheafSection, v: &Subset) -> Result<SheafSection> {
    if !f.topology.is_open(v) || !v.is_subset(&sec.open_set) {
        return Err(Error::NotSubOpen(v.to_vec()));
    }
    Ok(SheafSection {
        open_set: v.clone(),
        values: v.iter().map(|p| sec.value_at(p).expect("subset of the domain")).collect(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct StalkReport {
    pub point: usize,
    pub minimal_open: Subset,
    pub sections: usize,
    pub localization_size: usize,
    /// sections over the minimal open against the localization at the point
    pub isomorphism: IsoOutcome,
    /// evaluation at the point is a bijective homomorphism
    pub germ_map_is_iso: bool,
}

pub fn stalk(f: &StructureSheaf, p: usize) -> Result<StalkReport> {
    let u = f.topology.minimal_open(p).clone();
    let space = sections(f, &u)?;
    let local = f.stalk_algebra(p);
    let position = u.iter().position(|q| q == p).expect("point lies in its minimal open");
    let germ: Vec<usize> = space.sections.iter().map(|v| v[position]).collect();
    let mut hit = Subset::empty(local.t_size());
    let bijective = germ.len() == local.t_size() && germ.iter().all(|&c| hit.insert(c));
    let germ_map_is_iso = bijective && homomorphism_failure(&space.algebra, local, &germ).is_none();
    Ok(StalkReport {
        point: p,
        minimal_open: u,
        sections: space.sections.len(),
        localization_size: local.t_size(),
        isomorphism: algebra_isomorphism(&space.algebra, local, DEFAULT_ISO_CAP),
        germ_map_is_iso,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SheafFailure {
    pub check: String,
    pub open_set: Vec<usize>,
    /// opens of the cover, by index into the open lattice
    pub cover: Vec<usize>,
    pub witness: Vec<Vec<usize>>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SheafAxiomReport {
    pub pass: bool,
    pub covers_checked: u64,
    pub failures: Vec<SheafFailure>,
    pub truncations: Vec<String>,
}

/// Every subset of the non-empty opens inside `u` whose union is `u`.
fn covers_of(top: &ZariskiTopology, u: &Subset) -> (Vec<Vec<usize>>, bool) {
    let inside: Vec<usize> = (0..top.opens.len())
        .filter(|&i| !top.opens[i].is_empty() && top.opens[i].is_subset(u))
        .collect();
    let total = 1u64.checked_shl(inside.len() as u32).unwrap_or(u64::MAX);
    let truncated = total > COVER_CAP;
    let mut covers = Vec::new();
    for mask in 0..total.min(COVER_CAP) {
        let members: Vec<usize> = (0..inside.len()).filter(|b| mask >> b & 1 == 1).map(|b| inside[b]).collect();
        let union = members.iter().fold(Subset::empty(u.universe()), |acc, &i| acc.union(&top.opens[i]));
        if union == *u {
            covers.push(members);
        }
    }
    (covers, truncated)
}

/// Families `(s_i)` over the cover agreeing on overlaps, capped.
fn cover_families(
    spaces: &[&Vec<Vec<usize>>],
    opens: &[Vec<usize>],
    cap: u64,
) -> (Vec<Vec<usize>>, bool) {
    struct Walk<'a> {
        spaces: &'a [&'a Vec<Vec<usize>>],
        opens: &'a [Vec<usize>],
        out: Vec<Vec<usize>>,
        cap: u64,
        truncated: bool,
    }
    impl Walk<'_> {
        fn agrees(&self, chosen: &[usize], depth: usize) -> bool {
            let here = &self.opens[depth];
            let vals = &self.spaces[depth][chosen[depth]];
            (0..depth).all(|i| {
                let there = &self.opens[i];
                let other = &self.spaces[i][chosen[i]];
                here.iter().enumerate().all(|(a, p)| match there.iter().position(|q| q == p) {
                    Some(b) => vals[a] == other[b],
                    None => true,
                })
            })
        }
        fn go(&mut self, chosen: &mut Vec<usize>, depth: usize) {
            if self.truncated {
                return;
            }
            if depth == self.spaces.len() {
                if self.out.len() as u64 >= self.cap {
                    self.truncated = true;
                    return;
                }
                self.out.push(chosen.clone());
                return;
            }
            for c in 0..self.spaces[depth].len() {
                chosen[depth] = c;
                if self.agrees(chosen, depth) {
                    self.go(chosen, depth + 1);
                }
            }
        }
    }
    let mut walk = Walk {
        spaces,
        opens,
        out: Vec::new(),
        cap,
        truncated: false,
    };
    walk.go(&mut vec![0; spaces.len()], 0);
    (walk.out, walk.truncated)
}

/// Identity and gluing checks over a point-value presheaf, shared by the
/// structure sheaf and module sheaves.
fn check_covers(top: &ZariskiTopology, pre: &Presheaf, failures: &mut Vec<SheafFailure>, truncations: &mut Vec<String>) -> u64 {
    let all_families: Vec<Vec<Vec<usize>>> = top.opens.iter().map(|u| pre.families(&u.to_vec())).collect();
    let mut checked = 0u64;
    for (ui, u) in top.opens.iter().enumerate() {
        let upoints = u.to_vec();
        let (covers, truncated) = covers_of(top, u);
        if truncated {
            truncations.push(format!("open {:?}: cover enumeration stopped at {COVER_CAP} candidate covers", upoints));
        }
        for cover in covers {
            checked += 1;
            let opens: Vec<Vec<usize>> = cover.iter().map(|&i| top.opens[i].to_vec()).collect();
            let restrict_to = |values: &[usize], target: &[usize]| -> Vec<usize> {
                target.iter().map(|p| values[upoints.iter().position(|q| q == p).expect("cover member inside U")]).collect()
            };
            let mut image: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
            for sec in &all_families[ui] {
                let idx: Vec<usize> = opens
                    .iter()
                    .zip(&cover)
                    .map(|(o, &ci)| {
                        let r = restrict_to(sec, o);
                        all_families[ci].binary_search(&r).unwrap_or(usize::MAX)
                    })
                    .collect();
                if let Some(other) = image.insert(idx.clone(), sec.clone()) {
                    failures.push(SheafFailure {
                        check: "identity".into(),
                        open_set: upoints.clone(),
                        cover: cover.clone(),
                        witness: vec![other, sec.clone()],
                        detail: "distinct sections with equal restrictions".into(),
                    });
                }
            }
            let spaces: Vec<&Vec<Vec<usize>>> = cover.iter().map(|&i| &all_families[i]).collect();
            let (families, truncated) = cover_families(&spaces, &opens, FAMILY_CAP);
            if truncated {
                truncations.push(format!("open {:?}, cover {:?}: family enumeration capped", upoints, cover));
            }
            if let Some(family) = families.iter().find(|fam| !image.contains_key(*fam)) {
                failures.push(SheafFailure {
                    check: "gluing".into(),
                    open_set: upoints.clone(),
                    cover: cover.clone(),
                    witness: family.iter().zip(&spaces).map(|(&c, sp)| sp[c].clone()).collect(),
                    detail: "compatible family with no section over the union".into(),
                });
            }
        }
    }
    checked
}

fn check_transitions(
    pre: &Presheaf,
    spec: &Spectrum,
    hom: impl Fn(usize, usize, &[usize]) -> Option<String>,
    failures: &mut Vec<SheafFailure>,
) {
    for (&(p, q), map) in &pre.transitions {
        if let Some(detail) = hom(p, q, map) {
            failures.push(SheafFailure {
                check: "homomorphism".into(),
                open_set: vec![],
                cover: vec![],
                witness: vec![vec![p, q], map.clone()],
                detail,
            });
        }
    }
    let k = spec.len();
    for r in 0..k {
        for q in 0..k {
            for p in 0..k {
                let (Some(pq), Some(qr), Some(pr)) = (
                    pre.transitions.get(&(p, q)),
                    pre.transitions.get(&(q, r)),
                    pre.transitions.get(&(p, r)),
                ) else {
                    continue;
                };
                if let Some(x) = (0..pq.len()).find(|&x| qr[pq[x]] != pr[x]) {
                    failures.push(SheafFailure {
                        check: "composition".into(),
                        open_set: vec![],
                        cover: vec![],
                        witness: vec![vec![p, q, r], vec![x]],
                        detail: format!("{p}→{q}→{r} differs from {p}→{r}"),
                    });
                }
            }
        }
    }
}

pub fn verify_sheaf_axioms(f: &StructureSheaf) -> SheafAxiomReport {
    let pre = f.presheaf();
    let mut failures = Vec::new();
    let mut truncations = Vec::new();
    check_transitions(
        &pre,
        &f.spectrum,
        |p, q, map| {
            homomorphism_failure(f.stalk_algebra(p), f.stalk_algebra(q), map)
                .map(|(op, xs, gs)| format!("{op} at {xs:?} with parameters {gs:?}"))
        },
        &mut failures,
    );
    let covers_checked = check_covers(&f.topology, &pre, &mut failures, &mut truncations);
    SheafAxiomReport {
        pass: failures.is_empty(),
        covers_checked,
        failures,
        truncations,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AffineReport {
    pub global_sections: usize,
    /// `x ↦ (x/e)_P` is a bijective homomorphism onto the global sections
    pub canonical_is_iso: bool,
    pub isomorphism: IsoOutcome,
}

/// Compares `S` with the sections over the whole spectrum.
pub fn affine_comparison(s: &FiniteGammaSemiring, f: &StructureSheaf) -> Result<AffineReport> {
    let global = sections(f, &f.spectrum.full())?;
    let image: Vec<Option<usize>> = (0..s.t_size())
        .map(|x| {
            let fam: Vec<usize> = f.stalks.iter().map(|l| l.localized.canonical_map[x]).collect();
            global.index_of(&fam)
        })
        .collect();
    let map: Option<Vec<usize>> = image.into_iter().collect();
    let canonical_is_iso = match &map {
        Some(m) => {
            let mut hit = Subset::empty(global.sections.len());
            m.len() == global.sections.len()
                && m.iter().all(|&c| hit.insert(c))
                && homomorphism_failure(s, &global.algebra, m).is_none()
        }
        None => false,
    };
    Ok(AffineReport {
        global_sections: global.sections.len(),
        canonical_is_iso,
        isomorphism: algebra_isomorphism(s, &global.algebra, DEFAULT_ISO_CAP),
    })
}

/// Localizations of a bi-module at every point, with their transitions.
#[derive(Debug, Clone)]
pub struct ModuleSheaf {
    pub module: BiGammaModule,
    pub spectrum: Spectrum,
    pub topology: ZariskiTopology,
    pub stalks: Vec<LocalizedModule>,
    pub transitions: BTreeMap<(usize, usize), Vec<usize>>,
}

impl ModuleSheaf {
    fn presheaf(&self) -> Presheaf {
        Presheaf {
            sizes: self.stalks.iter().map(|l| l.module.size()).collect(),
            transitions: self.transitions.clone(),
        }
    }
}

pub fn associated_sheaf(s: &FiniteGammaSemiring, module: &BiGammaModule, f: &StructureSheaf) -> Result<ModuleSheaf> {
    let stalks: Vec<LocalizedModule> = f
        .stalks
        .iter()
        .map(|l| localize_module(s, module, &l.localized.system))
        .collect::<Result<_>>()?;
    let mut transitions = BTreeMap::new();
    for (p, q) in comparable_pairs(&f.spectrum) {
        let (a, b) = (&stalks[p], &stalks[q]);
        let map = transition_map(&a.pairs, |x, d| a.class_of_pair(x, d), |x, d| b.class_of_pair(x, d), a.module.size())
            .map_err(|e| Error::InconsistentSheaf(format!("module transition {p}→{q}: {e}")))?;
        transitions.insert((p, q), map);
    }
    Ok(ModuleSheaf {
        module: module.clone(),
        spectrum: f.spectrum.clone(),
        topology: f.topology.clone(),
        stalks,
        transitions,
    })
}

/// Sections of a module sheaf over an open, with `T` acting pointwise.
#[derive(Debug, Clone)]
pub struct ModuleSectionSpace {
    pub open_set: Subset,
    pub sections: Vec<Vec<usize>>,
    pub module: BiGammaModule,
}

pub fn module_sections(s: &FiniteGammaSemiring, sheaf: &ModuleSheaf, u: &Subset) -> Result<ModuleSectionSpace> {
    if !sheaf.topology.is_open(u) {
        return Err(Error::NotOpen(u.to_vec()));
    }
    let points = u.to_vec();
    let families = sheaf.presheaf().families(&points);
    let index: HashMap<Vec<usize>, usize> = families.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
    let stalk = |i: usize| &sheaf.stalks[points[i]].module;
    let bad = std::cell::RefCell::new(None);
    let module = BiGammaModule::from_fns(
        s,
        format!("{}~({:?})", sheaf.module.name(), points),
        families.iter().map(|v| format!("{v:?}")).collect(),
        |a, b| {
            let sum: Vec<usize> = (0..points.len()).map(|i| stalk(i).madd(families[a][i], families[b][i])).collect();
            index.get(&sum).copied().unwrap_or_else(|| {
                bad.borrow_mut().get_or_insert_with(|| sum.clone());
                0
            })
        },
        |j, others, m, gs| {
            let value: Vec<usize> = (0..points.len()).map(|i| stalk(i).act(j, others, families[m][i], gs)).collect();
            index.get(&value).copied().unwrap_or(0)
        },
    )?;
    if let Some(sum) = bad.into_inner() {
        return Err(Error::InconsistentSheaf(format!("pointwise sum {sum:?} is not a section")));
    }
    Ok(ModuleSectionSpace {
        open_set: u.clone(),
        sections: families,
        module,
    })
}

pub fn verify_module_sheaf_axioms(s: &FiniteGammaSemiring, sheaf: &ModuleSheaf) -> SheafAxiomReport {
    let pre = sheaf.presheaf();
    let mut failures = Vec::new();
    let mut truncations = Vec::new();
    check_transitions(
        &pre,
        &sheaf.spectrum,
        |p, q, map| module_hom_failure(s, &sheaf.stalks[p].module, &sheaf.stalks[q].module, map),
        &mut failures,
    );
    let covers_checked = check_covers(&sheaf.topology, &pre, &mut failures, &mut truncations);
    SheafAxiomReport {
        pass: failures.is_empty(),
        covers_checked,
        failures,
        truncations,
    }
}

/// First place where `map: a → b` fails to respect addition or an action.
pub fn module_hom_failure(s: &FiniteGammaSemiring, a: &BiGammaModule, b: &BiGammaModule, map: &[usize]) -> Option<String> {
    for x in 0..a.size() {
        for y in 0..a.size() {
            if map[a.madd(x, y)] != b.madd(map[x], map[y]) {
                return Some(format!("madd at {:?}", [x, y]));
            }
        }
    }
    let n = s.n();
    let mut others = vec![0; n - 1];
    let mut gs = vec![0; n - 1];
    for j in 0..n {
        for oi in 0..tuple_count(s.t_size(), n - 1) {
            decode_tuple(oi, s.t_size(), &mut others);
            for g in 0..s.gamma_tuple_count() {
                decode_tuple(g, s.g_size(), &mut gs);
                for x in 0..a.size() {
                    if map[a.act(j, &others, x, &gs)] != b.act(j, &others, map[x], &gs) {
                        return Some(format!("action in slot {j} at {others:?}, {x}, parameters {gs:?}"));
                    }
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiCoherenceEntry {
    pub element: usize,
    pub basic_open: Subset,
    pub sections: usize,
    pub fractions: usize,
    /// `m/s ↦ (m/s)_P` is a bijective module homomorphism
    pub natural_map_is_iso: bool,
    pub isomorphism: IsoOutcome,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuasiCoherenceReport {
    pub pass: bool,
    pub entries: Vec<QuasiCoherenceEntry>,
}

/// `F(D(a))` against `M_a` for every element `a`.
pub fn quasi_coherence(s: &FiniteGammaSemiring, sheaf: &ModuleSheaf) -> Result<QuasiCoherenceReport> {
    let u = s.require_unit()?;
    let mut entries = Vec::new();
    for a in 0..s.t_size() {
        let open = basic_open(&sheaf.spectrum, a, &u.gammas);
        let space = module_sections(s, sheaf, &open)?;
        let system = mult_closure(s, [a])?;
        let frac = localize_module(s, &sheaf.module, &system)?;
        let points = open.to_vec();
        let natural: Option<Vec<usize>> = frac
            .reps
            .iter()
            .map(|&(m, d)| {
                let fam: Option<Vec<usize>> = points.iter().map(|&p| sheaf.stalks[p].class_of_pair(m, d)).collect();
                space.sections.binary_search(&fam?).ok()
            })
            .collect();
        let consistent = natural.as_ref().is_some_and(|map| {
            frac.pairs.iter().zip(&frac.class_of).all(|(&(m, d), &c)| {
                let fam: Option<Vec<usize>> = points.iter().map(|&p| sheaf.stalks[p].class_of_pair(m, d)).collect();
                fam.and_then(|f| space.sections.binary_search(&f).ok()) == Some(map[c])
            })
        });
        let natural_map_is_iso = consistent
            && natural.as_ref().is_some_and(|map| {
                let mut hit = Subset::empty(space.sections.len());
                map.len() == space.sections.len()
                    && map.iter().all(|&c| hit.insert(c))
                    && module_hom_failure(s, &frac.module, &space.module, map).is_none()
            });
        entries.push(QuasiCoherenceEntry {
            element: a,
            basic_open: open,
            sections: space.sections.len(),
            fractions: frac.module.size(),
            natural_map_is_iso,
            isomorphism: module_isomorphism(s, &frac.module, &space.module, DEFAULT_ISO_CAP),
        });
    }
    Ok(QuasiCoherenceReport {
        pass: entries.iter().all(|e| e.natural_map_is_iso && e.isomorphism.is_found()),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_axioms;
    use crate::corpus::builtin_example;
    use crate::ideals::PrimeDef;
    use crate::iso::are_isomorphic;
    use crate::modules::{quotient_module, self_module, zero_module};
    use crate::spectrum::{compute_spectrum, generate_topology};

    fn sheaf_of(name: &str) -> (FiniteGammaSemiring, StructureSheaf) {
        let s = builtin_example(name).unwrap();
        let spec = compute_spectrum(&s, PrimeDef::Elementwise);
        let top = generate_topology(&s, &spec);
        let f = build_structure_sheaf(&s, &spec, &top).unwrap();
        (s, f)
    }

    #[test]
    fn n3_sheaf() {
        let (n3, f) = sheaf_of("N3");
        let b3 = builtin_example("B3").unwrap();
        assert!(are_isomorphic(f.stalk_algebra(1), &n3));
        assert!(are_isomorphic(f.stalk_algebra(0), &b3));
        assert_eq!(f.transitions.len(), 1);
        let map = &f.transitions[&(1, 0)];
        let two = f.stalks[1].localized.canonical_map[2];
        assert_eq!(map[two], f.stalks[0].localized.canonical_map[1]);
        let global = sections(&f, &f.spectrum.full()).unwrap();
        assert_eq!(global.sections.len(), 3);
        assert!(are_isomorphic(&global.algebra, &n3));
        assert!(verify_axioms(&global.algebra).pass);
        let generic = Subset::from_iter(2, [0]);
        let local = sections(&f, &generic).unwrap();
        assert_eq!(local.sections.len(), 2);
        assert!(are_isomorphic(&local.algebra, &b3));
        let communicating = Subset::from_iter(2, [1]);
        assert_eq!(sections(&f, &communicating).unwrap_err(), Error::NotOpen(vec![1]));
        assert!(verify_sheaf_axioms(&f).pass);
        let report = affine_comparison(&n3, &f).unwrap();
        assert!(report.canonical_is_iso && report.isomorphism.is_found());
    }

    #[test]
    fn restriction() {
        let (_, f) = sheaf_of("N3");
        let global = sections(&f, &f.spectrum.full()).unwrap();
        let two = global.index_of(&f.stalks.iter().map(|l| l.localized.canonical_map[2]).collect::<Vec<_>>()).unwrap();
        let sec = global.section(two);
        let generic = Subset::from_iter(2, [0]);
        let r = restrict(&f, &sec, &generic).unwrap();
        assert_eq!(r.values, vec![f.stalks[0].localized.canonical_map[1]]);
        assert_eq!(restrict(&f, &sec, &f.spectrum.full()).unwrap(), sec);
        assert!(restrict(&f, &sec, &Subset::empty(2)).unwrap().values.is_empty());
        let empty = sections(&f, &Subset::empty(2)).unwrap();
        assert_eq!(empty.sections.len(), 1);
        assert!(matches!(restrict(&f, &r, &f.spectrum.full()), Err(Error::NotSubOpen(_))));
    }

    #[test]
    fn stalks_match_localizations() {
        for name in ["B3", "N3", "B3⊕B3"] {
            let (_, f) = sheaf_of(name);
            for p in 0..f.spectrum.len() {
                let r = stalk(&f, p).unwrap();
                assert!(r.isomorphism.is_found() && r.germ_map_is_iso, "{name} {p}");
            }
        }
    }

    #[test]
    fn corrupted_transitions_are_caught() {
        let (_, f) = sheaf_of("B3⊕B3");
        assert!(verify_sheaf_axioms(&f).pass);
        let bad = f.with_transition(0, 1, vec![0, 1]);
        let report = verify_sheaf_axioms(&bad);
        assert!(!report.pass);
        assert!(report.failures.iter().any(|x| x.check == "gluing"));
        let (_, f) = sheaf_of("N3");
        let bad = f.with_transition(1, 0, vec![0, 1, 0]);
        let report = verify_sheaf_axioms(&bad);
        assert!(report.failures.iter().any(|x| x.check == "homomorphism"));
    }

    #[test]
    fn module_sheaves() {
        let (n3, f) = sheaf_of("N3");
        let regular = associated_sheaf(&n3, &self_module(&n3), &f).unwrap();
        for u in &f.topology.opens {
            assert_eq!(
                module_sections(&n3, &regular, u).unwrap().sections,
                sections(&f, u).unwrap().sections
            );
        }
        assert!(verify_module_sheaf_axioms(&n3, &regular).pass);
        assert!(quasi_coherence(&n3, &regular).unwrap().pass);
        let zero = associated_sheaf(&n3, &zero_module(&n3), &f).unwrap();
        assert!(f.topology.opens.iter().all(|u| module_sections(&n3, &zero, u).unwrap().sections.len() == 1));
        let q = quotient_module(&n3, &self_module(&n3), &[(1, 2)]).unwrap();
        let qs = associated_sheaf(&n3, &q, &f).unwrap();
        assert!(quasi_coherence(&n3, &qs).unwrap().pass);
    }

    #[test]
    fn empty_spectrum_sheaf() {
        let (_, f) = sheaf_of("TRIV");
        assert!(f.stalks.is_empty());
        let global = sections(&f, &Subset::empty(0)).unwrap();
        assert_eq!(global.sections.len(), 1);
        assert!(verify_sheaf_axioms(&f).pass);
    }
}
