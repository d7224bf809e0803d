//! Primitive ideals against closed points of the spectrum, under both
//! primality notions.

use serde::Serialize;

use crate::algebra::FiniteGammaSemiring;
use crate::error::Result;
use crate::ideals::{GammaIdeal, PrimeDef};
use crate::localization::residue_at;
use crate::module_search::{primitive_spectrum_of, simple_bimodules, PrimitiveSpectrum, SimpleModuleSearch};
use crate::modules::{annihilator, is_simple, verify_bimodule};
use crate::spectrum::{compute_spectrum, generate_topology, order_structure, Spectrum};

#[derive(Debug, Clone, Serialize)]
pub struct PrimMembership {
    pub ideal: GammaIdeal,
    pub in_elementwise_spectrum: bool,
    pub in_ideal_pair_spectrum: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosedPointCheck {
    pub point: GammaIdeal,
    pub residue_size: Option<usize>,
    pub residue_nontrivial: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue_error: Option<String>,
    /// simple modules found with annihilator equal to the point
    pub simple_modules: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub prime_def: PrimeDef,
    pub closed_points: Vec<GammaIdeal>,
    pub equal: bool,
    pub prim_within_closed: bool,
    pub closed_within_prim: bool,
    pub primitive_not_closed: Vec<GammaIdeal>,
    pub closed_not_primitive: Vec<GammaIdeal>,
    pub closed_point_checks: Vec<ClosedPointCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub max_module_size: usize,
    pub primitive: PrimitiveSpectrum,
    pub membership: Vec<PrimMembership>,
    pub comparisons: Vec<Comparison>,
    /// every simple module and closed point re-passed its checks
    pub rederived: bool,
    pub findings: Vec<String>,
}

impl DualityReport {
    pub fn comparison(&self, def: PrimeDef) -> &Comparison {
        self.comparisons.iter().find(|c| c.prime_def == def).expect("both notions are compared")
    }
}

fn closed_points(s: &FiniteGammaSemiring, spec: &Spectrum) -> Vec<GammaIdeal> {
    let top = generate_topology(s, spec);
    order_structure(spec, &top).closed_points.iter().map(|&i| spec.points[i].clone()).collect()
}

fn show(ideals: &[GammaIdeal]) -> String {
    let parts: Vec<String> = ideals.iter().map(|i| format!("{:?}", i.to_vec())).collect();
    format!("[{}]", parts.join(", "))
}

fn rederive(s: &FiniteGammaSemiring, search: &SimpleModuleSearch, comparisons: &[Comparison]) -> Result<bool> {
    for (m, a) in search.modules.iter().zip(&search.annihilators) {
        if !verify_bimodule(s, m)?.pass || !is_simple(s, m)? || annihilator(s, m)? != *a {
            return Ok(false);
        }
    }
    Ok(comparisons
        .iter()
        .all(|c| closed_points(s, &compute_spectrum(s, c.prime_def)) == c.closed_points))
}

pub fn prim_vs_closed(s: &FiniteGammaSemiring, max_module_size: usize) -> Result<DualityReport> {
    let search = simple_bimodules(s, max_module_size)?;
    let primitive = primitive_spectrum_of(s, &search)?;
    let prim = primitive.ideal_list();
    let spectra: Vec<Spectrum> = [PrimeDef::Elementwise, PrimeDef::IdealPair]
        .into_iter()
        .map(|def| compute_spectrum(s, def))
        .collect();
    let membership = prim
        .iter()
        .map(|p| PrimMembership {
            ideal: p.clone(),
            in_elementwise_spectrum: spectra[0].index_of(p).is_some(),
            in_ideal_pair_spectrum: spectra[1].index_of(p).is_some(),
        })
        .collect();
    let mut findings = Vec::new();
    let mut comparisons = Vec::new();
    for spec in &spectra {
        let closed = closed_points(s, spec);
        let primitive_not_closed: Vec<GammaIdeal> = prim.iter().filter(|p| !closed.contains(p)).cloned().collect();
        let closed_not_primitive: Vec<GammaIdeal> = closed.iter().filter(|p| !prim.contains(p)).cloned().collect();
        let closed_point_checks = closed
            .iter()
            .map(|p| {
                let (residue_size, residue_error) = match residue_at(s, p) {
                    Ok(k) => (Some(k.t_size()), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                ClosedPointCheck {
                    point: p.clone(),
                    residue_nontrivial: residue_size.map(|k| k > 1),
                    residue_size,
                    residue_error,
                    simple_modules: (0..search.annihilators.len()).filter(|&i| search.annihilators[i] == *p).collect(),
                }
            })
            .collect();
        let label = spec.prime_def.label();
        if !primitive_not_closed.is_empty() || !closed_not_primitive.is_empty() {
            findings.push(format!(
                "{label}: primitive ideals {} differ from closed points {}; primitive but not closed {}, closed but not primitive {}",
                show(&prim),
                show(&closed),
                show(&primitive_not_closed),
                show(&closed_not_primitive)
            ));
        }
        comparisons.push(Comparison {
            prime_def: spec.prime_def,
            equal: primitive_not_closed.is_empty() && closed_not_primitive.is_empty(),
            prim_within_closed: primitive_not_closed.is_empty(),
            closed_within_prim: closed_not_primitive.is_empty(),
            closed_points: closed,
            primitive_not_closed,
            closed_not_primitive,
            closed_point_checks,
        });
    }
    for p in &primitive.ideals {
        if !p.elementwise_prime || !p.ideal_pair_prime {
            let slots: Vec<Vec<usize>> = p.modules.iter().map(|&i| primitive.simple_modules[i].acting_slots.clone()).collect();
            findings.push(format!(
                "primitive ideal {:?} is elementwise prime: {}, ideal-pair prime: {}; acting slots of its simple modules: {slots:?}",
                p.ideal.to_vec(),
                p.elementwise_prime,
                p.ideal_pair_prime
            ));
        }
    }
    if !primitive.truncations.is_empty() {
        findings.push(format!("module search truncated: {}", primitive.truncations.join("; ")));
    }
    let rederived = rederive(s, &search, &comparisons)?;
    Ok(DualityReport {
        max_module_size,
        primitive,
        membership,
        comparisons,
        rederived,
        findings,
    })
}
