//! Built-in example algebras.

use crate::algebra::{FiniteGammaSemiring, UnitWitness};
use crate::error::{Error, Result};
use crate::structure::{direct_sum, matrix_semiring};

pub const CORPUS: [&str; 5] = ["TRIV", "B3", "N3", "B3⊕B3", "M2B3"];

/// One-element algebra of arity `n` over a one-element Γ.
pub fn trivial(n: usize) -> FiniteGammaSemiring {
    FiniteGammaSemiring::from_fns("TRIV", n, vec!["0".into()], vec!["g".into()], |_, _| 0, |_, _| 0, |_, _| 0, None)
        .expect("trivial algebra is well-formed")
}

/// `{0, 1}` with `1 + 1 = 1` and the n-fold conjunction as product.
pub fn boolean(n: usize) -> FiniteGammaSemiring {
    FiniteGammaSemiring::from_fns(
        format!("B{n}"),
        n,
        vec!["0".into(), "1".into()],
        vec!["g".into()],
        |a, b| a | b,
        |_, _| 0,
        |xs, _| xs.iter().copied().min().unwrap_or(0),
        Some(UnitWitness {
            element: 1,
            gammas: vec![0; n - 1],
        }),
    )
    .expect("boolean algebra is well-formed")
}

/// `{0, …, cap}` with sums and n-fold products truncated at `cap`.
pub fn saturating(n: usize, cap: usize) -> FiniteGammaSemiring {
    FiniteGammaSemiring::from_fns(
        format!("N{}({n}-ary)", cap + 1),
        n,
        (0..=cap).map(|i| i.to_string()).collect(),
        vec!["g".into()],
        |a, b| (a + b).min(cap),
        |_, _| 0,
        |xs, _| xs.iter().fold(1usize, |acc, &x| (acc * x).min(cap)),
        Some(UnitWitness {
            element: 1,
            gammas: vec![0; n - 1],
        }),
    )
    .expect("saturating algebra is well-formed")
}

/// Looks up a named corpus algebra. `B3+B3` is accepted for `B3⊕B3`.
pub fn builtin_example(name: &str) -> Result<FiniteGammaSemiring> {
    match name {
        "TRIV" => Ok(trivial(3)),
        "B3" => Ok(boolean(3)),
        "N3" => Ok(saturating(3, 2).with_name("N3")),
        "B3⊕B3" | "B3+B3" => direct_sum(&boolean(3), &boolean(3)),
        "M2B3" => Ok(matrix_semiring(&boolean(3), 2)?.with_name("M2B3")),
        other => Err(Error::UnknownExample(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axioms::verify_axioms;

    #[test]
    fn corpus_sizes_and_axioms() {
        let sizes: Vec<usize> = CORPUS
            .iter()
            .map(|n| builtin_example(n).unwrap().t_size())
            .collect();
        assert_eq!(sizes, vec![1, 2, 3, 4, 16]);
        for name in CORPUS {
            let report = verify_axioms(&builtin_example(name).unwrap());
            assert!(report.pass, "{name}: {:?}", report.violations);
        }
    }

    #[test]
    fn parameter_additivity_needs_idempotent_products() {
        // with g + g = g, [1,1,1] = [1,1,1] + [1,1,1] would require 1 = 2
        let report = verify_axioms(&builtin_example("N3").unwrap());
        assert!(report.pass && !report.strict_pass());
        let witnesses: Vec<&[usize]> = report.parameter_additivity.iter().map(|v| &v.witness[..]).collect();
        assert_eq!(witnesses, vec![&[1, 1, 1, 0, 0, 0][..]; 2]);
        for name in ["TRIV", "B3", "B3⊕B3", "M2B3"] {
            assert!(verify_axioms(&builtin_example(name).unwrap()).strict_pass(), "{name}");
        }
    }

    #[test]
    fn saturating_product() {
        let n3 = builtin_example("N3").unwrap();
        assert_eq!(n3.mu_apply(&[2, 2, 1], &[0, 0]).unwrap(), 2);
        assert_eq!(n3.add(1, 1), 2);
    }

    #[test]
    fn unknown_name() {
        assert_eq!(builtin_example("Z5"), Err(Error::UnknownExample("Z5".into())));
    }
}
