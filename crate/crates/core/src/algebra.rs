//! Finite n-ary Γ-semirings stored as complete operation tables.
//!
//! Elements of the carrier `T` and of the parameter semigroup `Γ` are plain
//! indices. Index 0 of `T` is always the additive zero. The structural map
//! `T^n × Γ^(n-1) → T` is stored flat, with the first T-slot most significant
//! and the Γ-parameters after the T-slots:
//!
//! ```text
//! index = ((…(x1·t + x2)…·t + xn)·g + γ1)·g … + γ(n-1)
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unit witness `(e, γ⃗₀)`: `[x, e, …, e]_{γ⃗₀} = x` for every `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitWitness {
    pub element: usize,
    pub gammas: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGammaSemiring {
    name: String,
    n: usize,
    elements: Vec<String>,
    gamma: Vec<String>,
    add: Vec<usize>,
    gamma_add: Vec<usize>,
    mu: Vec<usize>,
    unit: Option<UnitWitness>,
}

/// Number of tuples of length `len` over `base` symbols.
pub fn tuple_count(base: usize, len: usize) -> usize {
    base.pow(len as u32)
}

/// Decodes `idx` as a big-endian base-`base` tuple into `out`.
#[inline]
pub fn decode_tuple(mut idx: usize, base: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
}

#[inline]
pub fn encode_tuple(base: usize, xs: &[usize]) -> usize {
    xs.iter().fold(0, |acc, &x| acc * base + x)
}

/// Iterates over every tuple of length `len` over `base` symbols in lexicographic order.
pub fn all_tuples(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..tuple_count(base, len)).map(move |i| {
        let mut v = vec![0; len];
        decode_tuple(i, base, &mut v);
        v
    })
}

impl FiniteGammaSemiring {
    /// Builds an algebra from flat tables, checking shapes, index ranges and
    /// the unit witness.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        n: usize,
        elements: Vec<String>,
        gamma: Vec<String>,
        add: Vec<usize>,
        gamma_add: Vec<usize>,
        mu: Vec<usize>,
        unit: Option<UnitWitness>,
    ) -> Result<Self> {
        let s = Self::new_unchecked_unit(name, n, elements, gamma, add, gamma_add, mu, unit)?;
        s.check_unit()?;
        Ok(s)
    }

    /// Like [`FiniteGammaSemiring::new`] but leaves a unit witness unverified.
    /// Used when the unit law is to be reported as an axiom violation instead.
    #[allow(clippy::too_many_arguments)]
    pub fn new_unchecked_unit(
        name: impl Into<String>,
        n: usize,
        elements: Vec<String>,
        gamma: Vec<String>,
        add: Vec<usize>,
        gamma_add: Vec<usize>,
        mu: Vec<usize>,
        unit: Option<UnitWitness>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::MalformedDocument(format!("arity n = {n}, need n >= 2")));
        }
        let t = elements.len();
        let g = gamma.len();
        if t == 0 {
            return Err(Error::MalformedDocument("carrier must contain the zero element".into()));
        }
        if g == 0 {
            return Err(Error::MalformedDocument("parameter semigroup must be non-empty".into()));
        }
        if add.len() != t * t {
            return Err(Error::TableShapeMismatch(format!(
                "add has {} entries, expected {}",
                add.len(),
                t * t
            )));
        }
        if gamma_add.len() != g * g {
            return Err(Error::TableShapeMismatch(format!(
                "gamma_add has {} entries, expected {}",
                gamma_add.len(),
                g * g
            )));
        }
        let mu_len = t
            .checked_pow(n as u32)
            .and_then(|a| g.checked_pow(n as u32 - 1).and_then(|b| a.checked_mul(b)));
        match mu_len {
            Some(len) if len == mu.len() => {}
            Some(len) => {
                return Err(Error::TableShapeMismatch(format!(
                    "mu has {} entries, expected {len}",
                    mu.len()
                )))
            }
            None => return Err(Error::TableShapeMismatch("mu table size overflows".into())),
        }
        if let Some(i) = add.iter().position(|&v| v >= t) {
            return Err(Error::IndexOutOfRange(format!("add[{i}] = {}", add[i])));
        }
        if let Some(i) = mu.iter().position(|&v| v >= t) {
            return Err(Error::IndexOutOfRange(format!("mu[{i}] = {}", mu[i])));
        }
        if let Some(i) = gamma_add.iter().position(|&v| v >= g) {
            return Err(Error::IndexOutOfRange(format!("gamma_add[{i}] = {}", gamma_add[i])));
        }
        if let Some(u) = &unit {
            if u.element >= t {
                return Err(Error::IndexOutOfRange(format!("unit element {}", u.element)));
            }
            if u.gammas.len() != n - 1 {
                return Err(Error::TableShapeMismatch(format!(
                    "unit has {} parameters, expected {}",
                    u.gammas.len(),
                    n - 1
                )));
            }
            if let Some(&bad) = u.gammas.iter().find(|&&v| v >= g) {
                return Err(Error::IndexOutOfRange(format!("unit parameter {bad}")));
            }
        }
        Ok(FiniteGammaSemiring {
            name: name.into(),
            n,
            elements,
            gamma,
            add,
            gamma_add,
            mu,
            unit,
        })
    }

    /// Builds an algebra by evaluating the operations on every input.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fns(
        name: impl Into<String>,
        n: usize,
        elements: Vec<String>,
        gamma: Vec<String>,
        add: impl Fn(usize, usize) -> usize,
        gamma_add: impl Fn(usize, usize) -> usize,
        mu: impl Fn(&[usize], &[usize]) -> usize,
        unit: Option<UnitWitness>,
    ) -> Result<Self> {
        let t = elements.len();
        let g = gamma.len();
        let add_t = (0..t * t).map(|i| add(i / t, i % t)).collect();
        let gadd_t = (0..g * g).map(|i| gamma_add(i / g, i % g)).collect();
        let gt = tuple_count(g, n - 1);
        let mut xs = vec![0; n];
        let mut gs = vec![0; n - 1];
        let mu_t = (0..tuple_count(t, n) * gt)
            .map(|i| {
                decode_tuple(i / gt, t, &mut xs);
                decode_tuple(i % gt, g, &mut gs);
                mu(&xs, &gs)
            })
            .collect();
        Self::new(name, n, elements, gamma, add_t, gadd_t, mu_t, unit)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_size(&self) -> usize {
        self.elements.len()
    }

    pub fn g_size(&self) -> usize {
        self.gamma.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn gamma_names(&self) -> &[String] {
        &self.gamma
    }

    pub fn unit(&self) -> Option<&UnitWitness> {
        self.unit.as_ref()
    }

    pub fn require_unit(&self) -> Result<&UnitWitness> {
        self.unit
            .as_ref()
            .ok_or_else(|| Error::NoUnitWitness(self.name.clone()))
    }

    pub fn add_table(&self) -> &[usize] {
        &self.add
    }

    pub fn gamma_add_table(&self) -> &[usize] {
        &self.gamma_add
    }

    pub fn mu_table(&self) -> &[usize] {
        &self.mu
    }

    /// Number of parameter tuples `|Γ|^(n-1)`.
    pub fn gamma_tuple_count(&self) -> usize {
        tuple_count(self.g_size(), self.n - 1)
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.t_size() + y]
    }

    #[inline]
    pub fn gamma_add(&self, a: usize, b: usize) -> usize {
        self.gamma_add[a * self.g_size() + b]
    }

    #[inline]
    pub fn mu_index(&self, xs: &[usize], gs: &[usize]) -> usize {
        encode_tuple(self.g_size(), gs) + encode_tuple(self.t_size(), xs) * self.gamma_tuple_count()
    }

    /// Table lookup without range checks beyond slice bounds.
    #[inline]
    pub fn mu(&self, xs: &[usize], gs: &[usize]) -> usize {
        debug_assert_eq!(xs.len(), self.n);
        debug_assert_eq!(gs.len(), self.n - 1);
        self.mu[self.mu_index(xs, gs)]
    }

    /// Checked application of the structural map.
    pub fn mu_apply(&self, xs: &[usize], gs: &[usize]) -> Result<usize> {
        if xs.len() != self.n || gs.len() != self.n - 1 {
            return Err(Error::IndexOutOfRange(format!(
                "expected {} elements and {} parameters, got {} and {}",
                self.n,
                self.n - 1,
                xs.len(),
                gs.len()
            )));
        }
        if let Some(&x) = xs.iter().find(|&&x| x >= self.t_size()) {
            return Err(Error::IndexOutOfRange(format!("element {x}")));
        }
        if let Some(&g) = gs.iter().find(|&&g| g >= self.g_size()) {
            return Err(Error::IndexOutOfRange(format!("parameter {g}")));
        }
        Ok(self.mu(xs, gs))
    }

    /// `[prefix…, e, …, e]_{γ⃗₀}`: the product of `prefix` padded on the right
    /// with the unit element, evaluated at the unit's parameter tuple.
    pub fn mu_padded(&self, prefix: &[usize]) -> Result<usize> {
        let u = self.require_unit()?;
        debug_assert!(prefix.len() <= self.n);
        let mut xs = prefix.to_vec();
        xs.resize(self.n, u.element);
        Ok(self.mu(&xs, &u.gammas))
    }

    pub fn sum<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(0, |acc, x| self.add(acc, x))
    }

    fn check_unit(&self) -> Result<()> {
        let Some(u) = &self.unit else { return Ok(()) };
        let mut xs = vec![u.element; self.n];
        for x in 0..self.t_size() {
            xs[0] = x;
            let got = self.mu(&xs, &u.gammas);
            if got != x {
                return Err(Error::BadUnitWitness(format!(
                    "[{x}, e, …, e] = {got} with e = {}",
                    u.element
                )));
            }
        }
        Ok(())
    }

    /// Copy with one structural-table entry replaced, the unit witness kept
    /// as is. Negative controls use this to build broken algebras.
    pub fn with_mu_entry(&self, index: usize, value: usize) -> Self {
        let mut out = self.clone();
        out.mu[index] = value;
        out
    }

    pub fn with_add_entry(&self, x: usize, y: usize, value: usize) -> Self {
        let mut out = self.clone();
        let t = self.t_size();
        out.add[x * t + y] = value;
        out
    }

    pub fn without_unit(&self) -> Self {
        let mut out = self.clone();
        out.unit = None;
        out
    }

    pub fn to_document(&self) -> AlgebraDocument {
        let t = self.t_size();
        let g = self.g_size();
        AlgebraDocument {
            name: self.name.clone(),
            n: self.n,
            elements: self.elements.clone(),
            gamma: self.gamma.clone(),
            add: Table2::Rows(self.add.chunks(t).map(<[usize]>::to_vec).collect()),
            gamma_add: Table2::Rows(self.gamma_add.chunks(g).map(<[usize]>::to_vec).collect()),
            mu: self.mu.clone(),
            unit: self.unit.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("algebra documents serialize")
    }
}

/// Binary operation table as it appears in documents: row-major rows, or a
/// single flat row-major array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Table2 {
    Rows(Vec<Vec<usize>>),
    Flat(Vec<usize>),
}

impl Table2 {
    fn flatten(self, size: usize, what: &str) -> Result<Vec<usize>> {
        match self {
            Table2::Flat(v) => Ok(v),
            Table2::Rows(rows) => {
                if rows.len() != size || rows.iter().any(|r| r.len() != size) {
                    return Err(Error::TableShapeMismatch(format!(
                        "{what} must be {size}×{size}"
                    )));
                }
                Ok(rows.into_iter().flatten().collect())
            }
        }
    }
}

/// On-disk JSON form of an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub name: String,
    pub n: usize,
    pub elements: Vec<String>,
    pub gamma: Vec<String>,
    pub add: Table2,
    pub gamma_add: Table2,
    pub mu: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<UnitWitness>,
}

impl AlgebraDocument {
    fn into_parts(self, check_unit: bool) -> Result<FiniteGammaSemiring> {
        let t = self.elements.len();
        let g = self.gamma.len();
        let add = self.add.flatten(t, "add")?;
        let gamma_add = self.gamma_add.flatten(g, "gamma_add")?;
        let build = if check_unit {
            FiniteGammaSemiring::new
        } else {
            FiniteGammaSemiring::new_unchecked_unit
        };
        build(
            self.name,
            self.n,
            self.elements,
            self.gamma,
            add,
            gamma_add,
            self.mu,
            self.unit,
        )
    }
}

fn parse_document(document: &str) -> Result<AlgebraDocument> {
    serde_json::from_str(document).map_err(|e| Error::MalformedDocument(e.to_string()))
}

/// Parses an algebra document and validates every table and the unit witness.
pub fn load_semiring(document: &str) -> Result<FiniteGammaSemiring> {
    parse_document(document)?.into_parts(true)
}

/// Parses an algebra document, validating shapes and ranges only.
pub fn load_semiring_lenient(document: &str) -> Result<FiniteGammaSemiring> {
    parse_document(document)?.into_parts(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    const B3: &str = r#"{
        "name": "B3", "n": 3,
        "elements": ["0", "1"], "gamma": ["g"],
        "add": [[0, 1], [1, 1]], "gamma_add": [[0]],
        "mu": [0, 0, 0, 0, 0, 0, 0, 1],
        "unit": {"element": 1, "gammas": [0, 0]}
    }"#;

    #[test]
    fn loads_boolean_ternary() {
        let s = load_semiring(B3).unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.t_size(), 2);
        assert_eq!(s.mu_apply(&[1, 1, 1], &[0, 0]).unwrap(), 1);
        assert_eq!(s.mu_apply(&[1, 0, 1], &[0, 0]).unwrap(), 0);
        assert_eq!(load_semiring(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn flat_add_table_accepted() {
        let doc = B3.replace("[[0, 1], [1, 1]]", "[0, 1, 1, 1]");
        assert_eq!(load_semiring(&doc).unwrap(), load_semiring(B3).unwrap());
    }

    #[test]
    fn rejects_wrong_mu_length() {
        let doc = B3.replace("[0, 0, 0, 0, 0, 0, 0, 1]", "[0, 0, 0, 1]");
        assert!(matches!(load_semiring(&doc), Err(Error::TableShapeMismatch(_))));
    }

    #[test]
    fn rejects_zero_as_unit() {
        let doc = B3.replace(r#""element": 1"#, r#""element": 0"#);
        assert!(matches!(load_semiring(&doc), Err(Error::BadUnitWitness(_))));
        assert!(load_semiring_lenient(&doc).is_ok());
    }

    #[test]
    fn rejects_out_of_range_and_garbage() {
        let doc = B3.replace("0, 0, 0, 1]", "0, 0, 0, 7]");
        assert!(matches!(load_semiring(&doc), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(load_semiring("{ nope"), Err(Error::MalformedDocument(_))));
        let s = load_semiring(B3).unwrap();
        assert!(matches!(s.mu_apply(&[1, 2, 1], &[0, 0]), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(s.mu_apply(&[1, 1], &[0, 0]), Err(Error::IndexOutOfRange(_))));
    }
}
