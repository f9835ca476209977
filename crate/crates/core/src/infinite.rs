//! Countably-infinite-dimensional evolution algebras given by a rule for the
//! generator squares.
//!
//! The built-in rule is the shift rule `x_i^2 = nu x_i + x_{i+1}` for all
//! `i >= 1`, with `nu` nilpotent. Over `Z/4` with `nu = 2`, or over
//! `Q[t]/(t^2)` with `nu = t`, the algebra is generated by `x_1`, is nil,
//! and is not nilpotent. Indices here are 1-based.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::json;
use sha2::{Digest, Sha256};

use crate::algebra::{format_terms, EvolutionAlgebra, DEFAULT_PLENARY_CAP};
use crate::error::{Error, Result};
use crate::ring::{NilpotencyIndex, Ring, RingValue};

/// Kinds of generator-square rules. Only the shift rule exists today.
#[derive(Clone, Debug, PartialEq, Eq)]
#[non_exhaustive]
pub enum RuleKind {
    /// `x_i^2 = nu x_i + x_{i+1}`.
    Shift { nu: RingValue },
}

/// Defining relations of an infinite evolution algebra.
#[derive(Clone, Debug)]
pub struct StructureRule {
    inner: Arc<RuleData>,
}

#[derive(Debug, PartialEq, Eq)]
struct RuleData {
    ring: Ring,
    kind: RuleKind,
    nu_index: usize,
}

impl PartialEq for StructureRule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for StructureRule {}

/// Finitely supported element `sum a_i x_i`; zero coefficients are never
/// stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseElement {
    rule: StructureRule,
    support: BTreeMap<usize, RingValue>,
}

/// Iteration bound used when validating that `nu` is nilpotent.
const NU_INDEX_BOUND: usize = 1 << 16;

impl StructureRule {
    pub fn shift(ring: &Ring, nu: RingValue) -> Result<StructureRule> {
        ring.check(&nu)?;
        let nu_index = match ring.nilpotency_index(&nu, NU_INDEX_BOUND)? {
            NilpotencyIndex::Index(k) => k,
            _ => return Err(Error::NonNilpotentRule),
        };
        Ok(StructureRule {
            inner: Arc::new(RuleData {
                ring: ring.clone(),
                kind: RuleKind::Shift { nu },
                nu_index,
            }),
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.inner.ring
    }

    pub fn kind(&self) -> &RuleKind {
        &self.inner.kind
    }

    pub fn nu(&self) -> &RingValue {
        match &self.inner.kind {
            RuleKind::Shift { nu } => nu,
        }
    }

    /// Hex SHA-256 of the canonical `{ring, rule, nu}` document.
    pub fn canonical_hash(&self) -> String {
        let ring = self.ring();
        let doc = json!({ "ring": ring.descriptor(), "rule": "shift", "nu": ring.encode_value(self.nu()) });
        hex::encode(Sha256::digest(doc.to_string().as_bytes()))
    }

    /// Nilpotency index of `nu`.
    pub fn nu_index(&self) -> usize {
        self.inner.nu_index
    }

    pub fn zero(&self) -> SparseElement {
        SparseElement {
            rule: self.clone(),
            support: BTreeMap::new(),
        }
    }

    /// The generator `x_i`, `i >= 1`.
    pub fn generator(&self, i: usize) -> Result<SparseElement> {
        self.element([(i, self.ring().one())])
    }

    pub fn element(&self, terms: impl IntoIterator<Item = (usize, RingValue)>) -> Result<SparseElement> {
        let ring = self.ring();
        let mut support = BTreeMap::new();
        for (i, c) in terms {
            if i == 0 {
                return Err(Error::Dimension("basis indices start at 1".into()));
            }
            ring.check(&c)?;
            let slot = support.entry(i).or_insert_with(|| ring.zero());
            *slot = ring.add_raw(slot, &c);
        }
        support.retain(|_, c: &mut RingValue| !c.is_zero());
        Ok(SparseElement {
            rule: self.clone(),
            support,
        })
    }

    pub fn element_from_ints(&self, terms: &[(usize, i64)]) -> Result<SparseElement> {
        self.element(terms.iter().map(|&(i, c)| (i, self.ring().from_i64(c))))
    }

    /// Coordinates of `x_i^2`.
    pub fn square_of_generator(&self, i: usize) -> BTreeMap<usize, RingValue> {
        match &self.inner.kind {
            RuleKind::Shift { nu } => {
                let mut out = BTreeMap::new();
                if !nu.is_zero() {
                    out.insert(i, nu.clone());
                }
                out.insert(i + 1, self.ring().one());
                out
            }
        }
    }

    fn owns(&self, a: &SparseElement) -> Result<()> {
        if a.rule == *self {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// `ab = sum over common support of a_i b_i x_i^2`.
    pub fn multiply(&self, a: &SparseElement, b: &SparseElement) -> Result<SparseElement> {
        self.owns(a)?;
        self.owns(b)?;
        Ok(self.multiply_raw(a, b))
    }

    fn multiply_raw(&self, a: &SparseElement, b: &SparseElement) -> SparseElement {
        let ring = self.ring();
        let (small, large) = if a.support.len() <= b.support.len() {
            (a, b)
        } else {
            (b, a)
        };
        let mut out: BTreeMap<usize, RingValue> = BTreeMap::new();
        for (i, x) in &small.support {
            let Some(y) = large.support.get(i) else { continue };
            let coeff = ring.mul_raw(x, y);
            if coeff.is_zero() {
                continue;
            }
            for (k, c) in self.square_of_generator(*i) {
                let slot = out.entry(k).or_insert_with(|| ring.zero());
                *slot = ring.add_raw(slot, &ring.mul_raw(&coeff, &c));
            }
        }
        out.retain(|_, c| !c.is_zero());
        SparseElement {
            rule: self.clone(),
            support: out,
        }
    }

    pub fn add(&self, a: &SparseElement, b: &SparseElement) -> Result<SparseElement> {
        self.owns(a)?;
        self.owns(b)?;
        self.element(a.support.iter().chain(&b.support).map(|(i, c)| (*i, c.clone())))
    }

    /// `a^1 = a`, `a^n = a^(n-1) a`.
    pub fn principal_power(&self, a: &SparseElement, n: usize) -> Result<SparseElement> {
        self.owns(a)?;
        if n == 0 {
            return Err(Error::ZeroExponent);
        }
        let mut p = a.clone();
        for _ in 1..n {
            if p.is_zero() {
                break;
            }
            p = self.multiply_raw(&p, a);
        }
        Ok(p)
    }

    pub fn plenary_power(&self, a: &SparseElement, n: usize) -> Result<SparseElement> {
        self.plenary_power_capped(a, n, DEFAULT_PLENARY_CAP)
    }

    /// `a^[1] = a a`, `a^[n] = a^[n-1] a^[n-1]`. Exponents above `cap` fail
    /// with the support size reached at the cap.
    pub fn plenary_power_capped(&self, a: &SparseElement, n: usize, cap: usize) -> Result<SparseElement> {
        self.owns(a)?;
        if n == 0 {
            return Err(Error::ZeroExponent);
        }
        let steps = n.min(cap);
        let mut p = a.clone();
        for _ in 0..steps {
            p = self.multiply_raw(&p, &p);
        }
        if n > cap {
            return Err(Error::CapExceeded {
                cap,
                support: p.support.len(),
            });
        }
        Ok(p)
    }

    /// Smallest `k` with `a^k = 0`, for rules whose `nu` squares to zero.
    ///
    /// With `t` the largest support index, `a^(2t+1)` lies in
    /// `span{x_i : i > t}` and so `a^(2t+2) = 0`; the search never runs past
    /// that bound.
    pub fn nil_exponent(&self, a: &SparseElement) -> Result<usize> {
        self.owns(a)?;
        let ring = self.ring();
        if !ring.mul_raw(self.nu(), self.nu()).is_zero() {
            return Err(Error::NotSquareZero);
        }
        let bound = 2 * a.max_support().unwrap_or(0) + 2;
        let mut p = a.clone();
        for k in 1..=bound {
            if p.is_zero() {
                return Ok(k);
            }
            p = self.multiply_raw(&p, a);
        }
        Err(Error::Invariant(format!("a^{bound} is nonzero for a = {a}")))
    }

    /// Finite window on `x_1..x_n`: the shift relations for `i < n`, and
    /// `x_n^2 = nu x_n` with the `x_(n+1)` term truncated. This is a
    /// projection, not a subalgebra; analyses on it describe the window.
    pub fn window(&self, n: usize) -> Result<EvolutionAlgebra> {
        if n == 0 {
            return Err(Error::Dimension("window size must be at least 1".into()));
        }
        let ring = self.ring();
        let columns = (1..=n)
            .map(|j| {
                let square = self.square_of_generator(j);
                (1..=n)
                    .map(|k| square.get(&k).cloned().unwrap_or_else(|| ring.zero()))
                    .collect()
            })
            .collect();
        EvolutionAlgebra::from_columns(ring, columns)
    }
}

impl SparseElement {
    pub fn rule(&self) -> &StructureRule {
        &self.rule
    }

    pub fn support(&self) -> &BTreeMap<usize, RingValue> {
        &self.support
    }

    pub fn coefficient(&self, i: usize) -> RingValue {
        self.support.get(&i).cloned().unwrap_or_else(|| self.rule.ring().zero())
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn min_support(&self) -> Option<usize> {
        self.support.keys().next().copied()
    }

    pub fn max_support(&self) -> Option<usize> {
        self.support.keys().next_back().copied()
    }
}

impl fmt::Display for SparseElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<(String, &RingValue)> = self.support.iter().map(|(i, c)| (format!("x{i}"), c)).collect();
        f.write_str(&format_terms(labels.iter().map(|(l, c)| (l.as_str(), *c))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4_rule() -> StructureRule {
        let r = Ring::modular(4).unwrap();
        StructureRule::shift(&r, r.from_i64(2)).unwrap()
    }

    fn qt_rule() -> StructureRule {
        let r = Ring::poly_quot(&Ring::rationals(), 2).unwrap();
        StructureRule::shift(&r, r.t().unwrap()).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let z4 = z4_rule();
        let x1 = z4.generator(1).unwrap();
        assert_eq!(
            z4.multiply(&x1, &x1).unwrap(),
            z4.element_from_ints(&[(1, 2), (2, 1)]).unwrap()
        );
        let x3 = z4.generator(3).unwrap();
        let x5 = z4.generator(5).unwrap();
        assert!(z4.multiply(&x3, &x5).unwrap().is_zero());

        let qt = qt_rule();
        let y1 = qt.generator(1).unwrap();
        let t = qt.ring().t().unwrap();
        let expected = qt.element([(1, t), (2, qt.ring().one())]).unwrap();
        assert_eq!(qt.multiply(&y1, &y1).unwrap(), expected);
        assert_eq!(expected.to_string(), "(t)x1+x2");
    }

    #[test]
    fn rule_mismatch_is_rejected() {
        let a = z4_rule().generator(1).unwrap();
        let other = z4_rule();
        // Equal rules built separately are the same algebra.
        assert!(other.multiply(&a, &a).is_ok());
        let b = qt_rule().generator(1).unwrap();
        assert_eq!(z4_rule().multiply(&a, &b), Err(Error::AlgebraMismatch));
    }

    #[test]
    fn non_nilpotent_nu_is_rejected() {
        let r = Ring::modular(4).unwrap();
        assert_eq!(
            StructureRule::shift(&r, r.from_i64(1)).unwrap_err(),
            Error::NonNilpotentRule
        );
        assert_eq!(z4_rule().nu_index(), 2);
    }

    #[test]
    fn principal_powers() {
        let z4 = z4_rule();
        let x1 = z4.generator(1).unwrap();
        assert_eq!(
            z4.principal_power(&x1, 3).unwrap(),
            z4.element_from_ints(&[(2, 2)]).unwrap()
        );
        assert!(z4.principal_power(&x1, 4).unwrap().is_zero());
        assert_eq!(z4.principal_power(&x1, 0), Err(Error::ZeroExponent));

        let qt = qt_rule();
        let y1 = qt.generator(1).unwrap();
        let t = qt.ring().t().unwrap();
        assert_eq!(qt.principal_power(&y1, 3).unwrap(), qt.element([(2, t)]).unwrap());
        assert!(qt.principal_power(&y1, 4).unwrap().is_zero());
    }

    #[test]
    fn plenary_powers() {
        let z4 = z4_rule();
        let x1 = z4.generator(1).unwrap();
        assert_eq!(
            z4.plenary_power(&x1, 5).unwrap(),
            z4.element_from_ints(&[(5, 2), (6, 1)]).unwrap()
        );
        let err = z4.plenary_power_capped(&x1, 10, 4).unwrap_err();
        assert_eq!(err, Error::CapExceeded { cap: 4, support: 2 });
    }

    #[test]
    fn nil_exponent_examples() {
        let z4 = z4_rule();
        assert_eq!(z4.nil_exponent(&z4.generator(1).unwrap()).unwrap(), 4);
        assert_eq!(z4.nil_exponent(&z4.element_from_ints(&[(7, 2)]).unwrap()).unwrap(), 2);
        let k = z4
            .nil_exponent(&z4.element_from_ints(&[(1, 1), (2, 1)]).unwrap())
            .unwrap();
        assert!(k <= 6);
        assert_eq!(z4.nil_exponent(&z4.zero()).unwrap(), 1);

        let r8 = Ring::modular(8).unwrap();
        let cube_zero = StructureRule::shift(&r8, r8.from_i64(2)).unwrap();
        assert_eq!(
            cube_zero.nil_exponent(&cube_zero.generator(1).unwrap()),
            Err(Error::NotSquareZero)
        );
    }

    #[test]
    fn windows() {
        let z4 = z4_rule();
        let w = z4.window(2).unwrap();
        let r = z4.ring();
        assert_eq!(
            w.columns(),
            vec![vec![r.from_i64(2), r.from_i64(1)], vec![r.from_i64(0), r.from_i64(2)]]
        );
        let w1 = z4.window(1).unwrap();
        assert_eq!(w1.columns(), vec![vec![r.from_i64(2)]]);
        assert!(z4.window(0).is_err());
    }

    #[test]
    fn zero_index_is_rejected() {
        assert!(z4_rule().generator(0).is_err());
    }
}
