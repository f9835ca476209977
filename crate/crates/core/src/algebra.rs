//! Finite-dimensional evolution algebras.
//!
//! An evolution algebra on generators `x_1..x_N` has `x_i x_j = 0` for
//! `i != j` and `x_j^2 = sum_k c_{kj} x_k`. The structure matrix stores
//! `c_{kj}` at row `k`, column `j`, so column `j` is the coordinate vector of
//! `x_j^2`. Basis indices are 0-based in this API and 1-based in labels.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::{check_permutation, RingMatrix};
use crate::ring::{Ring, RingValue};

/// Default cap on plenary power exponents.
pub const DEFAULT_PLENARY_CAP: usize = 64;

/// A commutative evolution algebra defined by its structure matrix.
/// Cloning shares the underlying data.
#[derive(Clone, Debug)]
pub struct EvolutionAlgebra {
    inner: Arc<AlgebraData>,
}

#[derive(Debug)]
struct AlgebraData {
    structure: RingMatrix,
    labels: Vec<String>,
}

impl PartialEq for EvolutionAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.structure == other.inner.structure
    }
}

impl Eq for EvolutionAlgebra {}

/// An element `sum_i a_i x_i`, tied to the algebra it was created in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    algebra: EvolutionAlgebra,
    coeffs: Vec<RingValue>,
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl EvolutionAlgebra {
    /// Builds the algebra with `x_j^2 = sum_k columns[j][k] x_k`.
    pub fn from_columns(ring: &Ring, columns: Vec<Vec<RingValue>>) -> Result<EvolutionAlgebra> {
        let n = columns.len();
        if n == 0 {
            return Err(Error::Dimension("an algebra needs at least one generator".into()));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != n {
                return Err(Error::Dimension(format!(
                    "column {} has {} entries, expected {n}",
                    j + 1,
                    col.len()
                )));
            }
            for v in col {
                ring.check(v)?;
            }
        }
        let structure = RingMatrix::from_fn(ring, n, |k, j| columns[j][k].clone());
        Ok(EvolutionAlgebra::from_structure_unchecked(structure, default_labels(n)))
    }

    /// Convenience constructor from small integer columns.
    pub fn from_int_columns(ring: &Ring, columns: &[&[i64]]) -> Result<EvolutionAlgebra> {
        let cols = columns
            .iter()
            .map(|c| c.iter().map(|&v| ring.from_i64(v)).collect())
            .collect();
        EvolutionAlgebra::from_columns(ring, cols)
    }

    /// Builds the algebra from displayed rows: `rows[k][j] = c_{kj}`.
    pub fn from_rows(ring: &Ring, rows: Vec<Vec<RingValue>>) -> Result<EvolutionAlgebra> {
        let structure = RingMatrix::from_rows(ring, rows)?;
        if structure.size() == 0 {
            return Err(Error::Dimension("an algebra needs at least one generator".into()));
        }
        let n = structure.size();
        Ok(EvolutionAlgebra::from_structure_unchecked(structure, default_labels(n)))
    }

    pub fn from_structure_matrix(structure: RingMatrix) -> Result<EvolutionAlgebra> {
        if structure.size() == 0 {
            return Err(Error::Dimension("an algebra needs at least one generator".into()));
        }
        let n = structure.size();
        Ok(EvolutionAlgebra::from_structure_unchecked(structure, default_labels(n)))
    }

    fn from_structure_unchecked(structure: RingMatrix, labels: Vec<String>) -> EvolutionAlgebra {
        EvolutionAlgebra {
            inner: Arc::new(AlgebraData { structure, labels }),
        }
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<EvolutionAlgebra> {
        if labels.len() != self.dimension() {
            return Err(Error::Dimension(format!(
                "{} labels for dimension {}",
                labels.len(),
                self.dimension()
            )));
        }
        Ok(EvolutionAlgebra::from_structure_unchecked(
            self.inner.structure.clone(),
            labels,
        ))
    }

    pub fn ring(&self) -> &Ring {
        self.inner.structure.ring()
    }

    /// Number of generators (the rank of the underlying free module).
    pub fn dimension(&self) -> usize {
        self.inner.structure.size()
    }

    pub fn structure(&self) -> &RingMatrix {
        &self.inner.structure
    }

    /// `c_{kj}`: coefficient of `x_k` in `x_j^2`.
    pub fn coefficient(&self, k: usize, j: usize) -> &RingValue {
        self.inner.structure.get(k, j)
    }

    pub fn columns(&self) -> Vec<Vec<RingValue>> {
        (0..self.dimension()).map(|j| self.inner.structure.column(j)).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    /// Hex SHA-256 of the canonical `{ring, columns}` document.
    pub fn canonical_hash(&self) -> String {
        let ring = self.ring();
        let columns: Vec<Vec<serde_json::Value>> = self
            .columns()
            .iter()
            .map(|c| c.iter().map(|v| ring.encode_value(v)).collect())
            .collect();
        let doc = json!({ "ring": ring.descriptor(), "columns": columns });
        hex::encode(Sha256::digest(doc.to_string().as_bytes()))
    }

    pub fn element(&self, coeffs: Vec<RingValue>) -> Result<Element> {
        if coeffs.len() != self.dimension() {
            return Err(Error::Dimension(format!(
                "{} coefficients for dimension {}",
                coeffs.len(),
                self.dimension()
            )));
        }
        for c in &coeffs {
            self.ring().check(c)?;
        }
        Ok(self.element_unchecked(coeffs))
    }

    pub fn element_from_ints(&self, coeffs: &[i64]) -> Result<Element> {
        self.element(coeffs.iter().map(|&v| self.ring().from_i64(v)).collect())
    }

    pub(crate) fn element_unchecked(&self, coeffs: Vec<RingValue>) -> Element {
        Element {
            algebra: self.clone(),
            coeffs,
        }
    }

    pub fn zero(&self) -> Element {
        self.element_unchecked(vec![self.ring().zero(); self.dimension()])
    }

    /// The generator `x_{i+1}` (0-based `i`).
    pub fn basis(&self, i: usize) -> Element {
        let mut coeffs = vec![self.ring().zero(); self.dimension()];
        coeffs[i] = self.ring().one();
        self.element_unchecked(coeffs)
    }

    pub fn basis_elements(&self) -> Vec<Element> {
        (0..self.dimension()).map(|i| self.basis(i)).collect()
    }

    fn owns(&self, a: &Element) -> Result<()> {
        if a.algebra == *self {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// `ab = sum_i a_i b_i x_i^2`, i.e. the vector `C (a ⊙ b)`.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.owns(a)?;
        self.owns(b)?;
        Ok(self.multiply_raw(&a.coeffs, &b.coeffs))
    }

    pub(crate) fn multiply_raw(&self, a: &[RingValue], b: &[RingValue]) -> Element {
        let ring = self.ring();
        let hadamard: Vec<RingValue> = a.iter().zip(b).map(|(x, y)| ring.mul_raw(x, y)).collect();
        self.element_unchecked(self.inner.structure.mul_vec_raw(&hadamard))
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element> {
        self.owns(a)?;
        self.owns(b)?;
        let ring = self.ring();
        Ok(self.element_unchecked(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| ring.add_raw(x, y))
                .collect(),
        ))
    }

    pub fn scale(&self, r: &RingValue, a: &Element) -> Result<Element> {
        self.owns(a)?;
        self.ring().check(r)?;
        let ring = self.ring();
        Ok(self.element_unchecked(a.coeffs.iter().map(|x| ring.mul_raw(r, x)).collect()))
    }

    /// `C_alpha`: column `j` of `C` scaled by `a_j`.
    pub fn c_alpha(&self, a: &Element) -> Result<RingMatrix> {
        self.owns(a)?;
        Ok(self.c_alpha_raw(&a.coeffs))
    }

    pub(crate) fn c_alpha_raw(&self, alpha: &[RingValue]) -> RingMatrix {
        let ring = self.ring();
        RingMatrix::from_fn(ring, self.dimension(), |k, j| {
            ring.mul_raw(&alpha[j], self.coefficient(k, j))
        })
    }

    /// Matrix of `L_a: x -> ax`. Equal to `C_alpha` as a matrix; kept as a
    /// separate operator for the associated-algebra construction.
    pub fn left_mult_matrix(&self, a: &Element) -> Result<RingMatrix> {
        self.c_alpha(a)
    }

    /// Principal power `a^n = a^(n-1) a`, computed as `C_alpha^(n-1) alpha`.
    pub fn principal_power(&self, a: &Element, n: usize) -> Result<Element> {
        self.owns(a)?;
        if n == 0 {
            return Err(Error::ZeroExponent);
        }
        let c_alpha = self.c_alpha_raw(&a.coeffs);
        let mut beta = a.coeffs.clone();
        for _ in 1..n {
            beta = c_alpha.mul_vec_raw(&beta);
            if beta.iter().all(RingValue::is_zero) {
                break;
            }
        }
        Ok(self.element_unchecked(beta))
    }

    /// Plenary power `a^[1] = a a`, `a^[n] = a^[n-1] a^[n-1]`, capped at
    /// [`DEFAULT_PLENARY_CAP`].
    pub fn plenary_power(&self, a: &Element, n: usize) -> Result<Element> {
        self.plenary_power_capped(a, n, DEFAULT_PLENARY_CAP)
    }

    pub fn plenary_power_capped(&self, a: &Element, n: usize, cap: usize) -> Result<Element> {
        self.owns(a)?;
        if n == 0 {
            return Err(Error::ZeroExponent);
        }
        if n > cap {
            return Err(Error::CapExceeded {
                cap,
                support: self.dimension(),
            });
        }
        let mut p = a.clone();
        for _ in 0..n {
            p = self.multiply_raw(&p.coeffs, &p.coeffs);
        }
        Ok(p)
    }

    /// `A / span{x_k : k in drop}`. The span must be an ideal; every basis
    /// product is checked.
    pub fn quotient_by_basis_ideal(&self, drop: &BTreeSet<usize>) -> Result<EvolutionAlgebra> {
        let n = self.dimension();
        if let Some(&bad) = drop.iter().find(|&&k| k >= n) {
            return Err(Error::Dimension(format!(
                "index {} out of range for dimension {n}",
                bad + 1
            )));
        }
        for i in 0..n {
            for &k in drop {
                let product = self.multiply_raw(&self.basis(i).coeffs, &self.basis(k).coeffs);
                if let Some(escaped) = product
                    .coeffs
                    .iter()
                    .enumerate()
                    .position(|(m, c)| !c.is_zero() && !drop.contains(&m))
                {
                    return Err(Error::NotAnIdeal {
                        left: i + 1,
                        right: k + 1,
                        escaped: escaped + 1,
                    });
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
        let ring = self.ring();
        let structure = RingMatrix::from_fn(ring, keep.len(), |r, c| self.coefficient(keep[r], keep[c]).clone());
        let labels = keep.iter().map(|&i| self.labels()[i].clone()).collect();
        Ok(EvolutionAlgebra::from_structure_unchecked(structure, labels))
    }

    /// Block-diagonal sum; generators of `other` follow those of `self`.
    pub fn direct_sum(&self, other: &EvolutionAlgebra) -> Result<EvolutionAlgebra> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch {
                left: self.ring().to_string(),
                right: other.ring().to_string(),
            });
        }
        let (n, m) = (self.dimension(), other.dimension());
        let ring = self.ring();
        let structure = RingMatrix::from_fn(ring, n + m, |r, c| match (r < n, c < n) {
            (true, true) => self.coefficient(r, c).clone(),
            (false, false) => other.coefficient(r - n, c - n).clone(),
            _ => ring.zero(),
        });
        Ok(EvolutionAlgebra::from_structure_unchecked(
            structure,
            default_labels(n + m),
        ))
    }

    /// Relabels generators so that new generator `r` is old generator `perm[r]`.
    pub fn reordered(&self, perm: &[usize]) -> Result<EvolutionAlgebra> {
        check_permutation(perm, self.dimension())?;
        let structure = self.inner.structure.permuted(perm)?;
        let labels = perm.iter().map(|&p| self.labels()[p].clone()).collect();
        Ok(EvolutionAlgebra::from_structure_unchecked(structure, labels))
    }

    /// Renders an element with this algebra's labels, e.g. `6x1+2x2`.
    pub fn format_coeffs(&self, coeffs: &[RingValue]) -> String {
        format_terms(coeffs.iter().enumerate().map(|(i, c)| (self.labels()[i].as_str(), c)))
    }

    /// The zero-dimensional algebra over `ring`, e.g. `A / A`.
    pub fn zero_dimensional(ring: &Ring) -> EvolutionAlgebra {
        EvolutionAlgebra::from_structure_unchecked(RingMatrix::zeros(ring, 0), Vec::new())
    }
}

pub(crate) fn format_terms<'a>(terms: impl Iterator<Item = (&'a str, &'a RingValue)>) -> String {
    let mut out = String::new();
    for (label, c) in terms {
        if c.is_zero() {
            continue;
        }
        let term = if c.is_one() {
            label.to_string()
        } else if c.is_compound() {
            format!("({c}){label}")
        } else {
            format!("{c}{label}")
        };
        if !out.is_empty() && !term.starts_with('-') {
            out.push('+');
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl Element {
    pub fn algebra(&self) -> &EvolutionAlgebra {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[RingValue] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<RingValue> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RingValue::is_zero)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.algebra.format_coeffs(&self.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z36() -> Ring {
        Ring::modular(36).unwrap()
    }

    fn z36_nilpotent() -> EvolutionAlgebra {
        EvolutionAlgebra::from_int_columns(&z36(), &[&[6, 2], &[3, 12]]).unwrap()
    }

    fn z36_cyclic() -> EvolutionAlgebra {
        EvolutionAlgebra::from_int_columns(&z36(), &[&[6, 2], &[2, 12]]).unwrap()
    }

    #[test]
    fn build_examples() {
        let a = z36_nilpotent();
        assert_eq!(a.dimension(), 2);
        assert_eq!(a.multiply(&a.basis(0), &a.basis(0)).unwrap().to_string(), "6x1+2x2");
        assert_eq!(a.multiply(&a.basis(1), &a.basis(1)).unwrap().to_string(), "3x1+12x2");
        let zero = EvolutionAlgebra::from_int_columns(&Ring::integers(), &[&[0]]).unwrap();
        assert!(zero.multiply(&zero.basis(0), &zero.basis(0)).unwrap().is_zero());
    }

    #[test]
    fn ragged_columns_are_rejected() {
        let r = z36();
        assert!(matches!(
            EvolutionAlgebra::from_int_columns(&r, &[&[1, 2], &[3]]),
            Err(Error::Dimension(_))
        ));
        assert!(EvolutionAlgebra::from_int_columns(&r, &[]).is_err());
    }

    #[test]
    fn rows_and_columns_agree() {
        let r = z36();
        let rows = vec![vec![r.from_i64(6), r.from_i64(3)], vec![r.from_i64(2), r.from_i64(12)]];
        assert_eq!(EvolutionAlgebra::from_rows(&r, rows).unwrap(), z36_nilpotent());
    }

    #[test]
    fn multiply_examples() {
        let a = z36_nilpotent();
        assert!(a.multiply(&a.basis(0), &a.basis(1)).unwrap().is_zero());
        let b = z36_cyclic();
        let s = b.element_from_ints(&[1, 1]).unwrap();
        // (x1+x2)^2 = x1^2 + x2^2 = (6x1+2x2) + (2x1+12x2)
        let expected = b
            .add(
                &b.multiply(&b.basis(0), &b.basis(0)).unwrap(),
                &b.multiply(&b.basis(1), &b.basis(1)).unwrap(),
            )
            .unwrap();
        assert_eq!(b.multiply(&s, &s).unwrap(), expected);
        assert_eq!(expected.to_string(), "8x1+14x2");
    }

    #[test]
    fn elements_of_other_algebras_are_rejected() {
        let a = z36_nilpotent();
        let b = z36_cyclic();
        assert_eq!(a.multiply(&a.basis(0), &b.basis(0)), Err(Error::AlgebraMismatch));
        let same = z36_nilpotent();
        assert!(a.multiply(&a.basis(0), &same.basis(0)).is_ok());
    }

    #[test]
    fn c_alpha_examples() {
        let b = z36_cyclic();
        let ones = b.element_from_ints(&[1, 1]).unwrap();
        assert_eq!(&b.c_alpha(&ones).unwrap(), b.structure());
        assert!(b.c_alpha(&b.zero()).unwrap().is_zero());
        let a = b.element_from_ints(&[2, 3]).unwrap();
        let ca = b.c_alpha(&a).unwrap();
        for k in 0..2 {
            for j in 0..2 {
                let expected = b.ring().mul(&a.coeffs()[j], b.coefficient(k, j)).unwrap();
                assert_eq!(ca.get(k, j), &expected);
            }
        }
    }

    #[test]
    fn powers_require_positive_exponent() {
        let a = z36_nilpotent();
        assert_eq!(a.principal_power(&a.basis(0), 0), Err(Error::ZeroExponent));
        assert_eq!(a.plenary_power(&a.basis(0), 0), Err(Error::ZeroExponent));
        assert_eq!(a.principal_power(&a.basis(0), 1).unwrap(), a.basis(0));
        assert!(matches!(
            a.plenary_power(&a.basis(0), 65),
            Err(Error::CapExceeded { cap: 64, .. })
        ));
        assert!(a.plenary_power(&a.zero(), 5).unwrap().is_zero());
    }

    #[test]
    fn left_multiplication_matrix() {
        let z2 = Ring::modular(2).unwrap();
        // x1^2 = 0, x2^2 = x1
        let alg = EvolutionAlgebra::from_int_columns(&z2, &[&[0, 0], &[1, 0]]).unwrap();
        let l2 = alg.left_mult_matrix(&alg.basis(1)).unwrap();
        let nonzero: Vec<(usize, usize)> = (0..2)
            .flat_map(|r| (0..2).map(move |c| (r, c)))
            .filter(|&(r, c)| !l2.get(r, c).is_zero())
            .collect();
        assert_eq!(nonzero, [(0, 1)]);
        assert!(alg.left_mult_matrix(&alg.zero()).unwrap().is_zero());
    }

    #[test]
    fn quotient_examples() {
        let a = z36_nilpotent();
        assert_eq!(a.quotient_by_basis_ideal(&BTreeSet::new()).unwrap(), a);

        let z = Ring::integers();
        let b = EvolutionAlgebra::from_int_columns(&z, &[&[0, 0], &[1, 0]]).unwrap();
        let q = b.quotient_by_basis_ideal(&BTreeSet::from([0])).unwrap();
        assert_eq!(q.dimension(), 1);
        assert!(q.structure().is_zero());
        assert_eq!(q.labels(), ["x2"]);

        let all = b.quotient_by_basis_ideal(&BTreeSet::from([0, 1])).unwrap();
        assert_eq!(all.dimension(), 0);

        let err = b.quotient_by_basis_ideal(&BTreeSet::from([1])).unwrap_err();
        assert_eq!(
            err,
            Error::NotAnIdeal {
                left: 2,
                right: 2,
                escaped: 1
            }
        );
    }

    #[test]
    fn direct_sum_is_block_diagonal() {
        let r = z36();
        let a = z36_nilpotent();
        let b = EvolutionAlgebra::from_int_columns(&r, &[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]).unwrap();
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.dimension(), 5);
        assert_eq!(s.coefficient(1, 0), &r.from_i64(2));
        assert_eq!(s.coefficient(3, 3), &r.from_i64(2));
        assert!(s.coefficient(0, 3).is_zero() && s.coefficient(3, 0).is_zero());
        let other = EvolutionAlgebra::from_int_columns(&Ring::integers(), &[&[0]]).unwrap();
        assert!(matches!(a.direct_sum(&other), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn hash_depends_on_structure_only() {
        let a = z36_nilpotent();
        let relabeled = a.with_labels(vec!["p".into(), "q".into()]).unwrap();
        assert_eq!(a.canonical_hash(), relabeled.canonical_hash());
        assert_ne!(a.canonical_hash(), z36_cyclic().canonical_hash());
    }
}
