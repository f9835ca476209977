//! Exact commutative coefficient rings.
//!
//! Four kinds are supported: the integers, the rationals, residues modulo
//! `n`, and truncated polynomial rings `R[t]/(t^e)` over any supported base.
//! All arithmetic is exact; integers and rationals are arbitrary precision.

mod codec;
mod value;

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) use value::Repr;
pub use value::RingValue;

/// Maximum nesting of `PolyQuot` descriptors.
pub const MAX_POLYQUOT_DEPTH: usize = 4;

/// Rings with more elements than this refuse to enumerate.
pub const MAX_ENUMERATION: u64 = 1 << 26;

/// Declarative description of a coefficient ring.
///
/// The serde form is the textual encoding used in job files, e.g.
/// `{"kind":"mod","modulus":36}` or
/// `{"kind":"polyquot","base":{"kind":"rat"},"exponent":2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingDescriptor {
    #[serde(rename = "int")]
    Integers,
    #[serde(rename = "rat")]
    Rationals,
    #[serde(rename = "mod")]
    ModN { modulus: u64 },
    /// `base[t]/(t^exponent)`.
    #[serde(rename = "polyquot")]
    PolyQuot { base: Box<RingDescriptor>, exponent: usize },
}

impl RingDescriptor {
    pub fn validate(&self) -> Result<()> {
        self.validate_at(0)
    }

    fn validate_at(&self, depth: usize) -> Result<()> {
        match self {
            RingDescriptor::Integers | RingDescriptor::Rationals => Ok(()),
            RingDescriptor::ModN { modulus } if *modulus < 2 => Err(Error::InvalidRing {
                field: "modulus",
                reason: format!("must be at least 2, got {modulus}"),
            }),
            RingDescriptor::ModN { .. } => Ok(()),
            RingDescriptor::PolyQuot { exponent, .. } if *exponent < 1 => Err(Error::InvalidRing {
                field: "exponent",
                reason: "must be at least 1".into(),
            }),
            RingDescriptor::PolyQuot { .. } if depth >= MAX_POLYQUOT_DEPTH => Err(Error::InvalidRing {
                field: "base",
                reason: format!("polyquot nesting deeper than {MAX_POLYQUOT_DEPTH}"),
            }),
            RingDescriptor::PolyQuot { base, .. } => base.validate_at(depth + 1),
        }
    }
}

/// Result of [`Ring::nilpotency_index`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilpotencyIndex {
    /// Smallest `k >= 1` with `a^k = 0`.
    Index(usize),
    /// Nilpotent, but the index exceeds the iteration bound.
    NotNilpotentWithin(usize),
    NotNilpotent,
}

/// A validated coefficient ring. Cheap to clone; equal descriptors give
/// equal rings.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    desc: RingDescriptor,
    base: Option<Box<Ring>>,
}

impl Ring {
    pub fn new(desc: RingDescriptor) -> Result<Ring> {
        desc.validate()?;
        Ok(Ring::from_valid(desc))
    }

    fn from_valid(desc: RingDescriptor) -> Ring {
        let base = match &desc {
            RingDescriptor::PolyQuot { base, .. } => Some(Box::new(Ring::from_valid((**base).clone()))),
            _ => None,
        };
        Ring { desc, base }
    }

    pub fn integers() -> Ring {
        Ring::from_valid(RingDescriptor::Integers)
    }

    pub fn rationals() -> Ring {
        Ring::from_valid(RingDescriptor::Rationals)
    }

    pub fn modular(modulus: u64) -> Result<Ring> {
        Ring::new(RingDescriptor::ModN { modulus })
    }

    pub fn poly_quot(base: &Ring, exponent: usize) -> Result<Ring> {
        Ring::new(RingDescriptor::PolyQuot {
            base: Box::new(base.desc.clone()),
            exponent,
        })
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.desc
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.desc {
            RingDescriptor::ModN { modulus } => Some(modulus),
            _ => None,
        }
    }

    /// Base ring and exponent of a truncated polynomial ring.
    pub fn poly_parts(&self) -> Option<(&Ring, usize)> {
        match (&self.desc, &self.base) {
            (RingDescriptor::PolyQuot { exponent, .. }, Some(base)) => Some((base, *exponent)),
            _ => None,
        }
    }

    pub fn zero(&self) -> RingValue {
        self.from_bigint(&BigInt::zero())
    }

    pub fn one(&self) -> RingValue {
        self.from_bigint(&BigInt::one())
    }

    pub fn from_i64(&self, v: i64) -> RingValue {
        self.from_bigint(&BigInt::from(v))
    }

    /// Image of an integer under the canonical map `Z -> R`.
    pub fn from_bigint(&self, v: &BigInt) -> RingValue {
        match &self.desc {
            RingDescriptor::Integers => RingValue(Repr::Int(v.clone())),
            RingDescriptor::Rationals => RingValue(Repr::Rat(BigRational::from_integer(v.clone()))),
            RingDescriptor::ModN { modulus } => {
                let r = v.mod_floor(&BigInt::from(*modulus));
                RingValue(Repr::Mod {
                    residue: r.to_u64().expect("residue below modulus"),
                    modulus: *modulus,
                })
            }
            RingDescriptor::PolyQuot { exponent, .. } => {
                let base = self.base_ring();
                let mut cs = vec![base.zero(); *exponent];
                cs[0] = base.from_bigint(v);
                RingValue(Repr::Poly(cs))
            }
        }
    }

    /// The fraction `p/q`; only meaningful in rings containing the rationals.
    pub fn rational(&self, p: i64, q: i64) -> Result<RingValue> {
        if q == 0 {
            return Err(self.parse_error("zero denominator"));
        }
        match &self.desc {
            RingDescriptor::Rationals => Ok(RingValue(Repr::Rat(BigRational::new(p.into(), q.into())))),
            RingDescriptor::PolyQuot { .. } => {
                let c = self.base_ring().rational(p, q)?;
                self.constant(c)
            }
            _ => Err(self.parse_error("fractions are only defined over the rationals")),
        }
    }

    /// The class of `t` in a truncated polynomial ring.
    pub fn t(&self) -> Option<RingValue> {
        let (base, e) = self.poly_parts()?;
        let mut cs = vec![base.zero(); e];
        if e > 1 {
            cs[1] = base.one();
        }
        Some(RingValue(Repr::Poly(cs)))
    }

    /// Builds a truncated polynomial from base-ring coefficients, constant
    /// term first. Missing high coefficients are zero.
    pub fn poly(&self, coeffs: Vec<RingValue>) -> Result<RingValue> {
        let Some((base, e)) = self.poly_parts() else {
            return Err(self.parse_error("not a polynomial quotient ring"));
        };
        if coeffs.len() > e {
            return Err(self.parse_error(&format!("{} coefficients for exponent {e}", coeffs.len())));
        }
        for c in &coeffs {
            base.check(c)?;
        }
        let mut cs = coeffs;
        cs.resize(e, base.zero());
        Ok(RingValue(Repr::Poly(cs)))
    }

    fn constant(&self, c: RingValue) -> Result<RingValue> {
        self.poly(vec![c])
    }

    fn base_ring(&self) -> &Ring {
        self.base.as_deref().expect("polyquot ring has a base")
    }

    pub fn contains(&self, v: &RingValue) -> bool {
        match (&self.desc, &v.0) {
            (RingDescriptor::Integers, Repr::Int(_)) => true,
            (RingDescriptor::Rationals, Repr::Rat(r)) => r.denom().is_positive(),
            (RingDescriptor::ModN { modulus }, Repr::Mod { residue, modulus: m }) => m == modulus && residue < modulus,
            (RingDescriptor::PolyQuot { exponent, .. }, Repr::Poly(cs)) => {
                cs.len() == *exponent && cs.iter().all(|c| self.base_ring().contains(c))
            }
            _ => false,
        }
    }

    pub fn check(&self, v: &RingValue) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::ForeignValue {
                ring: self.to_string(),
                value: v.to_string(),
            })
        }
    }

    pub fn is_zero(&self, a: &RingValue) -> bool {
        a.is_zero()
    }

    pub fn add(&self, a: &RingValue, b: &RingValue) -> Result<RingValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_raw(a, b))
    }

    pub fn sub(&self, a: &RingValue, b: &RingValue) -> Result<RingValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_raw(a, &self.neg_raw(b)))
    }

    pub fn mul(&self, a: &RingValue, b: &RingValue) -> Result<RingValue> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul_raw(a, b))
    }

    pub fn neg(&self, a: &RingValue) -> Result<RingValue> {
        self.check(a)?;
        Ok(self.neg_raw(a))
    }

    pub fn pow(&self, a: &RingValue, k: u32) -> Result<RingValue> {
        self.check(a)?;
        Ok(self.pow_raw(a, k))
    }

    pub(crate) fn add_raw(&self, a: &RingValue, b: &RingValue) -> RingValue {
        match (&a.0, &b.0) {
            (Repr::Int(x), Repr::Int(y)) => RingValue(Repr::Int(x + y)),
            (Repr::Rat(x), Repr::Rat(y)) => RingValue(Repr::Rat(x + y)),
            (Repr::Mod { residue: x, modulus }, Repr::Mod { residue: y, .. }) => {
                let s = (*x as u128 + *y as u128) % *modulus as u128;
                RingValue(Repr::Mod {
                    residue: s as u64,
                    modulus: *modulus,
                })
            }
            (Repr::Poly(x), Repr::Poly(y)) => {
                let base = self.base_ring();
                RingValue(Repr::Poly(x.iter().zip(y).map(|(p, q)| base.add_raw(p, q)).collect()))
            }
            _ => panic!("operands from different rings: {a:?} {b:?}"),
        }
    }

    pub(crate) fn neg_raw(&self, a: &RingValue) -> RingValue {
        match &a.0 {
            Repr::Int(x) => RingValue(Repr::Int(-x)),
            Repr::Rat(x) => RingValue(Repr::Rat(-x)),
            Repr::Mod { residue, modulus } => RingValue(Repr::Mod {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            }),
            Repr::Poly(x) => {
                let base = self.base_ring();
                RingValue(Repr::Poly(x.iter().map(|c| base.neg_raw(c)).collect()))
            }
        }
    }

    pub(crate) fn mul_raw(&self, a: &RingValue, b: &RingValue) -> RingValue {
        match (&a.0, &b.0) {
            (Repr::Int(x), Repr::Int(y)) => RingValue(Repr::Int(x * y)),
            (Repr::Rat(x), Repr::Rat(y)) => RingValue(Repr::Rat(x * y)),
            (Repr::Mod { residue: x, modulus }, Repr::Mod { residue: y, .. }) => {
                let p = (*x as u128 * *y as u128) % *modulus as u128;
                RingValue(Repr::Mod {
                    residue: p as u64,
                    modulus: *modulus,
                })
            }
            (Repr::Poly(x), Repr::Poly(y)) => {
                let base = self.base_ring();
                let e = x.len();
                let mut out = vec![base.zero(); e];
                for (i, xi) in x.iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate().take(e - i) {
                        if yj.is_zero() {
                            continue;
                        }
                        out[i + j] = base.add_raw(&out[i + j], &base.mul_raw(xi, yj));
                    }
                }
                RingValue(Repr::Poly(out))
            }
            _ => panic!("operands from different rings: {a:?} {b:?}"),
        }
    }

    pub(crate) fn pow_raw(&self, a: &RingValue, mut k: u32) -> RingValue {
        let mut result = self.one();
        let mut base = a.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = self.mul_raw(&result, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul_raw(&base, &base);
            }
        }
        result
    }

    /// Multiplicative inverse, when `a` is a unit.
    pub fn inverse(&self, a: &RingValue) -> Option<RingValue> {
        if !self.contains(a) {
            return None;
        }
        match &a.0 {
            Repr::Int(x) => (x.abs().is_one()).then(|| a.clone()),
            Repr::Rat(x) => (!x.is_zero()).then(|| RingValue(Repr::Rat(x.recip()))),
            Repr::Mod { residue, modulus } => {
                let g = BigInt::from(*residue).extended_gcd(&BigInt::from(*modulus));
                g.gcd.is_one().then(|| self.from_bigint(&g.x))
            }
            Repr::Poly(cs) => {
                let base = self.base_ring();
                let c0_inv = base.inverse(&cs[0])?;
                let u = self.constant(c0_inv).ok()?;
                // u*a = 1 + m with m nilpotent; (1+m)^-1 = sum (-m)^k.
                let m = self.add_raw(&self.mul_raw(&u, a), &self.neg_raw(&self.one()));
                let neg_m = self.neg_raw(&m);
                let mut term = self.one();
                let mut sum = self.zero();
                for _ in 0..cs.len() {
                    sum = self.add_raw(&sum, &term);
                    term = self.mul_raw(&term, &neg_m);
                }
                Some(self.mul_raw(&sum, &u))
            }
        }
    }

    /// Exact nilpotency test.
    pub fn is_nilpotent(&self, a: &RingValue) -> bool {
        match &a.0 {
            Repr::Int(_) | Repr::Rat(_) => a.is_zero(),
            // n < 2^64, so every prime exponent of n is below 64.
            Repr::Mod { .. } => self.pow_raw(a, 64).is_zero(),
            Repr::Poly(cs) => self.base_ring().is_nilpotent(&cs[0]),
        }
    }

    /// Smallest `k` with `a^k = 0`.
    ///
    /// Non-nilpotency is always decided exactly. For finite rings the index
    /// is found without reference to `bound`; for infinite rings the power
    /// sequence is iterated at most `bound` times.
    pub fn nilpotency_index(&self, a: &RingValue, bound: usize) -> Result<NilpotencyIndex> {
        if bound == 0 {
            return Err(Error::ZeroBound);
        }
        self.check(a)?;
        if !self.is_nilpotent(a) {
            return Ok(NilpotencyIndex::NotNilpotent);
        }
        let limit = if self.is_finite() { usize::MAX } else { bound };
        let mut power = a.clone();
        let mut k = 1;
        while k <= limit {
            if power.is_zero() {
                return Ok(NilpotencyIndex::Index(k));
            }
            power = self.mul_raw(&power, a);
            k += 1;
        }
        Ok(NilpotencyIndex::NotNilpotentWithin(bound))
    }

    pub fn is_finite(&self) -> bool {
        match &self.desc {
            RingDescriptor::Integers | RingDescriptor::Rationals => false,
            RingDescriptor::ModN { .. } => true,
            RingDescriptor::PolyQuot { .. } => self.base_ring().is_finite(),
        }
    }

    /// Number of elements, or `None` for infinite rings.
    pub fn cardinality(&self) -> Option<BigUint> {
        match &self.desc {
            RingDescriptor::Integers | RingDescriptor::Rationals => None,
            RingDescriptor::ModN { modulus } => Some(BigUint::from(*modulus)),
            RingDescriptor::PolyQuot { exponent, .. } => {
                let b = self.base_ring().cardinality()?;
                Some(num_traits::pow(b, *exponent))
            }
        }
    }

    /// Every element exactly once. `Z/n` in ascending residue order;
    /// polynomial rings as an odometer over coefficient arrays with the
    /// constant term varying fastest, each digit in base-ring order.
    pub fn enumerate_elements(&self) -> Result<Vec<RingValue>> {
        let card = self.cardinality().ok_or(Error::InfiniteRing)?;
        if card > BigUint::from(MAX_ENUMERATION) {
            return Err(Error::GuardExceeded {
                work: card.to_string(),
                guard: MAX_ENUMERATION,
            });
        }
        Ok(self.enumerate_unchecked())
    }

    fn enumerate_unchecked(&self) -> Vec<RingValue> {
        match &self.desc {
            RingDescriptor::ModN { modulus } => (0..*modulus)
                .map(|residue| {
                    RingValue(Repr::Mod {
                        residue,
                        modulus: *modulus,
                    })
                })
                .collect(),
            RingDescriptor::PolyQuot { exponent, .. } => {
                let digits = self.base_ring().enumerate_unchecked();
                odometer(digits.len(), *exponent)
                    .map(|idx| RingValue(Repr::Poly(idx.iter().map(|&i| digits[i].clone()).collect())))
                    .collect()
            }
            _ => unreachable!("finite rings only"),
        }
    }

    pub fn is_field(&self) -> bool {
        match &self.desc {
            RingDescriptor::Integers => false,
            RingDescriptor::Rationals => true,
            RingDescriptor::ModN { modulus } => is_prime(*modulus),
            RingDescriptor::PolyQuot { exponent, .. } => *exponent == 1 && self.base_ring().is_field(),
        }
    }

    pub fn is_domain(&self) -> bool {
        match &self.desc {
            RingDescriptor::Integers | RingDescriptor::Rationals => true,
            RingDescriptor::ModN { modulus } => is_prime(*modulus),
            RingDescriptor::PolyQuot { exponent, .. } => *exponent == 1 && self.base_ring().is_domain(),
        }
    }

    fn parse_error(&self, reason: &str) -> Error {
        Error::ValueParse {
            ring: self.to_string(),
            reason: reason.to_string(),
        }
    }

    /// Detects the power-sequence cycle of `a` by hashing canonical values.
    /// Returns `(s, s + p)` with `a^s = a^(s+p)` and no zero power before.
    pub fn power_cycle(&self, a: &RingValue) -> Option<(usize, usize)> {
        let mut seen = HashSet::new();
        let mut order = Vec::new();
        let mut power = a.clone();
        loop {
            if power.is_zero() {
                return None;
            }
            if seen.contains(&power) {
                let s = order.iter().position(|p| *p == power).expect("seen power is recorded") + 1;
                return Some((s, order.len() + 1));
            }
            seen.insert(power.clone());
            order.push(power.clone());
            power = self.mul_raw(&power, a);
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.desc {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::Rationals => write!(f, "Q"),
            RingDescriptor::ModN { modulus } => write!(f, "Z/{modulus}"),
            RingDescriptor::PolyQuot { exponent, .. } => {
                let base = self.base_ring();
                if base.base.is_some() {
                    write!(f, "({base})[t]/(t^{exponent})")
                } else {
                    write!(f, "{base}[t]/(t^{exponent})")
                }
            }
        }
    }
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Little-endian mixed-radix counter over `width` digits of base `radix`.
pub(crate) fn odometer(radix: usize, width: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current = Some(vec![0usize; width]);
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let mut next = out.clone();
        let mut pos = 0;
        loop {
            if pos == width {
                current = None;
                break;
            }
            next[pos] += 1;
            if next[pos] < radix {
                current = Some(next);
                break;
            }
            next[pos] = 0;
            pos += 1;
        }
        Some(out)
    })
}
