use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// An element of a [`Ring`](super::Ring) in canonical form.
///
/// Values are only produced by ring operations, so the representation is
/// always canonical: residues are reduced, fractions are in lowest terms with
/// a positive denominator, and truncated polynomials carry exactly
/// `exponent` coefficients. Equality is therefore equality of ring elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingValue(pub(crate) Repr);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Repr {
    Int(BigInt),
    Rat(BigRational),
    Mod { residue: u64, modulus: u64 },
    Poly(Vec<RingValue>),
}

impl RingValue {
    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Int(v) => v.is_zero(),
            Repr::Rat(v) => v.is_zero(),
            Repr::Mod { residue, .. } => *residue == 0,
            Repr::Poly(cs) => cs.iter().all(RingValue::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Int(v) => v.is_one(),
            Repr::Rat(v) => v.is_one(),
            Repr::Mod { residue, .. } => *residue == 1,
            Repr::Poly(cs) => cs[0].is_one() && cs[1..].iter().all(RingValue::is_zero),
        }
    }

    pub fn as_bigint(&self) -> Option<&BigInt> {
        match &self.0 {
            Repr::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rat(v) => Some(v),
            _ => None,
        }
    }

    /// Residue in `[0, modulus)` for values of `Z/n`.
    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Mod { residue, .. } => Some(*residue),
            _ => None,
        }
    }

    /// Coefficients of `t^0, t^1, ...` for truncated polynomial values.
    pub fn poly_coefficients(&self) -> Option<&[RingValue]> {
        match &self.0 {
            Repr::Poly(cs) => Some(cs),
            _ => None,
        }
    }

    /// True when the printed form needs parentheses before a basis label.
    pub(crate) fn is_compound(&self) -> bool {
        match &self.0 {
            Repr::Rat(v) => !v.is_integer(),
            Repr::Poly(cs) => cs[1..].iter().any(|c| !c.is_zero()) || cs[0].is_compound(),
            _ => false,
        }
    }
}

impl fmt::Display for RingValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Int(v) => write!(f, "{v}"),
            Repr::Rat(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Repr::Rat(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            Repr::Mod { residue, .. } => write!(f, "{residue}"),
            Repr::Poly(cs) => {
                let mut terms = Vec::new();
                for (d, c) in cs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let var = match d {
                        0 => String::new(),
                        1 => "t".to_string(),
                        _ => format!("t^{d}"),
                    };
                    let term = if d == 0 {
                        c.to_string()
                    } else if c.is_one() {
                        var
                    } else if c.is_compound() {
                        format!("({c}){var}")
                    } else {
                        format!("{c}{var}")
                    };
                    terms.push(term);
                }
                if terms.is_empty() {
                    return write!(f, "0");
                }
                let mut out = String::new();
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 && !t.starts_with('-') {
                        out.push('+');
                    }
                    out.push_str(t);
                }
                write!(f, "{out}")
            }
        }
    }
}
