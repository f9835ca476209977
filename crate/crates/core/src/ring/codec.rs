//! JSON encodings of ring values.
//!
//! * `Z/n`: integer (any integer is reduced; decimal strings are accepted).
//! * `Z`: integer, or decimal string for values beyond 64 bits.
//! * `Q`: `"p/q"` string; integers and `"p"` are accepted.
//! * `R[t]/(t^e)`: array of base encodings, constant term first. A bare
//!   scalar is read as a constant.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde_json::Value;

use super::{Repr, Ring, RingDescriptor, RingValue};
use crate::error::Result;

impl Ring {
    pub fn parse_value(&self, json: &Value) -> Result<RingValue> {
        match &self.desc {
            RingDescriptor::Integers => Ok(RingValue(Repr::Int(self.json_integer(json)?))),
            RingDescriptor::ModN { .. } => Ok(self.from_bigint(&self.json_integer(json)?)),
            RingDescriptor::Rationals => {
                let r = match json {
                    Value::String(s) => {
                        parse_fraction(s).ok_or_else(|| self.parse_error(&format!("bad fraction {s:?}")))?
                    }
                    other => BigRational::from_integer(self.json_integer(other)?),
                };
                Ok(RingValue(Repr::Rat(r)))
            }
            RingDescriptor::PolyQuot { .. } => {
                let base = self.base_ring();
                match json {
                    Value::Array(items) => {
                        let coeffs = items.iter().map(|v| base.parse_value(v)).collect::<Result<Vec<_>>>()?;
                        self.poly(coeffs)
                    }
                    scalar => self.poly(vec![base.parse_value(scalar)?]),
                }
            }
        }
    }

    pub fn encode_value(&self, v: &RingValue) -> Value {
        match &v.0 {
            Repr::Int(i) => match i.to_i64() {
                Some(small) => Value::from(small),
                None => Value::String(i.to_string()),
            },
            Repr::Rat(r) if r.is_integer() => Value::String(r.numer().to_string()),
            Repr::Rat(r) => Value::String(format!("{}/{}", r.numer(), r.denom())),
            Repr::Mod { residue, .. } => Value::from(*residue),
            Repr::Poly(cs) => Value::Array(cs.iter().map(|c| self.base_ring().encode_value(c)).collect()),
        }
    }

    fn json_integer(&self, json: &Value) -> Result<BigInt> {
        match json {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(BigInt::from(i))
                } else if let Some(u) = n.as_u64() {
                    Ok(BigInt::from(u))
                } else {
                    Err(self.parse_error(&format!("{n} is not an integer")))
                }
            }
            Value::String(s) => {
                BigInt::from_str(s.trim()).map_err(|_| self.parse_error(&format!("{s:?} is not a decimal integer")))
            }
            other => Err(self.parse_error(&format!("expected an integer, got {other}"))),
        }
    }
}

fn parse_fraction(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            (!q.is_zero()).then(|| BigRational::new(p, q))
        }
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use serde_json::json;

    use super::*;

    #[test]
    fn descriptor_encoding() {
        let d: RingDescriptor = serde_json::from_value(json!({"kind":"mod","modulus":36})).unwrap();
        assert_eq!(d, RingDescriptor::ModN { modulus: 36 });
        let d: RingDescriptor =
            serde_json::from_value(json!({"kind":"polyquot","base":{"kind":"rat"},"exponent":2})).unwrap();
        assert_eq!(
            d,
            RingDescriptor::PolyQuot {
                base: Box::new(RingDescriptor::Rationals),
                exponent: 2
            }
        );
        assert_eq!(
            serde_json::to_value(RingDescriptor::Integers).unwrap(),
            json!({"kind":"int"})
        );
        assert!(serde_json::from_value::<RingDescriptor>(json!({"kind":"gf"})).is_err());
    }

    #[test]
    fn value_encodings() {
        let z36 = Ring::modular(36).unwrap();
        assert_eq!(z36.parse_value(&json!(-1)).unwrap(), z36.from_i64(35));
        assert_eq!(z36.encode_value(&z36.from_i64(12)), json!(12));

        let z = Ring::integers();
        let big = z.parse_value(&json!("123456789012345678901234567890")).unwrap();
        assert_eq!(z.encode_value(&big), json!("123456789012345678901234567890"));
        assert_eq!(z.encode_value(&z.from_i64(-3)), json!(-3));

        let q = Ring::rationals();
        let half = q.parse_value(&json!("2/4")).unwrap();
        assert_eq!(q.encode_value(&half), json!("1/2"));
        assert_eq!(q.parse_value(&json!(3)).unwrap(), q.from_i64(3));
        assert!(q.parse_value(&json!("1/0")).is_err());

        let p = Ring::poly_quot(&q, 2).unwrap();
        let t = p.parse_value(&json!(["0", "1"])).unwrap();
        assert_eq!(t, p.t().unwrap());
        assert_eq!(p.parse_value(&json!(5)).unwrap(), p.from_i64(5));
        assert!(p.parse_value(&json!([1, 2, 3])).is_err());
        assert_eq!(p.encode_value(&t), json!(["0", "1"]));
        assert!(z36.parse_value(&json!(1.5)).is_err());
    }
}
