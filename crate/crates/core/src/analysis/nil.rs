//! Nil elements and nil algebras.
//!
//! For `a = sum a_j x_j` with coefficient vector `alpha`, the principal
//! powers satisfy `a^(n) = C_alpha^(n-1) alpha`. Iterating
//! `beta_0 = alpha`, `beta_(k+1) = C_alpha beta_k` therefore walks the powers
//! `a^(k+1) = beta_k`. Over a finite ring the walk either hits zero or
//! revisits a state, and a revisited state is a proof that `a` is not nil.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::algebra::{Element, EvolutionAlgebra};
use crate::error::{Error, Result};
use crate::ring::{odometer, NilpotencyIndex, RingValue};

/// Default cap on `|R|^N` for exhaustive nil scans.
pub const DEFAULT_NIL_CAP: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NilElementVerdict {
    /// Smallest `k` with `a^k = 0`.
    Nil {
        exponent: usize,
    },
    /// `beta_s = beta_(s+p)` with every `beta_j`, `j <= s+p`, nonzero.
    /// Since `beta_j = a^(j+1)`, the powers of `a` cycle forever.
    NotNil {
        cycle: (usize, usize),
    },
    Unknown {
        bound: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NilAlgebraVerdict {
    /// Every element is nil; `max_exponent` is the largest exponent seen.
    Nil {
        max_exponent: usize,
        checked: u64,
    },
    /// First non-nil element in enumeration order.
    NotNil {
        witness: Element,
        cycle: (usize, usize),
    },
    Skipped {
        size: BigUint,
        cap: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagPrecheck {
    Pass,
    /// Diagonal entry `c_ii` is not nilpotent, so `x_i` is not nil.
    Fail {
        index: usize,
        value: RingValue,
    },
    /// `c_ii` is nilpotent but its index exceeds the bound.
    Inconclusive {
        index: usize,
    },
}

/// Options for [`is_nil_algebra`].
#[derive(Clone, Copy, Debug)]
pub struct NilScan {
    pub cap: u64,
    pub parallel: bool,
}

impl Default for NilScan {
    fn default() -> Self {
        NilScan {
            cap: DEFAULT_NIL_CAP,
            parallel: false,
        }
    }
}

/// Necessary condition for nil: every `c_ii` is nilpotent, because
/// `x_i^k = c_ii^(k-2) x_i^2`.
pub fn diag_nil_precheck(algebra: &EvolutionAlgebra, bound: usize) -> Result<DiagPrecheck> {
    let ring = algebra.ring();
    for i in 0..algebra.dimension() {
        let c = algebra.coefficient(i, i);
        match ring.nilpotency_index(c, bound)? {
            NilpotencyIndex::Index(_) => {}
            NilpotencyIndex::NotNilpotent => {
                return Ok(DiagPrecheck::Fail {
                    index: i,
                    value: c.clone(),
                })
            }
            NilpotencyIndex::NotNilpotentWithin(_) => return Ok(DiagPrecheck::Inconclusive { index: i }),
        }
    }
    Ok(DiagPrecheck::Pass)
}

/// Decides whether `a` is nil. `bound` caps the number of iterations and is
/// required over infinite rings.
pub fn is_nil_element(a: &Element, bound: Option<usize>) -> Result<NilElementVerdict> {
    let algebra = a.algebra();
    if !algebra.ring().is_finite() && bound.is_none() {
        return Err(Error::NeedsBound("nil test"));
    }
    if bound == Some(0) {
        return Err(Error::ZeroBound);
    }
    Ok(nil_walk(algebra, a.coeffs(), bound))
}

pub(crate) fn nil_walk(algebra: &EvolutionAlgebra, alpha: &[RingValue], bound: Option<usize>) -> NilElementVerdict {
    if alpha.iter().all(RingValue::is_zero) {
        return NilElementVerdict::Nil { exponent: 1 };
    }
    let c_alpha = algebra.c_alpha_raw(alpha);
    let mut seen: HashMap<Vec<RingValue>, usize> = HashMap::new();
    let mut beta = alpha.to_vec();
    seen.insert(beta.clone(), 0);
    let mut k = 0;
    loop {
        if bound.is_some_and(|b| k >= b) {
            return NilElementVerdict::Unknown {
                bound: bound.unwrap_or(k),
            };
        }
        k += 1;
        beta = c_alpha.mul_vec_raw(&beta);
        if beta.iter().all(RingValue::is_zero) {
            return NilElementVerdict::Nil { exponent: k + 1 };
        }
        if let Some(&s) = seen.get(&beta) {
            return NilElementVerdict::NotNil { cycle: (s, k) };
        }
        seen.insert(beta.clone(), k);
    }
}

#[derive(Default)]
struct ChunkOutcome {
    witness: Option<(u64, (usize, usize))>,
    max_exponent: usize,
    checked: u64,
}

/// Decides whether every element of a finite-ring algebra is nil by running
/// the power walk on each `alpha in R^N`.
///
/// Candidates are enumerated little-endian (first coordinate fastest, each
/// coordinate in ring order), so the reported witness is the first non-nil
/// element in that order, with or without `parallel`.
pub fn is_nil_algebra(algebra: &EvolutionAlgebra, scan: &NilScan) -> Result<NilAlgebraVerdict> {
    let ring = algebra.ring();
    let card = ring.cardinality().ok_or(Error::InfiniteRing)?;
    let n = algebra.dimension();
    let size = num_traits::pow(card, n);
    let total = match size.to_u64() {
        Some(t) if t <= scan.cap => t,
        _ => return Ok(NilAlgebraVerdict::Skipped { size, cap: scan.cap }),
    };
    let digits = ring.enumerate_elements()?;
    let radix = digits.len() as u64;
    let decode = |mut idx: u64| -> Vec<RingValue> {
        (0..n)
            .map(|_| {
                let d = (idx % radix) as usize;
                idx /= radix;
                digits[d].clone()
            })
            .collect()
    };
    let scan_range = |start: u64, end: u64| -> ChunkOutcome {
        let mut out = ChunkOutcome::default();
        for idx in start..end {
            out.checked += 1;
            match nil_walk(algebra, &decode(idx), None) {
                NilElementVerdict::Nil { exponent } => out.max_exponent = out.max_exponent.max(exponent),
                NilElementVerdict::NotNil { cycle } => {
                    out.witness = Some((idx, cycle));
                    break;
                }
                NilElementVerdict::Unknown { .. } => unreachable!("finite walks terminate"),
            }
        }
        out
    };

    const CHUNK: u64 = 1024;
    let outcomes: Vec<ChunkOutcome> = if scan.parallel {
        let chunks = total.div_ceil(CHUNK);
        (0..chunks)
            .into_par_iter()
            .map(|c| scan_range(c * CHUNK, ((c + 1) * CHUNK).min(total)))
            .collect()
    } else {
        vec![scan_range(0, total)]
    };

    let mut max_exponent = 0;
    let mut checked = 0;
    for o in outcomes {
        checked += o.checked;
        max_exponent = max_exponent.max(o.max_exponent);
        if let Some((idx, cycle)) = o.witness {
            return Ok(NilAlgebraVerdict::NotNil {
                witness: algebra.element_unchecked(decode(idx)),
                cycle,
            });
        }
    }
    Ok(NilAlgebraVerdict::Nil { max_exponent, checked })
}

/// All coefficient vectors of `R^N` in scan order.
pub fn all_elements(algebra: &EvolutionAlgebra) -> Result<Vec<Element>> {
    let digits = algebra.ring().enumerate_elements()?;
    Ok(odometer(digits.len(), algebra.dimension())
        .map(|idx| algebra.element_unchecked(idx.iter().map(|&d| digits[d].clone()).collect()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infinite::StructureRule;
    use crate::ring::Ring;

    fn z36() -> Ring {
        Ring::modular(36).unwrap()
    }

    #[test]
    fn precheck_examples() {
        let a = EvolutionAlgebra::from_int_columns(&z36(), &[&[6, 2], &[3, 12]]).unwrap();
        assert_eq!(diag_nil_precheck(&a, 16).unwrap(), DiagPrecheck::Pass);
        let z = Ring::integers();
        let b = EvolutionAlgebra::from_int_columns(&z, &[&[1]]).unwrap();
        assert_eq!(
            diag_nil_precheck(&b, 16).unwrap(),
            DiagPrecheck::Fail {
                index: 0,
                value: z.one()
            }
        );
        let zero = EvolutionAlgebra::from_int_columns(&z, &[&[0, 0], &[0, 0]]).unwrap();
        assert_eq!(diag_nil_precheck(&zero, 16).unwrap(), DiagPrecheck::Pass);
    }

    #[test]
    fn nil_element_examples() {
        let b = EvolutionAlgebra::from_int_columns(&z36(), &[&[6, 2], &[2, 12]]).unwrap();
        let s = b.element_from_ints(&[1, 1]).unwrap();
        assert_eq!(
            is_nil_element(&s, None).unwrap(),
            NilElementVerdict::NotNil { cycle: (2, 8) }
        );
        assert_eq!(
            is_nil_element(&b.zero(), None).unwrap(),
            NilElementVerdict::Nil { exponent: 1 }
        );

        let r4 = Ring::modular(4).unwrap();
        let w = StructureRule::shift(&r4, r4.from_i64(2)).unwrap().window(2).unwrap();
        assert_eq!(
            is_nil_element(&w.basis(0), None).unwrap(),
            NilElementVerdict::Nil { exponent: 4 }
        );
    }

    #[test]
    fn infinite_rings_need_a_bound() {
        let z = Ring::integers();
        let a = EvolutionAlgebra::from_int_columns(&z, &[&[1]]).unwrap();
        assert_eq!(is_nil_element(&a.basis(0), None), Err(Error::NeedsBound("nil test")));
        // x1^2 = x1: the power state repeats immediately.
        assert_eq!(
            is_nil_element(&a.basis(0), Some(10)).unwrap(),
            NilElementVerdict::NotNil { cycle: (0, 1) }
        );
        let g = EvolutionAlgebra::from_int_columns(&z, &[&[2]]).unwrap();
        assert_eq!(
            is_nil_element(&g.basis(0), Some(10)).unwrap(),
            NilElementVerdict::Unknown { bound: 10 }
        );
    }

    #[test]
    fn nil_algebra_examples() {
        let b = EvolutionAlgebra::from_int_columns(&z36(), &[&[6, 2], &[2, 12]]).unwrap();
        match is_nil_algebra(&b, &NilScan::default()).unwrap() {
            NilAlgebraVerdict::NotNil { witness, .. } => assert_eq!(witness.to_string(), "x1+x2"),
            other => panic!("unexpected {other:?}"),
        }
        let r4 = Ring::modular(4).unwrap();
        let w = StructureRule::shift(&r4, r4.from_i64(2)).unwrap().window(2).unwrap();
        assert!(matches!(
            is_nil_algebra(&w, &NilScan::default()).unwrap(),
            NilAlgebraVerdict::Nil { checked: 16, .. }
        ));
        let zero = EvolutionAlgebra::from_int_columns(&r4, &[&[0]]).unwrap();
        assert_eq!(
            is_nil_algebra(&zero, &NilScan::default()).unwrap(),
            NilAlgebraVerdict::Nil {
                max_exponent: 2,
                checked: 4
            }
        );
    }

    #[test]
    fn nil_scan_caps_and_errors() {
        let b = EvolutionAlgebra::from_int_columns(&z36(), &[&[6, 2], &[2, 12]]).unwrap();
        let scan = NilScan {
            cap: 100,
            parallel: false,
        };
        assert!(matches!(
            is_nil_algebra(&b, &scan).unwrap(),
            NilAlgebraVerdict::Skipped { .. }
        ));
        let z = EvolutionAlgebra::from_int_columns(&Ring::integers(), &[&[0]]).unwrap();
        assert_eq!(is_nil_algebra(&z, &NilScan::default()), Err(Error::InfiniteRing));
    }

    #[test]
    fn parallel_scan_matches_sequential() {
        let b = EvolutionAlgebra::from_int_columns(&z36(), &[&[6, 2], &[2, 12]]).unwrap();
        let par = NilScan {
            parallel: true,
            ..NilScan::default()
        };
        assert_eq!(
            is_nil_algebra(&b, &par).unwrap(),
            is_nil_algebra(&b, &NilScan::default()).unwrap()
        );
        let r4 = Ring::modular(4).unwrap();
        let w = StructureRule::shift(&r4, r4.from_i64(2)).unwrap().window(3).unwrap();
        assert_eq!(
            is_nil_algebra(&w, &par).unwrap(),
            is_nil_algebra(&w, &NilScan::default()).unwrap()
        );
    }
}
