//! Brute-force reference procedures.
//!
//! These enumerate definitions directly and are meant for cross-checking
//! the decision procedures on small inputs.

use std::collections::HashMap;

use crate::algebra::{Element, EvolutionAlgebra};
use crate::analysis::nil::NilElementVerdict;
use crate::analysis::nilpotent::PathProduct;
use crate::error::{Error, Result};
use crate::ring::{odometer, RingValue};

/// Default limit on `N^(L+1)`, the number of index paths with `L` factors.
pub const DEFAULT_PATH_GUARD: u64 = 10_000_000;
/// Default longest product checked over all bracketings.
pub const DEFAULT_PARENTHESIZED_MAX: usize = 6;

fn path_work(n: usize, length: usize, guard: u64) -> Result<()> {
    let work = (n as u64).checked_pow(length as u32 + 1);
    match work {
        Some(w) if w <= guard => Ok(()),
        _ => Err(Error::GuardExceeded {
            work: format!("{n}^{}", length + 1),
            guard,
        }),
    }
}

/// Every nonzero product of `length` structure coefficients along an index
/// path, in lexicographic path order.
pub fn brute_force_path_products(algebra: &EvolutionAlgebra, length: usize, guard: u64) -> Result<Vec<PathProduct>> {
    let mut out = Vec::new();
    walk_paths(algebra, length, guard, &mut |p| {
        out.push(p);
        true
    })?;
    Ok(out)
}

/// The first nonzero product of `length` factors, if any.
pub fn exists_nonzero_path(algebra: &EvolutionAlgebra, length: usize, guard: u64) -> Result<Option<PathProduct>> {
    let mut found = None;
    walk_paths(algebra, length, guard, &mut |p| {
        found = Some(p);
        false
    })?;
    Ok(found)
}

fn walk_paths(
    algebra: &EvolutionAlgebra,
    length: usize,
    guard: u64,
    visit: &mut dyn FnMut(PathProduct) -> bool,
) -> Result<()> {
    if length == 0 {
        return Err(Error::ZeroExponent);
    }
    let n = algebra.dimension();
    path_work(n, length, guard)?;
    let ring = algebra.ring();
    let mut path = Vec::with_capacity(length + 1);
    let mut prefix = vec![ring.one()];
    for start in 0..n {
        path.clear();
        path.push(start);
        prefix.truncate(1);
        // Iterative DFS: `path` holds the current prefix, the last entry is
        // the next candidate index at that depth.
        let mut candidate = 0usize;
        loop {
            if candidate == n {
                if path.len() == 1 {
                    break;
                }
                let last = path.pop().expect("nonempty");
                prefix.pop();
                candidate = last + 1;
                continue;
            }
            let from = *path.last().expect("nonempty");
            let v = ring.mul_raw(algebra.coefficient(candidate, from), prefix.last().expect("nonempty"));
            if v.is_zero() {
                candidate += 1;
                continue;
            }
            if path.len() == length {
                let mut full = path.clone();
                full.push(candidate);
                if !visit(PathProduct { path: full, product: v }) {
                    return Ok(());
                }
                candidate += 1;
                continue;
            }
            path.push(candidate);
            prefix.push(v);
            candidate = 0;
        }
    }
    Ok(())
}

/// Principal powers `a, a^2, a^3, ...` by repeated multiplication, with
/// repeats detected by hashing. Indices in the result follow the
/// `beta_k = a^(k+1)` convention of [`crate::analysis::is_nil_element`].
pub fn naive_nil_element(a: &Element, max_iter: Option<usize>) -> Result<NilElementVerdict> {
    let algebra = a.algebra();
    let finite = algebra.ring().is_finite();
    if !finite && max_iter.is_none() {
        return Err(Error::NeedsBound("nil test"));
    }
    let mut seen: HashMap<Vec<RingValue>, usize> = HashMap::new();
    let mut power = a.clone();
    let mut k = 0usize;
    loop {
        if power.is_zero() {
            return Ok(NilElementVerdict::Nil { exponent: k + 1 });
        }
        if let Some(&s) = seen.get(power.coeffs()) {
            return Ok(NilElementVerdict::NotNil { cycle: (s, k) });
        }
        if let Some(b) = max_iter {
            if k >= b {
                return Ok(NilElementVerdict::Unknown { bound: b });
            }
        }
        seen.insert(power.coeffs().to_vec(), k);
        power = algebra.multiply(&power, a)?;
        k += 1;
    }
}

/// Checks that every product of `n` elements drawn from `sample`, under
/// every bracketing, is zero. Returns the first offending tuple otherwise.
pub fn brute_force_parenthesized_products(
    sample: &[Element],
    n: usize,
    max_len: usize,
) -> Result<Option<Vec<Element>>> {
    if n == 0 {
        return Err(Error::ZeroExponent);
    }
    if n > max_len {
        return Err(Error::GuardExceeded {
            work: format!("products of length {n}"),
            guard: max_len as u64,
        });
    }
    let Some(first) = sample.first() else { return Ok(None) };
    let algebra = first.algebra().clone();
    for digits in odometer(sample.len(), n) {
        let tuple: Vec<&Element> = digits.iter().map(|&d| &sample[d]).collect();
        let mut memo = HashMap::new();
        let products = bracketings(&algebra, &tuple, 0, n, &mut memo)?;
        if products.iter().any(|p| !p.is_zero()) {
            return Ok(Some(tuple.into_iter().cloned().collect()));
        }
    }
    Ok(None)
}

fn bracketings(
    algebra: &EvolutionAlgebra,
    tuple: &[&Element],
    lo: usize,
    hi: usize,
    memo: &mut HashMap<(usize, usize), Vec<Element>>,
) -> Result<Vec<Element>> {
    if hi - lo == 1 {
        return Ok(vec![tuple[lo].clone()]);
    }
    if let Some(v) = memo.get(&(lo, hi)) {
        return Ok(v.clone());
    }
    let mut out = Vec::new();
    for mid in lo + 1..hi {
        let left = bracketings(algebra, tuple, lo, mid, memo)?;
        let right = bracketings(algebra, tuple, mid, hi, memo)?;
        for l in &left {
            for r in &right {
                let p = algebra.multiply(l, r)?;
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
    }
    memo.insert((lo, hi), out.clone());
    Ok(out)
}
