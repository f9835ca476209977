//! Strong nilpotency over fields.
//!
//! The associative algebra `L(A)` generated by the left multiplications
//! `L_{x_1}, ..., L_{x_N}` is nilpotent exactly when every word of length
//! `N` in those operators vanishes. Here `L(A)` is built as a vector space
//! and its power chain `L(A) ⊇ L(A)^2 ⊇ ...` is followed until it reaches
//! zero or stabilizes.

use crate::algebra::EvolutionAlgebra;
use crate::matrix::RingMatrix;
use crate::ring::{Ring, RingValue};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrongNilpotencyVerdict {
    /// `L(A)^associated_index = 0`; every product of `product_length`
    /// elements of `A`, in any bracketing, vanishes.
    StronglyNilpotent {
        associated_index: usize,
        product_length: usize,
    },
    /// The power chain stabilizes at a nonzero space. `word` (0-based
    /// generator indices) has a nonzero operator product.
    NotStronglyNilpotent {
        associated_dimension: usize,
        stable_dimension: usize,
        word: Vec<usize>,
    },
    /// The coefficient ring is not a field.
    Unsupported,
}

/// Row-echelon basis of a subspace of `F^d`, pivots normalized to one.
struct Span {
    ring: Ring,
    rows: Vec<(usize, Vec<RingValue>)>,
}

impl Span {
    fn new(ring: &Ring) -> Span {
        Span {
            ring: ring.clone(),
            rows: Vec::new(),
        }
    }

    /// Adds `v` to the span; false if it was already inside.
    fn insert(&mut self, v: &[RingValue]) -> bool {
        let ring = &self.ring;
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = ring.add_raw(x, &ring.neg_raw(&ring.mul_raw(&f, r)));
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = ring.inverse(&v[pivot]).expect("nonzero element of a field");
        for x in v.iter_mut() {
            *x = ring.mul_raw(x, &inv);
        }
        self.rows.push((pivot, v));
        true
    }
}

fn generators(algebra: &EvolutionAlgebra) -> Vec<RingMatrix> {
    (0..algebra.dimension())
        .map(|i| algebra.c_alpha_raw(algebra.basis(i).coeffs()))
        .collect()
}

/// Spanning set of the space generated by all products `p q`.
fn products_span(ring: &Ring, left: &[RingMatrix], right: &[RingMatrix]) -> Vec<RingMatrix> {
    let mut span = Span::new(ring);
    let mut out = Vec::new();
    for p in left {
        for q in right {
            let m = p.mul_raw(q);
            if span.insert(m.entries()) {
                out.push(m);
            }
        }
    }
    out
}

/// Basis of `L(A)`: closure of the generators under right multiplication.
fn associative_closure(ring: &Ring, gens: &[RingMatrix]) -> Vec<RingMatrix> {
    let mut span = Span::new(ring);
    let mut basis: Vec<RingMatrix> = Vec::new();
    for g in gens {
        if span.insert(g.entries()) {
            basis.push(g.clone());
        }
    }
    let mut idx = 0;
    while idx < basis.len() {
        let b = basis[idx].clone();
        for g in gens {
            let m = b.mul_raw(g);
            if span.insert(m.entries()) {
                basis.push(m);
            }
        }
        idx += 1;
    }
    basis
}

/// Operator product `L_{w_1} L_{w_2} ... L_{w_k}`; identity for the empty word.
pub fn word_product(algebra: &EvolutionAlgebra, word: &[usize]) -> RingMatrix {
    let gens = generators(algebra);
    let mut m = RingMatrix::identity(algebra.ring(), algebra.dimension());
    for &i in word {
        m = m.mul_raw(&gens[i]);
    }
    m
}

/// First word of length `len`, in lexicographic order, whose operator
/// product is nonzero. Zero prefixes are pruned.
pub fn nonzero_word(algebra: &EvolutionAlgebra, len: usize) -> Option<Vec<usize>> {
    let gens = generators(algebra);
    let n = gens.len();
    let identity = RingMatrix::identity(algebra.ring(), n);
    if len == 0 {
        return (n > 0).then(Vec::new);
    }
    let mut word: Vec<usize> = Vec::new();
    let mut prefixes = vec![identity];
    let mut next = 0usize;
    loop {
        if next == n {
            // Backtrack.
            let last = word.pop()?;
            prefixes.pop();
            next = last + 1;
            continue;
        }
        let m = prefixes.last().expect("nonempty").mul_raw(&gens[next]);
        if m.is_zero() {
            next += 1;
            continue;
        }
        word.push(next);
        if word.len() == len {
            return Some(word);
        }
        prefixes.push(m);
        next = 0;
    }
}

pub fn is_strongly_nilpotent(algebra: &EvolutionAlgebra) -> StrongNilpotencyVerdict {
    let ring = algebra.ring();
    if !ring.is_field() {
        return StrongNilpotencyVerdict::Unsupported;
    }
    let n = algebra.dimension();
    if n == 0 {
        return StrongNilpotencyVerdict::StronglyNilpotent {
            associated_index: 1,
            product_length: 1,
        };
    }
    let gens = generators(algebra);
    let l = associative_closure(ring, &gens);
    let mut power = l.clone();
    let mut m = 1usize;
    loop {
        if power.is_empty() {
            let product_length = 1usize
                .checked_shl((m - 1) as u32)
                .and_then(|p| p.checked_add(1))
                .unwrap_or(usize::MAX);
            return StrongNilpotencyVerdict::StronglyNilpotent {
                associated_index: m,
                product_length,
            };
        }
        let next = products_span(ring, &power, &l);
        if next.len() == power.len() {
            let word = nonzero_word(algebra, n).expect("non-nilpotent operator algebra has a nonzero word of length N");
            return StrongNilpotencyVerdict::NotStronglyNilpotent {
                associated_dimension: l.len(),
                stable_dimension: power.len(),
                word,
            };
        }
        power = next;
        m += 1;
    }
}
