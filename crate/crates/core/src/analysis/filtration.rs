//! Generator filtration and strict upper triangularization.
//!
//! Layer 1 holds the generators with `x_i^2 = 0`; each further layer holds
//! the generators whose squares lie in the span of earlier layers. Listing
//! the layers in order makes the structure matrix strictly upper triangular.

use std::collections::BTreeSet;

use crate::algebra::EvolutionAlgebra;
use crate::analysis::nilpotent::{is_nilpotent, NilpotencyOptions, NilpotencyVerdict};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    /// 0-based generator indices, ascending within each layer.
    pub layers: Vec<Vec<usize>>,
    /// Generators never reached.
    pub residue: Vec<usize>,
}

impl Filtration {
    pub fn is_complete(&self) -> bool {
        self.residue.is_empty()
    }

    /// Generators listed layer by layer; `None` unless complete.
    pub fn permutation(&self) -> Option<Vec<usize>> {
        self.is_complete().then(|| self.layers.concat())
    }
}

pub fn compute_filtration(algebra: &EvolutionAlgebra) -> Filtration {
    let n = algebra.dimension();
    let mut placed = vec![false; n];
    let mut layers = Vec::new();
    loop {
        let layer: Vec<usize> = (0..n)
            .filter(|&i| !placed[i] && (0..n).all(|k| algebra.coefficient(k, i).is_zero() || placed[k]))
            .collect();
        if layer.is_empty() {
            break;
        }
        for &i in &layer {
            placed[i] = true;
        }
        layers.push(layer);
    }
    let residue = (0..n).filter(|&i| !placed[i]).collect();
    Filtration { layers, residue }
}

/// A reordering of the generators under which the structure matrix is
/// strictly upper triangular, if one exists.
pub fn strict_upper_permutation(algebra: &EvolutionAlgebra) -> Option<Vec<usize>> {
    compute_filtration(algebra).permutation()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientCheck {
    /// 0-based indices of the first filtration layer.
    pub ideal: Vec<usize>,
    pub algebra_nilpotent: Option<bool>,
    pub quotient_nilpotent: Option<bool>,
}

impl QuotientCheck {
    /// `A` and `A / <layer 1>` agree on nilpotency whenever both are decided.
    pub fn consistent(&self) -> bool {
        match (self.algebra_nilpotent, self.quotient_nilpotent) {
            (Some(a), Some(q)) => a == q,
            _ => true,
        }
    }
}

/// Compares the nilpotency of `A` with that of its quotient by the span of
/// the generators with zero square. `None` when that span is trivial.
pub fn quotient_reduction_check(algebra: &EvolutionAlgebra, opts: &NilpotencyOptions) -> Result<Option<QuotientCheck>> {
    let filtration = compute_filtration(algebra);
    let Some(first) = filtration.layers.first() else {
        return Ok(None);
    };
    let ideal: BTreeSet<usize> = first.iter().copied().collect();
    let quotient = algebra.quotient_by_basis_ideal(&ideal)?;
    let decided = |v: NilpotencyVerdict| v.is_nilpotent();
    Ok(Some(QuotientCheck {
        ideal: first.clone(),
        algebra_nilpotent: decided(is_nilpotent(algebra, opts)?),
        quotient_nilpotent: decided(is_nilpotent(&quotient, opts)?),
    }))
}
