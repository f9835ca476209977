//! Nilpotency of evolution algebras.
//!
//! `A^n = (0)` exactly when every product `c_{i_n i_(n-1)} ... c_{i_2 i_1}`
//! of `n - 1` structure coefficients along an index path vanishes. Sums of
//! such products play no role, so powers of `C` cannot decide the question
//! over rings with zero divisors.
//!
//! The finite-ring procedure is a level dynamic program over the sets
//! `S_l = {(k, v)}` of endpoints `k` and nonzero products `v` of length-`l`
//! paths. The first empty level gives the exact exponent. Non-nilpotency
//! is certified by a pumping path: a path that returns to the same index
//! with the same partial product, so the loop can be repeated forever.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::algebra::EvolutionAlgebra;
use crate::analysis::filtration::compute_filtration;
use crate::error::{Error, Result};
use crate::ring::RingValue;

/// Default number of DP levels explored when looking for the repeat of a
/// level state after non-nilpotency is already established.
pub const DEFAULT_DP_CYCLE_CAP: usize = 4096;

#[derive(Clone, Copy, Debug)]
pub struct NilpotencyOptions {
    /// Level bound for infinite rings that are not domains.
    pub bound: Option<usize>,
    pub dp_cycle_cap: usize,
}

impl Default for NilpotencyOptions {
    fn default() -> Self {
        NilpotencyOptions {
            bound: None,
            dp_cycle_cap: DEFAULT_DP_CYCLE_CAP,
        }
    }
}

/// An index path `i_1 -> ... -> i_m` and its coefficient product
/// `c_{i_m i_(m-1)} ... c_{i_2 i_1}`. Indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathProduct {
    pub path: Vec<usize>,
    pub product: RingValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// The partial products at `cycle_start` and at the end are equal.
    RepeatedValue,
    /// All factors are nonzero and the ring is a domain.
    DomainCycle,
}

/// A path whose tail `path[cycle_start..]` is a closed loop that can be
/// repeated indefinitely without the product becoming zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PumpingWitness {
    pub path: Vec<usize>,
    pub cycle_start: usize,
    pub product: RingValue,
    pub kind: WitnessKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NilpotencyVerdict {
    /// `A^exponent = (0)`; `minimality` is a nonzero path product with
    /// `exponent - 2` factors, present when `exponent > 2`.
    Nilpotent {
        exponent: usize,
        minimality: Option<PathProduct>,
    },
    /// `dp_cycle = (s, l)`: DP levels `s < l` with identical states.
    NotNilpotent {
        witness: PumpingWitness,
        dp_cycle: Option<(usize, usize)>,
    },
    Unknown {
        bound: usize,
    },
}

impl NilpotencyVerdict {
    pub fn is_nilpotent(&self) -> Option<bool> {
        match self {
            NilpotencyVerdict::Nilpotent { .. } => Some(true),
            NilpotencyVerdict::NotNilpotent { .. } => Some(false),
            NilpotencyVerdict::Unknown { .. } => None,
        }
    }

    pub fn exponent(&self) -> Option<usize> {
        match self {
            NilpotencyVerdict::Nilpotent { exponent, .. } => Some(*exponent),
            _ => None,
        }
    }
}

/// Prefix products along `path`: entry `q` is the product of the first `q`
/// factors, entry 0 is one.
pub fn partial_products(algebra: &EvolutionAlgebra, path: &[usize]) -> Vec<RingValue> {
    let ring = algebra.ring();
    let mut out = vec![ring.one()];
    for w in path.windows(2) {
        let last = out.last().expect("nonempty");
        out.push(ring.mul_raw(algebra.coefficient(w[1], w[0]), last));
    }
    out
}

pub fn path_product(algebra: &EvolutionAlgebra, path: &[usize]) -> RingValue {
    partial_products(algebra, path).pop().expect("nonempty")
}

impl PumpingWitness {
    /// Re-derives the witness from the structure matrix.
    pub fn verify(&self, algebra: &EvolutionAlgebra) -> bool {
        let n = algebra.dimension();
        let p = &self.path;
        if p.len() < 2 || p.iter().any(|&i| i >= n) {
            return false;
        }
        let last = p.len() - 1;
        if self.cycle_start >= last || p[self.cycle_start] != p[last] {
            return false;
        }
        let partial = partial_products(algebra, p);
        if partial.iter().any(RingValue::is_zero) || partial[last] != self.product {
            return false;
        }
        match self.kind {
            WitnessKind::RepeatedValue => self.cycle_start >= 1 && partial[self.cycle_start] == partial[last],
            WitnessKind::DomainCycle => algebra.ring().is_domain(),
        }
    }
}

type Node = (usize, RingValue);

enum DpOutcome {
    Empty { exponent: usize },
    Repeat { first: usize, again: usize },
    Exhausted,
}

fn nonzero_edges(algebra: &EvolutionAlgebra, from: usize) -> impl Iterator<Item = (usize, &RingValue)> + '_ {
    (0..algebra.dimension()).filter_map(move |k| {
        let c = algebra.coefficient(k, from);
        (!c.is_zero()).then_some((k, c))
    })
}

/// Level DP over the sets `S_l` of `(endpoint, product)` pairs of nonzero
/// `l`-factor products. The first empty level `L` gives `A^(L+1) = 0`.
fn level_dp(algebra: &EvolutionAlgebra, max_levels: Option<usize>) -> DpOutcome {
    let ring = algebra.ring();
    let n = algebra.dimension();
    let mut current: BTreeSet<Node> = BTreeSet::new();
    for i in 0..n {
        for (k, c) in nonzero_edges(algebra, i) {
            current.insert((k, c.clone()));
        }
    }
    let mut seen_states: HashMap<BTreeSet<Node>, usize> = HashMap::new();
    let mut level = 1;
    loop {
        if current.is_empty() {
            return DpOutcome::Empty { exponent: level + 1 };
        }
        if let Some(&s) = seen_states.get(&current) {
            return DpOutcome::Repeat { first: s, again: level };
        }
        if max_levels.is_some_and(|m| level >= m) {
            return DpOutcome::Exhausted;
        }
        let mut next = BTreeSet::new();
        for (k, v) in &current {
            for (j, c) in nonzero_edges(algebra, *k) {
                let w = ring.mul_raw(c, v);
                if !w.is_zero() {
                    next.insert((j, w));
                }
            }
        }
        seen_states.insert(std::mem::replace(&mut current, next), level);
        level += 1;
    }
}

/// Lexicographically first index path with `length` factors and a nonzero
/// product. States `(depth, index, partial product)` that cannot be
/// completed are remembered, so the search visits each state once.
fn lex_first_path(algebra: &EvolutionAlgebra, length: usize) -> Option<PathProduct> {
    fn extend(
        algebra: &EvolutionAlgebra,
        length: usize,
        path: &mut Vec<usize>,
        value: &RingValue,
        dead: &mut HashSet<(usize, usize, RingValue)>,
    ) -> Option<RingValue> {
        let depth = path.len() - 1;
        if depth == length {
            return Some(value.clone());
        }
        let at = *path.last().expect("nonempty");
        let key = (depth, at, value.clone());
        if dead.contains(&key) {
            return None;
        }
        for (j, c) in nonzero_edges(algebra, at) {
            let w = algebra.ring().mul_raw(c, value);
            if w.is_zero() {
                continue;
            }
            path.push(j);
            if let Some(p) = extend(algebra, length, path, &w, dead) {
                return Some(p);
            }
            path.pop();
        }
        dead.insert(key);
        None
    }
    let one = algebra.ring().one();
    let mut dead = HashSet::new();
    for i in 0..algebra.dimension() {
        let mut path = vec![i];
        if let Some(product) = extend(algebra, length, &mut path, &one, &mut dead) {
            return Some(PathProduct { path, product });
        }
    }
    None
}

fn nilpotent_with_witness(algebra: &EvolutionAlgebra, exponent: usize) -> Result<NilpotencyVerdict> {
    let minimality = if exponent > 2 {
        let m = lex_first_path(algebra, exponent - 2)
            .ok_or_else(|| Error::Invariant(format!("no nonzero product with {} factors", exponent - 2)))?;
        Some(m)
    } else {
        None
    };
    Ok(NilpotencyVerdict::Nilpotent { exponent, minimality })
}

#[derive(Clone, Copy)]
enum Mark {
    OnStack(usize),
    Done,
}

/// Depth-first search for a cycle in the graph on nodes `(k, v)`, `v != 0`,
/// with edges `(k, v) -> (j, c_{jk} v)`. Terminates whenever the set of
/// reachable nodes is finite.
fn find_lasso(algebra: &EvolutionAlgebra) -> Option<PumpingWitness> {
    let ring = algebra.ring();
    let n = algebra.dimension();
    let mut marks: HashMap<Node, Mark> = HashMap::new();
    for i in 0..n {
        for (k, c) in nonzero_edges(algebra, i) {
            let root = (k, c.clone());
            if marks.contains_key(&root) {
                continue;
            }
            marks.insert(root.clone(), Mark::OnStack(0));
            let mut stack: Vec<(Node, usize)> = vec![(root, 0)];
            while let Some((node, next)) = stack.last().cloned() {
                if next == n {
                    marks.insert(node, Mark::Done);
                    stack.pop();
                    continue;
                }
                stack.last_mut().expect("nonempty").1 += 1;
                let c = algebra.coefficient(next, node.0);
                if c.is_zero() {
                    continue;
                }
                let w = ring.mul_raw(c, &node.1);
                if w.is_zero() {
                    continue;
                }
                let child = (next, w);
                match marks.get(&child) {
                    Some(Mark::OnStack(pos)) => {
                        let mut path = vec![i];
                        path.extend(stack.iter().map(|(nd, _)| nd.0));
                        path.push(child.0);
                        return Some(PumpingWitness {
                            path,
                            cycle_start: pos + 1,
                            product: child.1,
                            kind: WitnessKind::RepeatedValue,
                        });
                    }
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(child.clone(), Mark::OnStack(stack.len()));
                        stack.push((child, 0));
                    }
                }
            }
        }
    }
    None
}

/// Over a domain, `A` is nilpotent exactly when the filtration is complete;
/// the exponent is two more than the longest path of nonzero entries.
fn domain_decision(algebra: &EvolutionAlgebra) -> NilpotencyVerdict {
    let n = algebra.dimension();
    let filtration = compute_filtration(algebra);
    if let Some(order) = filtration.permutation() {
        // Edges from x_i lead to generators in strictly earlier layers.
        let mut longest = vec![0usize; n];
        let mut next: Vec<Option<usize>> = vec![None; n];
        for &i in &order {
            for (k, _) in nonzero_edges(algebra, i) {
                if longest[k] + 1 > longest[i] {
                    longest[i] = longest[k] + 1;
                    next[i] = Some(k);
                }
            }
        }
        let start = (0..n)
            .max_by_key(|&i| (longest[i], std::cmp::Reverse(i)))
            .expect("n >= 1");
        let max_len = longest[start];
        let minimality = (max_len >= 1).then(|| {
            let mut path = vec![start];
            while let Some(k) = next[*path.last().expect("nonempty")] {
                path.push(k);
            }
            let product = path_product(algebra, &path);
            PathProduct { path, product }
        });
        return NilpotencyVerdict::Nilpotent {
            exponent: max_len + 2,
            minimality,
        };
    }
    // Every residue generator squares onto some residue generator.
    let residue = &filtration.residue;
    let mut walk = vec![residue[0]];
    let mut position = HashMap::from([(residue[0], 0usize)]);
    loop {
        let cur = *walk.last().expect("nonempty");
        let k = nonzero_edges(algebra, cur)
            .map(|(k, _)| k)
            .find(|k| residue.contains(k))
            .expect("residue generators square into the residue");
        walk.push(k);
        if let Some(&start) = position.get(&k) {
            let product = path_product(algebra, &walk);
            return NilpotencyVerdict::NotNilpotent {
                witness: PumpingWitness {
                    path: walk,
                    cycle_start: start,
                    product,
                    kind: WitnessKind::DomainCycle,
                },
                dp_cycle: None,
            };
        }
        position.insert(k, walk.len() - 1);
    }
}

/// Decides whether `A^n = (0)` for some `n`, with the minimal exponent.
///
/// * finite rings: always decided;
/// * domains: decided by the strict-upper-triangular criterion;
/// * other infinite rings: the level DP runs for at most `opts.bound`
///   levels and reports `Unknown` past it.
pub fn is_nilpotent(algebra: &EvolutionAlgebra, opts: &NilpotencyOptions) -> Result<NilpotencyVerdict> {
    if algebra.dimension() == 0 {
        return Ok(NilpotencyVerdict::Nilpotent {
            exponent: 1,
            minimality: None,
        });
    }
    let ring = algebra.ring();
    if ring.is_finite() {
        if let Some(witness) = find_lasso(algebra) {
            let dp_cycle = match level_dp(algebra, Some(opts.dp_cycle_cap)) {
                DpOutcome::Repeat { first, again } => Some((first, again)),
                DpOutcome::Exhausted => None,
                DpOutcome::Empty { .. } => {
                    return Err(Error::Invariant("pumping witness found for a nilpotent algebra".into()))
                }
            };
            return Ok(NilpotencyVerdict::NotNilpotent { witness, dp_cycle });
        }
        return match level_dp(algebra, None) {
            DpOutcome::Empty { exponent } => nilpotent_with_witness(algebra, exponent),
            _ => Err(Error::Invariant(
                "acyclic state graph produced a repeating DP level".into(),
            )),
        };
    }
    if ring.is_domain() {
        return Ok(domain_decision(algebra));
    }
    let bound = opts.bound.ok_or(Error::NeedsBound("nilpotency test"))?;
    if bound == 0 {
        return Err(Error::ZeroBound);
    }
    match level_dp(algebra, Some(bound)) {
        DpOutcome::Empty { exponent } => nilpotent_with_witness(algebra, exponent),
        DpOutcome::Repeat { first, again } => {
            // A repeated level means the reachable node set is finite.
            let witness = find_lasso(algebra)
                .ok_or_else(|| Error::Invariant("repeating DP level without a reachable cycle".into()))?;
            Ok(NilpotencyVerdict::NotNilpotent {
                witness,
                dp_cycle: Some((first, again)),
            })
        }
        DpOutcome::Exhausted => Ok(NilpotencyVerdict::Unknown { bound }),
    }
}
