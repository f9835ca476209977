//! Re-checking reports against their job.
//!
//! Every verdict is re-derived from the structure constants: exponent
//! claims by enumerating index paths one and two steps below the exponent,
//! pumping witnesses by re-multiplying their coefficients, nil witnesses by
//! re-iterating powers with plain multiplication.

use std::collections::BTreeSet;

use evolia_core::analysis::oracle::{exists_nonzero_path, naive_nil_element};
use evolia_core::analysis::{
    all_elements, compute_filtration, is_nilpotent, is_strongly_nilpotent, nonzero_word, path_product, word_product,
    NilElementVerdict, NilpotencyOptions, NilpotencyVerdict, PumpingWitness, WitnessKind,
};
use evolia_core::{Element, EvolutionAlgebra, RingValue, SparseElement, StructureRule};
use num_traits::ToPrimitive;

use crate::error::CliError;
use crate::job::{
    encode_element, encode_sparse, parse_element, parse_sparse, Analysis, JobSpec, Mode, PowerKind, SCHEMA_VERSION,
};
use crate::report::{AnalysisEntry, PathCert, PumpCert, PumpKind, Report, Verdict};
use crate::run::{decode, one_based, run_analysis, strong_verdict};

/// Outcome of [`verify_report`]; empty `failures` means every certificate
/// re-verified.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verification {
    pub failures: Vec<String>,
}

impl Verification {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn verify_certificate(report: &Report, job: &JobSpec) -> Result<bool, CliError> {
    Ok(verify_report(report, job)?.is_valid())
}

pub fn verify_report(report: &Report, job: &JobSpec) -> Result<Verification, CliError> {
    if report.v != SCHEMA_VERSION {
        return Err(CliError::Version(report.v));
    }
    if report.algebra_hash != job.algebra_hash() {
        return Err(CliError::HashMismatch);
    }
    let mut out = Verification::default();
    let mut fail = |msg: String| out.failures.push(msg);
    if &report.ring != job.ring.descriptor() {
        fail("ring descriptor differs from the job".into());
    }
    if report.mode != job.mode_name() {
        fail(format!("mode {:?} differs from the job", report.mode));
    }
    if report.dimension != job.finite_algebra().map(EvolutionAlgebra::dimension) {
        fail("dimension differs from the job".into());
    }
    if report.window != job.window() {
        fail("window differs from the job".into());
    }
    let claimed: Vec<Analysis> = report.results.iter().map(|e| e.analysis).collect();
    if claimed != job.analyses {
        fail(format!("analyses {claimed:?} differ from the job's {:?}", job.analyses));
    }
    for entry in &report.results {
        if let Err(msg) = verify_entry(entry, job) {
            fail(format!("{}: {msg}", entry.analysis));
        }
    }
    Ok(out)
}

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verify_entry(entry: &AnalysisEntry, job: &JobSpec) -> Check {
    match (&entry.result, &entry.error) {
        (Some(v), None) => {
            ensure(!entry.invariant, || "result entry marked as invariant failure".into())?;
            verify_verdict(entry.analysis, v, job)
        }
        (None, Some(msg)) => match run_analysis(job, entry.analysis) {
            Err(e) if &e.to_string() == msg && entry.invariant == (e.exit_code() == 2) => Ok(()),
            Err(e) => Err(format!("recorded error {msg:?}, rerun gives {:?}", e.to_string())),
            Ok(_) => Err(format!("recorded error {msg:?}, but the analysis succeeds")),
        },
        _ => Err("entry must carry exactly one of result and error".into()),
    }
}

fn finite(job: &JobSpec) -> Result<&EvolutionAlgebra, String> {
    job.finite_algebra()
        .ok_or_else(|| "no finite algebra in job".to_string())
}

fn verify_verdict(analysis: Analysis, v: &Verdict, job: &JobSpec) -> Check {
    match (analysis, v) {
        (Analysis::Nilpotent, Verdict::Nilpotent { exponent, minimality }) => {
            check_exponent(finite(job)?, *exponent, minimality.as_ref(), job.options.path_guard)
        }
        (Analysis::Nilpotent, Verdict::NotNilpotent { witness, dp_cycle }) => {
            let algebra = finite(job)?;
            check_pump(algebra, witness)?;
            match dp_cycle {
                Some([s, l]) => check_dp_cycle(
                    algebra,
                    *s,
                    *l,
                    job.options.dp_cycle_cap.max(job.options.bound.unwrap_or(0)),
                ),
                None => Ok(()),
            }
        }
        (Analysis::Nilpotent, Verdict::NilpotencyUnknown { bound }) => {
            let algebra = finite(job)?;
            ensure(job.options.bound == Some(*bound), || {
                "bound differs from the job".into()
            })?;
            let opts = NilpotencyOptions {
                bound: job.options.bound,
                dp_cycle_cap: job.options.dp_cycle_cap,
            };
            match is_nilpotent(algebra, &opts) {
                Ok(NilpotencyVerdict::Unknown { .. }) => Ok(()),
                other => Err(format!("rerun gives {other:?}")),
            }
        }
        (Analysis::Nil, Verdict::Nil { max_exponent, checked }) => {
            check_nil(finite(job)?, *max_exponent, *checked, job.options.cap)
        }
        (
            Analysis::Nil,
            Verdict::NotNil {
                witness,
                witness_text,
                cycle,
            },
        ) => {
            let algebra = finite(job)?;
            let a = parse_element(algebra, witness).map_err(|e| e.to_string())?;
            ensure(&a.to_string() == witness_text, || {
                format!("witness text {witness_text:?} does not match {a}")
            })?;
            check_power_cycle(&a, cycle[0], cycle[1], job.options.cap)
        }
        (Analysis::Nil, Verdict::NilSkipped { size, cap }) => {
            let algebra = finite(job)?;
            ensure(*cap == job.options.cap, || "cap differs from the job".into())?;
            let card = algebra.ring().cardinality().ok_or("nil scan needs a finite ring")?;
            let expected = num_traits::pow(card, algebra.dimension());
            ensure(&expected.to_string() == size, || {
                format!("element count is {expected}, not {size}")
            })?;
            ensure(expected.to_u64().is_none_or(|s| s > *cap), || {
                "element count is within the cap".into()
            })
        }
        (
            Analysis::StronglyNilpotent,
            v @ (Verdict::StronglyNilpotent { .. } | Verdict::NotStronglyNilpotent { .. } | Verdict::StrongUnsupported),
        ) => check_strong(finite(job)?, v),
        (
            Analysis::Filtration,
            Verdict::Filtration {
                complete,
                layers,
                residue,
                permutation,
            },
        ) => check_filtration(finite(job)?, *complete, layers, residue, permutation.as_deref()),
        (
            Analysis::ElementPower,
            Verdict::Power {
                kind,
                exponent,
                element,
                element_text,
                result,
                result_text,
                nil_exponent,
            },
        ) => {
            ensure(
                Some(*exponent) == job.options.power && *kind == job.options.power_kind,
                || "power parameters differ from the job".into(),
            )?;
            ensure(
                job.options.element.as_ref() == Some(element) || decoded_equal(job, element),
                || "element differs from the job".into(),
            )?;
            check_power(job, *kind, *exponent, element_text, result, result_text, *nil_exponent)
        }
        (a, v) => Err(format!("verdict {v:?} does not belong to analysis {a}")),
    }
}

/// True when `element` encodes the same element as the job payload.
fn decoded_equal(job: &JobSpec, element: &serde_json::Value) -> bool {
    let Some(payload) = &job.options.element else {
        return false;
    };
    match &job.mode {
        Mode::Finite { algebra } => match (parse_element(algebra, payload), parse_element(algebra, element)) {
            (Ok(a), Ok(b)) => a == b && encode_element(&a) == *element,
            _ => false,
        },
        Mode::Shift { rule, .. } => match (parse_sparse(rule, payload), parse_sparse(rule, element)) {
            (Ok(a), Ok(b)) => a == b && encode_sparse(&a) == *element,
            _ => false,
        },
    }
}

fn zero_based(path: &[usize], n: usize) -> Result<Vec<usize>, String> {
    path.iter()
        .map(|&i| {
            if i >= 1 && i <= n {
                Ok(i - 1)
            } else {
                Err(format!("index {i} out of range 1..={n}"))
            }
        })
        .collect()
}

/// `A^exponent = 0` and, for `exponent > 2`, `A^(exponent-1) != 0`.
fn check_exponent(algebra: &EvolutionAlgebra, exponent: usize, minimality: Option<&PathCert>, guard: u64) -> Check {
    let n = algebra.dimension();
    if n == 0 {
        return ensure(exponent == 1 && minimality.is_none(), || {
            "0-dimensional algebras have exponent 1".into()
        });
    }
    ensure(exponent >= 2, || {
        format!("exponent {exponent} is impossible for a nonzero algebra")
    })?;
    let above = exists_nonzero_path(algebra, exponent - 1, guard).map_err(|e| e.to_string())?;
    if let Some(p) = above {
        return Err(format!(
            "path {:?} has nonzero product {} with {} factors",
            one_based(&p.path),
            p.product,
            exponent - 1
        ));
    }
    if exponent == 2 {
        return ensure(minimality.is_none(), || {
            "no minimality path exists for exponent 2".into()
        });
    }
    let below = exists_nonzero_path(algebra, exponent - 2, guard).map_err(|e| e.to_string())?;
    ensure(below.is_some(), || {
        format!("every product of {} factors vanishes", exponent - 2)
    })?;
    let cert = minimality.ok_or("missing minimality path")?;
    let path = zero_based(&cert.path, n)?;
    ensure(path.len() == exponent - 1, || {
        format!("minimality path has {} indices", path.len())
    })?;
    let product = decode(algebra.ring(), &cert.product, "minimality.product").map_err(|e| e.to_string())?;
    let actual = path_product(algebra, &path);
    ensure(actual == product && !actual.is_zero(), || {
        format!("minimality product is {actual}, not a nonzero {product}")
    })
}

fn check_pump(algebra: &EvolutionAlgebra, cert: &PumpCert) -> Check {
    let path = zero_based(&cert.path, algebra.dimension())?;
    let product = decode(algebra.ring(), &cert.product, "witness.product").map_err(|e| e.to_string())?;
    let witness = PumpingWitness {
        path,
        cycle_start: cert.cycle_start,
        product,
        kind: match cert.kind {
            PumpKind::RepeatedValue => WitnessKind::RepeatedValue,
            PumpKind::DomainCycle => WitnessKind::DomainCycle,
        },
    };
    ensure(witness.verify(algebra), || "pumping witness does not re-verify".into())
}

/// Level sets of `(endpoint, product)` pairs, computed from scratch.
fn check_dp_cycle(algebra: &EvolutionAlgebra, s: usize, l: usize, limit: usize) -> Check {
    ensure(1 <= s && s < l && l <= limit.max(1), || {
        format!("DP cycle [{s}, {l}] out of range")
    })?;
    let ring = algebra.ring();
    let n = algebra.dimension();
    let mut level: BTreeSet<(usize, RingValue)> = (0..n)
        .flat_map(|i| (0..n).map(move |k| (k, i)))
        .map(|(k, i)| (k, algebra.coefficient(k, i).clone()))
        .filter(|(_, v)| !v.is_zero())
        .collect();
    let mut at_s = None;
    for depth in 1..=l {
        ensure(!level.is_empty(), || format!("level {depth} is empty"))?;
        if depth == s {
            at_s = Some(level.clone());
        }
        if depth == l {
            break;
        }
        level = level
            .iter()
            .flat_map(|(k, v)| (0..n).map(move |j| (j, ring.mul(algebra.coefficient(j, *k), v).expect("same ring"))))
            .filter(|(_, w)| !w.is_zero())
            .collect();
    }
    ensure(at_s.as_ref() == Some(&level), || {
        format!("DP levels {s} and {l} differ")
    })
}

fn check_nil(algebra: &EvolutionAlgebra, max_exponent: usize, checked: u64, cap: u64) -> Check {
    let card = algebra.ring().cardinality().ok_or("nil scan needs a finite ring")?;
    let size = num_traits::pow(card, algebra.dimension());
    ensure(size.to_u64().is_some_and(|s| s <= cap), || {
        format!("{size} elements exceed the cap {cap}")
    })?;
    let elements = all_elements(algebra).map_err(|e| e.to_string())?;
    ensure(elements.len() as u64 == checked, || {
        format!("{} elements, not {checked}", elements.len())
    })?;
    let mut max = 0;
    for a in &elements {
        match naive_nil_element(a, None).map_err(|e| e.to_string())? {
            NilElementVerdict::Nil { exponent } => max = max.max(exponent),
            other => return Err(format!("{a} is not nil: {other:?}")),
        }
    }
    ensure(max == max_exponent, || {
        format!("largest nil exponent is {max}, not {max_exponent}")
    })
}

/// `a^(s+1) = a^(l+1)` with every power up to `a^(l+1)` nonzero.
fn check_power_cycle(a: &Element, s: usize, l: usize, limit: u64) -> Check {
    ensure(s < l && (l as u64) <= limit, || {
        format!("cycle [{s}, {l}] out of range")
    })?;
    let algebra = a.algebra();
    let mut power = a.clone();
    let mut at_s = None;
    for j in 0..=l {
        ensure(!power.is_zero(), || format!("a^{} is zero", j + 1))?;
        if j == s {
            at_s = Some(power.clone());
        }
        if j < l {
            power = algebra.multiply(&power, a).map_err(|e| e.to_string())?;
        }
    }
    ensure(at_s.as_ref() == Some(&power), || {
        format!("a^{} differs from a^{}", s + 1, l + 1)
    })
}

fn check_strong(algebra: &EvolutionAlgebra, v: &Verdict) -> Check {
    let field = algebra.ring().is_field();
    let n = algebra.dimension();
    match v {
        Verdict::StrongUnsupported => ensure(!field, || "coefficient ring is a field".into()),
        Verdict::StronglyNilpotent {
            associated_index: m,
            product_length,
        } => {
            ensure(field, || "coefficient ring is not a field".into())?;
            if n == 0 {
                return ensure(*m == 1 && *product_length == 1, || {
                    "0-dimensional algebras have index 1".into()
                });
            }
            ensure(*m >= 1 && *m <= n, || format!("associated index {m} out of range"))?;
            ensure(nonzero_word(algebra, *m).is_none(), || {
                format!("some word of length {m} is nonzero")
            })?;
            ensure(*m == 1 || nonzero_word(algebra, m - 1).is_some(), || {
                format!("every word of length {} vanishes", m - 1)
            })?;
            let expected = 1usize.checked_shl((m - 1) as u32).and_then(|p| p.checked_add(1));
            ensure(expected == Some(*product_length), || {
                format!("product length {product_length} is not 2^{}+1", m - 1)
            })
        }
        Verdict::NotStronglyNilpotent { word, .. } => {
            ensure(field, || "coefficient ring is not a field".into())?;
            let w = zero_based(word, n)?;
            ensure(w.len() == n, || format!("word has length {}, expected {n}", w.len()))?;
            ensure(!word_product(algebra, &w).is_zero(), || "word product vanishes".into())?;
            let rerun = strong_verdict(is_strongly_nilpotent(algebra));
            match (&rerun, v) {
                (
                    Verdict::NotStronglyNilpotent {
                        associated_dimension: a,
                        stable_dimension: b,
                        ..
                    },
                    Verdict::NotStronglyNilpotent {
                        associated_dimension: c,
                        stable_dimension: d,
                        ..
                    },
                ) if a == c && b == d => Ok(()),
                _ => Err(format!("dimensions differ from the recomputed {rerun:?}")),
            }
        }
        _ => Err("not a strong nilpotency verdict".into()),
    }
}

fn check_filtration(
    algebra: &EvolutionAlgebra,
    complete: bool,
    layers: &[Vec<usize>],
    residue: &[usize],
    permutation: Option<&[usize]>,
) -> Check {
    let n = algebra.dimension();
    let f = compute_filtration(algebra);
    let expected_layers: Vec<Vec<usize>> = f.layers.iter().map(|l| one_based(l)).collect();
    ensure(expected_layers == layers && one_based(&f.residue) == residue, || {
        "layers differ from the recomputed ones".into()
    })?;
    ensure(complete == residue.is_empty(), || {
        "completeness flag disagrees with the residue".into()
    })?;
    // Each residue generator squares onto another residue generator.
    let res = zero_based(residue, n)?;
    for &i in &res {
        ensure(res.iter().any(|&k| !algebra.coefficient(k, i).is_zero()), || {
            format!("x{}^2 has no residue component", i + 1)
        })?;
    }
    match (complete, permutation) {
        (true, Some(p)) => {
            let p = zero_based(p, n)?;
            let m = algebra.structure().permuted(&p).map_err(|e| e.to_string())?;
            ensure(m.is_strictly_upper(), || {
                "permuted matrix is not strictly upper triangular".into()
            })
        }
        (false, None) => Ok(()),
        _ => Err("permutation present iff the filtration is complete".into()),
    }
}

fn check_power(
    job: &JobSpec,
    kind: PowerKind,
    n: usize,
    element_text: &str,
    result: &serde_json::Value,
    result_text: &str,
    nil_exponent: Option<usize>,
) -> Check {
    ensure(n >= 1, || "exponent must be positive".into())?;
    let payload = job.options.element.as_ref().ok_or("job has no element")?;
    match &job.mode {
        Mode::Finite { algebra } => {
            let a = parse_element(algebra, payload).map_err(|e| e.to_string())?;
            ensure(a.to_string() == element_text, || {
                format!("element text {element_text:?} does not match {a}")
            })?;
            let mul = |x: &Element, y: &Element| algebra.multiply(x, y).map_err(|e| e.to_string());
            let p = iterate(&a, n, kind, job.options.plenary_cap, mul)?;
            ensure(encode_element(&p) == *result && p.to_string() == result_text, || {
                format!("power is {p}")
            })?;
            let naive = naive_nil_element(&a, None).ok();
            match nil_exponent {
                Some(k) => check_nil_exponent(&a, k, mul),
                None => ensure(
                    !algebra.ring().is_finite() || !matches!(naive, Some(NilElementVerdict::Nil { .. })),
                    || "element is nil but no exponent was reported".into(),
                ),
            }
        }
        Mode::Shift { rule, .. } => {
            let a = parse_sparse(rule, payload).map_err(|e| e.to_string())?;
            ensure(a.to_string() == element_text, || {
                format!("element text {element_text:?} does not match {a}")
            })?;
            let mul = |x: &SparseElement, y: &SparseElement| rule.multiply(x, y).map_err(|e| e.to_string());
            let p = iterate(&a, n, kind, job.options.plenary_cap, mul)?;
            ensure(encode_sparse(&p) == *result && p.to_string() == result_text, || {
                format!("power is {p}")
            })?;
            match nil_exponent {
                Some(k) => {
                    let t = a.max_support().unwrap_or(0);
                    ensure(k <= 2 * t + 2, || format!("nil exponent {k} exceeds 2t+2"))?;
                    check_nil_exponent(&a, k, mul)
                }
                None => ensure(!square_zero(rule), || {
                    "nu squares to zero but no exponent was reported".into()
                }),
            }
        }
    }
}

fn square_zero(rule: &StructureRule) -> bool {
    rule.ring().mul(rule.nu(), rule.nu()).is_ok_and(|v| v.is_zero())
}

trait IsZero {
    fn zero_element(&self) -> bool;
}

impl IsZero for Element {
    fn zero_element(&self) -> bool {
        self.is_zero()
    }
}

impl IsZero for SparseElement {
    fn zero_element(&self) -> bool {
        self.is_zero()
    }
}

fn iterate<E: Clone>(
    a: &E,
    n: usize,
    kind: PowerKind,
    cap: usize,
    mul: impl Fn(&E, &E) -> Result<E, String>,
) -> Result<E, String> {
    if kind == PowerKind::Plenary {
        ensure(n <= cap, || format!("plenary exponent {n} exceeds the cap {cap}"))?;
    }
    // a^n takes n - 1 products; a^[n] takes n squarings, a^[1] = a^2.
    let mut p = a.clone();
    match kind {
        PowerKind::Principal => {
            for _ in 1..n {
                p = mul(&p, a)?;
            }
        }
        PowerKind::Plenary => {
            for _ in 0..n {
                p = mul(&p, &p)?;
            }
        }
    }
    Ok(p)
}

/// `a^k = 0` and `a^(k-1) != 0`.
fn check_nil_exponent<E: Clone + IsZero>(a: &E, k: usize, mul: impl Fn(&E, &E) -> Result<E, String>) -> Check {
    ensure(k >= 1, || "nil exponent must be positive".into())?;
    let mut p = a.clone();
    for j in 1..k {
        ensure(!p.zero_element(), || format!("a^{j} is already zero"))?;
        p = mul(&p, a)?;
    }
    ensure(p.zero_element(), || format!("a^{k} is nonzero"))
}
