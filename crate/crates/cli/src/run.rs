//! Dispatch of job analyses.

use std::time::Instant;

use evolia_core::analysis::{
    compute_filtration, is_nil_algebra, is_nil_element, is_nilpotent, is_strongly_nilpotent, NilAlgebraVerdict,
    NilElementVerdict, NilScan, NilpotencyOptions, NilpotencyVerdict, StrongNilpotencyVerdict, WitnessKind,
};
use evolia_core::{Error, EvolutionAlgebra, Ring, RingValue};

use crate::error::CliError;
use crate::job::{encode_element, encode_sparse, parse_element, parse_sparse, Analysis, JobSpec, Mode, PowerKind};
use crate::report::{AnalysisEntry, Conventions, PathCert, PumpCert, PumpKind, Report, Verdict};

pub fn run_job(job: &JobSpec) -> Report {
    let results = job
        .analyses
        .iter()
        .map(|&analysis| {
            let start = Instant::now();
            let outcome = run_analysis(job, analysis);
            let elapsed = Some(start.elapsed());
            match outcome {
                Ok(v) => AnalysisEntry {
                    analysis,
                    result: Some(v),
                    error: None,
                    invariant: false,
                    elapsed,
                },
                Err(e) => AnalysisEntry {
                    analysis,
                    result: None,
                    invariant: e.exit_code() == 2,
                    error: Some(e.to_string()),
                    elapsed,
                },
            }
        })
        .collect();
    Report {
        v: crate::job::SCHEMA_VERSION,
        ring: job.ring.descriptor().clone(),
        mode: job.mode_name().to_string(),
        algebra_hash: job.algebra_hash(),
        dimension: job.finite_algebra().map(EvolutionAlgebra::dimension),
        window: job.window(),
        conventions: Conventions::default(),
        results,
    }
}

fn finite(job: &JobSpec) -> Result<&EvolutionAlgebra, CliError> {
    job.finite_algebra()
        .ok_or_else(|| CliError::Precondition("matrix analyses of a shift rule need a finite \"window\"".into()))
}

pub(crate) fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

pub(crate) fn run_analysis(job: &JobSpec, analysis: Analysis) -> Result<Verdict, CliError> {
    let opts = &job.options;
    match analysis {
        Analysis::Nil => {
            let algebra = finite(job)?;
            let scan = NilScan {
                cap: opts.cap,
                parallel: opts.parallel,
            };
            Ok(match is_nil_algebra(algebra, &scan)? {
                NilAlgebraVerdict::Nil { max_exponent, checked } => Verdict::Nil { max_exponent, checked },
                NilAlgebraVerdict::NotNil { witness, cycle } => Verdict::NotNil {
                    witness: encode_element(&witness),
                    witness_text: witness.to_string(),
                    cycle: [cycle.0, cycle.1],
                },
                NilAlgebraVerdict::Skipped { size, cap } => Verdict::NilSkipped {
                    size: size.to_string(),
                    cap,
                },
            })
        }
        Analysis::Nilpotent => {
            let algebra = finite(job)?;
            let ring = algebra.ring();
            let nopts = NilpotencyOptions {
                bound: opts.bound,
                dp_cycle_cap: opts.dp_cycle_cap,
            };
            Ok(match is_nilpotent(algebra, &nopts)? {
                NilpotencyVerdict::Nilpotent { exponent, minimality } => Verdict::Nilpotent {
                    exponent,
                    minimality: minimality.map(|m| PathCert {
                        path: one_based(&m.path),
                        product: ring.encode_value(&m.product),
                    }),
                },
                NilpotencyVerdict::NotNilpotent { witness, dp_cycle } => Verdict::NotNilpotent {
                    witness: PumpCert {
                        path: one_based(&witness.path),
                        cycle_start: witness.cycle_start,
                        product: ring.encode_value(&witness.product),
                        kind: match witness.kind {
                            WitnessKind::RepeatedValue => PumpKind::RepeatedValue,
                            WitnessKind::DomainCycle => PumpKind::DomainCycle,
                        },
                    },
                    dp_cycle: dp_cycle.map(|(s, l)| [s, l]),
                },
                NilpotencyVerdict::Unknown { bound } => Verdict::NilpotencyUnknown { bound },
            })
        }
        Analysis::StronglyNilpotent => {
            let algebra = finite(job)?;
            Ok(strong_verdict(is_strongly_nilpotent(algebra)))
        }
        Analysis::Filtration => {
            let algebra = finite(job)?;
            let f = compute_filtration(algebra);
            Ok(Verdict::Filtration {
                complete: f.is_complete(),
                layers: f.layers.iter().map(|l| one_based(l)).collect(),
                residue: one_based(&f.residue),
                permutation: f.permutation().map(|p| one_based(&p)),
            })
        }
        Analysis::ElementPower => element_power(job),
    }
}

pub(crate) fn strong_verdict(v: StrongNilpotencyVerdict) -> Verdict {
    match v {
        StrongNilpotencyVerdict::StronglyNilpotent {
            associated_index,
            product_length,
        } => Verdict::StronglyNilpotent {
            associated_index,
            product_length,
        },
        StrongNilpotencyVerdict::NotStronglyNilpotent {
            associated_dimension,
            stable_dimension,
            word,
        } => Verdict::NotStronglyNilpotent {
            associated_dimension,
            stable_dimension,
            word: one_based(&word),
        },
        StrongNilpotencyVerdict::Unsupported => Verdict::StrongUnsupported,
    }
}

fn element_power(job: &JobSpec) -> Result<Verdict, CliError> {
    let opts = &job.options;
    let payload = opts
        .element
        .as_ref()
        .ok_or_else(|| CliError::Precondition("element-power needs options.element".into()))?;
    let n = opts
        .power
        .ok_or_else(|| CliError::Precondition("element-power needs options.power".into()))?;
    match &job.mode {
        Mode::Finite { algebra } => {
            let a = parse_element(algebra, payload)?;
            let p = match opts.power_kind {
                PowerKind::Principal => algebra.principal_power(&a, n)?,
                PowerKind::Plenary => algebra.plenary_power_capped(&a, n, opts.plenary_cap)?,
            };
            let nil_exponent = if algebra.ring().is_finite() {
                match is_nil_element(&a, None)? {
                    NilElementVerdict::Nil { exponent } => Some(exponent),
                    _ => None,
                }
            } else {
                None
            };
            Ok(Verdict::Power {
                kind: opts.power_kind,
                exponent: n,
                element: encode_element(&a),
                element_text: a.to_string(),
                result: encode_element(&p),
                result_text: p.to_string(),
                nil_exponent,
            })
        }
        Mode::Shift { rule, .. } => {
            let a = parse_sparse(rule, payload)?;
            let p = match opts.power_kind {
                PowerKind::Principal => rule.principal_power(&a, n)?,
                PowerKind::Plenary => rule.plenary_power_capped(&a, n, opts.plenary_cap)?,
            };
            let nil_exponent = match rule.nil_exponent(&a) {
                Ok(k) => Some(k),
                Err(Error::NotSquareZero) => None,
                Err(e) => return Err(e.into()),
            };
            Ok(Verdict::Power {
                kind: opts.power_kind,
                exponent: n,
                element: encode_sparse(&a),
                element_text: a.to_string(),
                result: encode_sparse(&p),
                result_text: p.to_string(),
                nil_exponent,
            })
        }
    }
}

/// Decodes a ring value from a report, reporting the field on failure.
/// Only the canonical encoding is accepted, so `7` does not stand in for
/// `3` over `Z/4`.
pub(crate) fn decode(ring: &Ring, v: &serde_json::Value, field: &str) -> Result<RingValue, CliError> {
    let parse_err = |message: String| CliError::Parse {
        context: field.to_string(),
        message,
    };
    let value = ring.parse_value(v).map_err(|e| parse_err(e.to_string()))?;
    if ring.encode_value(&value) != *v {
        return Err(parse_err(format!("{v} is not in canonical form")));
    }
    Ok(value)
}
