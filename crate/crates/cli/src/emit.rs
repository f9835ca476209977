//! Human and machine renderings of a report.

use std::fmt::Write;

use evolia_core::Ring;
use serde_json::Value;

use crate::job::PowerKind;
use crate::report::{Report, Verdict};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Human,
    Machine,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Human => human(report),
        Format::Machine => report.to_machine(),
    }
}

fn list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(usize::to_string).collect();
    format!("[{}]", items.join(","))
}

/// Ring notation when the value decodes, raw JSON otherwise.
fn value(ring: Option<&Ring>, v: &Value) -> String {
    match ring.and_then(|r| r.parse_value(v).ok()) {
        Some(x) => x.to_string(),
        None => v.to_string(),
    }
}

pub fn human(report: &Report) -> String {
    let mut out = String::new();
    let ring = Ring::new(report.ring.clone()).ok();
    let ring_name = match &ring {
        Some(r) => r.to_string(),
        None => serde_json::to_string(&report.ring).unwrap_or_default(),
    };
    let _ = write!(out, "algebra: mode={} ring={ring_name}", report.mode);
    if let Some(n) = report.dimension {
        let _ = write!(out, " dimension={n}");
    }
    if let Some(n) = report.window {
        let _ = write!(out, " window=x1..x{n}");
    }
    let _ = writeln!(
        out,
        " hash={}",
        &report.algebra_hash[..report.algebra_hash.len().min(16)]
    );
    for entry in &report.results {
        let name = entry.analysis.name();
        match (&entry.result, &entry.error) {
            (Some(v), _) => verdict_lines(&mut out, ring.as_ref(), name, v),
            (None, Some(e)) => {
                let _ = writeln!(out, "{name}: ERROR {e}");
            }
            (None, None) => {
                let _ = writeln!(out, "{name}: ERROR empty entry");
            }
        }
    }
    let timings: Vec<String> = report
        .results
        .iter()
        .filter_map(|e| {
            e.elapsed
                .map(|d| format!("{}={:.3}ms", e.analysis, d.as_secs_f64() * 1e3))
        })
        .collect();
    if !timings.is_empty() {
        let _ = writeln!(out, "time: {}", timings.join(" "));
    }
    out
}

fn verdict_lines(out: &mut String, ring: Option<&Ring>, name: &str, v: &Verdict) {
    let _ = match v {
        Verdict::Nilpotent { exponent, minimality } => {
            let _ = writeln!(out, "{name}: YES exponent={exponent}");
            match minimality {
                Some(m) => writeln!(
                    out,
                    "  A^{} != 0: path {} has product {}",
                    exponent - 1,
                    list(&m.path),
                    value(ring, &m.product)
                ),
                None => Ok(()),
            }
        }
        Verdict::NotNilpotent { witness, dp_cycle } => {
            let _ = writeln!(
                out,
                "{name}: NO witness-path={},...]",
                list(&witness.path).trim_end_matches(']')
            );
            let _ = writeln!(
                out,
                "  loop {} repeats with partial product {} ({})",
                list(&witness.path[witness.cycle_start..]),
                value(ring, &witness.product),
                match witness.kind {
                    crate::report::PumpKind::RepeatedValue => "same index and value",
                    crate::report::PumpKind::DomainCycle => "nonzero factors over a domain",
                }
            );
            match dp_cycle {
                Some([s, l]) => writeln!(out, "  path-product levels {s} and {l} coincide"),
                None => Ok(()),
            }
        }
        Verdict::NilpotencyUnknown { bound } => writeln!(out, "{name}: UNKNOWN bound={bound}"),
        Verdict::Nil { max_exponent, checked } => {
            writeln!(out, "{name}: YES max-exponent={max_exponent} checked={checked}")
        }
        Verdict::NotNil {
            witness_text, cycle, ..
        } => {
            let _ = writeln!(out, "{name}: NO witness={witness_text}");
            writeln!(out, "  a^{} = a^{} != 0", cycle[0] + 1, cycle[1] + 1)
        }
        Verdict::NilSkipped { size, cap } => writeln!(out, "{name}: SKIPPED elements={size} cap={cap}"),
        Verdict::StronglyNilpotent {
            associated_index,
            product_length,
        } => writeln!(
            out,
            "{name}: YES associated-index={associated_index} product-length={product_length}"
        ),
        Verdict::NotStronglyNilpotent {
            associated_dimension,
            stable_dimension,
            word,
        } => {
            let _ = writeln!(out, "{name}: NO word={}", list(word));
            writeln!(
                out,
                "  dim L(A)={associated_dimension}, powers stabilize at dimension {stable_dimension}"
            )
        }
        Verdict::StrongUnsupported => writeln!(out, "{name}: UNSUPPORTED coefficient ring is not a field"),
        Verdict::Filtration {
            complete,
            layers,
            residue,
            permutation,
        } => {
            let layers: Vec<String> = layers.iter().map(|l| list(l)).collect();
            let layers = format!("[{}]", layers.join(","));
            match (complete, permutation) {
                (true, Some(p)) => writeln!(out, "{name}: COMPLETE layers={layers} permutation={}", list(p)),
                _ => writeln!(out, "{name}: INCOMPLETE layers={layers} residue={}", list(residue)),
            }
        }
        Verdict::Power {
            kind,
            exponent,
            element_text,
            result_text,
            nil_exponent,
            ..
        } => {
            let power = match kind {
                PowerKind::Principal => format!("^{exponent}"),
                PowerKind::Plenary => format!("^[{exponent}]"),
            };
            let _ = writeln!(out, "{name}: a{power} = {result_text}");
            let _ = writeln!(out, "  a = {element_text}");
            match nil_exponent {
                Some(k) => writeln!(out, "  nil-exponent={k}"),
                None => Ok(()),
            }
        }
    };
}
