//! Job files.
//!
//! ```json
//! {"ring":{"kind":"mod","modulus":36},"mode":"finite","matrix":[[6,3],[2,12]],"analyses":["nilpotent"]}
//! ```
//!
//! Matrices are written row by row, as usually displayed: row `k`, column
//! `j` holds `c_kj`, the coefficient of `x_k` in `x_j^2`. Internally the
//! algebra keeps columns, so column `j` is the coordinate vector of `x_j^2`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use evolia_core::analysis::oracle::DEFAULT_PATH_GUARD;
use evolia_core::analysis::{DEFAULT_DP_CYCLE_CAP, DEFAULT_NIL_CAP};
use evolia_core::{
    Element, EvolutionAlgebra, Ring, RingDescriptor, RingValue, SparseElement, StructureRule, DEFAULT_PLENARY_CAP,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Nil,
    Nilpotent,
    StronglyNilpotent,
    Filtration,
    ElementPower,
}

impl Analysis {
    pub fn name(self) -> &'static str {
        match self {
            Analysis::Nil => "nil",
            Analysis::Nilpotent => "nilpotent",
            Analysis::StronglyNilpotent => "strongly-nilpotent",
            Analysis::Filtration => "filtration",
            Analysis::ElementPower => "element-power",
        }
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerKind {
    #[default]
    Principal,
    Plenary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobOptions {
    /// Largest `|R|^N` scanned by the exhaustive nil test.
    pub cap: u64,
    /// Iteration bound for infinite coefficient rings.
    pub bound: Option<usize>,
    /// Largest `N^(L+1)` enumerated when re-checking path products.
    pub path_guard: u64,
    pub dp_cycle_cap: usize,
    pub element: Option<Value>,
    pub power: Option<usize>,
    pub power_kind: PowerKind,
    pub plenary_cap: usize,
    pub parallel: bool,
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions {
            cap: DEFAULT_NIL_CAP,
            bound: None,
            path_guard: DEFAULT_PATH_GUARD,
            dp_cycle_cap: DEFAULT_DP_CYCLE_CAP,
            element: None,
            power: None,
            power_kind: PowerKind::Principal,
            plenary_cap: DEFAULT_PLENARY_CAP,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Mode {
    Finite {
        algebra: EvolutionAlgebra,
    },
    /// `window` restricts the finite analyses to `x_1..x_N`.
    Shift {
        rule: StructureRule,
        window: Option<(usize, EvolutionAlgebra)>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobSpec {
    pub ring: Ring,
    pub mode: Mode,
    pub analyses: Vec<Analysis>,
    pub options: JobOptions,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJob {
    #[serde(default)]
    v: Option<u32>,
    ring: RingDescriptor,
    mode: RawMode,
    #[serde(default)]
    dimension: Option<usize>,
    #[serde(default)]
    matrix: Option<Vec<Vec<Value>>>,
    #[serde(default)]
    labels: Option<Vec<String>>,
    #[serde(default)]
    nu: Option<Value>,
    #[serde(default)]
    window: Option<usize>,
    analyses: Vec<Analysis>,
    #[serde(default)]
    options: RawOptions,
}

#[derive(Deserialize)]
#[serde(rename_all = "kebab-case")]
enum RawMode {
    Finite,
    Shift,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    cap: Option<u64>,
    bound: Option<usize>,
    path_guard: Option<u64>,
    dp_cycle_cap: Option<usize>,
    element: Option<Value>,
    power: Option<usize>,
    power_kind: Option<PowerKind>,
    plenary_cap: Option<usize>,
    parallel: Option<bool>,
}

fn parse_err(context: impl Into<String>, message: impl fmt::Display) -> CliError {
    CliError::Parse {
        context: context.into(),
        message: message.to_string(),
    }
}

impl JobSpec {
    pub fn parse(text: &str) -> Result<JobSpec, CliError> {
        let raw: RawJob = serde_json::from_str(text).map_err(|e| parse_err("job", e))?;
        if let Some(v) = raw.v {
            if v != SCHEMA_VERSION {
                return Err(CliError::Version(v));
            }
        }
        let ring = Ring::new(raw.ring).map_err(|e| parse_err("ring", e))?;
        if raw.analyses.is_empty() {
            return Err(parse_err("analyses", "at least one analysis is required"));
        }
        let mode = match raw.mode {
            RawMode::Finite => {
                for (field, present) in [("nu", raw.nu.is_some()), ("window", raw.window.is_some())] {
                    if present {
                        return Err(parse_err(field, "only allowed in shift mode"));
                    }
                }
                let rows = raw
                    .matrix
                    .ok_or_else(|| parse_err("matrix", "required in finite mode"))?;
                let algebra = algebra_from_rows(&ring, rows, raw.dimension)?;
                let algebra = match raw.labels {
                    Some(labels) => algebra.with_labels(labels).map_err(|e| parse_err("labels", e))?,
                    None => algebra,
                };
                Mode::Finite { algebra }
            }
            RawMode::Shift => {
                for (field, present) in [
                    ("matrix", raw.matrix.is_some()),
                    ("dimension", raw.dimension.is_some()),
                    ("labels", raw.labels.is_some()),
                ] {
                    if present {
                        return Err(parse_err(field, "only allowed in finite mode"));
                    }
                }
                let nu = raw.nu.ok_or_else(|| parse_err("nu", "required in shift mode"))?;
                let nu = ring.parse_value(&nu).map_err(|e| parse_err("nu", e))?;
                let rule = StructureRule::shift(&ring, nu).map_err(|e| parse_err("nu", e))?;
                let window = match raw.window {
                    Some(n) => Some((n, rule.window(n).map_err(|e| parse_err("window", e))?)),
                    None => None,
                };
                Mode::Shift { rule, window }
            }
        };
        let o = raw.options;
        let defaults = JobOptions::default();
        let options = JobOptions {
            cap: o.cap.unwrap_or(defaults.cap),
            bound: o.bound,
            path_guard: o.path_guard.unwrap_or(defaults.path_guard),
            dp_cycle_cap: o.dp_cycle_cap.unwrap_or(defaults.dp_cycle_cap),
            element: o.element,
            power: o.power,
            power_kind: o.power_kind.unwrap_or_default(),
            plenary_cap: o.plenary_cap.unwrap_or(defaults.plenary_cap),
            parallel: o.parallel.unwrap_or(false),
        };
        if options.bound == Some(0) {
            return Err(parse_err("options.bound", "must be positive"));
        }
        Ok(JobSpec {
            ring,
            mode,
            analyses: raw.analyses,
            options,
        })
    }

    pub fn from_path(path: &Path) -> Result<JobSpec, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        JobSpec::parse(&text)
    }

    /// The finite algebra the matrix analyses run on, if any.
    pub fn finite_algebra(&self) -> Option<&EvolutionAlgebra> {
        match &self.mode {
            Mode::Finite { algebra } => Some(algebra),
            Mode::Shift { window, .. } => window.as_ref().map(|(_, a)| a),
        }
    }

    pub fn window(&self) -> Option<usize> {
        match &self.mode {
            Mode::Shift {
                window: Some((n, _)), ..
            } => Some(*n),
            _ => None,
        }
    }

    /// Hash identifying the algebra: the structure matrix in finite mode
    /// and for windows, the rule otherwise.
    pub fn algebra_hash(&self) -> String {
        match &self.mode {
            Mode::Finite { algebra } => algebra.canonical_hash(),
            Mode::Shift {
                window: Some((_, a)), ..
            } => a.canonical_hash(),
            Mode::Shift { rule, window: None } => rule.canonical_hash(),
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self.mode {
            Mode::Finite { .. } => "finite",
            Mode::Shift { .. } => "shift",
        }
    }
}

fn algebra_from_rows(
    ring: &Ring,
    rows: Vec<Vec<Value>>,
    dimension: Option<usize>,
) -> Result<EvolutionAlgebra, CliError> {
    let n = rows.len();
    if let Some(d) = dimension {
        if d != n {
            return Err(parse_err("matrix", format!("{n} rows for dimension {d}")));
        }
    }
    if n == 0 {
        return Ok(EvolutionAlgebra::zero_dimensional(ring));
    }
    let width = rows[0].len();
    for (r, row) in rows.iter().enumerate() {
        if row.len() != width {
            return Err(parse_err(
                "matrix",
                format!("ragged row {} ({} entries, expected {width})", r + 1, row.len()),
            ));
        }
    }
    if width != n {
        return Err(parse_err(
            "matrix",
            format!("{n} rows of {width} entries; the matrix must be square"),
        ));
    }
    let mut parsed = Vec::with_capacity(n);
    for (r, row) in rows.iter().enumerate() {
        let mut out = Vec::with_capacity(n);
        for (c, v) in row.iter().enumerate() {
            out.push(
                ring.parse_value(v)
                    .map_err(|e| parse_err(format!("matrix row {} column {}", r + 1, c + 1), e))?,
            );
        }
        parsed.push(out);
    }
    EvolutionAlgebra::from_rows(ring, parsed).map_err(|e| parse_err("matrix", e))
}

/// Finite-mode element: an array of coefficients, or a map from 1-based
/// index strings to coefficients.
pub fn parse_element(algebra: &EvolutionAlgebra, v: &Value) -> Result<Element, CliError> {
    let ring = algebra.ring();
    let n = algebra.dimension();
    let coeffs = match v {
        Value::Array(items) => {
            if items.len() != n {
                return Err(parse_err(
                    "element",
                    format!("{} coefficients for dimension {n}", items.len()),
                ));
            }
            items
                .iter()
                .map(|x| ring.parse_value(x))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| parse_err("element", e))?
        }
        Value::Object(map) => {
            let mut coeffs = vec![ring.zero(); n];
            for (k, x) in map {
                let i = parse_index(k)?;
                if i > n {
                    return Err(parse_err("element", format!("index {i} exceeds dimension {n}")));
                }
                coeffs[i - 1] = ring.parse_value(x).map_err(|e| parse_err("element", e))?;
            }
            coeffs
        }
        _ => return Err(parse_err("element", "expected an array or an index map")),
    };
    algebra.element(coeffs).map_err(|e| parse_err("element", e))
}

/// Shift-mode element: a map from 1-based index strings to coefficients.
pub fn parse_sparse(rule: &StructureRule, v: &Value) -> Result<SparseElement, CliError> {
    let Value::Object(map) = v else {
        return Err(parse_err("element", "expected a map from index to coefficient"));
    };
    let ring = rule.ring();
    let mut terms = Vec::with_capacity(map.len());
    for (k, x) in map {
        terms.push((
            parse_index(k)?,
            ring.parse_value(x).map_err(|e| parse_err("element", e))?,
        ));
    }
    rule.element(terms).map_err(|e| parse_err("element", e))
}

fn parse_index(k: &str) -> Result<usize, CliError> {
    match k.parse::<usize>() {
        Ok(i) if i >= 1 => Ok(i),
        _ => Err(parse_err("element", format!("bad index {k:?}; indices start at 1"))),
    }
}

pub fn encode_element(e: &Element) -> Value {
    let ring = e.algebra().ring();
    Value::Array(e.coeffs().iter().map(|c| ring.encode_value(c)).collect())
}

pub fn encode_sparse(e: &SparseElement) -> Value {
    let ring = e.rule().ring();
    let map: BTreeMap<String, Value> = e
        .support()
        .iter()
        .map(|(i, c)| (i.to_string(), ring.encode_value(c)))
        .collect();
    serde_json::to_value(map).expect("string keys")
}

pub fn encode_values(ring: &Ring, vs: &[RingValue]) -> Value {
    Value::Array(vs.iter().map(|c| ring.encode_value(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Z36_NILPOTENT: &str =
        r#"{"ring":{"kind":"mod","modulus":36},"mode":"finite","matrix":[[6,3],[2,12]],"analyses":["nilpotent"]}"#;

    #[test]
    fn rows_become_columns() {
        let job = JobSpec::parse(Z36_NILPOTENT).unwrap();
        let a = job.finite_algebra().unwrap();
        let r = a.ring();
        // x1^2 = 6x1 + 2x2
        assert_eq!(a.columns()[0], vec![r.from_i64(6), r.from_i64(2)]);
        assert_eq!(a.columns()[1], vec![r.from_i64(3), r.from_i64(12)]);
        assert_eq!(job.analyses, vec![Analysis::Nilpotent]);
    }

    #[test]
    fn shift_job() {
        let job = JobSpec::parse(
            r#"{"ring":{"kind":"mod","modulus":4},"mode":"shift","nu":2,"analyses":["element-power"],"options":{"element":{"1":1},"power":4}}"#,
        )
        .unwrap();
        let Mode::Shift { rule, window } = &job.mode else {
            panic!()
        };
        assert!(window.is_none());
        assert_eq!(job.options.power, Some(4));
        let e = parse_sparse(rule, job.options.element.as_ref().unwrap()).unwrap();
        assert_eq!(e.to_string(), "x1");
    }

    #[test]
    fn parse_errors() {
        let ragged = Z36_NILPOTENT.replace("[[6,3],[2,12]]", "[[6,3],[2]]");
        let err = JobSpec::parse(&ragged).unwrap_err().to_string();
        assert!(err.contains("ragged row 2"), "{err}");
        let unknown = Z36_NILPOTENT.replace("\"mod\"", "\"gf\"");
        assert!(JobSpec::parse(&unknown).is_err());
        let empty = Z36_NILPOTENT.replace("[\"nilpotent\"]", "[]");
        assert!(JobSpec::parse(&empty).unwrap_err().to_string().contains("analyses"));
        let bad_json = Z36_NILPOTENT.replace("}", "");
        assert!(JobSpec::parse(&bad_json).unwrap_err().to_string().contains("line"));
        let not_square = Z36_NILPOTENT.replace("[[6,3],[2,12]]", "[[6,3,1],[2,12,1]]");
        assert!(JobSpec::parse(&not_square).unwrap_err().to_string().contains("square"));
        let bad_nu = r#"{"ring":{"kind":"int"},"mode":"shift","nu":2,"analyses":["nil"]}"#;
        assert!(JobSpec::parse(bad_nu).is_err());
    }
}
