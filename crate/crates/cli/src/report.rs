//! Exit-code mapping and plain-text rendering.

use serde::Serialize;
use serde_json::{json, Value};

use semiclass::semiclassical::Certificate;
use semiclass::{CoherenceError, FunctionalError, GriffinError, OpsError, Scalar, SemiclassicalError};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_REGULARITY: u8 = 2;
pub const EXIT_COHERENCE: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;
pub const EXIT_GATE: u8 = 6;
pub const EXIT_RESIDUAL: u8 = 7;

pub struct Outcome {
    pub code: u8,
    pub report: Value,
    pub warnings: Vec<String>,
    pub error: Option<String>,
}

impl Outcome {
    pub fn ok(report: Value) -> Self {
        Outcome {
            code: 0,
            report,
            warnings: Vec::new(),
            error: None,
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub warnings: Vec<String>,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
            warnings: Vec::new(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_USAGE, message)
    }

    pub fn budget(message: impl Into<String>) -> Self {
        Self::new(EXIT_BUDGET, message)
    }

    pub fn exact_backend() -> Self {
        Self::usage(GriffinError::ExactBackend.to_string())
    }

    pub fn from_functional(e: FunctionalError) -> Self {
        let code = match e {
            FunctionalError::DegreeBudget { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        Self::new(code, e.to_string())
    }

    pub fn from_ops(e: OpsError) -> Self {
        match e {
            OpsError::Regularity { .. } | OpsError::ZeroGamma { .. } => Self::new(EXIT_REGULARITY, e.to_string()),
            OpsError::OutOfRange { .. } => Self::new(EXIT_BUDGET, e.to_string()),
            OpsError::Functional(f) => Self::from_functional(f),
            _ => Self::usage(e.to_string()),
        }
    }

    pub fn from_coherence(e: CoherenceError) -> Self {
        match e {
            CoherenceError::MissingRow { .. } => Self::new(EXIT_BUDGET, e.to_string()),
            CoherenceError::Ops(o) => Self::from_ops(o),
            CoherenceError::Functional(f) => Self::from_functional(f),
            CoherenceError::PiNotMonic => Self::usage(e.to_string()),
        }
    }

    pub fn from_semiclassical(e: SemiclassicalError) -> Self {
        match e {
            SemiclassicalError::Precondition(_) => Self::new(EXIT_COHERENCE, e.to_string()),
            SemiclassicalError::Coherence(c) => Self::from_coherence(c),
            SemiclassicalError::Ops(o) => Self::from_ops(o),
            SemiclassicalError::Functional(f) => Self::from_functional(f),
            _ => Self::usage(e.to_string()),
        }
    }

    pub fn from_griffin(e: GriffinError) -> Self {
        match e {
            GriffinError::InvalidInput(_)
            | GriffinError::NotPositiveDefinite { .. }
            | GriffinError::ParameterGate(_)
            | GriffinError::NegativeWeightRatio(_) => Self::new(EXIT_GATE, e.to_string()),
            GriffinError::Compatibility { .. } | GriffinError::Quadrature(_) => Self::new(EXIT_RESIDUAL, e.to_string()),
            GriffinError::Ops(o) => Self::from_ops(o),
            GriffinError::Coherence(c) => Self::from_coherence(c),
            GriffinError::Functional(f) => Self::from_functional(f),
            GriffinError::ExactBackend | GriffinError::Algebra(_) => Self::usage(e.to_string()),
        }
    }
}

pub fn certificate_summary<S: Scalar + Serialize>(c: &Certificate<S>) -> Value {
    json!({
        "functional": c.functional,
        "name": c.check.name,
        "phi": c.phi.to_string(),
        "psi": c.psi.to_string(),
        "class_bound": c.reported_class_bound(),
        "raw_class_bound": c.class_bound,
        "holds": c.holds(),
    })
}

/// Scalars as `key: value`, arrays of objects as aligned tables, nested
/// objects flattened with dotted keys.
pub fn render_table(report: &Value) -> String {
    let mut out = String::new();
    render_into(&mut out, "", report);
    out
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| !i.is_object() && !i.is_array()) => Some(format!(
            "[{}]",
            items.iter().filter_map(scalar_text).collect::<Vec<_>>().join(", ")
        )),
        _ => None,
    }
}

fn render_into(out: &mut String, prefix: &str, v: &Value) {
    let Value::Object(map) = v else {
        if let Some(s) = scalar_text(v) {
            out.push_str(&format!("{prefix}: {s}\n"));
        }
        return;
    };
    for (key, val) in map {
        let name = if prefix.is_empty() { key.clone() } else { format!("{prefix}.{key}") };
        if let Some(s) = scalar_text(val) {
            out.push_str(&format!("{name}: {s}\n"));
        } else if let Value::Array(items) = val {
            render_rows(out, &name, items);
        } else {
            render_into(out, &name, val);
        }
    }
}

fn render_rows(out: &mut String, name: &str, items: &[Value]) {
    let mut columns: Vec<String> = Vec::new();
    for item in items {
        if let Value::Object(m) = item {
            for (k, v) in m {
                if scalar_text(v).is_some() && !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
        }
    }
    out.push_str(&format!("{name}:\n"));
    if columns.is_empty() {
        for item in items {
            out.push_str(&format!("  {item}\n"));
        }
        return;
    }
    let cells: Vec<Vec<String>> = items
        .iter()
        .map(|item| {
            columns
                .iter()
                .map(|c| item.get(c).and_then(scalar_text).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| cells.iter().map(|r| r[i].len()).chain([c.len()]).max().unwrap_or(0))
        .collect();
    let line = |row: &[String]| {
        let body: Vec<String> = row.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        format!("  {}\n", body.join("  ").trim_end())
    };
    out.push_str(&line(&columns));
    for row in &cells {
        out.push_str(&line(row));
    }
}
