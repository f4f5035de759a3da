//! The structured report, format `spapprox-report/1`: one JSON document per
//! invocation. Absent fields are omitted. Row indices are 0-based; added
//! rows continue the numbering after the original rows.

use serde::{Deserialize, Serialize};
use spapprox::measure::{format_rational, to_f64, Certificate, Rational, Witness};
use spapprox::table::{Schema, Tuple, Value};

pub const FORMAT: &str = "spapprox-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    /// The verdict or measure was computed exactly.
    Exact,
    /// A node or size cap stopped the search.
    Exhausted,
    /// The addition measure does not exist for this input.
    Undefined,
    Error,
}

/// An exact rational with its decimal rendering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fraction {
    pub rational: String,
    pub decimal: f64,
}

impl From<Rational> for Fraction {
    fn from(r: Rational) -> Self {
        Fraction {
            rational: format_rational(&r),
            decimal: to_f64(&r),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorldRow {
    pub row: usize,
    pub values: Vec<String>,
}

/// Total projections chosen for each row, on `attributes`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct World {
    pub attributes: Vec<String>,
    pub rows: Vec<WorldRow>,
}

impl World {
    pub fn new(schema: &Schema, w: &Witness) -> Self {
        World {
            attributes: w.attrs.iter().map(|p| schema.name(p).to_string()).collect(),
            rows: w
                .rows
                .iter()
                .map(|(row, syms)| WorldRow {
                    row: *row,
                    values: syms.iter().map(|s| s.as_str().to_string()).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateReport {
    /// A world of the whole table.
    World { world: World },
    Removal {
        removed: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        world: Option<World>,
    },
    /// Added tuples on the full schema, `null` for NULL.
    Addition {
        added: Vec<Vec<Option<String>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        world: Option<World>,
    },
}

fn cells(t: &Tuple) -> Vec<Option<String>> {
    t.values()
        .iter()
        .map(|v| match v {
            Value::Null => None,
            Value::Sym(s) => Some(s.as_str().to_string()),
        })
        .collect()
}

impl CertificateReport {
    pub fn from_certificate(schema: &Schema, c: &Certificate) -> Option<Self> {
        match c {
            Certificate::None => None,
            Certificate::Removal { removed, witness } => Some(CertificateReport::Removal {
                removed: removed.clone(),
                world: Some(World::new(schema, witness)),
            }),
            Certificate::Addition { added, witness } => Some(CertificateReport::Addition {
                added: added.iter().map(cells).collect(),
                world: Some(World::new(schema, witness)),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub tool_version: String,
    pub command: String,
    /// `sha256:` followed by the hex digest of the raw input bytes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<String>,
    /// `g3` or `g5`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub within_bound: Option<bool>,
    /// g3 of each key on its own, for `maxg3`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub per_key: Vec<Fraction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub elapsed_ms: f64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            format: FORMAT.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input_digest: None,
            constraint: None,
            measure: None,
            status: Status::Exact,
            holds: None,
            value: None,
            bound: None,
            within_bound: None,
            per_key: Vec::new(),
            certificate: None,
            warnings: Vec::new(),
            notes: Vec::new(),
            message: None,
            elapsed_ms: 0.0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// The human-readable form printed to standard output.
    pub fn render(&self) -> String {
        let mut out = Vec::new();
        if let Some(c) = &self.constraint {
            out.push(format!("constraint: {c}"));
        }
        match (self.status, &self.message) {
            (Status::Error, Some(m)) => out.push(format!("error: {m}")),
            (Status::Exhausted, Some(m)) => out.push(format!("exhausted: {m}")),
            _ => {}
        }
        if let Some(h) = self.holds {
            out.push(format!("holds: {}", if h { "yes" } else { "no" }));
        }
        if let Some(m) = &self.measure {
            match (&self.value, self.status) {
                (Some(v), _) => out.push(format!("{m} = {} ({})", v.rational, v.decimal)),
                (None, Status::Undefined) => out.push(format!("{m} = undefined")),
                _ => {}
            }
        }
        for (i, g) in self.per_key.iter().enumerate() {
            out.push(format!(
                "  key {}: g3 = {} ({})",
                i + 1,
                g.rational,
                g.decimal
            ));
        }
        if let (Some(b), Some(w)) = (&self.bound, self.within_bound) {
            out.push(format!(
                "within bound {}: {}",
                b.rational,
                if w { "yes" } else { "no" }
            ));
        }
        match &self.certificate {
            Some(CertificateReport::Removal { removed, .. }) => {
                out.push(format!("remove rows: {}", join(removed.iter())));
            }
            Some(CertificateReport::Addition { added, .. }) => {
                for t in added {
                    let cells: Vec<&str> = t.iter().map(|c| c.as_deref().unwrap_or("⊥")).collect();
                    out.push(format!("add ({})", cells.join(",")));
                }
            }
            _ => {}
        }
        out.extend(self.warnings.iter().map(|w| format!("warning: {w}")));
        out.extend(self.notes.iter().map(|n| format!("note: {n}")));
        out.join("\n") + "\n"
    }
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    let parts: Vec<String> = items.map(|x| x.to_string()).collect();
    if parts.is_empty() {
        "none".to_string()
    } else {
        parts.join(", ")
    }
}
