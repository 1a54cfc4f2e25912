use serde::{Serialize, Serializer};

use crate::config::RunConfig;

/// Finite values as numbers, infinities as the string `"inf"`.
fn number_or_inf<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(x) if x.is_infinite() && *x > 0.0 => s.serialize_str("inf"),
        Some(x) => s.serialize_f64(*x),
    }
}

fn csv_number(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(x) if x.is_infinite() && x > 0.0 => "inf".into(),
        Some(x) => x.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub quantity: String,
    pub k: usize,
    #[serde(serialize_with = "number_or_inf")]
    pub lower: Option<f64>,
    #[serde(serialize_with = "number_or_inf")]
    pub upper: Option<f64>,
    pub exact: bool,
    pub method: String,
    pub label: String,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub check: String,
    pub instance: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: RunConfig,
    pub rows: Vec<Row>,
    pub violations: Vec<Violation>,
}

pub const CSV_HEADER: [&str; 8] = ["quantity", "k", "lower", "upper", "exact", "method", "label", "elapsed_ms"];

impl Report {
    pub fn new(config: RunConfig, mut rows: Vec<Row>, violations: Vec<Violation>) -> Self {
        // stable, so rows with equal keys keep their order of creation
        rows.sort_by(|a, b| (&a.quantity, a.k).cmp(&(&b.quantity, b.k)));
        Report {
            config,
            rows,
            violations,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.violations.is_empty() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Fixed column order; violations follow as `#` comment lines.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.quantity.clone(),
                r.k.to_string(),
                csv_number(r.lower),
                csv_number(r.upper),
                r.exact.to_string(),
                r.method.clone(),
                r.label.clone(),
                r.elapsed_ms.to_string(),
            ])
            .expect("in-memory write");
        }
        let mut out = String::from_utf8(w.into_inner().expect("flush")).expect("utf-8");
        for v in &self.violations {
            out.push_str(&format!("# violation: {} [{}] {}\n", v.check, v.instance, v.detail));
        }
        out
    }
}
