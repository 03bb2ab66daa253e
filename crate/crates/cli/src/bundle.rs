use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use chaoskit_core::numerics::Scalar;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::plot::{emit_plot, PlotKind};
use crate::Result;

/// Plain decimal in the usual range, exponent notation outside it.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `"re+imi"` / `"re-imi"`.
pub fn fmt_complex(z: Scalar) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", fmt_f64(z.re), sign, fmt_f64(z.im.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Parsed numeric column; unparsable cells are `NaN`.
    pub fn numbers(&self, name: &str) -> Option<Vec<f64>> {
        let c = self.column(name)?;
        Some(self.rows.iter().map(|r| r[c].parse().unwrap_or(f64::NAN)).collect())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.header).map_err(std::io::Error::from)?;
        for r in &self.rows {
            w.write_record(r).map_err(std::io::Error::from)?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("utf-8 cells"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub scenario: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotRequest {
    pub table: String,
    pub kind: PlotKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultBundle {
    pub metadata: Metadata,
    pub tables: Vec<Table>,
    pub verdicts: BTreeMap<String, Value>,
    pub plots: Vec<PlotRequest>,
}

impl ResultBundle {
    pub fn new(scenario: &str, seed: u64) -> Self {
        Self {
            metadata: Metadata {
                scenario: scenario.to_string(),
                parameters: BTreeMap::new(),
                seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
            },
            tables: Vec::new(),
            verdicts: BTreeMap::new(),
            plots: Vec::new(),
        }
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) {
        self.metadata
            .parameters
            .insert(name.to_string(), serde_json::to_value(value).expect("serializable parameter"));
    }

    pub fn table(&mut self, t: Table) {
        self.tables.push(t);
    }

    pub fn plot(&mut self, table: &str, kind: PlotKind) {
        self.plots.push(PlotRequest {
            table: table.to_string(),
            kind,
        });
    }

    /// Records `{"pass": pass, ...evidence}`. Evidence should carry numbers
    /// and strings; any `false` inside a verdict counts as a failure.
    pub fn verdict(&mut self, name: &str, pass: bool, evidence: Value) {
        let mut obj = Map::new();
        obj.insert("pass".into(), Value::Bool(pass));
        if let Value::Object(m) = evidence {
            obj.extend(m);
        }
        self.verdicts.insert(name.to_string(), Value::Object(obj));
    }

    pub fn get_table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn verdict_passed(&self, name: &str) -> Option<bool> {
        self.verdicts.get(name).map(no_false)
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.values().all(no_false)
    }

    pub fn metadata_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.metadata).expect("serializable");
        s.push('\n');
        s
    }

    pub fn verdicts_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.verdicts).expect("serializable");
        s.push('\n');
        s
    }

    /// Writes `metadata.json`, `verdicts.json`, one CSV per table and, with
    /// `plots`, one SVG per requested plot under `plots/`.
    pub fn write(&self, dir: &Path, plots: bool) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let mut put = |name: &str, body: &str| -> Result<()> {
            let p = dir.join(name);
            fs::write(&p, body)?;
            written.push(p);
            Ok(())
        };
        put("metadata.json", &self.metadata_json())?;
        put("verdicts.json", &self.verdicts_json())?;
        for t in &self.tables {
            put(&format!("{}.csv", t.name), &t.to_csv()?)?;
        }
        if plots {
            let pdir = dir.join("plots");
            fs::create_dir_all(&pdir)?;
            for req in &self.plots {
                if let Some(t) = self.get_table(&req.table) {
                    let p = pdir.join(format!("{}.svg", req.table));
                    emit_plot(t, req.kind, &p)?;
                    written.push(p);
                }
            }
        }
        Ok(written)
    }

    pub fn summary(&self) -> String {
        let mut s = format!("scenario {} (seed {})\n", self.metadata.scenario, self.metadata.seed);
        for t in &self.tables {
            s.push_str(&format!("  table {:<28} {} rows\n", t.name, t.rows.len()));
        }
        for (name, v) in &self.verdicts {
            let tag = if no_false(v) { "PASS" } else { "FAIL" };
            s.push_str(&format!("  {tag} {name}\n"));
        }
        s
    }
}

fn no_false(v: &Value) -> bool {
    match v {
        Value::Bool(b) => *b,
        Value::Array(a) => a.iter().all(no_false),
        Value::Object(m) => m.values().all(no_false),
        _ => true,
    }
}

/// Shorthand for building evidence objects.
pub fn evidence(pairs: &[(&str, Value)]) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert((*k).to_string(), v.clone());
    }
    Value::Object(m)
}

pub fn num(x: f64) -> Value {
    json!(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_cells() {
        assert_eq!(fmt_complex(Scalar::new(0.5, -0.25)), "0.5-0.25i");
        assert_eq!(fmt_complex(Scalar::new(1.0, 0.0)), "1+0i");
        assert_eq!(fmt_complex(Scalar::new(-2.0, 3e-9)), "-2+3e-9i");
        assert_eq!(fmt_f64(1e300), "1e300");
    }

    #[test]
    fn csv_is_rfc4180() {
        let mut t = Table::new("t", &["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(t.to_csv().unwrap(), "a,b\r\n1,\"x,y\"\r\n");
    }

    #[test]
    fn any_false_fails() {
        let mut b = ResultBundle::new("x", 1);
        b.verdict("ok", true, evidence(&[("value", num(1.0))]));
        assert!(b.all_pass());
        b.verdict("nested", true, evidence(&[("inner", json!([true, false]))]));
        assert!(!b.all_pass());
        assert_eq!(b.verdict_passed("ok"), Some(true));
    }
}
