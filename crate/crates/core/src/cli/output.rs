use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::genocchi::GenocchiValue;
use crate::padic::{ConvergenceReport, Valuation};
use crate::qcore::rational::{ComplexRational, Rational};
use crate::qcore::QValue;
use crate::verify::{CaseStatus, Params, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(Error::UnsupportedFormat(other.to_string())),
        }
    }
}

/// Anything the CLI can print.
pub trait Render: Serialize {
    fn text(&self) -> String;
    fn csv_header(&self) -> Vec<String>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
}

/// Serializes `value` in `format`. JSON and CSV carry exact fractions or
/// every stored digit; text is rounded for reading.
pub fn emit<T: Render>(value: &T, format: Format) -> Result<String> {
    match format {
        Format::Text => Ok(value.text()),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::ConfigInvalid(e.to_string());
            w.write_record(value.csv_header()).map_err(io)?;
            for row in value.csv_rows() {
                w.write_record(row).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::ConfigInvalid(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::ConfigInvalid(e.to_string()))
        }
    }
}

/// A single computed value with the inputs that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueRow {
    pub params: Params,
    pub value: QValue,
}

impl ValueRow {
    pub fn genocchi(v: GenocchiValue) -> Self {
        let params = [("n".to_string(), v.n.to_string()), ("x".to_string(), v.x.to_string())].into_iter().collect();
        Self { params, value: v.value }
    }

    pub fn zeta(s: ComplexRational, x: Rational, value: QValue) -> Self {
        let params = [("s".to_string(), s.to_string()), ("x".to_string(), x.to_string())].into_iter().collect();
        Self { params, value }
    }

    pub fn stilde(m: u32, a: u32, twist: i64, value: QValue) -> Self {
        let params = [("m", m.to_string()), ("a", a.to_string()), ("h", twist.to_string())]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        Self { params, value }
    }

    fn row(&self) -> Vec<String> {
        let mut row: Vec<String> = self.params.values().cloned().collect();
        row.push(csv_value(&self.value));
        row
    }
}

fn csv_value(v: &QValue) -> String {
    match v {
        QValue::Series(s) => s.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
        QValue::Rational(r) => r.to_string(),
        QValue::Numeric(z) => z.to_decimal_string(),
    }
}

impl Render for ValueRow {
    fn text(&self) -> String {
        format!("{}\n", self.value.to_text())
    }

    fn csv_header(&self) -> Vec<String> {
        self.params.keys().cloned().chain(["value".to_string()]).collect()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![self.row()]
    }
}

/// Values for consecutive indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TableRow(pub Vec<ValueRow>);

impl Render for TableRow {
    fn text(&self) -> String {
        let mut s = String::new();
        for r in &self.0 {
            let label: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(s, "{}  {}", label.join(" "), r.value.to_text());
        }
        s
    }

    fn csv_header(&self) -> Vec<String> {
        self.0.first().map(|r| r.csv_header()).unwrap_or_else(|| vec!["value".to_string()])
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.0.iter().map(ValueRow::row).collect()
    }
}

fn valuation_text(v: Option<Valuation>) -> String {
    match v {
        None => "-".to_string(),
        Some(Valuation::Finite(k)) => k.to_string(),
        Some(Valuation::Infinite) => "inf".to_string(),
    }
}

impl Render for ConvergenceReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "p = {}, q = {}, degree = {}, x = {}, alpha = {}, h = {}",
            self.p, self.q, self.spec.degree, self.spec.x, self.spec.alpha, self.spec.h
        );
        let _ = writeln!(s, "target = {}", self.target);
        let _ = writeln!(s, "loss = {}", self.loss);
        let _ = writeln!(s, "{:>3}  {:>10}  {:>12}  {:>8}", "N", "v(diff)", "v(target gap)", "required");
        for l in &self.levels {
            let _ = writeln!(
                s,
                "{:>3}  {:>10}  {:>12}  {:>8}",
                l.level,
                valuation_text(l.diff_valuation),
                valuation_text(Some(l.target_valuation)),
                l.required
            );
        }
        let verdict = serde_json::to_value(self.verdict).ok().and_then(|v| v.as_str().map(String::from));
        let _ = writeln!(s, "verdict = {}", verdict.unwrap_or_default());
        let _ = writeln!(s, "target reached = {}", self.target_ok);
        s
    }

    fn csv_header(&self) -> Vec<String> {
        ["N", "value", "diff_valuation", "target_valuation", "required"].map(String::from).to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.levels
            .iter()
            .map(|l| {
                vec![
                    l.level.to_string(),
                    l.value.to_string(),
                    valuation_text(l.diff_valuation),
                    valuation_text(Some(l.target_valuation)),
                    l.required.to_string(),
                ]
            })
            .collect()
    }
}

fn params_text(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
}

impl Render for SuiteReport {
    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "suite {}", self.suite);
        for r in &self.identities {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{verdict}  {:<16} {:>4}/{:<4} passed  {:>3} skipped  max residual {:.3e}",
                r.id.name(),
                r.summary.passed,
                r.summary.total,
                r.summary.skipped,
                r.summary.max_residual
            );
            for c in r.cases.iter().filter(|c| c.status != CaseStatus::Pass) {
                let tag = match (c.status, c.gated) {
                    (CaseStatus::SkippedInvalid, _) => "skipped",
                    (_, true) => "fail",
                    (_, false) => "fail (soft)",
                };
                let detail = c.note.as_deref().unwrap_or(&c.residual);
                let _ = writeln!(s, "      {tag:<11} {}  {detail}", params_text(&c.params));
            }
        }
        let _ = writeln!(s, "{}", if self.pass { "PASS" } else { "FAIL" });
        s
    }

    fn csv_header(&self) -> Vec<String> {
        ["identity", "params", "backend", "residual", "pass"].map(String::from).to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.identities
            .iter()
            .flat_map(|r| {
                r.cases.iter().map(move |c| {
                    vec![
                        r.id.name().to_string(),
                        params_text(&c.params),
                        c.backend.to_string(),
                        c.residual.clone(),
                        c.pass.to_string(),
                    ]
                })
            })
            .collect()
    }
}
