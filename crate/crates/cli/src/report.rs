//! Report model and its two renderings.
//!
//! Every float goes through [`Num`], which prints 17 significant digits so
//! values round-trip, maps non-finite values to `null`, and never depends on
//! platform formatting. Combined with ordered check lists this makes the JSON
//! byte-deterministic for a fixed config.

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use tetrablock::tetrablock::geometry::MembershipMode;
use tetrablock::Scalar;

use crate::config::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn name(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CheckValue {
    None,
    Real(f64),
    Complex(Scalar),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    /// The mathematical statement being checked.
    pub anchor: String,
    pub status: Status,
    pub value: CheckValue,
    pub tolerance: f64,
    pub deviation: f64,
}

impl Check {
    /// Passes iff `deviation <= tolerance`; a NaN deviation is `unknown`.
    pub fn bounded(name: &str, anchor: &str, value: CheckValue, deviation: f64, tolerance: f64) -> Check {
        let status = if deviation.is_nan() {
            Status::Unknown
        } else if deviation <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Check { name: name.into(), anchor: anchor.into(), status, value, tolerance, deviation }
    }

    /// An identity whose window deviation is both the value and the deviation.
    pub fn identity(name: &str, anchor: &str, deviation: f64, tolerance: f64) -> Check {
        Check::bounded(name, anchor, CheckValue::Real(deviation), deviation, tolerance)
    }

    /// A quantity that must not exceed `bound`.
    pub fn at_most(name: &str, anchor: &str, value: f64, bound: f64, tolerance: f64) -> Check {
        let deviation = if value.is_nan() { f64::NAN } else { (value - bound).max(0.0) };
        Check::bounded(name, anchor, CheckValue::Real(value), deviation, tolerance)
    }

    /// A quantity compared against an independently computed expectation.
    pub fn equals(name: &str, anchor: &str, value: f64, expected: f64, tolerance: f64) -> Check {
        Check::bounded(name, anchor, CheckValue::Real(value), (value - expected).abs(), tolerance)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
    pub verdict: Status,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub config: RunConfig,
    pub checks: Vec<Check>,
}

impl Report {
    /// The verdict is `pass` iff every check passes; any failure makes it
    /// `fail`, otherwise any unknown makes it `unknown`.
    pub fn summary(&self) -> Summary {
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
        let (pass, fail, unknown) = (count(Status::Pass), count(Status::Fail), count(Status::Unknown));
        let verdict = if fail > 0 {
            Status::Fail
        } else if unknown > 0 {
            Status::Unknown
        } else {
            Status::Pass
        };
        Summary { pass, fail, unknown, verdict }
    }

    /// 0 when the verdict is `pass`, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        u8::from(self.summary().verdict != Status::Pass)
    }

    pub fn to_json(&self) -> String {
        let doc = JsonReport {
            config: JsonConfig::from(&self.config),
            checks: self.checks.iter().map(JsonCheck::from).collect(),
            summary: self.summary(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "tetra {}  alpha={}  depth={}  norm-depth={}  tol={:e}  grid={}  seed={}\n",
            c.suite.name(),
            complex_text(c.alpha),
            c.window_depth,
            c.norm_depth_max,
            c.tol,
            c.grid_size,
            c.seed,
        );
        if let Some(p) = c.point {
            out.push_str(&format!("point={p}  mode={}\n", mode_name(c.mode)));
        }
        let rows: Vec<[String; 6]> = self
            .checks
            .iter()
            .map(|k| {
                [
                    k.status.name().to_string(),
                    k.name.clone(),
                    value_text(&k.value),
                    float_text(k.deviation),
                    float_text(k.tolerance),
                    k.anchor.clone(),
                ]
            })
            .collect();
        let header = ["STATUS", "CHECK", "VALUE", "DEVIATION", "TOLERANCE", "STATEMENT"].map(String::from);
        let mut widths = header.clone().map(|h| h.len());
        for r in &rows {
            for (w, cell) in widths.iter_mut().zip(r) {
                *w = (*w).max(cell.chars().count());
            }
        }
        for r in std::iter::once(&header).chain(&rows) {
            let line: Vec<String> = r
                .iter()
                .zip(widths)
                .enumerate()
                .map(|(i, (cell, w))| if i + 1 == r.len() { cell.clone() } else { format!("{cell:<w$}") })
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        let s = self.summary();
        out.push_str(&format!(
            "summary: {} pass, {} fail, {} unknown; verdict {}\n",
            s.pass,
            s.fail,
            s.unknown,
            s.verdict.name()
        ));
        out
    }
}

pub(crate) fn mode_name(m: MembershipMode) -> &'static str {
    match m {
        MembershipMode::Closure => "closure",
        MembershipMode::Boundary => "boundary",
    }
}

fn float_text(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6e}")
    } else {
        "-".into()
    }
}

fn complex_text(z: Scalar) -> String {
    format!("{},{}", z.re, z.im)
}

fn value_text(v: &CheckValue) -> String {
    match v {
        CheckValue::None => "-".into(),
        CheckValue::Real(x) => float_text(*x),
        CheckValue::Complex(z) => format!("{},{}", float_text(z.re), float_text(z.im)),
    }
}

/// A float serialized with 17 significant digits, or `null`.
#[derive(Clone, Copy, Debug)]
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        // Normalizes -0.0 so that equal values print equally.
        let x = if self.0 == 0.0 { 0.0 } else { self.0 };
        let raw = RawValue::from_string(format!("{x:.16e}")).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

struct Pair(Scalar);

impl Serialize for Pair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&Num(self.0.re))?;
        seq.serialize_element(&Num(self.0.im))?;
        seq.end()
    }
}

impl Serialize for CheckValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            CheckValue::None => s.serialize_none(),
            CheckValue::Real(x) => Num(*x).serialize(s),
            CheckValue::Complex(z) => Pair(*z).serialize(s),
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonConfig {
    subcommand: &'static str,
    alpha: Pair,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<[Pair; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<&'static str>,
    window_depth: usize,
    norm_depth_max: usize,
    tol: Num,
    grid_size: usize,
    seed: u64,
    output_format: &'static str,
}

impl From<&RunConfig> for JsonConfig {
    fn from(c: &RunConfig) -> Self {
        JsonConfig {
            subcommand: c.suite.name(),
            alpha: Pair(c.alpha),
            point: c.point.map(|p| p.to_array().map(Pair)),
            mode: c.point.map(|_| mode_name(c.mode)),
            window_depth: c.window_depth,
            norm_depth_max: c.norm_depth_max,
            tol: Num(c.tol),
            grid_size: c.grid_size,
            seed: c.seed,
            output_format: c.format.name(),
        }
    }
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct JsonCheck<'a> {
    name: &'a str,
    paper_anchor: &'a str,
    status: Status,
    value: CheckValue,
    tolerance: Num,
    deviation: Num,
}

impl<'a> From<&'a Check> for JsonCheck<'a> {
    fn from(c: &'a Check) -> Self {
        JsonCheck {
            name: &c.name,
            paper_anchor: &c.anchor,
            status: c.status,
            value: c.value,
            tolerance: Num(c.tolerance),
            deviation: Num(c.deviation),
        }
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    config: JsonConfig,
    checks: Vec<JsonCheck<'a>>,
    summary: Summary,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Suite;

    fn report(checks: Vec<Check>) -> Report {
        Report { config: RunConfig::new(Suite::VerifyPal), checks }
    }

    #[test]
    fn empty_report_passes_with_zero_counts() {
        let r = report(vec![]);
        assert_eq!(r.summary(), Summary { pass: 0, fail: 0, unknown: 0, verdict: Status::Pass });
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn one_failure_fails_the_verdict() {
        let r = report(vec![Check::identity("a", "x = x", 0.0, 1e-12), Check::identity("b", "y = y", 1.0, 1e-12)]);
        let s = r.summary();
        assert_eq!((s.pass, s.fail, s.verdict), (1, 1, Status::Fail));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn nan_deviation_is_unknown() {
        let r = report(vec![Check::identity("a", "x = x", f64::NAN, 1e-12)]);
        assert_eq!(r.summary().verdict, Status::Unknown);
        assert_eq!(r.exit_code(), 1);
        assert!(r.to_json().contains("\"deviation\": null"));
    }

    #[test]
    fn floats_round_trip_with_seventeen_digits() {
        let xs = [0.1, 1.0 / 3.0, 2f64.sqrt(), 1e-300, 6.02e23, -0.25, f64::MIN_POSITIVE, 0.1 + 0.2];
        for x in xs {
            let s = serde_json::to_string(&Num(x)).unwrap();
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
            assert_eq!(mantissa.len(), 17, "{s}");
            // serde_json's default float parser is not correctly rounded; std's is.
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(serde_json::to_string(&Num(f64::INFINITY)).unwrap(), "null");
        assert_eq!(serde_json::to_string(&Num(-0.0)).unwrap(), serde_json::to_string(&Num(0.0)).unwrap());
    }

    #[test]
    fn json_has_the_report_schema() {
        let checks = vec![
            Check::equals("norm", "||V|| = |a|", 0.25, 0.25, 1e-12),
            Check::bounded("pt", "z", CheckValue::Complex(Scalar::new(1.0, -2.0)), 0.0, 1e-12),
            Check::bounded("none", "z", CheckValue::None, 0.0, 1e-12),
        ];
        let v: serde_json::Value = serde_json::from_str(&report(checks).to_json()).unwrap();
        assert_eq!(v["config"]["subcommand"], "verify-pal");
        assert_eq!(v["config"]["windowDepth"], 8);
        let c = &v["checks"];
        assert_eq!(c[0]["name"], "norm");
        assert_eq!(c[0]["paperAnchor"], "||V|| = |a|");
        assert_eq!(c[0]["status"], "pass");
        assert_eq!(c[0]["value"], 0.25);
        assert_eq!(c[1]["value"], serde_json::json!([1.0, -2.0]));
        assert!(c[2]["value"].is_null());
        assert_eq!(v["summary"], serde_json::json!({"pass": 3, "fail": 0, "unknown": 0, "verdict": "pass"}));
    }

    #[test]
    fn text_table_is_aligned() {
        let r =
            report(vec![Check::identity("short", "a", 0.0, 1e-12), Check::identity("a-longer-name", "b", 2.0, 1e-12)]);
        let text = r.to_text();
        let lines: Vec<&str> = text.lines().skip(1).take(3).collect();
        let col = lines[0].find("VALUE").unwrap();
        assert!(lines[1..].iter().all(|l| l[col - 2..col].trim().is_empty()));
        assert!(text.ends_with("summary: 1 pass, 1 fail, 0 unknown; verdict fail\n"));
    }
}
