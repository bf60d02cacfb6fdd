use std::fmt::Write as _;
use std::time::Duration;

use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Holdout,
    /// Checked with an explicit constant; no fitting involved.
    Check,
}

impl Split {
    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Holdout => "holdout",
            Split::Check => "check",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow<T> {
    pub label: String,
    pub split: Split,
    pub lhs: T,
    pub rhs: T,
    pub ratio: T,
    pub pass: bool,
}

/// Named `(x, y)` data for log-log slope checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<T> {
    pub name: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(T, T)>,
}

impl<T: Real> Series<T> {
    /// Least-squares slope of `ln y` against `ln x`.
    pub fn loglog_slope(&self) -> T {
        loglog_slope(&self.points)
    }

    /// Whitespace-separated two-column text with a commented header.
    pub fn to_two_column(&self) -> String {
        let mut s = format!("# {}\n# {} {}\n", self.name, self.x_label, self.y_label);
        for (x, y) in &self.points {
            let _ = writeln!(s, "{} {}", fmt_g9(*x), fmt_g9(*y));
        }
        s
    }
}

pub fn loglog_slope<T: Real>(points: &[(T, T)]) -> T {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > T::zero() && *y > T::zero())
        .map(|(x, y)| (x.as_f64().ln(), y.as_f64().ln()))
        .collect();
    if pts.len() < 2 {
        return T::nan();
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    T::lit(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport<T> {
    pub experiment: String,
    pub params: Vec<(String, String)>,
    pub constants: Vec<(String, T)>,
    pub trials: Vec<TrialRow<T>>,
    pub violations: usize,
    pub witnesses: Vec<String>,
    pub min_ratio: T,
    pub max_ratio: T,
    pub series: Vec<Series<T>>,
    pub notes: Vec<String>,
    /// Wall time; never serialized, so output stays byte-identical.
    pub runtime: Duration,
}

impl<T: Real> VerificationReport<T> {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            params: Vec::new(),
            constants: Vec::new(),
            trials: Vec::new(),
            violations: 0,
            witnesses: Vec::new(),
            min_ratio: T::infinity(),
            max_ratio: T::neg_infinity(),
            series: Vec::new(),
            notes: Vec::new(),
            runtime: Duration::ZERO,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.to_string(), value.to_string()));
    }

    pub fn constant(&mut self, key: &str, value: T) {
        self.constants.push((key.to_string(), value));
    }

    pub fn constant_value(&self, key: &str) -> Option<T> {
        self.constants.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn push(&mut self, row: TrialRow<T>) {
        if row.ratio.is_finite() || row.ratio.is_infinite() {
            self.min_ratio = self.min_ratio.min(row.ratio);
            self.max_ratio = self.max_ratio.max(row.ratio);
        }
        if !row.pass {
            self.violations += 1;
            self.witnesses.push(row.label.clone());
        }
        self.trials.push(row);
    }

    pub fn series(&self, name: &str) -> Option<&Series<T>> {
        self.series.iter().find(|s| s.name == name)
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    /// One row per trial, then `#`-prefixed parameter, constant, note and
    /// summary lines. `sep` is `,` for CSV or `\t` for TSV.
    pub fn to_delimited(&self, sep: char) -> String {
        let mut s = String::new();
        let head = ["experiment", "trial", "split", "label", "lhs", "rhs", "ratio", "pass"];
        s.push_str(&head.join(&sep.to_string()));
        s.push('\n');
        for (i, r) in self.trials.iter().enumerate() {
            let cells = [
                self.experiment.clone(),
                i.to_string(),
                r.split.as_str().to_string(),
                quote(&r.label, sep),
                fmt_g9(r.lhs),
                fmt_g9(r.rhs),
                fmt_g9(r.ratio),
                r.pass.to_string(),
            ];
            s.push_str(&cells.join(&sep.to_string()));
            s.push('\n');
        }
        if !self.params.is_empty() {
            let p: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let _ = writeln!(s, "# params: {}", p.join("; "));
        }
        if !self.constants.is_empty() {
            let c: Vec<String> = self.constants.iter().map(|(k, v)| format!("{k}={}", fmt_g9(*v))).collect();
            let _ = writeln!(s, "# constants: {}", c.join("; "));
        }
        for n in &self.notes {
            let _ = writeln!(s, "# note: {n}");
        }
        if !self.witnesses.is_empty() {
            let _ = writeln!(s, "# witnesses: {}", self.witnesses.join("; "));
        }
        let _ = writeln!(
            s,
            "# summary: trials={}; violations={}; min_ratio={}; max_ratio={}; pass={}",
            self.trials.len(),
            self.violations,
            fmt_g9(self.min_ratio),
            fmt_g9(self.max_ratio),
            self.passed()
        );
        s
    }

    pub fn to_csv(&self) -> String {
        self.to_delimited(',')
    }
}

fn quote(s: &str, sep: char) -> String {
    if s.contains(sep) || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Nine significant digits, `%.9g` style.
pub fn fmt_g9<T: Real>(x: T) -> String {
    let x = x.as_f64();
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-5..9).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp) as usize, x);
        trim_zeros(&fixed).to_string()
    } else {
        let m = trim_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g9_formatting() {
        assert_eq!(fmt_g9(1.0), "1");
        assert_eq!(fmt_g9(0.5), "0.5");
        assert_eq!(fmt_g9(std::f64::consts::PI), "3.14159265");
        assert_eq!(fmt_g9(123456789.4), "123456789");
        assert_eq!(fmt_g9(1234567894.0), "1.23456789e+09");
        assert_eq!(fmt_g9(1.5e-7), "1.5e-07");
        assert_eq!(fmt_g9(-0.000123), "-0.000123");
        assert_eq!(fmt_g9(f64::INFINITY), "inf");
        assert_eq!(fmt_g9(0.0), "0");
        assert_eq!(fmt_g9(9.999999999), "10");
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = (1..6).map(|k| (k as f64, 3.0 * (k as f64).powf(-1.5))).collect();
        assert!((loglog_slope(&pts) + 1.5).abs() < 1e-12);
    }

    #[test]
    fn csv_layout() {
        let mut r = VerificationReport::<f64>::new("demo");
        r.param("alpha", -1.0);
        r.constant("C", 2.0);
        r.push(TrialRow { label: "a,b".into(), split: Split::Train, lhs: 1.0, rhs: 2.0, ratio: 0.5, pass: true });
        r.push(TrialRow { label: "c".into(), split: Split::Holdout, lhs: 3.0, rhs: 1.0, ratio: 3.0, pass: false });
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "experiment,trial,split,label,lhs,rhs,ratio,pass");
        assert_eq!(lines[1], "demo,0,train,\"a,b\",1,2,0.5,true");
        assert_eq!(lines[2], "demo,1,holdout,c,3,1,3,false");
        assert!(csv.contains("# summary: trials=2; violations=1; min_ratio=0.5; max_ratio=3; pass=false"));
        assert!(!r.passed());
    }
}
