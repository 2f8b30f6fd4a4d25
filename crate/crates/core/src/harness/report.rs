//! Samples, verdict rules and the report they roll up into.

use std::fmt::Write as _;

use crate::error::Error;

/// How the samples of one claim are judged. Ratios are `measured / predicted`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Rule {
    /// `max ratio / min ratio <= max_spread`, all ratios positive.
    Window { max_spread: f64 },
    /// `(measured - err) / predicted <= limit` for every sample.
    AtMost { limit: f64 },
    /// `(measured + err) / predicted >= limit` for every sample.
    AtLeast { limit: f64 },
    /// `|ratio - 1| <= tol` for every sample.
    Near { tol: f64 },
    /// `|measured - predicted| <= tol` for every sample.
    Absolute { tol: f64 },
    /// Reported only; never fails.
    Report,
}

impl Rule {
    fn sample_ok(&self, s: &Sample) -> bool {
        let finite = s.measured.is_finite() && s.predicted.is_finite();
        finite
            && match *self {
                Rule::Window { .. } => s.ratio.is_finite() && s.ratio > 0.0,
                Rule::AtMost { limit } => (s.measured - s.err_estimate) / s.predicted <= limit,
                Rule::AtLeast { limit } => (s.measured + s.err_estimate) / s.predicted >= limit,
                Rule::Near { tol } => (s.ratio - 1.0).abs() <= tol,
                Rule::Absolute { tol } => (s.measured - s.predicted).abs() <= tol,
                Rule::Report => true,
            }
    }

    pub fn describe(&self) -> String {
        match *self {
            Rule::Window { max_spread } => format!("max/min ratio <= {max_spread}"),
            Rule::AtMost { limit } => format!("ratio <= {limit}"),
            Rule::AtLeast { limit } => format!("ratio >= {limit}"),
            Rule::Near { tol } => format!("|ratio - 1| <= {tol}"),
            Rule::Absolute { tol } => format!("|measured - predicted| <= {tol}"),
            Rule::Report => "reported".to_string(),
        }
    }
}

/// One claim within an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Claim {
    pub id: String,
    pub params: Vec<&'static str>,
    pub measured: &'static str,
    pub predicted: &'static str,
    pub rule: Rule,
}

impl Claim {
    pub fn new(id: &str, params: &[&'static str], measured: &'static str, predicted: &'static str, rule: Rule) -> Self {
        Self { id: id.to_string(), params: params.to_vec(), measured, predicted, rule }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub claim_id: String,
    pub params: Vec<f64>,
    pub measured: f64,
    pub predicted: f64,
    pub ratio: f64,
    pub err_estimate: f64,
    pub ok: bool,
}

impl Sample {
    pub fn new(claim_id: &str, params: Vec<f64>, measured: f64, predicted: f64, err_estimate: f64) -> Self {
        Self { claim_id: claim_id.to_string(), params, measured, predicted, ratio: measured / predicted, err_estimate, ok: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub claim: Claim,
    pub samples: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// Least-squares slope of `ln measured` against `ln predicted`.
    pub loglog_slope: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub experiment: String,
    /// Choices that affect how the numbers are to be read.
    pub notes: Vec<String>,
    pub samples: Vec<Sample>,
    pub checks: Vec<CheckResult>,
    /// Quadrature failures, one line each.
    pub failures: Vec<String>,
    pub converged: bool,
    pub verdict: Verdict,
}

/// Least-squares slope of `y` against `x`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 || n != y.len() {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

impl EquivalenceReport {
    /// Judges every claim against its samples. The verdict passes iff every
    /// claim with samples passes, every claim has at least one sample, and no
    /// quadrature failed.
    pub fn assemble(experiment: &str, claims: Vec<Claim>, mut samples: Vec<Sample>, failures: Vec<Error>, notes: Vec<String>) -> Self {
        let mut checks = Vec::with_capacity(claims.len());
        for claim in claims {
            let mut ratios = Vec::new();
            let (mut lx, mut ly) = (Vec::new(), Vec::new());
            let mut all_ok = true;
            for s in samples.iter_mut().filter(|s| s.claim_id == claim.id) {
                s.ok = claim.rule.sample_ok(s);
                all_ok &= s.ok;
                ratios.push(s.ratio);
                if s.measured > 0.0 && s.predicted > 0.0 {
                    lx.push(s.predicted.ln());
                    ly.push(s.measured.ln());
                }
            }
            let ratio_min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
            let ratio_max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let window_ok = match claim.rule {
                Rule::Window { max_spread } => ratio_min > 0.0 && ratio_max / ratio_min <= max_spread,
                _ => true,
            };
            let pass = !ratios.is_empty() && all_ok && window_ok;
            checks.push(CheckResult { samples: ratios.len(), ratio_min, ratio_max, loglog_slope: fit_slope(&lx, &ly), pass, claim });
        }
        let converged = failures.is_empty();
        let verdict = if converged && checks.iter().all(|c| c.pass) { Verdict::Pass } else { Verdict::Fail };
        Self {
            experiment: experiment.to_string(),
            notes,
            samples,
            checks,
            failures: failures.iter().map(|e| e.to_string()).collect(),
            converged,
            verdict,
        }
    }

    pub fn check(&self, claim_id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.claim.id == claim_id)
    }

    /// Ratio range of the first claim, the headline equivalence.
    pub fn ratio_min(&self) -> f64 {
        self.checks.first().map_or(f64::NAN, |c| c.ratio_min)
    }

    pub fn ratio_max(&self) -> f64 {
        self.checks.first().map_or(f64::NAN, |c| c.ratio_max)
    }

    pub fn loglog_slope(&self) -> Option<f64> {
        self.checks.first().and_then(|c| c.loglog_slope)
    }

    /// `claim_id,param_1..param_n,measured,predicted,ratio,err_estimate,verdict`,
    /// comma- or tab-separated, line-feed terminated.
    pub fn to_delimited(&self, sep: char) -> String {
        let n = self.samples.iter().map(|s| s.params.len()).max().unwrap_or(0);
        let mut out = String::new();
        let mut header = vec!["claim_id".to_string()];
        header.extend((1..=n).map(|k| format!("param_{k}")));
        header.extend(["measured", "predicted", "ratio", "err_estimate", "verdict"].map(String::from));
        out.push_str(&header.join(&sep.to_string()));
        out.push('\n');
        for s in &self.samples {
            let mut row = vec![s.claim_id.clone()];
            for k in 0..n {
                row.push(s.params.get(k).map(|v| format!("{v:e}")).unwrap_or_default());
            }
            row.extend([s.measured, s.predicted, s.ratio, s.err_estimate].map(|v| format!("{v:e}")));
            row.push(if s.ok { "pass" } else { "fail" }.to_string());
            out.push_str(&row.join(&sep.to_string()));
            out.push('\n');
        }
        out
    }

    /// Human-readable summary: one line per claim, then the overall verdict.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment {}", self.experiment);
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        for c in &self.checks {
            let slope = c.loglog_slope.map_or("-".to_string(), |v| format!("{v:.4}"));
            let _ = writeln!(
                s,
                "  [{}] {} ({}; measured {} vs {}; params {}): n={} ratio_min={:.6e} ratio_max={:.6e} slope={}",
                if c.pass { "pass" } else { "FAIL" },
                c.claim.id,
                c.claim.rule.describe(),
                c.claim.measured,
                c.claim.predicted,
                if c.claim.params.is_empty() { "-".to_string() } else { c.claim.params.join(",") },
                c.samples,
                c.ratio_min,
                c.ratio_max,
                slope
            );
        }
        for f in &self.failures {
            let _ = writeln!(s, "  quadrature failure: {f}");
        }
        let _ = writeln!(s, "  verdict: {}", self.verdict.as_str());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_rule_uses_spread() {
        let claims = vec![Claim::new("a", &["x"], "m", "p", Rule::Window { max_spread: 3.0 })];
        let samples = vec![Sample::new("a", vec![1.0], 1.0, 1.0, 0.0), Sample::new("a", vec![2.0], 2.5, 1.0, 0.0)];
        let r = EquivalenceReport::assemble("t", claims.clone(), samples, vec![], vec![]);
        assert_eq!(r.verdict, Verdict::Pass);
        let samples = vec![Sample::new("a", vec![1.0], 1.0, 1.0, 0.0), Sample::new("a", vec![2.0], 3.5, 1.0, 0.0)];
        let r = EquivalenceReport::assemble("t", claims, samples, vec![], vec![]);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn missing_samples_or_failures_fail() {
        let claims = vec![Claim::new("a", &[], "m", "p", Rule::Report)];
        let r = EquivalenceReport::assemble("t", claims.clone(), vec![], vec![], vec![]);
        assert_eq!(r.verdict, Verdict::Fail);
        let s = vec![Sample::new("a", vec![], 1.0, 1.0, 0.0)];
        let e = Error::NotConverged { value: Default::default(), err_estimate: 1.0, cells: 3 };
        let r = EquivalenceReport::assemble("t", claims, s, vec![e], vec![]);
        assert!(!r.converged);
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn csv_layout() {
        let claims = vec![Claim::new("a", &["x", "y"], "m", "p", Rule::AtLeast { limit: 1.0 })];
        let samples = vec![Sample::new("a", vec![0.5, 2.0], 3.0, 2.0, 0.0), Sample::new("a", vec![0.25], 1.0, 2.0, 0.5)];
        let r = EquivalenceReport::assemble("t", claims, samples, vec![], vec![]);
        let csv = r.to_delimited(',');
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "claim_id,param_1,param_2,measured,predicted,ratio,err_estimate,verdict");
        assert_eq!(lines[1], "a,5e-1,2e0,3e0,2e0,1.5e0,0e0,pass");
        assert_eq!(lines[2], "a,2.5e-1,,1e0,2e0,5e-1,5e-1,fail");
        assert!(csv.ends_with('\n'));
    }

    #[test]
    fn slope_of_a_line() {
        assert!((fit_slope(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap() - 2.0).abs() < 1e-15);
        assert!(fit_slope(&[1.0], &[1.0]).is_none());
    }
}
