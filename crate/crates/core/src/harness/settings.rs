//! Sweep grids, run settings and their flat `key=value` overrides.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfplane::HalfPlanePoint;
use crate::quadrature::{QuadConfig, SupOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// `Im zeta` values.
    pub lambda_grid: Vec<f64>,
    /// `|zeta|` values.
    pub r_grid: Vec<f64>,
    /// Also sample `-xi + i lambda` next to every `xi + i lambda`.
    pub mirror: bool,
    pub w_grid: Vec<HalfPlanePoint>,
    pub k_list: Vec<f64>,
    pub l_list: Vec<f64>,
    pub j_list: Vec<f64>,
    /// Truncation radii for growth fits, increasing.
    pub trunc_grid: Vec<f64>,
    /// Size of every random sample.
    pub samples: usize,
    pub seed: u64,
}

/// `lo, lo * 10^(1/per_decade), ..., hi`.
pub fn decades(lo_exp: i32, hi_exp: i32, per_decade: u32) -> Vec<f64> {
    let n = (hi_exp - lo_exp) as u32 * per_decade;
    (0..=n).map(|k| 10f64.powf(lo_exp as f64 + k as f64 / per_decade as f64)).collect()
}

fn pt(x: f64, y: f64) -> HalfPlanePoint {
    HalfPlanePoint::new_unchecked(x, y)
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            lambda_grid: vec![1e-1, 1e-2, 1e-3, 1e-4],
            r_grid: vec![2.0, 10.0, 1e2, 1e3],
            mirror: false,
            // Both regimes: small Im w near the boundary, large |w|.
            w_grid: vec![
                pt(0.0, 1.0),
                pt(0.0, 1e-1),
                pt(0.0, 1e-2),
                pt(0.0, 1e-3),
                pt(5.0, 1e-3),
                pt(-1e2, 1e-2),
                pt(0.0, 10.0),
                pt(0.0, 1e2),
                pt(0.0, 1e3),
                pt(10.0, 1.0),
                pt(-1e2, 1.0),
                pt(1e3, 1.0),
            ],
            k_list: vec![0.0, 0.5],
            l_list: vec![0.0, 1.0],
            j_list: vec![0.0],
            trunc_grid: decades(2, 9, 4),
            samples: 100_000,
            seed: 0,
        }
    }
}

/// A sweep point `xi + i lambda` with `|zeta| = r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaPoint {
    pub lambda: f64,
    pub r: f64,
    pub zeta: HalfPlanePoint,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        for (name, empty) in [
            ("lambda_grid", self.lambda_grid.is_empty()),
            ("r_grid", self.r_grid.is_empty()),
            ("w_grid", self.w_grid.is_empty()),
            ("k_list", self.k_list.is_empty()),
            ("l_list", self.l_list.is_empty()),
            ("j_list", self.j_list.is_empty()),
            ("trunc_grid", self.trunc_grid.len() < 2),
        ] {
            if empty {
                return bad(format!("{name} has too few entries"));
            }
        }
        if let Some(l) = self.lambda_grid.iter().find(|&&l| !(l > 0.0 && l <= 1.0)) {
            return bad(format!("lambda {l} must lie in (0, 1]"));
        }
        if let Some(r) = self.r_grid.iter().find(|&&r| !(r >= 1.0 && r.is_finite())) {
            return bad(format!("|zeta| = {r} must be finite and at least 1"));
        }
        if let Some(v) = self.k_list.iter().chain(&self.l_list).chain(&self.j_list).find(|v| !v.is_finite()) {
            return bad(format!("exponent {v} is not finite"));
        }
        if !self.trunc_grid.windows(2).all(|w| w[1] > w[0]) || !(self.trunc_grid[0] >= 10.0) {
            return bad("trunc_grid must be increasing and start at 10 or more".into());
        }
        if self.samples == 0 {
            return bad("samples must be positive".into());
        }
        Ok(())
    }

    /// Every `(lambda, r)` pair with `xi = sqrt(r^2 - lambda^2) >= 0`, and
    /// `-xi` too when mirroring, in grid order.
    pub fn zeta_points(&self) -> Vec<ZetaPoint> {
        let mut out = Vec::new();
        for &lambda in &self.lambda_grid {
            for &r in &self.r_grid {
                let xi = (r * r - lambda * lambda).max(0.0).sqrt();
                out.push(ZetaPoint { lambda, r, zeta: pt(xi, lambda) });
                if self.mirror && xi > 0.0 {
                    out.push(ZetaPoint { lambda, r, zeta: pt(-xi, lambda) });
                }
            }
        }
        out
    }

    /// Sweep points, rejecting the configuration when one of them violates
    /// `|zeta - i| > 1`.
    pub fn atom_points(&self) -> Result<Vec<ZetaPoint>> {
        let pts = self.zeta_points();
        if let Some(p) = pts.iter().find(|p| !(p.zeta.dist(&HalfPlanePoint::i()) > 1.0)) {
            return Err(Error::Config(format!("sweep point {} violates |zeta - i| > 1", p.zeta)));
        }
        Ok(pts)
    }
}

/// Everything an experiment reads.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSettings {
    pub sweep: SweepSpec,
    pub quad: QuadConfig,
    pub sup: SupOptions,
    /// Overrides of claim limits, keyed by claim id.
    pub thresholds: BTreeMap<String, f64>,
    /// Kernel constants `c_alpha` from an earlier calibration, keyed by `alpha`.
    /// Experiments calibrate afresh when `c_0` is absent.
    pub kernel_constants: BTreeMap<String, Complex64>,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self {
            sweep: SweepSpec::default(),
            quad: QuadConfig { truncation_radius: 1e9, ..QuadConfig::default() },
            sup: SupOptions::default(),
            thresholds: BTreeMap::new(),
            kernel_constants: BTreeMap::new(),
        }
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.trim().parse::<f64>().map_err(|_| Error::Config(format!("{key}: '{v}' is not a number")))
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>> {
    if v.trim().is_empty() {
        return Ok(vec![]);
    }
    v.split(',').map(|s| parse_f64(key, s)).collect()
}

fn parse_int<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim().parse::<T>().map_err(|_| Error::Config(format!("{key}: '{v}' is not a nonnegative integer")))
}

/// Canonical map key of a kernel parameter `alpha`.
pub fn alpha_key(alpha: f64) -> String {
    format!("{alpha}")
}

/// `x:y` pairs separated by commas.
fn parse_points(key: &str, v: &str) -> Result<Vec<HalfPlanePoint>> {
    v.split(',')
        .map(|s| {
            let (x, y) = s.split_once(':').ok_or_else(|| Error::Config(format!("{key}: '{s}' is not of the form x:y")))?;
            HalfPlanePoint::new(parse_f64(key, x)?, parse_f64(key, y)?).map_err(|e| Error::Config(format!("{key}: {e}")))
        })
        .collect()
}

impl RunSettings {
    /// Limit for a claim: the override when present, else `default`.
    pub fn threshold(&self, claim_id: &str, default: f64) -> f64 {
        self.thresholds.get(claim_id).copied().unwrap_or(default)
    }

    /// Applies one typed override. Unknown keys are rejected.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        let (s, q) = (&mut self.sweep, &mut self.quad);
        match key {
            "lambda_grid" => s.lambda_grid = parse_list(key, value)?,
            "r_grid" => s.r_grid = parse_list(key, value)?,
            "mirror" => {
                s.mirror = match value.trim() {
                    "true" | "1" => true,
                    "false" | "0" => false,
                    other => return Err(Error::Config(format!("mirror: '{other}' is not a boolean"))),
                }
            }
            "w_grid" => s.w_grid = parse_points(key, value)?,
            "k_list" => s.k_list = parse_list(key, value)?,
            "l_list" => s.l_list = parse_list(key, value)?,
            "j_list" => s.j_list = parse_list(key, value)?,
            "trunc_grid" => s.trunc_grid = parse_list(key, value)?,
            "samples" => s.samples = parse_int(key, value)?,
            "seed" => s.seed = parse_int(key, value)?,
            "rel_tol" => q.rel_tol = parse_f64(key, value)?,
            "abs_tol" => q.abs_tol = parse_f64(key, value)?,
            "max_depth" => q.max_depth = parse_int(key, value)?,
            "truncation_radius" => q.truncation_radius = parse_f64(key, value)?,
            "boundary_floor" => q.boundary_floor = parse_f64(key, value)?,
            "max_cells" => q.max_cells = parse_int(key, value)?,
            "sup_per_decade" => self.sup.per_decade = parse_int(key, value)?,
            "sup_starts" => self.sup.starts = parse_int(key, value)?,
            "sup_max_iter" => self.sup.max_iter = parse_int(key, value)?,
            _ => {
                if let Some(claim) = key.strip_prefix("threshold.").filter(|c| !c.is_empty()) {
                    let t = parse_f64(key, value)?;
                    self.thresholds.insert(claim.to_string(), t);
                } else if let Some(alpha) = key.strip_prefix("c_alpha.") {
                    let alpha = parse_f64(key, alpha)?;
                    let parts = parse_list(key, value)?;
                    let [re, im] = parts[..] else {
                        return Err(Error::Config(format!("{key}: expected re,im")));
                    };
                    self.kernel_constants.insert(alpha_key(alpha), Complex64::new(re, im));
                } else {
                    return Err(Error::Config(format!("unknown configuration key '{key}'")));
                }
            }
        }
        Ok(())
    }

    /// Parses a flat `key=value` file; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
            self.apply(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        self.quad.validate()?;
        if self.sup.per_decade == 0 || self.sup.starts == 0 {
            return Err(Error::Config("sup_per_decade and sup_starts must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_and_respect_the_atom_hypothesis() {
        let s = RunSettings::default();
        s.validate().unwrap();
        assert_eq!(s.sweep.atom_points().unwrap().len(), 16);
        assert_eq!(s.sweep.w_grid.len(), 12);
    }

    #[test]
    fn mirrored_points_pair_up() {
        let s = SweepSpec { mirror: true, ..SweepSpec::default() };
        let pts = s.zeta_points();
        assert_eq!(pts.len(), 32);
        assert_eq!(pts[0].zeta.x(), -pts[1].zeta.x());
        assert!((pts[0].zeta.modulus() - pts[0].r).abs() < 1e-12);
    }

    #[test]
    fn overrides_are_typed() {
        let mut s = RunSettings::default();
        s.apply_text("# c\nlambda_grid=0.5,0.25\nw_grid=0:1,2:0.5\nrel_tol=1e-6\nthreshold.window=7\n").unwrap();
        assert_eq!(s.sweep.lambda_grid, vec![0.5, 0.25]);
        assert_eq!(s.sweep.w_grid[1], HalfPlanePoint::new(2.0, 0.5).unwrap());
        assert_eq!(s.quad.rel_tol, 1e-6);
        assert_eq!(s.threshold("window", 50.0), 7.0);
        s.apply("c_alpha.0", "-0.3,0").unwrap();
        assert_eq!(s.kernel_constants["0"], Complex64::new(-0.3, 0.0));
        assert!(matches!(s.apply("c_alpha.1", "1"), Err(Error::Config(_))));
        assert!(matches!(s.apply("nonsense", "1"), Err(Error::Config(_))));
        assert!(matches!(s.apply("rel_tol", "x"), Err(Error::Config(_))));
        assert!(matches!(s.apply("w_grid", "0:-1"), Err(Error::Config(_))));
        s.apply("rel_tol", "1").unwrap();
        assert!(matches!(s.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn sweep_validation() {
        let bad = SweepSpec { lambda_grid: vec![2.0], ..SweepSpec::default() };
        assert!(bad.validate().is_err());
        let near = SweepSpec { lambda_grid: vec![0.5], r_grid: vec![1.0], ..SweepSpec::default() };
        near.validate().unwrap();
        assert!(matches!(near.atom_points(), Err(Error::Config(_))));
    }
}
