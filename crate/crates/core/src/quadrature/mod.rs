//! Adaptive cubature over the upper half-plane and its subregions, and a
//! multi-start search for suprema.
//!
//! The whole half-plane is parametrized in log-polar coordinates
//! `z = exp(s + i phi)`, which turns both the boundary layer near the origin
//! and the far field into bounded strips of the `(s, phi)` plane. The region
//! `{|z| < R, y > floor}` is integrated adaptively; beyond `R` an optional
//! power-law tail is added analytically.
//!
//! Integrands with discontinuities are not handled by refinement. Instead the
//! caller declares the support as a union of discs, each integrated in its
//! own polar chart where the integrand is smooth.

mod chart;
mod engine;
mod rule;
mod sum;
mod sup;

use std::fmt::Debug;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfplane::{HalfPlanePoint, Region};
use chart::{graded_symmetric, graded_to_zero, Chart, Rect};

pub use sum::pairwise_sum;
pub use sup::{sup_search, SupOptions, SupResult};

/// Values the engine can integrate: real or complex.
pub trait Scalar: Copy + Send + Sync + Default + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn magnitude(self) -> f64;
    fn to_complex(self) -> Complex64;
}

impl Scalar for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn to_complex(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl Scalar for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
    fn to_complex(self) -> Complex64 {
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of halvings along each chart axis.
    pub max_depth: u32,
    pub truncation_radius: f64,
    /// Cells lying entirely below this height are never refined.
    pub boundary_floor: f64,
    /// Known exponent `p` of a `|z|^{-p}` decay, used for the analytic tail.
    pub tail_decay: Option<f64>,
    /// Cell budget; exceeding it is a convergence failure.
    pub max_cells: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-5,
            abs_tol: 1e-10,
            max_depth: 40,
            truncation_radius: 1e4,
            boundary_floor: 1e-8,
            tail_decay: None,
            max_cells: 400_000,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-2) {
            return bad(format!("rel_tol {} must lie in (0, 1e-2]", self.rel_tol));
        }
        if !(self.abs_tol > 0.0) {
            return bad(format!("abs_tol {} must be positive", self.abs_tol));
        }
        if self.max_depth == 0 || self.max_depth > 60 {
            return bad(format!("max_depth {} must lie in 1..=60", self.max_depth));
        }
        if !(self.truncation_radius >= 10.0) || !self.truncation_radius.is_finite() {
            return bad(format!("truncation_radius {} must be finite and at least 10", self.truncation_radius));
        }
        if !(self.boundary_floor > 0.0 && self.boundary_floor <= 1e-6 * self.truncation_radius) {
            return bad(format!("boundary_floor {} must lie in (0, 1e-6 * truncation_radius]", self.boundary_floor));
        }
        if let Some(p) = self.tail_decay {
            if !(p > 2.0) {
                return bad(format!("tail_decay {p} must exceed 2 for an integrable tail"));
            }
        }
        if self.max_cells < 16 {
            return bad(format!("max_cells {} is too small", self.max_cells));
        }
        Ok(())
    }

    /// The same configuration with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self { rel_tol: self.rel_tol / factor, abs_tol: self.abs_tol / factor, ..*self }
    }

    pub fn with_radius(&self, truncation_radius: f64) -> Self {
        Self { truncation_radius, ..*self }
    }

    pub fn with_tail(&self, tail_decay: Option<f64>) -> Self {
        Self { tail_decay, ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrationResult<T> {
    pub value: T,
    pub err_estimate: f64,
    pub cells: usize,
    /// Magnitude of the analytic tail (added to `value`) when `tail_decay` is
    /// set; otherwise a sampled, non-rigorous estimate of the neglected tail
    /// (not added), infinite when the samples do not decay fast enough.
    pub tail_bound: f64,
    /// Decay exponent measured from arcs at `R/2` and `R`, when no exponent
    /// was supplied and the integrand does not vanish there.
    pub tail_exponent: Option<f64>,
}

/// A point around which the integrand varies on length scale `scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hint {
    pub point: HalfPlanePoint,
    pub scale: f64,
}

/// Closed disc inside the half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Disc {
    pub center: HalfPlanePoint,
    pub radius: f64,
}

/// What the caller knows about an integrand.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Features {
    pub hints: Vec<Hint>,
    /// When set, the integrand vanishes outside these pairwise disjoint discs
    /// and is smooth inside each.
    pub discs: Option<Vec<Disc>>,
}

impl Features {
    pub fn hints(hints: Vec<Hint>) -> Self {
        Self { hints, discs: None }
    }

    pub fn discs(discs: Vec<Disc>) -> Self {
        Self { hints: vec![], discs: Some(discs) }
    }
}

fn finish<T: Scalar>(out: engine::EngineOutput<T>) -> Result<IntegrationResult<T>> {
    if !out.converged {
        return Err(Error::NotConverged { value: out.value.to_complex(), err_estimate: out.err, cells: out.cells });
    }
    Ok(IntegrationResult { value: out.value, err_estimate: out.err, cells: out.cells, tail_bound: 0.0, tail_exponent: None })
}

fn run_chart<T: Scalar, F: Fn(HalfPlanePoint) -> T + Sync>(
    chart: Chart,
    cells: Vec<Rect>,
    f: &F,
    hints: &[Hint],
    cfg: &QuadConfig,
) -> Result<IntegrationResult<T>> {
    finish(engine::integrate(&chart, cells, f, hints, cfg))
}

fn integrate_discs<T: Scalar, F: Fn(HalfPlanePoint) -> T + Sync>(
    f: &F,
    discs: &[Disc],
    hints: &[Hint],
    cfg: &QuadConfig,
) -> Result<IntegrationResult<T>> {
    for (a, d) in discs.iter().enumerate() {
        if !(d.radius > 0.0 && d.radius < d.center.y()) {
            return Err(Error::Domain(format!("disc of radius {} at {} leaves the half-plane", d.radius, d.center)));
        }
        if discs[..a].iter().any(|e| e.center.dist(&d.center) < e.radius + d.radius) {
            return Err(Error::Domain("support discs overlap".into()));
        }
    }
    let share = QuadConfig { abs_tol: cfg.abs_tol / discs.len().max(1) as f64, ..*cfg };
    let mut total = IntegrationResult { value: T::default(), err_estimate: 0.0, cells: 0, tail_bound: 0.0, tail_exponent: None };
    for d in discs {
        let chart = Chart::Disc { cx: d.center.x(), cy: d.center.y(), radius: d.radius };
        let cells = chart.initial_cells();
        let r = run_chart(chart, cells, f, hints, &share)?;
        total.value = total.value + r.value;
        total.err_estimate += r.err_estimate;
        total.cells += r.cells;
    }
    Ok(total)
}

fn log_polar(s_min: f64, s_max: f64, floor: f64) -> (Chart, Vec<Rect>) {
    let chart = Chart::LogPolar { s_min, s_max, floor };
    let cells = chart.initial_cells();
    (chart, cells)
}

/// `int_0^pi g(R e^{i phi}) dphi`, resolved toward both ends of the arc.
fn arc_integral<T: Scalar, F: Fn(HalfPlanePoint) -> T>(f: &F, radius: f64, floor: f64) -> T {
    let phi_min = (floor / radius).min(1e-3);
    let at = |phi: f64| {
        let (s, c) = phi.sin_cos();
        f(HalfPlanePoint::new_unchecked(radius * c, radius * s))
    };
    // Substitute phi = exp(t) near each end so that logarithmic boundary
    // behaviour is integrated accurately.
    let ends = |t: f64| {
        let phi = t.exp();
        let left = at(phi);
        let (s, c) = phi.sin_cos();
        let right = f(HalfPlanePoint::new_unchecked(-radius * c, radius * s));
        (left + right) * phi
    };
    let (edge, _) = rule::integrate_1d(ends, phi_min.ln(), 0.1f64.ln(), 1e-8, 0.0, 200);
    let (mid, _) = rule::integrate_1d(at, 0.1, std::f64::consts::PI - 0.1, 1e-8, 0.0, 200);
    edge + mid
}

/// `int f dV` over `{|z| < R, y > floor}` with `R` the truncation radius,
/// plus the analytic tail when `cfg.tail_decay` is set.
pub fn integrate_halfplane<T: Scalar, F: Fn(HalfPlanePoint) -> T + Sync>(
    f: F,
    features: &Features,
    cfg: &QuadConfig,
) -> Result<IntegrationResult<T>> {
    cfg.validate()?;
    if let Some(discs) = &features.discs {
        return integrate_discs(&f, discs, &features.hints, cfg);
    }
    let radius = cfg.truncation_radius;
    let (chart, cells) = log_polar(cfg.boundary_floor.ln(), radius.ln(), cfg.boundary_floor);
    let mut res = run_chart(chart, cells, &f, &features.hints, cfg)?;

    match cfg.tail_decay {
        Some(p) => {
            let tail = arc_integral(&f, radius, cfg.boundary_floor) * (radius * radius / (p - 2.0));
            res.value = res.value + tail;
            res.tail_bound = tail.magnitude();
        }
        None => {
            let abs = |z: HalfPlanePoint| f(z).magnitude();
            let outer = arc_integral(&abs, radius, cfg.boundary_floor);
            let inner = arc_integral(&abs, 0.5 * radius, cfg.boundary_floor);
            if outer > 0.0 && inner > 0.0 {
                let p = (inner / outer).log2();
                res.tail_exponent = Some(p);
                res.tail_bound = if p > 2.0 { radius * radius * outer / (p - 2.0) } else { f64::INFINITY };
            }
        }
    }
    Ok(res)
}

/// `int f dV` over `{r0 < |z| < r1, y > floor}`.
pub fn integrate_half_annulus<T: Scalar, F: Fn(HalfPlanePoint) -> T + Sync>(
    f: F,
    r0: f64,
    r1: f64,
    features: &Features,
    cfg: &QuadConfig,
) -> Result<IntegrationResult<T>> {
    cfg.validate()?;
    if !(r0 >= 0.0 && r1 > r0 && r1.is_finite()) {
        return Err(Error::Domain(format!("annulus radii ({r0}, {r1}) are not ordered")));
    }
    let s_min = r0.max(cfg.boundary_floor).ln();
    let (chart, cells) = log_polar(s_min, r1.ln(), cfg.boundary_floor);
    run_chart(chart, cells, &f, &features.hints, cfg)
}

/// `int_r f dV`, with unbounded regions truncated at the configured radius.
///
/// The cone is cut at height `R`; the strip at `|x| < R`. No tail is added.
pub fn integrate_region<T: Scalar, F: Fn(HalfPlanePoint) -> T + Sync>(
    f: F,
    region: &Region,
    features: &Features,
    cfg: &QuadConfig,
) -> Result<IntegrationResult<T>> {
    cfg.validate()?;
    region.validate()?;
    let floor = cfg.boundary_floor;
    let hints = &features.hints;
    let graded_levels = |top: f64| ((top / floor).log2().ceil().max(1.0) as u32).min(cfg.max_depth);
    let rect = |x0: f64, x1: f64, y0: f64, y1: f64| Rect { u0: x0, u1: x1, v0: y0, v1: y1 };
    let tile = |x0: f64, x1: f64, ys: &[f64]| -> Vec<Rect> { ys.windows(2).map(|w| rect(x0, x1, w[0], w[1])).collect() };
    match *region {
        Region::Ball { center, radius } => integrate_discs(&f, &[Disc { center, radius }], hints, cfg),
        Region::CarlesonSquare { w } => {
            let (x0, x1, _, y1) = Region::carleson_box(&w);
            let xs = vec![x0, w.x(), x1];
            let ys = graded_to_zero(y1, graded_levels(y1).min(12));
            let chart = Chart::Cartesian { xs, ys, floor };
            let cells = chart.initial_cells();
            run_chart(chart, cells, &f, hints, cfg)
        }
        Region::Shell { w, j } => {
            if j == 0 {
                return integrate_region(f, &Region::CarlesonSquare { w }, features, cfg);
            }
            let v_in = w.y() * 2f64.powi(j as i32 - 1);
            let v_out = 2.0 * v_in;
            let u = w.x();
            let ys = graded_to_zero(2.0 * v_out, graded_levels(2.0 * v_out).min(12));
            let mut cells = tile(u - v_out, u - v_in, &ys);
            cells.extend(tile(u + v_in, u + v_out, &ys));
            cells.push(rect(u - v_in, u, 2.0 * v_in, 2.0 * v_out));
            cells.push(rect(u, u + v_in, 2.0 * v_in, 2.0 * v_out));
            let chart = Chart::Cartesian { xs: vec![u - v_out, u + v_out], ys: vec![0.0, 2.0 * v_out], floor };
            run_chart(chart, cells, &f, hints, cfg)
        }
        Region::Cone => integrate_region(f, &Region::ConeBelow { y_max: cfg.truncation_radius }, features, cfg),
        Region::ConeBelow { y_max } => {
            let chart = Chart::Cone { y_max };
            let cells = chart.initial_cells();
            run_chart(chart, cells, &f, hints, cfg)
        }
        Region::HalfDisc { radius } => integrate_half_annulus(f, 0.0, radius, features, cfg),
        Region::Strip { y_max } => {
            let half = cfg.truncation_radius;
            let xs = graded_symmetric(half, y_max.min(1.0));
            let ys = graded_to_zero(y_max, graded_levels(y_max));
            let chart = Chart::Cartesian { xs, ys, floor };
            let cells = chart.initial_cells();
            run_chart(chart, cells, &f, hints, cfg)
        }
        Region::Zone { .. } => Err(Error::Unsupported("integration over a kernel zone".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn disc_area() {
        let r =
            integrate_region(|_| 1.0, &Region::Ball { center: HalfPlanePoint::i(), radius: 0.5 }, &Features::default(), &cfg()).unwrap();
        assert_relative_eq!(r.value, PI / 4.0, max_relative = 1e-12);
        let r = integrate_halfplane(|_| 1.0, &Features::discs(vec![Disc { center: HalfPlanePoint::i(), radius: 0.5 }]), &cfg()).unwrap();
        assert_relative_eq!(r.value, PI / 4.0, max_relative = 1e-12);
    }

    #[test]
    fn inverse_fourth_power_with_tail() {
        let f = |z: HalfPlanePoint| (z.to_complex() + Complex64::i()).norm().powi(-4);
        let r = integrate_halfplane(f, &Features::default(), &cfg().with_tail(Some(4.0))).unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-5 * PI / 4.0, "{r:?}");
        assert!(r.tail_bound > 0.0 && r.tail_bound < 1e-7);
        let bare = integrate_halfplane(f, &Features::default(), &cfg()).unwrap();
        let p = bare.tail_exponent.unwrap();
        assert!((p - 4.0).abs() < 1e-3, "{p}");
    }

    #[test]
    fn cone_trapezoid_and_shell() {
        let r = integrate_region(|_| 1.0, &Region::ConeBelow { y_max: 2.0 }, &Features::default(), &cfg()).unwrap();
        assert_relative_eq!(r.value, 3.0, max_relative = 1e-10);
        let r = integrate_region(|_| 1.0, &Region::Shell { w: HalfPlanePoint::i(), j: 1 }, &Features::default(), &cfg()).unwrap();
        assert_relative_eq!(r.value, 12.0, max_relative = 1e-10);
        let r = integrate_region(|_| 1.0, &Region::CarlesonSquare { w: p(3.0, 0.5) }, &Features::default(), &cfg()).unwrap();
        assert_relative_eq!(r.value, 2.0 * 0.5 * 0.5 * 2.0, max_relative = 1e-10);
    }

    #[test]
    fn half_annulus_area() {
        let r = integrate_half_annulus(|_| 1.0, 1.0, 3.0, &Features::default(), &cfg()).unwrap();
        assert_relative_eq!(r.value, 0.5 * PI * 8.0, max_relative = 1e-10);
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(QuadConfig { rel_tol: 1.0, ..cfg() }.validate().is_err());
        assert!(QuadConfig { truncation_radius: 5.0, ..cfg() }.validate().is_err());
        assert!(QuadConfig { boundary_floor: 1e-1, ..cfg() }.validate().is_err());
        assert!(cfg().with_tail(Some(2.0)).validate().is_err());
    }

    #[test]
    fn overlapping_discs_rejected() {
        let d = Disc { center: HalfPlanePoint::i(), radius: 0.5 };
        let e = integrate_halfplane(|_| 1.0, &Features::discs(vec![d, d]), &cfg());
        assert!(matches!(e, Err(Error::Domain(_))));
    }

    #[test]
    fn budget_exhaustion_reports_partial_result() {
        // Oscillates on every scale near the boundary, so a tiny budget cannot suffice.
        let f = |z: HalfPlanePoint| (1.0 / z.y()).sin() / z.y().sqrt();
        let tight = QuadConfig { max_cells: 200, ..cfg() };
        match integrate_region(f, &Region::CarlesonSquare { w: HalfPlanePoint::i() }, &Features::default(), &tight) {
            Err(Error::NotConverged { cells, err_estimate, .. }) => {
                assert!(cells >= 200);
                assert!(err_estimate > 0.0);
            }
            other => panic!("expected a convergence failure, got {other:?}"),
        }
    }
}
