//! Experiments on kernel integrals: the kernel equivalence, atom norms, the
//! mean-zero obstruction, weighted sufficiency and Forelli-Rudin estimates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    calibrated_c0, cumulative_integrals, gap_sample, growth_slope, hint, Claim, Collector, EquivalenceReport, Rule, RunSettings, Sample,
};
use crate::error::Result;
use crate::halfplane::{eval_weight, omega, HalfPlanePoint, WeightSpec};
use crate::kernels::{eval_kernel, KernelKind, KernelSpec};
use crate::model::{atom_pplus_closed_form, atom_projection_closed_form, ModelFunction};
use crate::operators::{project, weighted_l1_norm, Projection, ProjectionKind};
use crate::quadrature::{integrate_halfplane, Features, IntegrationResult, QuadConfig};

fn zeta_features(zeta: &HalfPlanePoint) -> Features {
    Features::hints(vec![hint(*zeta, 0.5 * zeta.y()), hint(HalfPlanePoint::i(), 0.5)])
}

/// `I(zeta) = int ||z - conj zeta|^-2 - |z + i|^-2| dV`, whose integrand
/// decays like `|z|^-3`.
pub(super) fn i_integral(zeta: &HalfPlanePoint, cfg: &QuadConfig) -> Result<IntegrationResult<f64>> {
    let i = HalfPlanePoint::i();
    let g = |z: HalfPlanePoint| (z.dist_conj(zeta).powi(-2) - z.dist_conj(&i).powi(-2)).abs();
    integrate_halfplane(g, &zeta_features(zeta), &cfg.with_tail(Some(3.0)))
}

pub(super) fn kernel_equivalence(s: &RunSettings) -> Result<EquivalenceReport> {
    let pts = s.sweep.atom_points()?;
    let c0 = calibrated_c0(s)?;
    let cfg = s.quad.with_tail(Some(3.0));
    let window = |id: &str| Rule::Window { max_spread: s.threshold(id, 50.0) };
    let mut claims = vec![
        Claim::new("I_over_omega", &["xi", "lambda"], "I(zeta)", "omega(zeta)", window("I_over_omega")),
        Claim::new("kmod_over_omega", &["xi", "lambda"], "int |K_mod(., zeta)| dV", "omega(zeta)", window("kmod_over_omega")),
        Claim::new("lower_bound", &["lambda"], "I(i lambda)", "ln(1 + 1/(4 lambda))", Rule::AtLeast { limit: 1.0 }),
    ];
    if s.sweep.mirror {
        let tol = s.threshold("mirror", 10.0 * s.quad.rel_tol);
        claims.push(Claim::new("mirror", &["xi", "lambda"], "I(-xi + i lambda)", "I(xi + i lambda)", Rule::Near { tol }));
    }

    let kmod = KernelSpec::modified(c0);
    let per_point: Vec<Result<(Sample, Sample)>> = pts
        .par_iter()
        .map(|p| {
            let zeta = p.zeta;
            let params = vec![zeta.x(), p.lambda];
            let w = omega(&zeta);
            let ival = i_integral(&zeta, &s.quad)?;
            let k = integrate_halfplane(|z| eval_kernel(&kmod, &z, &zeta).norm(), &zeta_features(&zeta), &cfg)?;
            Ok((
                Sample::new("I_over_omega", params.clone(), ival.value, w, ival.err_estimate),
                Sample::new("kmod_over_omega", params, k.value, w, k.err_estimate),
            ))
        })
        .collect();
    // The lower bound is argued for lambda < 1/4 only.
    let small: Vec<f64> = s.sweep.lambda_grid.iter().copied().filter(|&l| l < 0.25).collect();
    let spots: Vec<Result<Vec<Sample>>> = small
        .par_iter()
        .map(|&lambda| {
            let r = i_integral(&HalfPlanePoint::new_unchecked(0.0, lambda), &s.quad)?;
            let bound = (1.0 / (4.0 * lambda)).ln_1p();
            Ok(vec![Sample::new("lower_bound", vec![lambda], r.value, bound, r.err_estimate)])
        })
        .collect();

    let mut out = Collector::default();
    let mut firsts = Vec::new();
    let mut seconds = Vec::new();
    for r in per_point {
        match r {
            Ok((a, b)) => {
                firsts.push(Some(a));
                seconds.push(b);
            }
            Err(e) => {
                firsts.push(None);
                out.failures.push(e);
            }
        }
    }
    if s.sweep.mirror {
        // Mirrored points directly follow their twins.
        for k in 0..pts.len() {
            if pts[k].zeta.x() < 0.0 && k > 0 {
                if let (Some(a), Some(b)) = (&firsts[k - 1], &firsts[k]) {
                    out.push(Sample::new("mirror", b.params.clone(), b.measured, a.measured, a.err_estimate + b.err_estimate));
                }
            }
        }
    }
    for a in firsts.into_iter().flatten() {
        out.push(a);
    }
    for b in seconds {
        out.push(b);
    }
    out.absorb_all(spots);
    let notes = vec![
        format!("kernel constant c0 = {c0} from the reproducing probe; |K_mod| is integrated in modulus"),
        "lower_bound points i*lambda lie inside |zeta - i| <= 1; they bound a kernel integral, not an atom".into(),
    ];
    Ok(out.finish("kernel_equivalence", claims, notes))
}

pub(super) fn atom_norms(s: &RunSettings) -> Result<EquivalenceReport> {
    let pts = s.sweep.atom_points()?;
    let c0 = calibrated_c0(s)?;
    let cfg = s.quad.with_tail(Some(3.0));
    let window = |id: &str| Rule::Window { max_spread: s.threshold(id, 50.0) };
    let claims = vec![
        Claim::new("atom_mass", &["xi", "lambda"], "||f_zeta||_1", "2", Rule::Absolute { tol: s.threshold("atom_mass", 1e-6) }),
        Claim::new("pf_over_omega", &["xi", "lambda"], "||P f_zeta||_1", "omega(zeta)", window("pf_over_omega")),
        Claim::new("pplus_over_omega", &["xi", "lambda"], "||P+ f_zeta||_1", "omega(zeta)", window("pplus_over_omega")),
        Claim::new("pf_dominates_i", &["xi", "lambda"], "||P f_zeta||_1", "|c0| I(zeta)", Rule::AtLeast { limit: 1.0 }),
        Claim::new(
            "projection_closed_form",
            &["xi", "lambda"],
            "|P f_zeta(2i) by quadrature - closed form|",
            "|closed form|",
            Rule::AtMost { limit: s.threshold("projection_closed_form", 1e-4) },
        ),
    ];
    let proj = Projection { kind: ProjectionKind::P { alpha: 0.0 }, c_alpha: c0 };
    let results: Vec<Result<Vec<Sample>>> = pts
        .par_iter()
        .map(|p| {
            let zeta = p.zeta;
            let params = vec![zeta.x(), p.lambda];
            let w = omega(&zeta);
            let atom = ModelFunction::atom(zeta)?;
            let mass = weighted_l1_norm(&atom, 0.0, 0.0, &s.quad)?;
            let feats = zeta_features(&zeta);
            let pf = integrate_halfplane(|z| (PI * c0 * atom_projection_closed_form(&zeta, &z)).norm(), &feats, &cfg)?;
            let scale = PI * c0.norm();
            let pplus = integrate_halfplane(|z| scale * atom_pplus_closed_form(&zeta, &z).abs(), &feats, &cfg)?;
            let ival = i_integral(&zeta, &s.quad)?;
            let z2 = HalfPlanePoint::new_unchecked(0.0, 2.0);
            let quad = project(&proj, &atom, &z2, &s.quad)?;
            let closed = PI * c0 * atom_projection_closed_form(&zeta, &z2);
            Ok(vec![
                Sample::new("atom_mass", params.clone(), mass.value, 2.0, mass.err_estimate),
                Sample::new("pf_over_omega", params.clone(), pf.value, w, pf.err_estimate),
                Sample::new("pplus_over_omega", params.clone(), pplus.value, w, pplus.err_estimate),
                Sample::new(
                    "pf_dominates_i",
                    params.clone(),
                    pf.value,
                    c0.norm() * ival.value,
                    pf.err_estimate + c0.norm() * ival.err_estimate,
                ),
                gap_sample("projection_closed_form", params, quad, closed, 0.0),
            ])
        })
        .collect();
    let mut out = Collector::default();
    out.absorb_all(results);
    let notes = vec![
        format!("kernel constant c0 = {c0}; P f_zeta = pi c0 [(z - conj zeta)^-2 - (z + i)^-2] by the mean value property"),
        "P+ f_zeta uses exact disc integrals of |z - conj w|^-2 and is integrated in modulus".into(),
    ];
    Ok(out.finish("atom_norms", claims, notes))
}

pub(super) fn mean_zero(s: &RunSettings) -> Result<EquivalenceReport> {
    let c0 = calibrated_c0(s)?;
    let radii = &s.sweep.trunc_grid;
    let tol = |id: &str, d: f64| s.threshold(id, d);
    let claims = vec![
        Claim::new(
            "projection_mean_value",
            &["mass", "x", "y"],
            "|P f0(z) by quadrature - c0 mass (z - conj c)^-2|",
            "|c0 mass (z - conj c)^-2|",
            Rule::AtMost { limit: tol("projection_mean_value", 1e-4) },
        ),
        Claim::new("cone_limit", &["mass", "y"], "|z^2 P f0(iy) / c0 - int f0|", "int f0", Rule::AtMost { limit: tol("cone_limit", 0.05) }),
        Claim::new("cone_limit_trend", &["mass", "y"], "|z^2 P f0(iy) / c0 - int f0|", "int f0", Rule::Report),
        Claim::new(
            "slope_over_mass",
            &["mass"],
            "d ||P f0||_{L1(|z|<R)} / d ln R / (pi |c0|)",
            "int f0",
            Rule::Near { tol: tol("slope_over_mass", 0.10) },
        ),
        Claim::new("slope_linearity", &["mass"], "slope(mass) / slope(1)", "mass", Rule::Near { tol: tol("slope_linearity", 0.10) }),
        Claim::new(
            "atom_slope",
            &["zeta_y"],
            "slope for the mean-zero atom / (pi |c0|)",
            "0",
            Rule::Absolute { tol: tol("atom_slope", 0.01) },
        ),
    ];
    let center = HalfPlanePoint::new_unchecked(0.0, 2.0);
    let masses = [1.0, 2.0];
    let mut out = Collector::default();

    // Projection by quadrature against the mean value closed form, and the
    // cone limit along the imaginary axis.
    let proj = Projection { kind: ProjectionKind::P { alpha: 0.0 }, c_alpha: c0 };
    let closed = |m: f64, z: &HalfPlanePoint| c0 * m * (z.to_complex() - center.to_complex().conj()).powi(-2);
    let pointwise: Vec<Result<Vec<Sample>>> = masses
        .par_iter()
        .map(|&m| {
            let f = ModelFunction::bump(center, 1.0, m)?;
            let mut v = Vec::new();
            for (x, y) in [(0.0, 1.0), (1.0, 0.1), (-3.0, 4.0)] {
                let z = HalfPlanePoint::new_unchecked(x, y);
                v.push(gap_sample("projection_mean_value", vec![m, x, y], project(&proj, &f, &z, &s.quad)?, closed(m, &z), 0.0));
            }
            for y in [10.0, 100.0, 1000.0] {
                let z = HalfPlanePoint::new_unchecked(0.0, y);
                let pf = project(&proj, &f, &z, &s.quad)?;
                let limit = z.to_complex().powi(2) * pf / c0;
                let id = if y == 1000.0 { "cone_limit" } else { "cone_limit_trend" };
                v.push(gap_sample(id, vec![m, y], limit, Complex64::new(m, 0.0), 0.0));
            }
            Ok(v)
        })
        .collect();
    out.absorb_all(pointwise);

    // Truncated norms: the bump projection from the mean value property, the
    // atom projection from its closed form.
    let hints = vec![hint(center, 0.5), hint(HalfPlanePoint::i(), 0.5)];
    let norm_scale = PI * c0.norm();
    let slopes: Vec<Result<f64>> = masses
        .par_iter()
        .map(|&m| {
            let (n, _) = cumulative_integrals(|z| closed(m, &z).norm(), radii, &hints, &s.quad)?;
            Ok(growth_slope(radii, &n).unwrap_or(f64::NAN) / norm_scale)
        })
        .collect();
    let mut base = None;
    for (&m, r) in masses.iter().zip(slopes) {
        match r {
            Ok(slope) => {
                out.push(Sample::new("slope_over_mass", vec![m], slope, m, 0.0));
                if m == 1.0 {
                    base = Some(slope);
                } else if let Some(b) = base {
                    out.push(Sample::new("slope_linearity", vec![m], slope / b, m, 0.0));
                }
            }
            Err(e) => out.failures.push(e),
        }
    }
    let zeta = HalfPlanePoint::new_unchecked(0.0, 3.0);
    let atom_hints = vec![hint(zeta, 1.5), hint(HalfPlanePoint::i(), 0.5)];
    match cumulative_integrals(|z| (PI * c0 * atom_projection_closed_form(&zeta, &z)).norm(), radii, &atom_hints, &s.quad) {
        Ok((n, _)) => {
            let slope = growth_slope(radii, &n).unwrap_or(f64::NAN) / norm_scale;
            out.push(Sample::new("atom_slope", vec![zeta.y()], slope, 0.0, 0.0));
        }
        Err(e) => out.failures.push(e),
    }
    let notes = vec![
        format!("kernel constant c0 = {c0}; the limit z^2 Pf -> c0 int f is divided by c0"),
        "f0 is a uniform bump on B(2i, 1); slopes are fitted against ln R on the largest decade of trunc_grid".into(),
    ];
    Ok(out.finish("mean_zero", claims, notes))
}

/// Tail of `int |K(., zeta)| omega^k dV` beyond `R` for `k < -1`, from
/// `|K| ~ |c0| r^-2` and `omega ~ 1 + ln r` on the far arc.
fn log_tail(c0_abs: f64, k: f64, radius: f64) -> f64 {
    c0_abs * PI * (1.0 + radius.ln()).powf(k + 1.0) / (-(k + 1.0))
}

fn exponent_tag(k: f64) -> String {
    format!("k{k}")
}

pub(super) fn weighted_sufficiency(s: &RunSettings) -> Result<EquivalenceReport> {
    let pts = s.sweep.atom_points()?;
    let c0 = calibrated_c0(s)?;
    let mut claims = Vec::new();
    for &k in &s.sweep.k_list {
        let id = format!("kernel_{}", exponent_tag(k));
        let (predicted, default) = if k < -1.0 {
            ("1", 20.0)
        } else if k == -1.0 {
            ("1 + ln+ ln+ (1/lambda) + ln+ ln+ |zeta|", 50.0)
        } else {
            ("omega(zeta)^(k+1)", 50.0)
        };
        let measured = if k < -1.0 { "int |K(., zeta)| omega^k dV" } else { "int |K_mod(., zeta)| omega^k dV" };
        let rule = Rule::Window { max_spread: s.threshold(&id, default) };
        claims.push(Claim::new(&id, &["k", "xi", "lambda"], measured, predicted, rule));
    }
    let plain = KernelSpec { kind: KernelKind::Plain { alpha: 0.0 }, c_alpha: c0 };
    let modified = KernelSpec::modified(c0);
    let jobs: Vec<(f64, HalfPlanePoint, f64)> =
        s.sweep.k_list.iter().flat_map(|&k| pts.iter().map(move |p| (k, p.zeta, p.lambda))).collect();
    let results: Vec<Result<Vec<Sample>>> = jobs
        .par_iter()
        .map(|&(k, zeta, lambda)| {
            let id = format!("kernel_{}", exponent_tag(k));
            let params = vec![k, zeta.x(), lambda];
            let feats = zeta_features(&zeta);
            let weight = |z: &HalfPlanePoint| if k == 0.0 { 1.0 } else { omega(z).powf(k) };
            if k < -1.0 {
                let cfg = s.quad.with_tail(None);
                let r = integrate_halfplane(|z| eval_kernel(&plain, &z, &zeta).norm() * weight(&z), &feats, &cfg)?;
                let tail = log_tail(c0.norm(), k, cfg.truncation_radius);
                let err = r.err_estimate + tail / (1.0 + cfg.truncation_radius.ln());
                Ok(vec![Sample::new(&id, params, r.value + tail, 1.0, err)])
            } else {
                let cfg = s.quad.with_tail(Some(3.0));
                let r = integrate_halfplane(|z| eval_kernel(&modified, &z, &zeta).norm() * weight(&z), &feats, &cfg)?;
                let predicted = if k == -1.0 { eval_weight(&WeightSpec::LogLog, &zeta) } else { omega(&zeta).powf(k + 1.0) };
                Ok(vec![Sample::new(&id, params, r.value, predicted, r.err_estimate)])
            }
        })
        .collect();
    let mut out = Collector::default();
    out.absorb_all(results);
    let notes = vec![
        format!("kernel constant c0 = {c0}; kernels are integrated in modulus"),
        "for k < -1 the far tail (1 + ln R)^(k+1) |c0| pi / |k+1| is added analytically".into(),
    ];
    Ok(out.finish("weighted_sufficiency", claims, notes))
}

/// The four weights of the Forelli-Rudin sweep.
fn forelli_rudin_weights() -> [(&'static str, WeightSpec); 4] {
    [
        ("unit", WeightSpec::General { eps: [false; 4], k: 0.0, s: 0.0 }),
        ("both_logs", WeightSpec::General { eps: [true, true, false, false], k: 1.0, s: 0.0 }),
        ("boundary_log", WeightSpec::General { eps: [false, true, false, false], k: 1.0, s: 0.0 }),
        ("inverse_with_loglog", WeightSpec::General { eps: [true, true, true, true], k: -1.0, s: 1.0 }),
    ]
}

/// Ten points with `Im z0` spanning `[1e-3, 1e3]`.
fn forelli_rudin_points() -> Vec<HalfPlanePoint> {
    let mut v: Vec<HalfPlanePoint> = (-3..=3).map(|e| HalfPlanePoint::new_unchecked(0.0, 10f64.powi(e))).collect();
    v.push(HalfPlanePoint::new_unchecked(5.0, 1e-3));
    v.push(HalfPlanePoint::new_unchecked(-50.0, 0.1));
    v.push(HalfPlanePoint::new_unchecked(300.0, 10.0));
    v
}

pub(super) fn forelli_rudin(s: &RunSettings) -> Result<EquivalenceReport> {
    let alpha = 1.0;
    let weights = forelli_rudin_weights();
    let mut claims = Vec::new();
    for beta in [0.0, 1.0] {
        for (name, _) in &weights {
            let id = format!("beta{beta}_{name}");
            let rule = Rule::Window { max_spread: s.threshold(&id, 100.0) };
            claims.push(Claim::new(
                &id,
                &["beta", "x0", "y0"],
                "y0^alpha int Omega dV_beta / |z - conj z0|^(2+alpha+beta)",
                "Omega(z0)",
                rule,
            ));
        }
        // With Omega = 1 the integral scales exactly: 2 for beta = 0, pi/4 for beta = 1.
        let id = format!("beta{beta}_unit_exact");
        let rule = Rule::Near { tol: s.threshold(&id, 1e-4) };
        claims.push(Claim::new(&id, &["beta", "x0", "y0"], "y0 int dV_beta / |z - conj z0|^(3+beta)", "2 (beta 0) or pi/4 (beta 1)", rule));
    }
    let cfg = s.quad.with_tail(Some(3.0));
    let jobs: Vec<(f64, usize, HalfPlanePoint)> = [0.0, 1.0]
        .iter()
        .flat_map(|&b| (0..weights.len()).flat_map(move |w| forelli_rudin_points().into_iter().map(move |z0| (b, w, z0))))
        .collect();
    let results: Vec<Result<Vec<Sample>>> = jobs
        .par_iter()
        .map(|&(beta, wi, z0)| {
            let (name, weight) = weights[wi];
            let p = 2.0 + alpha + beta;
            let g = |z: HalfPlanePoint| {
                let yb = if beta == 0.0 { 1.0 } else { z.y().powf(beta) };
                eval_weight(&weight, &z) * yb * z.dist_conj(&z0).powf(-p)
            };
            let r = integrate_halfplane(g, &Features::hints(vec![hint(z0, 0.5 * z0.y())]), &cfg)?;
            let scale = z0.y().powf(alpha);
            let params = vec![beta, z0.x(), z0.y()];
            let mut v = vec![Sample::new(
                &format!("beta{beta}_{name}"),
                params.clone(),
                scale * r.value,
                eval_weight(&weight, &z0),
                scale * r.err_estimate,
            )];
            if name == "unit" {
                let exact = if beta == 0.0 { 2.0 } else { PI / 4.0 };
                v.push(Sample::new(&format!("beta{beta}_unit_exact"), params, scale * r.value, exact, scale * r.err_estimate));
            }
            Ok(v)
        })
        .collect();
    let mut out = Collector::default();
    out.absorb_all(results);
    let notes = vec![
        "alpha = 1; weights: unit, ln(e+|z|) + ln(e+1/y), 1 + ln(e+1/y), and (ln(e+|z|) + ln(e+1/y))^-1 ln(e + ln(e+|z|) + ln(e+1/y))"
            .into(),
    ];
    Ok(out.finish("forelli_rudin", claims, notes))
}
