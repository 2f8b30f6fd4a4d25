use std::f64::consts::PI;

use approx::assert_relative_eq;
use bergman_lab::halfplane::{eval_weight, log_power_integral, omega, HalfPlanePoint, WeightSpec};
use bergman_lab::model::ModelFunction;
use bergman_lab::quadrature::{integrate_halfplane, sup_search, Features, Hint, QuadConfig, SupOptions};
use num_complex::Complex64;
use proptest::prelude::*;

fn p(x: f64, y: f64) -> HalfPlanePoint {
    HalfPlanePoint::new(x, y).unwrap()
}

fn shifted_power(a: HalfPlanePoint, n: i32) -> impl Fn(HalfPlanePoint) -> Complex64 + Sync {
    move |z: HalfPlanePoint| Complex64::new(z.x() - a.x(), z.y() + a.y()).powi(-n)
}

/// `(|value - exact|, cells)` at the default tolerance and at half of it.
fn errors_at_two_tolerances<F: Fn(HalfPlanePoint) -> f64 + Sync + Copy>(
    f: F,
    features: &Features,
    cfg: QuadConfig,
    exact: f64,
) -> [(f64, usize); 2] {
    [cfg, QuadConfig { rel_tol: 0.5 * cfg.rel_tol, ..cfg }].map(|c| {
        let r = integrate_halfplane(f, features, &c).unwrap();
        ((r.value - exact).abs(), r.cells)
    })
}

#[test]
fn halving_rel_tol_never_hurts_the_oracles() {
    let cfg = QuadConfig::default();
    let ball = bergman_lab::quadrature::Disc { center: HalfPlanePoint::i(), radius: 0.5 };
    let atom = ModelFunction::atom(p(0.0, 10.0)).unwrap();
    let runs = [
        errors_at_two_tolerances(|_| 1.0, &Features::discs(vec![ball]), cfg, PI / 4.0),
        errors_at_two_tolerances(
            |z| (z.to_complex() + Complex64::i()).norm().powi(-4),
            &Features::default(),
            cfg.with_tail(Some(4.0)),
            PI / 4.0,
        ),
        errors_at_two_tolerances(|z| atom.eval(&z).norm(), &atom.features(), cfg, 2.0),
    ];
    for [(e1, c1), (e2, c2)] in runs {
        // Errors already at rounding level may move by a few ulps.
        assert!(e2 <= e1 + 1e-14, "{e2:e} > {e1:e}");
        assert!(c2 >= c1, "{c2} < {c1}");
    }
}

#[test]
fn atom_has_zero_integral_and_mass_two() {
    let atom = ModelFunction::atom(p(-3.0, 0.25)).unwrap();
    let cfg = QuadConfig::default();
    let v = integrate_halfplane(|z| atom.eval(&z), &atom.features(), &cfg).unwrap();
    let m = integrate_halfplane(|z| atom.eval(&z).norm(), &atom.features(), &cfg).unwrap();
    assert!(v.value.norm() <= 1e-9, "{v:?}");
    assert_relative_eq!(m.value, 2.0, max_relative = 1e-6);
}

#[test]
fn sup_search_is_monotone_in_grid_density() {
    let cfg = QuadConfig::default();
    let w = p(0.7, 0.05);
    let theta = ModelFunction::Theta { w };
    let objectives: [Box<dyn Fn(HalfPlanePoint) -> f64 + Sync>; 3] = [
        Box::new(|z: HalfPlanePoint| z.y() / (z.to_complex() + Complex64::i()).norm()),
        Box::new(|z: HalfPlanePoint| z.y() * theta.derivative(&z).unwrap().norm() / omega(&z)),
        Box::new(|z: HalfPlanePoint| z.y() * (z.x() - 2.0).abs() / (1.0 + z.modulus().powi(2))),
    ];
    for g in &objectives {
        let mut last = 0.0;
        for per_decade in [1, 2, 4, 8] {
            let r = sup_search(g, &[Hint { point: w, scale: 0.5 * w.y() }], &cfg, &SupOptions { per_decade, ..SupOptions::default() });
            assert!(r.sup >= last * (1.0 - 1e-12), "per_decade {per_decade}: {} < {last}", r.sup);
            last = r.sup;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn integration_is_linear(
        ax in -3f64..3.0, ay in 0.05f64..3.0, bx in -3f64..3.0, by in 0.05f64..3.0,
        c1 in -2f64..2.0, c2 in -2f64..2.0, d1 in -2f64..2.0, d2 in -2f64..2.0,
    ) {
        let (a, b) = (p(ax, ay), p(bx, by));
        let (s, t) = (Complex64::new(c1, c2), Complex64::new(d1, d2));
        let (f, g) = (shifted_power(a, 3), shifted_power(b, 4));
        let feats = Features::hints(vec![Hint { point: a, scale: 0.5 * ay }, Hint { point: b, scale: 0.5 * by }]);
        let cfg = QuadConfig::default().with_tail(Some(6.0));
        let fi = integrate_halfplane(&f, &feats, &cfg).unwrap();
        let gi = integrate_halfplane(&g, &feats, &cfg).unwrap();
        let sum = integrate_halfplane(|z| s * f(z) + t * g(z), &feats, &cfg).unwrap();
        let gap = (sum.value - s * fi.value - t * gi.value).norm();
        let budget = |v: f64| cfg.abs_tol.max(cfg.rel_tol * v);
        let total = budget(sum.value.norm()) + s.norm() * budget(fi.value.norm()) + t.norm() * budget(gi.value.norm());
        prop_assert!(gap <= 3.0 * total, "gap {} vs budget {}", gap, total);
    }

    #[test]
    fn x_even_integrand_doubles_its_right_half(c in 0.1f64..4.0, h in 0.05f64..2.0) {
        // |z - c - ih|^-4 + |z + c - ih|^-4 is even in x.
        let bump = |z: HalfPlanePoint, s: f64| ((z.x() - s).powi(2) + (z.y() + h).powi(2)).powi(-2);
        let even = |z: HalfPlanePoint| bump(z, c) + bump(z, -c);
        let right = |z: HalfPlanePoint| if z.x() > 0.0 { even(z) } else { 0.0 };
        let feats = Features::hints(vec![Hint { point: p(c, h), scale: 0.5 * h }, Hint { point: p(-c, h), scale: 0.5 * h }]);
        let cfg = QuadConfig::default().with_tail(Some(4.0));
        let full = integrate_halfplane(even, &feats, &cfg).unwrap();
        let half = integrate_halfplane(right, &feats, &cfg).unwrap();
        let budget = cfg.abs_tol.max(cfg.rel_tol * full.value);
        prop_assert!((2.0 * half.value - full.value).abs() <= 2.0 * 3.0 * budget,
            "2 x {} vs {}", half.value, full.value);
    }

    #[test]
    fn derivatives_match_central_differences(
        x in -10f64..10.0, ly in -2f64..2.0, wx in -3f64..3.0, lwy in -2f64..1.0, which in 0usize..6,
    ) {
        let (z, w) = (p(x, 10f64.powf(ly)), p(wx, 10f64.powf(lwy)));
        let f = match which {
            0 => ModelFunction::RationalSymbol { n: 2 },
            1 => ModelFunction::CubicKernel { zeta0: w, scale: Complex64::new(1.0, 0.5) },
            2 => ModelFunction::LogShift { a: Complex64::i() },
            3 => ModelFunction::Theta { w },
            4 => ModelFunction::ThetaPower { w, k: 0.5 },
            _ => ModelFunction::LogTheta { w },
        };
        let h = 1e-5 * z.y();
        // The step actually taken, after rounding x + h.
        let (xp, xm) = (x + h, x - h);
        let fd = (f.eval(&p(xp, z.y())) - f.eval(&p(xm, z.y()))) / (xp - xm);
        let d = f.derivative(&z).unwrap();
        prop_assert!((fd - d).norm() <= 1e-6 * d.norm(), "{:?} at {}: {} vs {}", f, z, fd, d);
    }

    #[test]
    fn theta_real_part_clears_its_lower_bound(
        x in -1e6f64..1e6, ly in -8f64..6.0, wx in -1e6f64..1e6, lwy in -8f64..6.0,
    ) {
        let (z, w) = (p(x, 10f64.powf(ly)), p(wx, 10f64.powf(lwy)));
        let theta = ModelFunction::Theta { w }.eval(&z);
        let bound = 1.0 - 2f64.ln() + (z.to_complex() + Complex64::i()).norm().ln();
        prop_assert!(theta.re > bound);
    }

    #[test]
    fn loglog_weight_tracks_log_omega(x in -1e12f64..1e12, ly in -200f64..12.0) {
        let z = p(x, 10f64.powf(ly));
        let a = 1.0 + omega(&z).ln();
        let b = eval_weight(&WeightSpec::LogLog, &z);
        prop_assert!(a <= 4.0 * b && b <= 4.0 * a, "{} vs {}", a, b);
    }

    #[test]
    fn log_power_integral_has_a_finite_limit_below_minus_one(k in -5f64..-1.05) {
        let limit = -2f64.ln().powf(k + 1.0) / (k + 1.0);
        for t in [1e3, 1e6, 1e12] {
            let v = log_power_integral(k, t).unwrap();
            prop_assert!(v > 0.0 && v <= limit, "{} at t = {}", v, t);
        }
    }
}
