//! Acceptance run: one pass/fail line per criterion, nonzero exit when any
//! criterion fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use bergman_lab::halfplane::{HalfPlanePoint, Region};
use bergman_lab::harness::{default_settings, run_experiment, CheckResult, EquivalenceReport, Sample};
use bergman_lab::kernels::calibrate_c_alpha;
use bergman_lab::model::ModelFunction;
use bergman_lab::operators::{project, Projection, ProjectionKind};
use bergman_lab::quadrature::{integrate_halfplane, integrate_region, Features, QuadConfig};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }

    fn all(parts: Vec<Outcome>) -> Self {
        let pass = parts.iter().all(|p| p.pass);
        let detail = parts.iter().map(|p| format!("{}{}", if p.pass { "" } else { "FAILED " }, p.detail)).collect::<Vec<_>>();
        Self { pass, detail: detail.join("; ") }
    }
}

fn run(id: &str) -> (EquivalenceReport, Duration) {
    let start = Instant::now();
    let report = run_experiment(id, &default_settings(id).unwrap()).unwrap();
    (report, start.elapsed())
}

fn check<'a>(r: &'a EquivalenceReport, id: &str) -> &'a CheckResult {
    r.check(id).unwrap_or_else(|| panic!("{}: no claim {id}", r.experiment))
}

fn samples<'a>(r: &'a EquivalenceReport, id: &'a str) -> impl Iterator<Item = &'a Sample> + 'a {
    r.samples.iter().filter(move |s| s.claim_id == id)
}

fn converged(r: &EquivalenceReport) -> Outcome {
    Outcome::new(r.converged, format!("{}: {} quadrature failures", r.experiment, r.failures.len()))
}

fn spread(r: &EquivalenceReport, id: &str, max: f64) -> Outcome {
    let c = check(r, id);
    let s = c.ratio_max / c.ratio_min;
    Outcome::new(c.samples > 0 && c.ratio_min > 0.0 && s <= max, format!("{id} spread {s:.3} <= {max} (n={})", c.samples))
}

fn within(label: &str, t: Duration, limit: Duration) -> Outcome {
    Outcome::new(t <= limit, format!("{label} runtime {:.1}s < {}s", t.as_secs_f64(), limit.as_secs()))
}

fn atom_mass() -> Outcome {
    let (r, t) = run("atom_norms");
    let masses: Vec<&Sample> = samples(&r, "atom_mass").collect();
    let worst = masses.iter().map(|s| (s.measured - 2.0).abs()).fold(0.0, f64::max);
    Outcome::all(vec![
        converged(&r),
        Outcome::new(masses.len() >= 12 && worst <= 1e-6, format!("{} points, max |mass - 2| = {worst:.2e}", masses.len())),
        within("atom_norms", t, Duration::from_secs(30)),
    ])
}

fn kernel_equivalence(kernel: &EquivalenceReport, atoms: &EquivalenceReport, t: Duration) -> Outcome {
    let sweep = samples(kernel, "I_over_omega").count();
    Outcome::all(vec![
        converged(kernel),
        converged(atoms),
        Outcome::new(sweep >= 16, format!("{sweep} sweep points")),
        spread(kernel, "I_over_omega", 50.0),
        spread(atoms, "pf_over_omega", 50.0),
        spread(atoms, "pplus_over_omega", 50.0),
        within("kernel_equivalence + atom_norms", t, Duration::from_secs(300)),
    ])
}

fn lower_bound(kernel: &EquivalenceReport) -> Outcome {
    match samples(kernel, "lower_bound").find(|s| s.params == [1e-4]) {
        Some(s) => Outcome::new(
            s.measured + s.err_estimate >= s.predicted,
            format!("I(1e-4 i) = {:.6} >= ln(1 + 1/(4 lambda)) = {:.6} - {:.1e}", s.measured, s.predicted, s.err_estimate),
        ),
        None => Outcome::new(false, "no sample at lambda = 1e-4"),
    }
}

fn calibration() -> Outcome {
    let start = Instant::now();
    let cfg = QuadConfig::default();
    let mut parts = Vec::new();
    let c0 = calibrate_c_alpha(0.0, &cfg).unwrap();
    parts.push(Outcome::new((c0.norm() * PI - 1.0).abs() <= 1e-3, format!("|c0 pi| = {:.9}", c0.norm() * PI)));
    let points = [(0.0, 0.5), (2.0, 1.0), (-3.0, 0.2), (1.0, 4.0), (-10.0, 7.0)];
    for alpha in [0.0, 1.0] {
        let p = Projection::calibrated(ProjectionKind::P { alpha }, &cfg).unwrap();
        for n in [3u32, 4] {
            let f = ModelFunction::RationalSymbol { n };
            let tail = cfg.with_tail(Some(2.0 + n as f64));
            let worst = points
                .iter()
                .map(|&(x, y)| {
                    let z = HalfPlanePoint::new(x, y).unwrap();
                    let exact = f.eval(&z);
                    (project(&p, &f, &z, &tail).unwrap() - exact).norm() / exact.norm()
                })
                .fold(0.0, f64::max);
            parts.push(Outcome::new(worst <= 1e-4, format!("alpha={alpha} n={n} rel {worst:.1e}")));
        }
    }
    parts.push(within("calibration", start.elapsed(), Duration::from_secs(120)));
    Outcome::all(parts)
}

fn mean_zero() -> Outcome {
    let (r, _) = run("mean_zero");
    let cone: Vec<&Sample> = samples(&r, "cone_limit").collect();
    let cone_ok = !cone.is_empty() && cone.iter().all(|s| s.params[1] == 1e3 && s.measured <= 0.05 * s.predicted);
    let worst = cone.iter().map(|s| s.ratio).fold(0.0, f64::max);
    let slopes: Vec<&Sample> = samples(&r, "slope_over_mass").collect();
    let positive = slopes.len() >= 2 && slopes.iter().all(|s| s.measured > 0.0);
    let lin = check(&r, "slope_linearity");
    let lin_dev = (lin.ratio_min - 1.0).abs().max((lin.ratio_max - 1.0).abs());
    Outcome::all(vec![
        converged(&r),
        Outcome::new(cone_ok, format!("z^2 Pf(1000i) off by {:.2}% of int f", 100.0 * worst)),
        Outcome::new(positive, format!("{} positive slopes", slopes.len())),
        Outcome::new(lin.samples > 0 && lin_dev <= 0.10, format!("slope linear in mass within {:.2}%", 100.0 * lin_dev)),
    ])
}

fn theta() -> Outcome {
    let (r, _) = run("theta");
    let viol = samples(&r, "i_violations").next();
    let (n, v) = viol.map(|s| (s.params[0], s.measured)).unwrap_or((0.0, f64::NAN));
    let mut parts =
        vec![converged(&r), Outcome::new(n >= 1e5 && v == 0.0, format!("{v} violations in {n} samples")), spread(&r, "ii_window", 100.0)];
    let blochs: Vec<String> =
        r.checks.iter().map(|c| c.claim.id.clone()).filter(|id| id.starts_with("iii_") || id == "iv_logtheta").collect();
    for id in &blochs {
        parts.push(spread(&r, id, 20.0));
    }
    let w = samples(&r, "iv_logtheta").count();
    parts.push(Outcome::new(blochs.len() >= 2 && w >= 12, format!("{w} w points")));
    Outcome::all(parts)
}

fn forelli_rudin() -> Outcome {
    let (r, t) = run("forelli_rudin");
    let mut parts = vec![converged(&r)];
    let windows: Vec<String> =
        r.checks.iter().map(|c| c.claim.id.clone()).filter(|id| id.starts_with("beta") && !id.ends_with("unit_exact")).collect();
    for id in &windows {
        parts.push(spread(&r, id, 100.0));
    }
    let y0: Vec<f64> = windows.first().map(|id| samples(&r, id).map(|s| s.params[2]).collect()).unwrap_or_default();
    let span = y0.iter().copied().fold(f64::INFINITY, f64::min) <= 1e-3 && y0.iter().copied().fold(0.0, f64::max) >= 1e3;
    parts.push(Outcome::new(windows.len() == 8 && y0.len() >= 10 && span, format!("{} windows, {} z0 values", windows.len(), y0.len())));
    parts.push(within("forelli_rudin", t, Duration::from_secs(600)));
    Outcome::all(parts)
}

fn factorization() -> Outcome {
    let (r, _) = run("factorization");
    let mut parts = vec![converged(&r)];
    for k in ["0", "0.5"] {
        for l in ["0", "1"] {
            parts.push(spread(&r, &format!("product_k{k}_l{l}"), 20.0));
        }
    }
    let ws: Vec<(f64, f64)> = samples(&r, "product_k0_l0").map(|s| (s.params[2], s.params[3])).collect();
    let small = ws.iter().any(|w| w.1 <= 1e-3);
    let large = ws.iter().any(|w| w.0.hypot(w.1) >= 1e3);
    parts.push(Outcome::new(small && large, format!("{} w points cover small Im w and large |w|", ws.len())));
    Outcome::all(parts)
}

fn hankel() -> Outcome {
    let (r, _) = run("hankel");
    let cauchy = samples(&r, "cauchy").next().map(|s| s.ratio).unwrap_or(f64::NAN);
    let slope = check(&r, "slope_over_pairing");
    let slope_dev = (slope.ratio_min - 1.0).abs().max((slope.ratio_max - 1.0).abs());
    let growth: Vec<f64> = samples(&r, "log_symbol_growth").map(|s| s.ratio).collect();
    Outcome::all(vec![
        converged(&r),
        Outcome::new(cauchy < 0.02, format!("(a) N(1e4) - N(1e2) = {:.2}% of N(1e4)", 100.0 * cauchy)),
        Outcome::new(slope.samples >= 2 && slope_dev <= 0.15, format!("(b) slope / |<b,f>| within {:.2}%", 100.0 * slope_dev)),
        Outcome::new(
            check(&r, "bounded_symbol").pass,
            format!("(c) Q <= 1 for (z+i)^-1, max {:.3e}", check(&r, "bounded_symbol").ratio_max),
        ),
        Outcome::new(
            growth.len() >= 3 && growth.iter().all(|g| *g > 1.0),
            format!("(c) Q grows for log(z+i) over {} decades", growth.len()),
        ),
    ])
}

fn oracles() -> Outcome {
    let cfg = QuadConfig::default();
    let q = PI / 4.0;
    let inv4 = integrate_halfplane(
        |z: HalfPlanePoint| (z.to_complex() + Complex64::i()).norm().powi(-4),
        &Features::default(),
        &cfg.with_tail(Some(4.0)),
    )
    .unwrap()
    .value;
    let ball = Region::Ball { center: HalfPlanePoint::i(), radius: 0.5 };
    let disc = integrate_region(|_| 1.0, &ball, &Features::default(), &cfg).unwrap().value;

    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    for n in 0..1000 {
        let y = 10f64.powf(rng.gen_range(-4.0..4.0));
        let x = rng.gen_range(-1.0..1.0) * 10f64.powf(rng.gen_range(-4.0..4.0));
        let z = HalfPlanePoint::new(x, y).unwrap();
        let w = HalfPlanePoint::new(rng.gen_range(-3.0..3.0), 10f64.powf(rng.gen_range(-2.0..2.0))).unwrap();
        let f = match n % 6 {
            0 => ModelFunction::RationalSymbol { n: 1 + n as u32 % 4 },
            1 => ModelFunction::CubicKernel { zeta0: w, scale: Complex64::new(0.3, -1.2) },
            2 => ModelFunction::LogShift { a: Complex64::i() },
            3 => ModelFunction::Theta { w },
            4 => ModelFunction::ThetaPower { w, k: 0.5 },
            _ => ModelFunction::WeightedAtom { w, l: 1.0, k: 0.5 },
        };
        // Holomorphic, so the derivative is the x-derivative; the step is a
        // fixed fraction of the distance to the nearest singularity.
        let s = z.dist_conj(&HalfPlanePoint::i()).min(z.dist_conj(&w));
        let h = 1e-3 * s;
        let at = |dx: f64| f.eval(&HalfPlanePoint::new(x + dx, y).unwrap());
        let fd = (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h);
        let d = f.derivative(&z).unwrap();
        worst = worst.max((fd - d).norm() / d.norm());
    }
    Outcome::all(vec![
        Outcome::new((inv4 - q).abs() <= 1e-5 * q, format!("int |z+i|^-4 rel {:.1e}", (inv4 - q).abs() / q)),
        Outcome::new((disc - q).abs() <= 1e-5 * q, format!("disc area rel {:.1e}", (disc - q).abs() / q)),
        Outcome::new(worst <= 1e-6, format!("derivative vs finite difference max rel {worst:.1e} at 1000 points")),
    ])
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut parts = Vec::new();
    for id in ["theta", "atom_norms"] {
        let out = |n: u32| {
            let path = dir.path().join(format!("{id}_{n}.csv"));
            let status =
                Command::new(env!("CARGO_BIN_EXE_blab")).args(["run", id, "--seed", "7", "--out"]).arg(&path).output().unwrap().status;
            (status.code(), std::fs::read(&path).unwrap_or_default())
        };
        let (a, b) = (out(0), out(1));
        parts.push(Outcome::new(
            a.0 == Some(0) && !a.1.is_empty() && a == b,
            format!("{id}: {} bytes, identical = {}", a.1.len(), a.1 == b.1),
        ));
    }
    Outcome::all(parts)
}

fn main() -> ExitCode {
    let mut results = Vec::new();
    let mut report = |n: u32, name: &str, o: Outcome| {
        println!("criterion {n:>2} [{}] {name}: {}", if o.pass { "pass" } else { "FAIL" }, o.detail);
        results.push(o.pass);
    };
    report(1, "atom mass", atom_mass());
    let start = Instant::now();
    let (kernel, _) = run("kernel_equivalence");
    let (atoms, _) = run("atom_norms");
    report(2, "kernel equivalence", kernel_equivalence(&kernel, &atoms, start.elapsed()));
    report(3, "lower bound spot check", lower_bound(&kernel));
    report(4, "calibration", calibration());
    report(5, "mean-zero necessity", mean_zero());
    report(6, "theta properties", theta());
    report(7, "forelli-rudin sweep", forelli_rudin());
    report(8, "factorization", factorization());
    report(9, "hankel dichotomy", hankel());
    report(10, "quadrature oracles", oracles());
    report(11, "determinism", determinism());
    let failed = results.iter().filter(|p| !**p).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
