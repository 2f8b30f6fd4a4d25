//! Experiments: one per checkable estimate, each producing an
//! [`EquivalenceReport`] with a verdict against declared limits.
//!
//! Sweep points run in parallel; results are collected in sweep order, so a
//! report is a pure function of its settings and seed.

mod bloch;
mod hankel;
mod kernel;
pub mod report;
pub mod settings;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::halfplane::HalfPlanePoint;
use crate::kernels::calibrate_c_alpha;
use crate::quadrature::{integrate_half_annulus, Features, Hint, QuadConfig};

pub use report::{fit_slope, CheckResult, Claim, EquivalenceReport, Rule, Sample, Verdict};
pub use settings::{alpha_key, decades, RunSettings, SweepSpec, ZetaPoint};

/// Registry entry of one experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExperimentInfo {
    pub id: &'static str,
    /// The estimate under test, in one line.
    pub claim: &'static str,
}

pub const EXPERIMENTS: [ExperimentInfo; 10] = [
    ExperimentInfo {
        id: "kernel_equivalence",
        claim: "int ||z - conj zeta|^-2 - |z + i|^-2| dV and int |K_mod(., zeta)| dV are comparable to omega(zeta)",
    },
    ExperimentInfo {
        id: "atom_norms",
        claim: "atoms have L1 norm 2 while their P and P+ projections have L1 norms comparable to omega(zeta)",
    },
    ExperimentInfo {
        id: "mean_zero",
        claim: "an integrable Pf forces int f = 0; otherwise z^2 Pf -> c0 int f and the truncated norm grows like ln R",
    },
    ExperimentInfo {
        id: "weighted_sufficiency",
        claim: "kernel integrals against omega^k: uniformly bounded for k < -1, log-log growth at k = -1, omega^(k+1) for k > -1",
    },
    ExperimentInfo {
        id: "pointwise_bloch",
        claim: "functions of unit B_{omega^k} norm obey |f| <= C {omega^(1-k), 1 + ln omega, 1}, attained by the critical examples",
    },
    ExperimentInfo {
        id: "theta",
        claim: "theta_w: positive real part margin, size comparable to 1 + ln+|z| + ln+ 1/|z - conj w|, Bloch norms uniform in w",
    },
    ExperimentInfo {
        id: "forelli_rudin",
        claim: "int Omega dV_beta / |z - conj z0|^(2+alpha+beta) <= C (Im z0)^-alpha Omega(z0) for logarithmic Omega",
    },
    ExperimentInfo {
        id: "factorization",
        claim: "the cubic atom factors as g theta with ||g||_{A1(omega^l)} ||theta||_{B(omega^k)} bounded uniformly in w",
    },
    ExperimentInfo {
        id: "hankel",
        claim: "h_b is bounded on functions orthogonal to b in B_omega, grows like |<b,f>| ln R otherwise; the reverse quantity detects b outside B_omega",
    },
    ExperimentInfo {
        id: "duality",
        claim: "|int f conj(g') y dV| <= ||f||_{A1(omega^-k)} ||g||_{B(omega^k)} on a battery of pairs",
    },
];

/// Default settings of an experiment: the common defaults with the exponent
/// lists the experiment sweeps.
pub fn default_settings(id: &str) -> Result<RunSettings> {
    let mut s = RunSettings::default();
    match id {
        "weighted_sufficiency" => s.sweep.k_list = vec![-2.0, -1.0, 0.0, 1.0],
        "pointwise_bloch" => s.sweep.k_list = vec![0.0, 0.5, 1.0, 2.0],
        _ if EXPERIMENTS.iter().any(|e| e.id == id) => {}
        _ => return Err(unknown(id)),
    }
    Ok(s)
}

fn unknown(id: &str) -> Error {
    let ids: Vec<&str> = EXPERIMENTS.iter().map(|e| e.id).collect();
    Error::Config(format!("unknown experiment '{id}'; expected one of {}", ids.join(", ")))
}

/// Validates the settings, then runs the experiment. Configuration errors are
/// returned as `Err`; quadrature failures become part of a failing report.
pub fn run_experiment(id: &str, settings: &RunSettings) -> Result<EquivalenceReport> {
    if !EXPERIMENTS.iter().any(|e| e.id == id) {
        return Err(unknown(id));
    }
    settings.validate()?;
    match id {
        "kernel_equivalence" => kernel::kernel_equivalence(settings),
        "atom_norms" => kernel::atom_norms(settings),
        "mean_zero" => kernel::mean_zero(settings),
        "weighted_sufficiency" => kernel::weighted_sufficiency(settings),
        "forelli_rudin" => kernel::forelli_rudin(settings),
        "pointwise_bloch" => bloch::pointwise_bloch(settings),
        "theta" => bloch::theta(settings),
        "factorization" => bloch::factorization(settings),
        "duality" => bloch::duality(settings),
        "hankel" => hankel::hankel(settings),
        _ => Err(unknown(id)),
    }
}

/// Samples and failures gathered over a sweep.
#[derive(Default)]
struct Collector {
    samples: Vec<Sample>,
    failures: Vec<Error>,
}

impl Collector {
    fn push(&mut self, s: Sample) {
        self.samples.push(s);
    }

    fn absorb(&mut self, r: Result<Vec<Sample>>) {
        match r {
            Ok(v) => self.samples.extend(v),
            Err(e) => self.failures.push(e),
        }
    }

    fn absorb_all(&mut self, rs: Vec<Result<Vec<Sample>>>) {
        for r in rs {
            self.absorb(r);
        }
    }

    fn finish(self, id: &str, claims: Vec<Claim>, notes: Vec<String>) -> EquivalenceReport {
        EquivalenceReport::assemble(id, claims, self.samples, self.failures, notes)
    }
}

/// Sample comparing two complex numbers: measured `|a - b|`, predicted `|b|`,
/// so the ratio is the relative discrepancy.
fn gap_sample(claim: &str, params: Vec<f64>, a: Complex64, b: Complex64, err: f64) -> Sample {
    Sample::new(claim, params, (a - b).norm(), b.norm(), err)
}

fn hint(point: HalfPlanePoint, scale: f64) -> Hint {
    Hint { point, scale }
}

/// The kernel constant `c0`: the stored one if present, otherwise calibrated
/// with the run's quadrature settings.
fn calibrated_c0(s: &RunSettings) -> Result<Complex64> {
    match s.kernel_constants.get(&alpha_key(0.0)) {
        Some(c) => Ok(*c),
        None => calibrate_c_alpha(0.0, &s.quad),
    }
}

/// `int_{|z| < R} g dV` for every `R` in `radii`, accumulated annulus by
/// annulus, with the summed error estimate.
fn cumulative_integrals<G: Fn(HalfPlanePoint) -> f64 + Sync>(
    g: G,
    radii: &[f64],
    hints: &[Hint],
    cfg: &QuadConfig,
) -> Result<(Vec<f64>, f64)> {
    let features = Features::hints(hints.to_vec());
    let (mut acc, mut err, mut lo) = (0.0, 0.0, 0.0);
    let mut out = Vec::with_capacity(radii.len());
    for &r in radii {
        let res = integrate_half_annulus(&g, lo, r, &features, cfg)?;
        acc += res.value;
        err += res.err_estimate;
        out.push(acc);
        lo = r;
    }
    Ok((out, err))
}

/// Slope of `values` against `ln R`, fitted on the largest decade of `radii`.
fn growth_slope(radii: &[f64], values: &[f64]) -> Option<f64> {
    let top = *radii.last()?;
    let (x, y): (Vec<f64>, Vec<f64>) =
        radii.iter().zip(values).filter(|(r, _)| **r >= top / 10.0 * (1.0 - 1e-12)).map(|(r, v)| (r.ln(), *v)).unzip();
    fit_slope(&x, &y)
}

/// Log-uniform magnitudes over twelve decades in both coordinates, with a
/// quarter of the points drawn inside the cone `|x| <= y`.
fn random_point(rng: &mut ChaCha8Rng) -> HalfPlanePoint {
    let y = 10f64.powf(rng.gen_range(-6.0..6.0));
    let x = if rng.gen_bool(0.25) {
        y * rng.gen_range(-1.0..1.0)
    } else {
        let m = 10f64.powf(rng.gen_range(-6.0..6.0));
        if rng.gen_bool(0.5) {
            m
        } else {
            -m
        }
    };
    HalfPlanePoint::new_unchecked(x, y)
}
