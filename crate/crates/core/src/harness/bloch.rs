//! Experiments on Bloch-type norms: pointwise bounds, the test functions
//! `theta_w`, the factorization of cubic atoms and the duality pairing.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{gap_sample, random_point, Claim, Collector, EquivalenceReport, Rule, RunSettings, Sample};
use crate::error::Result;
use crate::halfplane::{ln_plus_or_zero, omega, HalfPlanePoint};
use crate::model::ModelFunction;
use crate::operators::{duality_pair, l2_pair, multiplier_probe, norm, weighted_l1_norm, NormKind};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn pt(x: f64, y: f64) -> HalfPlanePoint {
    HalfPlanePoint::new_unchecked(x, y)
}

/// Growth allowed for a function of unit `B_{omega^k}` norm.
fn pointwise_bound(k: f64, z: &HalfPlanePoint) -> f64 {
    if k > 1.0 {
        1.0
    } else if k == 1.0 {
        1.0 + omega(z).ln()
    } else {
        omega(z).powf(1.0 - k)
    }
}

pub(super) fn pointwise_bloch(s: &RunSettings) -> Result<EquivalenceReport> {
    let ks = &s.sweep.k_list;
    let mut claims = Vec::new();
    for &k in ks {
        let id = format!("bound_k{k}");
        let predicted = if k > 1.0 {
            "1"
        } else if k == 1.0 {
            "1 + ln omega(z)"
        } else {
            "omega(z)^(1-k)"
        };
        let rule = Rule::AtMost { limit: s.threshold(&id, 50.0) };
        claims.push(Claim::new(&id, &["k", "omega_bin", "x", "y"], "max |f(z)| / ||f|| over the bin", predicted, rule));
    }
    let pairs: Vec<(f64, f64)> =
        s.sweep.j_list.iter().flat_map(|&j| ks.iter().filter(move |&&k| k < 1.0 && j <= k).map(move |&k| (j, k))).collect();
    for &(j, k) in &pairs {
        let id = format!("multiplier_j{j}_k{k}");
        let rule = Rule::Window { max_spread: s.threshold(&id, 50.0) };
        claims.push(Claim::new(&id, &["j", "k", "x", "y"], "|theta(z)| / (||theta|| omega(z)^(1-k))", "1", rule));
        let id = format!("multiplier_bound_j{j}_k{k}");
        claims.push(Claim::new(&id, &["j", "k", "x", "y"], "omega(z)^(j-k) |b(z)| for b = (z+i)^-1", "1", Rule::Report));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(s.sweep.seed);
    let points: Vec<HalfPlanePoint> = (0..s.sweep.samples).map(|_| random_point(&mut rng)).collect();
    let per_k: Vec<Result<Vec<Sample>>> = ks
        .par_iter()
        .map(|&k| {
            let f = ModelFunction::CriticalExample { k };
            let n = norm(NormKind::BlochFull { k }, &f, &s.quad, &s.sup)?.value;
            // Worst sample in each dyadic band of omega.
            let mut bins: BTreeMap<i32, (f64, HalfPlanePoint)> = BTreeMap::new();
            for z in &points {
                let r = f.eval(z).norm() / n / pointwise_bound(k, z);
                let band = omega(z).log2().floor() as i32;
                let e = bins.entry(band).or_insert((r, *z));
                if r > e.0 {
                    *e = (r, *z);
                }
            }
            let id = format!("bound_k{k}");
            Ok(bins
                .into_iter()
                .map(|(band, (_, z))| {
                    let params = vec![k, 2f64.powi(band), z.x(), z.y()];
                    Sample::new(&id, params, f.eval(&z).norm() / n, pointwise_bound(k, &z), 0.0)
                })
                .collect())
        })
        .collect();
    let probes = [pt(0.0, 1.0), pt(0.0, 1e-3), pt(0.0, 1e-6), pt(0.0, 1e3), pt(0.0, 1e6), pt(1e3, 1.0), pt(-1e5, 1e-2), pt(10.0, 1e-4)];
    let b = ModelFunction::RationalSymbol { n: 1 };
    let jobs: Vec<(f64, f64, HalfPlanePoint)> = pairs.iter().flat_map(|&(j, k)| probes.iter().map(move |&z| (j, k, z))).collect();
    let mult: Vec<Result<Vec<Sample>>> = jobs
        .par_iter()
        .map(|&(j, k, z)| {
            let p = multiplier_probe(&b, j, k, &z, &s.quad, &s.sup)?;
            let params = vec![j, k, z.x(), z.y()];
            Ok(vec![
                Sample::new(&format!("multiplier_j{j}_k{k}"), params.clone(), p.test_ratio, 1.0, 0.0),
                Sample::new(&format!("multiplier_bound_j{j}_k{k}"), params, p.bound_quantity, 1.0, 0.0),
            ])
        })
        .collect();
    let mut out = Collector::default();
    out.absorb_all(per_k);
    out.absorb_all(mult);
    let notes = vec![
        format!("{} seeded samples (seed {}), log-uniform in |x| and y over [1e-6, 1e6]", s.sweep.samples, s.sweep.seed),
        "critical examples normalized by their B_{omega^k} norm |f(i)| + sup y omega^k |f'| (a lower bound from the search)".into(),
        "for k = 1 the bound uses 1 + ln omega, which is comparable to ln omega away from omega = 1".into(),
    ];
    Ok(out.finish("pointwise_bloch", claims, notes))
}

/// Second point of a random pair: either independent of `w` or within a few
/// multiples of `Im w` of it.
fn partner(w: &HalfPlanePoint, rng: &mut ChaCha8Rng) -> HalfPlanePoint {
    if rng.gen_bool(0.25) {
        pt(w.x() + w.y() * rng.gen_range(-2.0..2.0), w.y() * 10f64.powf(rng.gen_range(-1.0..1.0)))
    } else {
        random_point(rng)
    }
}

pub(super) fn theta(s: &RunSettings) -> Result<EquivalenceReport> {
    let mut claims = vec![
        Claim::new("i_violations", &["samples"], "samples with Re theta_w(z) <= 1 - ln 2 + ln|i+z|", "0", Rule::Absolute { tol: 0.0 }),
        Claim::new("i_min_margin", &["w_x", "w_y", "z_x", "z_y"], "min Re theta_w(z) - (1 - ln 2 + ln|i+z|)", "0", Rule::Report),
        Claim::new(
            "i_margin_at_i",
            &["w_x", "w_y", "z_x", "z_y"],
            "Re theta_i(i) - (1 - ln 2 + ln 2)",
            "2 ln 2",
            Rule::Near { tol: 1e-12 },
        ),
        Claim::new(
            "ii_window",
            &["w_x", "w_y", "z_x", "z_y"],
            "|theta_w(z)| (extreme samples)",
            "1 + ln+|z| + ln+ 1/|z - conj w|",
            Rule::Window { max_spread: s.threshold("ii_window", 100.0) },
        ),
    ];
    let ks: Vec<f64> = s.sweep.k_list.iter().copied().filter(|&k| k < 1.0).collect();
    for &k in &ks {
        let id = format!("iii_k{k}");
        let rule = Rule::Window { max_spread: s.threshold(&id, 20.0) };
        claims.push(Claim::new(&id, &["k", "w_x", "w_y"], "||theta_w^(1-k)||_{B(omega^k)}", "1", rule));
    }
    let rule = Rule::Window { max_spread: s.threshold("iv_logtheta", 20.0) };
    claims.push(Claim::new("iv_logtheta", &["w_x", "w_y"], "||log theta_w||_{B(omega)}", "1", rule));

    let mut out = Collector::default();
    let i = HalfPlanePoint::i();
    let margin_i = ModelFunction::Theta { w: i }.eval(&i).re - 1.0;
    out.push(Sample::new("i_margin_at_i", vec![0.0, 1.0, 0.0, 1.0], margin_i, 2.0 * 2f64.ln(), 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(s.sweep.seed);
    let mut violations = 0usize;
    let mut min_margin = (f64::INFINITY, pt(0.0, 1.0), pt(0.0, 1.0));
    let mut lo = (f64::INFINITY, 0.0, 0.0, pt(0.0, 1.0), pt(0.0, 1.0));
    let mut hi = (f64::NEG_INFINITY, 0.0, 0.0, pt(0.0, 1.0), pt(0.0, 1.0));
    for _ in 0..s.sweep.samples {
        let w = random_point(&mut rng);
        let z = partner(&w, &mut rng);
        let t = ModelFunction::Theta { w }.eval(&z);
        let zi = (z.to_complex() + Complex64::i()).norm();
        let margin = t.re - (1.0 - 2f64.ln() + zi.ln());
        if !(margin > 0.0) {
            violations += 1;
        }
        if margin < min_margin.0 {
            min_margin = (margin, w, z);
        }
        let size = 1.0 + ln_plus_or_zero(z.modulus()) + ln_plus_or_zero(1.0 / z.dist_conj(&w));
        let r = t.norm() / size;
        if r < lo.0 {
            lo = (r, t.norm(), size, w, z);
        }
        if r > hi.0 {
            hi = (r, t.norm(), size, w, z);
        }
    }
    out.push(Sample::new("i_violations", vec![s.sweep.samples as f64], violations as f64, 0.0, 0.0));
    let (m, w, z) = min_margin;
    out.push(Sample::new("i_min_margin", vec![w.x(), w.y(), z.x(), z.y()], m, 0.0, 0.0));
    for (_, t, size, w, z) in [lo, hi] {
        out.push(Sample::new("ii_window", vec![w.x(), w.y(), z.x(), z.y()], t, size, 0.0));
    }

    let jobs: Vec<(Option<f64>, HalfPlanePoint)> =
        ks.iter().map(|&k| Some(k)).chain(std::iter::once(None)).flat_map(|k| s.sweep.w_grid.iter().map(move |&w| (k, w))).collect();
    let norms: Vec<Result<Vec<Sample>>> = jobs
        .par_iter()
        .map(|&(k, w)| {
            Ok(vec![match k {
                Some(k) => {
                    let v = norm(NormKind::BlochFull { k }, &ModelFunction::ThetaPower { w, k }, &s.quad, &s.sup)?;
                    Sample::new(&format!("iii_k{k}"), vec![k, w.x(), w.y()], v.value, 1.0, 0.0)
                }
                None => {
                    let v = norm(NormKind::BlochFull { k: 1.0 }, &ModelFunction::LogTheta { w }, &s.quad, &s.sup)?;
                    Sample::new("iv_logtheta", vec![w.x(), w.y()], v.value, 1.0, 0.0)
                }
            }])
        })
        .collect();
    out.absorb_all(norms);
    let notes = vec![
        format!("{} seeded (w, z) pairs (seed {}); a quarter of the partners z lie within a few Im w of w", s.sweep.samples, s.sweep.seed),
        "Bloch norms are |f(i)| + sup y omega^k |f'|, suprema from the grid and Nelder-Mead search".into(),
    ];
    Ok(out.finish("theta", claims, notes))
}

pub(super) fn factorization(s: &RunSettings) -> Result<EquivalenceReport> {
    let ks: Vec<f64> = s.sweep.k_list.iter().copied().filter(|&k| k < 1.0).collect();
    let mut claims = Vec::new();
    for &k in &ks {
        for &l in &s.sweep.l_list {
            let id = format!("product_k{k}_l{l}");
            let rule = Rule::Window { max_spread: s.threshold(&id, 20.0) };
            claims.push(Claim::new(&id, &["k", "l", "w_x", "w_y"], "||g||_{A1(omega^l)} ||theta||_{B(omega^k)}", "1", rule));
            let id = format!("atom_k{k}_l{l}");
            let rule = Rule::Window { max_spread: s.threshold(&id, 20.0) };
            claims.push(Claim::new(&id, &["k", "l", "w_x", "w_y"], "||f||_{L1(omega^(l+k-1))}", "1", rule));
        }
    }
    let rule = Rule::AtMost { limit: s.threshold("product_estimate", 50.0) };
    claims.push(Claim::new(
        "product_estimate",
        &["row", "col"],
        "||f g||_{A1(omega^(l+k-1))}",
        "||f||_{A1(omega^l)} ||g||_{B(omega^k)}",
        rule,
    ));

    let cfg = s.quad.with_tail(Some(3.0));
    let jobs: Vec<(f64, f64, HalfPlanePoint)> =
        ks.iter().flat_map(|&k| s.sweep.l_list.iter().flat_map(move |&l| s.sweep.w_grid.iter().map(move |&w| (k, l, w)))).collect();
    let results: Vec<Result<Vec<Sample>>> = jobs
        .par_iter()
        .map(|&(k, l, w)| {
            let f = ModelFunction::WeightedAtom { w, l, k };
            let theta = ModelFunction::ThetaPower { w, k };
            let g = ModelFunction::quotient(f.clone(), theta.clone());
            let gn = weighted_l1_norm(&g, l, 0.0, &cfg)?;
            let tn = norm(NormKind::BlochFull { k }, &theta, &s.quad, &s.sup)?.value;
            let fnorm = weighted_l1_norm(&f, l + k - 1.0, 0.0, &cfg)?;
            let params = vec![k, l, w.x(), w.y()];
            Ok(vec![
                Sample::new(&format!("product_k{k}_l{l}"), params.clone(), gn.value * tn, 1.0, gn.err_estimate * tn),
                Sample::new(&format!("atom_k{k}_l{l}"), params, fnorm.value, 1.0, fnorm.err_estimate),
            ])
        })
        .collect();

    // Products f g of A1 functions with Bloch functions.
    let fs = [
        ModelFunction::RationalSymbol { n: 3 },
        ModelFunction::CubicKernel { zeta0: pt(0.5, 0.8), scale: ONE },
        ModelFunction::WeightedAtom { w: pt(3.0, 0.01), l: 0.0, k: 0.0 },
    ];
    let gs = [
        (ModelFunction::CriticalExample { k: 0.0 }, 0.0),
        (ModelFunction::ThetaPower { w: HalfPlanePoint::i(), k: 0.5 }, 0.5),
        (ModelFunction::LogShift { a: Complex64::i() }, 0.0),
    ];
    let cells: Vec<(usize, usize)> = (0..fs.len()).flat_map(|a| (0..gs.len()).map(move |b| (a, b))).collect();
    let products: Vec<Result<Vec<Sample>>> = cells
        .par_iter()
        .map(|&(a, b)| {
            let (f, (g, k)) = (&fs[a], &gs[b]);
            let fg = ModelFunction::product(f.clone(), g.clone());
            let lhs = weighted_l1_norm(&fg, k - 1.0, 0.0, &cfg)?;
            let fnorm = weighted_l1_norm(f, 0.0, 0.0, &cfg)?;
            let gnorm = norm(NormKind::BlochFull { k: *k }, g, &s.quad, &s.sup)?.value;
            Ok(vec![Sample::new("product_estimate", vec![a as f64, b as f64], lhs.value, fnorm.value * gnorm, lhs.err_estimate)])
        })
        .collect();
    let mut out = Collector::default();
    out.absorb_all(results);
    out.absorb_all(products);
    let notes = vec![
        "theta = theta_w^(1-k), g = f / theta with f = Im(w) omega(w)^(1-(l+k)) (z - conj w)^-3".into(),
        "product_estimate rows: (z+i)^-3, cubic kernel at 0.5+0.8i, weighted atom at 3+0.01i; columns: log(4i+z), theta_i^(1/2), log(z+i); l = 0".into(),
    ];
    Ok(out.finish("factorization", claims, notes))
}

pub(super) fn duality(s: &RunSettings) -> Result<EquivalenceReport> {
    let r3 = ModelFunction::RationalSymbol { n: 3 };
    let cubic = ModelFunction::CubicKernel { zeta0: pt(0.5, 0.8), scale: ONE };
    let i = HalfPlanePoint::i();
    let battery: Vec<(ModelFunction, ModelFunction, f64)> = vec![
        (r3.clone(), ModelFunction::LogShift { a: Complex64::i() }, 0.0),
        (r3.clone(), ModelFunction::Theta { w: i }, 0.0),
        (cubic.clone(), ModelFunction::RationalSymbol { n: 1 }, 0.0),
        (r3.clone(), ModelFunction::LogTheta { w: i }, 1.0),
        (cubic, ModelFunction::LogTheta { w: i }, 1.0),
        (r3.clone(), ModelFunction::ThetaPower { w: i, k: 0.5 }, 0.5),
        (r3.clone(), ModelFunction::CriticalExample { k: -1.0 }, -1.0),
        (r3.clone(), ModelFunction::Constant(ONE), 0.0),
    ];
    let claims = vec![
        Claim::new(
            "duality_bound",
            &["row", "k"],
            "|int f conj(g') y dV|",
            "||f||_{A1(omega^-k)} ||g||_{B(omega^k)}",
            Rule::AtMost { limit: s.threshold("duality_bound", 1.0 + 1e-3) },
        ),
        Claim::new(
            "reference",
            &[],
            "|pair at rel_tol - pair at rel_tol/10|",
            "|pair at rel_tol/10|",
            Rule::AtMost { limit: s.threshold("reference", 1e-4) },
        ),
        Claim::new("l2_vs_duality", &[], "|int f conj(g) dV|", "|int f conj(g') y dV|", Rule::Report),
    ];
    let rows: Vec<Result<Vec<Sample>>> = battery
        .par_iter()
        .enumerate()
        .map(|(row, (f, g, k))| {
            let pair = duality_pair(f, g, &s.quad)?;
            let fnorm = weighted_l1_norm(f, -k, 0.0, &s.quad)?;
            let gnorm = norm(NormKind::BlochFull { k: *k }, g, &s.quad, &s.sup)?.value;
            Ok(vec![Sample::new("duality_bound", vec![row as f64, *k], pair.value.norm(), fnorm.value * gnorm, pair.err_estimate)])
        })
        .collect();
    let r1 = ModelFunction::RationalSymbol { n: 1 };
    let refs: Vec<Result<Vec<Sample>>> = vec![(|| {
        let a = duality_pair(&r3, &r1, &s.quad)?;
        let b = duality_pair(&r3, &r1, &s.quad.tightened(10.0))?;
        let l2 = l2_pair(&r3, &r1, &s.quad)?;
        Ok(vec![
            gap_sample("reference", vec![], a.value, b.value, a.err_estimate + b.err_estimate),
            Sample::new("l2_vs_duality", vec![], l2.value.norm(), b.value.norm(), l2.err_estimate),
        ])
    })()];
    let mut out = Collector::default();
    out.absorb_all(rows);
    out.absorb_all(refs);
    let notes = vec![
        "rows: (z+i)^-3 against log(z+i), theta_i, log theta_i (k=1), theta_i^(1/2) (k=1/2), log(4i+z)^2 (k=-1), 1; the cubic kernel at 0.5+0.8i against (z+i)^-1 and log theta_i".into(),
        "the constant row pairs to zero; reference and l2_vs_duality use f = (z+i)^-3, g = (z+i)^-1".into(),
    ];
    Ok(out.finish("duality", claims, notes))
}
