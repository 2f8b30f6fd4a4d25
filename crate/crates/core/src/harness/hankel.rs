//! Small Hankel operators `h_b f = P(b conj f)` with the symbol `b = (z+i)^-1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{
    calibrated_c0, cumulative_integrals, gap_sample, growth_slope, hint, Claim, Collector, EquivalenceReport, Rule, RunSettings, Sample,
};
use crate::error::Result;
use crate::halfplane::{omega, HalfPlanePoint};
use crate::model::ModelFunction;
use crate::operators::{hankel_apply, hankel_closed_form, l2_pair, orthogonal_part, orthogonalizer, pairing_with_cubics};
use crate::quadrature::{integrate_halfplane, Features, QuadConfig};

fn pt(x: f64, y: f64) -> HalfPlanePoint {
    HalfPlanePoint::new_unchecked(x, y)
}

/// `Im(zeta) omega(zeta) |b'(zeta)|`, the size of `<b, a_zeta>` for the
/// normalized cubic atom up to the factor `pi/2`.
fn symbol_quantity(b: &ModelFunction, zeta: &HalfPlanePoint) -> Result<f64> {
    Ok(zeta.y() * omega(zeta) * b.derivative(zeta)?.norm())
}

pub(super) fn hankel(s: &RunSettings) -> Result<EquivalenceReport> {
    let c0 = calibrated_c0(s)?;
    let tol = |id: &str, d: f64| s.threshold(id, d);
    let claims = vec![
        Claim::new(
            "closed_form",
            &["x", "y", "modified"],
            "|h_b f by quadrature - closed form|",
            "|closed form|",
            Rule::AtMost { limit: tol("closed_form", 1e-4) },
        ),
        Claim::new("orthogonal_pair", &[], "|<b, f - <b,f> u>| by quadrature", "0", Rule::Absolute { tol: tol("orthogonal_pair", 1e-5) }),
        Claim::new(
            "cauchy",
            &["r_inner", "r_outer"],
            "N(r_outer) - N(r_inner) for f orthogonal to b",
            "N(r_outer)",
            Rule::AtMost { limit: tol("cauchy", 0.02) },
        ),
        Claim::new(
            "modified_equals_plain",
            &["x", "y"],
            "|h_mod f - h f| for f orthogonal to b",
            "|h f|",
            Rule::AtMost { limit: tol("modified_equals_plain", 1e-4) },
        ),
        Claim::new(
            "modified_difference",
            &["x", "y"],
            "|(h_mod f - h f) - (-c0 (z+i)^-2 <b,f>)|",
            "|c0 (z+i)^-2 <b,f>|",
            Rule::AtMost { limit: tol("modified_difference", 1e-4) },
        ),
        Claim::new(
            "slope_over_pairing",
            &["case"],
            "d N(R) / d ln R / (pi |c0|)",
            "|<b, f>|",
            Rule::Near { tol: tol("slope_over_pairing", 0.15) },
        ),
        Claim::new(
            "bounded_symbol",
            &["xi", "lambda"],
            "Im(zeta) omega(zeta) |b'(zeta)|",
            "1",
            Rule::AtMost { limit: tol("bounded_symbol", 1.0) },
        ),
        Claim::new(
            "atom_pairing",
            &["xi", "lambda"],
            "|<b, a_zeta>| by quadrature",
            "(pi/2) Im(zeta) omega(zeta) |b'(zeta)|",
            Rule::Near { tol: tol("atom_pairing", 1e-4) },
        ),
        Claim::new("log_symbol_growth", &["y"], "Q(iy) for b = log(z+i)", "Q(iy/10)", Rule::AtLeast { limit: 1.0 }),
        Claim::new("mod1_identity", &[], "<h_mod f, g>", "<b, (g - g(i)) f>", Rule::AtMost { limit: tol("mod1_identity", 1e-4) }),
    ];

    let i = HalfPlanePoint::i();
    let b = ModelFunction::RationalSymbol { n: 1 };
    let one = Complex64::new(1.0, 0.0);
    let zeta1 = pt(0.5, 0.8);
    let fa = ModelFunction::CubicKernel { zeta0: zeta1, scale: one };
    let u = orthogonalizer(&b, i)?;
    let pair_a = pairing_with_cubics(&b, &fa)?.unwrap_or_default();
    let forth = orthogonal_part(&fa, &u, pair_a);
    let tail6 = s.quad.with_tail(Some(6.0));
    let mut out = Collector::default();

    // Quadrature of h_b against the closed form, both kernels.
    let jobs: Vec<(HalfPlanePoint, bool)> =
        [pt(0.0, 1.0), pt(-2.0, 0.3), pt(4.0, 5.0)].into_iter().flat_map(|z| [(z, false), (z, true)]).collect();
    let closed: Vec<Result<Vec<Sample>>> = jobs
        .par_iter()
        .map(|&(z, modified)| {
            let q = hankel_apply(&b, &forth, &z, c0, &tail6, modified)?;
            let e = hankel_closed_form(&b, &forth, &z, c0, modified).unwrap_or_default();
            Ok(vec![gap_sample("closed_form", vec![z.x(), z.y(), modified as u8 as f64], q, e, 0.0)])
        })
        .collect();
    out.absorb_all(closed);
    out.absorb(l2_pair(&b, &forth, &s.quad).map(|p| vec![Sample::new("orthogonal_pair", vec![], p.value.norm(), 0.0, p.err_estimate)]));

    // h_mod and h agree on f orthogonal to b, and differ by the pairing term otherwise.
    let probes: Vec<HalfPlanePoint> = (0..10).map(|n| pt(-4.0 + n as f64, 0.1 * (1.0 + n as f64))).collect();
    let agree: Vec<Result<Vec<Sample>>> = probes
        .par_iter()
        .map(|z| {
            let h = hankel_apply(&b, &forth, z, c0, &tail6, false)?;
            let hm = hankel_apply(&b, &forth, z, c0, &tail6, true)?;
            Ok(vec![gap_sample("modified_equals_plain", vec![z.x(), z.y()], hm, h, 0.0)])
        })
        .collect();
    out.absorb_all(agree);
    let diff: Vec<Result<Vec<Sample>>> = match l2_pair(&b, &fa, &s.quad) {
        Ok(p) => probes[..3]
            .par_iter()
            .map(|z| {
                let h = hankel_apply(&b, &fa, z, c0, &tail6, false)?;
                let hm = hankel_apply(&b, &fa, z, c0, &tail6, true)?;
                let expected = -c0 * (z.to_complex() + Complex64::i()).powi(-2) * p.value;
                Ok(vec![gap_sample("modified_difference", vec![z.x(), z.y()], hm - h, expected, 0.0)])
            })
            .collect(),
        Err(e) => vec![Err(e)],
    };
    out.absorb_all(diff);

    // Truncated norms N(R) = int_{|z|<R} |h_b f| dV from the closed form.
    let hints = vec![hint(zeta1, 0.4), hint(i, 0.5)];
    let truncated = |f: &ModelFunction, radii: &[f64], hints: &[crate::quadrature::Hint]| {
        cumulative_integrals(|z| hankel_closed_form(&b, f, &z, c0, false).unwrap_or_default().norm(), radii, hints, &s.quad)
    };
    let cauchy_radii = [1e2, 1e3, 1e4];
    out.absorb(truncated(&forth, &cauchy_radii, &hints).map(|(n, _)| vec![Sample::new("cauchy", vec![1e2, 1e4], n[2] - n[0], n[2], 0.0)]));
    let atom = ModelFunction::WeightedAtom { w: pt(3.0, 0.2), l: 0.0, k: 0.0 };
    let cases = [fa.clone(), ModelFunction::CubicKernel { zeta0: zeta1, scale: 2.0 * one }, atom];
    let radii = &s.sweep.trunc_grid;
    let slopes: Vec<Result<Vec<Sample>>> = cases
        .par_iter()
        .enumerate()
        .map(|(n, f)| {
            let mut h = f.hints();
            h.extend(hints.iter().copied());
            let (norms, _) = truncated(f, radii, &h)?;
            let slope = growth_slope(radii, &norms).unwrap_or(f64::NAN) / (PI * c0.norm());
            let pair = pairing_with_cubics(&b, f)?.unwrap_or_default().norm();
            Ok(vec![Sample::new("slope_over_pairing", vec![n as f64], slope, pair, 0.0)])
        })
        .collect();
    out.absorb_all(slopes);

    // The quantity detecting b in B_omega.
    let pts = s.sweep.atom_points()?;
    let atoms: Vec<Result<Vec<Sample>>> = pts
        .par_iter()
        .map(|p| {
            let q = symbol_quantity(&b, &p.zeta)?;
            let params = vec![p.zeta.x(), p.lambda];
            // The atom Im(zeta) omega(zeta) (z - conj zeta)^-3 is integrated after a
            // horizontal shift that puts its peak at distance about 1 from the
            // origin, where the chart resolves it at full relative precision.
            let shift = p.zeta.x() - 1.0;
            let a = ModelFunction::CubicKernel {
                zeta0: pt(p.zeta.x() - shift, p.lambda),
                scale: Complex64::new(p.lambda * omega(&p.zeta), 0.0),
            };
            let shifted = |z: HalfPlanePoint| b.eval(&pt(z.x() + shift, z.y())) * a.eval(&z).conj();
            let feats = Features::hints(vec![hint(pt(1.0, p.lambda), 0.5 * p.lambda), hint(pt(-shift, 1.0), 0.5)]);
            // The pairing cancels down to about Q out of an integrand of mass
            // about 2 omega |b(zeta)|; the tolerance is set against that mass.
            let mass = 2.0 * omega(&p.zeta) * b.eval(&p.zeta).norm();
            let cfg = QuadConfig { abs_tol: 2e-11 * mass, ..s.quad.with_tail(None) };
            let pair = integrate_halfplane(shifted, &feats, &cfg)?;
            Ok(vec![
                Sample::new("bounded_symbol", params.clone(), q, 1.0, 0.0),
                Sample::new("atom_pairing", params, pair.value.norm(), PI / 2.0 * q, pair.err_estimate),
            ])
        })
        .collect();
    out.absorb_all(atoms);
    let log_b = ModelFunction::LogShift { a: Complex64::i() };
    let ys = [1e2, 1e3, 1e4, 1e5, 1e6];
    let qs: Result<Vec<f64>> = ys.iter().map(|&y| symbol_quantity(&log_b, &pt(0.0, y))).collect();
    out.absorb(qs.map(|q| (1..ys.len()).map(|n| Sample::new("log_symbol_growth", vec![ys[n]], q[n], q[n - 1], 0.0)).collect()));

    // <h_mod f, g> = <b, (g - g(i)) f>.
    let f = ModelFunction::CubicKernel { zeta0: i, scale: one };
    let g = log_b.clone();
    let shifted = ModelFunction::sum(g.clone(), ModelFunction::Constant(-g.eval(&i)));
    let mod1 = (|| {
        let lhs = integrate_halfplane(
            |z| hankel_closed_form(&b, &f, &z, c0, true).unwrap_or_default() * g.eval(&z).conj(),
            &Features::hints(vec![hint(i, 0.5)]),
            &s.quad.with_tail(None),
        )?;
        let rhs = l2_pair(&b, &ModelFunction::product(f.clone(), shifted), &s.quad)?;
        Ok(vec![gap_sample("mod1_identity", vec![], lhs.value, rhs.value, 0.0)])
    })();
    out.absorb(mod1);

    let notes = vec![
        format!("b = (z+i)^-1, f = (z - conj(0.5+0.8i))^-3, u = orthogonalizer at i; kernel constant c0 = {c0}"),
        "N(R) uses the closed form of h_b f, checked against quadrature by closed_form".into(),
        "slope cases: f, 2f, and the normalized atom at 3+0.2i; log_symbol_growth compares Q(iy) with Q(iy/10)".into(),
        "mod1_identity uses f = (z+i)^-3 and g = log(z+i)".into(),
    ];
    Ok(out.finish("hankel", claims, notes))
}
