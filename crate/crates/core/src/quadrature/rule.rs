//! The 7-point Gauss / 15-point Kronrod pair, in one and two dimensions.

use super::Scalar;

/// Kronrod abscissae on `[-1, 1]`, ascending. Odd indices are the Gauss nodes.
pub(crate) const NODES: [f64; 15] = [
    -0.991_455_371_120_812_6,
    -0.949_107_912_342_758_5,
    -0.864_864_423_359_769_1,
    -0.741_531_185_599_394_4,
    -0.586_087_235_467_691_1,
    -0.405_845_151_377_397_2,
    -0.207_784_955_007_898_5,
    0.0,
    0.207_784_955_007_898_5,
    0.405_845_151_377_397_2,
    0.586_087_235_467_691_1,
    0.741_531_185_599_394_4,
    0.864_864_423_359_769_1,
    0.949_107_912_342_758_5,
    0.991_455_371_120_812_6,
];

pub(crate) const KRONROD: [f64; 15] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
    0.204_432_940_075_298_9,
    0.190_350_578_064_785_4,
    0.169_004_726_639_267_9,
    0.140_653_259_715_525_92,
    0.104_790_010_322_250_18,
    0.063_092_092_629_978_55,
    0.022_935_322_010_529_225,
];

/// Gauss weights laid out on the Kronrod grid (zero at Kronrod-only nodes).
pub(crate) const GAUSS: [f64; 15] = [
    0.0,
    0.129_484_966_168_869_7,
    0.0,
    0.279_705_391_489_276_7,
    0.0,
    0.381_830_050_505_118_9,
    0.0,
    0.417_959_183_673_469_4,
    0.0,
    0.381_830_050_505_118_9,
    0.0,
    0.279_705_391_489_276_7,
    0.0,
    0.129_484_966_168_869_7,
    0.0,
];

/// Tensor-rule estimates on one rectangle.
#[derive(Clone, Copy, Debug)]
pub(crate) struct CellEstimate<T> {
    pub value: T,
    /// `|K x K - G x G|`
    pub err: f64,
    /// Disagreement when only the `u` rule is lowered to Gauss.
    pub err_u: f64,
    /// Disagreement when only the `v` rule is lowered to Gauss.
    pub err_v: f64,
}

/// Applies the 15x15 Kronrod tensor rule and its embedded Gauss variants to
/// samples `f[i * 15 + j]` taken at `(NODES[i], NODES[j])`, scaled by the
/// rectangle's half-widths.
pub(crate) fn tensor_estimate<T: Scalar>(samples: &[T; 225], half_u: f64, half_v: f64) -> CellEstimate<T> {
    let mut kk = T::default();
    let mut gk = T::default();
    let mut kg = T::default();
    let mut gg = T::default();
    for i in 0..15 {
        let mut row_k = T::default();
        let mut row_g = T::default();
        for j in 0..15 {
            let s = samples[i * 15 + j];
            row_k = row_k + s * KRONROD[j];
            if GAUSS[j] != 0.0 {
                row_g = row_g + s * GAUSS[j];
            }
        }
        kk = kk + row_k * KRONROD[i];
        kg = kg + row_g * KRONROD[i];
        if GAUSS[i] != 0.0 {
            gk = gk + row_k * GAUSS[i];
            gg = gg + row_g * GAUSS[i];
        }
    }
    let area = half_u * half_v;
    let finite = kk.magnitude().is_finite();
    let e = |d: T| if finite { d.magnitude() * area } else { f64::INFINITY };
    CellEstimate { value: kk * area, err: e(kk - gg), err_u: e(kk - gk), err_v: e(kk - kg) }
}

/// Globally adaptive one-dimensional Gauss-Kronrod integration on `[a, b]`.
///
/// Returns `(value, error estimate)`; gives up silently after `max_intervals`
/// subdivisions, leaving the estimate to tell the story.
pub(crate) fn integrate_1d<T: Scalar, F: Fn(f64) -> T>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64, max_intervals: usize) -> (T, f64) {
    let rule = |lo: f64, hi: f64| -> (T, f64) {
        let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        let mut k = T::default();
        let mut g = T::default();
        for j in 0..15 {
            let s = f(c + h * NODES[j]);
            k = k + s * KRONROD[j];
            if GAUSS[j] != 0.0 {
                g = g + s * GAUSS[j];
            }
        }
        let err = if k.magnitude().is_finite() { (k - g).magnitude() * h } else { f64::INFINITY };
        (k * h, err)
    };
    let mut pieces: Vec<(f64, f64, T, f64)> = Vec::new();
    let (v, e) = rule(a, b);
    pieces.push((a, b, v, e));
    loop {
        let total: T = super::sum::pairwise_sum(&pieces.iter().map(|p| p.2).collect::<Vec<_>>());
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.magnitude()) || pieces.len() >= max_intervals {
            return (total, err);
        }
        let worst = pieces.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).map(|(i, _)| i).expect("at least one interval");
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = rule(lo, mid);
        let (v2, e2) = rule(mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn weights_sum_to_two() {
        assert_relative_eq!(KRONROD.iter().sum::<f64>(), 2.0, epsilon = 1e-15);
        assert_relative_eq!(GAUSS.iter().sum::<f64>(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn gauss_rule_is_exact_to_degree_13() {
        for p in 0..=13 {
            let g: f64 = (0..15).map(|j| GAUSS[j] * NODES[j].powi(p)).sum();
            let exact = if p % 2 == 0 { 2.0 / (p as f64 + 1.0) } else { 0.0 };
            assert!((g - exact).abs() < 1e-14, "degree {p}: {g} vs {exact}");
        }
        for p in 0..=22 {
            let k: f64 = (0..15).map(|j| KRONROD[j] * NODES[j].powi(p)).sum();
            let exact = if p % 2 == 0 { 2.0 / (p as f64 + 1.0) } else { 0.0 };
            assert!((k - exact).abs() < 1e-14, "degree {p}: {k} vs {exact}");
        }
    }

    #[test]
    fn one_dimensional_log_singularity() {
        let (v, e) = integrate_1d(|t: f64| -t.ln(), 0.0, 1.0, 1e-10, 1e-14, 500);
        assert_relative_eq!(v, 1.0, epsilon = 1e-9);
        assert!(e < 1e-9);
    }
}
