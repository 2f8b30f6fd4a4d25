//! Projections, Hankel operators, pairings and weighted norms.

use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfplane::{omega, HalfPlanePoint};
use crate::kernels::{c_alpha_closed_form, calibrate_c_alpha, inv_pow_conj};
use crate::model::{Field, ModelFunction};
use crate::quadrature::{integrate_halfplane, sup_search, Features, Hint, IntegrationResult, QuadConfig, SupOptions, SupResult};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProjectionKind {
    /// Against `dV_alpha`.
    P { alpha: f64 },
    /// Kernel `|K|`.
    PPlus,
    /// Kernel `K(z, .) - K(z, i)`.
    PMod,
    /// Kernel `|K(z, .)| - |K(z, i)|`.
    PPlusMod,
}

/// A projection together with the kernel constant it uses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Projection {
    pub kind: ProjectionKind,
    pub c_alpha: Complex64,
}

impl Projection {
    /// Uses the closed-form reproducing constant.
    pub fn exact(kind: ProjectionKind) -> Self {
        let alpha = match kind {
            ProjectionKind::P { alpha } => alpha,
            _ => 0.0,
        };
        Self { kind, c_alpha: c_alpha_closed_form(alpha) }
    }

    /// Uses a constant calibrated by quadrature.
    pub fn calibrated(kind: ProjectionKind, cfg: &QuadConfig) -> Result<Self> {
        let alpha = match kind {
            ProjectionKind::P { alpha } => alpha,
            _ => 0.0,
        };
        Ok(Self { kind, c_alpha: calibrate_c_alpha(alpha, cfg)? })
    }

    /// Kernel value at `(z, zeta)` including the measure density in `zeta`.
    pub fn density(&self, z: &HalfPlanePoint, zeta: &HalfPlanePoint) -> Complex64 {
        let i = HalfPlanePoint::i();
        match self.kind {
            ProjectionKind::P { alpha } => self.c_alpha * inv_pow_conj(z, zeta, 2.0 + alpha) * zeta.y().powf(alpha),
            ProjectionKind::PPlus => Complex64::new(self.c_alpha.norm() * z.dist_conj(zeta).powi(-2), 0.0),
            ProjectionKind::PMod => self.c_alpha * (inv_pow_conj(z, zeta, 2.0) - inv_pow_conj(z, &i, 2.0)),
            ProjectionKind::PPlusMod => Complex64::new(self.c_alpha.norm() * (z.dist_conj(zeta).powi(-2) - z.dist_conj(&i).powi(-2)), 0.0),
        }
    }
}

fn with_point_hint(mut features: Features, z: &HalfPlanePoint) -> Features {
    features.hints.push(Hint { point: *z, scale: 0.5 * z.y() });
    features
}

/// `int K(z, zeta) f(zeta) dV(zeta)` for the chosen kernel.
pub fn project<F: Field + ?Sized>(p: &Projection, f: &F, z: &HalfPlanePoint, cfg: &QuadConfig) -> Result<Complex64> {
    let integrand = |zeta: HalfPlanePoint| p.density(z, &zeta) * f.value(&zeta);
    Ok(integrate_halfplane(integrand, &with_point_hint(f.features(), z), cfg)?.value)
}

/// Values of a projection, computed pointwise by quadrature.
///
/// The first quadrature failure is stored and the value `NaN` returned in its
/// place; callers must check [`ProjectedField::take_error`].
pub struct ProjectedField<'a, F: Field + ?Sized> {
    pub projection: Projection,
    pub f: &'a F,
    pub cfg: QuadConfig,
    pub features: Features,
    error: Mutex<Option<Error>>,
}

impl<'a, F: Field + ?Sized> ProjectedField<'a, F> {
    pub fn new(projection: Projection, f: &'a F, cfg: QuadConfig, features: Features) -> Self {
        Self { projection, f, cfg, features, error: Mutex::new(None) }
    }

    pub fn take_error(&self) -> Option<Error> {
        self.error.lock().map(|mut e| e.take()).unwrap_or(None)
    }
}

impl<F: Field + ?Sized> Field for ProjectedField<'_, F> {
    fn value(&self, z: &HalfPlanePoint) -> Complex64 {
        match project(&self.projection, self.f, z, &self.cfg) {
            Ok(v) => v,
            Err(e) => {
                if let Ok(mut slot) = self.error.lock() {
                    slot.get_or_insert(e);
                }
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    }

    fn features(&self) -> Features {
        self.features.clone()
    }
}

/// `int |f| omega^k y^alpha dV`.
pub fn weighted_l1_norm<F: Field + ?Sized>(f: &F, k: f64, alpha: f64, cfg: &QuadConfig) -> Result<IntegrationResult<f64>> {
    let integrand = |z: HalfPlanePoint| {
        let w = if k == 0.0 { 1.0 } else { omega(&z).powf(k) };
        let a = if alpha == 0.0 { 1.0 } else { z.y().powf(alpha) };
        f.value(&z).norm() * w * a
    };
    integrate_halfplane(integrand, &f.features(), cfg)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormKind {
    WeightedL1 {
        k: f64,
        alpha: f64,
    },
    /// `sup y omega^k |f'|`.
    BlochSemi {
        k: f64,
    },
    /// `|f(i)| + sup y omega^k |f'|`.
    BlochFull {
        k: f64,
    },
    /// `sup omega^k |f|`.
    HInftyOmega {
        k: f64,
    },
    /// `sup y^alpha omega^k |f|`.
    LInftyWeighted {
        k: f64,
        alpha: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormValue {
    pub value: f64,
    /// Error estimate for integral norms; zero for suprema, which are lower bounds.
    pub err_estimate: f64,
    /// For suprema: the maximizer sits on the edge of the search box.
    pub on_hull: bool,
    pub witness: Option<HalfPlanePoint>,
}

fn weight_pow(z: &HalfPlanePoint, k: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        omega(z).powf(k)
    }
}

fn from_sup(s: SupResult, offset: f64) -> NormValue {
    NormValue { value: offset + s.sup, err_estimate: 0.0, on_hull: s.on_hull, witness: Some(s.witness) }
}

pub fn norm(kind: NormKind, f: &ModelFunction, cfg: &QuadConfig, opts: &SupOptions) -> Result<NormValue> {
    let hints = f.hints();
    let needs_derivative = matches!(kind, NormKind::BlochSemi { .. } | NormKind::BlochFull { .. });
    if needs_derivative {
        // Fail early rather than inside the search.
        f.derivative(&HalfPlanePoint::i())?;
    }
    match kind {
        NormKind::WeightedL1 { k, alpha } => {
            let r = weighted_l1_norm(f, k, alpha, cfg)?;
            Ok(NormValue { value: r.value, err_estimate: r.err_estimate, on_hull: false, witness: None })
        }
        NormKind::BlochSemi { k } | NormKind::BlochFull { k } => {
            let g = |z: HalfPlanePoint| z.y() * weight_pow(&z, k) * f.derivative(&z).map(|d| d.norm()).unwrap_or(f64::NAN);
            let s = sup_search(g, &hints, cfg, opts);
            let offset = if matches!(kind, NormKind::BlochFull { .. }) { f.eval(&HalfPlanePoint::i()).norm() } else { 0.0 };
            Ok(from_sup(s, offset))
        }
        NormKind::HInftyOmega { k } => {
            let s = sup_search(|z| weight_pow(&z, k) * f.eval(&z).norm(), &hints, cfg, opts);
            Ok(from_sup(s, 0.0))
        }
        NormKind::LInftyWeighted { k, alpha } => {
            let s = sup_search(|z| z.y().powf(alpha) * weight_pow(&z, k) * f.eval(&z).norm(), &hints, cfg, opts);
            Ok(from_sup(s, 0.0))
        }
    }
}

/// `int f conj(g') y dV`.
pub fn duality_pair(f: &ModelFunction, g: &ModelFunction, cfg: &QuadConfig) -> Result<IntegrationResult<Complex64>> {
    g.derivative(&HalfPlanePoint::i())?;
    let integrand = |z: HalfPlanePoint| f.eval(&z) * g.derivative(&z).unwrap_or(Complex64::new(f64::NAN, 0.0)).conj() * z.y();
    let mut features = f.features();
    features.hints.extend(g.hints());
    integrate_halfplane(integrand, &features, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairValue {
    pub value: Complex64,
    pub err_estimate: f64,
    /// Decay exponent of `|b f|` measured near the truncation radius.
    pub tail_exponent: Option<f64>,
    /// The integrand decays slower than `|z|^{-2.5}`, so the truncated value
    /// may not represent an absolutely convergent integral.
    pub marginal: bool,
}

/// `int b conj(f) dV`.
pub fn l2_pair(b: &ModelFunction, f: &ModelFunction, cfg: &QuadConfig) -> Result<PairValue> {
    let integrand = |z: HalfPlanePoint| b.eval(&z) * f.eval(&z).conj();
    let mut features = f.features();
    features.hints.extend(b.hints());
    if features.discs.is_none() {
        features.discs = b.support();
    }
    let r = integrate_halfplane(integrand, &features, &cfg.with_tail(None))?;
    let marginal = r.tail_exponent.is_some_and(|p| p < 2.5);
    Ok(PairValue { value: r.value, err_estimate: r.err_estimate, tail_exponent: r.tail_exponent, marginal })
}

/// `int K(z, zeta) b(zeta) conj(f(zeta)) dV(zeta)` with `K = c0 (z - conj zeta)^(-2)`,
/// or with `K(z, zeta) - K(z, i)` when `modified`.
pub fn hankel_apply(
    b: &ModelFunction,
    f: &ModelFunction,
    z: &HalfPlanePoint,
    c0: Complex64,
    cfg: &QuadConfig,
    modified: bool,
) -> Result<Complex64> {
    let kind = if modified { ProjectionKind::PMod } else { ProjectionKind::P { alpha: 0.0 } };
    let p = Projection { kind, c_alpha: c0 };
    let integrand = |zeta: HalfPlanePoint| p.density(z, &zeta) * b.eval(&zeta) * f.eval(&zeta).conj();
    let mut features = with_point_hint(f.features(), z);
    features.hints.extend(b.hints());
    Ok(integrate_halfplane(integrand, &features, cfg)?.value)
}

/// Cubic pieces `s (z - conj a)^(-3)` of a model function, when it is a
/// linear combination of such pieces.
pub fn cubic_terms(f: &ModelFunction) -> Option<Vec<(Complex64, HalfPlanePoint)>> {
    match f {
        ModelFunction::CubicKernel { zeta0, scale } => Some(vec![(*scale, *zeta0)]),
        ModelFunction::WeightedAtom { w, l, k } => Some(vec![(Complex64::new(w.y() * omega(w).powf(1.0 - (l + k)), 0.0), *w)]),
        ModelFunction::Scaled(c, g) => Some(cubic_terms(g)?.into_iter().map(|(s, a)| (c * s, a)).collect()),
        ModelFunction::Sum(g, h) => {
            let mut t = cubic_terms(g)?;
            t.extend(cubic_terms(h)?);
            Some(t)
        }
        _ => None,
    }
}

/// Value, first derivative and an antiderivative of a holomorphic symbol,
/// for the symbols whose antiderivative is elementary.
fn symbol_jet(b: &ModelFunction, z: Complex64) -> Option<(Complex64, Complex64, Complex64)> {
    match b {
        ModelFunction::RationalSymbol { n } => {
            let s = z + I;
            let n = *n as i32;
            let anti = if n == 1 { s.ln() } else { s.powi(1 - n) / (1 - n) as f64 };
            Some((s.powi(-n), -(n as f64) * s.powi(-n - 1), anti))
        }
        ModelFunction::Scaled(c, g) => {
            let (v, d, a) = symbol_jet(g, z)?;
            Some((c * v, c * d, c * a))
        }
        _ => None,
    }
}

/// Taylor coefficient `b^(k)(z) / k!` of the symbols handled by [`symbol_jet`].
fn symbol_taylor(b: &ModelFunction, z: Complex64, k: u32) -> Option<Complex64> {
    match b {
        ModelFunction::RationalSymbol { n } => {
            // (-1)^k binom(n + k - 1, k) (z + i)^(-n-k)
            let binom = (1..=k).fold(1.0, |acc, j| acc * (*n + j - 1) as f64 / j as f64);
            let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
            Some(sign * binom * (z + I).powi(-(*n as i32) - k as i32))
        }
        ModelFunction::Scaled(c, g) => Some(c * symbol_taylor(g, z, k)?),
        _ => None,
    }
}

/// Distance from `a` to the singularity of the symbol, below which the partial
/// fraction form loses accuracy to cancellation.
const SERIES_RATIO: f64 = 0.1;
const SERIES_TERMS: u32 = 40;

/// `h_b f(z)` in closed form for symbols `(z+i)^(-n)` and their multiples, and for
/// `f` a combination of cubic kernels, by partial fractions in `conj(zeta)`
/// and the reproducing identities of `(conj(zeta) - a)^(-m)`.
///
/// Returns `None` outside that family.
pub fn hankel_closed_form(b: &ModelFunction, f: &ModelFunction, z: &HalfPlanePoint, c0: Complex64, modified: bool) -> Option<Complex64> {
    let terms = cubic_terms(f)?;
    let zc = z.to_complex();
    let (bz, _, gz) = symbol_jet(b, zc)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (s, a) in terms {
        let ac = a.to_complex();
        let (ba, dba, ga) = symbol_jet(b, ac)?;
        let d = zc - ac;
        // Each (t - a)^(-m) integrates to -pi b^(m-2)(a) / (m-1)!.
        let integral = if d.norm() < SERIES_RATIO * (ac + I).norm() {
            // (t - z)^(-2) = sum_m (m+1) d^m (t - a)^(-2-m)
            let mut acc = Complex64::new(0.0, 0.0);
            let mut dm = Complex64::new(1.0, 0.0);
            for m in 0..SERIES_TERMS {
                acc += (m + 1) as f64 * dm * symbol_taylor(b, ac, m + 3)? / (m + 4) as f64;
                dm *= d;
            }
            -PI * acc
        } else {
            // (t - z)^(-2) (t - a)^(-3) = d^-3 (t-z)^-2 - 3 d^-4 [(t-z)^-1 - (t-a)^-1]
            //                           + d^-2 (t-a)^-3 + 2 d^-3 (t-a)^-2
            -PI * (d.powi(-3) * bz - 3.0 * d.powi(-4) * (gz - ga) + d.powi(-2) * dba / 2.0 + 2.0 * d.powi(-3) * ba)
        };
        let mut v = c0 * s.conj() * integral;
        if modified {
            v -= c0 * (zc + I).powi(-2) * s.conj() * (-PI / 2.0) * dba;
        }
        total += v;
    }
    Some(total)
}

/// `<b, f> = int b conj(f) dV` in closed form for `f` a combination of cubic
/// kernels: each `s (z - conj a)^(-3)` contributes `-(pi/2) conj(s) b'(a)`.
pub fn pairing_with_cubics(b: &ModelFunction, f: &ModelFunction) -> Result<Option<Complex64>> {
    let Some(terms) = cubic_terms(f) else {
        return Ok(None);
    };
    let mut total = Complex64::new(0.0, 0.0);
    for (s, a) in terms {
        total += -PI / 2.0 * s.conj() * b.derivative(&a)?;
    }
    Ok(Some(total))
}

/// The function `u = s (z - conj zeta0)^(-3)` normalized so that `<b, u> = 1`.
pub fn orthogonalizer(b: &ModelFunction, zeta0: HalfPlanePoint) -> Result<ModelFunction> {
    let d = b.derivative(&zeta0)?;
    if d.norm() == 0.0 {
        return Err(Error::Domain(format!("symbol has vanishing derivative at {zeta0}")));
    }
    Ok(ModelFunction::CubicKernel { zeta0, scale: -2.0 / (PI * d.conj()) })
}

/// `f - conj(<b, f>) u`, which is orthogonal to `b` when `<b, u> = 1`; the
/// pairing is conjugate linear in its second slot.
pub fn orthogonal_part(f: &ModelFunction, u: &ModelFunction, pair: Complex64) -> ModelFunction {
    ModelFunction::sum(f.clone(), ModelFunction::scaled(-pair.conj(), u.clone()))
}

/// One probe of the multiplier necessity argument at `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MultiplierProbe {
    /// `|f(z)| / omega(z)^(1-k)` for the better of the two test functions,
    /// normalized to unit Bloch norm; bounded below when the mechanism works.
    pub test_ratio: f64,
    /// `omega(z)^(j-k) |b(z)|`.
    pub bound_quantity: f64,
}

/// Tests `b` at `z` with `theta_w^(1-k)`, `w in {i, z}`, normalized in `B_{omega^k}`.
pub fn multiplier_probe(
    b: &ModelFunction,
    j: f64,
    k: f64,
    z: &HalfPlanePoint,
    cfg: &QuadConfig,
    opts: &SupOptions,
) -> Result<MultiplierProbe> {
    if !(k < 1.0) {
        return Err(Error::Domain(format!("multiplier probe needs k < 1, got {k}")));
    }
    let mut best: f64 = 0.0;
    for w in [HalfPlanePoint::i(), *z] {
        let f = ModelFunction::ThetaPower { w, k };
        let n = norm(NormKind::BlochFull { k }, &f, cfg, opts)?.value;
        best = best.max(f.eval(z).norm() / n / omega(z).powf(1.0 - k));
    }
    Ok(MultiplierProbe { test_ratio: best, bound_quantity: omega(z).powf(j - k) * b.eval(z).norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::atom_projection_closed_form;
    use approx::assert_relative_eq;

    fn p(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn projection_of_atom_matches_mean_value_formula() {
        let zeta = p(0.0, 10.0);
        let f = ModelFunction::atom(zeta).unwrap();
        let proj = Projection::exact(ProjectionKind::P { alpha: 0.0 });
        let z = p(0.0, 2.0);
        let v = project(&proj, &f, &z, &QuadConfig::default()).unwrap();
        let expect = PI * proj.c_alpha * atom_projection_closed_form(&zeta, &z);
        assert!((v - expect).norm() < 1e-9, "{v} vs {expect}");
        let m = project(&Projection::exact(ProjectionKind::PMod), &f, &z, &QuadConfig::default()).unwrap();
        assert!((m - v).norm() < 1e-9);
    }

    #[test]
    fn reproduces_cubic_at_i() {
        let f = ModelFunction::RationalSymbol { n: 3 };
        let cfg = QuadConfig::default().with_tail(Some(5.0));
        let v = project(&Projection::exact(ProjectionKind::P { alpha: 0.0 }), &f, &HalfPlanePoint::i(), &cfg).unwrap();
        assert!((v - Complex64::new(0.0, 0.125)).norm() < 1e-5 * 0.125, "{v}");
    }

    #[test]
    fn bloch_norms() {
        let opts = SupOptions::default();
        let cfg = QuadConfig::default();
        let c = norm(NormKind::BlochSemi { k: 0.0 }, &ModelFunction::Constant(Complex64::new(2.0, 1.0)), &cfg, &opts).unwrap();
        assert_eq!(c.value, 0.0);
        let l = norm(NormKind::BlochSemi { k: 0.0 }, &ModelFunction::log_shift(I).unwrap(), &cfg, &opts).unwrap();
        assert!((l.value - 1.0).abs() < 1e-3 && l.on_hull, "{l:?}");
        let e = norm(NormKind::BlochSemi { k: 0.0 }, &ModelFunction::atom(p(0.0, 3.0)).unwrap(), &cfg, &opts);
        assert!(matches!(e, Err(Error::Unsupported(_))));
    }

    #[test]
    fn orthogonalizer_has_unit_pairing() {
        let b = ModelFunction::RationalSymbol { n: 1 };
        let u = orthogonalizer(&b, p(0.1, 1.2)).unwrap();
        let exact = pairing_with_cubics(&b, &u).unwrap().unwrap();
        assert!((exact - 1.0).norm() < 1e-14);
        let q = l2_pair(&b, &u, &QuadConfig::default()).unwrap();
        assert!((q.value - 1.0).norm() < 1e-5, "{q:?}");
        assert!(!q.marginal);
    }

    #[test]
    fn hankel_closed_form_is_smooth_at_the_kernel_centre() {
        let b = ModelFunction::RationalSymbol { n: 2 };
        let a = p(0.5, 0.8);
        let f = ModelFunction::CubicKernel { zeta0: a, scale: Complex64::new(0.3, -0.7) };
        let c0 = c_alpha_closed_form(0.0);
        let at = hankel_closed_form(&b, &f, &a, c0, false).unwrap();
        let q = hankel_apply(&b, &f, &a, c0, &QuadConfig::default().with_tail(Some(6.0)), false).unwrap();
        assert!((q - at).norm() < 1e-6 * at.norm(), "{q} vs {at}");
        // Both branches agree where the series hands over.
        let reach = 0.1 * (a.to_complex() + Complex64::i()).norm();
        for r in [0.999, 1.001] {
            let z = p(0.5 + r * reach, 0.8);
            let near = hankel_closed_form(&b, &f, &z, c0, false).unwrap();
            let q = hankel_apply(&b, &f, &z, c0, &QuadConfig::default().with_tail(Some(6.0)), false).unwrap();
            assert!((q - near).norm() < 1e-6 * near.norm(), "{r}: {q} vs {near}");
        }
    }

    #[test]
    fn orthogonal_part_has_zero_pairing() {
        let b = ModelFunction::RationalSymbol { n: 1 };
        let f = ModelFunction::CubicKernel { zeta0: p(0.5, 0.8), scale: Complex64::new(0.3, -0.7) };
        let u = orthogonalizer(&b, HalfPlanePoint::i()).unwrap();
        let pair = pairing_with_cubics(&b, &f).unwrap().unwrap();
        assert!(pair.im.abs() > 1e-3);
        let g = orthogonal_part(&f, &u, pair);
        assert!(pairing_with_cubics(&b, &g).unwrap().unwrap().norm() < 1e-14);
    }

    #[test]
    fn hankel_closed_form_matches_quadrature() {
        let b = ModelFunction::RationalSymbol { n: 1 };
        let f = ModelFunction::CubicKernel { zeta0: p(0.5, 0.8), scale: Complex64::new(0.3, -0.7) };
        let c0 = c_alpha_closed_form(0.0);
        let cfg = QuadConfig::default().with_tail(Some(6.0));
        for z in [p(0.0, 1.0), p(-2.0, 0.3), p(4.0, 5.0)] {
            for modified in [false, true] {
                let q = hankel_apply(&b, &f, &z, c0, &cfg, modified).unwrap();
                let e = hankel_closed_form(&b, &f, &z, c0, modified).unwrap();
                assert!((q - e).norm() < 1e-5 * e.norm(), "{z} {modified}: {q} vs {e}");
            }
        }
    }

    #[test]
    fn duality_pair_against_constant_vanishes() {
        let f = ModelFunction::RationalSymbol { n: 3 };
        let r = duality_pair(&f, &ModelFunction::Constant(Complex64::new(1.0, 0.0)), &QuadConfig::default()).unwrap();
        assert_eq!(r.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn weighted_norm_of_atom_is_two() {
        let f = ModelFunction::atom(p(3.0, 0.01)).unwrap();
        let r = weighted_l1_norm(&f, 0.0, 0.0, &QuadConfig::default()).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-12);
    }
}
