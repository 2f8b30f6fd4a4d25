//! Bergman kernels of the upper half-plane and their modified variants.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfplane::HalfPlanePoint;
use crate::quadrature::{integrate_halfplane, Features, Hint, QuadConfig};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum KernelKind {
    /// `c_alpha / (z - conj(zeta))^(2 + alpha)` against `dV_alpha`.
    Plain { alpha: f64 },
    /// `K(z, zeta) - K(z, i)`, `alpha = 0`.
    Modified,
    /// `|K(z, zeta)| - |K(z, i)|`, `alpha = 0`; takes both signs.
    AbsModified,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    pub kind: KernelKind,
    pub c_alpha: Complex64,
}

/// Reproducing constant of `A^2_alpha` for the measure `y^alpha dV`:
/// `(alpha + 1) (2i)^(2 + alpha) / (4 pi)`, so `c_0 = -1/pi`.
pub fn c_alpha_closed_form(alpha: f64) -> Complex64 {
    (alpha + 1.0) * Complex64::new(0.0, 2.0).powf(2.0 + alpha) / (4.0 * PI)
}

impl KernelSpec {
    /// Unweighted Bergman kernel with its exact constant.
    pub fn bergman() -> Self {
        Self { kind: KernelKind::Plain { alpha: 0.0 }, c_alpha: c_alpha_closed_form(0.0) }
    }

    pub fn plain(alpha: f64, c_alpha: Complex64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::Domain(format!("kernel order alpha = {alpha} must be a finite nonnegative number")));
        }
        Ok(Self { kind: KernelKind::Plain { alpha }, c_alpha })
    }

    pub fn modified(c0: Complex64) -> Self {
        Self { kind: KernelKind::Modified, c_alpha: c0 }
    }

    pub fn abs_modified(c0: Complex64) -> Self {
        Self { kind: KernelKind::AbsModified, c_alpha: c0 }
    }
}

/// `(z - conj(zeta))^(-p)` on the principal branch; the base has positive
/// imaginary part so the branch is continuous.
#[inline]
pub(crate) fn inv_pow_conj(z: &HalfPlanePoint, zeta: &HalfPlanePoint, p: f64) -> Complex64 {
    let d = Complex64::new(z.x() - zeta.x(), z.y() + zeta.y());
    if p.fract() == 0.0 && p.abs() < 64.0 {
        d.powi(-(p as i32))
    } else {
        d.powf(-p)
    }
}

/// Kernel value; `AbsModified` is returned as a real number in the real part.
pub fn eval_kernel(spec: &KernelSpec, z: &HalfPlanePoint, zeta: &HalfPlanePoint) -> Complex64 {
    let i = HalfPlanePoint::i();
    match spec.kind {
        KernelKind::Plain { alpha } => spec.c_alpha * inv_pow_conj(z, zeta, 2.0 + alpha),
        KernelKind::Modified => spec.c_alpha * (inv_pow_conj(z, zeta, 2.0) - inv_pow_conj(z, &i, 2.0)),
        KernelKind::AbsModified => {
            let c = spec.c_alpha.norm();
            Complex64::new(c * (z.dist_conj(zeta).powi(-2) - z.dist_conj(&i).powi(-2)), 0.0)
        }
    }
}

/// `|zeta - i| / |z + i|^3`, valid where `|z + i| > 4 |zeta - i|`.
pub fn kernel_tail_bound(z: &HalfPlanePoint, zeta: &HalfPlanePoint) -> Result<f64> {
    let a = z.dist_conj(&HalfPlanePoint::i());
    let b = zeta.dist(&HalfPlanePoint::i());
    if !(a > 4.0 * b) {
        return Err(Error::Domain(format!("|z + i| = {a} must exceed 4 |zeta - i| = {}", 4.0 * b)));
    }
    Ok(b / a.powi(3))
}

/// Probe points for the reproducing identity.
pub const CALIBRATION_PROBES: [(f64, f64); 3] = [(0.0, 1.0), (1.0, 1.0), (0.0, 3.0)];

/// Constants `f(z0) / int (z0 - conj w)^(-2-alpha) f(w) dV_alpha(w)` for the
/// probe `f(w) = (w + i)^(-4)`, one per probe point.
pub fn calibration_probes(alpha: f64, cfg: &QuadConfig) -> Result<Vec<Complex64>> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("alpha = {alpha} must be a finite nonnegative number")));
    }
    let cfg = cfg.with_tail(Some(6.0));
    CALIBRATION_PROBES
        .iter()
        .map(|&(x, y)| {
            let z0 = HalfPlanePoint::new(x, y)?;
            let probe = |w: &HalfPlanePoint| (w.to_complex() + Complex64::i()).powi(-4);
            let integrand = |w: HalfPlanePoint| inv_pow_conj(&z0, &w, 2.0 + alpha) * probe(&w) * w.y().powf(alpha);
            let features = Features::hints(vec![Hint { point: z0, scale: 0.5 * y }]);
            let r = integrate_halfplane(integrand, &features, &cfg)?;
            Ok(probe(&z0) / r.value)
        })
        .collect()
}

/// Mean of the per-probe constants; fails when they spread by more than ten
/// times the quadrature tolerance.
pub fn calibrate_c_alpha(alpha: f64, cfg: &QuadConfig) -> Result<Complex64> {
    let probes = calibration_probes(alpha, cfg)?;
    let mean = probes.iter().sum::<Complex64>() / probes.len() as f64;
    let spread = probes.iter().map(|c| (c - mean).norm()).fold(0.0, f64::max) / mean.norm();
    if !(spread <= 10.0 * cfg.rel_tol) {
        return Err(Error::Calibration(format!(
            "alpha = {alpha}: per-probe constants spread by {spread:e}, limit {:e}",
            10.0 * cfg.rel_tol
        )));
    }
    Ok(mean)
}
