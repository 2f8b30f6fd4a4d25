//! Points of the upper half-plane, logarithmic weights, and the handful of
//! regions (balls, Carleson squares, shells, the cone) that the estimates
//! are phrased in.

use std::f64::consts::E;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A point `x + iy` of the open upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfPlanePoint {
    x: f64,
    y: f64,
}

impl HalfPlanePoint {
    /// Rejects `y <= 0` and non-finite coordinates.
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) || y <= 0.0 {
            return Err(Error::InvalidPoint { x, y });
        }
        Ok(Self { x, y })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// The point `i`.
    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    /// Caller guarantees `y > 0`; used on quadrature nodes, which never touch the boundary.
    #[inline]
    pub(crate) fn new_unchecked(x: f64, y: f64) -> Self {
        debug_assert!(y > 0.0, "quadrature node left the half-plane: y = {y}");
        Self { x, y }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    #[inline]
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// `|z|`, always at least `y`.
    #[inline]
    pub fn modulus(&self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Mirror image under `x -> -x`.
    pub fn reflect(&self) -> Self {
        Self { x: -self.x, y: self.y }
    }

    /// `|z - w|`.
    pub fn dist(&self, w: &HalfPlanePoint) -> f64 {
        (self.x - w.x).hypot(self.y - w.y)
    }

    /// `|z - conj(w)|`, bounded below by `Im z + Im w`.
    pub fn dist_conj(&self, w: &HalfPlanePoint) -> f64 {
        (self.x - w.x).hypot(self.y + w.y)
    }
}

impl std::fmt::Display for HalfPlanePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{:+}i", self.x, self.y)
    }
}

/// `max(ln t, 0)`; `t` must be positive.
pub fn ln_plus(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("ln_plus needs t > 0, got {t}")));
    }
    Ok(ln_plus_or_zero(t))
}

/// `max(ln t, 0)` extended by zero to `t <= 0`, for nested uses such as `ln+(ln+ t)`.
#[inline]
pub(crate) fn ln_plus_or_zero(t: f64) -> f64 {
    if t > 1.0 {
        t.ln()
    } else {
        0.0
    }
}

/// The logarithmic weights of the laboratory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WeightSpec {
    /// `omega^k`, with `omega(z) = 1 + ln+(1/y) + ln+|z|`.
    OmegaPow(f64),
    /// `(ln^e1(e+|z|) + ln^e2(e+1/y))^k * [ln(e + ln^e3(e+|z|) + ln^e4(e+1/y))]^s`.
    General { eps: [bool; 4], k: f64, s: f64 },
    /// `(1 + ln(e + 1/y))^(-k)`.
    Rho(f64),
    /// `1 + ln+(ln+(1/y)) + ln+(ln+|z|)`.
    LogLog,
    /// `ln(e + 1/y)`.
    LogBoundary,
    /// `ln(e + |z|)`.
    LogInfinity,
}

/// `omega(z) = 1 + ln+(1/y) + ln+|z|`.
#[inline]
pub fn omega(z: &HalfPlanePoint) -> f64 {
    1.0 + ln_plus_or_zero(1.0 / z.y) + ln_plus_or_zero(z.modulus())
}

/// Evaluates a weight; finite and strictly positive on the open half-plane.
pub fn eval_weight(w: &WeightSpec, z: &HalfPlanePoint) -> f64 {
    match *w {
        WeightSpec::OmegaPow(k) => {
            if k == 0.0 {
                1.0
            } else if k == 1.0 {
                omega(z)
            } else {
                omega(z).powf(k)
            }
        }
        WeightSpec::General { eps, k, s } => {
            let at_infinity = (E + z.modulus()).ln();
            let at_boundary = (E + 1.0 / z.y).ln();
            let pick = |on: bool, v: f64| if on { v } else { 1.0 };
            let base = pick(eps[0], at_infinity) + pick(eps[1], at_boundary);
            let inner = (E + pick(eps[2], at_infinity) + pick(eps[3], at_boundary)).ln();
            base.powf(k) * inner.powf(s)
        }
        WeightSpec::Rho(k) => (1.0 + (E + 1.0 / z.y).ln()).powf(-k),
        WeightSpec::LogLog => 1.0 + ln_plus_or_zero(ln_plus_or_zero(1.0 / z.y)) + ln_plus_or_zero(ln_plus_or_zero(z.modulus())),
        WeightSpec::LogBoundary => (E + 1.0 / z.y).ln(),
        WeightSpec::LogInfinity => (E + z.modulus()).ln(),
    }
}

/// `int_2^t (ln s)^k / s ds` in closed form.
pub fn log_power_integral(k: f64, t: f64) -> Result<f64> {
    if !(t >= 2.0) || !t.is_finite() {
        return Err(Error::Domain(format!("log_power_integral needs t >= 2, got {t}")));
    }
    let (lt, l2) = (t.ln(), 2f64.ln());
    if k == -1.0 {
        Ok(lt.ln() - l2.ln())
    } else {
        Ok((lt.powf(k + 1.0) - l2.powf(k + 1.0)) / (k + 1.0))
    }
}

/// Which of the three zones of the far-field decomposition around `zeta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelZone {
    /// `|z+i| < |zeta-i|/4`
    Near,
    /// `|zeta-i|/4 <= |z+i| <= 4|zeta-i|`
    Middle,
    /// `|z+i| > 4|zeta-i|`
    Far,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    /// Closed disc.
    Ball { center: HalfPlanePoint, radius: f64 },
    /// `Q_w = (u-v, u+v) x (0, 2v)` for `w = u + iv`.
    CarlesonSquare { w: HalfPlanePoint },
    /// `Q_{w_j} \ Q_{w_{j-1}}` with `w_j = u + i 2^j v`; `j = 0` is `Q_w` itself.
    Shell { w: HalfPlanePoint, j: u32 },
    /// `{|x| <= y, y > 1}`.
    Cone,
    /// The cone cut at height `y_max`.
    ConeBelow { y_max: f64 },
    /// `{|z| < radius}` intersected with the half-plane.
    HalfDisc { radius: f64 },
    /// `{0 < y < y_max}`.
    Strip { y_max: f64 },
    /// One zone of the `|z+i|` versus `|zeta-i|` decomposition.
    Zone { zeta: HalfPlanePoint, zone: KernelZone },
}

impl Region {
    /// `Q_w` as an axis-aligned box `(x0, x1, y0, y1)`.
    pub fn carleson_box(w: &HalfPlanePoint) -> (f64, f64, f64, f64) {
        (w.x - w.y, w.x + w.y, 0.0, 2.0 * w.y)
    }

    /// Checks the parameters; a ball must sit inside the open half-plane.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Domain(m));
        match *self {
            Region::Ball { center, radius } => {
                if !(radius > 0.0) || radius >= center.y {
                    return bad(format!("ball radius {radius} must lie in (0, {})", center.y));
                }
            }
            Region::ConeBelow { y_max } if !(y_max > 1.0) => {
                return bad(format!("cone height {y_max} must exceed 1"));
            }
            Region::HalfDisc { radius } if !(radius > 0.0) => {
                return bad(format!("half-disc radius {radius} must be positive"));
            }
            Region::Strip { y_max } if !(y_max > 0.0) => {
                return bad(format!("strip height {y_max} must be positive"));
            }
            _ => {}
        }
        Ok(())
    }
}

fn in_box(b: (f64, f64, f64, f64), z: &HalfPlanePoint) -> bool {
    z.x > b.0 && z.x < b.1 && z.y > b.2 && z.y < b.3
}

/// Exact membership test.
pub fn region_contains(r: &Region, z: &HalfPlanePoint) -> bool {
    match *r {
        Region::Ball { center, radius } => z.dist(&center) <= radius,
        Region::CarlesonSquare { w } => in_box(Region::carleson_box(&w), z),
        Region::Shell { w, j } => {
            let scaled = |m: u32| HalfPlanePoint::new_unchecked(w.x, w.y * 2f64.powi(m as i32));
            let outer = in_box(Region::carleson_box(&scaled(j)), z);
            if j == 0 {
                outer
            } else {
                outer && !in_box(Region::carleson_box(&scaled(j - 1)), z)
            }
        }
        Region::Cone => z.x.abs() <= z.y && z.y > 1.0,
        Region::ConeBelow { y_max } => z.x.abs() <= z.y && z.y > 1.0 && z.y < y_max,
        Region::HalfDisc { radius } => z.modulus() < radius,
        Region::Strip { y_max } => z.y < y_max,
        Region::Zone { zeta, zone } => {
            let a = (z.to_complex() + Complex64::i()).norm();
            let b = (zeta.to_complex() - Complex64::i()).norm();
            match zone {
                KernelZone::Near => a < 0.25 * b,
                KernelZone::Middle => a >= 0.25 * b && a <= 4.0 * b,
                KernelZone::Far => a > 4.0 * b,
            }
        }
    }
}
