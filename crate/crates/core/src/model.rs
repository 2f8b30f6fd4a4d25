//! Closed-form functions on the half-plane: atoms, test functions, symbols.
//!
//! Every holomorphic kind carries its exact derivative. Logarithms and powers
//! use the principal branch; each is applied to a quantity whose real part or
//! imaginary part is bounded away from the branch cut.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfplane::{omega, HalfPlanePoint};
use crate::quadrature::{Disc, Features, Hint};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Clone, Debug, PartialEq)]
pub enum ModelFunction {
    /// `(4/(pi l^2)) 1_{B(zeta, l/2)} - (4/pi) 1_{B(i, 1/2)}` with `l = Im zeta`.
    AtomFZeta {
        zeta: HalfPlanePoint,
    },
    /// `Im(w) omega(w)^(1-(l+k)) / (z - conj w)^3`.
    WeightedAtom {
        w: HalfPlanePoint,
        l: f64,
        k: f64,
    },
    /// `1 - log(z - conj w) + ln|i + w| + 2 log(i + z)`.
    Theta {
        w: HalfPlanePoint,
    },
    /// `Theta_w^(1-k)`.
    ThetaPower {
        w: HalfPlanePoint,
        k: f64,
    },
    /// `log Theta_w`.
    LogTheta {
        w: HalfPlanePoint,
    },
    /// `1` for `k > 1`, `log log(4i + z)` for `k = 1`, `log(4i + z)^(1-k)` for `k < 1`.
    CriticalExample {
        k: f64,
    },
    /// `scale (z - conj zeta0)^(-3)`.
    CubicKernel {
        zeta0: HalfPlanePoint,
        scale: Complex64,
    },
    /// `(z + i)^(-n)`.
    RationalSymbol {
        n: u32,
    },
    /// `mass / (pi r^2)` on the closed disc `B(center, r)`, zero elsewhere.
    Bump {
        center: HalfPlanePoint,
        radius: f64,
        mass: f64,
    },
    /// `log(z + a)` with `Im a >= 0`.
    LogShift {
        a: Complex64,
    },
    Constant(Complex64),
    Scaled(Complex64, Box<ModelFunction>),
    Sum(Box<ModelFunction>, Box<ModelFunction>),
    Product(Box<ModelFunction>, Box<ModelFunction>),
    Quotient(Box<ModelFunction>, Box<ModelFunction>),
}

use ModelFunction as M;

/// Principal logarithm of the nonvanishing quantity `z - conj(w)`.
#[inline]
fn log_conj_diff(z: &HalfPlanePoint, w: &HalfPlanePoint) -> Complex64 {
    Complex64::new(z.x() - w.x(), z.y() + w.y()).ln()
}

#[inline]
fn conj_diff(z: &HalfPlanePoint, w: &HalfPlanePoint) -> Complex64 {
    Complex64::new(z.x() - w.x(), z.y() + w.y())
}

fn theta(w: &HalfPlanePoint, z: &HalfPlanePoint) -> Complex64 {
    let zc = z.to_complex();
    1.0 - log_conj_diff(z, w) + (w.to_complex() + I).norm().ln() + 2.0 * (zc + I).ln()
}

fn theta_prime(w: &HalfPlanePoint, z: &HalfPlanePoint) -> Complex64 {
    -1.0 / conj_diff(z, w) + 2.0 / (z.to_complex() + I)
}

impl ModelFunction {
    /// Atom centred at `zeta`, which must satisfy `|zeta - i| > 1`.
    pub fn atom(zeta: HalfPlanePoint) -> Result<Self> {
        if !(zeta.dist(&HalfPlanePoint::i()) > 1.0) {
            return Err(Error::Domain(format!("atom centre {zeta} must satisfy |zeta - i| > 1")));
        }
        Ok(M::AtomFZeta { zeta })
    }

    pub fn bump(center: HalfPlanePoint, radius: f64, mass: f64) -> Result<Self> {
        if !(radius > 0.0 && radius < center.y()) {
            return Err(Error::Domain(format!("bump radius {radius} must lie in (0, {})", center.y())));
        }
        Ok(M::Bump { center, radius, mass })
    }

    pub fn log_shift(a: Complex64) -> Result<Self> {
        if !(a.im >= 0.0) {
            return Err(Error::Domain(format!("log shift {a} must have nonnegative imaginary part")));
        }
        Ok(M::LogShift { a })
    }

    pub fn scaled(c: Complex64, f: ModelFunction) -> Self {
        M::Scaled(c, Box::new(f))
    }

    pub fn sum(f: ModelFunction, g: ModelFunction) -> Self {
        M::Sum(Box::new(f), Box::new(g))
    }

    pub fn product(f: ModelFunction, g: ModelFunction) -> Self {
        M::Product(Box::new(f), Box::new(g))
    }

    pub fn quotient(f: ModelFunction, g: ModelFunction) -> Self {
        M::Quotient(Box::new(f), Box::new(g))
    }

    pub fn is_holomorphic(&self) -> bool {
        match self {
            M::AtomFZeta { .. } | M::Bump { .. } => false,
            M::Scaled(_, f) => f.is_holomorphic(),
            M::Sum(f, g) | M::Product(f, g) | M::Quotient(f, g) => f.is_holomorphic() && g.is_holomorphic(),
            _ => true,
        }
    }

    pub fn eval(&self, z: &HalfPlanePoint) -> Complex64 {
        let zc = z.to_complex();
        match self {
            M::AtomFZeta { zeta } => {
                let lambda = zeta.y();
                let mut v = 0.0;
                if z.dist(zeta) <= 0.5 * lambda {
                    v += 4.0 / (PI * lambda * lambda);
                }
                if z.dist(&HalfPlanePoint::i()) <= 0.5 {
                    v -= 4.0 / PI;
                }
                Complex64::new(v, 0.0)
            }
            M::WeightedAtom { w, l, k } => w.y() * omega(w).powf(1.0 - (l + k)) * conj_diff(z, w).powi(-3),
            M::Theta { w } => theta(w, z),
            M::ThetaPower { w, k } => theta(w, z).powf(1.0 - k),
            M::LogTheta { w } => theta(w, z).ln(),
            M::CriticalExample { k } => {
                let l = (zc + 4.0 * I).ln();
                if *k > 1.0 {
                    Complex64::new(1.0, 0.0)
                } else if *k == 1.0 {
                    l.ln()
                } else {
                    l.powf(1.0 - k)
                }
            }
            M::CubicKernel { zeta0, scale } => scale * conj_diff(z, zeta0).powi(-3),
            M::RationalSymbol { n } => (zc + I).powi(-(*n as i32)),
            M::Bump { center, radius, mass } => {
                if z.dist(center) <= *radius {
                    Complex64::new(mass / (PI * radius * radius), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            M::LogShift { a } => (zc + a).ln(),
            M::Constant(c) => *c,
            M::Scaled(c, f) => c * f.eval(z),
            M::Sum(f, g) => f.eval(z) + g.eval(z),
            M::Product(f, g) => f.eval(z) * g.eval(z),
            M::Quotient(f, g) => f.eval(z) / g.eval(z),
        }
    }

    pub fn derivative(&self, z: &HalfPlanePoint) -> Result<Complex64> {
        let zc = z.to_complex();
        Ok(match self {
            M::AtomFZeta { .. } | M::Bump { .. } => return Err(Error::Unsupported("derivative of a piecewise-constant function".into())),
            M::WeightedAtom { w, l, k } => -3.0 * w.y() * omega(w).powf(1.0 - (l + k)) * conj_diff(z, w).powi(-4),
            M::Theta { w } => theta_prime(w, z),
            M::ThetaPower { w, k } => (1.0 - k) * theta(w, z).powf(-k) * theta_prime(w, z),
            M::LogTheta { w } => theta_prime(w, z) / theta(w, z),
            M::CriticalExample { k } => {
                let s = zc + 4.0 * I;
                let l = s.ln();
                if *k > 1.0 {
                    Complex64::new(0.0, 0.0)
                } else if *k == 1.0 {
                    1.0 / (s * l)
                } else {
                    (1.0 - k) * l.powf(-k) / s
                }
            }
            M::CubicKernel { zeta0, scale } => -3.0 * scale * conj_diff(z, zeta0).powi(-4),
            M::RationalSymbol { n } => -(*n as f64) * (zc + I).powi(-(*n as i32) - 1),
            M::LogShift { a } => 1.0 / (zc + a),
            M::Constant(_) => Complex64::new(0.0, 0.0),
            M::Scaled(c, f) => c * f.derivative(z)?,
            M::Sum(f, g) => f.derivative(z)? + g.derivative(z)?,
            M::Product(f, g) => f.derivative(z)? * g.eval(z) + f.eval(z) * g.derivative(z)?,
            M::Quotient(f, g) => {
                let gv = g.eval(z);
                (f.derivative(z)? * gv - f.eval(z) * g.derivative(z)?) / (gv * gv)
            }
        })
    }

    /// Points near which the function varies on a short length scale.
    pub fn hints(&self) -> Vec<Hint> {
        let at = |p: HalfPlanePoint, scale: f64| vec![Hint { point: p, scale }];
        match self {
            M::AtomFZeta { zeta } => {
                let mut h = at(*zeta, 0.25 * zeta.y());
                h.extend(at(HalfPlanePoint::i(), 0.25));
                h
            }
            M::WeightedAtom { w, .. } | M::Theta { w } | M::ThetaPower { w, .. } | M::LogTheta { w } => at(*w, 0.5 * w.y()),
            M::CubicKernel { zeta0, .. } => at(*zeta0, 0.5 * zeta0.y()),
            M::Bump { center, radius, .. } => at(*center, 0.5 * radius),
            M::LogShift { a } if a.im > 0.0 => at(HalfPlanePoint::new_unchecked(-a.re, a.im), 0.5 * a.im),
            M::Scaled(_, f) => f.hints(),
            M::Sum(f, g) | M::Product(f, g) | M::Quotient(f, g) => {
                let mut h = f.hints();
                h.extend(g.hints());
                h
            }
            _ => vec![],
        }
    }

    /// Discs outside of which the function vanishes, when it has compact support.
    pub fn support(&self) -> Option<Vec<Disc>> {
        match self {
            M::AtomFZeta { zeta } => {
                Some(vec![Disc { center: *zeta, radius: 0.5 * zeta.y() }, Disc { center: HalfPlanePoint::i(), radius: 0.5 }])
            }
            M::Bump { center, radius, .. } => Some(vec![Disc { center: *center, radius: *radius }]),
            M::Scaled(_, f) => f.support(),
            M::Product(f, g) => f.support().or_else(|| g.support()),
            M::Quotient(f, _) => f.support(),
            M::Sum(f, g) => {
                let (a, b) = (f.support()?, g.support()?);
                let disjoint = a.iter().all(|d| b.iter().all(|e| d.center.dist(&e.center) >= d.radius + e.radius));
                disjoint.then(|| a.into_iter().chain(b).collect())
            }
            _ => None,
        }
    }

    pub fn features(&self) -> Features {
        Features { hints: self.hints(), discs: self.support() }
    }
}

/// Anything evaluable on the half-plane that quadrature can consume.
pub trait Field: Sync {
    fn value(&self, z: &HalfPlanePoint) -> Complex64;

    fn features(&self) -> Features {
        Features::default()
    }
}

impl Field for ModelFunction {
    fn value(&self, z: &HalfPlanePoint) -> Complex64 {
        self.eval(z)
    }

    fn features(&self) -> Features {
        ModelFunction::features(self)
    }
}

/// A closure together with its quadrature features.
pub struct FnField<F> {
    pub f: F,
    pub features: Features,
}

impl<F: Fn(&HalfPlanePoint) -> Complex64 + Sync> Field for FnField<F> {
    fn value(&self, z: &HalfPlanePoint) -> Complex64 {
        (self.f)(z)
    }

    fn features(&self) -> Features {
        self.features.clone()
    }
}

/// `(1/pi) [(z - conj zeta)^(-2) - (z + i)^(-2)]`.
///
/// The Bergman projection of the atom centred at `zeta` is `pi c0` times this
/// value, where `c0` is the kernel constant; with the exact `c0 = -1/pi` that
/// factor is `-1`, so the modulus is the projection's modulus.
pub fn atom_projection_closed_form(zeta: &HalfPlanePoint, z: &HalfPlanePoint) -> Complex64 {
    (conj_diff(z, zeta).powi(-2) - (z.to_complex() + I).powi(-2)) / PI
}

/// `int_{B(c, r)} |w - p|^(-2) dV(w)` for `p` outside the disc at distance `d`
/// from its centre: `pi ln(d^2 / (d^2 - r^2))`.
fn disc_inverse_square(d: f64, r: f64) -> f64 {
    -PI * (-(r / d).powi(2)).ln_1p()
}

/// `P+ f_zeta(z)` with the kernel `|K(z, w)| = 1 / (pi |z - conj w|^2)`.
pub fn atom_pplus_closed_form(zeta: &HalfPlanePoint, z: &HalfPlanePoint) -> f64 {
    let lambda = zeta.y();
    let near = 4.0 / (PI * lambda * lambda) * disc_inverse_square(z.dist_conj(zeta), 0.5 * lambda);
    let base = 4.0 / PI * disc_inverse_square(z.dist_conj(&HalfPlanePoint::i()), 0.5);
    (near - base) / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn p(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    #[test]
    fn eval_examples() {
        let i = HalfPlanePoint::i();
        let t = M::Theta { w: i }.eval(&i);
        assert_relative_eq!(t.re, 1.0 + 2.0 * 2f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(t.im, PI / 2.0, max_relative = 1e-15);
        let a = ModelFunction::atom(p(0.0, 10.0)).unwrap().eval(&i);
        assert_relative_eq!(a.re, -4.0 / PI, max_relative = 1e-15);
        assert_eq!(M::CriticalExample { k: 2.0 }.eval(&p(3.0, 0.1)), Complex64::new(1.0, 0.0));
        assert!(ModelFunction::atom(p(0.0, 1.5)).is_err());
    }

    #[test]
    fn derivative_examples() {
        let i = HalfPlanePoint::i();
        assert_relative_eq!(M::RationalSymbol { n: 1 }.derivative(&i).unwrap().re, 0.25, max_relative = 1e-15);
        let d = M::Theta { w: i }.derivative(&i).unwrap();
        assert!(d.re.abs() < 1e-15);
        assert_relative_eq!(d.im, -0.5, max_relative = 1e-15);
        assert_eq!(M::CriticalExample { k: 2.0 }.derivative(&i).unwrap(), Complex64::new(0.0, 0.0));
        assert!(matches!(ModelFunction::atom(p(0.0, 10.0)).unwrap().derivative(&i), Err(Error::Unsupported(_))));
    }

    #[test]
    fn atom_projection_example() {
        let v = atom_projection_closed_form(&p(0.0, 10.0), &HalfPlanePoint::i());
        assert_relative_eq!(v.re, (0.25 - 1.0 / 121.0) / PI, max_relative = 1e-14);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn pplus_closed_form_is_small_far_away_and_positive_near_the_atom() {
        let zeta = p(3.0, 0.01);
        assert!(atom_pplus_closed_form(&zeta, &zeta) > 0.0);
        assert!(atom_pplus_closed_form(&zeta, &HalfPlanePoint::i()) < 0.0);
        // Far field: both discs contribute about 1/(pi |z|^2) and cancel.
        let far = atom_pplus_closed_form(&zeta, &p(1e6, 1.0)).abs();
        assert!(far < 1e-12);
    }

    #[test]
    fn supports_are_disjoint_discs() {
        let f = ModelFunction::atom(p(5.0, 0.5)).unwrap();
        let s = f.support().unwrap();
        assert_eq!(s.len(), 2);
        let g = ModelFunction::scaled(Complex64::new(2.0, 0.0), f.clone());
        assert_eq!(g.support(), f.support());
        assert!(M::Theta { w: HalfPlanePoint::i() }.support().is_none());
    }

    #[test]
    fn composite_derivatives_follow_the_rules() {
        let w = p(0.3, 0.7);
        let f = ModelFunction::quotient(M::WeightedAtom { w, l: 0.0, k: 0.5 }, M::ThetaPower { w, k: 0.5 });
        let z = p(-0.4, 1.3);
        let h = 1e-6;
        let fd = (f.eval(&p(z.x() + h, z.y())) - f.eval(&p(z.x() - h, z.y()))) / (2.0 * h);
        let d = f.derivative(&z).unwrap();
        assert!((fd - d).norm() < 1e-7 * d.norm());
    }
}
