//! Atoms, theta_w, critical examples and symbols, with their derivatives.

use bergman_lab::halfplane::HalfPlanePoint;
use bergman_lab::model::ModelFunction;
use bergman_lab::quadrature::{integrate_halfplane, QuadConfig};
use num_complex::Complex64;

fn main() -> bergman_lab::Result<()> {
    let zeta = HalfPlanePoint::new(5.0, 0.01)?;
    let atom = ModelFunction::atom(zeta)?;
    let cfg = QuadConfig::default();
    let mean = integrate_halfplane(|z| atom.eval(&z), &atom.features(), &cfg)?;
    let mass = integrate_halfplane(|z| atom.eval(&z).norm(), &atom.features(), &cfg)?;
    println!("atom at {zeta}: int f = {:.2e}, int |f| = {:.9}", mean.value.norm(), mass.value);

    let w = HalfPlanePoint::new(0.3, 1e-3)?;
    let z = HalfPlanePoint::new(0.0, 2.0)?;
    let family = [
        ("theta_w", ModelFunction::Theta { w }),
        ("theta_w^(1/2)", ModelFunction::ThetaPower { w, k: 0.5 }),
        ("log theta_w", ModelFunction::LogTheta { w }),
        ("weighted atom", ModelFunction::WeightedAtom { w, l: 0.0, k: 0.5 }),
        ("critical k = 0", ModelFunction::CriticalExample { k: 0.0 }),
        ("critical k = 1", ModelFunction::CriticalExample { k: 1.0 }),
        ("(z+i)^-1", ModelFunction::RationalSymbol { n: 1 }),
        ("log(z+i)", ModelFunction::log_shift(Complex64::i())?),
    ];
    for (name, f) in &family {
        println!("{name:>15}: f({z}) = {:.6}, f' = {:.6}", f.eval(&z), f.derivative(&z)?);
    }

    let q = ModelFunction::quotient(ModelFunction::WeightedAtom { w, l: 0.0, k: 0.5 }, ModelFunction::ThetaPower { w, k: 0.5 });
    println!("composite derivative {:.6}", q.derivative(&z)?);
    Ok(())
}
