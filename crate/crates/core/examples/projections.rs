//! Projections of an atom and the weighted norms that compare them with omega.

use bergman_lab::halfplane::{omega, HalfPlanePoint};
use bergman_lab::model::{atom_projection_closed_form, ModelFunction};
use bergman_lab::operators::{norm, project, NormKind, Projection, ProjectionKind};
use bergman_lab::quadrature::{QuadConfig, SupOptions};
use num_complex::Complex64;

fn main() -> bergman_lab::Result<()> {
    let cfg = QuadConfig::default();
    let zeta = HalfPlanePoint::new(10.0, 0.01)?;
    let atom = ModelFunction::atom(zeta)?;
    let z = HalfPlanePoint::new(0.0, 2.0)?;
    for kind in [ProjectionKind::P { alpha: 0.0 }, ProjectionKind::PMod, ProjectionKind::PPlus, ProjectionKind::PPlusMod] {
        let p = Projection::exact(kind);
        println!("{kind:?} f_zeta at {z}: {:.6e}", project(&p, &atom, &z, &cfg)?);
    }
    let pc = Projection::exact(ProjectionKind::P { alpha: 0.0 });
    println!("closed form: {:.6e}", std::f64::consts::PI * pc.c_alpha * atom_projection_closed_form(&zeta, &z));

    // The reproducing property on (z+i)^-3 with a calibrated kernel.
    let f = ModelFunction::RationalSymbol { n: 3 };
    let p1 = Projection::calibrated(ProjectionKind::P { alpha: 1.0 }, &cfg)?;
    let v = project(&p1, &f, &z, &cfg.with_tail(Some(5.0)))?;
    println!("P_1 (z+i)^-3 at {z} = {v:.9}, exact {:.9}", f.eval(&z));

    let opts = SupOptions::default();
    let l1 = norm(NormKind::WeightedL1 { k: 0.0, alpha: 0.0 }, &atom, &cfg, &opts)?;
    let log = ModelFunction::log_shift(Complex64::i())?;
    let bloch = norm(NormKind::BlochSemi { k: 0.0 }, &log, &cfg, &opts)?;
    let hinf = norm(NormKind::HInftyOmega { k: -1.0 }, &log, &cfg, &opts)?;
    println!("||f_zeta||_1 = {:.9}, omega(zeta) = {:.4}", l1.value, omega(&zeta));
    println!("||log(z+i)||_B = {:.6} (on hull: {}), sup |log(z+i)| / omega = {:.4}", bloch.value, bloch.on_hull, hinf.value);
    Ok(())
}
