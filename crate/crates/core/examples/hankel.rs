//! Small Hankel operators with the symbol (z+i)^-1: closed form, quadrature,
//! and the split into the part orthogonal to b.

use bergman_lab::halfplane::HalfPlanePoint;
use bergman_lab::kernels::c_alpha_closed_form;
use bergman_lab::model::ModelFunction;
use bergman_lab::operators::{hankel_apply, hankel_closed_form, l2_pair, orthogonal_part, orthogonalizer, pairing_with_cubics};
use bergman_lab::quadrature::QuadConfig;
use num_complex::Complex64;

fn main() -> bergman_lab::Result<()> {
    let cfg = QuadConfig::default();
    let c0 = c_alpha_closed_form(0.0);
    let b = ModelFunction::RationalSymbol { n: 1 };
    let f = ModelFunction::CubicKernel { zeta0: HalfPlanePoint::new(0.5, 0.8)?, scale: Complex64::new(1.0, 0.0) };

    let pair = pairing_with_cubics(&b, &f)?.unwrap_or_default();
    println!("<b, f> = {pair:.9} (quadrature {:.9})", l2_pair(&b, &f, &cfg)?.value);

    let u = orthogonalizer(&b, HalfPlanePoint::i())?;
    let g = orthogonal_part(&f, &u, pair);
    println!("<b, f - <b,f> u> = {:.2e}", l2_pair(&b, &g, &cfg)?.value.norm());

    let tail = cfg.with_tail(Some(6.0));
    for (x, y) in [(0.0, 1.0), (-2.0, 0.3), (30.0, 5.0)] {
        let z = HalfPlanePoint::new(x, y)?;
        let exact = hankel_closed_form(&b, &g, &z, c0, false).unwrap_or_default();
        let q = hankel_apply(&b, &g, &z, c0, &tail, false)?;
        let m = hankel_apply(&b, &f, &z, c0, &tail, true)?;
        println!("z = {z}: h_b g = {exact:.6e}, quadrature {q:.6e}, h_mod f = {m:.6e}");
    }
    Ok(())
}
