//! Adaptive integration over the upper half-plane against closed forms.

use std::f64::consts::PI;

use bergman_lab::halfplane::{HalfPlanePoint, Region};
use bergman_lab::quadrature::{integrate_halfplane, integrate_region, Features, QuadConfig};
use num_complex::Complex64;

fn main() -> bergman_lab::Result<()> {
    let cfg = QuadConfig::default();

    // |z + i|^-4 decays like |z|^-4, so the tail beyond R is added analytically.
    let f = |z: HalfPlanePoint| (z.to_complex() + Complex64::i()).norm().powi(-4);
    let r = integrate_halfplane(f, &Features::default(), &cfg.with_tail(Some(4.0)))?;
    println!(
        "int |z+i|^-4 dV = {:.12} (pi/4 = {:.12}), err {:.1e}, tail {:.1e}, {} cells",
        r.value,
        PI / 4.0,
        r.err_estimate,
        r.tail_bound,
        r.cells
    );

    // Without a declared decay the tail is sampled and its exponent reported.
    let bare = integrate_halfplane(f, &Features::default(), &cfg)?;
    println!("measured tail exponent {:?}", bare.tail_exponent);

    let disc = integrate_region(|_| 1.0, &Region::Ball { center: HalfPlanePoint::i(), radius: 0.5 }, &Features::default(), &cfg)?;
    println!("area of B(i, 1/2) = {:.12}", disc.value);

    let cone = integrate_region(|_| 1.0, &Region::ConeBelow { y_max: 2.0 }, &Features::default(), &cfg)?;
    println!("area of the cone cut at y = 2: {:.12}", cone.value);

    // The weight's logarithmic singularity at the boundary is integrable; the
    // strip below the boundary floor is not integrated.
    let log = integrate_region(
        |z: HalfPlanePoint| -z.y().ln(),
        &Region::CarlesonSquare { w: HalfPlanePoint::new(0.0, 0.5)? },
        &Features::default(),
        &cfg,
    )?;
    let h = cfg.boundary_floor;
    println!("int -ln y dV over (-0.5, 0.5) x (h, 1): {:.10} (exact {:.10})", log.value, 1.0 - h * (1.0 - h.ln()));
    Ok(())
}
