//! Bergman kernels, their modified forms, and calibration of c_alpha.

use std::f64::consts::PI;

use bergman_lab::halfplane::HalfPlanePoint;
use bergman_lab::kernels::{c_alpha_closed_form, calibrate_c_alpha, calibration_probes, eval_kernel, kernel_tail_bound, KernelSpec};
use bergman_lab::quadrature::QuadConfig;

fn main() -> bergman_lab::Result<()> {
    let cfg = QuadConfig::default();
    for alpha in [0.0, 1.0, 2.5] {
        let probes = calibration_probes(alpha, &cfg)?;
        let c = calibrate_c_alpha(alpha, &cfg)?;
        let exact = c_alpha_closed_form(alpha);
        println!("alpha = {alpha}: c_alpha = {c:.9}, closed form {exact:.9}, probes {}", probes.len());
    }
    println!("|c0| pi = {:.9}", calibrate_c_alpha(0.0, &cfg)?.norm() * PI);

    let c0 = c_alpha_closed_form(0.0);
    let zeta = HalfPlanePoint::new(0.5, 1.5)?;
    for (x, y) in [(10.0, 1.0), (100.0, 10.0), (-1e3, 1e-3)] {
        let z = HalfPlanePoint::new(x, y)?;
        let plain = eval_kernel(&KernelSpec::bergman(), &z, &zeta).norm();
        let modified = eval_kernel(&KernelSpec::modified(c0), &z, &zeta).norm();
        println!("z = {z}: |K| = {plain:.3e}, |K_mod| = {modified:.3e}, tail bound {:.3e}", kernel_tail_bound(&z, &zeta)?);
    }
    println!("K_mod(z, i) = {}", eval_kernel(&KernelSpec::modified(c0), &zeta, &HalfPlanePoint::i()));
    Ok(())
}
