//! The weight omega, its relatives, and the integrals behind the k < -1 versus k >= -1 split.

use bergman_lab::halfplane::{eval_weight, log_power_integral, omega, HalfPlanePoint, WeightSpec};

fn main() -> bergman_lab::Result<()> {
    let points = [(0.0, 1.0), (0.0, 1e-6), (1e6, 1.0), (-1e6, 1e-6), (3.0, 0.5)];
    println!("{:>10} {:>10} {:>10} {:>12} {:>10} {:>10}", "x", "y", "omega", "omega^-1/2", "loglog", "rho(1)");
    for (x, y) in points {
        let z = HalfPlanePoint::new(x, y)?;
        println!(
            "{x:>10.1e} {y:>10.1e} {:>10.4} {:>12.6} {:>10.4} {:>10.6}",
            omega(&z),
            eval_weight(&WeightSpec::OmegaPow(-0.5), &z),
            eval_weight(&WeightSpec::LogLog, &z),
            eval_weight(&WeightSpec::Rho(1.0), &z),
        );
    }

    // int_2^t (ln s)^k ds / s stays bounded exactly when k < -1.
    for k in [-2.0, -1.0, 0.0] {
        let v: Vec<String> =
            [1e3, 1e6, 1e12].iter().map(|&t| log_power_integral(k, t).map(|v| format!("{v:.4}"))).collect::<Result<_, _>>()?;
        println!("k = {k:>4}: t = 1e3, 1e6, 1e12 -> {}", v.join(", "));
    }

    let general = WeightSpec::General { eps: [true, true, false, true], k: 1.0, s: -1.0 };
    let z = HalfPlanePoint::new(0.0, 1e-3)?;
    println!("general four-switch weight at {z}: {:.6}", eval_weight(&general, &z));
    Ok(())
}
