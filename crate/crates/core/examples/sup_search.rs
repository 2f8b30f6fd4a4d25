//! Extremal search for suprema, including ones approached only at the edge of the box.

use bergman_lab::halfplane::HalfPlanePoint;
use bergman_lab::quadrature::{sup_search, QuadConfig, SupOptions};
use num_complex::Complex64;

type Objective = Box<dyn Fn(HalfPlanePoint) -> f64 + Sync>;

fn main() {
    let cfg = QuadConfig::default();
    let objectives: [(&str, Objective); 3] = [
        ("y / |z+i|", Box::new(|z: HalfPlanePoint| z.y() / (z.to_complex() + Complex64::i()).norm())),
        ("1 / |z+i|", Box::new(|z: HalfPlanePoint| 1.0 / (z.to_complex() + Complex64::i()).norm())),
        ("y e^-y / (1 + x^2)", Box::new(|z: HalfPlanePoint| z.y() * (-z.y()).exp() / (1.0 + z.x() * z.x()))),
    ];
    for (name, g) in &objectives {
        for per_decade in [2, 8] {
            let r = sup_search(g, &[], &cfg, &SupOptions { per_decade, ..SupOptions::default() });
            println!("{name:>20}, {per_decade} per decade: sup {:.9} at {} (on hull: {})", r.sup, r.witness, r.on_hull);
        }
    }
}
