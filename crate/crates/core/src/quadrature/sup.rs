//! Multi-start search for `sup g` over the half-plane.
//!
//! A coarse grid, logarithmic in `y` and sign-symmetric logarithmic in `x`,
//! locates candidate maxima; Nelder-Mead in `(x, ln y)` polishes the best of
//! them. The answer is the largest value ever evaluated, so it is a lower bound
//! for the true supremum.

use rayon::prelude::*;

use super::{Hint, QuadConfig};
use crate::halfplane::HalfPlanePoint;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupOptions {
    /// Grid points per decade in both `|x|` and `y`.
    pub per_decade: u32,
    /// Number of grid maxima polished by Nelder-Mead.
    pub starts: usize,
    pub max_iter: usize,
}

impl Default for SupOptions {
    fn default() -> Self {
        Self { per_decade: 4, starts: 8, max_iter: 300 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupResult {
    pub sup: f64,
    pub witness: HalfPlanePoint,
    /// The witness lies in the outermost layer of the search box, so the
    /// supremum may be approached only in a limit.
    pub on_hull: bool,
}

fn log_grid(lo: f64, hi: f64, per_decade: u32) -> Vec<f64> {
    let n = ((hi / lo).log10() * per_decade as f64).ceil() as usize;
    (0..=n).map(|k| (lo * 10f64.powf(k as f64 / per_decade as f64)).min(hi)).collect()
}

/// Bounds of the search box in `(x, ln y)`.
#[derive(Clone, Copy)]
struct Box2 {
    x_max: f64,
    t_min: f64,
    t_max: f64,
}

impl Box2 {
    fn point(&self, x: f64, t: f64) -> Option<HalfPlanePoint> {
        (x.abs() <= self.x_max && t >= self.t_min && t <= self.t_max).then(|| HalfPlanePoint::new_unchecked(x, t.exp()))
    }
}

fn nelder_mead<G: Fn(HalfPlanePoint) -> f64>(g: &G, bx: Box2, start: HalfPlanePoint, max_iter: usize) -> (f64, HalfPlanePoint) {
    // Maximize by minimizing -g; points outside the box are rejected.
    let eval = |p: [f64; 2]| -> (f64, Option<HalfPlanePoint>) {
        match bx.point(p[0], p[1]) {
            Some(z) => {
                let v = g(z);
                (if v.is_finite() { -v } else { f64::INFINITY }, Some(z))
            }
            None => (f64::INFINITY, None),
        }
    };
    let (x0, t0) = (start.x(), start.y().ln());
    let dx = 0.2 * start.y();
    let mut simplex = [[x0, t0], [x0 + dx, t0], [x0, t0 + 0.2]];
    let mut vals = simplex.map(|p| eval(p).0);
    let mut best = (vals[0], start);
    let record = |v: f64, z: Option<HalfPlanePoint>, best: &mut (f64, HalfPlanePoint)| {
        if let Some(z) = z {
            if v < best.0 {
                *best = (v, z);
            }
        }
    };
    for k in 0..3 {
        record(vals[k], bx.point(simplex[k][0], simplex[k][1]), &mut best);
    }
    for _ in 0..max_iter {
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let (lo, mid, hi) = (idx[0], idx[1], idx[2]);
        let spread = (vals[hi] - vals[lo]).abs();
        if spread <= 1e-13 * vals[lo].abs().max(1e-300) {
            break;
        }
        let c = [(simplex[lo][0] + simplex[mid][0]) / 2.0, (simplex[lo][1] + simplex[mid][1]) / 2.0];
        let along = |s: f64| [c[0] + s * (simplex[hi][0] - c[0]), c[1] + s * (simplex[hi][1] - c[1])];
        let r = along(-1.0);
        let (fr, zr) = eval(r);
        record(fr, zr, &mut best);
        if fr < vals[lo] {
            let e = along(-2.0);
            let (fe, ze) = eval(e);
            record(fe, ze, &mut best);
            if fe < fr {
                simplex[hi] = e;
                vals[hi] = fe;
            } else {
                simplex[hi] = r;
                vals[hi] = fr;
            }
        } else if fr < vals[mid] {
            simplex[hi] = r;
            vals[hi] = fr;
        } else {
            let ct = along(0.5);
            let (fc, zc) = eval(ct);
            record(fc, zc, &mut best);
            if fc < vals[hi] {
                simplex[hi] = ct;
                vals[hi] = fc;
            } else {
                for k in [mid, hi] {
                    simplex[k] =
                        [simplex[lo][0] + 0.5 * (simplex[k][0] - simplex[lo][0]), simplex[lo][1] + 0.5 * (simplex[k][1] - simplex[lo][1])];
                    let (fk, zk) = eval(simplex[k]);
                    vals[k] = fk;
                    record(fk, zk, &mut best);
                }
            }
        }
    }
    (-best.0, best.1)
}

/// Approximates `sup g` over `{boundary_floor <= y <= R, |x| <= R}` with `R`
/// the truncation radius. Non-finite objective values are ignored.
pub fn sup_search<G: Fn(HalfPlanePoint) -> f64 + Sync>(g: G, hints: &[Hint], cfg: &QuadConfig, opts: &SupOptions) -> SupResult {
    let (floor, radius) = (cfg.boundary_floor, cfg.truncation_radius);
    let pd = opts.per_decade.max(1);
    let ys = log_grid(floor, radius, pd);
    let mut xs: Vec<f64> = log_grid(floor, radius, pd).iter().rev().map(|x| -x).collect();
    xs.push(0.0);
    xs.extend(log_grid(floor, radius, pd));

    let mut points: Vec<HalfPlanePoint> = Vec::with_capacity(xs.len() * ys.len());
    for &y in &ys {
        for &x in &xs {
            points.push(HalfPlanePoint::new_unchecked(x, y));
        }
    }
    for h in hints {
        for a in -4..=4 {
            for b in -4..=4 {
                let x = h.point.x() + 0.5 * a as f64 * h.scale;
                let y = h.point.y() * 2f64.powf(0.5 * b as f64);
                if y >= floor && y <= radius && x.abs() <= radius {
                    points.push(HalfPlanePoint::new_unchecked(x, y));
                }
            }
        }
    }

    let clean = |v: f64| if v.is_finite() { v } else { f64::NEG_INFINITY };
    let values: Vec<f64> = points.par_iter().map(|&z| clean(g(z))).collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let bx = Box2 { x_max: radius, t_min: floor.ln(), t_max: radius.ln() };
    let polished: Vec<(f64, HalfPlanePoint)> = order
        .iter()
        .take(opts.starts)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&k| nelder_mead(&|z| clean(g(z)), bx, points[k], opts.max_iter))
        .collect();

    let mut best = (values[order[0]], points[order[0]]);
    for &(v, z) in &polished {
        if v > best.0 {
            best = (v, z);
        }
    }
    let step = 10f64.powf(1.0 / pd as f64);
    let w = best.1;
    let on_hull = w.y() <= floor * step || w.y() >= radius / step || w.x().abs() >= radius / step;
    SupResult { sup: best.0.max(0.0), witness: w, on_hull }
}
