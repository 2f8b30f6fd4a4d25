//! Parametrizations of integration domains by rectangles.
//!
//! Every domain the laboratory integrates over is the image of a union of
//! rectangles in some `(u, v)` plane. The engine subdivides rectangles; a chart
//! says where the nodes land and what the area element is.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::halfplane::HalfPlanePoint;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Rect {
    pub u0: f64,
    pub u1: f64,
    pub v0: f64,
    pub v1: f64,
}

impl Rect {
    pub fn split_u(&self) -> [Rect; 2] {
        let m = 0.5 * (self.u0 + self.u1);
        [Rect { u1: m, ..*self }, Rect { u0: m, ..*self }]
    }

    pub fn split_v(&self) -> [Rect; 2] {
        let m = 0.5 * (self.v0 + self.v1);
        [Rect { v1: m, ..*self }, Rect { v0: m, ..*self }]
    }
}

/// Tensor product of two breakpoint lists.
fn grid(us: &[f64], vs: &[f64]) -> Vec<Rect> {
    let mut out = Vec::with_capacity(us.len() * vs.len());
    for u in us.windows(2) {
        for v in vs.windows(2) {
            out.push(Rect { u0: u[0], u1: u[1], v0: v[0], v1: v[1] });
        }
    }
    out
}

/// Breakpoints from `a` to `b` with spacing at most `step`, always including
/// `anchor` when it lies strictly inside.
fn breakpoints(a: f64, b: f64, step: f64, anchor: Option<f64>) -> Vec<f64> {
    let mut pts = vec![a];
    let push_range = |lo: f64, hi: f64, pts: &mut Vec<f64>| {
        let n = ((hi - lo) / step).ceil().max(1.0) as usize;
        for k in 1..=n {
            pts.push(lo + (hi - lo) * k as f64 / n as f64);
        }
    };
    match anchor {
        Some(c) if c > a && c < b => {
            push_range(a, c, &mut pts);
            push_range(c, b, &mut pts);
        }
        _ => push_range(a, b, &mut pts),
    }
    pts
}

#[derive(Clone, Debug)]
pub(crate) enum Chart {
    /// `z = exp(u + iv)`, `v in [0, pi]`, area element `exp(2u)`.
    LogPolar { s_min: f64, s_max: f64, floor: f64 },
    /// `z = c + u exp(iv)`, `u in [0, radius]`, `v in [0, 2 pi]`.
    Disc { cx: f64, cy: f64, radius: f64 },
    /// Axis-aligned box with explicit initial breakpoints.
    Cartesian { xs: Vec<f64>, ys: Vec<f64>, floor: f64 },
    /// `y = exp(u)`, `x = v y` with `v in [-1, 1]`, area element `exp(2u)`.
    Cone { y_max: f64 },
}

impl Chart {
    /// Node position and area element.
    #[inline]
    pub fn map(&self, u: f64, v: f64) -> (HalfPlanePoint, f64) {
        match *self {
            Chart::LogPolar { .. } => {
                let r = u.exp();
                // sin(pi - v) keeps full relative accuracy of y next to v = pi.
                let sin = if v > FRAC_PI_2 { (PI - v).sin() } else { v.sin() };
                (HalfPlanePoint::new_unchecked(r * v.cos(), r * sin), r * r)
            }
            Chart::Disc { cx, cy, radius: _ } => {
                let (s, c) = v.sin_cos();
                (HalfPlanePoint::new_unchecked(cx + u * c, cy + u * s), u)
            }
            Chart::Cartesian { .. } => (HalfPlanePoint::new_unchecked(u, v), 1.0),
            Chart::Cone { .. } => {
                let y = u.exp();
                (HalfPlanePoint::new_unchecked(v * y, y), y * y)
            }
        }
    }

    pub fn initial_cells(&self) -> Vec<Rect> {
        match self {
            Chart::LogPolar { s_min, s_max, .. } => {
                let us = breakpoints(*s_min, *s_max, 2.0, Some(0.0));
                let mut vs = vec![0.0];
                for m in (2..=6).rev() {
                    vs.push(PI / 2f64.powi(m));
                }
                vs.extend([PI / 4.0, FRAC_PI_2, 0.75 * PI]);
                for m in 2..=6 {
                    vs.push(PI - PI / 2f64.powi(m));
                }
                vs.push(PI);
                grid(&us, &vs)
            }
            Chart::Disc { radius, .. } => grid(&[0.0, 0.5 * radius, *radius], &[0.0, FRAC_PI_2, PI, 1.5 * PI, TAU]),
            Chart::Cartesian { xs, ys, .. } => grid(xs, ys),
            Chart::Cone { y_max } => grid(&breakpoints(0.0, y_max.ln(), 1.0, None), &[-1.0, 0.0, 1.0]),
        }
    }

    /// Chart coordinates of `z` and the chart-space size of a feature of
    /// size `scale` there; `None` when `z` is outside the chart.
    pub fn locate(&self, z: &HalfPlanePoint, scale: f64) -> Option<(f64, f64, f64, f64)> {
        match *self {
            Chart::LogPolar { s_min, s_max, .. } => {
                let r = z.modulus();
                let s = r.ln();
                if s < s_min || s > s_max {
                    return None;
                }
                let rel = scale / r;
                Some((s, z.y().atan2(z.x()), rel, rel))
            }
            Chart::Disc { cx, cy, radius } => {
                let (dx, dy) = (z.x() - cx, z.y() - cy);
                let t = dx.hypot(dy);
                if t > radius {
                    return None;
                }
                let th = dy.atan2(dx).rem_euclid(TAU);
                Some((t, th, scale, scale / t.max(scale)))
            }
            Chart::Cartesian { ref xs, ref ys, .. } => {
                let inside = z.x() >= xs[0] && z.x() <= xs[xs.len() - 1] && z.y() >= ys[0] && z.y() <= ys[ys.len() - 1];
                inside.then_some((z.x(), z.y(), scale, scale))
            }
            Chart::Cone { y_max } => {
                if z.y() < 1.0 || z.y() > y_max || z.x().abs() > z.y() {
                    return None;
                }
                let rel = scale / z.y();
                Some((z.y().ln(), z.x() / z.y(), rel, rel))
            }
        }
    }

    /// True when the whole cell lies below the resolved boundary layer.
    pub fn below_floor(&self, r: &Rect) -> bool {
        match *self {
            Chart::LogPolar { floor, .. } => {
                let max_sin = if r.v0 <= FRAC_PI_2 && r.v1 >= FRAC_PI_2 { 1.0 } else { r.v0.sin().max(r.v1.sin()) };
                r.u1.exp() * max_sin < floor
            }
            Chart::Cartesian { floor, .. } => r.v1 < floor,
            _ => false,
        }
    }
}

/// Breakpoints on `[0, top]` refined geometrically toward zero.
pub(crate) fn graded_to_zero(top: f64, levels: u32) -> Vec<f64> {
    let mut ys: Vec<f64> = (0..=levels).rev().map(|m| top / 2f64.powi(m as i32)).collect();
    ys.insert(0, 0.0);
    ys
}

/// Breakpoints on `[-half, half]` refined geometrically toward zero on both sides.
pub(crate) fn graded_symmetric(half: f64, inner: f64) -> Vec<f64> {
    let mut pos = vec![];
    let mut t = inner;
    while t < half {
        pos.push(t);
        t *= 4.0;
    }
    pos.push(half);
    let mut xs: Vec<f64> = pos.iter().rev().map(|v| -v).collect();
    xs.push(0.0);
    xs.extend(pos);
    xs
}
