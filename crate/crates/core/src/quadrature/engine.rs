//! Globally adaptive subdivision of rectangles in chart space.

use rayon::prelude::*;

use super::chart::{Chart, Rect};
use super::rule::{tensor_estimate, CellEstimate, NODES};
use super::sum::pairwise_sum;
use super::{Hint, QuadConfig, Scalar};
use crate::halfplane::HalfPlanePoint;

#[derive(Clone, Copy, Debug)]
struct Cell<T> {
    rect: Rect,
    depth_u: u32,
    depth_v: u32,
    est: CellEstimate<T>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct EngineOutput<T> {
    pub value: T,
    pub err: f64,
    pub cells: usize,
    pub converged: bool,
}

/// Directional errors more lopsided than this split only one axis.
const ANISOTROPY: f64 = 4.0;

fn eval_cell<T: Scalar, F: Fn(HalfPlanePoint) -> T + Sync>(chart: &Chart, f: &F, r: &Rect) -> CellEstimate<T> {
    let (cu, hu) = (0.5 * (r.u0 + r.u1), 0.5 * (r.u1 - r.u0));
    let (cv, hv) = (0.5 * (r.v0 + r.v1), 0.5 * (r.v1 - r.v0));
    let mut samples = [T::default(); 225];
    for i in 0..15 {
        let u = cu + hu * NODES[i];
        for j in 0..15 {
            let (z, jac) = chart.map(u, cv + hv * NODES[j]);
            samples[i * 15 + j] = f(z) * jac;
        }
    }
    tensor_estimate(&samples, hu, hv)
}

/// Grades the mesh around each hint: a cell meeting the box of half-width
/// `4 * 2^m` scales around the hint is split until it is at most `2^(m+1)`
/// scales wide, for every level `m`. The embedded rule pair cannot see a
/// peak that falls between its nodes, so cells near a peak must be small
/// before their estimates are trusted.
fn pre_refine(chart: &Chart, mut cells: Vec<(Rect, u32, u32)>, hints: &[Hint], max_depth: u32) -> Vec<(Rect, u32, u32)> {
    let widest_u = cells.iter().map(|(r, _, _)| r.u1 - r.u0).fold(0.0, f64::max);
    let widest_v = cells.iter().map(|(r, _, _)| r.v1 - r.v0).fold(0.0, f64::max);
    for h in hints {
        let Some((u, v, su, sv)) = chart.locate(&h.point, h.scale) else {
            continue;
        };
        let mut level = 1.0;
        loop {
            let (max_u, max_v) = (2.0 * level * su, 2.0 * level * sv);
            let (bu, bv) = (4.0 * level * su, 4.0 * level * sv);
            loop {
                let mut changed = false;
                let mut next = Vec::with_capacity(cells.len() + 4);
                for (r, du, dv) in cells {
                    let near = r.u0 <= u + bu && r.u1 >= u - bu && r.v0 <= v + bv && r.v1 >= v - bv;
                    let wide_u = near && r.u1 - r.u0 > max_u && du < max_depth;
                    let wide_v = near && r.v1 - r.v0 > max_v && dv < max_depth;
                    match (wide_u, wide_v) {
                        (true, true) => {
                            for a in r.split_u() {
                                for b in a.split_v() {
                                    next.push((b, du + 1, dv + 1));
                                }
                            }
                        }
                        (true, false) => next.extend(r.split_u().map(|a| (a, du + 1, dv))),
                        (false, true) => next.extend(r.split_v().map(|a| (a, du, dv + 1))),
                        (false, false) => {
                            next.push((r, du, dv));
                            continue;
                        }
                    }
                    changed = true;
                }
                cells = next;
                if !changed {
                    break;
                }
            }
            if max_u >= widest_u && max_v >= widest_v {
                break;
            }
            level *= 2.0;
        }
    }
    cells
}

pub(crate) fn integrate<T: Scalar, F: Fn(HalfPlanePoint) -> T + Sync>(
    chart: &Chart,
    initial: Vec<Rect>,
    f: &F,
    hints: &[Hint],
    cfg: &QuadConfig,
) -> EngineOutput<T> {
    let seeds = pre_refine(chart, initial.into_iter().map(|r| (r, 0, 0)).collect(), hints, cfg.max_depth);
    let mut cells: Vec<Cell<T>> =
        seeds.par_iter().map(|&(rect, depth_u, depth_v)| Cell { rect, depth_u, depth_v, est: eval_cell(chart, f, &rect) }).collect();

    loop {
        let value = pairwise_sum(&cells.iter().map(|c| c.est.value).collect::<Vec<_>>());
        let err = pairwise_sum(&cells.iter().map(|c| c.est.err).collect::<Vec<_>>());
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.magnitude());
        let done = |converged| EngineOutput { value, err, cells: cells.len(), converged };
        if err <= tol {
            return done(true);
        }
        if cells.len() >= cfg.max_cells {
            return done(false);
        }

        // Cells below the floor are only split along the boundary, and only
        // when that is where their error comes from.
        let tangential_only = |c: &Cell<T>| chart.below_floor(&c.rect);
        let splittable = |c: &Cell<T>| {
            if tangential_only(c) {
                c.depth_u < cfg.max_depth && c.est.err_u >= c.est.err_v
            } else {
                c.depth_u < cfg.max_depth || c.depth_v < cfg.max_depth
            }
        };
        let mut order: Vec<usize> = (0..cells.len()).filter(|&k| splittable(&cells[k]) && cells[k].est.err > 0.0).collect();
        if order.is_empty() {
            return done(false);
        }
        order.sort_by(|&a, &b| cells[b].est.err.total_cmp(&cells[a].est.err).then(a.cmp(&b)));

        // Refine the worst cells until they account for half of the excess error.
        let target = 0.5 * (err - 0.5 * tol);
        let cap = cells.len() / 4 + 1;
        let mut picked = Vec::new();
        let mut acc = 0.0;
        for &k in &order {
            if picked.len() >= cap || (acc >= target && !picked.is_empty()) {
                break;
            }
            acc += cells[k].est.err;
            picked.push(k);
        }

        let mut children: Vec<(Rect, u32, u32)> = Vec::with_capacity(4 * picked.len());
        let mut is_picked = vec![false; cells.len()];
        for &k in &picked {
            is_picked[k] = true;
            let c = &cells[k];
            let can_u = c.depth_u < cfg.max_depth;
            let can_v = c.depth_v < cfg.max_depth && !tangential_only(c);
            let (eu, ev) = (c.est.err_u, c.est.err_v);
            let only_u = can_u && (!can_v || eu > ANISOTROPY * ev);
            let only_v = can_v && (!can_u || ev > ANISOTROPY * eu);
            if only_u {
                children.extend(c.rect.split_u().map(|r| (r, c.depth_u + 1, c.depth_v)));
            } else if only_v {
                children.extend(c.rect.split_v().map(|r| (r, c.depth_u, c.depth_v + 1)));
            } else {
                for a in c.rect.split_u() {
                    for b in a.split_v() {
                        children.push((b, c.depth_u + 1, c.depth_v + 1));
                    }
                }
            }
        }
        let fresh: Vec<Cell<T>> =
            children.par_iter().map(|&(rect, depth_u, depth_v)| Cell { rect, depth_u, depth_v, est: eval_cell(chart, f, &rect) }).collect();
        let mut next: Vec<Cell<T>> = cells.iter().enumerate().filter(|(k, _)| !is_picked[*k]).map(|(_, c)| *c).collect();
        next.extend(fresh);
        cells = next;
    }
}
