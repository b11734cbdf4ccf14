use serde::{Deserialize, Serialize};

use crate::initial::profile::InitialProfile;

use super::step::Probe;
use super::SpaceTimeSolution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainShape {
    /// The boundary characteristics meet at or before T0.
    Triangle,
    Quadrangle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainGeometry {
    pub b1: f64,
    pub b2: f64,
    pub t0: f64,
    /// (t, r) samples of the 3-characteristic from (b1, 0).
    pub left: Vec<(f64, f64)>,
    /// (t, r) samples of the 1-characteristic from (b2, 0).
    pub right: Vec<(f64, f64)>,
    /// Intersection time of the two boundaries, +∞ when beyond T0.
    pub t_m: f64,
    pub shape: DomainShape,
}

/// Where the boundary speeds come from.
#[derive(Debug, Clone, Copy)]
pub enum BoundarySpeeds<'a> {
    Solution(&'a SpaceTimeSolution),
    /// Constant c3 on the left boundary and c1 on the right one.
    Frozen { c3_left: f64, c1_right: f64 },
}

impl DomainGeometry {
    fn finish(b1: f64, b2: f64, t0: f64, left: Vec<(f64, f64)>, right: Vec<(f64, f64)>, t_m: f64) -> Self {
        let t_m = if t_m <= t0 { t_m } else { f64::INFINITY };
        let shape = if t_m <= t0 { DomainShape::Triangle } else { DomainShape::Quadrangle };
        DomainGeometry { b1, b2, t0, left, right, t_m, shape }
    }
}

/// Bisection for the root of a cubic Hermite gap on [t0, t1].
fn hermite_root(t0: f64, t1: f64, g0: f64, g1: f64, d0: f64, d1: f64, tol: f64) -> f64 {
    let f = |t: f64| crate::numerics::hermite(t0, t1, g0, g1, d0, d1, t);
    let (mut a, mut b) = (t0, t1);
    let mut fa = g0;
    for _ in 0..200 {
        let c = 0.5 * (a + b);
        let fc = f(c);
        if fc.abs() <= tol || (b - a) <= 1e-15 * b.abs().max(1.0) {
            return c;
        }
        if (fa > 0.0) == (fc > 0.0) {
            a = c;
            fa = fc;
        } else {
            b = c;
        }
    }
    0.5 * (a + b)
}

pub fn domain_geometry(p: &InitialProfile, speeds: BoundarySpeeds, t0: f64) -> DomainGeometry {
    let (b1, b2) = (p.b1(), p.b2());
    match speeds {
        BoundarySpeeds::Frozen { c3_left, c1_right } => {
            let closing = c3_left - c1_right;
            let t_m = if closing > 0.0 { (b2 - b1) / closing } else { f64::INFINITY };
            let t_end = t_m.min(t0);
            let left = vec![(0.0, b1), (t_end, b1 + c3_left * t_end)];
            let right = vec![(0.0, b2), (t_end, b2 + c1_right * t_end)];
            DomainGeometry::finish(b1, b2, t0, left, right, t_m)
        }
        BoundarySpeeds::Solution(sol) => {
            let gas = &sol.gas;
            let order = sol.cfg.scheme_order;
            let mut left = Vec::with_capacity(sol.levels.len());
            let mut right = Vec::with_capacity(sol.levels.len());
            // (t, gap, d gap / dt) per level
            let mut gaps = Vec::with_capacity(sol.levels.len());
            for l in &sol.levels {
                let (rl, rr) = (l.r[0], l.right_boundary);
                left.push((l.t, rl));
                right.push((l.t, rr));
                let c3 = l.u(0) + l.h(0, gas);
                let pr = Probe::at(l, rr, order);
                let c1 = pr.u() - pr.h(gas);
                gaps.push((l.t, rr - rl, c1 - c3));
            }
            let mut t_m = f64::INFINITY;
            for k in 1..gaps.len() {
                let (ta, ga, da) = gaps[k - 1];
                let (tb, gb, db) = gaps[k];
                if ga > 0.0 && gb <= 0.0 {
                    t_m = hermite_root(ta, tb, ga, gb, da, db, 1e-10);
                    break;
                }
            }
            if t_m.is_infinite() {
                if let Some(&(t, g, d)) = gaps.last() {
                    if g <= 0.0 {
                        t_m = t;
                    } else if d < 0.0 {
                        // continue the last boundary speeds past the stored levels
                        t_m = t - g / d;
                    }
                }
            }
            DomainGeometry::finish(b1, b2, t0, left, right, t_m)
        }
    }
}
