//! L¹ comparison of two solutions on the overlap of their trusted regions.

use serde::{Deserialize, Serialize};

use crate::characteristics::SpaceTimeSolution;
use crate::error::{Error, Result};
use crate::numerics::{interpolate, linspace, locate};

use super::solver::FvSolution;

/// Points on the common comparison grid.
pub const COMPARE_POINTS: usize = 512;

/// Fraction of Ω_d trimmed from each side of a characteristic level.
pub const INTERIOR_TRIM: f64 = 0.1;

pub trait SampledSolution {
    /// Interval at time `t` on which the solution is trusted.
    fn trusted_interval(&self, t: f64) -> Option<(f64, f64)>;
    /// (ρ, u, S) at (r, t); `t` must be a stored time.
    fn primitive_at(&self, t: f64, r: f64) -> Option<(f64, f64, f64)>;
}

impl SampledSolution for SpaceTimeSolution {
    fn trusted_interval(&self, t: f64) -> Option<(f64, f64)> {
        let l = &self.levels[self.level_at(t)?];
        let a = l.r[0];
        let b = l.r[l.len() - 1].min(l.right_boundary);
        let trim = INTERIOR_TRIM * (b - a);
        (b > a).then_some((a + trim, b - trim))
    }

    fn primitive_at(&self, t: f64, r: f64) -> Option<(f64, f64, f64)> {
        let l = &self.levels[self.level_at(t)?];
        let o = self.cfg.scheme_order;
        let w = interpolate(&l.r, &l.w, r, o);
        let z = interpolate(&l.r, &l.z, r, o);
        let s = interpolate(&l.r, &l.s, r, o);
        let h = 0.25 * (self.gas.gamma() - 1.0) * (w - z);
        Some((self.gas.density(h, s), 0.5 * (w + z), s))
    }
}

impl SampledSolution for FvSolution {
    fn trusted_interval(&self, t: f64) -> Option<(f64, f64)> {
        self.level_at(t)?;
        Some((self.grid.centers[0], self.grid.centers[self.grid.len() - 1]))
    }

    fn primitive_at(&self, t: f64, r: f64) -> Option<(f64, f64, f64)> {
        let l = self.level_at(t)?;
        let c = &self.grid.centers;
        let i = locate(c, r);
        let th = (r - c[i]) / (c[i + 1] - c[i]);
        let (d0, u0, s0) = l.cells.primitive(&self.grid, &self.gas, i);
        let (d1, u1, s1) = l.cells.primitive(&self.grid, &self.gas, i + 1);
        Some((d0 + th * (d1 - d0), u0 + th * (u1 - u0), s0 + th * (s1 - s0)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub rho: f64,
    pub u: f64,
    pub s: f64,
}

impl Discrepancy {
    pub fn total(&self) -> f64 {
        self.rho + self.u + self.s
    }
}

/// Trapezoid L¹ norms of the (ρ, u, S) differences at time `t`.
pub fn compare_solutions(x: &dyn SampledSolution, y: &dyn SampledSolution, t: f64) -> Result<Discrepancy> {
    let (a0, b0) = x.trusted_interval(t).ok_or(Error::NoOverlap { t })?;
    let (a1, b1) = y.trusted_interval(t).ok_or(Error::NoOverlap { t })?;
    let (a, b) = (a0.max(a1), b0.min(b1));
    if !(b > a) {
        return Err(Error::NoOverlap { t });
    }
    let rs = linspace(a, b, COMPARE_POINTS);
    let dx = (b - a) / (COMPARE_POINTS - 1) as f64;
    let mut acc = [0.0; 3];
    for (i, &r) in rs.iter().enumerate() {
        let p = x.primitive_at(t, r).ok_or(Error::NoOverlap { t })?;
        let q = y.primitive_at(t, r).ok_or(Error::NoOverlap { t })?;
        let wgt = if i == 0 || i + 1 == rs.len() { 0.5 * dx } else { dx };
        acc[0] += wgt * (p.0 - q.0).abs();
        acc[1] += wgt * (p.1 - q.1).abs();
        acc[2] += wgt * (p.2 - q.2).abs();
    }
    Ok(Discrepancy { t, a, b, rho: acc[0], u: acc[1], s: acc[2] })
}
