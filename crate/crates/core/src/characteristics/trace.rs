use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasModel, State};

use super::step::Probe;
use super::{Level, SpaceTimeSolution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CharFamily {
    One,
    Two,
    Three,
}

impl CharFamily {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(CharFamily::One),
            2 => Some(CharFamily::Two),
            3 => Some(CharFamily::Three),
            _ => None,
        }
    }

    fn speed(self, p: &Probe, gas: &GasModel) -> f64 {
        match self {
            CharFamily::One => p.u() - p.h(gas),
            CharFamily::Two => p.u(),
            CharFamily::Three => p.u() + p.h(gas),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathPoint {
    pub t: f64,
    pub r: f64,
    pub xi: f64,
    pub state: State,
}

fn inside(l: &Level, r: f64) -> bool {
    let tol = 1e-12 * l.r[0].abs().max(1.0);
    r >= l.r[0] - tol && r <= l.r[l.len() - 1] + tol
}

fn blend(a: Probe, b: Probe, th: f64) -> Probe {
    Probe { w: a.w + th * (b.w - a.w), z: a.z + th * (b.z - a.z), xi: a.xi + th * (b.xi - a.xi) }
}

fn point(sol: &SpaceTimeSolution, p: Probe, r: f64, t: f64) -> Result<PathPoint> {
    let s = sol.tables.eval(p.xi).0;
    Ok(PathPoint { t, r, xi: p.xi, state: State::from_riemann(&sol.gas, p.w, p.z, s, r, t)? })
}

/// Integrates dr/dt = c_family through the stored levels, with speeds
/// interpolated in space and linearly in time. Stops at the last level or
/// when the path leaves the sampled region.
pub fn trace_characteristic(sol: &SpaceTimeSolution, family: CharFamily, start: (f64, f64)) -> Result<Vec<PathPoint>> {
    let (r0, t0) = start;
    let levels = &sol.levels;
    let gas = &sol.gas;
    let order = sol.cfg.scheme_order;
    let tol = 1e-12 * t0.abs().max(1.0);
    let t_last = levels[levels.len() - 1].t;
    if !(t0 >= -tol && t0 <= t_last + tol) {
        return Err(Error::StartOutsideDomain { r: r0, t: t0 });
    }
    let mut k = levels.partition_point(|l| l.t <= t0 + tol).saturating_sub(1);
    if !inside(&levels[k], r0) {
        return Err(Error::StartOutsideDomain { r: r0, t: t0 });
    }
    let mid = t0 > levels[k].t + tol;
    if mid && !inside(&levels[k + 1], r0) {
        return Err(Error::StartOutsideDomain { r: r0, t: t0 });
    }
    let probe_at = |k: usize, r: f64, t: f64| {
        let a = Probe::at(&levels[k], r, order);
        if k + 1 < levels.len() && t > levels[k].t + tol {
            let th = (t - levels[k].t) / (levels[k + 1].t - levels[k].t);
            blend(a, Probe::at(&levels[k + 1], r, order), th)
        } else {
            a
        }
    };
    let mut path = vec![point(sol, probe_at(k, r0, t0), r0, t0)?];
    let (mut r, mut t) = (r0, t0);
    while k + 1 < levels.len() {
        let next = &levels[k + 1];
        let dt = next.t - t;
        let v0 = family.speed(&probe_at(k, r, t), gas);
        let rp = r + dt * v0;
        if !inside(next, rp) {
            break;
        }
        let r_new = if order <= 1 {
            rp
        } else {
            let v1 = family.speed(&Probe::at(next, rp, order), gas);
            r + 0.5 * dt * (v0 + v1)
        };
        if !inside(next, r_new) {
            break;
        }
        k += 1;
        r = r_new;
        t = next.t;
        path.push(point(sol, Probe::at(next, r, order), r, t)?);
    }
    Ok(path)
}
