use crate::error::{Error, Result};
use crate::gas::GasModel;
use crate::initial::profile::EntropyTables;
use crate::numerics::{stencil, Stencil};

use super::Level;

#[derive(Debug, Clone, Copy)]
pub struct StepCtx<'a> {
    pub gas: &'a GasModel,
    pub tables: &'a EntropyTables,
    pub order: u8,
    pub floor: f64,
}

/// Interpolated (w, z, ξ) at a point of a level.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Probe {
    pub w: f64,
    pub z: f64,
    pub xi: f64,
}

impl Probe {
    pub fn at(level: &Level, x: f64, order: u8) -> Probe {
        let st: Stencil = stencil(&level.r, x, order);
        Probe { w: st.apply(&level.w), z: st.apply(&level.z), xi: st.apply(&level.xi) }
    }

    pub fn u(&self) -> f64 {
        0.5 * (self.w + self.z)
    }

    pub fn h(&self, gas: &GasModel) -> f64 {
        0.25 * (gas.gamma() - 1.0) * (self.w - self.z)
    }
}

/// Right-hand sides (∂3 w, ∂1 z) of the characteristic equations.
pub fn char_rhs(ctx: &StepCtx, r: f64, w: f64, z: f64, xi: f64) -> (f64, f64) {
    let gas = ctx.gas;
    let g = gas.gamma();
    let (s, sxi, _) = ctx.tables.eval(xi);
    let h = 0.25 * (g - 1.0) * (w - z);
    let rho = gas.density(h, s);
    let rp = r * gas.rm(r) * rho * sxi;
    let base = rp * (w - z) * (w - z) / (2.0 * gas.c_v() * g);
    let geo = gas.mf() * (w * w - z * z);
    let k = (g - 1.0) / (8.0 * r);
    (k * (base - geo), k * (base + geo))
}

/// Largest stable step: cfl · min Δr / max(|c1|, |c3|).
pub fn cfl_limit(level: &Level, gas: &GasModel, cfl: f64) -> f64 {
    let mut smax: f64 = 0.0;
    for j in 0..level.len() {
        let u = level.u(j);
        let h = level.h(j, gas);
        smax = smax.max((u - h).abs()).max((u + h).abs());
    }
    cfl * level.min_spacing() / smax.max(f64::MIN_POSITIVE)
}

/// Solves x = target − dt · ((1 − wt) · own + wt · v(x)) by fixed-point
/// iteration, where v is a speed read from `level`. Returns None once x leaves the level.
fn foot<F: Fn(&Probe) -> f64>(level: &Level, target: f64, dt: f64, own: f64, wt: f64, speed: F, order: u8) -> Option<(f64, Probe)> {
    let lo = level.r[0];
    // the sampled region may end up to one spacing short of the boundary
    // characteristic; feet in that gap are extrapolated
    let hi = level.r[level.len() - 1].max(level.right_boundary);
    let mut x = target - dt * own;
    let iters = if order >= 2 { 3 } else { 2 };
    let mut pr = Probe::at(level, x.clamp(lo, hi), order);
    for _ in 0..iters {
        x = target - dt * ((1.0 - wt) * own + wt * speed(&pr));
        if !(x >= lo && x <= hi) {
            return None;
        }
        pr = Probe::at(level, x, order);
    }
    let tol = 1e-12 * (hi - lo);
    if x < lo - tol || x > hi + tol {
        return None;
    }
    Some((x, pr))
}

/// One step of size `dt` from `level`. Nodes whose 1- or 2-feet leave the
/// previous level's part of the domain are dropped (always a suffix of the
/// node list).
pub fn advance(level: &Level, dt: f64, ctx: &StepCtx) -> Result<Level> {
    let gas = ctx.gas;
    let dt_max = cfl_limit(level, gas, 1.0);
    if !(dt > 0.0) || dt > dt_max * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, dt_max });
    }
    if let Some(j) = (0..level.len()).find(|&j| !(level.w[j] > level.z[j])) {
        return Err(Error::VacuumState { w: level.w[j], z: level.z[j] });
    }
    let n = level.len();
    let t_new = level.t + dt;
    let mut out = Level {
        t: t_new,
        r: Vec::with_capacity(n),
        w: Vec::with_capacity(n),
        z: Vec::with_capacity(n),
        xi: Vec::with_capacity(n),
        s: Vec::with_capacity(n),
        alpha_fd: Vec::new(),
        beta_fd: Vec::new(),
        right_boundary: level.right_boundary,
    };
    let order = ctx.order;
    for j in 0..n {
        let (w0, z0, r0) = (level.w[j], level.z[j], level.r[j]);
        let c3_0 = level.u(j) + level.h(j, gas);
        let (f3_0, _) = char_rhs(ctx, r0, w0, z0, level.xi[j]);

        // predictor
        let rp = r0 + dt * c3_0;
        let wp = w0 + dt * f3_0;
        let c1_here = level.u(j) - level.h(j, gas);
        let Some((x, px)) = foot(level, rp, dt, c1_here, 1.0, |p| p.u() - p.h(gas), order) else {
            break;
        };
        let (_, f1x) = char_rhs(ctx, x, px.w, px.z, px.xi);
        let zp = px.z + dt * f1x;
        let Some((_, py)) = foot(level, rp, dt, level.u(j), 1.0, |p| p.u(), order) else {
            break;
        };
        let xip = py.xi;

        let (r1, w1, z1, xi1) = if order <= 1 {
            (rp, wp, zp, xip)
        } else {
            let hp = 0.25 * (gas.gamma() - 1.0) * (wp - zp);
            let up = 0.5 * (wp + zp);
            let (f3_p, _) = char_rhs(ctx, rp, wp, zp, xip);
            let r1 = r0 + 0.5 * dt * (c3_0 + up + hp);
            let w1 = w0 + 0.5 * dt * (f3_0 + f3_p);
            // speeds at the new node from the predicted z
            let c1_new = 0.5 * (w1 + zp) - 0.25 * (gas.gamma() - 1.0) * (w1 - zp);
            let Some((x, px)) = foot(level, r1, dt, c1_new, 0.5, |p| p.u() - p.h(gas), order) else {
                break;
            };
            let (_, f1x) = char_rhs(ctx, x, px.w, px.z, px.xi);
            let zq = px.z + dt * f1x;
            let u_new = 0.5 * (w1 + zq);
            let Some((_, py)) = foot(level, r1, dt, u_new, 0.5, |p| p.u(), order) else {
                break;
            };
            let xi1 = py.xi;
            let (_, f1_new) = char_rhs(ctx, r1, w1, zq, xi1);
            let z1 = px.z + 0.5 * dt * (f1x + f1_new);
            (r1, w1, z1, xi1)
        };
        if !(w1.is_finite() && z1.is_finite() && r1.is_finite()) {
            return Err(Error::BlowupDetected { t: t_new, r: r0, magnitude: f64::INFINITY });
        }
        if let Some(&prev) = out.r.last() {
            if !(r1 > prev) {
                // neighbouring 3-characteristics crossed
                return Err(Error::BlowupDetected { t: t_new, r: r1, magnitude: f64::INFINITY });
            }
        }
        let h1 = 0.25 * (gas.gamma() - 1.0) * (w1 - z1);
        let c1 = 0.5 * (w1 + z1) - h1;
        if !(h1 > 0.0) || !(c1 > ctx.floor) {
            return Err(Error::RegimeLoss { t: t_new, r: r1, c1, h: h1 });
        }
        out.r.push(r1);
        out.w.push(w1);
        out.z.push(z1);
        out.xi.push(xi1);
        out.s.push(ctx.tables.eval(xi1).0);
    }
    if out.r.len() >= 2 {
        // right edge of the domain rides the 1-characteristic from b2
        let rb = level.right_boundary;
        let pb = Probe::at(level, rb, order);
        let c_old = pb.u() - pb.h(gas);
        let rb_p = rb + dt * c_old;
        out.right_boundary = if order <= 1 {
            rb_p
        } else {
            let pn = Probe::at(&out, rb_p, order);
            rb + 0.5 * dt * (c_old + pn.u() - pn.h(gas))
        };
    }
    if out.r.len() >= 3 {
        let r_first = out.r[0];
        out.compute_fd_gradients(gas, ctx.floor).map_err(|e| match e {
            Error::SonicDegeneracy { c1, .. } => Error::RegimeLoss { t: t_new, r: r_first, c1, h: f64::NAN },
            other => other,
        })?;
    }
    Ok(out)
}

/// `advance` followed by the gradient-threshold test.
pub fn step(level: &Level, dt: f64, ctx: &StepCtx, threshold: f64) -> Result<Level> {
    let next = advance(level, dt, ctx)?;
    let (g, r) = next.max_gradient();
    if !(g <= threshold) {
        return Err(Error::BlowupDetected { t: next.t, r, magnitude: g });
    }
    Ok(next)
}
