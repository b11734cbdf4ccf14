//! Named constants derived from the initial data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasModel, DEFAULT_SONIC_FLOOR};
use crate::initial::profile::{initial_gradients_of, InitialProfile, Samples};

/// Refinement of the profile grid on which maxima and assumptions are taken.
pub const CHECK_REFINE: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsLedger {
    pub t0: f64,
    pub b1: f64,
    pub b2: f64,
    pub w_tilde: f64,
    pub z_tilde: f64,
    pub c0: f64,
    pub h_d: f64,
    pub r_d: f64,
    pub s0_bound: f64,
    pub s1_measured: f64,
    pub s1_limit: f64,
    pub s1_bound: f64,
    pub s2_bound: f64,
    pub c1: f64,
    pub l: f64,
    pub c1_tilde: f64,
    pub m_const: f64,
    pub l_tilde: f64,
    pub c2_tilde: f64,
    pub min_rho0: f64,
    pub min_h0: f64,
    pub h_floor_rarefactive: f64,
    pub h_floor: f64,
    pub n1: f64,
    /// Corner time of the determinacy domain from the initial endpoint
    /// speeds; the solver reports the value realised by the solution.
    pub t_m_estimate: f64,
}

/// The dense grid used for ledger maxima and assumption checks.
pub fn check_grid(p: &InitialProfile) -> Result<Samples> {
    p.samples_at(p.desc.resolution * CHECK_REFINE)
}

pub fn derive_constants(p: &InitialProfile, gas: &GasModel, t0: f64) -> Result<ConstantsLedger> {
    if !(t0 > 0.0) {
        return Err(Error::InvalidHorizon { t: t0, t0 });
    }
    let s = check_grid(p)?;
    let g = gas.gamma();
    let m = gas.mf();
    let k = gas.riemann_factor();
    let (b1, b2) = (p.b1(), p.b2());

    let mut w_tilde = f64::NEG_INFINITY;
    let mut z_tilde = f64::INFINITY;
    let mut z_arg = b1;
    let mut min_rho0 = f64::INFINITY;
    let mut min_h0 = f64::INFINITY;
    let mut s0_bound = 0.0f64;
    let mut s1_measured = 0.0f64;
    let mut s2_bound = 0.0f64;
    for i in 0..s.len() {
        let (r, rho) = (s.r[i], s.rho[i]);
        let h = gas.sound_speed(rho, s.s[i]);
        let w = s.u[i] + k * h;
        let z = s.u[i] - k * h;
        w_tilde = w_tilde.max(w);
        if z < z_tilde {
            z_tilde = z;
            z_arg = r;
        }
        min_rho0 = min_rho0.min(rho);
        min_h0 = min_h0.min(h);
        s0_bound = s0_bound.max(s.s[i].abs());
        s1_measured = s1_measured.max(s.s_r[i] / (r * rho));
        let w2 = (gas.rm(r) * rho).powi(2);
        s2_bound = s2_bound.max(((s.s_rr[i] - (m / r + s.rho_r[i] / rho) * s.s_r[i]) / w2).abs());
    }
    if !(z_tilde > 0.0) {
        return Err(Error::NonSupersonicData { z: z_tilde, r: z_arg });
    }
    let (alpha0, beta0) = initial_gradients_of(&s, gas, DEFAULT_SONIC_FLOOR)?;
    let c1 = alpha0.iter().chain(&beta0).fold(0.0f64, |a, v| a.max(v.abs()));

    let h_d = (g - 1.0) * w_tilde / 4.0;
    let r_d = b2 + w_tilde * t0;
    let gk = gas.gamma_k();
    let cg = gas.c_gamma();
    let cv = gas.c_v();
    let mi = gas.m() as i32;
    let s1_limit = m * cv * g / (3.0 * gk * r_d.powi(mi + 1)) * (-s0_bound / cg).exp() * h_d.powf(-k);
    let s1_bound = s1_measured.min(s1_limit);
    let e2s = (2.0 * s0_bound / cg).exp();
    let q = (g - 1.0) / (3.0 - g);

    let l = g * m * m * w_tilde * w_tilde * (g - 1.0).powi(2) / (3.0 * b1 * r_d * (3.0 - g).powi(2))
        + gk * gk * (g - 1.0) * w_tilde / (cv * g * (3.0 - g)) * r_d.powi(2 * mi) * h_d.powf((g + 3.0) / (g - 1.0)) * e2s * s2_bound;
    let c1_tilde = (c1 + 1.0).max((2.0 * l).sqrt());
    let geo = 2.0 * m * w_tilde / ((3.0 - g) * b1);
    let m_const = g * m * h_d / (3.0 * (g - 1.0) * r_d) + geo + 1.0;
    let l_tilde = m * m * g * w_tilde * w_tilde / (3.0 * r_d * r_d * h_d.powf(k)) * q * q
        + gk * gk * w_tilde / (g * cv) * q * r_d.powi(2 * mi) * h_d.powf((g + 1.0) / (g - 1.0)) * e2s * s2_bound;
    let c2_tilde = (m_const * t0).exp() * (gk * c1 / min_rho0 * (s0_bound / cg).exp()).max(l_tilde);
    let h_floor_rarefactive = min_h0 * (-(g - 1.0) / 2.0 * (c1_tilde + geo) * t0).exp();
    let h_floor = min_h0 * (-(g - 1.0) / 2.0 * (c2_tilde * h_d.powf(k) + geo) * t0).exp();

    let e = tilde_exponent(g);
    let a = (g + 1.0) * h_floor.powf(e) / 8.0;
    let b = 6.0 * geo + (3.0 - g) * m_const / 4.0;
    let c = 4.0 * geo * h_d.powf((g + 1.0) / (2.0 * (g - 1.0))) * c2_tilde + h_d.powf((g + 1.0) / (2.0 * (g - 1.0))) * l_tilde;
    let n1 = (b + (b * b + 4.0 * a * c).sqrt()) / (2.0 * a);

    let t_m_estimate = corner_time_frozen(p, gas)?;

    Ok(ConstantsLedger {
        t0,
        b1,
        b2,
        w_tilde,
        z_tilde,
        c0: w_tilde,
        h_d,
        r_d,
        s0_bound,
        s1_measured,
        s1_limit,
        s1_bound,
        s2_bound,
        c1,
        l,
        c1_tilde,
        m_const,
        l_tilde,
        c2_tilde,
        min_rho0,
        min_h0,
        h_floor_rarefactive,
        h_floor,
        n1,
        t_m_estimate,
    })
}

/// (3 − γ)/(2(γ − 1)), the exponent of the tilde weighting.
pub fn tilde_exponent(gamma: f64) -> f64 {
    (3.0 - gamma) / (2.0 * (gamma - 1.0))
}

/// Meeting time of straight boundary characteristics with the initial
/// endpoint speeds c3(b1) and c1(b2); infinite when they diverge.
fn corner_time_frozen(p: &InitialProfile, gas: &GasModel) -> Result<f64> {
    let a = p.eval(p.b1())?;
    let b = p.eval(p.b2())?;
    let c3 = a.u + gas.sound_speed(a.rho, a.s);
    let c1 = b.u - gas.sound_speed(b.rho, b.s);
    Ok(if c3 > c1 { (p.b2() - p.b1()) / (c3 - c1) } else { f64::INFINITY })
}

impl ConstantsLedger {
    /// Φ of the tilde system as a function of |β̃| (or |α̃|).
    pub fn phi(&self, gas: &GasModel, x: f64) -> f64 {
        let g = gas.gamma();
        let m = gas.mf();
        let geo = 2.0 * m * self.w_tilde / ((3.0 - g) * self.b1);
        let hq = self.h_d.powf((g + 1.0) / (2.0 * (g - 1.0)));
        -(g + 1.0) / 8.0 * self.h_floor.powf(tilde_exponent(g)) * x * x
            + (6.0 * geo + (3.0 - g) / 4.0 * self.m_const) * x.abs()
            + 4.0 * geo * hq * self.c2_tilde
            + hq * self.l_tilde
    }

    pub fn n_of_t(&self, t: f64, gas: &GasModel) -> Result<f64> {
        crate::riccati::blowup_threshold(t, self, gas)
    }
}
