//! Polytropic gas state algebra: primitive and Riemann variables, speeds,
//! and pointwise evaluation of the gradient variables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default lower bound on |c1| and |c3| for formulas that divide by them.
pub const DEFAULT_SONIC_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GasParams", into = "GasParams")]
pub struct GasModel {
    gamma: f64,
    k: f64,
    c_v: f64,
    m: u32,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasParams {
    pub gamma: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub c_v: f64,
    pub m: u32,
}

impl TryFrom<GasParams> for GasModel {
    type Error = Error;
    fn try_from(p: GasParams) -> Result<Self> {
        GasModel::new(p.gamma, p.k, p.c_v, p.m)
    }
}

impl From<GasModel> for GasParams {
    fn from(g: GasModel) -> Self {
        GasParams { gamma: g.gamma, k: g.k, c_v: g.c_v, m: g.m }
    }
}

impl GasModel {
    /// `m = 0` is accepted as the planar reduction; radial runs use 1 or 2.
    pub fn new(gamma: f64, k: f64, c_v: f64, m: u32) -> Result<Self> {
        if !(gamma > 1.0 && gamma < 3.0) {
            return Err(Error::InvalidGas(format!("gamma = {gamma} not in (1, 3)")));
        }
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::InvalidGas(format!("K = {k} must be positive")));
        }
        if !(c_v > 0.0 && c_v.is_finite()) {
            return Err(Error::InvalidGas(format!("c_v = {c_v} must be positive")));
        }
        Ok(GasModel { gamma, k, c_v, m })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn k(&self) -> f64 {
        self.k
    }
    pub fn c_v(&self) -> f64 {
        self.c_v
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn mf(&self) -> f64 {
        self.m as f64
    }

    pub fn gamma_k(&self) -> f64 {
        (self.k * self.gamma).powf(1.0 / (1.0 - self.gamma))
    }

    pub fn c_gamma(&self) -> f64 {
        self.c_v * (self.gamma - 1.0)
    }

    /// 2/(γ−1), the factor linking h to the Riemann variables.
    pub fn riemann_factor(&self) -> f64 {
        2.0 / (self.gamma - 1.0)
    }

    pub fn sound_speed(&self, rho: f64, s: f64) -> f64 {
        (self.k * self.gamma).sqrt() * (s / (2.0 * self.c_v)).exp() * rho.powf(0.5 * (self.gamma - 1.0))
    }

    pub fn density(&self, h: f64, s: f64) -> f64 {
        self.gamma_k() * (-s / self.c_gamma()).exp() * h.powf(self.riemann_factor())
    }

    pub fn pressure(&self, rho: f64, s: f64) -> f64 {
        self.k * (s / self.c_v).exp() * rho.powf(self.gamma)
    }

    /// r^m, with 0^0 = 1 for the planar case.
    pub fn rm(&self, r: f64) -> f64 {
        r.powi(self.m as i32)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub rho: f64,
    pub u: f64,
    pub s: f64,
    pub h: f64,
    pub w: f64,
    pub z: f64,
    pub r: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gradient {
    pub alpha: f64,
    pub beta: f64,
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveRadius { r })
    }
}

/// Builds a state from (ρ, u, S) at the reference point r = 1, t = 0.
pub fn to_riemann(rho: f64, u: f64, s: f64, gas: &GasModel) -> Result<State> {
    State::from_primitive(gas, rho, u, s, 1.0, 0.0)
}

/// Builds a state from (w, z, S) at the reference point r = 1, t = 0.
pub fn to_primitive(w: f64, z: f64, s: f64, gas: &GasModel) -> Result<State> {
    State::from_riemann(gas, w, z, s, 1.0, 0.0)
}

impl State {
    pub fn from_primitive(gas: &GasModel, rho: f64, u: f64, s: f64, r: f64, t: f64) -> Result<Self> {
        if !(rho > 0.0) {
            return Err(Error::NonPositiveDensity { rho, r });
        }
        check_radius(r)?;
        let h = gas.sound_speed(rho, s);
        let k = gas.riemann_factor();
        Ok(State { rho, u, s, h, w: u + k * h, z: u - k * h, r, t })
    }

    pub fn from_riemann(gas: &GasModel, w: f64, z: f64, s: f64, r: f64, t: f64) -> Result<Self> {
        if !(w > z) {
            return Err(Error::VacuumState { w, z });
        }
        check_radius(r)?;
        let u = 0.5 * (w + z);
        let h = 0.25 * (gas.gamma() - 1.0) * (w - z);
        let rho = gas.density(h, s);
        Ok(State { rho, u, s, h, w, z, r, t })
    }

    pub fn char_speeds(&self) -> (f64, f64, f64) {
        (self.u - self.h, self.u, self.u + self.h)
    }

    pub fn c1(&self) -> f64 {
        self.u - self.h
    }

    pub fn c3(&self) -> f64 {
        self.u + self.h
    }

    pub fn is_supersonic(&self) -> bool {
        self.u - self.h > 0.0 && self.h > 0.0
    }

    /// Fails when either acoustic speed is within `floor` of zero.
    pub fn check_sonic(&self, floor: f64) -> Result<(f64, f64)> {
        let (c1, c3) = (self.c1(), self.c3());
        if !(self.h > 0.0) || c1.abs() < floor || c3.abs() < floor {
            return Err(Error::SonicDegeneracy { c1, c3, floor });
        }
        Ok((c1, c3))
    }
}

/// α and β from the spatial derivatives of (w, z, S) at a state.
pub fn gradient_vars(s: &State, w_r: f64, z_r: f64, s_r: f64, gas: &GasModel, floor: f64) -> Result<Gradient> {
    check_radius(s.r)?;
    let (c1, c3) = s.check_sonic(floor)?;
    let (g, u, h, r) = (gas.gamma(), s.u, s.h, s.r);
    let gc = g * gas.c_gamma();
    let geo = gas.mf() * u * h / r;
    let alpha = w_r - h * (g * u + h) / (gc * c3) * s_r + geo / c3;
    let beta = z_r + h * (g * u - h) / (gc * c1) * s_r - geo / c1;
    Ok(Gradient { alpha, beta })
}
