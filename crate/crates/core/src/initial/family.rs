//! Parametrized initial-data families on [b1, b2].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fv::steady::{steady_profile, SteadyProfile};
use crate::gas::GasModel;

/// Initial data and derivatives at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub rho: f64,
    pub rho_r: f64,
    pub u: f64,
    pub u_r: f64,
    pub s: f64,
    pub s_r: f64,
    pub s_rr: f64,
}

/// Smooth background: ρ = rho (b1/r)^rho_decay, linear u, quadratic S.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RampParams {
    pub rho: f64,
    pub u: f64,
    #[serde(default)]
    pub s: f64,
    #[serde(default)]
    pub u_slope: f64,
    #[serde(default)]
    pub s_slope: f64,
    /// S'' = −s_curv.
    #[serde(default)]
    pub s_curv: f64,
    #[serde(default)]
    pub rho_decay: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BumpMode {
    /// Perturb w only: u and h move together so that z is unchanged.
    #[default]
    Riemann,
    /// Perturb u only.
    Velocity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    Constant {
        rho: f64,
        u: f64,
        #[serde(default)]
        s: f64,
    },
    Ramp(RampParams),
    /// Ramp plus `−amplitude·width·tanh((r − center)/width)`; positive
    /// amplitude compresses, negative rarefies.
    CompressionBump {
        #[serde(flatten)]
        base: RampParams,
        amplitude: f64,
        center: f64,
        width: f64,
        #[serde(default)]
        mode: BumpMode,
    },
    /// Stationary supersonic branch through `(anchor_r, anchor_rho)`, with
    /// optional linear velocity and entropy perturbations.
    Steady {
        mass_flux: f64,
        anchor_r: f64,
        anchor_rho: f64,
        #[serde(default)]
        s: f64,
        #[serde(default)]
        u_slope: f64,
        #[serde(default)]
        s_slope: f64,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Constant { .. } => "constant",
            Family::Ramp(_) => "ramp",
            Family::CompressionBump { .. } => "compression-bump",
            Family::Steady { .. } => "steady",
        }
    }

    pub fn source(&self, gas: &GasModel, b1: f64, b2: f64) -> Result<Source> {
        if !(b1 > 0.0 && b2 > b1) {
            return Err(Error::InvalidInterval { b1, b2 });
        }
        match self {
            Family::CompressionBump { width, .. } if !(*width > 0.0) => {
                Err(Error::InvalidFamily("bump width must be positive".into()))
            }
            Family::Steady { mass_flux, anchor_r, anchor_rho, s, u_slope, s_slope } => {
                let table = steady_profile(gas, *mass_flux, *s, (*anchor_r, *anchor_rho), b1, b2, 4097)?;
                Ok(Source::Steady { table: Box::new(table), u_slope: *u_slope, s: *s, s_slope: *s_slope, b1 })
            }
            f => Ok(Source::Analytic { family: f.clone(), gas: *gas, b1 }),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    Analytic { family: Family, gas: GasModel, b1: f64 },
    Steady { table: Box<SteadyProfile>, u_slope: f64, s: f64, s_slope: f64, b1: f64 },
}

fn ramp(p: &RampParams, b1: f64, r: f64) -> ProfilePoint {
    let x = r - b1;
    let rho = p.rho * (b1 / r).powf(p.rho_decay);
    ProfilePoint {
        rho,
        rho_r: -p.rho_decay * rho / r,
        u: p.u + p.u_slope * x,
        u_r: p.u_slope,
        s: p.s + p.s_slope * x - 0.5 * p.s_curv * x * x,
        s_r: p.s_slope - p.s_curv * x,
        s_rr: -p.s_curv,
    }
}

impl Source {
    pub fn eval(&self, r: f64) -> Result<ProfilePoint> {
        let pt = match self {
            Source::Analytic { family, gas, b1 } => match family {
                Family::Constant { rho, u, s } => {
                    ProfilePoint { rho: *rho, rho_r: 0.0, u: *u, u_r: 0.0, s: *s, s_r: 0.0, s_rr: 0.0 }
                }
                Family::Ramp(p) => ramp(p, *b1, r),
                Family::CompressionBump { base, amplitude, center, width, mode } => {
                    let b = ramp(base, *b1, r);
                    let th = ((r - center) / width).tanh();
                    let g = -amplitude * width * th;
                    let gr = -amplitude * (1.0 - th * th);
                    match mode {
                        BumpMode::Velocity => ProfilePoint { u: b.u + g, u_r: b.u_r + gr, ..b },
                        BumpMode::Riemann => {
                            let gm1 = gas.gamma() - 1.0;
                            let hb = gas.sound_speed(b.rho, b.s);
                            let hb_r = hb * (0.5 * gm1 * b.rho_r / b.rho + b.s_r / (2.0 * gas.c_v()));
                            let h = hb + 0.25 * gm1 * g;
                            if !(h > 0.0) {
                                return Err(Error::NonPositiveDensity { rho: 0.0, r });
                            }
                            let h_r = hb_r + 0.25 * gm1 * gr;
                            let rho = gas.density(h, b.s);
                            let rho_r = rho * (gas.riemann_factor() * h_r / h - b.s_r / gas.c_gamma());
                            ProfilePoint { rho, rho_r, u: b.u + 0.5 * g, u_r: b.u_r + 0.5 * gr, ..b }
                        }
                    }
                }
                Family::Steady { .. } => unreachable!("steady families use a tabulated source"),
            },
            Source::Steady { table, u_slope, s, s_slope, b1 } => {
                let st = table.eval(r);
                let x = r - b1;
                ProfilePoint {
                    rho: st.rho,
                    rho_r: st.rho_r,
                    u: st.u + u_slope * x,
                    u_r: st.u_r + u_slope,
                    s: s + s_slope * x,
                    s_r: *s_slope,
                    s_rr: 0.0,
                }
            }
        };
        if !(pt.rho > 0.0) {
            return Err(Error::NonPositiveDensity { rho: pt.rho, r });
        }
        Ok(pt)
    }
}
