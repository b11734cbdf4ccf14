//! Sampled initial profiles, the Lagrangian mass coordinate and the frozen
//! entropy tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasModel, State};
use crate::initial::family::{Family, ProfilePoint, Source};
use crate::numerics::{fd4_uniform, hermite_table, interpolate, linspace, locate};

/// Minimum number of intervals in the entropy tables.
pub const TABLE_INTERVALS: usize = 4096;
const XI_RTOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeMode {
    #[default]
    Analytic,
    /// Fourth-order central differences of the sampled data.
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyDescriptor {
    pub family: Family,
    pub b1: f64,
    pub b2: f64,
    /// Number of sample intervals on [b1, b2].
    pub resolution: usize,
    #[serde(default)]
    pub derivatives: DerivativeMode,
}

/// S̃, S̃_ξ, S̃_ξξ tabulated against ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyTables {
    pub xi: Vec<f64>,
    pub s: Vec<f64>,
    pub s_xi: Vec<f64>,
    pub s_xixi: Vec<f64>,
}

impl EntropyTables {
    pub fn xi_range(&self) -> (f64, f64) {
        (self.xi[0], *self.xi.last().unwrap())
    }

    /// (S̃, S̃_ξ, S̃_ξξ) at ξ, clamped to the table range.
    pub fn eval(&self, xi: f64) -> (f64, f64, f64) {
        let (lo, hi) = self.xi_range();
        let x = xi.clamp(lo, hi);
        let s = hermite_table(&self.xi, &self.s, &self.s_xi, x);
        let sx = hermite_table(&self.xi, &self.s_xi, &self.s_xixi, x);
        let sxx = interpolate(&self.xi, &self.s_xixi, x, 2);
        (s, sx, sxx)
    }

    pub fn s_xi(&self, xi: f64) -> f64 {
        let (lo, hi) = self.xi_range();
        hermite_table(&self.xi, &self.s_xi, &self.s_xixi, xi.clamp(lo, hi))
    }
}

/// Columns of sampled initial data.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Samples {
    pub r: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_r: Vec<f64>,
    pub u: Vec<f64>,
    pub u_r: Vec<f64>,
    pub s: Vec<f64>,
    pub s_r: Vec<f64>,
    pub s_rr: Vec<f64>,
    pub xi: Vec<f64>,
}

impl Samples {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn point(&self, i: usize) -> ProfilePoint {
        ProfilePoint {
            rho: self.rho[i],
            rho_r: self.rho_r[i],
            u: self.u[i],
            u_r: self.u_r[i],
            s: self.s[i],
            s_r: self.s_r[i],
            s_rr: self.s_rr[i],
        }
    }
}

#[derive(Debug, Clone)]
pub struct InitialProfile {
    pub desc: FamilyDescriptor,
    pub gas: GasModel,
    pub source: Source,
    pub samples: Samples,
    pub tables: EntropyTables,
}

pub fn build_profile(desc: &FamilyDescriptor, gas: &GasModel) -> Result<InitialProfile> {
    let (b1, b2) = (desc.b1, desc.b2);
    if !(b1 > 0.0 && b2 > b1) {
        return Err(Error::InvalidInterval { b1, b2 });
    }
    if desc.resolution < 8 {
        return Err(Error::InvalidFamily(format!("resolution {} below 8", desc.resolution)));
    }
    let source = desc.family.source(gas, b1, b2)?;
    let samples = sample(&source, gas, desc.derivatives, &linspace(b1, b2, desc.resolution + 1))?;
    let tn = desc.resolution.max(TABLE_INTERVALS);
    let t = sample(&source, gas, desc.derivatives, &linspace(b1, b2, tn + 1))?;
    let tables = tables_from(&t, gas);
    Ok(InitialProfile { desc: desc.clone(), gas: *gas, source, samples, tables })
}

fn tables_from(t: &Samples, gas: &GasModel) -> EntropyTables {
    let m = gas.mf();
    let n = t.len();
    let mut s_xi = vec![0.0; n];
    let mut s_xixi = vec![0.0; n];
    for i in 0..n {
        let w = gas.rm(t.r[i]) * t.rho[i];
        s_xi[i] = t.s_r[i] / w;
        s_xixi[i] = (t.s_rr[i] - (m / t.r[i] + t.rho_r[i] / t.rho[i]) * t.s_r[i]) / (w * w);
    }
    EntropyTables { xi: t.xi.clone(), s: t.s.clone(), s_xi, s_xixi }
}

/// Samples a source at increasing radii, including ξ.
pub fn sample(source: &Source, gas: &GasModel, mode: DerivativeMode, rs: &[f64]) -> Result<Samples> {
    let mut out = Samples { r: rs.to_vec(), ..Default::default() };
    for &r in rs {
        let p = source.eval(r)?;
        out.rho.push(p.rho);
        out.rho_r.push(p.rho_r);
        out.u.push(p.u);
        out.u_r.push(p.u_r);
        out.s.push(p.s);
        out.s_r.push(p.s_r);
        out.s_rr.push(p.s_rr);
    }
    if mode == DerivativeMode::FiniteDifference {
        let dx = (rs[rs.len() - 1] - rs[0]) / (rs.len() - 1) as f64;
        out.rho_r = fd4_uniform(dx, &out.rho).0;
        out.u_r = fd4_uniform(dx, &out.u).0;
        let (sr, srr) = fd4_uniform(dx, &out.s);
        out.s_r = sr;
        out.s_rr = srr;
    }
    out.xi = xi_cumulative(source, gas, rs)?;
    Ok(out)
}

/// ξ at increasing radii. Density is continued by its value at b1 below b1
/// to fix the additive offset; only differences of ξ enter the dynamics.
pub fn xi_cumulative(source: &Source, gas: &GasModel, rs: &[f64]) -> Result<Vec<f64>> {
    let b1 = match source {
        Source::Analytic { b1, .. } | Source::Steady { b1, .. } => *b1,
    };
    let m = gas.m() as i32;
    let rho_b1 = source.eval(b1)?.rho;
    let mut xi = Vec::with_capacity(rs.len());
    let mut acc = rho_b1 * b1.powi(m + 1) / (m + 1) as f64;
    let mut prev = b1;
    for &r in rs {
        if r < prev {
            return Err(Error::InvalidInterval { b1: prev, b2: r });
        }
        if r > prev {
            let f = |x: f64| x.powi(m) * source.eval(x).map(|p| p.rho).unwrap_or(f64::NAN);
            let est = 0.5 * (r - prev) * (f(prev) + f(r));
            let out = quadrature::integrate(f, prev, r, XI_RTOL * 0.1 * est.abs().max(f64::MIN_POSITIVE));
            if !out.integral.is_finite() {
                return Err(Error::NonPositiveDensity { rho: f64::NAN, r });
            }
            acc += out.integral;
        }
        xi.push(acc);
        prev = r;
    }
    Ok(xi)
}

impl InitialProfile {
    pub fn b1(&self) -> f64 {
        self.desc.b1
    }

    pub fn b2(&self) -> f64 {
        self.desc.b2
    }

    pub fn eval(&self, r: f64) -> Result<ProfilePoint> {
        self.source.eval(r)
    }

    /// The same family sampled on `n` intervals.
    pub fn samples_at(&self, n: usize) -> Result<Samples> {
        sample(&self.source, &self.gas, self.desc.derivatives, &linspace(self.b1(), self.b2(), n + 1))
    }

    pub fn xi_at(&self, r: f64) -> f64 {
        let s = &self.samples;
        let i = locate(&s.r, r);
        let w0 = self.gas.rm(s.r[i]) * s.rho[i];
        let w1 = self.gas.rm(s.r[i + 1]) * s.rho[i + 1];
        // ξ' = r^m ρ, so Hermite with these slopes is fourth order
        crate::numerics::hermite(s.r[i], s.r[i + 1], s.xi[i], s.xi[i + 1], w0, w1, r)
    }

    pub fn state(&self, i: usize) -> Result<State> {
        let s = &self.samples;
        State::from_primitive(&self.gas, s.rho[i], s.u[i], s.s[i], s.r[i], 0.0)
    }
}

/// α0 and β0 at one point, written directly in terms of (u0, h0) and the
/// derivatives of the initial data.
pub fn initial_gradient_at(p: &ProfilePoint, r: f64, gas: &GasModel, floor: f64) -> Result<(f64, f64)> {
    let g = gas.gamma();
    let h0 = gas.sound_speed(p.rho, p.s);
    let c1 = p.u - h0;
    let c3 = p.u + h0;
    if !(h0 > 0.0) || c1.abs() < floor || c3.abs() < floor {
        return Err(Error::SonicDegeneracy { c1, c3, floor });
    }
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius { r });
    }
    let h0_r = h0 * ((g - 1.0) / 2.0 * p.rho_r / p.rho + p.s_r / (2.0 * gas.c_v()));
    let k = 2.0 / (g - 1.0);
    let w0_r = p.u_r + k * h0_r;
    let z0_r = p.u_r - k * h0_r;
    let cg = gas.c_v() * (g - 1.0);
    let m = gas.mf();
    let alpha = w0_r - h0 * (g * p.u + h0) / (g * cg * c3) * p.s_r + m * p.u * h0 / (r * c3);
    let beta = z0_r + h0 * (g * p.u - h0) / (g * cg * c1) * p.s_r - m * p.u * h0 / (r * c1);
    Ok((alpha, beta))
}

pub fn initial_gradients_of(s: &Samples, gas: &GasModel, floor: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut a = Vec::with_capacity(s.len());
    let mut b = Vec::with_capacity(s.len());
    for i in 0..s.len() {
        let (x, y) = initial_gradient_at(&s.point(i), s.r[i], gas, floor)?;
        a.push(x);
        b.push(y);
    }
    Ok((a, b))
}

pub fn initial_gradients(p: &InitialProfile, gas: &GasModel) -> Result<(Vec<f64>, Vec<f64>)> {
    initial_gradients_of(&p.samples, gas, crate::gas::DEFAULT_SONIC_FLOOR)
}
