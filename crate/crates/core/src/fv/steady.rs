//! Exact stationary supersonic profiles: r^m ρ u = F with constant entropy.

use ode_solvers::dop_shared::IntegrationError;
use ode_solvers::{Dopri5, System, Vector1};

use crate::error::{Error, Result};
use crate::gas::GasModel;
use crate::numerics::{hermite_table, linspace, locate};

const RTOL: f64 = 1e-12;
const ATOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyProfile {
    pub gas: GasModel,
    pub mass_flux: f64,
    pub s: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub u_r: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct SteadyPoint {
    pub rho: f64,
    pub rho_r: f64,
    pub u: f64,
    pub u_r: f64,
}

struct SteadyOde {
    gas: GasModel,
    flux: f64,
    s: f64,
    /// r = origin + dir · x with x ≥ 0 on each segment; the dense-output
    /// bookkeeping of the integrator compares |x|.
    origin: f64,
    dir: f64,
}

impl SteadyOde {
    fn slope(&self, r: f64, u: f64) -> f64 {
        steady_slope(&self.gas, self.flux, self.s, r, u)
    }
}

impl System<f64, Vector1<f64>> for SteadyOde {
    fn system(&self, x: f64, y: &Vector1<f64>, dy: &mut Vector1<f64>) {
        let r = self.origin + self.dir * x;
        dy[0] = self.dir * self.slope(r, y[0]);
    }
}

fn steady_density(gas: &GasModel, flux: f64, r: f64, u: f64) -> f64 {
    flux / (gas.rm(r) * u)
}

/// u' = m h² u / (r (u² − h²)) on the constant-flux, constant-entropy branch.
pub fn steady_slope(gas: &GasModel, flux: f64, s: f64, r: f64, u: f64) -> f64 {
    let rho = steady_density(gas, flux, r, u);
    let h = gas.sound_speed(rho, s);
    gas.mf() * h * h * u / (r * (u * u - h * h))
}

fn integrate_segment(ode: &SteadyOde, r0: f64, r1: f64, u0: f64) -> Result<f64> {
    let sys = SteadyOde { origin: r0, dir: ode.dir, ..*ode };
    let (x0, x1) = (0.0, (r1 - r0).abs());
    let mut solver = Dopri5::new(sys, x0, x1, x1 - x0, Vector1::new(u0), RTOL, ATOL);
    solver.integrate().map_err(|e| match e {
        // the slope is singular only at the sonic point
        IntegrationError::StepSizeUnderflow { x } => Error::SonicPassage { r: r0 + ode.dir * x },
        e => Error::Integration(format!("{e:?}")),
    })?;
    let u1 = solver.y_out().last().map(|y| y[0]).unwrap_or(f64::NAN);
    Ok(u1)
}

fn check_supersonic(gas: &GasModel, flux: f64, s: f64, r: f64, u: f64) -> Result<()> {
    if !u.is_finite() || u <= 0.0 {
        return Err(Error::SonicPassage { r });
    }
    let h = gas.sound_speed(steady_density(gas, flux, r, u), s);
    if u <= h * (1.0 + 1e-9) {
        return Err(Error::SonicPassage { r });
    }
    Ok(())
}

/// Integrates the stationary equations from the anchor `(r0, rho0)` over
/// `[b1, b2]`, tabulated on `n` uniform nodes (at least 2049 internally).
#[allow(clippy::too_many_arguments)]
pub fn steady_profile(
    gas: &GasModel,
    mass_flux: f64,
    s: f64,
    anchor: (f64, f64),
    b1: f64,
    b2: f64,
    n: usize,
) -> Result<SteadyProfile> {
    if !(b1 > 0.0 && b2 > b1) {
        return Err(Error::InvalidInterval { b1, b2 });
    }
    let (r0, rho0) = anchor;
    if !(r0 >= b1 && r0 <= b2) {
        return Err(Error::InvalidFamily(format!("steady anchor r = {r0} outside [{b1}, {b2}]")));
    }
    if !(rho0 > 0.0) {
        return Err(Error::NonPositiveDensity { rho: rho0, r: r0 });
    }
    if !(mass_flux > 0.0) {
        return Err(Error::InvalidFamily("steady mass flux must be positive".into()));
    }
    let u0 = mass_flux / (gas.rm(r0) * rho0);
    check_supersonic(gas, mass_flux, s, r0, u0)?;

    let n = n.max(2049);
    let mut r = linspace(b1, b2, n);
    // make the anchor a node so that both sweeps start from it exactly
    let ia = locate(&r, r0);
    let ia = if (r[ia + 1] - r0).abs() < (r0 - r[ia]).abs() { ia + 1 } else { ia };
    r[ia] = r0;

    let mut u = vec![0.0; n];
    u[ia] = u0;
    let fwd = SteadyOde { gas: *gas, flux: mass_flux, s, origin: r0, dir: 1.0 };
    for i in ia..n - 1 {
        u[i + 1] = integrate_segment(&fwd, r[i], r[i + 1], u[i])?;
        check_supersonic(gas, mass_flux, s, r[i + 1], u[i + 1])?;
    }
    let bwd = SteadyOde { gas: *gas, flux: mass_flux, s, origin: r0, dir: -1.0 };
    for i in (1..=ia).rev() {
        u[i - 1] = integrate_segment(&bwd, r[i], r[i - 1], u[i])?;
        check_supersonic(gas, mass_flux, s, r[i - 1], u[i - 1])?;
    }
    let u_r = r.iter().zip(&u).map(|(&ri, &ui)| steady_slope(gas, mass_flux, s, ri, ui)).collect();
    Ok(SteadyProfile { gas: *gas, mass_flux, s, r, u, u_r })
}

impl SteadyProfile {
    /// Hermite-interpolated velocity; the slope is re-evaluated from the
    /// ODE so that (u, u') stay consistent with the stationary relation.
    pub fn eval(&self, r: f64) -> SteadyPoint {
        let u = hermite_table(&self.r, &self.u, &self.u_r, r);
        let u_r = steady_slope(&self.gas, self.mass_flux, self.s, r, u);
        let rho = steady_density(&self.gas, self.mass_flux, r, u);
        let m = self.gas.mf();
        let rho_r = -rho * (m / r + u_r / u);
        SteadyPoint { rho, rho_r, u, u_r }
    }

    pub fn b1(&self) -> f64 {
        self.r[0]
    }

    pub fn b2(&self) -> f64 {
        *self.r.last().unwrap()
    }
}
