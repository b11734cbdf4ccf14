//! Characteristic solver for (w, z, S, ξ) on the determinacy domain.
//!
//! Sample nodes ride the 3-characteristics issued from the initial grid, so
//! w is integrated as an ODE along each node path. z is updated from the
//! foot of the 1-characteristic through each new node and ξ is carried along
//! 2-characteristics; both feet are found by interpolation in the previous
//! level. A node is dropped once one of its feet leaves the previous level,
//! which shrinks the sample set to the numerical domain of determinacy.

pub mod geometry;
pub mod step;
pub mod trace;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{gradient_vars, GasModel, State, DEFAULT_SONIC_FLOOR};
use crate::initial::profile::{initial_gradients_of, EntropyTables, InitialProfile};
use crate::numerics::{fd_derivative, max_abs};

pub use geometry::{domain_geometry, BoundarySpeeds, DomainGeometry, DomainShape};
pub use step::{advance, step, StepCtx};
pub use trace::{trace_characteristic, CharFamily, PathPoint};

/// Levels with fewer nodes than this end the run as a collapsed domain.
pub const MIN_NODES: usize = 6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_n_cells")]
    pub n_cells: usize,
    #[serde(default = "default_order")]
    pub scheme_order: u8,
    /// Absolute gradient magnitude that ends the run as a blowup; when unset
    /// it is 10³ · max(|α0|, |β0|, 1).
    #[serde(default)]
    pub blowup_threshold: Option<f64>,
    #[serde(default = "default_floor")]
    pub sonic_floor: f64,
    /// Store every `stride`-th step; default 1 up to 512 cells.
    #[serde(default)]
    pub stride: Option<usize>,
    /// Times that must appear as stored levels.
    #[serde(default)]
    pub output_times: Vec<f64>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

fn default_cfl() -> f64 {
    0.5
}
fn default_n_cells() -> usize {
    256
}
fn default_order() -> u8 {
    2
}
fn default_floor() -> f64 {
    DEFAULT_SONIC_FLOOR
}
fn default_max_steps() -> usize {
    2_000_000
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            cfl: default_cfl(),
            n_cells: default_n_cells(),
            scheme_order: default_order(),
            blowup_threshold: None,
            sonic_floor: default_floor(),
            stride: None,
            output_times: Vec::new(),
            max_steps: default_max_steps(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidConfig(format!("cfl = {} not in (0, 1]", self.cfl)));
        }
        if self.n_cells < 16 {
            return Err(Error::InvalidConfig(format!("n_cells = {} below 16", self.n_cells)));
        }
        if !matches!(self.scheme_order, 1 | 2) {
            return Err(Error::InvalidConfig(format!("scheme_order = {} not 1 or 2", self.scheme_order)));
        }
        if let Some(t) = self.blowup_threshold {
            if !(t > 0.0) {
                return Err(Error::InvalidConfig("blowup_threshold must be positive".into()));
            }
        }
        if self.stride == Some(0) {
            return Err(Error::InvalidConfig("stride must be at least 1".into()));
        }
        Ok(())
    }

    pub fn resolved_stride(&self) -> usize {
        self.stride.unwrap_or_else(|| self.n_cells.div_ceil(512).max(1))
    }
}

/// One stored time level. Node `j` is the 3-characteristic issued from the
/// `j`-th initial sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub t: f64,
    pub r: Vec<f64>,
    pub w: Vec<f64>,
    pub z: Vec<f64>,
    pub xi: Vec<f64>,
    pub s: Vec<f64>,
    pub alpha_fd: Vec<f64>,
    pub beta_fd: Vec<f64>,
    /// Position of the 1-characteristic issued from b2.
    pub right_boundary: f64,
}

impl Level {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn u(&self, j: usize) -> f64 {
        0.5 * (self.w[j] + self.z[j])
    }

    pub fn h(&self, j: usize, gas: &GasModel) -> f64 {
        0.25 * (gas.gamma() - 1.0) * (self.w[j] - self.z[j])
    }

    pub fn state(&self, j: usize, gas: &GasModel) -> Result<State> {
        State::from_riemann(gas, self.w[j], self.z[j], self.s[j], self.r[j], self.t)
    }

    /// Fills `alpha_fd`, `beta_fd` from three-point differences of w, z, S.
    pub fn compute_fd_gradients(&mut self, gas: &GasModel, floor: f64) -> Result<()> {
        let wr = fd_derivative(&self.r, &self.w);
        let zr = fd_derivative(&self.r, &self.z);
        let sr = fd_derivative(&self.r, &self.s);
        self.alpha_fd.clear();
        self.beta_fd.clear();
        for j in 0..self.len() {
            let st = self.state(j, gas)?;
            let d = gradient_vars(&st, wr[j], zr[j], sr[j], gas, floor)?;
            self.alpha_fd.push(d.alpha);
            self.beta_fd.push(d.beta);
        }
        Ok(())
    }

    /// Largest |α_fd|, |β_fd| and the radius where it occurs.
    pub fn max_gradient(&self) -> (f64, f64) {
        let mut best = (0.0, self.r.first().copied().unwrap_or(0.0));
        for j in 0..self.len() {
            let v = self.alpha_fd[j].abs().max(self.beta_fd[j].abs());
            if v > best.0 || v.is_nan() {
                best = (v, self.r[j]);
            }
        }
        best
    }

    pub fn min_spacing(&self) -> f64 {
        self.r.windows(2).map(|p| p[1] - p[0]).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RunStatus {
    /// Reached `t_end`; `collapsed` when the domain shrank to a point first.
    Completed { t_end: f64, collapsed: bool },
    Blowup { t: f64, r: f64 },
    RegimeLoss { t: f64, r: f64 },
}

impl RunStatus {
    pub fn label(&self) -> String {
        match self {
            RunStatus::Completed { .. } => "smooth".into(),
            RunStatus::Blowup { t, .. } => format!("blowup({t})"),
            RunStatus::RegimeLoss { t, .. } => format!("regime_loss({t})"),
        }
    }

    pub fn blowup_time(&self) -> Option<f64> {
        match self {
            RunStatus::Blowup { t, .. } => Some(*t),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpaceTimeSolution {
    pub gas: GasModel,
    pub cfg: SolverConfig,
    pub tables: EntropyTables,
    pub b1: f64,
    pub b2: f64,
    pub t0: f64,
    pub threshold: f64,
    pub levels: Vec<Level>,
    pub status: RunStatus,
    pub steps: usize,
}

impl SpaceTimeSolution {
    pub fn dr0(&self) -> f64 {
        (self.b2 - self.b1) / self.cfg.n_cells as f64
    }

    pub fn last(&self) -> &Level {
        self.levels.last().expect("solution has at least one level")
    }

    /// Index of the stored level at time `t` (to 1e-12 relative).
    pub fn level_at(&self, t: f64) -> Option<usize> {
        let tol = 1e-12 * t.abs().max(1.0);
        self.levels.iter().position(|l| (l.t - t).abs() <= tol)
    }

    pub fn ctx(&self) -> StepCtx<'_> {
        StepCtx { gas: &self.gas, tables: &self.tables, order: self.cfg.scheme_order, floor: self.cfg.sonic_floor }
    }
}

/// The t = 0 level from the profile sampled on `n_cells` intervals.
pub fn initial_level(p: &InitialProfile, n_cells: usize, floor: f64) -> Result<(Level, Vec<f64>, Vec<f64>)> {
    let gas = &p.gas;
    let s = if p.samples.len() == n_cells + 1 { p.samples.clone() } else { p.samples_at(n_cells)? };
    let k = gas.riemann_factor();
    let mut lvl = Level {
        t: 0.0,
        r: s.r.clone(),
        w: Vec::with_capacity(s.len()),
        z: Vec::with_capacity(s.len()),
        xi: s.xi.clone(),
        s: s.s.clone(),
        alpha_fd: Vec::new(),
        beta_fd: Vec::new(),
        right_boundary: p.b2(),
    };
    for i in 0..s.len() {
        let h = gas.sound_speed(s.rho[i], s.s[i]);
        let z = s.u[i] - k * h;
        if !(z > 0.0) {
            return Err(Error::NonSupersonicData { z, r: s.r[i] });
        }
        lvl.w.push(s.u[i] + k * h);
        lvl.z.push(z);
    }
    let (a0, b0) = initial_gradients_of(&s, gas, floor)?;
    lvl.compute_fd_gradients(gas, floor)?;
    Ok((lvl, a0, b0))
}

pub fn solve_domain(p: &InitialProfile, gas: &GasModel, cfg: &SolverConfig, t0: f64) -> Result<SpaceTimeSolution> {
    cfg.validate()?;
    if !(t0 > 0.0) {
        return Err(Error::InvalidHorizon { t: t0, t0 });
    }
    if gas != &p.gas {
        return Err(Error::InvalidConfig("profile was built for a different gas".into()));
    }
    let (lvl0, a0, b0) = initial_level(p, cfg.n_cells, cfg.sonic_floor)?;
    let c1 = max_abs(&a0).max(max_abs(&b0));
    let threshold = cfg.blowup_threshold.unwrap_or(1e3 * c1.max(1.0));
    let mut sol = SpaceTimeSolution {
        gas: *gas,
        cfg: cfg.clone(),
        tables: p.tables.clone(),
        b1: p.b1(),
        b2: p.b2(),
        t0,
        threshold,
        levels: vec![lvl0],
        status: RunStatus::Completed { t_end: 0.0, collapsed: false },
        steps: 0,
    };
    let stride = cfg.resolved_stride();
    let mut marks: Vec<f64> = cfg.output_times.iter().copied().filter(|&t| t > 0.0 && t < t0).collect();
    marks.push(t0);
    marks.sort_by(f64::total_cmp);
    marks.dedup();
    let mut next_mark = 0;

    let mut cur = sol.levels[0].clone();
    let ctx = StepCtx { gas, tables: &p.tables, order: cfg.scheme_order, floor: cfg.sonic_floor };
    loop {
        if sol.steps >= cfg.max_steps {
            return Err(Error::InvalidConfig(format!("exceeded max_steps = {} at t = {}", cfg.max_steps, cur.t)));
        }
        let dt_cfl = step::cfl_limit(&cur, gas, cfg.cfl);
        let target = marks[next_mark];
        let mut dt = dt_cfl;
        let mut hit = false;
        if cur.t + dt >= target - 1e-14 * target.max(1.0) {
            dt = target - cur.t;
            hit = true;
        }
        let next = match advance(&cur, dt, &ctx) {
            Ok(l) => l,
            Err(Error::RegimeLoss { t, r, .. }) => {
                sol.status = RunStatus::RegimeLoss { t, r };
                sol.steps += 1;
                break;
            }
            Err(Error::BlowupDetected { t, r, .. }) => {
                sol.status = RunStatus::Blowup { t, r };
                sol.steps += 1;
                break;
            }
            Err(e) => return Err(e),
        };
        sol.steps += 1;
        let mut next = next;
        if hit {
            next.t = target;
            next_mark += 1;
        }
        if next.len() < MIN_NODES {
            sol.status = RunStatus::Completed { t_end: cur.t, collapsed: true };
            if sol.levels.last().map(|l| l.t) != Some(cur.t) {
                sol.levels.push(cur);
            }
            return Ok(sol);
        }
        let (gmax, gr) = next.max_gradient();
        let blown = !(gmax <= threshold);
        if blown || hit || sol.steps.is_multiple_of(stride) {
            sol.levels.push(next.clone());
        }
        if blown {
            sol.status = RunStatus::Blowup { t: next.t, r: gr };
            return Ok(sol);
        }
        cur = next;
        if next_mark == marks.len() {
            sol.status = RunStatus::Completed { t_end: cur.t, collapsed: false };
            return Ok(sol);
        }
    }
    if sol.levels.last().map(|l| l.t) != Some(cur.t) {
        sol.levels.push(cur);
    }
    Ok(sol)
}
