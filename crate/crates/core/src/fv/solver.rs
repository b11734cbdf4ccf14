//! MUSCL/Rusanov finite volumes on (r^m ρ, r^m ρ u) with S advected upwind.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::GasModel;

/// Number of ghost cells on each side.
pub const GHOSTS: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FvConfig {
    #[serde(default = "default_cells")]
    pub n_cells: usize,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// 1: first-order upwind/Euler, 2: MUSCL with SSP-RK2.
    #[serde(default = "default_order")]
    pub order: u8,
}

fn default_cells() -> usize {
    512
}
fn default_cfl() -> f64 {
    0.4
}
fn default_order() -> u8 {
    2
}

impl Default for FvConfig {
    fn default() -> Self {
        FvConfig { n_cells: default_cells(), cfl: default_cfl(), order: default_order() }
    }
}

impl FvConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::InvalidConfig(format!("fv cfl = {} not in (0, 1]", self.cfl)));
        }
        if self.n_cells < 8 {
            return Err(Error::InvalidConfig(format!("fv n_cells = {} below 8", self.n_cells)));
        }
        if !matches!(self.order, 1 | 2) {
            return Err(Error::InvalidConfig(format!("fv order = {} not 1 or 2", self.order)));
        }
        Ok(())
    }
}

/// Uniform cells on [a, b].
#[derive(Debug, Clone, PartialEq)]
pub struct FvGrid {
    pub a: f64,
    pub b: f64,
    pub dr: f64,
    pub centers: Vec<f64>,
}

impl FvGrid {
    pub fn new(a: f64, b: f64, n: usize) -> Result<Self> {
        if !(a > 0.0 && b > a) {
            return Err(Error::InvalidInterval { b1: a, b2: b });
        }
        let dr = (b - a) / n as f64;
        let centers = (0..n).map(|i| a + (i as f64 + 0.5) * dr).collect();
        Ok(FvGrid { a, b, dr, centers })
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Center of cell `i`, where negative and past-the-end indices are ghosts.
    pub fn center(&self, i: isize) -> f64 {
        self.a + (i as f64 + 0.5) * self.dr
    }

    pub fn face(&self, i: usize) -> f64 {
        self.a + i as f64 * self.dr
    }
}

/// Cell averages q0 = r^m ρ, q1 = r^m ρ u and the cell entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct ConservativeCells {
    pub q0: Vec<f64>,
    pub q1: Vec<f64>,
    pub s: Vec<f64>,
}

impl ConservativeCells {
    pub fn from_primitive(grid: &FvGrid, gas: &GasModel, rho: &[f64], u: &[f64], s: &[f64]) -> Self {
        let q0: Vec<f64> = grid.centers.iter().zip(rho).map(|(&r, &d)| gas.rm(r) * d).collect();
        let q1 = q0.iter().zip(u).map(|(&a, &v)| a * v).collect();
        ConservativeCells { q0, q1, s: s.to_vec() }
    }

    /// (ρ, u, S) of cell `i`.
    pub fn primitive(&self, grid: &FvGrid, gas: &GasModel, i: usize) -> (f64, f64, f64) {
        let rho = self.q0[i] / gas.rm(grid.centers[i]);
        (rho, self.q1[i] / self.q0[i], self.s[i])
    }

    /// Σ q0 Δr.
    pub fn mass(&self, grid: &FvGrid) -> f64 {
        self.q0.iter().sum::<f64>() * grid.dr
    }
}

pub type GhostFn = Arc<dyn Fn(f64, f64) -> (f64, f64, f64) + Send + Sync>;

/// Ghost-cell data at one end of the grid.
#[derive(Clone)]
pub enum FvBoundary {
    /// Linear extrapolation of (w, z, S) from the two outermost cells.
    Extrapolate,
    /// (ρ, u, S) as a function of (r, t).
    Prescribed(GhostFn),
}

impl fmt::Debug for FvBoundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FvBoundary::Extrapolate => write!(f, "Extrapolate"),
            FvBoundary::Prescribed(_) => write!(f, "Prescribed(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FvBoundaries {
    pub left: FvBoundary,
    pub right: FvBoundary,
}

impl Default for FvBoundaries {
    fn default() -> Self {
        FvBoundaries { left: FvBoundary::Extrapolate, right: FvBoundary::Extrapolate }
    }
}

/// Primitive (ρ, u, S) on cells plus ghosts, indexed from the first ghost.
struct Padded {
    rho: Vec<f64>,
    u: Vec<f64>,
    s: Vec<f64>,
}

fn to_wz(gas: &GasModel, rho: f64, u: f64, s: f64) -> (f64, f64) {
    let k = gas.riemann_factor() * gas.sound_speed(rho, s);
    (u + k, u - k)
}

fn from_wz(gas: &GasModel, w: f64, z: f64, s: f64) -> (f64, f64) {
    let h = 0.25 * (gas.gamma() - 1.0) * (w - z);
    (gas.density(h.max(0.0), s), 0.5 * (w + z))
}

fn pad(grid: &FvGrid, gas: &GasModel, c: &ConservativeCells, bc: &FvBoundaries, t: f64) -> Result<Padded> {
    let n = grid.len();
    let mut rho = vec![0.0; n + 2 * GHOSTS];
    let mut u = vec![0.0; n + 2 * GHOSTS];
    let mut s = vec![0.0; n + 2 * GHOSTS];
    for i in 0..n {
        if !(c.q0[i] > 0.0) {
            return Err(Error::PositivityLoss { cell: i, q0: c.q0[i] });
        }
        let (d, v, e) = c.primitive(grid, gas, i);
        rho[i + GHOSTS] = d;
        u[i + GHOSTS] = v;
        s[i + GHOSTS] = e;
    }
    let mut fill = |side_left: bool, b: &FvBoundary| {
        for g in 1..=GHOSTS {
            let (slot, inner0, inner1, cell) = if side_left {
                (GHOSTS - g, GHOSTS, GHOSTS + 1, -(g as isize))
            } else {
                (n + GHOSTS - 1 + g, n + GHOSTS - 1, n + GHOSTS - 2, (n - 1 + g) as isize)
            };
            let (d, v, e) = match b {
                FvBoundary::Prescribed(f) => f(grid.center(cell), t),
                FvBoundary::Extrapolate => {
                    let (w0, z0) = to_wz(gas, rho[inner0], u[inner0], s[inner0]);
                    let (w1, z1) = to_wz(gas, rho[inner1], u[inner1], s[inner1]);
                    let k = g as f64;
                    let lin = |a: f64, b: f64| a + k * (a - b);
                    let se = lin(s[inner0], s[inner1]);
                    let (d, v) = from_wz(gas, lin(w0, w1), lin(z0, z1), se);
                    (d, v, se)
                }
            };
            rho[slot] = d;
            u[slot] = v;
            s[slot] = e;
        }
    };
    fill(true, &bc.left);
    fill(false, &bc.right);
    Ok(Padded { rho, u, s })
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Monotonized-central limited slope.
fn mc(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else {
        let c = 0.5 * (a + b);
        c.signum() * (2.0 * a.abs()).min(2.0 * b.abs()).min(c.abs())
    }
}

/// Semi-discrete right-hand side and the net mass flux out of the grid.
fn rhs(grid: &FvGrid, gas: &GasModel, c: &ConservativeCells, bc: &FvBoundaries, t: f64, order: u8) -> Result<(ConservativeCells, f64)> {
    let n = grid.len();
    let p = pad(grid, gas, c, bc, t)?;
    let np = n + 2 * GHOSTS;
    let slope = |v: &[f64], i: usize, lim: fn(f64, f64) -> f64| {
        if order <= 1 || i == 0 || i + 1 >= np {
            0.0
        } else {
            lim(v[i] - v[i - 1], v[i + 1] - v[i])
        }
    };
    // faces 0..=n; face f sits between padded cells f+1 and f+2
    let mut f0 = vec![0.0; n + 1];
    let mut f1 = vec![0.0; n + 1];
    let mut s_face = vec![0.0; n + 1];
    for f in 0..=n {
        let (il, ir) = (f + GHOSTS - 1, f + GHOSTS);
        let rf = grid.face(f);
        let rm = gas.rm(rf);
        let dl = p.rho[il] + 0.5 * slope(&p.rho, il, mc);
        let ul = p.u[il] + 0.5 * slope(&p.u, il, mc);
        let sl = p.s[il] + 0.5 * slope(&p.s, il, minmod);
        let dr = p.rho[ir] - 0.5 * slope(&p.rho, ir, mc);
        let ur = p.u[ir] - 0.5 * slope(&p.u, ir, mc);
        let sr = p.s[ir] - 0.5 * slope(&p.s, ir, minmod);
        let hl = gas.sound_speed(dl, sl);
        let hr = gas.sound_speed(dr, sr);
        let a = (ul.abs() + hl).max(ur.abs() + hr);
        f0[f] = 0.5 * rm * (dl * ul + dr * ur) - 0.5 * a * rm * (dr - dl);
        f1[f] = 0.5 * rm * (dl * ul * ul + dr * ur * ur) - 0.5 * a * rm * (dr * ur - dl * ul);
        s_face[f] = sl;
    }
    let mut out = ConservativeCells { q0: vec![0.0; n], q1: vec![0.0; n], s: vec![0.0; n] };
    let inv = 1.0 / grid.dr;
    for i in 0..n {
        let ip = i + GHOSTS;
        let pm = gas.pressure(p.rho[ip - 1], p.s[ip - 1]);
        let pp = gas.pressure(p.rho[ip + 1], p.s[ip + 1]);
        out.q0[i] = -(f0[i + 1] - f0[i]) * inv;
        out.q1[i] = -(f1[i + 1] - f1[i]) * inv - gas.rm(grid.centers[i]) * (pp - pm) * 0.5 * inv;
        // S_t + u S_r = 0 with upwind (u > 0) face values
        let ui = p.u[ip];
        out.s[i] = if ui >= 0.0 {
            -ui * (s_face[i + 1] - s_face[i]) * inv
        } else {
            let sr = |j: usize| p.s[j] - 0.5 * slope(&p.s, j, minmod);
            -ui * (sr(ip + 1) - sr(ip)) * inv
        };
    }
    Ok((out, f0[n] - f0[0]))
}

pub fn fv_max_speed(grid: &FvGrid, gas: &GasModel, c: &ConservativeCells) -> f64 {
    (0..grid.len())
        .map(|i| {
            let (d, v, e) = c.primitive(grid, gas, i);
            v.abs() + gas.sound_speed(d, e)
        })
        .fold(0.0, f64::max)
}

pub fn fv_cfl_limit(grid: &FvGrid, gas: &GasModel, c: &ConservativeCells, cfl: f64) -> f64 {
    cfl * grid.dr / fv_max_speed(grid, gas, c).max(f64::MIN_POSITIVE)
}

fn axpy(a: &ConservativeCells, k: f64, d: &ConservativeCells) -> ConservativeCells {
    let f = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p + k * q).collect();
    ConservativeCells { q0: f(&a.q0, &d.q0), q1: f(&a.q1, &d.q1), s: f(&a.s, &d.s) }
}

fn average(a: &ConservativeCells, b: &ConservativeCells) -> ConservativeCells {
    let f = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| 0.5 * (p + q)).collect();
    ConservativeCells { q0: f(&a.q0, &b.q0), q1: f(&a.q1, &b.q1), s: f(&a.s, &b.s) }
}

/// Result of one step: new cells and the time-integrated net mass flux
/// through the two end faces.
#[derive(Debug, Clone)]
pub struct FvStep {
    pub cells: ConservativeCells,
    pub boundary_mass_flux: f64,
}

pub fn fv_step(grid: &FvGrid, gas: &GasModel, cells: &ConservativeCells, dt: f64, t: f64, cfg: &FvConfig, bc: &FvBoundaries) -> Result<FvStep> {
    let dt_max = fv_cfl_limit(grid, gas, cells, cfg.cfl);
    if !(dt > 0.0) || dt > dt_max * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, dt_max });
    }
    let (k1, b1) = rhs(grid, gas, cells, bc, t, cfg.order)?;
    let stage = axpy(cells, dt, &k1);
    let out = if cfg.order <= 1 {
        FvStep { cells: stage, boundary_mass_flux: dt * b1 }
    } else {
        let (k2, b2) = rhs(grid, gas, &stage, bc, t + dt, cfg.order)?;
        let second = axpy(&stage, dt, &k2);
        FvStep { cells: average(cells, &second), boundary_mass_flux: 0.5 * dt * (b1 + b2) }
    };
    if let Some(i) = out.cells.q0.iter().position(|&q| !(q > 0.0)) {
        return Err(Error::PositivityLoss { cell: i, q0: out.cells.q0[i] });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct FvLevel {
    pub t: f64,
    pub cells: ConservativeCells,
}

#[derive(Debug, Clone)]
pub struct FvSolution {
    pub gas: GasModel,
    pub grid: FvGrid,
    pub cfg: FvConfig,
    pub levels: Vec<FvLevel>,
    pub steps: usize,
}

impl FvSolution {
    pub fn level_at(&self, t: f64) -> Option<&FvLevel> {
        let tol = 1e-12 * t.abs().max(1.0);
        self.levels.iter().find(|l| (l.t - t).abs() <= tol)
    }
}

/// Runs from `init` (ρ, u, S at cell centers) to `t_end`, storing the
/// initial state, every time in `outputs` and the final state.
#[allow(clippy::too_many_arguments)]
pub fn fv_run<F>(init: F, a: f64, b: f64, gas: &GasModel, cfg: &FvConfig, bc: &FvBoundaries, t_end: f64, outputs: &[f64]) -> Result<FvSolution>
where
    F: Fn(f64) -> Result<(f64, f64, f64)>,
{
    cfg.validate()?;
    let grid = FvGrid::new(a, b, cfg.n_cells)?;
    let mut rho = Vec::with_capacity(grid.len());
    let mut u = Vec::with_capacity(grid.len());
    let mut s = Vec::with_capacity(grid.len());
    for &r in &grid.centers {
        let (d, v, e) = init(r)?;
        rho.push(d);
        u.push(v);
        s.push(e);
    }
    let mut cells = ConservativeCells::from_primitive(&grid, gas, &rho, &u, &s);
    let mut marks: Vec<f64> = outputs.iter().copied().filter(|&x| x > 0.0 && x < t_end).collect();
    marks.push(t_end);
    marks.sort_by(f64::total_cmp);
    marks.dedup();
    let mut sol = FvSolution { gas: *gas, grid: grid.clone(), cfg: cfg.clone(), levels: vec![FvLevel { t: 0.0, cells: cells.clone() }], steps: 0 };
    let mut t = 0.0;
    for &mark in &marks {
        while t < mark {
            let mut dt = fv_cfl_limit(&grid, gas, &cells, cfg.cfl);
            let last = t + dt >= mark - 1e-14 * mark.max(1.0);
            if last {
                dt = mark - t;
            }
            cells = fv_step(&grid, gas, &cells, dt, t, cfg, bc)?.cells;
            sol.steps += 1;
            t = if last { mark } else { t + dt };
        }
        sol.levels.push(FvLevel { t, cells: cells.clone() });
    }
    Ok(sol)
}
