//! Pointwise checks of the a-priori estimates against a computed solution,
//! and the blowup classifier.

pub mod blowup;

use serde::{Deserialize, Serialize};

use crate::characteristics::{trace_characteristic, CharFamily, SpaceTimeSolution};
use crate::error::Result;
use crate::gas::GasModel;
use crate::initial::ledger::ConstantsLedger;
use crate::riccati::{coeffs, GradientField};

pub use blowup::{detect_blowup, BlowupComparison, Classification};

/// Default relative roundoff allowance.
pub const ROUNDOFF: f64 = 1e-12;

/// Outcome of one inequality over all samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub check_id: String,
    pub pass: bool,
    /// Smallest signed distance to the inequality boundary (negative means
    /// violated before tolerance).
    pub margin: f64,
    pub r: f64,
    pub t: f64,
    pub tolerance: f64,
    pub samples: usize,
    /// Magnitude the tolerance was scaled by.
    #[serde(skip)]
    pub scale: f64,
    /// Whether the tolerance includes the grid allowance ε_grid.
    #[serde(skip)]
    pub grid_tolerance: bool,
}

impl ViolationReport {
    /// Relative shortfall below zero margin, ignoring the tolerance.
    pub fn relative_deficit(&self) -> f64 {
        if self.samples == 0 {
            0.0
        } else {
            (-self.margin).max(0.0) / self.scale
        }
    }
}

/// Tolerance settings shared by the checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative allowance ε_grid applied to the discretized inequalities.
    pub eps_grid: f64,
    /// Allowed total variation of S̃_ξ along particle paths per unit Δr.
    pub drift_const: f64,
    /// Relative roundoff floor added to every grid tolerance.
    pub roundoff: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { eps_grid: 0.0, drift_const: 1.0, roundoff: ROUNDOFF }
    }
}

/// Running worst case of one check.
#[derive(Debug, Clone)]
pub(crate) struct Acc {
    id: &'static str,
    strict: bool,
    scale: f64,
    grid: bool,
    worst: f64,
    r: f64,
    t: f64,
    n: usize,
}

impl Acc {
    pub fn new(id: &'static str, strict: bool, scale: f64, grid: bool) -> Self {
        Acc { id, strict, scale: scale.abs().max(f64::MIN_POSITIVE), grid, worst: f64::INFINITY, r: f64::NAN, t: f64::NAN, n: 0 }
    }

    pub fn push(&mut self, margin: f64, r: f64, t: f64) {
        self.n += 1;
        if margin < self.worst || (margin.is_nan() && !self.worst.is_nan()) {
            self.worst = margin;
            self.r = r;
            self.t = t;
        }
    }

    pub fn finish(self, tol: &Tolerances) -> ViolationReport {
        let eps = if self.grid { tol.eps_grid } else { 0.0 };
        let tolerance = (eps + tol.roundoff) * self.scale;
        let pass = if self.n == 0 {
            true
        } else if self.strict {
            self.worst > -tolerance
        } else {
            self.worst >= -tolerance
        };
        ViolationReport {
            check_id: self.id.to_string(),
            pass,
            margin: self.worst,
            r: self.r,
            t: self.t,
            tolerance,
            samples: self.n,
            scale: self.scale,
            grid_tolerance: self.grid,
        }
    }

    /// Same as `finish` with an explicit tolerance (used when the check is
    /// exact by construction).
    pub fn finish_with(self, tolerance: f64) -> ViolationReport {
        let pass = self.n == 0 || if self.strict { self.worst > -tolerance } else { self.worst >= -tolerance };
        ViolationReport {
            check_id: self.id.to_string(),
            pass,
            margin: self.worst,
            r: self.r,
            t: self.t,
            tolerance,
            samples: self.n,
            scale: self.scale,
            grid_tolerance: false,
        }
    }
}

/// Bounds on (w, z, h, u, r, S, S̃_ξ) at every stored sample.
pub fn check_invariant_domain(sol: &SpaceTimeSolution, ledger: &ConstantsLedger, tol: &Tolerances) -> Vec<ViolationReport> {
    let gas = &sol.gas;
    let g = gas.gamma();
    let wt = ledger.w_tilde;
    let p_max = gas.mf() * gas.c_v() * g / (3.0 * ledger.r_d);
    let mut z_pos = Acc::new("lemma3.z_positive", true, wt, true);
    let mut z_le_w = Acc::new("lemma3.z_le_w", false, wt, true);
    let mut w_lt = Acc::new("lemma3.w_below_w_tilde", false, wt, true);
    let mut h_lt = Acc::new("remark6.h_below_h_d", true, ledger.h_d, true);
    let mut u_lt = Acc::new("remark6.u_below_w_tilde", true, wt, true);
    let mut r_lt = Acc::new("remark6.r_below_r_d", true, ledger.r_d, true);
    let mut c1_lo = Acc::new("remark6.c1_lower", true, wt, true);
    let mut p_lo = Acc::new("a2.entropy_flux_nonnegative", false, p_max.max(ROUNDOFF), true);
    let mut p_hi = Acc::new("a2.entropy_flux_upper", false, p_max.max(ROUNDOFF), true);
    let mut s_bd = Acc::new("remark5.entropy_bound", false, ledger.s0_bound.max(1.0), false);
    for l in &sol.levels {
        for j in 0..l.len() {
            let (r, t, w, z) = (l.r[j], l.t, l.w[j], l.z[j]);
            let u = 0.5 * (w + z);
            let h = 0.25 * (g - 1.0) * (w - z);
            z_pos.push(z, r, t);
            z_le_w.push(w - z, r, t);
            w_lt.push(wt - w, r, t);
            h_lt.push(ledger.h_d - h, r, t);
            u_lt.push(wt - u, r, t);
            r_lt.push(ledger.r_d - r, r, t);
            c1_lo.push((u - h) - (3.0 - g) * h / (g - 1.0), r, t);
            let (s, sxi, _) = sol.tables.eval(l.xi[j]);
            let pflux = gas.rm(r) * gas.density(h.max(0.0), s) * sxi;
            p_lo.push(pflux, r, t);
            p_hi.push(p_max - pflux, r, t);
            s_bd.push(ledger.s0_bound - l.s[j].abs(), r, t);
        }
    }
    let mut out: Vec<_> = [z_pos, z_le_w, w_lt, h_lt, u_lt, r_lt, c1_lo, p_lo, p_hi].into_iter().map(|a| a.finish(tol)).collect();
    out.push(s_bd.finish_with(1e-10));
    out
}

/// Signs of the Riccati coefficients and the bound A3, B3 ≤ L. The signs of
/// A3, B3 are only checked when A3 holds. A sample where the coefficients
/// are undefined (sonic or h ≤ 0) is returned as an error rather than
/// counted as a sign violation.
pub fn check_coefficient_signs(sol: &SpaceTimeSolution, ledger: &ConstantsLedger, a3_holds: bool) -> Result<Vec<ViolationReport>> {
    let gas = &sol.gas;
    let floor = sol.cfg.sonic_floor;
    let sc = ledger.l.abs().max(1.0);
    let mut acc = [
        Acc::new("lemma4.a1_positive", true, sc, false),
        Acc::new("lemma4.a2_positive", true, sc, false),
        Acc::new("lemma4.a3_nonnegative", false, sc, false),
        Acc::new("lemma4.b1_positive", true, sc, false),
        Acc::new("lemma4.b2_positive", true, sc, false),
        Acc::new("lemma4.b3_nonnegative", false, sc, false),
        Acc::new("lemma4.a1_minus_a2_positive", true, sc, false),
        Acc::new("lemma4.b1_minus_b2_positive", true, sc, false),
        Acc::new("lemma4.a3_below_l", false, sc, false),
        Acc::new("lemma4.b3_below_l", false, sc, false),
    ];
    for l in &sol.levels {
        for j in 0..l.len() {
            let st = l.state(j, gas)?;
            let (_, sxi, sxixi) = sol.tables.eval(l.xi[j]);
            let c = coeffs(&st, sxi, sxixi, gas, floor)?;
            let vals = [c.a1, c.a2, c.a3, c.b1, c.b2, c.b3, c.a1 - c.a2, c.b1 - c.b2, ledger.l - c.a3, ledger.l - c.b3];
            for (a, v) in acc.iter_mut().zip(vals) {
                a.push(v, st.r, st.t);
            }
        }
    }
    Ok(acc
        .into_iter()
        .filter(|a| a3_holds || !a.id.ends_with("3_nonnegative"))
        .map(|a| a.finish_with(1e-12))
        .collect())
}

/// Unweighted bounds 0 ≤ α, β < C̃₁ when A1 to A4 hold; the h-weighted bound by C̃₂ always.
pub fn check_gradient_bounds(sol: &SpaceTimeSolution, grads: &GradientField, ledger: &ConstantsLedger, a4_holds: bool, tol: &Tolerances) -> Vec<ViolationReport> {
    let gas = &sol.gas;
    let g = gas.gamma();
    let lam = gas.riemann_factor();
    let c1t = ledger.c1_tilde;
    let mut out = Vec::new();
    if a4_holds {
        let mut a_lo = Acc::new("lemma5.alpha_nonnegative", false, c1t, true);
        let mut b_lo = Acc::new("lemma5.beta_nonnegative", false, c1t, true);
        let mut a_hi = Acc::new("lemma5.alpha_below_c1_tilde", true, c1t, true);
        let mut b_hi = Acc::new("lemma5.beta_below_c1_tilde", true, c1t, true);
        for (k, l) in sol.levels.iter().enumerate().take(grads.len()) {
            for j in 0..l.len() {
                let (a, b) = (grads.alpha[k][j], grads.beta[k][j]);
                a_lo.push(a, l.r[j], l.t);
                b_lo.push(b, l.r[j], l.t);
                a_hi.push(c1t - a, l.r[j], l.t);
                b_hi.push(c1t - b, l.r[j], l.t);
            }
        }
        out.extend([a_lo, b_lo, a_hi, b_hi].into_iter().map(|a| a.finish(tol)));
    }
    let c2t = ledger.c2_tilde;
    let mut a_w = Acc::new("lemma7.weighted_alpha_below_c2_tilde", true, c2t, true);
    let mut b_w = Acc::new("lemma7.weighted_beta_below_c2_tilde", true, c2t, true);
    for (k, l) in sol.levels.iter().enumerate().take(grads.len()) {
        for j in 0..l.len() {
            let h = 0.25 * (g - 1.0) * (l.w[j] - l.z[j]);
            let f = h.powf(-lam);
            a_w.push(c2t - f * grads.alpha[k][j], l.r[j], l.t);
            b_w.push(c2t - f * grads.beta[k][j], l.r[j], l.t);
        }
    }
    out.extend([a_w, b_w].into_iter().map(|a| a.finish(tol)));
    out
}

/// h against the rarefactive floor when A4 held, the general floor otherwise.
pub fn check_density_floor(sol: &SpaceTimeSolution, ledger: &ConstantsLedger, a4_holds: bool, tol: &Tolerances) -> ViolationReport {
    let g = sol.gas.gamma();
    let (id, floor) = if a4_holds {
        ("lemma8.h_floor", ledger.h_floor_rarefactive)
    } else {
        ("lemma9.h_floor", ledger.h_floor)
    };
    let mut acc = Acc::new(id, false, floor, true);
    for l in &sol.levels {
        for j in 0..l.len() {
            acc.push(0.25 * (g - 1.0) * (l.w[j] - l.z[j]) - floor, l.r[j], l.t);
        }
    }
    acc.finish(tol)
}

/// Largest total variation of S̃_ξ (and S̃_ξξ) along 2-characteristics
/// traced from every `every`-th initial node.
pub fn entropy_drift(sol: &SpaceTimeSolution, every: usize) -> Result<(f64, f64, f64, f64)> {
    let l0 = &sol.levels[0];
    let mut worst = (0.0, 0.0, l0.r[0], 0.0);
    for j in (0..l0.len()).step_by(every.max(1)) {
        let path = trace_characteristic(sol, CharFamily::Two, (l0.r[j], 0.0))?;
        let (mut tv1, mut tv2) = (0.0, 0.0);
        let mut prev = sol.tables.eval(path[0].xi);
        for pt in &path[1..] {
            let cur = sol.tables.eval(pt.xi);
            tv1 += (cur.1 - prev.1).abs();
            tv2 += (cur.2 - prev.2).abs();
            prev = cur;
        }
        if tv1 > worst.0 {
            worst = (tv1, tv2.max(worst.1), l0.r[j], path[path.len() - 1].t);
        } else {
            worst.1 = worst.1.max(tv2);
        }
    }
    Ok(worst)
}

/// Drift of S̃_ξ along particle paths against `drift_const · Δr`, plus the
/// pointwise entropy bounds in ξ: the S̃_ξ bounds when A2 holds, the S̃_ξξ
/// bounds when A3 holds.
pub fn check_entropy_transport(sol: &SpaceTimeSolution, ledger: &ConstantsLedger, a2_holds: bool, a3_holds: bool, tol: &Tolerances) -> Result<Vec<ViolationReport>> {
    let gas: &GasModel = &sol.gas;
    let dr = sol.dr0();
    let every = (sol.levels[0].len() / 128).max(1);
    let (tv1, _, r, t) = entropy_drift(sol, every)?;
    let allowed = tol.drift_const * dr;
    let mut drift = Acc::new("lemma2.sxi_drift", false, 1.0, false);
    drift.push(allowed - tv1, r, t);

    let g = gas.gamma();
    let weight = gas.gamma_k() * ledger.r_d.powi(gas.m() as i32 + 1) * (ledger.s0_bound / gas.c_gamma()).exp() * ledger.h_d.powf(2.0 / (g - 1.0));
    let upper = gas.mf() * gas.c_v() * g / 3.0;
    let sc = upper.max(1.0);
    let mut lo = Acc::new("remark5.sxi_nonnegative", false, sc, true);
    let mut hi = Acc::new("remark5.sxi_upper", false, sc, true);
    let mut curv_lo = Acc::new("remark5.sxixi_lower", false, ledger.s2_bound.max(1.0), true);
    let mut curv_hi = Acc::new("remark5.sxixi_nonpositive", false, ledger.s2_bound.max(1.0), true);
    for l in &sol.levels {
        for j in 0..l.len() {
            let (_, sxi, sxixi) = sol.tables.eval(l.xi[j]);
            lo.push(weight * sxi, l.r[j], l.t);
            hi.push(upper - weight * sxi, l.r[j], l.t);
            curv_lo.push(sxixi + ledger.s2_bound, l.r[j], l.t);
            curv_hi.push(-sxixi, l.r[j], l.t);
        }
    }
    let mut out = vec![drift.finish_with(0.0)];
    if a2_holds {
        out.extend([lo, hi].into_iter().map(|a| a.finish(tol)));
    }
    if a3_holds {
        out.extend([curv_lo, curv_hi].into_iter().map(|a| a.finish(tol)));
    }
    Ok(out)
}

/// Smallest ε_grid that would make every grid-tolerance report pass.
pub fn required_eps(reports: &[ViolationReport]) -> f64 {
    reports.iter().filter(|r| r.grid_tolerance).map(|r| r.relative_deficit()).fold(0.0, f64::max)
}
