//! Pointwise audit of the four structural assumptions on the initial data.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::gas::{GasModel, DEFAULT_SONIC_FLOOR};
use crate::initial::ledger::{check_grid, ConstantsLedger};
use crate::initial::profile::{initial_gradient_at, InitialProfile};

/// Relative allowance for inequalities that hold with equality on exact data.
const ROUNDOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub assumption: u8,
    pub r: f64,
    pub inequality: String,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub a1_ok: bool,
    pub a2_ok: bool,
    pub a3_ok: bool,
    pub a4_ok: bool,
    pub witnesses: Vec<Witness>,
}

impl AssumptionReport {
    pub fn all_ok(&self, include_a4: bool) -> bool {
        self.a1_ok && self.a2_ok && self.a3_ok && (self.a4_ok || !include_a4)
    }

    /// Witnesses of one assumption.
    pub fn of(&self, a: u8) -> impl Iterator<Item = &Witness> {
        self.witnesses.iter().filter(move |w| w.assumption == a)
    }
}

/// Checks `lhs <= rhs` and records a witness on failure.
fn require(out: &mut Vec<Witness>, a: u8, r: f64, what: &str, lhs: f64, rhs: f64) -> bool {
    if lhs <= rhs {
        true
    } else {
        out.push(Witness { assumption: a, r, inequality: what.to_string(), lhs, rhs });
        false
    }
}

/// `lhs <= rhs` up to a roundoff allowance relative to `scale`, for
/// inequalities that are tight on exact families (steady or zero-curvature
/// data).
fn require_roundoff(out: &mut Vec<Witness>, a: u8, r: f64, what: &str, lhs: f64, rhs: f64, scale: f64) -> bool {
    if lhs <= rhs + ROUNDOFF * scale {
        true
    } else {
        out.push(Witness { assumption: a, r, inequality: what.to_string(), lhs, rhs });
        false
    }
}

fn strict(out: &mut Vec<Witness>, a: u8, r: f64, what: &str, lhs: f64, rhs: f64) -> bool {
    if lhs < rhs {
        true
    } else {
        out.push(Witness { assumption: a, r, inequality: what.to_string(), lhs, rhs });
        false
    }
}

/// Audits A1 to A4 on the refined check grid. The entropy-gradient bound is
/// checked both with r ρ0 in the denominator and with r^m ρ0 (the form in
/// which it enters the invariant-domain argument); they agree for m = 1.
pub fn check_assumptions(p: &InitialProfile, gas: &GasModel, ledger: &ConstantsLedger) -> Result<AssumptionReport> {
    let s = check_grid(p)?;
    let k = gas.riemann_factor();
    let m = gas.mf();
    let mut wit = Vec::new();
    let (mut a1, mut a2, mut a3, mut a4) = (true, true, true, true);
    let tilde_limit = m * gas.c_v() * gas.gamma()
        / (3.0 * gas.gamma_k() * ledger.r_d.powi(gas.m() as i32 + 1) * (ledger.s0_bound / gas.c_gamma()).exp() * ledger.h_d.powf(k));
    for i in 0..s.len() {
        let r = s.r[i];
        let pt = s.point(i);
        let h = gas.sound_speed(pt.rho, pt.s);
        let (w, z) = (pt.u + k * h, pt.u - k * h);
        a1 &= strict(&mut wit, 1, r, "0 < z0", 0.0, z);
        a1 &= require(&mut wit, 1, r, "w0 <= C0", w, ledger.c0);

        a2 &= require(&mut wit, 2, r, "|S0| <= S0_bound", pt.s.abs(), ledger.s0_bound);
        let q = pt.s_r / (r * pt.rho);
        a2 &= require(&mut wit, 2, r, "0 <= S0'/(r rho0)", 0.0, q);
        a2 &= require(&mut wit, 2, r, "S0'/(r rho0) <= S1 limit", q, ledger.s1_limit);
        let sxi = pt.s_r / (gas.rm(r) * pt.rho);
        a2 &= require(&mut wit, 2, r, "0 <= S0'/(r^m rho0)", 0.0, sxi);
        a2 &= require(&mut wit, 2, r, "S0'/(r^m rho0) <= S1 limit", sxi, tilde_limit);

        let lhs3 = pt.s_rr - (m / r + pt.rho_r / pt.rho) * pt.s_r;
        let scale3 = pt.s_rr.abs() + ((m / r).abs() + (pt.rho_r / pt.rho).abs()) * pt.s_r.abs();
        a3 &= require_roundoff(&mut wit, 3, r, "S0'' - (m/r + rho0'/rho0) S0' <= 0", lhs3, 0.0, scale3);

        match initial_gradient_at(&pt, r, gas, DEFAULT_SONIC_FLOOR) {
            Ok((alpha, beta)) => {
                let scale4 = (pt.u.abs() + h) / r + pt.u_r.abs() + h * pt.rho_r.abs() / pt.rho;
                a4 &= require_roundoff(&mut wit, 4, r, "alpha0 >= 0", 0.0, alpha, scale4);
                a4 &= require_roundoff(&mut wit, 4, r, "beta0 >= 0", 0.0, beta, scale4);
            }
            Err(_) => {
                // gradient variables undefined at a sonic point
                a4 = false;
                wit.push(Witness { assumption: 4, r, inequality: "c1 != 0".into(), lhs: pt.u - h, rhs: 0.0 });
            }
        }
    }
    a1 &= strict(&mut wit, 1, p.b1(), "z_tilde < w_tilde", ledger.z_tilde, ledger.w_tilde);
    Ok(AssumptionReport { a1_ok: a1, a2_ok: a2, a3_ok: a3, a4_ok: a4, witnesses: wit })
}
