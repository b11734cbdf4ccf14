//! Integration of the Riccati system along the stored characteristic levels.

use rayon::prelude::*;

use crate::characteristics::{Level, SpaceTimeSolution};
use crate::error::{Error, Result};
use crate::gas::{GasModel, State};
use crate::initial::profile::EntropyTables;
use crate::numerics::stencil;

use super::{coeffs, rhs};

/// (α_ric, β_ric) per stored level, aligned with the level's nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    pub t: Vec<f64>,
    pub alpha: Vec<Vec<f64>>,
    pub beta: Vec<Vec<f64>>,
    /// False when integration stopped early on a non-finite value.
    pub complete: bool,
}

impl GradientField {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }
}

struct Env<'a> {
    gas: &'a GasModel,
    tables: &'a EntropyTables,
    floor: f64,
}

impl Env<'_> {
    /// (∂3 α, ∂1 β) at a point given (w, z, ξ) and the gradient pair.
    #[allow(clippy::too_many_arguments)]
    fn rates(&self, r: f64, t: f64, w: f64, z: f64, xi: f64, alpha: f64, beta: f64) -> Result<(f64, f64)> {
        let (s, sxi, sxixi) = self.tables.eval(xi);
        let st = State::from_riemann(self.gas, w, z, s, r, t)?;
        let c = coeffs(&st, sxi, sxixi, self.gas, self.floor)?;
        Ok(rhs(alpha, beta, &c, self.gas))
    }
}

/// Fields of a level plus gradients, interpolated at x.
struct Sample {
    w: f64,
    z: f64,
    xi: f64,
    alpha: f64,
    beta: f64,
}

fn sample(l: &Level, a: &[f64], b: &[f64], x: f64, order: u8) -> Sample {
    let st = stencil(&l.r, x, order);
    Sample { w: st.apply(&l.w), z: st.apply(&l.z), xi: st.apply(&l.xi), alpha: st.apply(a), beta: st.apply(b) }
}

fn c1_of(gas: &GasModel, w: f64, z: f64) -> f64 {
    0.5 * (w + z) - 0.25 * (gas.gamma() - 1.0) * (w - z)
}

/// Carries (α0, β0) through the levels of `sol`: α along node paths (the
/// 3-characteristics) and β from the foot of the 1-characteristic through
/// each new node. Partner values and coefficients are interpolated from the
/// solution; the time integrator matches the solver's order.
pub fn integrate_gradients(sol: &SpaceTimeSolution, alpha0: &[f64], beta0: &[f64]) -> Result<GradientField> {
    let first = &sol.levels[0];
    if alpha0.len() != first.len() || beta0.len() != first.len() {
        return Err(Error::InvalidConfig(format!(
            "initial gradients have {} / {} samples, level 0 has {}",
            alpha0.len(),
            beta0.len(),
            first.len()
        )));
    }
    let env = Env { gas: &sol.gas, tables: &sol.tables, floor: sol.cfg.sonic_floor };
    let order = sol.cfg.scheme_order;
    let mut field = GradientField { t: vec![first.t], alpha: vec![alpha0.to_vec()], beta: vec![beta0.to_vec()], complete: true };
    for k in 1..sol.levels.len() {
        let (old, new) = (&sol.levels[k - 1], &sol.levels[k]);
        let (a_old, b_old) = (&field.alpha[k - 1], &field.beta[k - 1]);
        let dt = new.t - old.t;
        let hi = old.r[old.len() - 1].max(old.right_boundary);
        let lo = old.r[0];
        let res: Result<Vec<(f64, f64)>> = (0..new.len())
            .into_par_iter()
            .map(|j| {
                let (fa, _) = env.rates(old.r[j], old.t, old.w[j], old.z[j], old.xi[j], a_old[j], b_old[j])?;
                let (rn, wn, zn, xin) = (new.r[j], new.w[j], new.z[j], new.xi[j]);
                let c1n = c1_of(env.gas, wn, zn);
                let wt = if order <= 1 { 1.0 } else { 0.5 };
                let mut x = rn - dt * c1n;
                for _ in 0..3 {
                    let p = sample(old, a_old, b_old, x.clamp(lo, hi), order);
                    x = rn - dt * ((1.0 - wt) * c1n + wt * c1_of(env.gas, p.w, p.z));
                }
                let ft = sample(old, a_old, b_old, x.clamp(lo, hi), order);
                let (_, gb) = env.rates(x.clamp(lo, hi), old.t, ft.w, ft.z, ft.xi, ft.alpha, ft.beta)?;
                let ap = a_old[j] + dt * fa;
                let bp = ft.beta + dt * gb;
                if order <= 1 {
                    return Ok((ap, bp));
                }
                let (fa_n, gb_n) = env.rates(rn, new.t, wn, zn, xin, ap, bp)?;
                Ok((a_old[j] + 0.5 * dt * (fa + fa_n), ft.beta + 0.5 * dt * (gb + gb_n)))
            })
            .collect();
        let vals = res?;
        if vals.iter().any(|(a, b)| !(a.is_finite() && b.is_finite())) {
            field.complete = false;
            break;
        }
        field.t.push(new.t);
        field.alpha.push(vals.iter().map(|v| v.0).collect());
        field.beta.push(vals.iter().map(|v| v.1).collect());
    }
    Ok(field)
}
