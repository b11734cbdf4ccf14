//! Riccati coefficients and right-hand sides for (α, β), weighted variants,
//! and the blowup threshold and time bound.

pub mod integrate;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasModel, State};
use crate::initial::ledger::{tilde_exponent, ConstantsLedger};

pub use integrate::{integrate_gradients, GradientField};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiccatiCoeffs {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
}

/// All six coefficients at one point, sharing c1, c3, P = r^m ρ S̃_ξ and
/// Q = r^{2m} ρ² S̃_ξξ.
pub fn coeffs(s: &State, sxi: f64, sxixi: f64, gas: &GasModel, floor: f64) -> Result<RiccatiCoeffs> {
    if !(s.r > 0.0) {
        return Err(Error::NonPositiveRadius { r: s.r });
    }
    let (c1, c3) = s.check_sonic(floor)?;
    let (g, cv, m, r, u, h) = (gas.gamma(), gas.c_v(), gas.mf(), s.r, s.u, s.h);
    let rm_rho = gas.rm(r) * s.rho;
    let p = rm_rho * sxi;
    let q = rm_rho * rm_rho * sxixi;
    let gq = 0.5 * (g - 1.0) * u * u - h * h;
    let (u2, h2) = (u * u, h * h);
    let geo_b = m * c3 * gq / (2.0 * r * c1 * c1);
    let geo_a = m * c1 * gq / (2.0 * r * c3 * c3);
    let cross = (3.0 - g) * m * u2 * h2 / r;
    let gcv4 = 4.0 * g * cv;
    let stiff = u * u2 * h2 / (g * cv * cv * r) * (m * cv * g - r * p) * p;

    let b1 = geo_b + cross / (c1 * c1 * c3) - h * (3.0 * g * u2 + (g + 5.0) * u * h - h2) / (gcv4 * c1 * c3) * p;
    let b2 = geo_b - h * (3.0 * g * u2 - (g + 3.0) * u * h - 3.0 * h2) / (gcv4 * c1 * c1) * p;
    let b3 = stiff / (c1 * c1 * c3) - u * h2 / (g * cv * c1) * q;
    let a1 = geo_a + cross / (c1 * c3 * c3) + h * (3.0 * g * u2 - (g + 5.0) * u * h - h2) / (gcv4 * c1 * c3) * p;
    let a2 = geo_a + h * (3.0 * g * u2 + (g + 3.0) * u * h - 3.0 * h2) / (gcv4 * c3 * c3) * p;
    let a3 = stiff / (c1 * c3 * c3) - u * h2 / (g * cv * c3) * q;
    Ok(RiccatiCoeffs { a1, a2, a3, b1, b2, b3 })
}

/// (∂3 α, ∂1 β).
pub fn rhs(alpha: f64, beta: f64, c: &RiccatiCoeffs, gas: &GasModel) -> (f64, f64) {
    let g = gas.gamma();
    let q = -(g + 1.0) / 4.0;
    let x = -(3.0 - g) / 4.0 * alpha * beta;
    (
        q * alpha * alpha + x - c.a1 * alpha + c.a2 * beta + c.a3,
        q * beta * beta + x - c.b1 * beta + c.b2 * alpha + c.b3,
    )
}

/// The same right-hand sides grouped around the differences A1 − A2,
/// B1 − B2 and α − β.
pub fn rhs_regrouped(alpha: f64, beta: f64, c: &RiccatiCoeffs, gas: &GasModel) -> (f64, f64) {
    let g = gas.gamma();
    let q = -(g + 1.0) / 4.0;
    let x = -(3.0 - g) / 4.0 * alpha * beta;
    (
        q * alpha * alpha + x - (c.a1 - c.a2) * alpha - c.a2 * (alpha - beta) + c.a3,
        q * beta * beta + x - (c.b1 - c.b2) * beta - c.b2 * (beta - alpha) + c.b3,
    )
}

/// (∂1 h, ∂2 h, ∂3 h) along the three characteristic directions.
pub fn dh_directional(s: &State, alpha: f64, beta: f64, sxi: f64, gas: &GasModel) -> (f64, f64, f64) {
    let (g, cv, m, r, u, h) = (gas.gamma(), gas.c_v(), gas.mf(), s.r, s.u, s.h);
    let (c1, c3) = (s.c1(), s.c3());
    let p = gas.rm(r) * s.rho * sxi;
    let d1 = -(g - 1.0) / 2.0 * h * alpha - h * h * (g * u + h) / (2.0 * g * cv * c3) * p - (g - 1.0) * m * u * u * h / (2.0 * r * c3);
    let d2 = -(g - 1.0) / 4.0 * h * (alpha + beta) + (g - 1.0) * u * h * h * h / (2.0 * g * cv * c1 * c3) * p
        - (g - 1.0) * m * u * u * u * h / (2.0 * r * c1 * c3);
    let d3 = -(g - 1.0) / 2.0 * h * beta + h * h * (g * u - h) / (2.0 * g * cv * c1) * p - (g - 1.0) * m * u * u * h / (2.0 * r * c1);
    (d1, d2, d3)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum WeightKind {
    Plain,
    /// λ = 2/(γ−1) with an extra factor e^{−M t}.
    Hat { m_const: f64 },
    /// λ = (3−γ)/(2(γ−1)).
    Tilde,
}

impl WeightKind {
    pub fn lambda(&self, gas: &GasModel) -> f64 {
        match self {
            WeightKind::Plain => 0.0,
            WeightKind::Hat { .. } => gas.riemann_factor(),
            WeightKind::Tilde => tilde_exponent(gas.gamma()),
        }
    }

    fn rate(&self) -> f64 {
        match self {
            WeightKind::Hat { m_const } => *m_const,
            _ => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedGradient {
    pub kind: WeightKind,
    pub lambda: f64,
    pub t: f64,
    pub value_alpha: f64,
    pub value_beta: f64,
}

impl WeightedGradient {
    pub fn new(kind: WeightKind, alpha: f64, beta: f64, h: f64, t: f64, gas: &GasModel) -> Self {
        let lambda = kind.lambda(gas);
        let f = h.powf(-lambda) * (-kind.rate() * t).exp();
        WeightedGradient { kind, lambda, t, value_alpha: f * alpha, value_beta: f * beta }
    }

    /// Back to (α, β).
    pub fn unweighted(&self, h: f64) -> (f64, f64) {
        let f = h.powf(self.lambda) * (self.kind.rate() * self.t).exp();
        (f * self.value_alpha, f * self.value_beta)
    }
}

/// (∂3, ∂1) of the weighted pair, written directly in weighted variables.
pub fn weighted_rhs(wg: &WeightedGradient, s: &State, c: &RiccatiCoeffs, sxi: f64, gas: &GasModel, floor: f64) -> Result<(f64, f64)> {
    let (c1, c3) = s.check_sonic(floor)?;
    let (g, cv, m, r, u, h) = (gas.gamma(), gas.c_v(), gas.mf(), s.r, s.u, s.h);
    let lam = wg.lambda;
    let p = gas.rm(r) * s.rho * sxi;
    let mt = wg.kind.rate() * wg.t;
    let hl = h.powf(lam) * mt.exp();
    let hml = h.powf(-lam) * (-mt).exp();
    let cross = (g - 1.0) / 2.0 * lam - (3.0 - g) / 4.0;
    let (x, y) = (wg.value_alpha, wg.value_beta);
    let rate = wg.kind.rate();
    let lin_a = -c.a1 - h * (g * u - h) / (2.0 * g * cv * c1) * p * lam + (g - 1.0) * m * u * u / (2.0 * r * c1) * lam - rate;
    let lin_b = -c.b1 + h * (g * u + h) / (2.0 * g * cv * c3) * p * lam + (g - 1.0) * m * u * u / (2.0 * r * c3) * lam - rate;
    let da = -(g + 1.0) / 4.0 * hl * x * x + cross * hl * x * y + lin_a * x + c.a2 * y + hml * c.a3;
    let db = -(g + 1.0) / 4.0 * hl * y * y + cross * hl * x * y + lin_b * y + c.b2 * x + hml * c.b3;
    Ok((da, db))
}

/// 𝒩(T) for 0 < T ≤ T0.
pub fn blowup_threshold(t: f64, ledger: &ConstantsLedger, gas: &GasModel) -> Result<f64> {
    if !(t > 0.0 && t <= ledger.t0 * (1.0 + 1e-12)) {
        return Err(Error::InvalidHorizon { t, t0: ledger.t0 });
    }
    let g = gas.gamma();
    let e = tilde_exponent(g);
    let first = 8.0 / ((g + 1.0) * t) * (ledger.h_d / ledger.h_floor).powf(e);
    let second = ledger.h_d.powf(e) * ledger.n1;
    Ok(first.max(second))
}

/// T* from a negative tilde-weighted initial value.
pub fn blowup_time_bound(value: f64, ledger: &ConstantsLedger, gas: &GasModel) -> Result<f64> {
    if !(value < 0.0) {
        return Err(Error::NonNegativeInput { value });
    }
    let g = gas.gamma();
    Ok(8.0 * ledger.h_floor.powf(-tilde_exponent(g)) / (-(g + 1.0) * value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::{gradient_vars, DEFAULT_SONIC_FLOOR};
    use crate::initial::family::Family;
    use crate::initial::ledger::derive_constants;
    use crate::initial::profile::{build_profile, DerivativeMode, FamilyDescriptor};
    use proptest::prelude::*;

    const F: f64 = DEFAULT_SONIC_FLOOR;

    fn ref_point() -> (GasModel, State) {
        let g = GasModel::new(2.0, 0.5, 1.0, 1).unwrap();
        (g, State::from_primitive(&g, 1.0, 3.0, 0.0, 1.0, 0.0).unwrap())
    }

    #[test]
    fn isentropic_examples() {
        let (g, s) = ref_point();
        let c = coeffs(&s, 0.0, 0.0, &g, F).unwrap();
        assert_eq!(c.a3, 0.0);
        assert_eq!(c.b3, 0.0);
        assert!((c.b2 - 1.75).abs() < 1e-14);
        assert!((c.b1 - c.b2 - 0.5625).abs() < 1e-14);
        assert_eq!(rhs(0.0, 0.0, &c, &g), (c.a3, c.b3));
    }

    #[test]
    fn sonic_state_is_an_error() {
        let g = GasModel::new(2.0, 0.5, 1.0, 1).unwrap();
        let s = State::from_riemann(&g, 3.0, -1.0, 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(coeffs(&s, 0.0, 0.0, &g, F), Err(Error::SonicDegeneracy { .. })));
        let bad = State { h: -0.5, ..s };
        assert!(matches!(coeffs(&bad, 0.0, 0.0, &g, F), Err(Error::SonicDegeneracy { .. })));
    }

    #[test]
    fn lambda_cross_coefficient() {
        for g in [1.2f64, 1.4, 5.0 / 3.0, 2.0, 2.7] {
            let lam = 2.0 / (g - 1.0);
            assert!(((g - 1.0) / 2.0 * lam - (3.0 - g) / 4.0 - (g + 1.0) / 4.0).abs() < 1e-14);
        }
    }

    #[test]
    fn threshold_and_bound() {
        let g = GasModel::new(2.0, 0.5, 1.0, 1).unwrap();
        let d = FamilyDescriptor {
            family: Family::Constant { rho: 1.0, u: 3.0, s: 0.0 },
            b1: 1.0,
            b2: 2.0,
            resolution: 32,
            derivatives: DerivativeMode::Analytic,
        };
        let p = build_profile(&d, &g).unwrap();
        let mut l = derive_constants(&p, &g, 0.1).unwrap();
        let mut prev = f64::INFINITY;
        for k in 1..=10 {
            let n = blowup_threshold(0.01 * k as f64, &l, &g).unwrap();
            assert!(n <= prev);
            prev = n;
        }
        assert!(blowup_threshold(0.0, &l, &g).is_err());
        assert!(blowup_threshold(0.2, &l, &g).is_err());
        // straight-line re-evaluation at T0; γ = 2 so e = 1/2
        let e = 0.5;
        let n = (8.0 / (3.0 * 0.1) * (l.h_d / l.h_floor).powf(e)).max(l.h_d.powf(e) * l.n1);
        assert!((blowup_threshold(0.1, &l, &g).unwrap() - n).abs() < 1e-12 * n);

        // no density decay with the first branch active gives 8/((γ+1)T)
        l.h_floor = l.h_d;
        l.n1 = 0.0;
        assert!((blowup_threshold(0.05, &l, &g).unwrap() - 8.0 / (3.0 * 0.05)).abs() < 1e-12);

        let t = 0.07;
        let v = -8.0 * l.h_floor.powf(-e) / (3.0 * t);
        assert!((blowup_time_bound(v, &l, &g).unwrap() - t).abs() < 1e-14);
        assert!((blowup_time_bound(2.0 * v, &l, &g).unwrap() - t / 2.0).abs() < 1e-14);
        assert!(matches!(blowup_time_bound(0.0, &l, &g), Err(Error::NonNegativeInput { .. })));
    }

    #[test]
    fn weighted_round_trip() {
        let (g, s) = ref_point();
        for kind in [WeightKind::Plain, WeightKind::Hat { m_const: 3.0 }, WeightKind::Tilde] {
            let w = WeightedGradient::new(kind, 0.7, -1.3, s.h * 1.3, 0.2, &g);
            let (a, b) = w.unweighted(s.h * 1.3);
            assert!((a - 0.7).abs() < 1e-14 && (b + 1.3).abs() < 1e-14);
        }
    }

    /// Random in-regime point with arbitrary spatial derivatives.
    #[derive(Debug, Clone)]
    struct Pt {
        gas: GasModel,
        s: State,
        wr: f64,
        zr: f64,
        sr: f64,
        sxixi: f64,
    }

    fn pt() -> impl Strategy<Value = Pt> {
        (1.05f64..2.95, 0.3f64..3.0, 0.3f64..2.0, 1u32..=2, 0.2f64..5.0, 1.05f64..4.0, -0.5f64..0.5, 0.5f64..4.0)
            .prop_flat_map(|(g, k, cv, m, rho, mach, s, r)| {
                let gas = GasModel::new(g, k, cv, m).unwrap();
                let h = gas.sound_speed(rho, s);
                let st = State::from_primitive(&gas, rho, mach * h, s, r, 0.0).unwrap();
                (Just(gas), Just(st), -5.0f64..5.0, -5.0f64..5.0, -1.0f64..1.0, -1.0f64..1.0)
            })
            .prop_map(|(gas, s, wr, zr, sr, sxixi)| Pt { gas, s, wr, zr, sr, sxixi })
    }

    /// (∂1 h, ∂3 h) from the characteristic equations of w and z, without
    /// going through the closed forms for ∂h.
    fn dh_oracle(p: &Pt) -> (f64, f64) {
        let (g, s) = (p.gas.gamma(), &p.s);
        let m = p.gas.mf();
        let rp = s.r * p.sr; // r^{m+1} ρ S̃_ξ with S̃_ξ = S_r/(r^m ρ)
        let base = rp * (s.w - s.z).powi(2) / (2.0 * p.gas.c_v() * g);
        let d3w = (g - 1.0) / (8.0 * s.r) * (base - m * (s.w * s.w - s.z * s.z));
        let d1z = (g - 1.0) / (8.0 * s.r) * (base + m * (s.w * s.w - s.z * s.z));
        let k = (g - 1.0) / 4.0;
        (k * (d3w - d1z - 2.0 * s.h * p.wr), k * (d3w - d1z - 2.0 * s.h * p.zr))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn regrouping_identity(p in pt(), a in -50.0f64..50.0, b in -50.0f64..50.0) {
            let sxi = p.sr / (p.gas.rm(p.s.r) * p.s.rho);
            let c = coeffs(&p.s, sxi, p.sxixi, &p.gas, F).unwrap();
            let (x, y) = rhs(a, b, &c, &p.gas);
            let (x2, y2) = rhs_regrouped(a, b, &c, &p.gas);
            let scale = 1.0 + a * a + b * b + (c.a1.abs() + c.a2.abs() + c.b1.abs() + c.b2.abs()) * (a.abs() + b.abs()) + c.a3.abs() + c.b3.abs();
            prop_assert!((x - x2).abs() <= 1e-12 * scale);
            prop_assert!((y - y2).abs() <= 1e-12 * scale);
        }

        #[test]
        fn closed_form_dh_matches_characteristic_equations(p in pt()) {
            let d = gradient_vars(&p.s, p.wr, p.zr, p.sr, &p.gas, F).unwrap();
            let sxi = p.sr / (p.gas.rm(p.s.r) * p.s.rho);
            let (d1, _, d3) = dh_directional(&p.s, d.alpha, d.beta, sxi, &p.gas);
            let (o1, o3) = dh_oracle(&p);
            let scale = 1.0 + p.s.h * (p.wr.abs() + p.zr.abs() + d.alpha.abs() + d.beta.abs()) + o1.abs() + o3.abs();
            prop_assert!((d1 - o1).abs() <= 1e-11 * scale, "{d1} vs {o1}");
            prop_assert!((d3 - o3).abs() <= 1e-11 * scale, "{d3} vs {o3}");
        }

        #[test]
        fn weighted_rhs_is_the_chain_rule(p in pt(), t in 0.0f64..0.5, kind_ix in 0usize..3) {
            let kind = [WeightKind::Plain, WeightKind::Hat { m_const: 2.5 }, WeightKind::Tilde][kind_ix];
            let d = gradient_vars(&p.s, p.wr, p.zr, p.sr, &p.gas, F).unwrap();
            let sxi = p.sr / (p.gas.rm(p.s.r) * p.s.rho);
            let c = coeffs(&p.s, sxi, p.sxixi, &p.gas, F).unwrap();
            let wg = WeightedGradient::new(kind, d.alpha, d.beta, p.s.h, t, &p.gas);
            let (wa, wb) = weighted_rhs(&wg, &p.s, &c, sxi, &p.gas, F).unwrap();
            let (ra, rb) = rhs(d.alpha, d.beta, &c, &p.gas);
            let (o1, o3) = dh_oracle(&p);
            let lam = wg.lambda;
            let rate = match kind { WeightKind::Hat { m_const } => m_const, _ => 0.0 };
            let f = p.s.h.powf(-lam) * (-rate * t).exp();
            let ea = f * (ra - lam / p.s.h * o3 * d.alpha) - rate * wg.value_alpha;
            let eb = f * (rb - lam / p.s.h * o1 * d.beta) - rate * wg.value_beta;
            let scale = f * (1.0 + d.alpha.powi(2) + d.beta.powi(2) + ra.abs() + rb.abs()
                + (c.a1.abs() + c.a2.abs() + c.b1.abs() + c.b2.abs() + lam * (o1.abs() + o3.abs()) / p.s.h + rate) * (d.alpha.abs() + d.beta.abs())
                + c.a3.abs() + c.b3.abs());
            prop_assert!((wa - ea).abs() <= 1e-11 * scale, "{wa} vs {ea}");
            prop_assert!((wb - eb).abs() <= 1e-11 * scale, "{wb} vs {eb}");
            if kind == WeightKind::Plain {
                prop_assert!((wa - ra).abs() <= 1e-12 * scale);
                prop_assert!((wb - rb).abs() <= 1e-12 * scale);
            }
        }
    }
}
