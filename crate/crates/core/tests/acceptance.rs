//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits nonzero if any failed. Expected values come from independent
//! routes: exact stationary profiles, the finite-volume oracle, direct
//! recounts over the stored levels and closed-form characteristic equations.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radlab_core::characteristics::{RunStatus, SpaceTimeSolution};
use radlab_core::fv::compare::{SampledSolution, COMPARE_POINTS};
use radlab_core::gas::{gradient_vars, DEFAULT_SONIC_FLOOR};
use radlab_core::lab::{self, LabConfig, Overrides, RunOutcome};
use radlab_core::numerics::linspace;
use radlab_core::riccati::{coeffs, rhs, rhs_regrouped, weighted_rhs, WeightKind, WeightedGradient};
use radlab_core::verify::{entropy_drift, required_eps};
use radlab_core::{GasModel, State};

const RAREFACTIVE: &str = include_str!("../../../configs/rarefactive.toml");
const BUMP: &str = include_str!("../../../configs/rarefaction-bump.toml");
const STEADY: &str = include_str!("../../../configs/steady.toml");
const COMPRESSION: &str = include_str!("../../../configs/compression.toml");

const FAMILIES: [(&str, &str); 3] = [("ramp", RAREFACTIVE), ("rarefaction-bump", BUMP), ("steady", STEADY)];

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

/// Preset at `n` cells for both solvers, finite-volume oracle off.
fn config(text: &str, n: usize, edits: &[(&str, f64)]) -> LabConfig {
    let mut c = LabConfig::parse(text).expect("preset parses");
    c.apply(&Overrides { resolution: Some(n), check_a4: None });
    c.fv.enabled = false;
    c.fv.n_cells = n;
    for (k, v) in edits {
        c = c.with_value(k, *v).expect("edit applies");
    }
    c
}

fn run(text: &str, n: usize, edits: &[(&str, f64)]) -> RunOutcome {
    lab::execute(&config(text, n, edits)).expect("pipeline runs")
}

fn ratios(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|p| p[0] / p[1]).collect()
}

fn completed_to(o: &RunOutcome, t0: f64) -> bool {
    matches!(o.solution.status, RunStatus::Completed { t_end, collapsed: false } if (t_end - t0).abs() <= 1e-12 * t0)
}

const C1_IDS: [&str; 9] = [
    "lemma3.z_positive",
    "lemma3.z_le_w",
    "lemma3.w_below_w_tilde",
    "remark5.entropy_bound",
    "lemma5.alpha_nonnegative",
    "lemma5.beta_nonnegative",
    "lemma5.alpha_below_c1_tilde",
    "lemma5.beta_below_c1_tilde",
    "lemma8.h_floor",
];

/// Families passing A1 to A4, full pipeline at 512 cells, plus the measured
/// ε_grid constant at 256 and 512 cells.
fn criterion_1(runs: &mut Vec<(&'static str, RunOutcome)>) -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, text) in FAMILIES {
        let start = Instant::now();
        let fine = run(text, 512, &[]);
        let secs = start.elapsed().as_secs_f64();
        let coarse = run(text, 256, &[]);
        let present = C1_IDS.iter().all(|id| fine.reports.iter().any(|r| r.check_id == *id && r.samples > 0));
        let failing: Vec<_> = fine.reports.iter().filter(|r| !r.pass).map(|r| r.check_id.as_str()).collect();
        let c = [&coarse, &fine].map(|o| required_eps(&o.reports) / o.solution.dr0());
        // both at or below the roundoff floor counts as stable
        let floor = [&coarse, &fine].map(|o| 1e-12 / o.solution.dr0());
        let stable = (c[0] <= floor[0] && c[1] <= floor[1]) || (c[1] <= 2.0 * c[0] && c[0] <= 2.0 * c[1]);
        let this = fine.assumptions.all_ok(true) && fine.rarefactive() && completed_to(&fine, fine.config.domain.t0) && present && failing.is_empty() && stable && secs <= 30.0;
        ok &= this;
        notes.push(format!("{name}: C {:.2e}->{:.2e} {secs:.1}s{}", c[0], c[1], if failing.is_empty() { String::new() } else { format!(" failing {failing:?}") }));
        runs.push((name, fine));
    }
    verdict(ok, notes.join("; "))
}

fn criterion_2() -> Verdict {
    let cfg = config(COMPRESSION, 512, &[]);
    let base = lab::execute(&cfg).expect("compression run");
    let b = base.blowup.clone().expect("blowup comparison");
    let (Some(t_obs), Some(t_star)) = (b.observed, b.t_star) else {
        return verdict(false, format!("no blowup or no T*: {b:?}"));
    };
    let bound = b.horizon.min(1.1 * t_star);
    let mut tenfold = cfg.clone();
    tenfold.solver.blowup_threshold = Some(10.0 * base.solution.threshold);
    let again = lab::execute(&tenfold).expect("rerun");
    let Some(t10) = again.solution.status.blowup_time() else {
        return verdict(false, "no blowup with the threshold x10");
    };
    let rel = (t10 - t_obs).abs() / t_obs;
    let pass = b.hypothesis_met && t_obs <= bound && rel < 0.05;
    verdict(pass, format!("alpha0 {:.1} vs N {:.1}, observed {t_obs:.5} <= {bound:.5}, x10 threshold shift {:.2}%", b.min_alpha0, b.threshold, 100.0 * rel))
}

/// Recounts the coefficient signs at every stored node of the criterion-1
/// runs with zero tolerance on the strict signs.
fn criterion_3(runs: &[(&'static str, RunOutcome)]) -> Verdict {
    let mut violations = 0usize;
    let mut samples = 0usize;
    let mut worst_excess = f64::NEG_INFINITY;
    let mut reported = true;
    for (_, o) in runs {
        let sol = &o.solution;
        let l = o.ledger.l;
        for lvl in &sol.levels {
            for j in 0..lvl.len() {
                let st = lvl.state(j, &sol.gas).expect("state");
                let (_, sxi, sxixi) = sol.tables.eval(lvl.xi[j]);
                let c = coeffs(&st, sxi, sxixi, &sol.gas, sol.cfg.sonic_floor).expect("coefficients");
                samples += 1;
                let signs = [c.a1 > 0.0, c.a2 > 0.0, c.b1 > 0.0, c.b2 > 0.0, c.a1 - c.a2 > 0.0, c.b1 - c.b2 > 0.0];
                violations += signs.iter().filter(|s| !**s).count();
                worst_excess = worst_excess.max(c.a3 - l).max(c.b3 - l);
            }
        }
        reported &= o.reports.iter().filter(|r| r.check_id.starts_with("lemma4.")).all(|r| r.pass);
    }
    let pass = violations == 0 && worst_excess <= 1e-12 && reported;
    verdict(pass, format!("{samples} samples, {violations} sign violations, max(A3, B3) - L = {worst_excess:.3e}"))
}

fn sup_gap(o: &RunOutcome) -> (f64, f64) {
    let g = &o.gradients;
    let mut sup = (0.0f64, 0.0f64);
    for k in 0..g.len().min(o.solution.levels.len()) {
        let l = &o.solution.levels[k];
        for j in 0..l.len() {
            sup.0 = sup.0.max((g.alpha[k][j] - l.alpha_fd[j]).abs());
            sup.1 = sup.1.max((g.beta[k][j] - l.beta_fd[j]).abs());
        }
    }
    sup
}

fn criterion_4() -> Verdict {
    let gaps: Vec<(f64, f64)> = [64, 128, 256, 512].iter().map(|&n| sup_gap(&run(RAREFACTIVE, n, &[]))).collect();
    let ra = ratios(&gaps.iter().map(|g| g.0).collect::<Vec<_>>());
    let rb = ratios(&gaps.iter().map(|g| g.1).collect::<Vec<_>>());
    let pass = ra.iter().chain(&rb).all(|&q| q >= 1.8);
    verdict(pass, format!("alpha ratios {}, beta ratios {}", fmt_list(&ra), fmt_list(&rb)))
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>().join("/")
}

/// L∞ distance from the stationary profile over `pts`, in ρ, u and S.
fn steady_drift(o: &RunOutcome, sol: &dyn SampledSolution, t: f64, pts: &[f64]) -> f64 {
    let s0 = o.profile.samples.s[0];
    pts.iter()
        .map(|&r| {
            let e = o.profile.eval(r).expect("profile");
            let (rho, u, s) = sol.primitive_at(t, r).expect("sample");
            (rho - e.rho).abs().max((u - e.u).abs()).max((s - s0).abs())
        })
        .fold(0.0, f64::max)
}

fn criterion_5() -> Verdict {
    let exact = run(STEADY, 512, &[]);
    let grad = exact.alpha0.iter().chain(&exact.beta0).fold(0.0f64, |m, x| m.max(x.abs()));
    let mut drift = Vec::new();
    for n in [128, 256, 512] {
        let o = run(STEADY, n, &[]);
        let t0 = o.config.domain.t0;
        if !completed_to(&o, t0) {
            return verdict(false, format!("steady run stopped: {:?}", o.solution.status));
        }
        let (a, b) = o.solution.trusted_interval(t0).expect("interval");
        // the tabulated profile ends at b2
        let pts = linspace(a, b.min(o.profile.b2()), COMPARE_POINTS);
        let fv = lab::fv_oracle_run(&o.profile, &o.config.fv.fv_config(), t0).expect("fv run");
        let dr2 = o.solution.dr0().powi(2);
        drift.push((steady_drift(&o, &o.solution, t0, &pts) / dr2, steady_drift(&o, &fv, t0, &pts) / dr2));
    }
    // C_k = drift / Δr² may not grow by more than 25% per halving
    let bounded = |f: fn(&(f64, f64)) -> f64| drift.windows(2).all(|p| f(&p[1]) <= 1.25 * f(&p[0]));
    let pass = grad <= 1e-8 && bounded(|d| d.0) && bounded(|d| d.1);
    verdict(
        pass,
        format!(
            "max |alpha0|, |beta0| = {grad:.1e}; drift/dr^2 char {}, fv {}",
            drift.iter().map(|d| format!("{:.3e}", d.0)).collect::<Vec<_>>().join("/"),
            drift.iter().map(|d| format!("{:.3e}", d.1)).collect::<Vec<_>>().join("/"),
        ),
    )
}

fn discrepancies(text: &str, ns: &[usize], edits: &[(&str, f64)]) -> Vec<f64> {
    ns.iter()
        .map(|&n| {
            let mut c = config(text, n, edits);
            c.fv.enabled = true;
            lab::execute(&c).expect("pipeline runs").fv.expect("fv comparison").total()
        })
        .collect()
}

fn criterion_6() -> Verdict {
    let rare = discrepancies(RAREFACTIVE, &[64, 128, 256, 512], &[]);
    // stop well before the observed blowup near t = 3.4e-3
    let comp = discrepancies(COMPRESSION, &[256, 512, 1024], &[("domain.t0", 0.0015)]);
    let (rr, rc) = (ratios(&rare), ratios(&comp));
    let pass = rr.iter().chain(&rc).all(|&q| q >= 1.5);
    verdict(pass, format!("rarefactive ratios {}, compression ratios {}", fmt_list(&rr), fmt_list(&rc)))
}

/// Entropy with visible curvature in ξ; the S̃_ξ drift comes only from
/// transporting ξ.
const CURVED_ENTROPY: [(&str, f64); 3] = [("solver.scheme_order", 1.0), ("family.s_slope", 0.2), ("family.s_curv", 0.5)];

fn drift_of(sol: &SpaceTimeSolution) -> f64 {
    // the same 32 starting radii at every resolution
    let n = sol.levels[0].len() - 1;
    entropy_drift(sol, n / 32).expect("trace").0
}

fn criterion_7() -> Verdict {
    let drift: Vec<f64> = [64, 128, 256, 512].iter().map(|&n| drift_of(&run(RAREFACTIVE, n, &CURVED_ENTROPY).solution)).collect();
    let q = ratios(&drift);
    let flat = run(RAREFACTIVE, 128, &[("solver.scheme_order", 1.0), ("family.s_slope", 0.0), ("family.s_curv", 0.0)]);
    let zero = drift_of(&flat.solution);
    let pass = q.iter().all(|&x| (1.6..=2.4).contains(&x)) && zero == 0.0;
    verdict(pass, format!("drift {}, ratios {}, constant S drift {zero:e}", drift.iter().map(|d| format!("{d:.3e}")).collect::<Vec<_>>().join("/"), fmt_list(&q)))
}

/// Random in-regime point with arbitrary spatial derivatives.
struct Point {
    gas: GasModel,
    s: State,
    wr: f64,
    zr: f64,
    sr: f64,
    sxixi: f64,
}

fn random_point(rng: &mut ChaCha8Rng) -> Point {
    let gas = GasModel::new(rng.gen_range(1.05..2.95), rng.gen_range(0.3..3.0), rng.gen_range(0.3..2.0), rng.gen_range(1..=2)).unwrap();
    let (rho, s, r) = (rng.gen_range(0.2..5.0), rng.gen_range(-0.5..0.5), rng.gen_range(0.5..4.0));
    let u = rng.gen_range(1.05..4.0) * gas.sound_speed(rho, s);
    Point {
        s: State::from_primitive(&gas, rho, u, s, r, 0.0).unwrap(),
        gas,
        wr: rng.gen_range(-5.0..5.0),
        zr: rng.gen_range(-5.0..5.0),
        sr: rng.gen_range(-1.0..1.0),
        sxixi: rng.gen_range(-1.0..1.0),
    }
}

/// (∂1 h, ∂3 h) from the transport equations of w and z along their own
/// characteristics, with h = (γ−1)(w − z)/4.
fn dh_from_transport(p: &Point) -> (f64, f64) {
    let (g, s, m) = (p.gas.gamma(), &p.s, p.gas.mf());
    let entropy = s.r * p.sr * (s.w - s.z).powi(2) / (2.0 * p.gas.c_v() * g);
    let geo = m * (s.w * s.w - s.z * s.z);
    let d3w = (g - 1.0) / (8.0 * s.r) * (entropy - geo);
    let d1z = (g - 1.0) / (8.0 * s.r) * (entropy + geo);
    let k = (g - 1.0) / 4.0;
    (k * (d3w - d1z - 2.0 * s.h * p.wr), k * (d3w - d1z - 2.0 * s.h * p.zr))
}

fn criterion_8() -> Verdict {
    const POINTS: usize = 10_000;
    const TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let kinds = [WeightKind::Plain, WeightKind::Hat { m_const: 2.5 }, WeightKind::Tilde];
    let (mut regroup, mut chain, mut lambda) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..POINTS {
        let p = random_point(&mut rng);
        let (a, b) = (rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
        let sxi = p.sr / (p.gas.rm(p.s.r) * p.s.rho);
        let c = coeffs(&p.s, sxi, p.sxixi, &p.gas, DEFAULT_SONIC_FLOOR).unwrap();
        let (x, y) = rhs(a, b, &c, &p.gas);
        let (x2, y2) = rhs_regrouped(a, b, &c, &p.gas);
        let scale = 1.0 + a * a + b * b + (c.a1.abs() + c.a2.abs() + c.b1.abs() + c.b2.abs()) * (a.abs() + b.abs()) + c.a3.abs() + c.b3.abs();
        regroup = regroup.max((x - x2).abs().max((y - y2).abs()) / scale);

        // weighted derivative against d(f α) = f dα − λ f α dh / h − rate f α dt
        let kind = kinds[i % 3];
        let t = rng.gen_range(0.0..0.5);
        let d = gradient_vars(&p.s, p.wr, p.zr, p.sr, &p.gas, DEFAULT_SONIC_FLOOR).unwrap();
        let wg = WeightedGradient::new(kind, d.alpha, d.beta, p.s.h, t, &p.gas);
        let (wa, wb) = weighted_rhs(&wg, &p.s, &c, sxi, &p.gas, DEFAULT_SONIC_FLOOR).unwrap();
        let (ra, rb) = rhs(d.alpha, d.beta, &c, &p.gas);
        let (dh1, dh3) = dh_from_transport(&p);
        let lam = wg.lambda;
        let rate = match kind {
            WeightKind::Hat { m_const } => m_const,
            _ => 0.0,
        };
        let f = p.s.h.powf(-lam) * (-rate * t).exp();
        let ea = f * (ra - lam / p.s.h * dh3 * d.alpha) - rate * wg.value_alpha;
        let eb = f * (rb - lam / p.s.h * dh1 * d.beta) - rate * wg.value_beta;
        let terms = 1.0
            + d.alpha.powi(2)
            + d.beta.powi(2)
            + ra.abs()
            + rb.abs()
            + (c.a1.abs() + c.a2.abs() + c.b1.abs() + c.b2.abs() + lam * (dh1.abs() + dh3.abs()) / p.s.h + rate) * (d.alpha.abs() + d.beta.abs())
            + c.a3.abs()
            + c.b3.abs();
        chain = chain.max((wa - ea).abs().max((wb - eb).abs()) / (f * terms));

        let g = p.gas.gamma();
        let lam_hat = 2.0 / (g - 1.0);
        lambda = lambda.max(((g - 1.0) * lam_hat / 2.0 - (3.0 - g) / 4.0 - (g + 1.0) / 4.0).abs());
    }
    let pass = regroup <= TOL && chain <= TOL && lambda <= TOL;
    verdict(pass, format!("{POINTS} points: regrouping {regroup:.1e}, weighted chain rule {chain:.1e}, lambda identity {lambda:.1e}"))
}

fn main() -> ExitCode {
    let mut runs = Vec::new();
    let started = Instant::now();
    let results = [
        criterion_1(&mut runs),
        criterion_2(),
        criterion_3(&runs),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
    ];
    for (i, v) in results.iter().enumerate() {
        println!("criterion {}: {} {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    let failed = results.iter().filter(|v| !v.pass).count();
    println!("acceptance: {} of {} passed in {:.0}s", results.len() - failed, results.len(), started.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
