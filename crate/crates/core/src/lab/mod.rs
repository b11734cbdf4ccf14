//! Run orchestration: the full pipeline for one config, assumption audits,
//! parameter sweeps and the artifacts they leave behind.

pub mod config;

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::characteristics::{domain_geometry, initial_level, solve_domain, BoundarySpeeds, DomainGeometry, RunStatus, SpaceTimeSolution};
use crate::error::{Error, Result};
use crate::fv::{compare_solutions, fv_run, Discrepancy, FvBoundaries, FvConfig, FvSolution};
use crate::initial::{build_profile, Source, check_assumptions, derive_constants, AssumptionReport, ConstantsLedger, InitialProfile};
use crate::io;
use crate::riccati::{integrate_gradients, GradientField};
use crate::verify::{self, BlowupComparison, Classification, Tolerances, ViolationReport};

pub use config::{CheckGroup, LabConfig, Overrides};

pub const SOLUTION_CSV: &str = "solution.csv";
pub const GRADIENTS_CSV: &str = "gradients.csv";
pub const REPORT_CSV: &str = "report.csv";
pub const MANIFEST: &str = "manifest.txt";
pub const PHASE_CSV: &str = "phase.csv";
pub const PROFILE_CSV: &str = "profile.csv";

/// Everything one pipeline run produced.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Config with every default made explicit.
    pub config: LabConfig,
    pub profile: InitialProfile,
    pub ledger: ConstantsLedger,
    pub assumptions: AssumptionReport,
    pub solution: SpaceTimeSolution,
    pub alpha0: Vec<f64>,
    pub beta0: Vec<f64>,
    pub gradients: GradientField,
    pub geometry: DomainGeometry,
    pub tolerances: Tolerances,
    pub reports: Vec<ViolationReport>,
    pub blowup: Option<BlowupComparison>,
    pub fv: Option<Discrepancy>,
    pub timings: Vec<(&'static str, f64)>,
}

impl RunOutcome {
    pub fn checks_pass(&self) -> bool {
        let classified_ok = !self.config.checks.enabled.contains(&CheckGroup::Blowup)
            || self.blowup.as_ref().is_none_or(|b| b.classification != Classification::CounterexampleCandidate);
        classified_ok && self.reports.iter().all(|r| r.pass)
    }

    pub fn exit_code(&self) -> u8 {
        if self.checks_pass() {
            0
        } else {
            2
        }
    }

    /// Whether the rarefactive bounds were applied.
    pub fn rarefactive(&self) -> bool {
        self.config.checks.check_a4 && self.assumptions.all_ok(true)
    }
}

fn timed<T>(timings: &mut Vec<(&'static str, f64)>, name: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let t = Instant::now();
    let v = f()?;
    timings.push((name, t.elapsed().as_secs_f64()));
    Ok(v)
}

/// build_profile → derive_constants → check_assumptions → solve_domain →
/// integrate_gradients → verifier checks → detect_blowup.
pub fn execute(cfg: &LabConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut config = cfg.clone();
    let gas = config.gas;
    let t0 = config.domain.t0;
    let mut timings = Vec::new();
    let profile = timed(&mut timings, "build_profile", || build_profile(&config.descriptor(), &gas))?;
    let ledger = timed(&mut timings, "derive_constants", || derive_constants(&profile, &gas, t0))?;
    let assumptions = timed(&mut timings, "check_assumptions", || check_assumptions(&profile, &gas, &ledger))?;
    let solution = timed(&mut timings, "solve_domain", || solve_domain(&profile, &gas, &config.solver, t0))?;
    config.solver.blowup_threshold = Some(solution.threshold);
    config.solver.stride = Some(config.solver.resolved_stride());
    config.theorem.horizon = Some(config.horizon());

    let l0 = &solution.levels[0];
    let (_, alpha0, beta0) = initial_level(&profile, config.solver.n_cells, config.solver.sonic_floor)?;
    let gradients = timed(&mut timings, "integrate_gradients", || integrate_gradients(&solution, &alpha0, &beta0))?;
    let geometry = domain_geometry(&profile, BoundarySpeeds::Solution(&solution), t0);

    let tolerances = Tolerances {
        eps_grid: config.checks.grid_constant * solution.dr0(),
        drift_const: config.checks.drift_const,
        roundoff: config.checks.roundoff,
    };
    let rarefactive = config.checks.check_a4 && assumptions.all_ok(true);
    let enabled = |g: CheckGroup| config.checks.enabled.contains(&g);
    let mut reports = Vec::new();
    let t = Instant::now();
    if enabled(CheckGroup::InvariantDomain) {
        reports.extend(verify::check_invariant_domain(&solution, &ledger, &tolerances));
    }
    if enabled(CheckGroup::CoefficientSigns) {
        reports.extend(verify::check_coefficient_signs(&solution, &ledger, assumptions.a3_ok)?);
    }
    if enabled(CheckGroup::GradientBounds) {
        reports.extend(verify::check_gradient_bounds(&solution, &gradients, &ledger, rarefactive, &tolerances));
    }
    if enabled(CheckGroup::DensityFloor) {
        reports.push(verify::check_density_floor(&solution, &ledger, rarefactive, &tolerances));
    }
    if enabled(CheckGroup::EntropyTransport) {
        reports.extend(verify::check_entropy_transport(&solution, &ledger, assumptions.a2_ok, assumptions.a3_ok, &tolerances)?);
    }
    timings.push(("verify", t.elapsed().as_secs_f64()));
    let blowup = Some(verify::detect_blowup(l0, &alpha0, &beta0, &gas, &ledger, &assumptions, config.horizon(), &solution.status)?);

    let fv = if config.fv.enabled {
        let t = Instant::now();
        let t_cmp = match solution.status {
            RunStatus::Completed { t_end, .. } => t_end,
            _ => solution.last().t,
        };
        let fvs = fv_oracle_run(&profile, &config.fv.fv_config(), t_cmp)?;
        let d = compare_solutions(&solution, &fvs, t_cmp)?;
        timings.push(("fv_oracle", t.elapsed().as_secs_f64()));
        Some(d)
    } else {
        None
    };
    Ok(RunOutcome {
        config,
        profile,
        ledger,
        assumptions,
        solution,
        alpha0,
        beta0,
        gradients,
        geometry,
        tolerances,
        reports,
        blowup,
        fv,
        timings,
    })
}

/// Finite-volume run covering the characteristic domain up to `t_end`:
/// [b1, b2] is extended to the right by the distance the fastest initial
/// 3-characteristic travels, keeping the cell width of `cfg.n_cells` cells
/// on [b1, b2]. Analytic families are evaluated beyond b2; tabulated ones
/// are held constant there.
pub fn fv_oracle_run(profile: &InitialProfile, cfg: &FvConfig, t_end: f64) -> Result<FvSolution> {
    let gas = profile.gas;
    let (b1, b2) = (profile.b1(), profile.b2());
    let s = &profile.samples;
    let c3 = (0..s.len()).map(|i| s.u[i] + gas.sound_speed(s.rho[i], s.s[i])).fold(0.0, f64::max);
    let dr = (b2 - b1) / cfg.n_cells as f64;
    let extra = ((1.1 * c3 * t_end + 4.0 * dr) / dr).ceil() as usize;
    let b = b2 + extra as f64 * dr;
    let analytic = matches!(profile.source, Source::Analytic { .. });
    let init = |r: f64| {
        let p = if r <= b2 || analytic { profile.eval(r)? } else { profile.eval(b2)? };
        Ok((p.rho, p.u, p.s))
    };
    let cfg = FvConfig { n_cells: cfg.n_cells + extra, ..cfg.clone() };
    fv_run(init, b1, b, &gas, &cfg, &FvBoundaries::default(), t_end, &[])
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?))
}

#[derive(Serialize)]
struct ManifestHead {
    version: &'static str,
    exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct StatusEntry {
    #[serde(flatten)]
    status: RunStatus,
    steps: usize,
    levels: usize,
    threshold: f64,
    dr: f64,
    t_m: f64,
    shape: String,
    gradients_complete: bool,
}

#[derive(Serialize)]
struct CheckEntry {
    pass: bool,
    margin: f64,
    r: f64,
    t: f64,
    tolerance: f64,
    samples: usize,
}

#[derive(Serialize)]
struct AssumptionEntry {
    a1_ok: bool,
    a2_ok: bool,
    a3_ok: bool,
    a4_ok: bool,
    witnesses: usize,
}

fn to_value<T: Serialize>(v: &T) -> Result<toml::Value> {
    toml::Value::try_from(v).map_err(|e| Error::Io(format!("manifest: {e}")))
}

/// The manifest as a TOML table: `[manifest]`, `[config]`, `[ledger]`,
/// `[assumptions]`, `[status]`, `[checks.<id>]`, `[blowup]`, `[fv]`,
/// `[outputs]`, `[timings]`.
pub fn manifest_table(o: &RunOutcome, outputs: &[(&str, &str)], seed: Option<u64>) -> Result<toml::Table> {
    let mut m = toml::Table::new();
    m.insert("manifest".into(), to_value(&ManifestHead { version: env!("CARGO_PKG_VERSION"), exit_code: o.exit_code(), seed })?);
    m.insert("config".into(), toml::Value::Table(o.config.to_table()?));
    m.insert("ledger".into(), to_value(&o.ledger)?);
    let a = &o.assumptions;
    m.insert(
        "assumptions".into(),
        to_value(&AssumptionEntry { a1_ok: a.a1_ok, a2_ok: a.a2_ok, a3_ok: a.a3_ok, a4_ok: a.a4_ok, witnesses: a.witnesses.len() })?,
    );
    let s = &o.solution;
    let status = StatusEntry {
        status: s.status,
        steps: s.steps,
        levels: s.levels.len(),
        threshold: s.threshold,
        dr: s.dr0(),
        t_m: o.geometry.t_m,
        shape: format!("{:?}", o.geometry.shape).to_lowercase(),
        gradients_complete: o.gradients.complete,
    };
    m.insert("status".into(), to_value(&status)?);
    let mut checks = toml::Table::new();
    for r in &o.reports {
        let e = CheckEntry { pass: r.pass, margin: r.margin, r: r.r, t: r.t, tolerance: r.tolerance, samples: r.samples };
        checks.insert(r.check_id.clone(), to_value(&e)?);
    }
    m.insert("checks".into(), toml::Value::Table(checks));
    if let Some(b) = &o.blowup {
        m.insert("blowup".into(), to_value(b)?);
    }
    if let Some(d) = &o.fv {
        m.insert("fv".into(), to_value(d)?);
    }
    let mut out = toml::Table::new();
    for (k, v) in outputs {
        out.insert(k.to_string(), toml::Value::String(v.to_string()));
    }
    m.insert("outputs".into(), toml::Value::Table(out));
    let mut tm = toml::Table::new();
    for (k, v) in &o.timings {
        tm.insert(k.to_string(), toml::Value::Float(*v));
    }
    m.insert("timings".into(), toml::Value::Table(tm));
    Ok(m)
}

/// Writes solution, gradient and report CSVs, then the manifest.
pub fn write_artifacts(o: &RunOutcome, dir: &Path, seed: Option<u64>) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    io::write_solution(create(&dir.join(SOLUTION_CSV))?, &o.solution)?;
    io::write_gradients(create(&dir.join(GRADIENTS_CSV))?, &o.solution, &o.gradients)?;
    io::write_report(create(&dir.join(REPORT_CSV))?, &o.reports)?;
    let outputs = [("solution", SOLUTION_CSV), ("gradients", GRADIENTS_CSV), ("report", REPORT_CSV)];
    let table = manifest_table(o, &outputs, seed)?;
    let text = toml::to_string(&table).map_err(|e| Error::Io(format!("manifest: {e}")))?;
    std::fs::write(dir.join(MANIFEST), text)?;
    Ok([SOLUTION_CSV, GRADIENTS_CSV, REPORT_CSV, MANIFEST].iter().map(|f| dir.join(f)).collect())
}

/// One-paragraph summary for the terminal.
pub fn summary(o: &RunOutcome) -> String {
    let mut s = format!(
        "family {} | status {} | A1..A4 = {} {} {} {}\n",
        o.config.family.name(),
        o.solution.status.label(),
        o.assumptions.a1_ok,
        o.assumptions.a2_ok,
        o.assumptions.a3_ok,
        o.assumptions.a4_ok
    );
    for r in &o.reports {
        s += &format!("  {:<40} {}  margin {:.3e}  tol {:.3e}\n", r.check_id, if r.pass { "pass" } else { "FAIL" }, r.margin, r.tolerance);
    }
    if let Some(b) = &o.blowup {
        s += &format!(
            "  blowup: N(T) = {:.4e} at T = {}, min alpha0 = {:.4e}, min beta0 = {:.4e}, T* = {:?}, observed = {:?} -> {}\n",
            b.threshold,
            b.horizon,
            b.min_alpha0,
            b.min_beta0,
            b.t_star,
            b.observed,
            b.classification.label()
        );
    }
    if let Some(d) = &o.fv {
        s += &format!("  fv discrepancy at t = {}: rho {:.3e}, u {:.3e}, S {:.3e}\n", d.t, d.rho, d.u, d.s);
    }
    s
}

/// Initial-data pipeline only.
pub struct AuditOutcome {
    pub profile: InitialProfile,
    pub ledger: ConstantsLedger,
    pub assumptions: AssumptionReport,
    pub include_a4: bool,
}

impl AuditOutcome {
    pub fn exit_code(&self) -> u8 {
        if self.assumptions.all_ok(self.include_a4) {
            0
        } else {
            2
        }
    }

    pub fn summary(&self) -> String {
        let a = &self.assumptions;
        let mut s = format!("A1 {} | A2 {} | A3 {} | A4 {}{}\n", a.a1_ok, a.a2_ok, a.a3_ok, a.a4_ok, if self.include_a4 { "" } else { " (not required)" });
        for w in &a.witnesses {
            s += &format!("  A{} at r = {}: {} ({} vs {})\n", w.assumption, w.r, w.inequality, w.lhs, w.rhs);
        }
        s
    }

    /// profile.csv with the sampled data and (α0, β0).
    pub fn write_profile(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let (a, b) = crate::initial::initial_gradients(&self.profile, &self.profile.gas)?;
        let path = dir.join(PROFILE_CSV);
        io::write_profile(create(&path)?, &self.profile, &a, &b)?;
        Ok(path)
    }
}

pub fn audit(cfg: &LabConfig) -> Result<AuditOutcome> {
    cfg.validate()?;
    let profile = build_profile(&cfg.descriptor(), &cfg.gas)?;
    let ledger = derive_constants(&profile, &cfg.gas, cfg.domain.t0)?;
    let assumptions = check_assumptions(&profile, &cfg.gas, &ledger)?;
    Ok(AuditOutcome { profile, ledger, assumptions, include_a4: cfg.checks.check_a4 })
}

/// One row of phase.csv.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRow {
    pub point: usize,
    pub values: Vec<f64>,
    pub min_alpha0: f64,
    pub min_beta0: f64,
    pub threshold: f64,
    pub outcome: String,
    pub classification: String,
    pub checks_pass: Option<bool>,
    pub error: String,
}

/// Cartesian product of the axes, first axis slowest. No axes gives one
/// empty point.
pub fn sweep_points(cfg: &LabConfig) -> Vec<Vec<f64>> {
    let mut pts = vec![vec![]];
    for a in &cfg.sweep.axes {
        pts = pts.into_iter().flat_map(|p| a.values.iter().map(move |&v| [p.clone(), vec![v]].concat())).collect();
    }
    pts
}

fn sweep_point(cfg: &LabConfig, point: usize, values: &[f64]) -> PhaseRow {
    let mut row = PhaseRow {
        point,
        values: values.to_vec(),
        min_alpha0: f64::NAN,
        min_beta0: f64::NAN,
        threshold: f64::NAN,
        outcome: "error".into(),
        classification: String::new(),
        checks_pass: None,
        error: String::new(),
    };
    let run = || -> Result<RunOutcome> {
        let mut c = cfg.clone();
        for (a, &v) in cfg.sweep.axes.iter().zip(values) {
            c = c.with_value(&a.key, v)?;
        }
        c.sweep.axes.clear();
        execute(&c)
    };
    match run() {
        Ok(o) => {
            let b = o.blowup.as_ref().expect("execute always classifies");
            row.min_alpha0 = b.min_alpha0;
            row.min_beta0 = b.min_beta0;
            row.threshold = b.threshold;
            row.outcome = o.solution.status.label();
            row.classification = b.classification.label().into();
            row.checks_pass = Some(o.checks_pass());
        }
        Err(e) => row.error = e.to_string(),
    }
    row
}

/// Runs every sweep point on a pool of `workers` threads. Rows come back in
/// declared order regardless of scheduling.
pub fn sweep(cfg: &LabConfig, workers: usize) -> Result<Vec<PhaseRow>> {
    cfg.validate()?;
    let pts = sweep_points(cfg);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build().map_err(|e| Error::InvalidConfig(e.to_string()))?;
    Ok(pool.install(|| pts.par_iter().enumerate().map(|(i, v)| sweep_point(cfg, i, v)).collect()))
}

pub fn write_phase<W: std::io::Write>(out: W, cfg: &LabConfig, rows: &[PhaseRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["point".to_string()];
    header.extend(cfg.sweep.axes.iter().map(|a| a.key.clone()));
    header.extend(["min_alpha0", "min_beta0", "n_of_t", "outcome", "classification", "checks_pass", "error"].map(String::from));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![r.point.to_string()];
        rec.extend(r.values.iter().map(|&v| io::fmt(v)));
        rec.extend([io::fmt(r.min_alpha0), io::fmt(r.min_beta0), io::fmt(r.threshold)]);
        rec.push(r.outcome.clone());
        rec.push(r.classification.clone());
        rec.push(r.checks_pass.map(|b| b.to_string()).unwrap_or_default());
        rec.push(r.error.clone());
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sweep(cfg: &LabConfig, rows: &[PhaseRow], dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(PHASE_CSV);
    write_phase(create(&path)?, cfg, rows)?;
    Ok(path)
}
