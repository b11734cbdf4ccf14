//! CSV artifacts. Floats are written with `Display`, which is the shortest
//! decimal that parses back to the same `f64`.

use std::io::Write;

use crate::characteristics::SpaceTimeSolution;
use crate::error::{Error, Result};
use crate::initial::InitialProfile;
use crate::riccati::GradientField;
use crate::verify::ViolationReport;

pub const SOLUTION_HEADER: [&str; 10] = ["t", "r", "w", "z", "u", "h", "S", "xi", "alpha_fd", "beta_fd"];
pub const REPORT_HEADER: [&str; 6] = ["check_id", "pass", "margin", "r", "t", "tolerance"];
pub const PROFILE_HEADER: [&str; 6] = ["r", "rho0", "u0", "S0", "alpha0", "beta0"];

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub fn fmt(x: f64) -> String {
    format!("{x}")
}

fn solution_row(sol: &SpaceTimeSolution, k: usize, j: usize) -> Vec<String> {
    let l = &sol.levels[k];
    let u = l.u(j);
    let h = l.h(j, &sol.gas);
    [l.t, l.r[j], l.w[j], l.z[j], u, h, l.s[j], l.xi[j], l.alpha_fd[j], l.beta_fd[j]].into_iter().map(fmt).collect()
}

/// One row per stored node of every stored level.
pub fn write_solution<W: Write>(out: W, sol: &SpaceTimeSolution) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SOLUTION_HEADER)?;
    for (k, l) in sol.levels.iter().enumerate() {
        for j in 0..l.len() {
            w.write_record(solution_row(sol, k, j))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Solution columns plus alpha_ric, beta_ric, for the levels the Riccati
/// integration reached.
pub fn write_gradients<W: Write>(out: W, sol: &SpaceTimeSolution, grads: &GradientField) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = SOLUTION_HEADER.to_vec();
    header.extend(["alpha_ric", "beta_ric"]);
    w.write_record(&header)?;
    for k in 0..grads.len().min(sol.levels.len()) {
        for j in 0..sol.levels[k].len() {
            let mut row = solution_row(sol, k, j);
            row.push(fmt(grads.alpha[k][j]));
            row.push(fmt(grads.beta[k][j]));
            w.write_record(row)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_report<W: Write>(out: W, reports: &[ViolationReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_HEADER)?;
    for r in reports {
        w.write_record([r.check_id.clone(), r.pass.to_string(), fmt(r.margin), fmt(r.r), fmt(r.t), fmt(r.tolerance)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_profile<W: Write>(out: W, p: &InitialProfile, alpha0: &[f64], beta0: &[f64]) -> Result<()> {
    let s = &p.samples;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PROFILE_HEADER)?;
    for i in 0..s.len() {
        w.write_record([s.r[i], s.rho[i], s.u[i], s.s[i], alpha0[i], beta0[i]].map(fmt))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV back as a header and rows of fields.
pub fn read_csv(path: &std::path::Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.map(|x| x.iter().map(String::from).collect())).collect::<std::result::Result<_, _>>()?;
    Ok((header, rows))
}
