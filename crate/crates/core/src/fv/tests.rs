use std::sync::Arc;

use super::solver::fv_cfl_limit;
use super::*;
use crate::error::Error;
use crate::gas::GasModel;

fn gas() -> GasModel {
    GasModel::new(1.4, 1.0, 1.0, 1).unwrap()
}

fn ramp(r: f64) -> crate::Result<(f64, f64, f64)> {
    Ok((1.0 / r, 8.0 + 0.5 * (r - 1.0), 0.1 + 0.2 * (r - 1.0)))
}

fn cells_of(grid: &FvGrid, g: &GasModel, f: impl Fn(f64) -> (f64, f64, f64)) -> ConservativeCells {
    let v: Vec<_> = grid.centers.iter().map(|&r| f(r)).collect();
    let rho: Vec<f64> = v.iter().map(|x| x.0).collect();
    let u: Vec<f64> = v.iter().map(|x| x.1).collect();
    let s: Vec<f64> = v.iter().map(|x| x.2).collect();
    ConservativeCells::from_primitive(grid, g, &rho, &u, &s)
}

#[test]
fn mass_changes_only_through_the_ends() {
    let g = gas();
    let grid = FvGrid::new(1.0, 2.0, 100).unwrap();
    let c = cells_of(&grid, &g, |r| {
        let (d, u, s) = ramp(r).unwrap();
        (d * (1.0 + 0.3 * (8.0 * r).sin()), u, s)
    });
    for order in [1, 2] {
        let cfg = FvConfig { n_cells: 100, cfl: 0.4, order };
        let dt = fv_cfl_limit(&grid, &g, &c, 0.4);
        let st = fv_step(&grid, &g, &c, dt, 0.0, &cfg, &FvBoundaries::default()).unwrap();
        let m0 = c.mass(&grid);
        let m1 = st.cells.mass(&grid);
        assert!((m1 - m0 + st.boundary_mass_flux).abs() < 1e-12 * m0, "order {order}");
    }
}

#[test]
fn constant_entropy_is_preserved_exactly() {
    let g = gas();
    let cfg = FvConfig { n_cells: 64, ..FvConfig::default() };
    let sol = fv_run(|r| Ok((1.0 / r, 8.0 + (r - 1.0), 0.3)), 1.0, 2.0, &g, &cfg, &FvBoundaries::default(), 0.05, &[]).unwrap();
    for l in &sol.levels {
        assert!(l.cells.s.iter().all(|&s| s == 0.3));
    }
}

#[test]
fn entropy_stays_within_initial_range() {
    let g = gas();
    let cfg = FvConfig { n_cells: 128, ..FvConfig::default() };
    let init = |r: f64| Ok((1.0, 8.0, 0.2 * (-((r - 1.5) / 0.05).powi(2)).exp() + 0.1 * (r > 1.3) as u8 as f64));
    let sol = fv_run(init, 1.0, 2.0, &g, &cfg, &FvBoundaries::default(), 0.04, &[0.02]).unwrap();
    let s0 = &sol.levels[0].cells.s;
    let lo = s0.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = s0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for l in &sol.levels {
        for &s in &l.cells.s {
            assert!(s >= lo - 1e-14 && s <= hi + 1e-14, "{s} outside [{lo}, {hi}]");
        }
    }
}

#[test]
fn errors_for_positivity_and_cfl() {
    let g = gas();
    let grid = FvGrid::new(1.0, 2.0, 32).unwrap();
    let mut c = cells_of(&grid, &g, |r| ramp(r).unwrap());
    let cfg = FvConfig { n_cells: 32, ..FvConfig::default() };
    let bc = FvBoundaries::default();
    let dt = fv_cfl_limit(&grid, &g, &c, cfg.cfl);
    assert!(matches!(fv_step(&grid, &g, &c, 3.0 * dt, 0.0, &cfg, &bc), Err(Error::CflViolation { .. })));
    c.q0[5] = -1.0;
    c.q1[5] = -8.0;
    assert!(matches!(fv_step(&grid, &g, &c, 1e-6, 0.0, &cfg, &bc), Err(Error::PositivityLoss { cell: 5, .. })));
}

#[test]
fn prescribed_steady_boundaries_hold_the_steady_state() {
    let g = gas();
    let sp = steady_profile(&g, 8.0, 0.0, (1.0, 1.0), 0.9, 2.1, 4096).unwrap();
    let exact = |r: f64| {
        let p = sp.eval(r);
        (p.rho, p.u, 0.0)
    };
    let mut drift = Vec::new();
    for n in [64, 128] {
        let cfg = FvConfig { n_cells: n, ..FvConfig::default() };
        let f: Arc<dyn Fn(f64, f64) -> (f64, f64, f64) + Send + Sync> = {
            let sp = sp.clone();
            Arc::new(move |r, _| {
                let p = sp.eval(r);
                (p.rho, p.u, 0.0)
            })
        };
        let bc = FvBoundaries { left: FvBoundary::Prescribed(f.clone()), right: FvBoundary::Prescribed(f) };
        let sol = fv_run(|r| Ok(exact(r)), 1.0, 2.0, &g, &cfg, &bc, 0.1, &[]).unwrap();
        let last = sol.levels.last().unwrap();
        let d = (0..n)
            .map(|i| {
                let (rho, u, _) = last.cells.primitive(&sol.grid, &g, i);
                let (er, eu, _) = exact(sol.grid.centers[i]);
                (rho - er).abs().max((u - eu).abs())
            })
            .fold(0.0, f64::max);
        drift.push(d);
    }
    assert!(drift[1] < 0.4 * drift[0], "{drift:?}");
}

#[test]
fn smooth_compression_self_converges() {
    let g = gas();
    let init = |r: f64| Ok((1.0, 8.0 - 2.0 * (-((r - 1.5) / 0.1).powi(2)).exp() * (r - 1.5) / 0.1, 0.0));
    let t = 0.02;
    let sols: Vec<_> = [64, 128, 256]
        .iter()
        .map(|&n| fv_run(init, 1.0, 2.0, &g, &FvConfig { n_cells: n, ..FvConfig::default() }, &FvBoundaries::default(), t, &[]).unwrap())
        .collect();
    let d01 = compare_solutions(&sols[0], &sols[1], t).unwrap().total();
    let d12 = compare_solutions(&sols[1], &sols[2], t).unwrap().total();
    let order = (d01 / d12).log2();
    assert!(order >= 0.8, "order {order}");
}

#[test]
fn comparison_edge_cases() {
    let g = gas();
    let cfg = FvConfig { n_cells: 32, ..FvConfig::default() };
    let a = fv_run(ramp, 1.0, 2.0, &g, &cfg, &FvBoundaries::default(), 0.01, &[]).unwrap();
    let d = compare_solutions(&a, &a, 0.01).unwrap();
    assert_eq!(d.total(), 0.0);
    let b = fv_run(ramp, 3.0, 4.0, &g, &cfg, &FvBoundaries::default(), 0.01, &[]).unwrap();
    assert!(matches!(compare_solutions(&a, &b, 0.01), Err(Error::NoOverlap { .. })));
    assert!(matches!(compare_solutions(&a, &a, 0.5), Err(Error::NoOverlap { .. })));
}
