//! Interpolation and finite-difference kernels on nonuniform 1-d grids.

/// Index `i` with `xs[i] <= x < xs[i + 1]`, clamped to `[0, n - 2]`.
pub fn locate(xs: &[f64], x: f64) -> usize {
    let n = xs.len();
    debug_assert!(n >= 2);
    if x <= xs[0] {
        return 0;
    }
    if x >= xs[n - 1] {
        return n - 2;
    }
    xs.partition_point(|&v| v <= x).saturating_sub(1).min(n - 2)
}

/// Lagrange stencil weights at a point: `len` nodes starting at `start`.
#[derive(Debug, Clone, Copy)]
pub struct Stencil {
    pub start: usize,
    pub len: usize,
    pub w: [f64; 4],
}

impl Stencil {
    pub fn apply(&self, ys: &[f64]) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.len {
            acc += self.w[k] * ys[self.start + k];
        }
        acc
    }
}

/// Stencil for piecewise-linear (`order == 1`) or cubic (`order >= 2`)
/// interpolation. Near the ends the cubic stencil is shifted inward.
pub fn stencil(xs: &[f64], x: f64, order: u8) -> Stencil {
    let n = xs.len();
    let i = locate(xs, x);
    let len = if order >= 2 && n >= 4 { 4 } else { 2 };
    let start = if len == 4 { i.saturating_sub(1).min(n - 4) } else { i };
    let mut w = [0.0; 4];
    for a in 0..len {
        let xa = xs[start + a];
        let mut l = 1.0;
        for b in 0..len {
            if a != b {
                let xb = xs[start + b];
                l *= (x - xb) / (xa - xb);
            }
        }
        w[a] = l;
    }
    Stencil { start, len, w }
}

pub fn interpolate(xs: &[f64], ys: &[f64], x: f64, order: u8) -> f64 {
    stencil(xs, x, order).apply(ys)
}

/// Cubic Hermite on one interval.
pub fn hermite(x0: f64, x1: f64, f0: f64, f1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let dx = x1 - x0;
    let s = (x - x0) / dx;
    let s2 = s * s;
    let s3 = s2 * s;
    let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    let h10 = s3 - 2.0 * s2 + s;
    let h01 = -2.0 * s3 + 3.0 * s2;
    let h11 = s3 - s2;
    h00 * f0 + h10 * dx * d0 + h01 * f1 + h11 * dx * d1
}

/// Derivative of the cubic Hermite interpolant.
pub fn hermite_slope(x0: f64, x1: f64, f0: f64, f1: f64, d0: f64, d1: f64, x: f64) -> f64 {
    let dx = x1 - x0;
    let s = (x - x0) / dx;
    let s2 = s * s;
    let h00 = 6.0 * s2 - 6.0 * s;
    let h10 = 3.0 * s2 - 4.0 * s + 1.0;
    let h01 = -6.0 * s2 + 6.0 * s;
    let h11 = 3.0 * s2 - 2.0 * s;
    (h00 * f0 + h01 * f1) / dx + h10 * d0 + h11 * d1
}

/// Hermite interpolation of tabulated values with known slopes.
pub fn hermite_table(xs: &[f64], fs: &[f64], ds: &[f64], x: f64) -> f64 {
    let i = locate(xs, x);
    hermite(xs[i], xs[i + 1], fs[i], fs[i + 1], ds[i], ds[i + 1], x)
}

/// Second-order three-point first derivative on a nonuniform grid,
/// one-sided at both ends.
pub fn fd_derivative(xs: &[f64], fs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    assert_eq!(n, fs.len());
    let mut d = vec![0.0; n];
    if n < 2 {
        return d;
    }
    if n == 2 {
        let s = (fs[1] - fs[0]) / (xs[1] - xs[0]);
        return vec![s, s];
    }
    for j in 1..n - 1 {
        let h1 = xs[j] - xs[j - 1];
        let h2 = xs[j + 1] - xs[j];
        d[j] = -h2 / (h1 * (h1 + h2)) * fs[j - 1] + (h2 - h1) / (h1 * h2) * fs[j] + h1 / (h2 * (h1 + h2)) * fs[j + 1];
    }
    d[0] = one_sided(xs[0], xs[1], xs[2], fs[0], fs[1], fs[2]);
    d[n - 1] = one_sided(xs[n - 1], xs[n - 2], xs[n - 3], fs[n - 1], fs[n - 2], fs[n - 3]);
    d
}

/// Derivative at `x0` of the parabola through three points.
fn one_sided(x0: f64, x1: f64, x2: f64, f0: f64, f1: f64, f2: f64) -> f64 {
    let a = x1 - x0;
    let b = x2 - x0;
    -(a + b) / (a * b) * f0 + b / (a * (b - a)) * f1 - a / (b * (b - a)) * f2
}

/// Fourth-order first and second derivatives on a uniform grid with
/// one-sided five-point closures near the ends. Needs at least 5 points.
pub fn fd4_uniform(dx: f64, fs: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = fs.len();
    assert!(n >= 6, "fourth-order differences need at least 6 samples");
    let mut d1 = vec![0.0; n];
    let mut d2 = vec![0.0; n];
    for j in 2..n - 2 {
        d1[j] = (fs[j - 2] - 8.0 * fs[j - 1] + 8.0 * fs[j + 1] - fs[j + 2]) / (12.0 * dx);
        d2[j] = (-fs[j - 2] + 16.0 * fs[j - 1] - 30.0 * fs[j] + 16.0 * fs[j + 1] - fs[j + 2]) / (12.0 * dx * dx);
    }
    // forward closures at j = 0, 1 and mirrored at the right end
    const F1: [[f64; 5]; 2] = [[-25.0, 48.0, -36.0, 16.0, -3.0], [-3.0, -10.0, 18.0, -6.0, 1.0]];
    const F2: [[f64; 6]; 2] = [[45.0, -154.0, 214.0, -156.0, 61.0, -10.0], [10.0, -15.0, -4.0, 14.0, -6.0, 1.0]];
    for (j, (c1, c2)) in F1.iter().zip(F2.iter()).enumerate() {
        let s1: f64 = (0..5).map(|k| c1[k] * fs[k]).sum();
        d1[j] = s1 / (12.0 * dx);
        let s2: f64 = (0..6).map(|k| c2[k] * fs[k]).sum();
        d2[j] = s2 / (12.0 * dx * dx);
        let r = n - 1 - j;
        let s1: f64 = (0..5).map(|k| c1[k] * fs[n - 1 - k]).sum();
        d1[r] = -s1 / (12.0 * dx);
        let s2: f64 = (0..6).map(|k| c2[k] * fs[n - 1 - k]).sum();
        d2[r] = s2 / (12.0 * dx * dx);
    }
    (d1, d2)
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let dx = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { b } else { a + dx * i as f64 }).collect()
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_reproduces_cubics() {
        let xs = vec![0.0, 0.3, 0.45, 1.0, 1.7, 2.0];
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x - 0.25 * x * x * x;
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        for &x in &[0.0, 0.1, 0.44, 0.9, 1.99, 2.0] {
            assert!((interpolate(&xs, &ys, x, 2) - f(x)).abs() < 1e-13);
        }
        let g = |x: f64| 3.0 * x - 1.0;
        let ys: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
        assert!((interpolate(&xs, &ys, 1.2, 1) - g(1.2)).abs() < 1e-14);
    }

    #[test]
    fn fd_exact_on_quadratics() {
        let xs = vec![1.0, 1.1, 1.35, 1.4, 1.8, 2.0];
        let ys: Vec<f64> = xs.iter().map(|&x| 2.0 * x * x - x).collect();
        let d = fd_derivative(&xs, &ys);
        for (x, dv) in xs.iter().zip(d) {
            assert!((dv - (4.0 * x - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn fd4_exact_on_quartics() {
        let xs = linspace(0.0, 1.0, 11);
        let dx = xs[1] - xs[0];
        let f = |x: f64| x.powi(4) - 2.0 * x.powi(3) + x;
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let (d1, d2) = fd4_uniform(dx, &ys);
        for (i, &x) in xs.iter().enumerate() {
            assert!((d1[i] - (4.0 * x.powi(3) - 6.0 * x * x + 1.0)).abs() < 1e-10, "d1 at {i}");
            assert!((d2[i] - (12.0 * x * x - 12.0 * x)).abs() < 1e-8, "d2 at {i}");
        }
    }

    #[test]
    fn hermite_reproduces_cubic() {
        let f = |x: f64| x * x * x - x;
        let df = |x: f64| 3.0 * x * x - 1.0;
        let v = hermite(0.5, 1.5, f(0.5), f(1.5), df(0.5), df(1.5), 0.9);
        assert!((v - f(0.9)).abs() < 1e-14);
        let s = hermite_slope(0.5, 1.5, f(0.5), f(1.5), df(0.5), df(1.5), 0.9);
        assert!((s - df(0.9)).abs() < 1e-13);
    }

    #[test]
    fn locate_clamps() {
        let xs = [0.0, 1.0, 2.0];
        assert_eq!(locate(&xs, -1.0), 0);
        assert_eq!(locate(&xs, 1.5), 1);
        assert_eq!(locate(&xs, 1.0), 1);
        assert_eq!(locate(&xs, 9.0), 1);
    }
}
