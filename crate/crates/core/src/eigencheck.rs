//! Finite-difference check that `cos r` satisfies `Delta u + 2 u = 0` on a
//! football `dr^2 + a^2 sin^2 r dtheta^2`, and that it glues across the slit.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("grid needs at least 3 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("pole margin {0} outside (0, pi/2)")]
    Delta(f64),
    #[error("cot(r) is not representable at the pole margin {0}")]
    CotBlowup(f64),
    #[error("{name} = {value} outside its domain")]
    Domain { name: &'static str, value: f64 },
}

/// `n` nodes uniform on `[delta, pi - delta]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    n: usize,
    delta: f64,
}

impl RadialGrid {
    pub fn new(n: usize, delta: f64) -> Result<Self, EigenError> {
        if n < 3 {
            return Err(EigenError::TooFewNodes(n));
        }
        if !(delta > 0.0 && delta < FRAC_PI_2) {
            return Err(EigenError::Delta(delta));
        }
        if !(1.0 / delta.tan()).is_finite() {
            return Err(EigenError::CotBlowup(delta));
        }
        Ok(Self { n, delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn spacing(&self) -> f64 {
        (PI - 2.0 * self.delta) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        self.delta + self.spacing() * i as f64
    }
}

/// Max over interior nodes of `|u'' + cot(r) u' + 2 u|` with central
/// differences for both derivatives.
pub fn radial_residual_of(g: &RadialGrid, u: impl Fn(f64) -> f64 + Sync) -> f64 {
    let h = g.spacing();
    (1..g.n - 1)
        .into_par_iter()
        .map(|i| {
            let r = g.node(i);
            let (um, u0, up) = (u(r - h), u(r), u(r + h));
            let d2 = (up - 2.0 * u0 + um) / (h * h);
            let d1 = (up - um) / (2.0 * h);
            (d2 + d1 / r.tan() + 2.0 * u0).abs()
        })
        .reduce(|| 0.0, f64::max)
}

pub fn radial_residual(g: &RadialGrid) -> f64 {
    radial_residual_of(g, f64::cos)
}

/// The same residual from the full two-dimensional Laplacian of the football
/// with angle parameter `a`, using an `n_theta`-point periodic stencil in
/// `theta`. For a radial function the angular term vanishes identically.
pub fn football_residual(
    g: &RadialGrid,
    a: f64,
    n_theta: usize,
    u: impl Fn(f64, f64) -> f64 + Sync,
) -> Result<f64, EigenError> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(EigenError::Domain { name: "a", value: a });
    }
    if n_theta < 3 {
        return Err(EigenError::TooFewNodes(n_theta));
    }
    let h = g.spacing();
    let k = 2.0 * PI / n_theta as f64;
    let worst = (1..g.n - 1)
        .into_par_iter()
        .map(|i| {
            let r = g.node(i);
            let mut worst: f64 = 0.0;
            for j in 0..n_theta {
                let th = k * j as f64;
                let u0 = u(r, th);
                let d2r = (u(r + h, th) - 2.0 * u0 + u(r - h, th)) / (h * h);
                let d1r = (u(r + h, th) - u(r - h, th)) / (2.0 * h);
                let d2t = (u(r, th + k) - 2.0 * u0 + u(r, th - k)) / (k * k);
                let lap = d2r + d1r / r.tan() + d2t / (a * r.sin()).powi(2);
                worst = worst.max((lap + 2.0 * u0).abs());
            }
            worst
        })
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

/// Observed orders `log2(res(h) / res(h/2))` over successive grids, each with
/// `2 n - 1` nodes relative to the previous one.
pub fn convergence_orders(n0: usize, delta: f64, refinements: usize) -> Result<Vec<f64>, EigenError> {
    let mut n = n0;
    let mut prev = radial_residual(&RadialGrid::new(n, delta)?);
    let mut out = Vec::with_capacity(refinements);
    for _ in 0..refinements {
        n = 2 * n - 1;
        let cur = radial_residual(&RadialGrid::new(n, delta)?);
        out.push((prev / cur).log2());
        prev = cur;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlitReport {
    pub max_mismatch: f64,
    /// Value at the common south pole `D`.
    pub value_at_d: f64,
    /// Value at the slit's far end `C`.
    pub value_at_c: f64,
}

/// Evaluates `cos r` on both footballs at `n` points of the slit of length
/// `t` from the south pole, each side in its own polar coordinate, and
/// compares the two.
pub fn slit_continuity(alpha: f64, beta: f64, t: f64, n: usize) -> Result<SlitReport, EigenError> {
    for (name, value) in [("alpha", alpha), ("beta", beta)] {
        if !(value > 0.0 && value.is_finite()) {
            return Err(EigenError::Domain { name, value });
        }
    }
    if !(t > 0.0 && t < PI) {
        return Err(EigenError::Domain { name: "t", value: t });
    }
    // A slit point at distance `d` from C lies at distance `t - d` from the
    // south pole on either football; the angular coordinate is not needed.
    let polar = |d: f64| PI - (t - d);
    let on_alpha = |d: f64| polar(d).cos();
    let on_beta = |d: f64| polar(d).cos();
    let mut max_mismatch: f64 = 0.0;
    for k in 1..=n {
        let d = t * k as f64 / (n + 1) as f64;
        max_mismatch = max_mismatch.max((on_alpha(d) - on_beta(d)).abs());
    }
    Ok(SlitReport {
        max_mismatch,
        value_at_d: on_alpha(t),
        value_at_c: on_beta(0.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_residual() {
        let g = RadialGrid::new(1001, 0.1).unwrap();
        let r = radial_residual(&g);
        assert!(r < 1e-4, "{r}");
        assert!(r > 0.0);
    }

    #[test]
    fn second_order() {
        for p in convergence_orders(251, 0.1, 3).unwrap() {
            assert!((1.9..=2.1).contains(&p), "{p}");
        }
    }

    #[test]
    fn negative_control() {
        let g = RadialGrid::new(1001, 0.1).unwrap();
        assert!(radial_residual_of(&g, |r| (2.0 * r).cos()) > 0.5);
    }

    #[test]
    fn independent_of_cone_angle() {
        let g = RadialGrid::new(401, 0.1).unwrap();
        let base = radial_residual(&g);
        for a in [0.5, 1.0, 2.5] {
            let r = football_residual(&g, a, 16, |r, _| r.cos()).unwrap();
            assert_eq!(r, base);
        }
        // A non-radial function does feel the angle.
        let f = |r: f64, th: f64| r.cos() + 0.1 * r.sin() * th.cos();
        let r1 = football_residual(&g, 0.5, 16, f).unwrap();
        let r2 = football_residual(&g, 2.5, 16, f).unwrap();
        assert!((r1 - r2).abs() > 1e-3);
    }

    #[test]
    fn grid_errors() {
        assert_eq!(RadialGrid::new(2, 0.1), Err(EigenError::TooFewNodes(2)));
        assert!(RadialGrid::new(10, 0.0).is_err());
        assert!(RadialGrid::new(10, 2.0).is_err());
        assert_eq!(RadialGrid::new(10, 1e-320), Err(EigenError::CotBlowup(1e-320)));
    }

    #[test]
    fn slit_glues() {
        for (a, b, t) in [(1.0, 2.0, 1.2), (0.3, 0.3, 0.1), (2.9, 0.4, 3.0)] {
            let s = slit_continuity(a, b, t, 100).unwrap();
            assert_eq!(s.max_mismatch, 0.0);
            assert_eq!(s.value_at_d, -1.0);
            assert!((s.value_at_c + t.cos()).abs() < 1e-15);
        }
        assert!(slit_continuity(1.0, 1.0, 0.0, 10).is_err());
    }
}
