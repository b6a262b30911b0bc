use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    family_distance, gauss_newton, jacobian, jacobian_rank, GnFailure, GnOptions, SolverError,
};
use crate::metric::{family_tangent, glued_football, GluedFootballParams, TriangulatedMetric, TRIANGLES};
use crate::sphtrig::VALIDITY_MARGIN;

/// The validity region as linear constraints `w . l <= b - margin`.
fn validity_constraints() -> Vec<([f64; 6], f64)> {
    let mut out = Vec::new();
    for i in 0..6 {
        let mut lo = [0.0; 6];
        lo[i] = -1.0;
        out.push((lo, 0.0));
        let mut hi = [0.0; 6];
        hi[i] = 1.0;
        out.push((hi, PI));
    }
    for tri in TRIANGLES {
        for long in 0..3 {
            let mut w = [0.0; 6];
            w[tri[long]] += 1.0;
            for (k, &idx) in tri.iter().enumerate() {
                if k != long {
                    w[idx] -= 1.0;
                }
            }
            out.push((w, 0.0));
        }
        let mut w = [0.0; 6];
        for &idx in &tri {
            w[idx] += 1.0;
        }
        out.push((w, 2.0 * PI));
    }
    out
}

/// Largest `r` such that every point within max-norm distance `r` of `m` is
/// valid. Negative when `m` itself is invalid.
pub fn max_feasible_radius(m: &TriangulatedMetric) -> f64 {
    validity_constraints()
        .iter()
        .filter_map(|(w, b)| {
            let norm1: f64 = w.iter().map(|x| x.abs()).sum();
            if norm1 == 0.0 {
                return None;
            }
            let dot: f64 = w.iter().zip(&m.lengths).map(|(a, x)| a * x).sum();
            Some((b - VALIDITY_MARGIN - dot) / norm1)
        })
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidityOptions {
    pub radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub dist_tol: f64,
    pub rank_tol: f64,
    pub fd_step: f64,
    /// Worker threads for the solves; results do not depend on it.
    pub workers: usize,
    pub gn: GnOptions,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        Self {
            radius: 0.05,
            samples: 64,
            seed: 0,
            dist_tol: 1e-6,
            rank_tol: super::DEFAULT_RANK_TOL,
            fd_step: super::DEFAULT_FD_STEP,
            workers: 1,
            gn: GnOptions::default(),
        }
    }
}

/// One solve from a random start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub index: usize,
    pub start: [f64; 6],
    pub outcome: SolveOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SolveOutcome {
    Converged {
        lengths: [f64; 6],
        residual_norm: f64,
        iterations: usize,
        s_star: f64,
        family_distance: f64,
    },
    Failed(GnFailure),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub alpha: f64,
    pub beta: f64,
    pub t: f64,
    pub radius: f64,
    pub max_radius: f64,
    pub samples: usize,
    pub seed: u64,
    pub singular_values: Vec<f64>,
    pub rank: usize,
    pub kernel_dim: usize,
    /// `|J v| / |v|` for the family tangent `v`.
    pub tangent_residual: f64,
    pub converged: usize,
    pub boundary_failures: usize,
    pub other_failures: usize,
    pub max_family_distance: f64,
    pub dist_tol: f64,
    /// Every converged solve lies within `dist_tol` of the family, and at
    /// least one solve converged.
    pub rigid: bool,
    pub solutions: Vec<Solution>,
}

/// Local rigidity probe around `g_t`: Jacobian rank at the base point plus
/// Gauss-Newton projections of `samples` seeded random starts drawn uniformly
/// from the max-norm ball of radius `radius`.
///
/// Starts are generated sequentially from the seed before any solve runs, so
/// the report is identical for any worker count.
pub fn rigidity_scan(
    params: &GluedFootballParams,
    opts: &RigidityOptions,
) -> Result<RigidityReport, SolverError> {
    if !(opts.radius.is_finite() && opts.radius > 0.0) {
        return Err(SolverError::Option {
            name: "radius",
            value: opts.radius,
        });
    }
    let spec = params.spec;
    let base = glued_football(params)?;
    let max_radius = max_feasible_radius(&base);
    if opts.radius > max_radius {
        return Err(SolverError::RadiusTooLarge {
            radius: opts.radius,
            max: max_radius,
        });
    }

    let j = jacobian(&base, &spec, opts.fd_step)?;
    let rank = jacobian_rank(&j, opts.rank_tol);
    let tangent = nalgebra::SVector::<f64, 6>::from(family_tangent(&spec, params.t));
    let tangent_residual = (j * tangent).norm() / tangent.norm();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<[f64; 6]> = (0..opts.samples)
        .map(|_| {
            std::array::from_fn(|i| base.lengths[i] + rng.gen_range(-opts.radius..=opts.radius))
        })
        .collect();

    let solve = |(index, start): (usize, &[f64; 6])| {
        let m = TriangulatedMetric::new(*start);
        let outcome = match gauss_newton(&m, &spec, &opts.gn) {
            Ok(out) => {
                let fit = family_distance(&out.metric, &spec);
                SolveOutcome::Converged {
                    lengths: out.metric.lengths,
                    residual_norm: out.residual.norm(),
                    iterations: out.iterations,
                    s_star: fit.s_star,
                    family_distance: fit.distance,
                }
            }
            Err(e) => SolveOutcome::Failed(e),
        };
        Solution {
            index,
            start: *start,
            outcome,
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers.max(1))
        .build()
        .map_err(|_| SolverError::Option {
            name: "workers",
            value: opts.workers as f64,
        })?;
    let solutions: Vec<Solution> =
        pool.install(|| starts.par_iter().enumerate().map(solve).collect());

    let mut converged = 0;
    let mut boundary_failures = 0;
    let mut other_failures = 0;
    let mut max_family_distance: f64 = 0.0;
    for s in &solutions {
        match &s.outcome {
            SolveOutcome::Converged {
                family_distance, ..
            } => {
                converged += 1;
                max_family_distance = max_family_distance.max(*family_distance);
            }
            SolveOutcome::Failed(GnFailure::Boundary { .. }) => boundary_failures += 1,
            SolveOutcome::Failed(_) => other_failures += 1,
        }
    }

    Ok(RigidityReport {
        alpha: spec.alpha(),
        beta: spec.beta(),
        t: params.t,
        radius: opts.radius,
        max_radius,
        samples: opts.samples,
        seed: opts.seed,
        kernel_dim: 6 - rank.rank,
        rank: rank.rank,
        singular_values: rank.singular_values,
        tangent_residual,
        converged,
        boundary_failures,
        other_failures,
        max_family_distance,
        dist_tol: opts.dist_tol,
        rigid: converged > 0 && max_family_distance < opts.dist_tol,
        solutions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::ConeAngleSpec;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn params(alpha: f64, beta: f64, t: f64) -> GluedFootballParams {
        GluedFootballParams::new(ConeAngleSpec::new(alpha, beta).unwrap(), t).unwrap()
    }

    #[test]
    fn radius_oracle_by_corner_sampling() {
        let p = params(1.0, 2.0, 1.2);
        let m = glued_football(&p).unwrap();
        let r = max_feasible_radius(&m);
        assert!(r > 0.05);
        // Every vertex of the slightly shrunk cube is valid; some vertex of
        // the slightly enlarged cube is not.
        let corner = |scale: f64, mask: u32| {
            TriangulatedMetric::new(std::array::from_fn(|i| {
                let sign = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
                m.lengths[i] + sign * r * scale
            }))
        };
        assert!((0..64).all(|mask| corner(0.999, mask).is_valid()));
        assert!((0..64).any(|mask| !corner(1.001, mask).is_valid()));
    }

    #[test]
    fn oversized_radius_is_rejected() {
        let p = params(FRAC_PI_2, FRAC_PI_2, 0.05);
        let opts = RigidityOptions {
            radius: 0.2,
            ..RigidityOptions::default()
        };
        assert!(matches!(
            rigidity_scan(&p, &opts),
            Err(SolverError::RadiusTooLarge { .. })
        ));
    }

    #[test]
    fn scan_is_rigid_and_worker_independent() {
        let p = params(FRAC_PI_2, FRAC_PI_2, FRAC_PI_3);
        let opts = RigidityOptions {
            samples: 12,
            seed: 7,
            ..RigidityOptions::default()
        };
        let one = rigidity_scan(&p, &opts).unwrap();
        let four = rigidity_scan(&p, &RigidityOptions { workers: 4, ..opts }).unwrap();
        assert_eq!(one, four);
        assert!(one.rank <= 3);
        assert!(one.tangent_residual < 1e-6);
        assert!(one.converged > 0);
        assert!(one.rigid, "{}", one.max_family_distance);
    }
}
