use nalgebra::SVector;
use serde::{Deserialize, Serialize};

use super::{jacobian, residual, ConstraintResidual, DEFAULT_FD_STEP};
use crate::metric::{ConeAngleSpec, TriangulatedMetric};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnOptions {
    pub max_iter: usize,
    /// Success threshold on the residual 2-norm.
    pub res_tol: f64,
    /// Initial Levenberg damping, relative to `sigma_1^2`.
    pub lambda0: f64,
    pub fd_step: f64,
    /// Below this residual the iteration stops immediately.
    pub noise_floor: f64,
}

impl Default for GnOptions {
    fn default() -> Self {
        Self {
            max_iter: 50,
            res_tol: 1e-11,
            lambda0: 1e-3,
            fd_step: DEFAULT_FD_STEP,
            noise_floor: 1e-14,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GnOutcome {
    pub metric: TriangulatedMetric,
    pub residual: ConstraintResidual,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, thiserror::Error)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GnFailure {
    #[error("no convergence after {iterations} iterations (residual {residual_norm:e})")]
    NotConverged {
        iterations: usize,
        residual_norm: f64,
    },
    #[error("boundary: trapped at the edge of the validity region after {iterations} iterations (residual {residual_norm:e})")]
    Boundary {
        iterations: usize,
        residual_norm: f64,
    },
}

const MAX_DAMPING_TRIES: usize = 12;
const MAX_BACKTRACK: usize = 30;

/// Damped Gauss-Newton projection onto the solution set of the cone-angle
/// equations.
///
/// Each step is the minimum-norm least-squares solution of the linearized
/// system, computed from the SVD of the 4x6 Jacobian with Tikhonov filter
/// factors `sigma / (sigma^2 + lambda)`; `lambda` shrinks after accepted steps
/// and grows after rejected ones. Trial points are backtracked until they stay
/// valid and reduce the residual. Near the family the Jacobian loses rank, so
/// convergence there is linear; the iteration keeps refining past `res_tol`
/// while the residual still drops by a useful factor.
pub fn gauss_newton(
    start: &TriangulatedMetric,
    spec: &ConeAngleSpec,
    opts: &GnOptions,
) -> Result<GnOutcome, GnFailure> {
    let Ok(mut r) = residual(start, spec) else {
        return Err(GnFailure::Boundary {
            iterations: 0,
            residual_norm: f64::NAN,
        });
    };
    let mut x = *start;
    let mut norm = r.norm();
    let mut lambda = opts.lambda0;
    let mut iterations = 0;
    let mut hit_boundary = false;

    while iterations < opts.max_iter && norm > opts.noise_floor {
        let Ok(j) = jacobian(&x, spec, opts.fd_step) else {
            hit_boundary = true;
            break;
        };
        let svd = j.svd(true, true);
        let (u, vt) = (svd.u.expect("u"), svd.v_t.expect("v_t"));
        let sigma = svd.singular_values;
        let top = sigma.max();
        let rv = SVector::<f64, 4>::from(r.0);

        let mut accepted = None;
        for _ in 0..MAX_DAMPING_TRIES {
            let damp = lambda * top * top;
            let mut step = SVector::<f64, 6>::zeros();
            for i in 0..sigma.len() {
                let s = sigma[i];
                if s <= 1e-14 * top {
                    continue;
                }
                let coef = -s / (s * s + damp) * u.column(i).dot(&rv);
                step += vt.row(i).transpose() * coef;
            }
            let mut scale = 1.0;
            for _ in 0..MAX_BACKTRACK {
                let mut trial = x;
                for (l, d) in trial.lengths.iter_mut().zip(step.iter()) {
                    *l += scale * d;
                }
                match residual(&trial, spec) {
                    Ok(rt) if rt.norm() < norm => {
                        accepted = Some((trial, rt));
                        break;
                    }
                    Ok(_) => {}
                    Err(_) => hit_boundary = true,
                }
                scale *= 0.5;
            }
            if accepted.is_some() {
                lambda = (lambda * 0.1).max(1e-16);
                break;
            }
            lambda *= 10.0;
        }

        let Some((next, rn)) = accepted else { break };
        iterations += 1;
        let previous = norm;
        x = next;
        r = rn;
        norm = r.norm();
        hit_boundary = false;
        if norm < opts.res_tol && norm > 0.9 * previous {
            break;
        }
    }

    if norm < opts.res_tol {
        Ok(GnOutcome {
            metric: x,
            residual: r,
            iterations,
        })
    } else if hit_boundary {
        Err(GnFailure::Boundary {
            iterations,
            residual_norm: norm,
        })
    } else {
        Err(GnFailure::NotConverged {
            iterations,
            residual_norm: norm,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{glued_football, GluedFootballParams};
    use crate::solver::family_distance;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn point(alpha: f64, beta: f64, t: f64) -> (TriangulatedMetric, ConeAngleSpec) {
        let spec = ConeAngleSpec::new(alpha, beta).unwrap();
        let m = glued_football(&GluedFootballParams::new(spec, t).unwrap()).unwrap();
        (m, spec)
    }

    #[test]
    fn fixed_point() {
        let (m, spec) = point(FRAC_PI_2, FRAC_PI_2, FRAC_PI_3);
        let out = gauss_newton(&m, &spec, &GnOptions::default()).unwrap();
        assert!(out.iterations <= 1);
        assert!(out.metric.max_norm_distance(&m) < 1e-12);
    }

    #[test]
    fn small_perturbation_lands_on_family() {
        let (m, spec) = point(FRAC_PI_2, FRAC_PI_2, FRAC_PI_3);
        let mut start = m;
        for (l, d) in start.lengths.iter_mut().zip([4.0, -3.0, 2.0, 1.0, -2.5, 3.5]) {
            *l += d * 1e-3 / 9.0;
        }
        let out = gauss_newton(&start, &spec, &GnOptions::default()).unwrap();
        assert!(out.residual.norm() < 1e-11);
        assert!(out.metric.is_valid());
        let fit = family_distance(&out.metric, &spec);
        assert!(fit.distance < 1e-6, "{fit:?}");
    }

    #[test]
    fn invalid_start_is_a_boundary_failure() {
        let (_, spec) = point(1.0, 1.0, 1.0);
        let start = TriangulatedMetric::new([3.0, 3.0, 0.1, 0.1, 3.0, 3.0]);
        assert!(matches!(
            gauss_newton(&start, &spec, &GnOptions::default()),
            Err(GnFailure::Boundary { .. })
        ));
    }

    #[test]
    fn iteration_budget_is_respected() {
        let (m, spec) = point(1.0, 2.0, 1.2);
        let mut start = m;
        start.lengths[0] += 0.04;
        start.lengths[3] -= 0.03;
        let opts = GnOptions {
            max_iter: 2,
            ..GnOptions::default()
        };
        assert!(matches!(
            gauss_newton(&start, &spec, &opts),
            Err(GnFailure::NotConverged { iterations: 2, .. })
        ));
    }
}
