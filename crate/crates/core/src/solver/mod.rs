//! The cone-angle constraint map on the six-length space and the numerical
//! machinery built on it.
//!
//! Four equations (`theta_A = alpha`, `theta_B = beta`, `theta_D = alpha + beta`,
//! `theta_C = 4 pi`) act on six lengths. A generic angle set would leave a
//! two-dimensional solution set; the glued-football family is a curve, and
//! the routines here probe whether anything else solves the system nearby.

mod family;
mod newton;
mod rigidity;
mod scan;

pub use family::{family_distance, FamilyFit};
pub use newton::{gauss_newton, GnFailure, GnOptions, GnOutcome};
pub use rigidity::{
    max_feasible_radius, rigidity_scan, RigidityOptions, RigidityReport, Solution, SolveOutcome,
};
pub use scan::{defect_scan, write_scan_csv, ClosureRule, ScanGrid, ScanRow, SCAN_HEADER};

use nalgebra::{DMatrix, SMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::metric::{cone_angles, ConeAngleSpec, MetricError, TriangulatedMetric};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-6;
/// Default relative singular-value threshold for the numerical rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-6;

pub type Jacobian = SMatrix<f64, 4, 6>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("finite-difference step {step:e} leaves the validity region along l{direction}")]
    StepCrossesBoundary { direction: usize, step: f64 },
    #[error("sampling radius {radius} exceeds the largest ball inside the validity region ({max})")]
    RadiusTooLarge { radius: f64, max: f64 },
    #[error("invalid option {name} = {value}")]
    Option { name: &'static str, value: f64 },
}

/// Cone-angle defects `(theta_A - alpha, theta_B - beta, theta_D - (alpha + beta), theta_C - 4 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintResidual(pub [f64; 4]);

impl ConstraintResidual {
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn r_a(&self) -> f64 {
        self.0[0]
    }
    pub fn r_b(&self) -> f64 {
        self.0[1]
    }
    pub fn r_d(&self) -> f64 {
        self.0[2]
    }
    pub fn r_c(&self) -> f64 {
        self.0[3]
    }
}

pub fn residual(
    m: &TriangulatedMetric,
    spec: &ConeAngleSpec,
) -> Result<ConstraintResidual, MetricError> {
    let theta = cone_angles(m)?.as_array();
    let target = spec.cone_vector();
    Ok(ConstraintResidual(std::array::from_fn(|i| theta[i] - target[i])))
}

/// Central-difference Jacobian of [`residual`] with respect to `l1..l6`.
///
/// If `m +- h e_j` leaves the validity region the step is halved up to four
/// times for that column before giving up.
pub fn jacobian(
    m: &TriangulatedMetric,
    spec: &ConeAngleSpec,
    h: f64,
) -> Result<Jacobian, SolverError> {
    if !(h.is_finite() && h > 0.0) {
        return Err(SolverError::Option { name: "h", value: h });
    }
    let mut j = Jacobian::zeros();
    for col in 0..6 {
        let mut step = h;
        let mut done = false;
        for _ in 0..5 {
            let mut plus = *m;
            let mut minus = *m;
            plus.lengths[col] += step;
            minus.lengths[col] -= step;
            if let (Ok(rp), Ok(rm)) = (residual(&plus, spec), residual(&minus, spec)) {
                for row in 0..4 {
                    j[(row, col)] = (rp.0[row] - rm.0[row]) / (2.0 * step);
                }
                done = true;
                break;
            }
            step /= 2.0;
        }
        if !done {
            return Err(SolverError::StepCrossesBoundary {
                direction: col + 1,
                step,
            });
        }
    }
    Ok(j)
}

/// Rank and descending singular values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankInfo {
    pub rank: usize,
    pub singular_values: Vec<f64>,
}

/// Counts singular values `>= rel_tol * sigma_1`. A zero matrix has rank 0.
pub fn numerical_rank(j: &DMatrix<f64>, rel_tol: f64) -> RankInfo {
    let mut sv: Vec<f64> = j.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = if top > 0.0 {
        sv.iter().filter(|&&s| s >= rel_tol * top).count()
    } else {
        0
    };
    RankInfo {
        rank,
        singular_values: sv,
    }
}

/// [`numerical_rank`] for the fixed-size constraint Jacobian.
pub fn jacobian_rank(j: &Jacobian, rel_tol: f64) -> RankInfo {
    numerical_rank(&DMatrix::from_column_slice(4, 6, j.as_slice()), rel_tol)
}
