//! Spherical cone metrics on the 2-sphere with cone angles
//! `(alpha, beta, alpha + beta, 4 pi)`.
//!
//! The crate builds the glued-football family `g_t`, evaluates the cone-angle
//! constraints on the six-length space of triangulated metrics, and checks
//! local rigidity of the family numerically (multi-start Gauss-Newton plus
//! Jacobian rank analysis), together with the supporting triangle lemmas,
//! the Euler-characteristic bookkeeping and the `cos r` eigenfunction check.

pub mod admissibility;
pub mod eigencheck;
pub mod lemmas;
pub mod metric;
pub mod report;
pub mod solver;
pub mod sphtrig;

pub use admissibility::{chi, mp_distance, AngleVector, OddLattice};
pub use eigencheck::{radial_residual, slit_continuity, RadialGrid};
pub use lemmas::{lemma2_defect, lemma3_sweep, Regime};
pub use metric::{
    cone_angles, glued_football, total_area, ConeAngleSpec, ConeAngles, GluedFootballParams,
    MetricError, TriangulatedMetric,
};
pub use report::{Report, RunConfig, VERSION};
pub use solver::{
    gauss_newton, residual, rigidity_scan, ConstraintResidual, GnOptions, RigidityOptions,
    RigidityReport, SolverError,
};
pub use sphtrig::{Branch, SphericalTriangle, TriangleAngles, TrigError};
