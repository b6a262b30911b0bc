//! Numerical verification suites for the triangle lemmas behind the rigidity
//! argument.
//!
//! Every corner angle is computed along the side-side-side route, from
//! isosceles base angles, and cross-checked against Napier's analogy where
//! the analogy is well conditioned.

mod bigon;
mod defect;
mod extremality;

pub use bigon::{lemma1_caseb_exclusion, CaseBNode, CaseBReport};
pub use defect::{
    half_piece_solve, inequality_sign, lemma2_defect, pair_defect, step1_asymmetric_exclusion,
    DefectNode, DefectSweep, HalfPiece, HalfPieceConfig, PairDefect, Regime,
};
pub use extremality::{lemma3_sweep, ExtremalityResult, ExtremumKind, Lemma3Sweep, DEGENERATE_TOL};

use thiserror::Error;

use crate::sphtrig::TrigError;

/// Defects closer to zero than this do not count as having a sign.
pub const SIGN_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LemmaError {
    #[error("{name} = {value} outside its domain")]
    Domain { name: &'static str, value: f64 },
    #[error("infeasible configuration: {0}")]
    Infeasible(#[from] TrigError),
    #[error("corner routes disagree: side-side-side {sss} vs Napier {napier}")]
    Disagreement { sss: f64, napier: f64 },
    #[error("no feasible node in the sweep")]
    NoFeasibleNodes,
}

fn check_open(name: &'static str, value: f64, hi: f64) -> Result<(), LemmaError> {
    if value.is_finite() && value > 0.0 && value < hi {
        Ok(())
    } else {
        Err(LemmaError::Domain { name, value })
    }
}

/// Sign with a dead zone of width `margin` around 0.
pub(crate) fn strict_sign(x: f64, margin: f64) -> i8 {
    if x > margin {
        1
    } else if x < -margin {
        -1
    } else {
        0
    }
}
