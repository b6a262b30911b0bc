use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_open, strict_sign, LemmaError, SIGN_MARGIN};
use crate::sphtrig::{isosceles_base_angle, napier_corner, sine_rule_side, Branch};

/// Agreement required between the two corner routes.
const ROUTE_TOL: f64 = 1e-9;

/// One half of the symmetric configuration: a kite `A C D C'` cut along its
/// axis `AD`, with legs `AC = side` and `DC = ell`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPieceConfig {
    /// Half of the apex angle at `A`.
    pub apex_half: f64,
    /// Half of the share of the `D` angle carried by this piece.
    pub d_half: f64,
    pub ell: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPiece {
    pub side: f64,
    /// Full angle at `C`, in `(0, 2 pi)`.
    pub corner: f64,
    /// The Napier value, when the analogy is usable for these data.
    pub napier_corner: Option<f64>,
}

/// Leg `AC` by the sine rule, and the corner at `C` as the sum of the base
/// angles of the isosceles triangles `A C C'` and `D C C'`.
pub fn half_piece_solve(c: &HalfPieceConfig) -> Result<HalfPiece, LemmaError> {
    check_open("apex_half", c.apex_half, FRAC_PI_2)?;
    check_open("d_half", c.d_half, FRAC_PI_2)?;
    check_open("ell", c.ell, PI)?;
    let side = sine_rule_side(c.apex_half, c.ell, c.d_half, c.branch)?;
    let corner = isosceles_base_angle(side, 2.0 * c.apex_half)?
        + isosceles_base_angle(c.ell, 2.0 * c.d_half)?;
    let napier = napier_corner(c.apex_half, c.d_half, c.ell, side).ok();
    if let Some(n) = napier {
        if (n - corner).abs() > ROUTE_TOL {
            return Err(LemmaError::Disagreement {
                sss: corner,
                napier: n,
            });
        }
    }
    Ok(HalfPiece {
        side,
        corner,
        napier_corner: napier,
    })
}

/// Sign of `sin ell cos ell sin((l1 - l2) / 2)`.
pub fn inequality_sign(ell: f64, l1: f64, l2: f64) -> i8 {
    let p = ell.sin() * ell.cos() * ((l1 - l2) / 2.0).sin();
    if p > 0.0 {
        1
    } else if p < 0.0 {
        -1
    } else {
        0
    }
}

/// Which side of `pi / 2` the shared slit length lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `ell > pi/2`, the legs `l1`, `l2` below `pi/2`.
    Below,
    /// `ell < pi/2`, the legs above `pi/2`.
    Above,
}

impl Regime {
    pub fn branch(self) -> Branch {
        match self {
            Regime::Below => Branch::Acute,
            Regime::Above => Branch::Obtuse,
        }
    }

    /// Defect sign asserted for this regime when the product of
    /// [`inequality_sign`] is positive.
    pub fn claimed_sign(self) -> i8 {
        match self {
            Regime::Below => -1,
            Regime::Above => 1,
        }
    }

    /// `n` slit lengths evenly spaced strictly inside the regime's half of
    /// `(0, pi)`.
    pub fn ell_grid(self, n: usize) -> Vec<f64> {
        let offset = match self {
            Regime::Below => FRAC_PI_2,
            Regime::Above => 0.0,
        };
        (1..=n)
            .map(|k| offset + FRAC_PI_2 * k as f64 / (n + 1) as f64)
            .collect()
    }

    fn admits(self, ell: f64) -> bool {
        match self {
            Regime::Below => ell > FRAC_PI_2,
            Regime::Above => ell < FRAC_PI_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairDefect {
    pub l1: f64,
    pub l2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    /// `2 (alpha1 + alpha2) - 4 pi`.
    pub defect: f64,
    pub product_sign: i8,
}

/// Two half pieces sharing `ell`, with apex angles `apex1`, `apex2` and the
/// `D` angle redistributed as `apex1 - 2 eps` and `apex2 + 2 eps`.
pub fn pair_defect(
    apex1: f64,
    apex2: f64,
    eps: f64,
    ell: f64,
    regime: Regime,
) -> Result<PairDefect, LemmaError> {
    check_open("apex1", apex1, PI)?;
    check_open("apex2", apex2, PI)?;
    check_open("apex1 - 2 eps", apex1 - 2.0 * eps, PI)?;
    check_open("apex2 + 2 eps", apex2 + 2.0 * eps, PI)?;
    if !regime.admits(ell) {
        return Err(LemmaError::Domain { name: "ell", value: ell });
    }
    let piece = |apex: f64, d: f64| {
        half_piece_solve(&HalfPieceConfig {
            apex_half: apex / 2.0,
            d_half: d / 2.0,
            ell,
            branch: regime.branch(),
        })
    };
    let p1 = piece(apex1, apex1 - 2.0 * eps)?;
    let p2 = piece(apex2, apex2 + 2.0 * eps)?;
    Ok(PairDefect {
        l1: p1.side,
        l2: p2.side,
        alpha1: p1.corner,
        alpha2: p2.corner,
        defect: 2.0 * (p1.corner + p2.corner) - 4.0 * PI,
        product_sign: inequality_sign(ell, p1.side, p2.side),
    })
}

/// The symmetric case `apex1 = apex2 = beta`.
pub fn lemma2_defect(beta: f64, eps: f64, ell: f64, regime: Regime) -> Result<PairDefect, LemmaError> {
    pair_defect(beta, beta, eps, ell, regime)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectNode {
    pub ell: f64,
    /// `None` when the configuration does not exist.
    pub result: Option<PairDefect>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectSweep {
    pub apex1: f64,
    pub apex2: f64,
    pub eps: f64,
    pub regime: Regime,
    pub feasible: usize,
    pub infeasible: usize,
    pub positive: usize,
    pub negative: usize,
    /// Feasible nodes with `|defect| <= SIGN_MARGIN`.
    pub near_zero: usize,
    pub min_abs_defect: f64,
    /// All feasible nodes share one strict sign.
    pub single_strict_sign: bool,
    /// Nodes whose defect sign equals the regime's claimed sign times the
    /// sign of the cancelled product.
    pub product_agreements: usize,
    /// Every feasible node carries the regime's claimed sign and agrees
    /// with the product.
    pub claim_holds: bool,
    pub nodes: Vec<DefectNode>,
}

/// Sweeps [`pair_defect`] over `ell_grid` (nodes outside the regime count as
/// infeasible) and summarizes the sign structure.
pub fn step1_asymmetric_exclusion(
    apex1: f64,
    apex2: f64,
    eps: f64,
    ell_grid: &[f64],
    regime: Regime,
) -> DefectSweep {
    let nodes: Vec<DefectNode> = ell_grid
        .par_iter()
        .map(|&ell| DefectNode {
            ell,
            result: pair_defect(apex1, apex2, eps, ell, regime).ok(),
        })
        .collect();
    let feasible: Vec<&PairDefect> = nodes.iter().filter_map(|n| n.result.as_ref()).collect();
    let signs: Vec<i8> = feasible.iter().map(|d| strict_sign(d.defect, SIGN_MARGIN)).collect();
    let positive = signs.iter().filter(|&&s| s > 0).count();
    let negative = signs.iter().filter(|&&s| s < 0).count();
    let near_zero = signs.len() - positive - negative;
    let product_agreements = feasible
        .iter()
        .zip(&signs)
        .filter(|(d, &s)| s != 0 && s == regime.claimed_sign() * d.product_sign)
        .count();
    let n = feasible.len();
    DefectSweep {
        apex1,
        apex2,
        eps,
        regime,
        feasible: n,
        infeasible: nodes.len() - n,
        positive,
        negative,
        near_zero,
        min_abs_defect: feasible
            .iter()
            .map(|d| d.defect.abs())
            .fold(f64::INFINITY, f64::min),
        single_strict_sign: n > 0 && (positive == n || negative == n),
        product_agreements,
        claim_holds: n > 0
            && product_agreements == n
            && signs.iter().all(|&s| s == regime.claimed_sign()),
        nodes,
    }
}
