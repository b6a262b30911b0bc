use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_open, LemmaError};

const ALPHA_NODES: usize = 2000;
/// A gap at or below this counts as a solution of the `T2` requirement.
const GAP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseBNode {
    pub l1: f64,
    pub cos_l5: f64,
    /// `(cos l5 - 1) / (cos beta - 1)`, which equals `sin^2 l1`.
    pub ratio: f64,
    /// Smallest `|1 + (cos l5 - 1) sin^2 alpha - cos beta|` over the alpha grid.
    pub min_gap: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseBReport {
    pub beta: f64,
    pub nodes: usize,
    pub feasible_case_b: usize,
    pub min_gap: f64,
    pub max_ratio: f64,
    pub excluded: bool,
    pub rows: Vec<CaseBNode>,
}

/// Checks, for each `l1` (with `l2 = pi - l1`), that the apex-`beta` triangle
/// on legs `l1` forces `(cos l5 - 1) / (cos beta - 1) < 1` while the second
/// triangle would need `sin^2 alpha` equal to its reciprocal. The second
/// requirement is scanned over a grid of `alpha` in `(0, pi)` that contains
/// `pi/2`; a node is feasible only if some `alpha` closes the gap.
pub fn lemma1_caseb_exclusion(beta: f64, l1_grid: &[f64]) -> Result<CaseBReport, LemmaError> {
    check_open("beta", beta, PI)?;
    for &l1 in l1_grid {
        check_open("l1", l1, PI)?;
        if l1 == FRAC_PI_2 {
            return Err(LemmaError::Domain {
                name: "l1",
                value: l1,
            });
        }
    }
    let cb = beta.cos();
    let rows: Vec<CaseBNode> = l1_grid
        .par_iter()
        .map(|&l1| {
            let cos_l5 = 1.0 + (cb - 1.0) * l1.sin().powi(2);
            let ratio = (cos_l5 - 1.0) / (cb - 1.0);
            let min_gap = (1..ALPHA_NODES)
                .map(|j| {
                    let a = PI * j as f64 / ALPHA_NODES as f64;
                    (1.0 + (cos_l5 - 1.0) * a.sin().powi(2) - cb).abs()
                })
                .fold(f64::INFINITY, f64::min);
            CaseBNode {
                l1,
                cos_l5,
                ratio,
                min_gap,
                feasible: ratio >= 1.0 || min_gap <= GAP_TOL,
            }
        })
        .collect();
    let feasible_case_b = rows.iter().filter(|r| r.feasible).count();
    Ok(CaseBReport {
        beta,
        nodes: rows.len(),
        feasible_case_b,
        min_gap: rows.iter().map(|r| r.min_gap).fold(f64::INFINITY, f64::min),
        max_ratio: rows.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max),
        excluded: feasible_case_b == 0,
        rows,
    })
}
