use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_open, LemmaError};

/// Below this `|cos ell - cos beta|` the sweep is classified as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-9;

const EDGE: f64 = 1e-9;
const SCAN_CELLS: usize = 128;
const BISECT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalityResult {
    pub alpha_crit: f64,
    pub s_crit: f64,
    pub kind: ExtremumKind,
    /// `+1` for the root branch where `g` crosses zero downward, `-1` upward.
    pub branch: i8,
    /// `minimum` iff `alpha_crit < pi/2`.
    pub rule_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Sweep {
    pub ell: f64,
    pub beta: f64,
    pub n: usize,
    pub feasible_nodes: usize,
    pub skipped_nodes: usize,
    pub extrema: Vec<ExtremalityResult>,
}

/// `g(B) = cos C` residual for the triangle with angles `alpha`, `B` at the
/// ends of the side `ell` and angle `beta` opposite it.
fn g(alpha: f64, b: f64, ell: f64, beta: f64) -> f64 {
    -alpha.cos() * b.cos() + alpha.sin() * b.sin() * ell.cos() - beta.cos()
}

fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    let mut flo = f(lo);
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Roots `B` of `g` in `(EDGE, pi - EDGE)`, tagged by crossing direction.
fn roots(alpha: f64, ell: f64, beta: f64) -> Vec<(i8, f64)> {
    let f = |b: f64| g(alpha, b, ell, beta);
    let node = |k: usize| EDGE + (PI - 2.0 * EDGE) * k as f64 / SCAN_CELLS as f64;
    let mut out = Vec::new();
    let mut prev = f(node(0));
    for k in 1..=SCAN_CELLS {
        let cur = f(node(k));
        if prev != 0.0 && (prev < 0.0) != (cur < 0.0) {
            let tag = if prev > 0.0 { 1 } else { -1 };
            out.push((tag, bisect(node(k - 1), node(k), f)));
        }
        prev = cur;
    }
    out
}

fn branch_root(alpha: f64, ell: f64, beta: f64, branch: i8) -> Option<f64> {
    roots(alpha, ell, beta)
        .into_iter()
        .find(|&(tag, _)| tag == branch)
        .map(|(_, b)| b)
}

/// `ds/dalpha` along a root branch, from implicit differentiation of `g`.
fn slope(alpha: f64, b: f64, ell: f64) -> f64 {
    let g_alpha = alpha.sin() * b.cos() + alpha.cos() * b.sin() * ell.cos();
    let g_b = alpha.cos() * b.sin() + alpha.sin() * b.cos() * ell.cos();
    1.0 - g_alpha / g_b
}

/// Sweeps the angle `alpha` at one end of the side `ell` over an `n`-node
/// grid in `(0, pi)`, solves the angle sum `s = alpha + B` that keeps the
/// opposite angle at `beta`, and locates interior extrema of `s`.
///
/// Discrete extrema are refined by bisection on the sign of `ds/dalpha`.
/// When `cos ell = cos beta` (to [`DEGENERATE_TOL`]) the only critical point
/// is `alpha = pi/2`, `s = pi`, reported as degenerate.
pub fn lemma3_sweep(ell: f64, beta: f64, n: usize) -> Result<Lemma3Sweep, LemmaError> {
    check_open("ell", ell, PI)?;
    check_open("beta", beta, PI)?;
    if n < 3 {
        return Err(LemmaError::Domain {
            name: "n",
            value: n as f64,
        });
    }
    let alphas: Vec<f64> = (1..=n).map(|i| PI * i as f64 / (n + 1) as f64).collect();
    let solved: Vec<Vec<(i8, f64)>> = alphas.par_iter().map(|&a| roots(a, ell, beta)).collect();
    let feasible_nodes = solved.iter().filter(|r| !r.is_empty()).count();
    if feasible_nodes == 0 {
        return Err(LemmaError::NoFeasibleNodes);
    }
    let base = Lemma3Sweep {
        ell,
        beta,
        n,
        feasible_nodes,
        skipped_nodes: n - feasible_nodes,
        extrema: Vec::new(),
    };

    if (ell.cos() - beta.cos()).abs() < DEGENERATE_TOL {
        return Ok(Lemma3Sweep {
            extrema: vec![ExtremalityResult {
                alpha_crit: FRAC_PI_2,
                s_crit: PI,
                kind: ExtremumKind::Degenerate,
                branch: 0,
                rule_holds: true,
            }],
            ..base
        });
    }

    let mut extrema = Vec::new();
    for branch in [1i8, -1] {
        let s: Vec<Option<f64>> = solved
            .iter()
            .zip(&alphas)
            .map(|(r, &a)| r.iter().find(|(t, _)| *t == branch).map(|(_, b)| a + b))
            .collect();
        for i in 1..n - 1 {
            let (Some(prev), Some(mid), Some(next)) = (s[i - 1], s[i], s[i + 1]) else {
                continue;
            };
            let kind = if mid < prev && mid <= next {
                ExtremumKind::Minimum
            } else if mid > prev && mid >= next {
                ExtremumKind::Maximum
            } else {
                continue;
            };
            let (lo, hi) = (alphas[i - 1], alphas[i + 1]);
            let d = |a: f64| {
                branch_root(a, ell, beta, branch)
                    .map(|b| slope(a, b, ell))
                    .unwrap_or(f64::NAN)
            };
            let (dlo, dhi) = (d(lo), d(hi));
            let alpha_crit = if dlo.is_finite() && dhi.is_finite() && (dlo < 0.0) != (dhi < 0.0) {
                bisect(lo, hi, d)
            } else {
                alphas[i]
            };
            let s_crit = branch_root(alpha_crit, ell, beta, branch)
                .map(|b| alpha_crit + b)
                .unwrap_or(mid);
            extrema.push(ExtremalityResult {
                alpha_crit,
                s_crit,
                kind,
                branch,
                rule_holds: (kind == ExtremumKind::Minimum) == (alpha_crit < FRAC_PI_2),
            });
        }
    }
    extrema.sort_by(|a, b| a.alpha_crit.total_cmp(&b.alpha_crit));
    Ok(Lemma3Sweep { extrema, ..base })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    // Closed form of both branches: B = phi -+ acos(cos beta / R).
    fn closed_form_s(alpha: f64, ell: f64, beta: f64, branch: i8) -> Option<f64> {
        let p = alpha.sin() * ell.cos();
        let q = -alpha.cos();
        let r = p.hypot(q);
        let c = beta.cos() / r;
        if c.abs() > 1.0 {
            return None;
        }
        let b = (p.atan2(q) + f64::from(branch) * c.acos()).rem_euclid(2.0 * PI);
        (b > 0.0 && b < PI).then_some(alpha + b)
    }

    fn golden(lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> f64 {
        let k = (5f64.sqrt() - 1.0) / 2.0;
        let (mut a, mut b) = (lo, hi);
        while b - a > 1e-11 {
            let c = b - k * (b - a);
            let d = a + k * (b - a);
            if f(c) < f(d) {
                b = d;
            } else {
                a = c;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn closed_form_example() {
        let sweep = lemma3_sweep(FRAC_PI_3, FRAC_PI_2, 400).unwrap();
        assert_eq!(sweep.extrema.len(), 2);
        let (low, high) = (sweep.extrema[0], sweep.extrema[1]);
        let a0 = (1.0 / 3f64.sqrt()).acos();
        assert!((low.alpha_crit - a0).abs() < 1e-9, "{low:?}");
        assert!((low.s_crit - 1.910633).abs() < 1e-6);
        assert!((high.alpha_crit - 2.186276).abs() < 1e-6);
        // The right isosceles triangle has the largest angle sum among its
        // neighbours: the sweep classifies by the computed values.
        assert_eq!(low.kind, ExtremumKind::Maximum);
        assert_eq!(high.kind, ExtremumKind::Minimum);
        assert!(sweep.extrema.iter().all(|e| !e.rule_holds));
    }

    #[test]
    fn classification_matches_neighbouring_triangles() {
        // An explicit non-isosceles right triangle on the same base has a
        // smaller angle sum than the isosceles one.
        let (ell, beta) = (FRAC_PI_3, FRAC_PI_2);
        let a = 0.5;
        let b = branch_root(a, ell, beta, -1).unwrap();
        let c = (beta.cos() + a.cos() * b.cos()) / (a.sin() * b.sin());
        assert!((c.acos() - ell).abs() < 1e-10);
        assert!(a + b < 2.0 * (1.0 / 3f64.sqrt()).acos());
    }

    #[test]
    fn matches_golden_section_oracle() {
        for (ell, beta) in [(0.8, 2.0), (1.3, 2.9), (2.0, 2.6)] {
            let sweep = lemma3_sweep(ell, beta, 300).unwrap();
            assert!(!sweep.extrema.is_empty());
            for e in &sweep.extrema {
                let sign = if e.kind == ExtremumKind::Minimum { 1.0 } else { -1.0 };
                let f = |a: f64| sign * closed_form_s(a, ell, beta, e.branch).unwrap_or(f64::INFINITY);
                let a = golden(e.alpha_crit - 0.02, e.alpha_crit + 0.02, f);
                assert!((a - e.alpha_crit).abs() < 1e-6, "{ell} {beta} {e:?} {a}");
                assert!((e.alpha_crit - e.s_crit / 2.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn root_solver_matches_closed_form() {
        let (ell, beta) = (1.1, 2.2);
        for a in [0.3, 1.0, 1.7, 2.6] {
            for (tag, b) in roots(a, ell, beta) {
                let s = closed_form_s(a, ell, beta, tag).unwrap();
                assert!((a + b - s).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn degenerate_case() {
        let sweep = lemma3_sweep(FRAC_PI_3, FRAC_PI_3, 100).unwrap();
        assert_eq!(sweep.extrema.len(), 1);
        assert_eq!(sweep.extrema[0].kind, ExtremumKind::Degenerate);
    }

    #[test]
    fn no_extrema_when_ell_exceeds_beta() {
        let sweep = lemma3_sweep(2.0, 1.0, 200).unwrap();
        assert!(sweep.extrema.is_empty());
    }

    #[test]
    fn bad_inputs() {
        assert!(lemma3_sweep(0.0, 1.0, 10).is_err());
        assert!(lemma3_sweep(1.0, 1.0, 2).is_err());
    }
}
