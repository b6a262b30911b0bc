use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::metric::{family_lengths, ConeAngleSpec, TriangulatedMetric};

const COARSE_POINTS: usize = 200;
const GOLDEN_TOL: f64 = 1e-13;

/// Closest member `g_s` of the glued-football family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyFit {
    pub s_star: f64,
    pub distance: f64,
}

fn distance_to(m: &TriangulatedMetric, spec: &ConeAngleSpec, s: f64) -> f64 {
    family_lengths(spec, s)
        .iter()
        .zip(&m.lengths)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Minimizes the Euclidean length distance `|m - g_s|` over `s in (0, pi)`:
/// a 200-point scan, then golden-section refinement between the scan
/// neighbours of the best node. Ties go to the smaller `s`.
pub fn family_distance(m: &TriangulatedMetric, spec: &ConeAngleSpec) -> FamilyFit {
    let node = |i: usize| PI * (i as f64 + 1.0) / (COARSE_POINTS as f64 + 1.0);
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for i in 0..COARSE_POINTS {
        let d = distance_to(m, spec, node(i));
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    let lo = if best == 0 { node(0) * 1e-3 } else { node(best - 1) };
    let hi = if best + 1 == COARSE_POINTS {
        PI - node(0) * 1e-3
    } else {
        node(best + 1)
    };

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = distance_to(m, spec, c);
    let mut fd = distance_to(m, spec, d);
    while b - a > GOLDEN_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = distance_to(m, spec, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = distance_to(m, spec, d);
        }
    }
    let mut fit = FamilyFit {
        s_star: (a + b) / 2.0,
        distance: distance_to(m, spec, (a + b) / 2.0),
    };
    if best_d < fit.distance {
        fit = FamilyFit {
            s_star: node(best),
            distance: best_d,
        };
    }
    fit
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn family_member_is_recovered() {
        let spec = ConeAngleSpec::new(1.0, 2.0).unwrap();
        for t in [0.4, FRAC_PI_3, 1.2, 2.8] {
            let m = TriangulatedMetric::new(family_lengths(&spec, t));
            let fit = family_distance(&m, &spec);
            assert!((fit.s_star - t).abs() < 1e-10, "{fit:?}");
            assert!(fit.distance < 1e-10);
        }
    }

    #[test]
    fn offset_in_l1_is_seen() {
        let spec = ConeAngleSpec::new(1.5, 1.5).unwrap();
        let t = 1.1;
        let delta = 1e-3;
        let mut m = TriangulatedMetric::new(family_lengths(&spec, t));
        m.lengths[0] += delta;
        let fit = family_distance(&m, &spec);
        // Brute-force oracle on a fine grid around t.
        let oracle = (0..=20_000)
            .map(|k| t - 0.01 + 0.02 * k as f64 / 20_000.0)
            .map(|s| distance_to(&m, &spec, s))
            .fold(f64::INFINITY, f64::min);
        assert!(fit.distance <= oracle + 1e-12);
        assert!(fit.distance >= delta / 6f64.sqrt());
        assert!((fit.s_star - t).abs() < delta);
    }
}
