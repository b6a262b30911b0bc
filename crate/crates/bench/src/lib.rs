//! Fixtures shared by the criterion benches.

use conelab::{glued_football, ConeAngleSpec, GluedFootballParams, TriangulatedMetric};

/// `g_t` for `(alpha, beta, t)` together with its angle data.
pub fn family_point(alpha: f64, beta: f64, t: f64) -> (TriangulatedMetric, ConeAngleSpec) {
    let spec = ConeAngleSpec::new(alpha, beta).expect("supported angles");
    let p = GluedFootballParams::new(spec, t).expect("slit in (0, pi)");
    (glued_football(&p).expect("valid family point"), spec)
}

/// `m` shifted by a fixed, sign-alternating offset of max-norm `radius`.
pub fn perturbed(m: &TriangulatedMetric, radius: f64) -> TriangulatedMetric {
    let pattern = [0.7, -0.4, 1.0, -0.9, 0.3, -0.6];
    let mut out = *m;
    for (l, p) in out.lengths.iter_mut().zip(pattern) {
        *l += radius * p;
    }
    out
}
