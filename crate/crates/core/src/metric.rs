//! Triangulated metrics: six edge lengths cutting the sphere into four
//! geodesic triangles, the glued-football family, cone angles and the JSON
//! metric document.
//!
//! Vertex labels: `A`, `B` carry the cone angles `alpha`, `beta`; the cone
//! point `C` appears as four copies `C1..C4` and `D` as two copies `D1, D2`.
//!
//! | length | edges             |
//! |--------|-------------------|
//! | `l1`   | `AC1`, `AC2`      |
//! | `l2`   | `BC3`, `BC4`      |
//! | `l3`   | `C1D1` = `C4D2`   |
//! | `l4`   | `C2D1` = `C3D2`   |
//! | `l5`   | `C1C2`            |
//! | `l6`   | `C3C4`            |
//!
//! Triangles: `T1 = (l1, l1, l5)` at `A`, `T2 = (l3, l4, l5)` at `D1`,
//! `T3 = (l2, l2, l6)` at `B`, `T4 = (l4, l3, l6)` at `D2`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::admissibility::AngleVector;
use crate::sphtrig::{self, SphericalTriangle, TrigError, Violation};

/// Side indices (into `l1..l6`, zero based) of `T1..T4`, ordered so that
/// the third side is opposite the apex (`A`, `D1`, `B`, `D2`).
pub const TRIANGLES: [[usize; 3]; 4] = [[0, 0, 4], [2, 3, 4], [1, 1, 5], [3, 2, 5]];

const FIELD_NAMES: [&str; 6] = ["l1", "l2", "l3", "l4", "l5", "l6"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("cone angle {name} = {value} outside the supported interval (0, pi)")]
    Angle { name: &'static str, value: f64 },
    #[error("slit length t = {0} outside (0, pi)")]
    Slit(f64),
    #[error("triangle T{triangle}: {violation}")]
    Invalid { triangle: usize, violation: Violation },
    #[error("{field} = {value} outside (0, pi)")]
    Range { field: &'static str, value: f64 },
    #[error("triangle T{triangle}: {source}")]
    Trig { triangle: usize, source: TrigError },
    #[error("malformed metric document: {0}")]
    Parse(String),
}

/// Target cone angles `(alpha, beta, alpha + beta, 4 pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeAngleSpec {
    alpha: f64,
    beta: f64,
}

impl ConeAngleSpec {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, MetricError> {
        for (name, value) in [("alpha", alpha), ("beta", beta)] {
            if !(value.is_finite() && value > 0.0 && value < PI) {
                return Err(MetricError::Angle { name, value });
            }
        }
        debug_assert!([alpha, beta, alpha + beta]
            .iter()
            .all(|x| (x / TAU).fract() != 0.0));
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(alpha, beta, alpha + beta, 4 pi)`, ordered as `(A, B, D, C)`.
    pub fn cone_vector(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.alpha + self.beta, 2.0 * TAU]
    }

    /// The cone vector divided by `2 pi`.
    pub fn normalized(&self) -> AngleVector {
        AngleVector::new(self.cone_vector().iter().map(|x| x / TAU).collect())
            .expect("cone angles are positive")
    }

    /// The same data with the two footballs exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            alpha: self.beta,
            beta: self.alpha,
        }
    }
}

/// Six edge lengths of a triangulated metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangulatedMetric {
    pub lengths: [f64; 6],
}

/// One failed invariant found by [`TriangulatedMetric::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricViolation {
    /// 1-based triangle index.
    pub triangle: usize,
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidityReport {
    pub violations: Vec<MetricViolation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Total angles at the four cone points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeAngles {
    pub theta_a: f64,
    pub theta_b: f64,
    pub theta_d: f64,
    pub theta_c: f64,
    /// Angle collected at each copy `C1..C4` (triangle corner plus the
    /// adjacent `T2`/`T4` corner).
    pub corner_totals: [f64; 4],
}

impl ConeAngles {
    /// `(theta_A, theta_B, theta_D, theta_C)`.
    pub fn as_array(&self) -> [f64; 4] {
        [self.theta_a, self.theta_b, self.theta_d, self.theta_c]
    }
}

impl TriangulatedMetric {
    pub fn new(lengths: [f64; 6]) -> Self {
        Self { lengths }
    }

    pub fn l1(&self) -> f64 {
        self.lengths[0]
    }
    pub fn l2(&self) -> f64 {
        self.lengths[1]
    }
    pub fn l3(&self) -> f64 {
        self.lengths[2]
    }
    pub fn l4(&self) -> f64 {
        self.lengths[3]
    }
    pub fn l5(&self) -> f64 {
        self.lengths[4]
    }
    pub fn l6(&self) -> f64 {
        self.lengths[5]
    }

    fn sides(&self, k: usize) -> (f64, f64, f64) {
        let [i, j, m] = TRIANGLES[k];
        (self.lengths[i], self.lengths[j], self.lengths[m])
    }

    /// Every violated invariant, tagged by triangle. Empty iff valid.
    pub fn validate(&self) -> ValidityReport {
        let mut violations = Vec::new();
        for k in 0..4 {
            let (a, b, c) = self.sides(k);
            violations.extend(
                sphtrig::triangle_violations(a, b, c)
                    .into_iter()
                    .map(|violation| MetricViolation {
                        triangle: k + 1,
                        violation,
                    }),
            );
        }
        ValidityReport { violations }
    }

    pub fn is_valid(&self) -> bool {
        (0..4).all(|k| {
            let (a, b, c) = self.sides(k);
            sphtrig::triangle_violations(a, b, c).is_empty()
        })
    }

    /// The four triangles, or the first violation found.
    pub fn triangles(&self) -> Result<[SphericalTriangle; 4], MetricError> {
        let mut out = [SphericalTriangle::new(1.0, 1.0, 1.0).expect("valid"); 4];
        for (k, slot) in out.iter_mut().enumerate() {
            let (a, b, c) = self.sides(k);
            *slot = SphericalTriangle::new(a, b, c).map_err(|e| match e {
                TrigError::Invalid(violation) => MetricError::Invalid {
                    triangle: k + 1,
                    violation,
                },
                source => MetricError::Trig {
                    triangle: k + 1,
                    source,
                },
            })?;
        }
        Ok(out)
    }

    /// Max-norm distance between length vectors.
    pub fn max_norm_distance(&self, other: &Self) -> f64 {
        self.lengths
            .iter()
            .zip(&other.lengths)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// The metric with the two footballs exchanged (`l1 <-> l2`, `l5 <-> l6`).
    pub fn swapped(&self) -> Self {
        let [l1, l2, l3, l4, l5, l6] = self.lengths;
        Self::new([l2, l1, l3, l4, l6, l5])
    }
}

/// Cone angles of every point of the triangulation.
pub fn cone_angles(m: &TriangulatedMetric) -> Result<ConeAngles, MetricError> {
    let [t1, t2, t3, t4] = m.triangles()?;
    let g1 = sphtrig::angles_from_sss(&t1);
    let g2 = sphtrig::angles_from_sss(&t2);
    let g3 = sphtrig::angles_from_sss(&t3);
    let g4 = sphtrig::angles_from_sss(&t4);
    // T2 = (C1D1, C2D1, C1C2): the angle opposite C2D1 sits at C1.
    // T4 = (C3D2, C4D2, C3C4): the angle opposite C4D2 sits at C3.
    let corner_totals = [
        g1.opp_b + g2.opp_b,
        g1.opp_a + g2.opp_a,
        g3.opp_b + g4.opp_b,
        g3.opp_a + g4.opp_a,
    ];
    Ok(ConeAngles {
        theta_a: g1.opp_c,
        theta_b: g3.opp_c,
        theta_d: g2.opp_c + g4.opp_c,
        theta_c: corner_totals.iter().sum(),
        corner_totals,
    })
}

/// Sum of the four triangle areas.
pub fn total_area(m: &TriangulatedMetric) -> Result<f64, MetricError> {
    Ok(m.triangles()?.iter().map(sphtrig::triangle_excess).sum())
}

/// A point of the glued-football family together with its angle data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GluedFootballParams {
    pub spec: ConeAngleSpec,
    pub t: f64,
}

impl GluedFootballParams {
    pub fn new(spec: ConeAngleSpec, t: f64) -> Result<Self, MetricError> {
        if !(t.is_finite() && t > 0.0 && t < PI) {
            return Err(MetricError::Slit(t));
        }
        Ok(Self { spec, t })
    }
}

/// Closed-form lengths of `g_s` without validation.
pub fn family_lengths(spec: &ConeAngleSpec, s: f64) -> [f64; 6] {
    let chord = |angle: f64| 2.0 * (s.sin() * (angle / 2.0).sin()).asin();
    [PI - s, PI - s, s, s, chord(spec.alpha), chord(spec.beta)]
}

/// `d/ds` of [`family_lengths`].
pub fn family_tangent(spec: &ConeAngleSpec, s: f64) -> [f64; 6] {
    let d = |angle: f64| {
        let k = (angle / 2.0).sin();
        2.0 * s.cos() * k / (1.0 - (s.sin() * k).powi(2)).sqrt()
    };
    [-1.0, -1.0, 1.0, 1.0, d(spec.alpha), d(spec.beta)]
}

/// Two footballs of angles `alpha`, `beta`, slit along a meridian of length
/// `t` from the pole `D` and cross-glued.
pub fn glued_football(p: &GluedFootballParams) -> Result<TriangulatedMetric, MetricError> {
    let m = TriangulatedMetric::new(family_lengths(&p.spec, p.t));
    m.triangles()?;
    Ok(m)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    alpha: f64,
    beta: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LengthsDoc {
    l1: f64,
    l2: f64,
    l3: f64,
    l4: f64,
    l5: f64,
    l6: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MetricDoc {
    spec: SpecDoc,
    lengths: LengthsDoc,
}

/// Renders the metric document (pretty JSON, shortest round-trip floats).
pub fn serialize(m: &TriangulatedMetric, spec: &ConeAngleSpec) -> Result<String, MetricError> {
    m.triangles()?;
    let [l1, l2, l3, l4, l5, l6] = m.lengths;
    let doc = MetricDoc {
        spec: SpecDoc {
            alpha: spec.alpha,
            beta: spec.beta,
        },
        lengths: LengthsDoc {
            l1,
            l2,
            l3,
            l4,
            l5,
            l6,
        },
    };
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| MetricError::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Parses a metric document. Lengths are range-checked but the triangle
/// inequalities are left to [`TriangulatedMetric::validate`], so corrupted
/// documents can still be inspected.
pub fn deserialize(text: &str) -> Result<(TriangulatedMetric, ConeAngleSpec), MetricError> {
    let doc: MetricDoc = serde_json::from_str(text).map_err(|e| MetricError::Parse(e.to_string()))?;
    let spec = ConeAngleSpec::new(doc.spec.alpha, doc.spec.beta)?;
    let l = doc.lengths;
    let lengths = [l.l1, l.l2, l.l3, l.l4, l.l5, l.l6];
    for (field, &value) in FIELD_NAMES.iter().zip(&lengths) {
        if !(value.is_finite() && value > 0.0 && value < PI) {
            return Err(MetricError::Range { field, value });
        }
    }
    Ok((TriangulatedMetric::new(lengths), spec))
}
