//! Spherical trigonometry on the unit sphere.
//!
//! Every quantity is in radians. Sides and angles of proper triangles live in
//! the open interval `(0, pi)`. Inverse trigonometric arguments that drift
//! past `+-1` by at most [`CLAMP_TOL`] are clamped; anything further out is an
//! error, so roundoff and genuinely impossible data stay distinguishable.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Slack allowed on arccos/arcsin arguments before they count as corrupt.
pub const CLAMP_TOL: f64 = 1e-12;

/// Margin applied to every triangle inequality and range check.
pub const VALIDITY_MARGIN: f64 = 1e-10;

/// Which side of a triangle a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
    C,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Side::A => "a",
            Side::B => "b",
            Side::C => "c",
        };
        f.write_str(s)
    }
}

/// A violated triangle invariant. `margin` is how far inside the admissible
/// region the value would have to move (always positive for a violation).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Side outside `(0, pi)`.
    Range { side: Side, value: f64 },
    /// `side >= sum of the other two`.
    Inequality { side: Side, margin: f64 },
    /// `a + b + c >= 2 pi`.
    Perimeter { margin: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Range { side, value } => {
                write!(f, "side {side} = {value} outside (0, pi)")
            }
            Violation::Inequality { side, margin } => {
                write!(f, "side {side} violates the triangle inequality by {margin:e}")
            }
            Violation::Perimeter { margin } => {
                write!(f, "perimeter exceeds 2 pi by {margin:e}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrigError {
    #[error("{name} = {value} outside its domain")]
    Domain { name: &'static str, value: f64 },
    #[error("inverse-trig argument {value} is outside [-1, 1] beyond roundoff")]
    Corrupt { value: f64 },
    #[error("no spherical triangle with these data (argument {value})")]
    NoTriangle { value: f64 },
    #[error("invalid triangle: {0}")]
    Invalid(Violation),
    #[error("inconsistent data: equal sides opposite unequal angles")]
    Inconsistent,
    #[error("degenerate data: {0}")]
    Degenerate(&'static str),
}

/// Branch selector for the sine rule, which only determines `sin b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `b` in `(0, pi/2]`.
    Acute,
    /// `b` in `[pi/2, pi)`.
    Obtuse,
}

/// Three side lengths of a proper spherical triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalTriangle {
    a: f64,
    b: f64,
    c: f64,
}

/// Interior angles; `opp_a` is the angle opposite side `a`, etc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TriangleAngles {
    pub opp_a: f64,
    pub opp_b: f64,
    pub opp_c: f64,
}

impl TriangleAngles {
    pub fn sum(&self) -> f64 {
        self.opp_a + self.opp_b + self.opp_c
    }

    pub fn excess(&self) -> f64 {
        self.sum() - PI
    }
}

/// Lists every violated invariant of the side triple, with margins.
pub fn triangle_violations(a: f64, b: f64, c: f64) -> Vec<Violation> {
    let mut out = Vec::new();
    for (side, v) in [(Side::A, a), (Side::B, b), (Side::C, c)] {
        if !(v.is_finite() && v > VALIDITY_MARGIN && v < PI - VALIDITY_MARGIN) {
            out.push(Violation::Range { side, value: v });
        }
    }
    if !out.is_empty() {
        return out;
    }
    for (side, long, s1, s2) in [(Side::A, a, b, c), (Side::B, b, a, c), (Side::C, c, a, b)] {
        let slack = s1 + s2 - long;
        if slack <= VALIDITY_MARGIN {
            out.push(Violation::Inequality {
                side,
                margin: VALIDITY_MARGIN - slack,
            });
        }
    }
    let slack = 2.0 * PI - (a + b + c);
    if slack <= VALIDITY_MARGIN {
        out.push(Violation::Perimeter {
            margin: VALIDITY_MARGIN - slack,
        });
    }
    out
}

impl SphericalTriangle {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, TrigError> {
        match triangle_violations(a, b, c).into_iter().next() {
            Some(v) => Err(TrigError::Invalid(v)),
            None => Ok(Self { a, b, c }),
        }
    }

    pub fn sides(&self) -> (f64, f64, f64) {
        (self.a, self.b, self.c)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

fn check_open(name: &'static str, value: f64, hi: f64) -> Result<(), TrigError> {
    if value.is_finite() && value > 0.0 && value < hi {
        Ok(())
    } else {
        Err(TrigError::Domain { name, value })
    }
}

/// Clamps `x` into `[-1, 1]` if it is within [`CLAMP_TOL`]; otherwise reports
/// it through `err`.
fn clamp_unit(x: f64, err: fn(f64) -> TrigError) -> Result<f64, TrigError> {
    if x.is_nan() {
        return Err(TrigError::Corrupt { value: x });
    }
    if x > 1.0 + CLAMP_TOL || x < -1.0 - CLAMP_TOL {
        return Err(err(x));
    }
    Ok(x.clamp(-1.0, 1.0))
}

fn corrupt(value: f64) -> TrigError {
    TrigError::Corrupt { value }
}

fn no_triangle(value: f64) -> TrigError {
    TrigError::NoTriangle { value }
}

/// Third side from two sides and the included angle (cosine law).
///
/// Evaluated in haversine form, `sin^2(c/2) = sin^2((a-b)/2) + sin a sin b sin^2(C/2)`,
/// which is algebraically the cosine law but keeps full relative precision
/// for short sides.
pub fn side_from_sas(a: f64, b: f64, included: f64) -> Result<f64, TrigError> {
    check_open("a", a, PI)?;
    check_open("b", b, PI)?;
    check_open("C", included, PI)?;
    let d = ((a - b) / 2.0).sin();
    let h = (included / 2.0).sin();
    let hav = d * d + a.sin() * b.sin() * h * h;
    let hav = clamp_unit(hav, corrupt)?;
    Ok(2.0 * hav.max(0.0).sqrt().asin())
}

/// Interior angles from three sides.
///
/// Uses the half-angle form `tan(A/2) = sqrt(sin(s-b) sin(s-c) / (sin s sin(s-a)))`
/// with `s` the half perimeter; it is equivalent to the cosine law and stays
/// accurate for small and near-straight angles.
pub fn angles_from_sss(t: &SphericalTriangle) -> TriangleAngles {
    let (a, b, c) = t.sides();
    let s = (a + b + c) / 2.0;
    let ss = s.sin();
    let sa = (s - a).sin();
    let sb = (s - b).sin();
    let sc = (s - c).sin();
    let half = |x: f64, y: f64, z: f64| 2.0 * (y * z).sqrt().atan2((ss * x).sqrt());
    TriangleAngles {
        opp_a: half(sa, sb, sc),
        opp_b: half(sb, sa, sc),
        opp_c: half(sc, sa, sb),
    }
}

/// Checked form of [`angles_from_sss`] for raw side triples.
pub fn angles_from_sides(a: f64, b: f64, c: f64) -> Result<TriangleAngles, TrigError> {
    Ok(angles_from_sss(&SphericalTriangle::new(a, b, c)?))
}

/// Angle opposite side `c` from the two adjacent angles and `c`
/// (polar cosine law): `cos C = -cos A cos B + sin A sin B cos c`.
pub fn dual_cosine_angle(a_angle: f64, b_angle: f64, c: f64) -> Result<f64, TrigError> {
    check_open("A", a_angle, PI)?;
    check_open("B", b_angle, PI)?;
    check_open("c", c, PI)?;
    let x = -a_angle.cos() * b_angle.cos() + a_angle.sin() * b_angle.sin() * c.cos();
    Ok(clamp_unit(x, no_triangle)?.acos())
}

/// Angle `C` from two angles and their opposite sides via Napier's analogy
/// `cot(C/2) = tan((A-B)/2) sin((a+b)/2) / sin((a-b)/2)`.
///
/// The analogy stays meaningful for "triangles" that are re-entrant at `C`,
/// so the result lies in `(0, 2 pi)`; `pi` means `C` sits on the geodesic
/// joining the other two vertices. With `A = B` and `a = b` the isosceles
/// relation `cot(C/2) = cos a tan A` is used instead.
pub fn napier_corner(a_angle: f64, b_angle: f64, a: f64, b: f64) -> Result<f64, TrigError> {
    check_open("A", a_angle, PI)?;
    check_open("B", b_angle, PI)?;
    check_open("a", a, PI)?;
    check_open("b", b, PI)?;
    let angles_equal = (a_angle - b_angle).abs() <= 1e-14;
    let den = ((a - b) / 2.0).sin();
    if den.abs() < 1e-14 {
        if !angles_equal {
            return Err(if a == b {
                TrigError::Inconsistent
            } else {
                TrigError::Degenerate("sides nearly equal opposite unequal angles")
            });
        }
        // Isosceles: cot(C/2) = cos a sin A / cos A.
        let y = a_angle.cos();
        let x = a.cos() * a_angle.sin();
        if y.abs() < 1e-14 {
            return Err(TrigError::Degenerate(
                "right base angles leave the isosceles apex undetermined",
            ));
        }
        let (y, x) = if y < 0.0 { (-y, -x) } else { (y, x) };
        return Ok(2.0 * y.atan2(x));
    }
    let num = ((a_angle - b_angle) / 2.0).tan() * ((a + b) / 2.0).sin();
    // cot(C/2) = num / den with C/2 in (0, pi): put the sign on the cosine.
    let (y, x) = if den < 0.0 { (-den, -num) } else { (den, num) };
    Ok(2.0 * y.atan2(x))
}

/// Side `b` opposite angle `B` from the pair `(A, a)` via the sine rule.
pub fn sine_rule_side(a_angle: f64, a: f64, b_angle: f64, branch: Branch) -> Result<f64, TrigError> {
    check_open("A", a_angle, PI)?;
    check_open("a", a, PI)?;
    check_open("B", b_angle, PI)?;
    let ratio = b_angle.sin() * a.sin() / a_angle.sin();
    let ratio = clamp_unit(ratio, no_triangle)?;
    let acute = ratio.asin();
    Ok(match branch {
        Branch::Acute => acute,
        Branch::Obtuse => PI - acute,
    })
}

/// Spherical excess `A + B + C - pi`, i.e. the area on the unit sphere.
///
/// Computed with L'Huilier's formula so that thin triangles keep their
/// (small, positive) area instead of cancelling to zero.
pub fn triangle_excess(t: &SphericalTriangle) -> f64 {
    let (a, b, c) = t.sides();
    let s = (a + b + c) / 2.0;
    let q = (s / 2.0).tan()
        * ((s - a) / 2.0).tan()
        * ((s - b) / 2.0).tan()
        * ((s - c) / 2.0).tan();
    4.0 * q.max(0.0).sqrt().atan()
}

/// Base angle of an isosceles triangle with legs `leg` and apex angle `apex`.
pub fn isosceles_base_angle(leg: f64, apex: f64) -> Result<f64, TrigError> {
    let base = side_from_sas(leg, leg, apex)?;
    Ok(angles_from_sides(leg, leg, base)?.opp_a)
}
