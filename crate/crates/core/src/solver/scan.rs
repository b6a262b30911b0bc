use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::residual;
use crate::metric::{ConeAngleSpec, TriangulatedMetric};
use crate::sphtrig::{side_from_sas, sine_rule_side, Branch};

pub const SCAN_HEADER: &str = "l1,l2,l3,l4,l5,l6,rA,rB,rD,rC,feasible";

/// Axis values for a defect scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub l1: Vec<f64>,
    pub l2: Vec<f64>,
    pub l3: Vec<f64>,
    pub l4: Vec<f64>,
}

impl ScanGrid {
    /// `n` evenly spaced values per axis in `[c - half_width, c + half_width]`
    /// around the first four lengths of `m`.
    pub fn around(m: &TriangulatedMetric, half_width: f64, n: usize) -> Self {
        let axis = |c: f64| -> Vec<f64> {
            match n {
                0 => Vec::new(),
                1 => vec![c],
                _ => (0..n)
                    .map(|k| c - half_width + 2.0 * half_width * k as f64 / (n - 1) as f64)
                    .collect(),
            }
        };
        Self {
            l1: axis(m.l1()),
            l2: axis(m.l2()),
            l3: axis(m.l3()),
            l4: axis(m.l4()),
        }
    }
}

/// How the remaining lengths are fixed at each grid node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ClosureRule {
    /// `l5`, `l6` close `T1`, `T3` with apex angles `alpha`, `beta`, so
    /// `rA = rB = 0` by construction.
    Apex,
    /// The angle at `D` is split as `alpha - 2 eps` and `beta + 2 eps`
    /// between `T2` and `T4`; `l5`, `l6` follow from those, and `l1`, `l2`
    /// from the apex angles with the chosen sine-rule branch. Only the
    /// `l3`, `l4` axes are used.
    DSplit { eps: f64, branch: Branch },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub lengths: [f64; 6],
    /// `(rA, rB, rD, rC)`; NaN when infeasible.
    pub residual: [f64; 4],
    pub feasible: bool,
}

fn closed(lengths: Option<[f64; 6]>, spec: &ConeAngleSpec) -> ScanRow {
    let nan = [f64::NAN; 4];
    match lengths {
        None => ScanRow {
            lengths: [f64::NAN; 6],
            residual: nan,
            feasible: false,
        },
        Some(lengths) => {
            let m = TriangulatedMetric::new(lengths);
            match residual(&m, spec) {
                Ok(r) => ScanRow {
                    lengths,
                    residual: r.0,
                    feasible: true,
                },
                Err(_) => ScanRow {
                    lengths,
                    residual: nan,
                    feasible: false,
                },
            }
        }
    }
}

/// Evaluates the constraint residual on every grid node, in row-major order
/// of the axes used by `rule`. Nodes where the closure has no solution or
/// the metric is invalid are flagged, not dropped.
pub fn defect_scan(spec: &ConeAngleSpec, grid: &ScanGrid, rule: ClosureRule) -> Vec<ScanRow> {
    let (alpha, beta) = (spec.alpha(), spec.beta());
    let mut rows = Vec::new();
    match rule {
        ClosureRule::Apex => {
            for &l1 in &grid.l1 {
                for &l2 in &grid.l2 {
                    for &l3 in &grid.l3 {
                        for &l4 in &grid.l4 {
                            let lengths = side_from_sas(l1, l1, alpha)
                                .and_then(|l5| Ok([l1, l2, l3, l4, l5, side_from_sas(l2, l2, beta)?]))
                                .ok();
                            rows.push(closed(lengths, spec));
                        }
                    }
                }
            }
        }
        ClosureRule::DSplit { eps, branch } => {
            for &l3 in &grid.l3 {
                for &l4 in &grid.l4 {
                    let lengths = (|| {
                        let l5 = side_from_sas(l3, l4, alpha - 2.0 * eps).ok()?;
                        let l6 = side_from_sas(l4, l3, beta + 2.0 * eps).ok()?;
                        let l1 = sine_rule_side(alpha / 2.0, l5 / 2.0, FRAC_PI_2, branch).ok()?;
                        let l2 = sine_rule_side(beta / 2.0, l6 / 2.0, FRAC_PI_2, branch).ok()?;
                        Some([l1, l2, l3, l4, l5, l6])
                    })();
                    rows.push(closed(lengths, spec));
                }
            }
        }
    }
    rows
}

/// Writes rows as CSV under [`SCAN_HEADER`]. Floats use the shortest
/// representation that parses back to the same value.
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SCAN_HEADER}")?;
    for row in rows {
        let mut fields: Vec<String> = row
            .lengths
            .iter()
            .chain(&row.residual)
            .map(|x| format!("{x:?}"))
            .collect();
        fields.push(row.feasible.to_string());
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::family_lengths;
    use std::f64::consts::FRAC_PI_3;

    #[test]
    fn apex_rule_fixes_a_and_b() {
        let spec = ConeAngleSpec::new(1.0, 2.0).unwrap();
        let m = TriangulatedMetric::new(family_lengths(&spec, 1.2));
        let rows = defect_scan(&spec, &ScanGrid::around(&m, 0.02, 3), ClosureRule::Apex);
        assert_eq!(rows.len(), 81);
        for row in rows.iter().filter(|r| r.feasible) {
            assert!(row.residual[0].abs() < 1e-12 && row.residual[1].abs() < 1e-12);
        }
        // Centre node is the family point itself.
        assert!(rows[40].residual.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn dsplit_rule_fixes_a_b_and_d() {
        let spec = ConeAngleSpec::new(FRAC_PI_2, FRAC_PI_2).unwrap();
        let m = TriangulatedMetric::new(family_lengths(&spec, FRAC_PI_3));
        let grid = ScanGrid::around(&m, 0.01, 3);
        let rule = ClosureRule::DSplit {
            eps: 0.01,
            branch: Branch::Obtuse,
        };
        let rows = defect_scan(&spec, &grid, rule);
        assert_eq!(rows.len(), 9);
        let feasible: Vec<_> = rows.iter().filter(|r| r.feasible).collect();
        assert!(!feasible.is_empty());
        for row in feasible {
            assert!(row.residual[..3].iter().all(|r| r.abs() < 1e-10), "{row:?}");
        }
    }

    #[test]
    fn infeasible_nodes_are_flagged() {
        let spec = ConeAngleSpec::new(FRAC_PI_2, FRAC_PI_2).unwrap();
        let grid = ScanGrid {
            l1: vec![],
            l2: vec![],
            l3: vec![0.1],
            l4: vec![3.0],
        };
        let rows = defect_scan(&spec, &grid, ClosureRule::DSplit { eps: 0.0, branch: Branch::Acute });
        assert_eq!(rows.len(), 1);
        assert!(!rows[0].feasible);
    }

    #[test]
    fn csv_round_trips() {
        let spec = ConeAngleSpec::new(1.0, 2.0).unwrap();
        let m = TriangulatedMetric::new(family_lengths(&spec, 1.2));
        let rows = defect_scan(&spec, &ScanGrid::around(&m, 0.01, 2), ClosureRule::Apex);
        let mut buf = Vec::new();
        write_scan_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(SCAN_HEADER));
        for (line, row) in lines.zip(&rows) {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f.len(), 11);
            for (s, x) in f.iter().zip(row.lengths.iter().chain(&row.residual)) {
                let y: f64 = s.parse().unwrap();
                assert!(y.to_bits() == x.to_bits() || (x.is_nan() && y.is_nan()));
            }
            assert_eq!(f[10], row.feasible.to_string());
        }
    }
}
