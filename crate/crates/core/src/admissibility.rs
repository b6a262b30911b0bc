//! Angle-data bookkeeping: conic Euler characteristic and the L1 distance
//! from `beta - 1` to the odd integer lattice.

use serde::{Deserialize, Serialize};

/// Normalized cone angles `beta_j` (the cone angle is `2 pi beta_j`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleVector(Vec<f64>);

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("normalized cone angle #{index} = {value} is not a positive finite number")]
pub struct AngleVectorError {
    pub index: usize,
    pub value: f64,
}

impl AngleVector {
    pub fn new(betas: Vec<f64>) -> Result<Self, AngleVectorError> {
        if let Some((index, &value)) = betas
            .iter()
            .enumerate()
            .find(|(_, b)| !(b.is_finite() && **b > 0.0))
        {
            return Err(AngleVectorError { index, value });
        }
        Ok(Self(betas))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Which integer lattice plays the role of the "odd" lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OddLattice {
    /// Integer vectors whose coordinate sum is odd.
    #[default]
    OddSum,
    /// Integer vectors whose coordinates are all odd.
    AllOdd,
}

/// `euler_base + sum(beta_j - 1)`; `euler_base = 2` for the sphere.
pub fn chi(v: &AngleVector, euler_base: i32) -> f64 {
    f64::from(euler_base) + v.as_slice().iter().map(|b| b - 1.0).sum::<f64>()
}

/// L1 distance from `beta - 1` to the chosen odd lattice.
///
/// For [`OddLattice::OddSum`], each coordinate is rounded to its nearest
/// integer; if the resulting sum is even, the coordinate whose move to its
/// second-nearest integer costs least is flipped. An empty vector has no
/// odd-sum lattice point, so the distance is infinite.
pub fn mp_distance(v: &AngleVector, lattice: OddLattice) -> f64 {
    let xs = v.as_slice().iter().map(|b| b - 1.0);
    match lattice {
        OddLattice::OddSum => {
            if v.is_empty() {
                return f64::INFINITY;
            }
            let mut cost = 0.0;
            let mut parity = 0i64;
            let mut cheapest_flip = f64::INFINITY;
            for x in xs {
                let m = x.round();
                let r = (x - m).abs();
                cost += r;
                parity += m as i64;
                cheapest_flip = cheapest_flip.min(1.0 - 2.0 * r);
            }
            if parity.rem_euclid(2) == 1 {
                cost
            } else {
                cost + cheapest_flip
            }
        }
        OddLattice::AllOdd => xs
            .map(|x| {
                let odd = 2.0 * ((x - 1.0) / 2.0).round() + 1.0;
                (x - odd).abs()
            })
            .sum(),
    }
}
