//! Built-in test functions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::HthError;

/// `δ₂ = 9Γ(5/2) / (2Γ(3)) = 27√π / 16`.
pub fn wendland_scale() -> f64 {
    27.0 * std::f64::consts::PI.sqrt() / 16.0
}

/// Wendland's `C⁴` function `(1 - r)₊⁶ (35r² + 18r + 3) / 3`.
pub fn wendland(r: f64) -> f64 {
    let t = (1.0 - r).max(0.0);
    t.powi(6) * (35.0 * r * r + 18.0 * r + 3.0) / 3.0
}

const AXES: [[f64; 3]; 6] = [
    [1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0],
    [0.0, 1.0, 0.0],
    [0.0, -1.0, 0.0],
    [0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinFunction {
    /// `4x⁵ sin(10x)` on `[-1, 1]`.
    IntervalOsc,
    /// `4x² sin(10x)` on `[-1, 1]`.
    IntervalTab,
    /// `(1 - |x|²) exp(|x|²)` on the unit disc.
    DiscExp,
    /// Sum of six scaled Wendland bumps centred at `±e_i` on the sphere.
    SphereWendland,
    /// `exp(-1/|x|²)` on the cube, 0 at the origin.
    CubeExp,
}

impl BuiltinFunction {
    pub const ALL: [BuiltinFunction; 5] = [
        Self::IntervalOsc,
        Self::IntervalTab,
        Self::DiscExp,
        Self::SphereWendland,
        Self::CubeExp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::IntervalOsc => "interval_osc",
            Self::IntervalTab => "interval_tab",
            Self::DiscExp => "disc_exp",
            Self::SphereWendland => "sphere_wendland",
            Self::CubeExp => "cube_exp",
        }
    }

    /// Dimension of the points the function expects.
    pub fn dim(self) -> usize {
        match self {
            Self::IntervalOsc | Self::IntervalTab => 1,
            Self::DiscExp => 2,
            Self::SphereWendland | Self::CubeExp => 3,
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            Self::IntervalOsc => 4.0 * x[0].powi(5) * (10.0 * x[0]).sin(),
            Self::IntervalTab => 4.0 * x[0] * x[0] * (10.0 * x[0]).sin(),
            Self::DiscExp => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                (1.0 - r2) * r2.exp()
            }
            Self::SphereWendland => {
                let delta = wendland_scale();
                AXES.iter()
                    .map(|z| {
                        let d2: f64 = z.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                        wendland(d2.sqrt() / delta)
                    })
                    .sum()
            }
            Self::CubeExp => {
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                if r2 == 0.0 {
                    0.0
                } else {
                    (-1.0 / r2).exp()
                }
            }
        }
    }
}

impl fmt::Display for BuiltinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BuiltinFunction {
    type Err = HthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| HthError::config(format!("unknown function {s:?}")))
    }
}
