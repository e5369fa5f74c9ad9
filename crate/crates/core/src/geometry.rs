//! Points of two-particle configuration space-time and their classification.

use serde::{Deserialize, Serialize};

/// A point `(t1, z1, t2, z2)`: one space-time event per particle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub t1: f64,
    pub z1: f64,
    pub t2: f64,
    pub z2: f64,
}

impl Configuration {
    pub const fn new(t1: f64, z1: f64, t2: f64, z2: f64) -> Self {
        Self { t1, z1, t2, z2 }
    }

    /// Both particles at time `t`.
    pub const fn equal_time(t: f64, z1: f64, z2: f64) -> Self {
        Self::new(t, z1, t, z2)
    }

    pub fn is_finite(&self) -> bool {
        self.t1.is_finite() && self.z1.is_finite() && self.t2.is_finite() && self.z2.is_finite()
    }

    /// Exchange the roles of the two particles: `(t2, z2, t1, z1)`.
    pub fn swapped(&self) -> Self {
        Self::new(self.t2, self.z2, self.t1, self.z1)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.t1, self.z1, self.t2, self.z2]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

/// Which part of configuration space-time a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    /// Space-like with `z1 < z2`.
    Omega1,
    /// Space-like with `z1 > z2`.
    Omega2,
    /// `x1 = x2`.
    Coincidence,
    /// Null separation, excluding coincidence.
    LightLike,
    TimeLike,
}

impl RegionLabel {
    pub fn is_domain(self) -> bool {
        matches!(self, RegionLabel::Omega1 | RegionLabel::Omega2)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::Omega1 => "Omega1",
            RegionLabel::Omega2 => "Omega2",
            RegionLabel::Coincidence => "Coincidence",
            RegionLabel::LightLike => "LightLike",
            RegionLabel::TimeLike => "TimeLike",
        }
    }
}

/// Relative and centre coordinates: `z = z1 - z2`, `Z = z1 + z2`,
/// `tau = t1 - t2`, `T = t1 + t2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[allow(non_snake_case)]
pub struct RelativeCoords {
    pub z: f64,
    pub Z: f64,
    pub tau: f64,
    pub T: f64,
}

/// Minkowski interval between the two events, `(t1 - t2)^2 - (z1 - z2)^2`.
pub fn interval(c: &Configuration) -> f64 {
    let dt = c.t1 - c.t2;
    let dz = c.z1 - c.z2;
    dt * dt - dz * dz
}

/// Classify `c`. Separations with `|interval| <= tol * scale` count as null,
/// where `scale = max(1, max coordinate^2)`. `tol = 0` gives exact comparisons.
pub fn classify(c: &Configuration, tol: f64) -> RegionLabel {
    let scale = c
        .as_array()
        .iter()
        .fold(1.0_f64, |acc, x| acc.max(x * x));
    let thresh = tol * scale;
    let dt = c.t1 - c.t2;
    let dz = c.z1 - c.z2;
    if dt * dt + dz * dz <= thresh {
        return RegionLabel::Coincidence;
    }
    let s = interval(c);
    if s.abs() <= thresh {
        RegionLabel::LightLike
    } else if s > 0.0 {
        RegionLabel::TimeLike
    } else if dz < 0.0 {
        RegionLabel::Omega1
    } else {
        RegionLabel::Omega2
    }
}

pub fn to_relative(c: &Configuration) -> RelativeCoords {
    RelativeCoords {
        z: c.z1 - c.z2,
        Z: c.z1 + c.z2,
        tau: c.t1 - c.t2,
        T: c.t1 + c.t2,
    }
}

pub fn from_relative(r: &RelativeCoords) -> Configuration {
    Configuration {
        t1: 0.5 * (r.T + r.tau),
        z1: 0.5 * (r.Z + r.z),
        t2: 0.5 * (r.T - r.tau),
        z2: 0.5 * (r.Z - r.z),
    }
}
