//! The planar domains the metrics are evaluated in.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{MetricError, Result};
use crate::geometry::PlanePoint;

/// One of the supported planar domains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    /// `|z| < 1`
    UnitDisk,
    /// `|z| > r`
    ExteriorDisk { r: f64 },
    /// `r < |z| < 1`
    Annulus { r: f64 },
    /// `0 < |z| < 1`
    PuncturedDisk,
}

impl Domain {
    pub fn annulus(r: f64) -> Result<Self> {
        if r > 0.0 && r < 1.0 {
            Ok(Domain::Annulus { r })
        } else {
            Err(MetricError::ParameterOutOfRange(format!("annulus needs 0 < r < 1, got {r}")))
        }
    }

    pub fn exterior(r: f64) -> Result<Self> {
        if r > 0.0 && r.is_finite() {
            Ok(Domain::ExteriorDisk { r })
        } else {
            Err(MetricError::ParameterOutOfRange(format!("exterior disk needs r > 0, got {r}")))
        }
    }

    /// Strict membership test; boundary points are outside.
    pub fn contains(&self, x: PlanePoint) -> bool {
        let m = x.norm();
        match *self {
            Domain::UnitDisk => m < 1.0,
            Domain::ExteriorDisk { r } => m > r,
            Domain::Annulus { r } => r < m && m < 1.0,
            Domain::PuncturedDisk => m > 0.0 && m < 1.0,
        }
    }

    pub fn check(&self, x: PlanePoint) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(MetricError::OutsideDomain { domain: self.to_string(), re: x.re, im: x.im })
        }
    }

    /// Euclidean distance from `x` to the boundary of the domain.
    pub fn boundary_distance(&self, x: PlanePoint) -> Result<f64> {
        self.check(x)?;
        let m = x.norm();
        Ok(match *self {
            Domain::UnitDisk => 1.0 - m,
            Domain::ExteriorDisk { r } => m - r,
            Domain::Annulus { r } => (m - r).min(1.0 - m),
            Domain::PuncturedDisk => m.min(1.0 - m),
        })
    }

    /// Radii of the boundary circles centred at the origin. The puncture of
    /// the punctured disk is not a circle and is not listed.
    pub fn boundary_radii(&self) -> Vec<f64> {
        match *self {
            Domain::UnitDisk | Domain::PuncturedDisk => vec![1.0],
            Domain::ExteriorDisk { r } => vec![r],
            Domain::Annulus { r } => vec![1.0, r],
        }
    }

    /// A random point of the domain, uniform by area for the bounded ones.
    /// Exterior points are drawn with `|z|` log-uniform on `(r, 4r)`.
    pub fn random_point<R: Rng + ?Sized>(&self, rng: &mut R) -> PlanePoint {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        loop {
            let m: f64 = match *self {
                Domain::UnitDisk | Domain::PuncturedDisk => rng.gen::<f64>().sqrt(),
                Domain::Annulus { r } => rng.gen_range(r * r..1.0f64).sqrt(),
                Domain::ExteriorDisk { r } => r * 4f64.powf(rng.gen::<f64>()),
            };
            let z = Complex64::from_polar(m, theta);
            if self.contains(z) {
                return z;
            }
        }
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::UnitDisk => write!(f, "unit disk"),
            Domain::ExteriorDisk { r } => write!(f, "exterior of the disk of radius {r}"),
            Domain::Annulus { r } => write!(f, "annulus R({r}, 1)"),
            Domain::PuncturedDisk => write!(f, "punctured unit disk"),
        }
    }
}
