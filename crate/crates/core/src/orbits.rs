//! Walker constellation generation and circular two-body propagation over a
//! spherical, uniformly rotating Earth.
//!
//! Frames: the inertial frame has its z axis along the rotation axis and its
//! x axis through the Greenwich meridian at t = 0, so the Earth-fixed frame
//! coincides with it at epoch and then rotates at [`EarthModel::rotation_rate_rad_s`].

use std::f64::consts::TAU;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the spherical Earth model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EarthModel {
    pub radius_km: f64,
    pub mu_km3s2: f64,
    pub rotation_rate_rad_s: f64,
}

impl Default for EarthModel {
    fn default() -> Self {
        Self {
            radius_km: 6378.137,
            mu_km3s2: 398_600.441_8,
            rotation_rate_rad_s: 7.292_115_9e-5,
        }
    }
}

impl EarthModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("radius_km", self.radius_km),
            ("mu_km3s2", self.mu_km3s2),
            ("rotation_rate_rad_s", self.rotation_rate_rad_s),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::input(name, format!("must be finite and positive, got {v}")));
            }
        }
        Ok(())
    }
}

/// How plane ascending nodes are spread around the equator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RaanSpread {
    /// Nodes over 180 degrees; the usual choice for polar constellations.
    Star,
    /// Nodes over the full 360 degrees.
    Delta,
}

impl RaanSpread {
    pub fn degrees(self) -> f64 {
        match self {
            RaanSpread::Star => 180.0,
            RaanSpread::Delta => 360.0,
        }
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        if deg == 180.0 {
            Ok(RaanSpread::Star)
        } else if deg == 360.0 {
            Ok(RaanSpread::Delta)
        } else {
            Err(Error::InvalidWalker(format!(
                "raan_spread_deg must be 180 or 360, got {deg}"
            )))
        }
    }
}

/// Parametric Walker pattern `T/P/F` at a single altitude and inclination.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkerSpec {
    pub total_sats: usize,
    pub planes: usize,
    pub phasing: usize,
    pub altitude_km: f64,
    pub inclination_deg: f64,
    pub raan_spread: RaanSpread,
}

impl WalkerSpec {
    pub fn new(
        total_sats: usize,
        planes: usize,
        phasing: usize,
        altitude_km: f64,
        inclination_deg: f64,
        raan_spread: RaanSpread,
    ) -> Result<Self> {
        let spec = Self {
            total_sats,
            planes,
            phasing,
            altitude_km,
            inclination_deg,
            raan_spread,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds a pattern using the default plane rule ([`default_plane_count`])
    /// and phasing 1 (0 for a single plane).
    pub fn with_default_planes(
        total_sats: usize,
        altitude_km: f64,
        inclination_deg: f64,
        raan_spread: RaanSpread,
    ) -> Result<Self> {
        if total_sats == 0 {
            return Err(Error::InvalidWalker("total_sats must be at least 1".into()));
        }
        let planes = default_plane_count(total_sats);
        Self::new(
            total_sats,
            planes,
            1.min(planes - 1),
            altitude_km,
            inclination_deg,
            raan_spread,
        )
    }

    /// GPS-like reference: 24 satellites in 6 planes at 55 degrees, 20,182 km.
    pub fn gps_reference() -> Self {
        Self {
            total_sats: 24,
            planes: 6,
            phasing: 1,
            altitude_km: crate::rflink::GPS_ALTITUDE_KM,
            inclination_deg: 55.0,
            raan_spread: RaanSpread::Delta,
        }
    }

    pub fn sats_per_plane(&self) -> usize {
        self.total_sats / self.planes
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_sats == 0 {
            return Err(Error::InvalidWalker("total_sats must be at least 1".into()));
        }
        if self.planes == 0 || !self.total_sats.is_multiple_of(self.planes) {
            return Err(Error::InvalidWalker(format!(
                "planes ({}) must divide total_sats ({})",
                self.planes, self.total_sats
            )));
        }
        if self.phasing >= self.planes {
            return Err(Error::InvalidWalker(format!(
                "phasing ({}) must satisfy 0 <= phasing < planes ({})",
                self.phasing, self.planes
            )));
        }
        if !(self.altitude_km.is_finite() && self.altitude_km > 0.0) {
            return Err(Error::InvalidWalker(format!(
                "altitude_km must be positive, got {}",
                self.altitude_km
            )));
        }
        if !(0.0..=180.0).contains(&self.inclination_deg) {
            return Err(Error::InvalidWalker(format!(
                "inclination_deg must be within [0, 180], got {}",
                self.inclination_deg
            )));
        }
        Ok(())
    }
}

/// Divisor of `total_sats` nearest to its square root, ties toward more planes.
pub fn default_plane_count(total_sats: usize) -> usize {
    assert!(total_sats > 0, "total_sats must be positive");
    let root = (total_sats as f64).sqrt();
    (1..=total_sats)
        .filter(|p| total_sats.is_multiple_of(*p))
        .min_by(|&a, &b| {
            let da = (a as f64 - root).abs();
            let db = (b as f64 - root).abs();
            da.total_cmp(&db).then(b.cmp(&a))
        })
        .expect("1 always divides")
}

/// Largest allowed ratio between planes and satellites per plane (either way
/// round) for a size to count as a usable Walker pattern under the default
/// plane rule. Prime sizes would otherwise collapse to a single plane.
pub const MAX_PLANE_ASPECT: f64 = 3.0;

pub fn is_balanced_size(total_sats: usize) -> bool {
    if total_sats == 0 {
        return false;
    }
    let planes = default_plane_count(total_sats);
    let per_plane = total_sats / planes;
    let (lo, hi) = (planes.min(per_plane) as f64, planes.max(per_plane) as f64);
    hi <= MAX_PLANE_ASPECT * lo
}

/// Nearest balanced size to `requested`; ties go to the larger size.
pub fn snap_size(requested: usize) -> usize {
    let requested = requested.max(1);
    (0..)
        .find_map(|d| {
            let up = requested + d;
            if is_balanced_size(up) {
                return Some(up);
            }
            requested.checked_sub(d).filter(|&down| is_balanced_size(down))
        })
        .expect("size 1 is always balanced")
}

/// Circular orbit elements. Angles in radians, normalized to `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularElements {
    pub semimajor_km: f64,
    pub inclination_rad: f64,
    pub raan_rad: f64,
    pub initial_anomaly_rad: f64,
}

impl CircularElements {
    pub fn mean_motion(&self, earth: &EarthModel) -> f64 {
        (earth.mu_km3s2 / self.semimajor_km.powi(3)).sqrt()
    }

    pub fn period_s(&self, earth: &EarthModel) -> f64 {
        TAU / self.mean_motion(earth)
    }
}

/// Position in the inertial frame, km.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EciPosition {
    pub x_km: f64,
    pub y_km: f64,
    pub z_km: f64,
}

/// Position in the Earth-fixed frame, km.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EcefPosition {
    pub x_km: f64,
    pub y_km: f64,
    pub z_km: f64,
}

macro_rules! impl_position {
    ($ty:ident) => {
        impl $ty {
            pub fn new(x_km: f64, y_km: f64, z_km: f64) -> Self {
                Self { x_km, y_km, z_km }
            }

            pub fn to_vector(self) -> Vector3<f64> {
                Vector3::new(self.x_km, self.y_km, self.z_km)
            }

            pub fn from_vector(v: Vector3<f64>) -> Self {
                Self::new(v.x, v.y, v.z)
            }

            pub fn norm(self) -> f64 {
                self.to_vector().norm()
            }
        }
    };
}

impl_position!(EciPosition);
impl_position!(EcefPosition);

fn normalize_angle(rad: f64) -> f64 {
    let a = rad.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Expands a Walker pattern into per-satellite elements, plane by plane.
pub fn walker_constellation(spec: &WalkerSpec, earth: &EarthModel) -> Result<Vec<CircularElements>> {
    spec.validate()?;
    let t = spec.total_sats as f64;
    let p = spec.planes as f64;
    let semimajor_km = earth.radius_km + spec.altitude_km;
    let inclination_rad = spec.inclination_deg.to_radians();

    let mut out = Vec::with_capacity(spec.total_sats);
    for plane in 0..spec.planes {
        let raan_deg = plane as f64 * spec.raan_spread.degrees() / p;
        for slot in 0..spec.sats_per_plane() {
            let anomaly_deg = slot as f64 * (360.0 * p / t) + (plane * spec.phasing) as f64 * (360.0 / t);
            out.push(CircularElements {
                semimajor_km,
                inclination_rad,
                raan_rad: normalize_angle(raan_deg.to_radians()),
                initial_anomaly_rad: normalize_angle(anomaly_deg.to_radians()),
            });
        }
    }
    Ok(out)
}

/// Inertial position at `t` seconds after epoch.
pub fn propagate(elements: &CircularElements, t: f64, earth: &EarthModel) -> EciPosition {
    let u = elements.initial_anomaly_rad + elements.mean_motion(earth) * t;
    let (su, cu) = u.sin_cos();
    let (si, ci) = elements.inclination_rad.sin_cos();
    let (so, co) = elements.raan_rad.sin_cos();
    let a = elements.semimajor_km;
    // Rz(raan) * Rx(inc) * [cos u, sin u, 0]
    EciPosition::new(a * (co * cu - so * ci * su), a * (so * cu + co * ci * su), a * si * su)
}

/// Rotates an inertial position into the Earth-fixed frame at time `t`.
pub fn eci_to_ecef(pos: EciPosition, t: f64, earth: &EarthModel) -> EcefPosition {
    let (s, c) = (earth.rotation_rate_rad_s * t).sin_cos();
    EcefPosition::new(c * pos.x_km + s * pos.y_km, -s * pos.x_km + c * pos.y_km, pos.z_km)
}

pub fn site_to_ecef(lat_deg: f64, lon_deg: f64, alt_km: f64, earth: &EarthModel) -> Result<EcefPosition> {
    if !(lat_deg.abs() <= 90.0) {
        return Err(Error::input("lat_deg", format!("|lat| must be <= 90, got {lat_deg}")));
    }
    let r = earth.radius_km + alt_km;
    let (slat, clat) = lat_deg.to_radians().sin_cos();
    let (slon, clon) = lon_deg.to_radians().sin_cos();
    Ok(EcefPosition::new(r * clat * clon, r * clat * slon, r * slat))
}

/// Earth-fixed positions of every satellite at `t`.
pub fn constellation_ecef(elements: &[CircularElements], t: f64, earth: &EarthModel) -> Vec<EcefPosition> {
    elements
        .iter()
        .map(|e| eci_to_ecef(propagate(e, t, earth), t, earth))
        .collect()
}
