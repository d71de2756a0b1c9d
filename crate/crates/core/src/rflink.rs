//! Free-space path loss, footprint geometry, jammer range and material
//! penetration at L-band.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::orbits::EarthModel;

/// Speed of light, m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;
/// GPS L1 carrier, Hz.
pub const L1_HZ: f64 = 1.575_42e9;
pub const GPS_ALTITUDE_KM: f64 = 20_182.0;
pub const GALILEO_ALTITUDE_KM: f64 = 23_222.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LinkParams {
    pub frequency_hz: f64,
    /// Name of the carrier the frequency refers to.
    pub reference: String,
}

impl Default for LinkParams {
    fn default() -> Self {
        Self {
            frequency_hz: L1_HZ,
            reference: "L1".into(),
        }
    }
}

/// Anchor of the free-space jammer model: a jammer of `ref_power_w` is
/// effective out to `ref_radius_m` at 0 dB margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct JammerCalibration {
    pub ref_power_w: f64,
    pub ref_radius_m: f64,
}

impl JammerCalibration {
    /// 500 mW reaches 750 m with no margin.
    pub const RADIUS_ANCHORED: JammerCalibration = JammerCalibration {
        ref_power_w: 0.5,
        ref_radius_m: 750.0,
    };

    /// 10 mW reaches 100 m with no margin (500 mW then reaches ≈707 m).
    pub const POWER_ANCHORED: JammerCalibration = JammerCalibration {
        ref_power_w: 0.01,
        ref_radius_m: 100.0,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.ref_power_w > 0.0 && self.ref_radius_m > 0.0) {
            return Err(Error::input("jammer", "reference power and radius must be positive"));
        }
        Ok(())
    }
}

impl Default for JammerCalibration {
    fn default() -> Self {
        Self::POWER_ANCHORED
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub name: String,
    /// Loss per pass, dB.
    pub loss_db: f64,
}

/// Canopy label reached once the margin meets `min_margin_db`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanopyThreshold {
    pub min_margin_db: f64,
    pub category: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MaterialLossTable {
    pub materials: Vec<Material>,
    pub canopy: Vec<CanopyThreshold>,
}

impl Default for MaterialLossTable {
    fn default() -> Self {
        let m = |name: &str, loss_db| Material {
            name: name.into(),
            loss_db,
        };
        let c = |min_margin_db, category: &str| CanopyThreshold {
            min_margin_db,
            category: category.into(),
        };
        Self {
            materials: vec![
                m("wood", 10.0),
                m("brick", 12.0),
                m("reinforced_concrete", 15.0),
                m("heat_protected_glass", 17.0),
                m("shipping_container", 25.0),
            ],
            canopy: vec![
                c(0.0, "Limited"),
                c(5.0, "Deciduous"),
                c(10.0, "Redwoods"),
                c(20.0, "Most"),
            ],
        }
    }
}

impl MaterialLossTable {
    pub fn validate(&self) -> Result<()> {
        if self.materials.iter().any(|m| !(m.loss_db > 0.0)) {
            return Err(Error::input("materials", "every loss_db must be positive"));
        }
        if self.materials.windows(2).any(|w| w[0].loss_db >= w[1].loss_db) {
            return Err(Error::input("materials", "losses must be strictly increasing"));
        }
        if self.canopy.windows(2).any(|w| w[0].min_margin_db >= w[1].min_margin_db) {
            return Err(Error::input("canopy", "thresholds must be strictly increasing"));
        }
        Ok(())
    }

    pub fn canopy_category(&self, margin_db: f64) -> &str {
        self.canopy
            .iter()
            .rev()
            .find(|c| margin_db >= c.min_margin_db)
            .map(|c| c.category.as_str())
            .unwrap_or("None")
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::input(name, format!("must be finite and positive, got {v}")))
    }
}

/// `20·log10(4π·d·f/c)`, distance in km.
pub fn fspl_db(distance_km: f64, frequency_hz: f64) -> Result<f64> {
    positive("distance_km", distance_km)?;
    positive("frequency_hz", frequency_hz)?;
    Ok(20.0 * (4.0 * PI * distance_km * 1e3 * frequency_hz / SPEED_OF_LIGHT_M_S).log10())
}

/// Distance from a ground observer to a satellite at `altitude_km` seen at `elevation_deg`.
pub fn slant_range_km(altitude_km: f64, elevation_deg: f64, earth: &EarthModel) -> Result<f64> {
    if !(altitude_km >= 0.0) {
        return Err(Error::input(
            "altitude_km",
            format!("must be non-negative, got {altitude_km}"),
        ));
    }
    if !(0.0..=90.0).contains(&elevation_deg) {
        return Err(Error::input(
            "elevation_deg",
            format!("must be within [0, 90], got {elevation_deg}"),
        ));
    }
    if elevation_deg == 90.0 {
        return Ok(altitude_km);
    }
    let r = earth.radius_km;
    let s = elevation_deg.to_radians().sin();
    Ok(-r * s + (r * r * s * s + altitude_km * altitude_km + 2.0 * r * altitude_km).sqrt())
}

/// Earth-central half angle (radians) of the region seeing the satellite above `mask_deg`.
pub fn coverage_half_angle_rad(altitude_km: f64, mask_deg: f64, earth: &EarthModel) -> Result<f64> {
    if !(altitude_km >= 0.0) {
        return Err(Error::input(
            "altitude_km",
            format!("must be non-negative, got {altitude_km}"),
        ));
    }
    if !(0.0..90.0).contains(&mask_deg) {
        return Err(Error::input(
            "mask_deg",
            format!("must be within [0, 90), got {mask_deg}"),
        ));
    }
    let mask = mask_deg.to_radians();
    let r = earth.radius_km;
    Ok((r * mask.cos() / (r + altitude_km)).acos() - mask)
}

/// Spherical-cap area on the Earth's surface that sees the satellite above the mask.
pub fn footprint_area_km2(altitude_km: f64, mask_deg: f64, earth: &EarthModel) -> Result<f64> {
    let lambda = coverage_half_angle_rad(altitude_km, mask_deg, earth)?;
    Ok(2.0 * PI * earth.radius_km.powi(2) * (1.0 - lambda.cos()))
}

/// Power-density gain of the smaller LEO footprint over the MEO one, dB.
pub fn footprint_gain_db(leo_altitude_km: f64, meo_altitude_km: f64, mask_deg: f64, earth: &EarthModel) -> Result<f64> {
    if leo_altitude_km > meo_altitude_km {
        return Err(Error::input(
            "leo_altitude_km",
            format!("{leo_altitude_km} km exceeds the MEO altitude {meo_altitude_km} km"),
        ));
    }
    positive("leo_altitude_km", leo_altitude_km)?;
    let leo = footprint_area_km2(leo_altitude_km, mask_deg, earth)?;
    let meo = footprint_area_km2(meo_altitude_km, mask_deg, earth)?;
    Ok(10.0 * (meo / leo).log10())
}

/// Distance within which a jammer overcomes `margin_db` of extra signal, free-space.
pub fn jammer_effective_radius_m(jammer_power_w: f64, margin_db: f64, cal: &JammerCalibration) -> Result<f64> {
    positive("jammer_power_w", jammer_power_w)?;
    if !(margin_db >= 0.0) {
        return Err(Error::input(
            "margin_db",
            format!("must be non-negative, got {margin_db}"),
        ));
    }
    cal.validate()?;
    Ok(cal.ref_radius_m * (jammer_power_w / cal.ref_power_w).sqrt() * 10f64.powf(-margin_db / 20.0))
}

/// Jammer power needed to be effective out to `radius_m`; inverse of [`jammer_effective_radius_m`].
pub fn jammer_power_for_radius_w(radius_m: f64, margin_db: f64, cal: &JammerCalibration) -> Result<f64> {
    positive("radius_m", radius_m)?;
    if !(margin_db >= 0.0) {
        return Err(Error::input(
            "margin_db",
            format!("must be non-negative, got {margin_db}"),
        ));
    }
    cal.validate()?;
    Ok(cal.ref_power_w * (radius_m / cal.ref_radius_m).powi(2) * 10f64.powf(margin_db / 10.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenetrationReport {
    pub margin_db: f64,
    pub canopy: String,
    /// (material name, whole passes the margin pays for)
    pub counts: Vec<(String, u32)>,
}

pub fn penetration_report(margin_db: f64, table: &MaterialLossTable) -> Result<PenetrationReport> {
    if !(margin_db >= 0.0) {
        return Err(Error::input(
            "margin_db",
            format!("must be non-negative, got {margin_db}"),
        ));
    }
    Ok(PenetrationReport {
        margin_db,
        canopy: table.canopy_category(margin_db).to_string(),
        counts: table
            .materials
            .iter()
            .map(|m| (m.name.clone(), (margin_db / m.loss_db).floor() as u32))
            .collect(),
    })
}
