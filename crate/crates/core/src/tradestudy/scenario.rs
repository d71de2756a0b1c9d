use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Aggregation, CoverageConfig, GridScheme, GroundGrid, TimeWindow};
use crate::orbits::{EarthModel, RaanSpread, WalkerSpec};
use crate::payload::{LeoPayloadConfig, PayloadHeritage};
use crate::rflink::{JammerCalibration, LinkParams, MaterialLossTable, GALILEO_ALTITUDE_KM, GPS_ALTITUDE_KM};

/// Single-constellation settings and the defaults applied to swept sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WalkerSection {
    pub total_sats: usize,
    /// `None` applies the default plane rule.
    pub planes: Option<usize>,
    pub phasing: usize,
    pub altitude_km: f64,
    pub inclination_deg: f64,
    pub raan_spread_deg: f64,
}

impl Default for WalkerSection {
    fn default() -> Self {
        Self {
            total_sats: 300,
            planes: None,
            phasing: 1,
            altitude_km: 900.0,
            inclination_deg: 90.0,
            raan_spread_deg: 180.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GridSection {
    pub scheme: GridScheme,
    pub sites: usize,
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            scheme: GridScheme::Fibonacci,
            sites: 500,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct JammerSection {
    pub ref_power_w: f64,
    pub ref_radius_m: f64,
    /// Jammer power for the effective-radius column.
    pub jammer_power_w: f64,
    /// Radius for the required-power column.
    pub target_radius_m: f64,
    pub margins_db: Vec<f64>,
}

impl Default for JammerSection {
    fn default() -> Self {
        let cal = JammerCalibration::default();
        Self {
            ref_power_w: cal.ref_power_w,
            ref_radius_m: cal.ref_radius_m,
            jammer_power_w: 0.5,
            target_radius_m: 100.0,
            margins_db: vec![0.0, 5.0, 10.0, 20.0, 30.0],
        }
    }
}

impl JammerSection {
    pub fn calibration(&self) -> JammerCalibration {
        JammerCalibration {
            ref_power_w: self.ref_power_w,
            ref_radius_m: self.ref_radius_m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct PayloadSection {
    pub heritage: PayloadHeritage,
    pub leo: LeoPayloadConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepSection {
    pub sizes: Vec<usize>,
    pub altitudes_km: Vec<f64>,
    pub mask_deg: f64,
    pub percentile: f64,
    pub aggregation: Aggregation,
    /// PDOP the sizing search must reach; `None` uses the GPS baseline.
    pub pdop_target: Option<f64>,
    pub optimize_altitude_km: f64,
    pub search_start: usize,
    pub size_ceiling: usize,
    pub pathloss_altitudes_km: Vec<f64>,
    pub pathloss_elevation_deg: f64,
    pub footprint_altitudes_km: Vec<f64>,
    pub footprint_masks_deg: Vec<f64>,
    pub meo_altitude_km: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            sizes: vec![200, 250, 300, 350, 400],
            altitudes_km: vec![600.0, 800.0, 1000.0, 1200.0, 1400.0],
            mask_deg: 5.0,
            percentile: 95.0,
            aggregation: Aggregation::Pooled,
            pdop_target: None,
            optimize_altitude_km: 900.0,
            search_start: 24,
            size_ceiling: 1000,
            pathloss_altitudes_km: vec![
                500.0,
                750.0,
                1000.0,
                1500.0,
                2000.0,
                5000.0,
                10_000.0,
                GPS_ALTITUDE_KM,
                GALILEO_ALTITUDE_KM,
            ],
            pathloss_elevation_deg: 90.0,
            footprint_altitudes_km: (0..=9).map(|k| 500.0 + 100.0 * k as f64).collect(),
            footprint_masks_deg: vec![0.0, 10.0, 20.0, 30.0],
            meo_altitude_km: GALILEO_ALTITUDE_KM,
        }
    }
}

/// Everything one trade-study run needs. Every field has a default, so an
/// empty scenario file is a complete desk-scale scenario.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Scenario {
    pub earth: EarthModel,
    pub walker: WalkerSection,
    pub grid: GridSection,
    pub window: TimeWindow,
    pub link: LinkParams,
    pub jammer: JammerSection,
    pub materials: MaterialLossTable,
    pub payload: PayloadSection,
    pub sweep: SweepSection,
}

fn key_err(key: &str, e: Error) -> Error {
    match e {
        Error::InvalidInput { reason, .. } => Error::scenario(key, reason),
        Error::InvalidWalker(msg) => Error::scenario(key, msg),
        other => Error::scenario(key, other.to_string()),
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        self.earth.validate().map_err(|e| key_err("earth", e))?;

        let w = &self.walker;
        if w.total_sats == 0 {
            return Err(Error::scenario("walker.total_sats", "must be at least 1"));
        }
        if let Some(p) = w.planes {
            if p == 0 || !w.total_sats.is_multiple_of(p) {
                return Err(Error::scenario(
                    "walker.planes",
                    format!("walker.planes ({p}) must divide walker.total_sats ({})", w.total_sats),
                ));
            }
        }
        RaanSpread::from_degrees(w.raan_spread_deg).map_err(|e| key_err("walker.raan_spread_deg", e))?;
        self.walker_spec().map_err(|e| key_err("walker", e))?;

        if self.grid.sites == 0 {
            return Err(Error::scenario("grid.sites", "must be at least 1"));
        }
        self.coverage_config().validate().map_err(|e| match e {
            Error::InvalidInput { name, reason } => {
                let section = if name == "step_s" || name == "duration_s" {
                    "window"
                } else {
                    "sweep"
                };
                Error::scenario(format!("{section}.{name}"), reason)
            }
            other => other,
        })?;

        if !(self.link.frequency_hz > 0.0) {
            return Err(Error::scenario("link.frequency_hz", "must be positive"));
        }
        self.jammer.calibration().validate().map_err(|e| key_err("jammer", e))?;
        if !(self.jammer.jammer_power_w > 0.0) {
            return Err(Error::scenario("jammer.jammer_power_w", "must be positive"));
        }
        if !(self.jammer.target_radius_m > 0.0) {
            return Err(Error::scenario("jammer.target_radius_m", "must be positive"));
        }
        if self.jammer.margins_db.iter().any(|m| !(*m >= 0.0)) {
            return Err(Error::scenario("jammer.margins_db", "margins must be non-negative"));
        }
        self.materials.validate().map_err(|e| key_err("materials", e))?;
        self.payload
            .heritage
            .validate()
            .map_err(|e| key_err("payload.heritage", e))?;

        let s = &self.sweep;
        if s.sizes.is_empty() || s.sizes.contains(&0) {
            return Err(Error::scenario(
                "sweep.sizes",
                "must be a non-empty list of positive sizes",
            ));
        }
        for (key, list) in [
            ("sweep.altitudes_km", &s.altitudes_km),
            ("sweep.pathloss_altitudes_km", &s.pathloss_altitudes_km),
            ("sweep.footprint_altitudes_km", &s.footprint_altitudes_km),
        ] {
            if list.is_empty() || list.iter().any(|h| !(*h > 0.0)) {
                return Err(Error::scenario(key, "must be a non-empty list of positive altitudes"));
            }
        }
        if s.footprint_masks_deg.is_empty() || s.footprint_masks_deg.iter().any(|m| !(0.0..90.0).contains(m)) {
            return Err(Error::scenario(
                "sweep.footprint_masks_deg",
                "must be a non-empty list within [0, 90)",
            ));
        }
        if !(0.0..=90.0).contains(&s.pathloss_elevation_deg) {
            return Err(Error::scenario(
                "sweep.pathloss_elevation_deg",
                "must be within [0, 90]",
            ));
        }
        if let Some(t) = s.pdop_target {
            if !(t > 0.0) {
                return Err(Error::scenario("sweep.pdop_target", "must be positive"));
            }
        }
        if !(s.optimize_altitude_km > 0.0) {
            return Err(Error::scenario("sweep.optimize_altitude_km", "must be positive"));
        }
        if s.search_start == 0 || s.search_start > s.size_ceiling {
            return Err(Error::scenario(
                "sweep.search_start",
                format!("must be within [1, sweep.size_ceiling ({})]", s.size_ceiling),
            ));
        }
        if !(s.meo_altitude_km > 0.0) {
            return Err(Error::scenario("sweep.meo_altitude_km", "must be positive"));
        }
        Ok(())
    }

    pub fn raan_spread(&self) -> Result<RaanSpread> {
        RaanSpread::from_degrees(self.walker.raan_spread_deg)
    }

    /// The scenario's single constellation.
    pub fn walker_spec(&self) -> Result<WalkerSpec> {
        let w = &self.walker;
        let spread = self.raan_spread()?;
        match w.planes {
            Some(p) => WalkerSpec::new(w.total_sats, p, w.phasing, w.altitude_km, w.inclination_deg, spread),
            None => {
                let mut spec = WalkerSpec::with_default_planes(w.total_sats, w.altitude_km, w.inclination_deg, spread)?;
                spec.phasing = w.phasing.min(spec.planes - 1);
                Ok(spec)
            }
        }
    }

    pub fn grid(&self) -> Result<GroundGrid> {
        GroundGrid::new(self.grid.scheme, self.grid.sites)
    }

    pub fn coverage_config(&self) -> CoverageConfig {
        CoverageConfig {
            window: self.window,
            mask_deg: self.sweep.mask_deg,
            percentile: self.sweep.percentile,
            aggregation: self.sweep.aggregation,
        }
    }

    /// Hex SHA-256 of the canonical JSON form of the fully defaulted scenario.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("scenario serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}
