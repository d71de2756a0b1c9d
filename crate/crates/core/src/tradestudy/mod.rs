//! Sweeps and searches over the engine: PDOP surfaces, the GPS reference
//! level, minimal constellation sizing, the interference table and the
//! path-loss and footprint curves.

mod scenario;

pub use scenario::{GridSection, JammerSection, PayloadSection, Scenario, SweepSection, WalkerSection};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{percentile_pdop, GroundGrid, PdopStats};
use crate::orbits::{default_plane_count, is_balanced_size, snap_size, EarthModel, WalkerSpec};
use crate::rflink::{
    footprint_area_km2, footprint_gain_db, fspl_db, jammer_effective_radius_m, jammer_power_for_radius_w,
    penetration_report, slant_range_km, LinkParams,
};

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Walker pattern for a requested size under the default plane rule, using
/// the scenario's inclination, spread and phasing.
pub fn sized_walker(scenario: &Scenario, requested: usize, altitude_km: f64) -> Result<WalkerSpec> {
    let total = snap_size(requested);
    let planes = default_plane_count(total);
    WalkerSpec::new(
        total,
        planes,
        scenario.walker.phasing.min(planes - 1),
        altitude_km,
        scenario.walker.inclination_deg,
        scenario.raan_spread()?,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub requested_size: usize,
    pub total_sats: usize,
    pub planes: usize,
    pub phasing: usize,
    pub altitude_km: f64,
    /// `None` when no sample had a defined PDOP.
    pub pdop: Option<f64>,
    pub coverage_fraction: f64,
}

/// Percentile PDOP over (size × altitude), row-major by size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub sizes: Vec<usize>,
    pub altitudes_km: Vec<f64>,
    pub cells: Vec<SweepCell>,
    pub scenario_hash: String,
    pub engine_version: String,
}

impl SweepResult {
    pub fn cell(&self, size_index: usize, altitude_index: usize) -> &SweepCell {
        &self.cells[size_index * self.altitudes_km.len() + altitude_index]
    }

    /// Requested sizes that were moved to a balanced Walker size.
    pub fn adjustments(&self) -> BTreeMap<usize, usize> {
        self.cells
            .iter()
            .filter(|c| c.requested_size != c.total_sats)
            .map(|c| (c.requested_size, c.total_sats))
            .collect()
    }
}

/// Evaluates one sweep cell. Cells are independent of each other.
pub fn sweep_cell(scenario: &Scenario, grid: &GroundGrid, requested: usize, altitude_km: f64) -> Result<SweepCell> {
    let spec = sized_walker(scenario, requested, altitude_km)?;
    let (pdop, coverage_fraction) = match percentile_pdop(&spec, grid, &scenario.coverage_config(), &scenario.earth) {
        Ok(stats) => (Some(stats.pdop), stats.coverage_fraction),
        Err(Error::NoCoverage { .. }) => (None, 0.0),
        Err(e) => return Err(e),
    };
    Ok(SweepCell {
        requested_size: requested,
        total_sats: spec.total_sats,
        planes: spec.planes,
        phasing: spec.phasing,
        altitude_km,
        pdop,
        coverage_fraction,
    })
}

pub fn pdop_sweep(scenario: &Scenario) -> Result<SweepResult> {
    scenario.validate()?;
    let grid = scenario.grid()?;
    let mut cells = Vec::with_capacity(scenario.sweep.sizes.len() * scenario.sweep.altitudes_km.len());
    for &size in &scenario.sweep.sizes {
        for &alt in &scenario.sweep.altitudes_km {
            cells.push(sweep_cell(scenario, &grid, size, alt)?);
        }
    }
    Ok(SweepResult {
        sizes: scenario.sweep.sizes.clone(),
        altitudes_km: scenario.sweep.altitudes_km.clone(),
        cells,
        scenario_hash: scenario.hash(),
        engine_version: ENGINE_VERSION.to_string(),
    })
}

/// Percentile PDOP of the 24/6/1 GPS-like reference on the scenario's grid, window and mask.
pub fn gps_baseline(scenario: &Scenario) -> Result<PdopStats> {
    scenario.validate()?;
    percentile_pdop(
        &WalkerSpec::gps_reference(),
        &scenario.grid()?,
        &scenario.coverage_config(),
        &scenario.earth,
    )
}

/// Percentile PDOP of the scenario's own constellation.
pub fn scenario_pdop(scenario: &Scenario) -> Result<PdopStats> {
    scenario.validate()?;
    percentile_pdop(
        &scenario.walker_spec()?,
        &scenario.grid()?,
        &scenario.coverage_config(),
        &scenario.earth,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizingEvaluation {
    pub total_sats: usize,
    pub pdop: Option<f64>,
    pub coverage_fraction: f64,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SizingResult {
    /// False when no size up to the ceiling met the target; the fields then describe the best size seen.
    pub reachable: bool,
    pub total_sats: usize,
    pub planes: usize,
    pub phasing: usize,
    pub altitude_km: f64,
    pub pdop: Option<f64>,
    pub coverage_fraction: f64,
    pub target: f64,
    /// Set when a non-monotone PDOP response forced a linear scan.
    pub linear_fallback: bool,
    pub evaluations: Vec<SizingEvaluation>,
}

struct SizingSearch<'a> {
    scenario: &'a Scenario,
    grid: GroundGrid,
    altitude_km: f64,
    target: f64,
    cache: BTreeMap<usize, SizingEvaluation>,
}

impl SizingSearch<'_> {
    fn eval(&mut self, total: usize) -> Result<SizingEvaluation> {
        if let Some(e) = self.cache.get(&total) {
            return Ok(*e);
        }
        let cell = sweep_cell(self.scenario, &self.grid, total, self.altitude_km)?;
        let full = cell.coverage_fraction >= 1.0;
        let e = SizingEvaluation {
            total_sats: cell.total_sats,
            pdop: cell.pdop,
            coverage_fraction: cell.coverage_fraction,
            passes: full && cell.pdop.is_some_and(|p| p <= self.target),
        };
        self.cache.insert(total, e);
        Ok(e)
    }
}

/// Smallest balanced Walker size at `altitude_km` with full coverage and
/// percentile PDOP at or below `pdop_target`.
///
/// Sizes double from `sweep.search_start` until one passes, then bisection
/// narrows the bracket. If sizes just below the bisection answer pass as
/// well, the response is not monotone there and the whole bracket is
/// scanned in increasing order instead.
pub fn min_constellation_size(altitude_km: f64, pdop_target: f64, scenario: &Scenario) -> Result<SizingResult> {
    scenario.validate()?;
    if !(pdop_target > 0.0) {
        return Err(Error::input(
            "pdop_target",
            format!("must be positive, got {pdop_target}"),
        ));
    }
    if !(altitude_km > 0.0) {
        return Err(Error::input(
            "altitude_km",
            format!("must be positive, got {altitude_km}"),
        ));
    }
    let ceiling = scenario.sweep.size_ceiling;
    let sizes: Vec<usize> = (scenario.sweep.search_start..=ceiling)
        .filter(|&t| is_balanced_size(t))
        .collect();
    if sizes.is_empty() {
        return Err(Error::scenario(
            "sweep.size_ceiling",
            "no balanced Walker size within the search range",
        ));
    }
    let mut search = SizingSearch {
        scenario,
        grid: scenario.grid()?,
        altitude_km,
        target: pdop_target,
        cache: BTreeMap::new(),
    };

    // doubling, over indices into `sizes`
    let index_at_least = |t: usize| sizes.partition_point(|&s| s < t).min(sizes.len() - 1);
    let mut lo: Option<usize> = None;
    let mut hi: Option<usize> = None;
    let mut idx = 0;
    loop {
        if search.eval(sizes[idx])?.passes {
            hi = Some(idx);
            break;
        }
        lo = Some(idx);
        if idx == sizes.len() - 1 {
            break;
        }
        idx = index_at_least(sizes[idx] * 2).max(idx + 1);
    }

    let mut linear_fallback = false;
    let found = match (lo, hi) {
        (_, None) => None,
        (None, Some(h)) => Some(h),
        (Some(bracket_lo), Some(bracket_hi)) => {
            let (mut l, mut h) = (bracket_lo, bracket_hi);
            while h - l > 1 {
                let mid = l + (h - l) / 2;
                if search.eval(sizes[mid])?.passes {
                    h = mid;
                } else {
                    l = mid;
                }
            }
            let mut probe_passed = false;
            for k in (bracket_lo..l).rev().take(2) {
                probe_passed |= search.eval(sizes[k])?.passes;
            }
            if probe_passed {
                linear_fallback = true;
                let mut first = h;
                for (k, &t) in sizes.iter().enumerate().take(h).skip(bracket_lo) {
                    if search.eval(t)?.passes {
                        first = k;
                        break;
                    }
                }
                Some(first)
            } else {
                Some(h)
            }
        }
    };

    let evaluations: Vec<SizingEvaluation> = search.cache.values().copied().collect();
    let chosen = match found {
        Some(i) => search.cache[&sizes[i]],
        None => *evaluations
            .iter()
            .min_by(|a, b| {
                b.coverage_fraction.total_cmp(&a.coverage_fraction).then(
                    a.pdop
                        .unwrap_or(f64::INFINITY)
                        .total_cmp(&b.pdop.unwrap_or(f64::INFINITY)),
                )
            })
            .expect("at least one evaluation"),
    };
    let spec = sized_walker(scenario, chosen.total_sats, altitude_km)?;
    Ok(SizingResult {
        reachable: found.is_some(),
        total_sats: spec.total_sats,
        planes: spec.planes,
        phasing: spec.phasing,
        altitude_km,
        pdop: chosen.pdop,
        coverage_fraction: chosen.coverage_fraction,
        target: pdop_target,
        linear_fallback,
        evaluations,
    })
}

/// One row of the interference table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub margin_db: f64,
    pub canopy: String,
    pub wall_counts: Vec<(String, u32)>,
    pub jammer_radius_m: f64,
    pub jammer_power_w: f64,
}

/// Material penetration and jamming figures per margin, in input order.
pub fn table2_report(margins_db: &[f64], scenario: &Scenario) -> Result<Vec<Table2Row>> {
    let cal = scenario.jammer.calibration();
    margins_db
        .iter()
        .map(|&m| {
            let pen = penetration_report(m, &scenario.materials)?;
            Ok(Table2Row {
                margin_db: m,
                canopy: pen.canopy,
                wall_counts: pen.counts,
                jammer_radius_m: jammer_effective_radius_m(scenario.jammer.jammer_power_w, m, &cal)?,
                jammer_power_w: jammer_power_for_radius_w(scenario.jammer.target_radius_m, m, &cal)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossPoint {
    pub altitude_km: f64,
    pub slant_range_km: f64,
    pub fspl_db: f64,
}

pub fn pathloss_curve(
    altitudes_km: &[f64],
    elevation_deg: f64,
    link: &LinkParams,
    earth: &EarthModel,
) -> Result<Vec<PathLossPoint>> {
    if altitudes_km.is_empty() {
        return Err(Error::input("altitudes_km", "must not be empty"));
    }
    altitudes_km
        .iter()
        .map(|&h| {
            let d = slant_range_km(h, elevation_deg, earth)?;
            Ok(PathLossPoint {
                altitude_km: h,
                slant_range_km: d,
                fspl_db: fspl_db(d, link.frequency_hz)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FootprintPoint {
    pub altitude_km: f64,
    pub mask_deg: f64,
    pub leo_area_km2: f64,
    pub meo_area_km2: f64,
    pub gain_db: f64,
}

/// Footprint gain for every (altitude, mask), altitude-major.
pub fn footprint_curve(
    altitudes_km: &[f64],
    masks_deg: &[f64],
    meo_altitude_km: f64,
    earth: &EarthModel,
) -> Result<Vec<FootprintPoint>> {
    if altitudes_km.is_empty() {
        return Err(Error::input("altitudes_km", "must not be empty"));
    }
    let mut out = Vec::with_capacity(altitudes_km.len() * masks_deg.len());
    for &h in altitudes_km {
        for &m in masks_deg {
            out.push(FootprintPoint {
                altitude_km: h,
                mask_deg: m,
                leo_area_km2: footprint_area_km2(h, m, earth)?,
                meo_area_km2: footprint_area_km2(meo_altitude_km, m, earth)?,
                gain_db: footprint_gain_db(h, meo_altitude_km, m, earth)?,
            });
        }
    }
    Ok(out)
}
