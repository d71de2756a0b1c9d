//! Pooled PDOP statistics of a Walker constellation over a ground grid and
//! a time window.
//!
//! Sites are evaluated in parallel, but every per-sample result lands in a
//! fixed (site, epoch) slot before any reduction, so results do not depend on
//! the number of worker threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dop::dop_from_los;
use super::grid::GroundGrid;
use super::topo::{check_mask, SiteFrame};
use crate::error::{Error, Result};
use crate::orbits::{constellation_ecef, site_to_ecef, walker_constellation, EarthModel, WalkerSpec};

/// Evaluation epochs `0, step, 2·step, …` strictly before `duration_s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub duration_s: f64,
    pub step_s: f64,
}

impl TimeWindow {
    /// Full-scale window: 24 h at 60 s.
    pub const FULL: TimeWindow = TimeWindow {
        duration_s: 86_400.0,
        step_s: 60.0,
    };
    /// Desk-scale window: 6 h at 120 s.
    pub const DESK: TimeWindow = TimeWindow {
        duration_s: 21_600.0,
        step_s: 120.0,
    };

    pub fn validate(&self) -> Result<()> {
        if !(self.step_s.is_finite() && self.step_s > 0.0) {
            return Err(Error::input("step_s", format!("must be positive, got {}", self.step_s)));
        }
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return Err(Error::input(
                "duration_s",
                format!("must be positive, got {}", self.duration_s),
            ));
        }
        let ratio = self.duration_s / self.step_s;
        if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::input(
                "step_s",
                format!("{} does not divide duration {}", self.step_s, self.duration_s),
            ));
        }
        Ok(())
    }

    pub fn epoch_count(&self) -> usize {
        (self.duration_s / self.step_s).round() as usize
    }

    pub fn epochs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.epoch_count()).map(move |k| k as f64 * self.step_s)
    }
}

impl Default for TimeWindow {
    fn default() -> Self {
        Self::DESK
    }
}

/// How (site, epoch) samples are reduced to one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    /// One weighted percentile over every (site, epoch) sample.
    #[default]
    Pooled,
    /// Percentile over time at each site, then the worst site.
    WorstSite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverageConfig {
    pub window: TimeWindow,
    pub mask_deg: f64,
    pub percentile: f64,
    pub aggregation: Aggregation,
}

impl Default for CoverageConfig {
    fn default() -> Self {
        Self {
            window: TimeWindow::DESK,
            mask_deg: 5.0,
            percentile: 95.0,
            aggregation: Aggregation::Pooled,
        }
    }
}

impl CoverageConfig {
    pub fn validate(&self) -> Result<()> {
        self.window.validate()?;
        check_mask(self.mask_deg)?;
        if !(self.percentile > 0.0 && self.percentile <= 100.0) {
            return Err(Error::input(
                "percentile",
                format!("must be within (0, 100], got {}", self.percentile),
            ));
        }
        Ok(())
    }
}

/// Result of one site/epoch evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub visible: u32,
    /// `None` when fewer than four satellites are visible or the geometry is singular.
    pub pdop: Option<f64>,
}

/// Samples in site-major order: `samples[site * epochs + epoch]`.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub epochs: usize,
    pub samples: Vec<Sample>,
}

impl SampleSet {
    pub fn site(&self, index: usize) -> &[Sample] {
        &self.samples[index * self.epochs..(index + 1) * self.epochs]
    }

    pub fn sites(&self) -> impl Iterator<Item = &[Sample]> {
        self.samples.chunks(self.epochs.max(1))
    }
}

/// Evaluates every (site, epoch) pair of the grid and window.
pub fn evaluate_samples(
    spec: &WalkerSpec,
    grid: &GroundGrid,
    window: &TimeWindow,
    mask_deg: f64,
    earth: &EarthModel,
) -> Result<SampleSet> {
    window.validate()?;
    check_mask(mask_deg)?;
    let elements = walker_constellation(spec, earth)?;
    let positions: Vec<Vec<nalgebra::Vector3<f64>>> = window
        .epochs()
        .map(|t| {
            constellation_ecef(&elements, t, earth)
                .into_iter()
                .map(|p| p.to_vector())
                .collect()
        })
        .collect();
    let frames = grid
        .sites
        .iter()
        .map(|s| site_to_ecef(s.lat_deg, s.lon_deg, 0.0, earth).and_then(SiteFrame::new))
        .collect::<Result<Vec<_>>>()?;
    let sin_mask = mask_deg.to_radians().sin();

    let per_site: Vec<Vec<Sample>> = frames
        .par_iter()
        .map(|frame| {
            let mut los = Vec::with_capacity(elements.len());
            positions
                .iter()
                .map(|sats| {
                    los.clear();
                    for sat in sats {
                        let d = sat - frame.origin;
                        let range = d.norm();
                        let up = d.dot(&frame.up) / range;
                        if up >= sin_mask {
                            los.push([d.dot(&frame.east) / range, d.dot(&frame.north) / range, up]);
                        }
                    }
                    Sample {
                        visible: los.len() as u32,
                        pdop: dop_from_los(los.iter().copied()).ok().map(|d| d.pdop),
                    }
                })
                .collect()
        })
        .collect();

    Ok(SampleSet {
        epochs: window.epoch_count(),
        samples: per_site.into_iter().flatten().collect(),
    })
}

/// Weighted percentile with linear interpolation between order statistics.
///
/// Sorted sample `i` sits at plotting position
/// `(C_i - w_i/2 - w_1/2) / (W - w_1/2 - w_n/2)` where `C_i` is the cumulative
/// weight; with equal weights this is the familiar `(i - 1) / (n - 1)`.
/// Ties keep input order. Returns `None` for an empty input.
pub fn weighted_percentile(values: &[(f64, f64)], percentile: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].0.total_cmp(&values[b].0).then(a.cmp(&b)));
    if order.len() == 1 {
        return Some(values[order[0]].0);
    }
    let first_half = values[order[0]].1 / 2.0;
    let last_half = values[*order.last().unwrap()].1 / 2.0;
    let total: f64 = values.iter().map(|v| v.1).sum();
    let span = total - first_half - last_half;
    let target = (percentile / 100.0).clamp(0.0, 1.0);

    let mut cumulative = 0.0;
    let mut prev: Option<(f64, f64)> = None;
    for &i in &order {
        let (v, w) = values[i];
        cumulative += w;
        let pos = if span > 0.0 {
            (cumulative - w / 2.0 - first_half) / span
        } else {
            0.0
        };
        if pos >= target {
            return Some(match prev {
                Some((pv, ppos)) if pos > ppos => pv + (v - pv) * (target - ppos) / (pos - ppos),
                _ => v,
            });
        }
        prev = Some((v, pos));
    }
    Some(values[*order.last().unwrap()].0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PdopStats {
    pub pdop: f64,
    /// Weighted fraction of samples with a defined PDOP.
    pub coverage_fraction: f64,
    pub samples: usize,
    pub defined_samples: usize,
}

impl PdopStats {
    pub fn full_coverage(&self) -> bool {
        self.defined_samples == self.samples
    }
}

/// Reduces a sample set to the configured percentile.
pub fn reduce_samples(
    set: &SampleSet,
    grid: &GroundGrid,
    percentile: f64,
    aggregation: Aggregation,
) -> Result<PdopStats> {
    let total = set.samples.len();
    let defined = set.samples.iter().filter(|s| s.pdop.is_some()).count();
    if defined == 0 {
        return Err(Error::NoCoverage { samples: total });
    }
    let epochs = set.epochs as f64;
    let coverage_fraction: f64 = set
        .sites()
        .zip(&grid.sites)
        .map(|(samples, site)| site.weight * samples.iter().filter(|s| s.pdop.is_some()).count() as f64 / epochs)
        .sum();

    let pdop = match aggregation {
        Aggregation::Pooled => {
            let pooled: Vec<(f64, f64)> = set
                .sites()
                .zip(&grid.sites)
                .flat_map(|(samples, site)| samples.iter().filter_map(move |s| s.pdop.map(|p| (p, site.weight))))
                .collect();
            weighted_percentile(&pooled, percentile)
        }
        Aggregation::WorstSite => set
            .sites()
            .filter_map(|samples| {
                let v: Vec<(f64, f64)> = samples.iter().filter_map(|s| s.pdop.map(|p| (p, 1.0))).collect();
                weighted_percentile(&v, percentile)
            })
            .max_by(f64::total_cmp),
    }
    .expect("at least one defined sample");

    Ok(PdopStats {
        pdop,
        coverage_fraction: coverage_fraction.min(1.0),
        samples: total,
        defined_samples: defined,
    })
}

/// Percentile PDOP of a Walker constellation pooled over grid and window.
pub fn percentile_pdop(
    spec: &WalkerSpec,
    grid: &GroundGrid,
    config: &CoverageConfig,
    earth: &EarthModel,
) -> Result<PdopStats> {
    config.validate()?;
    let set = evaluate_samples(spec, grid, &config.window, config.mask_deg, earth)?;
    reduce_samples(&set, grid, config.percentile, config.aggregation)
}

/// Per-site statistics over the time window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SitePdop {
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub weight: f64,
    pub pdop: Option<f64>,
    pub coverage_fraction: f64,
    pub mean_visible: f64,
}

pub fn site_pdop_map(
    spec: &WalkerSpec,
    grid: &GroundGrid,
    config: &CoverageConfig,
    earth: &EarthModel,
) -> Result<Vec<SitePdop>> {
    config.validate()?;
    let set = evaluate_samples(spec, grid, &config.window, config.mask_deg, earth)?;
    let epochs = set.epochs as f64;
    Ok(set
        .sites()
        .zip(&grid.sites)
        .map(|(samples, site)| {
            let defined: Vec<(f64, f64)> = samples.iter().filter_map(|s| s.pdop.map(|p| (p, 1.0))).collect();
            SitePdop {
                lat_deg: site.lat_deg,
                lon_deg: site.lon_deg,
                weight: site.weight,
                pdop: weighted_percentile(&defined, config.percentile),
                coverage_fraction: defined.len() as f64 / epochs,
                mean_visible: samples.iter().map(|s| s.visible as f64).sum::<f64>() / epochs,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::RaanSpread;

    #[test]
    fn percentile_equal_weights_matches_linear_rule() {
        let v: Vec<(f64, f64)> = [5.0, 1.0, 3.0, 2.0, 4.0].iter().map(|&x| (x, 1.0)).collect();
        assert_eq!(weighted_percentile(&v, 50.0), Some(3.0));
        assert_eq!(weighted_percentile(&v, 100.0), Some(5.0));
        // rank 0.95·4 = 3.8 → 4 + 0.8·(5 - 4)
        assert!((weighted_percentile(&v, 95.0).unwrap() - 4.8).abs() < 1e-12);
        assert_eq!(weighted_percentile(&[(7.0, 0.3)], 95.0), Some(7.0));
        assert_eq!(weighted_percentile(&[], 95.0), None);
    }

    #[test]
    fn percentile_weights() {
        // positions 0, 0.5, 1 for weights 1, 2, 1
        let v = [(3.0, 1.0), (1.0, 1.0), (2.0, 2.0)];
        assert_eq!(weighted_percentile(&v, 50.0), Some(2.0));
        assert!((weighted_percentile(&v, 25.0).unwrap() - 1.5).abs() < 1e-12);
        assert!((weighted_percentile(&v, 75.0).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn window_validation() {
        assert!(TimeWindow {
            duration_s: 100.0,
            step_s: 30.0
        }
        .validate()
        .is_err());
        assert!(TimeWindow {
            duration_s: 100.0,
            step_s: 0.0
        }
        .validate()
        .is_err());
        assert_eq!(TimeWindow::DESK.epoch_count(), 180);
        assert!(CoverageConfig {
            percentile: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn single_plane_starves_geometry() {
        let spec = WalkerSpec::new(4, 1, 0, 1000.0, 90.0, RaanSpread::Star).unwrap();
        let grid = GroundGrid::fibonacci(60).unwrap();
        let cfg = CoverageConfig {
            window: TimeWindow {
                duration_s: 7200.0,
                step_s: 600.0,
            },
            ..Default::default()
        };
        match percentile_pdop(&spec, &grid, &cfg, &EarthModel::default()) {
            Ok(stats) => {
                assert!(stats.coverage_fraction < 1.0);
                assert!(stats.defined_samples * 2 < stats.samples);
            }
            Err(Error::NoCoverage { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
