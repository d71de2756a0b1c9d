//! Visibility, look angles and dilution of precision over a ground grid.

mod coverage;
mod dop;
mod grid;
mod topo;

pub use coverage::{
    evaluate_samples, percentile_pdop, reduce_samples, site_pdop_map, weighted_percentile, Aggregation, CoverageConfig,
    PdopStats, Sample, SampleSet, SitePdop, TimeWindow,
};
pub use dop::{dop, dop_from_los, DopValues, SINGULAR_CONDITION};
pub use grid::{GridScheme, GridSite, GroundGrid};
pub use topo::{az_el_range, visible_sats, LookAngles, SiteFrame, SiteObservation};
