//! Builds result envelopes for each trade-study command.

use serde_json::json;

use super::envelope::{Cell, Column, Layer, Line, Payload, ResultEnvelope};
use crate::error::{Error, Result};
use crate::geometry::site_pdop_map;
use crate::payload::power_budget;
use crate::tradestudy::{
    footprint_curve, gps_baseline, min_constellation_size, pathloss_curve, pdop_sweep, scenario_pdop, table2_report,
    Scenario,
};

/// Every report the command line can produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Report {
    DopMap,
    DopSweep,
    Optimize,
    Pathloss,
    Footprint,
    Jammer,
    Power,
    Baseline,
}

fn pdop_column(percentile: f64) -> String {
    format!("pdop_{}", percentile).replace('.', "_")
}

pub fn build_report(report: Report, scenario: &Scenario, timestamp_utc: &str) -> Result<ResultEnvelope> {
    scenario.validate()?;
    let hash = scenario.hash();
    let env = |title: &str, payload| ResultEnvelope::new(hash.clone(), timestamp_utc, title, payload);
    let pdop_name = pdop_column(scenario.sweep.percentile);

    Ok(match report {
        Report::Jammer => {
            let rows = table2_report(&scenario.jammer.margins_db, scenario)?;
            let mut columns = vec![
                Column::new("margin_dbhz", "dB-Hz"),
                Column::new("tree_canopy", "category"),
            ];
            columns.extend(
                scenario
                    .materials
                    .materials
                    .iter()
                    .map(|m| Column::new(format!("{}_count", m.name), "count")),
            );
            columns.push(Column::new("jammer_radius_m", "m"));
            columns.push(Column::new("jammer_power_mw", "mW"));
            let rows = rows
                .into_iter()
                .map(|r| {
                    let mut cells: Vec<Cell> = vec![r.margin_db.into(), r.canopy.into()];
                    cells.extend(r.wall_counts.into_iter().map(|(_, n)| Cell::from(n)));
                    cells.push(r.jammer_radius_m.into());
                    cells.push((r.jammer_power_w * 1e3).into());
                    cells
                })
                .collect();
            env(
                "Signal margin: material penetration and jamming",
                Payload::Table { columns, rows },
            )
            .with_metadata("jammer_power_w", scenario.jammer.jammer_power_w)
            .with_metadata("target_radius_m", scenario.jammer.target_radius_m)
            .with_metadata("ref_power_w", scenario.jammer.ref_power_w)
            .with_metadata("ref_radius_m", scenario.jammer.ref_radius_m)
        }

        Report::Pathloss => {
            let s = &scenario.sweep;
            let pts = pathloss_curve(
                &s.pathloss_altitudes_km,
                s.pathloss_elevation_deg,
                &scenario.link,
                &scenario.earth,
            )?;
            env(
                "Free-space path loss vs altitude",
                Payload::Series {
                    x: Column::new("altitude_km", "km"),
                    x_values: pts.iter().map(|p| p.altitude_km).collect(),
                    lines: vec![
                        Line {
                            column: Column::new("fspl_db", "dB"),
                            values: pts.iter().map(|p| p.fspl_db).collect(),
                        },
                        Line {
                            column: Column::new("slant_range_km", "km"),
                            values: pts.iter().map(|p| p.slant_range_km).collect(),
                        },
                    ],
                },
            )
            .with_metadata("elevation_deg", s.pathloss_elevation_deg)
            .with_metadata("frequency_hz", scenario.link.frequency_hz)
        }

        Report::Footprint => {
            let s = &scenario.sweep;
            let pts = footprint_curve(
                &s.footprint_altitudes_km,
                &s.footprint_masks_deg,
                s.meo_altitude_km,
                &scenario.earth,
            )?;
            let n_masks = s.footprint_masks_deg.len();
            let lines = s
                .footprint_masks_deg
                .iter()
                .enumerate()
                .map(|(j, m)| Line {
                    column: Column::new(format!("gain_db_mask_{m}").replace('.', "_"), "dB"),
                    values: pts.iter().skip(j).step_by(n_masks).map(|p| p.gain_db).collect(),
                })
                .collect();
            env(
                "Footprint gain of LEO over MEO",
                Payload::Series {
                    x: Column::new("altitude_km", "km"),
                    x_values: s.footprint_altitudes_km.clone(),
                    lines,
                },
            )
            .with_metadata("meo_altitude_km", s.meo_altitude_km)
        }

        Report::Power => {
            let b = power_budget(&scenario.payload.heritage, &scenario.payload.leo)?;
            let rows: Vec<(&str, f64, &str)> = vec![
                ("clock_budget", b.clock_budget_w, "sum of clock units"),
                ("clock_budget_quoted", b.quoted_clock_budget_w, "round figure"),
                (
                    "signal_generation_load_low",
                    b.signal_generation_load_w.0,
                    "low RF output / PA efficiency",
                ),
                (
                    "signal_generation_load",
                    b.signal_generation_load_w.1,
                    "high RF output / PA efficiency",
                ),
                ("per_signal_bus_low", b.per_signal_bus_w.0, "low RF output, per signal"),
                ("per_signal_bus", b.per_signal_bus_w.1, "high RF output, per signal"),
                ("leo_payload_low", b.leo_payload_w.0, "modeled overhead range"),
                ("leo_payload_high", b.leo_payload_w.1, "modeled overhead range"),
                (
                    "gnss_equivalent_low",
                    b.gnss_equivalent.matched_w.0,
                    "payload high / max footprint gain",
                ),
                (
                    "gnss_equivalent_high",
                    b.gnss_equivalent.matched_w.1,
                    "payload high / min footprint gain",
                ),
                (
                    "gnss_equivalent_min",
                    b.gnss_equivalent.extremes_w.0,
                    "payload low / max footprint gain",
                ),
            ];
            env(
                "Navigation payload power budget",
                Payload::Table {
                    columns: vec![
                        Column::new("quantity", "name"),
                        Column::new("power_w", "W"),
                        Column::new("basis", "text"),
                    ],
                    rows: rows
                        .into_iter()
                        .map(|(q, v, n)| vec![q.into(), v.into(), n.into()])
                        .collect(),
                },
            )
            .with_metadata(
                "overhead_fraction_range",
                json!(scenario.payload.leo.overhead_fraction_range),
            )
            .with_metadata("overhead_is_modeling_choice", true)
        }

        Report::Baseline => {
            let stats = gps_baseline(scenario)?;
            env(
                "GPS-like reference PDOP",
                Payload::Table {
                    columns: vec![
                        Column::new("constellation", "name"),
                        Column::new(pdop_name.clone(), "1"),
                        Column::new("coverage_fraction", "1"),
                        Column::new("samples", "count"),
                    ],
                    rows: vec![vec![
                        "walker_24_6_1_55deg_20182km".into(),
                        stats.pdop.into(),
                        stats.coverage_fraction.into(),
                        stats.samples.into(),
                    ]],
                },
            )
        }

        Report::DopSweep => {
            let r = pdop_sweep(scenario)?;
            let n_alt = r.altitudes_km.len();
            let rows_of = |f: &dyn Fn(&crate::tradestudy::SweepCell) -> Option<f64>| -> Vec<Vec<Option<f64>>> {
                r.cells.chunks(n_alt).map(|row| row.iter().map(f).collect()).collect()
            };
            let adjustments: serde_json::Map<String, serde_json::Value> = r
                .adjustments()
                .into_iter()
                .map(|(k, v)| (k.to_string(), json!(v)))
                .collect();
            env(
                "Percentile PDOP vs constellation size and altitude",
                Payload::Matrix {
                    row_axis: Column::new("total_sats", "count"),
                    row_values: r.cells.chunks(n_alt).map(|row| row[0].total_sats as f64).collect(),
                    col_axis: Column::new("altitude_km", "km"),
                    col_values: r.altitudes_km.clone(),
                    layers: vec![
                        Layer {
                            column: Column::new(pdop_name.clone(), "1"),
                            values: rows_of(&|c| c.pdop),
                        },
                        Layer {
                            column: Column::new("coverage_fraction", "1"),
                            values: rows_of(&|c| Some(c.coverage_fraction)),
                        },
                        Layer {
                            column: Column::new("planes", "count"),
                            values: rows_of(&|c| Some(c.planes as f64)),
                        },
                    ],
                },
            )
            .with_metadata("requested_sizes", json!(r.sizes))
            .with_metadata("size_adjustments", adjustments)
            .with_metadata("engine_version", r.engine_version)
        }

        Report::Optimize => {
            let target = match scenario.sweep.pdop_target {
                Some(t) => t,
                None => gps_baseline(scenario)?.pdop,
            };
            let r = min_constellation_size(scenario.sweep.optimize_altitude_km, target, scenario)?;
            let columns = vec![
                Column::new("total_sats", "count"),
                Column::new("planes", "count"),
                Column::new("phasing", "count"),
                Column::new("altitude_km", "km"),
                Column::new(pdop_name.clone(), "1"),
                Column::new("coverage_fraction", "1"),
                Column::new("pdop_target", "1"),
                Column::new("reachable", "flag"),
            ];
            env(
                "Minimal constellation size",
                Payload::Table {
                    columns,
                    rows: vec![vec![
                        r.total_sats.into(),
                        r.planes.into(),
                        r.phasing.into(),
                        r.altitude_km.into(),
                        r.pdop.into(),
                        r.coverage_fraction.into(),
                        r.target.into(),
                        r.reachable.into(),
                    ]],
                },
            )
            .with_metadata(
                "target_source",
                if scenario.sweep.pdop_target.is_some() {
                    "scenario"
                } else {
                    "gps_baseline"
                },
            )
            .with_metadata("linear_fallback", r.linear_fallback)
            .with_metadata(
                "evaluations",
                serde_json::to_value(&r.evaluations).map_err(|e| Error::Serialize(e.to_string()))?,
            )
        }

        Report::DopMap => {
            let spec = scenario.walker_spec()?;
            let sites = site_pdop_map(&spec, &scenario.grid()?, &scenario.coverage_config(), &scenario.earth)?;
            env(
                "Per-site PDOP",
                Payload::Table {
                    columns: vec![
                        Column::new("lat_deg", "deg"),
                        Column::new("lon_deg", "deg"),
                        Column::new("weight", "1"),
                        Column::new(pdop_name, "1"),
                        Column::new("coverage_fraction", "1"),
                        Column::new("mean_visible", "count"),
                    ],
                    rows: sites
                        .into_iter()
                        .map(|s| {
                            vec![
                                s.lat_deg.into(),
                                s.lon_deg.into(),
                                s.weight.into(),
                                s.pdop.into(),
                                s.coverage_fraction.into(),
                                s.mean_visible.into(),
                            ]
                        })
                        .collect(),
                },
            )
            .with_metadata(
                "walker",
                json!({"total_sats": spec.total_sats, "planes": spec.planes, "phasing": spec.phasing,
                       "altitude_km": spec.altitude_km, "inclination_deg": spec.inclination_deg,
                       "raan_spread_deg": spec.raan_spread.degrees()}),
            )
            .with_metadata(
                "pooled_pdop",
                scenario_pdop(scenario).map(|s| json!(s.pdop)).unwrap_or(json!(null)),
            )
        }
    })
}
