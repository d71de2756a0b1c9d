//! Navigation payload power bookkeeping, from MEO heritage figures to a
//! simplified two-signal LEO payload.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClockUnit {
    pub name: String,
    pub unit_power_w: f64,
    pub count: u32,
}

/// MEO heritage payload figures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PayloadHeritage {
    pub total_payload_w: f64,
    pub clock_units: Vec<ClockUnit>,
    /// Combined RF output across all signals, (low, high) W.
    pub rf_output_w_range: (f64, f64),
    pub pa_efficiency: f64,
    pub n_signals: u32,
    /// Clock total as quoted in round figures, reported beside the exact sum.
    pub quoted_clock_budget_w: f64,
}

impl Default for PayloadHeritage {
    fn default() -> Self {
        Self {
            total_payload_w: 900.0,
            clock_units: vec![
                ClockUnit {
                    name: "rubidium".into(),
                    unit_power_w: 35.0,
                    count: 2,
                },
                ClockUnit {
                    name: "hydrogen_maser".into(),
                    unit_power_w: 70.0,
                    count: 2,
                },
            ],
            rf_output_w_range: (254.0, 273.0),
            pa_efficiency: 0.51,
            n_signals: 10,
            quoted_clock_budget_w: 200.0,
        }
    }
}

impl PayloadHeritage {
    pub fn validate(&self) -> Result<()> {
        if !(self.pa_efficiency > 0.0 && self.pa_efficiency <= 1.0) {
            return Err(Error::input(
                "pa_efficiency",
                format!("must be within (0, 1], got {}", self.pa_efficiency),
            ));
        }
        if self.n_signals == 0 {
            return Err(Error::input("n_signals", "must be at least 1"));
        }
        let (lo, hi) = self.rf_output_w_range;
        if !(lo > 0.0 && lo <= hi) {
            return Err(Error::input(
                "rf_output_w_range",
                format!("need 0 < low <= high, got ({lo}, {hi})"),
            ));
        }
        if !(self.total_payload_w > 0.0) || self.clock_units.iter().any(|c| !(c.unit_power_w > 0.0)) {
            return Err(Error::input("payload", "powers must be positive"));
        }
        Ok(())
    }
}

/// Assumptions for the simplified LEO payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LeoPayloadConfig {
    pub n_signals: u32,
    /// Overhead as a fraction of signal power, (low, high). A modeling
    /// choice: the range is set so two signals span roughly 100 to 200 W.
    pub overhead_fraction_range: (f64, f64),
    /// Footprint gains (dB) for horizon-broadcast beams, (low, high).
    pub footprint_gain_db_range: (f64, f64),
}

impl Default for LeoPayloadConfig {
    fn default() -> Self {
        Self {
            n_signals: 2,
            overhead_fraction_range: (0.0, 0.9),
            footprint_gain_db_range: (6.0, 10.0),
        }
    }
}

/// Bus power per signal: RF output divided by amplifier efficiency, shared over the signals.
pub fn per_signal_bus_power_w(rf_output_w: f64, n_signals: u32, pa_efficiency: f64) -> Result<f64> {
    if n_signals == 0 {
        return Err(Error::input("n_signals", "must be at least 1"));
    }
    Ok(signal_generation_load_w(rf_output_w, pa_efficiency)? / n_signals as f64)
}

/// Total bus load of the signal chain: RF output over amplifier efficiency.
pub fn signal_generation_load_w(rf_output_w: f64, pa_efficiency: f64) -> Result<f64> {
    if !(rf_output_w > 0.0) {
        return Err(Error::input(
            "rf_output_w",
            format!("must be positive, got {rf_output_w}"),
        ));
    }
    if !(pa_efficiency > 0.0 && pa_efficiency <= 1.0) {
        return Err(Error::input(
            "pa_efficiency",
            format!("must be within (0, 1], got {pa_efficiency}"),
        ));
    }
    Ok(rf_output_w / pa_efficiency)
}

/// `n · per_signal · (1 + overhead)` at both ends of the overhead range.
pub fn leo_payload_power_w(
    n_signals: u32,
    per_signal_bus_w: f64,
    overhead_fraction_range: (f64, f64),
) -> Result<(f64, f64)> {
    if n_signals == 0 {
        return Err(Error::input("n_signals", "must be at least 1"));
    }
    let (lo, hi) = overhead_fraction_range;
    if !(lo >= 0.0 && hi >= lo) {
        return Err(Error::input(
            "overhead_fraction_range",
            format!("need 0 <= low <= high, got ({lo}, {hi})"),
        ));
    }
    let base = n_signals as f64 * per_signal_bus_w;
    Ok((base * (1.0 + lo), base * (1.0 + hi)))
}

/// Payload power that matches MEO-level signals once the footprint gain is spent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnssEquivalent {
    /// The top of the payload range divided by each end of the gain range.
    pub matched_w: (f64, f64),
    /// Smallest and largest quotients over both ranges.
    pub extremes_w: (f64, f64),
}

pub fn gnss_equivalent_power_w(leo_total_w: (f64, f64), footprint_gain_db_range: (f64, f64)) -> Result<GnssEquivalent> {
    let (g_lo, g_hi) = footprint_gain_db_range;
    if !(g_lo >= 0.0 && g_hi >= g_lo) {
        return Err(Error::input(
            "footprint_gain_db_range",
            format!("need 0 <= low <= high, got ({g_lo}, {g_hi})"),
        ));
    }
    let (p_lo, p_hi) = leo_total_w;
    if !(p_lo >= 0.0 && p_hi >= p_lo) {
        return Err(Error::input(
            "leo_total_w",
            format!("need 0 <= low <= high, got ({p_lo}, {p_hi})"),
        ));
    }
    let lin = |db: f64| 10f64.powf(db / 10.0);
    let (k_lo, k_hi) = (lin(g_lo), lin(g_hi));
    Ok(GnssEquivalent {
        matched_w: (p_hi / k_hi, p_hi / k_lo),
        extremes_w: (p_lo / k_hi, p_hi / k_lo),
    })
}

pub fn clock_budget_w(clock_units: &[ClockUnit]) -> f64 {
    clock_units.iter().map(|c| c.unit_power_w * c.count as f64).sum()
}

/// Every figure of the power walk-through, from heritage to LEO.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerBudget {
    pub clock_budget_w: f64,
    pub quoted_clock_budget_w: f64,
    pub signal_generation_load_w: (f64, f64),
    pub per_signal_bus_w: (f64, f64),
    pub leo_payload_w: (f64, f64),
    pub gnss_equivalent: GnssEquivalent,
}

/// Runs the full chain. Headline figures use the upper RF output endpoint.
pub fn power_budget(heritage: &PayloadHeritage, leo: &LeoPayloadConfig) -> Result<PowerBudget> {
    heritage.validate()?;
    let (rf_lo, rf_hi) = heritage.rf_output_w_range;
    let per_signal = (
        per_signal_bus_power_w(rf_lo, heritage.n_signals, heritage.pa_efficiency)?,
        per_signal_bus_power_w(rf_hi, heritage.n_signals, heritage.pa_efficiency)?,
    );
    let leo_payload = leo_payload_power_w(leo.n_signals, per_signal.1, leo.overhead_fraction_range)?;
    Ok(PowerBudget {
        clock_budget_w: clock_budget_w(&heritage.clock_units),
        quoted_clock_budget_w: heritage.quoted_clock_budget_w,
        signal_generation_load_w: (
            signal_generation_load_w(rf_lo, heritage.pa_efficiency)?,
            signal_generation_load_w(rf_hi, heritage.pa_efficiency)?,
        ),
        per_signal_bus_w: per_signal,
        leo_payload_w: leo_payload,
        gnss_equivalent: gnss_equivalent_power_w(leo_payload, leo.footprint_gain_db_range)?,
    })
}
