//! Scenario files in, CSV/JSON/SVG results out.

mod emit;
mod envelope;
mod reports;
mod scenario;
mod svg;

pub use emit::{emit, read_json, render, to_csv, to_json, Format};
pub use envelope::{timestamp_now, Cell, Column, Layer, Line, Payload, ResultEnvelope};
pub use reports::{build_report, Report};
pub use scenario::{parse_scenario, scenario_to_string, KeyPolicy, ParsedScenario};
