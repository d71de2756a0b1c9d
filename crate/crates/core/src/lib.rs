//! Trade-study engine for navigation from low Earth orbit.
//!
//! * [`orbits`]: Walker constellations and circular two-body propagation.
//! * [`geometry`]: visibility, DOP and percentile coverage statistics.
//! * [`rflink`]: path loss, footprint gain, jammer range, material penetration.
//! * [`payload`]: navigation payload power bookkeeping.
//! * [`tradestudy`]: sweeps, baselines and constellation sizing.
//! * [`io`]: scenario parsing and CSV/JSON/SVG output.

// `!(x > 0.0)` style checks are how NaN gets rejected along with the range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod io;
pub mod orbits;
pub mod payload;
pub mod rflink;
pub mod tradestudy;

pub use error::{Error, Result};
