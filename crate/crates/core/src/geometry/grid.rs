use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampling scheme for evaluation sites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridScheme {
    /// Fibonacci lattice; every site carries the same weight.
    Fibonacci,
    /// Cell-centred latitude/longitude grid weighted by cos(latitude).
    LatLon,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSite {
    pub lat_deg: f64,
    pub lon_deg: f64,
    pub weight: f64,
}

/// Evaluation sites on the sphere with weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundGrid {
    pub sites: Vec<GridSite>,
    pub scheme: GridScheme,
    pub resolution: usize,
}

impl GroundGrid {
    pub fn new(scheme: GridScheme, resolution: usize) -> Result<Self> {
        match scheme {
            GridScheme::Fibonacci => Self::fibonacci(resolution),
            GridScheme::LatLon => Self::lat_lon(resolution),
        }
    }

    pub fn fibonacci(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("resolution", "site count must be at least 1"));
        }
        let golden_angle_deg = 180.0 * (3.0 - 5f64.sqrt());
        let w = 1.0 / n as f64;
        let sites = (0..n)
            .map(|i| {
                let z = 1.0 - (2 * i + 1) as f64 / n as f64;
                let lon = (i as f64 * golden_angle_deg).rem_euclid(360.0);
                GridSite {
                    lat_deg: z.asin().to_degrees(),
                    lon_deg: if lon > 180.0 { lon - 360.0 } else { lon },
                    weight: w,
                }
            })
            .collect();
        Ok(Self {
            sites,
            scheme: GridScheme::Fibonacci,
            resolution: n,
        })
    }

    /// `rows × 2·rows` cell centres with rows chosen so the count is near `target`.
    pub fn lat_lon(target: usize) -> Result<Self> {
        if target == 0 {
            return Err(Error::input("resolution", "site count must be at least 1"));
        }
        let rows = ((target as f64 / 2.0).sqrt().round() as usize).max(1);
        let cols = 2 * rows;
        let dlat = 180.0 / rows as f64;
        let dlon = 360.0 / cols as f64;
        let mut sites = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let lat = -90.0 + (r as f64 + 0.5) * dlat;
            let w = lat.to_radians().cos();
            for c in 0..cols {
                sites.push(GridSite {
                    lat_deg: lat,
                    lon_deg: -180.0 + (c as f64 + 0.5) * dlon,
                    weight: w,
                });
            }
        }
        let total: f64 = sites.iter().map(|s| s.weight).sum();
        for s in &mut sites {
            s.weight /= total;
        }
        Ok(Self {
            sites,
            scheme: GridScheme::LatLon,
            resolution: target,
        })
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}
