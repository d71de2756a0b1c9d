use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::orbits::EcefPosition;

/// Local east/north/up basis at a site on a spherical Earth.
#[derive(Debug, Clone, Copy)]
pub struct SiteFrame {
    pub origin: Vector3<f64>,
    pub east: Vector3<f64>,
    pub north: Vector3<f64>,
    pub up: Vector3<f64>,
}

impl SiteFrame {
    pub fn new(site: EcefPosition) -> Result<Self> {
        let origin = site.to_vector();
        let r = origin.norm();
        if !(r > 0.0) {
            return Err(Error::input("site", "site at the geocentre has no local horizon"));
        }
        let up = origin / r;
        let lon = site.y_km.atan2(site.x_km);
        let east = Vector3::new(-lon.sin(), lon.cos(), 0.0);
        let north = up.cross(&east);
        Ok(Self {
            origin,
            east,
            north,
            up,
        })
    }

    /// Unit line of sight in ENU and the range to `target`.
    pub fn look(&self, target: &Vector3<f64>) -> Result<([f64; 3], f64)> {
        let d = target - self.origin;
        let range = d.norm();
        if !(range > 0.0) {
            return Err(Error::CoincidentPoints);
        }
        let u = d / range;
        Ok(([u.dot(&self.east), u.dot(&self.north), u.dot(&self.up)], range))
    }
}

/// Topocentric look angles from a site to a satellite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LookAngles {
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
    pub range_km: f64,
    /// Unit line of sight as (east, north, up).
    pub los_enu: [f64; 3],
}

fn angles_from_los(los: [f64; 3], range_km: f64) -> LookAngles {
    let [e, n, u] = los;
    LookAngles {
        azimuth_deg: e.atan2(n).to_degrees().rem_euclid(360.0),
        elevation_deg: u.clamp(-1.0, 1.0).asin().to_degrees(),
        range_km,
        los_enu: los,
    }
}

pub fn az_el_range(site: EcefPosition, sat: EcefPosition) -> Result<LookAngles> {
    let frame = SiteFrame::new(site)?;
    let (los, range) = frame.look(&sat.to_vector())?;
    Ok(angles_from_los(los, range))
}

/// One satellite seen above the mask from a site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteObservation {
    pub sat_index: usize,
    pub elevation_deg: f64,
    pub azimuth_deg: f64,
    pub range_km: f64,
    pub los_enu: [f64; 3],
}

pub(crate) fn check_mask(mask_deg: f64) -> Result<()> {
    if !(0.0..=90.0).contains(&mask_deg) {
        return Err(Error::input(
            "mask_deg",
            format!("must be within [0, 90], got {mask_deg}"),
        ));
    }
    Ok(())
}

/// Satellites at or above `mask_deg`, in satellite-index order.
pub fn visible_sats(site: EcefPosition, sats: &[EcefPosition], mask_deg: f64) -> Result<Vec<SiteObservation>> {
    check_mask(mask_deg)?;
    let frame = SiteFrame::new(site)?;
    let mut out = Vec::new();
    for (i, sat) in sats.iter().enumerate() {
        let (los, range) = frame.look(&sat.to_vector())?;
        let a = angles_from_los(los, range);
        if a.elevation_deg >= mask_deg {
            out.push(SiteObservation {
                sat_index: i,
                elevation_deg: a.elevation_deg,
                azimuth_deg: a.azimuth_deg,
                range_km: a.range_km,
                los_enu: los,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbits::{site_to_ecef, EarthModel};
    use approx::assert_relative_eq;

    #[test]
    fn zenith() {
        let e = EarthModel::default();
        let site = site_to_ecef(0.0, 0.0, 0.0, &e).unwrap();
        let a = az_el_range(site, EcefPosition::new(7378.137, 0.0, 0.0)).unwrap();
        assert_relative_eq!(a.elevation_deg, 90.0, epsilon = 1e-9);
        assert_relative_eq!(a.range_km, 1000.0, epsilon = 1e-9);
    }

    #[test]
    fn horizon_and_azimuth() {
        let site = EcefPosition::new(6378.137, 0.0, 0.0);
        // due north along the local horizon plane
        let a = az_el_range(site, EcefPosition::new(6378.137, 0.0, 500.0)).unwrap();
        assert!(a.elevation_deg.abs() < 1e-9);
        assert!(a.azimuth_deg.abs() < 1e-9);
        // due east
        let a = az_el_range(site, EcefPosition::new(6378.137, 500.0, 0.0)).unwrap();
        assert_relative_eq!(a.azimuth_deg, 90.0, epsilon = 1e-9);
    }

    #[test]
    fn thirty_degrees_east() {
        // Independent planar-triangle check: the satellite at radius r over
        // 30°E, seen from the equator at 0°; law of cosines gives the range,
        // law of sines gives the angle at the site.
        let (big_r, r, gamma) = (6378.137f64, 7378.137f64, 30f64.to_radians());
        let range = (big_r * big_r + r * r - 2.0 * big_r * r * gamma.cos()).sqrt();
        let angle_at_site = (r * gamma.sin() / range).asin();
        // site angle is obtuse here: elevation = angle_at_site' - 90°
        let elev = (std::f64::consts::PI - angle_at_site).to_degrees() - 90.0;

        let site = EcefPosition::new(big_r, 0.0, 0.0);
        let sat = EcefPosition::new(r * gamma.cos(), r * gamma.sin(), 0.0);
        let a = az_el_range(site, sat).unwrap();
        assert_relative_eq!(a.range_km, range, epsilon = 1e-9);
        assert_relative_eq!(a.elevation_deg, elev, epsilon = 1e-9);
        // the satellite sits just above the horizon (horizon half-angle 30.18°)
        assert!((a.range_km - 3689.09).abs() < 0.01);
        assert!((a.elevation_deg - 0.179).abs() < 1e-3);
        assert_relative_eq!(a.azimuth_deg, 90.0, epsilon = 1e-9);
    }

    #[test]
    fn coincident_rejected() {
        let p = EcefPosition::new(6378.137, 0.0, 0.0);
        assert!(matches!(az_el_range(p, p), Err(Error::CoincidentPoints)));
    }

    #[test]
    fn visibility_filters() {
        let site = EcefPosition::new(6378.137, 0.0, 0.0);
        let sats = [
            EcefPosition::new(7000.0, 100.0, 0.0),
            EcefPosition::new(-7000.0, 0.0, 0.0),
            EcefPosition::new(7000.0, 0.0, 3000.0),
        ];
        assert!(visible_sats(site, &sats, 90.0).unwrap().is_empty());
        let v = visible_sats(site, &sats, 0.0).unwrap();
        assert_eq!(v.iter().map(|o| o.sat_index).collect::<Vec<_>>(), vec![0, 2]);
        for o in &v {
            let n: f64 = o.los_enu.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
        assert!(visible_sats(site, &sats, -1.0).is_err());
    }
}
