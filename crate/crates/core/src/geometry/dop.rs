use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use super::topo::SiteObservation;
use crate::error::{Error, Result};

/// Normal matrices with a larger 2-norm condition number are reported as singular.
pub const SINGULAR_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DopValues {
    pub gdop: f64,
    pub pdop: f64,
    pub hdop: f64,
    pub vdop: f64,
    pub tdop: f64,
}

pub fn dop(observations: &[SiteObservation]) -> Result<DopValues> {
    dop_from_los(observations.iter().map(|o| o.los_enu))
}

/// DOP from unit lines of sight given as (east, north, up).
///
/// Each satellite contributes a design row `[-e, -n, -u, 1]`; the cofactor
/// matrix is the inverse of the accumulated normal matrix.
pub fn dop_from_los<I>(los: I) -> Result<DopValues>
where
    I: IntoIterator<Item = [f64; 3]>,
{
    let mut normal = Matrix4::<f64>::zeros();
    let mut count = 0usize;
    for [e, n, u] in los {
        let row = Vector4::new(-e, -n, -u, 1.0);
        normal += row * row.transpose();
        count += 1;
    }
    if count < 4 {
        return Err(Error::InsufficientGeometry { visible: count });
    }

    let eig = normal.symmetric_eigenvalues();
    let (lo, hi) = eig
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if !(condition <= SINGULAR_CONDITION) {
        return Err(Error::SingularGeometry {
            condition,
            limit: SINGULAR_CONDITION,
        });
    }

    let q = normal
        .cholesky()
        .ok_or(Error::SingularGeometry {
            condition,
            limit: SINGULAR_CONDITION,
        })?
        .inverse();
    let (qe, qn, qu, qt) = (q[(0, 0)], q[(1, 1)], q[(2, 2)], q[(3, 3)]);
    Ok(DopValues {
        gdop: (qe + qn + qu + qt).sqrt(),
        pdop: (qe + qn + qu).sqrt(),
        hdop: (qe + qn).sqrt(),
        vdop: qu.sqrt(),
        tdop: qt.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(az_deg: f64, el_deg: f64) -> [f64; 3] {
        let (sa, ca) = az_deg.to_radians().sin_cos();
        let (se, ce) = el_deg.to_radians().sin_cos();
        [ce * sa, ce * ca, se]
    }

    #[test]
    fn too_few() {
        let los = vec![unit(0.0, 45.0), unit(120.0, 45.0), unit(240.0, 45.0)];
        assert!(matches!(
            dop_from_los(los),
            Err(Error::InsufficientGeometry { visible: 3 })
        ));
    }

    #[test]
    fn identical_lines_of_sight_are_singular() {
        let los = vec![unit(10.0, 30.0); 6];
        assert!(matches!(dop_from_los(los), Err(Error::SingularGeometry { .. })));
    }

    #[test]
    fn zenith_plus_ring() {
        // Zenith + three at 0° elevation, 120° apart. Hand inversion:
        // Σgg^T = diag(1.5, 1.5, 1, 4) with the up/clock coupling of -1;
        // so hdop² = 2/1.5, and the up/clock block [[1,-1],[-1,4]] inverts to
        // [[4,1],[1,1]]/3.
        let los = vec![unit(0.0, 90.0), unit(0.0, 0.0), unit(120.0, 0.0), unit(240.0, 0.0)];
        let d = dop_from_los(los).unwrap();
        assert!((d.hdop - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((d.vdop - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((d.tdop - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
        assert!((d.gdop * d.gdop - d.pdop * d.pdop - d.tdop * d.tdop).abs() < 1e-12);
    }
}
