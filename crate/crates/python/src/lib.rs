//! Python bindings for the `leonav` trade-study engine.
//!
//! Structured results come back as plain dicts and lists. Input errors raise
//! `ValueError`; failures of the computation itself raise `RuntimeError`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use pythonize::pythonize;

use leonav::geometry::{self, dop_from_los};
use leonav::io::{build_report, parse_scenario, render, scenario_to_string, timestamp_now, Format, KeyPolicy, Report};
use leonav::orbits::{self, RaanSpread};
use leonav::{payload, rflink, tradestudy, Error};

fn err(e: Error) -> PyErr {
    if e.is_validation() {
        PyValueError::new_err(e.to_string())
    } else {
        PyRuntimeError::new_err(e.to_string())
    }
}

fn spread_from_name(name: &str) -> PyResult<RaanSpread> {
    match name {
        "star" => Ok(RaanSpread::Star),
        "delta" => Ok(RaanSpread::Delta),
        other => Err(PyValueError::new_err(format!(
            "raan_spread must be 'star' or 'delta', got {other:?}"
        ))),
    }
}

fn earth_or_default(earth: Option<PyRef<'_, EarthModel>>) -> orbits::EarthModel {
    earth.map(|e| e.inner).unwrap_or_default()
}

#[pyclass(module = "leonav", frozen)]
pub struct EarthModel {
    inner: orbits::EarthModel,
}

#[pymethods]
impl EarthModel {
    #[new]
    #[pyo3(signature = (radius_km=6378.137, mu_km3s2=398_600.441_8, rotation_rate_rad_s=7.292_115_9e-5))]
    fn new(radius_km: f64, mu_km3s2: f64, rotation_rate_rad_s: f64) -> PyResult<Self> {
        let inner = orbits::EarthModel {
            radius_km,
            mu_km3s2,
            rotation_rate_rad_s,
        };
        inner.validate().map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn radius_km(&self) -> f64 {
        self.inner.radius_km
    }

    #[getter]
    fn mu_km3s2(&self) -> f64 {
        self.inner.mu_km3s2
    }

    #[getter]
    fn rotation_rate_rad_s(&self) -> f64 {
        self.inner.rotation_rate_rad_s
    }

    fn __repr__(&self) -> String {
        format!(
            "EarthModel(radius_km={}, mu_km3s2={}, rotation_rate_rad_s={})",
            self.inner.radius_km, self.inner.mu_km3s2, self.inner.rotation_rate_rad_s
        )
    }
}

/// Walker T/P/F pattern of circular orbits.
#[pyclass(module = "leonav", frozen)]
pub struct WalkerSpec {
    inner: orbits::WalkerSpec,
}

#[pymethods]
impl WalkerSpec {
    /// Leaving `planes` unset picks the divisor of `total_sats` nearest its
    /// square root, with phasing 1.
    #[new]
    #[pyo3(signature = (total_sats, altitude_km, inclination_deg, planes=None, phasing=None, raan_spread="star"))]
    fn new(
        total_sats: usize,
        altitude_km: f64,
        inclination_deg: f64,
        planes: Option<usize>,
        phasing: Option<usize>,
        raan_spread: &str,
    ) -> PyResult<Self> {
        let spread = spread_from_name(raan_spread)?;
        let inner = match planes {
            Some(p) => orbits::WalkerSpec::new(
                total_sats,
                p,
                phasing.unwrap_or(if p > 1 { 1 } else { 0 }),
                altitude_km,
                inclination_deg,
                spread,
            ),
            None => orbits::WalkerSpec::with_default_planes(total_sats, altitude_km, inclination_deg, spread).and_then(
                |s| match phasing {
                    Some(f) => orbits::WalkerSpec::new(s.total_sats, s.planes, f, altitude_km, inclination_deg, spread),
                    None => Ok(s),
                },
            ),
        }
        .map_err(err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn gps_reference() -> Self {
        Self {
            inner: orbits::WalkerSpec::gps_reference(),
        }
    }

    #[getter]
    fn total_sats(&self) -> usize {
        self.inner.total_sats
    }

    #[getter]
    fn planes(&self) -> usize {
        self.inner.planes
    }

    #[getter]
    fn phasing(&self) -> usize {
        self.inner.phasing
    }

    #[getter]
    fn altitude_km(&self) -> f64 {
        self.inner.altitude_km
    }

    #[getter]
    fn inclination_deg(&self) -> f64 {
        self.inner.inclination_deg
    }

    #[getter]
    fn raan_spread(&self) -> &'static str {
        match self.inner.raan_spread {
            RaanSpread::Star => "star",
            RaanSpread::Delta => "delta",
        }
    }

    /// Orbital elements per satellite, plane-major, angles in degrees.
    #[pyo3(signature = (earth=None))]
    fn elements<'py>(
        &self,
        py: Python<'py>,
        earth: Option<PyRef<'_, EarthModel>>,
    ) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let earth = earth_or_default(earth);
        orbits::walker_constellation(&self.inner, &earth)
            .map_err(err)?
            .iter()
            .map(|el| {
                let d = PyDict::new(py);
                d.set_item("semimajor_km", el.semimajor_km)?;
                d.set_item("inclination_deg", el.inclination_rad.to_degrees())?;
                d.set_item("raan_deg", el.raan_rad.to_degrees())?;
                d.set_item("anomaly_deg", el.initial_anomaly_rad.to_degrees())?;
                d.set_item("period_s", el.period_s(&earth))?;
                Ok(d)
            })
            .collect()
    }

    /// Earth-fixed positions (km) of every satellite at `t_s` seconds past epoch.
    #[pyo3(signature = (t_s, earth=None))]
    fn positions_ecef(&self, t_s: f64, earth: Option<PyRef<'_, EarthModel>>) -> PyResult<Vec<(f64, f64, f64)>> {
        let earth = earth_or_default(earth);
        let els = orbits::walker_constellation(&self.inner, &earth).map_err(err)?;
        Ok(orbits::constellation_ecef(&els, t_s, &earth)
            .into_iter()
            .map(|p| (p.x_km, p.y_km, p.z_km))
            .collect())
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "WalkerSpec({}/{}/{}, altitude_km={}, inclination_deg={}, raan_spread='{}')",
            s.total_sats,
            s.planes,
            s.phasing,
            s.altitude_km,
            s.inclination_deg,
            self.raan_spread()
        )
    }
}

/// A complete trade-study configuration.
#[pyclass(module = "leonav", frozen)]
pub struct Scenario {
    inner: tradestudy::Scenario,
    warnings: Vec<String>,
}

fn report_from_name(name: &str) -> PyResult<Report> {
    Ok(match name {
        "dop-map" => Report::DopMap,
        "dop-sweep" => Report::DopSweep,
        "optimize" => Report::Optimize,
        "pathloss" => Report::Pathloss,
        "footprint" => Report::Footprint,
        "jammer" => Report::Jammer,
        "power" => Report::Power,
        "baseline" => Report::Baseline,
        other => return Err(PyValueError::new_err(format!("unknown report {other:?}"))),
    })
}

#[pymethods]
impl Scenario {
    #[new]
    fn new() -> Self {
        Self {
            inner: tradestudy::Scenario::default(),
            warnings: Vec::new(),
        }
    }

    /// Parses a JSON scenario. Unknown keys raise unless `lenient`, in which
    /// case they are listed in `warnings`.
    #[staticmethod]
    #[pyo3(signature = (text, lenient=false))]
    fn from_json(text: &str, lenient: bool) -> PyResult<Self> {
        let policy = if lenient { KeyPolicy::Lenient } else { KeyPolicy::Strict };
        let parsed = parse_scenario(text, policy).map_err(err)?;
        Ok(Self {
            inner: parsed.scenario,
            warnings: parsed.warnings,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        scenario_to_string(&self.inner).map_err(err)
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        Ok(pythonize(py, &self.inner)?)
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.warnings.clone()
    }

    #[getter]
    fn hash(&self) -> String {
        self.inner.hash()
    }

    /// Percentile PDOP statistics of the scenario's own constellation.
    fn pdop<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let stats = py.detach(|| tradestudy::scenario_pdop(&self.inner)).map_err(err)?;
        Ok(pythonize(py, &stats)?)
    }

    fn gps_baseline<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let stats = py.detach(|| tradestudy::gps_baseline(&self.inner)).map_err(err)?;
        Ok(pythonize(py, &stats)?)
    }

    fn pdop_sweep<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let r = py.detach(|| tradestudy::pdop_sweep(&self.inner)).map_err(err)?;
        Ok(pythonize(py, &r)?)
    }

    /// Smallest constellation at `altitude_km` meeting `pdop_target`; the
    /// GPS-like baseline is the target when none is given.
    #[pyo3(signature = (altitude_km, pdop_target=None))]
    fn min_constellation_size<'py>(
        &self,
        py: Python<'py>,
        altitude_km: f64,
        pdop_target: Option<f64>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let r = py
            .detach(|| {
                let target = match pdop_target {
                    Some(t) => t,
                    None => tradestudy::gps_baseline(&self.inner)?.pdop,
                };
                tradestudy::min_constellation_size(altitude_km, target, &self.inner)
            })
            .map_err(err)?;
        Ok(pythonize(py, &r)?)
    }

    #[pyo3(signature = (margins_db=None))]
    fn table2<'py>(&self, py: Python<'py>, margins_db: Option<Vec<f64>>) -> PyResult<Bound<'py, PyAny>> {
        let margins = margins_db.unwrap_or_else(|| self.inner.jammer.margins_db.clone());
        let rows = tradestudy::table2_report(&margins, &self.inner).map_err(err)?;
        Ok(pythonize(py, &rows)?)
    }

    fn power_budget<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let p = &self.inner.payload;
        let b = payload::power_budget(&p.heritage, &p.leo).map_err(err)?;
        Ok(pythonize(py, &b)?)
    }

    /// Renders one of the command-line reports (`"jammer"`, `"dop-sweep"`, ...)
    /// as CSV, JSON or SVG text.
    #[pyo3(signature = (name, format="csv"))]
    fn report(&self, py: Python<'_>, name: &str, format: &str) -> PyResult<String> {
        let report = report_from_name(name)?;
        let format: Format = format.parse().map_err(err)?;
        let bytes = py
            .detach(|| {
                let env = build_report(report, &self.inner, &timestamp_now())?;
                render(&env, format)
            })
            .map_err(err)?;
        String::from_utf8(bytes).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!("Scenario(hash='{}')", &self.inner.hash()[..12])
    }
}

#[pyfunction]
#[pyo3(signature = (lat_deg, lon_deg, alt_km=0.0, earth=None))]
fn site_to_ecef(
    lat_deg: f64,
    lon_deg: f64,
    alt_km: f64,
    earth: Option<PyRef<'_, EarthModel>>,
) -> PyResult<(f64, f64, f64)> {
    let p = orbits::site_to_ecef(lat_deg, lon_deg, alt_km, &earth_or_default(earth)).map_err(err)?;
    Ok((p.x_km, p.y_km, p.z_km))
}

/// Azimuth, elevation (degrees) and range (km) from an Earth-fixed site to a satellite.
#[pyfunction]
fn az_el_range<'py>(py: Python<'py>, site: (f64, f64, f64), sat: (f64, f64, f64)) -> PyResult<Bound<'py, PyDict>> {
    let to = |(x, y, z)| orbits::EcefPosition::new(x, y, z);
    let a = geometry::az_el_range(to(site), to(sat)).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("azimuth_deg", a.azimuth_deg)?;
    d.set_item("elevation_deg", a.elevation_deg)?;
    d.set_item("range_km", a.range_km)?;
    d.set_item("los_enu", a.los_enu)?;
    Ok(d)
}

/// GDOP, PDOP, HDOP, VDOP and TDOP from unit east/north/up lines of sight.
#[pyfunction]
fn dop<'py>(py: Python<'py>, los_enu: Vec<[f64; 3]>) -> PyResult<Bound<'py, PyAny>> {
    let d = dop_from_los(los_enu).map_err(err)?;
    Ok(pythonize(py, &d)?)
}

#[pyfunction]
fn weighted_percentile(values: Vec<(f64, f64)>, percentile: f64) -> Option<f64> {
    geometry::weighted_percentile(&values, percentile)
}

#[pyfunction]
#[pyo3(signature = (distance_km, frequency_hz=rflink::L1_HZ))]
fn fspl_db(distance_km: f64, frequency_hz: f64) -> PyResult<f64> {
    rflink::fspl_db(distance_km, frequency_hz).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (altitude_km, elevation_deg, earth=None))]
fn slant_range_km(altitude_km: f64, elevation_deg: f64, earth: Option<PyRef<'_, EarthModel>>) -> PyResult<f64> {
    rflink::slant_range_km(altitude_km, elevation_deg, &earth_or_default(earth)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (altitude_km, mask_deg, earth=None))]
fn footprint_area_km2(altitude_km: f64, mask_deg: f64, earth: Option<PyRef<'_, EarthModel>>) -> PyResult<f64> {
    rflink::footprint_area_km2(altitude_km, mask_deg, &earth_or_default(earth)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (leo_altitude_km, mask_deg, meo_altitude_km=rflink::GALILEO_ALTITUDE_KM, earth=None))]
fn footprint_gain_db(
    leo_altitude_km: f64,
    mask_deg: f64,
    meo_altitude_km: f64,
    earth: Option<PyRef<'_, EarthModel>>,
) -> PyResult<f64> {
    rflink::footprint_gain_db(leo_altitude_km, meo_altitude_km, mask_deg, &earth_or_default(earth)).map_err(err)
}

fn calibration(ref_power_w: Option<f64>, ref_radius_m: Option<f64>) -> rflink::JammerCalibration {
    let d = rflink::JammerCalibration::default();
    rflink::JammerCalibration {
        ref_power_w: ref_power_w.unwrap_or(d.ref_power_w),
        ref_radius_m: ref_radius_m.unwrap_or(d.ref_radius_m),
    }
}

#[pyfunction]
#[pyo3(signature = (jammer_power_w, margin_db, ref_power_w=None, ref_radius_m=None))]
fn jammer_effective_radius_m(
    jammer_power_w: f64,
    margin_db: f64,
    ref_power_w: Option<f64>,
    ref_radius_m: Option<f64>,
) -> PyResult<f64> {
    rflink::jammer_effective_radius_m(jammer_power_w, margin_db, &calibration(ref_power_w, ref_radius_m)).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (radius_m, margin_db, ref_power_w=None, ref_radius_m=None))]
fn jammer_power_for_radius_w(
    radius_m: f64,
    margin_db: f64,
    ref_power_w: Option<f64>,
    ref_radius_m: Option<f64>,
) -> PyResult<f64> {
    rflink::jammer_power_for_radius_w(radius_m, margin_db, &calibration(ref_power_w, ref_radius_m)).map_err(err)
}

/// Canopy category and whole walls of each default material a margin buys.
#[pyfunction]
fn penetration_report<'py>(py: Python<'py>, margin_db: f64) -> PyResult<Bound<'py, PyAny>> {
    let r = rflink::penetration_report(margin_db, &rflink::MaterialLossTable::default()).map_err(err)?;
    Ok(pythonize(py, &r)?)
}

#[pyfunction]
fn per_signal_bus_power_w(rf_output_w: f64, n_signals: u32, pa_efficiency: f64) -> PyResult<f64> {
    payload::per_signal_bus_power_w(rf_output_w, n_signals, pa_efficiency).map_err(err)
}

#[pyfunction]
fn signal_generation_load_w(rf_output_w: f64, pa_efficiency: f64) -> PyResult<f64> {
    payload::signal_generation_load_w(rf_output_w, pa_efficiency).map_err(err)
}

#[pyfunction]
fn leo_payload_power_w(
    n_signals: u32,
    per_signal_bus_w: f64,
    overhead_fraction_range: (f64, f64),
) -> PyResult<(f64, f64)> {
    payload::leo_payload_power_w(n_signals, per_signal_bus_w, overhead_fraction_range).map_err(err)
}

#[pyfunction]
fn gnss_equivalent_power_w<'py>(
    py: Python<'py>,
    leo_total_w: (f64, f64),
    footprint_gain_db_range: (f64, f64),
) -> PyResult<Bound<'py, PyAny>> {
    let g = payload::gnss_equivalent_power_w(leo_total_w, footprint_gain_db_range).map_err(err)?;
    Ok(pythonize(py, &g)?)
}

#[pymodule]
#[pyo3(name = "leonav")]
pub fn leonav_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("L1_HZ", rflink::L1_HZ)?;
    m.add("GPS_ALTITUDE_KM", rflink::GPS_ALTITUDE_KM)?;
    m.add("GALILEO_ALTITUDE_KM", rflink::GALILEO_ALTITUDE_KM)?;
    m.add_class::<EarthModel>()?;
    m.add_class::<WalkerSpec>()?;
    m.add_class::<Scenario>()?;
    m.add_function(wrap_pyfunction!(site_to_ecef, m)?)?;
    m.add_function(wrap_pyfunction!(az_el_range, m)?)?;
    m.add_function(wrap_pyfunction!(dop, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_percentile, m)?)?;
    m.add_function(wrap_pyfunction!(fspl_db, m)?)?;
    m.add_function(wrap_pyfunction!(slant_range_km, m)?)?;
    m.add_function(wrap_pyfunction!(footprint_area_km2, m)?)?;
    m.add_function(wrap_pyfunction!(footprint_gain_db, m)?)?;
    m.add_function(wrap_pyfunction!(jammer_effective_radius_m, m)?)?;
    m.add_function(wrap_pyfunction!(jammer_power_for_radius_w, m)?)?;
    m.add_function(wrap_pyfunction!(penetration_report, m)?)?;
    m.add_function(wrap_pyfunction!(per_signal_bus_power_w, m)?)?;
    m.add_function(wrap_pyfunction!(signal_generation_load_w, m)?)?;
    m.add_function(wrap_pyfunction!(leo_payload_power_w, m)?)?;
    m.add_function(wrap_pyfunction!(gnss_equivalent_power_w, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use pyo3::types::PyDict;

    fn with_module(code: &std::ffi::CStr) {
        Python::initialize();
        Python::attach(|py| {
            let module = PyModule::new(py, "leonav").unwrap();
            leonav_module(&module).unwrap();
            let locals = PyDict::new(py);
            locals.set_item("leonav", module).unwrap();
            if let Err(e) = py.run(code, None, Some(&locals)) {
                e.print(py);
                panic!("python snippet failed");
            }
        });
    }

    #[test]
    fn walker_and_geometry() {
        with_module(
            c"
w = leonav.WalkerSpec(300, 900.0, 90.0)
assert (w.planes, w.phasing, w.raan_spread) == (15, 1, 'star'), w
assert len(w.positions_ecef(0.0)) == 300
g = leonav.WalkerSpec.gps_reference()
assert (g.total_sats, g.planes) == (24, 6)
a = leonav.az_el_range((6378.137, 0.0, 0.0), (7378.137, 0.0, 0.0))
assert abs(a['elevation_deg'] - 90.0) < 1e-9
d = leonav.dop([(0, 0, 1), (1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0)])
assert abs(d['hdop'] ** 2 - 1.0) < 1e-9 and abs(d['vdop'] ** 2 - 1.25) < 1e-9, d
",
        );
    }

    #[test]
    fn errors_map_to_python_types() {
        with_module(
            c"
try:
    leonav.WalkerSpec(300, 900.0, 90.0, planes=7)
    raise AssertionError('expected ValueError')
except ValueError as e:
    assert 'divide' in str(e), e
try:
    leonav.dop([(0, 0, 1)] * 3)
    raise AssertionError('expected RuntimeError')
except RuntimeError:
    pass
try:
    leonav.Scenario.from_json('{\"walker\": {\"plnes\": 4}}')
    raise AssertionError('expected ValueError')
except ValueError:
    pass
s = leonav.Scenario.from_json('{\"walker\": {\"plnes\": 4}}', lenient=True)
assert len(s.warnings) == 1
",
        );
    }

    #[test]
    fn link_and_power() {
        with_module(
            c"
delta = leonav.fspl_db(504.5) - leonav.fspl_db(leonav.GPS_ALTITUDE_KM)
assert abs(delta + 32.04) < 0.01, delta
rows = leonav.Scenario().table2()
assert [r['wall_counts'][0][1] for r in rows] == [0, 0, 1, 2, 3]
b = leonav.Scenario().power_budget()
assert abs(b['per_signal_bus_w'][1] - 53.53) < 0.01
csv = leonav.Scenario().report('jammer')
assert csv.splitlines()[0].startswith('margin_dbhz')
",
        );
    }
}
