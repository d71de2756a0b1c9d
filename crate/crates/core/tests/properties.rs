use proptest::prelude::*;

use leonav::geometry::{dop_from_los, weighted_percentile};
use leonav::io::{parse_scenario, scenario_to_string, KeyPolicy};
use leonav::orbits::{
    eci_to_ecef, is_balanced_size, propagate, snap_size, walker_constellation, EarthModel, RaanSpread, WalkerSpec,
};
use leonav::rflink::{
    fspl_db, jammer_effective_radius_m, jammer_power_for_radius_w, penetration_report, slant_range_km,
    JammerCalibration, MaterialLossTable,
};
use leonav::tradestudy::Scenario;

fn los_strategy() -> impl Strategy<Value = Vec<[f64; 3]>> {
    prop::collection::vec((0.0..std::f64::consts::TAU, 0.1f64..1.0), 4..16).prop_map(|v| {
        v.into_iter()
            .map(|(az, su)| {
                let cu = (1.0 - su * su).sqrt();
                [cu * az.sin(), cu * az.cos(), su]
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn propagation_keeps_radius(alt in 300.0..30000.0f64, inc in 0.0..180.0f64, t in -1e6..1e6f64,
                                planes in 1usize..6, per_plane in 1usize..6) {
        let earth = EarthModel::default();
        let total = planes * per_plane;
        let spec = WalkerSpec::new(total, planes, total % planes, alt, inc, RaanSpread::Delta).unwrap();
        let els = walker_constellation(&spec, &earth).unwrap();
        prop_assert_eq!(els.len(), total);
        let a = earth.radius_km + alt;
        for el in &els {
            let p = propagate(el, t, &earth);
            prop_assert!((p.norm() - a).abs() <= 1e-9 * a);
            let q = eci_to_ecef(p, t, &earth);
            prop_assert!((q.norm() - p.norm()).abs() <= 1e-9 * a);
            let back = propagate(el, t + el.period_s(&earth), &earth);
            prop_assert!((back.to_vector() - p.to_vector()).norm() < 1e-5);
        }
    }

    #[test]
    fn dop_identities(los in los_strategy()) {
        if let Ok(d) = dop_from_los(los.iter().copied()) {
            prop_assert!((d.gdop.powi(2) - d.pdop.powi(2) - d.tdop.powi(2)).abs() <= 1e-9 * d.gdop.powi(2));
            prop_assert!((d.pdop.powi(2) - d.hdop.powi(2) - d.vdop.powi(2)).abs() <= 1e-9 * d.pdop.powi(2));
            prop_assert!(d.pdop >= d.hdop && d.pdop >= d.vdop && d.gdop >= d.pdop);
        }
    }

    #[test]
    fn fspl_doubling(d in 1.0..1e5f64, f in 1e8..1e10f64) {
        let step = fspl_db(2.0 * d, f).unwrap() - fspl_db(d, f).unwrap();
        prop_assert!((step - 20.0 * 2f64.log10()).abs() < 1e-9);
    }

    #[test]
    fn slant_range_bounds(h in 100.0..40000.0f64, e1 in 0.0..90.0f64, e2 in 0.0..90.0f64) {
        let earth = EarthModel::default();
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let r_lo = slant_range_km(h, lo, &earth).unwrap();
        let r_hi = slant_range_km(h, hi, &earth).unwrap();
        prop_assert!(r_hi <= r_lo + 1e-9);
        prop_assert!(r_hi >= h - 1e-9);
        prop_assert!((slant_range_km(h, 90.0, &earth).unwrap() - h).abs() < 1e-6);
    }

    #[test]
    fn jammer_inverse(p in 1e-3..10.0f64, m in 0.0..40.0f64) {
        let cal = JammerCalibration::default();
        let r = jammer_effective_radius_m(p, m, &cal).unwrap();
        let back = jammer_power_for_radius_w(r, m, &cal).unwrap();
        prop_assert!((back - p).abs() <= 1e-9 * p);
    }

    #[test]
    fn penetration_monotone(a in 0.0..60.0f64, b in 0.0..60.0f64) {
        let table = MaterialLossTable::default();
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let rl = penetration_report(lo, &table).unwrap();
        let rh = penetration_report(hi, &table).unwrap();
        for ((_, x), (_, y)) in rl.counts.iter().zip(&rh.counts) {
            prop_assert!(x <= y);
        }
    }

    #[test]
    fn percentile_within_range(values in prop::collection::vec((0.0..100.0f64, 0.01..5.0f64), 1..40),
                               p1 in 0.0..100.0f64, p2 in 0.0..100.0f64) {
        let (lo, hi) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
        let a = weighted_percentile(&values, lo).unwrap();
        let b = weighted_percentile(&values, hi).unwrap();
        let min = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
        let max = values.iter().map(|v| v.0).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(a >= min - 1e-9 && b <= max + 1e-9);
        prop_assert!(a <= b + 1e-9);
    }

    #[test]
    fn snapped_sizes_are_balanced(t in 1usize..2000) {
        let s = snap_size(t);
        prop_assert!(is_balanced_size(s));
        if is_balanced_size(t) {
            prop_assert_eq!(s, t);
        }
    }

    #[test]
    fn scenario_round_trip(total in 4usize..500, alt in 300.0..2000.0f64, sites in 10usize..2000) {
        let mut s = Scenario::default();
        s.walker.total_sats = snap_size(total);
        s.walker.altitude_km = alt;
        s.grid.sites = sites;
        let text = scenario_to_string(&s).unwrap();
        let back = parse_scenario(&text, KeyPolicy::Strict).unwrap().scenario;
        prop_assert_eq!(back.hash(), s.hash());
        prop_assert_eq!(back, s);
    }
}
