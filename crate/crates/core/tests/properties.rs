use firesat_core::carbon::{average_biomass, emission_tons};
use firesat_core::envdata::{
    geo_to_planar, BiomassGrid, EnvGrid, GeoTransform, GridShape, Incident,
};
use firesat_core::evolution::{
    detect, prune, simulate_incident, BurnCircle, EvolutionConfig, Frontier,
};
use firesat_core::firekernel::{
    ellipse_from_ignition, length_breadth_ratio, moisture_factor, speeds, spread_speed,
    wind_factor, SpreadModel, WindSample,
};
use firesat_core::linkbudget::{cnr_db, fspl_db, LinkParams};
use firesat_core::sensors::{deploy_uniform, SensorField};
use firesat_core::{Point2, Rect};
use proptest::prelude::*;

proptest! {
    #[test]
    fn wind_factor_bounded_and_monotone(a in 0.0..200.0f64, b in 0.0..200.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (g_lo, g_hi) = (wind_factor(lo).unwrap(), wind_factor(hi).unwrap());
        prop_assert!((0.1..=1.0).contains(&g_lo));
        prop_assert!(g_lo <= g_hi);
    }

    #[test]
    fn moisture_factor_bounded_and_monotone(a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (h_lo, h_hi) = (moisture_factor(lo).unwrap(), moisture_factor(hi).unwrap());
        prop_assert!((0.0..=1.0).contains(&h_hi));
        prop_assert!(h_hi <= h_lo);
        if hi >= 0.35 {
            prop_assert_eq!(h_hi, 0.0);
        }
    }

    #[test]
    fn speeds_ordered(ws in 0.0..80.0f64, beta in 0.0..1.0f64) {
        let s = speeds(ws, beta).unwrap();
        prop_assert!(s.u_p <= 0.13 + 1e-15);
        prop_assert!(s.u_b <= s.u_p && s.v <= s.u_p);
        prop_assert!(s.u_b >= 0.0 && s.v >= 0.0);
        prop_assert!((s.u_p - spread_speed(ws, beta).unwrap()).abs() <= 1e-15);
        let lb = length_breadth_ratio(ws).unwrap();
        prop_assert!((1.0..11.0).contains(&lb));
    }

    #[test]
    fn ellipse_vertices_match_speeds(ws in 0.0..60.0f64, theta in -3.1..3.1f64, beta in 0.0..0.34f64,
                                      x in -50.0..50.0f64, y in -50.0..50.0f64) {
        let ign = Point2::new(x, y);
        let e = ellipse_from_ignition(ign, WindSample::new(ws, theta).unwrap(), beta, 3600.0, 0).unwrap();
        let s = speeds(ws, beta).unwrap();
        let [head, rear, left, right] = e.axis_endpoints();
        prop_assert!((head.distance(ign) - s.u_p * 3.6).abs() < 1e-9);
        prop_assert!((rear.distance(ign) - s.u_b * 3.6).abs() < 1e-9);
        prop_assert!((left.distance(e.center) - s.v * 3.6).abs() < 1e-9);
        prop_assert!((right.distance(e.center) - s.v * 3.6).abs() < 1e-9);
        for p in [head, rear, left, right] {
            prop_assert!((e.level(p) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn geo_transform_is_affine(fx in 0.0..1.0f64, fy in 0.0..1.0f64) {
        let gt = GeoTransform::default();
        let lat = gt.lat_min + fy * (gt.lat_max - gt.lat_min);
        let lon = gt.lon_min + fx * (gt.lon_max - gt.lon_min);
        let p = geo_to_planar(&gt, lat, lon).unwrap();
        prop_assert!((p.x - fx * gt.width_km).abs() < 1e-9);
        prop_assert!((p.y - fy * gt.height_km).abs() < 1e-9);
    }

    #[test]
    fn emission_linear_in_area(a in 0.0..1e5f64, b in 0.0..300.0f64, k in 0.0..10.0f64) {
        let base = emission_tons(a, b).unwrap();
        let scaled = emission_tons(a * k, b).unwrap();
        prop_assert!((scaled - k * base).abs() <= 1e-9 * scaled.abs().max(1.0));
    }

    #[test]
    fn average_biomass_within_range(cx in -5.0..25.0f64, cy in -5.0..25.0f64, r in 0.0..15.0f64,
                                    vals in prop::collection::vec(0.0..500.0f32, 400)) {
        let bio = BiomassGrid::new(20, 20, 1.0, Point2::ORIGIN, vals.clone()).unwrap();
        let c = BurnCircle { center: Point2::new(cx, cy), radius_km: r };
        if let Ok(avg) = average_biomass(&c, &bio) {
            let lo = vals.iter().cloned().fold(f32::INFINITY, f32::min) as f64;
            let hi = vals.iter().cloned().fold(0.0, f32::max) as f64;
            prop_assert!(avg >= lo - 1e-6 && avg <= hi + 1e-6);
            // brute force over every cell
            let mut sum = 0.0;
            let mut n = 0;
            for iy in 0..20 {
                for ix in 0..20 {
                    if bio.cell_center(ix, iy).distance_sq(c.center) <= r * r {
                        sum += bio.value(ix, iy);
                        n += 1;
                    }
                }
            }
            if n > 0 {
                prop_assert!((avg - sum / n as f64).abs() <= 1e-9 * avg.max(1.0));
            }
        }
    }

    #[test]
    fn cnr_monotone_in_distance(d1 in 1000.0..50000.0f64, d2 in 1000.0..50000.0f64) {
        let (near, far) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let mut p = LinkParams::geo_10deg();
        p.distance_km = near;
        let c_near = cnr_db(&p).unwrap();
        p.distance_km = far;
        prop_assert!(cnr_db(&p).unwrap() <= c_near);
    }

    #[test]
    fn fspl_doubling(d in 1.0..1e5f64, f in 1.0..1e5f64) {
        let delta = fspl_db(2.0 * d, f).unwrap() - fspl_db(d, f).unwrap();
        prop_assert!((delta - 6.0206).abs() < 1e-4);
    }

    #[test]
    fn detection_monotone_in_radius(seed in any::<u64>(), cx in 0.0..100.0f64, cy in 0.0..100.0f64,
                                     r1 in 0.0..30.0f64, r2 in 0.0..30.0f64) {
        let field = deploy_uniform(200, Rect::from_extents(100.0, 100.0), seed).unwrap();
        let (small, large) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let c = Point2::new(cx, cy);
        let hit_small = detect(&BurnCircle { center: c, radius_km: small }, &field);
        let hit_large = detect(&BurnCircle { center: c, radius_km: large }, &field);
        if hit_small.is_some() {
            prop_assert!(hit_large.is_some());
        }
    }

    #[test]
    fn nested_deployments(seed in any::<u64>(), n in 0usize..300, extra in 0usize..300) {
        let region = Rect::from_extents(10.0, 20.0);
        let a = deploy_uniform(n, region, seed).unwrap();
        let b = deploy_uniform(n + extra, region, seed).unwrap();
        prop_assert_eq!(a.positions(), &b.positions()[..n]);
        prop_assert!(b.positions().iter().all(|p| region.contains(*p)));
    }

    #[test]
    fn prune_identity_without_margin_or_snap(pts in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..60)) {
        let pts: Vec<Point2> = pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect();
        let f = Frontier::from_points(&pts, 3);
        let circle = BurnCircle { center: Point2::ORIGIN, radius_km: 5.0 };
        let p = prune(&f, &circle, 0.0, None);
        prop_assert_eq!(p.frontier, f);
    }
}

fn constant_env(nt: usize, u: f32, v: f32, beta: f32) -> EnvGrid {
    let shape = GridShape {
        nx: 40,
        ny: 40,
        nt,
        spacing_km: 10.0,
        origin: Point2::ORIGIN,
    };
    EnvGrid::uniform(shape, u, v, beta).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn more_sensors_never_detect_later(seed in any::<u64>(), u in -8.0..8.0f32, v in -8.0..8.0f32) {
        let env = constant_env(80, u, v, 0.1);
        let region = env.rect();
        let inc = Incident {
            id: "p".into(),
            start_hour: 0,
            ignition: Point2::new(200.0, 200.0),
            historical_burn_hours: None,
            historical_area_km2: None,
        };
        let cfg = EvolutionConfig { max_hours: 60.0, ..EvolutionConfig::default() };
        let model = SpreadModel::default();
        let few = deploy_uniform(50, region, seed).unwrap();
        let many = deploy_uniform(500, region, seed).unwrap();
        let a = simulate_incident(&inc, &env, &few, &model, &cfg).unwrap();
        let b = simulate_incident(&inc, &env, &many, &model, &cfg).unwrap();
        prop_assert!(b.detection_hour <= a.detection_hour);
        prop_assert!(b.burned_area_km2 <= a.burned_area_km2 + 1e-12);
    }

    #[test]
    fn pruning_keeps_constant_wind_circle(u in -8.0..8.0f32, v in -8.0..8.0f32, beta in 0.0..0.3f32) {
        let env = constant_env(12, u, v, beta);
        let inc = Incident {
            id: "q".into(),
            start_hour: 0,
            ignition: Point2::new(200.0, 200.0),
            historical_burn_hours: None,
            historical_area_km2: None,
        };
        let empty = SensorField::empty(env.rect()).unwrap();
        let model = SpreadModel::default();
        let hours = 8.0;
        let pruned = EvolutionConfig { max_hours: hours, ..EvolutionConfig::default() };
        let full = EvolutionConfig { max_hours: hours, ..EvolutionConfig::unpruned() };
        let a = simulate_incident(&inc, &env, &empty, &model, &pruned).unwrap();
        let b = simulate_incident(&inc, &env, &empty, &model, &full).unwrap();
        let tol = 1e-6 * b.final_circle.radius_km.max(1.0);
        prop_assert!((a.final_circle.radius_km - b.final_circle.radius_km).abs() <= tol);
        prop_assert!(a.final_circle.center.distance(b.final_circle.center) <= tol);
    }
}
