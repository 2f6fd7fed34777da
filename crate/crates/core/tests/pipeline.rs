use depthpoly::analysis::convexity_by_roots;
use depthpoly::generate::{generate_convex, generate_random};
use depthpoly::io::{parse_points_text, write_points_text};
use depthpoly::report::InputDescriptor;
use depthpoly::roots::matching_distance;
use depthpoly::svg::{voronoi_root_plot, SvgOptions};
use depthpoly::{
    analyze, binomial, build_polynomials, depth_profile, find_roots, AnalyzeOptions, Point,
};
use num_complex::Complex64;

const EIGHT_POINT_REFERENCE: [(i32, i32); 8] = [
    (15, 13),
    (31, 15),
    (24, 14),
    (20, 15),
    (15, 27),
    (1, 7),
    (13, 25),
    (9, 27),
];

fn reference_text() -> String {
    let mut s = String::from("# reference set\n8\n");
    for (x, y) in EIGHT_POINT_REFERENCE {
        s.push_str(&format!("{x} {y}\n"));
    }
    s
}

#[test]
fn reference_set_report() {
    let set = parse_points_text(&reference_text()).unwrap();
    let r = analyze(&set, &AnalyzeOptions::default()).unwrap();
    assert_eq!(r.cr, 39);
    assert_eq!(r.h, 4);
    assert_eq!(r.coefficients.c, vec![10, 13, 14, 10, 7, 2]);
    assert_eq!(r.coefficients.v, vec![10, 23, 27, 24, 17, 9, 2]);
    assert_eq!(r.coefficients.e_cum, vec![4, 13, 22, 34, 43, 52]);
    assert!((r.stats.mu - 109.0 / 56.0).abs() < 1e-14);
    assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
    assert!(r.roots.voronoi.max_modulus > 1.0);
    let names: Vec<&str> = r.identities.iter().map(|c| c.name.as_str()).collect();
    for expected in [
        "crossing_from_roots[circle]",
        "crossing_from_roots[voronoi]",
        "crossing_from_roots[e_leq]",
        "circle_inverse_distance_sum",
        "reciprocal_inverse_distance_sum",
        "convexity_by_roots",
        "depth_variance",
    ] {
        assert!(names.contains(&expected), "{expected} missing");
    }
}

#[test]
fn text_round_trip_gives_identical_report() {
    let opts = AnalyzeOptions {
        input: InputDescriptor {
            source: "round-trip".into(),
            format: "text".into(),
            ..InputDescriptor::default()
        },
        record_timings: false,
        ..AnalyzeOptions::default()
    };
    for seed in 0..5 {
        let set = generate_random(7 + seed as usize, seed).unwrap();
        let again = parse_points_text(&write_points_text(&set)).unwrap();
        assert_eq!(set, again);
        let a = analyze(&set, &opts).unwrap().to_json();
        let b = analyze(&again, &opts).unwrap().to_json();
        assert_eq!(a, b);
    }
}

#[test]
fn convex_twenty_on_unit_circle() {
    let set = generate_convex(20, 3).unwrap();
    let profile = depth_profile(&set).unwrap();
    assert_eq!(profile.cr as i128, binomial(20, 4));
    let polys = build_polynomials(&profile).unwrap();
    let pv = find_roots(&polys.voronoi).unwrap();
    assert!(convexity_by_roots(&pv, &profile).unwrap().on_unit_circle);
    let svg = voronoi_root_plot(
        &pv,
        &analyze(&set, &AnalyzeOptions::default()).unwrap().bounds,
        &SvgOptions::default(),
    );
    assert_eq!(svg.matches(r#"<circle cx"#).count(), 2 + 18);
}

#[test]
fn rotation_by_quarter_turn_keeps_roots() {
    let set = generate_random(10, 21).unwrap();
    let turned: Vec<Point> = set.points().iter().map(|p| Point::new(-p.y, p.x)).collect();
    let turned = depthpoly::validate_general_position(turned).unwrap();
    let a = analyze(&set, &AnalyzeOptions::default()).unwrap();
    let b = analyze(&turned, &AnalyzeOptions::default()).unwrap();
    assert_eq!(a.coefficients, b.coefficients);
    assert!(matching_distance(&a.roots.e_leq.roots, &b.roots.e_leq.roots) == 0.0);
}

#[test]
fn convex_j_edge_roots_are_roots_of_unity() {
    for n in [5, 8, 13] {
        let set = generate_convex(n, n as u64).unwrap();
        let polys = build_polynomials(&depth_profile(&set).unwrap()).unwrap();
        assert!(polys.j_edge.coeffs().iter().all(|&c| c == n as u64));
        let roots = find_roots(&polys.j_edge).unwrap();
        let expected: Vec<Complex64> = (1..n - 1)
            .map(|k| {
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / (n - 1) as f64)
            })
            .collect();
        assert!(matching_distance(&roots.roots, &expected) < 1e-9);
    }
}
