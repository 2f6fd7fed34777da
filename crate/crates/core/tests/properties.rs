use depthpoly::analysis::{aziz_identity_check, verify_structural_identities};
use depthpoly::counts::{circle_depths, crossing_number_bruteforce, j_edges};
use depthpoly::geometry::{convex_hull, in_circle, orient};
use depthpoly::roots::{find_roots, find_roots_real, matching_distance, SolverOptions};
use depthpoly::{
    build_polynomials, depth_profile, validate_general_position, IntPolynomial, Point, PointSet,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn point(range: i32) -> impl Strategy<Value = Point> {
    (-range..range, -range..range).prop_map(|(x, y)| Point::new(x, y))
}

/// Sign of `|s - o|^2 - |p - o|^2` for the circumcentre `o = u / d` of
/// `p, q, r`, negated and scaled by `d^2 > 0`: positive inside.
fn circumcircle_side(p: Point, q: Point, r: Point, s: Point) -> i32 {
    let (ax, ay) = (p.x as i128, p.y as i128);
    let (bx, by) = (q.x as i128, q.y as i128);
    let (cx, cy) = (r.x as i128, r.y as i128);
    let d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    let (a2, b2, c2) = (ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy);
    let ux = a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by);
    let uy = a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax);
    let dist = |x: i32, y: i32| {
        let (dx, dy) = (x as i128 * d - ux, y as i128 * d - uy);
        dx * dx + dy * dy
    };
    -(dist(s.x, s.y) - dist(p.x, p.y)).signum() as i32
}

fn random_set(max_n: usize, range: i32) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(point(range), 4..=max_n)
        .prop_filter_map("not in general position", |pts| {
            validate_general_position(pts).ok()
        })
}

fn quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |a| {
        (a + 1..n)
            .flat_map(move |b| (b + 1..n).flat_map(move |c| (c + 1..n).map(move |d| [a, b, c, d])))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn orient_is_antisymmetric(p in point(i32::MAX), q in point(i32::MAX), r in point(i32::MAX)) {
        let o = orient(p, q, r);
        prop_assert_eq!(orient(q, p, r), -o);
        prop_assert_eq!(orient(p, r, q), -o);
        prop_assert_eq!(orient(r, q, p), -o);
        prop_assert_eq!(orient(q, r, p), o);
    }

    #[test]
    fn in_circle_matches_circumcentre(
        p in point(1 << 15), q in point(1 << 15), r in point(1 << 15), s in point(1 << 15)
    ) {
        prop_assume!(orient(p, q, r) != 0);
        let side = in_circle(p, q, r, s).unwrap();
        prop_assert_eq!(side, circumcircle_side(p, q, r, s));
        prop_assert_eq!(in_circle(q, r, p, s).unwrap(), side);
        prop_assert_eq!(in_circle(q, p, r, s).unwrap(), side);
    }

    #[test]
    fn in_circle_wide_coordinates_are_consistent(
        p in point(i32::MAX), q in point(i32::MAX), r in point(i32::MAX), s in point(i32::MAX)
    ) {
        prop_assume!(orient(p, q, r) != 0);
        let side = in_circle(p, q, r, s).unwrap();
        prop_assert_eq!(in_circle(r, p, q, s).unwrap(), side);
        prop_assert_eq!(in_circle(p, r, q, s).unwrap(), side);
        prop_assert_eq!(in_circle(p, q, r, p).unwrap(), 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn counts_match_independent_oracles(set in random_set(9, 40)) {
        let pts = set.points();
        let n = pts.len();
        let mut c = vec![0u64; n - 2];
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let inside = (0..n)
                        .filter(|&m| circumcircle_side(pts[i], pts[j], pts[k], pts[m]) > 0)
                        .count();
                    c[inside] += 1;
                }
            }
        }
        prop_assert_eq!(&circle_depths(&set), &c);

        let convex = quadruples(n)
            .filter(|q| {
                let sub = validate_general_position(q.iter().map(|&i| pts[i]).collect()).unwrap();
                convex_hull(&sub).len() == 4
            })
            .count() as u64;
        prop_assert_eq!(crossing_number_bruteforce(&set), convex);

        let e = j_edges(&set);
        prop_assert_eq!(e.iter().sum::<u64>(), (n * (n - 1)) as u64);
        prop_assert_eq!(e[0] as usize, convex_hull(&set).len());

        let profile = depth_profile(&set).unwrap();
        prop_assert_eq!(profile.cr, convex);
        let polys = build_polynomials(&profile).unwrap();
        for check in verify_structural_identities(&profile, &polys) {
            prop_assert!(check.passed, "{:?}", check);
        }
    }

    #[test]
    fn relabelling_keeps_counts(set in random_set(8, 60), shift in 1usize..7) {
        let mut pts = set.points().to_vec();
        let len = pts.len();
        pts.rotate_left(shift % len);
        let rotated = validate_general_position(pts).unwrap();
        prop_assert_eq!(depth_profile(&set).unwrap(), depth_profile(&rotated).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn scaled_unity_derivative_identity(
        coeffs in prop::collection::vec(0u64..100, 7),
        a_mod in 0.2f64..5.0,
        a_arg in -3.0f64..3.0,
        t_re in -1.5f64..1.5,
        t_im in -1.5f64..1.5,
    ) {
        let a = Complex64::from_polar(a_mod, a_arg);
        prop_assume!((a + 1.0).norm() > 0.1);
        let p = IntPolynomial::generic(coeffs);
        prop_assume!(p.degree().unwrap_or(0) >= 1);
        let check = aziz_identity_check(&p, a, Complex64::new(t_re, t_im));
        prop_assert!(check.passed, "{:?}", check);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn solver_residuals(coeffs in prop::collection::vec(1u64..1000, 2..40)) {
        let p = IntPolynomial::generic(coeffs);
        let roots = find_roots(&p).unwrap();
        prop_assert_eq!(roots.degree(), p.degree().unwrap());
        prop_assert!(roots.max_residual() <= 1e-10);
        prop_assert!(roots.conjugate_pairing_error() < 1e-8);
    }

    #[test]
    fn repeated_roots_are_resolved(
        base in prop::collection::vec(1u64..20, 2..6),
        extra in 1u32..3,
    ) {
        // base * (1 + z)^(extra + 1): a root at -1 of multiplicity >= 2
        let mut coeffs = base.clone();
        for _ in 0..=extra {
            let shifted = std::iter::once(0).chain(coeffs.iter().copied());
            coeffs = coeffs.iter().copied().chain([0]).zip(shifted).map(|(a, b)| a + b).collect();
        }
        let roots = find_roots(&IntPolynomial::generic(coeffs)).unwrap();
        let at_minus_one = roots.roots.iter().filter(|z| (*z + 1.0).norm() < 1e-12).count();
        prop_assert!(at_minus_one > extra as usize);
        let base_f: Vec<f64> = base.iter().map(|&x| x as f64).collect();
        let base_roots = find_roots_real(&base_f, &SolverOptions::default()).unwrap();
        let mut expected = base_roots.roots.clone();
        expected.extend(std::iter::repeat_n(Complex64::new(-1.0, 0.0), extra as usize + 1));
        prop_assert!(matching_distance(&roots.roots, &expected) < 1e-6);
    }
}
