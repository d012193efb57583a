use flatcensus::exactnum::{rat, Rational};
use flatcensus::hyperbolic::*;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

/// Words in h_s and h̃_s generate SL(2, ℚ).
fn moebius() -> impl Strategy<Value = Moebius> {
    prop::collection::vec((any::<bool>(), small_rational()), 1..5).prop_map(|w| {
        w.iter().fold(Moebius::identity(), |acc, (up, s)| {
            let g = if *up { Moebius::h(s) } else { Moebius::h_tilde(s) };
            &acc * &g
        })
    })
}

fn point() -> impl Strategy<Value = UHPPoint> {
    (small_rational(), 1i64..=5, 1i64..=3).prop_map(|(x, n, d)| UHPPoint::new(x, q(n, d)).unwrap())
}

fn f(x: &Rational) -> f64 {
    x.to_f64().unwrap()
}

/// Euclidean circle (centre, radius) through three points.
fn circle(p: [(f64, f64); 3]) -> ((f64, f64), f64) {
    let [(ax, ay), (bx, by), (cx, cy)] = p;
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    let ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d;
    let uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d;
    ((ux, uy), ((ax - ux).powi(2) + (ay - uy).powi(2)).sqrt())
}

/// Maps three points of H_t by γ and measures how far the image circle is
/// from touching 𝓑_t externally.
fn tangency_gap(g: &Moebius, t: &Rational) -> f64 {
    let pts = [q(1, 3), q(1, 2), q(2, 3)].map(|s| {
        // (t sinθ/2, t(1 + cosθ)/2) lies on H_t
        let (c, si) = pythagorean(&s);
        let x = t * &si / rat(2);
        let y = t * (rat(1) + c) / rat(2);
        let z = act(&UHPPoint::new(x, y).unwrap(), g);
        (f(z.x()), f(z.y()))
    });
    let ((cx, cy), r) = circle(pts);
    let t = f(t);
    ((cx * cx + (cy - t / 2.0).powi(2)).sqrt() - (r + t / 2.0)).abs()
}

#[test]
fn tangency_matches_geometry() {
    for g in sl2z_double_cosets(3).into_iter().chain([
        Moebius::new(q(1, 2), rat(0), q(3, 4), rat(2)).unwrap(),
        Moebius::new(rat(2), q(1, 3), q(-3, 2), q(1, 4)).unwrap(),
    ]) {
        if g.entries()[3] == &rat(0) {
            continue; // image is a half-plane, not a circle
        }
        let Tangency::At(t) = horoball_tangency(&g) else { panic!() };
        assert!(tangency_gap(&g, &t) < 1e-9, "{g:?}");
    }
}

#[test]
fn sl2z_cusp_area_is_one_and_certified() {
    let list = sl2z_double_cosets(3);
    assert!(list.iter().all(|g| {
        let [a, b, c, d] = g.entries();
        a * d - b * c == rat(1) && c.is_integer()
    }));
    let r = cusp_area(&list, None, &Certificate::LowerLeftBound(rat(3))).unwrap();
    assert_eq!((r.t0_upper.clone(), r.certified, r.area), (rat(1), true, rat(1)));
    // without |c| = 1 the remaining list only bounds t₀ by 2, beyond no certificate
    let rest: Vec<_> = list.into_iter().filter(|g| g.entries()[2].abs() > rat(1)).collect();
    let r = cusp_area(&rest, None, &Certificate::LowerLeftBound(rat(1))).unwrap();
    assert_eq!((r.t0_upper, r.certified), (rat(2), false));
}

#[test]
fn commutator_trace_on_pythagorean_inputs() {
    let mut n = 0;
    for u in 1..=10i64 {
        for v in 1..=10i64 {
            let (c, s) = pythagorean(&q(u, v));
            let t = q(v, u + 1);
            let cert = commutator_certificate(&t, &c, &s).unwrap();
            assert_eq!(cert.trace, rat(2) + rat(4) * &t * &t * &s * &s);
            assert!(cert.trace <= rat(2) * &cert.cosh_d);
            assert!(cert.hyperbolic);
            n += 1;
        }
    }
    assert_eq!(n, 100);
}

proptest! {
    #[test]
    fn right_action(z in point(), g1 in moebius(), g2 in moebius()) {
        prop_assert_eq!(act(&act(&z, &g1), &g2), act(&z, &(&g1 * &g2)));
    }

    #[test]
    fn tangency_is_h1_invariant(g in moebius(), j in -3i64..=3, k in -3i64..=3) {
        let h = |n: i64| Moebius::h(&rat(n));
        let g2 = &(&h(j) * &g) * &h(k);
        prop_assert_eq!(horoball_tangency(&g), horoball_tangency(&g2));
    }

    #[test]
    fn distance_is_invariant(z1 in point(), z2 in point(), g in moebius()) {
        prop_assert_eq!(
            hyperbolic_distance_cosh(&z1, &z2),
            hyperbolic_distance_cosh(&act(&z1, &g), &act(&z2, &g))
        );
    }

    #[test]
    fn cusp_area_conjugation_invariance(x in moebius(), s in small_rational()) {
        let list = sl2z_double_cosets(3);
        let expected = cusp_area(&list, None, &Certificate::LowerLeftBound(rat(3))).unwrap();
        // xΓx⁻¹ with P ↦ xPx⁻¹, renormalized by g = h_s x⁻¹
        let moved: Vec<_> = list.iter().map(|g| g.conjugate_by(&x)).collect();
        let norm = &Moebius::h(&s) * &x.inverse();
        let got = cusp_area(&moved, Some(&norm), &Certificate::LowerLeftBound(rat(3))).unwrap();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn witness_is_parabolic(n in 1i64..=6, d in 1i64..=4, s in small_rational()) {
        let g = cusp_witness(&q(n, d), &s).unwrap();
        prop_assert_eq!(g.trace(), rat(2));
    }

    #[test]
    fn cone_radius_shrinks_with_more_samples(z in point(), a in prop::collection::vec(moebius(), 1..4), b in prop::collection::vec(moebius(), 1..4)) {
        let sa: Vec<_> = a.iter().map(|g| act(&z, g)).collect();
        let mut sab = sa.clone();
        sab.extend(b.iter().map(|g| act(&z, g)));
        if let (Ok(r1), Ok(r2)) = (cone_radius(&z, &sa), cone_radius(&z, &sab)) {
            prop_assert!(r2 <= r1);
        }
    }
}
