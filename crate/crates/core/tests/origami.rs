use flatcensus::exactnum::NFElement;
use flatcensus::origami::*;
use flatcensus::perm::{all_perms, transitive, Perm};
use flatcensus::surface::RectSurface;
use proptest::prelude::*;

fn o(h: &[&[usize]], v: &[&[usize]], n: usize) -> Origami {
    Origami::new(Perm::from_cycles(n, h).unwrap(), Perm::from_cycles(n, v).unwrap()).unwrap()
}

/// Follows the straight segment from c_k + p by the integer vector v and
/// returns the square it ends in.
fn flow(x: &Origami, k: usize, p: (f64, f64), v: (i64, i64)) -> usize {
    let (mut sq, mut px, mut py) = (k, p.0, p.1);
    let (vx, vy) = (v.0 as f64, v.1 as f64);
    let mut s = 0.0;
    loop {
        let tx = if vx > 0.0 { (1.0 - px) / vx } else if vx < 0.0 { px / -vx } else { f64::INFINITY };
        let ty = if vy > 0.0 { (1.0 - py) / vy } else if vy < 0.0 { py / -vy } else { f64::INFINITY };
        let dt = tx.min(ty);
        if s + dt >= 1.0 {
            return sq;
        }
        s += dt;
        px += dt * vx;
        py += dt * vy;
        if tx < ty {
            if vx > 0.0 {
                sq = x.sigma_h().apply(sq);
                px = 0.0;
            } else {
                sq = x.sigma_h().inverse().apply(sq);
                px = 1.0;
            }
        } else if vy > 0.0 {
            sq = x.sigma_v().apply(sq);
            py = 0.0;
        } else {
            sq = x.sigma_v().inverse().apply(sq);
            py = 1.0;
        }
    }
}

/// g·O computed geometrically: the new right and top neighbours of square
/// k are found by flowing along g⁻¹(1, 0) and g⁻¹(0, 1) in O.
fn act_by_flow(x: &Origami, g: &Sl2z) -> Origami {
    let gi = g.inverse();
    // a generic point just inside the corner, in direction (2, 1)
    let p = (0.021_37, 0.010_49);
    let n = x.n();
    let h = (0..n).map(|k| flow(x, k, p, gi.apply((1, 0)))).collect();
    let v = (0..n).map(|k| flow(x, k, p, gi.apply((0, 1)))).collect();
    Origami::new(Perm::from_images(h).unwrap(), Perm::from_images(v).unwrap()).unwrap()
}

fn conjugate_brute(x: &Origami, y: &Origami) -> bool {
    x.n() == y.n()
        && all_perms(x.n()).into_iter().any(|t| {
            let t = Perm::from_images(t).unwrap();
            x.sigma_h().conjugate_by(&t) == *y.sigma_h() && x.sigma_v().conjugate_by(&t) == *y.sigma_v()
        })
}

fn brute_orbit_size(x: &Origami) -> usize {
    let mut orbit = vec![x.clone()];
    let mut k = 0;
    while k < orbit.len() {
        for g in [Sl2z::S, Sl2z::T, Sl2z::T.inverse()] {
            let y = act_by_flow(&orbit[k], &g);
            if !orbit.iter().any(|z| conjugate_brute(z, &y)) {
                orbit.push(y);
            }
        }
        k += 1;
    }
    orbit.len()
}

fn all_origamis(n: usize) -> Vec<Origami> {
    let perms: Vec<Perm> = all_perms(n).into_iter().map(|p| Perm::from_images(p).unwrap()).collect();
    let mut out = Vec::new();
    for h in &perms {
        for v in &perms {
            if transitive(&[h, v]) {
                out.push(Origami::new(h.clone(), v.clone()).unwrap());
            }
        }
    }
    out
}

#[test]
fn generator_formulas_match_flow() {
    for n in 1..=4 {
        for x in all_origamis(n) {
            for g in Generator::ALL {
                assert_eq!(x.act_raw(g), act_by_flow(&x, &g.matrix()), "{x:?} {g:?}");
            }
        }
    }
}

#[test]
fn s_matches_surface_rotation() {
    for x in all_origamis(3) {
        let s = RectSurface::from_origami(x.sigma_h(), x.sigma_v()).unwrap();
        let k = s.field();
        let (one, zero, minus) = (NFElement::one(k), NFElement::zero(k), NFElement::from_int(k, -1));
        let rotated = s.apply_matrix([[&zero, &minus], [&one, &zero]]).unwrap();
        let y = x.act_raw(Generator::S);
        assert!(rotated.is_isomorphic(&RectSurface::from_origami(y.sigma_h(), y.sigma_v()).unwrap()));
    }
}

#[test]
fn orbit_sizes_match_brute_force() {
    assert_eq!(veech_orbit(&Origami::torus()).len(), 1);
    assert_eq!(veech_orbit(&o(&[&[0, 1]], &[], 2)).len(), 3);
    let l = o(&[&[0, 1, 2]], &[&[0, 1]], 3);
    assert_eq!(veech_orbit(&l).len(), brute_orbit_size(&l));
    for n in 2..=4 {
        for x in all_origamis(n).into_iter().step_by(7) {
            assert_eq!(veech_orbit(&x).len(), brute_orbit_size(&x), "{x:?}");
        }
    }
}

#[test]
fn orbit_is_independent_of_start() {
    let l = Origami::l_shaped();
    let mut a = veech_orbit(&l).orbit;
    a.sort();
    for y in a.clone() {
        let mut b = veech_orbit(&y).orbit;
        b.sort();
        assert_eq!(a, b);
    }
}

#[test]
fn witnesses_verify() {
    for x in [Origami::torus(), Origami::l_shaped(), o(&[&[0, 1, 2]], &[&[0, 1]], 3), o(&[&[0, 1]], &[&[1, 2]], 3)] {
        let orb = veech_orbit(&x);
        for w in &orb.witnesses {
            assert!(w.aut.verify(&x));
            assert_eq!(w.aut.deriv, orb.words[w.to].inverse() * w.generator.matrix() * orb.words[w.from]);
        }
        let h = orb.hyperbolic_element().expect("lattice surfaces have hyperbolic elements");
        assert!(affine_automorphism(&x, &h).unwrap().verify(&x));
    }
    let torus = veech_orbit(&Origami::torus());
    let derivs: Vec<Sl2z> = torus.witnesses.iter().map(|w| w.aut.deriv).collect();
    assert!(derivs.contains(&Sl2z::S) && derivs.contains(&Sl2z::T));
}

#[test]
fn l_origami_veech_group() {
    let l = Origami::l_shaped();
    assert_eq!(veech_orbit(&l).len(), 3);
    assert!(affine_automorphism(&l, &Sl2z::T).is_err());
    let t2 = Sl2z::T * Sl2z::T;
    assert!(affine_automorphism(&l, &t2).is_ok());
    assert!(affine_automorphism(&l, &Sl2z::S).is_ok());
}

fn sl2z() -> impl Strategy<Value = Sl2z> {
    prop::collection::vec(0usize..3, 0..8)
        .prop_map(|w| w.into_iter().fold(Sl2z::IDENTITY, |acc, i| Generator::ALL[i].matrix() * acc))
}

proptest! {
    #[test]
    fn matrix_action_matches_flow(g in sl2z(), i in 0usize..20) {
        let xs = all_origamis(3);
        let x = &xs[i % xs.len()];
        prop_assert!(conjugate_brute(&x.act_matrix_raw(&g), &act_by_flow(x, &g)));
    }

    #[test]
    fn relations_hold(i in 0usize..50) {
        let xs = all_origamis(4);
        let x = &xs[i % xs.len()];
        let s = |y: &Origami| sl2z_move(Generator::S, y);
        let t = |y: &Origami| sl2z_move(Generator::T, y);
        // (ST)³ = S² and S⁴ = 1, T T⁻¹ = 1
        prop_assert_eq!(t(&s(&t(&s(&t(&s(x)))))), s(&s(x)));
        prop_assert_eq!(s(&s(&s(&s(x)))), x.canonical());
        prop_assert_eq!(sl2z_move(Generator::TInv, &t(x)), x.canonical());
    }
}
