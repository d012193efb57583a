use flatcensus::enumerate::{enumerate_cusp_data, enumerate_gluings, GluingPattern};
use flatcensus::exactnum::{rat, Rational};
use flatcensus::perm::Perm;
use flatcensus::pfcore::{perron_root, NonNegIntMatrix};
use flatcensus::surface::{
    build_surface, build_surface_with, canonical_cusp, canonical_cusp_with, CuspSpectrum, intersection_data, parabolic_data, render_svg, CuspDatum, Direction, RectSurface,
    SvgOptions,
};

fn m(rows: &[&[u64]]) -> NonNegIntMatrix {
    NonNegIntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
}

fn all_cusp_data(max_m: usize, t: i64) -> Vec<CuspDatum> {
    let mut out = Vec::new();
    for mm in 1..=max_m {
        for p in enumerate_cusp_data(mm, &rat(t)) {
            for g in enumerate_gluings(&p.a).unwrap() {
                out.push(CuspDatum { a: p.a.clone(), d: p.d.clone(), pattern: g });
            }
        }
    }
    out
}

#[test]
fn build_examples() {
    let torus = CuspDatum {
        a: m(&[&[1]]),
        d: vec![1],
        pattern: enumerate_gluings(&m(&[&[1]])).unwrap().remove(0),
    };
    let b = build_surface(&torus).unwrap();
    assert_eq!(b.lambda.as_rational(), Some(&rat(1)));
    assert_eq!(b.horizontal.twists, vec![1]);
    assert_eq!(b.surface.stratum().genus, 1);

    let two = CuspDatum {
        a: m(&[&[2]]),
        d: vec![1],
        pattern: enumerate_gluings(&m(&[&[2]])).unwrap().remove(0),
    };
    let b = build_surface(&two).unwrap();
    assert_eq!(b.lambda.as_rational(), Some(&rat(2)));
    // stored side 1, scale 1/2: physical side 1/√2
    assert_eq!(b.surface.scale().as_rational(), Some(Rational::new(1.into(), 2.into())));
    assert_eq!(b.surface.stratum().prongs, vec![2, 2]);
    let h = b.surface.cylinder_decomposition(Direction::Horizontal);
    assert_eq!(h.len(), 1);
    assert_eq!(h[0].w.as_rational(), Some(rat(2)));
    assert_eq!(intersection_data(&b.surface).unwrap(), canonical_cusp(&two));

    let a = m(&[&[1, 1], &[1, 1]]);
    for g in enumerate_gluings(&a).unwrap() {
        let c = CuspDatum { a: a.clone(), d: vec![1, 1], pattern: g };
        let b = build_surface(&c).unwrap();
        assert_eq!(b.surface.ell(), 4);
        assert_eq!(b.lambda.as_rational(), Some(&rat(2)));
    }
}

#[test]
fn round_trip_and_parabolic_consistency() {
    let mut count = 0;
    for mm in 1..=2 {
        let pairs = enumerate_cusp_data(mm, &rat(4));
        let mut cached: Option<(NonNegIntMatrix, Vec<GluingPattern>)> = None;
        for p in pairs {
            if cached.as_ref().is_none_or(|(a, _)| *a != p.a) {
                cached = Some((p.a.clone(), enumerate_gluings(&p.a).unwrap()));
            }
            let spec = CuspSpectrum::new(&p.a, &p.d);
            assert_eq!(spec.lambda, perron_root(&p.da()).unwrap());
            for g in &cached.as_ref().unwrap().1 {
                let c = CuspDatum { a: p.a.clone(), d: p.d.clone(), pattern: g.clone() };
                count += 1;
                let b = build_surface_with(&c, &spec).unwrap();
                let s = &b.surface;
                assert_eq!(intersection_data(s).unwrap(), canonical_cusp_with(&c, &spec.vector), "{c:?}");
                assert_eq!(s.area().as_rational(), Some(rat(1)));
                // Gauss–Bonnet against V − E + F
                let st = s.stratum();
                assert_eq!(2 - 2 * st.genus as i64, s.euler_characteristic());
                for dir in [Direction::Horizontal, Direction::Vertical] {
                    let cyl = s.cylinder_decomposition(dir);
                    let pd = parabolic_data(&cyl).unwrap();
                    for (mu_i, n_i) in pd.moduli.iter().zip(&pd.twists) {
                        assert_eq!(mu_i.scale(&rat(*n_i as i64)), pd.mu);
                    }
                }
            }
        }
    }
    assert!(count > 100);
}

#[test]
fn svg_is_well_formed() {
    let l = RectSurface::from_origami(
        &Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
        &Perm::from_cycles(3, &[&[0, 1]]).unwrap(),
    )
    .unwrap();
    let svg = render_svg(&l, &SvgOptions::default());
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("rect")).count(), 3);
    assert_eq!(svg, render_svg(&l, &SvgOptions::default()));
    for c in all_cusp_data(2, 3) {
        let s = build_surface(&c).unwrap().surface;
        roxmltree::Document::parse(&render_svg(&s, &SvgOptions::default())).unwrap();
    }
}

#[test]
fn surface_json_round_trip() {
    for c in all_cusp_data(2, 4) {
        let s = build_surface(&c).unwrap().surface;
        let back = RectSurface::from_json(&s.to_json()).unwrap();
        assert!(back.is_isomorphic(&s) || back.field().generator() == s.field().generator());
        assert_eq!(intersection_data(&back).unwrap(), canonical_cusp(&c));
    }
    let c = CuspDatum::from_json(&all_cusp_data(2, 3)[0].to_json()).unwrap();
    assert_eq!(c, all_cusp_data(2, 3)[0]);
}

#[test]
fn proportional_twists_build_the_same_surface() {
    let g: GluingPattern = enumerate_gluings(&m(&[&[1]])).unwrap().remove(0);
    let a = CuspDatum { a: m(&[&[1]]), d: vec![1], pattern: g.clone() };
    let b = CuspDatum { a: m(&[&[1]]), d: vec![2], pattern: g };
    assert_eq!(canonical_cusp(&a), canonical_cusp(&b));
    assert!(build_surface(&a).unwrap().surface.is_isomorphic(&build_surface(&b).unwrap().surface));
}
