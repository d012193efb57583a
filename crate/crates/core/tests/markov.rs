use std::time::{Duration, Instant};

use flatcensus::exactnum::{rat, IntPoly, NFElement, Rational};
use flatcensus::markov::{
    build_markov, intersection_matrix, markov_bounds, reconstruct_from_markov, refine_partition, to_eigenbasis, trace_leaf,
    verify_markov, Axis, Edge, EdgeKind, EigenSurface, GraphVertex, Incidence, LeafDir, Leaves, MarkovError, MarkovPartition,
    Segment, SegmentGluingGraph, SurfacePoint,
};
use flatcensus::origami::{affine_automorphism, veech_orbit, Origami, Sl2z};
use flatcensus::pfcore::{perron_root, NonNegIntMatrix};
use flatcensus::surface::RectSurface;
use proptest::prelude::*;

fn eigen(o: &Origami, h: Sl2z) -> Result<EigenSurface, MarkovError> {
    let s = RectSurface::from_origami(o.sigma_h(), o.sigma_v()).unwrap();
    let a = affine_automorphism(o, &h).unwrap();
    to_eigenbasis(&s, &a)
}

fn cat() -> EigenSurface {
    eigen(&Origami::torus(), Sl2z::new(2, 1, 1, 1).unwrap()).unwrap()
}

fn in_bounds(p: &MarkovPartition, e: &EigenSurface) -> bool {
    let (lo, hi) = markov_bounds(&e.prongs());
    let n = Rational::from_integer((p.len() as i64).into());
    lo <= n && n <= hi
}

fn mat_times(m: &NonNegIntMatrix, v: &[NFElement]) -> Vec<NFElement> {
    (0..m.dim())
        .map(|i| {
            (0..m.dim()).fold(NFElement::zero(v[0].field()), |s, j| s + v[j].scale(&rat(m.get(i, j) as i64)))
        })
        .collect()
}

fn is_eigen(m: &NonNegIntMatrix, v: &[NFElement], lambda: &NFElement) -> bool {
    mat_times(m, v) == v.iter().map(|x| x * lambda).collect::<Vec<_>>()
}

fn max_of(v: &[NFElement]) -> NFElement {
    v.iter().cloned().reduce(NFElement::max).unwrap()
}

#[test]
fn cat_map_eigenbasis() {
    let e = cat();
    assert_eq!(e.power(), 1);
    assert_eq!(e.lambda_minpoly(), &IntPoly::from_i64(&[1, -3, 1]));
    assert!((e.lambda().to_f64() - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    let conj = eigen(&Origami::torus(), Sl2z::new(1, 1, 1, 2).unwrap()).unwrap();
    assert_eq!(conj.lambda_minpoly(), e.lambda_minpoly());
}

#[test]
fn parabolic_is_rejected() {
    let err = eigen(&Origami::torus(), Sl2z::new(1, 1, 0, 1).unwrap()).unwrap_err();
    assert!(matches!(err, MarkovError::NotHyperbolic(_)));
}

#[test]
fn cat_map_partition() {
    let start = Instant::now();
    let e = cat();
    let p = build_markov(&e).unwrap();
    assert_eq!(p.len(), 2);
    assert!(in_bounds(&p, &e));
    assert_eq!(p.area(), NFElement::one(e.field()));
    assert!(verify_markov(&p, &e));

    let a = intersection_matrix(&p, &e).unwrap();
    assert_eq!(a.char_poly(), IntPoly::from_i64(&[1, -3, 1]));
    assert!(is_eigen(&a, &p.widths(), e.lambda()));
    assert!(is_eigen(&a.transpose(), &p.heights(), e.lambda()));

    for axis in [Axis::Xi, Axis::Eta] {
        let (q, b) = refine_partition(&p, &e, axis).unwrap();
        assert!(verify_markov(&q, &e));
        assert_eq!(perron_root(&b).unwrap(), perron_root(&a).unwrap());
        let lengths = if axis == Axis::Xi { q.widths() } else { q.heights() };
        let m = if axis == Axis::Xi { b.clone() } else { b.transpose() };
        assert!(is_eigen(&m, &lengths, e.lambda()), "{axis:?}");
        assert_eq!(q.area(), NFElement::one(e.field()));
    }
    assert!(start.elapsed() < Duration::from_secs(5));
}

#[test]
fn arbitrary_cut_breaks_markov_property() {
    let e = cat();
    let p = build_markov(&e).unwrap();
    let w = p.rects()[0].width.scale(&Rational::new(1.into(), 3.into()));
    let q = p.split_vertical(&e, 0, &w).unwrap();
    assert_eq!(q.len(), 3);
    assert!(!verify_markov(&q, &e));
}

#[test]
fn cat_map_reconstruction_round_trip() {
    let e = cat();
    let p = build_markov(&e).unwrap();
    let a = intersection_matrix(&p, &e).unwrap();
    let r = reconstruct_from_markov(&a, p.graph()).unwrap();
    let c = max_of(&p.widths());
    let widths: Vec<_> = p.widths().iter().map(|w| w.checked_div(&c).unwrap()).collect();
    let heights: Vec<_> = p.heights().iter().map(|h| h * &c).collect();
    assert_eq!(r.widths(), widths);
    assert_eq!(r.heights(), heights);
    assert_eq!(r.area(), NFElement::one(r.field()));
    for (x, y) in r.graph().edges.iter().zip(&p.graph().edges) {
        let l = y.length.clone().unwrap();
        let l = match x.kind {
            EdgeKind::Xi => l.checked_div(&c).unwrap(),
            EdgeKind::Eta => l * &c,
        };
        assert_eq!(x.length.as_ref(), Some(&l));
    }
    // the same combinatorics come out of the rebuilt metric
    assert!(is_eigen(&a, r.widths(), &NFElement::generator(r.field())));
}

#[test]
fn gluing_graph_json_round_trip() {
    let e = cat();
    let p = build_markov(&e).unwrap();
    let g = SegmentGluingGraph::from_json(&p.graph().to_json()).unwrap();
    assert_eq!(g.rect_count, p.graph().rect_count);
    assert_eq!(g.vertices, p.graph().vertices);
    for (x, y) in g.edges.iter().zip(&p.graph().edges) {
        assert_eq!((x.kind, x.tail, x.head, x.labels, &x.length), (y.kind, y.tail, y.head, y.labels, &y.length));
    }
}

#[test]
fn l_origami_partition() {
    let o = Origami::l_shaped();
    let h = veech_orbit(&o).hyperbolic_element().unwrap();
    let e = eigen(&o, h).unwrap();
    let p = build_markov(&e).unwrap();
    assert!(in_bounds(&p, &e), "p = {}", p.len());
    assert_eq!(p.area(), NFElement::one(e.field()));
    assert!(verify_markov(&p, &e));
    let a = intersection_matrix(&p, &e).unwrap();
    assert_eq!(perron_root(&a).unwrap(), *e.field().generator());
    let r = reconstruct_from_markov(&a, p.graph()).unwrap();
    assert_eq!(r.area(), NFElement::one(r.field()));
}

#[test]
fn torus_axis_leaves() {
    let k = flatcensus::exactnum::NumberField::rationals();
    let q = |a: i64, b: i64| NFElement::from_rational(&k, Rational::new(a.into(), b.into()));
    let lv = Leaves::axis(&Origami::torus());
    let start = SurfacePoint::new(0, q(0, 1), q(1, 2));
    let stop = Segment {
        start: start.clone(),
        dir: LeafDir::Right,
        length: q(1, 1),
    };
    let hit = trace_leaf(&lv, &start, LeafDir::Up, &[stop]).unwrap();
    assert_eq!(lv.normalize(&hit.point), lv.normalize(&start));
    assert_eq!(hit.length, q(1, 1));

    let origin = SurfacePoint::new(0, q(0, 1), q(0, 1));
    let floor = Segment {
        start: origin.clone(),
        dir: LeafDir::Right,
        length: q(1, 1),
    };
    let hit = trace_leaf(&lv, &origin, LeafDir::Up, &[floor]).unwrap();
    assert!(lv.same_point(&hit.point, &origin));
    assert_eq!(hit.length, q(1, 1));
}

/// First return of the upward separatrix to γ on the cat-map torus,
/// recomputed in floating point by unfolding to the plane.
#[test]
fn separatrix_hit_matches_float_shadow() {
    let e = cat();
    let p = build_markov(&e).unwrap();
    let lv = e.leaves();
    let gamma = p.gamma().clone();
    let hit = trace_leaf(lv, &gamma.start, LeafDir::Up, std::slice::from_ref(&gamma)).unwrap();
    let (u, s) = (lv.vector(LeafDir::Right), lv.vector(LeafDir::Up));
    let (u, s) = ((u.0.to_f64(), u.1.to_f64()), (s.0.to_f64(), s.1.to_f64()));
    let len = gamma.length.to_f64();
    let det = s.0 * (-u.1) - s.1 * (-u.0);
    let mut best = f64::INFINITY;
    let mut best_q = 0.0;
    for m1 in -20i32..=20 {
        for m2 in -20i32..=20 {
            let (m1, m2) = (f64::from(m1), f64::from(m2));
            let t = (m1 * (-u.1) - m2 * (-u.0)) / det;
            let q = (s.0 * m2 - s.1 * m1) / det;
            if t > 1e-12 && (-1e-12..=len + 1e-12).contains(&q) && t < best {
                best = t;
                best_q = q;
            }
        }
    }
    assert!((hit.length.to_f64() - best).abs() < 1e-9, "{} vs {best}", hit.length.to_f64());
    assert!((hit.offset.to_f64() - best_q).abs() < 1e-9);
}

#[test]
fn bounds_examples() {
    let q = |a: i64, b: i64| Rational::new(a.into(), b.into());
    assert_eq!(markov_bounds(&[2]), (q(1, 2), q(2, 1)));
    assert_eq!(markov_bounds(&[6]), (q(3, 2), q(4, 1)));
    assert_eq!(markov_bounds(&[2, 2]), (q(1, 1), q(3, 1)));
}

#[test]
fn single_rectangle_is_unit_torus() {
    let a = NonNegIntMatrix::from_rows(&[vec![1]]).unwrap();
    let r = reconstruct_from_markov(&a, &SegmentGluingGraph::single_rectangle()).unwrap();
    let s = r.to_rect_surface().unwrap();
    let one = NFElement::one(r.field());
    assert_eq!(s.widths(), [one.clone()]);
    assert_eq!(s.heights(), [one]);
    assert_eq!(s.stratum().prongs, vec![2]);
}

/// Two rectangles side by side, each glued top to bottom to itself.
fn side_by_side() -> SegmentGluingGraph {
    let edge = |kind, tail, head, labels| Edge::new(kind, tail, head, labels, None);
    let inc = |edge, outgoing| Incidence { edge, outgoing };
    SegmentGluingGraph {
        rect_count: 2,
        edges: vec![
            edge(EdgeKind::Xi, 0, 1, [0, 0]),
            edge(EdgeKind::Xi, 1, 0, [1, 1]),
            edge(EdgeKind::Eta, 0, 0, [1, 0]),
            edge(EdgeKind::Eta, 1, 1, [0, 1]),
        ],
        vertices: vec![
            GraphVertex {
                angle: 1,
                cyclic: vec![inc(0, true), inc(2, false), inc(1, false), inc(2, true)],
            },
            GraphVertex {
                angle: 1,
                cyclic: vec![inc(1, true), inc(3, false), inc(0, false), inc(3, true)],
            },
        ],
    }
}

#[test]
fn compatible_hand_graph_reconstructs() {
    let a = NonNegIntMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
    let r = reconstruct_from_markov(&a, &side_by_side()).unwrap();
    let half = NFElement::from_rational(r.field(), Rational::new(1.into(), 2.into()));
    assert_eq!(r.heights(), [half.clone(), half]);
    let s = r.to_rect_surface().unwrap();
    assert_eq!(s.area(), NFElement::one(r.field()));
}

#[test]
fn infeasible_graph_is_rejected() {
    // unequal Perron heights cannot share both vertical sides
    let a = NonNegIntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap();
    let err = reconstruct_from_markov(&a, &side_by_side()).unwrap_err();
    assert!(matches!(err, MarkovError::IncompatibleGraph(_)));
    let b = NonNegIntMatrix::from_rows(&[vec![1]]).unwrap();
    assert!(matches!(
        reconstruct_from_markov(&b, &side_by_side()),
        Err(MarkovError::IncompatibleGraph(_))
    ));
}

fn hyperbolic_word() -> impl Strategy<Value = Sl2z> {
    prop::collection::vec(prop::bool::ANY, 2..5)
        .prop_filter("both generators", |w| w.contains(&true) && w.contains(&false))
        .prop_map(|w| {
            w.into_iter().fold(Sl2z::IDENTITY, |m, b| {
                m * if b { Sl2z::new(1, 1, 0, 1).unwrap() } else { Sl2z::new(1, 0, 1, 1).unwrap() }
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]
    #[test]
    fn torus_partitions_are_markov(h in hyperbolic_word()) {
        let e = eigen(&Origami::torus(), h).unwrap();
        let p = build_markov(&e).unwrap();
        prop_assert!(in_bounds(&p, &e));
        prop_assert_eq!(p.area(), NFElement::one(e.field()));
        let a = intersection_matrix(&p, &e).unwrap();
        prop_assert!(is_eigen(&a, &p.widths(), e.lambda()));
        let r = reconstruct_from_markov(&a, p.graph()).unwrap();
        prop_assert_eq!(r.area(), NFElement::one(r.field()));
    }
}
