//! Straight-line flow on square-tiled surfaces, exact over a number field.
//!
//! Points live in unit-square charts. A [`Leaves`] value fixes two transverse
//! directions u ("right") and s ("up") with u × s > 0, and a set of marked
//! vertices at which leaves stop.

use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::exactnum::{rat, NFElement, NumberField, Rational};
use crate::origami::Origami;
use crate::perm::Perm;

const MAX_CROSSINGS: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SurfacePoint {
    pub square: usize,
    pub x: NFElement,
    pub y: NFElement,
}

impl SurfacePoint {
    pub fn new(square: usize, x: NFElement, y: NFElement) -> Self {
        SurfacePoint { square, x, y }
    }
}

/// Leaf directions in counterclockwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeafDir {
    Right,
    Up,
    Left,
    Down,
}

impl LeafDir {
    pub const ALL: [LeafDir; 4] = [LeafDir::Right, LeafDir::Up, LeafDir::Left, LeafDir::Down];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn reverse(self) -> LeafDir {
        LeafDir::ALL[(self.index() + 2) % 4]
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, LeafDir::Right | LeafDir::Left)
    }
}

/// A segment starting at `start` and running `length` along `dir`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: SurfacePoint,
    pub dir: LeafDir,
    pub length: NFElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafHit {
    pub point: SurfacePoint,
    pub length: NFElement,
    /// Index of the stop segment that was hit, and the distance along it.
    pub stop: usize,
    pub offset: NFElement,
    /// Squares crossed, in order, starting with the start square.
    pub itinerary: Vec<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("leaf reached vertex {vertex} after length {length}")]
    HitSingularity { vertex: usize, length: NFElement },
    #[error("no stop reached within {0} square crossings")]
    Runaway(usize),
}

/// A germ of a leaf issuing from a vertex: it leaves in direction `dir`
/// through the interior of `square`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Germ {
    pub dir: LeafDir,
    pub square: usize,
}

/// Part of a stop segment inside one square.
#[derive(Clone, Debug)]
pub(crate) struct Piece {
    pub x: NFElement,
    pub y: NFElement,
    pub dir: LeafDir,
    /// Distance along the parent segment at the piece start.
    pub offset: NFElement,
    pub len: NFElement,
    pub seg: usize,
}

/// Stop segments bucketed by square.
#[derive(Clone, Debug)]
pub(crate) struct Stops(Vec<Vec<Piece>>);

impl Stops {
    pub fn none(n: usize) -> Self {
        Stops(vec![Vec::new(); n])
    }
}

pub(crate) enum WalkEnd {
    Stop { point: SurfacePoint, length: NFElement, seg: usize, offset: NFElement },
    Limit { point: SurfacePoint },
}

type Vec2 = (NFElement, NFElement);

fn cross(a: &Vec2, b: &Vec2) -> NFElement {
    &a.0 * &b.1 - &a.1 * &b.0
}

#[derive(Clone, Debug)]
pub struct Leaves {
    field: Arc<NumberField>,
    sigma_h: Perm,
    sigma_v: Perm,
    h_inv: Perm,
    v_inv: Perm,
    dirs: [Vec2; 4],
    vertex_of: Vec<usize>,
    angle: Vec<usize>,
    marked: Vec<bool>,
    /// Square entered by each quadrant sector at each turn around a vertex.
    sectors: Vec<Vec<[usize; 4]>>,
}

impl Leaves {
    /// `u` and `s` must satisfy u × s > 0. With `mark_all`, every vertex of
    /// the square tiling stops leaves; otherwise only cone points do.
    pub fn new(field: &Arc<NumberField>, sigma_h: &Perm, sigma_v: &Perm, u: Vec2, s: Vec2, mark_all: bool) -> Self {
        assert!(cross(&u, &s).sign() > 0, "frame must be positively oriented");
        let h_inv = sigma_h.inverse();
        let v_inv = sigma_v.inverse();
        let kappa = h_inv.then(&v_inv).then(sigma_h).then(sigma_v);
        let cycles = kappa.cycles();
        let mut vertex_of = vec![0; sigma_h.len()];
        for (v, c) in cycles.iter().enumerate() {
            for &k in c {
                vertex_of[k] = v;
            }
        }
        let angle: Vec<usize> = cycles.iter().map(Vec::len).collect();
        let marked = angle.iter().map(|&c| mark_all || c > 1).collect();
        let sectors = cycles
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&a| {
                        let q1 = h_inv.apply(a);
                        let q2 = v_inv.apply(q1);
                        let q3 = sigma_h.apply(q2);
                        [a, q1, q2, q3]
                    })
                    .collect()
            })
            .collect();
        let neg = |v: &Vec2| (-&v.0, -&v.1);
        let dirs = [u.clone(), s.clone(), neg(&u), neg(&s)];
        Leaves {
            field: field.clone(),
            sigma_h: sigma_h.clone(),
            sigma_v: sigma_v.clone(),
            h_inv,
            v_inv,
            dirs,
            vertex_of,
            angle,
            marked,
            sectors,
        }
    }

    /// Horizontal and vertical leaves of an origami over ℚ, stopping only at
    /// cone points.
    pub fn axis(o: &Origami) -> Self {
        let k = NumberField::rationals();
        let one = NFElement::one(&k);
        let zero = NFElement::zero(&k);
        Self::new(&k, o.sigma_h(), o.sigma_v(), (one.clone(), zero.clone()), (zero, one), false)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }
    pub fn n(&self) -> usize {
        self.sigma_h.len()
    }
    pub fn vector(&self, d: LeafDir) -> &Vec2 {
        &self.dirs[d.index()]
    }
    pub fn vertex_count(&self) -> usize {
        self.angle.len()
    }
    /// Cone angle of a vertex divided by 2π.
    pub fn angle(&self, v: usize) -> usize {
        self.angle[v]
    }
    pub fn is_marked(&self, v: usize) -> bool {
        self.marked[v]
    }

    fn elt(&self, q: Rational) -> NFElement {
        NFElement::from_rational(&self.field, q)
    }

    pub(crate) fn zero(&self) -> NFElement {
        NFElement::zero(&self.field)
    }

    /// Vertex at corner (cx, cy) ∈ {0, 1}² of a square.
    pub fn corner_vertex(&self, square: usize, cx: bool, cy: bool) -> usize {
        let mut k = square;
        if cx {
            k = self.sigma_h.apply(k);
        }
        if cy {
            k = self.sigma_v.apply(k);
        }
        self.vertex_of[k]
    }

    /// The vertex a point sits on, if it is a corner of its square.
    pub fn vertex_at(&self, p: &SurfacePoint) -> Option<usize> {
        let edge = |t: &NFElement| t.is_zero() || t.as_rational().is_some_and(|q| q.is_one());
        (edge(&p.x) && edge(&p.y)).then(|| self.corner_vertex(p.square, !p.x.is_zero(), !p.y.is_zero()))
    }

    /// Moves points on the right or top edge to the neighbouring chart.
    pub fn normalize(&self, p: &SurfacePoint) -> SurfacePoint {
        let one = |t: &NFElement| t.as_rational().is_some_and(|q| q.is_one());
        let mut q = p.clone();
        if one(&q.x) {
            q.square = self.sigma_h.apply(q.square);
            q.x = self.zero();
        }
        if one(&q.y) {
            q.square = self.sigma_v.apply(q.square);
            q.y = self.zero();
        }
        q
    }

    /// Whether two points coincide on the surface.
    pub fn same_point(&self, a: &SurfacePoint, b: &SurfacePoint) -> bool {
        match (self.vertex_at(a), self.vertex_at(b)) {
            (Some(v), Some(w)) => v == w,
            (None, None) => self.normalize(a) == self.normalize(b),
            _ => false,
        }
    }

    fn quadrant(v: &Vec2) -> usize {
        match (v.0.sign() >= 0, v.1.sign() >= 0) {
            (true, true) => 0,
            (false, true) => 1,
            (false, false) => 2,
            (true, false) => 3,
        }
    }

    /// Corner a direction leaves from, by quadrant: LL, LR, UR, UL.
    fn corner_of(q: usize) -> (bool, bool) {
        [(false, false), (true, false), (true, true), (false, true)][q]
    }

    /// Start point of a germ: the corner of its square it leaves from.
    pub fn germ_start(&self, g: Germ) -> SurfacePoint {
        let (cx, cy) = Self::corner_of(Self::quadrant(self.vector(g.dir)));
        let c = |b: bool| if b { self.elt(rat(1)) } else { self.zero() };
        SurfacePoint::new(g.square, c(cx), c(cy))
    }

    pub fn germ_vertex(&self, g: Germ) -> usize {
        let (cx, cy) = Self::corner_of(Self::quadrant(self.vector(g.dir)));
        self.corner_vertex(g.square, cx, cy)
    }

    /// All germs in direction `dir`, one per square.
    pub fn germs(&self, dir: LeafDir) -> Vec<Germ> {
        (0..self.n()).map(|square| Germ { dir, square }).collect()
    }

    /// The germ along which a walk in direction `travel` arrived at the
    /// corner `p`, given in the chart the walk ended in.
    pub fn arrival_germ(&self, p: &SurfacePoint, travel: LeafDir) -> Option<Germ> {
        let g = Germ {
            dir: travel.reverse(),
            square: p.square,
        };
        (self.vertex_at(p).is_some() && self.germ_start(g) == *p).then_some(g)
    }

    /// Position of a germ in the counterclockwise order around its vertex.
    pub fn germ_key(&self, g: Germ) -> usize {
        let v = self.germ_vertex(g);
        let d = self.vector(g.dir);
        let q = Self::quadrant(d);
        let turn = self.sectors[v]
            .iter()
            .position(|s| s[q] == g.square)
            .expect("germ square belongs to its vertex");
        let rank = LeafDir::ALL
            .iter()
            .filter(|&&e| {
                let w = self.vector(e);
                Self::quadrant(w) == q && cross(w, d).sign() > 0
            })
            .count();
        (turn * 4 + q) * 4 + rank
    }

    pub(crate) fn stops(&self, segs: &[Segment]) -> Result<Stops, TraceError> {
        let mut out = Stops::none(self.n());
        for (i, s) in segs.iter().enumerate() {
            let v = self.vector(s.dir).clone();
            let mut rec = Vec::new();
            self.walk(&s.start, &v, Some(&s.length), &out, false, Some(&mut rec))?;
            let mut off = self.zero();
            for (sq, x, y, len) in rec {
                let piece = Piece {
                    x,
                    y,
                    dir: s.dir,
                    offset: off.clone(),
                    len: len.clone(),
                    seg: i,
                };
                off = off + &len;
                // axis-parallel pieces on a chart edge belong to both charts
                let one = self.elt(rat(1));
                if v.1.is_zero() && (piece.y.is_zero() || piece.y == one) {
                    let (nb, ny) = if piece.y.is_zero() {
                        (self.v_inv.apply(sq), one.clone())
                    } else {
                        (self.sigma_v.apply(sq), self.zero())
                    };
                    out.0[nb].push(Piece { y: ny, ..piece.clone() });
                }
                if v.0.is_zero() && (piece.x.is_zero() || piece.x == one) {
                    let (nb, nx) = if piece.x.is_zero() {
                        (self.h_inv.apply(sq), one.clone())
                    } else {
                        (self.sigma_h.apply(sq), self.zero())
                    };
                    out.0[nb].push(Piece { x: nx, ..piece.clone() });
                }
                out.0[sq].push(piece);
            }
        }
        Ok(out)
    }

    /// Flows from `start` along `v`. Stops at the first stop piece (never at
    /// the start itself when `skip_start`), after `limit` units of v, or at a
    /// marked vertex. Records (square, entry x, entry y, length) per chart.
    #[allow(clippy::type_complexity)]
    pub(crate) fn walk(
        &self,
        start: &SurfacePoint,
        v: &Vec2,
        limit: Option<&NFElement>,
        stops: &Stops,
        skip_start: bool,
        mut record: Option<&mut Vec<(usize, NFElement, NFElement, NFElement)>>,
    ) -> Result<WalkEnd, TraceError> {
        let one = self.elt(rat(1));
        let inv_x = (!v.0.is_zero()).then(|| v.0.inverse().expect("non-zero"));
        let inv_y = (!v.1.is_zero()).then(|| v.1.inverse().expect("non-zero"));
        let mut cross_inv: [Option<NFElement>; 4] = Default::default();
        for d in LeafDir::ALL {
            let c = cross(v, self.vector(d));
            if !c.is_zero() {
                cross_inv[d.index()] = Some(c.inverse().expect("non-zero"));
            }
        }
        let (mut sq, mut x, mut y) = (start.square, start.x.clone(), start.y.clone());
        let mut travelled = self.zero();
        for _ in 0..MAX_CROSSINGS {
            let tx = inv_x.as_ref().map(|i| if v.0.sign() > 0 { (&one - &x) * i } else { -(&x * i) });
            let ty = inv_y.as_ref().map(|i| if v.1.sign() > 0 { (&one - &y) * i } else { -(&y * i) });
            let te = match (&tx, &ty) {
                (Some(a), Some(b)) => a.clone().min(b.clone()),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!("zero direction"),
            };
            let rem = limit.map(|l| l - &travelled);
            let ends = rem.as_ref().is_some_and(|r| r <= &te);
            let span = if ends { rem.clone().unwrap() } else { te.clone() };

            let mut best: Option<(NFElement, &Piece, NFElement)> = None;
            for p in &stops.0[sq] {
                let Some(ci) = &cross_inv[p.dir.index()] else { continue };
                let e = self.vector(p.dir);
                let w = (&p.x - &x, &p.y - &y);
                let tau = cross(&w, e) * ci;
                if tau.sign() < 0 || tau > span || (skip_start && tau.is_zero() && travelled.is_zero()) {
                    continue;
                }
                let rho = cross(&w, v) * ci;
                if rho.sign() < 0 || rho > p.len {
                    continue;
                }
                if best.as_ref().is_none_or(|b| tau < b.0) {
                    best = Some((tau, p, rho));
                }
            }
            if let Some((tau, p, rho)) = best {
                if let Some(r) = record.as_mut() {
                    r.push((sq, x.clone(), y.clone(), tau.clone()));
                }
                let point = self.normalize(&SurfacePoint::new(sq, &x + &(&tau * &v.0), &y + &(&tau * &v.1)));
                return Ok(WalkEnd::Stop {
                    point,
                    length: travelled + tau,
                    seg: p.seg,
                    offset: &p.offset + &rho,
                });
            }
            if let Some(r) = record.as_mut() {
                r.push((sq, x.clone(), y.clone(), span.clone()));
            }
            if ends {
                let point = SurfacePoint::new(sq, &x + &(&span * &v.0), &y + &(&span * &v.1));
                return Ok(WalkEnd::Limit { point });
            }
            travelled = travelled + &te;
            let mut nx = &x + &(&te * &v.0);
            let mut ny = &y + &(&te * &v.1);
            let hit_x = tx.as_ref().is_some_and(|t| *t == te);
            let hit_y = ty.as_ref().is_some_and(|t| *t == te);
            if hit_x {
                nx = if v.0.sign() > 0 { one.clone() } else { self.zero() };
            }
            if hit_y {
                ny = if v.1.sign() > 0 { one.clone() } else { self.zero() };
            }
            let on_edge = |t: &NFElement| t.is_zero() || *t == one;
            if !travelled.is_zero() && on_edge(&nx) && on_edge(&ny) {
                let vtx = self.corner_vertex(sq, nx == one, ny == one);
                if self.marked[vtx] || self.angle[vtx] > 1 {
                    return Err(TraceError::HitSingularity {
                        vertex: vtx,
                        length: travelled,
                    });
                }
            }
            if hit_x {
                if v.0.sign() > 0 {
                    sq = self.sigma_h.apply(sq);
                    nx = self.zero();
                } else {
                    sq = self.h_inv.apply(sq);
                    nx = one.clone();
                }
            }
            if hit_y {
                if v.1.sign() > 0 {
                    sq = self.sigma_v.apply(sq);
                    ny = self.zero();
                } else {
                    sq = self.v_inv.apply(sq);
                    ny = one.clone();
                }
            }
            x = nx;
            y = ny;
        }
        Err(TraceError::Runaway(MAX_CROSSINGS))
    }

    /// The point reached from `p` after the displacement `w`.
    pub(crate) fn translate(&self, p: &SurfacePoint, w: &Vec2) -> Result<SurfacePoint, TraceError> {
        if w.0.is_zero() && w.1.is_zero() {
            return Ok(p.clone());
        }
        let one = NFElement::one(&self.field);
        match self.walk(p, w, Some(&one), &Stops::none(self.n()), false, None)? {
            WalkEnd::Limit { point } => Ok(point),
            WalkEnd::Stop { .. } => unreachable!("no stops"),
        }
    }

    /// The point at distance `t` from `p` along a leaf.
    pub fn advance(&self, p: &SurfacePoint, dir: LeafDir, t: &NFElement) -> Result<SurfacePoint, TraceError> {
        if t.is_zero() {
            return Ok(p.clone());
        }
        match self.walk(p, self.vector(dir), Some(t), &Stops::none(self.n()), false, None)? {
            WalkEnd::Limit { point } => Ok(point),
            WalkEnd::Stop { .. } => unreachable!("no stops"),
        }
    }

    pub(crate) fn first_hit(
        &self,
        start: &SurfacePoint,
        dir: LeafDir,
        stops: &Stops,
        skip_start: bool,
    ) -> Result<(SurfacePoint, NFElement, usize, NFElement), TraceError> {
        match self.walk(start, self.vector(dir), None, stops, skip_start, None)? {
            WalkEnd::Stop { point, length, seg, offset } => Ok((point, length, seg, offset)),
            WalkEnd::Limit { .. } => unreachable!("no limit"),
        }
    }
}

/// Follows the leaf through `start` in direction `dir` to its first
/// intersection with one of `stops` (excluding the start point itself).
pub fn trace_leaf(leaves: &Leaves, start: &SurfacePoint, dir: LeafDir, stops: &[Segment]) -> Result<LeafHit, TraceError> {
    let pieces = leaves.stops(stops)?;
    let mut rec = Vec::new();
    let end = leaves.walk(start, leaves.vector(dir), None, &pieces, true, Some(&mut rec))?;
    let WalkEnd::Stop { point, length, seg, offset } = end else { unreachable!("no limit") };
    let mut itinerary: Vec<usize> = rec.into_iter().map(|r| r.0).collect();
    itinerary.dedup();
    Ok(LeafHit {
        point,
        length,
        stop: seg,
        offset,
        itinerary,
    })
}

/// An affine automorphism of a square-tiled surface, stored as the images of
/// the square centres together with the derivative.
#[derive(Clone, Debug)]
pub(crate) struct AffineMap {
    pub deriv: [[NFElement; 2]; 2],
    pub images: Vec<SurfacePoint>,
}

impl AffineMap {
    fn act(&self, w: &Vec2) -> Vec2 {
        let [[a, b], [c, d]] = &self.deriv;
        (a * &w.0 + b * &w.1, c * &w.0 + d * &w.1)
    }

    pub fn apply(&self, leaves: &Leaves, p: &SurfacePoint) -> Result<SurfacePoint, TraceError> {
        let half = NFElement::from_rational(leaves.field(), Rational::new(1.into(), 2.into()));
        let w = self.act(&(&p.x - &half, &p.y - &half));
        leaves.translate(&self.images[p.square], &w)
    }

    /// Every affine map with integer derivative `m` that sends vertices to
    /// vertices.
    pub fn all_with_derivative(leaves: &Leaves, m: [[i64; 2]; 2]) -> Vec<AffineMap> {
        let k = leaves.field();
        let deriv = m.map(|r| r.map(|e| NFElement::from_int(k, e)));
        let frac = |t: i64| {
            let q = Rational::new(t.into(), 2.into());
            NFElement::from_rational(k, &q - q.floor())
        };
        let [[a, b], [c, d]] = m;
        let (rx, ry) = (frac(a + b), frac(c + d));
        let n = leaves.n();
        let cols = [
            (deriv[0][0].clone(), deriv[1][0].clone()),
            (deriv[0][1].clone(), deriv[1][1].clone()),
        ];
        (0..n)
            .filter_map(|j| {
                let mut images: Vec<Option<SurfacePoint>> = vec![None; n];
                images[0] = Some(SurfacePoint::new(j, rx.clone(), ry.clone()));
                let mut queue = vec![0];
                while let Some(sq) = queue.pop() {
                    let here = images[sq].clone().unwrap();
                    for (nb, col) in [(leaves.sigma_h.apply(sq), &cols[0]), (leaves.sigma_v.apply(sq), &cols[1])] {
                        let there = leaves.translate(&here, col).ok()?;
                        match &images[nb] {
                            Some(p) if !leaves.same_point(p, &there) => return None,
                            Some(_) => {}
                            None => {
                                images[nb] = Some(leaves.normalize(&there));
                                queue.push(nb);
                            }
                        }
                    }
                }
                Some(AffineMap {
                    deriv: deriv.clone(),
                    images: images.into_iter().map(Option::unwrap).collect(),
                })
            })
            .collect()
    }
}
