//! Markov partitions built from a singular horizontal segment γ: every
//! rectangle is a strip of upward leaves from a subinterval of γ until they
//! return to γ, possibly cut into a grid by refinement.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::eigen::EigenSurface;
use super::graph::{Edge, EdgeKind, GraphVertex, Incidence, SegmentGluingGraph};
use super::leaves::{trace_leaf, Germ, LeafDir, Leaves, Segment, Stops, SurfacePoint, TraceError};
use super::MarkovError;
use crate::exactnum::json::{coeffs_to_json, field_to_json};
use crate::exactnum::{NFElement, Rational};
use crate::pfcore::{perron_root, NonNegIntMatrix};

const MAX_ATTEMPTS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Xi,
    Eta,
}

/// A rectangle of the partition in (u, s) coordinates: `anchor` is its
/// lower-left corner in a square chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovRect {
    pub anchor: SurfacePoint,
    pub width: NFElement,
    pub height: NFElement,
}

/// Upward leaves from γ(lo..hi) return to γ(lo + shift..hi + shift) after
/// time `height`.
#[derive(Clone, Debug)]
struct Strip {
    lo: NFElement,
    hi: NFElement,
    height: NFElement,
    shift: NFElement,
}

#[derive(Clone, Debug)]
struct Cell {
    strip: usize,
    x0: NFElement,
    x1: NFElement,
    y0: NFElement,
    y1: NFElement,
}

impl Cell {
    fn width(&self) -> NFElement {
        &self.x1 - &self.x0
    }
    fn height(&self) -> NFElement {
        &self.y1 - &self.y0
    }
}

#[derive(Clone, Debug)]
pub struct MarkovPartition {
    gamma: Segment,
    stops: Stops,
    strips: Vec<Strip>,
    vcuts: Vec<Vec<NFElement>>,
    hcuts: Vec<Vec<NFElement>>,
    cells: Vec<Cell>,
    first_cell: Vec<usize>,
    centres: Vec<SurfacePoint>,
    rects: Vec<MarkovRect>,
    graph: SegmentGluingGraph,
}

/// A maximal piece of a horizontal segment inside one rectangle.
#[derive(Clone, Debug)]
struct Pass {
    cell: usize,
    x_in: NFElement,
    x_out: NFElement,
    y: NFElement,
}

fn saddle(e: TraceError) -> MarkovError {
    match e {
        TraceError::HitSingularity { vertex, length } => MarkovError::SaddleConnectionFound { vertex, length },
        other => MarkovError::Trace(other),
    }
}

fn internal(msg: &str) -> MarkovError {
    MarkovError::Internal(msg.to_string())
}

fn frac(e: &NFElement, n: i64, d: i64) -> NFElement {
    e.scale(&Rational::new(n.into(), d.into()))
}

fn bounds(lo: &NFElement, cuts: &[NFElement], hi: &NFElement) -> Vec<NFElement> {
    std::iter::once(lo.clone()).chain(cuts.iter().cloned()).chain(std::iter::once(hi.clone())).collect()
}

/// Index of the last bound ≤ t, or None outside [first, last).
fn slot(b: &[NFElement], t: &NFElement) -> Option<usize> {
    if t < &b[0] || t >= b.last().unwrap() {
        return None;
    }
    Some(b.iter().rposition(|x| x <= t).unwrap())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum VertexKey {
    Tiling(usize),
    Point(SurfacePoint),
}

impl MarkovPartition {
    pub fn rects(&self) -> &[MarkovRect] {
        &self.rects
    }
    pub fn len(&self) -> usize {
        self.rects.len()
    }
    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }
    pub fn graph(&self) -> &SegmentGluingGraph {
        &self.graph
    }
    /// γ as built: from the designated singularity along the expanding leaf.
    pub fn gamma(&self) -> &Segment {
        &self.gamma
    }
    pub fn widths(&self) -> Vec<NFElement> {
        self.rects.iter().map(|r| r.width.clone()).collect()
    }
    pub fn heights(&self) -> Vec<NFElement> {
        self.rects.iter().map(|r| r.height.clone()).collect()
    }
    /// Σ wᵢhᵢ; the surface is normalized to area 1.
    pub fn area(&self) -> NFElement {
        let k = self.gamma.length.field();
        self.rects.iter().fold(NFElement::zero(k), |s, r| s + &r.width * &r.height)
    }
    fn is_base(&self) -> bool {
        self.vcuts.iter().chain(&self.hcuts).all(Vec::is_empty)
    }

    fn assemble(
        lv: &Leaves,
        gamma: Segment,
        strips: Vec<Strip>,
        mut vcuts: Vec<Vec<NFElement>>,
        mut hcuts: Vec<Vec<NFElement>>,
    ) -> Result<Self, MarkovError> {
        let stops = lv.stops(std::slice::from_ref(&gamma))?;
        let zero = lv.zero();
        let mut cells = Vec::new();
        let mut first_cell = Vec::new();
        for (i, s) in strips.iter().enumerate() {
            vcuts[i].sort();
            vcuts[i].dedup();
            hcuts[i].sort();
            hcuts[i].dedup();
            first_cell.push(cells.len());
            let xs = bounds(&s.lo, &vcuts[i], &s.hi);
            let ys = bounds(&zero, &hcuts[i], &s.height);
            for x in xs.windows(2) {
                for y in ys.windows(2) {
                    cells.push(Cell {
                        strip: i,
                        x0: x[0].clone(),
                        x1: x[1].clone(),
                        y0: y[0].clone(),
                        y1: y[1].clone(),
                    });
                }
            }
        }
        let mut p = MarkovPartition {
            gamma,
            stops,
            strips,
            vcuts,
            hcuts,
            cells,
            first_cell,
            centres: Vec::new(),
            rects: Vec::new(),
            graph: SegmentGluingGraph {
                rect_count: 0,
                edges: Vec::new(),
                vertices: Vec::new(),
            },
        };
        let half = frac(&NFElement::one(lv.field()), 1, 2);
        for c in &p.cells {
            let x = (&c.x0 + &c.x1) * &half;
            let y = (&c.y0 + &c.y1) * &half;
            let g = lv.advance(&p.gamma.start, LeafDir::Right, &x)?;
            p.centres.push(lv.advance(&g, LeafDir::Up, &y)?);
        }
        for i in 0..p.cells.len() {
            let anchor = lv.normalize(&p.boundary(lv, i, &zero, &zero)?);
            p.rects.push(MarkovRect {
                anchor,
                width: p.cells[i].width(),
                height: p.cells[i].height(),
            });
        }
        p.graph = p.extract_graph(lv)?;
        Ok(p)
    }

    /// The point at local coordinates (a, b) of a rectangle, reached from its
    /// centre in a raw chart.
    fn boundary(&self, lv: &Leaves, cell: usize, a: &NFElement, b: &NFElement) -> Result<SurfacePoint, MarkovError> {
        let c = &self.cells[cell];
        let dx = a - &frac(&c.width(), 1, 2);
        let dy = b - &frac(&c.height(), 1, 2);
        let u = lv.vector(LeafDir::Right);
        let s = lv.vector(LeafDir::Up);
        let w = (&dx * &u.0 + &dy * &s.0, &dx * &u.1 + &dy * &s.1);
        Ok(lv.translate(&self.centres[cell], &w)?)
    }

    /// The rectangle containing `p`, with p's local coordinates. Points on
    /// a shared side belong to the rectangle above or to the right.
    pub fn locate(&self, e: &EigenSurface, p: &SurfacePoint) -> Result<(usize, NFElement, NFElement), MarkovError> {
        self.locate_in(e.leaves(), p)
    }

    fn locate_in(&self, lv: &Leaves, p: &SurfacePoint) -> Result<(usize, NFElement, NFElement), MarkovError> {
        let (_, y, _, r) = lv.first_hit(p, LeafDir::Down, &self.stops, false)?;
        let i = self
            .strips
            .iter()
            .position(|s| s.lo <= r && r < s.hi)
            .ok_or_else(|| internal("point projects outside γ"))?;
        let s = &self.strips[i];
        let xs = bounds(&s.lo, &self.vcuts[i], &s.hi);
        let ys = bounds(&lv.zero(), &self.hcuts[i], &s.height);
        let col = slot(&xs, &r).ok_or_else(|| internal("column lookup failed"))?;
        let row = slot(&ys, &y).ok_or_else(|| internal("point lies above its strip"))?;
        let cell = self.first_cell[i] + col * (ys.len() - 1) + row;
        Ok((cell, r - &xs[col], y - &ys[row]))
    }

    fn delta(&self) -> NFElement {
        let m = self
            .cells
            .iter()
            .flat_map(|c| [c.width(), c.height()])
            .reduce(NFElement::min)
            .expect("non-empty partition");
        frac(&m, 1, 4)
    }

    /// Follows a horizontal segment of length `len` from local (x, y) of
    /// `cell`, splitting it at rectangle sides.
    fn sweep(
        &self,
        lv: &Leaves,
        start: (usize, NFElement, NFElement),
        rightward: bool,
        mut len: NFElement,
        delta: &NFElement,
    ) -> Result<Vec<Pass>, MarkovError> {
        let (mut c, mut x, mut y) = start;
        let mut out = Vec::new();
        let dir = if rightward { LeafDir::Right } else { LeafDir::Left };
        let twice = delta.scale(&Rational::from_integer(2.into()));
        loop {
            let w = self.cells[c].width();
            let avail = if rightward { &w - &x } else { x.clone() };
            if len <= avail {
                let end = if rightward { &x + &len } else { &x - &len };
                out.push(Pass { cell: c, x_in: x, x_out: end, y });
                return Ok(out);
            }
            let edge = if rightward { w.clone() } else { lv.zero() };
            out.push(Pass {
                cell: c,
                x_in: x,
                x_out: edge,
                y: y.clone(),
            });
            len = len - &avail;
            let inside = if rightward { &w - delta } else { delta.clone() };
            let q = self.boundary(lv, c, &inside, &y)?;
            let q = lv.advance(&q, dir, &twice)?;
            let (c2, x2, y2) = self.locate_in(lv, &q)?;
            let w2 = self.cells[c2].width();
            let expect = if rightward { delta.clone() } else { &w2 - delta };
            if x2 != expect {
                return Err(internal("side crossing is misaligned"));
            }
            c = c2;
            x = if rightward { lv.zero() } else { w2 };
            y = y2;
        }
    }

    /// The horizontal midline of φ(P) cut into rectangle crossings, and a
    /// check that each crossing is a full-width strip of height h_P/Λ.
    fn image_passes(&self, e: &EigenSurface, cell: usize) -> Result<Vec<Pass>, MarkovError> {
        let lv = e.leaves();
        let violated = |m: String| MarkovError::MarkovPropertyViolated(m);
        let wrap = |r: Result<Vec<Pass>, MarkovError>| {
            r.map_err(|err| match err {
                MarkovError::Trace(t) => violated(format!("image of rectangle {cell} meets a singularity: {t}")),
                MarkovError::SaddleConnectionFound { .. } => violated(format!("image of rectangle {cell} meets a singularity")),
                other => other,
            })
        };
        let delta = self.delta();
        let img = e.image(&self.centres[cell]).map_err(|_| violated(format!("centre of {cell} maps to a singularity")))?;
        let start = self.locate_in(lv, &img).map_err(|_| violated(format!("centre of {cell} maps onto γ's boundary")))?;
        let w = &self.cells[cell].width() * e.lambda();
        let left = wrap(self.sweep(lv, start, false, frac(&w, 1, 2), &delta))?;
        let l = left.last().unwrap();
        let passes = wrap(self.sweep(lv, (l.cell, l.x_out.clone(), l.y.clone()), true, w, &delta))?;
        let first = passes.first().unwrap();
        let last = passes.last().unwrap();
        if !first.x_in.is_zero() || last.x_out != self.cells[last.cell].width() {
            return Err(violated(format!("a vertical side of φ(P{cell}) is not inside a vertical side")));
        }
        let hh = self.cells[cell]
            .height()
            .checked_div(&e.lambda().scale(&Rational::from_integer(2.into())))
            .expect("Λ > 0");
        for p in &passes {
            if (&p.y - &hh).sign() < 0 || &p.y + &hh > self.cells[p.cell].height() {
                return Err(violated(format!("φ(P{cell}) does not fit inside P{}", p.cell)));
            }
        }
        Ok(passes)
    }

    fn all_passes(&self, e: &EigenSurface) -> Result<Vec<Vec<Pass>>, MarkovError> {
        (0..self.cells.len()).map(|c| self.image_passes(e, c)).collect()
    }

    /// The partition with rectangle `rect` cut by a vertical line at local
    /// offset `at` (the whole strip column is cut).
    pub fn split_vertical(&self, e: &EigenSurface, rect: usize, at: &NFElement) -> Result<Self, MarkovError> {
        let c = &self.cells[rect];
        if at.sign() <= 0 || *at >= c.width() {
            return Err(internal("cut outside the rectangle"));
        }
        let mut vcuts = self.vcuts.clone();
        vcuts[c.strip].push(&c.x0 + at);
        Self::assemble(e.leaves(), self.gamma.clone(), self.strips.clone(), vcuts, self.hcuts.clone())
    }

    fn extract_graph(&self, lv: &Leaves) -> Result<SegmentGluingGraph, MarkovError> {
        let delta = self.delta();
        let twice = delta.scale(&Rational::from_integer(2.into()));
        // (edge, tail point, head point, midpoint, length)
        let mut found: Vec<(Edge, SurfacePoint, SurfacePoint, SurfacePoint)> = Vec::new();
        let probes = [(1, 2), (1, 3), (2, 3), (1, 5), (4, 5)];
        for d in 0..self.cells.len() {
            let cd = &self.cells[d];
            for kind in [EdgeKind::Xi, EdgeKind::Eta] {
                let (side_len, other) = match kind {
                    EdgeKind::Xi => (cd.width(), cd.height()),
                    EdgeKind::Eta => (cd.height(), cd.width()),
                };
                // local coordinates of a point at `t` along the top or right side,
                // pulled in by `inset`
                let at = |t: &NFElement, inset: &NFElement| match kind {
                    EdgeKind::Xi => (t.clone(), &other - inset),
                    EdgeKind::Eta => (&other - inset, t.clone()),
                };
                let mut todo = vec![(lv.zero(), side_len)];
                while let Some((a, b)) = todo.pop() {
                    let mut hit = None;
                    for (pn, pd) in probes {
                        let m = &a + &frac(&(&b - &a), pn, pd);
                        let (px, py) = at(&m, &delta);
                        let q = self.boundary(lv, d, &px, &py)?;
                        let dir = if kind == EdgeKind::Xi { LeafDir::Up } else { LeafDir::Right };
                        let Ok(q) = lv.advance(&q, dir, &twice) else { continue };
                        let Ok((c, x2, y2)) = self.locate_in(lv, &q) else { continue };
                        let (along, across) = if kind == EdgeKind::Xi { (x2, y2) } else { (y2, x2) };
                        if across != delta {
                            return Err(internal("side probe is misaligned"));
                        }
                        hit = Some((c, along - &m, m));
                        break;
                    }
                    let (c, o, m) = hit.ok_or_else(|| internal("every side probe met a singularity"))?;
                    let c_len = if kind == EdgeKind::Xi {
                        self.cells[c].width()
                    } else {
                        self.cells[c].height()
                    };
                    let lo = a.clone().max(-&o);
                    let hi = b.clone().min(&c_len - &o);
                    if lo >= hi {
                        return Err(internal("empty shared side"));
                    }
                    // the two sides separate at marked points, so keep only the
                    // piece around the probe and probe the rest again
                    let along_dir = if kind == EdgeKind::Xi { LeafDir::Right } else { LeafDir::Up };
                    let side_point = |t: &NFElement| {
                        let (px, py) = at(t, &lv.zero());
                        self.boundary(lv, d, &px, &py)
                    };
                    let mut cuts = vec![lo.clone(), hi.clone()];
                    marked_between(lv, &side_point, along_dir, &lo, &hi, &mut cuts)?;
                    cuts.sort();
                    let k = cuts.windows(2).position(|w| w[0] < m && m < w[1]).ok_or_else(|| internal("probe on a marked point"))?;
                    let (l0, l1) = (cuts[k].clone(), cuts[k + 1].clone());
                    let (start, end, mid) = (side_point(&l0)?, side_point(&l1)?, side_point(&frac(&(&l0 + &l1), 1, 2))?);
                    let (tail, head) = match kind {
                        EdgeKind::Xi => (start, end),
                        EdgeKind::Eta => (end, start),
                    };
                    let edge = Edge {
                        kind,
                        tail: 0,
                        head: 0,
                        labels: [d, c],
                        length: Some(&l1 - &l0),
                        offsets: Some([l0.clone(), &l0 + &o]),
                    };
                    found.push((edge, tail, head, mid));
                    if a < l0 {
                        todo.push((a.clone(), l0));
                    }
                    if l1 < b {
                        todo.push((l1, b));
                    }
                }
            }
        }

        let key = |p: &SurfacePoint| match lv.vertex_at(p) {
            Some(v) => VertexKey::Tiling(v),
            None => VertexKey::Point(lv.normalize(p)),
        };
        let mut ids: BTreeMap<VertexKey, usize> = BTreeMap::new();
        let mut ends: Vec<Vec<(usize, Incidence)>> = Vec::new();
        let mut edges = Vec::new();
        for (i, (mut edge, tail, head, mid)) in found.into_iter().enumerate() {
            let half = frac(edge.length.as_ref().unwrap(), 1, 2);
            for (pt, outgoing) in [(&tail, true), (&head, false)] {
                let k = key(pt);
                let next = ids.len();
                let v = *ids.entry(k.clone()).or_insert(next);
                if v == ends.len() {
                    ends.push(Vec::new());
                }
                let leaving = match (edge.kind, outgoing) {
                    (EdgeKind::Xi, true) => LeafDir::Right,
                    (EdgeKind::Xi, false) => LeafDir::Left,
                    (EdgeKind::Eta, true) => LeafDir::Down,
                    (EdgeKind::Eta, false) => LeafDir::Up,
                };
                let order = match k {
                    VertexKey::Tiling(_) => {
                        let z = lv.advance(&mid, leaving.reverse(), &half)?;
                        let g: Germ = lv
                            .arrival_germ(&z, leaving.reverse())
                            .ok_or_else(|| internal("edge does not end at its vertex"))?;
                        lv.germ_key(g)
                    }
                    VertexKey::Point(_) => leaving.index(),
                };
                ends[v].push((order, Incidence { edge: i, outgoing }));
                if outgoing {
                    edge.tail = v;
                } else {
                    edge.head = v;
                }
            }
            edges.push(edge);
        }
        let mut vertices = vec![
            GraphVertex {
                angle: 1,
                cyclic: Vec::new()
            };
            ids.len()
        ];
        for (k, v) in &ids {
            if let VertexKey::Tiling(t) = k {
                vertices[*v].angle = lv.angle(*t);
            }
            let mut e = std::mem::take(&mut ends[*v]);
            e.sort_by_key(|x| x.0);
            vertices[*v].cyclic = e.into_iter().map(|x| x.1).collect();
        }
        let graph = SegmentGluingGraph {
            rect_count: self.cells.len(),
            edges,
            vertices,
        };
        graph.validate()?;
        let widths: Vec<_> = self.cells.iter().map(Cell::width).collect();
        let heights: Vec<_> = self.cells.iter().map(Cell::height).collect();
        graph.check_metric(&widths, &heights)?;
        Ok(graph)
    }

    pub fn to_json(&self) -> Value {
        let rects: Vec<Value> = self
            .rects
            .iter()
            .map(|r| {
                json!({
                    "anchor": {
                        "square": r.anchor.square,
                        "x": coeffs_to_json(&r.anchor.x),
                        "y": coeffs_to_json(&r.anchor.y),
                    },
                    "width": coeffs_to_json(&r.width),
                    "height": coeffs_to_json(&r.height),
                })
            })
            .collect();
        json!({
            "field": field_to_json(self.gamma.length.field()),
            "gamma_length": coeffs_to_json(&self.gamma.length),
            "rects": rects,
            "graph": self.graph.to_json(),
        })
    }
}

/// Positions of marked vertices strictly between `a` and `b` on a
/// segment parametrized by `point` in direction `dir`.
fn marked_between(
    lv: &Leaves,
    point: &dyn Fn(&NFElement) -> Result<SurfacePoint, MarkovError>,
    dir: LeafDir,
    a: &NFElement,
    b: &NFElement,
    out: &mut Vec<NFElement>,
) -> Result<(), MarkovError> {
    let m = frac(&(a + b), 1, 2);
    let p = point(&m)?;
    if lv.vertex_at(&p).is_some() {
        out.push(m.clone());
        marked_between(lv, point, dir, a, &m, out)?;
        return marked_between(lv, point, dir, &m, b, out);
    }
    match lv.advance(&p, dir, &(b - &m)) {
        Ok(_) => {}
        Err(TraceError::HitSingularity { length, .. }) => {
            let t = &m + &length;
            out.push(t.clone());
            marked_between(lv, point, dir, &t, b, out)?;
        }
        Err(e) => return Err(e.into()),
    }
    match lv.advance(&p, dir.reverse(), &(&m - a)) {
        Ok(_) => Ok(()),
        Err(TraceError::HitSingularity { length, .. }) => {
            let t = &m - &length;
            out.push(t.clone());
            marked_between(lv, point, dir, a, &t, out)
        }
        Err(e) => Err(e.into()),
    }
}

/// One attempt with γ of length `len`; None if the construction degenerates
/// for this length.
fn attempt(lv: &Leaves, start: &SurfacePoint, len: &NFElement) -> Result<Option<MarkovPartition>, MarkovError> {
    let n = lv.n();
    let gamma = Segment {
        start: start.clone(),
        dir: LeafDir::Right,
        length: len.clone(),
    };
    let stops = lv.stops(&[gamma])?;
    // λ segments: every vertical separatrix up to its first γ hit
    let mut hits: Vec<(Germ, NFElement, SurfacePoint)> = Vec::new();
    for g in lv.germs(LeafDir::Up).into_iter().chain(lv.germs(LeafDir::Down)) {
        let (pt, length, _, off) = lv.first_hit(&lv.germ_start(g), g.dir, &stops, true).map_err(saddle)?;
        if off.is_zero() {
            return Err(MarkovError::SaddleConnectionFound {
                vertex: lv.germ_vertex(g),
                length,
            });
        }
        if off == *len {
            return Ok(None);
        }
        hits.push((g, off, pt));
    }
    let rp = hits.iter().map(|h| h.1.clone()).max().expect("at least one separatrix");
    let terminal: Vec<_> = hits.iter().filter(|h| h.1 == rp).collect();
    if terminal.len() != 1 {
        return Ok(None);
    }
    let (gp, _, ppt) = terminal[0].clone();
    let gamma = Segment {
        start: start.clone(),
        dir: LeafDir::Right,
        length: rp.clone(),
    };
    let stops = lv.stops(std::slice::from_ref(&gamma))?;
    // extend the terminal λ to its next hit with the trimmed γ
    let (_, _, _, ext) = lv.first_hit(&ppt, gp.dir, &stops, true).map_err(saddle)?;

    let mut cuts = vec![lv.zero(), rp.clone()];
    cuts.extend(hits.iter().filter(|h| h.0.dir == LeafDir::Down).map(|h| h.1.clone()));
    if gp.dir == LeafDir::Down {
        cuts.push(ext);
    }
    cuts.sort();
    cuts.dedup();
    if cuts.len() != n + 2 {
        return Ok(None);
    }
    let mut strips = Vec::new();
    for w in cuts.windows(2) {
        let m = frac(&(&w[0] + &w[1]), 1, 2);
        let g = lv.advance(start, LeafDir::Right, &m)?;
        let (_, height, _, back) = lv.first_hit(&g, LeafDir::Up, &stops, true).map_err(saddle)?;
        strips.push(Strip {
            lo: w[0].clone(),
            hi: w[1].clone(),
            height,
            shift: back - &m,
        });
    }
    // the tops must tile γ and the strips must fill the surface
    let mut tops: Vec<(NFElement, NFElement)> = strips.iter().map(|s| (&s.lo + &s.shift, &s.hi + &s.shift)).collect();
    tops.sort();
    let mut reach = lv.zero();
    for (a, b) in &tops {
        if *a != reach {
            return Ok(None);
        }
        reach = b.clone();
    }
    let area = strips.iter().fold(lv.zero(), |s, t| s + (&t.hi - &t.lo) * &t.height);
    if reach != rp || area != NFElement::one(lv.field()) {
        return Ok(None);
    }
    let k = strips.len();
    MarkovPartition::assemble(lv, gamma, strips, vec![Vec::new(); k], vec![Vec::new(); k]).map(Some)
}

/// Builds a Markov partition with 1 + k/2 rectangles from γ, a short
/// segment of the expanding separatrix of vertex 0, and the contracting
/// separatrices of all vertices.
pub fn build_markov(e: &EigenSurface) -> Result<MarkovPartition, MarkovError> {
    let lv = e.leaves();
    let germ0 = lv
        .germs(LeafDir::Right)
        .into_iter()
        .find(|g| lv.germ_vertex(*g) == 0)
        .expect("vertex 0 has a separatrix");
    let start = lv.germ_start(germ0);
    let up0 = lv
        .germs(LeafDir::Up)
        .into_iter()
        .find(|g| lv.germ_vertex(*g) == 0)
        .expect("vertex 0 has a separatrix");
    let transversal = Segment {
        start: lv.germ_start(up0),
        dir: LeafDir::Up,
        length: NFElement::one(lv.field()),
    };
    let first = trace_leaf(lv, &start, LeafDir::Right, &[transversal]).map_err(saddle)?;
    let mut len = frac(&first.length, 1, 2);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(p) = attempt(lv, &start, &len)? {
            return Ok(p);
        }
        len = frac(&len, 1, 2);
    }
    Err(internal("no admissible length for γ"))
}

/// Whether φ maps vertical sides into vertical sides and φ⁻¹ maps
/// horizontal sides into horizontal sides.
pub fn verify_markov(p: &MarkovPartition, e: &EigenSurface) -> bool {
    p.all_passes(e).is_ok()
}

fn matrix_from(p: &MarkovPartition, e: &EigenSurface) -> Result<NonNegIntMatrix, MarkovError> {
    let passes = p.all_passes(e)?;
    let d = p.len();
    let mut mat = NonNegIntMatrix::new(d, vec![0; d * d]).expect("square");
    for (i, ps) in passes.iter().enumerate() {
        for q in ps {
            mat.set(i, q.cell, mat.get(i, q.cell) + 1);
        }
    }
    let violated = |m: &str| MarkovError::MarkovPropertyViolated(m.to_string());
    if !mat.is_irreducible() {
        return Err(violated("intersection matrix is reducible"));
    }
    let root = perron_root(&mat).map_err(|_| violated("intersection matrix is reducible"))?;
    if root != *e.field().generator() {
        return Err(violated("Perron root differs from the stretch factor"));
    }
    let (w, h) = (p.widths(), p.heights());
    let lam = e.lambda();
    for i in 0..d {
        let row = (0..d).fold(lv_zero(e), |s, j| s + w[j].scale(&Rational::from_integer(mat.get(i, j).into())));
        let col = (0..d).fold(lv_zero(e), |s, j| s + h[j].scale(&Rational::from_integer(mat.get(j, i).into())));
        if row != &w[i] * lam || col != &h[i] * lam {
            return Err(violated("side lengths are not Perron eigenvectors"));
        }
    }
    Ok(mat)
}

fn lv_zero(e: &EigenSurface) -> NFElement {
    NFElement::zero(e.field())
}

/// a_ij = number of crossings of φ(Pᵢ) through Pⱼ.
pub fn intersection_matrix(p: &MarkovPartition, e: &EigenSurface) -> Result<NonNegIntMatrix, MarkovError> {
    matrix_from(p, e)
}

/// Cuts the rectangles along the vertical (ξ) or horizontal (η) lines
/// through the endpoints of the ξ or η segments, and returns the refined
/// partition with its intersection matrix.
pub fn refine_partition(p: &MarkovPartition, e: &EigenSurface, axis: Axis) -> Result<(MarkovPartition, NonNegIntMatrix), MarkovError> {
    if !p.is_base() {
        return Err(internal("refinement starts from an unrefined partition"));
    }
    p.all_passes(e)?;
    let mut vcuts = p.vcuts.clone();
    let mut hcuts = p.hcuts.clone();
    let kind = match axis {
        Axis::Xi => EdgeKind::Xi,
        Axis::Eta => EdgeKind::Eta,
    };
    for i in p.graph.edges_of(kind) {
        let edge = &p.graph.edges[i];
        let (Some(len), Some(offs)) = (&edge.length, &edge.offsets) else {
            return Err(internal("graph lacks metric data"));
        };
        for slot in 0..2 {
            let c = &p.cells[edge.labels[slot]];
            let side = if kind == EdgeKind::Xi { c.width() } else { c.height() };
            for t in [offs[slot].clone(), &offs[slot] + len] {
                if t.sign() > 0 && t < side {
                    match kind {
                        EdgeKind::Xi => vcuts[c.strip].push(&c.x0 + &t),
                        EdgeKind::Eta => hcuts[c.strip].push(&c.y0 + &t),
                    }
                }
            }
        }
    }
    let q = MarkovPartition::assemble(e.leaves(), p.gamma.clone(), p.strips.clone(), vcuts, hcuts)?;
    let m = matrix_from(&q, e)?;
    Ok((q, m))
}
