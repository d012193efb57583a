//! Rebuilding the flat metric of a Markov partition from its intersection
//! matrix and gluing graph.

use std::sync::Arc;

use serde_json::{json, Value};

use super::graph::{EdgeKind, SegmentGluingGraph, Side};
use super::MarkovError;
use crate::exactnum::json::{coeffs_to_json, field_to_json};
use crate::exactnum::{NFElement, NumberField, Rational};
use crate::perm::Perm;
use crate::pfcore::{eigenvector, perron_root, NonNegIntMatrix};
use crate::surface::RectSurface;

/// Rectangles with widths, heights and segment lengths determined by a
/// matrix and gluing graph: the widest rectangle has width 1 and the area
/// is 1.
#[derive(Clone, Debug)]
pub struct MarkovSurface {
    field: Arc<NumberField>,
    widths: Vec<NFElement>,
    heights: Vec<NFElement>,
    graph: SegmentGluingGraph,
}

impl MarkovSurface {
    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }
    pub fn widths(&self) -> &[NFElement] {
        &self.widths
    }
    pub fn heights(&self) -> &[NFElement] {
        &self.heights
    }
    /// The input graph with every segment length filled in.
    pub fn graph(&self) -> &SegmentGluingGraph {
        &self.graph
    }
    pub fn area(&self) -> NFElement {
        self.widths
            .iter()
            .zip(&self.heights)
            .fold(NFElement::zero(&self.field), |s, (w, h)| s + w * h)
    }

    pub fn to_json(&self) -> Value {
        let el = |v: &[NFElement]| Value::Array(v.iter().map(coeffs_to_json).collect());
        json!({
            "field": field_to_json(&self.field),
            "widths": el(&self.widths),
            "heights": el(&self.heights),
            "graph": self.graph.to_json(),
        })
    }

    /// The rectangle presentation, when every side is a single segment.
    pub fn to_rect_surface(&self) -> Result<RectSurface, MarkovError> {
        let p = self.graph.rect_count;
        let mut right = vec![0; p];
        let mut up = vec![0; p];
        for r in 0..p {
            let (Ok(ri), Ok(ti)) = (single(&self.graph, r, Side::Right), single(&self.graph, r, Side::Top)) else {
                return Err(MarkovError::IncompatibleGraph(format!("rectangle {r} has a partially glued side")));
            };
            right[r] = self.graph.edges[ri].labels[1];
            up[r] = self.graph.edges[ti].labels[1];
        }
        let perm = |v: Vec<usize>| Perm::from_images(v).ok_or_else(|| MarkovError::IncompatibleGraph("gluings are not bijective".into()));
        Ok(RectSurface::new(
            &self.field,
            perm(right)?,
            perm(up)?,
            self.widths.clone(),
            self.heights.clone(),
        )?)
    }
}

fn single(g: &SegmentGluingGraph, r: usize, side: Side) -> Result<usize, ()> {
    match g.side(r, side)[..] {
        [e] => Ok(e),
        _ => Err(()),
    }
}

fn bad(msg: impl Into<String>) -> MarkovError {
    MarkovError::IncompatibleGraph(msg.into())
}

/// Solves `rows · x = rhs` exactly for a unique positive `x`.
fn solve_positive(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<NFElement>, unknowns: usize) -> Result<Vec<NFElement>, MarkovError> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..unknowns {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != Rational::from_integer(0.into())) else {
            continue;
        };
        rows.swap(r, k);
        rhs.swap(r, k);
        let inv = Rational::from_integer(1.into()) / &rows[r][c];
        rows[r].iter_mut().for_each(|x| *x = &*x * &inv);
        rhs[r] = rhs[r].scale(&inv);
        for k in 0..rows.len() {
            if k == r || rows[k][c] == Rational::from_integer(0.into()) {
                continue;
            }
            let f = rows[k][c].clone();
            let (pivot, target) = if k < r {
                let (a, b) = rows.split_at_mut(r);
                (&b[0], &mut a[k])
            } else {
                let (a, b) = rows.split_at_mut(k);
                (&a[r], &mut b[0])
            };
            target.iter_mut().zip(pivot).for_each(|(x, p)| *x = &*x - &(&f * p));
            rhs[k] = &rhs[k] - &rhs[r].scale(&f);
        }
        pivots.push(c);
        r += 1;
    }
    if rhs[r..].iter().any(|x| !x.is_zero()) {
        return Err(bad("side lengths are inconsistent"));
    }
    if pivots.len() < unknowns {
        return Err(bad("segment lengths are not determined by the side lengths"));
    }
    let x: Vec<NFElement> = rhs.into_iter().take(unknowns).collect();
    if let Some(i) = x.iter().position(|l| l.sign() <= 0) {
        return Err(bad(format!("segment {i} would have non-positive length")));
    }
    Ok(x)
}

/// Widths from the Perron vector of A (widest = 1), heights from that of
/// Aᵗ (area 1), segment lengths from the side-sum equations.
pub fn reconstruct_from_markov(a: &NonNegIntMatrix, g: &SegmentGluingGraph) -> Result<MarkovSurface, MarkovError> {
    let p = a.dim();
    if g.rect_count != p {
        return Err(bad(format!("graph has {} rectangles, matrix has dimension {p}", g.rect_count)));
    }
    if !a.is_irreducible() {
        return Err(bad("matrix is reducible"));
    }
    g.validate()?;
    let root = perron_root(a).map_err(|e| bad(e.to_string()))?;
    let field = NumberField::new(root);
    let widths = eigenvector(a, &field, false);
    let raw = eigenvector(a, &field, true);
    let area = widths.iter().zip(&raw).fold(NFElement::zero(&field), |s, (w, h)| s + w * h);
    let inv = area.inverse().map_err(|_| bad("degenerate eigenvector"))?;
    let heights: Vec<NFElement> = raw.iter().map(|h| h * &inv).collect();

    let mut graph = g.clone();
    for kind in [EdgeKind::Xi, EdgeKind::Eta] {
        let ids = g.edges_of(kind);
        let (sides, targets) = match kind {
            EdgeKind::Xi => ([Side::Bottom, Side::Top], &widths),
            EdgeKind::Eta => ([Side::Left, Side::Right], &heights),
        };
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for r in 0..p {
            for side in sides {
                let on: Vec<usize> = g.side(r, side);
                rows.push(
                    ids.iter()
                        .map(|e| Rational::from_integer(i64::from(on.contains(e)).into()))
                        .collect(),
                );
                rhs.push(targets[r].clone());
            }
        }
        let lengths = solve_positive(rows, rhs, ids.len())?;
        for (e, l) in ids.into_iter().zip(lengths) {
            graph.edges[e].length = Some(l);
            graph.edges[e].offsets = None;
        }
    }
    Ok(MarkovSurface {
        field,
        widths,
        heights,
        graph,
    })
}
