//! Gluing patterns of rectangle decompositions: ξ (horizontal) and η
//! (vertical) boundary segments, labels of the rectangles on either side,
//! and the counterclockwise order of segments at each vertex.

use std::sync::Arc;

use serde_json::{json, Value};

use super::MarkovError;
use crate::exactnum::json::{coeffs_from_json, coeffs_to_json, field_from_json, field_to_json, schema, JsonError};
use crate::exactnum::{NFElement, NumberField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Xi,
    Eta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Bottom,
    Top,
    Left,
    Right,
}

/// ξ edges run left to right with `labels = [below, above]`; η edges run
/// top to bottom with `labels = [left, right]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub kind: EdgeKind,
    pub tail: usize,
    pub head: usize,
    pub labels: [usize; 2],
    pub length: Option<NFElement>,
    /// Where the edge starts along the sides of `labels[0]` and `labels[1]`
    /// (left end for ξ, bottom end for η).
    pub(crate) offsets: Option<[NFElement; 2]>,
}

impl Edge {
    pub fn new(kind: EdgeKind, tail: usize, head: usize, labels: [usize; 2], length: Option<NFElement>) -> Self {
        Edge {
            kind,
            tail,
            head,
            labels,
            length,
            offsets: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Incidence {
    pub edge: usize,
    pub outgoing: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphVertex {
    /// Cone angle divided by 2π.
    pub angle: usize,
    /// Incident edge ends, counterclockwise.
    pub cyclic: Vec<Incidence>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentGluingGraph {
    pub rect_count: usize,
    pub edges: Vec<Edge>,
    pub vertices: Vec<GraphVertex>,
}

fn bad(msg: impl Into<String>) -> MarkovError {
    MarkovError::IncompatibleGraph(msg.into())
}

impl SegmentGluingGraph {
    /// One rectangle whose opposite sides are glued: the square torus.
    pub fn single_rectangle() -> Self {
        let edge = |kind| Edge::new(kind, 0, 0, [0, 0], None);
        let inc = |edge, outgoing| Incidence { edge, outgoing };
        SegmentGluingGraph {
            rect_count: 1,
            edges: vec![edge(EdgeKind::Xi), edge(EdgeKind::Eta)],
            // E, N, W, S: ξ out, η in, ξ in, η out
            vertices: vec![GraphVertex {
                angle: 1,
                cyclic: vec![inc(0, true), inc(1, false), inc(0, false), inc(1, true)],
            }],
        }
    }

    /// Edges along one side of a rectangle, unordered.
    pub fn side(&self, rect: usize, side: Side) -> Vec<usize> {
        let (kind, slot) = match side {
            Side::Bottom => (EdgeKind::Xi, 1),
            Side::Top => (EdgeKind::Xi, 0),
            Side::Left => (EdgeKind::Eta, 1),
            Side::Right => (EdgeKind::Eta, 0),
        };
        (0..self.edges.len())
            .filter(|&i| self.edges[i].kind == kind && self.edges[i].labels[slot] == rect)
            .collect()
    }

    pub fn edges_of(&self, kind: EdgeKind) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].kind == kind).collect()
    }

    /// Combinatorial consistency: labels and endpoints in range, every edge
    /// end listed once at its vertex, every rectangle side non-empty, and
    /// consecutive edges of the same kind around a vertex alternate in
    /// orientation.
    pub fn validate(&self) -> Result<(), MarkovError> {
        let nv = self.vertices.len();
        let mut seen = vec![[0usize; 2]; self.edges.len()];
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail >= nv || e.head >= nv || e.labels.iter().any(|&l| l >= self.rect_count) {
                return Err(bad(format!("edge {i} out of range")));
            }
        }
        for (v, vert) in self.vertices.iter().enumerate() {
            for inc in &vert.cyclic {
                let e = self.edges.get(inc.edge).ok_or_else(|| bad(format!("vertex {v} lists a missing edge")))?;
                let end = if inc.outgoing { e.tail } else { e.head };
                if end != v {
                    return Err(bad(format!("edge {} is not incident to vertex {v}", inc.edge)));
                }
                seen[inc.edge][usize::from(inc.outgoing)] += 1;
            }
            for kind in [EdgeKind::Xi, EdgeKind::Eta] {
                let ends: Vec<bool> = vert
                    .cyclic
                    .iter()
                    .filter(|inc| self.edges[inc.edge].kind == kind)
                    .map(|inc| inc.outgoing)
                    .collect();
                if ends.len() >= 2 && (0..ends.len()).any(|i| ends[i] == ends[(i + 1) % ends.len()]) {
                    return Err(bad(format!("orientation does not alternate at vertex {v}")));
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| *s != [1, 1]) {
            return Err(bad(format!("edge {i} ends are not listed exactly once")));
        }
        for r in 0..self.rect_count {
            for side in [Side::Bottom, Side::Top, Side::Left, Side::Right] {
                if self.side(r, side).is_empty() {
                    return Err(bad(format!("rectangle {r} has an empty {side:?} side")));
                }
            }
        }
        Ok(())
    }

    /// Side lengths of every rectangle equal the sums of its segment lengths.
    pub fn check_metric(&self, widths: &[NFElement], heights: &[NFElement]) -> Result<(), MarkovError> {
        for r in 0..self.rect_count {
            for (side, target) in [
                (Side::Bottom, &widths[r]),
                (Side::Top, &widths[r]),
                (Side::Left, &heights[r]),
                (Side::Right, &heights[r]),
            ] {
                let mut sum = NFElement::zero(target.field());
                for e in self.side(r, side) {
                    let l = self.edges[e].length.as_ref().ok_or_else(|| bad(format!("edge {e} has no length")))?;
                    sum = sum + l;
                }
                if sum != *target {
                    return Err(bad(format!("{side:?} side of rectangle {r} has the wrong length")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let field = self.edges.iter().find_map(|e| e.length.as_ref()).map(|l| field_to_json(l.field()));
        let kind = |k| match k {
            EdgeKind::Xi => "xi",
            EdgeKind::Eta => "eta",
        };
        let edges: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                let mut v = json!({
                    "kind": kind(e.kind),
                    "tail": e.tail,
                    "head": e.head,
                    "labels": e.labels,
                });
                if let Some(l) = &e.length {
                    v["length"] = coeffs_to_json(l);
                }
                v
            })
            .collect();
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| {
                json!({
                    "angle": v.angle,
                    "cyclic": v.cyclic.iter().map(|i| json!([i.edge, i.outgoing])).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut out = json!({"rect_count": self.rect_count, "edges": edges, "vertices": vertices});
        if let Some(f) = field {
            out["field"] = f;
        }
        out
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        const LIMIT: usize = 4096;
        let uint = |x: &Value, path: &str| -> Result<usize, JsonError> {
            x.as_u64()
                .and_then(|n| usize::try_from(n).ok())
                .filter(|&n| n < LIMIT)
                .ok_or_else(|| schema(path, "expected a small non-negative integer"))
        };
        let arr = |x: &Value, path: &str| -> Result<Vec<Value>, JsonError> {
            x.as_array().cloned().ok_or_else(|| schema(path, "expected an array"))
        };
        let field: Option<Arc<NumberField>> = v.get("field").map(field_from_json).transpose()?;
        let rect_count = uint(v.get("rect_count").unwrap_or(&Value::Null), "$.rect_count")?;
        let mut edges = Vec::new();
        for (i, e) in arr(v.get("edges").unwrap_or(&Value::Null), "$.edges")?.iter().enumerate() {
            let p = format!("$.edges[{i}]");
            let kind = match e.get("kind").and_then(Value::as_str) {
                Some("xi") => EdgeKind::Xi,
                Some("eta") => EdgeKind::Eta,
                _ => return Err(schema(&format!("{p}.kind"), "expected \"xi\" or \"eta\"")),
            };
            let labels = arr(e.get("labels").unwrap_or(&Value::Null), &format!("{p}.labels"))?;
            if labels.len() != 2 {
                return Err(schema(&format!("{p}.labels"), "expected two labels"));
            }
            let length = match (e.get("length"), &field) {
                (Some(l), Some(k)) => Some(coeffs_from_json(k, l, &format!("{p}.length"))?),
                (Some(_), None) => return Err(schema(&p, "lengths need a field")),
                (None, _) => None,
            };
            edges.push(Edge {
                kind,
                tail: uint(e.get("tail").unwrap_or(&Value::Null), &format!("{p}.tail"))?,
                head: uint(e.get("head").unwrap_or(&Value::Null), &format!("{p}.head"))?,
                labels: [uint(&labels[0], &p)?, uint(&labels[1], &p)?],
                length,
                offsets: None,
            });
        }
        let mut vertices = Vec::new();
        for (i, x) in arr(v.get("vertices").unwrap_or(&Value::Null), "$.vertices")?.iter().enumerate() {
            let p = format!("$.vertices[{i}]");
            let mut cyclic = Vec::new();
            for c in arr(x.get("cyclic").unwrap_or(&Value::Null), &format!("{p}.cyclic"))? {
                let pair = c.as_array().filter(|a| a.len() == 2).ok_or_else(|| schema(&p, "expected [edge, outgoing]"))?;
                let outgoing = pair[1].as_bool().ok_or_else(|| schema(&p, "expected a boolean"))?;
                cyclic.push(Incidence {
                    edge: uint(&pair[0], &p)?,
                    outgoing,
                });
            }
            vertices.push(GraphVertex {
                angle: uint(x.get("angle").unwrap_or(&Value::Null), &format!("{p}.angle"))?,
                cyclic,
            });
        }
        if edges.len() >= LIMIT || vertices.len() >= LIMIT {
            return Err(schema("$", "graph too large"));
        }
        Ok(SegmentGluingGraph {
            rect_count,
            edges,
            vertices,
        })
    }
}
