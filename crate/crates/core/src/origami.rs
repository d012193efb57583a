//! Square-tiled surfaces and their SL(2, ℤ) orbits.
//!
//! Square k has right neighbour σ_h(k) and top neighbour σ_v(k). A matrix
//! g acts by deforming the surface; g·O is re-cut into unit squares, the
//! new square k being the one containing g(c_k + ε(2, 1)) for small ε > 0,
//! where c_k is the lower-left corner of old square k.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Mul;

use serde_json::{json, Value};
use thiserror::Error;

use crate::exactnum::json::{field_of, int_from_json, schema, JsonError};
use crate::perm::{transitive, Perm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrigamiError {
    #[error("σ_h and σ_v must be permutations of the same size")]
    SizeMismatch,
    #[error("⟨σ_h, σ_v⟩ is not transitive")]
    NotTransitive,
    #[error("matrix has determinant {0}, expected 1")]
    NotUnimodular(i64),
    #[error("{0} is not in the Veech group")]
    NotInVeechGroup(Sl2z),
}

/// An integer matrix [[a, b], [c, d]] of determinant 1, acting on column
/// vectors.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sl2z {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Sl2z {
    pub const S: Sl2z = Sl2z { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Sl2z = Sl2z { a: 1, b: 1, c: 0, d: 1 };
    pub const IDENTITY: Sl2z = Sl2z { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, OrigamiError> {
        let det = a * d - b * c;
        if det != 1 {
            return Err(OrigamiError::NotUnimodular(det));
        }
        Ok(Sl2z { a, b, c, d })
    }

    pub fn inverse(&self) -> Self {
        Sl2z { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2
    }

    pub fn rows(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn apply(&self, v: (i64, i64)) -> (i64, i64) {
        (self.a * v.0 + self.b * v.1, self.c * v.0 + self.d * v.1)
    }

    pub fn to_json(&self) -> Value {
        json!(self.rows())
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(|| schema("$", "expected [[a,b],[c,d]]"))?;
        let mut e = [0i64; 4];
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == 2)
                .ok_or_else(|| schema(&format!("$[{i}]"), "expected 2 entries"))?;
            for (j, x) in row.iter().enumerate() {
                let p = format!("$[{i}][{j}]");
                e[2 * i + j] = int_from_json(x, &p)?.try_into().map_err(|_| schema(&p, "entry out of range"))?;
            }
        }
        // bound entries so that products in orbit searches cannot overflow
        if e.iter().any(|x| x.unsigned_abs() > 1 << 24) {
            return Err(schema("$", "entries must be at most 2^24 in absolute value"));
        }
        Sl2z::new(e[0], e[1], e[2], e[3]).map_err(|err| schema("$", err.to_string()))
    }

    /// A word in S, T, T⁻¹ whose moves, applied left to right, realize this
    /// matrix: if the word is g₁ … g_k then the matrix is g_k ⋯ g₁.
    pub fn word(&self) -> Vec<Generator> {
        // Write self = T^{q₁} S T^{q₂} S ⋯ (±I) T^{n} by Euclid on the first
        // column, using S⁻¹ = −S and −I = S².
        let mut factors: Vec<Sl2z> = Vec::new();
        let mut m = *self;
        while m.c != 0 {
            let q = m.a.div_euclid(m.c);
            // m = T^q · S · m' with m' = S⁻¹ T^{−q} m
            factors.push(t_pow(q));
            factors.push(Sl2z::S);
            let r = t_pow(-q) * m;
            m = Sl2z::S.inverse() * r;
        }
        // m = ±T^n
        if m.a == -1 {
            factors.push(Sl2z::S);
            factors.push(Sl2z::S);
            m = Sl2z { a: 1, b: -m.b, c: 0, d: 1 };
        }
        factors.push(t_pow(m.b));
        // self = f₁ f₂ ⋯ f_r, so the last factor is applied first
        let mut word = Vec::new();
        for f in factors.iter().rev() {
            if *f == Sl2z::S {
                word.push(Generator::S);
            } else {
                let g = if f.b > 0 { Generator::T } else { Generator::TInv };
                word.extend(std::iter::repeat_n(g, f.b.unsigned_abs() as usize));
            }
        }
        debug_assert_eq!(word.iter().fold(Sl2z::IDENTITY, |acc, g| g.matrix() * acc), *self);
        word
    }
}

fn t_pow(n: i64) -> Sl2z {
    Sl2z { a: 1, b: n, c: 0, d: 1 }
}

impl Mul for Sl2z {
    type Output = Sl2z;
    fn mul(self, o: Sl2z) -> Sl2z {
        Sl2z {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }
}

impl fmt::Debug for Sl2z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for Sl2z {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    S,
    T,
    TInv,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::S, Generator::T, Generator::TInv];

    pub fn matrix(self) -> Sl2z {
        match self {
            Generator::S => Sl2z::S,
            Generator::T => Sl2z::T,
            Generator::TInv => Sl2z::T.inverse(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origami {
    sigma_h: Perm,
    sigma_v: Perm,
}

impl Origami {
    pub fn new(sigma_h: Perm, sigma_v: Perm) -> Result<Self, OrigamiError> {
        if sigma_h.len() != sigma_v.len() || sigma_h.is_empty() {
            return Err(OrigamiError::SizeMismatch);
        }
        if !transitive(&[&sigma_h, &sigma_v]) {
            return Err(OrigamiError::NotTransitive);
        }
        Ok(Origami { sigma_h, sigma_v })
    }

    pub fn torus() -> Self {
        Origami {
            sigma_h: Perm::identity(1),
            sigma_v: Perm::identity(1),
        }
    }

    /// Three squares in an L: σ_h = (1 2), σ_v = (1 3).
    pub fn l_shaped() -> Self {
        Origami {
            sigma_h: Perm::from_cycles(3, &[&[0, 1]]).unwrap(),
            sigma_v: Perm::from_cycles(3, &[&[0, 2]]).unwrap(),
        }
    }

    pub fn n(&self) -> usize {
        self.sigma_h.len()
    }

    pub fn sigma_h(&self) -> &Perm {
        &self.sigma_h
    }

    pub fn sigma_v(&self) -> &Perm {
        &self.sigma_v
    }

    /// Moves g·O keeping the square labels described in the module docs.
    pub fn act_raw(&self, g: Generator) -> Origami {
        let (h, v) = (&self.sigma_h, &self.sigma_v);
        let (nh, nv) = match g {
            // up in T·O is (−1, 1) in O
            Generator::T => (h.clone(), h.inverse().then(v)),
            // up in T⁻¹·O is (1, 1) in O
            Generator::TInv => (h.clone(), h.then(v)),
            // right in S·O is down in O, up is right
            Generator::S => (v.inverse(), h.clone()),
        };
        Origami { sigma_h: nh, sigma_v: nv }
    }

    /// g·O with labels tracked through a word for g.
    pub fn act_matrix_raw(&self, g: &Sl2z) -> Origami {
        g.word().into_iter().fold(self.clone(), |o, x| o.act_raw(x))
    }

    /// Canonical form and the relabelling τ with canonical = τ O τ⁻¹.
    pub fn canonical_with_relabel(&self) -> (Origami, Perm) {
        let n = self.n();
        let mut best: Option<(Vec<usize>, Vec<usize>, Vec<usize>)> = None;
        let mut num = vec![usize::MAX; n];
        for s in 0..n {
            num.iter_mut().for_each(|x| *x = usize::MAX);
            let mut order = vec![s];
            num[s] = 0;
            let mut k = 0;
            while k < order.len() {
                let x = order[k];
                k += 1;
                for p in [&self.sigma_h, &self.sigma_v] {
                    let y = p.apply(x);
                    if num[y] == usize::MAX {
                        num[y] = order.len();
                        order.push(y);
                    }
                }
            }
            let code_h: Vec<usize> = order.iter().map(|&x| num[self.sigma_h.apply(x)]).collect();
            let code_v: Vec<usize> = order.iter().map(|&x| num[self.sigma_v.apply(x)]).collect();
            if best.as_ref().is_none_or(|(bh, bv, _)| (&code_h, &code_v) < (bh, bv)) {
                best = Some((code_h, code_v, num.clone()));
            }
        }
        let (h, v, tau) = best.expect("at least one square");
        (
            Origami {
                sigma_h: Perm::from_images(h).unwrap(),
                sigma_v: Perm::from_images(v).unwrap(),
            },
            Perm::from_images(tau).unwrap(),
        )
    }

    pub fn canonical(&self) -> Origami {
        self.canonical_with_relabel().0
    }

    pub fn to_json(&self) -> Value {
        json!({"sigma_h": self.sigma_h.to_json(), "sigma_v": self.sigma_v.to_json()})
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let h = Perm::from_json(field_of(v, "sigma_h", "$")?, "$.sigma_h")?;
        let w = Perm::from_json(field_of(v, "sigma_v", "$")?, "$.sigma_v")?;
        Origami::new(h, w).map_err(|e| schema("$", e.to_string()))
    }
}

impl fmt::Debug for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Origami(h={}, v={})", self.sigma_h, self.sigma_v)
    }
}

/// S, T or T⁻¹ applied to O, in canonical form.
pub fn sl2z_move(g: Generator, o: &Origami) -> Origami {
    o.act_raw(g).canonical()
}

/// An affine automorphism of an origami: derivative `deriv` and the
/// translation equivalence from deriv·O (squares labelled as in
/// [`Origami::act_raw`]) back to O. Square k of deriv·O is carried to square
/// `relabel(k)` of O. The equivalence maps squares onto squares, so every
/// entry of `offsets` (the translation between matched lower-left corners,
/// in square units) is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineAut {
    pub deriv: Sl2z,
    pub relabel: Perm,
    pub offsets: Vec<(i64, i64)>,
}

impl AffineAut {
    pub fn is_hyperbolic(&self) -> bool {
        self.deriv.is_hyperbolic()
    }

    /// Replays deriv on O, then relabel, and compares with O.
    pub fn verify(&self, o: &Origami) -> bool {
        let moved = o.act_matrix_raw(&self.deriv);
        self.offsets.iter().all(|&v| v == (0, 0))
            && self.relabel.len() == o.n()
            && moved.sigma_h.conjugate_by(&self.relabel) == o.sigma_h
            && moved.sigma_v.conjugate_by(&self.relabel) == o.sigma_v
    }
}

pub fn affine_automorphism(o: &Origami, h: &Sl2z) -> Result<AffineAut, OrigamiError> {
    let moved = o.act_matrix_raw(h);
    let (cm, tm) = moved.canonical_with_relabel();
    let (co, to) = o.canonical_with_relabel();
    if cm != co {
        return Err(OrigamiError::NotInVeechGroup(*h));
    }
    // τ_o O τ_o⁻¹ = τ_m M τ_m⁻¹, so O = (τ_o⁻¹ τ_m) M (τ_o⁻¹ τ_m)⁻¹
    let relabel = tm.then(&to.inverse());
    let aut = AffineAut {
        deriv: *h,
        relabel,
        offsets: vec![(0, 0); o.n()],
    };
    debug_assert!(aut.verify(o));
    Ok(aut)
}

/// A non-tree edge of the orbit graph: g·O_from ≅ O_to closes a loop and
/// yields the stabilizer element W_to⁻¹ g W_from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerWitness {
    pub from: usize,
    pub generator: Generator,
    pub to: usize,
    pub aut: AffineAut,
}

#[derive(Clone, Debug)]
pub struct VeechOrbit {
    /// Canonical origamis in BFS order; entry 0 is the start.
    pub orbit: Vec<Origami>,
    /// W_i with orbit[i] ≅ W_i·O.
    pub words: Vec<Sl2z>,
    pub witnesses: Vec<StabilizerWitness>,
}

impl VeechOrbit {
    pub fn len(&self) -> usize {
        self.orbit.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbit.is_empty()
    }

    /// Index of the subgroup Γ(O) in SL(2, ℤ).
    pub fn index(&self) -> usize {
        self.orbit.len()
    }

    /// A hyperbolic stabilizer element, searched among words of length at
    /// most 4 in the witnesses; smallest |trace| wins, ties broken by the
    /// matrix entries.
    pub fn hyperbolic_element(&self) -> Option<Sl2z> {
        let gens: BTreeSet<Sl2z> = self.witnesses.iter().map(|w| w.aut.deriv).collect();
        let mut layer: BTreeSet<Sl2z> = gens.clone();
        let mut best: Option<Sl2z> = None;
        for _ in 0..4 {
            for g in layer.iter().filter(|g| g.is_hyperbolic()) {
                if best.is_none_or(|b| (g.trace().abs(), *g) < (b.trace().abs(), b)) {
                    best = Some(*g);
                }
            }
            if best.is_some() {
                return best;
            }
            layer = layer.iter().flat_map(|x| gens.iter().map(move |y| *x * *y)).collect();
        }
        None
    }
}

/// Breadth-first search of the S, T, T⁻¹ orbit.
pub fn veech_orbit(o: &Origami) -> VeechOrbit {
    let start = o.canonical();
    let mut index: BTreeMap<Origami, usize> = BTreeMap::new();
    let mut orbit = vec![start.clone()];
    let mut words = vec![Sl2z::IDENTITY];
    index.insert(start, 0);
    let mut edges = Vec::new();
    let mut k = 0;
    while k < orbit.len() {
        for g in Generator::ALL {
            let next = sl2z_move(g, &orbit[k]);
            match index.get(&next) {
                Some(&j) => edges.push((k, g, j)),
                None => {
                    index.insert(next.clone(), orbit.len());
                    words.push(g.matrix() * words[k]);
                    orbit.push(next);
                }
            }
        }
        k += 1;
    }
    let witnesses = edges
        .into_iter()
        .map(|(from, g, to)| {
            let m = words[to].inverse() * g.matrix() * words[from];
            StabilizerWitness {
                from,
                generator: g,
                to,
                aut: affine_automorphism(o, &m).expect("orbit loops lie in the Veech group"),
            }
        })
        .collect();
    VeechOrbit { orbit, words, witnesses }
}
