//! Translation surfaces glued from rectangles: reconstruction from cusp data,
//! cylinder decompositions, parabolic data, strata, and the inverse map back
//! to cusp data.

mod svg;

pub use svg::{render_svg, SvgOptions};

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::enumerate::{canonical_with, GluingPattern};
use crate::exactnum::json::{
    algebraic_to_json, coeffs_from_json, coeffs_to_json, element_from_json, field_from_json, field_of, field_to_json,
    int_from_json, schema, JsonError,
};
use crate::exactnum::{AlgebraicReal, NFElement, NumberField, Rational};
use crate::perm::{all_perms, transitive, Perm};
use crate::pfcore::{eigenvector, perron_root, NonNegIntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("width mismatch in vertical cylinder through rectangle {0}")]
    WidthMismatch(usize),
    #[error("height mismatch in horizontal cylinder through rectangle {0}")]
    HeightMismatch(usize),
    #[error("surface is not connected (rectangle {0} unreachable from 1)")]
    NotConnected(usize),
    #[error("rectangle {0} has a non-positive side")]
    NonPositiveSide(usize),
    #[error("total area is not 1")]
    AreaNotNormalized,
    #[error("size mismatch: {0}")]
    Shape(String),
    #[error("inverse moduli of cylinders {0} and {1} are not commensurable")]
    NotCommensurable(usize, usize),
    #[error("horizontal and vertical cylinders cannot be matched into cusp form")]
    NoCuspForm,
    #[error("invalid cusp datum: {0}")]
    InvalidCuspDatum(String),
    #[error("matrix is not diagonal or anti-diagonal with positive orientation")]
    UnsupportedMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Horizontal,
    Vertical,
}

/// Rectangles with exact sides, rectangle k's right edge glued to the left
/// edge of σ₁(k) and its top edge to the bottom of σ₂(k). Physical lengths are
/// the stored ones times √scale, with scale chosen so the area is 1.
#[derive(Clone, Debug)]
pub struct RectSurface {
    field: Arc<NumberField>,
    sigma1: Perm,
    sigma2: Perm,
    widths: Vec<NFElement>,
    heights: Vec<NFElement>,
    scale: NFElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cylinder {
    pub direction: Direction,
    pub rects: Vec<usize>,
    /// Circumference, stored units.
    pub w: NFElement,
    /// Height, stored units.
    pub h: NFElement,
}

impl Cylinder {
    pub fn inverse_modulus(&self) -> NFElement {
        self.w.checked_div(&self.h).expect("cylinder height is positive")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicData {
    pub moduli: Vec<NFElement>,
    pub mu: NFElement,
    pub twists: Vec<u64>,
}

/// An m×m symmetric A, twist counts D and a gluing pattern for A.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuspDatum {
    pub a: NonNegIntMatrix,
    pub d: Vec<u64>,
    pub pattern: GluingPattern,
}

pub struct BuiltSurface {
    pub surface: RectSurface,
    pub horizontal: ParabolicData,
    pub lambda: AlgebraicReal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    /// k_σ = 2c for each vertex of total angle 2πc, descending.
    pub prongs: Vec<u64>,
    pub genus: u64,
}

impl RectSurface {
    pub fn new(
        field: &Arc<NumberField>,
        sigma1: Perm,
        sigma2: Perm,
        widths: Vec<NFElement>,
        heights: Vec<NFElement>,
    ) -> Result<Self, SurfaceError> {
        let l = sigma1.len();
        if sigma2.len() != l || widths.len() != l || heights.len() != l || l == 0 {
            return Err(SurfaceError::Shape("sigma1, sigma2, widths, heights need equal non-zero length".into()));
        }
        let area = widths
            .iter()
            .zip(&heights)
            .fold(NFElement::zero(field), |s, (w, h)| s + w * h);
        let scale = area.inverse().map_err(|_| SurfaceError::NonPositiveSide(0))?;
        let s = RectSurface {
            field: field.clone(),
            sigma1,
            sigma2,
            widths,
            heights,
            scale,
        };
        s.validate()?;
        Ok(s)
    }

    /// Unit squares glued by (σ_h, σ_v).
    pub fn from_origami(sigma_h: &Perm, sigma_v: &Perm) -> Result<Self, SurfaceError> {
        let k = NumberField::rationals();
        let n = sigma_h.len();
        let one = NFElement::one(&k);
        Self::new(&k, sigma_h.clone(), sigma_v.clone(), vec![one.clone(); n], vec![one; n])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }
    pub fn ell(&self) -> usize {
        self.sigma1.len()
    }
    pub fn sigma1(&self) -> &Perm {
        &self.sigma1
    }
    pub fn sigma2(&self) -> &Perm {
        &self.sigma2
    }
    pub fn widths(&self) -> &[NFElement] {
        &self.widths
    }
    pub fn heights(&self) -> &[NFElement] {
        &self.heights
    }
    /// Square of the factor turning stored lengths into physical ones.
    pub fn scale(&self) -> &NFElement {
        &self.scale
    }

    pub fn stored_area(&self) -> NFElement {
        self.widths
            .iter()
            .zip(&self.heights)
            .fold(NFElement::zero(&self.field), |s, (w, h)| s + w * h)
    }

    /// Physical area, exactly.
    pub fn area(&self) -> NFElement {
        &self.stored_area() * &self.scale
    }

    pub fn validate(&self) -> Result<(), SurfaceError> {
        for k in 0..self.ell() {
            if self.heights[self.sigma1.apply(k)] != self.heights[k] {
                return Err(SurfaceError::HeightMismatch(k + 1));
            }
            if self.widths[self.sigma2.apply(k)] != self.widths[k] {
                return Err(SurfaceError::WidthMismatch(k + 1));
            }
        }
        // Side lengths repeat heavily; test each distinct value once.
        let (wd, wi) = distinct(&self.widths);
        let (hd, hi) = distinct(&self.heights);
        let wpos: Vec<bool> = wd.iter().map(|x| x.sign() > 0).collect();
        let hpos: Vec<bool> = hd.iter().map(|x| x.sign() > 0).collect();
        if let Some(k) = (0..self.ell()).find(|&k| !wpos[wi[k]] || !hpos[hi[k]]) {
            return Err(SurfaceError::NonPositiveSide(k + 1));
        }
        if !transitive(&[&self.sigma1, &self.sigma2]) {
            let o = crate::perm::orbit(&[&self.sigma1, &self.sigma2], 0);
            let missing = (0..self.ell()).find(|x| !o.contains(x)).unwrap();
            return Err(SurfaceError::NotConnected(missing + 1));
        }
        let mut counts = vec![0i64; wd.len() * hd.len()];
        for k in 0..self.ell() {
            counts[wi[k] * hd.len() + hi[k]] += 1;
        }
        let mut area = NFElement::zero(&self.field);
        for (idx, &n) in counts.iter().enumerate().filter(|(_, &n)| n > 0) {
            area = area + (&wd[idx / hd.len()] * &hd[idx % hd.len()]).scale(&Rational::from_integer(n.into()));
        }
        if !(&area * &self.scale).as_rational().is_some_and(|a| a.is_one()) {
            return Err(SurfaceError::AreaNotNormalized);
        }
        Ok(())
    }

    pub fn cylinder_decomposition(&self, dir: Direction) -> Vec<Cylinder> {
        let (sigma, along, across) = match dir {
            Direction::Horizontal => (&self.sigma1, &self.widths, &self.heights),
            Direction::Vertical => (&self.sigma2, &self.heights, &self.widths),
        };
        sigma
            .cycles()
            .into_iter()
            .map(|c| Cylinder {
                direction: dir,
                w: c.iter().fold(NFElement::zero(&self.field), |s, &k| s + &along[k]),
                h: across[c[0]].clone(),
                rects: c,
            })
            .collect()
    }

    /// Vertices are the cycles of κ = σ₂σ₁σ₂⁻¹σ₁⁻¹ on lower-left corners.
    pub fn stratum(&self) -> Stratum {
        let kappa = self.corner_cycle();
        let mut prongs: Vec<u64> = kappa.cycles().iter().map(|c| 2 * c.len() as u64).collect();
        prongs.sort_unstable_by(|a, b| b.cmp(a));
        let excess: u64 = prongs.iter().map(|k| k - 2).sum();
        Stratum {
            genus: excess / 4 + 1,
            prongs,
        }
    }

    /// Sends the lower-left corner of rectangle i to the next lower-left
    /// corner counterclockwise around the same vertex.
    pub fn corner_cycle(&self) -> Perm {
        let s1 = &self.sigma1;
        let s2 = &self.sigma2;
        s1.inverse().then(&s2.inverse()).then(s1).then(s2)
    }

    /// V − E + F from an explicit identification of all 4ℓ corners.
    pub fn euler_characteristic(&self) -> i64 {
        let l = self.ell();
        // corners: 0 LL, 1 LR, 2 UR, 3 UL
        let mut parent: Vec<usize> = (0..4 * l).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let n = p[y];
                p[y] = r;
                y = n;
            }
            r
        }
        let mut union = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        };
        for k in 0..l {
            let r = self.sigma1.apply(k);
            let u = self.sigma2.apply(k);
            union(4 * k + 1, 4 * r);
            union(4 * k + 2, 4 * r + 3);
            union(4 * k + 3, 4 * u);
            union(4 * k + 2, 4 * u + 1);
        }
        let v = (0..4 * l).filter(|&x| find(&mut parent, x) == x).count() as i64;
        v - 2 * l as i64 + l as i64
    }

    /// diag(a, d) with a, d > 0, −I, or anti-diagonal [[0, b], [c, 0]] with
    /// b·c < 0 (a quarter turn composed with axis scaling).
    pub fn apply_matrix(&self, g: [[&NFElement; 2]; 2]) -> Result<RectSurface, SurfaceError> {
        let [[a, b], [c, d]] = g;
        let scaled = |ws: &[NFElement], f: &NFElement| ws.iter().map(|x| x * f).collect::<Vec<_>>();
        let out = if b.is_zero() && c.is_zero() {
            match (a.sign(), d.sign()) {
                (1, 1) => (self.sigma1.clone(), self.sigma2.clone(), scaled(&self.widths, a), scaled(&self.heights, d)),
                (-1, -1) => (
                    self.sigma1.inverse(),
                    self.sigma2.inverse(),
                    scaled(&self.widths, &-a),
                    scaled(&self.heights, &-d),
                ),
                _ => return Err(SurfaceError::UnsupportedMatrix),
            }
        } else if a.is_zero() && d.is_zero() {
            match (b.sign(), c.sign()) {
                // (x, y) ↦ (b y, c x): +x goes to +y, +y goes to −x
                (-1, 1) => (
                    self.sigma2.inverse(),
                    self.sigma1.clone(),
                    scaled(&self.heights, &-b),
                    scaled(&self.widths, c),
                ),
                // +x goes to −y, +y goes to +x
                (1, -1) => (
                    self.sigma2.clone(),
                    self.sigma1.inverse(),
                    scaled(&self.heights, b),
                    scaled(&self.widths, &-c),
                ),
                _ => return Err(SurfaceError::UnsupportedMatrix),
            }
        } else {
            return Err(SurfaceError::UnsupportedMatrix);
        };
        RectSurface::new(&self.field, out.0, out.1, out.2, out.3)
    }

    /// The w rotation (x, y) ↦ (−y, x).
    pub fn rotate(&self) -> RectSurface {
        let one = NFElement::one(&self.field);
        let zero = NFElement::zero(&self.field);
        self.apply_matrix([[&zero, &-&one], [&one, &zero]]).expect("rotation is supported")
    }

    /// Equality up to relabeling the rectangles, with exact side lengths.
    pub fn is_isomorphic(&self, o: &RectSurface) -> bool {
        if self.ell() != o.ell() || !self.field.same_as(&o.field) || self.scale != o.scale {
            return false;
        }
        let l = self.ell();
        let number = |s: &RectSurface, start: usize| {
            let mut num = vec![usize::MAX; l];
            let mut order = vec![start];
            num[start] = 0;
            let mut k = 0;
            while k < order.len() {
                let x = order[k];
                k += 1;
                for y in [s.sigma1.apply(x), s.sigma2.apply(x)] {
                    if num[y] == usize::MAX {
                        num[y] = order.len();
                        order.push(y);
                    }
                }
            }
            (num, order)
        };
        let (na, oa) = number(self, 0);
        (0..l).any(|s| {
            let (nb, ob) = number(o, s);
            oa.iter().zip(&ob).all(|(&x, &y)| {
                na[self.sigma1.apply(x)] == nb[o.sigma1.apply(y)]
                    && na[self.sigma2.apply(x)] == nb[o.sigma2.apply(y)]
                    && self.widths[x] == o.widths[y]
                    && self.heights[x] == o.heights[y]
            })
        })
    }

    pub fn to_json(&self) -> Value {
        let el = |v: &[NFElement]| Value::Array(v.iter().map(coeffs_to_json).collect());
        json!({
            "ell": self.ell(),
            "sigma1": self.sigma1.to_json(),
            "sigma2": self.sigma2.to_json(),
            "field": field_to_json(&self.field),
            "widths": el(&self.widths),
            "heights": el(&self.heights),
            "scale": coeffs_to_json(&self.scale),
        })
    }

    /// Reads the JSON form. `field` defaults to ℚ; each side may be a
    /// coefficient array or a full element object in the same field; the
    /// area is normalized by the scale, which is recomputed.
    pub fn from_json(v: &Value) -> Result<Self, SurfaceParseError> {
        let field = match v.get("field") {
            Some(f) => field_from_json(f)?,
            None => NumberField::rationals(),
        };
        let sigma1 = Perm::from_json(field_of(v, "sigma1", "$")?, "$.sigma1")?;
        let sigma2 = Perm::from_json(field_of(v, "sigma2", "$")?, "$.sigma2")?;
        if let Some(e) = v.get("ell") {
            let n = int_from_json(e, "$.ell")?;
            if n != BigInt::from(sigma1.len()) {
                return Err(schema("$.ell", "does not match sigma1").into());
            }
        }
        let sides = |key: &str| -> Result<Vec<NFElement>, JsonError> {
            let p = format!("$.{key}");
            let a = field_of(v, key, "$")?.as_array().ok_or_else(|| schema(&p, "expected an array"))?;
            a.iter()
                .enumerate()
                .map(|(i, x)| {
                    let pi = format!("{p}[{i}]");
                    if x.is_object() {
                        let e = element_from_json(x)?;
                        if !e.field().same_as(&field) {
                            return Err(schema(&pi, "element field differs from surface field"));
                        }
                        Ok(NFElement::from_coeffs(&field, e.coeffs().to_vec()))
                    } else {
                        coeffs_from_json(&field, x, &pi)
                    }
                })
                .collect()
        };
        let widths = sides("widths")?;
        let heights = sides("heights")?;
        Ok(RectSurface::new(&field, sigma1, sigma2, widths, heights)?)
    }
}

#[derive(Debug, Error)]
pub enum SurfaceParseError {
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

fn distinct(xs: &[NFElement]) -> (Vec<NFElement>, Vec<usize>) {
    let mut vals: Vec<NFElement> = Vec::new();
    let idx = xs
        .iter()
        .map(|x| match vals.iter().position(|v| v == x) {
            Some(i) => i,
            None => {
                vals.push(x.clone());
                vals.len() - 1
            }
        })
        .collect();
    (vals, idx)
}

/// The rational q with num = q·den, if there is one; den must be nonzero.
fn rational_ratio(num: &NFElement, den: &NFElement) -> Option<Rational> {
    let k = den.coeffs().iter().position(|c| !c.is_zero())?;
    let q = &num.coeffs()[k] / &den.coeffs()[k];
    (den.scale(&q) == *num).then_some(q)
}

/// μᵢ = wᵢ/hᵢ, their LCM μ and twist counts μ/μᵢ.
pub fn parabolic_data(cyls: &[Cylinder]) -> Result<ParabolicData, SurfaceError> {
    let moduli: Vec<NFElement> = cyls.iter().map(Cylinder::inverse_modulus).collect();
    let first = &moduli[0];
    // μᵢ/μ₁ = wᵢh₁ / (hᵢw₁), found without further inversions.
    let ratios: Vec<Rational> = cyls
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let num = &c.w * &cyls[0].h;
            let den = &c.h * &cyls[0].w;
            rational_ratio(&num, &den).ok_or(SurfaceError::NotCommensurable(1, i + 1))
        })
        .collect::<Result<_, _>>()?;
    // lcm of rationals p/q is lcm(p)/gcd(q)
    let lp = ratios.iter().fold(BigInt::one(), |l, r| l.lcm(r.numer()));
    let gq = ratios.iter().fold(BigInt::zero(), |g, r| g.gcd(r.denom()));
    let c = Rational::new(lp, gq);
    let mu = first.scale(&c);
    let twists = ratios
        .iter()
        .map(|r| {
            let n = &c / r;
            debug_assert!(n.is_integer() && n.is_positive());
            n.to_integer().to_u64().expect("twist count fits in 64 bits")
        })
        .collect();
    Ok(ParabolicData { moduli, mu, twists })
}

impl CuspDatum {
    pub fn check(&self) -> Result<(), SurfaceError> {
        let bad = |s: String| Err(SurfaceError::InvalidCuspDatum(s));
        if !self.a.is_symmetric() {
            return bad("A is not symmetric".into());
        }
        if self.d.len() != self.a.dim() || self.d.contains(&0) {
            return bad("D must have one positive entry per row of A".into());
        }
        if !self.a.scale_rows(&self.d).is_irreducible() {
            return bad("DA is not irreducible".into());
        }
        self.pattern.check(&self.a).or_else(|e| bad(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "A": self.a.to_json(),
            "D": self.d,
            "pattern": self.pattern.to_json(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let a = NonNegIntMatrix::from_json(field_of(v, "A", "$")?)?;
        let d = field_of(v, "D", "$")?
            .as_array()
            .ok_or_else(|| schema("$.D", "expected an array"))?
            .iter()
            .map(|x| int_from_json(x, "$.D")?.try_into().map_err(|_| schema("$.D", "entry out of range")))
            .collect::<Result<Vec<u64>, _>>()?;
        let pattern = GluingPattern::from_json(field_of(v, "pattern", "$")?)?;
        Ok(CuspDatum { a, d, pattern })
    }
}

/// Perron data of DA: the root, the field it generates and the positive
/// eigenvector with largest coordinate 1.
#[derive(Clone, Debug)]
pub struct CuspSpectrum {
    pub lambda: AlgebraicReal,
    pub field: Arc<NumberField>,
    pub vector: Vec<NFElement>,
}

impl CuspSpectrum {
    /// Panics unless DA is irreducible.
    pub fn new(a: &NonNegIntMatrix, d: &[u64]) -> Self {
        let da = a.scale_rows(d);
        let lambda = perron_root(&da).expect("DA must be irreducible");
        let field = NumberField::new(lambda.clone());
        let vector = eigenvector(&da, &field, false);
        CuspSpectrum { lambda, field, vector }
    }
}

/// Rectangle k in class (i, j) gets height aᵢ and width aⱼ, a the Perron
/// vector of DA; the area is then normalized.
pub fn build_surface(c: &CuspDatum) -> Result<BuiltSurface, SurfaceError> {
    c.check()?;
    build_surface_with(c, &CuspSpectrum::new(&c.a, &c.d))
}

/// As [`build_surface`], reusing the spectrum of (A, D). The datum is
/// assumed to have passed [`CuspDatum::check`].
pub fn build_surface_with(c: &CuspDatum, spec: &CuspSpectrum) -> Result<BuiltSurface, SurfaceError> {
    let a = &spec.vector;
    let g = &c.pattern;
    let widths = g.label2.iter().map(|&j| a[j].clone()).collect();
    let heights = g.label1.iter().map(|&i| a[i].clone()).collect();
    let surface = RectSurface::new(&spec.field, g.sigma1.clone(), g.sigma2.clone(), widths, heights)?;
    let mut horizontal = parabolic_data(&surface.cylinder_decomposition(Direction::Horizontal))?;
    // Report cylinders in label order.
    let order = surface.sigma1.cycles().iter().map(|c| g.label1[c[0]]).collect::<Vec<_>>();
    let mut moduli = horizontal.moduli.clone();
    let mut twists = horizontal.twists.clone();
    for (pos, &lab) in order.iter().enumerate() {
        moduli[lab] = horizontal.moduli[pos].clone();
        twists[lab] = horizontal.twists[pos];
    }
    horizontal.moduli = moduli;
    horizontal.twists = twists;
    Ok(BuiltSurface {
        surface,
        horizontal,
        lambda: spec.lambda.clone(),
    })
}

/// Canonical form of a cusp datum: D divided by its gcd (proportional twist
/// vectors give the same surface), minimized over relabelings of horizontal
/// and vertical cylinders that keep A symmetric and the side lengths
/// consistent, and over simultaneous conjugation of the pattern.
pub fn canonical_cusp(c: &CuspDatum) -> CuspDatum {
    canonical_cusp_with(c, &CuspSpectrum::new(&c.a, &c.d).vector)
}

/// As [`canonical_cusp`], given any vector proportional to the Perron
/// vector of DA. Only equalities between its coordinates are used.
pub fn canonical_cusp_with(c: &CuspDatum, sides: &[NFElement]) -> CuspDatum {
    let m = c.a.dim();
    let g = c.d.iter().fold(0u64, |g, &x| num_integer::gcd(g, x));
    let d: Vec<u64> = c.d.iter().map(|&x| x / g).collect();
    // class[i] == class[j] iff a_i == a_j
    let class: Vec<usize> = (0..m).map(|j| (0..m).find(|&i| sides[i] == sides[j]).unwrap()).collect();
    let perms = all_perms(m);
    let identity: Vec<usize> = (0..m).collect();
    let mut best: Option<CuspDatum> = None;
    for ph in &perms {
        let mut pinv = vec![0; m];
        for (i, &x) in ph.iter().enumerate() {
            pinv[x] = i;
        }
        for pv in &perms {
            // Vertical cylinder j becomes label pv[j]; its rectangles have
            // width a_j, which must be the height of horizontal label pv[j].
            if (0..m).any(|j| class[pinv[pv[j]]] != class[j]) {
                continue;
            }
            let mut na = NonNegIntMatrix::new(m, vec![0; m * m]).unwrap();
            for i in 0..m {
                for j in 0..m {
                    na.set(ph[i], pv[j], c.a.get(i, j));
                }
            }
            if !na.is_symmetric() {
                continue;
            }
            let mut nd = vec![0; m];
            for i in 0..m {
                nd[ph[i]] = d[i];
            }
            if let Some(b) = &best {
                if (&na, &nd) > (&b.a, &b.d) {
                    continue;
                }
            }
            let relabeled = GluingPattern {
                sigma1: c.pattern.sigma1.clone(),
                sigma2: c.pattern.sigma2.clone(),
                label1: c.pattern.label1.iter().map(|&i| ph[i]).collect(),
                label2: c.pattern.label2.iter().map(|&j| pv[j]).collect(),
            };
            let cand = CuspDatum {
                a: na,
                d: nd,
                pattern: canonical_with(&relabeled, std::slice::from_ref(&identity)),
            };
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("identity relabeling is always admissible")
}

/// Recovers (A, D, pattern) from the horizontal and vertical cylinders.
pub fn intersection_data(s: &RectSurface) -> Result<CuspDatum, SurfaceError> {
    let hc = s.cylinder_decomposition(Direction::Horizontal);
    let vc = s.cylinder_decomposition(Direction::Vertical);
    let hp = parabolic_data(&hc)?;
    parabolic_data(&vc)?;
    let m = hc.len();
    if vc.len() != m {
        return Err(SurfaceError::NoCuspForm);
    }
    let hidx = s.sigma1.cycle_index();
    let vidx = s.sigma2.cycle_index();
    for beta in all_perms(m) {
        // horizontal i is matched with vertical beta[i]
        if (0..m).any(|i| hc[i].h != vc[beta[i]].h || hc[i].w != vc[beta[i]].w) {
            continue;
        }
        let mut back = vec![0; m];
        for (i, &j) in beta.iter().enumerate() {
            back[j] = i;
        }
        let label1 = hidx.clone();
        let label2: Vec<usize> = vidx.iter().map(|&j| back[j]).collect();
        let mut a = NonNegIntMatrix::new(m, vec![0; m * m]).unwrap();
        for k in 0..s.ell() {
            a.set(label1[k], label2[k], a.get(label1[k], label2[k]) + 1);
        }
        if !a.is_symmetric() {
            continue;
        }
        let c = CuspDatum {
            a,
            d: hp.twists.clone(),
            pattern: GluingPattern {
                sigma1: s.sigma1.clone(),
                sigma2: s.sigma2.clone(),
                label1,
                label2,
            },
        };
        if c.check().is_err() {
            continue;
        }
        let sides: Vec<NFElement> = hc.iter().map(|c| c.h.clone()).collect();
        return Ok(canonical_cusp_with(&c, &sides));
    }
    Err(SurfaceError::NoCuspForm)
}

/// λ(DA) as an algebraic number; exposed for reporting.
pub fn cusp_lambda(c: &CuspDatum) -> AlgebraicReal {
    perron_root(&c.a.scale_rows(&c.d)).expect("irreducible")
}

pub fn lambda_json(l: &AlgebraicReal) -> Value {
    let mut v = algebraic_to_json(l);
    v["approx"] = json!(format!("{:.12}", l.to_f64()));
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn l_origami() -> RectSurface {
        RectSurface::from_origami(
            &Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
            &Perm::from_cycles(3, &[&[0, 1]]).unwrap(),
        )
        .unwrap()
    }

    fn torus() -> RectSurface {
        RectSurface::from_origami(&Perm::identity(1), &Perm::identity(1)).unwrap()
    }

    #[test]
    fn validation() {
        torus().validate().unwrap();
        let q = NumberField::rationals();
        let e = |n| NFElement::from_int(&q, n);
        let r = RectSurface::new(&q, Perm::identity(2), Perm::from_cycles(2, &[&[0, 1]]).unwrap(), vec![e(1), e(2)], vec![e(1), e(1)]);
        assert!(matches!(r, Err(SurfaceError::WidthMismatch(_))));
        let r = RectSurface::new(&q, Perm::identity(2), Perm::identity(2), vec![e(1), e(1)], vec![e(1), e(1)]);
        assert_eq!(r.unwrap_err(), SurfaceError::NotConnected(2));
    }

    #[test]
    fn l_origami_cylinders() {
        let s = l_origami();
        let h = s.cylinder_decomposition(Direction::Horizontal);
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].w.as_rational(), Some(rat(3)));
        let v = s.cylinder_decomposition(Direction::Vertical);
        let wh: Vec<_> = v.iter().map(|c| (c.w.as_rational().unwrap(), c.h.as_rational().unwrap())).collect();
        assert_eq!(wh, vec![(rat(2), rat(1)), (rat(1), rat(1))]);
        let p = parabolic_data(&v).unwrap();
        // inverse moduli w/h = (2, 1)
        assert_eq!(p.mu.as_rational(), Some(rat(2)));
        assert_eq!(p.twists, vec![1, 2]);
        assert_eq!(s.stratum(), Stratum { prongs: vec![6], genus: 2 });
        assert_eq!(s.euler_characteristic(), -2);
    }

    #[test]
    fn incommensurable() {
        let k = NumberField::new(AlgebraicReal::real_roots(&crate::exactnum::IntPoly::from_i64(&[-2, 0, 1]))[1].clone());
        let one = NFElement::one(&k);
        let c = |w: NFElement| Cylinder { direction: Direction::Horizontal, rects: vec![], w, h: one.clone() };
        assert!(matches!(
            parabolic_data(&[c(one.clone()), c(NFElement::generator(&k))]),
            Err(SurfaceError::NotCommensurable(1, 2))
        ));
    }

    #[test]
    fn rotation() {
        let s = l_origami();
        let r = s.rotate();
        assert_eq!(r.sigma2(), s.sigma1());
        assert_eq!(r.sigma1(), &s.sigma2().inverse());
        assert!(r.rotate().rotate().rotate().is_isomorphic(&s));
        assert!(r.rotate().is_isomorphic(&s));
        let q = s.field().clone();
        let two = NFElement::from_int(&q, 2);
        let half = NFElement::from_rational(&q, Rational::new(1.into(), 2.into()));
        let z = NFElement::zero(&q);
        let t = torus().apply_matrix([[&two, &z], [&z, &half]]).unwrap();
        assert_eq!(t.widths()[0].as_rational(), Some(rat(2)));
        assert_eq!(t.area().as_rational(), Some(rat(1)));
        assert!(matches!(s.apply_matrix([[&two, &two], [&z, &half]]), Err(SurfaceError::UnsupportedMatrix)));
    }
}
