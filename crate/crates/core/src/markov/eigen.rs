//! Square-tiled surfaces seen in the eigenframe of a hyperbolic affine
//! automorphism.

use std::sync::Arc;

use num_bigint::BigInt;

use super::leaves::{AffineMap, Germ, LeafDir, Leaves, SurfacePoint};
use super::MarkovError;
use crate::exactnum::{rat, AlgebraicReal, IntPoly, NFElement, NumberField, Rational};
use crate::origami::{AffineAut, Origami, Sl2z};
use crate::perm::Perm;
use crate::surface::RectSurface;

/// A square-tiled surface over ℚ(Λ) with a pseudo-Anosov map φ whose
/// derivative is diag(Λ, 1/Λ) in the frame (u, s) of [`EigenSurface::leaves`].
/// φ is a power of the given automorphism fixing every separatrix.
#[derive(Clone, Debug)]
pub struct EigenSurface {
    base: RectSurface,
    leaves: Leaves,
    phi: AffineMap,
    map: Sl2z,
    power: u32,
    lambda: NFElement,
}

impl EigenSurface {
    /// The unit-square tiling over ℚ(Λ).
    pub fn base(&self) -> &RectSurface {
        &self.base
    }
    pub fn field(&self) -> &Arc<NumberField> {
        self.leaves.field()
    }
    pub fn leaves(&self) -> &Leaves {
        &self.leaves
    }
    /// Derivative of the original automorphism.
    pub fn map(&self) -> Sl2z {
        self.map
    }
    pub fn power(&self) -> u32 {
        self.power
    }
    /// Stretch factor Λ of φ, the field generator.
    pub fn lambda(&self) -> &NFElement {
        &self.lambda
    }
    pub fn lambda_minpoly(&self) -> &IntPoly {
        self.field().minpoly()
    }
    pub fn n(&self) -> usize {
        self.leaves.n()
    }
    /// k = Σ k_σ over marked points (every vertex of the tiling is marked).
    pub fn prongs(&self) -> Vec<u64> {
        self.base.stratum().prongs
    }

    /// φ(p).
    pub fn image(&self, p: &SurfacePoint) -> Result<SurfacePoint, MarkovError> {
        Ok(self.leaves.normalize(&self.phi.apply(&self.leaves, p)?))
    }
}

fn sl2_pow(h: Sl2z, n: u32) -> Sl2z {
    (0..n).fold(Sl2z::IDENTITY, |acc, _| acc * h)
}

/// u expands by λ₁, s contracts, u × s = n.
fn frame(k: &Arc<NumberField>, h: Sl2z, lambda1: &NFElement, n: usize) -> ((NFElement, NFElement), (NFElement, NFElement)) {
    let a = NFElement::from_int(k, h.a);
    let binv = NFElement::from_rational(k, Rational::new(1.into(), h.b.into()));
    let su = (lambda1 - &a) * &binv;
    let ss = (lambda1.inverse().expect("non-zero") - &a) * &binv;
    let one = NFElement::one(k);
    let c = NFElement::from_int(k, n as i64)
        .checked_div(&(&ss - &su))
        .expect("eigenvalues are distinct");
    ((one, su), (c.clone(), c * &ss))
}

fn eps(leaves: &Leaves) -> NFElement {
    let m = LeafDir::ALL
        .iter()
        .map(|&d| {
            let v = leaves.vector(d);
            v.0.to_f64().abs().ceil() as i64 + v.1.to_f64().abs().ceil() as i64
        })
        .max()
        .unwrap();
    NFElement::from_rational(leaves.field(), Rational::new(1.into(), (2 * (m + 1)).into()))
}

fn germ_index(n: usize, g: Germ) -> usize {
    g.dir.index() * n + g.square
}

/// The permutation φ induces on the 4n germs (direction, square).
fn germ_permutation(leaves: &Leaves, phi: &AffineMap, lambda1: &NFElement) -> Result<Perm, MarkovError> {
    let n = leaves.n();
    let e = eps(leaves);
    let mut images = vec![0; 4 * n];
    for dir in LeafDir::ALL {
        let f = if dir.is_horizontal() {
            lambda1.clone()
        } else {
            lambda1.inverse().expect("non-zero")
        };
        let to = if f.sign() > 0 { dir } else { dir.reverse() };
        let back = &f.abs() * &e;
        for g in leaves.germs(dir) {
            let x = leaves.advance(&leaves.germ_start(g), dir, &e)?;
            let y = phi.apply(leaves, &x)?;
            let z = leaves.advance(&y, to.reverse(), &back)?;
            let img = leaves
                .arrival_germ(&z, to.reverse())
                .ok_or_else(|| MarkovError::Internal("germ image is not at a vertex".into()))?;
            images[germ_index(n, g)] = germ_index(n, img);
        }
    }
    Perm::from_images(images).ok_or_else(|| MarkovError::Internal("germ map is not a bijection".into()))
}

/// Whether φ carries square k, near its lower-left corner, into square
/// relabel(k) (or relabel⁻¹(k)).
fn matches_relabel(leaves: &Leaves, phi: &AffineMap, relabel: &Perm) -> bool {
    let k = leaves.field();
    let q = |a: i64, b: i64| NFElement::from_rational(k, Rational::new(a.into(), b.into()));
    let squares: Option<Vec<usize>> = (0..leaves.n())
        .map(|j| {
            let p = SurfacePoint::new(j, q(2, 97), q(1, 97));
            phi.apply(leaves, &p).ok().map(|y| leaves.normalize(&y).square)
        })
        .collect();
    let Some(sq) = squares else { return false };
    let inv = relabel.inverse();
    (0..sq.len()).all(|j| sq[j] == relabel.apply(j)) || (0..sq.len()).all(|j| sq[j] == inv.apply(j))
}

fn quadratic_field(trace: i64) -> Arc<NumberField> {
    let p = IntPoly::from_i64(&[1, -trace, 1]);
    NumberField::new(AlgebraicReal::real_roots(&p).pop().expect("hyperbolic trace"))
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let (n, d) = (q.numer(), q.denom());
    let (rn, rd): (BigInt, BigInt) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// Conjugates the square-tiled surface `s` into the eigenframe of `a`.
pub fn to_eigenbasis(s: &RectSurface, a: &AffineAut) -> Result<EigenSurface, MarkovError> {
    let h = a.deriv;
    let t = h.trace();
    if t.abs() <= 2 {
        return Err(MarkovError::NotHyperbolic(h));
    }
    let w0 = &s.widths()[0];
    if !s.widths().iter().chain(s.heights()).all(|x| x == w0) {
        return Err(MarkovError::NotSquareTiled);
    }
    let o = Origami::new(s.sigma1().clone(), s.sigma2().clone()).map_err(|_| MarkovError::NotSquareTiled)?;
    if !a.verify(&o) {
        return Err(MarkovError::InvalidAutomorphism);
    }
    let n = o.n();
    let m = h.rows();

    // stage 1: over ℚ(|λ₁|), choose φ and the power fixing all germs
    let k1 = quadratic_field(t.abs());
    let mut l1 = NFElement::generator(&k1);
    if t < 0 {
        l1 = -l1;
    }
    let (u, v) = frame(&k1, h, &l1, n);
    let leaves1 = Leaves::new(&k1, o.sigma_h(), o.sigma_v(), u, v, true);
    let candidates = AffineMap::all_with_derivative(&leaves1, m);
    let mut scored = Vec::new();
    for (j, phi) in candidates.iter().enumerate() {
        let order = germ_permutation(&leaves1, phi, &l1)?.order();
        scored.push((!matches_relabel(&leaves1, phi, &a.relabel), order, j));
    }
    let &(_, power, j) = scored.iter().min().ok_or(MarkovError::InvalidAutomorphism)?;
    let target = candidates[j].images[0].square;
    let power = u32::try_from(power).map_err(|_| MarkovError::Internal("power too large".into()))?;

    // stage 2: over K = ℚ(Λ) with Λ = |λ₁|^N
    let hn = sl2_pow(h, power);
    let tn = hn.trace();
    let k = quadratic_field(tn);
    let lambda = NFElement::generator(&k);
    let r = rational_sqrt(&Rational::new((t * t - 4).into(), (tn * tn - 4).into()))
        .ok_or_else(|| MarkovError::Internal("power generates a different field".into()))?;
    let root = (lambda.scale(&rat(2)) - NFElement::from_int(&k, tn)).scale(&(r * rat(t.signum())));
    let l1 = (NFElement::from_int(&k, t) + root).scale(&Rational::new(1.into(), 2.into()));
    if l1.pow(power) != lambda {
        return Err(MarkovError::Internal("stretch factor mismatch".into()));
    }
    let (u, v) = frame(&k, h, &l1, n);
    let leaves = Leaves::new(&k, o.sigma_h(), o.sigma_v(), u, v, true);
    let phi1 = AffineMap::all_with_derivative(&leaves, m)
        .into_iter()
        .find(|p| p.images[0].square == target)
        .ok_or_else(|| MarkovError::Internal("automorphism lost in field change".into()))?;
    let mut images: Vec<SurfacePoint> = (0..n)
        .map(|j| {
            let half = NFElement::from_rational(&k, Rational::new(1.into(), 2.into()));
            SurfacePoint::new(j, half.clone(), half)
        })
        .collect();
    for _ in 0..power {
        images = images
            .iter()
            .map(|p| phi1.apply(&leaves, p).map(|q| leaves.normalize(&q)))
            .collect::<Result<_, _>>()?;
    }
    let phi = AffineMap {
        deriv: hn.rows().map(|r| r.map(|e| NFElement::from_int(&k, e))),
        images,
    };
    let fixed = germ_permutation(&leaves, &phi, &lambda)?;
    if fixed != Perm::identity(4 * n) {
        return Err(MarkovError::Internal("power does not fix all separatrices".into()));
    }
    let one = NFElement::one(&k);
    let base = RectSurface::new(&k, o.sigma_h().clone(), o.sigma_v().clone(), vec![one.clone(); n], vec![one; n])?;
    Ok(EigenSurface {
        base,
        leaves,
        phi,
        map: h,
        power,
        lambda,
    })
}
