//! Upper half-plane geometry with exact rational coordinates.
//!
//! Matrices act on the right: for γ = [[a, b], [c, d]],
//! z·γ = (az + c)/(bz + d). Under this convention h_s = [[1, s], [0, 1]]
//! fixes 0, so the parabolic subgroup ⟨h₁⟩ bases its horoballs at 0.

use std::ops::Mul;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactnum::json::{field_of, rational_from_json, rational_to_json, schema, JsonError};
use crate::exactnum::{rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypError {
    #[error("empty element list")]
    EmptyList,
    #[error("determinant is {0}, expected 1")]
    NotUnimodular(Rational),
    #[error("point is not in the upper half-plane")]
    NotInUpperHalfPlane,
    #[error("cos²θ + sin²θ ≠ 1")]
    NotOnUnitCircle,
    #[error("t₀ must be positive")]
    NonPositive,
}

/// An element of SL(2, ℚ).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Moebius {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl Moebius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self, HypError> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(HypError::NotUnimodular(det));
        }
        Ok(Moebius { a, b, c, d })
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self, HypError> {
        Self::new(rat(a), rat(b), rat(c), rat(d))
    }

    fn raw(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        debug_assert!((&a * &d - &b * &c).is_one());
        Moebius { a, b, c, d }
    }

    pub fn identity() -> Self {
        Self::raw(rat(1), rat(0), rat(0), rat(1))
    }

    /// h_s = [[1, s], [0, 1]].
    pub fn h(s: &Rational) -> Self {
        Self::raw(rat(1), s.clone(), rat(0), rat(1))
    }

    /// h̃_s = [[1, 0], [s, 1]], which acts as z ↦ z + s.
    pub fn h_tilde(s: &Rational) -> Self {
        Self::raw(rat(1), rat(0), s.clone(), rat(1))
    }

    /// w = [[0, −1], [1, 0]].
    pub fn w() -> Self {
        Self::raw(rat(0), rat(-1), rat(1), rat(0))
    }

    /// r_θ = [[cos θ, −sin θ], [sin θ, cos θ]].
    pub fn rotation(cos: &Rational, sin: &Rational) -> Result<Self, HypError> {
        if !(cos * cos + sin * sin).is_one() {
            return Err(HypError::NotOnUnitCircle);
        }
        Ok(Self::raw(cos.clone(), -sin, sin.clone(), cos.clone()))
    }

    pub fn entries(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn trace(&self) -> Rational {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> Self {
        Self::raw(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// x γ x⁻¹.
    pub fn conjugate_by(&self, x: &Moebius) -> Self {
        &(x * self) * &x.inverse()
    }

    pub fn is_parabolic(&self) -> bool {
        self.trace().abs() == rat(2)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > rat(2)
    }

    /// The same map written for the usual left action z ↦ (αz + β)/(γz + δ).
    pub fn to_left_action(&self) -> [[Rational; 2]; 2] {
        [[self.a.clone(), self.c.clone()], [self.b.clone(), self.d.clone()]]
    }

    pub fn to_json(&self) -> Value {
        json!([
            [rational_to_json(&self.a), rational_to_json(&self.b)],
            [rational_to_json(&self.c), rational_to_json(&self.d)]
        ])
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let rows = v.as_array().filter(|r| r.len() == 2).ok_or_else(|| schema("$", "expected a 2×2 array"))?;
        let mut e = Vec::with_capacity(4);
        for (i, row) in rows.iter().enumerate() {
            let row = row
                .as_array()
                .filter(|r| r.len() == 2)
                .ok_or_else(|| schema(&format!("$[{i}]"), "expected 2 entries"))?;
            for (j, x) in row.iter().enumerate() {
                e.push(rational_from_json(x, &format!("$[{i}][{j}]"))?);
            }
        }
        let [a, b, c, d]: [Rational; 4] = e.try_into().expect("four entries");
        Moebius::new(a, b, c, d).map_err(|err| schema("$", &err.to_string()))
    }
}

impl Mul for &Moebius {
    type Output = Moebius;
    fn mul(self, o: &Moebius) -> Moebius {
        Moebius::raw(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UHPPoint {
    x: Rational,
    y: Rational,
}

impl UHPPoint {
    pub fn new(x: Rational, y: Rational) -> Result<Self, HypError> {
        if !y.is_positive() {
            return Err(HypError::NotInUpperHalfPlane);
        }
        Ok(UHPPoint { x, y })
    }

    pub fn i() -> Self {
        UHPPoint { x: rat(0), y: rat(1) }
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn to_json(&self) -> Value {
        json!({"x": rational_to_json(&self.x), "y": rational_to_json(&self.y)})
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let x = rational_from_json(field_of(v, "x", "$")?, "$.x")?;
        let y = rational_from_json(field_of(v, "y", "$")?, "$.y")?;
        UHPPoint::new(x, y).map_err(|e| schema("$.y", &e.to_string()))
    }
}

/// z·γ = (az + c)/(bz + d).
pub fn act(z: &UHPPoint, g: &Moebius) -> UHPPoint {
    let (nr, ni) = (&g.a * &z.x + &g.c, &g.a * &z.y);
    let (dr, di) = (&g.b * &z.x + &g.d, &g.b * &z.y);
    let q = &dr * &dr + &di * &di;
    UHPPoint {
        x: (&nr * &dr + &ni * &di) / &q,
        // Im = y·det/|bz + d|², and det = 1
        y: &z.y / q,
    }
}

/// cosh d(z₁, z₂) = 1 + |z₁ − z₂|²/(2y₁y₂).
pub fn hyperbolic_distance_cosh(z1: &UHPPoint, z2: &UHPPoint) -> Rational {
    let dx = &z1.x - &z2.x;
    let dy = &z1.y - &z2.y;
    rat(1) + (&dx * &dx + &dy * &dy) / (rat(2) * &z1.y * &z2.y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tangency {
    At(Rational),
    /// γ fixes 0, so H_t·γ shares its base point with H_t for every t.
    Unbounded,
}

/// The t for which the horoball 𝓑_t = {|z − ti/2| < t/2} and 𝓑_t·γ are
/// tangent.
///
/// 𝓑_t·γ is based at p = 0·γ = c/d. For d ≠ 0 it is a disk of diameter
/// t/d², and two horodisks at 0 and p with diameters D₁, D₂ are tangent
/// exactly when p² = D₁D₂, i.e. t = |c|. For d = 0 it is the half-plane
/// Im z > c²/t, tangent to 𝓑_t when t = c²/t; again t = |c|.
pub fn horoball_tangency(g: &Moebius) -> Tangency {
    if g.c.is_zero() {
        Tangency::Unbounded
    } else {
        Tangency::At(g.c.abs())
    }
}

/// A caller's completeness argument for a list handed to [`cusp_area`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// No argument: the result is only an upper bound.
    None,
    /// The list contains, up to h₁ on both sides, every element of Γ ∖ P
    /// whose normalized lower-left entry has |c| ≤ B. Any missing element
    /// then has tangency above B.
    LowerLeftBound(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspArea {
    pub t0_upper: Rational,
    pub certified: bool,
    /// Hyperbolic area of the maximal embedded cusp, equal to t₀.
    pub area: Rational,
}

/// min over the list of the tangency parameter, after conjugating each
/// element by `normalization` g (so that gPg⁻¹ = ⟨h₁⟩). Elements fixing 0
/// lie in P and are skipped.
pub fn cusp_area(
    elements: &[Moebius],
    normalization: Option<&Moebius>,
    certificate: &Certificate,
) -> Result<CuspArea, HypError> {
    let t0 = elements
        .iter()
        .filter_map(|g| {
            let g = match normalization {
                Some(n) => g.conjugate_by(n),
                None => g.clone(),
            };
            match horoball_tangency(&g) {
                Tangency::At(t) => Some(t),
                Tangency::Unbounded => None,
            }
        })
        .min()
        .ok_or(HypError::EmptyList)?;
    let certified = match certificate {
        Certificate::None => false,
        Certificate::LowerLeftBound(b) => &t0 <= b,
    };
    Ok(CuspArea {
        area: t0.clone(),
        t0_upper: t0,
        certified,
    })
}

/// Representatives of SL(2, ℤ) ∖ P modulo h₁ on both sides with
/// 1 ≤ |c| ≤ `bound`: a and d are reduced mod c, b = (ad − 1)/c.
pub fn sl2z_double_cosets(bound: u32) -> Vec<Moebius> {
    let mut out = Vec::new();
    for cc in 1..=bound as i64 {
        for c in [cc, -cc] {
            for a in 0..cc {
                for d in 0..cc {
                    if (a * d - 1).rem_euclid(cc) == 0 {
                        let b = (a * d - 1) / c;
                        out.push(Moebius::from_ints(a, b, c, d).expect("determinant 1 by construction"));
                    }
                }
            }
        }
    }
    out
}

/// γ₀ = h_s h̃_{−t₀²} h_s⁻¹, a parabolic element fixing 0·h_s⁻¹.
pub fn cusp_witness(t0: &Rational, s: &Rational) -> Result<Moebius, HypError> {
    if !t0.is_positive() {
        return Err(HypError::NonPositive);
    }
    let g = Moebius::h_tilde(&-(t0 * t0)).conjugate_by(&Moebius::h(s));
    assert!(g.is_parabolic() && g.trace() == rat(2));
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorCertificate {
    pub trace: Rational,
    pub cosh_d: Rational,
    pub hyperbolic: bool,
}

/// With f = h_t r_θ h_{−t} and f′ = h_{−t} r_θ h_t, the commutator
/// h = f′f⁻¹ has trace 2 + 4t²sin²θ, bounded by 2 cosh d where
/// cosh d = 1 + 2t² is the distance between t + i and −t + i.
pub fn commutator_certificate(t: &Rational, cos: &Rational, sin: &Rational) -> Result<CommutatorCertificate, HypError> {
    let r = Moebius::rotation(cos, sin)?;
    let (ht, hmt) = (Moebius::h(t), Moebius::h(&-t));
    let f = &(&ht * &r) * &hmt;
    let f2 = &(&hmt * &r) * &ht;
    let h = &f2 * &f.inverse();
    let trace = h.trace();
    assert_eq!(trace, rat(2) + rat(4) * t * t * sin * sin);
    let cosh_d = rat(1) + rat(2) * t * t;
    debug_assert!(trace <= rat(2) * &cosh_d);
    Ok(CommutatorCertificate {
        hyperbolic: trace > rat(2),
        trace,
        cosh_d,
    })
}

/// cosh 2R as the least cosh-distance from the fixed point to a sample of
/// its orbit; copies of the fixed point itself are ignored.
pub fn cone_radius(fixed: &UHPPoint, sample: &[UHPPoint]) -> Result<Rational, HypError> {
    sample
        .iter()
        .filter(|p| *p != fixed)
        .map(|p| hyperbolic_distance_cosh(fixed, p))
        .min()
        .ok_or(HypError::EmptyList)
}

/// (cos θ, sin θ) = ((1 − u²)/(1 + u²), 2u/(1 + u²)).
pub fn pythagorean(u: &Rational) -> (Rational, Rational) {
    let den = rat(1) + u * u;
    ((rat(1) - u * u) / &den, rat(2) * u / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn action_examples() {
        assert_eq!(act(&UHPPoint::i(), &Moebius::w()), UHPPoint::i());
        let z = UHPPoint::new(rat(0), rat(2)).unwrap();
        assert_eq!(act(&z, &Moebius::identity()), z);
        assert_eq!(act(&z, &Moebius::h(&rat(1))), UHPPoint::new(q(4, 5), q(2, 5)).unwrap());
        assert_eq!(act(&z, &Moebius::h_tilde(&rat(3))), UHPPoint::new(rat(3), rat(2)).unwrap());
    }

    #[test]
    fn distances() {
        let t = rat(1);
        let a = UHPPoint::new(t.clone(), rat(1)).unwrap();
        let b = UHPPoint::new(-t, rat(1)).unwrap();
        assert_eq!(hyperbolic_distance_cosh(&a, &b), rat(3));
        assert_eq!(hyperbolic_distance_cosh(&a, &a), rat(1));
        let c = UHPPoint::new(rat(1), rat(1)).unwrap();
        assert_eq!(hyperbolic_distance_cosh(&UHPPoint::i(), &c), q(3, 2));
    }

    #[test]
    fn tangency_and_witness() {
        assert_eq!(horoball_tangency(&Moebius::w()), Tangency::At(rat(1)));
        assert_eq!(horoball_tangency(&Moebius::h(&rat(5))), Tangency::Unbounded);
        assert_eq!(cusp_witness(&rat(1), &rat(0)).unwrap(), Moebius::from_ints(1, 0, -1, 1).unwrap());
        let g = cusp_witness(&rat(2), &rat(1)).unwrap();
        assert_eq!(g.trace(), rat(2));
        assert_eq!(g, Moebius::h_tilde(&rat(-4)).conjugate_by(&Moebius::h(&rat(1))));
        assert!(cusp_witness(&rat(0), &rat(0)).is_err());
    }

    #[test]
    fn single_element_bound_is_uncertified() {
        let r = cusp_area(&[Moebius::w()], None, &Certificate::None).unwrap();
        assert_eq!((r.t0_upper, r.certified), (rat(1), false));
        assert_eq!(cusp_area(&[], None, &Certificate::None), Err(HypError::EmptyList));
        assert_eq!(cusp_area(&[Moebius::h(&rat(1))], None, &Certificate::None), Err(HypError::EmptyList));
    }

    #[test]
    fn commutator_examples() {
        let c = commutator_certificate(&rat(1), &rat(0), &rat(1)).unwrap();
        assert_eq!((c.trace, c.cosh_d, c.hyperbolic), (rat(6), rat(3), true));
        let c = commutator_certificate(&q(3, 7), &rat(1), &rat(0)).unwrap();
        assert_eq!((c.trace, c.hyperbolic), (rat(2), false));
        let (co, si) = pythagorean(&q(1, 2));
        assert_eq!(commutator_certificate(&rat(0), &co, &si).unwrap().trace, rat(2));
        assert_eq!(commutator_certificate(&rat(1), &rat(1), &rat(1)), Err(HypError::NotOnUnitCircle));
    }

    #[test]
    fn cone_examples() {
        let i = UHPPoint::i();
        let s = UHPPoint::new(rat(1), rat(1)).unwrap();
        assert_eq!(cone_radius(&i, &[s.clone()]).unwrap(), q(3, 2));
        assert!((1.5f64.acosh() / 2.0 - 0.4812).abs() < 1e-4);
        assert_eq!(cone_radius(&i, &[act(&i, &Moebius::w())]), Err(HypError::EmptyList));
    }

    #[test]
    fn json_round_trip() {
        let g = Moebius::new(q(2, 3), rat(1), q(-1, 3), rat(1)).unwrap();
        assert_eq!(Moebius::from_json(&g.to_json()).unwrap(), g);
        assert!(Moebius::from_json(&json!([[1, 1], [1, 1]])).is_err());
        let z = UHPPoint::new(q(1, 2), rat(3)).unwrap();
        assert_eq!(UHPPoint::from_json(&z.to_json()).unwrap(), z);
    }
}
