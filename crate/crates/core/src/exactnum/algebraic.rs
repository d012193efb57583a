use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use super::poly::{rat, IntPoly, Rational};
use super::ExactError;

/// A real algebraic number: an irreducible primitive integer polynomial
/// together with a rational interval containing exactly one of its roots.
///
/// For rational values (degree one) the interval is the single point.
/// Otherwise both endpoints are non-roots with opposite signs.
#[derive(Clone, Debug)]
pub struct AlgebraicReal {
    minpoly: IntPoly,
    lo: Rational,
    hi: Rational,
}

impl AlgebraicReal {
    pub fn from_rational(q: Rational) -> Self {
        let minpoly = IntPoly::new(vec![-q.numer().clone(), q.denom().clone()]).primitive();
        AlgebraicReal {
            minpoly,
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    /// Builds from an irreducible polynomial and an interval that isolates one
    /// of its roots. The polynomial is made primitive.
    pub fn new(minpoly: IntPoly, lo: Rational, hi: Rational) -> Result<Self, ExactError> {
        let minpoly = minpoly.primitive();
        let deg = minpoly.degree().unwrap_or(0);
        if deg == 0 {
            return Err(ExactError::InvalidPolynomial("constant polynomial has no roots".into()));
        }
        if lo > hi {
            return Err(ExactError::InvalidInterval);
        }
        if minpoly.irreducible_factors() != vec![minpoly.clone()] {
            return Err(ExactError::InvalidPolynomial(format!("{minpoly} is not irreducible")));
        }
        if deg == 1 {
            let c = &minpoly.coeffs()[0];
            let l = &minpoly.coeffs()[1];
            let q = Rational::new(-c.clone(), l.clone());
            if q < lo || q > hi {
                return Err(ExactError::InvalidInterval);
            }
            return Ok(Self::from_rational(q));
        }
        let sl = minpoly.sign_at(&lo);
        let sh = minpoly.sign_at(&hi);
        if sl == 0 || sh == 0 || sl == sh {
            return Err(ExactError::InvalidInterval);
        }
        if minpoly.count_roots(&lo, &hi) != 1 {
            return Err(ExactError::InvalidInterval);
        }
        Ok(AlgebraicReal { minpoly, lo, hi })
    }

    /// All distinct real roots of `p`, ascending.
    pub fn real_roots(p: &IntPoly) -> Vec<AlgebraicReal> {
        let mut out: Vec<AlgebraicReal> = p
            .irreducible_factors()
            .into_iter()
            .flat_map(|f| {
                f.isolate_real_roots()
                    .into_iter()
                    .map(move |(lo, hi)| trusted(f.clone(), lo, hi))
            })
            .collect();
        out.sort_by(|a, b| a.cmp(b));
        out
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(1)
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        (self.degree() == 1).then_some(&self.lo)
    }

    fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    fn bisect(&mut self) {
        if self.is_point() {
            return;
        }
        let mid = (&self.lo + &self.hi) / rat(2);
        // Irreducible of degree ≥ 2 has no rational roots.
        if self.minpoly.sign_at(&mid) == self.minpoly.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    /// Returns a sub-interval of width at most `eps` containing the root.
    pub fn refine(&self, eps: &Rational) -> (Rational, Rational) {
        let r = self.refined(eps);
        (r.lo, r.hi)
    }

    pub fn refined(&self, eps: &Rational) -> AlgebraicReal {
        assert!(eps.is_positive(), "refinement width must be positive");
        let mut r = self.clone();
        while &(&r.hi - &r.lo) > eps {
            r.bisect();
        }
        r
    }

    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        if let Some(v) = self.as_rational() {
            return v.cmp(q);
        }
        let mut r = self.clone();
        loop {
            if &r.hi < q {
                return Ordering::Less;
            }
            if &r.lo > q {
                return Ordering::Greater;
            }
            r.bisect();
        }
    }

    pub fn sign(&self) -> i8 {
        match self.cmp_rational(&Rational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let r = self.refined(&Rational::new(1.into(), num_bigint::BigInt::from(1u64) << 60));
        ((&r.lo + &r.hi) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }
}

pub(crate) fn trusted(minpoly: IntPoly, lo: Rational, hi: Rational) -> AlgebraicReal {
    AlgebraicReal { minpoly, lo, hi }
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for AlgebraicReal {}

impl PartialOrd for AlgebraicReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for AlgebraicReal {
    fn cmp(&self, other: &Self) -> Ordering {
        if let Some(q) = other.as_rational() {
            return self.cmp_rational(q);
        }
        if let Some(q) = self.as_rational() {
            return other.cmp_rational(q).reverse();
        }
        let same = self.minpoly == other.minpoly;
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            if a.hi < b.lo {
                return Ordering::Less;
            }
            if b.hi < a.lo {
                return Ordering::Greater;
            }
            if same {
                let lo = a.lo.clone().max(b.lo.clone());
                let hi = a.hi.clone().min(b.hi.clone());
                // Overlap contains a root of the shared polynomial iff both
                // designate that same root (each interval isolates one root).
                if a.minpoly.sign_at(&lo) * a.minpoly.sign_at(&hi) < 0 {
                    return Ordering::Equal;
                }
            }
            if a.hi.clone() - &a.lo >= b.hi.clone() - &b.lo {
                a.bisect();
            } else {
                b.bisect();
            }
        }
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "root of {} in [{}, {}] (~{:.12})", self.minpoly, self.lo, self.hi, self.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn refine_rational_root() {
        let two = AlgebraicReal::from_int(2);
        let (lo, hi) = two.refine(&rat(1));
        assert!(lo <= rat(2) && rat(2) <= hi && &hi - &lo <= rat(1));
    }

    #[test]
    fn refine_quadratic() {
        let roots = AlgebraicReal::real_roots(&IntPoly::from_i64(&[1, -3, 1]));
        let (lo, hi) = roots[1].refine(&q(1, 1_000_000));
        assert!(lo >= q(2_618_033, 1_000_000) && hi <= q(2_618_035, 1_000_000));
        let phi = &AlgebraicReal::real_roots(&IntPoly::from_i64(&[-1, -1, 1]))[1];
        let (lo, hi) = phi.refine(&q(1, 1000));
        assert!(&hi - &lo <= q(1, 1000) && lo >= q(1617, 1000) && hi <= q(1620, 1000));
        let (lo, hi) = phi.refine(&q(1, 100_000));
        assert!(lo >= q(16180, 10000) && hi <= q(16181, 10000));
    }

    #[test]
    fn comparisons() {
        let sqrt2 = AlgebraicReal::real_roots(&IntPoly::from_i64(&[-2, 0, 1]))[1].clone();
        let sqrt3 = AlgebraicReal::real_roots(&IntPoly::from_i64(&[-3, 0, 1]))[1].clone();
        assert!(sqrt2 < sqrt3);
        assert_eq!(sqrt2.cmp_rational(&q(141, 100)), Ordering::Greater);
        let other = AlgebraicReal::new(IntPoly::from_i64(&[-2, 0, 1]), q(1, 1), q(3, 2)).unwrap();
        assert_eq!(sqrt2, other);
        assert!(AlgebraicReal::new(IntPoly::from_i64(&[-2, 0, 1]), q(-2, 1), q(2, 1)).is_err());
    }
}
