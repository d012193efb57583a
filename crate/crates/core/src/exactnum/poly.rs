//! Dense univariate polynomials over the integers and the rationals.
//!
//! Coefficients are stored in ascending order of degree with no trailing
//! zeros, so the zero polynomial is the empty vector.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// The integer `n` as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.0.last()
    }

    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        IntPoly(self.0.iter().map(|c| c / &g).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + Rational::from_integer(c.clone());
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign_of(&self.eval(x))
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::new(self.0.iter().cloned().map(Rational::from_integer).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Squarefree part, primitive.
    pub fn squarefree(&self) -> IntPoly {
        let p = self.to_rat();
        let g = p.gcd(&p.derivative());
        let (q, _) = p.divrem(&g);
        q.to_primitive_int()
    }

    /// Irreducible factors over ℤ (primitive, positive leading coefficient),
    /// without multiplicity, sorted.
    pub fn irreducible_factors(&self) -> Vec<IntPoly> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let poly = algebraics::polynomial::Polynomial::<BigInt>::from(self.0.clone());
        let mut out: Vec<IntPoly> = poly
            .factor()
            .polynomial_factors
            .into_iter()
            .map(|f| IntPoly::new(f.polynomial.into_coefficients()).primitive())
            .filter(|f| f.degree().unwrap_or(0) > 0)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Number of distinct real roots in the half-open interval (a, b].
    pub fn count_roots(&self, a: &Rational, b: &Rational) -> usize {
        sturm_count(&sturm_sequence(&self.to_rat()), a, b)
    }

    /// Strict upper bound on the absolute value of every complex root.
    pub fn root_bound(&self) -> Rational {
        let lead = Rational::from_integer(self.leading().expect("nonzero").abs());
        let mut m = Rational::zero();
        for c in &self.0[..self.0.len() - 1] {
            let r = Rational::from_integer(c.abs()) / &lead;
            if r > m {
                m = r;
            }
        }
        m + Rational::one()
    }

    /// Isolating intervals for every distinct real root, ascending. Either
    /// `lo == hi` is the root, or the endpoints carry opposite nonzero signs.
    /// Rational roots are returned as points only for linear input; factor
    /// first to get that for every rational root.
    pub fn isolate_real_roots(&self) -> Vec<(Rational, Rational)> {
        let sf = self.squarefree();
        match sf.degree().unwrap_or(0) {
            0 => return vec![],
            1 => {
                let r = Rational::new(-sf.0[0].clone(), sf.0[1].clone());
                return vec![(r.clone(), r)];
            }
            _ => {}
        }
        let seq = sturm_sequence(&sf.to_rat());
        let b = sf.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = sturm_count(&seq, &lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                out.push(tighten_exact(&sf, lo, hi));
                continue;
            }
            let mid = (&lo + &hi) / rat(2);
            stack.push((mid.clone(), hi));
            stack.push((lo, mid));
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }
}

/// Given (lo, hi] containing exactly one root of the squarefree `p`, returns
/// either a degenerate interval for a rational root at an endpoint or an
/// interval whose endpoints have opposite nonzero signs.
fn tighten_exact(p: &IntPoly, lo: Rational, hi: Rational) -> (Rational, Rational) {
    if p.sign_at(&hi) == 0 {
        return (hi.clone(), hi);
    }
    // lo itself is not in (lo, hi]; a root at lo would belong to the left interval.
    let mut lo = lo;
    let mut hi = hi;
    loop {
        let sl = p.sign_at(&lo);
        if sl != 0 {
            return (lo, hi);
        }
        let mid = (&lo + &hi) / rat(2);
        match p.sign_at(&mid) {
            0 => return (mid.clone(), mid),
            s if s == p.sign_at(&hi) => hi = mid,
            _ => lo = mid,
        }
    }
}

pub(crate) fn sign_of(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

fn sturm_sequence(p: &RatPoly) -> Vec<RatPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].divrem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg());
    }
    seq
}

fn sign_changes(seq: &[RatPoly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| sign_of(&p.eval(x)))
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

fn sturm_count(seq: &[RatPoly], a: &Rational, b: &Rational) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !(a.is_one() && i > 0);
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatPoly(Vec<Rational>);

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn neg(&self) -> RatPoly {
        RatPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn add(&self, o: &RatPoly) -> RatPoly {
        let n = self.0.len().max(o.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut c = Rational::zero();
            if let Some(a) = self.0.get(i) {
                c += a;
            }
            if let Some(b) = o.0.get(i) {
                c += b;
            }
            out.push(c);
        }
        RatPoly::new(out)
    }

    pub fn sub(&self, o: &RatPoly) -> RatPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly(vec![]);
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }

    pub fn derivative(&self) -> RatPoly {
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as i64))
                .collect(),
        )
    }

    pub fn divrem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.0[dd].clone();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (RatPoly(vec![]), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] / &lead;
            if !c.is_zero() {
                for (j, dj) in d.0.iter().enumerate() {
                    r[k + j] -= &c * dj;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (RatPoly::new(q), RatPoly::new(r))
    }

    pub fn monic(&self) -> RatPoly {
        match self.0.last() {
            None => self.clone(),
            Some(l) => RatPoly(self.0.iter().map(|c| c / l).collect()),
        }
    }

    pub fn gcd(&self, o: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns (g, s, t) with s·self + t·o = g and g monic.
    pub fn ext_gcd(&self, o: &RatPoly) -> (RatPoly, RatPoly, RatPoly) {
        let one = RatPoly(vec![Rational::one()]);
        let zero = RatPoly(vec![]);
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (one.clone(), zero.clone());
        let (mut t0, mut t1) = (zero, one);
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        let l = r0.0.last().cloned().unwrap_or_else(Rational::one);
        let scale = |p: &RatPoly| RatPoly(p.0.iter().map(|c| c / &l).collect());
        (scale(&r0), scale(&s0), scale(&t0))
    }

    /// Clears denominators and content.
    pub fn to_primitive_int(&self) -> IntPoly {
        let den = self
            .0
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        IntPoly::new(self.0.iter().map(|c| (c * &den).to_integer()).collect()).primitive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_of_char_poly() {
        // (x - 2)(x^2 - 3x + 1) = x^3 - 5x^2 + 7x - 2
        let p = IntPoly::from_i64(&[-2, 7, -5, 1]);
        let f = p.irreducible_factors();
        assert_eq!(f, vec![IntPoly::from_i64(&[-2, 1]), IntPoly::from_i64(&[1, -3, 1])]);
    }

    #[test]
    fn squarefree_drops_repeated_factor() {
        // (x - 1)^2 (x + 1)
        let p = IntPoly::from_i64(&[1, -1, -1, 1]);
        assert_eq!(p.squarefree(), IntPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn isolation_counts_roots() {
        let p = IntPoly::from_i64(&[1, -3, 1]);
        let roots = p.isolate_real_roots();
        assert_eq!(roots.len(), 2);
        for (lo, hi) in roots {
            assert!(p.sign_at(&lo) * p.sign_at(&hi) < 0);
        }
        let q = IntPoly::from_i64(&[-2, 1]);
        assert_eq!(q.isolate_real_roots(), vec![(rat(2), rat(2))]);
    }

    #[test]
    fn ext_gcd_inverts_mod_golden() {
        let m = IntPoly::from_i64(&[-1, -1, 1]).to_rat();
        let x = RatPoly::new(vec![rat(0), rat(1)]);
        let (g, s, _) = x.ext_gcd(&m);
        assert_eq!(g, RatPoly::new(vec![rat(1)]));
        let (_, r) = s.divrem(&m);
        // 1/α = α − 1
        assert_eq!(r, RatPoly::new(vec![rat(-1), rat(1)]));
    }

    #[test]
    fn display() {
        assert_eq!(IntPoly::from_i64(&[1, -3, 1]).to_string(), "x^2 - 3x + 1");
        assert_eq!(IntPoly::from_i64(&[-2, 1]).to_string(), "x - 2");
    }
}
