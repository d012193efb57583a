use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::algebraic::AlgebraicReal;
use super::poly::{rat, sign_of, IntPoly, RatPoly, Rational};
use super::ExactError;

/// ℚ(α) for a real algebraic α. The generator's isolating interval is
/// refined lazily and shared by every element of the field.
#[derive(Debug)]
pub struct NumberField {
    generator: AlgebraicReal,
    modulus: RatPoly,
    cache: RwLock<(Rational, Rational)>,
}

impl NumberField {
    pub fn new(generator: AlgebraicReal) -> Arc<Self> {
        let modulus = generator.minpoly().to_rat().monic();
        let (lo, hi) = generator.interval();
        let cache = RwLock::new((lo.clone(), hi.clone()));
        Arc::new(NumberField {
            generator,
            modulus,
            cache,
        })
    }

    /// The field ℚ, presented as ℚ(0).
    pub fn rationals() -> Arc<Self> {
        Self::new(AlgebraicReal::from_int(0))
    }

    pub fn generator(&self) -> &AlgebraicReal {
        &self.generator
    }

    pub fn minpoly(&self) -> &IntPoly {
        self.generator.minpoly()
    }

    pub fn degree(&self) -> usize {
        self.generator.degree()
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        // Every degree-one field is ℚ with elements stored as constants.
        Arc::ptr_eq(self, other)
            || self.degree() == 1 && other.degree() == 1
            || self.minpoly() == other.minpoly() && self.generator == other.generator
    }

    fn reduce(&self, p: RatPoly) -> Vec<Rational> {
        let (_, r) = p.divrem(&self.modulus);
        let mut c = r.into_coeffs();
        c.resize(self.degree(), Rational::zero());
        c
    }

    /// (p, q) for the monic modulus x² + px + q.
    fn quadratic(&self) -> (&Rational, &Rational) {
        let c = self.modulus.coeffs();
        (&c[1], &c[0])
    }

    fn interval(&self) -> (Rational, Rational) {
        self.cache.read().expect("field cache poisoned").clone()
    }

    fn tighten(&self, seen_width: &Rational) {
        let mut g = self.cache.write().expect("field cache poisoned");
        if &(&g.1 - &g.0) < seen_width {
            return;
        }
        if g.0 == g.1 {
            return;
        }
        let p = self.generator.minpoly();
        let mid = (&g.0 + &g.1) / rat(2);
        if p.sign_at(&mid) == p.sign_at(&g.0) {
            g.0 = mid;
        } else {
            g.1 = mid;
        }
    }

    /// Current enclosure of α with width at most `eps`.
    pub fn enclosure(&self, eps: &Rational) -> (Rational, Rational) {
        loop {
            let (lo, hi) = self.interval();
            let w = &hi - &lo;
            if &w <= eps {
                return (lo, hi);
            }
            self.tighten(&w);
        }
    }
}

/// An element Σ cᵢ αⁱ of a number field, stored reduced.
#[derive(Clone)]
pub struct NFElement {
    field: Arc<NumberField>,
    coeffs: Vec<Rational>,
}

impl NFElement {
    pub fn from_coeffs(field: &Arc<NumberField>, coeffs: Vec<Rational>) -> Self {
        let coeffs = field.reduce(RatPoly::new(coeffs));
        NFElement {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: Rational) -> Self {
        Self::from_coeffs(field, vec![q])
    }

    pub fn from_int(field: &Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, rat(n))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_coeffs(field, vec![])
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_coeffs(field, vec![Rational::zero(), Rational::one()])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs
            .iter()
            .skip(1)
            .all(Zero::is_zero)
            .then(|| self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
    }

    fn poly(&self) -> RatPoly {
        RatPoly::new(self.coeffs.clone())
    }

    fn check(&self, o: &NFElement) -> Result<(), ExactError> {
        if self.field.same_as(&o.field) {
            Ok(())
        } else {
            Err(ExactError::FieldMismatch)
        }
    }

    pub fn checked_add(&self, o: &NFElement) -> Result<NFElement, ExactError> {
        self.check(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Ok(NFElement {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_sub(&self, o: &NFElement) -> Result<NFElement, ExactError> {
        self.check(o)?;
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        Ok(NFElement {
            field: self.field.clone(),
            coeffs,
        })
    }

    pub fn checked_mul(&self, o: &NFElement) -> Result<NFElement, ExactError> {
        self.check(o)?;
        if self.field.degree() == 1 {
            return Ok(NFElement {
                field: self.field.clone(),
                coeffs: vec![&self.coeffs[0] * &o.coeffs[0]],
            });
        }
        if self.field.degree() == 2 {
            // α² = −pα − q
            let (p, q) = self.field.quadratic();
            let (a, b) = (&self.coeffs[0], &self.coeffs[1]);
            let (c, d) = (&o.coeffs[0], &o.coeffs[1]);
            let bd = b * d;
            let c0 = a * c - &bd * q;
            let c1 = a * d + b * c - bd * p;
            return Ok(NFElement {
                field: self.field.clone(),
                coeffs: vec![c0, c1],
            });
        }
        Ok(NFElement {
            field: self.field.clone(),
            coeffs: self.field.reduce(self.poly().mul(&o.poly())),
        })
    }

    pub fn inverse(&self) -> Result<NFElement, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        if self.field.degree() == 1 {
            return Ok(NFElement {
                field: self.field.clone(),
                coeffs: vec![self.coeffs[0].recip()],
            });
        }
        if self.field.degree() == 2 {
            // (a + bα)(a − bp − bα) = a² − abp + b²q
            let (p, q) = self.field.quadratic();
            let (a, b) = (&self.coeffs[0], &self.coeffs[1]);
            let conj0 = a - b * p;
            let n = a * &conj0 + b * b * q;
            return Ok(NFElement {
                field: self.field.clone(),
                coeffs: vec![conj0 / &n, -b / n],
            });
        }
        let (g, s, _) = self.poly().ext_gcd(&self.field.modulus);
        debug_assert_eq!(g.degree(), Some(0));
        Ok(NFElement {
            field: self.field.clone(),
            coeffs: self.field.reduce(s),
        })
    }

    pub fn checked_div(&self, o: &NFElement) -> Result<NFElement, ExactError> {
        self.check(o)?;
        self.checked_mul(&o.inverse()?)
    }

    pub fn scale(&self, q: &Rational) -> NFElement {
        NFElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> NFElement {
        let mut acc = NFElement::one(&self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Interval enclosure of the value when α ranges over [lo, hi].
    fn enclose(&self, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
        let mut a = Rational::zero();
        let mut b = Rational::zero();
        for c in self.coeffs.iter().rev() {
            let cands = [&a * lo, &a * hi, &b * lo, &b * hi];
            let mn = cands.iter().min().unwrap().clone();
            let mx = cands.iter().max().unwrap().clone();
            a = mn + c;
            b = mx + c;
        }
        (a, b)
    }

    pub fn sign(&self) -> i8 {
        if self.is_zero() {
            return 0;
        }
        if let Some(q) = self.as_rational() {
            return sign_of(&q);
        }
        let (mut lo, mut hi) = self.field.interval();
        loop {
            let (a, b) = self.enclose(&lo, &hi);
            if a.is_positive() {
                return 1;
            }
            if b.is_negative() {
                return -1;
            }
            self.field.tighten(&(&hi - &lo));
            (lo, hi) = self.field.interval();
        }
    }

    /// Enclosure of the value with width at most `eps`.
    pub fn approx(&self, eps: &Rational) -> (Rational, Rational) {
        let mut w = eps.clone();
        loop {
            let (lo, hi) = self.field.enclosure(&w);
            let (a, b) = self.enclose(&lo, &hi);
            if &(&b - &a) <= eps {
                return (a, b);
            }
            w = w / rat(4);
        }
    }

    pub fn to_f64(&self) -> f64 {
        let eps = Rational::new(BigInt::one(), BigInt::one() << 60);
        let (a, b) = self.approx(&eps);
        ((a + b) / rat(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn abs(&self) -> NFElement {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn max(self, o: NFElement) -> NFElement {
        if o > self {
            o
        } else {
            self
        }
    }

    pub fn min(self, o: NFElement) -> NFElement {
        if o < self {
            o
        } else {
            self
        }
    }
}

impl fmt::Debug for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NFElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})a"),
                _ => format!("({c})a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl PartialEq for NFElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for NFElement {}

impl PartialOrd for NFElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NFElement {
    /// Panics when the fields differ.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&NFElement> for &NFElement {
            type Output = NFElement;
            fn $m(self, o: &NFElement) -> NFElement {
                self.$checked(o).expect("number field mismatch")
            }
        }
        impl $tr<NFElement> for NFElement {
            type Output = NFElement;
            fn $m(self, o: NFElement) -> NFElement {
                (&self).$checked(&o).expect("number field mismatch")
            }
        }
        impl $tr<&NFElement> for NFElement {
            type Output = NFElement;
            fn $m(self, o: &NFElement) -> NFElement {
                (&self).$checked(o).expect("number field mismatch")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for &NFElement {
    type Output = NFElement;
    fn neg(self) -> NFElement {
        NFElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for NFElement {
    type Output = NFElement;
    fn neg(self) -> NFElement {
        -&self
    }
}
