//! Perron–Frobenius data of non-negative integer matrices, computed exactly.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::exactnum::json::{int_from_json, schema, JsonError};
use crate::exactnum::{AlgebraicReal, IntPoly, NFElement, NumberField, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PfError {
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("vector must be strictly positive")]
    NonPositiveVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must be square and non-empty")]
    NotSquare,
}

/// A square matrix of non-negative integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonNegIntMatrix {
    dim: usize,
    entries: Vec<u64>,
}

impl NonNegIntMatrix {
    pub fn new(dim: usize, entries: Vec<u64>) -> Result<Self, PfError> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(PfError::NotSquare);
        }
        Ok(NonNegIntMatrix { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self, PfError> {
        let d = rows.len();
        if rows.iter().any(|r| r.len() != d) {
            return Err(PfError::NotSquare);
        }
        Self::new(d, rows.concat())
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = NonNegIntMatrix {
            dim,
            entries: vec![0; dim * dim],
        };
        for i in 0..dim {
            m.entries[i * dim + i] = 1;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim).map(<[u64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut t = self.clone();
        for i in 0..d {
            for j in 0..d {
                t.entries[j * d + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.entries.chunks(self.dim).map(|r| r.iter().sum()).collect()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.dim;
        let mut out = vec![0u64; d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..d {
                    out[i * d + j] += a * o.get(k, j);
                }
            }
        }
        NonNegIntMatrix { dim: d, entries: out }
    }

    /// `diag(n) · A`.
    pub fn scale_rows(&self, n: &[u64]) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.entries[i * self.dim + j] *= n[i];
            }
        }
        m
    }

    /// Conjugation by a permutation: entry (π(i), π(j)) of the result is a_ij.
    pub fn permuted(&self, pi: &[usize]) -> Self {
        let d = self.dim;
        let mut m = self.clone();
        for i in 0..d {
            for j in 0..d {
                m.entries[pi[i] * d + pi[j]] = self.get(i, j);
            }
        }
        m
    }

    fn reach(&self, start: usize, transpose: bool) -> Vec<bool> {
        let mut seen = vec![false; self.dim];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            for j in 0..self.dim {
                let e = if transpose { self.get(j, i) } else { self.get(i, j) };
                if e > 0 && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// Strong connectivity of the digraph i → j when a_ij > 0; `[0]` is not
    /// irreducible.
    pub fn is_irreducible(&self) -> bool {
        if self.dim == 1 {
            return self.entries[0] > 0;
        }
        self.reach(0, false).iter().all(|&b| b) && self.reach(0, true).iter().all(|&b| b)
    }

    /// Some power of A is strictly positive.
    pub fn is_primitive(&self) -> bool {
        if !self.is_irreducible() {
            return false;
        }
        let d = self.dim;
        let boolean = |m: &NonNegIntMatrix| NonNegIntMatrix {
            dim: d,
            entries: m.entries.iter().map(|&x| u64::from(x > 0)).collect(),
        };
        let a = boolean(self);
        let mut p = a.clone();
        // Wielandt: primitive iff A^((d-1)^2+1) > 0.
        for _ in 1..(d - 1) * (d - 1) + 1 {
            p = boolean(&p.mul(&a));
        }
        p.entries.iter().all(|&x| x > 0)
    }

    /// det(xI − A), by Faddeev–LeVerrier over ℤ.
    pub fn char_poly(&self) -> IntPoly {
        let d = self.dim;
        let a: Vec<BigInt> = self.entries.iter().map(|&x| BigInt::from(x)).collect();
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        let mut m = vec![BigInt::zero(); d * d];
        for k in 1..=d {
            // M_k = A M_{k-1} + c_{d-k+1} I
            let mut next = vec![BigInt::zero(); d * d];
            for i in 0..d {
                for l in 0..d {
                    let ail = &a[i * d + l];
                    if ail.is_zero() {
                        continue;
                    }
                    for j in 0..d {
                        next[i * d + j] += ail * &m[l * d + j];
                    }
                }
                next[i * d + i] += &coeffs[d - k + 1];
            }
            m = next;
            let mut tr = BigInt::zero();
            for i in 0..d {
                for l in 0..d {
                    tr += &a[i * d + l] * &m[l * d + i];
                }
            }
            coeffs[d - k] = -tr / BigInt::from(k);
        }
        IntPoly::new(coeffs)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.rows().into_iter().map(|r| Value::from(r)).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let rows = v.as_array().ok_or_else(|| schema("$", "expected an array of rows"))?;
        let d = rows.len();
        if d == 0 || d > 64 {
            return Err(schema("$", "matrix dimension must be between 1 and 64"));
        }
        let mut entries = Vec::with_capacity(d * d);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_array().ok_or_else(|| schema(&format!("$[{i}]"), "expected a row"))?;
            if r.len() != d {
                return Err(schema(&format!("$[{i}]"), format!("expected {d} entries")));
            }
            for (j, x) in r.iter().enumerate() {
                let p = format!("$[{i}][{j}]");
                let n = int_from_json(x, &p)?;
                let n: u64 = n.try_into().map_err(|_| schema(&p, "entries must be non-negative and fit in 64 bits"))?;
                entries.push(n);
            }
        }
        Ok(NonNegIntMatrix { dim: d, entries })
    }
}

impl fmt::Debug for NonNegIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl fmt::Display for NonNegIntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

/// The largest real root of the characteristic polynomial.
pub fn perron_root(a: &NonNegIntMatrix) -> Result<AlgebraicReal, PfError> {
    if !a.is_irreducible() {
        return Err(PfError::NotIrreducible);
    }
    Ok(AlgebraicReal::real_roots(&a.char_poly())
        .into_iter()
        .next_back()
        .expect("irreducible matrix has a positive eigenvalue"))
}

/// Perron root, and the Perron vector over ℚ(λ) with largest coordinate 1.
pub fn perron_pair(a: &NonNegIntMatrix) -> Result<(Arc<NumberField>, Vec<NFElement>), PfError> {
    let lambda = perron_root(a)?;
    let k = NumberField::new(lambda);
    let v = eigenvector(a, &k, false);
    Ok((k, v))
}

pub fn perron_vector(a: &NonNegIntMatrix) -> Result<Vec<NFElement>, PfError> {
    Ok(perron_pair(a)?.1)
}

/// Positive eigenvector of A (or Aᵗ) for the generator of `k`, which must be
/// the Perron root. Normalized so the largest coordinate is 1.
pub fn eigenvector(a: &NonNegIntMatrix, k: &Arc<NumberField>, transpose: bool) -> Vec<NFElement> {
    let d = a.dim();
    let lam = NFElement::generator(k);
    let mut m: Vec<Vec<NFElement>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let e = if transpose { a.get(j, i) } else { a.get(i, j) };
                    let x = NFElement::from_int(k, e as i64);
                    if i == j {
                        x - &lam
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect();
    let v = nullvector(&mut m, k);
    let mx = v.iter().cloned().reduce(NFElement::max).unwrap();
    let v: Vec<NFElement> = v.iter().map(|x| x.checked_div(&mx).unwrap()).collect();
    assert!(v.iter().all(|x| x.sign() > 0), "Perron vector not positive");
    v
}

/// A nonzero solution of M x = 0 when M has nullity one.
pub(crate) fn nullvector(m: &mut [Vec<NFElement>], k: &Arc<NumberField>) -> Vec<NFElement> {
    let rows = m.len();
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().unwrap();
        for j in c..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).expect("matrix has trivial kernel");
    let mut x = vec![NFElement::zero(k); cols];
    x[free] = NFElement::one(k);
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = -&m[row][free];
    }
    x
}

/// min and max of (Av)ᵢ/vᵢ.
pub fn collatz_wielandt_bounds(a: &NonNegIntMatrix, v: &[Rational]) -> Result<(Rational, Rational), PfError> {
    if !a.is_irreducible() {
        return Err(PfError::NotIrreducible);
    }
    if v.len() != a.dim() {
        return Err(PfError::DimensionMismatch {
            expected: a.dim(),
            got: v.len(),
        });
    }
    if v.iter().any(|x| !x.is_positive()) {
        return Err(PfError::NonPositiveVector);
    }
    let ratios: Vec<Rational> = (0..a.dim())
        .map(|i| {
            let s: Rational = (0..a.dim()).map(|j| &v[j] * Rational::from_integer(a.get(i, j).into())).sum();
            s / &v[i]
        })
        .collect();
    let lo = ratios.iter().min().unwrap().clone();
    let hi = ratios.iter().max().unwrap().clone();
    Ok((lo, hi))
}

/// ρ(A) < t for any non-negative A and t > 0: equivalent to tI − A being a
/// nonsingular M-matrix, i.e. all leading principal minors positive.
pub fn spectral_radius_below(a: &NonNegIntMatrix, t: &Rational) -> bool {
    if !t.is_positive() {
        return false;
    }
    let d = a.dim();
    if let (Some(p), Some(q)) = (t.numer().to_i128(), t.denom().to_i128()) {
        let small: Option<Vec<Vec<i128>>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let e = q.checked_mul(i128::from(a.get(i, j)))?.checked_neg()?;
                        if i == j {
                            e.checked_add(p)
                        } else {
                            Some(e)
                        }
                    })
                    .collect()
            })
            .collect();
        if let Some(mut m) = small {
            if let Some(r) = leading_minors_positive_i128(&mut m) {
                return r;
            }
        }
    }
    let p = t.numer();
    let q = t.denom();
    let mut m: Vec<Vec<BigInt>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    let e = -(q * BigInt::from(a.get(i, j)));
                    if i == j {
                        e + p
                    } else {
                        e
                    }
                })
                .collect()
        })
        .collect();
    leading_minors_positive(&mut m)
}

/// As [`leading_minors_positive`]; `None` on overflow.
fn leading_minors_positive_i128(m: &mut [Vec<i128>]) -> Option<bool> {
    let d = m.len();
    let mut prev = 1i128;
    for k in 0..d {
        if m[k][k] <= 0 {
            return Some(false);
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let x = m[k][k].checked_mul(m[i][j])?;
                let y = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = x.checked_sub(y)? / prev;
            }
        }
        prev = m[k][k];
    }
    Some(true)
}

/// Bareiss elimination without pivoting; the k-th pivot is the k-th leading
/// principal minor.
pub(crate) fn leading_minors_positive(m: &mut [Vec<BigInt>]) -> bool {
    let d = m.len();
    let mut prev = BigInt::one();
    for k in 0..d {
        if !m[k][k].is_positive() {
            return false;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn m(rows: &[&[u64]]) -> NonNegIntMatrix {
        NonNegIntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn irreducibility() {
        assert!(m(&[&[0, 2], &[3, 0]]).is_irreducible());
        assert!(!m(&[&[0, 2], &[3, 0]]).is_primitive());
        assert!(!m(&[&[1, 1], &[0, 1]]).is_irreducible());
        assert!(!m(&[&[0]]).is_irreducible());
        assert!(m(&[&[2, 1], &[1, 1]]).is_primitive());
    }

    #[test]
    fn roots() {
        let r = perron_root(&m(&[&[1, 1], &[1, 1]])).unwrap();
        assert_eq!(r.minpoly(), &IntPoly::from_i64(&[-2, 1]));
        let r = perron_root(&m(&[&[2, 1], &[1, 1]])).unwrap();
        assert_eq!(r.minpoly(), &IntPoly::from_i64(&[1, -3, 1]));
        assert_eq!(perron_root(&m(&[&[1]])).unwrap(), AlgebraicReal::from_int(1));
        assert_eq!(perron_root(&m(&[&[1, 1], &[0, 1]])), Err(PfError::NotIrreducible));
    }

    #[test]
    fn vectors() {
        let v = perron_vector(&m(&[&[1, 1], &[1, 1]])).unwrap();
        assert!(v.iter().all(|x| x.as_rational() == Some(rat(1))));
        let (k, v) = perron_pair(&m(&[&[2, 1], &[1, 1]])).unwrap();
        let lam = NFElement::generator(&k);
        // proportional to (λ − 1, 1), largest coordinate first
        assert_eq!(v[0], NFElement::one(&k));
        assert_eq!(v[0].checked_div(&v[1]).unwrap(), lam - NFElement::one(&k));
        assert_eq!(perron_vector(&m(&[&[3]])).unwrap()[0].as_rational(), Some(rat(1)));
    }

    #[test]
    fn collatz() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(
            collatz_wielandt_bounds(&a, &[rat(2), rat(1)]).unwrap(),
            (Rational::new(5.into(), 2.into()), rat(3))
        );
        assert_eq!(collatz_wielandt_bounds(&m(&[&[1, 1], &[1, 1]]), &[rat(1), rat(1)]).unwrap(), (rat(2), rat(2)));
        assert_eq!(collatz_wielandt_bounds(&m(&[&[1]]), &[rat(7)]).unwrap(), (rat(1), rat(1)));
        assert_eq!(collatz_wielandt_bounds(&a, &[rat(0), rat(1)]), Err(PfError::NonPositiveVector));
    }

    #[test]
    fn m_matrix_test() {
        let a = m(&[&[1, 1], &[1, 1]]);
        assert!(!spectral_radius_below(&a, &rat(2)));
        assert!(spectral_radius_below(&a, &Rational::new(21.into(), 10.into())));
        assert!(!spectral_radius_below(&m(&[&[0]]), &rat(0)));
        assert!(spectral_radius_below(&m(&[&[0]]), &rat(1)));
    }

    #[test]
    fn char_poly_known() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).char_poly(), IntPoly::from_i64(&[1, -3, 1]));
        assert_eq!(m(&[&[0, 1, 0], &[0, 0, 1], &[1, 1, 0]]).char_poly(), IntPoly::from_i64(&[-1, -1, 0, 1]));
    }
}
