use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::exactnum::Rational;
use crate::pfcore::{spectral_radius_below, NonNegIntMatrix};

/// ⌈Tᵈ⌉: every entry of an irreducible non-negative d×d integer matrix with
/// λ < T is at most this.
pub fn entry_bound(d: usize, t: &Rational) -> BigInt {
    assert!(d >= 1 && t.is_positive());
    let p = t.numer().pow(d as u32);
    let q = t.denom().pow(d as u32);
    p.div_ceil(&q)
}

fn bound_u64(d: usize, t: &Rational) -> u64 {
    entry_bound(d, t).to_u64().expect("entry bound exceeds 64 bits")
}

/// Whether some filling of the `open` positions can make `m` irreducible:
/// the digraph of nonzero or open entries must be strongly connected.
fn completable(m: &NonNegIntMatrix, open: &[bool]) -> bool {
    let d = m.dim();
    let edge = |i: usize, j: usize| open[i * d + j] || m.get(i, j) > 0;
    let reaches_all = |forward: bool| {
        let mut seen = vec![false; d];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..d {
                let e = if forward { edge(i, j) } else { edge(j, i) };
                if e && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|x| x)
    };
    reaches_all(true) && reaches_all(false)
}

/// Whether every nonzero off-diagonal entry (i, j) still lies on some cycle
/// of nonzero or open entries with product below Tᴸ. Open entries weigh 1.
/// Since λᴸ bounds every cycle product of length L, a completion with
/// λ < T needs such a cycle through each entry.
fn cycles_below(m: &NonNegIntMatrix, open: &[bool], t: &Rational) -> bool {
    let d = m.dim();
    let weight = |i: usize, j: usize| {
        if open[i * d + j] {
            Some(BigInt::one())
        } else {
            Some(BigInt::from(m.get(i, j))).filter(|w| w.is_positive())
        }
    };
    let below = |prod: &BigInt, len: u32| prod * t.denom().pow(len) < t.numer().pow(len);
    // Depth-first over simple paths from `at` back to `home`.
    fn search(
        at: usize,
        home: usize,
        prod: &BigInt,
        len: u32,
        used: &mut [bool],
        weight: &dyn Fn(usize, usize) -> Option<BigInt>,
        below: &dyn Fn(&BigInt, u32) -> bool,
    ) -> bool {
        if !below(prod, used.len() as u32) {
            return false;
        }
        if let Some(w) = weight(at, home) {
            if below(&(prod * w), len + 1) {
                return true;
            }
        }
        for next in 0..used.len() {
            if used[next] {
                continue;
            }
            if let Some(w) = weight(at, next) {
                used[next] = true;
                let found = search(next, home, &(prod * w), len + 1, used, weight, below);
                used[next] = false;
                if found {
                    return true;
                }
            }
        }
        false
    }
    (0..d).all(|i| {
        (0..d).all(|j| {
            if i == j || open[i * d + j] || m.get(i, j) == 0 {
                return true;
            }
            let mut used = vec![false; d];
            used[i] = true;
            used[j] = true;
            search(j, i, &BigInt::from(m.get(i, j)), 1, &mut used, &weight, &below)
        })
    })
}

/// Depth-first fill of the free positions in order. `ρ` is monotone in every
/// entry, so once a partial fill (remaining entries zero) reaches ρ ≥ T the
/// branch and every larger value at that position are cut. Branches with no
/// irreducible completion are skipped.
struct Fill<'a> {
    slots: &'a [(usize, usize)],
    min: u64,
    max: u64,
    t: &'a Rational,
    mirror: bool,
}

impl Fill<'_> {
    fn set(&self, m: &mut NonNegIntMatrix, open: &mut [bool], (i, j): (usize, usize), v: u64, is_open: bool) {
        let d = m.dim();
        m.set(i, j, v);
        open[i * d + j] = is_open;
        if self.mirror {
            m.set(j, i, v);
            open[j * d + i] = is_open;
        }
    }

    fn run(&self, m: &mut NonNegIntMatrix, open: &mut [bool], k: usize, out: &mut Vec<NonNegIntMatrix>) {
        if k == self.slots.len() {
            out.push(m.clone());
            return;
        }
        let slot = self.slots[k];
        for v in self.min..=self.max {
            self.set(m, open, slot, v, false);
            if !spectral_radius_below(m, self.t) {
                break;
            }
            if !completable(m, open) {
                continue;
            }
            if !cycles_below(m, open, self.t) {
                // Larger values keep the same pattern and only raise products.
                if v > 0 {
                    break;
                }
                continue;
            }
            self.run(m, open, k + 1, out);
        }
        self.set(m, open, slot, 0, true);
    }
}

fn search(d: usize, t: &Rational, min: u64, symmetric: bool) -> Vec<NonNegIntMatrix> {
    if d == 0 || !t.is_positive() {
        return vec![];
    }
    let max = bound_u64(d, t);
    let slots: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|&(i, j)| !symmetric || i <= j)
        .collect();
    let fill = Fill {
        slots: &slots,
        min,
        max,
        t,
        mirror: symmetric,
    };
    let mut found: Vec<NonNegIntMatrix> = (min..=max)
        .into_par_iter()
        .flat_map_iter(|v| {
            let mut m = NonNegIntMatrix::new(d, vec![0; d * d]).unwrap();
            let mut open = vec![true; d * d];
            let mut out = Vec::new();
            fill.set(&mut m, &mut open, slots[0], v, false);
            if spectral_radius_below(&m, t) && completable(&m, &open) && cycles_below(&m, &open, t) {
                fill.run(&mut m, &mut open, 1, &mut out);
            }
            out
        })
        .filter(NonNegIntMatrix::is_irreducible)
        .collect();
    found.sort();
    found
}

/// Irreducible non-negative d×d integer matrices with λ(A) < T, sorted by
/// row-major entries.
pub fn enumerate_irreducible(d: usize, t: &Rational) -> Vec<NonNegIntMatrix> {
    search(d, t, 0, false)
}

/// Symmetric irreducible m×m matrices with λ < T.
pub fn enumerate_symmetric(m: usize, t: &Rational) -> Vec<NonNegIntMatrix> {
    search(m, t, 0, true)
}

/// Matrices of size p with λ < T; `positive` restricts to strictly positive
/// entries, otherwise irreducible non-negative.
pub fn enumerate_pa_matrices(p: usize, t: &Rational, positive: bool) -> Vec<NonNegIntMatrix> {
    search(p, t, u64::from(positive), false)
}

/// A symmetric m×m with diagonal twist counts D ≥ 1 such that DA is
/// irreducible and λ(DA) < T.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CuspMatrixPair {
    pub a: NonNegIntMatrix,
    pub d: Vec<u64>,
}

impl CuspMatrixPair {
    pub fn da(&self) -> NonNegIntMatrix {
        self.a.scale_rows(&self.d)
    }
}

fn twists(a: &NonNegIntMatrix, t: &Rational, d: &mut Vec<u64>, max: u64, out: &mut Vec<CuspMatrixPair>) {
    let k = d.len();
    if k == a.dim() {
        out.push(CuspMatrixPair { a: a.clone(), d: d.clone() });
        return;
    }
    for n in 1..=max {
        d.push(n);
        let mut full = d.clone();
        full.resize(a.dim(), 1);
        if !spectral_radius_below(&a.scale_rows(&full), t) {
            d.pop();
            break;
        }
        twists(a, t, d, max, out);
        d.pop();
    }
}

/// All (A, D) with λ(DA) < T for m×m data, sorted by (A, D).
pub fn enumerate_cusp_data(m: usize, t: &Rational) -> Vec<CuspMatrixPair> {
    if m == 0 || !t.is_positive() {
        return vec![];
    }
    let max = bound_u64(m, t);
    let mut out: Vec<CuspMatrixPair> = enumerate_symmetric(m, t)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut out = Vec::new();
            twists(&a, t, &mut Vec::new(), max, &mut out);
            out
        })
        .collect();
    out.sort();
    out
}
