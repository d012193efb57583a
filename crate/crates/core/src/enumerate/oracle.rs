//! Brute-force reference enumerations, independent of the pruned searches:
//! plain scans over bounded entries with a Sturm-sequence test for λ < T,
//! and exhaustive conjugator search for gluing-pattern classes.

use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use super::{entry_bound, CuspMatrixPair, GluingPattern};
use crate::exactnum::Rational;
use crate::perm::{all_perms, transitive, Perm};
use crate::pfcore::NonNegIntMatrix;

/// λ(A) < T for irreducible A: closed form for d ≤ 2, otherwise the
/// characteristic polynomial having no real root ≥ T (Sturm count).
pub fn perron_below(a: &NonNegIntMatrix, t: &Rational) -> bool {
    let r = |x: u64| Rational::from_integer(x.into());
    match a.dim() {
        1 => r(a.get(0, 0)) < *t,
        2 => {
            // λ = (tr + √disc)/2 < T  ⇔  tr < 2T and disc < (2T − tr)²
            let tr = r(a.get(0, 0) + a.get(1, 1));
            let det = r(a.get(0, 0) * a.get(1, 1)) - r(a.get(0, 1) * a.get(1, 0));
            let disc = &tr * &tr - det * r(4);
            let gap = t * r(2) - tr;
            gap > Rational::from_integer(0.into()) && disc < &gap * &gap
        }
        _ => perron_below_by_sturm(a, t),
    }
}

/// λ(A) < T via the characteristic polynomial having no real root ≥ T.
pub fn perron_below_by_sturm(a: &NonNegIntMatrix, t: &Rational) -> bool {
    let p = a.char_poly();
    if p.sign_at(t) == 0 {
        return false;
    }
    let b = p.root_bound().max(t.clone() + Rational::from_integer(1.into()));
    p.count_roots(t, &b) == 0
}

fn odometer(v: &mut [u64], lo: u64, hi: u64) -> bool {
    for x in v.iter_mut() {
        if *x < hi {
            *x += 1;
            return true;
        }
        *x = lo;
    }
    false
}

pub fn brute_irreducible(d: usize, t: &Rational, positive: bool) -> Vec<NonNegIntMatrix> {
    let b = entry_bound(d, t).to_u64().unwrap();
    let lo = u64::from(positive);
    let mut e = vec![lo; d * d];
    let mut out = Vec::new();
    loop {
        let m = NonNegIntMatrix::new(d, e.clone()).unwrap();
        if m.is_irreducible() && perron_below(&m, t) {
            out.push(m);
        }
        if !odometer(&mut e, lo, b) {
            break;
        }
    }
    out.sort();
    out
}

pub fn brute_cusp_data(m: usize, t: &Rational) -> Vec<CuspMatrixPair> {
    let b = entry_bound(m, t).to_u64().unwrap();
    let slots: Vec<(usize, usize)> = (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect();
    let mut upper = vec![0u64; slots.len()];
    let mut out = Vec::new();
    loop {
        let mut a = NonNegIntMatrix::new(m, vec![0; m * m]).unwrap();
        for (k, &(i, j)) in slots.iter().enumerate() {
            a.set(i, j, upper[k]);
            a.set(j, i, upper[k]);
        }
        let mut d = vec![1u64; m];
        loop {
            let p = CuspMatrixPair { a: a.clone(), d: d.clone() };
            let da = p.da();
            if da.entries().iter().all(|&x| x <= b) && da.is_irreducible() && perron_below(&da, t) {
                out.push(p);
            }
            if !odometer(&mut d, 1, b) {
                break;
            }
        }
        if !odometer(&mut upper, 0, b) {
            break;
        }
    }
    out.sort();
    out
}

/// Canonical form by exhaustive search: the least (σ₁, σ₂, labels) over all
/// conjugators τ ∈ S_ℓ and label automorphisms π.
pub fn brute_canonical(g: &GluingPattern, autos: &[Vec<usize>]) -> GluingPattern {
    let l = g.ell();
    let mut best: Option<GluingPattern> = None;
    for t in all_perms(l) {
        let tau = Perm::from_images(t).unwrap();
        for pi in autos {
            let mut l1 = vec![0; l];
            let mut l2 = vec![0; l];
            for x in 0..l {
                l1[tau.apply(x)] = pi[g.label1[x]];
                l2[tau.apply(x)] = pi[g.label2[x]];
            }
            let h = GluingPattern {
                sigma1: g.sigma1.conjugate_by(&tau),
                sigma2: g.sigma2.conjugate_by(&tau),
                label1: l1,
                label2: l2,
            };
            if best.as_ref().is_none_or(|b| h < *b) {
                best = Some(h);
            }
        }
    }
    best.unwrap()
}

/// Every valid labeled pair over S_ℓ × S_ℓ, as the set of brute-force
/// canonical forms.
pub fn brute_gluing_classes(a: &NonNegIntMatrix) -> BTreeSet<GluingPattern> {
    let m = a.dim();
    let l = a.row_sums().iter().sum::<u64>() as usize;
    let autos = super::label_automorphisms(a, None);
    let perms: Vec<Perm> = all_perms(l).into_iter().map(|p| Perm::from_images(p).unwrap()).collect();
    let labelings = all_perms(m);
    let mut out = BTreeSet::new();
    for s1 in perms.iter().filter(|p| p.cycles().len() == m) {
        let c1 = s1.cycles();
        for s2 in perms.iter().filter(|p| p.cycles().len() == m) {
            if !transitive(&[s1, s2]) {
                continue;
            }
            let c2 = s2.cycles();
            for p1 in &labelings {
                for p2 in &labelings {
                    let mut label1 = vec![0; l];
                    let mut label2 = vec![0; l];
                    for (k, c) in c1.iter().enumerate() {
                        for &x in c {
                            label1[x] = p1[k];
                        }
                    }
                    for (k, c) in c2.iter().enumerate() {
                        for &x in c {
                            label2[x] = p2[k];
                        }
                    }
                    let g = GluingPattern {
                        sigma1: s1.clone(),
                        sigma2: s2.clone(),
                        label1,
                        label2,
                    };
                    if g.check(a).is_ok() {
                        out.insert(brute_canonical(&g, &autos));
                    }
                }
            }
        }
    }
    out
}
