use std::collections::BTreeSet;

use rayon::prelude::*;
use serde_json::{json, Value};

use super::EnumError;
use crate::exactnum::json::{field_of, int_from_json, schema, JsonError};
use crate::perm::{all_perms, orbit, transitive, Perm};
use crate::pfcore::NonNegIntMatrix;

/// Two permutations of the rectangles with a label in {0..m} on every
/// rectangle for its σ₁-cycle and its σ₂-cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GluingPattern {
    pub sigma1: Perm,
    pub sigma2: Perm,
    pub label1: Vec<usize>,
    pub label2: Vec<usize>,
}

impl GluingPattern {
    pub fn ell(&self) -> usize {
        self.sigma1.len()
    }

    /// Joint counts #{k : label1 = i, label2 = j}.
    pub fn joint_counts(&self, m: usize) -> Vec<Vec<u64>> {
        let mut a = vec![vec![0; m]; m];
        for k in 0..self.ell() {
            a[self.label1[k]][self.label2[k]] += 1;
        }
        a
    }

    /// Checks every invariant against A.
    pub fn check(&self, a: &NonNegIntMatrix) -> Result<(), EnumError> {
        let m = a.dim();
        let l = self.ell();
        let bad = |s: &str| Err(EnumError::InvalidPattern(s.to_string()));
        if self.sigma2.len() != l || self.label1.len() != l || self.label2.len() != l {
            return bad("length mismatch");
        }
        if self.label1.iter().chain(&self.label2).any(|&x| x >= m) {
            return bad("label out of range");
        }
        for (sigma, lab, name) in [(&self.sigma1, &self.label1, "sigma1"), (&self.sigma2, &self.label2, "sigma2")] {
            let cyc = sigma.cycles();
            if cyc.len() != m {
                return bad(&format!("{name} must have {m} cycles"));
            }
            let mut used = vec![false; m];
            for c in &cyc {
                let j = lab[c[0]];
                if c.iter().any(|&x| lab[x] != j) {
                    return bad(&format!("{name} label not constant on a cycle"));
                }
                if std::mem::replace(&mut used[j], true) {
                    return bad(&format!("{name} label used twice"));
                }
                let want: u64 = if name == "sigma1" {
                    (0..m).map(|k| a.get(j, k)).sum()
                } else {
                    (0..m).map(|k| a.get(k, j)).sum()
                };
                if c.len() as u64 != want {
                    return bad(&format!("{name} cycle {} has wrong length", j + 1));
                }
            }
        }
        if self.joint_counts(m) != a.rows() {
            return bad("joint label counts differ from A");
        }
        if !transitive(&[&self.sigma1, &self.sigma2]) {
            return bad("not transitive");
        }
        if self.sigma1.cycle_type() != self.sigma2.cycle_type() {
            return bad("sigma1 and sigma2 not conjugate");
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let p1 = |v: &[usize]| Value::Array(v.iter().map(|&x| Value::from(x + 1)).collect());
        json!({
            "ell": self.ell(),
            "sigma1": self.sigma1.to_json(),
            "sigma2": self.sigma2.to_json(),
            "label1": p1(&self.label1),
            "label2": p1(&self.label2),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, JsonError> {
        let sigma1 = Perm::from_json(field_of(v, "sigma1", "$")?, "$.sigma1")?;
        let sigma2 = Perm::from_json(field_of(v, "sigma2", "$")?, "$.sigma2")?;
        let labels = |key: &str| -> Result<Vec<usize>, JsonError> {
            let p = format!("$.{key}");
            let a = field_of(v, key, "$")?.as_array().ok_or_else(|| schema(&p, "expected an array"))?;
            a.iter()
                .enumerate()
                .map(|(i, x)| {
                    let n: usize = int_from_json(x, &p)?
                        .try_into()
                        .map_err(|_| schema(&format!("{p}[{i}]"), "label out of range"))?;
                    n.checked_sub(1).ok_or_else(|| schema(&format!("{p}[{i}]"), "labels are 1-based"))
                })
                .collect()
        };
        let g = GluingPattern {
            label1: labels("label1")?,
            label2: labels("label2")?,
            sigma1,
            sigma2,
        };
        if g.sigma2.len() != g.ell() || g.label1.len() != g.ell() || g.label2.len() != g.ell() {
            return Err(schema("$", "sigma1, sigma2, label1 and label2 must have equal length"));
        }
        Ok(g)
    }
}

/// Label permutations π with a_{π(i)π(j)} = a_ij and, when given, with D fixed.
pub fn label_automorphisms(a: &NonNegIntMatrix, d: Option<&[u64]>) -> Vec<Vec<usize>> {
    let m = a.dim();
    all_perms(m)
        .into_iter()
        .filter(|p| a.permuted(p) == *a)
        .filter(|p| d.is_none_or(|d| (0..m).all(|i| d[p[i]] == d[i])))
        .collect()
}

type Code = Vec<(usize, usize, usize, usize)>;

/// Code of the component of `start`, numbered breadth-first following σ₁
/// then σ₂, with labels mapped through π.
fn bfs_code(g: &GluingPattern, start: usize, pi: &[usize], num: &mut [usize], order: &mut Vec<usize>) -> Code {
    const UNSEEN: usize = usize::MAX;
    order.clear();
    order.push(start);
    num[start] = 0;
    let mut k = 0;
    while k < order.len() {
        let x = order[k];
        k += 1;
        for y in [g.sigma1.apply(x), g.sigma2.apply(x)] {
            if num[y] == UNSEEN {
                num[y] = order.len();
                order.push(y);
            }
        }
    }
    let code = order
        .iter()
        .map(|&x| (num[g.sigma1.apply(x)], num[g.sigma2.apply(x)], pi[g.label1[x]], pi[g.label2[x]]))
        .collect();
    for &x in order.iter() {
        num[x] = UNSEEN;
    }
    code
}

fn decode(codes: &[Code]) -> GluingPattern {
    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    let mut l1 = Vec::new();
    let mut l2 = Vec::new();
    let mut off = 0;
    for c in codes {
        for &(a, b, i, j) in c {
            s1.push(a + off);
            s2.push(b + off);
            l1.push(i);
            l2.push(j);
        }
        off += c.len();
    }
    GluingPattern {
        sigma1: Perm::from_images(s1).unwrap(),
        sigma2: Perm::from_images(s2).unwrap(),
        label1: l1,
        label2: l2,
    }
}

/// Canonical representative under simultaneous conjugation of (σ₁, σ₂) and
/// the label permutations in `autos`. Components are canonicalized
/// separately and then sorted.
pub fn canonical_with(g: &GluingPattern, autos: &[Vec<usize>]) -> GluingPattern {
    let l = g.ell();
    let mut num = vec![usize::MAX; l];
    let mut order = Vec::with_capacity(l);
    let gens = [&g.sigma1, &g.sigma2];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut seen = vec![false; l];
    for s in 0..l {
        if !seen[s] {
            let o = orbit(&gens, s);
            for &x in &o {
                seen[x] = true;
            }
            comps.push(o);
        }
    }
    let identity: Vec<usize> = (0..=g.label1.iter().chain(&g.label2).copied().max().unwrap_or(0)).collect();
    let autos: &[Vec<usize>] = if autos.is_empty() { std::slice::from_ref(&identity) } else { autos };
    let mut best: Option<Vec<Code>> = None;
    for pi in autos {
        let mut codes: Vec<Code> = comps
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&s| bfs_code(g, s, pi, &mut num, &mut order))
                    .min()
                    .unwrap()
            })
            .collect();
        codes.sort();
        if best.as_ref().is_none_or(|b| codes < *b) {
            best = Some(codes);
        }
    }
    decode(&best.unwrap())
}

/// Canonical form with respect to the automorphisms of A.
pub fn canonical_pair(g: &GluingPattern, a: &NonNegIntMatrix) -> GluingPattern {
    canonical_with(g, &label_automorphisms(a, None))
}

/// Arrangements of a multiset given as counts, lexicographic.
fn arrangements(counts: &mut [u64], len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == len {
        out.push(cur.clone());
        return;
    }
    for j in 0..counts.len() {
        if counts[j] > 0 {
            counts[j] -= 1;
            cur.push(j);
            arrangements(counts, len, cur, out);
            cur.pop();
            counts[j] += 1;
        }
    }
}

fn is_least_rotation(x: &[usize]) -> bool {
    let n = x.len();
    (1..n).all(|k| x[k..].iter().chain(&x[..k]).cmp(x.iter()) != std::cmp::Ordering::Less)
}

/// Cyclic orders of `items` as successor maps, fixing the first item.
fn cyclic_orders(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
    if items.len() <= 1 {
        return vec![items.iter().map(|&x| (x, x)).collect()];
    }
    all_perms(items.len() - 1)
        .into_iter()
        .map(|p| {
            let seq: Vec<usize> = std::iter::once(items[0]).chain(p.iter().map(|&i| items[i + 1])).collect();
            (0..seq.len()).map(|k| (seq[k], seq[(k + 1) % seq.len()])).collect()
        })
        .collect()
}

/// One canonical representative per class of valid gluing patterns for the
/// symmetric irreducible A, sorted.
pub fn enumerate_gluings(a: &NonNegIntMatrix) -> Result<Vec<GluingPattern>, EnumError> {
    if !a.is_symmetric() {
        return Err(EnumError::NotSymmetric);
    }
    if !a.is_irreducible() {
        return Err(EnumError::NotIrreducible);
    }
    let m = a.dim();
    let r = a.row_sums();
    let l: usize = r.iter().sum::<u64>() as usize;
    // σ₁: consecutive cycles of lengths r₀, r₁, …
    let mut s1 = vec![0; l];
    let mut label1 = vec![0; l];
    let mut start = 0;
    for (i, &ri) in r.iter().enumerate() {
        let ri = ri as usize;
        for k in 0..ri {
            s1[start + k] = start + (k + 1) % ri;
            label1[start + k] = i;
        }
        start += ri;
    }
    let sigma1 = Perm::from_images(s1).unwrap();
    // Per σ₁-cycle, the order in which σ₂-labels appear.
    let per_cycle: Vec<Vec<Vec<usize>>> = (0..m)
        .map(|i| {
            let mut counts: Vec<u64> = (0..m).map(|j| a.get(i, j)).collect();
            let mut out = Vec::new();
            arrangements(&mut counts, r[i] as usize, &mut Vec::new(), &mut out);
            // Rotating a σ₁-cycle commutes with σ₁, so one rotation class
            // representative per cycle suffices.
            out.retain(|x| is_least_rotation(x));
            out
        })
        .collect();
    let mut label2s: Vec<Vec<usize>> = vec![vec![]];
    for arr in &per_cycle {
        label2s = label2s
            .into_iter()
            .flat_map(|pre| {
                arr.iter().map(move |x| {
                    let mut v = pre.clone();
                    v.extend_from_slice(x);
                    v
                })
            })
            .collect();
    }
    let autos = label_automorphisms(a, None);
    let found: BTreeSet<GluingPattern> = label2s
        .par_iter()
        .fold(BTreeSet::new, |mut acc, label2| {
            let classes: Vec<Vec<usize>> = (0..m).map(|j| (0..l).filter(|&k| label2[k] == j).collect()).collect();
            let options: Vec<Vec<Vec<(usize, usize)>>> = classes.iter().map(|c| cyclic_orders(c)).collect();
            let mut idx = vec![0usize; m];
            loop {
                let mut s2 = vec![0; l];
                for j in 0..m {
                    for &(x, y) in &options[j][idx[j]] {
                        s2[x] = y;
                    }
                }
                let g = GluingPattern {
                    sigma1: sigma1.clone(),
                    sigma2: Perm::from_images(s2).unwrap(),
                    label1: label1.clone(),
                    label2: label2.clone(),
                };
                if transitive(&[&g.sigma1, &g.sigma2]) && g.sigma1.cycle_type() == g.sigma2.cycle_type() {
                    acc.insert(canonical_with(&g, &autos));
                }
                // odometer
                let mut k = 0;
                while k < m {
                    idx[k] += 1;
                    if idx[k] < options[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == m {
                    break;
                }
            }
            acc
        })
        .reduce(BTreeSet::new, |mut x, mut y| {
            x.append(&mut y);
            x
        });
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> NonNegIntMatrix {
        NonNegIntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn tiny_cases() {
        let g = enumerate_gluings(&m(&[&[1]])).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g[0].sigma1.is_identity() && g[0].sigma2.is_identity());
        let g = enumerate_gluings(&m(&[&[2]])).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].sigma1.to_string(), "(1 2)");
        assert_eq!(g[0].sigma2.to_string(), "(1 2)");
        assert!(matches!(enumerate_gluings(&m(&[&[0, 1], &[2, 0]])), Err(EnumError::NotSymmetric)));
        assert!(matches!(enumerate_gluings(&m(&[&[1, 0], &[0, 1]])), Err(EnumError::NotIrreducible)));
    }

    #[test]
    fn conjugate_pairs_share_canonical_form() {
        let a = m(&[&[3]]);
        let mk = |s1: &[&[usize]], s2: &[&[usize]]| GluingPattern {
            sigma1: Perm::from_cycles(3, s1).unwrap(),
            sigma2: Perm::from_cycles(3, s2).unwrap(),
            label1: vec![0; 3],
            label2: vec![0; 3],
        };
        let x = mk(&[&[0, 2, 1]], &[&[0, 2]]);
        let y = mk(&[&[0, 1, 2]], &[&[0, 1]]);
        assert_eq!(canonical_pair(&x, &a), canonical_pair(&y, &a));
        let t = GluingPattern {
            sigma1: Perm::identity(1),
            sigma2: Perm::identity(1),
            label1: vec![0],
            label2: vec![0],
        };
        assert_eq!(canonical_pair(&t, &m(&[&[1]])), t);
    }

    #[test]
    fn every_pattern_valid() {
        for a in [m(&[&[1, 1], &[1, 1]]), m(&[&[0, 2], &[2, 1]]), m(&[&[3]])] {
            for g in enumerate_gluings(&a).unwrap() {
                g.check(&a).unwrap();
                assert_eq!(canonical_pair(&g, &a), g);
            }
        }
    }
}
