//! Permutations of {0, …, n−1}. JSON and display forms are 1-based.

use std::fmt;

use serde_json::Value;

use crate::exactnum::json::{int_from_json, schema, JsonError};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// Images must form a bijection of 0..n.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || std::mem::replace(&mut seen[x], true) {
                return None;
            }
        }
        Some(Perm(images))
    }

    /// Builds from disjoint cycles given 0-based.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Option<Self> {
        let mut img: Vec<usize> = (0..n).collect();
        for c in cycles {
            for (k, &x) in c.iter().enumerate() {
                *img.get_mut(x)? = c[(k + 1) % c.len()];
            }
        }
        Self::from_images(img)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Perm(inv)
    }

    /// `self.then(o)` applies `self` first: x ↦ o(self(x)).
    pub fn then(&self, o: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| o.0[x]).collect())
    }

    /// Functional composition: x ↦ self(o(x)).
    pub fn compose(&self, o: &Perm) -> Perm {
        o.then(self)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// τ σ τ⁻¹: the permutation sending τ(x) to τ(σ(x)).
    pub fn conjugate_by(&self, tau: &Perm) -> Perm {
        let mut out = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            out[tau.0[x]] = tau.0[y];
        }
        Perm(out)
    }

    /// Cycles, each starting at its least element, ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut c = vec![s];
            seen[s] = true;
            let mut x = self.0[s];
            while x != s {
                seen[x] = true;
                c.push(x);
                x = self.0[x];
            }
            out.push(c);
        }
        out
    }

    /// Index of the cycle containing each point, in the order of `cycles`.
    pub fn cycle_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.0.len()];
        for (k, c) in self.cycles().iter().enumerate() {
            for &x in c {
                idx[x] = k;
            }
        }
        idx
    }

    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable();
        t
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |l, c| num_integer::lcm(l, c.len() as u64))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|&x| Value::from(x + 1)).collect())
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Perm, JsonError> {
        let a = v.as_array().ok_or_else(|| schema(path, "expected an array of images"))?;
        if a.is_empty() || a.len() > 100_000 {
            return Err(schema(path, "permutation must have between 1 and 100000 points"));
        }
        let mut img = Vec::with_capacity(a.len());
        for (i, x) in a.iter().enumerate() {
            let n = int_from_json(x, &format!("{path}[{i}]"))?;
            let n: usize = n.try_into().map_err(|_| schema(&format!("{path}[{i}]"), "image out of range"))?;
            if n == 0 {
                return Err(schema(&format!("{path}[{i}]"), "images are 1-based"));
            }
            img.push(n - 1);
        }
        Perm::from_images(img).ok_or_else(|| schema(path, "not a permutation"))
    }
}

/// Whether ⟨gens⟩ acts transitively.
pub fn transitive(gens: &[&Perm]) -> bool {
    let n = gens.first().map_or(0, |g| g.len());
    n == 0 || orbit(gens, 0).len() == n
}

/// The orbit of `start`, in discovery order (generators in order, forward
/// images only, which suffices for finite groups).
pub fn orbit(gens: &[&Perm], start: usize) -> Vec<usize> {
    let n = gens.first().map_or(0, |g| g.len());
    let mut seen = vec![false; n];
    seen[start] = true;
    let mut out = vec![start];
    let mut k = 0;
    while k < out.len() {
        let x = out[k];
        k += 1;
        for g in gens {
            let y = g.apply(x);
            if !seen[y] {
                seen[y] = true;
                out.push(y);
            }
        }
    }
    out
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cyc: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cyc.is_empty() {
            return write!(f, "()");
        }
        for c in cyc {
            let s: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
            write!(f, "({})", s.join(" "))?;
        }
        Ok(())
    }
}

/// All permutations of 0..n in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let s = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let t = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        assert_eq!(s.inverse().then(&s), Perm::identity(3));
        assert_eq!(s.to_string(), "(1 2 3)");
        assert_eq!(s.order(), 3);
        assert!(transitive(&[&s]));
        assert!(!transitive(&[&t]));
        assert_eq!(all_perms(3).len(), 6);
        // conjugating (1 3 2),(1 3) by (2 3) gives (1 2 3),(1 2)
        let a = Perm::from_cycles(3, &[&[0, 2, 1]]).unwrap();
        let b = Perm::from_cycles(3, &[&[0, 2]]).unwrap();
        let tau = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        assert_eq!(a.conjugate_by(&tau), s);
        assert_eq!(b.conjugate_by(&tau), t);
    }

    #[test]
    fn json() {
        let s = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert_eq!(Perm::from_json(&s.to_json(), "$").unwrap(), s);
        assert!(Perm::from_json(&serde_json::json!([1, 1]), "$").is_err());
        assert!(Perm::from_json(&serde_json::json!([0]), "$").is_err());
    }
}
