//! Multicompositions and multipartitions with dominance order, type and
//! cumulative vectors.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MulticombError {
    #[error("size mismatch: |lambda| = {0}, |mu| = {1}")]
    SizeMismatch(u32, u32),
    #[error("level mismatch: {0} components vs {1}")]
    LevelMismatch(usize, usize),
    #[error("component {0} is not weakly decreasing")]
    NotAPartition(usize),
    #[error("dagger construction undefined: {0}")]
    DaggerUndefined(String),
}

/// An r-tuple of integer sequences with parts >= 0. Trailing zero parts are
/// irrelevant for equality, hashing and ordering, but are kept as stored for
/// display (the fixed-length convention of weight posets).
#[derive(Clone, Debug)]
pub struct Multicomposition {
    comps: Vec<Vec<u32>>,
}

impl Multicomposition {
    pub fn new(comps: Vec<Vec<u32>>) -> Multicomposition {
        Multicomposition { comps }
    }

    pub fn empty(r: usize) -> Multicomposition {
        Multicomposition { comps: vec![Vec::new(); r] }
    }

    pub fn level(&self) -> usize {
        self.comps.len()
    }

    pub fn size(&self) -> u32 {
        self.comps.iter().flatten().sum()
    }

    pub fn comps(&self) -> &[Vec<u32>] {
        &self.comps
    }

    pub fn comp(&self, s: usize) -> &[u32] {
        &self.comps[s]
    }

    /// Part at (row i, component s), 0 for rows beyond storage.
    pub fn part(&self, s: usize, i: usize) -> u32 {
        self.comps[s].get(i).copied().unwrap_or(0)
    }

    /// Component with trailing zeros stripped.
    pub fn comp_trimmed(&self, s: usize) -> &[u32] {
        let row = &self.comps[s];
        let mut end = row.len();
        while end > 0 && row[end - 1] == 0 {
            end -= 1;
        }
        &row[..end]
    }

    pub fn trimmed(&self) -> Multicomposition {
        Multicomposition {
            comps: (0..self.level()).map(|s| self.comp_trimmed(s).to_vec()).collect(),
        }
    }

    /// Pad every component to the given lengths (panics if a nonzero part
    /// would be dropped).
    pub fn padded(&self, m: &[u32]) -> Multicomposition {
        assert_eq!(m.len(), self.level());
        let comps = (0..self.level())
            .map(|s| {
                let t = self.comp_trimmed(s);
                assert!(t.len() <= m[s] as usize, "component longer than bound");
                let mut v = t.to_vec();
                v.resize(m[s] as usize, 0);
                v
            })
            .collect();
        Multicomposition { comps }
    }

    pub fn is_partition(&self) -> bool {
        self.comps.iter().all(|c| c.windows(2).all(|w| w[0] >= w[1]))
    }

    pub fn as_partition(&self) -> Result<Multipartition, MulticombError> {
        for (s, c) in self.comps.iter().enumerate() {
            if !c.windows(2).all(|w| w[0] >= w[1]) {
                return Err(MulticombError::NotAPartition(s + 1));
            }
        }
        Ok(Multipartition(self.clone()))
    }

    /// Dominance: partial sums across components and rows.
    pub fn dominates(&self, other: &Multicomposition) -> Result<bool, MulticombError> {
        if self.level() != other.level() {
            return Err(MulticombError::LevelMismatch(self.level(), other.level()));
        }
        if self.size() != other.size() {
            return Err(MulticombError::SizeMismatch(self.size(), other.size()));
        }
        let mut acc_l = 0i64;
        let mut acc_m = 0i64;
        for s in 0..self.level() {
            let rows = self.comps[s].len().max(other.comps[s].len());
            let mut part_l = acc_l;
            let mut part_m = acc_m;
            for i in 0..rows {
                part_l += self.part(s, i) as i64;
                part_m += other.part(s, i) as i64;
                if part_l < part_m {
                    return Ok(false);
                }
            }
            acc_l = part_l;
            acc_m = part_m;
        }
        Ok(true)
    }

    pub fn strictly_dominates(&self, other: &Multicomposition) -> Result<bool, MulticombError> {
        Ok(self.dominates(other)? && self != other)
    }

    /// Type `alpha(mu) = (|mu^(1)|, ..., |mu^(r)|)`.
    pub fn type_alpha(&self) -> Vec<u32> {
        self.comps.iter().map(|c| c.iter().sum()).collect()
    }

    /// Cumulative vector `a(mu)` with `a_i = sum_{k<i} |mu^(k)|`, `a_1 = 0`.
    pub fn avec(&self) -> Vec<u32> {
        let alpha = self.type_alpha();
        let mut a = Vec::with_capacity(alpha.len());
        let mut acc = 0;
        for x in &alpha {
            a.push(acc);
            acc += x;
        }
        a
    }

    /// All diagram nodes as (row, col, component), 0-based, row-major.
    pub fn nodes(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (s, c) in self.comps.iter().enumerate() {
            for (i, &len) in c.iter().enumerate() {
                for j in 0..len as usize {
                    out.push((i, j, s));
                }
            }
        }
        out
    }

    /// Nested-array serialization, e.g. `[[3,2,1],[2,2]]`, as stored.
    pub fn serialize(&self) -> String {
        let comps: Vec<String> = self
            .comps
            .iter()
            .map(|c| {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                format!("[{}]", parts.join(","))
            })
            .collect();
        format!("[{}]", comps.join(","))
    }

    /// Concatenation of the components into a single composition (the
    /// flattening used by the modified-algebra constructions).
    pub fn flattened(&self) -> Vec<u32> {
        self.comps.iter().flatten().copied().collect()
    }
}

fn padded_lex_cmp(a: &Multicomposition, b: &Multicomposition) -> Ordering {
    match a.level().cmp(&b.level()) {
        Ordering::Equal => {}
        o => return o,
    }
    for s in 0..a.level() {
        let rows = a.comps[s].len().max(b.comps[s].len());
        for i in 0..rows {
            match a.part(s, i).cmp(&b.part(s, i)) {
                Ordering::Equal => {}
                o => return o,
            }
        }
    }
    Ordering::Equal
}

impl PartialEq for Multicomposition {
    fn eq(&self, other: &Self) -> bool {
        padded_lex_cmp(self, other) == Ordering::Equal
    }
}

impl Eq for Multicomposition {}

impl Hash for Multicomposition {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.level().hash(state);
        for s in 0..self.level() {
            self.comp_trimmed(s).hash(state);
        }
    }
}

/// The canonical element order: reverse-lexicographic on the flattened part
/// sequence, so the most dominant element sorts first.
impl Ord for Multicomposition {
    fn cmp(&self, other: &Self) -> Ordering {
        padded_lex_cmp(other, self)
    }
}

impl PartialOrd for Multicomposition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Multicomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// A multicomposition whose components are all weakly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multipartition(Multicomposition);

impl Multipartition {
    pub fn new(comps: Vec<Vec<u32>>) -> Multipartition {
        Multicomposition::new(comps).as_partition().expect("not a multipartition")
    }

    pub fn inner(&self) -> &Multicomposition {
        &self.0
    }
}

impl std::ops::Deref for Multipartition {
    type Target = Multicomposition;
    fn deref(&self) -> &Multicomposition {
        &self.0
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn partitions_of(n: u32, max_part: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max_part)).rev() {
        for mut rest in partitions_of(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All r-partitions of n (trimmed storage), in canonical order.
pub fn all_r_partitions(n: u32, r: usize) -> Vec<Multipartition> {
    fn rec(n: u32, r: usize) -> Vec<Vec<Vec<u32>>> {
        if r == 0 {
            return if n == 0 { vec![Vec::new()] } else { Vec::new() };
        }
        let mut out = Vec::new();
        for first_size in 0..=n {
            for p in partitions_of(first_size, first_size.max(1)) {
                for mut rest in rec(n - first_size, r - 1) {
                    rest.insert(0, p.clone());
                    out.push(rest);
                }
            }
        }
        out
    }
    let mut v: Vec<Multipartition> =
        rec(n, r).into_iter().map(|c| Multipartition(Multicomposition::new(c))).collect();
    v.sort();
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mc(c: &[&[u32]]) -> Multicomposition {
        Multicomposition::new(c.iter().map(|x| x.to_vec()).collect())
    }

    #[test]
    fn equality_ignores_trailing_zeros() {
        assert_eq!(mc(&[&[2, 0], &[0]]), mc(&[&[2], &[]]));
        assert_ne!(mc(&[&[2], &[]]), mc(&[&[], &[2]]));
        use std::collections::HashSet;
        let mut s = HashSet::new();
        s.insert(mc(&[&[2, 0], &[0]]));
        assert!(s.contains(&mc(&[&[2], &[]])));
    }

    #[test]
    fn dominance_examples() {
        let a = mc(&[&[2], &[0]]);
        let b = mc(&[&[1, 1], &[0]]);
        assert!(a.dominates(&b).unwrap());
        assert!(!b.dominates(&a).unwrap());
        let c = mc(&[&[1], &[1]]);
        assert!(a.dominates(&c).unwrap());
        assert!(!c.dominates(&a).unwrap());
        assert!(a.dominates(&a).unwrap());
        assert!(mc(&[&[1]]).dominates(&mc(&[&[1], &[1]])).is_err());
        assert!(mc(&[&[1], &[0]]).dominates(&mc(&[&[1], &[1]])).is_err());
    }

    #[test]
    fn type_and_cumulative_examples() {
        let m = mc(&[&[2, 1], &[1]]);
        assert_eq!(m.type_alpha(), vec![3, 1]);
        assert_eq!(m.avec(), vec![0, 3]);
        let m = mc(&[&[0], &[2]]);
        assert_eq!(m.type_alpha(), vec![0, 2]);
        assert_eq!(m.avec(), vec![0, 0]);
    }

    #[test]
    fn canonical_order_most_dominant_first() {
        let mut v = vec![mc(&[&[0], &[2]]), mc(&[&[2], &[0]]), mc(&[&[1], &[1]])];
        v.sort();
        assert_eq!(v[0], mc(&[&[2], &[0]]));
        assert_eq!(v[1], mc(&[&[1], &[1]]));
        assert_eq!(v[2], mc(&[&[0], &[2]]));
    }

    #[test]
    fn dominance_implies_canonical_order() {
        for lam in all_r_partitions(4, 2) {
            for mu in all_r_partitions(4, 2) {
                if lam.strictly_dominates(&mu).unwrap() {
                    assert!(lam.inner() < mu.inner(), "{lam} should sort before {mu}");
                }
            }
        }
    }

    #[test]
    fn dominance_poset_axioms_small() {
        for (n, r) in [(3u32, 2usize), (4, 2), (4, 3), (3, 3)] {
            let all = all_r_partitions(n, r);
            for a in &all {
                assert!(a.dominates(a).unwrap());
                for b in &all {
                    if a.dominates(b).unwrap() && b.dominates(a).unwrap() {
                        assert_eq!(a, b);
                    }
                    for c in &all {
                        if a.dominates(b).unwrap() && b.dominates(c).unwrap() {
                            assert!(a.dominates(c).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dominance_implies_avec_order() {
        for a in all_r_partitions(4, 3) {
            for b in all_r_partitions(4, 3) {
                if a.dominates(&b).unwrap() {
                    let (x, y) = (a.avec(), b.avec());
                    assert!(x.iter().zip(&y).all(|(u, v)| u >= v));
                }
            }
        }
    }

    #[test]
    fn serialization() {
        assert_eq!(mc(&[&[3, 2, 1], &[2, 2]]).serialize(), "[[3,2,1],[2,2]]");
        assert_eq!(mc(&[&[2], &[0]]).serialize(), "[[2],[0]]");
    }
}
