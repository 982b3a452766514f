//! Permutations of `{0..n-1}` in one-line notation, with canonical reduced
//! words in the adjacent transpositions `s_j` (swapping `j-1`, `j`).

use std::cmp::Ordering;

/// A permutation; `images[i] = w(i)`. Composition is "self then other".
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    images: Vec<u8>,
}

impl PartialOrd for Perm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Perm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.images.cmp(&other.images)
    }
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { images: (0..n as u8).collect() }
    }

    pub fn from_images(images: Vec<u8>) -> Perm {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            assert!(!seen[x as usize], "not a permutation");
            seen[x as usize] = true;
        }
        Perm { images }
    }

    /// Adjacent transposition swapping `j-1` and `j` (1 <= j < n).
    pub fn adjacent(n: usize, j: usize) -> Perm {
        assert!(j >= 1 && j < n);
        let mut images: Vec<u8> = (0..n as u8).collect();
        images.swap(j - 1, j);
        Perm { images }
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u8 == x)
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n());
        Perm { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u8; self.n()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u8;
        }
        Perm { images }
    }

    /// Coxeter length = inversion count.
    pub fn len(&self) -> usize {
        let mut l = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                if self.images[i] > self.images[j] {
                    l += 1;
                }
            }
        }
        l
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// The lexicographically first reduced word, built by repeatedly
    /// removing the leftmost descent (a bubble-sort pass structure).
    /// Letters are `j` with `s_j` swapping positions `j-1`, `j`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut arr = self.images.clone();
        let mut word = Vec::new();
        loop {
            let mut j = None;
            for k in 1..arr.len() {
                if arr[k - 1] > arr[k] {
                    j = Some(k);
                    break;
                }
            }
            let Some(k) = j else { break };
            arr.swap(k - 1, k);
            word.push(k);
        }
        // arr is sorted, so `self = s_{w1} then s_{w2} ...` in word order
        word
    }

    /// Length change on right multiplication by `s_j`:
    /// true iff `l(self * s_j) > l(self)`.
    pub fn right_ascent(&self, j: usize) -> bool {
        // value j-1 occurs before value j in one-line notation
        self.inverse().images[j - 1] < self.inverse().images[j]
    }

    /// Length change on left multiplication: true iff `l(s_j * self) > l(self)`.
    pub fn left_ascent(&self, j: usize) -> bool {
        self.images[j - 1] < self.images[j]
    }

    pub fn then_adjacent(&self, j: usize) -> Perm {
        // self * s_j : swap the values j-1, j
        let mut images = self.images.clone();
        for x in images.iter_mut() {
            if *x == (j - 1) as u8 {
                *x = j as u8;
            } else if *x == j as u8 {
                *x = (j - 1) as u8;
            }
        }
        Perm { images }
    }

    pub fn adjacent_then(&self, j: usize) -> Perm {
        // s_j * self : swap positions j-1, j
        let mut images = self.images.clone();
        images.swap(j - 1, j);
        Perm { images }
    }
}

/// All permutations of `{0..n-1}` in lexicographic one-line order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<u8>, used: &mut Vec<bool>, out: &mut Vec<Perm>) {
        if cur.len() == n {
            out.push(Perm { images: cur.clone() });
            return;
        }
        for x in 0..n {
            if !used[x] {
                used[x] = true;
                cur.push(x as u8);
                rec(n, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repkit::SplitMix64;

    #[test]
    fn reduced_word_reconstructs() {
        for w in all_perms(4) {
            let word = w.reduced_word();
            assert_eq!(word.len(), w.len());
            let mut acc = Perm::identity(4);
            for &j in &word {
                assert!(acc.right_ascent(j), "word not reduced");
                acc = acc.then_adjacent(j);
            }
            assert_eq!(acc, w);
        }
    }

    #[test]
    fn reduced_word_is_lex_first() {
        // check against brute-force enumeration of reduced words at n = 4
        fn all_reduced(w: &Perm) -> Vec<Vec<usize>> {
            if w.is_identity() {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for j in 1..w.n() {
                if !w.right_ascent(j) {
                    // last letter j: w = w' s_j with l(w') = l(w)-1
                    let w2 = w.then_adjacent(j);
                    for mut word in all_reduced(&w2) {
                        word.push(j);
                        out.push(word);
                    }
                }
            }
            out
        }
        for w in all_perms(4) {
            let mut words = all_reduced(&w);
            words.sort();
            assert_eq!(w.reduced_word(), words[0]);
        }
    }

    #[test]
    fn length_rules_match_definition() {
        let mut rng = SplitMix64::new(17);
        let perms = all_perms(5);
        for _ in 0..200 {
            let w = &perms[(rng.next_u64() % perms.len() as u64) as usize];
            let j = 1 + (rng.next_u64() % 4) as usize;
            assert_eq!(w.right_ascent(j), w.then_adjacent(j).len() > w.len());
            assert_eq!(w.left_ascent(j), w.adjacent_then(j).len() > w.len());
        }
    }

    #[test]
    fn inverse_and_composition() {
        for w in all_perms(4) {
            assert!(w.then(&w.inverse()).is_identity());
            assert_eq!(w.len(), w.inverse().len());
        }
    }
}
