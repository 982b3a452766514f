//! Weight posets: enumeration, saturation, and the index poset `Omega` over
//! `Lambda+ x {0,1}`.

use super::tableau::semistandard_tableaux;
use super::types::{all_r_partitions, Multicomposition, Multipartition};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetKind {
    /// All multicompositions of `n` with component `i` of length `m_i`.
    PTilde,
    /// All r-partitions of `n`.
    PartitionsOnly,
}

/// A finite set of multicompositions of `n`, sorted in the canonical order,
/// with its sublist of multipartitions and a verified saturation flag.
#[derive(Clone, Debug)]
pub struct Poset {
    pub n: u32,
    pub r: usize,
    pub kind: PosetKind,
    pub m: Option<Vec<u32>>,
    pub elements: Vec<Multicomposition>,
    /// Indices into `elements` of the multipartitions, in canonical order.
    pub plus: Vec<usize>,
    pub saturated: bool,
    index: HashMap<Multicomposition, usize>,
}

fn weak_compositions(n: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in weak_compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl Poset {
    fn build(
        n: u32,
        r: usize,
        kind: PosetKind,
        m: Option<Vec<u32>>,
        mut elements: Vec<Multicomposition>,
    ) -> Poset {
        elements.sort();
        elements.dedup();
        let plus = elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_partition())
            .map(|(i, _)| i)
            .collect::<Vec<_>>();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut poset = Poset { n, r, kind, m, elements, plus, saturated: false, index };
        poset.saturated = poset.check_saturated();
        poset
    }

    /// `P~_{n,r}(m)`: all multicompositions of `n` whose component `i` has
    /// exactly `m_i` parts (zeros allowed), in canonical order.
    pub fn enumerate_lambda(n: u32, r: usize, m: &[u32]) -> Poset {
        assert!(n >= 1 && r >= 1);
        assert_eq!(m.len(), r);
        let total: u32 = m.iter().sum();
        let mut elements = Vec::new();
        for flat in weak_compositions(n, total as usize) {
            let mut comps = Vec::with_capacity(r);
            let mut at = 0usize;
            for &mi in m {
                comps.push(flat[at..at + mi as usize].to_vec());
                at += mi as usize;
            }
            elements.push(Multicomposition::new(comps));
        }
        Poset::build(n, r, PosetKind::PTilde, Some(m.to_vec()), elements)
    }

    /// All r-partitions of `n`.
    pub fn partitions_only(n: u32, r: usize) -> Poset {
        let elements =
            all_r_partitions(n, r).into_iter().map(|p| p.inner().clone()).collect();
        Poset::build(n, r, PosetKind::PartitionsOnly, None, elements)
    }

    fn check_saturated(&self) -> bool {
        for lam in all_r_partitions(self.n, self.r) {
            if self.index_of(lam.inner()).is_some() {
                continue;
            }
            for mu in &self.elements {
                if lam.dominates(mu).unwrap_or(false) {
                    return false;
                }
            }
        }
        true
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, mc: &Multicomposition) -> Option<usize> {
        self.index.get(mc).copied()
    }

    pub fn element(&self, i: usize) -> &Multicomposition {
        &self.elements[i]
    }

    /// Multipartitions of the poset, in canonical order.
    pub fn partitions(&self) -> Vec<Multipartition> {
        self.plus.iter().map(|&i| self.elements[i].as_partition().unwrap()).collect()
    }

    /// The poset `Omega`: all `(lambda, 0)` for `lambda` in `Lambda+`, and
    /// `(lambda, 1)` whenever some `mu` in `Lambda` has a nonempty
    /// `T_0(lambda, mu)` with `a(lambda) > a(mu)`.
    pub fn omega(&self) -> Omega {
        let mut cells = Vec::new();
        for (pp, &ei) in self.plus.iter().enumerate() {
            let lam = self.elements[ei].as_partition().unwrap();
            let a_lam = lam.avec();
            cells.push(OmegaCell { plus_pos: pp, eps: 0 });
            let keep = self.elements.iter().any(|mu| {
                let a_mu = mu.avec();
                let ge = a_lam.iter().zip(&a_mu).all(|(x, y)| x >= y);
                let strict = ge && a_lam != a_mu;
                strict && !semistandard_tableaux(&lam, mu).is_empty()
            });
            if keep {
                cells.push(OmegaCell { plus_pos: pp, eps: 1 });
            }
        }
        Omega { cells }
    }
}

/// One element of `Omega`: a multipartition (by its position in the
/// canonical `Lambda+` list) and an epsilon in {0, 1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OmegaCell {
    pub plus_pos: usize,
    pub eps: u8,
}

#[derive(Clone, Debug)]
pub struct Omega {
    pub cells: Vec<OmegaCell>,
}

impl Omega {
    pub fn contains(&self, c: OmegaCell) -> bool {
        self.cells.contains(&c)
    }

    /// `(lambda_1, e_1) > (lambda_2, e_2)` iff `lambda_1` strictly dominates
    /// `lambda_2`, or they are equal and `e_1 > e_2`.
    pub fn gt(poset: &Poset, a: OmegaCell, b: OmegaCell) -> bool {
        let plus = &poset.plus;
        let la = poset.element(plus[a.plus_pos]);
        let lb = poset.element(plus[b.plus_pos]);
        if la == lb {
            return a.eps > b.eps;
        }
        la.strictly_dominates(lb).unwrap_or(false)
    }
}
