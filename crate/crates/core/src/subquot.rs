//! The subalgebra `S0(Lambda)` spanned by `C0(Lambda)`, its standardly based
//! structure over the poset `Omega`, the ideal `S00`, the cellular quotient
//! `bar S0`, the Weyl modules `Z^{(lambda,eps)}` and `bar Z^lambda` with
//! their forms, and the verification engines for the multiplication laws,
//! the tensor theorem, and the decomposition-number identities.

use crate::exactla::{ExactMatrix, RowSpace, Scalar};
use crate::multicomb::{lambda_dagger, OmegaCell};
use crate::repkit::{DecompMatrix, ModuleRep, SparseMat, SplitMix64};
use crate::schuralg::{SchurCtx, SchurElt, SchurError, SchurIdx};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

/// One verification outcome, shaped for machine-readable reports.
#[derive(Clone, Debug)]
pub struct Check {
    pub id: String,
    pub instance: String,
    pub pass: bool,
    pub witness: String,
}

impl Check {
    pub fn pass(id: &str, instance: &str, witness: &str) -> Check {
        Check { id: id.into(), instance: instance.into(), pass: true, witness: witness.into() }
    }

    pub fn fail(id: &str, instance: &str, witness: &str) -> Check {
        Check { id: id.into(), instance: instance.into(), pass: false, witness: witness.into() }
    }
}

/// Classification data for `C0(Lambda)` inside a Schur context.
pub struct C0Ctx<'a> {
    pub s: &'a SchurCtx<'a>,
    /// Omega cells in listing order: `(shape position, eps)`.
    pub cells: Vec<(usize, u8)>,
    /// classification of each Schur basis index, `None` when outside `C0`.
    pub class_of: Vec<Option<(usize, u8)>>,
    /// `C0` indices in basis order.
    pub c0: Vec<u32>,
    /// `I(lambda, eps)` as tableau positions in `t0[lam]`.
    pub i_sets: BTreeMap<(usize, u8), Vec<usize>>,
    /// `J(lambda, eps)` likewise.
    pub j_sets: BTreeMap<(usize, u8), Vec<usize>>,
}

fn avec_strict_gt(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y) && a != b
}

impl<'a> C0Ctx<'a> {
    pub fn new(s: &'a SchurCtx<'a>) -> C0Ctx<'a> {
        let avecs: Vec<Vec<u32>> = s.poset.elements.iter().map(|e| e.avec()).collect();
        let shape_avec: Vec<Vec<u32>> = s.shapes.iter().map(|l| l.avec()).collect();
        let mut class_of = Vec::with_capacity(s.basis.len());
        let mut c0 = Vec::new();
        for (bi, ix) in s.basis.iter().enumerate() {
            let a_lam = &shape_avec[ix.lam];
            let a_mu = &avecs[s.t0_type[ix.lam][ix.s]];
            let a_nu = &avecs[s.t0_type[ix.lam][ix.t]];
            let class = if a_mu == a_lam && a_nu == a_lam {
                Some((ix.lam, 0u8))
            } else if avec_strict_gt(a_lam, a_mu) {
                Some((ix.lam, 1u8))
            } else {
                None
            };
            if class.is_some() {
                c0.push(bi as u32);
            }
            class_of.push(class);
        }
        let omega = s.poset.omega();
        let mut cells = Vec::new();
        let mut i_sets = BTreeMap::new();
        let mut j_sets = BTreeMap::new();
        for cell in &omega.cells {
            let (li, eps) = (cell.plus_pos, cell.eps);
            cells.push((li, eps));
            let dim = s.t0[li].len();
            let a_lam = &shape_avec[li];
            let (iset, jset): (Vec<usize>, Vec<usize>) = if eps == 0 {
                let plus: Vec<usize> = (0..dim).filter(|&p| s.t0_plus[li][p]).collect();
                (plus.clone(), plus)
            } else {
                let strict: Vec<usize> = (0..dim)
                    .filter(|&p| avec_strict_gt(a_lam, &avecs[s.t0_type[li][p]]))
                    .collect();
                (strict, (0..dim).collect())
            };
            assert!(!iset.is_empty() && !jset.is_empty(), "Omega cells have nonempty index sets");
            i_sets.insert((li, eps), iset);
            j_sets.insert((li, eps), jset);
        }
        C0Ctx { s, cells, class_of, c0, i_sets, j_sets }
    }

    pub fn class(&self, bi: u32) -> Option<(usize, u8)> {
        self.class_of[bi as usize]
    }

    /// `(lam1, e1) > (lam2, e2)` in the Omega order.
    pub fn cell_gt(&self, a: (usize, u8), b: (usize, u8)) -> bool {
        crate::multicomb::Omega::gt(
            self.s.poset,
            OmegaCell { plus_pos: a.0, eps: a.1 },
            OmegaCell { plus_pos: b.0, eps: b.1 },
        )
    }

    /// The disjoint-union identity: every classified index is in exactly one
    /// `I(cell) x J(cell)` box, and each box is exactly the classified set.
    pub fn c0_partition_check(&self) -> Check {
        let mut total = 0usize;
        for &(li, eps) in &self.cells {
            let iset = &self.i_sets[&(li, eps)];
            let jset = &self.j_sets[&(li, eps)];
            total += iset.len() * jset.len();
            for &s in iset {
                for &t in jset {
                    let bi = self.s.idx_of(SchurIdx { lam: li, s, t });
                    if self.class(bi) != Some((li, eps)) {
                        return Check::fail(
                            "c0-partition",
                            &format!("cell ({li},{eps})"),
                            &format!("index ({li},{s},{t}) classified {:?}", self.class(bi)),
                        );
                    }
                }
            }
        }
        if total != self.c0.len() {
            return Check::fail(
                "c0-partition",
                "count",
                &format!("sum |I||J| = {total} but |C0| = {}", self.c0.len()),
            );
        }
        Check::pass("c0-partition", "all cells", &format!("|C0| = {total}"))
    }

    /// Closure and the four support cases of the sharper multiplication law.
    pub fn closure_check(
        &self,
        sample: Option<(usize, u64)>,
    ) -> Result<Vec<Check>, SchurError> {
        let s = self.s;
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        match sample {
            None => {
                for &i in &self.c0 {
                    for &j in &self.c0 {
                        pairs.push((i, j));
                    }
                }
            }
            Some((count, seed)) => {
                let mut rng = SplitMix64::new(seed);
                while pairs.len() < count {
                    let i = self.c0[rng.below(self.c0.len())];
                    let j = self.c0[rng.below(self.c0.len())];
                    pairs.push((i, j));
                }
            }
        }
        let mut checked = 0usize;
        for (i, j) in pairs {
            let a = s.basis[i as usize];
            let b = s.basis[j as usize];
            if s.t0_type[a.lam][a.t] != s.t0_type[b.lam][b.s] {
                continue; // delta-vanishing: nothing to check
            }
            checked += 1;
            let (l1, e1) = self.class(i).unwrap();
            let (l2, e2) = self.class(j).unwrap();
            let prod = s.compose(i, j)?;
            for (k, _) in &prod.terms {
                let ix = s.basis[*k as usize];
                let Some((lk, ek)) = self.class(*k) else {
                    return Ok(vec![Check::fail(
                        "c0-closure",
                        &format!("({i},{j})"),
                        &format!("term {ix:?} escapes C0"),
                    )]);
                };
                let dominates =
                    |hi: usize, lo: usize| s.shapes[hi].dominates(&s.shapes[lo]).unwrap();
                let mut ok = true;
                if e1 == 0 {
                    ok &= (lk == l1 && ek == 0)
                        || s.shapes[lk].strictly_dominates(&s.shapes[l1]).unwrap();
                } else {
                    ok &= ek == 1 && dominates(lk, l1);
                }
                if e2 == 0 {
                    ok &= dominates(lk, l2);
                } else {
                    ok &= ek == 1 && dominates(lk, l2);
                }
                if !ok {
                    return Ok(vec![Check::fail(
                        "c0-closure",
                        &format!("({i},{j}) cases e1={e1} e2={e2}"),
                        &format!("term at cell ({lk},{ek})"),
                    )]);
                }
            }
        }
        let mut out = vec![Check::pass(
            "c0-closure",
            "support cases",
            &format!("{checked} nonzero products checked"),
        )];
        // the identity lies in S0
        for mu in 0..s.poset.len() {
            let pm = s.phi_mu(mu)?;
            for (k, _) in &pm.terms {
                if self.class(*k).is_none() {
                    out.push(Check::fail(
                        "c0-closure",
                        "identity",
                        &format!("phi_mu({mu}) has a term outside C0"),
                    ));
                    return Ok(out);
                }
            }
        }
        out.push(Check::pass("c0-closure", "identity", "1 in S0(Lambda)"));
        Ok(out)
    }

    /// The standardly based multiplication laws over `(Omega, >=)`: row and
    /// column coefficient systems independent of the other index, congruence
    /// support bounded by the cell, plus the full-based witnesses.
    pub fn standardly_based_check(
        &self,
        sample: Option<(usize, u64)>,
    ) -> Result<Vec<Check>, SchurError> {
        let s = self.s;
        let phis: Vec<u32> = match sample {
            None => self.c0.clone(),
            Some((count, seed)) => {
                let mut rng = SplitMix64::new(seed);
                (0..count).map(|_| self.c0[rng.below(self.c0.len())]).collect()
            }
        };
        let mut out = Vec::new();
        for &(li, eps) in &self.cells {
            let iset = &self.i_sets[&(li, eps)];
            let jset = &self.j_sets[&(li, eps)];
            for &g in &phis {
                // right law: phi_{ST} . g = sum_T' f(T, g) phi_{ST'} + higher,
                // with f independent of S
                for &t in jset.iter() {
                    let mut per_s: Vec<BTreeMap<usize, Scalar>> = Vec::new();
                    for &sx in iset.iter() {
                        let i = s.idx_of(SchurIdx { lam: li, s: sx, t });
                        let prod = s.compose(i, g)?;
                        let mut row = BTreeMap::new();
                        for (k, c) in &prod.terms {
                            let cls = self.class(*k).expect("closure");
                            if cls == (li, eps) {
                                let ix = s.basis[*k as usize];
                                if ix.s != sx {
                                    out.push(Check::fail(
                                        "standardly-based",
                                        &format!("cell ({li},{eps}) right law"),
                                        "first index not preserved",
                                    ));
                                    return Ok(out);
                                }
                                row.insert(ix.t, c.clone());
                            } else if !self.cell_gt(cls, (li, eps)) {
                                out.push(Check::fail(
                                    "standardly-based",
                                    &format!("cell ({li},{eps}) right law"),
                                    &format!("term at non-higher cell ({},{})", cls.0, cls.1),
                                ));
                                return Ok(out);
                            }
                        }
                        per_s.push(row);
                    }
                    if per_s.windows(2).any(|w| w[0] != w[1]) {
                        out.push(Check::fail(
                            "standardly-based",
                            &format!("cell ({li},{eps})"),
                            "right coefficients depend on S",
                        ));
                        return Ok(out);
                    }
                }
                // left law: g . phi_{ST} = sum_S' f(g, S) phi_{S'T} + higher,
                // with f independent of T
                for &sx in iset.iter() {
                    let mut per_t: Vec<BTreeMap<usize, Scalar>> = Vec::new();
                    for &t in jset.iter() {
                        let i = s.idx_of(SchurIdx { lam: li, s: sx, t });
                        let prod = s.compose(g, i)?;
                        let mut col = BTreeMap::new();
                        for (k, c) in &prod.terms {
                            let cls = self.class(*k).expect("closure");
                            if cls == (li, eps) {
                                let ix = s.basis[*k as usize];
                                if ix.t != t {
                                    out.push(Check::fail(
                                        "standardly-based",
                                        &format!("cell ({li},{eps}) left law"),
                                        "second index not preserved",
                                    ));
                                    return Ok(out);
                                }
                                col.insert(ix.s, c.clone());
                            } else if !self.cell_gt(cls, (li, eps)) {
                                out.push(Check::fail(
                                    "standardly-based",
                                    &format!("cell ({li},{eps}) left law"),
                                    &format!("term at non-higher cell ({},{})", cls.0, cls.1),
                                ));
                                return Ok(out);
                            }
                        }
                        per_t.push(col);
                    }
                    if per_t.windows(2).any(|w| w[0] != w[1]) {
                        out.push(Check::fail(
                            "standardly-based",
                            &format!("cell ({li},{eps})"),
                            "left coefficients depend on T",
                        ));
                        return Ok(out);
                    }
                }
            }
        }
        out.push(Check::pass(
            "standardly-based",
            "coefficient laws",
            &format!("{} cells, {} multipliers", self.cells.len(), phis.len()),
        ));
        out.extend(self.full_based_witness()?);
        Ok(out)
    }

    /// Full-basedness witnesses: at `(lambda,0)` the canonical idempotent
    /// gives beta-image 1; at `(lambda,1)` the dagger tableau satisfies
    /// `phi^2 = c phi` modulo higher cells, with `c` invertible whenever
    /// `P_n` is. The scalar `c` is solved from the congruence, never assumed.
    pub fn full_based_witness(&self) -> Result<Vec<Check>, SchurError> {
        let s = self.s;
        let (pn, pn_inv) = crate::exactla::pn_value(&s.h.spec, s.h.n);
        let mut out = Vec::new();
        for &(li, eps) in &self.cells {
            if eps == 0 {
                let canon = s.tcanon[li];
                let d = s.idx_of(SchurIdx { lam: li, s: canon, t: canon });
                let prod = s.compose(d, d)?;
                let c = prod.coeff(d, &s.h.spec.zero());
                out.push(if c.is_one() {
                    Check::pass(
                        "full-based",
                        &format!("({},0)", s.shapes[li]),
                        "beta image contains 1",
                    )
                } else {
                    Check::fail(
                        "full-based",
                        &format!("({},0)", s.shapes[li]),
                        "phi_lambda not idempotent",
                    )
                });
                continue;
            }
            let lam = &s.shapes[li];
            let (dag, dag_tab) = match lambda_dagger(lam) {
                Ok(x) => x,
                Err(e) => {
                    out.push(Check::fail(
                        "full-based",
                        &format!("({lam},1)"),
                        &format!("dagger undefined: {e}"),
                    ));
                    continue;
                }
            };
            if s.poset.index_of(dag.inner()).is_none() {
                out.push(Check::fail(
                    "full-based",
                    &format!("({lam},1)"),
                    &format!("dagger {dag} not in Lambda"),
                ));
                continue;
            }
            let pos = s.t0[li]
                .iter()
                .position(|t| *t == dag_tab)
                .expect("T^dagger is a semistandard tableau of the cell shape");
            assert!(self.i_sets[&(li, 1)].contains(&pos), "T^dagger lies in I(lambda,1)");
            let d = s.idx_of(SchurIdx { lam: li, s: pos, t: pos });
            let prod = s.compose(d, d)?;
            let mut c = s.h.spec.zero();
            let mut clean = true;
            for (k, coeff) in &prod.terms {
                let cls = self.class(*k).expect("closure");
                if cls == (li, 1) {
                    if *k == d {
                        c = coeff.clone();
                    } else {
                        clean = false;
                    }
                } else if !self.cell_gt(cls, (li, 1)) {
                    clean = false;
                }
            }
            let ok = clean && (!pn_inv || !c.is_zero());
            let witness = format!(
                "c = {}, P_n = {}{}",
                c.serialize(),
                pn.serialize(),
                if clean { "" } else { " (extra low terms!)" }
            );
            out.push(if ok {
                Check::pass("full-based", &format!("({lam},1) dagger {dag}"), &witness)
            } else {
                Check::fail("full-based", &format!("({lam},1) dagger {dag}"), &witness)
            });
        }
        Ok(out)
    }

    /// The canonical `S0`-action label list: weight projectors, then the
    /// eps = 0 column and row elements through each `T^alpha`.
    pub fn s0_action_labels(&self) -> Vec<String> {
        let s = self.s;
        let mut labels = Vec::new();
        for mu in 0..s.poset.len() {
            labels.push(format!("proj:{mu}"));
        }
        for (li, plus) in s.t0_plus.iter().enumerate() {
            for (p, &is_plus) in plus.iter().enumerate() {
                if is_plus {
                    labels.push(format!("e0col:{li}:{p}"));
                }
            }
        }
        for (li, plus) in s.t0_plus.iter().enumerate() {
            for (p, &is_plus) in plus.iter().enumerate() {
                if is_plus {
                    labels.push(format!("e0row:{li}:{p}"));
                }
            }
        }
        labels
    }

    /// The `S0`-element behind one action label.
    pub fn s0_label_elt(&self, label: &str) -> Result<SchurElt, SchurError> {
        let s = self.s;
        let mut it = label.split(':');
        match it.next().unwrap() {
            "proj" => {
                let mu: usize = it.next().unwrap().parse().unwrap();
                Ok((*s.phi_mu(mu)?).clone())
            }
            "e0col" => {
                let li: usize = it.next().unwrap().parse().unwrap();
                let p: usize = it.next().unwrap().parse().unwrap();
                let idx = s.idx_of(SchurIdx { lam: li, s: p, t: s.tcanon[li] });
                Ok(SchurElt::single(idx, s.h.spec.one()))
            }
            "e0row" => {
                let li: usize = it.next().unwrap().parse().unwrap();
                let p: usize = it.next().unwrap().parse().unwrap();
                let idx = s.idx_of(SchurIdx { lam: li, s: s.tcanon[li], t: p });
                Ok(SchurElt::single(idx, s.h.spec.one()))
            }
            other => panic!("unknown action label {other}"),
        }
    }

    /// The Weyl module `Z^{(lambda,eps)}_S` over `S0(Lambda)`: basis
    /// `J(lambda,eps)`, action through compose reduced at the Omega cell.
    pub fn z_module(&self, cell: (usize, u8), s_choice: usize) -> Result<ZModule, SchurError> {
        let s = self.s;
        let (li, eps) = cell;
        assert!(self.i_sets[&cell].contains(&s_choice), "S must lie in I(lambda,eps)");
        let jset = self.j_sets[&cell].clone();
        let dim = jset.len();
        let jpos: HashMap<usize, usize> =
            jset.iter().enumerate().map(|(a, &p)| (p, a)).collect();
        let labels = self.s0_action_labels();
        let mut gens = Vec::new();
        for label in &labels {
            let elt = self.s0_label_elt(label)?;
            let mut rows = vec![Vec::new(); dim];
            let mut any = false;
            for (a, &t) in jset.iter().enumerate() {
                let base = s.idx_of(SchurIdx { lam: li, s: s_choice, t });
                for (k, ck) in &elt.terms {
                    let gx = s.basis[*k as usize];
                    if s.t0_type[li][t] != s.t0_type[gx.lam][gx.s] {
                        continue;
                    }
                    let prod = s.compose(base, *k)?;
                    for (k2, c2) in &prod.terms {
                        let cls = self.class(*k2).expect("closure");
                        if cls == cell {
                            let ix = s.basis[*k2 as usize];
                            assert_eq!(ix.s, s_choice, "standard basis keeps the row index");
                            let col = jpos[&ix.t];
                            let c = c2.mul(ck);
                            if !c.is_zero() {
                                rows[a].push((col as u32, c));
                                any = true;
                            }
                        } else {
                            assert!(
                                self.cell_gt(cls, cell),
                                "Z-action support must be >= the cell"
                            );
                        }
                    }
                }
                rows[a] = merge_sparse(std::mem::take(&mut rows[a]));
            }
            if any {
                gens.push((label.clone(), SparseMat { dim_in: dim, dim_out: dim, rows }));
            }
        }
        let gram0 = if eps == 0 {
            // read the form off phi_{US} phi_{TV} = r phi_{UV} + higher, with
            // (U, V) the last eps = 0 index (the Weyl-module route reads the
            // T^lambda coefficient instead)
            let iset = &self.i_sets[&cell];
            let u = *iset.last().unwrap();
            let target = s.idx_of(SchurIdx { lam: li, s: u, t: u });
            let mut g = ExactMatrix::zeros(&s.h.spec, dim, dim);
            for (a, &sx) in jset.iter().enumerate() {
                for (b, &t) in jset.iter().enumerate() {
                    if s.t0_type[li][sx] != s.t0_type[li][t] {
                        continue;
                    }
                    let prod = s.compose(
                        s.idx_of(SchurIdx { lam: li, s: u, t: sx }),
                        s.idx_of(SchurIdx { lam: li, s: t, t: u }),
                    )?;
                    for (k2, c2) in &prod.terms {
                        let cls = self.class(*k2).expect("closure");
                        if cls == cell {
                            assert_eq!(*k2, target, "form lands on phi_UV alone");
                            g.set(a, b, c2.clone());
                        }
                    }
                }
            }
            Some(g)
        } else {
            None
        };
        let rep = ModuleRep {
            spec: s.h.spec.clone(),
            dim,
            gens,
            all_labels: labels,
            gram: gram0.clone(),
        };
        Ok(ZModule { cell, s_choice, basis: jset, rep, gram0 })
    }

    /// `rad Z^{(lambda,0)}` and the simple head `L0^lambda`.
    pub fn z_simple_head(&self, z: &ZModule) -> (usize, ModuleRep) {
        let gram = z.gram0.as_ref().expect("simple head needs the eps = 0 form");
        let mut space = RowSpace::new(z.rep.dim);
        for v in gram.left_nullspace() {
            space.insert(v);
        }
        for (_, g) in &z.rep.gens {
            for v in space.basis() {
                let img = g.apply(&v, &self.s.h.spec.zero());
                assert!(space.contains(&img), "rad Z must be an S0-submodule");
            }
        }
        let head = z.rep.quotient(&space);
        (head.dim, head)
    }
}

fn merge_sparse(mut row: Vec<(u32, Scalar)>) -> Vec<(u32, Scalar)> {
    row.sort_by_key(|(c, _)| *c);
    let mut out: Vec<(u32, Scalar)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        if let Some(last) = out.last_mut() {
            if last.0 == c {
                last.1 = last.1.add(&v);
                continue;
            }
        }
        out.push((c, v));
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// A Weyl module of `S0(Lambda)` at an Omega cell.
pub struct ZModule {
    pub cell: (usize, u8),
    pub s_choice: usize,
    /// tableau positions of the basis (the `J` set).
    pub basis: Vec<usize>,
    pub rep: ModuleRep,
    pub gram0: Option<ExactMatrix>,
}

/// The cellular quotient `bar S0 = S0 / S00`, with structure constants
/// obtained by truncating `S0`-products to their eps = 0 part.
pub struct BarCtx<'a> {
    pub c0: &'a C0Ctx<'a>,
    /// eps = 0 Schur basis indices, in basis order.
    pub basis: Vec<u32>,
    pos: HashMap<u32, usize>,
    memo: Mutex<BTreeMap<(usize, usize), Arc<Vec<(usize, Scalar)>>>>,
}

impl<'a> BarCtx<'a> {
    pub fn new(c0: &'a C0Ctx<'a>) -> BarCtx<'a> {
        let basis: Vec<u32> =
            c0.c0.iter().copied().filter(|&b| c0.class(b).unwrap().1 == 0).collect();
        let pos = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        BarCtx { c0, basis, pos, memo: Mutex::new(BTreeMap::new()) }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn bar_pos(&self, schur_idx: u32) -> Option<usize> {
        self.pos.get(&schur_idx).copied()
    }

    /// Structure product in the quotient: eps = 1 terms are killed.
    pub fn bar_mul(&self, i: usize, j: usize) -> Result<Arc<Vec<(usize, Scalar)>>, SchurError> {
        if let Some(e) = self.memo.lock().unwrap().get(&(i, j)) {
            return Ok(e.clone());
        }
        let prod = self.c0.s.compose(self.basis[i], self.basis[j])?;
        let mut out = Vec::new();
        for (k, c) in &prod.terms {
            match self.c0.class(*k) {
                Some((_, 0)) => out.push((self.pos[k], c.clone())),
                Some(_) => {} // S00 maps to zero in the quotient
                None => {
                    return Err(SchurError::Expansion(
                        "bar product escaped C0 (ideal violation)".into(),
                    ))
                }
            }
        }
        let arc = Arc::new(out);
        self.memo.lock().unwrap().insert((i, j), arc.clone());
        Ok(arc)
    }

    /// `S00` is a two-sided ideal: products with an eps = 1 factor stay in
    /// the eps = 1 span.
    pub fn ideal_check(&self, sample: Option<(usize, u64)>) -> Result<Check, SchurError> {
        let c0 = self.c0;
        let s = c0.s;
        let ones: Vec<u32> =
            c0.c0.iter().copied().filter(|&b| c0.class(b).unwrap().1 == 1).collect();
        if ones.is_empty() {
            return Ok(Check::pass("s00-ideal", "two-sided", "S00 = 0"));
        }
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        match sample {
            None => {
                for &x in &c0.c0 {
                    for &y in &ones {
                        pairs.push((x, y));
                        pairs.push((y, x));
                    }
                }
            }
            Some((count, seed)) => {
                let mut rng = SplitMix64::new(seed);
                for _ in 0..count {
                    let x = c0.c0[rng.below(c0.c0.len())];
                    let y = ones[rng.below(ones.len())];
                    pairs.push((x, y));
                    pairs.push((y, x));
                }
            }
        }
        let mut count = 0usize;
        for (x, y) in pairs {
            let prod = s.compose(x, y)?;
            count += 1;
            for (k, _) in &prod.terms {
                match c0.class(*k) {
                    Some((_, 1)) => {}
                    other => {
                        return Ok(Check::fail(
                            "s00-ideal",
                            &format!("({x},{y})"),
                            &format!("term classified {other:?}"),
                        ))
                    }
                }
            }
        }
        Ok(Check::pass("s00-ideal", "two-sided", &format!("{count} products checked")))
    }

    /// The map `f(phi_{ST}) = bar phi_{TS}` (eps = 0), else 0, is an algebra
    /// anti-homomorphism with kernel `S00`; and the quotient involution is
    /// anti-multiplicative.
    pub fn antihom_check(&self, sample: Option<(usize, u64)>) -> Result<Vec<Check>, SchurError> {
        let c0 = self.c0;
        let s = c0.s;
        let transpose = |i: usize| -> usize {
            let ix = s.basis[self.basis[i] as usize];
            self.pos[&s.idx_of(SchurIdx { lam: ix.lam, s: ix.t, t: ix.s })]
        };
        let f_of = |bi: u32| -> Option<usize> {
            match c0.class(bi) {
                Some((_, 0)) => {
                    let ix = s.basis[bi as usize];
                    Some(self.pos[&s.idx_of(SchurIdx { lam: ix.lam, s: ix.t, t: ix.s })])
                }
                _ => None,
            }
        };
        let mut pairs: Vec<(u32, u32)> = Vec::new();
        match sample {
            None => {
                for &x in &c0.c0 {
                    for &y in &c0.c0 {
                        pairs.push((x, y));
                    }
                }
            }
            Some((count, seed)) => {
                let mut rng = SplitMix64::new(seed);
                for _ in 0..count {
                    pairs
                        .push((c0.c0[rng.below(c0.c0.len())], c0.c0[rng.below(c0.c0.len())]));
                }
            }
        }
        for (x, y) in pairs {
            // f(x y) as a bar vector
            let prod = s.compose(x, y)?;
            let mut lhs: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (k, c) in &prod.terms {
                match c0.class(*k) {
                    Some((_, 0)) => {
                        let ix = s.basis[*k as usize];
                        let p = self.pos[&s.idx_of(SchurIdx { lam: ix.lam, s: ix.t, t: ix.s })];
                        let e = lhs.entry(p).or_insert_with(|| s.h.spec.zero());
                        *e = e.add(c);
                    }
                    Some(_) => {}
                    None => {
                        return Ok(vec![Check::fail("f-antihom", "closure", "term outside C0")])
                    }
                }
            }
            lhs.retain(|_, v| !v.is_zero());
            // f(y) f(x) in the bar algebra
            let mut rhs: BTreeMap<usize, Scalar> = BTreeMap::new();
            if let (Some(fy), Some(fx)) = (f_of(y), f_of(x)) {
                for (p, c) in self.bar_mul(fy, fx)?.iter() {
                    let e = rhs.entry(*p).or_insert_with(|| s.h.spec.zero());
                    *e = e.add(c);
                }
            }
            rhs.retain(|_, v| !v.is_zero());
            if lhs != rhs {
                return Ok(vec![Check::fail(
                    "f-antihom",
                    &format!("({x},{y})"),
                    "f(xy) != f(y) f(x)",
                )]);
            }
        }
        // quotient involution anti-multiplicative on sampled pairs
        let mut rng = SplitMix64::new(13);
        for _ in 0..100.min(self.dim() * self.dim()) {
            let i = rng.below(self.dim());
            let j = rng.below(self.dim());
            let prod = self.bar_mul(i, j)?;
            let mut lhs: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (p, c) in prod.iter() {
                lhs.insert(transpose(*p), c.clone());
            }
            let mut rhs: BTreeMap<usize, Scalar> = BTreeMap::new();
            for (p, c) in self.bar_mul(transpose(j), transpose(i))?.iter() {
                rhs.insert(*p, c.clone());
            }
            if lhs != rhs {
                return Ok(vec![Check::fail(
                    "bar-star",
                    &format!("({i},{j})"),
                    "not anti-multiplicative",
                )]);
            }
        }
        Ok(vec![
            Check::pass("f-antihom", "kernel S00", "f(xy) = f(y) f(x) on all checked pairs"),
            Check::pass("bar-star", "involution", "anti-multiplicative on the quotient"),
        ])
    }

    /// The cell module `bar Z^lambda` with its form, over the same label
    /// list as the `Z`-modules (projectors act through the quotient).
    pub fn bar_weyl(&self, li: usize) -> Result<ZModule, SchurError> {
        let c0 = self.c0;
        let s = c0.s;
        let jset: Vec<usize> = (0..s.t0[li].len()).filter(|&p| s.t0_plus[li][p]).collect();
        let dim = jset.len();
        let jpos: HashMap<usize, usize> =
            jset.iter().enumerate().map(|(a, &p)| (p, a)).collect();
        let canon = s.tcanon[li];
        let labels = c0.s0_action_labels();
        let mut gens = Vec::new();
        for label in &labels {
            let elt = c0.s0_label_elt(label)?;
            // image in the quotient: keep the eps = 0 part
            let mut bar_terms: Vec<(usize, Scalar)> = Vec::new();
            for (k, c) in &elt.terms {
                if let Some((_, 0)) = c0.class(*k) {
                    bar_terms.push((self.pos[k], c.clone()));
                }
            }
            let mut rows = vec![Vec::new(); dim];
            let mut any = false;
            for (a, &t) in jset.iter().enumerate() {
                let base = self.pos[&s.idx_of(SchurIdx { lam: li, s: canon, t })];
                for (g, cg) in &bar_terms {
                    let gx = s.basis[self.basis[*g] as usize];
                    if s.t0_type[li][t] != s.t0_type[gx.lam][gx.s] {
                        continue;
                    }
                    let prod = self.bar_mul(base, *g)?;
                    for (p, c) in prod.iter() {
                        let ix = s.basis[self.basis[*p] as usize];
                        if ix.lam == li {
                            assert_eq!(ix.s, canon, "bar cell row keeps the first index");
                            let col = jpos[&ix.t];
                            let v = c.mul(cg);
                            if !v.is_zero() {
                                rows[a].push((col as u32, v));
                                any = true;
                            }
                        } else {
                            assert!(
                                s.shapes[ix.lam].strictly_dominates(&s.shapes[li]).unwrap(),
                                "bar support dominates the cell"
                            );
                        }
                    }
                }
                rows[a] = merge_sparse(std::mem::take(&mut rows[a]));
            }
            if any {
                gens.push((label.clone(), SparseMat { dim_in: dim, dim_out: dim, rows }));
            }
        }
        // form on bar Z^lambda
        let mut gram = ExactMatrix::zeros(&s.h.spec, dim, dim);
        let diag = self.pos[&s.idx_of(SchurIdx { lam: li, s: canon, t: canon })];
        for (a, &sx) in jset.iter().enumerate() {
            for (b, &t) in jset.iter().enumerate() {
                if s.t0_type[li][sx] != s.t0_type[li][t] {
                    continue;
                }
                let prod = self.bar_mul(
                    self.pos[&s.idx_of(SchurIdx { lam: li, s: canon, t: sx })],
                    self.pos[&s.idx_of(SchurIdx { lam: li, s: t, t: canon })],
                )?;
                for (p, c) in prod.iter() {
                    let ix = s.basis[self.basis[*p] as usize];
                    if ix.lam == li {
                        assert_eq!(*p, diag, "bar form lands on bar phi_lambda");
                        gram.set(a, b, c.clone());
                    }
                }
            }
        }
        let rep = ModuleRep {
            spec: s.h.spec.clone(),
            dim,
            gens,
            all_labels: labels,
            gram: Some(gram.clone()),
        };
        Ok(ZModule { cell: (li, 0), s_choice: canon, basis: jset, rep, gram0: Some(gram) })
    }
}

/// `[Z^{(lambda,0)} : L0^mu]` by chopping.
pub fn z_decomp(c0: &C0Ctx, seed: u64) -> Result<DecompMatrix, SchurError> {
    let s = c0.s;
    let mut family = Vec::new();
    let mut library = Vec::new();
    for li in 0..s.shapes.len() {
        let z = c0.z_module((li, 0), s.tcanon[li])?;
        let (dim_l, head) = c0.z_simple_head(&z);
        assert!(dim_l >= 1, "L0 is nonzero for every shape");
        family.push((s.shapes[li].clone(), z.rep));
        library.push((s.shapes[li].clone(), head));
    }
    crate::repkit::decomp_matrix(&family, &library, seed)
        .map_err(|e| SchurError::Expansion(format!("z chop: {e}")))
}

/// `[bar Z^lambda : bar L^mu]` by chopping in the quotient algebra.
pub fn bar_decomp(bar: &BarCtx, seed: u64) -> Result<DecompMatrix, SchurError> {
    let s = bar.c0.s;
    let mut family = Vec::new();
    let mut library = Vec::new();
    for li in 0..s.shapes.len() {
        let z = bar.bar_weyl(li)?;
        let gram = z.gram0.as_ref().unwrap();
        let mut space = RowSpace::new(z.rep.dim);
        for v in gram.left_nullspace() {
            space.insert(v);
        }
        for (_, g) in &z.rep.gens {
            for v in space.basis() {
                let img = g.apply(&v, &s.h.spec.zero());
                assert!(space.contains(&img), "rad bar Z must be a submodule");
            }
        }
        let head = z.rep.quotient(&space);
        assert!(head.dim >= 1, "bar L is nonzero for every shape");
        family.push((s.shapes[li].clone(), z.rep));
        library.push((s.shapes[li].clone(), head));
    }
    crate::repkit::decomp_matrix(&family, &library, seed)
        .map_err(|e| SchurError::Expansion(format!("bar chop: {e}")))
}

/// Character-method oracle for `[Z^{(lambda,0)} : L0^mu]`: weight counts on
/// `T_0+` and Gram-block ranks, no chopping.
pub fn z_character_decomp(c0: &C0Ctx) -> Result<DecompMatrix, SchurError> {
    let s = c0.s;
    let nl = s.shapes.len();
    let nw = s.poset.len();
    let mut char_z = vec![vec![0i64; nw]; nl];
    for li in 0..nl {
        for p in 0..s.t0[li].len() {
            if s.t0_plus[li][p] {
                char_z[li][s.t0_type[li][p]] += 1;
            }
        }
    }
    let mut char_l = vec![vec![0i64; nw]; nl];
    for li in 0..nl {
        let z = c0.z_module((li, 0), s.tcanon[li])?;
        let gram = z.gram0.as_ref().unwrap();
        for v in 0..nw {
            let pos: Vec<usize> = z
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &p)| s.t0_type[li][p] == v)
                .map(|(a, _)| a)
                .collect();
            if pos.is_empty() {
                continue;
            }
            let mut block = ExactMatrix::zeros(&s.h.spec, pos.len(), pos.len());
            for (a, &pa) in pos.iter().enumerate() {
                for (b, &pb) in pos.iter().enumerate() {
                    block.set(a, b, gram.get(pa, pb).clone());
                }
            }
            char_l[li][v] = block.rank() as i64;
        }
    }
    let mut entries = vec![vec![0u32; nl]; nl];
    for i in 0..nl {
        let mut residual = char_z[i].clone();
        for j in 0..nl {
            let lead = s.shape_elem[j];
            let mult = residual[lead];
            assert!(mult >= 0);
            if mult > 0 {
                for v in 0..nw {
                    residual[v] -= mult * char_l[j][v];
                }
                entries[i][j] = mult as u32;
            }
        }
        assert!(residual.iter().all(|&x| x == 0), "Z-characters of simples must span");
    }
    Ok(DecompMatrix { row_labels: s.shapes.clone(), col_labels: s.shapes.clone(), entries })
}

/// `h_lambda : Z^{(lambda,0)} -> bar Z^lambda` is an isomorphism of
/// `S0`-modules: identical action matrices over the shared label list.
pub fn h_lambda_check(c0: &C0Ctx, bar: &BarCtx) -> Result<Vec<Check>, SchurError> {
    let s = c0.s;
    let mut out = Vec::new();
    for li in 0..s.shapes.len() {
        let z = c0.z_module((li, 0), s.tcanon[li])?;
        let zb = bar.bar_weyl(li)?;
        if z.basis != zb.basis {
            out.push(Check::fail("h-lambda", &s.shapes[li].serialize(), "basis mismatch"));
            continue;
        }
        let mut ok = true;
        for label in &z.rep.all_labels {
            let a = z.rep.gen_matrix(label);
            let b = zb.rep.gen_matrix(label);
            let eq = match (a, b) {
                (None, None) => true,
                (Some(m), None) => m.is_zero(),
                (None, Some(m)) => m.is_zero(),
                (Some(m1), Some(m2)) => m1.to_dense(&s.h.spec) == m2.to_dense(&s.h.spec),
            };
            if !eq {
                ok = false;
                out.push(Check::fail(
                    "h-lambda",
                    &s.shapes[li].serialize(),
                    &format!("action of {label} differs"),
                ));
                break;
            }
        }
        if ok && z.gram0 != zb.gram0 {
            ok = false;
            out.push(Check::fail("h-lambda", &s.shapes[li].serialize(), "forms differ"));
        }
        if ok {
            out.push(Check::pass("h-lambda", &s.shapes[li].serialize(), "Z = bar Z"));
        }
    }
    Ok(out)
}

/// `S(Lambda) = S0 . S0*`: the products of `C0` elements with starred `C0`
/// elements span the whole algebra.
pub fn s0_s0star_span_check(c0: &C0Ctx) -> Result<Check, SchurError> {
    let s = c0.s;
    let dim = s.dim();
    let mut space = RowSpace::new(dim);
    'outer: for &x in &c0.c0 {
        for &y in &c0.c0 {
            let ystar = {
                let ix = s.basis[y as usize];
                s.idx_of(SchurIdx { lam: ix.lam, s: ix.t, t: ix.s })
            };
            let prod = s.compose(x, ystar)?;
            let mut v = vec![s.h.spec.zero(); dim];
            for (k, c) in &prod.terms {
                v[*k as usize] = c.clone();
            }
            space.insert(v);
            if space.rank() == dim {
                break 'outer;
            }
        }
    }
    if space.rank() == dim {
        Ok(Check::pass("s0-s0star", "span", &format!("rank {dim}")))
    } else {
        Ok(Check::fail("s0-s0star", "span", &format!("rank {} < {dim}", space.rank())))
    }
}

/// The independence of `Z^{(lambda,eps)}_S` from the choice of `S`.
pub fn z_choice_independence_check(
    c0: &C0Ctx,
    max_cells: usize,
) -> Result<Vec<Check>, SchurError> {
    let mut out = Vec::new();
    for &cell in c0.cells.iter().take(max_cells) {
        let iset = c0.i_sets[&cell].clone();
        if iset.len() < 2 {
            out.push(Check::pass(
                "z-choice",
                &format!("cell ({},{})", cell.0, cell.1),
                "single choice",
            ));
            continue;
        }
        let z1 = c0.z_module(cell, iset[0])?;
        let z2 = c0.z_module(cell, iset[1])?;
        let mut ok = true;
        for label in &z1.rep.all_labels {
            let a = z1.rep.gen_matrix(label);
            let b = z2.rep.gen_matrix(label);
            let eq = match (a, b) {
                (None, None) => true,
                (Some(m), None) => m.is_zero(),
                (None, Some(m)) => m.is_zero(),
                (Some(m1), Some(m2)) => {
                    m1.to_dense(&c0.s.h.spec) == m2.to_dense(&c0.s.h.spec)
                }
            };
            if !eq {
                ok = false;
                break;
            }
        }
        out.push(if ok {
            Check::pass("z-choice", &format!("cell ({},{})", cell.0, cell.1), "independent of S")
        } else {
            Check::fail("z-choice", &format!("cell ({},{})", cell.0, cell.1), "depends on S")
        });
    }
    Ok(out)
}

/// Restriction data: `f_lambda(phi0_T) = phi_T` intertwines the `S0`-actions,
/// maps radical into radical, matches the forms, and exhibits `L0^lambda`
/// inside the restriction of `L^lambda`.
pub fn restriction_embedding_check(c0: &C0Ctx, li: usize) -> Result<Vec<Check>, SchurError> {
    let s = c0.s;
    let lam = s.shapes[li].serialize();
    let mut out = Vec::new();
    let w = s.weyl_module(li)?;
    let z = c0.z_module((li, 0), s.tcanon[li])?;
    let plus_pos: Vec<usize> = z.basis.clone();
    let wdim = w.rep.dim;
    // intertwining: the span of {phi_T : T in T0+} is stable and the
    // restricted action matches the Z-action; keep the full W-action of each
    // S0 generator for the head computation below
    let labels = c0.s0_action_labels();
    let mut w_acts: Vec<ExactMatrix> = Vec::with_capacity(labels.len());
    for label in &labels {
        let elt = c0.s0_label_elt(label)?;
        let mut wfull = ExactMatrix::zeros(&s.h.spec, wdim, wdim);
        for u in 0..wdim {
            for (k, ck) in &elt.terms {
                let gx = s.basis[*k as usize];
                if s.t0_type[li][u] != s.t0_type[gx.lam][gx.s] {
                    continue;
                }
                let prod =
                    s.compose(s.idx_of(SchurIdx { lam: li, s: s.tcanon[li], t: u }), *k)?;
                for (k2, c2) in &prod.terms {
                    let ix = s.basis[*k2 as usize];
                    if ix.lam == li {
                        let v = wfull.get(u, ix.t).add(&c2.mul(ck));
                        wfull.set(u, ix.t, v);
                    }
                }
            }
        }
        let mut wmat = ExactMatrix::zeros(&s.h.spec, plus_pos.len(), plus_pos.len());
        for (a, &u) in plus_pos.iter().enumerate() {
            for t in 0..wdim {
                let c = wfull.get(u, t);
                if c.is_zero() {
                    continue;
                }
                match plus_pos.iter().position(|&p| p == t) {
                    Some(b) => wmat.set(a, b, c.clone()),
                    None => {
                        out.push(Check::fail(
                            "embedding",
                            &lam,
                            &format!("image of f not stable under {label}"),
                        ));
                        return Ok(out);
                    }
                }
            }
        }
        let zmat = match z.rep.gen_matrix(label) {
            Some(m) => m.to_dense(&s.h.spec),
            None => ExactMatrix::zeros(&s.h.spec, plus_pos.len(), plus_pos.len()),
        };
        if wmat != zmat {
            out.push(Check::fail("embedding", &lam, &format!("{label} does not intertwine")));
            return Ok(out);
        }
        w_acts.push(wfull);
    }
    out.push(Check::pass("embedding", &lam, "f_lambda intertwines all S0 generators"));
    // form compatibility on T0+ pairs, and vanishing across the split
    let gram0 = z.gram0.as_ref().unwrap();
    for (a, &sp) in plus_pos.iter().enumerate() {
        for (b, &tp) in plus_pos.iter().enumerate() {
            if w.gram.get(sp, tp) != gram0.get(a, b) {
                out.push(Check::fail("embedding", &lam, "forms disagree on T0+"));
                return Ok(out);
            }
        }
        for t in 0..wdim {
            if !plus_pos.contains(&t) && !w.gram.get(sp, t).is_zero() {
                out.push(Check::fail("embedding", &lam, "form must vanish off T0+"));
                return Ok(out);
            }
        }
    }
    out.push(Check::pass("embedding", &lam, "forms agree on T0+ and vanish across"));
    // f(rad Z) inside rad W
    let mut rad_w = RowSpace::new(wdim);
    for v in w.gram.left_nullspace() {
        rad_w.insert(v);
    }
    for v in gram0.left_nullspace() {
        let mut big = vec![s.h.spec.zero(); wdim];
        for (a, &p) in plus_pos.iter().enumerate() {
            big[p] = v[a].clone();
        }
        if !rad_w.contains(&big) {
            out.push(Check::fail("embedding", &lam, "f(rad Z) escapes rad W"));
            return Ok(out);
        }
    }
    // L0 inside the restriction of L^lambda: push the image of f into the
    // head and spin it under the S0-labelled generators (acting through the
    // quotient by rad W)
    let mut rad_space = RowSpace::new(wdim);
    for v in w.gram.left_nullspace() {
        rad_space.insert(v);
    }
    let pivots = rad_space.pivots();
    let free: Vec<usize> = (0..wdim).filter(|i| !pivots.contains(i)).collect();
    let head_act = |m: &ExactMatrix, v: &[Scalar]| -> Vec<Scalar> {
        let mut full = vec![s.h.spec.zero(); wdim];
        for (a, &f) in free.iter().enumerate() {
            full[f] = v[a].clone();
        }
        let mut img = m.apply_row(&full);
        rad_space.reduce(&mut img);
        free.iter().map(|&f| img[f].clone()).collect()
    };
    let mut image = RowSpace::new(free.len());
    for &p in &plus_pos {
        let mut v = vec![s.h.spec.zero(); wdim];
        v[p] = s.h.spec.one();
        rad_space.reduce(&mut v);
        image.insert(free.iter().map(|&f| v[f].clone()).collect());
    }
    let mut queue = image.basis();
    while let Some(v) = queue.pop() {
        for m in &w_acts {
            let img = head_act(m, &v);
            if image.insert(img.clone()) {
                queue.push(img);
            }
        }
    }
    let (dim_l0, _) = c0.z_simple_head(&z);
    if image.rank() == dim_l0 {
        out.push(Check::pass(
            "embedding",
            &lam,
            &format!("restriction of L contains L0 of dim {dim_l0}"),
        ));
    } else {
        out.push(Check::fail(
            "embedding",
            &lam,
            &format!("spun image has dim {} but dim L0 = {dim_l0}", image.rank()),
        ));
    }
    Ok(out)
}

/// The tensor theorem `Z^{(lambda,0)} (x)_{S0} S(Lambda) = W^lambda`:
/// computes the balanced tensor product by exact linear algebra and checks
/// the canonical map is an isomorphism.
pub fn tensor_check(c0: &C0Ctx, li: usize, cap: usize) -> Result<Check, SchurError> {
    let s = c0.s;
    let lam = s.shapes[li].serialize();
    let z = c0.z_module((li, 0), s.tcanon[li])?;
    let zdim = z.rep.dim;
    let sdim = s.dim();
    let total = zdim * sdim;
    if total > cap {
        return Ok(Check::fail(
            "tensor",
            &lam,
            &format!("resource cap exceeded: {total} > {cap}"),
        ));
    }
    let w = s.weyl_module(li)?;
    let wdim = w.rep.dim;
    // the canonical map G on pure tensors: (z_a (x) phi_k) -> phi_{J[a]} phi_k
    let mut gmap: Vec<Vec<Scalar>> = vec![vec![s.h.spec.zero(); wdim]; total];
    for (a, &t) in z.basis.iter().enumerate() {
        for k in 0..sdim {
            let kx = s.basis[k];
            if s.t0_type[li][t] != s.t0_type[kx.lam][kx.s] {
                continue;
            }
            let prod = s.compose(s.idx_of(SchurIdx { lam: li, s: s.tcanon[li], t }), k as u32)?;
            for (k2, c2) in &prod.terms {
                let ix = s.basis[*k2 as usize];
                if ix.lam == li {
                    gmap[a * sdim + k][ix.t] = gmap[a * sdim + k][ix.t].add(c2);
                }
            }
        }
    }
    // balanced relations z psi (x) phi - z (x) psi phi, with psi running over
    // the C0 basis (relations are linear in psi, so a spanning set of S0
    // suffices). The rank can never exceed total - dim W because the
    // canonical map factors through the quotient; accumulate until that
    // bound is reached.
    let target = total - wdim;
    let mut rels = RowSpace::new(total);
    let cell = (li, 0u8);
    let mut gsample = 0usize;
    'rel: for &psi in &c0.c0 {
        let px = s.basis[psi as usize];
        // z_a . psi in Z-coordinates
        let mut zrows: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); zdim];
        for (a, &t) in z.basis.iter().enumerate() {
            if s.t0_type[li][t] != s.t0_type[px.lam][px.s] {
                continue;
            }
            let prod = s.compose(s.idx_of(SchurIdx { lam: li, s: s.tcanon[li], t }), psi)?;
            for (k2, c2) in &prod.terms {
                let cls = c0.class(*k2).expect("closure");
                if cls == cell {
                    let ix = s.basis[*k2 as usize];
                    let b = z.basis.iter().position(|&p| p == ix.t).unwrap();
                    zrows[a].push((b, c2.clone()));
                } else {
                    assert!(c0.cell_gt(cls, cell), "Z-action support");
                }
            }
        }
        for a in 0..zdim {
            for k in 0..sdim {
                let prod = s.compose(psi, k as u32)?;
                if zrows[a].is_empty() && prod.is_zero() {
                    continue;
                }
                let mut rel = vec![s.h.spec.zero(); total];
                for (b, c) in &zrows[a] {
                    rel[*b * sdim + k] = c.clone();
                }
                for (k2, c2) in &prod.terms {
                    let at = a * sdim + *k2 as usize;
                    rel[at] = rel[at].sub(c2);
                }
                // well-definedness sample: G kills the relation
                if gsample < 40 {
                    let mut img = vec![s.h.spec.zero(); wdim];
                    for (i, c) in rel.iter().enumerate() {
                        if !c.is_zero() {
                            for (t, g) in gmap[i].iter().enumerate() {
                                if !g.is_zero() {
                                    img[t] = img[t].add(&c.mul(g));
                                }
                            }
                        }
                    }
                    if img.iter().any(|x| !x.is_zero()) {
                        return Ok(Check::fail("tensor", &lam, "map not balanced"));
                    }
                    gsample += 1;
                }
                rels.insert(rel);
                if rels.rank() == target {
                    break 'rel;
                }
            }
        }
    }
    let dim_tensor = total - rels.rank();
    if dim_tensor != wdim {
        return Ok(Check::fail(
            "tensor",
            &lam,
            &format!("dim Z (x) S = {dim_tensor}, dim W = {wdim}"),
        ));
    }
    // surjectivity of G, hence isomorphism by the dimension count
    let mut gspan = RowSpace::new(wdim);
    for row in &gmap {
        gspan.insert(row.clone());
        if gspan.rank() == wdim {
            break;
        }
    }
    if gspan.rank() != wdim {
        return Ok(Check::fail("tensor", &lam, "canonical map not surjective"));
    }
    Ok(Check::pass("tensor", &lam, &format!("dim {dim_tensor} = dim W, canonical map onto")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::FieldSpec;
    use crate::heckealg::HeckeCtx;
    use crate::multicomb::Poset;

    fn setup() -> (HeckeCtx, Poset) {
        let spec = FieldSpec::prime(5, 2, &[1, 3]).unwrap();
        (HeckeCtx::new(2, 2, spec), Poset::enumerate_lambda(2, 2, &[2, 2]))
    }

    #[test]
    fn c0_partition_and_counts() {
        let (h, poset) = setup();
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        let check = c0.c0_partition_check();
        assert!(check.pass, "{}", check.witness);
        // every (S,T) pair in T0+ x T0+ is classified (lam, 0)
        for li in 0..s.shapes.len() {
            for sp in 0..s.t0[li].len() {
                for tp in 0..s.t0[li].len() {
                    if s.t0_plus[li][sp] && s.t0_plus[li][tp] {
                        let bi = s.idx_of(SchurIdx { lam: li, s: sp, t: tp });
                        assert_eq!(c0.class(bi), Some((li, 0)));
                    }
                }
            }
        }
        // cells missing from Omega admit no eps = 1 indices
        for li in 0..s.shapes.len() {
            if !c0.cells.contains(&(li, 1)) {
                for sp in 0..s.t0[li].len() {
                    for tp in 0..s.t0[li].len() {
                        let bi = s.idx_of(SchurIdx { lam: li, s: sp, t: tp });
                        assert_ne!(c0.class(bi), Some((li, 1)));
                    }
                }
            }
        }
    }

    #[test]
    fn closure_exhaustive_small() {
        let (h, poset) = setup();
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        for check in c0.closure_check(None).unwrap() {
            assert!(check.pass, "{}: {}", check.instance, check.witness);
        }
    }

    #[test]
    fn standardly_based_exhaustive_small() {
        let (h, poset) = setup();
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        for check in c0.standardly_based_check(None).unwrap() {
            assert!(check.pass, "{} {}: {}", check.id, check.instance, check.witness);
        }
    }

    #[test]
    fn standardly_based_partitions_only_poset() {
        let spec = FieldSpec::prime(5, 2, &[1, 3]).unwrap();
        let h = HeckeCtx::new(2, 2, spec);
        let poset = Poset::partitions_only(2, 2);
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        assert!(c0.c0_partition_check().pass);
        for check in c0.closure_check(None).unwrap() {
            assert!(check.pass, "{}: {}", check.instance, check.witness);
        }
        for check in c0.standardly_based_check(None).unwrap() {
            assert!(check.pass, "{} {}: {}", check.id, check.instance, check.witness);
        }
    }

    #[test]
    fn ideal_and_antihom() {
        let (h, poset) = setup();
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        let bar = BarCtx::new(&c0);
        // dim bar S0 = sum |T0+(lambda)|^2
        assert_eq!(
            bar.dim(),
            (0..s.shapes.len())
                .map(|li| s.t0_plus[li].iter().filter(|&&b| b).count().pow(2))
                .sum::<usize>()
        );
        let check = bar.ideal_check(None).unwrap();
        assert!(check.pass, "{}", check.witness);
        for check in bar.antihom_check(None).unwrap() {
            assert!(check.pass, "{} {}", check.id, check.witness);
        }
    }

    #[test]
    fn z_modules_and_forms() {
        let (h, poset) = setup();
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        for li in 0..s.shapes.len() {
            let z = c0.z_module((li, 0), s.tcanon[li]).unwrap();
            let plus = s.t0_plus[li].iter().filter(|&&b| b).count();
            assert_eq!(z.rep.dim, plus);
            let gram0 = z.gram0.as_ref().unwrap();
            assert!(gram0.is_symmetric());
            // Gram0(T^lam, T^lam) = 1
            let cp = z.basis.iter().position(|&p| p == s.tcanon[li]).unwrap();
            assert!(gram0.get(cp, cp).is_one());
            // Gram0 equals the Weyl Gram restricted to T0+ pairs
            let w = s.weyl_module(li).unwrap();
            for (a, &pa) in z.basis.iter().enumerate() {
                for (b, &pb) in z.basis.iter().enumerate() {
                    assert_eq!(gram0.get(a, b), w.gram.get(pa, pb));
                }
            }
            let (dim_l0, _) = c0.z_simple_head(&z);
            assert!(dim_l0 >= 1);
        }
    }

    #[test]
    fn z_eps1_and_choice_independence() {
        let (h, poset) = setup();
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        for check in z_choice_independence_check(&c0, 16).unwrap() {
            assert!(check.pass, "{}: {}", check.instance, check.witness);
        }
        // an eps = 1 module exists and has dim |T_0(lambda)|
        let cell = c0.cells.iter().copied().find(|&(_, e)| e == 1).unwrap();
        let sfirst = c0.i_sets[&cell][0];
        let z = c0.z_module(cell, sfirst).unwrap();
        assert_eq!(z.rep.dim, s.t0[cell.0].len());
        assert!(z.gram0.is_none(), "no canonical form at eps = 1");
    }

    #[test]
    fn bar_weyl_and_h_lambda() {
        let (h, poset) = setup();
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        let bar = BarCtx::new(&c0);
        for li in 0..s.shapes.len() {
            let zb = bar.bar_weyl(li).unwrap();
            let plus = s.t0_plus[li].iter().filter(|&&b| b).count();
            assert_eq!(zb.rep.dim, plus);
            let gram = zb.gram0.as_ref().unwrap();
            let cp = zb.basis.iter().position(|&p| p == s.tcanon[li]).unwrap();
            assert!(gram.get(cp, cp).is_one(), "bar form is 1 at T^lambda");
        }
        for check in h_lambda_check(&c0, &bar).unwrap() {
            assert!(check.pass, "{}: {}", check.instance, check.witness);
        }
    }

    #[test]
    fn span_and_embedding() {
        let (h, poset) = setup();
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        let check = s0_s0star_span_check(&c0).unwrap();
        assert!(check.pass, "{}", check.witness);
        for li in 0..s.shapes.len() {
            for check in restriction_embedding_check(&c0, li).unwrap() {
                assert!(check.pass, "{}: {}", check.instance, check.witness);
            }
        }
    }

    #[test]
    fn tensor_theorem_all_shapes() {
        let (h, poset) = setup();
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        for li in 0..s.shapes.len() {
            let check = tensor_check(&c0, li, 50_000).unwrap();
            assert!(check.pass, "{}: {}", check.instance, check.witness);
        }
    }

    #[test]
    fn decomposition_identities_small() {
        let (h, poset) = setup();
        let s = SchurCtx::new(&h, &poset).unwrap();
        let c0 = C0Ctx::new(&s);
        let bar = BarCtx::new(&c0);
        let d_s = crate::schuralg::schur_decomp(&s, 7).unwrap();
        let d_z = z_decomp(&c0, 7).unwrap();
        let d_bar = bar_decomp(&bar, 7).unwrap();
        assert_eq!(d_z, d_bar, "bar multiplicities equal Z multiplicities");
        assert_eq!(d_z, z_character_decomp(&c0).unwrap(), "character oracle agrees");
        for i in 0..s.shapes.len() {
            for j in 0..s.shapes.len() {
                assert!(d_z.get(i, j) <= d_s.get(i, j), "Z below S entrywise");
                if s.shapes[i].type_alpha() == s.shapes[j].type_alpha() {
                    assert_eq!(d_z.get(i, j), d_s.get(i, j), "equality on the alpha diagonal");
                } else {
                    assert_eq!(d_bar.get(i, j), 0, "bar vanishes off the alpha diagonal");
                }
            }
        }
        assert!(d_z.is_unitriangular() && d_s.is_unitriangular());
    }
}
