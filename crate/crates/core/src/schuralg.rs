//! The cyclotomic q-Schur algebra `S(Lambda)`: semistandard basis, structure
//! constants by solve-and-expand inside the Hecke algebra, the `*`
//! involution, Weyl modules with their Gram forms, and simple heads.
//!
//! A basis element `phi_{ST}` (shape `lambda`, `S` of type `mu`, `T` of type
//! `nu`) is the homomorphism `m_nu h -> m_{ST} h`. Products are computed by
//! solving `m_{mu_2} h = m_{S_2 T_2}`, multiplying `m_{S_1 T_1} h`, and
//! expanding in the basis `{m_{ST}}` of the appropriate type pair.

use crate::exactla::{ExactMatrix, Scalar, SolveCache};
use crate::heckealg::{HeckeCtx, HeckeElt};
use crate::multicomb::{
    mu_of, semistandard_tableaux, std_tableaux, Multipartition, Poset, SsTableau, StdTableau,
};
use crate::repkit::{ModuleRep, SparseMat};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchurError {
    #[error("the weight poset must be saturated to build S(Lambda)")]
    NotSaturated,
    #[error("expansion failure (arithmetic bug signal): {0}")]
    Expansion(String),
    #[error("membership solve failed for a cellular element: {0}")]
    Membership(String),
}

/// Index of a semistandard basis element: shape position in `Lambda+`, and
/// positions of `S`, `T` in the canonical `T_0(lambda)` list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchurIdx {
    pub lam: usize,
    pub s: usize,
    pub t: usize,
}

/// Sparse element of `S(Lambda)` in basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SchurElt {
    pub terms: BTreeMap<u32, Scalar>,
}

impl SchurElt {
    pub fn zero() -> SchurElt {
        SchurElt { terms: BTreeMap::new() }
    }

    pub fn single(idx: u32, c: Scalar) -> SchurElt {
        let mut e = SchurElt::zero();
        e.add_term(idx, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, idx: u32, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(idx) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SchurElt, c: &Scalar) {
        for (i, x) in &other.terms {
            self.add_term(*i, x.mul(c));
        }
    }

    pub fn coeff(&self, idx: u32, zero: &Scalar) -> Scalar {
        self.terms.get(&idx).cloned().unwrap_or_else(|| zero.clone())
    }
}

struct Family {
    pairs: Vec<u32>,
    solver: SolveCache,
}

/// Structure context for `S(Lambda)`: tableau lists, the basis index, and
/// all memoized solve data. Entries are immutable once published.
pub struct SchurCtx<'a> {
    pub h: &'a HeckeCtx,
    pub poset: &'a Poset,
    /// `Lambda+` in canonical order.
    pub shapes: Vec<Multipartition>,
    /// poset element index of each shape.
    pub shape_elem: Vec<usize>,
    /// `T_0(lambda)` per shape: types in poset order, generation order within.
    pub t0: Vec<Vec<SsTableau>>,
    /// poset element index of `Type(T)` per tableau.
    pub t0_type: Vec<Vec<usize>>,
    /// membership in `T_0+(lambda)`: `a(Type) = a(lambda)`.
    pub t0_plus: Vec<Vec<bool>>,
    /// position of `T^lambda` in `t0[lam]`.
    pub tcanon: Vec<usize>,
    /// standard tableaux per shape.
    pub std_tabs: Vec<Vec<StdTableau>>,
    pub basis: Vec<SchurIdx>,
    basis_pos: HashMap<SchurIdx, u32>,
    pelt: Mutex<HashMap<(usize, usize), Arc<HeckeElt>>>,
    mst: Mutex<HashMap<(usize, usize, usize), Arc<HeckeElt>>>,
    hsol: Mutex<HashMap<u32, Arc<HeckeElt>>>,
    families: Mutex<HashMap<(usize, usize), Arc<Family>>>,
    compose_memo: Mutex<BTreeMap<(u32, u32), Arc<SchurElt>>>,
    phimu: Mutex<HashMap<usize, Arc<SchurElt>>>,
}

/// A Weyl module `W^lambda` with its Gram form, over the canonical
/// generating family of `S(Lambda)`.
pub struct WeylModule {
    pub lam_pos: usize,
    pub rep: ModuleRep,
    pub gram: ExactMatrix,
}

impl<'a> SchurCtx<'a> {
    pub fn new(h: &'a HeckeCtx, poset: &'a Poset) -> Result<SchurCtx<'a>, SchurError> {
        if !poset.saturated {
            return Err(SchurError::NotSaturated);
        }
        assert_eq!(h.n as u32, poset.n);
        assert_eq!(h.r, poset.r);
        let shapes = poset.partitions();
        let shape_elem: Vec<usize> =
            shapes.iter().map(|s| poset.index_of(s.inner()).unwrap()).collect();
        let mut t0 = Vec::new();
        let mut t0_type = Vec::new();
        let mut t0_plus = Vec::new();
        let mut tcanon = Vec::new();
        let mut std_tabs = Vec::new();
        for lam in &shapes {
            let a_lam = lam.avec();
            let mut tabs = Vec::new();
            let mut types = Vec::new();
            let mut plus = Vec::new();
            for (mi, mu) in poset.elements.iter().enumerate() {
                for tab in semistandard_tableaux(lam, mu) {
                    tabs.push(tab);
                    types.push(mi);
                    plus.push(mu.avec() == a_lam);
                }
            }
            let canon = SsTableau::t_lambda(lam);
            let cpos = tabs.iter().position(|t| *t == canon).expect("T^lambda in T_0");
            tcanon.push(cpos);
            t0.push(tabs);
            t0_type.push(types);
            t0_plus.push(plus);
            std_tabs.push(std_tableaux(lam));
        }
        let mut basis = Vec::new();
        for (li, tabs) in t0.iter().enumerate() {
            for s in 0..tabs.len() {
                for t in 0..tabs.len() {
                    basis.push(SchurIdx { lam: li, s, t });
                }
            }
        }
        let basis_pos = basis.iter().enumerate().map(|(i, &ix)| (ix, i as u32)).collect();
        Ok(SchurCtx {
            h,
            poset,
            shapes,
            shape_elem,
            t0,
            t0_type,
            t0_plus,
            tcanon,
            std_tabs,
            basis,
            basis_pos,
            pelt: Mutex::new(HashMap::new()),
            mst: Mutex::new(HashMap::new()),
            hsol: Mutex::new(HashMap::new()),
            families: Mutex::new(HashMap::new()),
            compose_memo: Mutex::new(BTreeMap::new()),
            phimu: Mutex::new(HashMap::new()),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn idx_of(&self, idx: SchurIdx) -> u32 {
        self.basis_pos[&idx]
    }

    /// `sum_{s standard, mu(s) = S} q^{l(d(s))} T_{d(s)}`.
    fn p_elt(&self, lam: usize, pos: usize) -> Arc<HeckeElt> {
        if let Some(e) = self.pelt.lock().unwrap().get(&(lam, pos)) {
            return e.clone();
        }
        let mu = self.poset.element(self.t0_type[lam][pos]);
        let target = &self.t0[lam][pos];
        let mut out = HeckeElt::zero();
        for t in &self.std_tabs[lam] {
            let (tab, _) = mu_of(t, mu);
            if tab == *target {
                let d = t.d_perm();
                let c = self.h.spec.q_pow(d.len() as i64);
                out.add_scaled(&self.h.append_word(&self.h.one(), &d), &c);
            }
        }
        assert!(!out.is_zero(), "semistandard tableau with empty standard fiber");
        let arc = Arc::new(out);
        self.pelt.lock().unwrap().insert((lam, pos), arc.clone());
        arc
    }

    /// `m_{ST} = star(P_S) m_lambda P_T`.
    pub fn m_st(&self, lam: usize, s: usize, t: usize) -> Arc<HeckeElt> {
        if let Some(e) = self.mst.lock().unwrap().get(&(lam, s, t)) {
            return e.clone();
        }
        let ps = self.p_elt(lam, s);
        let pt = self.p_elt(lam, t);
        let mlam = self.h.m_lambda(self.shapes[lam].inner());
        let prod = self.h.mul(&self.h.star(&ps), &self.h.mul(&mlam, &pt));
        let arc = Arc::new(prod);
        self.mst.lock().unwrap().insert((lam, s, t), arc.clone());
        arc
    }

    /// Expansion family for a type pair `(mu, nu)` (poset element indices).
    fn family(&self, mu: usize, nu: usize) -> Result<Arc<Family>, SchurError> {
        if let Some(f) = self.families.lock().unwrap().get(&(mu, nu)) {
            return Ok(f.clone());
        }
        let mut pairs = Vec::new();
        for (li, types) in self.t0_type.iter().enumerate() {
            let ss: Vec<usize> = (0..types.len()).filter(|&p| types[p] == mu).collect();
            let ts: Vec<usize> = (0..types.len()).filter(|&p| types[p] == nu).collect();
            for &s in &ss {
                for &t in &ts {
                    pairs.push(self.idx_of(SchurIdx { lam: li, s, t }));
                }
            }
        }
        let n = self.h.dim();
        let mut mat = ExactMatrix::zeros(&self.h.spec, n, pairs.len().max(1));
        for (col, &bi) in pairs.iter().enumerate() {
            let ix = self.basis[bi as usize];
            let m = self.m_st(ix.lam, ix.s, ix.t);
            let v = self.h.vec_of(&m);
            for (row, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    mat.set(row, col, c);
                }
            }
        }
        let solver = SolveCache::new(&mat);
        if !pairs.is_empty() && solver.rank() != pairs.len() {
            return Err(SchurError::Expansion(format!(
                "family ({mu},{nu}) is linearly dependent"
            )));
        }
        let fam = Arc::new(Family { pairs, solver });
        self.families.lock().unwrap().insert((mu, nu), fam.clone());
        Ok(fam)
    }

    /// The structure product `phi_i . phi_j`, memoized.
    pub fn compose(&self, i: u32, j: u32) -> Result<Arc<SchurElt>, SchurError> {
        if let Some(e) = self.compose_memo.lock().unwrap().get(&(i, j)) {
            return Ok(e.clone());
        }
        let a = self.basis[i as usize];
        let b = self.basis[j as usize];
        let nu1 = self.t0_type[a.lam][a.t];
        let mu2 = self.t0_type[b.lam][b.s];
        let elt = if nu1 != mu2 {
            SchurElt::zero()
        } else {
            let h = self.h_solve(j)?;
            let z = self.h.mul(&self.m_st(a.lam, a.s, a.t), &h);
            let mu1 = self.t0_type[a.lam][a.s];
            let nu2 = self.t0_type[b.lam][b.t];
            let fam = self.family(mu1, nu2)?;
            let coords = fam
                .solver
                .solve(&self.h.vec_of(&z))
                .ok_or_else(|| SchurError::Expansion(format!("product ({i},{j})")))?;
            let mut e = SchurElt::zero();
            for (k, c) in coords.into_iter().enumerate() {
                e.add_term(fam.pairs[k], c);
            }
            e
        };
        let arc = Arc::new(elt);
        self.compose_memo.lock().unwrap().insert((i, j), arc.clone());
        Ok(arc)
    }

    fn h_solve(&self, j: u32) -> Result<Arc<HeckeElt>, SchurError> {
        if let Some(e) = self.hsol.lock().unwrap().get(&j) {
            return Ok(e.clone());
        }
        let b = self.basis[j as usize];
        let mu2 = self.poset.element(self.t0_type[b.lam][b.s]);
        let m = self.m_st(b.lam, b.s, b.t);
        let h = self
            .h
            .membership_solve(mu2, &m)
            .ok_or_else(|| SchurError::Membership(format!("basis index {j}")))?;
        let arc = Arc::new(h);
        self.hsol.lock().unwrap().insert(j, arc.clone());
        Ok(arc)
    }

    /// Product of sparse elements (bilinear extension of `compose`).
    pub fn mul_elts(&self, x: &SchurElt, y: &SchurElt) -> Result<SchurElt, SchurError> {
        let mut out = SchurElt::zero();
        for (i, ci) in &x.terms {
            for (j, cj) in &y.terms {
                let prod = self.compose(*i, *j)?;
                out.add_scaled(&prod, &ci.mul(cj));
            }
        }
        Ok(out)
    }

    /// The involution `phi_{ST} -> phi_{TS}` extended linearly.
    pub fn star_elt(&self, x: &SchurElt) -> SchurElt {
        let mut out = SchurElt::zero();
        for (i, c) in &x.terms {
            let ix = self.basis[*i as usize];
            out.add_term(self.idx_of(SchurIdx { lam: ix.lam, s: ix.t, t: ix.s }), c.clone());
        }
        out
    }

    /// The projector `phi_mu` (identity on `M^mu`) in the semistandard basis.
    pub fn phi_mu(&self, mu: usize) -> Result<Arc<SchurElt>, SchurError> {
        if let Some(e) = self.phimu.lock().unwrap().get(&mu) {
            return Ok(e.clone());
        }
        let fam = self.family(mu, mu)?;
        let m_mu = self.h.m_lambda(self.poset.element(mu));
        let coords = fam
            .solver
            .solve(&self.h.vec_of(&m_mu))
            .ok_or_else(|| SchurError::Expansion(format!("phi_mu({mu})")))?;
        let mut e = SchurElt::zero();
        for (k, c) in coords.into_iter().enumerate() {
            e.add_term(fam.pairs[k], c);
        }
        let arc = Arc::new(e);
        self.phimu.lock().unwrap().insert(mu, arc.clone());
        Ok(arc)
    }

    /// `1 = sum_mu phi_mu`.
    pub fn one_elt(&self) -> Result<SchurElt, SchurError> {
        let mut out = SchurElt::zero();
        for mu in 0..self.poset.len() {
            let pm = self.phi_mu(mu)?;
            out.add_scaled(&pm, &self.h.spec.one());
        }
        Ok(out)
    }

    /// The canonical generator label list shared by all modules built from
    /// this context: weight projectors, then `phi_{S T^alpha}` ("col"), then
    /// `phi_{T^alpha T}` ("row").
    pub fn action_labels(&self) -> Vec<String> {
        let mut labels = Vec::new();
        for mu in 0..self.poset.len() {
            labels.push(format!("proj:{mu}"));
        }
        for (li, tabs) in self.t0.iter().enumerate() {
            for s in 0..tabs.len() {
                labels.push(format!("col:{li}:{s}"));
            }
        }
        for (li, tabs) in self.t0.iter().enumerate() {
            for t in 0..tabs.len() {
                labels.push(format!("row:{li}:{t}"));
            }
        }
        labels
    }

    /// The basis index of a generator label (None for projectors).
    pub fn label_basis_idx(&self, label: &str) -> Option<u32> {
        let mut it = label.split(':');
        match it.next().unwrap() {
            "col" => {
                let li: usize = it.next().unwrap().parse().unwrap();
                let s: usize = it.next().unwrap().parse().unwrap();
                Some(self.idx_of(SchurIdx { lam: li, s, t: self.tcanon[li] }))
            }
            "row" => {
                let li: usize = it.next().unwrap().parse().unwrap();
                let t: usize = it.next().unwrap().parse().unwrap();
                Some(self.idx_of(SchurIdx { lam: li, s: self.tcanon[li], t }))
            }
            _ => None,
        }
    }

    /// The Weyl module `W^lambda` with the action of every canonical
    /// generator and the Gram matrix of the cell form.
    pub fn weyl_module(&self, lam: usize) -> Result<WeylModule, SchurError> {
        let dim = self.t0[lam].len();
        let canon = self.tcanon[lam];
        let mut gens: Vec<(String, SparseMat)> = Vec::new();
        let labels = self.action_labels();
        for label in &labels {
            if let Some(mu) = label.strip_prefix("proj:") {
                let mu: usize = mu.parse().unwrap();
                let mut rows = vec![Vec::new(); dim];
                let mut any = false;
                for u in 0..dim {
                    if self.t0_type[lam][u] == mu {
                        rows[u].push((u as u32, self.h.spec.one()));
                        any = true;
                    }
                }
                if any {
                    gens.push((label.clone(), SparseMat { dim_in: dim, dim_out: dim, rows }));
                }
                continue;
            }
            let gi = self.label_basis_idx(label).unwrap();
            let g = self.basis[gi as usize];
            let gen_left_type = self.t0_type[g.lam][g.s];
            let mut rows = vec![Vec::new(); dim];
            let mut any = false;
            for u in 0..dim {
                if self.t0_type[lam][u] != gen_left_type {
                    continue;
                }
                let prod =
                    self.compose(self.idx_of(SchurIdx { lam, s: canon, t: u }), gi)?;
                for (k, c) in &prod.terms {
                    let ix = self.basis[*k as usize];
                    if ix.lam == lam {
                        assert_eq!(ix.s, canon, "cell row must keep the first index");
                        rows[u].push((ix.t as u32, c.clone()));
                        any = true;
                    } else {
                        assert!(
                            self.shapes[ix.lam].strictly_dominates(&self.shapes[lam]).unwrap(),
                            "support must dominate the cell shape"
                        );
                    }
                }
            }
            if any {
                gens.push((label.clone(), SparseMat { dim_in: dim, dim_out: dim, rows }));
            }
        }
        let gram = self.weyl_gram(lam)?;
        let rep = ModuleRep {
            spec: self.h.spec.clone(),
            dim,
            gens,
            all_labels: labels,
            gram: Some(gram.clone()),
        };
        Ok(WeylModule { lam_pos: lam, rep, gram })
    }

    /// `<phi_S, phi_T>` read off `phi_{T^lam S} phi_{T T^lam}`.
    pub fn weyl_gram(&self, lam: usize) -> Result<ExactMatrix, SchurError> {
        let dim = self.t0[lam].len();
        let canon = self.tcanon[lam];
        let diag = self.idx_of(SchurIdx { lam, s: canon, t: canon });
        let mut gram = ExactMatrix::zeros(&self.h.spec, dim, dim);
        for s in 0..dim {
            for t in 0..dim {
                if self.t0_type[lam][s] != self.t0_type[lam][t] {
                    continue; // delta: distinct types pair to zero
                }
                let prod = self.compose(
                    self.idx_of(SchurIdx { lam, s: canon, t: s }),
                    self.idx_of(SchurIdx { lam, s: t, t: canon }),
                )?;
                gram.set(s, t, prod.coeff(diag, &self.h.spec.zero()));
            }
        }
        Ok(gram)
    }

    /// Snapshot of the memoized structure constants, for the disk cache.
    pub fn memo_snapshot(&self) -> Vec<((u32, u32), Vec<(u32, Scalar)>)> {
        self.compose_memo
            .lock()
            .unwrap()
            .iter()
            .map(|(&k, v)| (k, v.terms.iter().map(|(&i, c)| (i, c.clone())).collect()))
            .collect()
    }

    /// Seed the structure-constant memo from a cache snapshot.
    pub fn memo_inject(&self, entries: Vec<((u32, u32), Vec<(u32, Scalar)>)>) {
        let mut memo = self.compose_memo.lock().unwrap();
        for (k, terms) in entries {
            let mut e = SchurElt::zero();
            for (i, c) in terms {
                e.add_term(i, c);
            }
            memo.entry(k).or_insert_with(|| Arc::new(e));
        }
    }

    /// Simple head `L^lambda = W^lambda / rad`: checks the radical is
    /// action-stable and returns (dim L, quotient action).
    pub fn simple_head(&self, w: &WeylModule) -> (usize, ModuleRep) {
        let rad = w.gram.left_nullspace();
        let mut space = crate::exactla::RowSpace::new(w.rep.dim);
        for v in rad {
            space.insert(v);
        }
        for (_, g) in &w.rep.gens {
            for v in space.basis() {
                let img = g.apply(&v, &self.h.spec.zero());
                assert!(space.contains(&img), "Gram radical must be a submodule");
            }
        }
        let head = w.rep.quotient(&space);
        (head.dim, head)
    }
}

/// Combinatorial dimension data: `dim S(Lambda) = sum |T_0(lambda)|^2`.
/// Works on any poset (no saturation needed).
pub fn schur_dim_counts(poset: &Poset) -> (usize, Vec<(Multipartition, usize)>) {
    let mut total = 0usize;
    let mut per_shape = Vec::new();
    for lam in poset.partitions() {
        let mut count = 0usize;
        for mu in &poset.elements {
            count += semistandard_tableaux(&lam, mu).len();
        }
        total += count * count;
        per_shape.push((lam, count));
    }
    (total, per_shape)
}

/// The decomposition matrix `[W^lambda : L^mu]` computed from weight-space
/// characters and Gram-block ranks alone (no chopping): an independent
/// oracle for the meataxe path.
pub fn character_decomp(ctx: &SchurCtx) -> Result<crate::repkit::DecompMatrix, SchurError> {
    let nl = ctx.shapes.len();
    let nw = ctx.poset.len();
    // char_w[i][v] = |T_0(lambda_i, mu_v)|
    let mut char_w = vec![vec![0i64; nw]; nl];
    for (i, types) in ctx.t0_type.iter().enumerate() {
        for &ty in types {
            char_w[i][ty] += 1;
        }
    }
    // char_l[j][v] = rank of the type-v Gram block of W^mu_j
    let mut char_l = vec![vec![0i64; nw]; nl];
    for j in 0..nl {
        let gram = ctx.weyl_gram(j)?;
        for v in 0..nw {
            let pos: Vec<usize> =
                (0..ctx.t0[j].len()).filter(|&p| ctx.t0_type[j][p] == v).collect();
            if pos.is_empty() {
                continue;
            }
            let mut block = ExactMatrix::zeros(&ctx.h.spec, pos.len(), pos.len());
            for (a, &pa) in pos.iter().enumerate() {
                for (b, &pb) in pos.iter().enumerate() {
                    block.set(a, b, gram.get(pa, pb).clone());
                }
            }
            char_l[j][v] = block.rank() as i64;
        }
    }
    // unitriangular solve: peel the leading weight of each simple in order
    let mut entries = vec![vec![0u32; nl]; nl];
    for i in 0..nl {
        let mut residual = char_w[i].clone();
        for j in 0..nl {
            let lead = ctx.shape_elem[j];
            let mult = residual[lead];
            assert!(mult >= 0, "character solve must stay nonnegative");
            if mult > 0 {
                for v in 0..nw {
                    residual[v] -= mult * char_l[j][v];
                }
                entries[i][j] = mult as u32;
            }
        }
        assert!(residual.iter().all(|&x| x == 0), "characters of simples must span");
    }
    Ok(crate::repkit::DecompMatrix {
        row_labels: ctx.shapes.clone(),
        col_labels: ctx.shapes.clone(),
        entries,
    })
}

/// Full decomposition matrix of `S(Lambda)` by chopping every Weyl module
/// against the library of simple heads.
pub fn schur_decomp(
    ctx: &SchurCtx,
    seed: u64,
) -> Result<crate::repkit::DecompMatrix, SchurError> {
    let mut family = Vec::new();
    let mut library = Vec::new();
    for (i, shape) in ctx.shapes.iter().enumerate() {
        let w = ctx.weyl_module(i)?;
        let (dim_l, head) = ctx.simple_head(&w);
        assert!(dim_l >= 1, "simple heads of Weyl modules are nonzero");
        family.push((shape.clone(), w.rep));
        library.push((shape.clone(), head));
    }
    crate::repkit::decomp_matrix(&family, &library, seed)
        .map_err(|e| SchurError::Expansion(format!("chop: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::FieldSpec;
    use crate::repkit::SplitMix64;

    fn setup_n2r2() -> (HeckeCtx, Poset) {
        let spec = FieldSpec::prime(5, 2, &[1, 3]).unwrap();
        (HeckeCtx::new(2, 2, spec), Poset::enumerate_lambda(2, 2, &[2, 2]))
    }

    #[test]
    fn basis_counts() {
        let spec = FieldSpec::prime(5, 2, &[1]).unwrap();
        let h = HeckeCtx::new(1, 1, spec);
        let poset = Poset::enumerate_lambda(1, 1, &[1]);
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        assert_eq!(ctx.dim(), 1);

        // counting works for the unsaturated m = (1,1) poset too
        let poset = Poset::enumerate_lambda(2, 2, &[1, 1]);
        let (dim, per_shape) = schur_dim_counts(&poset);
        assert_eq!(dim, per_shape.iter().map(|(_, c)| c * c).sum::<usize>());
        // but the algebra context refuses it
        let spec = FieldSpec::prime(5, 2, &[1, 3]).unwrap();
        let h = HeckeCtx::new(2, 2, spec);
        assert!(matches!(SchurCtx::new(&h, &poset), Err(SchurError::NotSaturated)));
    }

    #[test]
    fn basis_type_dominance() {
        let (h, poset) = setup_n2r2();
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        assert_eq!(ctx.dim(), schur_dim_counts(&poset).0);
        for ix in &ctx.basis {
            let lam = &ctx.shapes[ix.lam];
            for p in [ix.s, ix.t] {
                let ty = ctx.poset.element(ctx.t0_type[ix.lam][p]);
                assert!(lam.dominates(ty).unwrap());
            }
        }
    }

    #[test]
    fn composition_identity_phi_st() {
        // phi_{S T^lam} phi_{T^lam T} = phi_{ST} for all S, T at n=2, r=2
        let (h, poset) = setup_n2r2();
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        for li in 0..ctx.shapes.len() {
            let canon = ctx.tcanon[li];
            for s in 0..ctx.t0[li].len() {
                for t in 0..ctx.t0[li].len() {
                    let a = ctx.idx_of(SchurIdx { lam: li, s, t: canon });
                    let b = ctx.idx_of(SchurIdx { lam: li, s: canon, t });
                    let prod = ctx.compose(a, b).unwrap();
                    let expect =
                        SchurElt::single(ctx.idx_of(SchurIdx { lam: li, s, t }), h.spec.one());
                    assert_eq!(*prod, expect);
                }
            }
        }
    }

    #[test]
    fn projectors_and_identity() {
        let (h, poset) = setup_n2r2();
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        // the canonical diagonal element phi_lambda is idempotent
        for li in 0..ctx.shapes.len() {
            let canon = ctx.tcanon[li];
            let d = ctx.idx_of(SchurIdx { lam: li, s: canon, t: canon });
            let prod = ctx.compose(d, d).unwrap();
            assert_eq!(*prod, SchurElt::single(d, h.spec.one()));
        }
        // phi_mu phi_nu = delta_{mu nu} phi_mu
        for mu in 0..poset.len() {
            let pm = ctx.phi_mu(mu).unwrap();
            for nu in 0..poset.len() {
                let pn = ctx.phi_mu(nu).unwrap();
                let prod = ctx.mul_elts(&pm, &pn).unwrap();
                if mu == nu {
                    assert_eq!(prod, *pm);
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
        // 1 . phi_{ST} = phi_{ST} = phi_{ST} . 1
        let one = ctx.one_elt().unwrap();
        for bi in 0..ctx.dim() as u32 {
            let e = SchurElt::single(bi, h.spec.one());
            assert_eq!(ctx.mul_elts(&one, &e).unwrap(), e);
            assert_eq!(ctx.mul_elts(&e, &one).unwrap(), e);
        }
    }

    #[test]
    fn delta_vanishing_and_support() {
        let (h, poset) = setup_n2r2();
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        let _ = h;
        let mut rng = SplitMix64::new(31);
        for _ in 0..200 {
            let i = rng.below(ctx.dim()) as u32;
            let j = rng.below(ctx.dim()) as u32;
            let a = ctx.basis[i as usize];
            let b = ctx.basis[j as usize];
            let prod = ctx.compose(i, j).unwrap();
            if ctx.t0_type[a.lam][a.t] != ctx.t0_type[b.lam][b.s] {
                assert!(prod.is_zero());
                continue;
            }
            for (k, _) in &prod.terms {
                let ix = ctx.basis[*k as usize];
                // cellular support: shape dominates both factors, types match
                assert!(ctx.shapes[ix.lam].dominates(&ctx.shapes[a.lam]).unwrap());
                assert!(ctx.shapes[ix.lam].dominates(&ctx.shapes[b.lam]).unwrap());
                assert_eq!(ctx.t0_type[ix.lam][ix.s], ctx.t0_type[a.lam][a.s]);
                assert_eq!(ctx.t0_type[ix.lam][ix.t], ctx.t0_type[b.lam][b.t]);
            }
        }
    }

    #[test]
    fn star_is_antimultiplicative_on_table() {
        let (h, poset) = setup_n2r2();
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        let mut rng = SplitMix64::new(77);
        for _ in 0..100 {
            let i = rng.below(ctx.dim()) as u32;
            let j = rng.below(ctx.dim()) as u32;
            let x = SchurElt::single(i, h.spec.one());
            let y = SchurElt::single(j, h.spec.one());
            let lhs = ctx.star_elt(&ctx.mul_elts(&x, &y).unwrap());
            let rhs = ctx.mul_elts(&ctx.star_elt(&y), &ctx.star_elt(&x)).unwrap();
            assert_eq!(lhs, rhs);
            assert_eq!(ctx.star_elt(&ctx.star_elt(&x)), x);
        }
    }

    #[test]
    fn one_sided_cell_property() {
        // in phi_{ST} . phi, the shape-lambda coefficients depend only on T
        let (h, poset) = setup_n2r2();
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        let _ = h;
        let mut rng = SplitMix64::new(4);
        for li in 0..ctx.shapes.len() {
            let dim = ctx.t0[li].len();
            for _ in 0..30 {
                let t = rng.below(dim);
                let gi = rng.below(ctx.dim()) as u32;
                let mut per_s: Vec<Vec<(usize, Scalar)>> = Vec::new();
                for s in 0..dim {
                    let i = ctx.idx_of(SchurIdx { lam: li, s, t });
                    let prod = ctx.compose(i, gi).unwrap();
                    let mut row = Vec::new();
                    for (k, c) in &prod.terms {
                        let ix = ctx.basis[*k as usize];
                        if ix.lam == li {
                            assert_eq!(ix.s, s, "first index preserved");
                            row.push((ix.t, c.clone()));
                        }
                    }
                    per_s.push(row);
                }
                for w in per_s.windows(2) {
                    assert_eq!(w[0], w[1], "cell row coefficients depend only on t");
                }
            }
        }
    }

    #[test]
    fn weyl_modules_small() {
        let (h, poset) = setup_n2r2();
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        let _ = h;
        for li in 0..ctx.shapes.len() {
            let w = ctx.weyl_module(li).unwrap();
            assert_eq!(w.rep.dim, ctx.t0[li].len());
            assert!(w.gram.is_symmetric());
            // Gram(T^lam, T^lam) = 1
            let c = ctx.tcanon[li];
            assert!(w.gram.get(c, c).is_one());
            let (dim_l, _) = ctx.simple_head(&w);
            assert!(dim_l >= 1);
            assert_eq!(dim_l, w.gram.rank());
        }
    }

    #[test]
    fn weyl_action_is_multiplicative() {
        // acting by x then y equals acting by xy, on random basis pairs
        let (h, poset) = setup_n2r2();
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        let act = |li: usize, e: &SchurElt| -> ExactMatrix {
            let dim = ctx.t0[li].len();
            let canon = ctx.tcanon[li];
            let mut m = ExactMatrix::zeros(&h.spec, dim, dim);
            for u in 0..dim {
                for (k, c) in &e.terms {
                    let ix = ctx.basis[*k as usize];
                    if ctx.t0_type[li][u] != ctx.t0_type[ix.lam][ix.s] {
                        continue;
                    }
                    let prod = ctx
                        .compose(ctx.idx_of(SchurIdx { lam: li, s: canon, t: u }), *k)
                        .unwrap();
                    for (k2, c2) in &prod.terms {
                        let ix2 = ctx.basis[*k2 as usize];
                        if ix2.lam == li {
                            let v = m.get(u, ix2.t).add(&c2.mul(c));
                            m.set(u, ix2.t, v);
                        }
                    }
                }
            }
            m
        };
        let mut rng = SplitMix64::new(5);
        for li in 0..ctx.shapes.len() {
            for _ in 0..15 {
                let gi = rng.below(ctx.dim()) as u32;
                let gj = rng.below(ctx.dim()) as u32;
                let ea = SchurElt::single(gi, h.spec.one());
                let eb = SchurElt::single(gj, h.spec.one());
                let ma = act(li, &ea);
                let mb = act(li, &eb);
                let mab = act(li, &ctx.mul_elts(&ea, &eb).unwrap());
                assert_eq!(ma.mul(&mb), mab, "right action is multiplicative");
            }
        }
    }

    #[test]
    fn semisimple_rational_weyl_grams() {
        let spec = FieldSpec::rational((2, 1), &[(1, 1), (7, 1)]).unwrap();
        assert!(crate::exactla::pn_value(&spec, 2).1);
        let h = HeckeCtx::new(2, 2, spec);
        let poset = Poset::enumerate_lambda(2, 2, &[2, 2]);
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        for li in 0..ctx.shapes.len() {
            let w = ctx.weyl_module(li).unwrap();
            assert_eq!(w.gram.rank(), w.rep.dim, "semisimple Gram must be nonsingular");
        }
        let d = character_decomp(&ctx).unwrap();
        assert_eq!(d, crate::repkit::DecompMatrix::identity(&ctx.shapes));
    }

    #[test]
    fn decomp_chopping_matches_characters() {
        let (h, poset) = setup_n2r2();
        let ctx = SchurCtx::new(&h, &poset).unwrap();
        let _ = h;
        let by_chop = schur_decomp(&ctx, 12345).unwrap();
        let by_char = character_decomp(&ctx).unwrap();
        assert_eq!(by_chop, by_char);
        assert!(by_chop.is_unitriangular());
        // p = 5, q = 2 is non-semisimple at n = 2: expect a nontrivial entry
        assert_ne!(by_chop, crate::repkit::DecompMatrix::identity(&ctx.shapes));
        // a different seed gives the same matrices
        let again = schur_decomp(&ctx, 999).unwrap();
        assert_eq!(by_chop, again);
    }
}
