//! Standard and semistandard tableaux on multipartition diagrams.

use super::perm::Perm;
use super::types::{Multicomposition, MulticombError, Multipartition};

/// A standard tableau: bijective filling of the diagram by `1..n`,
/// increasing along rows and down columns of every component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StdTableau {
    shape: Multipartition,
    /// entries[s][i][j] = value at (row i, col j, component s), 1-based values
    entries: Vec<Vec<Vec<u16>>>,
}

impl StdTableau {
    pub fn shape(&self) -> &Multipartition {
        &self.shape
    }

    pub fn entries(&self) -> &[Vec<Vec<u16>>] {
        &self.entries
    }

    /// The row-reading superstandard tableau `t^mu` of any multicomposition:
    /// numbers attached in order along rows, top to bottom, component by
    /// component. Rows of length zero are skipped.
    pub fn canonical_of(shape: &Multicomposition) -> Vec<Vec<Vec<u16>>> {
        let mut next = 1u16;
        let mut entries = Vec::with_capacity(shape.level());
        for s in 0..shape.level() {
            let mut comp = Vec::new();
            for &len in shape.comp(s) {
                let mut row = Vec::with_capacity(len as usize);
                for _ in 0..len {
                    row.push(next);
                    next += 1;
                }
                comp.push(row);
            }
            entries.push(comp);
        }
        entries
    }

    pub fn canonical(shape: &Multipartition) -> StdTableau {
        StdTableau { shape: shape.clone(), entries: Self::canonical_of(shape.inner()) }
    }

    /// Position (row, comp) of each value 1..n in the filling.
    pub fn row_of_value(&self) -> Vec<(usize, usize)> {
        let n = self.shape.size() as usize;
        let mut out = vec![(usize::MAX, usize::MAX); n];
        for (s, comp) in self.entries.iter().enumerate() {
            for (i, row) in comp.iter().enumerate() {
                for &v in row {
                    out[v as usize - 1] = (i, s);
                }
            }
        }
        out
    }

    /// The permutation `d(t)` with `t = t^shape d(t)`: it maps the entry of
    /// `t^shape` at a node to the entry of `t` at the same node.
    pub fn d_perm(&self) -> Perm {
        let n = self.shape.size() as usize;
        let canon = Self::canonical_of(self.shape.inner());
        let mut images = vec![0u8; n];
        for (s, comp) in canon.iter().enumerate() {
            for (i, row) in comp.iter().enumerate() {
                for (j, &c) in row.iter().enumerate() {
                    let t = self.entries[s][i][j];
                    images[c as usize - 1] = (t - 1) as u8;
                }
            }
        }
        Perm::from_images(images)
    }

    pub fn is_standard(&self) -> bool {
        for comp in &self.entries {
            for (i, row) in comp.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    if j + 1 < row.len() && row[j + 1] <= v {
                        return false;
                    }
                    if i + 1 < comp.len() && comp[i + 1].len() > j && comp[i + 1][j] <= v {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn from_entries(shape: &Multipartition, entries: Vec<Vec<Vec<u16>>>) -> StdTableau {
        StdTableau { shape: shape.clone(), entries }
    }
}

/// All standard tableaux of the given shape, in a deterministic order
/// (values 1..n placed row-major, smallest candidate node first).
pub fn std_tableaux(shape: &Multipartition) -> Vec<StdTableau> {
    let n = shape.size() as usize;
    let mut rows: Vec<Vec<Vec<u16>>> = shape
        .comps()
        .iter()
        .map(|c| c.iter().filter(|&&l| l > 0).map(|&l| vec![0u16; l as usize]).collect())
        .collect();
    // keep zero rows out of the working grid but remember the true shape
    let mut out = Vec::new();
    fn rec(
        v: u16,
        n: usize,
        rows: &mut Vec<Vec<Vec<u16>>>,
        fill: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<Vec<u16>>>>,
    ) {
        if v as usize > n {
            out.push(rows.clone());
            return;
        }
        for s in 0..rows.len() {
            for i in 0..rows[s].len() {
                let j = fill[s][i];
                if j >= rows[s][i].len() {
                    continue;
                }
                // column constraint: the node above must be filled further right
                if i > 0 && fill[s][i - 1] <= j {
                    continue;
                }
                rows[s][i][j] = v;
                fill[s][i] += 1;
                rec(v + 1, n, rows, fill, out);
                fill[s][i] -= 1;
                rows[s][i][j] = 0;
            }
        }
    }
    let mut fill: Vec<Vec<usize>> = rows.iter().map(|c| vec![0; c.len()]).collect();
    let mut raw = Vec::new();
    rec(1, n, &mut rows, &mut fill, &mut raw);
    for grid in raw {
        // reinsert empty rows where the stored shape has zero parts
        let mut entries = Vec::with_capacity(shape.level());
        for (s, comp) in shape.comps().iter().enumerate() {
            let mut rows_it = grid[s].iter();
            let mut c = Vec::new();
            for &l in comp {
                if l > 0 {
                    c.push(rows_it.next().unwrap().clone());
                } else {
                    c.push(Vec::new());
                }
            }
            entries.push(c);
        }
        out.push(StdTableau { shape: shape.clone(), entries });
    }
    out
}

/// A semistandard tableau: filling of a multipartition diagram by pairs
/// `(i, s)` (row index, component index; 1-based).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SsTableau {
    shape: Multipartition,
    /// entries[t][i][j] = (row, comp) pair, both 1-based
    entries: Vec<Vec<Vec<(u16, u16)>>>,
}

/// The order on entry pairs: `(i,s) <= (j,t)` iff `s < t`, or `s = t` and
/// `i <= j`.
fn pair_le(a: (u16, u16), b: (u16, u16)) -> bool {
    a.1 < b.1 || (a.1 == b.1 && a.0 <= b.0)
}

fn pair_lt(a: (u16, u16), b: (u16, u16)) -> bool {
    pair_le(a, b) && a != b
}

impl SsTableau {
    pub fn shape(&self) -> &Multipartition {
        &self.shape
    }

    pub fn entries(&self) -> &[Vec<Vec<(u16, u16)>>] {
        &self.entries
    }

    pub fn from_entries(shape: &Multipartition, entries: Vec<Vec<Vec<(u16, u16)>>>) -> SsTableau {
        SsTableau { shape: shape.clone(), entries }
    }

    /// The type: `mu^{(s)}_i` = number of nodes labelled `(i, s)`.
    pub fn type_of(&self) -> Multicomposition {
        let r = self.shape.level();
        let mut max_row = vec![0usize; r];
        for comp in &self.entries {
            for row in comp {
                for &(i, s) in row {
                    max_row[s as usize - 1] = max_row[s as usize - 1].max(i as usize);
                }
            }
        }
        let mut comps: Vec<Vec<u32>> = max_row.iter().map(|&m| vec![0u32; m]).collect();
        for comp in &self.entries {
            for row in comp {
                for &(i, s) in row {
                    comps[s as usize - 1][i as usize - 1] += 1;
                }
            }
        }
        Multicomposition::new(comps)
    }

    pub fn is_semistandard(&self) -> bool {
        for (t, comp) in self.entries.iter().enumerate() {
            for (i, row) in comp.iter().enumerate() {
                for (j, &e) in row.iter().enumerate() {
                    // component constraint: (i,s) in component t+1 needs s >= t+1
                    if (e.1 as usize) < t + 1 {
                        return false;
                    }
                    if j + 1 < row.len() && !pair_le(e, row[j + 1]) {
                        return false;
                    }
                    if i + 1 < comp.len() && comp[i + 1].len() > j && !pair_lt(e, comp[i + 1][j]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `T^lambda`: the unique semistandard lambda-tableau of type lambda,
    /// labelling row i of component s entirely by `(i, s)`.
    pub fn t_lambda(shape: &Multipartition) -> SsTableau {
        let entries = shape
            .comps()
            .iter()
            .enumerate()
            .map(|(s, comp)| {
                comp.iter()
                    .enumerate()
                    .map(|(i, &l)| vec![((i + 1) as u16, (s + 1) as u16); l as usize])
                    .collect()
            })
            .collect();
        SsTableau { shape: shape.clone(), entries }
    }
}

/// All semistandard tableaux of the given shape and type, in a deterministic
/// order (nodes filled row-major, smaller entries first).
pub fn semistandard_tableaux(shape: &Multipartition, typ: &Multicomposition) -> Vec<SsTableau> {
    if shape.size() != typ.size() || shape.level() != typ.level() {
        return Vec::new();
    }
    // available letters with multiplicities, sorted by the pair order
    let mut letters: Vec<((u16, u16), u32)> = Vec::new();
    for s in 0..typ.level() {
        for (i, &m) in typ.comp(s).iter().enumerate() {
            if m > 0 {
                letters.push((((i + 1) as u16, (s + 1) as u16), m));
            }
        }
    }
    letters.sort_by_key(|&((i, s), _)| (s, i));
    let nodes: Vec<(usize, usize, usize)> = shape.nodes();
    let mut entries: Vec<Vec<Vec<(u16, u16)>>> = shape
        .comps()
        .iter()
        .map(|c| c.iter().map(|&l| vec![(0u16, 0u16); l as usize]).collect())
        .collect();
    let mut remaining: Vec<u32> = letters.iter().map(|&(_, m)| m).collect();
    let mut out = Vec::new();
    fn rec(
        k: usize,
        nodes: &[(usize, usize, usize)],
        letters: &[((u16, u16), u32)],
        remaining: &mut Vec<u32>,
        entries: &mut Vec<Vec<Vec<(u16, u16)>>>,
        shape: &Multipartition,
        out: &mut Vec<SsTableau>,
    ) {
        if k == nodes.len() {
            out.push(SsTableau { shape: shape.clone(), entries: entries.clone() });
            return;
        }
        let (i, j, s) = nodes[k];
        for li in 0..letters.len() {
            if remaining[li] == 0 {
                continue;
            }
            let e = letters[li].0;
            // component constraint
            if (e.1 as usize) < s + 1 {
                continue;
            }
            // row: weakly increasing left to right
            if j > 0 && !pair_le(entries[s][i][j - 1], e) {
                continue;
            }
            // column: strictly increasing downwards
            if i > 0 && entries[s][i - 1].len() > j && !pair_lt(entries[s][i - 1][j], e) {
                continue;
            }
            entries[s][i][j] = e;
            remaining[li] -= 1;
            rec(k + 1, nodes, letters, remaining, entries, shape, out);
            remaining[li] += 1;
            entries[s][i][j] = (0, 0);
        }
    }
    rec(0, &nodes, &letters, &mut remaining, &mut entries, shape, &mut out);
    out
}

/// `mu(t)`: replace each entry `j` of the standard tableau by the pair
/// `(i, k)` locating `j` in `t^mu`. Returns the tableau and whether it is
/// semistandard.
pub fn mu_of(t: &StdTableau, mu: &Multicomposition) -> (SsTableau, bool) {
    assert_eq!(t.shape().size(), mu.size());
    let canon = StdTableau::canonical_of(mu);
    let n = mu.size() as usize;
    let mut loc = vec![(0u16, 0u16); n];
    for (s, comp) in canon.iter().enumerate() {
        for (i, row) in comp.iter().enumerate() {
            for &v in row {
                loc[v as usize - 1] = ((i + 1) as u16, (s + 1) as u16);
            }
        }
    }
    let entries = t
        .entries()
        .iter()
        .map(|comp| {
            comp.iter()
                .map(|row| row.iter().map(|&v| loc[v as usize - 1]).collect())
                .collect()
        })
        .collect();
    let tab = SsTableau { shape: t.shape().clone(), entries };
    let ss = tab.is_semistandard();
    (tab, ss)
}

/// The auxiliary multipartition `lambda^dagger` and its tableau
/// `T^{lambda dagger}`: component `l` (first nonempty) shrinks to a column of
/// size `|lambda^(l)| - 1`, component `l+1` grows to a column of size
/// `|lambda^(l+1)| + 1`, all others become columns of unchanged size;
/// `T^{lambda dagger}` lays the letters in increasing order along the
/// row-reading of the diagram.
pub fn lambda_dagger(
    lam: &Multipartition,
) -> Result<(Multipartition, SsTableau), MulticombError> {
    let r = lam.level();
    let alpha = lam.type_alpha();
    let l = alpha
        .iter()
        .position(|&x| x > 0)
        .ok_or_else(|| MulticombError::DaggerUndefined("empty multipartition".into()))?;
    if l == r - 1 {
        return Err(MulticombError::DaggerUndefined(
            "first nonempty component is the last one (l = r)".into(),
        ));
    }
    let mut sizes: Vec<u32> = alpha.clone();
    sizes[l] -= 1;
    sizes[l + 1] += 1;
    let comps: Vec<Vec<u32>> = sizes.iter().map(|&k| vec![1u32; k as usize]).collect();
    let dagger = Multicomposition::new(comps).as_partition().expect("columns are partitions");
    // letters of type dagger: (i, s) for 1 <= i <= sizes[s-1], each once,
    // sorted by the pair order; laid row-major over [lambda]
    let mut letters = Vec::new();
    for (s, &k) in sizes.iter().enumerate() {
        for i in 1..=k {
            letters.push((i as u16, (s + 1) as u16));
        }
    }
    letters.sort_by_key(|&(i, s)| (s, i));
    let nodes = lam.nodes();
    assert_eq!(letters.len(), nodes.len());
    let mut entries: Vec<Vec<Vec<(u16, u16)>>> = lam
        .comps()
        .iter()
        .map(|c| c.iter().map(|&len| vec![(0u16, 0u16); len as usize]).collect())
        .collect();
    for (idx, &(i, j, s)) in nodes.iter().enumerate() {
        entries[s][i][j] = letters[idx];
    }
    let tab = SsTableau { shape: lam.clone(), entries };
    debug_assert!(tab.is_semistandard(), "T^dagger must be semistandard");
    debug_assert_eq!(tab.type_of(), *dagger.inner());
    // a(lambda) > a(dagger)
    let (al, ad) = (lam.avec(), dagger.avec());
    debug_assert!(al.iter().zip(&ad).all(|(x, y)| x >= y) && al != ad);
    Ok((dagger, tab))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multicomb::all_r_partitions;

    fn mp(c: &[&[u32]]) -> Multipartition {
        Multipartition::new(c.iter().map(|x| x.to_vec()).collect())
    }

    fn mc(c: &[&[u32]]) -> Multicomposition {
        Multicomposition::new(c.iter().map(|x| x.to_vec()).collect())
    }

    /// Brute-force standard-tableau count: all bijective fillings, filtered.
    fn std_brute(shape: &Multipartition) -> usize {
        let nodes = shape.nodes();
        let n = nodes.len();
        let mut count = 0;
        let perms = crate::multicomb::perm::all_perms(n);
        for p in perms {
            let mut entries: Vec<Vec<Vec<u16>>> = shape
                .comps()
                .iter()
                .map(|c| c.iter().map(|&l| vec![0u16; l as usize]).collect())
                .collect();
            for (k, &(i, j, s)) in nodes.iter().enumerate() {
                entries[s][i][j] = (p.apply(k) + 1) as u16;
            }
            let t = StdTableau::from_entries(shape, entries);
            if t.is_standard() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn std_tableaux_examples() {
        assert_eq!(std_tableaux(&mp(&[&[1], &[1]])).len(), 2);
        assert_eq!(std_tableaux(&mp(&[&[4], &[]])).len(), 1);
        assert_eq!(std_tableaux(&mp(&[&[1, 1], &[]])).len(), 1);
        for shape in all_r_partitions(3, 2) {
            assert_eq!(std_tableaux(&shape).len(), std_brute(&shape), "shape {shape}");
        }
    }

    #[test]
    fn canonical_tableau_has_identity_word() {
        for shape in all_r_partitions(3, 2) {
            let t = StdTableau::canonical(&shape);
            assert!(t.is_standard());
            assert!(t.d_perm().is_identity());
            let all = std_tableaux(&shape);
            assert!(all.contains(&t));
            for u in &all {
                assert!(u.is_standard());
                // d(t) reconstructs the tableau from the canonical one
                let d = u.d_perm();
                let canon = StdTableau::canonical(&shape);
                let rebuilt: Vec<Vec<Vec<u16>>> = canon
                    .entries()
                    .iter()
                    .map(|comp| {
                        comp.iter()
                            .map(|row| {
                                row.iter()
                                    .map(|&v| (d.apply(v as usize - 1) + 1) as u16)
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                assert_eq!(rebuilt, u.entries());
            }
        }
    }

    /// Brute-force semistandard enumeration: every assignment of letters.
    fn ss_brute(shape: &Multipartition, typ: &Multicomposition) -> usize {
        let nodes = shape.nodes();
        if shape.size() != typ.size() {
            return 0;
        }
        let mut letters = Vec::new();
        for s in 0..typ.level() {
            for (i, &m) in typ.comp(s).iter().enumerate() {
                for _ in 0..m {
                    letters.push(((i + 1) as u16, (s + 1) as u16));
                }
            }
        }
        letters.sort();
        let mut count = 0;
        // enumerate distinct multiset permutations via sorted-perm filtering
        let perms = crate::multicomb::perm::all_perms(letters.len());
        let mut seen = std::collections::HashSet::new();
        for p in perms {
            let arrangement: Vec<(u16, u16)> =
                (0..letters.len()).map(|k| letters[p.apply(k)]).collect();
            if !seen.insert(arrangement.clone()) {
                continue;
            }
            let mut entries: Vec<Vec<Vec<(u16, u16)>>> = shape
                .comps()
                .iter()
                .map(|c| c.iter().map(|&l| vec![(0u16, 0u16); l as usize]).collect())
                .collect();
            for (k, &(i, j, s)) in nodes.iter().enumerate() {
                entries[s][i][j] = arrangement[k];
            }
            let t = SsTableau::from_entries(shape, entries);
            if t.is_semistandard() {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn semistandard_examples() {
        // lambda = ((2),()), mu = ((1,1),()) -> exactly one tableau
        let tabs = semistandard_tableaux(&mp(&[&[2], &[]]), &mc(&[&[1, 1], &[]]));
        assert_eq!(tabs.len(), 1);
        // lambda = mu -> only T^lambda
        for shape in all_r_partitions(3, 2) {
            let tabs = semistandard_tableaux(&shape, shape.inner());
            assert_eq!(tabs.len(), 1);
            assert_eq!(tabs[0], SsTableau::t_lambda(&shape));
        }
        // dominance is necessary
        let tabs = semistandard_tableaux(&mp(&[&[1, 1], &[]]), &mc(&[&[2], &[]]));
        assert!(tabs.is_empty());
    }

    #[test]
    fn semistandard_matches_brute_force() {
        let shapes = all_r_partitions(3, 2);
        for shape in &shapes {
            for typ in &shapes {
                let fast = semistandard_tableaux(shape, typ.inner()).len();
                let brute = ss_brute(shape, typ.inner());
                assert_eq!(fast, brute, "shape {shape} type {typ}");
                if fast > 0 {
                    assert!(shape.dominates(typ).unwrap(), "nonempty implies dominance");
                }
            }
        }
    }

    #[test]
    fn semistandard_type_consistency() {
        let shape = mp(&[&[2, 1], &[1]]);
        let typ = mc(&[&[1, 1], &[2]]);
        for t in semistandard_tableaux(&shape, &typ) {
            assert!(t.is_semistandard());
            assert_eq!(t.type_of(), typ);
        }
    }

    #[test]
    fn t0_plus_factorizes() {
        // |T0+(lambda,mu)| = prod_k |T0(lambda^k, mu^k)| when a(lambda)=a(mu)
        for lam in all_r_partitions(3, 2) {
            for mu_shape in all_r_partitions(3, 2) {
                let mu = mu_shape.inner();
                if lam.avec() != mu.avec() {
                    continue;
                }
                let lhs = semistandard_tableaux(&lam, mu).len();
                let mut rhs = 1usize;
                for s in 0..lam.level() {
                    let l1 = Multipartition::new(vec![lam.comp_trimmed(s).to_vec()]);
                    let m1 = Multicomposition::new(vec![mu.comp_trimmed(s).to_vec()]);
                    rhs *= semistandard_tableaux(&l1, &m1).len();
                }
                assert_eq!(lhs, rhs, "lambda {lam} mu {mu}");
            }
        }
    }

    #[test]
    fn mu_of_examples() {
        // t = t^lambda, mu = lambda -> T^lambda, semistandard
        for shape in all_r_partitions(3, 2) {
            let t = StdTableau::canonical(&shape);
            let (tab, ss) = mu_of(&t, shape.inner());
            assert!(ss);
            assert_eq!(tab, SsTableau::t_lambda(&shape));
        }
        // mu = omega: all entries distinct, recovers the standard tableau
        let shape = mp(&[&[2], &[1]]);
        let omega = mc(&[&[0], &[1, 1, 1]]);
        for t in std_tableaux(&shape) {
            let (tab, _) = mu_of(&t, &omega);
            // entry at a node is (value, r): distinct rows encode the values
            let mut seen = std::collections::HashSet::new();
            for comp in tab.entries() {
                for row in comp {
                    for &e in row {
                        assert!(seen.insert(e));
                        assert_eq!(e.1, 2);
                    }
                }
            }
        }
        // some t with mu(t) not semistandard at n = 3, r = 1, mu = (2,1)
        let shape = mp(&[&[2, 1]]);
        let mu = mc(&[&[2, 1]]);
        let flagged: Vec<bool> =
            std_tableaux(&shape).iter().map(|t| mu_of(t, &mu).1).collect();
        assert!(flagged.contains(&false), "expected a non-semistandard mu(t)");
        assert!(flagged.contains(&true));
    }

    #[test]
    fn dagger_examples() {
        // paper worked example
        let lam = mp(&[&[3, 2, 1], &[2, 2]]);
        let (dag, tab) = lambda_dagger(&lam).unwrap();
        assert_eq!(dag.inner(), &mc(&[&[1, 1, 1, 1, 1], &[1, 1, 1, 1, 1]]));
        let expect = vec![
            vec![vec![(1, 1), (2, 1), (3, 1)], vec![(4, 1), (5, 1)], vec![(1, 2)]],
            vec![vec![(2, 2), (3, 2)], vec![(4, 2), (5, 2)]],
        ];
        assert_eq!(tab.entries(), &expect[..]);
        assert!(tab.is_semistandard());

        let (dag, _) = lambda_dagger(&mp(&[&[1], &[1]])).unwrap();
        assert_eq!(dag.inner(), &mc(&[&[], &[1, 1]]));

        assert!(lambda_dagger(&mp(&[&[], &[2]])).is_err());
    }

    #[test]
    fn dagger_lowers_avec() {
        for lam in all_r_partitions(4, 2) {
            if let Ok((dag, _)) = lambda_dagger(&lam) {
                assert_eq!(dag.size(), lam.size());
                let (a, b) = (lam.avec(), dag.avec());
                assert!(a.iter().zip(&b).all(|(x, y)| x >= y));
                assert_ne!(a, b);
            }
        }
    }
}
