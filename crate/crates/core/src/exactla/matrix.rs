//! Dense exact matrices: first-pivot Gaussian elimination, rank, RREF,
//! nullspace, and a reusable elimination record for repeated solves.

use super::scalar::{FieldSpec, Scalar};

/// Dense matrix over one exact field. Row-major storage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(spec: &FieldSpec, rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![spec.zero(); rows * cols] }
    }

    pub fn identity(spec: &FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(spec, n, n);
        for i in 0..n {
            m.set(i, i, spec.one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        ExactMatrix { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        ExactMatrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: Option<Scalar> = None;
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let t = a.mul(other.get(k, j));
                    acc = Some(match acc {
                        None => t,
                        Some(s) => s.add(&t),
                    });
                }
                out.push(acc.unwrap_or_else(|| self.data[0].sub(&self.data[0])));
            }
        }
        ExactMatrix { rows: self.rows, cols: other.cols, data: out }
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let zero = if !v.is_empty() { v[0].sub(&v[0]) } else { panic!("empty vector") };
        let mut out = vec![zero; self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let a = self.get(i, j);
                if !a.is_zero() {
                    out[j] = out[j].add(&vi.mul(a));
                }
            }
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Reduced row echelon form with deterministic first-pivot choice.
    /// Returns the RREF and the pivot column per pivot row.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..m.cols {
            let mut piv = None;
            for row in rank..m.rows {
                if !m.get(row, col).is_zero() {
                    piv = Some(row);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            m.swap_rows(rank, piv);
            let inv = m.get(rank, col).inv().expect("pivot invertible");
            for j in col..m.cols {
                let v = m.get(rank, j).mul(&inv);
                m.set(rank, j, v);
            }
            for row in 0..m.rows {
                if row != rank && !m.get(row, col).is_zero() {
                    let f = m.get(row, col).clone();
                    for j in col..m.cols {
                        let v = m.get(row, j).sub(&f.mul(m.get(rank, j)));
                        m.set(row, j, v);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Determinant by Gaussian elimination (square matrices).
    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det: Option<Scalar> = None;
        let mut sign_flip = false;
        let n = m.rows;
        let mut rank = 0usize;
        for col in 0..n {
            let mut piv = None;
            for row in rank..n {
                if !m.get(row, col).is_zero() {
                    piv = Some(row);
                    break;
                }
            }
            let Some(piv) = piv else {
                return m.data[0].sub(&m.data[0]); // a zero column: det = 0
            };
            if piv != rank {
                m.swap_rows(rank, piv);
                sign_flip = !sign_flip;
            }
            let pivot = m.get(rank, col).clone();
            det = Some(match det {
                None => pivot.clone(),
                Some(d) => d.mul(&pivot),
            });
            let inv = pivot.inv().unwrap();
            for row in rank + 1..n {
                if !m.get(row, col).is_zero() {
                    let f = m.get(row, col).mul(&inv);
                    for j in col..n {
                        let v = m.get(row, j).sub(&f.mul(m.get(rank, j)));
                        m.set(row, j, v);
                    }
                }
            }
            rank += 1;
        }
        let mut d = det.expect("nonempty matrix");
        if sign_flip {
            d = d.neg();
        }
        d
    }

    /// A particular solution of `A x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        SolveCache::new(self).solve(b)
    }

    /// Basis of the right nullspace `{x : A x = 0}`, echelonized over the
    /// free columns. Deterministic.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let zero = self.zero_scalar();
        let one = match &zero {
            Scalar::Fp { p, .. } => Scalar::Fp { v: 1, p: *p },
            Scalar::Rat(_) => Scalar::Rat(num::rational::BigRational::from_integer(1.into())),
        };
        let piv_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if piv_set.contains(&free) {
                continue;
            }
            let mut v = vec![zero.clone(); self.cols];
            v[free] = one.clone();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = r.get(prow, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the left nullspace `{v : v A = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vec<Scalar>> {
        self.transpose().nullspace()
    }

    fn zero_scalar(&self) -> Scalar {
        assert!(!self.data.is_empty(), "zero_scalar on empty matrix");
        self.data[0].sub(&self.data[0])
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).serialize()).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Factored elimination of a fixed matrix `A`, reusable across many
/// right-hand sides. Stores `E` with `E A = R` in RREF.
pub struct SolveCache {
    rref: ExactMatrix,
    elim: ExactMatrix,
    pivots: Vec<usize>,
    cols: usize,
}

impl SolveCache {
    pub fn new(a: &ExactMatrix) -> SolveCache {
        // Row-reduce [A | I] jointly.
        let m = a.rows();
        let n = a.cols();
        let zero = if m * n == 0 { panic!("empty system") } else { a.get(0, 0).sub(a.get(0, 0)) };
        let one = match &zero {
            Scalar::Fp { p, .. } => Scalar::Fp { v: 1, p: *p },
            Scalar::Rat(_) => Scalar::Rat(num::rational::BigRational::from_integer(1.into())),
        };
        let mut aug = ExactMatrix::zeros_like(&zero, m, n + m);
        for i in 0..m {
            for j in 0..n {
                aug.set(i, j, a.get(i, j).clone());
            }
            aug.set(i, n + i, one.clone());
        }
        // eliminate on the first n columns only
        let mut pivots = Vec::new();
        let mut rank = 0usize;
        for col in 0..n {
            let mut piv = None;
            for row in rank..m {
                if !aug.get(row, col).is_zero() {
                    piv = Some(row);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            aug.swap_rows(rank, piv);
            let inv = aug.get(rank, col).inv().unwrap();
            for j in 0..n + m {
                let v = aug.get(rank, j).mul(&inv);
                aug.set(rank, j, v);
            }
            for row in 0..m {
                if row != rank && !aug.get(row, col).is_zero() {
                    let f = aug.get(row, col).clone();
                    for j in 0..n + m {
                        let v = aug.get(row, j).sub(&f.mul(aug.get(rank, j)));
                        aug.set(row, j, v);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == m {
                break;
            }
        }
        let mut rref = ExactMatrix::zeros_like(&zero, m, n);
        let mut elim = ExactMatrix::zeros_like(&zero, m, m);
        for i in 0..m {
            for j in 0..n {
                rref.set(i, j, aug.get(i, j).clone());
            }
            for j in 0..m {
                elim.set(i, j, aug.get(i, n + j).clone());
            }
        }
        SolveCache { rref, elim, pivots, cols: n }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn full_column_rank(&self) -> bool {
        self.pivots.len() == self.cols
    }

    /// Particular solution of `A x = b` (supported on pivot columns), or
    /// `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.elim.rows());
        let c = self.elim_apply(b);
        let zero = c[0].sub(&c[0]);
        let mut x = vec![zero; self.cols];
        for (prow, &pcol) in self.pivots.iter().enumerate() {
            x[pcol] = c[prow].clone();
        }
        for (row, ci) in c.iter().enumerate() {
            if row >= self.pivots.len() && !ci.is_zero() {
                return None;
            }
        }
        Some(x)
    }

    fn elim_apply(&self, b: &[Scalar]) -> Vec<Scalar> {
        let m = self.elim.rows();
        let zero = b[0].sub(&b[0]);
        let mut out = vec![zero; m];
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let e = self.elim.get(i, j);
                if !e.is_zero() {
                    *o = o.add(&e.mul(bj));
                }
            }
        }
        out
    }

    /// The RREF of the eliminated matrix (for inspection).
    pub fn rref_matrix(&self) -> &ExactMatrix {
        &self.rref
    }
}

impl ExactMatrix {
    fn zeros_like(zero: &Scalar, rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![zero.clone(); rows * cols] }
    }
}

/// Incremental echelonized row space: insert vectors, track rank, reduce.
#[derive(Clone, Debug)]
pub struct RowSpace {
    cols: usize,
    /// Echelon rows, each with its pivot column; kept sorted by pivot.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl RowSpace {
    pub fn new(cols: usize) -> RowSpace {
        RowSpace { cols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the current basis (fully, in place).
    pub fn reduce(&self, v: &mut Vec<Scalar>) {
        assert_eq!(v.len(), self.cols);
        for (piv, row) in &self.rows {
            if !v[*piv].is_zero() {
                let f = v[*piv].clone();
                for (j, rj) in row.iter().enumerate() {
                    if !rj.is_zero() {
                        v[j] = v[j].sub(&f.mul(rj));
                    }
                }
            }
        }
    }

    /// Insert a vector; returns true when the rank grew.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        self.reduce(&mut v);
        let piv = v.iter().position(|x| !x.is_zero());
        let Some(piv) = piv else { return false };
        let inv = v[piv].inv().unwrap();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x = x.mul(&inv);
            }
        }
        // back-eliminate existing rows
        for (_, row) in self.rows.iter_mut() {
            if !row[piv].is_zero() {
                let f = row[piv].clone();
                for (j, vj) in v.iter().enumerate() {
                    if !vj.is_zero() {
                        row[j] = row[j].sub(&f.mul(vj));
                    }
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < piv);
        self.rows.insert(at, (piv, v));
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::FieldSpec;
    use crate::repkit::SplitMix64;

    fn rand_matrix(spec: &FieldSpec, rng: &mut SplitMix64, r: usize, c: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(spec, r, c);
        for i in 0..r {
            for j in 0..c {
                m.set(i, j, spec.int((rng.next_u64() % 101) as i64));
            }
        }
        m
    }

    #[test]
    fn identity_solves_trivially() {
        let spec = FieldSpec::prime(101, 3, &[]).unwrap();
        let id = ExactMatrix::identity(&spec, 4);
        let b: Vec<_> = (0..4).map(|i| spec.int(i + 5)).collect();
        assert_eq!(id.solve(&b).unwrap(), b);
        assert_eq!(id.rank(), 4);
        assert_eq!(ExactMatrix::zeros(&spec, 3, 3).rank(), 0);
    }

    #[test]
    fn inconsistent_system_detected() {
        let spec = FieldSpec::prime(101, 3, &[]).unwrap();
        let mut a = ExactMatrix::zeros(&spec, 2, 1);
        a.set(0, 0, spec.one());
        a.set(1, 0, spec.one());
        assert!(a.solve(&[spec.one(), spec.int(2)]).is_none());
        assert!(a.solve(&[spec.int(2), spec.int(2)]).is_some());
    }

    #[test]
    fn random_solve_substitutes_back() {
        let spec = FieldSpec::prime(101, 3, &[]).unwrap();
        let mut rng = SplitMix64::new(11);
        for _ in 0..10 {
            let a = rand_matrix(&spec, &mut rng, 20, 20);
            if a.rank() < 20 {
                continue;
            }
            let b: Vec<_> = (0..20).map(|_| spec.int((rng.next_u64() % 101) as i64)).collect();
            let x = a.solve(&b).unwrap();
            // A x = b
            let ax = a.transpose().apply_row(&x);
            assert_eq!(ax, b);
        }
    }

    #[test]
    fn rank_transpose_and_nullity() {
        let spec = FieldSpec::prime(7, 2, &[]).unwrap();
        let mut rng = SplitMix64::new(3);
        for _ in 0..20 {
            let a = rand_matrix(&spec, &mut rng, 5, 8);
            let r = a.rank();
            assert_eq!(r, a.transpose().rank());
            let ns = a.nullspace();
            assert_eq!(r + ns.len(), 8);
            for v in &ns {
                let av = a.transpose().apply_row(v);
                assert!(av.iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn det_cross_checks_rank() {
        let spec = FieldSpec::prime(101, 3, &[]).unwrap();
        let mut rng = SplitMix64::new(5);
        for _ in 0..20 {
            let a = rand_matrix(&spec, &mut rng, 6, 6);
            let full = a.rank() == 6;
            assert_eq!(!a.det().is_zero(), full);
        }
    }

    #[test]
    fn rowspace_tracks_rank() {
        let spec = FieldSpec::prime(7, 2, &[]).unwrap();
        let mut rs = RowSpace::new(3);
        assert!(rs.insert(vec![spec.int(1), spec.int(2), spec.int(3)]));
        assert!(rs.insert(vec![spec.int(0), spec.int(1), spec.int(1)]));
        assert!(!rs.insert(vec![spec.int(1), spec.int(3), spec.int(4)]));
        assert_eq!(rs.rank(), 2);
        assert!(rs.contains(&[spec.int(2), spec.int(5), spec.int(7)]));
        assert!(!rs.contains(&[spec.int(0), spec.int(0), spec.int(1)]));
    }
}
