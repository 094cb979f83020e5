//! Dense exact linear algebra.
//!
//! Elimination is deterministic: columns are processed left to right and
//! the pivot is the first remaining row whose entry is a unit. Over F_p
//! this is plain leftmost-pivot Gauss-Jordan and the reduced echelon form
//! is the canonical one for the row space; over the dual numbers pivots
//! must have invertible value part.

use std::ops::{Index, IndexMut};

use crate::dual::Dual;
use crate::error::AlgebraError;
use crate::field::{Fp, Ring};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    p: u32,
    data: Vec<T>,
}

impl<T: Ring> Mat<T> {
    pub fn zeros(rows: usize, cols: usize, p: u32) -> Self {
        Mat {
            rows,
            cols,
            p,
            data: vec![T::zero(p); rows * cols],
        }
    }

    pub fn identity(n: usize, p: u32) -> Self {
        let mut m = Self::zeros(n, n, p);
        for i in 0..n {
            m[(i, i)] = T::one(p);
        }
        m
    }

    pub fn from_rows(rows_data: &[Vec<T>], p: u32) -> Self {
        let rows = rows_data.len();
        let cols = rows_data.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows * cols);
        for r in rows_data {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat {
            rows,
            cols,
            p,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, p: u32, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut m = Self::zeros(rows, cols, p);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Mat<T> {
        Mat::from_fn(self.cols, self.rows, self.p, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols, self.p);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero(self.p);
                for j in 0..self.cols {
                    acc = acc + self[(i, j)] * v[j];
                }
                acc
            })
            .collect()
    }

    pub fn select_cols(&self, sel: &[usize]) -> Mat<T> {
        Mat::from_fn(self.rows, sel.len(), self.p, |i, j| self[(i, sel[j])])
    }

    pub fn stack_rows(&self, other: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            p: self.p,
            data,
        }
    }

    /// Append one extra column.
    pub fn augment_col(&self, v: &[T]) -> Mat<T> {
        assert_eq!(v.len(), self.rows);
        Mat::from_fn(self.rows, self.cols + 1, self.p, |i, j| {
            if j < self.cols {
                self[(i, j)]
            } else {
                v[i]
            }
        })
    }

    /// In-place Gauss-Jordan with deterministic leftmost unit pivots.
    /// Returns the pivot columns. Columns containing a non-unit nonzero
    /// entry but no unit (possible over dual numbers) are reported via
    /// `stuck`, which collects such column indices.
    fn reduce(&mut self, stuck: Option<&mut Vec<usize>>) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut stuck_local = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let mut piv = None;
            for i in r..self.rows {
                if self[(i, c)].try_inv().is_some() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else {
                if (r..self.rows).any(|i| !self[(i, c)].is_zero()) {
                    stuck_local.push(c);
                }
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    let t = self[(r, j)];
                    self[(r, j)] = self[(piv, j)];
                    self[(piv, j)] = t;
                }
            }
            let inv = self[(r, c)].try_inv().unwrap();
            for j in 0..self.cols {
                self[(r, j)] = self[(r, j)] * inv;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)];
                    for j in 0..self.cols {
                        self[(i, j)] = self[(i, j)] - f * self[(r, j)];
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        if let Some(s) = stuck {
            *s = stuck_local;
        }
        pivots
    }
}

impl Mat<Fp> {
    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Mat<Fp>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.reduce(None);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce(None).len()
    }

    /// Basis of the right kernel in the standard reduced form (one vector
    /// per free column, unit at the free position).
    pub fn right_kernel(&self) -> Vec<Vec<Fp>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![Fp::zero(self.p); self.cols];
            v[free] = Fp::one(self.p);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r[(row, free)];
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of the left kernel: vectors w with w * self = 0.
    pub fn left_kernel(&self) -> Vec<Vec<Fp>> {
        self.transpose().right_kernel()
    }

    /// One solution of `self * x = b` with all free variables set to zero.
    pub fn particular_solution(&self, b: &[Fp]) -> Result<Vec<Fp>, AlgebraError> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        let pivots = aug.reduce(None);
        if pivots.contains(&self.cols) {
            return Err(AlgebraError::InconsistentSystem);
        }
        let mut x = vec![Fp::zero(self.p); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = aug[(row, self.cols)];
        }
        Ok(x)
    }

    /// Row-space basis in reduced echelon form (zero rows dropped).
    pub fn row_basis(&self) -> Mat<Fp> {
        let (r, pivots) = self.rref();
        Mat::from_fn(pivots.len(), self.cols, self.p, |i, j| r[(i, j)])
    }

    /// Intersection of the column spaces of `self` and `other`,
    /// returned as a matrix whose columns span the intersection,
    /// echelon-normalized for determinism.
    pub fn col_space_intersection(&self, other: &Mat<Fp>) -> Mat<Fp> {
        assert_eq!(self.rows, other.rows);
        // [A | B] * (x; -y) = 0  =>  A x = B y lies in both spaces.
        let mut joint = Mat::zeros(self.rows, self.cols + other.cols, self.p);
        for i in 0..self.rows {
            for j in 0..self.cols {
                joint[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                joint[(i, self.cols + j)] = other[(i, j)];
            }
        }
        let kernel = joint.right_kernel();
        let vectors: Vec<Vec<Fp>> = kernel
            .iter()
            .map(|k| self.mul_vec(&k[..self.cols]))
            .collect();
        if vectors.is_empty() {
            return Mat::zeros(self.rows, 0, self.p);
        }
        Mat::from_rows(&vectors, self.p).row_basis().transpose()
    }

    /// Determinant by elimination (used where a fast determinant is fine;
    /// the independent cofactor-expansion oracle lives in test code).
    pub fn det(&self) -> Fp {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = Fp::one(self.p);
        for c in 0..m.cols {
            let mut piv = None;
            for i in c..m.rows {
                if !m[(i, c)].is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(piv) = piv else {
                return Fp::zero(self.p);
            };
            if piv != c {
                for j in 0..m.cols {
                    let t = m[(c, j)];
                    m[(c, j)] = m[(piv, j)];
                    m[(piv, j)] = t;
                }
                det = -det;
            }
            det *= m[(c, c)];
            let inv = m[(c, c)].inv().unwrap();
            for i in (c + 1)..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)] * inv;
                    for j in c..m.cols {
                        m[(i, j)] = m[(i, j)] - f * m[(c, j)];
                    }
                }
            }
        }
        det
    }
}

/// Exact solve of `a * x = b` over the dual numbers. Pivots are taken
/// only on entries with invertible value part; if a needed column offers
/// none, the value part is singular there and the solve fails.
pub fn dual_linsolve(a: &Mat<Dual>, b: &[Dual]) -> Result<Vec<Dual>, AlgebraError> {
    assert_eq!(b.len(), a.nrows());
    let p = a.modulus();
    let mut aug = Mat::<Dual>::zeros(a.nrows(), a.ncols() + 1, p);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            aug[(i, j)] = a[(i, j)];
        }
        aug[(i, a.ncols())] = b[i];
    }
    let mut stuck = Vec::new();
    let pivots = aug.reduce(Some(&mut stuck));
    if let Some(&c) = stuck.iter().find(|&&c| c < a.ncols()) {
        return Err(AlgebraError::SingularValuePart { column: c });
    }
    if pivots.contains(&a.ncols()) {
        return Err(AlgebraError::InconsistentSystem);
    }
    // Residual rows must vanish for the system to be consistent.
    for i in pivots.len()..a.nrows() {
        if !aug[(i, a.ncols())].is_zero() {
            return Err(AlgebraError::InconsistentSystem);
        }
    }
    let mut x = vec![Dual::zero(p); a.ncols()];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[(row, a.ncols())];
    }
    Ok(x)
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, idx: (usize, usize)) -> &T {
        debug_assert!(idx.0 < self.rows && idx.1 < self.cols);
        &self.data[idx.0 * self.cols + idx.1]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut T {
        debug_assert!(idx.0 < self.rows && idx.1 < self.cols);
        &mut self.data[idx.0 * self.cols + idx.1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(v: i64, p: u32) -> Fp {
        Fp::new(v, p)
    }

    /// Independent rank oracle: largest k with a nonvanishing k x k minor,
    /// minors computed by cofactor expansion.
    pub fn minor_rank_oracle(m: &Mat<Fp>) -> usize {
        fn cofactor_det(m: &Mat<Fp>, rows: &[usize], cols: &[usize]) -> Fp {
            let p = m.modulus();
            if rows.is_empty() {
                return Fp::one(p);
            }
            let mut acc = Fp::zero(p);
            let r0 = rows[0];
            for (k, &c) in cols.iter().enumerate() {
                if m[(r0, c)].is_zero() {
                    continue;
                }
                let sub_rows: Vec<usize> = rows[1..].to_vec();
                let sub_cols: Vec<usize> = cols
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != k)
                    .map(|(_, &c)| c)
                    .collect();
                let term = m[(r0, c)] * cofactor_det(m, &sub_rows, &sub_cols);
                if k % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(
                start: usize,
                n: usize,
                k: usize,
                cur: &mut Vec<usize>,
                out: &mut Vec<Vec<usize>>,
            ) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for i in start..n {
                    cur.push(i);
                    rec(i + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, n, k, &mut cur, &mut out);
            out
        }
        let max = m.nrows().min(m.ncols());
        for k in (1..=max).rev() {
            for rows in combinations(m.nrows(), k) {
                for cols in combinations(m.ncols(), k) {
                    if !cofactor_det(m, &rows, &cols).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    #[test]
    fn identity_rank() {
        let m = Mat::<Fp>::identity(3, 7);
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn zero_map_kernel_is_standard_basis() {
        let m = Mat::<Fp>::zeros(2, 4, 7);
        let k = m.right_kernel();
        assert_eq!(k.len(), 4);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(x.residue(), u32::from(i == j));
            }
        }
    }

    #[test]
    fn random_rank_matches_minor_oracle() {
        let p = 101;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = Mat::from_fn(5, 7, p, |_, _| fp(rng.random_range(0..p as i64), p));
            assert_eq!(m.rank(), minor_rank_oracle(&m));
        }
    }

    #[test]
    fn rank_equals_transpose_rank() {
        let p = 101;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let r = rng.random_range(1..6);
            let c = rng.random_range(1..6);
            let m = Mat::from_fn(r, c, p, |_, _| fp(rng.random_range(0..p as i64), p));
            assert_eq!(m.rank(), m.transpose().rank());
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let p = 101;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let m = Mat::from_fn(3, 6, p, |_, _| fp(rng.random_range(0..p as i64), p));
            for v in m.right_kernel() {
                assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
            }
        }
    }

    #[test]
    fn particular_solution_and_inconsistency() {
        let p = 101;
        let m = Mat::from_rows(
            &[
                vec![fp(1, p), fp(2, p), fp(3, p)],
                vec![fp(2, p), fp(4, p), fp(6, p)],
            ],
            p,
        );
        // Consistent: b = first row sums.
        let x = m.particular_solution(&[fp(6, p), fp(12, p)]).unwrap();
        let b = m.mul_vec(&x);
        assert_eq!(b[0].residue(), 6);
        assert_eq!(b[1].residue(), 12);
        // Inconsistent: rows are proportional but rhs is not.
        assert_eq!(
            m.particular_solution(&[fp(1, p), fp(3, p)]),
            Err(AlgebraError::InconsistentSystem)
        );
    }

    #[test]
    fn dual_solve_neumann() {
        // A = I + eps N with N strictly upper triangular, b = e1:
        // x = (I - eps N) e1.
        let p = 101;
        let one = Dual::one(p);
        let zero = Dual::zero(p);
        let eps = Dual::epsilon(p);
        let a = Mat::from_rows(&[vec![one, eps], vec![zero, one]], p);
        let b = vec![one, zero];
        let x = dual_linsolve(&a, &b).unwrap();
        assert_eq!(x[0], one);
        assert_eq!(x[1], zero);
        // With b = e2 the eps leaks in: x = e2 - eps*e1.
        let x2 = dual_linsolve(&a, &[zero, one]).unwrap();
        assert_eq!(x2[0], -eps);
        assert_eq!(x2[1], one);
    }

    #[test]
    fn dual_solve_singular_value_part() {
        let p = 101;
        let eps = Dual::epsilon(p);
        let a = Mat::from_rows(&[vec![eps]], p);
        assert_eq!(
            dual_linsolve(&a, &[Dual::one(p)]),
            Err(AlgebraError::SingularValuePart { column: 0 })
        );
    }

    #[test]
    fn dual_solve_substitution_oracle() {
        let p = 32003;
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..25 {
            let n = rng.random_range(2..5);
            let a = Mat::from_fn(n, n, p, |_, _| {
                Dual::new(
                    fp(rng.random_range(0..p as i64), p),
                    fp(rng.random_range(0..p as i64), p),
                )
            });
            // Skip the rare singular value part.
            let val = Mat::from_fn(n, n, p, |i, j| a[(i, j)].val);
            if val.rank() < n {
                continue;
            }
            let b: Vec<Dual> = (0..n)
                .map(|_| {
                    Dual::new(
                        fp(rng.random_range(0..p as i64), p),
                        fp(rng.random_range(0..p as i64), p),
                    )
                })
                .collect();
            let x = dual_linsolve(&a, &b).unwrap();
            let ax = a.mul_vec(&x);
            for i in 0..n {
                assert_eq!(ax[i], b[i]);
            }
            // Value parts agree with the base-field solve.
            let xv = val
                .particular_solution(&b.iter().map(|d| d.val).collect::<Vec<_>>())
                .unwrap();
            for i in 0..n {
                assert_eq!(x[i].val, xv[i]);
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix(max_dim: usize) -> impl Strategy<Value = Mat<Fp>> {
            let p = 101u32;
            (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
                proptest::collection::vec(0..p as i64, r * c)
                    .prop_map(move |data| Mat::from_fn(r, c, p, |i, j| Fp::new(data[i * c + j], p)))
            })
        }

        proptest! {
            #[test]
            fn rank_is_transpose_invariant(m in arb_matrix(6)) {
                prop_assert_eq!(m.rank(), m.transpose().rank());
            }

            #[test]
            fn rank_nullity(m in arb_matrix(6)) {
                prop_assert_eq!(m.rank() + m.right_kernel().len(), m.ncols());
            }

            #[test]
            fn kernel_annihilates(m in arb_matrix(6)) {
                for v in m.right_kernel() {
                    prop_assert!(m.mul_vec(&v).iter().all(|x| x.is_zero()));
                }
            }
        }
    }

    #[test]
    fn col_space_intersection_planes() {
        let p = 101;
        // Two 2-dim subspaces of k^3 sharing the vector (1,1,0).
        let a = Mat::from_rows(
            &[
                vec![fp(1, p), fp(0, p)],
                vec![fp(1, p), fp(0, p)],
                vec![fp(0, p), fp(1, p)],
            ],
            p,
        );
        let b = Mat::from_rows(
            &[
                vec![fp(1, p), fp(1, p)],
                vec![fp(1, p), fp(0, p)],
                vec![fp(0, p), fp(0, p)],
            ],
            p,
        );
        let i = a.col_space_intersection(&b);
        assert_eq!(i.ncols(), 1);
        let v = i.col(0);
        // Proportional to (1,1,0).
        assert_eq!(v[0], v[1]);
        assert!(v[2].is_zero());
        assert!(!v[0].is_zero());
    }
}
