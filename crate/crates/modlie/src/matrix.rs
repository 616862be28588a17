//! Dense exact linear algebra over F_{p^k}: matrices, reduced row echelon
//! form, solving, and row-space ("subspace") arithmetic.
//!
//! Matrices carry their field handle; mixing fields is a bug and panics.
//! Subspaces are kept in reduced row echelon form, so equal subspaces have
//! identical representations and all derived data is deterministic.

use crate::field::{Field, Scalar};
use crate::{Error, Result};
use std::fmt;
use std::sync::Arc;

#[derive(Clone)]
pub struct Mat {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.field.p() == other.field.p()
            && self.field.k() == other.field.k()
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}
impl Eq for Mat {}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zero(field: Arc<Field>, rows: usize, cols: usize) -> Mat {
        Mat {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, cols: usize, rows: &[Vec<Scalar>]) -> Mat {
        let mut m = Mat::zero(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn from_fn(
        field: Arc<Field>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Mat {
        let mut m = Mat::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }
    #[inline]
    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_vec(&self, i: usize) -> Vec<Scalar> {
        self.row(i).to_vec()
    }
    pub fn rows_iter(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j) == u16::from(i == j)))
    }

    fn assert_same_field(&self, other: &Mat) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field),
            "mixed fields in matrix arithmetic"
        );
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.assert_same_field(other);
        assert!(self.rows == other.rows && self.cols == other.cols);
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: Scalar) -> Mat {
        let f = &self.field;
        Mat {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        self.assert_same_field(other);
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let f = &self.field;
        let mut out = Mat::zero(self.field.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                let orow = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d = f.add(*d, f.mul(a, b));
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let f = &self.field;
        let mut out = vec![0 as Scalar; self.cols];
        for (l, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let row = self.row(l);
            for (d, &b) in out.iter_mut().zip(row) {
                *d = f.add(*d, f.mul(a, b));
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn apply_col(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        let mut out = vec![0 as Scalar; self.rows];
        for i in 0..self.rows {
            let row = self.row(i);
            let mut acc: Scalar = 0;
            for (&a, &b) in row.iter().zip(v) {
                acc = f.add(acc, f.mul(a, b));
            }
            out[i] = acc;
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(self.field.clone(), self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let f = &self.field;
        (0..self.rows).fold(0, |acc, i| f.add(acc, self.get(i, i)))
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        self.assert_same_field(other);
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut out = Mat::zero(self.field.clone(), self.rows, cols);
        for i in 0..self.rows {
            out.data[i * cols..i * cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * cols + self.cols..(i + 1) * cols].copy_from_slice(other.row(i));
        }
        out
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        self.assert_same_field(other);
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Kronecker product: `(self ⊗ other)[(i1*rb+i2, j1*cb+j2)] = self[i1,j1]·other[i2,j2]`.
    pub fn kronecker(&self, other: &Mat) -> Mat {
        self.assert_same_field(other);
        let f = &self.field;
        let (ra, ca, rb, cb) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Mat::zero(self.field.clone(), ra * rb, ca * cb);
        for i1 in 0..ra {
            for j1 in 0..ca {
                let a = self.get(i1, j1);
                if a == 0 {
                    continue;
                }
                for i2 in 0..rb {
                    for j2 in 0..cb {
                        let b = other.get(i2, j2);
                        if b != 0 {
                            out.set(i1 * rb + i2, j1 * cb + j2, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zero(self.field.clone(), rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(r0 + i, c0 + j);
            }
        }
        out
    }

    /// Entry-wise image under a field embedding table (see
    /// `Field::embedding_into`).
    pub fn map_scalars(&self, target: Arc<Field>, table: &[Scalar]) -> Mat {
        Mat {
            field: target,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| table[a as usize]).collect(),
        }
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            self.data.swap_ranges(r, pr, self.cols);
            let inv = f.inv(self.get(r, c));
            if inv != 1 {
                for j in c..self.cols {
                    let v = f.mul(self.get(r, j), inv);
                    self.set(r, j, v);
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {x : self * x = 0}, returned as rows.
    pub fn kernel(&self) -> Mat {
        let f = self.field.clone();
        let (r, pivots) = self.rref();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0 as Scalar; n];
            v[fc] = 1;
            for (pi, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(pi, fc));
            }
            rows.push(v);
        }
        Mat::from_rows(f, n, &rows)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(self.field.clone(), n));
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        Some(r.submatrix(0, n, n, n))
    }
}

trait SwapRanges {
    fn swap_ranges(&mut self, a: usize, b: usize, width: usize);
}
impl SwapRanges for Vec<Scalar> {
    fn swap_ranges(&mut self, a: usize, b: usize, width: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.split_at_mut(hi * width);
        head[lo * width..(lo + 1) * width].swap_with_slice(&mut tail[..width]);
    }
}

/// Outcome of solving A x = b (column convention).
pub enum SolveOutcome {
    /// particular is n x r; kernel rows span the homogeneous solutions.
    Solution { particular: Mat, kernel: Mat },
    Inconsistent,
}

/// Solve A x = b where b may have several columns.
pub fn solve(a: &Mat, b: &Mat) -> SolveOutcome {
    assert_eq!(a.rows(), b.rows(), "solve: row mismatch");
    let f = a.field().clone();
    let n = a.cols();
    let r = b.cols();
    let aug = a.hstack(b);
    let (red, pivots) = aug.rref();
    if pivots.iter().any(|&c| c >= n) {
        return SolveOutcome::Inconsistent;
    }
    let mut particular = Mat::zero(f.clone(), n, r);
    for (pi, &pc) in pivots.iter().enumerate() {
        for j in 0..r {
            particular.set(pc, j, red.get(pi, n + j));
        }
    }
    SolveOutcome::Solution {
        particular,
        kernel: a.kernel(),
    }
}

/// Row space of a matrix in canonical (RREF) form.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    field: Arc<Field>,
    ambient: usize,
    basis: Mat,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace dim {} of F^{}", self.dim(), self.ambient)
    }
}

impl Subspace {
    pub fn from_rows(field: Arc<Field>, ambient: usize, rows: &[Vec<Scalar>]) -> Subspace {
        let m = Mat::from_rows(field, ambient, rows);
        Subspace::from_mat(m)
    }

    pub fn from_mat(m: Mat) -> Subspace {
        let field = m.field().clone();
        let ambient = m.cols();
        let (red, pivots) = m.rref();
        let basis = red.submatrix(0, 0, pivots.len(), ambient);
        Subspace {
            field,
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(field: Arc<Field>, ambient: usize) -> Subspace {
        Subspace {
            field: field.clone(),
            ambient,
            basis: Mat::zero(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn whole(field: Arc<Field>, ambient: usize) -> Subspace {
        Subspace::from_mat(Mat::identity(field, ambient))
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn basis(&self) -> &Mat {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residual of v after eliminating against the basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let f = &self.field;
        let mut v = v.to_vec();
        for (ri, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let row = self.basis.row(ri);
            for (slot, &b) in v.iter_mut().zip(row) {
                *slot = f.sub(*slot, f.mul(c, b));
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    /// Coordinates of v in the canonical basis, if v lies in the space.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.rows_iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        Subspace::from_mat(self.basis.vstack(&other.basis))
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let f = self.field.clone();
        let n = self.ambient;
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Mat::zero(f.clone(), other.basis.rows(), n));
        let mut stacked = top.vstack(&bottom);
        stacked.rref_in_place();
        let mut rows = Vec::new();
        for i in 0..stacked.rows() {
            let left_zero = (0..n).all(|j| stacked.get(i, j) == 0);
            let right = (n..2 * n).map(|j| stacked.get(i, j)).collect::<Vec<_>>();
            if left_zero && right.iter().any(|&c| c != 0) {
                rows.push(right);
            }
        }
        Subspace::from_rows(f, n, &rows)
    }

    /// Ambient coordinates not used as pivots; they index a complement.
    pub fn complement_positions(&self) -> Vec<usize> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .collect()
    }

    /// All vectors of the subspace (q^dim of them), in a fixed order.
    /// Errors out above `cap`.
    pub fn enumerate(&self, cap: u64) -> Result<Vec<Vec<Scalar>>> {
        let q = self.field.q() as u64;
        let d = self.dim() as u32;
        let total = q.checked_pow(d).filter(|&t| t <= cap);
        let Some(total) = total else {
            return Err(Error::ResourceCap {
                what: format!("enumerating a dim-{} space over q={}", d, q),
                needed: q.saturating_pow(d),
                cap,
            });
        };
        let f = &self.field;
        let mut out = Vec::with_capacity(total as usize);
        for idx in 0..total {
            let mut v = vec![0 as Scalar; self.ambient];
            let mut rest = idx;
            for bi in 0..self.dim() {
                let c = (rest % q) as Scalar;
                rest /= q;
                if c != 0 {
                    let row = self.basis.row(bi);
                    for (slot, &b) in v.iter_mut().zip(row) {
                        *slot = f.add(*slot, f.mul(c, b));
                    }
                }
            }
            out.push(v);
        }
        Ok(out)
    }
}

/// Incremental echelon basis for spinning; rows stay in (non-reduced)
/// echelon form ordered by pivot column.
pub struct OnlineEchelon {
    field: Arc<Field>,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivot_cols: Vec<usize>,
}

impl OnlineEchelon {
    pub fn new(field: Arc<Field>, ambient: usize) -> OnlineEchelon {
        OnlineEchelon {
            field,
            ambient,
            rows: Vec::new(),
            pivot_cols: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Reduce v against the current rows; if a residual survives, absorb it
    /// and return true.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivot_cols) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, f.inv(row[pc]));
            for (slot, &b) in v.iter_mut().zip(row) {
                *slot = f.sub(*slot, f.mul(factor, b));
            }
        }
        let Some(pc) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let at = self
            .pivot_cols
            .iter()
            .position(|&c| c > pc)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, v);
        self.pivot_cols.insert(at, pc);
        true
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        let f = &self.field;
        let mut v = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivot_cols) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let factor = f.mul(c, f.inv(row[pc]));
            for (slot, &b) in v.iter_mut().zip(row) {
                *slot = f.sub(*slot, f.mul(factor, b));
            }
        }
        v.iter().all(|&c| c == 0)
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn to_subspace(&self) -> Subspace {
        Subspace::from_rows(self.field.clone(), self.ambient, &self.rows)
    }
}

/// Convenience vector helpers sharing the Mat conventions.
pub fn vec_add_scaled(f: &Field, dst: &mut [Scalar], src: &[Scalar], c: Scalar) {
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.add(*d, f.mul(c, s));
    }
}

pub fn vec_is_zero(v: &[Scalar]) -> bool {
    v.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field;

    fn demo_mat() -> Mat {
        let f5 = field(5, 1).unwrap();
        Mat::from_rows(
            f5,
            4,
            &[
                vec![1, 2, 0, 3],
                vec![2, 4, 1, 1],
                vec![0, 0, 1, 0],
                vec![3, 6 % 5, 1, 4],
            ],
        )
    }

    /// Oracle: rank as the largest size of a nonvanishing minor, determinants
    /// by cofactor expansion.
    fn det(m: &Mat) -> Scalar {
        let f = m.field().clone();
        let n = m.rows();
        if n == 0 {
            return 1;
        }
        let mut acc: Scalar = 0;
        for j in 0..n {
            let c = m.get(0, j);
            if c == 0 {
                continue;
            }
            let rows: Vec<Vec<Scalar>> = (1..n)
                .map(|i| {
                    (0..n)
                        .filter(|&jj| jj != j)
                        .map(|jj| m.get(i, jj))
                        .collect()
                })
                .collect();
            let minor = Mat::from_rows(f.clone(), n - 1, &rows);
            let term = f.mul(c, det(&minor));
            acc = if j % 2 == 0 {
                f.add(acc, term)
            } else {
                f.sub(acc, term)
            };
        }
        acc
    }

    fn minor_rank(m: &Mat) -> usize {
        let f = m.field().clone();
        let max = m.rows().min(m.cols());
        for size in (1..=max).rev() {
            let row_sets = subsets(m.rows(), size);
            let col_sets = subsets(m.cols(), size);
            for rs in &row_sets {
                for cs in &col_sets {
                    let sub = Mat::from_fn(f.clone(), size, size, |i, j| m.get(rs[i], cs[j]));
                    if det(&sub) != 0 {
                        return size;
                    }
                }
            }
        }
        0
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                go(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        go(0, n, k, &mut cur, &mut out);
        out
    }

    #[test]
    fn rref_rank_matches_minor_oracle() {
        let m = demo_mat();
        assert_eq!(m.rank(), minor_rank(&m));
        let f3 = field(3, 1).unwrap();
        let cases = [
            vec![vec![0, 0, 0], vec![0, 0, 0]],
            vec![vec![1, 2, 0], vec![2, 1, 1], vec![0, 0, 2]],
            vec![vec![1, 1, 1], vec![2, 2, 2], vec![1, 0, 1]],
        ];
        for rows in &cases {
            let m = Mat::from_rows(f3.clone(), rows[0].len(), rows);
            assert_eq!(m.rank(), minor_rank(&m), "case {:?}", rows);
        }
    }

    #[test]
    fn rref_is_idempotent_and_detects_pivots() {
        let m = demo_mat();
        let (r1, p1) = m.rref();
        let (r2, p2) = r1.rref();
        assert_eq!(r1, r2);
        assert_eq!(p1, p2);
    }

    #[test]
    fn solve_verifies_by_substitution() {
        let f7 = field(7, 1).unwrap();
        let a = Mat::from_rows(
            f7.clone(),
            3,
            &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]],
        );
        let b = Mat::from_rows(f7.clone(), 1, &[vec![1], vec![2], vec![3]]);
        match solve(&a, &b) {
            SolveOutcome::Solution { particular, kernel } => {
                assert_eq!(a.mul(&particular), b);
                for krow in kernel.rows_iter() {
                    // kernel rows are right-kernel vectors
                    assert!(vec_is_zero(&a.apply_col(krow)));
                }
            }
            SolveOutcome::Inconsistent => panic!("system is consistent"),
        }
        // An inconsistent system: same left side, incompatible right side.
        let b2 = Mat::from_rows(f7.clone(), 1, &[vec![1], vec![3], vec![3]]);
        assert!(matches!(solve(&a, &b2), SolveOutcome::Inconsistent));
    }

    #[test]
    fn kernel_times_matrix_vanishes() {
        let m = demo_mat();
        let k = m.kernel();
        for row in k.rows_iter() {
            assert!(vec_is_zero(&m.apply_col(row)));
        }
        assert_eq!(k.rows() + m.rank(), m.cols());
    }

    #[test]
    fn inverse_round_trip() {
        let f7 = field(7, 1).unwrap();
        let a = Mat::from_rows(
            f7.clone(),
            3,
            &[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]],
        );
        let inv = a.inverse().expect("invertible");
        assert!(a.mul(&inv).is_identity());
        let singular = Mat::from_rows(f7, 2, &[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
    }

    /// Modular law dim(U+W) + dim(U∩W) = dim U + dim W, cross-checked by an
    /// exhaustive membership count over F_3^5.
    #[test]
    fn subspace_lattice_modular_law_exhaustive() {
        let f3 = field(3, 1).unwrap();
        let u = Subspace::from_rows(
            f3.clone(),
            5,
            &[vec![1, 0, 2, 0, 1], vec![0, 1, 1, 0, 0]],
        );
        let w = Subspace::from_rows(
            f3.clone(),
            5,
            &[vec![1, 1, 0, 0, 1], vec![0, 0, 1, 1, 0], vec![0, 1, 1, 1, 0]],
        );
        let sum = u.sum(&w);
        let inter = u.intersect(&w);
        assert_eq!(sum.dim() + inter.dim(), u.dim() + w.dim());

        // Oracle: count F_3^5 vectors lying in both / in the span of the
        // union, via brute membership.
        let whole = Subspace::whole(f3.clone(), 5).enumerate(300).unwrap();
        let both = whole
            .iter()
            .filter(|v| u.contains(v) && w.contains(v))
            .count() as u64;
        assert_eq!(both, 3u64.pow(inter.dim() as u32));
        let in_sum = whole.iter().filter(|v| sum.contains(v)).count() as u64;
        assert_eq!(in_sum, 3u64.pow(sum.dim() as u32));
        for v in inter.enumerate(100).unwrap() {
            assert!(u.contains(&v) && w.contains(&v));
        }
    }

    #[test]
    fn subspace_canonical_form_is_representation_independent() {
        let f2 = field(2, 1).unwrap();
        let a = Subspace::from_rows(f2.clone(), 4, &[vec![1, 1, 0, 0], vec![0, 1, 1, 0]]);
        let b = Subspace::from_rows(
            f2.clone(),
            4,
            &[vec![1, 0, 1, 0], vec![0, 1, 1, 0], vec![1, 1, 0, 0]],
        );
        assert_eq!(a, b);
        // Coordinates refer to the canonical echelon basis {1010, 0110},
        // whichever spanning set produced the subspace.
        assert_eq!(a.coordinates(&[1, 0, 1, 0]), Some(vec![1, 0]));
        assert_eq!(b.coordinates(&[1, 0, 1, 0]), Some(vec![1, 0]));
        assert_eq!(a.coordinates(&[1, 1, 0, 0]), Some(vec![1, 1]));
        assert_eq!(a.coordinates(&[0, 0, 0, 1]), None);
    }

    #[test]
    fn online_echelon_tracks_span() {
        let f5 = field(5, 1).unwrap();
        let mut ech = OnlineEchelon::new(f5.clone(), 3);
        assert!(ech.insert(&[1, 2, 3]));
        assert!(ech.insert(&[0, 1, 1]));
        assert!(!ech.insert(&[2, 4, 6 % 5])); // multiple of the first
        assert!(!ech.insert(&[1, 3, 4])); // sum of the two
        assert_eq!(ech.dim(), 2);
        assert!(ech.contains(&[2, 0, 2]));
        let sp = ech.to_subspace();
        assert_eq!(sp.dim(), 2);
    }
}
