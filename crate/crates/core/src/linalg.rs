//! Dense complex linear algebra over tensor-product spaces.
//!
//! [`ComplexMatrix`] stores entries row-major. Hermitian eigendecomposition and
//! the SVD delegate to `nalgebra`; everything tensor-structured (Kronecker
//! products, partial traces, partial transposes, index reshuffling) lives here.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Tolerance used for Hermiticity checks on stored operators.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Relative threshold for counting singular values as nonzero.
pub const RANK_TOL: f64 = 1e-10;

/// Ordered list of per-party dimensions of a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidArgument("dimension list is empty".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidArgument(format!(
                "subsystem dimension {d} is below 2"
            )));
        }
        Ok(Dims(dims))
    }

    /// Two parties of equal dimension `d`.
    pub fn qudits(d: usize) -> Self {
        Dims(vec![d, d])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn parties(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    pub fn get(&self, party: usize) -> usize {
        self.0[party]
    }

    /// The two local dimensions, or an arity error when `n != 2`.
    pub fn bipartite(&self) -> Result<(usize, usize)> {
        match self.0.as_slice() {
            [a, b] => Ok((*a, *b)),
            _ => Err(Error::UnsupportedArity {
                got: self.0.len(),
                required: 2,
            }),
        }
    }

    pub fn concat(&self, other: &Dims) -> Dims {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Dims(v)
    }

    /// Decompose a flat index into per-party digits (party 0 most significant).
    pub fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.0.len()];
        for (slot, &d) in out.iter_mut().zip(&self.0).rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }

    pub fn flat(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.0)
            .fold(0, |acc, (&x, &d)| acc * d + x)
    }

    pub fn check_matrix(&self, m: &ComplexMatrix) -> Result<()> {
        let n = self.total();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{} but dims {:?} require {n}x{n}",
                m.rows(),
                m.cols(),
                self.0
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = C64::new(v, 0.0);
        }
        m
    }

    /// `|ket><bra|`
    pub fn outer(ket: &[C64], bra: &[C64]) -> Self {
        Self::from_fn(ket.len(), bra.len(), |i, j| ket[i] * bra[j].conj())
    }

    pub fn projector(v: &[C64]) -> Self {
        Self::outer(v, v)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> C64 {
        let mut acc = ZERO;
        for i in 0..self.rows {
            for k in 0..self.cols {
                acc += self[(i, k)] * other[(k, i)];
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest elementwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// `(A + A^dagger) / 2`
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Real part of `<v|A|v>`.
    pub fn expectation(&self, v: &[C64]) -> f64 {
        inner(v, &self.mul_vec(v)).re
    }

    /// `A B A^dagger`
    pub fn sandwich(&self, inner_op: &ComplexMatrix) -> ComplexMatrix {
        &(self * inner_op) * &self.adjoint()
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    /// Eigendecomposition of the Hermitian part, eigenvalues ascending.
    pub fn eigh(&self) -> HermitianEigen {
        assert!(self.is_square(), "eigh requires a square matrix");
        let eig = self.hermitian_part().to_nalgebra().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.rows).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = Self::from_fn(self.rows, self.rows, |i, j| eig.eigenvectors[(i, order[j])]);
        HermitianEigen { values, vectors }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigh().values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// Thin SVD with singular values sorted descending.
    pub fn svd(&self) -> Svd {
        let k = self.rows.min(self.cols);
        if k == 0 {
            return Svd {
                u: Self::zeros(self.rows, 0),
                singular: Vec::new(),
                v_adj: Self::zeros(0, self.cols),
            };
        }
        let svd = self.to_nalgebra().svd(true, true);
        let u = svd.u.expect("svd requested u");
        let v_t = svd.v_t.expect("svd requested v_t");
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        Svd {
            singular: order.iter().map(|&i| svd.singular_values[i]).collect(),
            u: Self::from_fn(self.rows, k, |i, j| u[(i, order[j])]),
            v_adj: Self::from_fn(k, self.cols, |i, j| v_t[(order[i], j)]),
        }
    }

    /// Unitary factor `Q` of a QR decomposition with the phases of `diag(R)`
    /// moved into `Q`. Applied to a complex Ginibre matrix this yields a
    /// Haar-distributed unitary.
    pub fn qr_unitary(&self) -> ComplexMatrix {
        assert!(self.is_square(), "qr_unitary requires a square matrix");
        let qr = self.to_nalgebra().qr();
        let (q, r) = (qr.q(), qr.r());
        Self::from_fn(self.rows, self.cols, |i, j| {
            let d = r[(j, j)];
            let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
            q[(i, j)] * phase
        })
    }

    /// Numerical rank using the crate-wide singular value threshold.
    pub fn rank(&self) -> usize {
        numerical_rank(&self.svd().singular)
    }

    /// Check that `U^dagger U = I`; returns the worst elementwise deviation.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.rows))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }
}

/// `A = U diag(s) V^dagger`, thin.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    /// Descending, non-negative.
    pub singular: Vec<f64>,
    pub v_adj: ComplexMatrix,
}

/// Count singular values with `s_i > RANK_TOL * max(s_0, 1)`.
pub fn numerical_rank(singular: &[f64]) -> usize {
    let scale = singular.first().copied().unwrap_or(0.0).max(1.0);
    singular.iter().filter(|&&s| s > RANK_TOL * scale).count()
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Returns `None` for (numerically) zero vectors.
pub fn normalized(v: &[C64]) -> Option<Vec<C64>> {
    let n = norm(v);
    if n < 1e-300 {
        return None;
    }
    Some(v.iter().map(|z| z / n).collect())
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows * b.rows, a.cols * b.cols, |i, j| {
        a[(i / b.rows, j / b.cols)] * b[(i % b.rows, j % b.cols)]
    })
}

pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

/// Computational basis vector `|index>` in dimension `dim`.
pub fn basis(dim: usize, index: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[index] = ONE;
    v
}

fn check_parties(dims: &Dims, parties: &[usize]) -> Result<()> {
    if let Some(&p) = parties.iter().find(|&&p| p >= dims.parties()) {
        return Err(Error::DimensionMismatch(format!(
            "party index {p} out of range for {} parties",
            dims.parties()
        )));
    }
    Ok(())
}

/// Trace out every party not listed in `keep` (0-based); kept parties stay in
/// their original order.
pub fn partial_trace(rho: &ComplexMatrix, dims: &Dims, keep: &[usize]) -> Result<ComplexMatrix> {
    dims.check_matrix(rho)?;
    check_parties(dims, keep)?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.parties()).filter(|p| !kept.contains(p)).collect();
    let out_dim: usize = kept.iter().map(|&p| dims.get(p)).product();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    let n = dims.total();
    let digits: Vec<Vec<usize>> = (0..n).map(|i| dims.digits(i)).collect();
    let project = |d: &[usize], parties: &[usize]| -> usize {
        parties.iter().fold(0, |acc, &p| acc * dims.get(p) + d[p])
    };
    for r in 0..n {
        for c in 0..n {
            let (dr, dc) = (&digits[r], &digits[c]);
            if traced.iter().all(|&p| dr[p] == dc[p]) {
                out[(project(dr, &kept), project(dc, &kept))] += rho[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Transpose on one tensor factor of a bipartite operator.
pub fn partial_transpose(rho: &ComplexMatrix, dims: &Dims, party: usize) -> Result<ComplexMatrix> {
    dims.bipartite()?;
    dims.check_matrix(rho)?;
    check_parties(dims, &[party])?;
    let n = dims.total();
    let mut out = ComplexMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let mut dr = dims.digits(r);
            let mut dc = dims.digits(c);
            std::mem::swap(&mut dr[party], &mut dc[party]);
            out[(dims.flat(&dr), dims.flat(&dc))] = rho[(r, c)];
        }
    }
    Ok(out)
}

/// Operator `V` with `V|x_0,...,x_{n-1}> = |x_{perm[0]},...,x_{perm[n-1]}>`.
pub fn permutation_operator(dims: &Dims, perm: &[usize]) -> Result<ComplexMatrix> {
    let n = dims.parties();
    let mut seen = vec![false; n];
    if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return Err(Error::InvalidArgument(format!(
            "{perm:?} is not a permutation of {n} parties"
        )));
    }
    let out_dims = Dims(perm.iter().map(|&p| dims.get(p)).collect());
    let total = dims.total();
    let mut v = ComplexMatrix::zeros(total, total);
    for col in 0..total {
        let x = dims.digits(col);
        let y: Vec<usize> = perm.iter().map(|&p| x[p]).collect();
        v[(out_dims.flat(&y), col)] = ONE;
    }
    Ok(v)
}

/// Swap operator on `C^d (x) C^d`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    permutation_operator(&Dims::qudits(d), &[1, 0]).expect("valid swap permutation")
}

/// Reorder the tensor factors of a state vector so that the parties listed in
/// `order` come first, in that order.
pub fn permute_vector(v: &[C64], dims: &Dims, order: &[usize]) -> Result<(Vec<C64>, Dims)> {
    if v.len() != dims.total() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for dims {dims}",
            v.len()
        )));
    }
    let p = permutation_operator(dims, order)?;
    let out_dims = Dims(order.iter().map(|&k| dims.get(k)).collect());
    Ok((p.mul_vec(v), out_dims))
}

/// Operator Schmidt decomposition `M = sum_i s_i A_i (x) B_i`.
#[derive(Debug, Clone)]
pub struct OperatorSchmidt {
    /// Descending.
    pub singular: Vec<f64>,
    pub left: Vec<ComplexMatrix>,
    pub right: Vec<ComplexMatrix>,
}

impl OperatorSchmidt {
    pub fn rank(&self) -> usize {
        numerical_rank(&self.singular)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let (d1, d2) = (self.left[0].rows(), self.right[0].rows());
        let mut out = ComplexMatrix::zeros(d1 * d2, d1 * d2);
        for ((s, a), b) in self.singular.iter().zip(&self.left).zip(&self.right) {
            out = &out + &kron(a, b).scale_real(*s);
        }
        out
    }
}

/// Reshuffle `M[(i1 i2),(j1 j2)] -> R[(i1 j1),(i2 j2)]` and take the SVD.
pub fn operator_schmidt(m: &ComplexMatrix, dims: &Dims) -> Result<OperatorSchmidt> {
    let (d1, d2) = dims.bipartite()?;
    dims.check_matrix(m)?;
    let reshuffled = ComplexMatrix::from_fn(d1 * d1, d2 * d2, |a, b| {
        let (i1, j1) = (a / d1, a % d1);
        let (i2, j2) = (b / d2, b % d2);
        m[(i1 * d2 + i2, j1 * d2 + j2)]
    });
    let svd = reshuffled.svd();
    let k = svd.singular.len();
    let left = (0..k)
        .map(|t| ComplexMatrix::from_fn(d1, d1, |i, j| svd.u[(i * d1 + j, t)]))
        .collect();
    let right = (0..k)
        .map(|t| ComplexMatrix::from_fn(d2, d2, |i, j| svd.v_adj[(t, i * d2 + j)]))
        .collect();
    Ok(OperatorSchmidt {
        singular: svd.singular,
        left,
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn phi_plus() -> Vec<C64> {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![c(s), ZERO, ZERO, c(s)]
    }

    fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_vec(2, 2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO])
            .unwrap()
    }

    #[test]
    fn kron_identity_and_scalar() {
        let i4 = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));

        let a = pauli_y();
        let one = ComplexMatrix::identity(1);
        assert_eq!(kron(&one, &a), a);
    }

    #[test]
    fn kron_of_diagonals() {
        let a = ComplexMatrix::diag_real(&[1.0, 2.0]);
        let b = ComplexMatrix::diag_real(&[3.0, 4.0]);
        assert_eq!(kron(&a, &b), ComplexMatrix::diag_real(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn partial_trace_examples() {
        let dims = Dims::qudits(2);
        let rho = ComplexMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let sigma = ComplexMatrix::from_real_rows(&[&[0.25, 0.0], &[0.0, 0.75]]).scale_real(2.0);
        let reduced = partial_trace(&kron(&rho, &sigma), &dims, &[0]).unwrap();
        assert!(reduced.max_abs_diff(&rho.scale_real(2.0)) < 1e-14);

        let bell = ComplexMatrix::projector(&phi_plus());
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(partial_trace(&bell, &dims, &[0]).unwrap().max_abs_diff(&half) < 1e-14);

        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert!(partial_trace(&mixed, &dims, &[1]).unwrap().max_abs_diff(&half) < 1e-14);
    }

    #[test]
    fn partial_trace_rejects_bad_party() {
        let dims = Dims::qudits(2);
        let err = partial_trace(&ComplexMatrix::identity(4), &dims, &[2]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
    }

    #[test]
    fn partial_transpose_examples() {
        let dims = Dims::qudits(2);
        let rho = ComplexMatrix::from_real_rows(&[&[0.7, 0.1], &[0.1, 0.3]]);
        let y = pauli_y();
        let pt = partial_transpose(&kron(&rho, &y), &dims, 1).unwrap();
        assert!(pt.max_abs_diff(&kron(&rho, &y.transpose())) < 1e-15);

        // Brute force: the 4x4 matrix is the swap / 2, spectrum {1/2, 1/2, 1/2, -1/2}.
        let bell = ComplexMatrix::projector(&phi_plus());
        let ev = partial_transpose(&bell, &dims, 1).unwrap().eigenvalues();
        assert!((ev[0] + 0.5).abs() < 1e-12);

        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        assert_eq!(partial_transpose(&mixed, &dims, 0).unwrap(), mixed);
    }

    #[test]
    fn partial_transpose_requires_two_parties() {
        let dims = Dims::new(vec![2, 2, 2]).unwrap();
        let err = partial_transpose(&ComplexMatrix::identity(8), &dims, 0).unwrap_err();
        assert_eq!(err, Error::UnsupportedArity { got: 3, required: 2 });
    }

    #[test]
    fn operator_schmidt_examples() {
        let dims = Dims::qudits(2);
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]);
        let prod = kron(&a, &pauli_y());
        assert_eq!(operator_schmidt(&prod, &dims).unwrap().rank(), 1);

        // V = (II + XX + YY + ZZ)/2 -> four singular values equal to 1.
        let swap = operator_schmidt(&swap_operator(2), &dims).unwrap();
        assert_eq!(swap.singular.len(), 4);
        for s in &swap.singular {
            assert!((s - 1.0).abs() < 1e-12);
        }
        assert!(swap.reconstruct().max_abs_diff(&swap_operator(2)) < 1e-12);

        let zero = operator_schmidt(&ComplexMatrix::zeros(4, 4), &dims).unwrap();
        assert!(zero.singular.iter().all(|&s| s == 0.0));
        assert_eq!(zero.rank(), 0);
    }

    #[test]
    fn permutation_operator_swaps_digits() {
        let dims = Dims::new(vec![2, 3]).unwrap();
        let v = permutation_operator(&dims, &[1, 0]).unwrap();
        // |1,2> (index 5) -> |2,1> in 3x2 ordering (index 2*2 + 1 = 5)
        let out = v.mul_vec(&basis(6, 5));
        assert_eq!(out, basis(6, 5));
        let out = v.mul_vec(&basis(6, 1)); // |0,1> -> |1,0> = 1*2 + 0
        assert_eq!(out, basis(6, 2));
        assert!(permutation_operator(&dims, &[0, 0]).is_err());
    }

    #[test]
    fn dims_validation() {
        assert!(Dims::new(vec![]).is_err());
        assert!(Dims::new(vec![2, 1]).is_err());
        let d = Dims::new(vec![2, 3, 4]).unwrap();
        assert_eq!(d.total(), 24);
        assert_eq!(d.flat(&d.digits(17)), 17);
    }
}
