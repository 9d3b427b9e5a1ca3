//! Dense complex matrix primitives: Kronecker products, partial trace,
//! partial transpose, Hermitian eigendecomposition, trace norm.
//!
//! Matrices are stored dense row-major. Everything here is desk scale: the
//! eigensolver only ever sees small Hermitian matrices (4x4 up to 16x16 in
//! practice), and the partial trace is meant for matrices of that size too.
//! Large multi-qubit states are reduced directly from amplitude vectors in
//! the `states` module and never materialize as full density matrices.
//!
//! Basis convention, used everywhere in this crate: for a register of N
//! qubits, bit 0 of the basis index is the most significant bit and
//! addresses site 0.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Which tensor factor of a bipartite matrix an operation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        Ok(Self {
            dim,
            entries: entries.iter().map(|&r| Complex64::new(r, 0.0)).collect(),
        })
    }

    /// Outer product |v><v| of an amplitude vector.
    pub fn outer(amplitudes: &[Complex64]) -> Self {
        let dim = amplitudes.len();
        let mut m = Self::zeros(dim);
        for (i, a) in amplitudes.iter().enumerate() {
            for (j, b) in amplitudes.iter().enumerate() {
                m.set(i, j, a * b.conj());
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Trace of the product `self * other` without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Complex64 {
        assert_eq!(self.dim, other.dim, "trace_product dimension mismatch");
        let mut sum = Complex64::ZERO;
        for i in 0..self.dim {
            for j in 0..self.dim {
                sum += self.get(i, j) * other.get(j, i);
            }
        }
        sum
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn conjugate(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|c| c.conj()).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(j, i, self.get(i, j));
            }
        }
        m
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "add dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "sub dimension mismatch");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = m.get(i, j) + a * other.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "matvec dimension mismatch");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Largest elementwise deviation from `self = self^dagger`.
    pub fn max_hermitian_deviation(&self) -> f64 {
        let mut max = 0.0f64;
        for i in 0..self.dim {
            for j in 0..=i {
                let dev = (self.get(i, j) - self.get(j, i).conj()).norm();
                max = max.max(dev);
            }
        }
        max
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_hermitian_deviation() <= tol
    }

    /// Kronecker product `self (x) other`.
    pub fn kron(&self, other: &ComplexMatrix) -> Self {
        let (da, db) = (self.dim, other.dim);
        let dim = da * db;
        let mut m = Self::zeros(dim);
        for i in 0..da {
            for j in 0..da {
                let a = self.get(i, j);
                if a == Complex64::ZERO {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        m.set(i * db + k, j * db + l, a * other.get(k, l));
                    }
                }
            }
        }
        m
    }

    /// Partial trace over the subsystems not listed in `keep`.
    ///
    /// `dims` are the factor dimensions, most significant first; `keep` must
    /// be strictly increasing. The kept factors retain their relative order.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<Self> {
        let total: usize = dims.iter().product();
        if total != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: total,
            });
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
            return Err(Error::InvalidArgument(
                "keep must be a strictly increasing subset of subsystem indices".into(),
            ));
        }

        // Row-major strides: subsystem 0 is most significant.
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
        let kept_dim: usize = keep.iter().map(|&i| dims[i]).product();
        let traced_dim: usize = traced.iter().map(|&i| dims[i]).product();

        // Flat index of a multi-index spread over the given subsystems.
        let spread = |flat: usize, subs: &[usize]| -> usize {
            let mut rem = flat;
            let mut idx = 0;
            for &s in subs.iter().rev() {
                idx += (rem % dims[s]) * strides[s];
                rem /= dims[s];
            }
            idx
        };

        let mut out = Self::zeros(kept_dim);
        for i in 0..kept_dim {
            let ri = spread(i, keep);
            for j in 0..kept_dim {
                let cj = spread(j, keep);
                let mut sum = Complex64::ZERO;
                for e in 0..traced_dim {
                    let t = spread(e, &traced);
                    sum += self.get(ri + t, cj + t);
                }
                out.set(i, j, sum);
            }
        }
        Ok(out)
    }

    /// Partial transpose of a bipartite matrix with factor dimensions
    /// `[d_first, d_second]`. A pure permutation of entries, so applying it
    /// twice restores the input bit for bit.
    pub fn partial_transpose(&self, dims: [usize; 2], part: Subsystem) -> Result<Self> {
        let [da, db] = dims;
        if da * db != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: da * db,
            });
        }
        let mut out = Self::zeros(self.dim);
        for a in 0..da {
            for b in 0..db {
                for ap in 0..da {
                    for bp in 0..db {
                        let (row, col) = match part {
                            Subsystem::First => (ap * db + b, a * db + bp),
                            Subsystem::Second => (a * db + bp, ap * db + b),
                        };
                        out.set(row, col, self.get(a * db + b, ap * db + bp));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Partial transpose over an arbitrary subset of qubit factors of a
    /// 2^M x 2^M matrix.
    pub fn partial_transpose_qubits(&self, subset: &[usize]) -> Result<Self> {
        let num_qubits = self.dim.trailing_zeros() as usize;
        if self.dim == 0 || self.dim != 1 << num_qubits {
            return Err(Error::InvalidArgument(format!(
                "dimension {} is not a power of two",
                self.dim
            )));
        }
        let mut mask = 0usize;
        for &q in subset {
            if q >= num_qubits {
                return Err(Error::SiteOutOfRange {
                    site: q,
                    num_qubits,
                });
            }
            mask |= 1 << (num_qubits - 1 - q);
        }
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let rp = (r & !mask) | (c & mask);
                let cp = (c & !mask) | (r & mask);
                out.set(rp, cp, self.get(r, c));
            }
        }
        Ok(out)
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim, self.dim, &self.entries)
    }

    fn require_hermitian(&self) -> Result<Self> {
        let dev = self.max_hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_dev: dev });
        }
        // Symmetrize away sub-tolerance noise before handing to the solver.
        Ok(self.add(&self.adjoint()).scale(0.5))
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let h = self.require_hermitian()?;
        let mut vals: Vec<f64> = h.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        Ok(vals)
    }

    /// Eigenvalues (ascending) and matching eigenvectors (as columns) of a
    /// Hermitian matrix.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        let h = self.require_hermitian()?;
        let eig = SymmetricEigen::new(h.to_nalgebra());
        let mut order: Vec<usize> = (0..self.dim).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut vecs = Self::zeros(self.dim);
        for (col, &src) in order.iter().enumerate() {
            for row in 0..self.dim {
                vecs.set(row, col, eig.eigenvectors[(row, src)]);
            }
        }
        Ok((vals, vecs))
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?[0])
    }

    /// Square root of a positive semi-definite matrix. Eigenvalues slightly
    /// below zero (solver noise) are clamped to zero.
    pub fn sqrt_psd(&self) -> Result<Self> {
        let (vals, vecs) = self.hermitian_eigen()?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for (k, &v) in vals.iter().enumerate() {
            let root = v.max(0.0).sqrt();
            if root == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = vecs.get(i, k) * root;
                for j in 0..n {
                    let val = out.get(i, j) + vi * vecs.get(j, k).conj();
                    out.set(i, j, val);
                }
            }
        }
        Ok(out)
    }

    /// Trace norm of a Hermitian matrix: sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?.iter().map(|v| v.abs()).sum())
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = self
            .to_nalgebra()
            .svd(false, false)
            .singular_values
            .iter()
            .copied()
            .collect();
        vals.sort_by(|a, b| b.total_cmp(a));
        vals
    }
}

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_entries(
        2,
        vec![
            Complex64::ZERO,
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::ZERO,
        ],
    )
    .unwrap()
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

/// Pauli matrix by axis index (0 = x, 1 = y, 2 = z).
pub fn sigma(axis: usize) -> ComplexMatrix {
    match axis {
        0 => sigma_x(),
        1 => sigma_y(),
        2 => sigma_z(),
        _ => panic!("Pauli axis must be 0, 1 or 2"),
    }
}
