//! Compressed sparse row storage with shareable sparsity patterns.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use faer::sparse::linalg::solvers::SymbolicLlt;
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::Side;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Square symmetric sparsity pattern, sorted column indices per row.
///
/// The symbolic Cholesky analysis is computed lazily and shared by every
/// matrix built on this pattern.
#[derive(Debug)]
pub struct Pattern {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    symbolic: OnceLock<SymbolicLlt<usize>>,
}

impl Pattern {
    /// Builds a pattern from (row, col) pairs; duplicates are merged.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, j) in pairs {
            rows[i].push(j);
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for r in rows.iter_mut() {
            r.sort_unstable();
            r.dedup();
            col_idx.extend_from_slice(r);
            row_ptr.push(col_idx.len());
        }
        Self {
            n,
            row_ptr,
            col_idx,
            symbolic: OnceLock::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row(&self, i: usize) -> &[usize] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    /// Position of entry (i, j) in the value array.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let start = self.row_ptr[i];
        self.row(i).binary_search(&j).ok().map(|p| start + p)
    }

    fn is_structurally_symmetric(&self) -> bool {
        (0..self.n).all(|i| self.row(i).iter().all(|&j| self.position(j, i).is_some()))
    }

    pub(crate) fn symbolic_llt(&self) -> Result<SymbolicLlt<usize>> {
        if let Some(s) = self.symbolic.get() {
            return Ok(s.clone());
        }
        if !self.is_structurally_symmetric() {
            return Err(Error::Factorization(
                "sparsity pattern is not structurally symmetric".into(),
            ));
        }
        let sym = SymbolicSparseColMatRef::new_checked(
            self.n,
            self.n,
            &self.row_ptr,
            None,
            &self.col_idx,
        );
        let s = SymbolicLlt::try_new(sym, Side::Lower)
            .map_err(|e| Error::Factorization(format!("symbolic analysis: {e:?}")))?;
        Ok(self.symbolic.get_or_init(|| s).clone())
    }
}

/// Square sparse matrix in CSR layout.
#[derive(Debug, Clone)]
pub struct CsrMatrix<T> {
    pattern: Arc<Pattern>,
    values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    pub fn zeros(pattern: Arc<Pattern>) -> Self {
        let values = vec![T::from_f64(0.0); pattern.nnz()];
        Self { pattern, values }
    }

    /// Sums `(row, col, value)` triplets into the given pattern, in order.
    pub fn from_triplets_in(pattern: Arc<Pattern>, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut m = Self::zeros(pattern);
        for &(i, j, v) in triplets {
            m.add_to(i, j, v)?;
        }
        Ok(m)
    }

    /// Builds a matrix with its own pattern from triplets.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let pattern = Pattern::from_pairs(
            n,
            triplets
                .iter()
                .flat_map(|&(i, j, _)| [(i, j), (j, i)]),
        );
        Self::from_triplets_in(Arc::new(pattern), triplets)
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        let pattern = Arc::new(Pattern::from_pairs(n, (0..n).map(|i| (i, i))));
        Self {
            pattern,
            values: diag.to_vec(),
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: T) -> Result<()> {
        let p = self.pattern.position(i, j).ok_or_else(|| {
            Error::Numeric(format!("entry ({i}, {j}) is outside the sparsity pattern"))
        })?;
        self.values[p] += v;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.pattern.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn pattern(&self) -> &Arc<Pattern> {
        &self.pattern
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.pattern
            .position(i, j)
            .map(|p| self.values[p])
            .unwrap_or_else(|| T::from_f64(0.0))
    }

    /// Iterator over stored `(row, col, value)` entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n()).flat_map(move |i| {
            let start = self.pattern.row_ptr[i];
            self.pattern
                .row(i)
                .iter()
                .enumerate()
                .map(move |(p, &j)| (i, j, self.values[start + p]))
        })
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        let mut y = vec![T::from_f64(0.0); self.n()];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[T], y: &mut [T]) {
        let rp = &self.pattern.row_ptr;
        let ci = &self.pattern.col_idx;
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = T::from_f64(0.0);
            for p in rp[i]..rp[i + 1] {
                acc += self.values[p] * x[ci[p]];
            }
            *yi = acc;
        }
    }

    /// `self + c * other`; patterns are merged when they differ.
    pub fn add_scaled<U: Scalar>(&self, other: &CsrMatrix<U>, c: T) -> Result<Self>
    where
        T: From<U>,
    {
        if self.n() != other.n() {
            return Err(Error::Parameter(format!(
                "dimension mismatch {} vs {}",
                self.n(),
                other.n()
            )));
        }
        if Arc::ptr_eq(&self.pattern, &other.pattern) {
            let values = self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| *a + c * T::from(*b))
                .collect();
            return Ok(Self {
                pattern: Arc::clone(&self.pattern),
                values,
            });
        }
        let mut trip: Vec<(usize, usize, T)> = self.entries().collect();
        trip.extend(other.entries().map(|(i, j, v)| (i, j, c * T::from(v))));
        Self::from_triplets(self.n(), &trip)
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            pattern: Arc::clone(&self.pattern),
            values: self.values.iter().map(|v| c * *v).collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> CsrMatrix<U> {
        CsrMatrix {
            pattern: Arc::clone(&self.pattern),
            values: self.values.iter().map(|v| f(*v)).collect(),
        }
    }

    /// `max |A_ij - conj(A_ji)|` over stored entries.
    pub fn hermitian_residual(&self) -> f64 {
        self.entries()
            .map(|(i, j, v)| (v - self.get(j, i).conjugate()).modulus())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.modulus()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im_part().abs()).fold(0.0, f64::max)
    }

    /// Gershgorin interval `[min_i (a_ii - r_i), max_i (a_ii + r_i)]` of the
    /// real parts of the diagonal.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n() {
            let start = self.pattern.row_ptr[i];
            let mut d = 0.0;
            let mut r = 0.0;
            for (p, &j) in self.pattern.row(i).iter().enumerate() {
                let v = self.values[start + p];
                if j == i {
                    d = v.re_part();
                } else {
                    r += v.modulus();
                }
            }
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        (lo, hi)
    }

    /// Row-major dense copy, for small test problems.
    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let n = self.n();
        let mut d = vec![vec![T::from_f64(0.0); n]; n];
        for (i, j, v) in self.entries() {
            d[i][j] = v;
        }
        d
    }

    /// Values of the conjugate transpose laid out on the same pattern, so the
    /// CSR arrays can be read as the CSC arrays of the original matrix.
    /// Only valid for Hermitian matrices: A(j, i) = conj(A(i, j)).
    pub(crate) fn csc_values(&self) -> Vec<T> {
        self.values.iter().map(|v| v.conjugate()).collect()
    }

    pub(crate) fn as_faer<'a>(&'a self, vals: &'a [T]) -> SparseColMatRef<'a, usize, T> {
        let sym = SymbolicSparseColMatRef::new_checked(
            self.n(),
            self.n(),
            self.pattern.row_ptr(),
            None,
            self.pattern.col_idx(),
        );
        SparseColMatRef::new(sym, vals)
    }

    /// Writes the matrix in Matrix Market coordinate format (all entries,
    /// `general` symmetry, 1-based indices).
    pub fn write_matrix_market(&self, path: &Path, comment: &str) -> Result<()> {
        let field = if T::IS_COMPLEX { "complex" } else { "real" };
        let mut out = String::new();
        writeln!(out, "%%MatrixMarket matrix coordinate {field} general").ok();
        for line in comment.lines() {
            writeln!(out, "% {line}").ok();
        }
        writeln!(out, "{} {} {}", self.n(), self.n(), self.nnz()).ok();
        for (i, j, v) in self.entries() {
            if T::IS_COMPLEX {
                writeln!(out, "{} {} {:.17e} {:.17e}", i + 1, j + 1, v.re_part(), v.im_part()).ok();
            } else {
                writeln!(out, "{} {} {:.17e}", i + 1, j + 1, v.re_part()).ok();
            }
        }
        let mut f = std::fs::File::create(path)?;
        f.write_all(out.as_bytes())?;
        Ok(())
    }
}
