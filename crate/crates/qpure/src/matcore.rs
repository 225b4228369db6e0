//! Dense complex linear algebra: construction, decomposition and tensor
//! operations on row-major complex matrices, with an explicit tolerance
//! policy shared by every module.
//!
//! Decompositions are made deterministic by a fixed output convention:
//! eigenvalues and singular values are sorted descending, each vector column
//! is rescaled by a global phase so that its largest-modulus entry is real
//! and non-negative, and degenerate values are ordered lexicographically by
//! the phase-normalized columns.

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::ops::Index;

use crate::error::{Error, Result};

/// Numerical thresholds used across the crate.
///
/// `eig_zero` is the threshold below which an eigenvalue or singular value is
/// treated as zero, `cptp_tol` bounds the allowed deviation of a Kraus
/// completeness sum from the identity, and `equal_tol` is the matrix equality
/// threshold in the max-entry-modulus norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub eig_zero: f64,
    pub cptp_tol: f64,
    pub equal_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eig_zero: 1e-9,
            cptp_tol: 1e-8,
            equal_tol: 1e-9,
        }
    }
}

impl Tolerances {
    /// Builds a tolerance set, requiring every field to lie in `[0, 1e-4]`.
    pub fn new(eig_zero: f64, cptp_tol: f64, equal_tol: f64) -> Result<Self> {
        for (name, value) in [
            ("eig_zero", eig_zero),
            ("cptp_tol", cptp_tol),
            ("equal_tol", equal_tol),
        ] {
            if !(0.0..=1e-4).contains(&value) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(Tolerances {
            eig_zero,
            cptp_tol,
            equal_tol,
        })
    }
}

/// Which tensor factor an operation keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Dense complex matrix in row-major layout.
///
/// Values are immutable after construction. A matrix may have zero columns
/// (an empty basis); the row count is always positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.cols + j]
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 {
            return Err(Error::ShapeMismatch("matrix needs at least one row".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                entries.len()
            )));
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(ComplexMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub(crate) fn raw(rows: usize, cols: usize, entries: Vec<Complex64>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        ComplexMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ComplexMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, dim, |i, j| {
            Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// Square matrix with the given real diagonal.
    pub fn diag(values: &[f64]) -> Self {
        let d = values.len();
        Self::from_fn(d, d, |i, j| {
            Complex64::new(if i == j { values[i] } else { 0.0 }, 0.0)
        })
    }

    /// Computational basis column `|index>` of the given dimension.
    pub fn basis_column(dim: usize, index: usize) -> Self {
        Self::from_fn(dim, 1, |i, _| {
            Complex64::new(if i == index { 1.0 } else { 0.0 }, 0.0)
        })
    }

    /// Column vector from a slice of entries.
    pub fn column_from(entries: &[Complex64]) -> Result<Self> {
        Self::new(entries.len(), 1, entries.to_vec())
    }

    /// Column vector from real amplitudes.
    pub fn column_from_real(entries: &[f64]) -> Self {
        ComplexMatrix::raw(
            entries.len(),
            1,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix::raw(
            self.rows,
            self.cols,
            self.entries.iter().map(|z| z.conj()).collect(),
        )
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(ComplexMatrix::raw(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(ComplexMatrix::raw(
            self.rows,
            self.cols,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix::raw(
            self.rows,
            self.cols,
            self.entries.iter().map(|z| z * factor).collect(),
        )
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                left: self.cols,
                right: other.rows,
            });
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    entries[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(ComplexMatrix::raw(self.rows, other.cols, entries))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Max entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn norm_frobenius(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Max entry modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Inner product of two columns, `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.cols != 1 || other.cols != 1 || self.rows != other.rows {
            return Err(Error::ShapeMismatch(
                "inner product expects two columns of equal length".into(),
            ));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Rank-one outer product `|self><other|` of two columns.
    pub fn outer(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, other.rows, |i, j| {
            self[(i, 0)] * other[(j, 0)].conj()
        })
    }

    /// Column `j` as a fresh `rows x 1` matrix.
    pub fn column(&self, j: usize) -> Self {
        Self::from_fn(self.rows, 1, |i, _| self[(i, j)])
    }

    /// Horizontal concatenation of columns taken from `parts`.
    pub fn hstack(rows: usize, parts: &[ComplexMatrix]) -> Result<Self> {
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
        let mut offset = 0;
        for p in parts {
            if p.rows != rows {
                return Err(Error::ShapeMismatch(
                    "hstack parts must share the row count".into(),
                ));
            }
            for i in 0..rows {
                for j in 0..p.cols {
                    out[i * cols + offset + j] = p[(i, j)];
                }
            }
            offset += p.cols;
        }
        Ok(ComplexMatrix::raw(rows, cols, out))
    }

    pub fn is_hermitian(&self, tol: &Tolerances) -> bool {
        self.is_square() && self.hermitian_deviation() <= tol.equal_tol
    }

    pub(crate) fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_unitary(&self, tol: &Tolerances) -> bool {
        if !self.is_square() {
            return false;
        }
        let gram = self.adjoint().mul(self).expect("square");
        gram.max_abs_diff(&Self::identity(self.rows))
            .expect("shape")
            <= tol.equal_tol
    }

    /// `(self + self^dagger) / 2`.
    pub fn hermitian_part(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(self.add(&self.adjoint())?.scale_real(0.5))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn to_na(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.entries)
    }

    fn from_na(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

/// Kronecker (tensor) product, composite index `(i_a, i_b) -> i_a * dim_b + i_b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        let (ia, ib) = (i / b.rows(), i % b.rows());
        let (ja, jb) = (j / b.cols(), j % b.cols());
        a[(ia, ja)] * b[(ib, jb)]
    })
}

/// Partial trace of a square matrix on a bipartite space of dimensions
/// `(dim_a, dim_b)`, keeping the chosen factor.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let (da, db) = dims;
    if !m.is_square() || m.rows() != da * db {
        return Err(Error::DimensionMismatch {
            left: m.rows(),
            right: da * db,
        });
    }
    let idx = |a: usize, b: usize| a * db + b;
    Ok(match keep {
        Subsystem::First => ComplexMatrix::from_fn(da, da, |a, a2| {
            (0..db).map(|b| m[(idx(a, b), idx(a2, b))]).sum()
        }),
        Subsystem::Second => ComplexMatrix::from_fn(db, db, |b, b2| {
            (0..da).map(|a| m[(idx(a, b), idx(a, b2))]).sum()
        }),
    })
}

/// Rescales each column by a global phase so that its largest-modulus entry
/// is real and non-negative; returns the applied factors.
fn phase_normalize_columns(m: &mut [ComplexMatrix]) -> Vec<Complex64> {
    let mut factors = Vec::with_capacity(m.len());
    for col in m.iter_mut() {
        let mut best = 0usize;
        let mut best_norm = 0.0f64;
        for i in 0..col.rows() {
            let n = col[(i, 0)].norm();
            if n > best_norm {
                best_norm = n;
                best = i;
            }
        }
        let factor = if best_norm > 0.0 {
            col[(best, 0)].conj() / Complex64::new(best_norm, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        *col = col.scale(factor);
        factors.push(factor);
    }
    factors
}

/// Total lexicographic order on columns: entrywise by real then imaginary part.
fn lex_less(a: &ComplexMatrix, b: &ComplexMatrix) -> std::cmp::Ordering {
    for i in 0..a.rows() {
        let (x, y) = (a[(i, 0)], b[(i, 0)]);
        match x.re.total_cmp(&y.re) {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
        match x.im.total_cmp(&y.im) {
            std::cmp::Ordering::Equal => {}
            ord => return ord,
        }
    }
    std::cmp::Ordering::Equal
}

/// Sorts `(value, column, companion)` triples by value descending. Groups of
/// exactly equal values, where the pairing is genuinely ambiguous, are
/// ordered lexicographically by their phase-normalized columns; nearly equal
/// values keep their numeric order so the sequence stays monotone.
fn canonical_order(
    values: &mut Vec<f64>,
    columns: &mut Vec<ComplexMatrix>,
    companions: Option<&mut Vec<ComplexMatrix>>,
) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end - 1]] == values[order[end]] {
            end += 1;
        }
        order[start..end].sort_by(|&i, &j| lex_less(&columns[i], &columns[j]));
        start = end;
    }
    *values = order.iter().map(|&i| values[i]).collect();
    *columns = order.iter().map(|&i| columns[i].clone()).collect();
    if let Some(comp) = companions {
        *comp = order.iter().map(|&i| comp[i].clone()).collect();
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in descending order and the matching orthonormal
/// eigenvector columns under the crate-wide deterministic output convention.
pub fn hermitian_eig(m: &ComplexMatrix, tol: &Tolerances) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dev = m.hermitian_deviation();
    if dev > tol.equal_tol {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let sym = m.hermitian_part()?;
    let eig = sym.to_na().symmetric_eigen();
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let vecs = ComplexMatrix::from_na(&eig.eigenvectors);
    let mut columns: Vec<ComplexMatrix> = (0..values.len()).map(|j| vecs.column(j)).collect();
    phase_normalize_columns(&mut columns);
    canonical_order(&mut values, &mut columns, None);
    let vectors = ComplexMatrix::hstack(m.rows(), &columns)?;
    Ok((values, vectors))
}

/// One-sided singular triple construction for `rows >= cols`: right vectors
/// from the Hermitian eigendecomposition of `m^dagger m`, left vectors as
/// the normalized images `m v / |m v|`, with null directions completed by
/// Gram-Schmidt over the standard basis. Taking singular values from the
/// image norms (rather than square roots of eigenvalues) keeps their full
/// relative accuracy, and it sidesteps the unreliability of iterative SVD
/// routines on rank-deficient inputs.
fn svd_tall(m: &ComplexMatrix) -> Result<(Vec<ComplexMatrix>, Vec<f64>, Vec<ComplexMatrix>)> {
    let gram = m.adjoint().mul(m)?.hermitian_part()?;
    let (_, v) = hermitian_eig(&gram, &Tolerances::default())?;
    let k = m.cols();
    let mut ucols: Vec<ComplexMatrix> = Vec::with_capacity(k);
    let mut vcols: Vec<ComplexMatrix> = Vec::with_capacity(k);
    let mut values: Vec<f64> = Vec::with_capacity(k);
    let scale = m.norm_max().max(1.0);
    let null_tol = scale * 1e-13;
    let mut pending_null = Vec::new();
    for j in 0..k {
        let vj = v.column(j);
        let image = m.mul(&vj)?;
        let norm = image.norm_frobenius();
        values.push(norm);
        vcols.push(vj);
        if norm > null_tol {
            ucols.push(image.scale_real(1.0 / norm));
        } else {
            // placeholder, filled by the completion pass below
            ucols.push(ComplexMatrix::zeros(m.rows(), 1));
            pending_null.push(j);
        }
    }
    if !pending_null.is_empty() {
        let existing: Vec<ComplexMatrix> = ucols
            .iter()
            .filter(|c| c.norm_frobenius() > 0.5)
            .cloned()
            .collect();
        let mut completion = orthonormal_completion(m.rows(), &existing);
        for j in pending_null {
            ucols[j] = completion.remove(0);
        }
    }
    Ok((ucols, values, vcols))
}

/// Orthonormal extension of the given orthonormal columns, by modified
/// Gram-Schmidt over the standard basis in index order.
pub fn orthonormal_completion(dim: usize, handled: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
    let mut basis: Vec<ComplexMatrix> = handled.to_vec();
    let mut fresh = Vec::new();
    for i in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = ComplexMatrix::from_fn(dim, 1, |r, _| {
            Complex64::new(if r == i { 1.0 } else { 0.0 }, 0.0)
        });
        // two MGS passes for stable orthogonality
        for _ in 0..2 {
            for q in &basis {
                let coeff = q.inner(&v).expect("shape");
                v = v.sub(&q.scale(coeff)).expect("shape");
            }
        }
        let norm = v.norm_frobenius();
        if norm > 1e-7 {
            let v = v.scale_real(1.0 / norm);
            basis.push(v.clone());
            fresh.push(v);
        }
    }
    fresh
}

/// Singular value decomposition `m = left * diag(s) * right^dagger`.
///
/// Both factors have orthonormal columns (thin form, `min(rows, cols)`
/// columns each); singular values are descending. The left columns follow
/// the deterministic phase convention; each right column carries the same
/// phase factor as its left partner so the reconstruction is exact.
pub fn svd(m: &ComplexMatrix) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    let k = m.rows().min(m.cols());
    if k == 0 {
        return Ok((
            ComplexMatrix::zeros(m.rows(), 0),
            Vec::new(),
            ComplexMatrix::zeros(m.cols(), 0),
        ));
    }
    let (mut ucols, mut values, mut vcols) = if m.rows() >= m.cols() {
        svd_tall(m)?
    } else {
        let (u, s, v) = svd_tall(&m.adjoint())?;
        (v, s, u)
    };
    let factors = phase_normalize_columns(&mut ucols);
    for (col, f) in vcols.iter_mut().zip(&factors) {
        *col = col.scale(*f);
    }
    canonical_order(&mut values, &mut ucols, Some(&mut vcols));
    Ok((
        ComplexMatrix::hstack(m.rows(), &ucols)?,
        values,
        ComplexMatrix::hstack(m.cols(), &vcols)?,
    ))
}
