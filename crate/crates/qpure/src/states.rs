//! Density operators, their spectra and supports, purity, trace distance,
//! and seeded random-state generation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig, ComplexMatrix, Tolerances};
use crate::rng::Xoshiro256StarStar;

/// Hermitian, positive-semidefinite, unit-trace operator with cached
/// spectral data (eigenvalues descending, matching eigenvector columns).
#[derive(Debug, Clone)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl DensityOperator {
    /// Validates the density-operator invariants and caches the spectrum.
    pub fn new(matrix: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol.equal_tol || tr.im.abs() > tol.equal_tol {
            return Err(Error::InvalidTrace { trace: tr.re });
        }
        let (eigenvalues, eigenvectors) = hermitian_eig(&matrix, tol)?;
        if let Some(&min) = eigenvalues.last() {
            if min < -tol.eig_zero {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: min,
                });
            }
        }
        Ok(DensityOperator {
            matrix,
            eigenvalues,
            eigenvectors,
        })
    }

    /// Projector onto a normalized state vector.
    pub fn from_pure(vector: &ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        let norm = vector.norm_frobenius();
        if (norm - 1.0).abs() > tol.equal_tol {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(vector.outer(vector), tol)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let matrix = ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64);
        Self::new(matrix, &Tolerances::default()).expect("maximally mixed state is valid")
    }

    /// Convex mixture of states with the given weights.
    pub fn mixture(parts: &[(f64, &DensityOperator)], tol: &Tolerances) -> Result<Self> {
        let dim = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("mixture of zero states".into()))?
            .1
            .dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            acc = acc.add(&rho.matrix.scale_real(*w))?;
        }
        Self::new(acc, tol)
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Orthonormal eigenvector columns matching [`Self::eigenvalues`].
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    /// Number of eigenvalues above `eig_zero`.
    pub fn rank(&self, tol: &Tolerances) -> usize {
        self.eigenvalues
            .iter()
            .filter(|&&l| l > tol.eig_zero)
            .count()
    }
}

/// Subspace of a finite-dimensional space, stored as orthonormal basis
/// columns (possibly zero columns).
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ComplexMatrix,
}

impl Subspace {
    pub fn new(ambient_dim: usize, basis: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if basis.rows() != ambient_dim || basis.cols() > ambient_dim {
            return Err(Error::ShapeMismatch(format!(
                "basis of shape {}x{} does not fit ambient dimension {}",
                basis.rows(),
                basis.cols(),
                ambient_dim
            )));
        }
        let gram = basis.adjoint().mul(&basis)?;
        let dev = gram.max_abs_diff(&ComplexMatrix::identity(basis.cols()))?;
        if dev > tol.equal_tol {
            return Err(Error::ShapeMismatch(format!(
                "basis columns are not orthonormal (deviation {dev:.3e})"
            )));
        }
        Ok(Subspace { ambient_dim, basis })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> ComplexMatrix {
        if self.rank() == 0 {
            return ComplexMatrix::zeros(self.ambient_dim, self.ambient_dim);
        }
        self.basis.mul(&self.basis.adjoint()).expect("shape")
    }

    /// Norm of the component of `vector` orthogonal to the subspace.
    pub fn residual_norm(&self, vector: &ComplexMatrix) -> Result<f64> {
        if vector.rows() != self.ambient_dim || vector.cols() != 1 {
            return Err(Error::DimensionMismatch {
                left: vector.rows(),
                right: self.ambient_dim,
            });
        }
        let mut residual = vector.clone();
        if self.rank() > 0 {
            let coeff = self.basis.adjoint().mul(vector)?;
            residual = residual.sub(&self.basis.mul(&coeff)?)?;
        }
        Ok(residual.norm_frobenius())
    }
}

/// Support of a density operator: the span of its eigenvectors with
/// eigenvalue above `eig_zero`.
pub fn support(rho: &DensityOperator, tol: &Tolerances) -> Subspace {
    let rank = rho.rank(tol);
    let columns: Vec<ComplexMatrix> = (0..rank).map(|j| rho.eigenvectors().column(j)).collect();
    let basis = ComplexMatrix::hstack(rho.dim(), &columns).expect("shape");
    Subspace::new(rho.dim(), basis, tol).expect("eigenvector columns are orthonormal")
}

/// Whether the pure state `phi` can occur in an ensemble for `rho`,
/// i.e. whether `phi` lies in the support of `rho` up to tolerance.
pub fn in_q(rho: &DensityOperator, phi: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    let norm = phi.norm_frobenius();
    if (norm - 1.0).abs() > tol.equal_tol {
        return Err(Error::NotNormalized { norm });
    }
    let residual = support(rho, tol).residual_norm(phi)?;
    Ok(residual <= tol.eig_zero.sqrt())
}

/// Purity `tr(rho^2)`, between `1/dim` and 1.
pub fn purity(rho: &DensityOperator) -> f64 {
    // for Hermitian rho this is the squared Frobenius norm
    let f = rho.matrix().norm_frobenius();
    f * f
}

/// Trace distance `1/2 tr |a - b|`, clamped to `[0, 1]`.
pub fn trace_distance(a: &DensityOperator, b: &DensityOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let diff = a.matrix().sub(b.matrix())?;
    let (vals, _) = hermitian_eig(&diff, &Tolerances::default())?;
    let d = 0.5 * vals.iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

/// Whether `tr(a b)` vanishes up to `eig_zero`, i.e. the states have
/// orthogonal supports.
pub fn is_orthogonal(a: &DensityOperator, b: &DensityOperator, tol: &Tolerances) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let overlap = a.matrix().mul(b.matrix())?.trace();
    Ok(overlap.re.abs() <= tol.eig_zero)
}

/// A `dim x rank` matrix with independent standard complex Gaussian entries
/// drawn row-major from the pinned generator (one Box-Muller pair per entry).
pub fn ginibre(dim: usize, rank: usize, seed: u64) -> ComplexMatrix {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    ComplexMatrix::from_fn(dim, rank, |_, _| {
        let (re, im) = rng.next_normal_pair();
        Complex64::new(re, im)
    })
}

/// Random density operator of the given rank via the Ginibre recipe
/// `G G^dagger / tr(G G^dagger)`; deterministic for a fixed seed.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidRank { dim, rank });
    }
    let g = ginibre(dim, rank, seed);
    let raw = g.mul(&g.adjoint())?;
    let raw = raw.hermitian_part()?;
    let tr = raw.trace().re;
    DensityOperator::new(raw.scale_real(1.0 / tr), &Tolerances::default())
}

/// Random normalized state vector from the same Ginibre stream.
pub fn random_pure_vector(dim: usize, seed: u64) -> ComplexMatrix {
    let g = ginibre(dim, 1, seed);
    g.scale_real(1.0 / g.norm_frobenius())
}

/// Haar-random unitary, obtained by modified Gram-Schmidt on a square
/// Ginibre matrix (the positive-diagonal QR convention).
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    let g = ginibre(dim, dim, seed);
    let mut cols: Vec<ComplexMatrix> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for q in &cols {
            let coeff = q.inner(&v).expect("shape");
            v = v.sub(&q.scale(coeff)).expect("shape");
        }
        let norm = v.norm_frobenius();
        cols.push(v.scale_real(1.0 / norm));
    }
    ComplexMatrix::hstack(dim, &cols).expect("shape")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn pure(entries: &[f64]) -> DensityOperator {
        let v = ComplexMatrix::column_from_real(entries);
        let v = v.scale_real(1.0 / v.norm_frobenius());
        DensityOperator::from_pure(&v, &tol()).unwrap()
    }

    #[test]
    fn support_of_degenerate_diagonal() {
        let rho = DensityOperator::new(ComplexMatrix::diag(&[0.5, 0.5, 0.0]), &tol()).unwrap();
        let s = support(&rho, &tol());
        assert_eq!(s.rank(), 2);
        // span{e0, e1}: e2 has unit residual
        let e2 = ComplexMatrix::basis_column(3, 2);
        assert!((s.residual_norm(&e2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn support_of_pure_and_full_rank() {
        let phi = pure(&[1.0, 1.0]);
        assert_eq!(support(&phi, &tol()).rank(), 1);
        let mixed = DensityOperator::maximally_mixed(4);
        assert_eq!(support(&mixed, &tol()).rank(), 4);
    }

    #[test]
    fn in_q_examples() {
        let rho = DensityOperator::new(ComplexMatrix::diag(&[0.5, 0.5, 0.0]), &tol()).unwrap();
        let phi = ComplexMatrix::column_from_real(&[
            std::f64::consts::FRAC_1_SQRT_2,
            std::f64::consts::FRAC_1_SQRT_2,
            0.0,
        ]);
        assert!(in_q(&rho, &phi, &tol()).unwrap());

        let zero = DensityOperator::new(ComplexMatrix::diag(&[1.0, 0.0]), &tol()).unwrap();
        let e1 = ComplexMatrix::basis_column(2, 1);
        assert!(!in_q(&zero, &e1, &tol()).unwrap());

        let full = DensityOperator::new(ComplexMatrix::diag(&[0.9, 0.1]), &tol()).unwrap();
        let any = ComplexMatrix::column_from_real(&[0.6, 0.8]);
        assert!(in_q(&full, &any, &tol()).unwrap());

        let unnormalized = ComplexMatrix::column_from_real(&[2.0, 0.0]);
        assert!(matches!(
            in_q(&full, &unnormalized, &tol()),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn purity_values() {
        assert!((purity(&pure(&[1.0, 0.0])) - 1.0).abs() < 1e-12);
        assert!((purity(&DensityOperator::maximally_mixed(4)) - 0.25).abs() < 1e-12);
        let rho = DensityOperator::new(ComplexMatrix::diag(&[0.75, 0.25]), &tol()).unwrap();
        assert!((purity(&rho) - 0.625).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_values() {
        let zero = pure(&[1.0, 0.0]);
        let one = pure(&[0.0, 1.0]);
        let plus = pure(&[1.0, 1.0]);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        assert!(trace_distance(&zero, &zero).unwrap() < 1e-12);
        assert!(
            (trace_distance(&zero, &plus).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10
        );
        let bigger = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            trace_distance(&zero, &bigger),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn orthogonality_checks() {
        let zero = pure(&[1.0, 0.0]);
        let one = pure(&[0.0, 1.0]);
        assert!(is_orthogonal(&zero, &one, &tol()).unwrap());
        assert!(!is_orthogonal(&zero, &zero, &tol()).unwrap());
        let a = DensityOperator::new(ComplexMatrix::diag(&[0.5, 0.5, 0.0, 0.0]), &tol()).unwrap();
        let b = DensityOperator::new(ComplexMatrix::diag(&[0.0, 0.0, 0.5, 0.5]), &tol()).unwrap();
        assert!(is_orthogonal(&a, &b, &tol()).unwrap());
    }

    #[test]
    fn random_density_contract() {
        let r = random_density(2, 1, 3).unwrap();
        assert!((purity(&r) - 1.0).abs() < 1e-10);

        let r2 = random_density(4, 4, 7).unwrap();
        assert_eq!(r2.rank(&tol()), 4);
        assert!((r2.matrix().trace().re - 1.0).abs() < 1e-12);

        let a = random_density(4, 2, 9).unwrap();
        let b = random_density(4, 2, 9).unwrap();
        assert_eq!(a.matrix().entries(), b.matrix().entries());

        assert!(matches!(
            random_density(2, 3, 0),
            Err(Error::InvalidRank { .. })
        ));
    }

    #[test]
    fn random_unitary_is_unitary() {
        let u = random_unitary(5, 11);
        assert!(u.is_unitary(&tol()));
    }
}
