//! Jordan (principal) bases and angles between supports, worst-case
//! distinguishability, and discrimination probabilities.

use crate::error::{Error, Result};
use crate::matcore::{svd, ComplexMatrix, Tolerances};
use crate::states::{support, DensityOperator, Subspace};

/// Paired orthonormal bases of two subspaces together with the angles
/// between them.
///
/// The paired columns satisfy `<psi1_k | psi2_l> = 0` for `k != l` and
/// `<psi1_k | psi2_k> = cos(angles[k])` with real non-negative overlaps;
/// angles are ascending in `[0, pi/2]` with one entry per pair,
/// `min(rank1, rank2)` in total. When the ranks differ, the unpaired basis
/// vectors of the larger subspace are reported in `leftover1`/`leftover2`.
#[derive(Debug, Clone)]
pub struct JordanDecomposition {
    basis1: ComplexMatrix,
    basis2: ComplexMatrix,
    angles: Vec<f64>,
    leftover1: Vec<ComplexMatrix>,
    leftover2: Vec<ComplexMatrix>,
}

impl JordanDecomposition {
    /// Paired basis columns inside the first subspace.
    pub fn basis1(&self) -> &ComplexMatrix {
        &self.basis1
    }

    /// Paired basis columns inside the second subspace.
    pub fn basis2(&self) -> &ComplexMatrix {
        &self.basis2
    }

    /// Angles in radians, ascending.
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    /// Unpaired basis vectors of the first subspace (nonempty only when
    /// `rank1 > rank2`).
    pub fn leftover1(&self) -> &[ComplexMatrix] {
        &self.leftover1
    }

    /// Unpaired basis vectors of the second subspace.
    pub fn leftover2(&self) -> &[ComplexMatrix] {
        &self.leftover2
    }
}

/// Orthonormal vectors spanning the part of `subspace` orthogonal to the
/// span of `paired` (which must lie inside the subspace). The count equals
/// `subspace.rank() - paired.cols()` thanks to the spectral gap: singular
/// values of the projected basis are either 1 or 0.
fn unpaired_vectors(subspace: &Subspace, paired: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
    let expected = subspace.rank() - paired.cols();
    if expected == 0 {
        return Ok(Vec::new());
    }
    let overlap = paired.adjoint().mul(subspace.basis())?;
    let projected = subspace.basis().sub(&paired.mul(&overlap)?)?;
    let (u, s, _) = svd(&projected)?;
    let mut out = Vec::with_capacity(expected);
    for (k, &sigma) in s.iter().enumerate() {
        if sigma > 0.5 {
            out.push(u.column(k));
        }
    }
    if out.len() != expected {
        return Err(Error::ShapeMismatch(format!(
            "unpaired basis extraction found {} vectors, expected {}",
            out.len(),
            expected
        )));
    }
    Ok(out)
}

/// Jordan decomposition of two subspaces of the same ambient space.
///
/// The angles are `arccos` of the singular values (clamped to `[0, 1]`) of
/// the basis overlap matrix, and the paired bases are the input bases
/// rotated by the singular vector factors.
pub fn jordan(s1: &Subspace, s2: &Subspace) -> Result<JordanDecomposition> {
    if s1.ambient_dim() != s2.ambient_dim() {
        return Err(Error::DimensionMismatch {
            left: s1.ambient_dim(),
            right: s2.ambient_dim(),
        });
    }
    if s1.rank() == 0 || s2.rank() == 0 {
        return Err(Error::EmptySubspace);
    }
    let overlap = s1.basis().adjoint().mul(s2.basis())?;
    let (u, sigmas, v) = svd(&overlap)?;
    let m = sigmas.len();
    let basis1 = s1.basis().mul(&u)?;
    let basis2 = s2.basis().mul(&v)?;

    // common per-pair phase so that the leading entry of each first-basis
    // column is real non-negative; overlaps stay cos(angle) >= 0
    let mut cols1 = Vec::with_capacity(m);
    let mut cols2 = Vec::with_capacity(m);
    for k in 0..m {
        let c1 = basis1.column(k);
        let c2 = basis2.column(k);
        let mut best = 0usize;
        let mut best_norm = 0.0f64;
        for i in 0..c1.rows() {
            let n = c1[(i, 0)].norm();
            if n > best_norm {
                best_norm = n;
                best = i;
            }
        }
        let factor = if best_norm > 0.0 {
            c1[(best, 0)].conj() / num_complex::Complex64::new(best_norm, 0.0)
        } else {
            num_complex::Complex64::new(1.0, 0.0)
        };
        cols1.push(c1.scale(factor));
        cols2.push(c2.scale(factor));
    }
    let basis1 = ComplexMatrix::hstack(s1.ambient_dim(), &cols1)?;
    let basis2 = ComplexMatrix::hstack(s2.ambient_dim(), &cols2)?;

    let angles: Vec<f64> = sigmas.iter().map(|&s| s.clamp(0.0, 1.0).acos()).collect();
    let leftover1 = unpaired_vectors(s1, &basis1)?;
    let leftover2 = unpaired_vectors(s2, &basis2)?;
    Ok(JordanDecomposition {
        basis1,
        basis2,
        angles,
        leftover1,
        leftover2,
    })
}

/// Worst-case distinguishability: the sine of the smallest Jordan angle
/// between the two supports, declared zero when the supports intersect
/// (largest overlap singular value above `1 - eig_zero`).
pub fn wcd(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    let tol = Tolerances::default();
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            left: rho1.dim(),
            right: rho2.dim(),
        });
    }
    let jd = jordan(&support(rho1, &tol), &support(rho2, &tol))?;
    Ok(wcd_from_angles(jd.angles(), &tol))
}

pub(crate) fn wcd_from_angles(angles: &[f64], tol: &Tolerances) -> f64 {
    let min_angle = angles[0];
    if min_angle.cos() > 1.0 - tol.eig_zero {
        0.0
    } else {
        min_angle.sin()
    }
}

/// Optimal average success probability of minimum error discrimination at
/// equal priors, `(1 + D) / 2`.
pub fn p_med(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    Ok((1.0 + crate::states::trace_distance(rho1, rho2)?) / 2.0)
}

/// Worst-case discrimination probability over ensemble members,
/// `(1 + wcd) / 2`.
pub fn p_wcd(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<f64> {
    Ok((1.0 + wcd(rho1, rho2)?) / 2.0)
}
