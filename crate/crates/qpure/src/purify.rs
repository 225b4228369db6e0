//! Construction of optimal purifying channels for a pair of states: the
//! angle-reducing channel on a pure pair, the multi-pair channel acting on
//! the Jordan pairs of two supports, the relabeling isometry that aligns all
//! pairs onto a common output pair, and the two-outcome discrimination
//! channel used by the product-state distance bound.

use num_complex::Complex64;

use crate::channels::{compose, KrausChannel};
use crate::error::{Error, Result};
use crate::geometry::{jordan, wcd, wcd_from_angles};
use crate::matcore::{
    hermitian_eig, orthonormal_completion, tensor, ComplexMatrix, Subsystem, Tolerances,
};
use crate::states::{support, trace_distance, DensityOperator};

/// The channels assembled by [`optimal_purifier`].
///
/// `full` is the composite `trace-out-input after e_tilde after omega_tilde`
/// mapping the input space onto the auxiliary output space; its outputs on
/// the two designated states are the pure `target_outputs`, separated by
/// `achieved_distance`, which equals the worst-case distinguishability of
/// the inputs.
#[derive(Debug, Clone)]
pub struct PurifierBundle {
    pub omega_tilde: KrausChannel,
    pub e_tilde: KrausChannel,
    pub full: KrausChannel,
    pub target_outputs: (ComplexMatrix, ComplexMatrix),
    pub achieved_distance: f64,
}

fn column_norm_check(v: &ComplexMatrix, tol: &Tolerances) -> Result<()> {
    let norm = v.norm_frobenius();
    if v.cols() != 1 {
        return Err(Error::ShapeMismatch("expected a column vector".into()));
    }
    if (norm - 1.0).abs() > tol.equal_tol {
        return Err(Error::NotNormalized { norm });
    }
    Ok(())
}

/// Kraus operators of the angle-reducing channel on the plane spanned by a
/// gauged pure pair with angle `theta`, contracting the pair to angle `phi`.
///
/// `psi1` and `psi_perp` must be orthonormal with
/// `psi2 = cos(theta) psi1 + sin(theta) psi_perp`. The operators are
///
/// * `A1 = |psi1><psi1| + a |perp><perp|`,
/// * `A2 = (sqrt(1-b^2) |psi1> + sqrt(b^2-a^2) |perp>) <perp|`,
///
/// with `a = tan(phi) cot(theta)` and `b = sin(phi)/sin(theta)`; the plane
/// projector complement completes the set.
fn pair_kraus(
    psi1: &ComplexMatrix,
    psi_perp: &ComplexMatrix,
    theta: f64,
    phi: f64,
) -> (ComplexMatrix, ComplexMatrix) {
    let (a, b) = if (theta - phi).abs() <= 1e-12 {
        (1.0, 1.0)
    } else {
        (
            (phi.sin() * theta.cos()) / (phi.cos() * theta.sin()),
            phi.sin() / theta.sin(),
        )
    };
    let p1 = psi1.outer(psi1);
    let pp = psi_perp.outer(psi_perp);
    let a1 = p1.add(&pp.scale_real(a)).expect("shape");
    let col = psi1
        .scale_real((1.0 - b * b).max(0.0).sqrt())
        .add(&psi_perp.scale_real((b * b - a * a).max(0.0).sqrt()))
        .expect("shape");
    let a2 = col.outer(psi_perp);
    (a1, a2)
}

/// Angle-reducing channel on two pure states.
///
/// With `theta` the angle defined by the trace distance of the pair
/// (`sin(theta) = D`), the channel leaves `psi1` fixed and maps `psi2` to a
/// pure state at trace distance `sin(phi)` from it, for any `phi` in
/// `[0, theta]`. Collinear inputs are rejected since no orthogonal companion
/// vector exists.
pub fn omega_phi(psi1: &ComplexMatrix, psi2: &ComplexMatrix, phi: f64) -> Result<KrausChannel> {
    let tol = Tolerances::default();
    column_norm_check(psi1, &tol)?;
    column_norm_check(psi2, &tol)?;
    if psi1.rows() != psi2.rows() {
        return Err(Error::DimensionMismatch {
            left: psi1.rows(),
            right: psi2.rows(),
        });
    }
    let overlap = psi1.inner(psi2)?;
    let cos_theta = overlap.norm().clamp(0.0, 1.0);
    if cos_theta > 1.0 - tol.eig_zero {
        return Err(Error::CollinearInputs);
    }
    let theta = cos_theta.acos();
    if !(0.0..=theta + tol.equal_tol).contains(&phi) {
        return Err(Error::AngleOutOfRange { phi, theta });
    }
    let phi = phi.min(theta);

    // gauge psi2 so the overlap is real non-negative
    let psi2 = if overlap.norm() > 0.0 {
        psi2.scale(overlap.conj() / Complex64::new(overlap.norm(), 0.0))
    } else {
        psi2.clone()
    };
    let sin_theta = theta.sin();
    let psi_perp = psi2
        .sub(&psi1.scale_real(cos_theta))?
        .scale_real(1.0 / sin_theta);

    let (a1, a2) = pair_kraus(psi1, &psi_perp, theta, phi);
    let a3 = ComplexMatrix::identity(psi1.rows())
        .sub(&psi1.outer(psi1))?
        .sub(&psi_perp.outer(&psi_perp))?;
    KrausChannel::new(vec![a1, a2, a3], true, &tol)
}

/// Channel reproducing the output geometry of any weaker purifier from a
/// stronger one: contracts the given pure output pair to `target_distance`.
pub fn mimic(
    output1: &ComplexMatrix,
    output2: &ComplexMatrix,
    target_distance: f64,
) -> Result<KrausChannel> {
    let tol = Tolerances::default();
    column_norm_check(output1, &tol)?;
    column_norm_check(output2, &tol)?;
    let overlap = output1.inner(output2)?.norm().clamp(0.0, 1.0);
    let current = (1.0 - overlap * overlap).sqrt();
    if target_distance > current + tol.equal_tol {
        return Err(Error::TargetTooLarge {
            target: target_distance,
            current,
        });
    }
    let phi = target_distance.clamp(0.0, 1.0).asin().min(overlap.acos());
    omega_phi(output1, output2, phi)
}

/// Fixed output pair in the auxiliary space: `e0` and
/// `sqrt(1 - w^2) e0 + w e1`, separated by trace distance `w`.
fn target_pair(aux_dim: usize, w: f64) -> (ComplexMatrix, ComplexMatrix) {
    let phi1 = ComplexMatrix::basis_column(aux_dim, 0);
    let phi2 = if w > 0.0 {
        let mut entries = vec![Complex64::new(0.0, 0.0); aux_dim];
        entries[0] = Complex64::new((1.0 - w * w).max(0.0).sqrt(), 0.0);
        entries[1] = Complex64::new(w, 0.0);
        ComplexMatrix::raw(aux_dim, 1, entries)
    } else {
        phi1.clone()
    };
    (phi1, phi2)
}

/// Isometry `dim -> dim * aux_dim` assembled from orthonormal domain
/// columns and their orthonormal images.
fn isometry_from_pairs(
    dim: usize,
    aux_dim: usize,
    pairs: &[(ComplexMatrix, ComplexMatrix)],
) -> ComplexMatrix {
    let mut w = ComplexMatrix::zeros(dim * aux_dim, dim);
    for (source, image) in pairs {
        w = w.add(&image.outer(source)).expect("shape");
    }
    w
}

/// Optimal purifying channel of two states.
///
/// Builds the multi-pair angle-reducing channel on the Jordan pairs of the
/// two supports (every pair contracted to the worst-case angle), followed by
/// an isometric relabeling onto `|k> (x) |phi_i>` levels, followed by the
/// partial trace over the input factor. Both designated states map to pure
/// outputs whose trace distance equals their worst-case distinguishability;
/// when that is zero both map to the identical pure output of a constant
/// channel.
pub fn optimal_purifier(rho1: &DensityOperator, rho2: &DensityOperator) -> Result<PurifierBundle> {
    let tol = Tolerances::default();
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            left: rho1.dim(),
            right: rho2.dim(),
        });
    }
    let dim = rho1.dim();
    let aux_dim = dim;
    let jd = jordan(&support(rho1, &tol), &support(rho2, &tol))?;
    let w = wcd_from_angles(jd.angles(), &tol);
    let (phi1, phi2) = target_pair(aux_dim, w);

    if w == 0.0 {
        // constant channel onto phi1: identity, then |j> -> |j>(x)|phi1>,
        // then trace out the input factor
        let omega_tilde = KrausChannel::identity(dim);
        let embed_pairs: Vec<(ComplexMatrix, ComplexMatrix)> = (0..dim)
            .map(|j| {
                let e = ComplexMatrix::basis_column(dim, j);
                (e.clone(), tensor(&e, &phi1))
            })
            .collect();
        let w_iso = isometry_from_pairs(dim, aux_dim, &embed_pairs);
        let e_tilde = KrausChannel::new(vec![w_iso], true, &tol)?;
        let discard = KrausChannel::trace_out(dim, aux_dim, Subsystem::Second);
        let full = compose(&discard, &compose(&e_tilde, &omega_tilde)?)?;
        return Ok(PurifierBundle {
            omega_tilde,
            e_tilde,
            full,
            target_outputs: (phi1.clone(), phi2),
            achieved_distance: 0.0,
        });
    }

    let phi = w.asin();
    let pair_count = jd.angles().len();
    let mut kraus1 = Vec::with_capacity(pair_count);
    let mut kraus2 = Vec::with_capacity(pair_count);
    let mut plane_projector_sum = ComplexMatrix::zeros(dim, dim);
    let mut perps = Vec::with_capacity(pair_count);
    for k in 0..pair_count {
        let theta = jd.angles()[k];
        let psi1 = jd.basis1().column(k);
        let psi2 = jd.basis2().column(k);
        let psi_perp = psi2
            .sub(&psi1.scale_real(theta.cos()))?
            .scale_real(1.0 / theta.sin());
        let (a1, a2) = pair_kraus(&psi1, &psi_perp, theta, phi);
        plane_projector_sum = plane_projector_sum
            .add(&a1.adjoint().mul(&a1)?)?
            .add(&a2.adjoint().mul(&a2)?)?;
        kraus1.push(a1);
        kraus2.push(a2);
        perps.push(psi_perp);
    }
    let a3 = ComplexMatrix::identity(dim).sub(&plane_projector_sum)?;
    let mut kraus = kraus1;
    kraus.extend(kraus2);
    kraus.push(a3);
    let omega_tilde = KrausChannel::new(kraus, true, &tol)?;

    // relabeling isometry: pair k occupies level |k>, unpaired support
    // vectors of the larger-rank state the next levels, and an orthonormal
    // completion of the remainder goes to fresh levels tagged with phi1
    let mut pairs: Vec<(ComplexMatrix, ComplexMatrix)> = Vec::new();
    let mut handled: Vec<ComplexMatrix> = Vec::new();
    let phi2_perp = ComplexMatrix::basis_column(aux_dim, 1);
    for (k, perp) in perps.iter().enumerate() {
        let psi1 = jd.basis1().column(k);
        let level = ComplexMatrix::basis_column(dim, k);
        pairs.push((psi1.clone(), tensor(&level, &phi1)));
        pairs.push((perp.clone(), tensor(&level, &phi2_perp)));
        handled.push(psi1);
        handled.push(perp.clone());
    }
    let mut level = pair_count;
    for v in jd.leftover1() {
        pairs.push((
            v.clone(),
            tensor(&ComplexMatrix::basis_column(dim, level), &phi1),
        ));
        handled.push(v.clone());
        level += 1;
    }
    for v in jd.leftover2() {
        pairs.push((
            v.clone(),
            tensor(&ComplexMatrix::basis_column(dim, level), &phi2),
        ));
        handled.push(v.clone());
        level += 1;
    }
    for v in orthonormal_completion(dim, &handled) {
        pairs.push((v, tensor(&ComplexMatrix::basis_column(dim, level), &phi1)));
        level += 1;
    }
    let w_iso = isometry_from_pairs(dim, aux_dim, &pairs);
    let e_tilde = KrausChannel::new(vec![w_iso], true, &tol)?;

    let discard = KrausChannel::trace_out(dim, aux_dim, Subsystem::Second);
    let full = compose(&discard, &compose(&e_tilde, &omega_tilde)?)?;

    let d1 = DensityOperator::from_pure(&phi1, &tol)?;
    let d2 = DensityOperator::from_pure(&phi2, &tol)?;
    let achieved_distance = trace_distance(&d1, &d2)?;
    Ok(PurifierBundle {
        omega_tilde,
        e_tilde,
        full,
        target_outputs: (phi1, phi2),
        achieved_distance,
    })
}

/// Minimum-error discrimination of two states, packaged as a channel with a
/// two-dimensional classical output.
///
/// Measures the projector `E` onto the non-negative eigenspace of
/// `sigma1 - sigma2` and emits `|0>` on outcome `E`, `|1>` otherwise.
/// Returns the channel together with `q1 = tr(E sigma1)` and
/// `q2 = tr((1 - E) sigma2)`, which satisfy `q1 + q2 = 1 + D(sigma1, sigma2)`.
pub fn helstrom_channel(
    sigma1: &DensityOperator,
    sigma2: &DensityOperator,
) -> Result<(KrausChannel, f64, f64)> {
    let tol = Tolerances::default();
    if sigma1.dim() != sigma2.dim() {
        return Err(Error::DimensionMismatch {
            left: sigma1.dim(),
            right: sigma2.dim(),
        });
    }
    let dim = sigma1.dim();
    let diff = sigma1.matrix().sub(sigma2.matrix())?;
    let (vals, vecs) = hermitian_eig(&diff, &tol)?;
    let mut kraus = Vec::with_capacity(dim);
    let mut projector = ComplexMatrix::zeros(dim, dim);
    let zero_out = ComplexMatrix::basis_column(2, 0);
    let one_out = ComplexMatrix::basis_column(2, 1);
    for (k, &lambda) in vals.iter().enumerate() {
        let v = vecs.column(k);
        if lambda >= 0.0 {
            projector = projector.add(&v.outer(&v))?;
            kraus.push(zero_out.outer(&v));
        } else {
            kraus.push(one_out.outer(&v));
        }
    }
    let q1 = projector.mul(sigma1.matrix())?.trace().re;
    let complement = ComplexMatrix::identity(dim).sub(&projector)?;
    let q2 = complement.mul(sigma2.matrix())?.trace().re;
    Ok((KrausChannel::new(kraus, true, &tol)?, q1, q2))
}

/// Both sides of the product-state trace distance bound:
/// `lhs = D(rho1 (x) sigma1, rho2 (x) sigma2)^2` and
/// `rhs = 1 - (1 - wcd(rho1, rho2)^2)(1 - D(sigma1, sigma2)^2)`,
/// with `lhs >= rhs` guaranteed up to roundoff.
pub fn product_bound(
    rho1: &DensityOperator,
    rho2: &DensityOperator,
    sigma1: &DensityOperator,
    sigma2: &DensityOperator,
) -> Result<(f64, f64)> {
    let tol = Tolerances::default();
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            left: rho1.dim(),
            right: rho2.dim(),
        });
    }
    if sigma1.dim() != sigma2.dim() {
        return Err(Error::DimensionMismatch {
            left: sigma1.dim(),
            right: sigma2.dim(),
        });
    }
    let prod1 = DensityOperator::new(tensor(rho1.matrix(), sigma1.matrix()), &tol)?;
    let prod2 = DensityOperator::new(tensor(rho2.matrix(), sigma2.matrix()), &tol)?;
    let lhs = trace_distance(&prod1, &prod2)?.powi(2);
    let w = wcd(rho1, rho2)?;
    let d = trace_distance(sigma1, sigma2)?;
    let rhs = 1.0 - (1.0 - w * w) * (1.0 - d * d);
    Ok((lhs, rhs))
}
