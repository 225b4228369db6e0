//! Shared fixture generators for the integration suites.
#![allow(dead_code)] // each test target uses its own subset

use qpure::channels::KrausChannel;
use qpure::matcore::{hermitian_eig, ComplexMatrix, Tolerances};
use qpure::rng::Xoshiro256StarStar;
use qpure::states::{ginibre, DensityOperator, Subspace};
use qpure::Complex64;

/// Deterministic picker for fixture parameters.
pub struct Picker {
    rng: Xoshiro256StarStar,
}

impl Picker {
    pub fn new(seed: u64) -> Self {
        Picker {
            rng: Xoshiro256StarStar::seed_from_u64(seed),
        }
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        lo + (self.rng.next_u64() % (hi - lo + 1) as u64) as usize
    }

    pub fn seed(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.next_f64()
    }
}

/// Inverse square root of a positive definite Hermitian matrix.
pub fn psd_inv_sqrt(m: &ComplexMatrix, tol: &Tolerances) -> ComplexMatrix {
    let (vals, vecs) = hermitian_eig(m, tol).expect("hermitian input");
    let inv_sqrt: Vec<f64> = vals.iter().map(|&l| 1.0 / l.max(1e-300).sqrt()).collect();
    vecs.mul(&ComplexMatrix::diag(&inv_sqrt))
        .unwrap()
        .mul(&vecs.adjoint())
        .unwrap()
}

/// Random trace-preserving channel: Ginibre Kraus candidates whitened by the
/// inverse square root of their completeness sum.
pub fn random_channel(dim_in: usize, dim_out: usize, n_kraus: usize, seed: u64) -> KrausChannel {
    let tol = Tolerances::default();
    let candidates: Vec<ComplexMatrix> = (0..n_kraus)
        .map(|k| {
            ginibre(
                dim_out,
                dim_in,
                seed.wrapping_add(k as u64).wrapping_mul(0x9E37),
            )
        })
        .collect();
    let mut sum = ComplexMatrix::zeros(dim_in, dim_in);
    for a in &candidates {
        sum = sum.add(&a.adjoint().mul(a).unwrap()).unwrap();
    }
    let whitener = psd_inv_sqrt(&sum.hermitian_part().unwrap(), &tol);
    let kraus: Vec<ComplexMatrix> = candidates
        .iter()
        .map(|a| a.mul(&whitener).unwrap())
        .collect();
    KrausChannel::new(kraus, true, &tol).expect("whitened Kraus set is complete")
}

/// Random normalized vector inside the given subspace.
pub fn random_vector_in(subspace: &Subspace, rng: &mut Xoshiro256StarStar) -> ComplexMatrix {
    let coeffs = ComplexMatrix::from_fn(subspace.rank(), 1, |_, _| {
        let (re, im) = rng.next_normal_pair();
        Complex64::new(re, im)
    });
    let v = subspace.basis().mul(&coeffs).unwrap();
    v.scale_real(1.0 / v.norm_frobenius())
}

/// Random Hermitian matrix with Gaussian entries.
pub fn random_hermitian(dim: usize, seed: u64) -> ComplexMatrix {
    ginibre(dim, dim, seed).hermitian_part().unwrap()
}

pub fn as_density(m: &ComplexMatrix) -> DensityOperator {
    DensityOperator::new(m.clone(), &Tolerances::default()).expect("valid density matrix")
}
