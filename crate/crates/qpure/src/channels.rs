//! Quantum channels in Kraus form: validation, application, composition,
//! tensoring, Stinespring dilation, and structural constructions
//! (unitary conjugation, state appending, dilation combinators,
//! determinization of trace-non-increasing maps).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matcore::{hermitian_eig, tensor, ComplexMatrix, Subsystem, Tolerances};
use crate::states::DensityOperator;

/// Completely positive map given by a finite Kraus operator list, each of
/// shape `dim_out x dim_in`, flagged as trace preserving or merely
/// trace non-increasing.
#[derive(Debug, Clone)]
pub struct KrausChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
    trace_preserving: bool,
}

/// Outcome of a completeness check: whether the channel's flag is honored
/// and how far the completeness sum deviates from it.
#[derive(Debug, Clone, Copy)]
pub struct ValidationReport {
    pub ok: bool,
    pub max_deviation: f64,
    pub trace_preserving: bool,
}

impl KrausChannel {
    /// Builds a channel and enforces the completeness invariant for the
    /// declared flag.
    pub fn new(
        kraus: Vec<ComplexMatrix>,
        trace_preserving: bool,
        tol: &Tolerances,
    ) -> Result<Self> {
        let ch = Self::from_kraus_unchecked(kraus, trace_preserving)?;
        let report = ch.validate(tol)?;
        if !report.ok {
            return Err(Error::NotTracePreserving {
                deviation: report.max_deviation,
            });
        }
        Ok(ch)
    }

    /// Shape-checks the Kraus list but skips the completeness check.
    /// Used to represent candidate channels that `validate` then judges.
    pub fn from_kraus_unchecked(kraus: Vec<ComplexMatrix>, trace_preserving: bool) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::ShapeMismatch("empty Kraus list".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if dim_in == 0 {
            return Err(Error::ShapeMismatch("Kraus operators need columns".into()));
        }
        for k in &kraus {
            if k.rows() != dim_out || k.cols() != dim_in {
                return Err(Error::ShapeMismatch(format!(
                    "Kraus operators disagree in shape: {}x{} vs {}x{}",
                    k.rows(),
                    k.cols(),
                    dim_out,
                    dim_in
                )));
            }
        }
        Ok(KrausChannel {
            dim_in,
            dim_out,
            kraus,
            trace_preserving,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// Sum of `A^dagger A` over the Kraus list.
    pub fn completeness_sum(&self) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            let term = k.adjoint().mul(k).expect("shape");
            acc = acc.add(&term).expect("shape");
        }
        acc
    }

    /// Checks the completeness sum against the declared flag: equal to the
    /// identity within `cptp_tol` when trace preserving, bounded by it
    /// (as an operator inequality) otherwise.
    pub fn validate(&self, tol: &Tolerances) -> Result<ValidationReport> {
        let sum = self.completeness_sum();
        let identity = ComplexMatrix::identity(self.dim_in);
        let (ok, max_deviation) = if self.trace_preserving {
            let dev = sum.max_abs_diff(&identity)?;
            (dev <= tol.cptp_tol, dev)
        } else {
            let (vals, _) = hermitian_eig(&sum, tol)?;
            let excess = vals.first().map_or(0.0, |&top| (top - 1.0).max(0.0));
            (excess <= tol.cptp_tol, excess)
        };
        Ok(ValidationReport {
            ok,
            max_deviation,
            trace_preserving: self.trace_preserving,
        })
    }

    /// Applies the channel to an arbitrary operator, `X -> sum A X A^dagger`.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if x.rows() != self.dim_in || x.cols() != self.dim_in {
            return Err(Error::DimensionMismatch {
                left: x.rows(),
                right: self.dim_in,
            });
        }
        let mut acc = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            let term = k.mul(x)?.mul(&k.adjoint())?;
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Applies the channel to a state; the output is symmetrized to absorb
    /// roundoff and has unit trace when the channel is trace preserving.
    pub fn apply(&self, rho: &DensityOperator) -> Result<ComplexMatrix> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch {
                left: rho.dim(),
                right: self.dim_in,
            });
        }
        self.apply_matrix(rho.matrix())?.hermitian_part()
    }

    /// Applies a trace-preserving channel and revalidates the output as a
    /// density operator.
    pub fn apply_density(
        &self,
        rho: &DensityOperator,
        tol: &Tolerances,
    ) -> Result<DensityOperator> {
        DensityOperator::new(self.apply(rho)?, tol)
    }

    /// Composition `outer after self` as the pairwise Kraus products.
    pub fn then(&self, outer: &KrausChannel) -> Result<KrausChannel> {
        compose(outer, self)
    }

    /// Tensor product channel acting factor-wise.
    pub fn tensor(&self, other: &KrausChannel) -> KrausChannel {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(tensor(a, b));
            }
        }
        KrausChannel {
            dim_in: self.dim_in * other.dim_in,
            dim_out: self.dim_out * other.dim_out,
            kraus,
            trace_preserving: self.trace_preserving && other.trace_preserving,
        }
    }

    /// Identity channel on the given dimension.
    pub fn identity(dim: usize) -> KrausChannel {
        KrausChannel {
            dim_in: dim,
            dim_out: dim,
            kraus: vec![ComplexMatrix::identity(dim)],
            trace_preserving: true,
        }
    }

    /// Unitary conjugation channel `X -> U X U^dagger`.
    pub fn unitary(u: &ComplexMatrix, tol: &Tolerances) -> Result<KrausChannel> {
        if !u.is_square() {
            return Err(Error::NotSquare {
                rows: u.rows(),
                cols: u.cols(),
            });
        }
        if !u.is_unitary(tol) {
            let dev = u
                .adjoint()
                .mul(u)?
                .max_abs_diff(&ComplexMatrix::identity(u.rows()))?;
            return Err(Error::NotUnitary { deviation: dev });
        }
        Ok(KrausChannel {
            dim_in: u.cols(),
            dim_out: u.rows(),
            kraus: vec![u.clone()],
            trace_preserving: true,
        })
    }

    /// Appending channel `X -> X (x) sigma`, with Kraus operators
    /// `1 (x) sqrt(p_k) |l_k>` over the spectral decomposition of `sigma`.
    pub fn append(dim_in: usize, sigma: &DensityOperator) -> KrausChannel {
        let identity = ComplexMatrix::identity(dim_in);
        let kraus: Vec<ComplexMatrix> = sigma
            .eigenvalues()
            .iter()
            .enumerate()
            .map(|(k, &p)| {
                let col = sigma.eigenvectors().column(k).scale_real(p.max(0.0).sqrt());
                tensor(&identity, &col)
            })
            .collect();
        KrausChannel {
            dim_in,
            dim_out: dim_in * sigma.dim(),
            kraus,
            trace_preserving: true,
        }
    }

    /// Partial-trace channel on a bipartite space, keeping the chosen factor.
    pub fn trace_out(dim_a: usize, dim_b: usize, keep: Subsystem) -> KrausChannel {
        let d = dim_a * dim_b;
        let kraus: Vec<ComplexMatrix> = match keep {
            Subsystem::First => (0..dim_b)
                .map(|j| {
                    ComplexMatrix::from_fn(dim_a, d, |a, col| {
                        let (ca, cb) = (col / dim_b, col % dim_b);
                        Complex64::new(if ca == a && cb == j { 1.0 } else { 0.0 }, 0.0)
                    })
                })
                .collect(),
            Subsystem::Second => (0..dim_a)
                .map(|j| {
                    ComplexMatrix::from_fn(dim_b, d, |b, col| {
                        let (ca, cb) = (col / dim_b, col % dim_b);
                        Complex64::new(if ca == j && cb == b { 1.0 } else { 0.0 }, 0.0)
                    })
                })
                .collect(),
        };
        KrausChannel {
            dim_in: d,
            dim_out: match keep {
                Subsystem::First => dim_a,
                Subsystem::Second => dim_b,
            },
            kraus,
            trace_preserving: true,
        }
    }

    /// Drops Kraus operators of Frobenius norm at most `eig_zero`. Kept as a
    /// separate normal-form step; no constructor prunes implicitly.
    pub fn normal_form(&self, tol: &Tolerances) -> KrausChannel {
        let kept: Vec<ComplexMatrix> = self
            .kraus
            .iter()
            .filter(|k| k.norm_frobenius() > tol.eig_zero)
            .cloned()
            .collect();
        let kraus = if kept.is_empty() {
            vec![ComplexMatrix::zeros(self.dim_out, self.dim_in)]
        } else {
            kept
        };
        KrausChannel {
            dim_in: self.dim_in,
            dim_out: self.dim_out,
            kraus,
            trace_preserving: self.trace_preserving,
        }
    }
}

/// Composition `outer after inner` as the pairwise Kraus products.
pub fn compose(outer: &KrausChannel, inner: &KrausChannel) -> Result<KrausChannel> {
    if inner.dim_out != outer.dim_in {
        return Err(Error::DimensionMismatch {
            left: inner.dim_out,
            right: outer.dim_in,
        });
    }
    let mut kraus = Vec::with_capacity(outer.kraus.len() * inner.kraus.len());
    for a in &outer.kraus {
        for b in &inner.kraus {
            kraus.push(a.mul(b)?);
        }
    }
    Ok(KrausChannel {
        dim_in: inner.dim_in,
        dim_out: outer.dim_out,
        kraus,
        trace_preserving: outer.trace_preserving && inner.trace_preserving,
    })
}

/// Canonical Stinespring dilation of a trace-preserving channel: an isometry
/// `V = sum_a A_a (x) e_a` of shape `(dim_out * n_env, dim_in)` with one
/// environment level per Kraus operator, so that tracing out the environment
/// of `V X V^dagger` reproduces the channel.
pub fn stinespring(ch: &KrausChannel) -> Result<(ComplexMatrix, usize)> {
    if !ch.trace_preserving {
        let report = ch.validate(&Tolerances::default())?;
        return Err(Error::NotTracePreserving {
            deviation: report.max_deviation,
        });
    }
    let env = ch.kraus.len();
    let v = ComplexMatrix::from_fn(ch.dim_out * env, ch.dim_in, |row, col| {
        let (i_out, alpha) = (row / env, row % env);
        ch.kraus[alpha][(i_out, col)]
    });
    Ok((v, env))
}

/// Dilation combinator: runs `lambda`, then embeds the output isometrically
/// through the canonical Stinespring dilation of `lambda_prime`. Tracing out
/// the environment of the result reproduces `lambda_prime after lambda`,
/// while the output purity equals the purity of `lambda`'s output.
pub fn gamma_combinator(
    lambda: &KrausChannel,
    lambda_prime: &KrausChannel,
) -> Result<KrausChannel> {
    if lambda.dim_out != lambda_prime.dim_in {
        return Err(Error::DimensionMismatch {
            left: lambda.dim_out,
            right: lambda_prime.dim_in,
        });
    }
    let (v, env) = stinespring(lambda_prime)?;
    let kraus: Result<Vec<ComplexMatrix>> = lambda.kraus.iter().map(|a| v.mul(a)).collect();
    Ok(KrausChannel {
        dim_in: lambda.dim_in,
        dim_out: lambda_prime.dim_out * env,
        kraus: kraus?,
        trace_preserving: lambda.trace_preserving,
    })
}

/// Environment dimension of the channel produced by [`gamma_combinator`],
/// i.e. the factorization `dim_out = lambda_prime.dim_out * env`.
pub fn gamma_env_dim(lambda_prime: &KrausChannel) -> usize {
    lambda_prime.kraus.len()
}

/// Turns a trace-non-increasing map into a trace-preserving one on a space
/// extended by one flag level: the missing trace weight is routed to the
/// extra basis direction, which is orthogonal to every regular output.
pub fn determinize(ch: &KrausChannel, tol: &Tolerances) -> Result<KrausChannel> {
    let report = ch.validate(tol)?;
    if !report.ok {
        return Err(Error::NotTracePreserving {
            deviation: report.max_deviation,
        });
    }
    let d_out = ch.dim_out + 1;
    let mut kraus: Vec<ComplexMatrix> = ch
        .kraus
        .iter()
        .map(|a| {
            ComplexMatrix::from_fn(d_out, ch.dim_in, |i, j| {
                if i < ch.dim_out {
                    a[(i, j)]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    let remainder = ComplexMatrix::identity(ch.dim_in)
        .sub(&ch.completeness_sum())?
        .hermitian_part()?;
    let (vals, vecs) = hermitian_eig(&remainder, tol)?;
    for (k, &lambda) in vals.iter().enumerate() {
        if lambda > tol.eig_zero {
            let bra = vecs.column(k).adjoint().scale_real(lambda.sqrt());
            kraus.push(ComplexMatrix::from_fn(d_out, ch.dim_in, |i, j| {
                if i == ch.dim_out {
                    bra[(0, j)]
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }));
        }
    }
    KrausChannel::new(kraus, true, tol)
}

/// Whether two channels act identically on the `d^2` Hermitian basis
/// matrices (equivalently, have equal Choi matrices) within `equal_tol`.
/// Kraus lists are never compared directly since they are non-unique.
pub fn equal_action(a: &KrausChannel, b: &KrausChannel, tol: &Tolerances) -> Result<bool> {
    if a.dim_in != b.dim_in || a.dim_out != b.dim_out {
        return Err(Error::DimensionMismatch {
            left: a.dim_in,
            right: b.dim_in,
        });
    }
    for h in hermitian_basis(a.dim_in) {
        let out_a = a.apply_matrix(&h)?;
        let out_b = b.apply_matrix(&h)?;
        if out_a.max_abs_diff(&out_b)? > tol.equal_tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The standard Hermitian operator basis of a `d`-dimensional space:
/// diagonal units, symmetric and antisymmetric off-diagonal combinations.
pub fn hermitian_basis(dim: usize) -> Vec<ComplexMatrix> {
    let mut basis = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        basis.push(ComplexMatrix::from_fn(dim, dim, |r, c| {
            Complex64::new(if r == i && c == i { 1.0 } else { 0.0 }, 0.0)
        }));
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            basis.push(ComplexMatrix::from_fn(dim, dim, |r, c| {
                if (r, c) == (i, j) || (r, c) == (j, i) {
                    Complex64::new(0.5, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }));
            basis.push(ComplexMatrix::from_fn(dim, dim, |r, c| {
                if (r, c) == (i, j) {
                    Complex64::new(0.0, -0.5)
                } else if (r, c) == (j, i) {
                    Complex64::new(0.0, 0.5)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }));
        }
    }
    basis
}
