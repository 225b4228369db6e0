//! Set-level criteria: orthogonal partition, generation and verification of
//! essentially pure sets, the two-state criterion, necessary criteria,
//! unambiguous-discrimination feasibility, and a reference counter-example
//! family separating the necessary criteria from the exact one.

use num_complex::Complex64;

use crate::channels::{compose, KrausChannel};
use crate::error::{Error, Result};
use crate::geometry::{jordan, wcd};
use crate::matcore::{
    hermitian_eig, partial_trace, svd, tensor, ComplexMatrix, Subsystem, Tolerances,
};
use crate::states::{is_orthogonal, support, trace_distance, DensityOperator};

/// Equality threshold for the two-state criterion `wcd == D`.
pub const CRITERION_TOL: f64 = 1e-8;
/// Elementwise threshold for comparing sorted spectra.
pub const SPECTRUM_TOL: f64 = 1e-8;
/// Allowed spread of a completely degenerate Jordan angle list.
pub const ANGLE_DEGENERACY_TOL: f64 = 1e-8;

/// Non-empty collection of density operators on a common space.
#[derive(Debug, Clone)]
pub struct StateSet {
    states: Vec<DensityOperator>,
}

impl StateSet {
    pub fn new(states: Vec<DensityOperator>) -> Result<Self> {
        let first = states
            .first()
            .ok_or_else(|| Error::InvalidArgument("state set must be non-empty".into()))?;
        let dim = first.dim();
        for s in &states {
            if s.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: s.dim(),
                    right: dim,
                });
            }
        }
        Ok(StateSet { states })
    }

    pub fn states(&self) -> &[DensityOperator] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }
}

/// Ingredients for generating an essentially pure set: a fixed rotation of
/// (variable pure state) tensor (fixed mixed state) on `dim_a * dim_b`,
/// reinterpreted on `dim_in * dim_c` with a fixed traced-out factor.
#[derive(Debug, Clone)]
pub struct EssentiallyPureRecipe {
    dim_a: usize,
    dim_b: usize,
    dim_c: usize,
    dim_in: usize,
    unitary: ComplexMatrix,
    sigma_b: DensityOperator,
    omega_c: DensityOperator,
    pure_vectors: Vec<ComplexMatrix>,
}

impl EssentiallyPureRecipe {
    pub fn new(
        unitary: ComplexMatrix,
        sigma_b: DensityOperator,
        omega_c: DensityOperator,
        pure_vectors: Vec<ComplexMatrix>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if pure_vectors.is_empty() {
            return Err(Error::InvalidArgument(
                "recipe needs at least one pure vector".into(),
            ));
        }
        let dim_b = sigma_b.dim();
        let dim_c = omega_c.dim();
        let dim_a = pure_vectors[0].rows();
        let total = dim_a * dim_b;
        if !total.is_multiple_of(dim_c) {
            return Err(Error::RecipeInconsistent(format!(
                "dim_a * dim_b = {total} is not divisible by dim_c = {dim_c}"
            )));
        }
        let dim_in = total / dim_c;
        if unitary.rows() != total || !unitary.is_unitary(tol) {
            return Err(Error::NotUnitary {
                deviation: if unitary.rows() != total {
                    f64::NAN
                } else {
                    0.0
                },
            });
        }
        for v in &pure_vectors {
            if v.rows() != dim_a || v.cols() != 1 {
                return Err(Error::ShapeMismatch(
                    "pure vectors must be columns on the A factor".into(),
                ));
            }
            let norm = v.norm_frobenius();
            if (norm - 1.0).abs() > tol.equal_tol {
                return Err(Error::NotNormalized { norm });
            }
        }
        Ok(EssentiallyPureRecipe {
            dim_a,
            dim_b,
            dim_c,
            dim_in,
            unitary,
            sigma_b,
            omega_c,
            pure_vectors,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim_c(&self) -> usize {
        self.dim_c
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn sigma_b(&self) -> &DensityOperator {
        &self.sigma_b
    }

    pub fn omega_c(&self) -> &DensityOperator {
        &self.omega_c
    }

    pub fn pure_vectors(&self) -> &[ComplexMatrix] {
        &self.pure_vectors
    }
}

/// Splits a set into the connected components of its non-orthogonality
/// graph. Blocks are pairwise orthogonal and jointly exhaust the input;
/// they are ordered by their smallest member index.
pub fn partition_orthogonal(ms: &StateSet) -> Vec<StateSet> {
    let tol = Tolerances::default();
    let n = ms.len();
    let mut component = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let id = next;
        next += 1;
        let mut queue = vec![start];
        component[start] = id;
        while let Some(i) = queue.pop() {
            #[allow(clippy::needless_range_loop)]
            for j in 0..n {
                if component[j] == usize::MAX
                    && !is_orthogonal(&ms.states()[i], &ms.states()[j], &tol)
                        .expect("equal dims by construction")
                {
                    component[j] = id;
                    queue.push(j);
                }
            }
        }
    }
    (0..next)
        .map(|id| {
            let members: Vec<DensityOperator> = (0..n)
                .filter(|&i| component[i] == id)
                .map(|i| ms.states()[i].clone())
                .collect();
            StateSet::new(members).expect("non-empty block")
        })
        .collect()
}

/// Generates the state set encoded by a recipe: for each pure vector, rotate
/// `|phi><phi| (x) sigma_b`, reinterpret the result on `dim_in * dim_c`,
/// verify it factorizes with the fixed `omega_c`, and trace out the C factor.
pub fn generate_essentially_pure(recipe: &EssentiallyPureRecipe) -> Result<StateSet> {
    let tol = Tolerances::default();
    let mut states = Vec::with_capacity(recipe.pure_vectors.len());
    for phi in &recipe.pure_vectors {
        let input = tensor(&phi.outer(phi), recipe.sigma_b.matrix());
        let rotated = recipe.unitary.mul(&input)?.mul(&recipe.unitary.adjoint())?;
        let rho = partial_trace(&rotated, (recipe.dim_in, recipe.dim_c), Subsystem::First)?;
        let product = tensor(&rho, recipe.omega_c.matrix());
        let dev = product.max_abs_diff(&rotated)?;
        if dev > tol.equal_tol {
            return Err(Error::RecipeInconsistent(format!(
                "rotated state deviates from (traced state) (x) omega_c by {dev:.3e}"
            )));
        }
        states.push(DensityOperator::new(rho, &tol)?);
    }
    StateSet::new(states)
}

/// Checks the single-rotation characterization of an essentially pure set:
/// with one normalized label vector per state and a distinguished member
/// `rho_0`, tests `rho (x) |l_0><l_0| == U (rho_0 (x) |l><l|) U^dagger`
/// for every member.
pub fn verify_simplified(
    ms: &StateSet,
    rho0_index: usize,
    unitary: &ComplexMatrix,
    labels: &[ComplexMatrix],
) -> Result<bool> {
    let tol = Tolerances::default();
    if labels.len() != ms.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} labels for {} states",
            labels.len(),
            ms.len()
        )));
    }
    if rho0_index >= ms.len() {
        return Err(Error::InvalidArgument(format!(
            "rho0 index {rho0_index} out of range"
        )));
    }
    let dim_in = ms.dim();
    if !unitary.rows().is_multiple_of(dim_in) || !unitary.is_square() {
        return Err(Error::DimensionMismatch {
            left: unitary.rows(),
            right: dim_in,
        });
    }
    let aux_dim = unitary.rows() / dim_in;
    for l in labels {
        if l.rows() != aux_dim || l.cols() != 1 {
            return Err(Error::DimensionMismatch {
                left: l.rows(),
                right: aux_dim,
            });
        }
        let norm = l.norm_frobenius();
        if (norm - 1.0).abs() > tol.equal_tol {
            return Err(Error::NotNormalized { norm });
        }
    }
    let rho0 = &ms.states()[rho0_index];
    let label0 = &labels[rho0_index];
    for (rho, label) in ms.states().iter().zip(labels) {
        let lhs = tensor(rho.matrix(), &label0.outer(label0));
        let inner = tensor(rho0.matrix(), &label.outer(label));
        let rhs = unitary.mul(&inner)?.mul(&unitary.adjoint())?;
        if lhs.max_abs_diff(&rhs)? > tol.equal_tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verdict of the exact two-state test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoStateVerdict {
    /// The pair is essentially pure or orthogonal.
    EssentiallyPureOrOrthogonal,
    Not,
}

/// Exact two-state criterion: positive iff the worst-case
/// distinguishability equals the trace distance.
pub fn two_state_criterion(
    rho1: &DensityOperator,
    rho2: &DensityOperator,
) -> Result<TwoStateVerdict> {
    let w = wcd(rho1, rho2)?;
    let d = trace_distance(rho1, rho2)?;
    Ok(if (w - d).abs() <= CRITERION_TOL {
        TwoStateVerdict::EssentiallyPureOrOrthogonal
    } else {
        TwoStateVerdict::Not
    })
}

/// Outcome of the operational necessary criteria.
#[derive(Debug, Clone, Copy)]
pub struct NecessaryCriteriaReport {
    /// All sorted spectra agree elementwise.
    pub same_spectrum: bool,
    /// Every pairwise Jordan angle list is completely degenerate.
    pub degenerate_angles: bool,
}

/// Necessary conditions for an essentially pure set: common spectrum and
/// completely degenerate pairwise Jordan angles. These are not sufficient.
pub fn necessary_criteria(ms: &StateSet) -> Result<NecessaryCriteriaReport> {
    let tol = Tolerances::default();
    if ms.len() < 2 {
        return Err(Error::TooFewStates {
            needed: 2,
            found: ms.len(),
        });
    }
    let reference = ms.states()[0].eigenvalues();
    let same_spectrum = ms.states().iter().skip(1).all(|s| {
        s.eigenvalues()
            .iter()
            .zip(reference)
            .all(|(a, b)| (a - b).abs() <= SPECTRUM_TOL)
    });
    let mut degenerate_angles = true;
    'outer: for i in 0..ms.len() {
        for j in (i + 1)..ms.len() {
            let jd = jordan(
                &support(&ms.states()[i], &tol),
                &support(&ms.states()[j], &tol),
            )?;
            let spread = jd.angles().last().unwrap() - jd.angles().first().unwrap();
            if spread > ANGLE_DEGENERACY_TOL {
                degenerate_angles = false;
                break 'outer;
            }
        }
    }
    Ok(NecessaryCriteriaReport {
        same_spectrum,
        degenerate_angles,
    })
}

/// Reference pair on dimension 4 that passes both necessary criteria yet
/// fails the exact two-state test: `rho1 = p |0><0| + (1-p) |1><1|` and
/// `rho2 = p |v+><v+| + (1-p) |v-><v-|` with
/// `|v+-> = (+-|0> + |1> +- |2> + |3>) / 2`, for `0 < p < 1/2`.
pub fn counter_example(p: f64) -> Result<(DensityOperator, DensityOperator)> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::POutOfRange { p });
    }
    let tol = Tolerances::default();
    let e0 = ComplexMatrix::basis_column(4, 0);
    let e1 = ComplexMatrix::basis_column(4, 1);
    let nu_plus = ComplexMatrix::column_from_real(&[0.5, 0.5, 0.5, 0.5]);
    let nu_minus = ComplexMatrix::column_from_real(&[-0.5, 0.5, -0.5, 0.5]);
    let rho1 = e0
        .outer(&e0)
        .scale_real(p)
        .add(&e1.outer(&e1).scale_real(1.0 - p))?;
    let rho2 = nu_plus
        .outer(&nu_plus)
        .scale_real(p)
        .add(&nu_minus.outer(&nu_minus).scale_real(1.0 - p))?;
    Ok((
        DensityOperator::new(rho1, &tol)?,
        DensityOperator::new(rho2, &tol)?,
    ))
}

/// Orthonormal basis of the union of the given supports, via the singular
/// vectors of the stacked basis columns above the rank threshold.
fn union_span(parts: &[&crate::states::Subspace], dim: usize) -> Result<ComplexMatrix> {
    let columns: Vec<ComplexMatrix> = parts.iter().map(|s| s.basis().clone()).collect();
    let stacked = ComplexMatrix::hstack(dim, &columns)?;
    let (u, s, _) = svd(&stacked)?;
    let threshold = Tolerances::default().eig_zero.sqrt();
    let keep: Vec<ComplexMatrix> = s
        .iter()
        .enumerate()
        .filter(|(_, &sigma)| sigma > threshold)
        .map(|(k, _)| u.column(k))
        .collect();
    ComplexMatrix::hstack(dim, &keep)
}

/// Whether unambiguous discrimination of the set is possible: every support
/// must stick out of the span of all other supports (projection defect above
/// `eig_zero`).
pub fn usd_feasible(ms: &StateSet) -> Result<bool> {
    let tol = Tolerances::default();
    if ms.len() < 2 {
        return Err(Error::TooFewStates {
            needed: 2,
            found: ms.len(),
        });
    }
    let dim = ms.dim();
    let supports: Vec<crate::states::Subspace> =
        ms.states().iter().map(|s| support(s, &tol)).collect();
    for i in 0..ms.len() {
        let others: Vec<&crate::states::Subspace> = supports
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, s)| s)
            .collect();
        let span = union_span(&others, dim)?;
        // defect: largest residual norm of a support direction outside the span
        let own = supports[i].basis();
        let residual = if span.cols() == 0 {
            own.clone()
        } else {
            own.sub(&span.mul(&span.adjoint().mul(own)?)?)?
        };
        let (_, s, _) = svd(&residual)?;
        let defect = s.first().copied().unwrap_or(0.0);
        if defect <= tol.eig_zero {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Probabilistic channel that unambiguously identifies each member of the
/// set and emits a purification of it.
///
/// Restricted to sets whose supports are linearly independent. Detection
/// uses the dual basis of the stacked support bases, scaled to the largest
/// uniform success probability (the smallest eigenvalue of the stacked Gram
/// matrix); outcome `i` prepares the spectral-square-root purification of
/// `rho_i` tagged on a fixed auxiliary basis. The resulting map is trace
/// non-increasing; its deterministic completion routes failures to the extra
/// flag level, and on the success branch the partial trace over the
/// auxiliary factor restores the inputs.
pub fn usd_purifier_demo(ms: &StateSet) -> Result<KrausChannel> {
    let tol = Tolerances::default();
    if !usd_feasible(ms)? {
        return Err(Error::NotFeasible(
            "some support is contained in the span of the others".into(),
        ));
    }
    let dim = ms.dim();
    let supports: Vec<crate::states::Subspace> =
        ms.states().iter().map(|s| support(s, &tol)).collect();
    let total_rank: usize = supports.iter().map(|s| s.rank()).sum();
    if total_rank > dim {
        return Err(Error::NotFeasible(
            "supports are not linearly independent".into(),
        ));
    }
    let columns: Vec<ComplexMatrix> = supports.iter().map(|s| s.basis().clone()).collect();
    let stacked = ComplexMatrix::hstack(dim, &columns)?;
    let gram = stacked.adjoint().mul(&stacked)?;
    let (vals, vecs) = hermitian_eig(&gram, &tol)?;
    let min_eig = vals.last().copied().unwrap_or(0.0);
    if min_eig <= tol.eig_zero {
        return Err(Error::NotFeasible(
            "supports are not linearly independent".into(),
        ));
    }
    // dual basis: columns of stacked * gram^{-1}, block i annihilates the
    // supports of all other states
    let inv_gram = {
        let inv_vals: Vec<f64> = vals.iter().map(|&l| 1.0 / l).collect();
        vecs.mul(&ComplexMatrix::diag(&inv_vals))?
            .mul(&vecs.adjoint())?
    };
    let dual = stacked.mul(&inv_gram)?;
    let success = min_eig;

    let aux_dim = dim;
    let mut kraus = Vec::with_capacity(total_rank);
    let mut offset = 0;
    for (i, sub) in supports.iter().enumerate() {
        // spectral square-root purification of rho_i on dim (x) aux
        let rho = &ms.states()[i];
        let mut purification = ComplexMatrix::zeros(dim * aux_dim, 1);
        for (k, &p) in rho.eigenvalues().iter().enumerate() {
            let term = tensor(
                &rho.eigenvectors().column(k).scale_real(p.max(0.0).sqrt()),
                &ComplexMatrix::basis_column(aux_dim, k),
            );
            purification = purification.add(&term)?;
        }
        for s in 0..sub.rank() {
            let detector = dual.column(offset + s);
            kraus.push(purification.outer(&detector).scale_real(success.sqrt()));
        }
        offset += sub.rank();
    }
    let ch = KrausChannel::from_kraus_unchecked(kraus, false)?;
    let report = ch.validate(&tol)?;
    debug_assert!(report.ok, "deviation {}", report.max_deviation);
    Ok(ch)
}

/// Uniform per-state success probability of [`usd_purifier_demo`] on the
/// given set (the trace of any output).
pub fn usd_success_probability(ms: &StateSet) -> Result<f64> {
    let tol = Tolerances::default();
    let supports: Vec<crate::states::Subspace> =
        ms.states().iter().map(|s| support(s, &tol)).collect();
    let columns: Vec<ComplexMatrix> = supports.iter().map(|s| s.basis().clone()).collect();
    let stacked = ComplexMatrix::hstack(ms.dim(), &columns)?;
    let gram = stacked.adjoint().mul(&stacked)?;
    let (vals, _) = hermitian_eig(&gram, &tol)?;
    Ok(vals.last().copied().unwrap_or(0.0))
}

/// Three-valued verdict for whether a block admits a purifying and
/// reversible process.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockVerdict {
    EssentiallyPure,
    Not,
    Unknown,
}

/// Classifies one orthogonality block: singletons are always essentially
/// pure, two-state blocks use the exact criterion, and larger blocks are
/// settled negatively by the necessary criteria or left undecided.
pub fn block_verdict(block: &StateSet) -> Result<BlockVerdict> {
    match block.len() {
        1 => Ok(BlockVerdict::EssentiallyPure),
        2 => Ok(
            match two_state_criterion(&block.states()[0], &block.states()[1])? {
                TwoStateVerdict::EssentiallyPureOrOrthogonal => BlockVerdict::EssentiallyPure,
                TwoStateVerdict::Not => BlockVerdict::Not,
            },
        ),
        _ => {
            let report = necessary_criteria(block)?;
            if !report.same_spectrum || !report.degenerate_angles {
                Ok(BlockVerdict::Not)
            } else {
                Ok(BlockVerdict::Unknown)
            }
        }
    }
}

/// Explicit purifying-and-reversible channel pair for a generated set with
/// a trivial C factor: the forward channel undoes the recipe rotation and
/// swaps the fixed mixed factor for its purification; the reverse channel
/// discards the purifying factor and restores the rotation.
pub fn purifying_reversible_pair(
    recipe: &EssentiallyPureRecipe,
) -> Result<(KrausChannel, KrausChannel)> {
    let tol = Tolerances::default();
    if recipe.dim_c != 1 {
        return Err(Error::InvalidArgument(
            "explicit channel construction expects a trivial C factor".into(),
        ));
    }
    let (da, db) = (recipe.dim_a, recipe.dim_b);
    // purification of sigma_b on B (x) B
    let mut purification = ComplexMatrix::zeros(db * db, 1);
    for (k, &p) in recipe.sigma_b.eigenvalues().iter().enumerate() {
        let term = tensor(
            &recipe
                .sigma_b
                .eigenvectors()
                .column(k)
                .scale_real(p.max(0.0).sqrt()),
            &ComplexMatrix::basis_column(db, k),
        );
        purification = purification.add(&term)?;
    }
    // discard-and-prepare on the B factor: chi -> tr(chi) |purification><purification|
    let prepare_kraus: Vec<ComplexMatrix> = (0..db)
        .map(|j| purification.outer(&ComplexMatrix::basis_column(db, j)))
        .collect();
    let prepare = KrausChannel::new(prepare_kraus, true, &tol)?;

    let undo = KrausChannel::unitary(&recipe.unitary.adjoint(), &tol)?;
    let forward = compose(&KrausChannel::identity(da).tensor(&prepare), &undo)?;

    let discard =
        KrausChannel::identity(da).tensor(&KrausChannel::trace_out(db, db, Subsystem::First));
    let redo = KrausChannel::unitary(&recipe.unitary, &tol)?;
    let reverse = compose(&redo, &discard)?;
    Ok((forward, reverse))
}

/// Rotation and labels witnessing the single-rotation characterization for
/// a generated set with a trivial C factor: conjugates a swap of the A
/// factor with the label space by the recipe rotation. The labels are the
/// recipe's pure vectors.
pub fn simplified_verifier_unitary(
    recipe: &EssentiallyPureRecipe,
) -> Result<(ComplexMatrix, Vec<ComplexMatrix>)> {
    if recipe.dim_c != 1 {
        return Err(Error::InvalidArgument(
            "verifier construction expects a trivial C factor".into(),
        ));
    }
    let (da, db) = (recipe.dim_a, recipe.dim_b);
    let total = da * db * da;
    // |a, b, c> -> |c, b, a>
    let swap13 = ComplexMatrix::from_fn(total, total, |row, col| {
        let (a, rest) = (col / (db * da), col % (db * da));
        let (b, c) = (rest / da, rest % da);
        let target = (c * db + b) * da + a;
        Complex64::new(if row == target { 1.0 } else { 0.0 }, 0.0)
    });
    let extended = tensor(&recipe.unitary, &ComplexMatrix::identity(da));
    let unitary = extended.mul(&swap13)?.mul(&extended.adjoint())?;
    Ok((unitary, recipe.pure_vectors.clone()))
}
