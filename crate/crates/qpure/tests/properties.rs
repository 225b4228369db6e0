//! Randomized invariant suites for every module, driven by seeded
//! generators so each run checks the same instances.

mod common;

use common::{as_density, random_channel, random_hermitian, random_vector_in, Picker};
use qpure::channels::{compose, equal_action, gamma_combinator, hermitian_basis, KrausChannel};
use qpure::geometry::{jordan, wcd};
use qpure::matcore::{
    hermitian_eig, partial_trace, svd, tensor, ComplexMatrix, Subsystem, Tolerances,
};
use qpure::purify::{mimic, omega_phi, optimal_purifier, product_bound};
use qpure::rng::Xoshiro256StarStar;
use qpure::setanalysis::{
    counter_example, necessary_criteria, partition_orthogonal, two_state_criterion, usd_feasible,
    StateSet, TwoStateVerdict,
};
use qpure::states::{
    ginibre, in_q, purity, random_density, random_pure_vector, random_unitary, support,
    trace_distance, DensityOperator, Subspace,
};

fn tol() -> Tolerances {
    Tolerances::default()
}

// ---- matcore ----

#[test]
fn eig_reconstructs_500_random_hermitian_matrices() {
    let mut pick = Picker::new(0xA0);
    for _ in 0..500 {
        let dim = pick.int(1, 8);
        let m = random_hermitian(dim, pick.seed());
        let (vals, vecs) = hermitian_eig(&m, &tol()).unwrap();
        let rec = vecs
            .mul(&ComplexMatrix::diag(&vals))
            .unwrap()
            .mul(&vecs.adjoint())
            .unwrap();
        assert!(rec.max_abs_diff(&m).unwrap() <= 1e-10);
        let gram = vecs.adjoint().mul(&vecs).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)).unwrap() <= 1e-10);
        assert!(vals.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn svd_reconstructs_500_random_matrices() {
    let mut pick = Picker::new(0xA1);
    for iter in 0..500 {
        let rows = pick.int(1, 8);
        let cols = pick.int(1, 8);
        let m = if iter % 3 == 0 {
            // rank-deficient inputs exercise the null-space handling
            let k = pick.int(1, rows.min(cols));
            ginibre(rows, k, pick.seed())
                .mul(&ginibre(k, cols, pick.seed()))
                .unwrap()
        } else {
            ginibre(rows, cols, pick.seed())
        };
        let (u, s, v) = svd(&m).unwrap();
        let rec = u
            .mul(&ComplexMatrix::diag(&s))
            .unwrap()
            .mul(&v.adjoint())
            .unwrap();
        assert!(rec.max_abs_diff(&m).unwrap() <= 1e-10);
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
        assert!(s.iter().all(|&x| x >= 0.0));
        let k = rows.min(cols);
        let gram_u = u.adjoint().mul(&u).unwrap();
        let gram_v = v.adjoint().mul(&v).unwrap();
        assert!(gram_u.max_abs_diff(&ComplexMatrix::identity(k)).unwrap() <= 1e-10);
        assert!(gram_v.max_abs_diff(&ComplexMatrix::identity(k)).unwrap() <= 1e-10);
    }
}

#[test]
fn partial_trace_of_products_factorizes() {
    let mut pick = Picker::new(0xA2);
    for _ in 0..100 {
        let da = pick.int(1, 4);
        let db = pick.int(1, 4);
        let a = ginibre(da, da, pick.seed());
        let b = ginibre(db, db, pick.seed());
        let traced = partial_trace(&tensor(&a, &b), (da, db), Subsystem::First).unwrap();
        let expected = a.scale(b.trace());
        assert!(traced.max_abs_diff(&expected).unwrap() <= 1e-12);
    }
}

#[test]
fn tensor_is_associative() {
    let mut pick = Picker::new(0xA3);
    for _ in 0..100 {
        let a = ginibre(pick.int(1, 3), pick.int(1, 3), pick.seed());
        let b = ginibre(pick.int(1, 3), pick.int(1, 3), pick.seed());
        let c = ginibre(pick.int(1, 3), pick.int(1, 3), pick.seed());
        let left = tensor(&tensor(&a, &b), &c);
        let right = tensor(&a, &tensor(&b, &c));
        assert!(left.max_abs_diff(&right).unwrap() <= 1e-12);
    }
}

// ---- states ----

#[test]
fn trace_distance_triangle_inequality() {
    let mut pick = Picker::new(0xB0);
    for _ in 0..200 {
        let dim = pick.int(2, 6);
        let a = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let b = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let c = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let ab = trace_distance(&a, &b).unwrap();
        let bc = trace_distance(&b, &c).unwrap();
        let ac = trace_distance(&a, &c).unwrap();
        assert!(ac <= ab + bc + 1e-9);
    }
}

#[test]
fn trace_distance_ignores_common_tensor_factor() {
    let mut pick = Picker::new(0xB1);
    for _ in 0..50 {
        let dim = pick.int(2, 4);
        let a = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let b = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let sigma = random_density(pick.int(1, 3), 1, pick.seed()).unwrap();
        let pa = as_density(&tensor(a.matrix(), sigma.matrix()));
        let pb = as_density(&tensor(b.matrix(), sigma.matrix()));
        let lhs = trace_distance(&pa, &pb).unwrap();
        let rhs = trace_distance(&a, &b).unwrap();
        assert!((lhs - rhs).abs() <= 1e-9);
    }
}

#[test]
fn pure_state_distance_matches_overlap_formula() {
    let mut pick = Picker::new(0xB2);
    for _ in 0..100 {
        let dim = pick.int(2, 6);
        let psi = random_pure_vector(dim, pick.seed());
        let phi = random_pure_vector(dim, pick.seed());
        let overlap = psi.inner(&phi).unwrap().norm();
        let expected = (1.0 - overlap * overlap).max(0.0).sqrt();
        let d = trace_distance(
            &DensityOperator::from_pure(&psi, &tol()).unwrap(),
            &DensityOperator::from_pure(&phi, &tol()).unwrap(),
        )
        .unwrap();
        assert!((d - expected).abs() <= 1e-9);
    }
}

#[test]
fn purity_stays_in_bounds() {
    let mut pick = Picker::new(0xB3);
    for _ in 0..200 {
        let dim = pick.int(1, 8);
        let rho = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let p = purity(&rho);
        assert!(p >= 1.0 / dim as f64 - 1e-12);
        assert!(p <= 1.0 + 1e-12);
    }
}

#[test]
fn support_membership_detects_ensemble_vectors() {
    let mut pick = Picker::new(0xB4);
    let mut rng = Xoshiro256StarStar::seed_from_u64(0xB5);
    for _ in 0..50 {
        let dim = pick.int(2, 6);
        let rank = pick.int(1, dim - 1);
        let rho = random_density(dim, rank, pick.seed()).unwrap();
        let sup = support(&rho, &tol());
        let inside = random_vector_in(&sup, &mut rng);
        assert!(in_q(&rho, &inside, &tol()).unwrap());
    }
}

// ---- channels ----

#[test]
fn composition_of_valid_channels_validates() {
    let mut pick = Picker::new(0xC0);
    for _ in 0..200 {
        let d1 = pick.int(1, 4);
        let d2 = pick.int(1, 4);
        let d3 = pick.int(1, 4);
        let inner = random_channel(d1, d2, d1.max(2), pick.seed());
        let outer = random_channel(d2, d3, d2.max(2), pick.seed());
        assert!(inner.validate(&tol()).unwrap().ok);
        assert!(outer.validate(&tol()).unwrap().ok);
        let chained = compose(&outer, &inner).unwrap();
        let report = chained.validate(&tol()).unwrap();
        assert!(report.ok, "deviation {}", report.max_deviation);
    }
}

#[test]
fn globally_purifying_channels_are_constant() {
    let mut pick = Picker::new(0xC1);
    for _ in 0..20 {
        let dim = pick.int(2, 5);
        // constant channel onto a pure target, expressed over a rotated basis
        let target = random_pure_vector(dim, pick.seed());
        let basis_rotation = random_unitary(dim, pick.seed());
        let kraus: Vec<ComplexMatrix> = (0..dim)
            .map(|j| target.outer(&basis_rotation.column(j)))
            .collect();
        let ch = KrausChannel::new(kraus, true, &tol()).unwrap();

        // hypothesis: pure outputs on a full state basis and their mixtures
        let mut witnesses: Vec<DensityOperator> = Vec::new();
        for i in 0..dim {
            witnesses.push(as_density(
                &ComplexMatrix::basis_column(dim, i).outer(&ComplexMatrix::basis_column(dim, i)),
            ));
        }
        for i in 0..dim {
            for j in (i + 1)..dim {
                let plus = ComplexMatrix::basis_column(dim, i)
                    .add(&ComplexMatrix::basis_column(dim, j))
                    .unwrap()
                    .scale_real(std::f64::consts::FRAC_1_SQRT_2);
                let phase = ComplexMatrix::basis_column(dim, i)
                    .add(
                        &ComplexMatrix::basis_column(dim, j).scale(qpure::Complex64::new(0.0, 1.0)),
                    )
                    .unwrap()
                    .scale_real(std::f64::consts::FRAC_1_SQRT_2);
                witnesses.push(DensityOperator::from_pure(&plus, &tol()).unwrap());
                witnesses.push(DensityOperator::from_pure(&phase, &tol()).unwrap());
            }
        }
        let mut hypothesis = true;
        for w in &witnesses {
            hypothesis &= purity(&as_density(&ch.apply(w).unwrap())) >= 1.0 - 1e-9;
        }
        for i in 0..witnesses.len() {
            for j in (i + 1)..witnesses.len() {
                let mix =
                    DensityOperator::mixture(&[(0.5, &witnesses[i]), (0.5, &witnesses[j])], &tol())
                        .unwrap();
                hypothesis &= purity(&as_density(&ch.apply(&mix).unwrap())) >= 1.0 - 1e-9;
            }
        }
        assert!(hypothesis);

        let r1 = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let r2 = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let d = trace_distance(
            &as_density(&ch.apply(&r1).unwrap()),
            &as_density(&ch.apply(&r2).unwrap()),
        )
        .unwrap();
        assert!(d <= 1e-6);
    }

    // negative control: measure-and-prepare purifies the basis but not
    // mixtures, so the hypothesis fails and nothing is implied
    let dim = 2;
    let kraus: Vec<ComplexMatrix> = (0..dim)
        .map(|i| ComplexMatrix::basis_column(dim, i).outer(&ComplexMatrix::basis_column(dim, i)))
        .collect();
    let ch = KrausChannel::new(kraus, true, &tol()).unwrap();
    let mix = DensityOperator::maximally_mixed(2);
    assert!(purity(&as_density(&ch.apply(&mix).unwrap())) < 1.0 - 1e-3);
}

#[test]
fn reversible_fixtures_never_gain_purity() {
    let mut pick = Picker::new(0xC2);
    for _ in 0..100 {
        let dim = pick.int(2, 3);
        let aux = pick.int(1, 3);
        let u = random_unitary(dim, pick.seed());
        let sigma = random_density(aux, pick.int(1, aux), pick.seed()).unwrap();
        let forward = compose(
            &KrausChannel::append(dim, &sigma),
            &KrausChannel::unitary(&u, &tol()).unwrap(),
        )
        .unwrap();
        let reverse = compose(
            &KrausChannel::unitary(&u.adjoint(), &tol()).unwrap(),
            &KrausChannel::trace_out(dim, aux, Subsystem::First),
        )
        .unwrap();
        assert!(equal_action(
            &compose(&reverse, &forward).unwrap(),
            &KrausChannel::identity(dim),
            &tol()
        )
        .unwrap());

        let gamma = gamma_combinator(&forward, &reverse).unwrap();
        let rho = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let out = as_density(&gamma.apply(&rho).unwrap());
        assert!(purity(&out) <= purity(&rho) + 1e-9);
    }
}

// ---- geometry ----

#[test]
fn wcd_never_exceeds_trace_distance() {
    let mut pick = Picker::new(0xD0);
    for _ in 0..300 {
        let dim = pick.int(2, 6);
        let a = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let b = random_density(dim, pick.int(1, dim), pick.seed()).unwrap();
        let w = wcd(&a, &b).unwrap();
        let d = trace_distance(&a, &b).unwrap();
        assert!(w <= d + 1e-9);
    }
}

#[test]
fn wcd_is_symmetric_and_unitarily_invariant() {
    let mut pick = Picker::new(0xD1);
    for _ in 0..50 {
        let dim = pick.int(2, 5);
        let a = random_density(dim, pick.int(1, dim - 1), pick.seed()).unwrap();
        let b = random_density(dim, pick.int(1, dim - 1), pick.seed()).unwrap();
        let w_ab = wcd(&a, &b).unwrap();
        let w_ba = wcd(&b, &a).unwrap();
        assert!((w_ab - w_ba).abs() <= 1e-9);

        let u = random_unitary(dim, pick.seed());
        let rot = |rho: &DensityOperator| {
            as_density(&u.mul(rho.matrix()).unwrap().mul(&u.adjoint()).unwrap())
        };
        let w_rot = wcd(&rot(&a), &rot(&b)).unwrap();
        assert!((w_ab - w_rot).abs() <= 1e-9);
    }
}

#[test]
fn wcd_is_the_infimum_over_support_members() {
    let mut pick = Picker::new(0xD2);
    let mut rng = Xoshiro256StarStar::seed_from_u64(0xD3);
    for _ in 0..50 {
        // disjoint supports keep the infimum attainable by the Jordan pair
        let dim = pick.int(2, 5);
        let r1 = pick.int(1, dim - 1);
        let r2 = pick.int(1, dim - r1);
        let a = random_density(dim, r1, pick.seed()).unwrap();
        let b = random_density(dim, r2, pick.seed()).unwrap();
        let w = wcd(&a, &b).unwrap();
        let sup_a = support(&a, &tol());
        let sup_b = support(&b, &tol());

        // pure-state distance via the overlap formula, the independent route
        let pure_distance = |x: &ComplexMatrix, y: &ComplexMatrix| -> f64 {
            let overlap = x.inner(y).unwrap().norm();
            (1.0 - overlap * overlap).max(0.0).sqrt()
        };

        let mut min_sampled = f64::INFINITY;
        for _ in 0..2000 {
            let va = random_vector_in(&sup_a, &mut rng);
            let vb = random_vector_in(&sup_b, &mut rng);
            min_sampled = min_sampled.min(pure_distance(&va, &vb));
        }
        assert!(min_sampled >= w - 1e-9);

        // adding the minimal Jordan pair attains the infimum
        let jd = jordan(&sup_a, &sup_b).unwrap();
        let jordan_distance = pure_distance(&jd.basis1().column(0), &jd.basis2().column(0));
        assert!(min_sampled.min(jordan_distance) <= w + 1e-9);
    }
}

#[test]
fn jordan_angles_do_not_depend_on_the_basis_choice() {
    let mut pick = Picker::new(0xD4);
    for _ in 0..50 {
        // disjoint supports keep every angle away from the arccos endpoint,
        // where basis sensitivity would swamp the comparison
        let dim = pick.int(3, 6);
        let r1 = pick.int(1, dim - 1);
        let r2 = pick.int(1, dim - r1);
        let a = random_density(dim, r1, pick.seed()).unwrap();
        let b = random_density(dim, r2, pick.seed()).unwrap();
        let s1 = support(&a, &tol());
        let s2 = support(&b, &tol());
        let angles = jordan(&s1, &s2).unwrap().angles().to_vec();

        // rotate each basis by a random unitary on its own subspace
        let q1 = random_unitary(r1, pick.seed());
        let q2 = random_unitary(r2, pick.seed());
        let s1r = Subspace::new(dim, s1.basis().mul(&q1).unwrap(), &tol()).unwrap();
        let s2r = Subspace::new(dim, s2.basis().mul(&q2).unwrap(), &tol()).unwrap();
        let rotated = jordan(&s1r, &s2r).unwrap().angles().to_vec();
        for (x, y) in angles.iter().zip(&rotated) {
            assert!((x - y).abs() <= 1e-9);
        }
    }
}

// ---- purify ----

#[test]
fn multi_pair_channel_structure() {
    let mut pick = Picker::new(0xE0);
    for _ in 0..50 {
        let dim = pick.int(2, 6);
        let r1 = pick.int(1, (dim - 1).min(3));
        let r2 = pick.int(1, (dim - r1).clamp(1, 3));
        let a = random_density(dim, r1, pick.seed()).unwrap();
        let b = random_density(dim, r2, pick.seed()).unwrap();
        let w = wcd(&a, &b).unwrap();
        if w == 0.0 {
            continue;
        }
        let bundle = optimal_purifier(&a, &b).unwrap();
        let jd = jordan(&support(&a, &tol()), &support(&b, &tol())).unwrap();
        let pairs = jd.angles().len();

        let mut outputs1 = Vec::new();
        let mut outputs2 = Vec::new();
        for k in 0..pairs {
            let psi1 = jd.basis1().column(k);
            let psi2 = jd.basis2().column(k);
            let out1 = bundle
                .omega_tilde
                .apply(&DensityOperator::from_pure(&psi1, &tol()).unwrap())
                .unwrap();
            let out2 = bundle
                .omega_tilde
                .apply(&DensityOperator::from_pure(&psi2, &tol()).unwrap())
                .unwrap();
            let d1 = as_density(&out1);
            let d2 = as_density(&out2);
            assert!(purity(&d1) >= 1.0 - 1e-9);
            assert!(purity(&d2) >= 1.0 - 1e-9);
            assert!((trace_distance(&d1, &d2).unwrap() - w).abs() <= 1e-9);
            outputs1.push(d1);
            outputs2.push(d2);
        }
        // outputs of different pairs live on orthogonal planes
        for k in 0..pairs {
            for l in 0..pairs {
                if k != l {
                    let cross = outputs1[k]
                        .matrix()
                        .mul(outputs1[l].matrix())
                        .unwrap()
                        .trace()
                        .re
                        .abs()
                        .max(
                            outputs1[k]
                                .matrix()
                                .mul(outputs2[l].matrix())
                                .unwrap()
                                .trace()
                                .re
                                .abs(),
                        );
                    assert!(cross <= 1e-9);
                }
            }
        }

        // the completion projector annihilates the smaller-rank support
        let a3 = bundle.omega_tilde.kraus().last().unwrap();
        let smaller = if r1 <= r2 { &a } else { &b };
        let sup = support(smaller, &tol());
        for k in 0..sup.rank() {
            let v = sup.basis().column(k);
            assert!(a3.mul(&v).unwrap().norm_frobenius() <= 1e-9);
        }
    }
}

#[test]
fn contraction_families_respect_the_ceiling() {
    let mut pick = Picker::new(0xE1);
    for _ in 0..50 {
        let dim = pick.int(2, 5);
        let r1 = pick.int(1, (dim / 2).max(1));
        let r2 = pick.int(1, (dim - r1).max(1));
        let a = random_density(dim, r1, pick.seed()).unwrap();
        let b = random_density(dim, r2, pick.seed()).unwrap();
        let w = wcd(&a, &b).unwrap();
        if w == 0.0 {
            continue;
        }
        let bundle = optimal_purifier(&a, &b).unwrap();
        let fraction = pick.uniform();
        let contraction = mimic(
            &bundle.target_outputs.0,
            &bundle.target_outputs.1,
            fraction * bundle.achieved_distance,
        )
        .unwrap();
        let rotation =
            KrausChannel::unitary(&random_unitary(bundle.full.dim_out(), pick.seed()), &tol())
                .unwrap();
        let weaker = compose(&rotation, &compose(&contraction, &bundle.full).unwrap()).unwrap();
        let out1 = as_density(&weaker.apply(&a).unwrap());
        let out2 = as_density(&weaker.apply(&b).unwrap());
        assert!(purity(&out1) >= 1.0 - 1e-8);
        assert!(purity(&out2) >= 1.0 - 1e-8);
        assert!(trace_distance(&out1, &out2).unwrap() <= w + 1e-8);
    }
}

#[test]
fn product_bound_holds_on_random_quadruples() {
    let mut pick = Picker::new(0xE2);
    for _ in 0..500 {
        let d1 = pick.int(2, 4);
        let d2 = pick.int(2, 4);
        let r1 = random_density(d1, pick.int(1, d1), pick.seed()).unwrap();
        let r2 = random_density(d1, pick.int(1, d1), pick.seed()).unwrap();
        let s1 = random_density(d2, pick.int(1, d2), pick.seed()).unwrap();
        let s2 = random_density(d2, pick.int(1, d2), pick.seed()).unwrap();
        let (lhs, rhs) = product_bound(&r1, &r2, &s1, &s2).unwrap();
        assert!(lhs >= rhs - 1e-9);
    }
}

#[test]
fn every_constructed_purifier_stays_below_wcd() {
    // channels produced by omega_phi on pure states never beat the ceiling
    let mut pick = Picker::new(0xE3);
    for _ in 0..50 {
        let dim = pick.int(2, 5);
        let psi1 = random_pure_vector(dim, pick.seed());
        let psi2 = random_pure_vector(dim, pick.seed());
        let a = DensityOperator::from_pure(&psi1, &tol()).unwrap();
        let b = DensityOperator::from_pure(&psi2, &tol()).unwrap();
        let w = wcd(&a, &b).unwrap();
        if w == 0.0 {
            continue;
        }
        let theta = psi1.inner(&psi2).unwrap().norm().clamp(0.0, 1.0).acos();
        let phi = pick.uniform() * theta;
        let ch = omega_phi(&psi1, &psi2, phi).unwrap();
        let out1 = as_density(&ch.apply(&a).unwrap());
        let out2 = as_density(&ch.apply(&b).unwrap());
        assert!(trace_distance(&out1, &out2).unwrap() <= w + 1e-8);
    }
}

// ---- setanalysis ----

#[test]
fn counter_example_separates_the_criteria() {
    for k in 1..=20 {
        let p = k as f64 / 41.0; // strictly inside (0, 1/2)
        let (r1, r2) = counter_example(p).unwrap();
        let ms = StateSet::new(vec![r1.clone(), r2.clone()]).unwrap();
        let report = necessary_criteria(&ms).unwrap();
        assert!(report.same_spectrum && report.degenerate_angles);
        assert_eq!(two_state_criterion(&r1, &r2).unwrap(), TwoStateVerdict::Not);
    }
}

#[test]
fn partition_blocks_are_orthogonal_and_exhaustive() {
    let mut pick = Picker::new(0xF0);
    for _ in 0..20 {
        let dim = 6;
        // block-supported random states plus one full-rank straddler or not
        let mut states = Vec::new();
        for _ in 0..pick.int(2, 5) {
            let choice = pick.int(0, 2);
            let rho = match choice {
                0 => {
                    // supported on the first three levels
                    let small = random_density(3, pick.int(1, 3), pick.seed()).unwrap();
                    let mut m = ComplexMatrix::zeros(dim, dim);
                    m = m
                        .add(&tensor(&ComplexMatrix::diag(&[1.0, 0.0]), small.matrix()))
                        .unwrap();
                    as_density(&m)
                }
                1 => {
                    // supported on the last three levels
                    let small = random_density(3, pick.int(1, 3), pick.seed()).unwrap();
                    let m = tensor(&ComplexMatrix::diag(&[0.0, 1.0]), small.matrix());
                    as_density(&m)
                }
                _ => random_density(dim, pick.int(1, dim), pick.seed()).unwrap(),
            };
            states.push(rho);
        }
        let ms = StateSet::new(states).unwrap();
        let blocks = partition_orthogonal(&ms);
        let total: usize = blocks.iter().map(|b| b.len()).sum();
        assert_eq!(total, ms.len());
        for i in 0..blocks.len() {
            for j in (i + 1)..blocks.len() {
                for x in blocks[i].states() {
                    for y in blocks[j].states() {
                        let cross = x.matrix().mul(y.matrix()).unwrap().trace().re.abs();
                        assert!(cross <= 1e-10);
                    }
                }
            }
        }
    }
}

#[test]
fn usd_feasibility_is_unitarily_invariant() {
    let mut pick = Picker::new(0xF1);
    for _ in 0..30 {
        let dim = pick.int(2, 5);
        let n = pick.int(2, 3);
        let states: Vec<DensityOperator> = (0..n)
            .map(|_| random_density(dim, pick.int(1, dim), pick.seed()).unwrap())
            .collect();
        let ms = StateSet::new(states.clone()).unwrap();
        let verdict = usd_feasible(&ms).unwrap();

        let u = random_unitary(dim, pick.seed());
        let rotated: Vec<DensityOperator> = states
            .iter()
            .map(|s| as_density(&u.mul(s.matrix()).unwrap().mul(&u.adjoint()).unwrap()))
            .collect();
        let rotated_verdict = usd_feasible(&StateSet::new(rotated).unwrap()).unwrap();
        assert_eq!(verdict, rotated_verdict);
    }
}

#[test]
fn channel_equality_is_action_based() {
    // two different Kraus presentations of one map compare equal
    let u = random_unitary(2, 0x1234);
    let direct = KrausChannel::unitary(&u, &tol()).unwrap();
    let split = KrausChannel::new(
        vec![
            u.scale_real(std::f64::consts::FRAC_1_SQRT_2),
            u.scale(qpure::Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2)),
        ],
        true,
        &tol(),
    )
    .unwrap();
    assert!(equal_action(&direct, &split, &tol()).unwrap());
    assert_eq!(hermitian_basis(3).len(), 9);
}
