//! Cross-module laws on random inputs: exact linear algebra identities,
//! coboundary and Euler-characteristic relations on generated complexes,
//! cohomology ring axioms on the model spaces, and sampled guarantees for
//! every sphere planner constructor.

use efftc_core::algebra::{FieldSpec, Matrix, Scalar, Solver};
use efftc_core::complex::SimplicialComplex;
use efftc_core::cuplength::{
    cup_kernel_basis, multiply_into_ring, tensor_basis, tensor_mul, GradedRing, TensorElement,
};
use efftc_core::gaction::{induced_cohomology_action, SimplicialAction};
use efftc_core::models;
use efftc_core::sphereplan::{
    eval_plan, extend_plan, merge_plan, orientation_reversing_tau, planner_classical_sphere,
    planner_free_involution, planner_orientation_reversing, planner_reflection, product_combine,
    OrthoAction, PlannerSuite, SpherePoint, TOL_VERIFY,
};
use efftc_core::verify::{verify_plan, verify_suite};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn fields() -> [FieldSpec; 3] {
    [FieldSpec::Rationals, FieldSpec::prime(2).unwrap(), FieldSpec::prime(5).unwrap()]
}

fn arb_field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::prime(2).unwrap()),
        Just(FieldSpec::prime(5).unwrap()),
    ]
}

fn arb_matrix() -> impl Strategy<Value = (FieldSpec, Matrix)> {
    (arb_field(), 1usize..=5, 1usize..=5).prop_flat_map(|(f, r, c)| {
        proptest::collection::vec(-4i64..=4, r * c).prop_map(move |ents| {
            let entries: Vec<Scalar> = ents.iter().map(|n| f.from_i64(*n)).collect();
            (f, Matrix::new(r, c, entries))
        })
    })
}

fn arb_complex() -> impl Strategy<Value = SimplicialComplex> {
    (2usize..=6).prop_flat_map(|n| {
        let tuple = proptest::collection::btree_set(0..n, 1..=n.min(3));
        proptest::collection::vec(tuple, 1..=6).prop_map(move |tuples| {
            let labels = (0..n).map(|i| format!("p{i}")).collect();
            let mut maximal: Vec<Vec<usize>> =
                tuples.into_iter().map(|s| s.into_iter().collect()).collect();
            for v in 0..n {
                maximal.push(vec![v]);
            }
            SimplicialComplex::from_maximal(labels, &maximal)
                .expect("generated tuples are in range and duplicate free")
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rank_nullity_holds_and_kernel_vectors_vanish((f, m) in arb_matrix()) {
        let rank = m.rank(f);
        let kernel = m.kernel_basis(f);
        prop_assert_eq!(rank + kernel.len(), m.cols());
        for v in &kernel {
            let image = m.apply(v, f);
            prop_assert!(image.iter().all(|s| f.is_zero(s)));
        }
        if !kernel.is_empty() {
            let entries: Vec<Scalar> = kernel.iter().flatten().cloned().collect();
            let stacked = Matrix::new(kernel.len(), m.cols(), entries);
            prop_assert_eq!(stacked.rank(f), kernel.len());
        }
    }

    #[test]
    fn rank_is_transpose_invariant((f, m) in arb_matrix()) {
        prop_assert_eq!(m.rank(f), m.transpose().rank(f));
    }

    #[test]
    fn solver_reproduces_every_image_vector(
        (f, m) in arb_matrix(),
        coords in proptest::collection::vec(-3i64..=3, 5),
    ) {
        let x: Vec<Scalar> = (0..m.cols()).map(|j| f.from_i64(coords[j])).collect();
        let z = m.apply(&x, f);
        let solver = Solver::new(&m, f);
        let s = solver.solve(&z).expect("vectors in the image are solvable");
        prop_assert_eq!(m.apply(&s, f), z);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundary_composed_with_coboundary_is_zero(c in arb_complex()) {
        for f in fields() {
            for d in 0..=c.dim() {
                let dd = c.coboundary(d + 1, f).mul(&c.coboundary(d, f), f);
                for i in 0..dd.rows() {
                    for j in 0..dd.cols() {
                        prop_assert!(f.is_zero(dd.get(i, j)));
                    }
                }
            }
        }
    }

    #[test]
    fn euler_characteristic_equals_alternating_betti_sum(c in arb_complex()) {
        let chi = c.euler_characteristic();
        for f in fields() {
            let alt: i64 = c
                .betti_numbers(f)
                .iter()
                .enumerate()
                .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            prop_assert_eq!(alt, chi);
        }
    }

    #[test]
    fn barycentric_subdivision_preserves_betti_numbers(c in arb_complex()) {
        let sd = c.barycentric_subdivision().complex;
        for f in fields() {
            prop_assert_eq!(sd.betti_numbers(f), c.betti_numbers(f));
        }
    }
}

fn model_rings() -> Vec<(&'static str, GradedRing, FieldSpec)> {
    let q = FieldSpec::Rationals;
    let f2 = FieldSpec::prime(2).unwrap();
    vec![
        ("circle", models::triangle_circle().cohomology_ring(q).ring, q),
        ("hexagon circle", models::hexagon().cohomology_ring(q).ring, q),
        ("sphere", models::octahedron().cohomology_ring(q).ring, q),
        ("projective plane", models::rp2_six().cohomology_ring(f2).ring, f2),
        ("torus", models::hexagon_torus_product().complex.cohomology_ring(q).ring, q),
    ]
}

#[test]
fn model_cohomology_rings_are_graded_commutative() {
    for (name, ring, _) in model_rings() {
        assert!(ring.is_graded_commutative(), "{name}");
    }
}

fn tensor_equal(f: FieldSpec, a: &TensorElement, b: &TensorElement) -> bool {
    a.add(&b.scale(&f.from_i64(-1), f), f).is_zero()
}

#[test]
fn tensor_square_multiplication_obeys_the_koszul_sign() {
    for (_, ring, f) in model_rings() {
        let mut keys = Vec::new();
        for total in 0..=2 * ring.top_degree() {
            keys.extend(tensor_basis(&ring, total));
        }
        for &(d1, i, d2, j) in &keys {
            for &(e1, p, e2, q) in &keys {
                let a = TensorElement::basis(d1, i, d2, j, f);
                let b = TensorElement::basis(e1, p, e2, q, f);
                let ab = tensor_mul(&ring, &a, &b);
                let ba = tensor_mul(&ring, &b, &a);
                let sign = if (d1 + d2) * (e1 + e2) % 2 == 1 { -1 } else { 1 };
                assert!(tensor_equal(f, &ab, &ba.scale(&f.from_i64(sign), f)));
            }
        }
    }
}

#[test]
fn zero_divisor_kernel_elements_multiply_to_zero() {
    for (name, ring, f) in model_rings() {
        let basis = cup_kernel_basis(&ring);
        for z in &basis {
            assert!(!z.is_zero(), "{name}");
            for coords in multiply_into_ring(&ring, z).values() {
                assert!(coords.iter().all(|s| f.is_zero(s)), "{name}");
            }
        }
        if !basis.is_empty() {
            let f2 = f;
            let sum = basis.iter().fold(TensorElement::zero(), |acc, z| acc.add(z, f2));
            for coords in multiply_into_ring(&ring, &sum).values() {
                assert!(coords.iter().all(|s| f2.is_zero(s)), "{name}");
            }
        }
    }
}

#[test]
fn induced_cohomology_matrices_compose_contravariantly() {
    let actions: Vec<SimplicialAction> = vec![
        models::hexagon_reflection(),
        models::hexagon_rotation3(),
        models::octahedron_antipodal(),
        models::octahedron_halfturn(),
        models::octahedron_reflection(),
        models::torus_diag_reflection(),
    ];
    let f = FieldSpec::Rationals;
    for a in actions {
        let induced = induced_cohomology_action(&a, f).unwrap();
        let order = a.group().order();
        let degrees = induced.matrices[0].len();
        for d in 0..degrees {
            let id = &induced.matrices[0][d];
            assert_eq!(*id, Matrix::identity(id.rows(), f));
            for g in 0..order {
                for h in 0..order {
                    let gh = a.group().mul(g, h);
                    let composed = induced.matrices[h][d].mul(&induced.matrices[g][d], f);
                    assert_eq!(induced.matrices[gh][d], composed);
                }
            }
        }
    }
}

fn gaussian_point(rng: &mut ChaCha8Rng, dim: usize) -> SpherePoint {
    loop {
        let v = DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal));
        if v.norm() > 1e-6 {
            return SpherePoint::from_vector(v).unwrap();
        }
    }
}

fn constructor_suites() -> Vec<PlannerSuite> {
    vec![
        planner_classical_sphere(2),
        planner_classical_sphere(3),
        planner_reflection(2),
        planner_orientation_reversing(4, 2).unwrap(),
        planner_free_involution(3, OrthoAction::antipodal(3)).unwrap(),
    ]
}

#[test]
fn planner_constructors_pass_sampled_verification() {
    for suite in constructor_suites() {
        let report = verify_suite(&suite, 10_000, 20_260_814);
        assert!(report.pass(), "{}:\n{}", suite.name, report.render());
        assert_eq!(report.coverage_ratio(), 1.0, "{}", suite.name);
    }
}

#[test]
fn extended_suites_pass_sampled_verification() {
    for suite in [planner_reflection(2), planner_classical_sphere(2)] {
        let extended = extend_plan(&suite);
        let report = verify_suite(&extended, 3000, 5);
        assert!(report.pass(), "{}:\n{}", extended.name, report.render());
        assert_eq!(report.coverage_ratio(), 1.0, "{}", extended.name);
    }
}

#[test]
fn recorded_leaps_align_junctions_exactly() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for suite in constructor_suites() {
        let dim = suite.action.ambient_dim();
        for _ in 0..2000 {
            let x = gaussian_point(&mut rng, dim);
            let y = gaussian_point(&mut rng, dim);
            let Some((_, plan)) = suite.plan(&x, &y) else { continue };
            for (i, &g) in plan.leaps.iter().enumerate() {
                let end = eval_plan(&plan, i, 1.0);
                let start = eval_plan(&plan, i + 1, 0.0);
                let err = suite.action.apply(g, &end).dist(&start);
                assert!(err <= TOL_VERIFY, "{}: junction {} off by {}", suite.name, i, err);
            }
        }
    }
}

#[test]
fn segment_speed_bounds_cover_sampled_steps() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let steps = 1024;
    for suite in constructor_suites() {
        let dim = suite.action.ambient_dim();
        for _ in 0..200 {
            let x = gaussian_point(&mut rng, dim);
            let y = gaussian_point(&mut rng, dim);
            let Some((_, plan)) = suite.plan(&x, &y) else { continue };
            for (i, seg) in plan.segments.iter().enumerate() {
                let Some(bound) = seg.speed_bound() else { continue };
                let allowed = bound / steps as f64 * 1.01 + 1e-12;
                let mut prev = eval_plan(&plan, i, 0.0);
                for s in 1..=steps {
                    let cur = eval_plan(&plan, i, s as f64 / steps as f64);
                    let step = prev.dist(&cur);
                    assert!(
                        step <= allowed,
                        "{}: segment {} steps {} > allowed {}",
                        suite.name,
                        i,
                        step,
                        allowed
                    );
                    prev = cur;
                }
            }
        }
    }
}

#[test]
fn orientation_reversing_twist_keeps_compositions_off_the_cut_locus() {
    let tau = orientation_reversing_tau(4, 2).unwrap();
    let action = OrthoAction::coordinate_negation(4, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut min = f64::INFINITY;
    for _ in 0..100_000 {
        let x = gaussian_point(&mut rng, 5);
        let gx = action.apply(1, &x);
        let tx = &tau * x.coords();
        min = min.min((tx + gx.coords()).norm());
    }
    assert!(min >= 2f64.sqrt() - 1e-9, "minimum displacement {min}");
}

#[test]
fn product_suites_have_additive_chart_counts_minus_one() {
    let factors = vec![
        planner_classical_sphere(1),
        planner_classical_sphere(2),
        planner_reflection(2),
        planner_free_involution(1, OrthoAction::antipodal(1)).unwrap(),
    ];
    for l in &factors {
        for r in &factors {
            let p = product_combine(l, r);
            assert_eq!(p.chart_count(), l.charts.len() + r.charts.len() - 1);
            assert_eq!(p.k, l.k.max(r.k));
        }
    }
}

#[test]
fn extend_then_merge_restores_plan_size_and_verifies() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let suite = planner_free_involution(3, OrthoAction::antipodal(3)).unwrap();
    let extended = extend_plan(&suite);
    assert_eq!(extended.k, suite.k + 1);
    for _ in 0..300 {
        let x = gaussian_point(&mut rng, 4);
        let y = gaussian_point(&mut rng, 4);
        let Some((_, plan)) = extended.plan(&x, &y) else { continue };
        let merged = merge_plan(&plan, &extended.action).unwrap();
        assert_eq!(merged.k(), plan.k() - 1);
        assert!(merged.start().dist(&x) <= TOL_VERIFY);
        assert!(merged.end().dist(&y) <= TOL_VERIFY);
        let report = verify_plan(&merged, &x, &y, &extended.action, TOL_VERIFY);
        assert!(report.pass(), "{}", report.render());
    }
}
