//! Acceptance gate: nine checks covering the bound computations, the planner
//! constructions, and the exact property laws, with the documented time
//! budgets. Each criterion prints one PASS or FAIL line.

use std::process::{Command, Output};
use std::time::{Duration, Instant};

use efftc_core::algebra::{FieldSpec, Matrix};
use efftc_core::cuplength::tc_lower_bound;
use efftc_core::gaction::{daleth_complex, induced_cohomology_action};
use efftc_core::models;
use efftc_core::sphereplan::{
    extend_plan, merge_free, orientation_reversing_tau, planner_classical_sphere,
    planner_free_involution, planner_orientation_reversing, product_combine, OrthoAction,
    SpherePoint,
};
use efftc_core::verify::{
    table_check, verify_product_suite, verify_suite, verify_suite_with_sampler, PairSampler,
};
use nalgebra::DVector;

type CriterionResult = Result<(), String>;

fn check(cond: bool, msg: &str) -> CriterionResult {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn within(budget: Duration, elapsed: Duration, what: &str) -> CriterionResult {
    check(
        elapsed <= budget,
        &format!("{what} took {elapsed:?}, budget {budget:?}"),
    )
}

fn efftc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_efftc")).args(args).output().expect("binary runs")
}

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn f2() -> FieldSpec {
    FieldSpec::prime(2).unwrap()
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn probe_point(state: &mut u64, dim: usize) -> SpherePoint {
    loop {
        let coords: Vec<f64> = (0..dim)
            .map(|_| splitmix(state) as f64 / u64::MAX as f64 * 2.0 - 1.0)
            .collect();
        if let Ok(p) = SpherePoint::new(coords) {
            return p;
        }
    }
}

fn zero_divisor_bounds_on_circle_and_sphere() -> CriterionResult {
    for (name, expected) in [("triangle", 2usize), ("octahedron", 3usize)] {
        let started = Instant::now();
        let out = efftc(&["tc-bound", "--complex", name, "--field", "q"]);
        within(Duration::from_secs(5), started.elapsed(), name)?;
        check(out.status.code() == Some(0), &format!("tc-bound {name} exited nonzero"))?;
        let text = String::from_utf8_lossy(&out.stdout).into_owned();
        check(
            text.contains(&format!("bound: {expected}")),
            &format!("tc-bound {name} did not report bound {expected}"),
        )?;
    }
    let circle = tc_lower_bound(&models::triangle_circle(), q()).map_err(|e| e.to_string())?;
    let sphere = tc_lower_bound(&models::octahedron(), q()).map_err(|e| e.to_string())?;
    check(!circle.witness_product.is_zero(), "circle witness product vanished")?;
    check(!sphere.witness_product.is_zero(), "sphere witness product vanished")?;
    check(circle.bound == 2 && sphere.bound == 3, "library bounds disagree with the CLI")
}

fn effective_bound_on_the_torus() -> CriterionResult {
    let started = Instant::now();
    let out = efftc(&[
        "etc-bound",
        "--complex",
        "torus-hex",
        "--action",
        "diag-reflection",
        "--field",
        "q",
    ]);
    within(Duration::from_secs(60), started.elapsed(), "etc-bound torus-hex")?;
    check(out.status.code() == Some(0), "etc-bound exited nonzero")?;
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    check(text.contains("quotient betti: 1 0 1"), "quotient Betti numbers are not (1, 0, 1)")?;
    check(text.contains("bound: 3"), "effective bound is not 3")
}

fn reflection_row_is_pinned() -> CriterionResult {
    let report = table_check("reflection-n2", 10_000, 7).map_err(|e| e.to_string())?;
    check(report.table_value == 1, "table value is not 1")?;
    check(report.upper == 1 && report.lower == 1, "interval does not pin 1")?;
    check(report.verify.samples == 10_000, "verification did not run 10^4 samples")?;
    check(report.verify.pass(), "reflection planner verification failed")?;
    check(!report.lower_cited, "the contractible-quotient bound should be computed")?;
    check(report.pass(), "reflection row failed overall")
}

fn saturated_diagonal_of_the_halfturn() -> CriterionResult {
    let started = Instant::now();
    let daleth = daleth_complex(&models::octahedron_halfturn());
    let betti = daleth.complex.betti_numbers(f2());
    within(Duration::from_secs(10), started.elapsed(), "saturated diagonal")?;
    check(
        betti == vec![1, 1, 2],
        &format!("mod-2 Betti numbers are {betti:?}, expected [1, 1, 2]"),
    )
}

fn free_involution_extend_merge_and_planners() -> CriterionResult {
    let suite = planner_free_involution(1, OrthoAction::antipodal(1)).map_err(|e| e.to_string())?;
    let merged = merge_free(&extend_plan(&suite)).map_err(|e| e.to_string())?;
    check(merged.k == 2, &format!("merged k = {}, expected 2", merged.k))?;
    check(merged.charts.len() == 2, "merged suite does not have 2 charts")?;
    let report = verify_suite(&merged, 10_000, 3);
    check(report.pass(), &format!("merged suite failed:\n{}", report.render()))?;
    for n in [1usize, 3usize] {
        let out = efftc(&[
            "verify-planner",
            "--construction",
            "free",
            "--n",
            &n.to_string(),
            "--samples",
            "10000",
        ]);
        check(
            out.status.code() == Some(0),
            &format!("verify-planner free n={n} exited nonzero"),
        )?;
    }
    Ok(())
}

fn orientation_reversing_on_s4() -> CriterionResult {
    let tau = orientation_reversing_tau(4, 2).map_err(|e| e.to_string())?;
    let action = OrthoAction::coordinate_negation(4, 2).map_err(|e| e.to_string())?;
    let mut state = 20_260_814u64;
    let mut min = f64::INFINITY;
    for _ in 0..100_000 {
        let x = probe_point(&mut state, 5);
        let gx = action.apply(1, &x);
        let composed: DVector<f64> = &tau * x.coords() + gx.coords();
        min = min.min(composed.norm());
    }
    check(min > 0.1, &format!("minimum twist displacement {min} is not above 0.1"))?;
    let suite = planner_orientation_reversing(4, 2).map_err(|e| e.to_string())?;
    for seed in 0..10 {
        let report = verify_suite(&suite, 10_000, seed);
        check(report.pass(), &format!("seed {seed} failed:\n{}", report.render()))?;
        check(report.coverage_ratio() == 1.0, &format!("seed {seed} coverage below 1"))?;
        check(report.chart_stats[0].hits > 0, "the geodesic chart was never selected")?;
    }
    let antipodal = verify_suite_with_sampler(&suite, 2000, 1, PairSampler::Antipodal);
    check(
        antipodal.pass(),
        &format!("antipodal queries failed:\n{}", antipodal.render()),
    )?;
    check(
        antipodal.chart_stats[1].hits > 0,
        "the twist chart was never selected on antipodal queries",
    )?;
    Ok(())
}

fn product_of_two_circle_planners() -> CriterionResult {
    let circle = planner_classical_sphere(1);
    check(circle.charts.len() == 2, "the circle planner does not have 2 charts")?;
    let product = product_combine(&circle, &circle);
    check(
        product.chart_count() == 3,
        &format!("product has {} charts, expected 3", product.chart_count()),
    )?;
    let report = verify_product_suite(&product, 10_000, 9);
    check(report.coverage_ratio() == 1.0, "product coverage below 1")?;
    check(report.endpoint_failures == 0, "product endpoint failures")?;
    check(report.leap_failures == 0, "product leap failures")?;
    check(report.pass(), &format!("product verification failed:\n{}", report.render()))
}

fn zp_equality_certificate() -> CriterionResult {
    let out = efftc(&[
        "certify-equality",
        "--action",
        "hexagon-rotation3",
        "--field",
        "q",
        "--tc",
        "2",
    ]);
    check(out.status.code() == Some(0), "certify-equality exited nonzero")?;
    let text = String::from_utf8_lossy(&out.stdout).into_owned();
    check(text.contains("certified: true"), "certificate was not granted")?;
    check(
        text.contains("action_trivial_on_cohomology: true"),
        "the rotation is not trivial on cohomology",
    )
}

fn exact_property_laws() -> CriterionResult {
    let fields = [q(), f2(), FieldSpec::prime(5).unwrap()];
    for c in [models::octahedron(), models::rp2_six(), models::suspension_hexagon()] {
        for f in fields {
            for d in 0..=c.dim() {
                let dd = c.coboundary(d + 1, f).mul(&c.coboundary(d, f), f);
                for i in 0..dd.rows() {
                    for j in 0..dd.cols() {
                        check(f.is_zero(dd.get(i, j)), "coboundary squared is nonzero")?;
                    }
                }
            }
        }
    }
    let torus = models::hexagon_torus_product().complex;
    check(
        torus.cohomology_ring(q()).ring.is_graded_commutative(),
        "torus ring is not graded commutative",
    )?;
    check(
        models::rp2_six().cohomology_ring(f2()).ring.is_graded_commutative(),
        "projective plane ring is not graded commutative",
    )?;
    check(
        torus.betti_numbers(q()) == vec![1, 2, 1],
        "torus Betti numbers are not the tensor square of the circle's",
    )?;
    let triangle = models::triangle_circle();
    let direct = tc_lower_bound(&triangle, q()).map_err(|e| e.to_string())?;
    let subdivided =
        tc_lower_bound(&triangle.barycentric_subdivision().complex, q()).map_err(|e| e.to_string())?;
    check(direct.bound == subdivided.bound, "subdivision changed the circle bound")?;
    let octa = models::octahedron();
    let direct = tc_lower_bound(&octa, q()).map_err(|e| e.to_string())?;
    let subdivided =
        tc_lower_bound(&octa.barycentric_subdivision().complex, q()).map_err(|e| e.to_string())?;
    check(direct.bound == subdivided.bound, "subdivision changed the sphere bound")?;
    let rotation = models::hexagon_rotation3();
    let induced = induced_cohomology_action(&rotation, q()).map_err(|e| e.to_string())?;
    let order = rotation.group().order();
    for d in 0..induced.matrices[0].len() {
        let id = &induced.matrices[0][d];
        check(*id == Matrix::identity(id.rows(), q()), "identity does not induce identity")?;
        for g in 0..order {
            for h in 0..order {
                let gh = rotation.group().mul(g, h);
                let composed = induced.matrices[h][d].mul(&induced.matrices[g][d], q());
                check(induced.matrices[gh][d] == composed, "induced action is not functorial")?;
            }
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: Vec<(&str, fn() -> CriterionResult)> = vec![
        ("1 zero-divisor bounds on the circle and sphere", zero_divisor_bounds_on_circle_and_sphere),
        ("2 effective bound for the torus diagonal reflection", effective_bound_on_the_torus),
        ("3 reflection row pinned by planner and quotient", reflection_row_is_pinned),
        ("4 saturated diagonal of the half-turn", saturated_diagonal_of_the_halfturn),
        ("5 free involution extend-merge and planners", free_involution_extend_merge_and_planners),
        ("6 orientation-reversing planner on S^4", orientation_reversing_on_s4),
        ("7 product of two circle planners", product_of_two_circle_planners),
        ("8 equality certificate for the Z/3 rotation", zp_equality_certificate),
        ("9 exact property laws", exact_property_laws),
    ];
    let mut failures = Vec::new();
    for (name, criterion) in criteria {
        match criterion() {
            Ok(()) => println!("ACCEPTANCE {name}: PASS"),
            Err(e) => {
                println!("ACCEPTANCE {name}: FAIL ({e})");
                failures.push(format!("{name}: {e}"));
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria:\n{}", failures.join("\n"));
}
