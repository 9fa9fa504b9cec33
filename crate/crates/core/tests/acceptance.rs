//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured quantities (run with `--nocapture` to see them).
//!
//! Criteria 5 and 6 are asserted exactly as stated over the full degree
//! ladder {8,16,32,64}. Their high-degree legs are known to fail: per-axis
//! degree 64 monomial coefficients of sample-based Bernstein data in two
//! dimensions carry cancellation junk that no arithmetic can remove (see the
//! crate README on expansion conditioning). The assertions are kept faithful
//! rather than weakened.

use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cubeapprox::approximator::{approximate, assemble_exact, ApproxConfig};
use cubeapprox::bernstein::{bernstein_approximate, sup_error, BernsteinDegree};
use cubeapprox::grid::GridSpec;
use cubeapprox::mollifier::{smooth, wm_inf_distance, BumpKernel, MollifierConfig};
use cubeapprox::oracle::{BuiltinOracle, DerivativeOracle, OracleHandle, PolynomialOracle};
use cubeapprox::poincare::{
    check_order_one, sigma_weight_chain, DetailedOutcome, Norm, PoincareChecker,
};
use cubeapprox::polyalgebra::{combin::binomial, random_polynomial, MultiIndex, Polynomial};
use cubeapprox::sigma::{enumerate_sigma, verify_identity, weight_polynomial};
use cubeapprox::solver::{apply_dbeta_w, leading_constant, solve};

// Pinned tolerances and budgets, straight from the acceptance criteria.
const IDENTITY_RESIDUAL_TOL: f64 = 1e-12;
const IDENTITY_TIME_BUDGET_S: f64 = 5.0;
const SOLVER_RELATIVE_RESIDUAL_TOL: f64 = 1e-8;
const SOLVER_CASES: usize = 200;
const SOLVER_TIME_BUDGET_S: f64 = 30.0;
const BERNSTEIN_QUANT_TOL: f64 = 1e-6;
const EXACT_ASSEMBLY_TOL: f64 = 1e-8;
const CONVERGENCE_SLACK: f64 = 1.10;
const CONVERGENCE_END_FACTOR: f64 = 0.5;
const CONVERGENCE_TIME_BUDGET_S: f64 = 60.0;
const DOMINATION_STABILITY_FACTOR: f64 = 2.0;
const POINCARE_CASES: usize = 100;
const MOLLIFIER_SLACK: f64 = 1.10;
const MOLLIFIER_CONSTANT_TOL: f64 = 1e-6;

fn exp_sum_2d() -> OracleHandle {
    Arc::new(BuiltinOracle::ExpSum { dimension: 2 })
}

/// Criterion-5/6 runs share this ladder.
fn convergence_ladder() -> Vec<(u32, f64, f64)> {
    let grid = GridSpec::new(101).unwrap();
    [8u32, 16, 32, 64]
        .iter()
        .map(|&n| {
            let cfg =
                ApproxConfig::new(1, 2, BernsteinDegree::new(n).unwrap(), grid).unwrap();
            let (_, report) = approximate(exp_sum_2d(), &cfg).unwrap();
            (n, report.max_alpha_error(), report.max_sigma_error())
        })
        .collect()
}

#[test]
fn acceptance_1_partition_identity() {
    let start = Instant::now();
    for m in 1..=3u32 {
        for n in 1..=3usize {
            let residual = verify_identity(m, n).unwrap();
            assert!(
                residual <= IDENTITY_RESIDUAL_TOL,
                "criterion 1: residual {residual:e} at m={m}, N={n}"
            );
        }
    }
    // raw 2^{Nm} enumeration agrees with the collapsed representation exactly
    for (m, dim) in [(1u32, 1usize), (2, 1), (3, 1), (1, 2), (2, 2), (3, 2), (1, 3), (2, 3)] {
        let nm = m * dim as u32;
        assert!(nm <= 8);
        let mut raw = Polynomial::zero(dim);
        for mask in 0u32..(1 << nm) {
            let mut product = Polynomial::constant(dim, 1.0);
            for axis in 0..dim {
                for slot in 0..m {
                    let keep = mask >> (axis as u32 * m + slot) & 1 == 1;
                    let x = Polynomial::variable(dim, axis).unwrap();
                    let factor = if keep {
                        x
                    } else {
                        Polynomial::constant(dim, 1.0).sub(&x).unwrap()
                    };
                    product = product.mul(&factor).unwrap();
                }
            }
            raw = raw.add(&product).unwrap();
        }
        let mut collapsed = Polynomial::zero(dim);
        for t in enumerate_sigma(m, dim).unwrap() {
            collapsed = collapsed
                .add(&weight_polynomial(&t).scale(t.multiplicity() as f64))
                .unwrap();
        }
        assert_eq!(raw, collapsed, "criterion 1: raw vs collapsed at m={m}, N={dim}");
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < IDENTITY_TIME_BUDGET_S,
        "criterion 1: took {elapsed:.2}s"
    );
    println!("ACCEPTANCE 1 partition identity: PASS ({elapsed:.2}s)");
}

#[test]
fn acceptance_2_solver_round_trip() {
    let start = Instant::now();
    let mut worst_rel = 0.0_f64;
    for case in 0..SOLVER_CASES {
        let dim = 1 + case % 2;
        let m = 1 + (case / 2) % 2;
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + case as u64);
        let q = random_polynomial(&mut rng, dim, 8, 1.0);
        if q.is_zero() {
            continue;
        }
        for t in enumerate_sigma(m as u32, dim).unwrap() {
            let p = solve(&t, &q).unwrap();
            let residual = apply_dbeta_w(&t, &p).unwrap().sub(&q).unwrap().max_abs_coeff();
            let rel = residual / q.max_abs_coeff();
            worst_rel = worst_rel.max(rel);
            assert!(
                rel <= SOLVER_RELATIVE_RESIDUAL_TOL,
                "criterion 2: case {case}, σ={:?}: relative residual {rel:e}",
                t.retention()
            );
        }
    }

    // closed-form pivot equals brute-force extraction, exactly
    for m in 1..=3u32 {
        for dim in 1..=2usize {
            for t in enumerate_sigma(m, dim).unwrap() {
                for gamma in cubeapprox::polyalgebra::cube_iter(dim, 5) {
                    let brute = apply_dbeta_w(&t, &Polynomial::monomial(gamma.clone(), 1.0))
                        .unwrap()
                        .coefficient(&gamma);
                    let closed = leading_constant(&t, &gamma).unwrap();
                    assert_eq!(
                        brute, closed,
                        "criterion 2: pivot mismatch at m={m}, σ={:?}, γ={gamma}",
                        t.retention()
                    );
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < SOLVER_TIME_BUDGET_S,
        "criterion 2: took {elapsed:.2}s"
    );
    println!(
        "ACCEPTANCE 2 solver round trip: PASS (worst relative residual {worst_rel:.2e}, {elapsed:.2}s)"
    );
}

#[test]
fn acceptance_3_bernstein_quantitative() {
    // oracle: B_n[x²] − x² = x(1−x)/n, validated by direct summation
    for n in [2u32, 10] {
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let direct: f64 = (0..=n)
                .map(|k| {
                    (k as f64 / n as f64).powi(2)
                        * binomial(n, k) as f64
                        * x.powi(k as i32)
                        * (1.0 - x).powi((n - k) as i32)
                })
                .sum();
            let closed = x * x + x * (1.0 - x) / n as f64;
            assert!(
                (direct - closed).abs() <= 1e-12,
                "criterion 3: closed form vs direct sum at n={n}, x={x}"
            );
        }
    }

    let grid = GridSpec::new(1001).unwrap();
    let p = bernstein_approximate(|x: &[f64]| x[0] * x[0], BernsteinDegree::new(10).unwrap(), 1)
        .unwrap();
    let e = sup_error(|x: &[f64]| x[0] * x[0], &p, &grid);
    assert!(
        (e - 0.025).abs() <= BERNSTEIN_QUANT_TOL,
        "criterion 3: sup error {e} (expected 0.025 ± {BERNSTEIN_QUANT_TOL:e})"
    );
    println!("ACCEPTANCE 3 bernstein quantitative: PASS (sup error {e})");
}

#[test]
fn acceptance_4_polynomial_exactness() {
    let mut worst = 0.0_f64;
    for case in 0..25u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + case);
        let u = random_polynomial(&mut rng, 2, 3, 1.0);
        let p = assemble_exact(&u, 1).unwrap();
        let diff = p.sub(&u).unwrap().max_abs_coeff();
        let rel = diff / u.max_abs_coeff().max(1.0);
        worst = worst.max(rel);
        assert!(
            rel <= EXACT_ASSEMBLY_TOL,
            "criterion 4: case {case}: coefficient deviation {rel:e}"
        );
    }
    println!("ACCEPTANCE 4 polynomial exactness of assembly: PASS (worst deviation {worst:.2e})");
}

#[test]
fn acceptance_5_end_to_end_convergence() {
    let start = Instant::now();
    let ladder = convergence_ladder();
    let errors: Vec<f64> = ladder.iter().map(|&(_, e, _)| e).collect();
    println!(
        "criterion 5 ladder: {}",
        ladder
            .iter()
            .map(|(n, e, _)| format!("n={n}: {e:.3e}"))
            .collect::<Vec<_>>()
            .join(", ")
    );

    for &e in &errors {
        assert!(e > 0.0, "criterion 5: errors must be strictly positive");
    }
    for w in errors.windows(2) {
        assert!(
            w[1] <= CONVERGENCE_SLACK * w[0],
            "criterion 5: non-increasing within 10% slack violated: {} -> {} \
             (degree-64 monomial expansion is outside the value-faithful envelope; \
             see README on expansion conditioning)",
            w[0],
            w[1]
        );
    }
    assert!(
        errors[3] <= CONVERGENCE_END_FACTOR * errors[0],
        "criterion 5: error(64) = {} > 0.5 × error(8) = {} \
         (degree-64 monomial expansion is outside the value-faithful envelope; \
         see README on expansion conditioning)",
        errors[3],
        0.5 * errors[0]
    );
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < CONVERGENCE_TIME_BUDGET_S,
        "criterion 5: took {elapsed:.2}s"
    );
    println!("ACCEPTANCE 5 end-to-end convergence: PASS ({elapsed:.2}s)");
}

#[test]
fn acceptance_6_error_domination() {
    let ladder = convergence_ladder();
    let ratios: Vec<f64> = ladder
        .iter()
        .map(|&(n, e, b)| {
            assert!(b > 0.0, "criterion 6: degenerate Bernstein error at n={n}");
            e / b
        })
        .collect();
    println!(
        "criterion 6 A_emp per degree: {}",
        ladder
            .iter()
            .zip(&ratios)
            .map(|((n, _, _), a)| format!("n={n}: {a:.3}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let (lo, hi) = ratios
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), &r| (lo.min(r), hi.max(r)));
    assert!(
        hi <= DOMINATION_STABILITY_FACTOR * lo,
        "criterion 6: A_emp spread {lo:.3}..{hi:.3} exceeds factor {DOMINATION_STABILITY_FACTOR} \
         (high-degree legs are junk-dominated; see README on expansion conditioning)"
    );
    println!("ACCEPTANCE 6 error domination: PASS (A_emp in [{lo:.3}, {hi:.3}])");
}

#[test]
fn acceptance_7_poincare_sweeps() {
    // order-one: u = x₁·q must satisfy ‖u‖_p ≤ ‖D₁u‖_p with zero violations
    let mut checked = 0usize;
    for dim in [1usize, 2] {
        let grid = GridSpec::new(if dim == 1 { 201 } else { 101 }).unwrap();
        for p in [Norm::L1, Norm::L2, Norm::LInf] {
            for case in 0..POINCARE_CASES {
                let mut rng = ChaCha8Rng::seed_from_u64(3000 + case as u64);
                let q = random_polynomial(&mut rng, dim, 5, 1.0);
                let u = Polynomial::variable(dim, 0).unwrap().mul(&q).unwrap();
                let out = check_order_one(&PolynomialOracle::new(u), p, &grid).unwrap();
                assert!(
                    out.holds,
                    "criterion 7: violation at N={dim}, p={}, case {case}: lhs {} rhs {}",
                    p.label(),
                    out.lhs,
                    out.rhs
                );
                checked += 1;
            }
        }
    }

    // detailed: σ-weight families satisfy their chains; ratios all finite
    let mut checker = PoincareChecker::new();
    let mut detailed = 0usize;
    for (m, dim) in [(1u32, 1usize), (1, 2), (2, 2)] {
        let grid = GridSpec::new(if dim == 1 { 201 } else { 51 }).unwrap();
        for t in enumerate_sigma(m, dim).unwrap() {
            let chain = sigma_weight_chain(t.retention(), m, 0).unwrap();
            for case in 0..10 {
                let mut rng = ChaCha8Rng::seed_from_u64(4000 + case);
                let q = random_polynomial(&mut rng, dim, 3, 1.0);
                let u = weight_polynomial(&t).mul(&q).unwrap();
                let oracle = PolynomialOracle::new(u);
                for p in [Norm::L1, Norm::L2, Norm::LInf] {
                    match checker.check_detailed(&oracle, &chain, p, &grid).unwrap() {
                        DetailedOutcome::Ratio { ratio, .. } => {
                            assert!(
                                ratio.is_finite(),
                                "criterion 7: non-finite ratio at m={m}, N={dim}"
                            );
                            detailed += 1;
                        }
                        DetailedOutcome::Degenerate { .. } => {
                            // zero polynomial draws are possible but harmless
                            detailed += 1;
                        }
                    }
                }
            }
        }
    }
    println!(
        "ACCEPTANCE 7 poincare sweeps: PASS ({checked} order-one cases, {detailed} detailed ratios)"
    );
}

#[test]
fn acceptance_8_mollifier_convergence() {
    // constants preserved through the smoother
    for dim in [1usize, 2] {
        let one: OracleHandle = Arc::new(BuiltinOracle::One { dimension: dim });
        let kernel = BumpKernel::new(2, dim).unwrap();
        let cfg = MollifierConfig::new(4).unwrap();
        let v = smooth(one, &kernel, &cfg, dim as u32, 1).unwrap();
        let x = vec![0.35; dim];
        let drift = (v.eval(&MultiIndex::zero(dim), &x) - 1.0).abs();
        assert!(
            drift <= MOLLIFIER_CONSTANT_TOL,
            "criterion 8: constant drift {drift:e} at N={dim}"
        );
    }

    // kink function: W^{m,∞}-grid error non-increasing over n ∈ {4,8,16}
    let mut all_errors = Vec::new();
    for (dim, target, grid_nodes) in [(1usize, 1u32, 101usize), (2, 2, 41)] {
        let u: OracleHandle = Arc::new(BuiltinOracle::Kink { dimension: dim });
        let kernel = BumpKernel::new(2, dim).unwrap();
        let grid = GridSpec::new(grid_nodes).unwrap();
        let mut errors = Vec::new();
        for step in [4u32, 8, 16] {
            let cfg = MollifierConfig::new(step).unwrap();
            let v = smooth(u.clone(), &kernel, &cfg, target, 1).unwrap();
            errors.push(wm_inf_distance(u.as_ref(), &v, 1, &grid).unwrap());
        }
        for w in errors.windows(2) {
            assert!(
                w[1] <= MOLLIFIER_SLACK * w[0],
                "criterion 8: N={dim} errors not non-increasing: {errors:?}"
            );
        }
        all_errors.push((dim, errors));
    }
    println!("ACCEPTANCE 8 mollifier convergence: PASS ({all_errors:?})");
}
