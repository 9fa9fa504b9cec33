//! Subcommand implementations.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cubeapprox::approximator::{approximate, ApproxConfig};
use cubeapprox::bernstein::BernsteinDegree;
use cubeapprox::grid::GridSpec;
use cubeapprox::mollifier::{smooth, wm_inf_distance, BumpKernel, MollifierConfig};
use cubeapprox::oracle::{BuiltinOracle, OracleHandle, PolynomialOracle};
use cubeapprox::poincare::{
    check_order_one, check_standard, sigma_weight_chain, DetailedOutcome, PoincareChecker,
};
use cubeapprox::polyalgebra::{random_polynomial, Polynomial};
use cubeapprox::sigma::{enumerate_sigma, verify_identity, weight_polynomial};

use crate::config::{
    check_dimension, check_order, default_grid_nodes, parse_format, parse_norm, resolve,
    resolve_required, FileConfig, OutputFormat, DEFAULT_MAX_DEGREE,
};
use crate::output::{alpha_cell, num, write_report, Table};
use crate::{
    ApproximateArgs, CliError, MollifyDemoArgs, PoincareArgs, VerifyIdentityArgs,
};

fn resolve_format(
    flag: &Option<String>,
    file: &Option<String>,
) -> Result<OutputFormat, CliError> {
    parse_format(&resolve(
        flag.clone(),
        file.clone(),
        "csv".to_string(),
    ))
}

fn builtin(name: &str, dimension: usize) -> Result<OracleHandle, CliError> {
    Ok(Arc::new(BuiltinOracle::by_name(name, dimension)?))
}

pub fn run_approximate(args: ApproximateArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let format = resolve_format(&args.common.format, &file.format)?;
    let function = resolve_required(args.function, file.function, "fn")?;
    let dimension = check_dimension(resolve_required(args.common.n, file.n, "n")?)?;
    let m = check_order(resolve_required(args.m, file.m, "m")?)?;
    let degrees = resolve_required(args.degrees, file.degrees, "degrees")?;
    let max_degree = resolve(args.max_degree, file.max_degree, DEFAULT_MAX_DEGREE);
    let grid_nodes = resolve(args.grid, file.grid, default_grid_nodes(dimension));
    if degrees.is_empty() {
        return Err(CliError::Usage("--degrees needs at least one entry".into()));
    }

    let grid = GridSpec::new(grid_nodes)?;
    let oracle = builtin(&function, dimension)?;

    let mut runs = Vec::with_capacity(degrees.len());
    let mut last_polynomial: Option<Polynomial> = None;
    for &degree in &degrees {
        let cfg = ApproxConfig::new(
            m,
            dimension,
            BernsteinDegree::with_limit(degree, max_degree)?,
            grid,
        )?;
        let (p, report) = approximate(oracle.clone(), &cfg)?;
        println!(
            "degree {degree}: max alpha error {}, max sigma bernstein error {}",
            num(report.max_alpha_error()),
            num(report.max_sigma_error())
        );
        runs.push((degree, report));
        last_polynomial = Some(p);
    }

    // CSV carries the fixed row format; JSON carries the full per-degree
    // error reports including the per-σ diagnostics.
    let rendered = match format {
        OutputFormat::Csv => {
            let mut table =
                Table::new(vec!["degree", "alpha", "sup_error", "max_sigma_bern_error"]);
            for (degree, report) in &runs {
                let max_bern = report.max_sigma_error();
                for e in &report.alpha_errors {
                    table.push(vec![
                        degree.to_string(),
                        alpha_cell(&e.alpha),
                        num(e.sup_error),
                        num(max_bern),
                    ]);
                }
            }
            table.to_csv()
        }
        OutputFormat::Json => {
            #[derive(serde::Serialize)]
            struct DegreeReport<'a> {
                degree: u32,
                #[serde(flatten)]
                report: &'a cubeapprox::approximator::ErrorReport,
            }
            let items: Vec<DegreeReport> = runs
                .iter()
                .map(|(degree, report)| DegreeReport {
                    degree: *degree,
                    report,
                })
                .collect();
            let mut text = serde_json::to_string_pretty(&items)
                .expect("report serialization cannot fail");
            text.push('\n');
            text
        }
    };
    write_report(args.common.out.as_deref(), &rendered)?;
    if let Some(path) = args.poly_out.as_deref() {
        let p = last_polynomial.expect("degrees is nonempty");
        let mut text =
            serde_json::to_string_pretty(&p).expect("polynomial serialization cannot fail");
        text.push('\n');
        write_report(Some(path), &text)?;
    }
    Ok(())
}

pub fn run_verify_identity(args: VerifyIdentityArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let format = resolve_format(&args.common.format, &file.format)?;
    let m = check_order(resolve_required(args.m, file.m, "m")?)?;
    let dimension = check_dimension(resolve_required(args.common.n, file.n, "n")?)?;

    let residual = verify_identity(m, dimension)?;
    println!("partition identity m={m} N={dimension}: residual {}", num(residual));

    let mut table = Table::new(vec!["m", "n", "residual"]);
    table.push(vec![m.to_string(), dimension.to_string(), num(residual)]);
    write_report(args.common.out.as_deref(), &table.render(format))?;

    if residual > 1e-12 {
        return Err(CliError::Numerical(format!(
            "partition identity residual {residual:e} exceeds 1e-12"
        )));
    }
    Ok(())
}

pub fn run_poincare(args: PoincareArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let format = resolve_format(&args.common.format, &file.format)?;
    let statement = resolve(args.statement, file.statement, "order-one".to_string());
    let p = parse_norm(&resolve(args.p, file.p, "inf".to_string()))?;
    let dimension = check_dimension(resolve_required(args.common.n, file.n, "n")?)?;
    let grid_nodes = resolve(args.grid, file.grid, default_grid_nodes(dimension));
    let seed = resolve(args.common.seed, file.seed, 0);
    let cases = resolve(args.cases, file.cases, 100);
    let grid = GridSpec::new(grid_nodes)?;

    let mut table = Table::new(vec!["case_id", "lhs", "rhs", "ratio", "holds"]);
    let mut violations = 0usize;

    let single_function = args.function.or_else(|| file.function.clone());
    match statement.as_str() {
        "order-one" => {
            if let Some(name) = single_function {
                // single named-function check
                let oracle = BuiltinOracle::by_name(&name, dimension)?;
                let out = check_order_one(&oracle, p, &grid)?;
                push_inequality_row(&mut table, 0, out.lhs, out.rhs, out.holds);
                if !out.holds {
                    violations += 1;
                }
                println!(
                    "order-one {name}: lhs {} rhs {} holds {}",
                    num(out.lhs),
                    num(out.rhs),
                    out.holds
                );
            } else {
                // random family u = x1·q with exact trace on {x1=0}
                for case in 0..cases {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(case as u64));
                    let q = random_polynomial(&mut rng, dimension, 5, 1.0);
                    let u = Polynomial::variable(dimension, 0)?.mul(&q)?;
                    let out = check_order_one(&PolynomialOracle::new(u), p, &grid)?;
                    push_inequality_row(&mut table, case, out.lhs, out.rhs, out.holds);
                    if !out.holds {
                        violations += 1;
                    }
                }
                println!(
                    "order-one sweep: {cases} cases, {} violation(s)",
                    violations
                );
            }
        }
        "detailed" => {
            let m = check_order(resolve(args.m, file.m, 1))?;
            let t_start = resolve(args.t, file.t, 0);
            let sigma_terms = enumerate_sigma(m, dimension)?;
            let mut checker = PoincareChecker::new();
            let mut running = 0.0_f64;
            for case in 0..cases {
                let term = &sigma_terms[case % sigma_terms.len()];
                let Some(chain) = sigma_weight_chain(term.retention(), m, t_start) else {
                    return Err(CliError::Usage(format!(
                        "no chain with start order {t_start} for m={m}, N={dimension}"
                    )));
                };
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(case as u64));
                let q = random_polynomial(&mut rng, dimension, 3, 1.0);
                let u = weight_polynomial(term).mul(&q)?;
                let out = checker.check_detailed(&PolynomialOracle::new(u), &chain, p, &grid)?;
                match out {
                    DetailedOutcome::Ratio {
                        lhs,
                        rhs,
                        ratio,
                        running_max,
                    } => {
                        running = running_max;
                        table.push(vec![
                            case.to_string(),
                            num(lhs),
                            num(rhs),
                            num(ratio),
                            String::from(if ratio.is_finite() { "true" } else { "false" }),
                        ]);
                        if !ratio.is_finite() {
                            violations += 1;
                        }
                    }
                    DetailedOutcome::Degenerate { lhs, rhs } => {
                        table.push(vec![
                            case.to_string(),
                            num(lhs),
                            num(rhs),
                            "degenerate".to_string(),
                            "false".to_string(),
                        ]);
                        violations += 1;
                    }
                }
            }
            println!(
                "detailed sweep: {cases} cases, empirical A {} ({} degenerate/violating)",
                num(running),
                violations
            );
        }
        "standard" => {
            let m = check_order(resolve(args.m, file.m, 1))?;
            // u = (Π x_j(1−x_j))^m · q vanishes to order m on the boundary
            let mut bubble = Polynomial::constant(dimension, 1.0);
            for axis in 0..dimension {
                let x = Polynomial::variable(dimension, axis)?;
                let one_minus = Polynomial::constant(dimension, 1.0).sub(&x)?;
                bubble = bubble.mul(&x.mul(&one_minus)?)?;
            }
            let bubble = bubble.pow(m);
            let mut worst = 0.0_f64;
            for case in 0..cases {
                let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(case as u64));
                let q = random_polynomial(&mut rng, dimension, 3, 1.0);
                let u = bubble.mul(&q)?;
                let out = check_standard(&PolynomialOracle::new(u), m, p, &grid)?;
                match out.ratio {
                    Some(ratio) => {
                        worst = worst.max(ratio);
                        table.push(vec![
                            case.to_string(),
                            num(out.lhs),
                            num(out.rhs),
                            num(ratio),
                            "true".to_string(),
                        ]);
                    }
                    None => {
                        table.push(vec![
                            case.to_string(),
                            num(out.lhs),
                            num(out.rhs),
                            "degenerate".to_string(),
                            "false".to_string(),
                        ]);
                        violations += 1;
                    }
                }
            }
            println!(
                "standard sweep: {cases} cases, running A {} ({} degenerate)",
                num(worst),
                violations
            );
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown statement '{other}' (expected order-one, detailed or standard)"
            )))
        }
    }

    write_report(args.common.out.as_deref(), &table.render(format))?;
    if violations > 0 {
        return Err(CliError::Numerical(format!(
            "{violations} case(s) violated or degenerate"
        )));
    }
    Ok(())
}

fn push_inequality_row(table: &mut Table, case: usize, lhs: f64, rhs: f64, holds: bool) {
    let ratio = if rhs > 0.0 { lhs / rhs } else { f64::NAN };
    table.push(vec![
        case.to_string(),
        num(lhs),
        num(rhs),
        if ratio.is_finite() {
            num(ratio)
        } else {
            "degenerate".to_string()
        },
        holds.to_string(),
    ]);
}

pub fn run_mollify_demo(args: MollifyDemoArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let format = resolve_format(&args.common.format, &file.format)?;
    let function = resolve(args.function, file.function, "kink".to_string());
    let dimension = check_dimension(resolve_required(args.common.n, file.n, "n")?)?;
    let m = check_order(resolve(args.m, file.m, 1))?;
    let steps = resolve_required(args.steps, file.steps, "steps")?;
    let kernel_s = resolve(
        args.kernel_s,
        file.kernel_s,
        m * dimension as u32 - m + 1,
    );
    let target = resolve(args.target_order, file.target_order, m * dimension as u32);
    let quad = resolve(args.quad, file.quad, 24);
    let grid_nodes = resolve(args.grid, file.grid, default_grid_nodes(dimension));
    if steps.is_empty() {
        return Err(CliError::Usage("--steps needs at least one entry".into()));
    }

    let grid = GridSpec::new(grid_nodes)?;
    let oracle = builtin(&function, dimension)?;
    let kernel = BumpKernel::new(kernel_s, dimension)?;

    let mut table = Table::new(vec!["step", "wm_inf_error"]);
    for &step in &steps {
        let cfg = MollifierConfig::new(step)?.with_quad_nodes(quad)?;
        let v = smooth(oracle.clone(), &kernel, &cfg, target, m)?;
        let err = wm_inf_distance(oracle.as_ref(), &v, m, &grid)?;
        println!("step {step}: W^{{{m},inf}} grid error {}", num(err));
        table.push(vec![step.to_string(), num(err)]);
    }

    write_report(args.common.out.as_deref(), &table.render(format))?;
    Ok(())
}
