use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};

use spinlab::harness::{run_suite, ArithmeticMode, RunConfig, Status};
use spinlab::normlab::{
    closed_form_norm, solve_uncurling, unital_norm, SolverConfig, UncurlingCandidate, DEFAULT_STEPS,
};
use spinlab::observer::{
    boost, quad_product_determinant, quad_product_wedge, BoostVelocity, ObserverFrame,
};
use spinlab::spinfactor::{Signature, SpinFactorElement};
use spinlab::Error;

#[derive(Parser)]
#[command(
    name = "spinlab",
    version,
    about = "Spin factor, unital norm and spacetime algebra checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the seeded property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value = "float")]
        mode: ArithmeticMode,
    },
    /// Integrate the unital norm from 1 to a point and compare with √Q.
    Norm {
        #[arg(long, value_parser = parse_list::<f64, 4>, allow_hyphen_values = true)]
        point: [f64; 4],
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
    },
    /// Evaluate the quad pseudoscalar product by both paths and after a boost.
    Quad {
        #[arg(long, value_parser = parse_list::<f64, 4>, allow_hyphen_values = true)]
        a: [f64; 4],
        #[arg(long, value_parser = parse_list::<f64, 4>, allow_hyphen_values = true)]
        b: [f64; 4],
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        v: f64,
    },
    /// Solve for the uncurling metric of a signature.
    Uncurl {
        #[arg(long, value_parser = parse_list::<usize, 2>, default_value = "3,0")]
        signature: [usize; 2],
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownSuite(_)
            | Error::InvalidConfig(_)
            | Error::InvalidVelocity(_)
            | Error::InvalidSignature(_)
    )
}

/// Parses exactly `N` comma-separated values.
fn parse_list<T: FromStr, const N: usize>(s: &str) -> Result<[T; N], String>
where
    T::Err: std::fmt::Display,
{
    let items = s
        .split(',')
        .map(|p| p.trim().parse::<T>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<T>, String>>()?;
    let n = items.len();
    items
        .try_into()
        .map_err(|_| format!("expected {N} comma-separated values, got {n}"))
}

fn run(command: Command) -> Result<bool, Error> {
    match command {
        Command::Verify {
            suite,
            seed,
            trials,
            tol,
            json,
            mode,
        } => {
            let cfg = RunConfig {
                suite,
                seed,
                trials,
                tol,
                json_path: json,
                mode,
            };
            let report = run_suite(&cfg)?;
            for case in &report.cases {
                let status = if case.status == Status::Pass {
                    "pass"
                } else {
                    "FAIL"
                };
                println!("{status:<4} {:<50} {:.3e}", case.name, case.max_residual);
            }
            let failed = report
                .cases
                .iter()
                .filter(|c| c.status == Status::Fail)
                .count();
            println!("{} cases, {} failed", report.cases.len(), failed);
            Ok(report.passed)
        }
        Command::Norm { point, steps } => {
            if steps == 0 {
                return Err(Error::InvalidConfig("steps must be at least 1".into()));
            }
            let s = SpinFactorElement::from_coords(Signature::euclidean3(), &point)?;
            let l = UncurlingCandidate::identity(Signature::euclidean3());
            let integrated = unital_norm(&s, &l, steps)?;
            let closed = closed_form_norm(&s)?;
            println!("integrated  {:.15}", integrated.value);
            println!("closed_form {:.15}", closed);
            println!("diff        {:.3e}", (integrated.value - closed).abs());
            Ok(true)
        }
        Command::Quad { a, b, v } => {
            let v = BoostVelocity::new(v)?;
            let frame = ObserverFrame::<f64>::standard();
            let (ma, mb) = (frame.vector(a), frame.vector(b));
            let wedge = quad_product_wedge(&ma, &mb, &frame)?;
            let det = quad_product_determinant(&a, &b);
            let boosted =
                quad_product_wedge(&boost(&ma, v, &frame)?, &boost(&mb, v, &frame)?, &frame)?;
            // adding 0.0 turns a signed zero into +0
            println!("wedge       {}", wedge + 0.0);
            println!("determinant {}", det + 0.0);
            println!("boosted     {}", boosted + 0.0);
            Ok(true)
        }
        Command::Uncurl { signature, samples } => {
            if samples == 0 {
                return Err(Error::InvalidConfig("samples must be at least 1".into()));
            }
            let sig = Signature::new(signature[0], signature[1])?;
            let cfg = SolverConfig {
                sample_count: samples,
                ..Default::default()
            };
            let sol = solve_uncurling(sig, &cfg)?;
            println!("curl_nullspace_dim  {}", sol.curl_nullspace_dim);
            println!("solution_family_dim {}", sol.solution_family_dim);
            println!("constraint_residual {:.3e}", sol.constraint_residual);
            println!("L =");
            let m = sol.metric.matrix();
            for r in 0..m.nrows() {
                let row: Vec<String> = (0..m.ncols())
                    .map(|c| format!("{:>12.9}", m[(r, c)]))
                    .collect();
                println!("  {}", row.join(" "));
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
