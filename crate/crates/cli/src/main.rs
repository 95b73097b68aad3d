//! `ttstar`: command-line front end for the tt* pipeline on `P¹`.
//!
//! Exit codes: 0 success, 1 verification failure or computational error,
//! 2 usage error.

mod commands;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use output::{CliError, Format};

#[derive(Parser, Debug)]
#[command(name = "ttstar", version, about = "Exact tt* geometry of the quantum cohomology of P¹")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Pretty)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    /// Shorthand for `--format csv`.
    #[arg(long, global = true)]
    csv: bool,
    /// Tolerance override `name=value` (repeatable).
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    tolerances: Vec<(String, f64)>,
    #[command(subcommand)]
    command: Command,
}

/// Truncation order; `TTSTAR_ORDER` overrides the default of 6.
#[derive(clap::Args, Debug, Clone, Copy)]
struct OrderArg {
    #[arg(long, env = "TTSTAR_ORDER", default_value_t = 6, allow_negative_numbers = true,
          value_parser = clap::value_parser!(u32).range(0..=40))]
    order: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    #[value(name = "BBtilde")]
    BBtilde,
    #[value(name = "S")]
    S,
    #[value(name = "Ctilde")]
    Ctilde,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Space {
    #[value(name = "Pn")]
    Pn,
    #[value(name = "P1xP1")]
    P1xP1,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Model {
    Diagonal,
    Rational,
    Gamma,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// J₀ and J₁ as truncated series.
    Jfun {
        #[command(flatten)]
        order: OrderArg,
    },
    /// Γ̂-structure checks: Mukai Gram matrix, Galois action, involutions.
    Gamma {
        /// Accepted for compatibility; the Gram matrix is always reported.
        #[arg(long)]
        gram: bool,
    },
    /// One of the Birkhoff matrices.
    Birkhoff {
        #[command(flatten)]
        order: OrderArg,
        #[arg(long, value_enum, default_value_t = Emit::BBtilde)]
        emit: Emit,
    },
    /// Coefficients F_n of h = Σ F_n(a)|q|^{2n} from the Birkhoff pipeline.
    ExpandH {
        #[command(flatten)]
        order: OrderArg,
    },
    /// Every tt* equation and compatibility; fails on a nonzero residual.
    CvCheck {
        #[command(flatten)]
        order: OrderArg,
    },
    /// F_n from the PDE recursion, with the rank of each linear system.
    Oracle {
        #[command(flatten)]
        order: OrderArg,
        /// Extra negative a-powers in the ansatz.
        #[arg(long, default_value_t = 0)]
        laurent_depth: u32,
    },
    /// Birkhoff pipeline against the PDE recursion.
    CrossCheck {
        #[command(flatten)]
        order: OrderArg,
    },
    /// Radial Painlevé III solution sampled at log-spaced |q|.
    Ode {
        #[arg(long, default_value_t = 1e-3)]
        qmin: f64,
        #[arg(long, default_value_t = 25.0)]
        qmax: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
    },
    /// Integral of the curvature of h⁻¹|dt|² over the q-plane.
    TotalCurvature,
    /// sl₂ triple, weight filtrations and the exponential lemma.
    Sl2Check {
        #[arg(long, value_enum, default_value_t = Space::Pn)]
        space: Space,
        /// n for Pn.
        #[arg(long, default_value_t = 6)]
        n: usize,
    },
    /// Rank of the transversality map for each t.
    Transversality {
        #[arg(long, value_enum, default_value_t = Space::Pn)]
        space: Space,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 1.0, 10.0])]
        t: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Model::All)]
        model: Model,
    },
    /// Compares expand-h against the bundled seven-term reference table.
    VerifyPaperTable,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or("expected name=value")?;
    let v: f64 = value.parse().map_err(|e| format!("{value}: {e}"))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(format!("tolerance {v} must be positive"));
    }
    Ok((name.to_string(), v))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let format = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        cli.format
    };
    let tol = commands::Tolerances::from_overrides(&cli.tolerances);
    let tol = match tol {
        Ok(t) => t,
        Err(e) => return report(e),
    };
    match commands::run(cli.command, format, &tol) {
        Ok(out) => {
            print!("{}", out.text);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(e.exit_code())
}
