use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pi1_core::field::Field;
use pi1_core::leibniz::{
    is_homogeneous, is_p_power, leibniz_presentation, lower_letters_only, minimal_curve,
    minimality_holds,
};
use pi1_core::newman::h_a_presentation;
use pi1_core::pipeline::{compute_pi1, parse_spec, render, Format, PipelineError};
use pi1_core::selfcheck::self_check;
use pi1_core::witt::{witt_add, witt_addition_polys, WittVector};

const USAGE: u8 = 1;
const INPUT: u8 = 2;
const INTERNAL: u8 = 3;

/// Fundamental group schemes of pinched varieties.
#[derive(Parser)]
#[command(name = "pi1", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the free-product expression for a pinching spec.
    Compute {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print a minimal curve E_1..E_N in the Leibniz Hopf algebra.
    MinimalCurve {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        upto: usize,
    },
    /// Print Witt addition polynomials, optionally adding two vectors.
    Witt {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        length: usize,
        /// Two comma-separated vectors, e.g. `--add 1,0 1,0`.
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        add: Option<Vec<String>>,
    },
    /// Print the Hopf algebra H_A of one component as JSON.
    Presentation {
        file: PathBuf,
        /// Branch and component index, 0-based, e.g. `0,1`.
        #[arg(long)]
        component: String,
    },
    /// Run the invariant self-check.
    Check,
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

fn pipeline_failure(e: PipelineError) -> Failure {
    let code = match e {
        PipelineError::Parse { .. } | PipelineError::Validation { .. } => INPUT,
        PipelineError::Newman(_) => INTERNAL,
    };
    fail(code, e.to_string())
}

fn read_spec(file: &PathBuf) -> Result<pi1_core::pipeline::PinchingSpec, Failure> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| fail(INPUT, format!("{}: {e}", file.display())))?;
    let spec = parse_spec(&text).map_err(pipeline_failure)?;
    for w in spec.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(spec)
}

fn prime_field(p: u64) -> Result<Field, Failure> {
    Field::prime(p).map_err(|e| fail(USAGE, e.to_string()))
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Compute { file, json } => {
            let spec = read_spec(&file)?;
            let expr = compute_pi1(&spec).map_err(pipeline_failure)?;
            Ok(render(
                &expr,
                if json { Format::Json } else { Format::Text },
            ))
        }
        Command::MinimalCurve { p, upto } => {
            let field = prime_field(p)?;
            if upto == 0 {
                return Err(fail(USAGE, "--upto must be positive"));
            }
            let curve =
                minimal_curve(p, upto, &field).map_err(|e| fail(INTERNAL, e.to_string()))?;
            let pres = leibniz_presentation(upto, &field);
            if let Some(j) = curve.first_violation(&pres) {
                return Err(fail(INTERNAL, format!("curve identity fails at E{j}")));
            }
            let mut lines = Vec::new();
            for i in 1..=upto {
                let e = curve.get(i);
                let ok = is_homogeneous(&e, i)
                    && minimality_holds(&pres, &curve, p, i)
                    && (!is_p_power(p, i) || lower_letters_only(&curve, i, &field));
                if !ok {
                    return Err(fail(
                        INTERNAL,
                        format!("E{i} violates the minimality conditions"),
                    ));
                }
                lines.push(format!("E{i} = {}", pres.fmt_poly(&e)));
            }
            Ok(lines.join("\n"))
        }
        Command::Witt { p, length, add } => {
            let field = prime_field(p)?;
            if length == 0 {
                return Err(fail(USAGE, "--length must be positive"));
            }
            let polys =
                witt_addition_polys(p, length).map_err(|e| fail(INTERNAL, e.to_string()))?;
            let mut lines: Vec<String> = polys
                .iter()
                .enumerate()
                .map(|(i, s)| format!("S{i} = {s}"))
                .collect();
            if let Some(pair) = add {
                let x = parse_vector(&pair[0], length, &field)?;
                let y = parse_vector(&pair[1], length, &field)?;
                let s = witt_add(&x, &y, &field).map_err(|e| fail(INTERNAL, e.to_string()))?;
                lines.push(format!(
                    "{} + {} = {}",
                    show(&x, &field),
                    show(&y, &field),
                    show(&s, &field)
                ));
            }
            Ok(lines.join("\n"))
        }
        Command::Presentation { file, component } => {
            let spec = read_spec(&file)?;
            let (b, c) = parse_index(&component)?;
            let a = spec
                .algebras
                .get(b)
                .and_then(|branch| branch.get(c))
                .ok_or_else(|| fail(INPUT, format!("no component {b},{c} in the spec")))?;
            let h = h_a_presentation(a).map_err(|e| fail(INPUT, e.to_string()))?;
            Ok(h.to_json())
        }
        Command::Check => {
            let report = self_check();
            let text = report.to_string();
            if report.all_passed() {
                Ok(text.trim_end().to_string())
            } else {
                print!("{text}");
                Err(fail(INTERNAL, "self-check failed"))
            }
        }
    }
}

fn parse_index(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || fail(USAGE, format!("expected `branch,component`, got `{s}`"));
    let (b, c) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        b.trim().parse().map_err(|_| bad())?,
        c.trim().parse().map_err(|_| bad())?,
    ))
}

fn parse_vector(s: &str, length: usize, field: &Field) -> Result<WittVector, Failure> {
    let comps = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map(|v| field.from_int(v)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| fail(USAGE, format!("`{s}` is not a list of integers")))?;
    if comps.len() != length {
        return Err(fail(
            USAGE,
            format!("`{s}` has {} components, expected {length}", comps.len()),
        ));
    }
    Ok(WittVector::new(field.characteristic(), comps))
}

fn show(v: &WittVector, field: &Field) -> String {
    let parts: Vec<String> = v.components.iter().map(|c| field.fmt_elem(*c)).collect();
    format!("({})", parts.join(","))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
