use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wildiag::dsl::{parse_modified, parse_scalar, Diagnostic};
use wildiag::{dot, json, report, suites};
use wildiag_core::{
    apply_sl2, dimension, enumerate_readings, factor_sl2, fourier_formal, fourier_rank,
    full_diagram, MarkingStrategy, ModifiedFormalData, SL2Matrix,
};

#[derive(Parser)]
#[command(name = "wildiag", version, about = "Diagrams of formal data on the Riemann sphere")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full diagram, Cartan matrix, dimension vector and dimension.
    Diagram {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Just 2 - (d, d).
    Dim { file: PathBuf },
    /// Formal Fourier transform.
    Fourier {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Apply an SL2 matrix given as a,b,c,d.
    Sl2 {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Fundamental representations.
    Readings {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Randomized property suites.
    Check {
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Diagnostics(String),
    Transform(String),
}

fn show(path: &Path, diags: &[Diagnostic]) -> Failure {
    let lines: Vec<String> = diags
        .iter()
        .map(|d| format!("{}:{}", path.display(), d))
        .collect();
    Failure::Diagnostics(lines.join("\n"))
}

fn load(path: &Path) -> Result<ModifiedFormalData, Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::Diagnostics(format!("{}: {}", path.display(), e)))?;
    parse_modified(&src).map_err(|d| show(path, &d))
}

fn transform_err(e: wildiag_core::Error) -> Failure {
    Failure::Transform(e.to_string())
}

fn parse_matrix(s: &str) -> Result<SL2Matrix, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Failure::Diagnostics(format!("--matrix wants a,b,c,d, got `{}`", s)));
    }
    let mut v = Vec::new();
    for p in parts {
        let c = parse_scalar(p.trim())
            .map_err(|d| Failure::Diagnostics(format!("--matrix: {}", d.message)))?;
        v.push(c);
    }
    let d = v.pop().expect("four");
    let c = v.pop().expect("four");
    let b = v.pop().expect("four");
    let a = v.pop().expect("four");
    SL2Matrix::new(a, b, c, d).map_err(|e| Failure::Diagnostics(format!("--matrix: {}", e)))
}

fn run(cli: Cli) -> Result<String, Failure> {
    match cli.cmd {
        Cmd::Diagram { file, format } => {
            let m = load(&file)?;
            let d = full_diagram(&m, &MarkingStrategy::Default).map_err(transform_err)?;
            Ok(match format {
                Format::Text => report::diagram_text(&d),
                Format::Json => json::export_json(&d),
                Format::Dot => dot::export_dot(&d),
            })
        }
        Cmd::Dim { file } => {
            let m = load(&file)?;
            let d = full_diagram(&m, &MarkingStrategy::Default).map_err(transform_err)?;
            Ok(format!("{}\n", dimension(&d)))
        }
        Cmd::Fourier { file, format } => {
            let m = load(&file)?;
            let td = fourier_formal(&m).map_err(transform_err)?;
            Ok(match format {
                Format::Json => json::transform_json(&td, None),
                _ => format!(
                    "{}predicted rank: {}\n",
                    report::transform_text(&td),
                    fourier_rank(&m)
                ),
            })
        }
        Cmd::Sl2 {
            file,
            matrix,
            format,
        } => {
            let m = load(&file)?;
            let a = parse_matrix(&matrix)?;
            let ops: Vec<String> = factor_sl2(&a)
                .map_err(transform_err)?
                .iter()
                .map(|o| o.to_string())
                .collect();
            let td = apply_sl2(&m, &a).map_err(transform_err)?;
            Ok(match format {
                Format::Json => json::transform_json(&td, Some((&a, ops))),
                _ => format!(
                    "matrix: {}\nfactorization: {}\n{}",
                    a,
                    ops.join(" "),
                    report::transform_text(&td)
                ),
            })
        }
        Cmd::Readings { file, format } => {
            let m = load(&file)?;
            let rs = enumerate_readings(&m).map_err(transform_err)?;
            Ok(match format {
                Format::Json => json::readings_json(&rs),
                _ => report::readings_text(&rs),
            })
        }
        Cmd::Check { cases, seed } => {
            let mut out = String::new();
            let mut ok = true;
            for r in suites::run_all(cases, seed) {
                let status = if r.passed() { "ok" } else { "FAILED" };
                ok &= r.passed();
                out.push_str(&format!(
                    "{:<28} {} ({} cases, {} skipped)\n",
                    r.name, status, r.cases, r.skipped
                ));
                for f in &r.failures {
                    out.push_str(&format!("    {}\n", f));
                }
            }
            if ok {
                Ok(out)
            } else {
                Err(Failure::Transform(out))
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(s) => {
            print!("{}", s);
            ExitCode::SUCCESS
        }
        Err(Failure::Diagnostics(s)) => {
            eprintln!("{}", s);
            ExitCode::from(1)
        }
        Err(Failure::Transform(s)) => {
            eprintln!("{}", s);
            ExitCode::from(2)
        }
    }
}
