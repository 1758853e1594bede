//! Command-line front end: one-form DSL, exact integrals, spectral-action
//! coefficients, the reference table, verification suites and the numeric
//! oracle.

use clap::{Parser as ClapParser, Subcommand, ValueEnum};
use num::BigRational;
use suq2_cli::parser::{self, FormFlavor, LoweredForm};
use suq2_cli::report::{OutputFormat, Report};
use std::process::ExitCode;
use std::str::FromStr;
use suq2::action::{self, CutoffMoments};
use suq2::hopf;
use suq2::oneform::{self, JKind, OneFormKind};
use suq2::oracle::{ExprFactor, NumOperator};
use suq2::suites;
use suq2::xalg::XElement;

#[derive(ClapParser)]
#[command(name = "suq2", version, about = "Noncommutative integrals and the spectral action on SU_q(2)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: OutputFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum KindArg {
    I,
    Ii,
    Iii,
    Iv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Pbw,
    Operators,
    Cocycle,
    Closedform,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Exact I (form) |D|^-power, optionally with an extra F inserted
    Integral {
        #[arg(long)]
        form: String,
        #[arg(long)]
        power: u8,
        /// Multiply the integrand by the sign operator F
        #[arg(long = "with-F", alias = "with-f")]
        with_f: bool,
        /// Also evaluate the result at a rational q
        #[arg(long)]
        q: Option<String>,
        /// Symbolic output only (default when --q is absent)
        #[arg(long)]
        symbolic: bool,
    },
    /// J-conjugated integrals reduced to plain ones
    IntegralJ {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        q: Option<String>,
    },
    /// Spectral-action coefficients for a one-form
    Action {
        #[arg(long)]
        form: String,
        #[arg(long = "with-J", alias = "with-j", conflicts_with = "no_j")]
        with_j: bool,
        #[arg(long = "no-J", alias = "no-j")]
        no_j: bool,
        /// Cutoff moments phi3,phi2,phi1,phi0 for a numeric total
        #[arg(long)]
        moments: Option<String>,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        q: Option<String>,
    },
    /// The reference table of noncommutative integrals
    Table1 {
        #[arg(long)]
        q: Option<String>,
    },
    /// Run a named verification suite (exit code 1 on any failure)
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value = "1/2")]
        q: String,
        #[arg(long = "max-2j", default_value_t = 40)]
        max_two_j: u32,
    },
    /// Numeric residue from truncated shell traces
    Oracle {
        #[arg(long)]
        form: String,
        #[arg(long)]
        power: u8,
        /// Power of the one-form in the integrand
        #[arg(long, default_value_t = 1)]
        degree: u8,
        #[arg(long)]
        q: String,
        #[arg(long = "max-2j", default_value_t = 40)]
        max_two_j: u32,
    },
}

fn parse_q(s: &str) -> Result<BigRational, String> {
    BigRational::from_str(s).map_err(|e| format!("bad rational '{s}': {e}"))
}

fn lower_form(src: &str) -> Result<LoweredForm, String> {
    let e = parser::parse(src).map_err(|e| e.to_string())?;
    parser::lower(&e).map_err(|e| e.to_string())
}

/// The operator of a lowered form in the shift algebra, honoring the flavor.
fn form_to_x(f: &LoweredForm) -> XElement {
    let kind = match f.flavor {
        FormFlavor::D => OneFormKind::DFlag,
        FormFlavor::Delta => OneFormKind::Delta,
    };
    oneform::to_x(&f.to_oneform(), kind)
}

fn run() -> Result<ExitCode, String> {
    let cli = Cli::parse();
    let mut report = Report::new(cli.format);
    let code = match cli.command {
        Command::Integral { form, power, with_f, q, symbolic } => {
            let lowered = lower_form(&form)?;
            let mut x = form_to_x(&lowered);
            if with_f {
                x = x.times_f();
            }
            let value = hopf::ncint(&x, power).map_err(|e| e.to_string())?;
            let q = if symbolic { None } else { q };
            let at = match &q {
                Some(s) => Some(parse_q(s)?),
                None => None,
            };
            report.query(format!(
                "integral form=({form}) power={power}{}",
                if with_f { " with-F" } else { "" }
            ));
            report.scalar("result", &value, at.as_ref())?;
            ExitCode::SUCCESS
        }
        Command::IntegralJ { left, right, kind, q } => {
            let a = lower_form(&left)?.to_oneform();
            let b = lower_form(&right)?.to_oneform();
            let kind = match kind {
                KindArg::I => JKind::I,
                KindArg::Ii => JKind::Ii,
                KindArg::Iii => JKind::Iii,
                KindArg::Iv => JKind::Iv,
            };
            let value = oneform::ncint_j(&a, &b, kind).map_err(|e| e.to_string())?;
            let at = match &q {
                Some(s) => Some(parse_q(s)?),
                None => None,
            };
            report.query(format!("integral-j left=({left}) right=({right}) kind={kind:?}"));
            report.scalar("result", &value, at.as_ref())?;
            ExitCode::SUCCESS
        }
        Command::Action { form, with_j, no_j, moments, lambda, q } => {
            let lowered = lower_form(&form)?;
            let a = lowered.to_oneform();
            let with_j = with_j || !no_j;
            let c = if with_j {
                action::coeffs_suq2_with_j(&a)
            } else {
                action::coeffs_suq2_no_j(&a)
            }
            .map_err(|e| e.to_string())?;
            let at = match &q {
                Some(s) => Some(parse_q(s)?),
                None => None,
            };
            report.query(format!(
                "action form=({form}) {}",
                if with_j { "with-J" } else { "no-J" }
            ));
            report.scalar("c3", &c.c3, at.as_ref())?;
            report.scalar("c2", &c.c2, at.as_ref())?;
            report.scalar("c1", &c.c1, at.as_ref())?;
            report.scalar("c0", &c.c0, at.as_ref())?;
            if let Some(spec) = moments {
                let parts: Vec<f64> = spec
                    .split(',')
                    .map(|p| p.trim().parse().map_err(|e| format!("bad moment '{p}': {e}")))
                    .collect::<Result<_, String>>()?;
                if parts.len() != 4 {
                    return Err("expected --moments phi3,phi2,phi1,phi0".into());
                }
                let m = CutoffMoments { phi3: parts[0], phi2: parts[1], phi1: parts[2], phi0: parts[3] };
                let lambda = lambda.ok_or("--moments requires --lambda")?;
                let q0 = q.as_deref().map(parse_q).transpose()?.ok_or("--moments requires --q")?;
                let qf = num::ToPrimitive::to_f64(&q0).ok_or("q out of range")?;
                let total = action::assemble(&m, lambda, &c, qf);
                report.number("action_value", total);
            }
            ExitCode::SUCCESS
        }
        Command::Table1 { q } => {
            let at = match &q {
                Some(s) => Some(parse_q(s)?),
                None => None,
            };
            let rows = action::reference_table().map_err(|e| e.to_string())?;
            report.query("table1".into());
            report.table(&rows, at.as_ref())?;
            ExitCode::SUCCESS
        }
        Command::Verify { suite, seed, q, max_two_j } => {
            let seed = std::env::var("QSU2_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
                .unwrap_or(seed);
            let q0 = parse_q(&q)?;
            let qf = num::ToPrimitive::to_f64(&q0).ok_or("q out of range")?;
            let results = match suite {
                SuiteArg::Pbw => suites::suite_pbw(seed),
                SuiteArg::Operators => suites::suite_operators(seed),
                SuiteArg::Cocycle => suites::suite_cocycle(seed),
                SuiteArg::Closedform => suites::suite_closedform(seed),
                SuiteArg::Oracle => suites::suite_oracle(seed, qf, max_two_j),
            };
            report.query(format!("verify suite={suite:?} seed={seed}"));
            report.checks(&results);
            if suites::all_passed(&results) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Oracle { form, power, degree, q, max_two_j } => {
            let q0 = parse_q(&q)?;
            let qf = num::ToPrimitive::to_f64(&q0).ok_or("q out of range")?;
            let lowered = lower_form(&form)?;
            let base = form_to_x(&lowered);
            let mut x = base.clone();
            for _ in 1..degree {
                x = x.mul(&base);
            }
            let expr = vec![ExprFactor::Op(NumOperator::from_x(&x, qf))];
            let traces =
                suq2::oracle::shell_traces(&expr, qf, max_two_j).map_err(|e| e.to_string())?;
            let fit = suq2::oracle::residues_fit(&traces).map_err(|e| e.to_string())?;
            let (value, uncertainty) = match power {
                3 => (fit.c2, fit.uncertainty[0]),
                2 => (fit.c1, fit.uncertainty[1]),
                _ => (fit.c0, fit.uncertainty[2]),
            };
            report.query(format!(
                "oracle form=({form}) degree={degree} power={power} q={q} max-2j={max_two_j}"
            ));
            report.number("value_re", value.re);
            report.number("value_im", value.im);
            report.number("uncertainty", uncertainty);
            report.flag("converged", fit.converged(1e-8));
            // exact counterpart for convenience when the degree is supported
            if degree == 1 && lowered.flavor == FormFlavor::Delta {
                let sym = hopf::ncint(&form_to_x(&lowered), power).map_err(|e| e.to_string())?;
                report.scalar("symbolic", &sym, Some(&q0))?;
            }
            ExitCode::SUCCESS
        }
    };
    report.emit(cli.out.as_deref()).map_err(|e| e.to_string())?;
    Ok(code)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
