//! Command-line driver. Exit status: 0 pass, 1 failed check or bad input,
//! 2 refused for exceeding the operation budget.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qcss::algebra::{lemma_suite, lemma_suite_cost, CheckStatus};
use qcss::constructions::{Family, QcssDescriptor};
use qcss::error::Error;
use qcss::gf::{FieldDescription, FieldSpec};
use qcss::report;
use qcss::verifier::{self, Mode, VerifyOptions, DEFAULT_OP_BUDGET};

#[derive(Parser, Debug)]
#[command(
    name = "qcss",
    version,
    about = "Quasi-complementary sequence sets over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the field GF(p^n): modulus, primitive element.
    Field {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Print a family's parameters, or one of its matrices with --index.
    Build {
        #[command(flatten)]
        family: FamilyArgs,
        /// Matrix index in [0, M).
        #[arg(long)]
        index: Option<u64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Check a family's correlation magnitudes against its claimed tolerance.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate the lower bound theta_opt and the tightness factor.
    Bound {
        /// Take (M, K, N) and theta from a family instead.
        #[arg(long)]
        family: Option<String>,
        #[arg(short = 'p')]
        p: Option<u32>,
        #[arg(short = 'n')]
        n: Option<u32>,
        #[arg(long)]
        k_exp: Option<u32>,
        /// Number of matrices M.
        #[arg(long = "set-size", short = 'M')]
        set_size: Option<u64>,
        /// Rows per matrix K.
        #[arg(long = "flock-size", short = 'K')]
        flock_size: Option<u64>,
        /// Sequence period N.
        #[arg(long, short = 'N')]
        length: Option<u64>,
        /// Tolerance to compare with the bound.
        #[arg(long)]
        theta: Option<f64>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the exhaustive character-sum and root-count self-tests.
    Lemmas {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = DEFAULT_OP_BUDGET)]
        op_budget: u128,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Correlation magnitude histograms and per-shift profiles.
    Hist {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = Which::Auto)]
        which: Which,
        /// First matrix for --which pair.
        #[arg(long, default_value_t = 0)]
        m1: u64,
        /// Second matrix for --which pair (defaults to m1).
        #[arg(long)]
        m2: Option<u64>,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Characteristic.
    #[arg(short = 'p', required_unless_present = "field_file")]
    p: Option<u32>,
    /// Extension degree.
    #[arg(short = 'n', required_unless_present = "field_file")]
    n: Option<u32>,
    /// JSON field description {p, n, modulus, alpha} to use instead.
    #[arg(long)]
    field_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// quad-odd, quad-char2, quadrinomial, cubic-odd or gauss.
    #[arg(long)]
    family: String,
    #[command(flatten)]
    field: FieldArgs,
    /// Frobenius exponent k of the quadrinomial family (default 1).
    #[arg(long)]
    k_exp: Option<u32>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Query count in sampled mode (default 10000).
    #[arg(long)]
    samples: Option<u64>,
    /// Refuse exhaustive runs needing more than M^2 K N^2 operations.
    #[arg(long, default_value_t = DEFAULT_OP_BUDGET)]
    op_budget: u128,
    /// Worker threads.
    #[arg(long, env = "QCSS_THREADS")]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct OutArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Auto,
    Cross,
    Pair,
}

const DEFAULT_SAMPLES: u64 = 10_000;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::BudgetExceeded { .. }) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn load_field(args: &FieldArgs) -> anyhow::Result<Arc<FieldSpec>> {
    let fs = match &args.field_file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let desc: FieldDescription =
                serde_json::from_str(&text).map_err(|e| Error::FieldFile(e.to_string()))?;
            for (flag, given, actual) in [("-p", args.p, desc.p), ("-n", args.n, desc.n)] {
                if given.is_some_and(|g| g != actual) {
                    bail!("{flag} disagrees with the field file");
                }
            }
            FieldSpec::from_description(&desc)?
        }
        None => FieldSpec::new(
            args.p.expect("clap enforces -p"),
            args.n.expect("clap enforces -n"),
        )?,
    };
    Ok(Arc::new(fs))
}

fn load_family(args: &FamilyArgs) -> anyhow::Result<QcssDescriptor> {
    let family: Family = args.family.parse()?;
    let field = load_field(&args.field)?;
    Ok(QcssDescriptor::new(family, field, args.k_exp)?)
}

fn verify_options(run: &RunArgs) -> anyhow::Result<VerifyOptions> {
    let mode = match run.mode {
        ModeArg::Exhaustive => {
            if run.samples.is_some() {
                bail!("--samples only applies with --mode sampled");
            }
            Mode::Exhaustive
        }
        ModeArg::Sampled => Mode::Sampled {
            seed: run.seed,
            count: run.samples.unwrap_or(DEFAULT_SAMPLES),
        },
    };
    Ok(VerifyOptions {
        mode,
        op_budget: run.op_budget,
        threads: run.threads,
        subset: None,
    })
}

fn emit(out: &OutArgs, text: &str) -> anyhow::Result<()> {
    match &out.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn format_or(out: &OutArgs, default: Format, allowed: &[Format]) -> anyhow::Result<Format> {
    let f = out.format.unwrap_or(default);
    if !allowed.contains(&f) {
        bail!("format {f:?} is not available for this command");
    }
    Ok(f)
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Field { field, out } => {
            let fs = load_field(&field)?;
            let text = match format_or(&out, Format::Json, &[Format::Json, Format::Text])? {
                Format::Text => report::field_text(&fs),
                _ => report::to_json(&report::FieldDump::new(&fs)),
            };
            emit(&out, &text)?;
            Ok(true)
        }
        Command::Build { family, index, out } => {
            let d = load_family(&family)?;
            let f = format_or(&out, Format::Json, &[Format::Json, Format::Text])?;
            let text = match (index, f) {
                (None, Format::Text) => {
                    let dd = report::DescriptorDump::new(&d);
                    format!(
                        "{} over GF({}^{}): M = {}, K = {}, N = {}, theta = {}, alphabet {}\n",
                        dd.family,
                        dd.p,
                        dd.n,
                        dd.set_size,
                        dd.flock_size,
                        dd.length,
                        dd.theta_claimed,
                        dd.alphabet_size
                    )
                }
                (None, _) => report::to_json(&report::DescriptorDump::new(&d)),
                (Some(m), Format::Text) => {
                    format!(
                        "# {}\n{}",
                        report::coefficient_text(&d, m)?,
                        d.render_text(m)?
                    )
                }
                (Some(m), _) => report::to_json(&d.matrix_json(m)?),
            };
            emit(&out, &text)?;
            Ok(true)
        }
        Command::Verify { family, run, out } => {
            let d = load_family(&family)?;
            let opts = verify_options(&run)?;
            let f = format_or(
                &out,
                Format::Json,
                &[Format::Json, Format::Csv, Format::Text],
            )?;
            let r = verifier::verify(&d, &opts)?;
            let text = match f {
                Format::Csv => r.histogram_csv(),
                Format::Text => report::report_text(&r),
                _ => report::to_json(&r),
            };
            emit(&out, &text)?;
            Ok(r.passes())
        }
        Command::Bound {
            family,
            p,
            n,
            k_exp,
            set_size,
            flock_size,
            length,
            theta,
            out,
        } => {
            let (m, k, len, theta) = match family {
                Some(name) => {
                    let (Some(p), Some(n)) = (p, n) else {
                        bail!("--family needs -p and -n");
                    };
                    let d =
                        QcssDescriptor::new(name.parse()?, Arc::new(FieldSpec::new(p, n)?), k_exp)?;
                    (
                        set_size.unwrap_or(d.set_size()),
                        flock_size.unwrap_or(d.flock_size() as u64),
                        length.unwrap_or(d.length() as u64),
                        Some(theta.unwrap_or(d.theta_claimed() as f64)),
                    )
                }
                None => {
                    let (Some(m), Some(k), Some(len)) = (set_size, flock_size, length) else {
                        bail!("give --family with -p/-n, or all of -M, -K, -N");
                    };
                    (m, k, len, theta)
                }
            };
            let theta_opt = verifier::welch_bound(m, k, len)?;
            let summary = BoundSummary {
                m,
                k,
                n: len,
                theta_opt: verifier::round_sig(theta_opt, 9),
                theta,
                rho: theta
                    .map(|t| verifier::round_sig(verifier::rho(t, theta_opt), 9))
                    .filter(|r| r.is_finite()),
                optimality_class: theta.map(|t| verifier::classify(verifier::rho(t, theta_opt))),
            };
            let text = match format_or(&out, Format::Json, &[Format::Json, Format::Text])? {
                Format::Text => {
                    let mut s = format!("theta_opt {}\n", report::format_number(theta_opt, false));
                    if let (Some(t), Some(c)) = (theta, summary.optimality_class) {
                        let rho = summary
                            .rho
                            .map(|r| report::format_number(r, false))
                            .unwrap_or_else(|| "inf".into());
                        s.push_str(&format!(
                            "theta {} rho {rho} ({c})\n",
                            report::format_number(t, false)
                        ));
                    }
                    s
                }
                _ => report::to_json(&summary),
            };
            emit(&out, &text)?;
            Ok(true)
        }
        Command::Lemmas {
            field,
            op_budget,
            out,
        } => {
            let fs = load_field(&field)?;
            let required = lemma_suite_cost(&fs);
            if required > op_budget {
                return Err(Error::BudgetExceeded {
                    required,
                    budget: op_budget,
                }
                .into());
            }
            let checks = lemma_suite(&fs)?;
            let ok = checks.iter().all(|c| c.status != CheckStatus::Fail);
            let text = match format_or(&out, Format::Json, &[Format::Json, Format::Text])? {
                Format::Text => checks
                    .iter()
                    .map(|c| {
                        format!(
                            "{:<16} {:<8} {}\n",
                            c.name,
                            format!("{:?}", c.status).to_lowercase(),
                            c.detail
                        )
                    })
                    .collect(),
                _ => report::to_json(&LemmaSummary {
                    p: fs.p(),
                    n: fs.n(),
                    passed: ok,
                    checks: &checks,
                }),
            };
            emit(&out, &text)?;
            Ok(ok)
        }
        Command::Hist {
            family,
            which,
            m1,
            m2,
            run,
            out,
        } => {
            let d = load_family(&family)?;
            let f = format_or(&out, Format::Csv, &[Format::Csv, Format::Svg])?;
            let title_base = format!("{} GF({}^{})", d.family(), d.field().p(), d.field().n());
            let text = match which {
                Which::Pair => {
                    let m2 = m2.unwrap_or(m1);
                    let profile = verifier::pair_profile(&d, m1, m2)?;
                    match f {
                        Format::Svg => {
                            let kind = if m1 == m2 {
                                "autocorrelation"
                            } else {
                                "cross-correlation"
                            };
                            report::svg_bar_chart(
                                &format!("{title_base}: {kind} magnitudes of C{m1}, C{m2}"),
                                "tau",
                                "|R(tau)|",
                                &report::pair_bars(&profile, m1 == m2),
                            )
                        }
                        _ => report::pair_csv(&profile),
                    }
                }
                Which::Auto | Which::Cross => {
                    if m2.is_some() {
                        bail!("--m2 only applies with --which pair");
                    }
                    let r = verifier::verify(&d, &verify_options(&run)?)?;
                    let (hist, kind) = if which == Which::Auto {
                        (&r.histogram_auto, "autocorrelation")
                    } else {
                        (&r.histogram_cross, "cross-correlation")
                    };
                    match f {
                        Format::Svg => report::svg_bar_chart(
                            &format!("{title_base}: nontrivial {kind} magnitudes"),
                            "magnitude",
                            "count",
                            &report::histogram_bars(hist),
                        ),
                        _ => report::histogram_csv(hist),
                    }
                }
            };
            emit(&out, &text)?;
            Ok(true)
        }
    }
}

#[derive(serde::Serialize)]
struct BoundSummary {
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "K")]
    k: u64,
    #[serde(rename = "N")]
    n: u64,
    theta_opt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    optimality_class: Option<qcss::constructions::OptimalityClass>,
}

#[derive(serde::Serialize)]
struct LemmaSummary<'a> {
    p: u32,
    n: u32,
    passed: bool,
    checks: &'a [qcss::algebra::LemmaCheck],
}
