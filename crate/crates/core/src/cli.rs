//! Command-line front end. Exit codes: 0 success, 1 a check failed,
//! 2 bad usage or bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cdf::Cdf;
use crate::copula::Dependence;
use crate::dist_file::DistFile;
use crate::measure::{measure_level_set, measure_set};
use crate::realset::RealSet;
use crate::stochastic::{
    sample_inverse, transform_cdf_exact, transform_cdf_monte_carlo, SeededStream,
    TransformCdfBreakdown,
};
use crate::transform::{invert_transform, null_set, transform, TransformParam};
use crate::verify::{analytic_checks, copula_checks, stochastic_checks, InputDigest, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dtransform",
    version,
    about = "Exact quantiles, level sets, transforms and copulas of step-linear distribution functions"
)]
pub struct Cli {
    /// Distribution file (JSON); repeat for several.
    #[arg(long = "dist", global = true)]
    pub dist: Vec<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Sample size for sampled checks.
    #[arg(long, global = true, default_value_t = 100_000)]
    pub n: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Analytic,
    Stochastic,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DependenceArg {
    Independent,
    Comonotone,
    Countermonotone,
}

impl From<DependenceArg> for Dependence {
    fn from(d: DependenceArg) -> Self {
        match d {
            DependenceArg::Independent => Dependence::Independent,
            DependenceArg::Comonotone => Dependence::Comonotone,
            DependenceArg::Countermonotone => Dependence::Countermonotone,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// F(x), F(x-) and the jump at x.
    Eval {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
    },
    /// Left and right quantiles and the level set at alpha.
    Quantile {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// F(x-) + lambda * jump(x), and its left quantile.
    Transform {
        #[arg(long, allow_negative_numbers = true)]
        x: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
    },
    /// The level set {F = alpha}; with --lambda also the pieces of {F_lambda <= alpha}.
    Levelset {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
    },
    /// Lebesgue-Stieltjes measure of a set such as "(-inf, 0) u [1, +inf)", or of {F = alpha}.
    Measure {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "alpha")]
        set: Option<String>,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "set")]
        alpha: Option<f64>,
    },
    /// Run the check suites on every --dist.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Draw --n values by inverse-transform sampling.
    Sample {
        #[arg(long, default_value_t = 0)]
        stream: u64,
    },
    /// Exact law of F_V(X) at alpha; F is the first --dist, X follows the second (default: F).
    TransformCdf {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
    },
    /// Sample with the given dependence, extract the copula and check Sklar's identity.
    CopulaCheck {
        #[arg(long, value_enum, default_value_t = DependenceArg::Independent)]
        dependence: DependenceArg,
        /// Comma-separated grid used on every coordinate (default: knots and knots +/- 0.25).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Option<Vec<f64>>,
    },
}

struct Input {
    cdfs: Vec<(String, Cdf)>,
    digests: Vec<InputDigest>,
}

fn load(paths: &[PathBuf]) -> std::result::Result<Input, String> {
    let mut cdfs = Vec::new();
    let mut digests = Vec::new();
    for path in paths {
        let shown = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|e| format!("{shown}: cannot read: {e}"))?;
        let text =
            String::from_utf8(bytes.clone()).map_err(|e| format!("{shown}: not UTF-8: {e}"))?;
        let file = DistFile::from_json(&text).map_err(|e| format!("{shown}: {e}"))?;
        let cdf = file.to_cdf().map_err(|e| format!("{shown}: {e}"))?;
        let sha256 = Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        digests.push(InputDigest {
            path: shown.clone(),
            sha256,
        });
        cdfs.push((subject_name(path), cdf));
    }
    Ok(Input { cdfs, digests })
}

fn subject_name(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn need(input: &Input, at_least: usize) -> std::result::Result<(), String> {
    if input.cdfs.len() < at_least {
        return Err(format!(
            "expected at least {at_least} --dist file(s), got {}",
            input.cdfs.len()
        ));
    }
    Ok(())
}

/// Key/value output shared by the single-shot commands.
#[derive(Serialize)]
struct Fields(#[serde(with = "ordered")] Vec<(String, serde_json::Value)>);

mod ordered {
    use serde::ser::{SerializeMap, Serializer};

    pub fn serialize<S: Serializer>(
        v: &[(String, serde_json::Value)],
        s: S,
    ) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(v.len()))?;
        for (k, val) in v {
            map.serialize_entry(k, val)?;
        }
        map.end()
    }
}

impl Fields {
    fn new() -> Self {
        Self(Vec::new())
    }

    fn put(mut self, key: &str, value: impl Serialize) -> Self {
        self.0.push((
            key.into(),
            serde_json::to_value(value).expect("plain data always serializes"),
        ));
        self
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                serde_json::to_string_pretty(self).expect("plain data always serializes") + "\n"
            }
            Format::Table => {
                let width = self.0.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                self.0
                    .iter()
                    .map(|(k, v)| {
                        let shown = match v {
                            serde_json::Value::String(s) => s.clone(),
                            other => other.to_string(),
                        };
                        format!("{k:<width$}  {shown}\n")
                    })
                    .collect()
            }
        }
    }
}

enum Outcome {
    Text(String),
    Report(RunReport),
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    let echo = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let started = Instant::now();
    match execute(&cli, echo) {
        Ok(Outcome::Text(text)) => {
            let _ = write!(out, "{text}");
            EXIT_OK
        }
        Ok(Outcome::Report(report)) => {
            let body = match cli.format {
                Format::Json => report.to_json() + "\n",
                Format::Table => report.to_table(),
            };
            let _ = write!(out, "{body}");
            let _ = writeln!(err, "elapsed: {:.3} s", started.elapsed().as_secs_f64());
            if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(message) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_INPUT
        }
    }
}

fn execute(cli: &Cli, echo: String) -> std::result::Result<Outcome, String> {
    let input = load(&cli.dist)?;
    let text = |fields: Fields| Ok(Outcome::Text(fields.render(cli.format)));
    let e = |e: crate::error::Error| e.to_string();
    match &cli.command {
        Command::Eval { x } => {
            need(&input, 1)?;
            let f = &input.cdfs[0].1;
            text(
                Fields::new()
                    .put("x", x)
                    .put("F(x)", f.eval(*x))
                    .put("F(x-)", f.eval_left(*x))
                    .put("jump", f.jump(*x)),
            )
        }
        Command::Quantile { alpha } => {
            need(&input, 1)?;
            let f = &input.cdfs[0].1;
            let pair = f.quantile_pair(*alpha).map_err(e)?;
            let shape = f.level_set_shape(*alpha).map_err(e)?;
            text(
                Fields::new()
                    .put("alpha", alpha)
                    .put("xi", pair.xi)
                    .put("eta", pair.eta)
                    .put("level_set", shape.tag())
                    .put("set", shape.to_set().to_string()),
            )
        }
        Command::Transform { x, lambda } => {
            need(&input, 1)?;
            let f = &input.cdfs[0].1;
            let param = TransformParam::new(*lambda).map_err(e)?;
            let value = transform(f, *x, param);
            let mut fields = Fields::new()
                .put("x", x)
                .put("lambda", lambda)
                .put("value", value);
            if *lambda > 0.0 {
                fields = fields
                    .put(
                        "left_quantile_of_value",
                        invert_transform(f, *x, *lambda).ok(),
                    )
                    .put("in_null_set", null_set(f, *lambda).map_err(e)?.contains(*x));
            }
            text(fields)
        }
        Command::Levelset { alpha, lambda } => {
            need(&input, 1)?;
            let f = &input.cdfs[0].1;
            let shape = f.level_set_shape(*alpha).map_err(e)?;
            let mut fields = Fields::new()
                .put("alpha", alpha)
                .put("level_set", shape.tag())
                .put("set", shape.to_set().to_string())
                .put("measure", measure_level_set(f, *alpha).map_err(e)?.value());
            if let Some(l) = lambda {
                let d = f.a_decomposition(*l, *alpha).map_err(e)?;
                fields = fields
                    .put("lambda", l)
                    .put("A+", d.plus.to_string())
                    .put("A~", d.tilde.to_string())
                    .put("A-", d.minus.to_string())
                    .put("union", d.union().to_string());
            }
            text(fields)
        }
        Command::Measure { set, alpha } => {
            need(&input, 1)?;
            let f = &input.cdfs[0].1;
            match (set, alpha) {
                (Some(s), _) => {
                    let parsed: RealSet = s.parse().map_err(e)?;
                    let m = measure_set(f, &parsed).map_err(e)?.value();
                    text(
                        Fields::new()
                            .put("set", parsed.to_string())
                            .put("measure", m),
                    )
                }
                (None, Some(a)) => {
                    let level = f.level_set(*a).map_err(e)?;
                    let m = measure_level_set(f, *a).map_err(e)?.value();
                    text(
                        Fields::new()
                            .put("alpha", a)
                            .put("set", level.to_string())
                            .put("measure", m),
                    )
                }
                (None, None) => Err("either --set or --alpha is required".into()),
            }
        }
        Command::Verify { suite } => {
            need(&input, 1)?;
            let mut checks = Vec::new();
            let mut notes = Vec::new();
            for (name, f) in &input.cdfs {
                if matches!(suite, Suite::Analytic | Suite::All) {
                    checks.extend(analytic_checks(name, f).map_err(e)?);
                }
                if matches!(suite, Suite::Stochastic | Suite::All) {
                    let (c, n) = stochastic_checks(name, f, cli.seed, cli.n).map_err(e)?;
                    checks.extend(c);
                    notes.extend(n);
                }
            }
            if matches!(suite, Suite::Stochastic | Suite::All) {
                let marginals: Vec<Cdf> = if input.cdfs.len() >= 2 {
                    input.cdfs.iter().map(|(_, f)| f.clone()).collect()
                } else {
                    vec![input.cdfs[0].1.clone(), input.cdfs[0].1.clone()]
                };
                let subject = format!(
                    "copula of {}",
                    input
                        .cdfs
                        .iter()
                        .map(|(n, _)| n.as_str())
                        .collect::<Vec<_>>()
                        .join(" x ")
                );
                checks.extend(
                    copula_checks(
                        &subject,
                        &marginals,
                        Dependence::Independent,
                        cli.seed,
                        cli.n,
                        None,
                    )
                    .map_err(e)?,
                );
            }
            Ok(Outcome::Report(RunReport {
                command: echo,
                inputs: input.digests,
                seed: cli.seed,
                n: cli.n,
                checks,
                notes,
            }))
        }
        Command::Sample { stream } => {
            need(&input, 1)?;
            let s = sample_inverse(
                &input.cdfs[0].1,
                SeededStream::new(cli.seed, *stream),
                cli.n,
            );
            Ok(Outcome::Text(match cli.format {
                Format::Json => {
                    serde_json::to_string(&s).expect("plain data always serializes") + "\n"
                }
                Format::Table => s.values.iter().map(|v| format!("{v}\n")).collect(),
            }))
        }
        Command::TransformCdf { alpha } => {
            need(&input, 1)?;
            let f = &input.cdfs[0].1;
            let law = input.cdfs.get(1).map_or(f, |(_, g)| g);
            let b: TransformCdfBreakdown = transform_cdf_exact(f, law, *alpha).map_err(e)?;
            let mc =
                transform_cdf_monte_carlo(f, law, *alpha, SeededStream::new(cli.seed, 0), cli.n)
                    .map_err(e)?;
            text(
                Fields::new()
                    .put("alpha", b.alpha)
                    .put("xi", b.xi)
                    .put("beta", b.beta)
                    .put("q", b.q)
                    .put("c_beta", b.c_beta)
                    .put("term_flat", b.term_flat)
                    .put("term_atom", b.term_atom)
                    .put("term_left", b.term_left)
                    .put("total", b.total)
                    .put("monte_carlo", mc)
                    .put("seed", cli.seed)
                    .put("n", cli.n),
            )
        }
        Command::CopulaCheck { dependence, grid } => {
            need(&input, 2)?;
            let marginals: Vec<Cdf> = input.cdfs.iter().map(|(_, f)| f.clone()).collect();
            let subject = input
                .cdfs
                .iter()
                .map(|(n, _)| n.as_str())
                .collect::<Vec<_>>()
                .join(" x ");
            let checks = copula_checks(
                &subject,
                &marginals,
                (*dependence).into(),
                cli.seed,
                cli.n,
                grid.as_deref(),
            )
            .map_err(e)?;
            Ok(Outcome::Report(RunReport {
                command: echo,
                inputs: input.digests,
                seed: cli.seed,
                n: cli.n,
                checks,
                notes: Vec::new(),
            }))
        }
    }
}
