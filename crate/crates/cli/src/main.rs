//! `unispec`: exact Jordan-type distributions of random unipotent matrices
//! over finite fields, growth samplers targeting them, eigenvalue-arc
//! statistics of the action on projective lines, and the brute-force
//! verification suite behind every closed form.
//!
//! Exit codes: 0 success (and all checks passed for `verify`), 1 failed
//! verification checks, 2 invalid parameters, 3 a desk-scale bound was
//! exceeded. Identical invocations produce byte-identical output; sampling
//! commands default to a fixed seed. The `UNISPEC_MAX_CELLS` environment
//! variable overrides the element-count caps of the enumeration oracles.

mod table;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::Signed;

use table::{approx10, Format, Table};
use unispec_core::arcs::{
    mean_arc_over, mean_xr_exact_over, mean_xr_gl_closed, mean_xr_tn_closed, model_dist,
    second_moment_exact_over, second_moment_gl_closed, x_theta,
};
use unispec_core::growth::{
    borodin_sample, coin_truncation_bias, coin_limit_law_prob, derive_stream_seed,
    empirical_distribution, rng_for_stream, total_variation, DistributionSampler, DEFAULT_SEED,
};
use unispec_core::lines::{brute_force_line_orbits, orbit_profile_formula, LineOrbitProfile};
use unispec_core::matrix::{jordan_matrix, parse_matrix};
use unispec_core::measures::triangular_dist;
use unispec_core::partition::Partition;
use unispec_core::qseries::Rational;
use unispec_core::verify::{run as run_verify, Suite, VerifyBounds};
use unispec_core::{Error, Model, SamplerSpec};

#[derive(Parser)]
#[command(
    name = "unispec",
    version,
    about = "Exact Jordan-type distributions, partition growth samplers, and eigenvalue-arc statistics over finite fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Jordan-type distribution of a model at (n, p).
    Dist {
        /// gl | triangular
        #[arg(long)]
        model: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded empirical run of a sampler, with exact targets where they exist.
    Sample {
        /// "borodin:n=<n>,p=<p>" or "coins:p=<p>,limit=<k>"
        spec: String,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Override the coin limit of a coins spec.
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact statistics: closed forms, bounds, orbit profiles, arc counts.
    Stats {
        kind: StatKind,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        /// Exact rational in the form a/b, strictly between 0 and 1.
        #[arg(long)]
        theta: Option<String>,
        /// Partition in bracket form, e.g. "[5,4,4,1]".
        #[arg(long)]
        lambda: Option<String>,
        /// Matrix rows separated by ';', entries by ',', e.g. "1,1;0,1".
        #[arg(long)]
        matrix: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite and emit the machine-readable report.
    Verify {
        /// identities | oracle | all
        #[arg(default_value = "all")]
        suite: String,
        /// Cap every check family's n range.
        #[arg(long)]
        n_max: Option<usize>,
        /// Restrict every family to one p.
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatKind {
    MeanXr,
    MeanArc,
    SecondMoment,
    Orbits,
    Xtheta,
    XthetaHist,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::BoundExceeded { .. } => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Dist { model, n, p, format, out } => {
            let table = cmd_dist(&model, n, p)?;
            emit(&table.render(format), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample { spec, trials, seed, limit, format, out } => {
            let table = cmd_sample(&spec, trials, seed, limit)?;
            emit(&table.render(format), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Stats { kind, model, n, p, r, s, theta, lambda, matrix, trials, seed, format, out } => {
            let args = StatArgs { model, n, p, r, s, theta, lambda, matrix, trials, seed };
            let table = cmd_stats(kind, &args)?;
            emit(&table.render(format), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { suite, n_max, p, format, out } => {
            let suite: Suite = suite.parse()?;
            let bounds = VerifyBounds { n_max, p_only: p };
            let report = run_verify(suite, bounds);
            let text = match format {
                Format::Json => {
                    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
                    text.push('\n');
                    text
                }
                Format::Csv => verify_csv(&report),
            };
            emit(&text, out.as_deref())?;
            eprintln!(
                "verify {}: {} checks, {} passed, {} failed, {} advisory mismatches",
                report.suite, report.total, report.passed, report.failed, report.advisory_mismatches
            );
            if report.all_passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
    }
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", path.display()))),
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .expect("stdout stays open");
            Ok(())
        }
    }
}

fn cmd_dist(model: &str, n: usize, p: u64) -> Result<Table, Error> {
    let model: Model = model.parse()?;
    let dist = model_dist(model, n, p)?;
    let mut table = Table::new("dist", &["partition", "probability", "approx"]);
    table.param("model", model).param("n", n).param("p", p);
    let mut total = Rational::new(0.into(), 1.into());
    for (lambda, prob) in dist.iter_revlex() {
        total += prob;
        table.row(vec![lambda.to_string(), prob.to_string(), approx10(prob)]);
    }
    assert!(num_traits::One::is_one(&total), "distribution must sum to 1");
    table
        .footer("check", match model {
            Model::GlUnipotent => "gl-jordan-distribution",
            Model::Triangular => "triangular-jordan-distribution",
        })
        .footer("sum", &total)
        .footer("exact_sum_is_one", "true");
    Ok(table)
}

fn cmd_sample(spec_text: &str, trials: u64, seed: u64, limit: Option<usize>) -> Result<Table, Error> {
    let mut spec: SamplerSpec = spec_text.parse()?;
    if let (SamplerSpec::Coins { limit: spec_limit, .. }, Some(flag_limit)) = (&mut spec, limit) {
        *spec_limit = flag_limit;
    }
    let counts = empirical_distribution(&spec, trials, seed)?;
    let trials_rat = Rational::new(trials.into(), 1.into());

    match spec {
        SamplerSpec::Borodin { n, p } => {
            let exact = triangular_dist(n, p).ok();
            let mut table = Table::new(
                "sample",
                &["partition", "count", "frequency", "exact", "abs_diff"],
            );
            table
                .param("spec", &spec)
                .param("trials", trials)
                .param("seed", seed);
            for (lambda, &count) in counts.iter().rev() {
                let freq = Rational::new(count.into(), 1.into()) / &trials_rat;
                let (exact_text, diff_text) = match &exact {
                    Some(dist) => {
                        let prob = dist.prob(lambda);
                        let diff = (&freq - prob).abs();
                        (prob.to_string(), approx10(&diff))
                    }
                    None => ("-".into(), "-".into()),
                };
                table.row(vec![
                    lambda.to_string(),
                    count.to_string(),
                    approx10(&freq),
                    exact_text,
                    diff_text,
                ]);
            }
            table.footer("check", "borodin-sampler-vs-triangular-law");
            match &exact {
                Some(dist) => {
                    let tv = total_variation(&counts, trials, dist);
                    table
                        .footer("total_variation", tv.to_string())
                        .footer("total_variation_approx", approx10(&tv));
                }
                None => {
                    table.footer("note", "no exact target at this n");
                }
            }
            Ok(table)
        }
        SamplerSpec::Coins { p, limit } => {
            let mut table = Table::new(
                "sample",
                &["partition", "count", "frequency", "limit_law_approx"],
            );
            table
                .param("spec", &spec)
                .param("trials", trials)
                .param("seed", seed);
            for (lambda, &count) in counts.iter().rev() {
                let freq = Rational::new(count.into(), 1.into()) / &trials_rat;
                let law = coin_limit_law_prob(lambda, p, 64);
                table.row(vec![
                    lambda.to_string(),
                    count.to_string(),
                    approx10(&freq),
                    approx10(&law),
                ]);
            }
            let bias = coin_truncation_bias(p, limit);
            table
                .footer("check", "coin-sampler-vs-limit-law")
                .footer("truncation_bias_bound", bias.to_string())
                .footer("limit_law", "euler-truncation-64");
            Ok(table)
        }
    }
}

struct StatArgs {
    model: Option<String>,
    n: Option<usize>,
    p: Option<u64>,
    r: Option<usize>,
    s: Option<usize>,
    theta: Option<String>,
    lambda: Option<String>,
    matrix: Option<String>,
    trials: u64,
    seed: u64,
}

impl StatArgs {
    fn model(&self) -> Result<Model, Error> {
        self.model
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("--model is required for this kind".into()))?
            .parse()
    }

    fn n(&self) -> Result<usize, Error> {
        self.n
            .ok_or_else(|| Error::InvalidParameter("--n is required for this kind".into()))
    }

    fn p(&self) -> Result<u64, Error> {
        self.p
            .ok_or_else(|| Error::InvalidParameter("--p is required for this kind".into()))
    }

    fn r(&self) -> Result<usize, Error> {
        self.r
            .ok_or_else(|| Error::InvalidParameter("--r is required for this kind".into()))
    }

    fn s(&self) -> Result<usize, Error> {
        self.s
            .ok_or_else(|| Error::InvalidParameter("--s is required for this kind".into()))
    }

    fn theta(&self) -> Result<Rational, Error> {
        let text = self
            .theta
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("--theta a/b is required for this kind".into()))?;
        Rational::from_str(text.trim())
            .map_err(|_| Error::InvalidParameter(format!("theta must be an exact fraction a/b, got {text:?}")))
    }

    fn lambda(&self) -> Result<Partition, Error> {
        self.lambda
            .as_deref()
            .ok_or_else(|| Error::InvalidParameter("--lambda \"[...]\" is required for this kind".into()))?
            .parse()
    }
}

fn cmd_stats(kind: StatKind, args: &StatArgs) -> Result<Table, Error> {
    match kind {
        StatKind::MeanXr => {
            let (model, n, p, r) = (args.model()?, args.n()?, args.p()?, args.r()?);
            let dist = model_dist(model, n, p)?;
            let exact = mean_xr_exact_over(&dist, r);
            let closed = match model {
                Model::GlUnipotent => mean_xr_gl_closed(n, p, r)?,
                Model::Triangular => mean_xr_tn_closed(n, p, r)?,
            };
            let verdict = if exact == closed { "EQUAL" } else { "DIFFER" };
            let mut table = Table::new(
                "stats mean-xr",
                &["model", "n", "p", "r_or_theta", "exact", "closed_or_lower", "upper", "verdict", "approx"],
            );
            table.row(vec![
                model.to_string(),
                n.to_string(),
                p.to_string(),
                r.to_string(),
                exact.to_string(),
                closed.to_string(),
                "-".into(),
                verdict.into(),
                approx10(&exact),
            ]);
            table.footer("check", match model {
                Model::GlUnipotent => "gl-mean-xr-closed-form",
                Model::Triangular => "triangular-mean-xr-closed-form",
            });
            Ok(table)
        }
        StatKind::MeanArc => {
            let (model, n, p, theta) = (args.model()?, args.n()?, args.p()?, args.theta()?);
            let dist = model_dist(model, n, p)?;
            let arc = mean_arc_over(&dist, &theta)?;
            let verdict = if arc.contains_exact() { "CONTAINED" } else { "OUTSIDE" };
            let mut table = Table::new(
                "stats mean-arc",
                &["model", "n", "p", "r_or_theta", "exact", "closed_or_lower", "upper", "verdict", "approx"],
            );
            table.row(vec![
                model.to_string(),
                n.to_string(),
                p.to_string(),
                theta.to_string(),
                arc.exact.to_string(),
                arc.lower.to_string(),
                arc.upper.to_string(),
                verdict.into(),
                approx10(&arc.exact),
            ]);
            table
                .footer("check", "arc-mean-within-bounds")
                .footer("leading_term", arc.leading.to_string());
            Ok(table)
        }
        StatKind::SecondMoment => {
            let (n, p, r, s) = (args.n()?, args.p()?, args.r()?, args.s()?);
            let dist = model_dist(Model::GlUnipotent, n, p)?;
            let exact = second_moment_exact_over(&dist, r, s);
            let closed = second_moment_gl_closed(n, p, r, s)?;
            let verdict = if exact == closed { "EQUAL" } else { "DIFFER" };
            let mut table = Table::new(
                "stats second-moment",
                &["model", "n", "p", "r", "s", "exact", "closed", "verdict", "range"],
            );
            table.row(vec![
                Model::GlUnipotent.to_string(),
                n.to_string(),
                p.to_string(),
                r.to_string(),
                s.to_string(),
                exact.to_string(),
                closed.to_string(),
                verdict.into(),
                if r + s <= n { "stated".into() } else { "extended".into() },
            ]);
            table.footer("check", "gl-second-moment-closed-form");
            Ok(table)
        }
        StatKind::Orbits => cmd_orbits(args),
        StatKind::Xtheta => {
            let (lambda, p, theta) = (args.lambda()?, args.p()?, args.theta()?);
            let count = x_theta(&lambda, p, &theta)?;
            let mut table = Table::new("stats xtheta", &["lambda", "p", "theta", "xtheta"]);
            table.row(vec![
                lambda.to_string(),
                p.to_string(),
                theta.to_string(),
                count.to_string(),
            ]);
            table.footer("check", "xtheta-arc-eigenvalue-count");
            Ok(table)
        }
        StatKind::XthetaHist => cmd_xtheta_hist(args),
    }
}

fn profile_rows(table: &mut Table, profile: &LineOrbitProfile) {
    let orbit_counts = profile.orbit_counts();
    for (r, lines) in profile.lines() {
        let size = unispec_core::qseries::pow_of(profile.p(), *r as usize);
        table.row(vec![
            r.to_string(),
            size.to_string(),
            lines.to_string(),
            orbit_counts[r].to_string(),
        ]);
    }
}

fn cmd_orbits(args: &StatArgs) -> Result<Table, Error> {
    let p = args.p()?;
    let mut table = Table::new("stats orbits", &["r", "orbit_size", "lines", "orbits"]);
    match (&args.lambda, &args.matrix) {
        (Some(_), None) => {
            let lambda = args.lambda()?;
            let profile = orbit_profile_formula(&lambda, p);
            table.param("lambda", &lambda).param("p", p);
            profile_rows(&mut table, &profile);
            table
                .footer("check", "orbit-profile-formula")
                .footer("total_lines", profile.total_lines());
            // Cross-check by enumeration when the matrix oracle can run.
            if let Ok(m) = jordan_matrix(&lambda, p) {
                if let Ok(enumerated) = brute_force_line_orbits(&m) {
                    let verdict = if enumerated == profile { "EQUAL" } else { "DIFFER" };
                    table.footer("enumeration_crosscheck", verdict);
                }
            }
        }
        (None, Some(text)) => {
            let m = parse_matrix(text, p)?;
            if !m.is_unipotent() {
                return Err(Error::NotUnipotent);
            }
            let profile = brute_force_line_orbits(&m)?;
            table.param("matrix", text).param("p", p);
            profile_rows(&mut table, &profile);
            table
                .footer("check", "line-orbit-enumeration")
                .footer("total_lines", profile.total_lines())
                .footer("jordan_type", unispec_core::matrix::jordan_type(&m)?);
        }
        _ => {
            return Err(Error::InvalidParameter(
                "orbits needs exactly one of --lambda or --matrix".into(),
            ));
        }
    }
    Ok(table)
}

fn cmd_xtheta_hist(args: &StatArgs) -> Result<Table, Error> {
    let (model, n, p, theta) = (args.model()?, args.n()?, args.p()?, args.theta()?);
    if args.trials < 1 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let mut counts: BTreeMap<BigInt, u64> = BTreeMap::new();
    match model {
        Model::Triangular => {
            for trial in 0..args.trials {
                let lambda = borodin_sample(n, p, derive_stream_seed(args.seed, trial))?;
                *counts.entry(x_theta(&lambda, p, &theta)?).or_insert(0) += 1;
            }
        }
        Model::GlUnipotent => {
            let dist = model_dist(model, n, p)?;
            let sampler = DistributionSampler::new(&dist);
            for trial in 0..args.trials {
                let mut rng = rng_for_stream(args.seed, trial);
                let lambda = sampler.draw(&mut rng);
                *counts.entry(x_theta(&lambda, p, &theta)?).or_insert(0) += 1;
            }
        }
    }
    let mut table = Table::new("stats xtheta-hist", &["xtheta", "count"]);
    table
        .param("model", model)
        .param("n", n)
        .param("p", p)
        .param("theta", &theta)
        .param("trials", args.trials)
        .param("seed", args.seed);
    for (value, count) in &counts {
        table.row(vec![value.to_string(), count.to_string()]);
    }
    table
        .footer("check", "xtheta-empirical-histogram")
        .footer("mode", "exploratory");
    Ok(table)
}

fn verify_csv(report: &unispec_core::verify::VerifyReport) -> String {
    let mut table = Table::new("verify", &["check", "context", "lhs", "rhs", "equal", "advisory"]);
    for check in &report.checks {
        let context = check
            .context
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";");
        table.row(vec![
            check.check.clone(),
            context,
            check.lhs.clone(),
            check.rhs.clone(),
            check.equal.to_string(),
            check.advisory.to_string(),
        ]);
    }
    table
        .footer("suite", &report.suite)
        .footer("total", report.total)
        .footer("passed", report.passed)
        .footer("failed", report.failed)
        .footer("advisory_mismatches", report.advisory_mismatches)
        .footer("schema", 1);
    table.render(Format::Csv)
}
