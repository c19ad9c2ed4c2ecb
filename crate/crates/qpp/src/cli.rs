//! The `qpp` command line.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qpp_core::algorithms::{
    deutsch_jozsa_report, grover_optimal_iterations, grover_run, mixed_state_demos, negative_binomial_pmf,
    probabilistic_walk, walk_report, AlgorithmReport, GroverAnalysis, OracleFunction,
};
use qpp_core::semantics::{eval_state, sample, CheckOptions, RefinementChecker, Scalar, Time, DEFAULT_FUEL};
use qpp_core::{Amplitude, QuantumState};

use crate::diag::DiagKind;
use crate::lower::load;
use crate::output::{
    counterexample_line, dist_table, mass_footer, refinement_json, reports_table, sig10, table, ReportJson,
};
use crate::printer::print_program;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qpp", version, about = "Evaluate and check quantum predicative programs")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Bound on recursive unfoldings; leftover mass is reported as t' = inf.
    #[arg(long, global = true, env = "QPP_FUEL", value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the final distribution of a program.
    Dist {
        file: PathBuf,
        /// Initial value of a variable, overriding its declaration.
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
        /// Keep only these variables (comma separated; `t` keeps time).
        #[arg(long, value_delimiter = ',')]
        marginal: Option<Vec<String>>,
    },
    /// Check the program against its `spec` over every declared prestate.
    Refine {
        file: PathBuf,
        /// Pointwise tolerance for distribution specifications.
        #[arg(long, value_parser = positive)]
        tol: Option<f64>,
        /// Most counterexamples to report.
        #[arg(long, default_value_t = 20)]
        max_counterexamples: usize,
    },
    /// Estimate the final distribution by seeded random runs.
    Sample {
        file: PathBuf,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "set", value_name = "NAME=VALUE")]
        set: Vec<String>,
    },
    /// Reprint a program in canonical layout.
    Fmt { file: PathBuf },
    /// Run one of the built-in algorithm checks.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Deutsch-Jozsa on every constant and balanced function of n bits.
    Dj {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=4))]
        n: u64,
    },
    /// Grover search with k iterations (default: the optimal number).
    Grover {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        #[arg(long)]
        k: Option<u64>,
        /// The solution.
        #[arg(long, default_value_t = 0)]
        x1: usize,
    },
    /// The walk `x := x - rand 2; t := t+1` from x down to 0.
    Walk {
        #[arg(long)]
        x: u64,
        /// Largest number of steps to tabulate.
        #[arg(long)]
        kmax: Option<u64>,
    },
    /// The mixed-state identities, with seeded random states for the last.
    Mixed {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        states: usize,
    },
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

/// An error with the exit code it maps to.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<qpp_core::Error> for Failure {
    fn from(e: qpp_core::Error) -> Self {
        Failure {
            code: if e.is_capacity() { EXIT_CAPACITY } else { EXIT_USAGE },
            message: format!("error: {e}"),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("error: {e}"))
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    let mut io = Io { out, err };
    match execute(&cli, &mut io) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(io.err, "{}", f.message.trim_end());
            f.code
        }
    }
}

fn execute(cli: &Cli, io: &mut Io) -> Result<i32, Failure> {
    let fuel = cli.fuel.unwrap_or(DEFAULT_FUEL);
    match &cli.command {
        Command::Dist { file, set, marginal } => dist(cli.format, fuel, file, set, marginal.as_deref(), io),
        Command::Refine {
            file,
            tol,
            max_counterexamples,
        } => refine(cli.format, fuel, file, *tol, *max_counterexamples, io),
        Command::Sample {
            file,
            samples,
            seed,
            set,
        } => monte_carlo(cli.format, fuel, file, *samples, *seed, set, io),
        Command::Fmt { file } => {
            let (ast, _) = read(file)?;
            io.out.write_all(print_program(&ast).as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Demo { demo } => match demo {
            Demo::Dj { n } => demo_dj(cli.format, *n as usize, io),
            Demo::Grover { n, k, x1 } => demo_grover(cli.format, *n as usize, *k, *x1, io),
            Demo::Walk { x, kmax } => demo_walk(cli.format, cli.fuel, *x, *kmax, io),
            Demo::Mixed { seed, states } => demo_mixed(cli.format, *seed, *states, io),
        },
    }
}

fn read(path: &Path) -> Result<(crate::ast::SourceProgram, crate::Lowered), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("error: cannot read {}: {e}", path.display())))?;
    load(&text).map_err(|d| Failure {
        code: if d.kind == DiagKind::Capacity {
            EXIT_CAPACITY
        } else {
            EXIT_USAGE
        },
        message: d.render(&path.display().to_string(), &text),
    })
}

fn overrides(low: &crate::Lowered, set: &[String]) -> Result<Vec<(String, Scalar)>, Failure> {
    set.iter()
        .map(|s| {
            let (name, value) = s
                .split_once('=')
                .ok_or_else(|| Failure::usage(format!("error: `{s}` is not NAME=VALUE")))?;
            let name = name.trim();
            let value = value.trim();
            let schema = low.program.schema();
            let i = schema
                .index_of(name)
                .ok_or_else(|| Failure::usage(format!("error: no variable `{name}`")))?;
            let v = match value {
                "true" => Scalar::Bool(true),
                "false" => Scalar::Bool(false),
                v => Scalar::Int(
                    v.parse()
                        .map_err(|_| Failure::usage(format!("error: `{v}` is not a value")))?,
                ),
            };
            if !schema.vars()[i].domain.contains(v) {
                return Err(Failure::usage(format!(
                    "error: {name} = {v} is outside its declared range"
                )));
            }
            Ok((name.to_string(), v))
        })
        .collect()
}

fn json_line(io: &mut Io, v: &impl serde::Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(v).map_err(|e| Failure::usage(format!("error: {e}")))?;
    writeln!(io.out, "{text}")?;
    Ok(())
}

fn dist(
    format: Format,
    fuel: u64,
    file: &Path,
    set: &[String],
    marginal: Option<&[String]>,
    io: &mut Io,
) -> Result<i32, Failure> {
    let (_, low) = read(file)?;
    let start = low.initial_state(&overrides(&low, set)?)?;
    let r = eval_state(&low.program, &start, fuel)?;
    let d = match marginal {
        Some(keep) => {
            let keep: Vec<&str> = keep.iter().map(|s| s.trim()).collect();
            r.dist.marginal(&keep)?
        }
        None => r.dist.clone(),
    };
    match format {
        Format::Table => {
            io.out.write_all(dist_table(&d).as_bytes())?;
            io.out.write_all(mass_footer(&r).as_bytes())?;
        }
        Format::Json => {
            io.out.write_all(d.to_json_lines().as_bytes())?;
            io.err.write_all(mass_footer(&r).as_bytes())?;
        }
    }
    Ok(EXIT_OK)
}

fn refine(
    format: Format,
    fuel: u64,
    file: &Path,
    tol: Option<f64>,
    max_counterexamples: usize,
    io: &mut Io,
) -> Result<i32, Failure> {
    let (_, low) = read(file)?;
    let spec = low
        .spec
        .as_ref()
        .ok_or_else(|| Failure::usage(format!("error: {} has no `spec`", file.display())))?;
    if spec.timed {
        low.program.calls_are_timed()?;
    }
    let mut opts = CheckOptions {
        fuel,
        max_counterexamples,
        ..CheckOptions::default()
    };
    if let Some(t) = tol {
        opts.tol = t;
    }
    let checker = RefinementChecker::new(&low.program, &spec.spec, opts)?;
    let verdicts = checker
        .prestates()?
        .par_iter()
        .map(|s| checker.check_prestate(s))
        .collect::<qpp_core::Result<Vec<_>>>()?;
    let report = checker.report(verdicts);
    match format {
        Format::Json => json_line(io, &refinement_json(&report))?,
        Format::Table => {
            let verdict = if report.holds { "holds" } else { "fails" };
            writeln!(io.out, "refinement {verdict}")?;
            writeln!(io.out, "prestates checked: {}", report.prestates_checked)?;
            writeln!(io.out, "max abs error: {:.3e}", report.max_abs_error)?;
            for n in &report.notes {
                writeln!(io.out, "note: {n}")?;
            }
        }
    }
    for c in &report.counterexamples {
        writeln!(io.err, "{}", counterexample_line(c))?;
    }
    Ok(if report.holds { EXIT_OK } else { EXIT_FAIL })
}

fn monte_carlo(
    format: Format,
    fuel: u64,
    file: &Path,
    samples: u64,
    seed: u64,
    set: &[String],
    io: &mut Io,
) -> Result<i32, Failure> {
    let (_, low) = read(file)?;
    let start = low.initial_state(&overrides(&low, set)?)?;
    let schema = low.program.schema();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    for _ in 0..samples {
        let mut choose = |w: &[f64]| WeightedIndex::new(w).map_or(0, |d| d.sample(&mut rng));
        let end = sample(&low.program, &start, fuel, &mut choose)?;
        *counts.entry(schema.format_state(&end)).or_default() += 1;
    }
    match format {
        Format::Table => {
            let rows: Vec<Vec<String>> = counts
                .iter()
                .map(|(s, c)| vec![s.clone(), c.to_string(), sig10(*c as f64 / samples as f64)])
                .collect();
            let headers = ["final state", "count", "frequency"].map(String::from);
            writeln!(io.out, "{samples} runs, seed {seed}")?;
            io.out.write_all(table(&headers, &rows).as_bytes())?;
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = counts
                .iter()
                .map(|(s, c)| serde_json::json!({"state": s, "count": c}))
                .collect();
            json_line(
                io,
                &serde_json::json!({"samples": samples, "seed": seed, "outcomes": rows}),
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn report_out(format: Format, reports: &[AlgorithmReport], io: &mut Io) -> Result<i32, Failure> {
    match format {
        Format::Table => io.out.write_all(reports_table(reports).as_bytes())?,
        Format::Json => {
            let js: Vec<ReportJson> = reports.iter().map(Into::into).collect();
            json_line(io, &js)?;
        }
    }
    Ok(if reports.iter().all(|r| r.pass) {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn demo_dj(format: Format, n: usize, io: &mut Io) -> Result<i32, Failure> {
    let (q, c) = deutsch_jozsa_report(n)?;
    report_out(format, &[q, c], io)
}

fn demo_grover(format: Format, n: usize, k: Option<u64>, x1: usize, io: &mut Io) -> Result<i32, Failure> {
    let a = GroverAnalysis::new(n)?;
    if x1 as u64 >= a.big_n {
        return Err(Failure::usage(format!("error: x1 = {x1} is not below N = {}", a.big_n)));
    }
    let opt = grover_optimal_iterations(a.big_n)?;
    let k = k.unwrap_or(opt.k_opt);
    let d = grover_run(&OracleFunction::point(n, x1)?, k)?;
    let r_marg = d.values_of("r")?;
    let p_of = |r: usize| {
        r_marg
            .iter()
            .find(|(v, _)| *v == Scalar::Int(r as i64))
            .map_or(0.0, |(_, p)| *p)
    };
    let mut err: f64 = 0.0;
    for r in 0..a.big_n as usize {
        let want = if r == x1 { a.p_success(k) } else { a.p_other(k) };
        err = err.max((p_of(r) - want).abs());
    }
    let time_ok = d.iter().all(|(s, _)| s.time == Some(Time::Finite(k)));
    let report = AlgorithmReport {
        algorithm: "grover".into(),
        n,
        cases_checked: 1,
        max_abs_error: err,
        oracle_calls: k,
        pass: time_ok && err <= 1e-9,
    };
    match format {
        Format::Table => {
            writeln!(io.out, "N = {}, x1 = {x1}, k = {k}", a.big_n)?;
            writeln!(io.out, "theta = arcsin(sqrt(1/N)) = {}", sig10(a.theta))?;
            writeln!(io.out, "P(r'=x1) simulated   = {}", sig10(p_of(x1)))?;
            writeln!(io.out, "P(r'=x1) closed form = {}", sig10(a.p_success(k)))?;
            writeln!(
                io.out,
                "optimal k = {} (P = {}); approximation ceil(pi*sqrt(N)/4) = {} (P = {})",
                opt.k_opt,
                sig10(opt.p_opt),
                opt.k_approx,
                sig10(opt.p_approx)
            )?;
            let rows: Vec<Vec<String>> = (0..a.big_n as usize)
                .map(|r| vec![r.to_string(), k.to_string(), sig10(p_of(r))])
                .collect();
            io.out
                .write_all(table(&["r'", "t'", "p"].map(String::from), &rows).as_bytes())?;
            io.out
                .write_all(reports_table(std::slice::from_ref(&report)).as_bytes())?;
        }
        Format::Json => {
            let dist: Vec<serde_json::Value> = (0..a.big_n as usize)
                .map(|r| serde_json::json!({"r": r, "t": k, "p": p_of(r)}))
                .collect();
            json_line(
                io,
                &serde_json::json!({
                    "N": a.big_n,
                    "x1": x1,
                    "k": k,
                    "theta": a.theta,
                    "p_success_closed_form": a.p_success(k),
                    "k_opt": opt.k_opt,
                    "p_opt": opt.p_opt,
                    "k_approx": opt.k_approx,
                    "p_approx": opt.p_approx,
                    "distribution": dist,
                    "report": ReportJson::from(&report),
                }),
            )?;
        }
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

fn demo_walk(format: Format, fuel: Option<u64>, x0: u64, kmax: Option<u64>, io: &mut Io) -> Result<i32, Failure> {
    let floor = x0
        .checked_mul(4)
        .and_then(|v| v.checked_add(64))
        .ok_or_else(|| Failure::usage("error: x too large"))?;
    let fuel = fuel.unwrap_or(DEFAULT_FUEL).max(floor);
    let kmax = kmax.unwrap_or(4 * x0 + 16);
    let r = probabilistic_walk(x0, fuel)?;
    let (report, mean) = walk_report(x0, fuel, kmax)?;
    let p_at = |k: u64| r.dist.probability(|s| s.time == Some(Time::Finite(k)));
    let ks: Vec<u64> = (x0..=kmax.max(x0)).collect();
    match format {
        Format::Table => {
            writeln!(io.out, "walk from x = {x0}: P(t'-t = k) against binom(k-1, x-1) / 2^k")?;
            let rows: Vec<Vec<String>> = ks
                .iter()
                .map(|&k| vec![k.to_string(), sig10(p_at(k)), sig10(negative_binomial_pmf(x0, k))])
                .collect();
            io.out
                .write_all(table(&["k", "simulated", "closed form"].map(String::from), &rows).as_bytes())?;
            writeln!(io.out, "mean of t'-t = {} (2x = {})", sig10(mean), 2 * x0)?;
            io.out
                .write_all(reports_table(std::slice::from_ref(&report)).as_bytes())?;
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = ks
                .iter()
                .map(|&k| serde_json::json!({"k": k, "p": p_at(k), "closed_form": negative_binomial_pmf(x0, k)}))
                .collect();
            json_line(
                io,
                &serde_json::json!({"x": x0, "mean": mean, "distribution": rows, "report": ReportJson::from(&report)}),
            )?;
        }
    }
    Ok(if report.pass { EXIT_OK } else { EXIT_FAIL })
}

/// `count` random states on 1 to 3 qubits.
pub fn random_states(seed: u64, count: usize) -> Result<Vec<QuantumState>, qpp_core::Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(1..=3);
            let mut amps: Vec<Amplitude> = (0..1 << n)
                .map(|_| Amplitude::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            for a in &mut amps {
                *a = a.scale(1.0 / norm);
            }
            QuantumState::from_amplitudes(amps)
        })
        .collect()
}

fn demo_mixed(format: Format, seed: u64, count: usize, io: &mut Io) -> Result<i32, Failure> {
    let states = random_states(seed, count)?;
    let report = mixed_state_demos(&states)?;
    match format {
        Format::Table => {
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        c.cases.to_string(),
                        format!("{:.3e}", c.distance),
                        c.pass.to_string(),
                    ]
                })
                .collect();
            io.out
                .write_all(table(&["check", "cases", "distance", "pass"].map(String::from), &rows).as_bytes())?;
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = report
                .checks
                .iter()
                .map(|c| serde_json::json!({"name": c.name, "cases": c.cases, "distance": c.distance, "pass": c.pass}))
                .collect();
            json_line(io, &serde_json::json!({"seed": seed, "checks": rows}))?;
        }
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        if let Some((a, b)) = &c.details {
            writeln!(
                io.err,
                "{}: the two sides differ\n{}--\n{}",
                c.name,
                dist_table(a),
                dist_table(b)
            )?;
        }
    }
    Ok(if report.pass() { EXIT_OK } else { EXIT_FAIL })
}
