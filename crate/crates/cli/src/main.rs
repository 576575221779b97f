//! `lincomp`: linear complexity of multidimensional periodic arrays from the
//! command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or format error, 3 budget
//! exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use lincomp::annihilator::{compute, linear_complexity};
use lincomp::census::{run_census, to_csv};
use lincomp::kerror::{k_error_profile, KErrorMode, DEFAULT_BUDGET};
use lincomp::probbounds::{report_to_json, run_experiment, with_workers, ExperimentConfig};
use lincomp::seqarray::{crt_fold, random_array, read_array, to_json_string, write_array};
use lincomp::{Error, FieldSpec, MonomialOrder, PeriodicArray};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "lincomp", version, about = "Linear complexity of multidimensional periodic arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Linear complexity, Delta set and reduced Groebner basis of an array.
    Complexity {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "grlex")]
        order: OrderArg,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// k-error linear complexity profile up to --k.
    Kerror {
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "exact")]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Folds an array with pairwise coprime periods into one dimension.
    Fold {
        input: PathBuf,
        /// Where to write the folded array.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        format: FormatArgs,
    },
    /// Counts monomial ideals of colength 1..=kmax in n variables, as CSV.
    Census {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmax: usize,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Draws a uniformly random array.
    Random {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        e: usize,
        /// Modulus coefficients c0,c1,...,c_e (monic, required form when e > 1).
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u32>>,
        #[arg(long, value_delimiter = ',', required = true)]
        periods: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the array here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs a probabilistic bound experiment from a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Worker threads; reports do not depend on this.
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Grlex,
    Lex,
}

impl From<OrderArg> for MonomialOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Grlex => MonomialOrder::Grlex,
            OrderArg::Lex => MonomialOrder::Lex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Sampled,
}

impl From<ModeArg> for KErrorMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => KErrorMode::Exact,
            ModeArg::Sampled => KErrorMode::Sampled,
        }
    }
}

#[derive(clap::Args)]
#[group(multiple = false)]
struct FormatArgs {
    /// Machine-readable output with a stable schema.
    #[arg(long)]
    json: bool,
    /// Human-readable output (the default).
    #[arg(long)]
    text: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) => 3,
            Error::Range(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = std::result::Result<String, Failure>;

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    #[serde(flatten)]
    body: T,
}

fn envelope<T: Serialize>(command: &'static str, body: T) -> String {
    let doc = Envelope {
        tool: "lincomp",
        version: VERSION,
        command,
        body,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn array_value(s: &PeriodicArray) -> Value {
    serde_json::from_str(&to_json_string(s)).expect("array JSON parses")
}

fn render_data(s: &PeriodicArray) -> String {
    let parts: Vec<String> = s.data().iter().map(|x| x.to_string()).collect();
    let sep = if s.field().degree() == 1 && s.field().characteristic() < 10 { "" } else { " " };
    parts.join(sep)
}

fn write_file(path: &Path, contents: &str) -> std::result::Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure {
        code: 2,
        message: format!("cannot write {}: {e}", path.display()),
    })
}

fn cmd_complexity(input: &Path, order: MonomialOrder, json: bool) -> CmdResult {
    let s = read_array(input)?;
    let r = compute(&s, order);
    let delta = r.delta.sorted(order);
    let basis: Vec<String> = r.basis.iter().map(|g| g.render(s.field(), order)).collect();
    if json {
        return Ok(envelope(
            "complexity",
            json!({
                "input": input.display().to_string(),
                "field": s.field(),
                "periods": s.periods(),
                "order": order.name(),
                "complexity": r.complexity,
                "delta": delta,
                "basis": basis,
            }),
        ));
    }
    let mut out = String::new();
    let _ = writeln!(out, "lincomp {VERSION} complexity");
    let _ = writeln!(out, "input: {}", input.display());
    let _ = writeln!(out, "field: {}  periods: {:?}  order: {}", s.field(), s.periods(), order.name());
    let _ = writeln!(out, "L = {}", r.complexity);
    let cells: Vec<String> = delta.iter().map(|d| format!("{d:?}")).collect();
    let _ = writeln!(out, "Delta = {{{}}}", cells.join(", "));
    let _ = writeln!(out, "G:");
    for g in &basis {
        let _ = writeln!(out, "  {g}");
    }
    Ok(out)
}

fn cmd_kerror(input: &Path, k: usize, mode: KErrorMode, budget: u64, seed: u64, json: bool) -> CmdResult {
    let s = read_array(input)?;
    let profile = k_error_profile(&s, k, mode, budget, seed)?;
    let last = profile.last().expect("profile covers k");
    let values: Vec<usize> = profile.iter().map(|r| r.value).collect();
    let examined: u64 = profile.iter().map(|r| r.candidates_examined).sum();
    let mode_name = match mode {
        KErrorMode::Exact => "exact",
        KErrorMode::Sampled => "sampled",
    };
    if json {
        return Ok(envelope(
            "kerror",
            json!({
                "input": input.display().to_string(),
                "k": k,
                "mode": mode_name,
                "budget": budget,
                "seed": seed,
                "value": last.value,
                "profile": values,
                "witness": array_value(&last.witness),
                "candidates_examined": examined,
            }),
        ));
    }
    let mut out = String::new();
    let _ = writeln!(out, "lincomp {VERSION} kerror");
    let _ = writeln!(out, "input: {}", input.display());
    let _ = writeln!(out, "k: {k}  mode: {mode_name}  budget: {budget}  seed: {seed}");
    let _ = writeln!(out, "L_{k} = {}", last.value);
    let _ = writeln!(out, "profile: {values:?}");
    let _ = writeln!(out, "witness: {}", render_data(&last.witness));
    let _ = writeln!(out, "candidates examined: {examined}");
    Ok(out)
}

fn cmd_fold(input: &Path, out_path: Option<&Path>, json: bool) -> CmdResult {
    let s = read_array(input)?;
    let t = crt_fold(&s)?;
    let ls = linear_complexity(&s);
    let lt = linear_complexity(&t);
    if let Some(p) = out_path {
        write_array(&t, p)?;
    }
    let holds = ls <= lt;
    if json {
        return Ok(envelope(
            "fold",
            json!({
                "input": input.display().to_string(),
                "out": out_path.map(|p| p.display().to_string()),
                "folded": array_value(&t),
                "complexity_array": ls,
                "complexity_folded": lt,
                "bound_holds": holds,
            }),
        ));
    }
    let mut out = String::new();
    let _ = writeln!(out, "lincomp {VERSION} fold");
    let _ = writeln!(out, "input: {}", input.display());
    if let Some(p) = out_path {
        let _ = writeln!(out, "out: {}", p.display());
    }
    let _ = writeln!(out, "t = {}", render_data(&t));
    let _ = writeln!(out, "L(s) = {ls}  L(t) = {lt}");
    let _ = writeln!(out, "L(s) <= L(t): {}", if holds { "holds" } else { "VIOLATED" });
    Ok(out)
}

fn cmd_census(n: usize, kmax: usize, csv: Option<&Path>) -> CmdResult {
    let records = run_census(n, kmax)?;
    let text = to_csv(&records);
    match csv {
        Some(p) => {
            write_file(p, &text)?;
            Ok(format!(
                "lincomp {VERSION} census: n = {n}, K = 1..={kmax}, wrote {}\n",
                p.display()
            ))
        }
        None => Ok(text),
    }
}

fn cmd_random(
    p: u32,
    e: usize,
    modulus: Option<Vec<u32>>,
    periods: &[usize],
    seed: u64,
    out: Option<&Path>,
) -> CmdResult {
    let field = FieldSpec::new(p, e, modulus)?;
    let s = random_array(&field, periods, seed)?;
    match out {
        Some(path) => {
            write_array(&s, path)?;
            Ok(format!(
                "lincomp {VERSION} random: {field}, periods {periods:?}, seed {seed}, wrote {}\n",
                path.display()
            ))
        }
        None => {
            let mut text = to_json_string(&s);
            text.push('\n');
            Ok(text)
        }
    }
}

fn cmd_experiment(config: &Path, report: Option<&Path>, workers: Option<usize>) -> CmdResult {
    let text = std::fs::read_to_string(config).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", config.display()),
    })?;
    let cfg: ExperimentConfig = serde_json::from_str(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", config.display()),
    })?;
    let result = match workers {
        Some(w) => with_workers(w, || run_experiment(&cfg))?,
        None => run_experiment(&cfg),
    }?;
    let body: Value = serde_json::from_str(&report_to_json(&result)).expect("report JSON parses");
    let doc = envelope("experiment", body);
    match report {
        Some(p) => {
            write_file(p, &doc)?;
            Ok(format!(
                "lincomp {VERSION} experiment: empirical {} vs bound {} (slack {}), satisfied: {}, wrote {}\n",
                result.empirical_probability,
                result.paper_bound,
                result.slack,
                result.satisfied,
                p.display()
            ))
        }
        None => Ok(doc),
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Complexity { input, order, format } => cmd_complexity(&input, order.into(), format.json),
        Command::Kerror {
            input,
            k,
            mode,
            budget,
            seed,
            format,
        } => cmd_kerror(&input, k, mode.into(), budget, seed, format.json),
        Command::Fold { input, out, format } => cmd_fold(&input, out.as_deref(), format.json),
        Command::Census { n, kmax, csv } => cmd_census(n, kmax, csv.as_deref()),
        Command::Random {
            p,
            e,
            modulus,
            periods,
            seed,
            out,
        } => cmd_random(p, e, modulus, &periods, seed, out.as_deref()),
        Command::Experiment {
            config,
            report,
            workers,
        } => cmd_experiment(&config, report.as_deref(), workers),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
