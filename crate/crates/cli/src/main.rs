//! `nilcx`: exact verification reports for nilpotent Lie algebras with complex structures.

mod commands;
mod invocation;
mod report;

use clap::builder::PossibleValuesParser;
use clap::{CommandFactory, FromArgMatches, Parser};
use commands::{lookup, names, sweep, Command, REGISTRY};
use invocation::{load, parse_assignment, parse_sample, CliError, CliResult, Invocation};
use report::{assignment, digest, Outcome, Report, Status};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "nilcx",
    version,
    about = "Exact verification reports for nilpotent Lie algebras with complex structures"
)]
struct Cli {
    /// Subcommand to run.
    #[arg(value_parser = PossibleValuesParser::new(names()))]
    command: String,
    /// Input `.nlf` files (a family name for `catalog`).
    inputs: Vec<String>,
    /// Bind parameters before dispatch, e.g. `--set a=1 b=1/2`.
    #[arg(long, num_args = 1.., value_name = "NAME=VALUE")]
    set: Vec<String>,
    /// Sweep one parameter over a list, e.g. `--sample a=0,1,2,5/3`.
    #[arg(long, value_name = "NAME=V1,V2,...")]
    sample: Option<String>,
    /// Highest degree for `betti` and `cohomology`.
    #[arg(long)]
    max: Option<usize>,
    /// Metric document for `metric` and `gauduchon-constant`.
    #[arg(long, value_name = "FILE")]
    form: Option<PathBuf>,
    /// Metric condition: gauduchon:<k>, balanced, skt, astheno_kahler, strongly_gauduchon.
    #[arg(long = "test", value_name = "NAME")]
    tests: Vec<String>,
    /// Degree for `cohomology`, power for `gauduchon-constant`.
    #[arg(long)]
    k: Option<usize>,
    /// Closed form for `cup`; repeat to multiply several classes.
    #[arg(long = "class", value_name = "EXPR", allow_hyphen_values = true)]
    classes: Vec<String>,
    /// Source presentation for `morphism`.
    #[arg(long, value_name = "FILE")]
    src: Option<PathBuf>,
    /// Target presentation for `morphism`.
    #[arg(long, value_name = "FILE")]
    dst: Option<PathBuf>,
    /// Source parameter point.
    #[arg(long = "src-set", num_args = 1.., value_name = "NAME=VALUE")]
    src_set: Vec<String>,
    /// Target parameter point.
    #[arg(long = "dst-set", num_args = 1.., value_name = "NAME=VALUE")]
    dst_set: Vec<String>,
}

fn command_list() -> String {
    let mut s = String::from("Commands:\n");
    for c in REGISTRY {
        s.push_str(&format!("  {:<20}{}\n", c.name(), c.about()));
    }
    s
}

fn file_bytes(path: &Path) -> Vec<u8> {
    std::fs::read(path).unwrap_or_default()
}

fn inputs_digest(cli: &Cli, cmd: &dyn Command) -> String {
    let options = json!({
        "set": cli.set,
        "sample": cli.sample,
        "max": cli.max,
        "tests": cli.tests,
        "k": cli.k,
        "classes": cli.classes,
        "src_set": cli.src_set,
        "dst_set": cli.dst_set,
    });
    let mut parts: Vec<(&str, Vec<u8>)> = vec![("command", cli.command.as_bytes().to_vec())];
    for i in &cli.inputs {
        if cmd.takes_files() {
            parts.push(("input", file_bytes(Path::new(i))));
        } else {
            parts.push(("arg", i.as_bytes().to_vec()));
        }
    }
    for (name, path) in [("form", &cli.form), ("src", &cli.src), ("dst", &cli.dst)] {
        if let Some(p) = path {
            parts.push((name, file_bytes(p)));
        }
    }
    parts.push(("options", options.to_string().into_bytes()));
    let borrowed: Vec<(&str, &[u8])> = parts.iter().map(|(n, b)| (*n, b.as_slice())).collect();
    digest(&borrowed)
}

fn optional(path: &Option<PathBuf>) -> CliResult<Option<invocation::Input>> {
    path.as_deref().map(load).transpose()
}

fn invocation(cli: &Cli, cmd: &dyn Command) -> CliResult<Invocation> {
    let inputs = if cmd.takes_files() {
        cli.inputs.iter().map(|p| load(Path::new(p))).collect::<CliResult<Vec<_>>>()?
    } else {
        Vec::new()
    };
    Ok(Invocation {
        positional: cli.inputs.clone(),
        inputs,
        set: parse_assignment(&cli.set)?,
        src_set: parse_assignment(&cli.src_set)?,
        dst_set: parse_assignment(&cli.dst_set)?,
        max: cli.max,
        form: optional(&cli.form)?,
        tests: cli.tests.clone(),
        k: cli.k,
        src: optional(&cli.src)?,
        dst: optional(&cli.dst)?,
        classes: cli.classes.clone(),
    })
}

fn execute(cli: &Cli, cmd: &dyn Command) -> CliResult<Outcome> {
    let inv = invocation(cli, cmd)?;
    match &cli.sample {
        None => cmd.run(&inv),
        Some(_) if !cmd.sweepable() => Err(CliError::usage(format!("{} does not accept --sample", cmd.name()))),
        Some(s) => {
            let (p, values) = parse_sample(s)?;
            if inv.set.get(p).is_some() {
                return Err(CliError::usage(format!("{} is bound by both --set and --sample", p.name())));
            }
            let mut out = sweep(cmd, &inv, p, &values)?;
            out.result =
                json!({ "sample": { "param": p.name(), "values": out.result }, "fixed": assignment(&inv.set) });
            Ok(out)
        }
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().after_help(command_list()).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    let cmd = lookup(&cli.command).expect("clap validated the command name");
    let outcome = execute(&cli, cmd).unwrap_or_else(|e| {
        eprintln!("nilcx {}: {}", cli.command, e.message);
        Outcome { status: Status::Error, result: e.to_value(), witnesses: Vec::<Value>::new() }
    });
    let report = Report {
        command: cli.command.clone(),
        inputs_digest: inputs_digest(&cli, cmd),
        status: outcome.status,
        result: outcome.result,
        witnesses: outcome.witnesses,
    };
    print!("{}", report.emit());
    ExitCode::from(report.status.exit_code() as u8)
}
