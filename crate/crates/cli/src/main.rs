//! Command-line entry points: `run`, `gate`, `verify`, and `bench`.
//!
//! Exit codes: 0 success, 1 verification or runtime failure, 2 usage or
//! parse error. The default seed comes from MAJSIM_SEED when set.

use std::process::ExitCode;

use majsim_core::gates::{named_gate, Sector, GATE_NAMES};
use majsim_core::protocol::{chain_stats, RunMode};

use majsim_cli::{parser, report, runner, verify};
use runner::RunOptions;

fn usage() -> String {
    "usage:\n\
     majsim run FILE [--seed S] [--shots K] [--force VAR=+1|-1 ...] [--json]\n\
     majsim gate NAME [--sector even|odd] [--matrix]\n\
     majsim verify\n\
     majsim bench --chain N --mode discard|process1|process2 --shots K [--seed S]\n"
        .to_string()
}

fn env_seed() -> Result<u64, String> {
    match std::env::var("MAJSIM_SEED") {
        Ok(v) => v
            .parse::<u64>()
            .map_err(|_| format!("MAJSIM_SEED is not a valid seed: `{v}`")),
        Err(_) => Ok(0),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{msg}");
            eprintln!();
            eprintln!("{}", usage());
            ExitCode::from(2)
        }
    }
}

fn dispatch(args: &[String]) -> Result<ExitCode, String> {
    let Some(cmd) = args.first() else {
        return Err("no subcommand given".into());
    };
    match cmd.as_str() {
        "run" => cmd_run(&args[1..]),
        "gate" => cmd_gate(&args[1..]),
        "verify" => Ok(cmd_verify()),
        "bench" => cmd_bench(&args[1..]),
        other => Err(format!("unknown subcommand `{other}`")),
    }
}

fn take_value<'a>(args: &'a [String], i: &mut usize, flag: &str) -> Result<&'a str, String> {
    *i += 1;
    args.get(*i)
        .map(|s| s.as_str())
        .ok_or_else(|| format!("{flag} expects a value"))
}

fn cmd_run(args: &[String]) -> Result<ExitCode, String> {
    let mut file = None;
    let mut opts = RunOptions {
        seed: env_seed()?,
        ..Default::default()
    };
    let mut json = false;
    let mut i = 0;
    while i < args.len() {
        match args[i].as_str() {
            "--seed" => {
                let v = take_value(args, &mut i, "--seed")?;
                opts.seed = v.parse().map_err(|_| format!("invalid seed `{v}`"))?;
            }
            "--shots" => {
                let v = take_value(args, &mut i, "--shots")?;
                opts.shots = v.parse().map_err(|_| format!("invalid shot count `{v}`"))?;
                if opts.shots == 0 {
                    return Err("--shots must be at least 1".into());
                }
            }
            "--force" => {
                let v = take_value(args, &mut i, "--force")?;
                let (var, val) = v
                    .split_once('=')
                    .ok_or_else(|| format!("--force expects VAR=+1|-1, got `{v}`"))?;
                let outcome = match val {
                    "+1" | "1" => 1i8,
                    "-1" => -1i8,
                    other => return Err(format!("--force value must be +1 or -1, got `{other}`")),
                };
                opts.forced.insert(var.to_string(), outcome);
            }
            "--json" => json = true,
            flag if flag.starts_with("--") => return Err(format!("unknown flag `{flag}`")),
            path => {
                if file.replace(path.to_string()).is_some() {
                    return Err("more than one script file given".into());
                }
            }
        }
        i += 1;
    }
    let file = file.ok_or("run expects a script file")?;
    let text = std::fs::read_to_string(&file).map_err(|e| format!("cannot read `{file}`: {e}"))?;
    let circuit = match parser::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{file}:{e}");
            return Ok(ExitCode::from(2));
        }
    };
    let script_name = std::path::Path::new(&file)
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| file.clone());
    match runner::run(&circuit, &script_name, &opts) {
        Ok(report) => {
            if json {
                print!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("{file}:{e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_gate(args: &[String]) -> Result<ExitCode, String> {
    let mut name = None;
    let mut sector = None;
    let mut show_matrix = false;
    let mut i = 0;
    while i < args.len() {
        match args[i].as_str() {
            "--sector" => {
                let v = take_value(args, &mut i, "--sector")?;
                sector = Some(match v {
                    "even" => Sector::Even,
                    "odd" => Sector::Odd,
                    other => return Err(format!("--sector must be even or odd, got `{other}`")),
                });
            }
            "--matrix" => show_matrix = true,
            flag if flag.starts_with("--") => return Err(format!("unknown flag `{flag}`")),
            g => {
                if name.replace(g.to_string()).is_some() {
                    return Err("more than one gate name given".into());
                }
            }
        }
        i += 1;
    }
    let name = name.ok_or("gate expects a gate name")?;
    if !GATE_NAMES.contains(&name.as_str()) {
        return Err(format!(
            "unknown gate `{name}` (available: {})",
            GATE_NAMES.join(", ")
        ));
    }
    let sector = sector.unwrap_or(if name == "CNOT-" {
        Sector::Odd
    } else {
        Sector::Even
    });
    match named_gate(&name, sector) {
        Ok(gate) => {
            println!("gate {name} ({} sector)", sector.tag());
            println!("basis: {}", gate.gate.basis.join(", "));
            println!("construction: {}", gate.gate.provenance);
            println!(
                "construction phase: {}",
                report::fmt_c(gate.construction_phase)
            );
            if show_matrix {
                let d = gate.gate.dim();
                for r in 0..d {
                    let cells: Vec<String> = (0..d)
                        .map(|c| report::fmt_c(gate.gate.matrix[(r, c)]))
                        .collect();
                    println!("[{}]", cells.join(", "));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_verify() -> ExitCode {
    let (checks, ok) = verify::verify_suite();
    print!("{}", verify::render_table(&checks, ok));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_bench(args: &[String]) -> Result<ExitCode, String> {
    let mut chain = None;
    let mut mode = None;
    let mut shots = None;
    let mut seed = env_seed()?;
    let mut i = 0;
    while i < args.len() {
        match args[i].as_str() {
            "--chain" => {
                let v = take_value(args, &mut i, "--chain")?;
                chain = Some(
                    v.parse::<usize>()
                        .map_err(|_| format!("invalid chain `{v}`"))?,
                );
            }
            "--mode" => {
                let v = take_value(args, &mut i, "--mode")?;
                mode = Some(match v {
                    "discard" => RunMode::Discard,
                    "process1" => RunMode::Process1,
                    "process2" => RunMode::Process2,
                    other => return Err(format!("unknown mode `{other}`")),
                });
            }
            "--shots" => {
                let v = take_value(args, &mut i, "--shots")?;
                shots = Some(
                    v.parse::<u64>()
                        .map_err(|_| format!("invalid shots `{v}`"))?,
                );
            }
            "--seed" => {
                let v = take_value(args, &mut i, "--seed")?;
                seed = v.parse().map_err(|_| format!("invalid seed `{v}`"))?;
            }
            flag => return Err(format!("unknown flag `{flag}`")),
        }
        i += 1;
    }
    let chain = chain.ok_or("bench expects --chain N")?;
    let mode = mode.ok_or("bench expects --mode")?;
    let shots = shots.ok_or("bench expects --shots K")?;
    match chain_stats(chain, shots, mode, seed) {
        Ok(stats) => {
            println!(
                "mode {} chain {} shots {} seed {}",
                mode.tag(),
                stats.n_gates,
                stats.shots,
                seed
            );
            println!(
                "successes {} rate {} expected {} (binomial sigma {})",
                stats.successes,
                report::fmt_f(stats.rate),
                report::fmt_f(stats.expected_rate),
                report::fmt_f(stats.binomial_std_err)
            );
            println!(
                "corrections applied {} (max {} per gate), modes allocated {}",
                stats.corrections_applied, stats.max_corrections_per_gate, stats.modes_allocated
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(ExitCode::from(1))
        }
    }
}
