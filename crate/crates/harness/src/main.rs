use std::fs;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use plgroup::aag::{InstanceParams, Role};
use plgroup::extension::{parse_gword, ExtensionGroup, SourcePresentation};
use plgroup::groupf::{growth_series, FLetter, DEFAULT_BUDGET};
use plgroup_harness::exchange::{demo_report, run_exchange, run_in_process, ExchangeConfig, Seeds};
use plgroup_harness::identities;
use plgroup_harness::transcript::{hex, Transcript};
use plgroup_harness::transport::{Tap, TcpTransport};

const WORD_HELP: &str = "Words are whitespace-separated letters, each optionally followed by ^k. \
Letters: a (or x0) and b (or x1) for the generators of F, t1, t2, ... for stable letters. \
An uppercase letter or a negative exponent means the inverse: \"a B^2 t1 T1\".";

#[derive(Parser)]
#[command(name = "plgroup", version, about = "Thompson group F, an extension with solvable word problem, and a commutator key exchange over it", after_help = WORD_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the fixed identities and print PASS/FAIL for each.
    VerifyIdentities(GroupArg),
    /// Build a group bundle from a two-generator presentation file.
    Build {
        /// JSON: {"generators": ["x", "y"], "relators": ["xyXY"]}
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether a word is trivial in the extension.
    #[command(after_help = WORD_HELP)]
    Wp {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        word: String,
    },
    /// Ball sizes of F over x0, x1 and of the extension over all generators.
    Growth {
        #[arg(long)]
        max: usize,
        #[command(flatten)]
        group: GroupArg,
        /// Give up beyond this many distinct elements.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Run one side of the exchange over TCP.
    Exchange {
        #[arg(long, value_enum)]
        role: RoleArg,
        #[arg(long, conflicts_with = "connect", required_unless_present = "connect")]
        listen: Option<String>,
        #[arg(long)]
        connect: Option<String>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run both sides in-process and print the transcript summary and keys.
    Demo {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct GroupArg {
    /// Group bundle written by `build`; the built-in sample group otherwise.
    #[arg(long)]
    group: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    seed: u64,
    /// Write the frames seen on the wire as JSON lines.
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Private word lengths, MIN..MAX.
    #[arg(long, value_parser = parse_range, default_value = "16..32")]
    private_len: (usize, usize),
    /// Lengths of the random words behind the public tuples, MIN..MAX.
    #[arg(long, value_parser = parse_range, default_value = "1..3")]
    tuple_len: (usize, usize),
    #[command(flatten)]
    group: GroupArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum RoleArg {
    A,
    B,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected MIN..MAX, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad lower bound in {s:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad upper bound in {s:?}"))?;
    if a == 0 || a > b {
        return Err(format!("need 1 <= MIN <= MAX, got {s:?}"));
    }
    Ok((a, b))
}

/// A failure and the exit code it maps to.
struct Failure(u8, String);

fn usage(msg: impl ToString) -> Failure {
    Failure(2, msg.to_string())
}

fn failed(msg: impl ToString) -> Failure {
    Failure(1, msg.to_string())
}

fn load_group(arg: &GroupArg) -> Result<ExtensionGroup, Failure> {
    match &arg.group {
        None => Ok(ExtensionGroup::sample()),
        Some(p) => {
            let s = fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            ExtensionGroup::from_bundle_json(&s).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
    }
}

fn config(run: &RunArgs) -> ExchangeConfig {
    ExchangeConfig {
        instance: InstanceParams { word_len: run.tuple_len, ..InstanceParams::default() },
        private_len: run.private_len,
    }
}

fn write_transcript(path: &Path, t: &Transcript) -> Result<(), Failure> {
    fs::write(path, t.to_json_lines()).map_err(|e| failed(format!("{}: {e}", path.display())))
}

fn verify_identities(arg: &GroupArg) -> Result<(), Failure> {
    let group = load_group(arg)?;
    let checks = identities::run(&group).map_err(failed)?;
    let mut ok = true;
    for c in &checks {
        println!("{} {}", if c.pass { "PASS" } else { "FAIL" }, c.name);
        ok &= c.pass;
    }
    if ok {
        Ok(())
    } else {
        Err(failed("some identities failed"))
    }
}

fn build(presentation: &Path, out: &Path) -> Result<(), Failure> {
    let s = fs::read_to_string(presentation).map_err(|e| usage(format!("{}: {e}", presentation.display())))?;
    let source = SourcePresentation::parse_json(&s).map_err(usage)?;
    let group = ExtensionGroup::build(&source).map_err(failed)?;
    fs::write(out, group.bundle_json() + "\n").map_err(|e| failed(format!("{}: {e}", out.display())))?;
    println!("wrote {} ({} stable letters, {} relators)", out.display(), group.stable_count(), group.presentation().relators().len());
    println!("digest {}", hex(&group.digest()));
    Ok(())
}

fn wp(arg: &GroupArg, word: &str) -> Result<(), Failure> {
    let group = load_group(arg)?;
    let w = parse_gword(word).map_err(usage)?;
    if let Some(l) = w.iter().find_map(|l| l.stable().filter(|s| s.unsigned_abs() > group.stable_count())) {
        return Err(usage(format!("stable letter t{} outside t1..t{}", l.unsigned_abs(), group.stable_count())));
    }
    let trivial = group.is_identity_g(&w).map_err(failed)?;
    println!("{}", if trivial { "TRIVIAL" } else { "NONTRIVIAL" });
    Ok(())
}

fn growth(max: usize, arg: &GroupArg, budget: usize) -> Result<(), Failure> {
    let group = load_group(arg)?;
    let f = growth_series(max, &[vec![FLetter::x0(true)], vec![FLetter::x1(true)]], budget).map_err(failed)?;
    let g = group.growth_series(max, budget).map_err(failed)?;
    println!("{:>3} {:>12} {:>12}", "n", "gamma_F", "gamma_G");
    for n in 0..=max {
        println!("{n:>3} {:>12} {:>12}", f[n], g[n]);
    }
    Ok(())
}

fn exchange(role: RoleArg, listen: Option<&str>, connect: Option<&str>, run: &RunArgs) -> Result<(), Failure> {
    let group = load_group(&run.group)?;
    let role = match role {
        RoleArg::A => Role::A,
        RoleArg::B => Role::B,
    };
    let tcp = match (listen, connect) {
        (Some(addr), _) => {
            let l = TcpListener::bind(addr).map_err(|e| usage(format!("{addr}: {e}")))?;
            TcpTransport::accept(&l).map_err(failed)?
        }
        (None, Some(addr)) => connect_with_retry(addr)?,
        (None, None) => return Err(usage("one of --listen or --connect is required")),
    };
    let log = Arc::new(Mutex::new(Transcript::new()));
    let mut t = Tap::new(tcp, role, log.clone());
    let result = run_exchange(&mut t, &group, role, &Seeds::from_master(run.seed), &config(run));
    if let Some(p) = &run.transcript {
        write_transcript(p, &log.lock().expect("transcript lock"))?;
    }
    let session = result.map_err(failed)?;
    println!("instance {}", hex(&session.instance.digest()));
    println!("key      {}", hex(&session.key.digest));
    Ok(())
}

fn connect_with_retry(addr: &str) -> Result<TcpTransport, Failure> {
    let deadline = Instant::now() + Duration::from_secs(10);
    loop {
        match TcpTransport::connect(addr) {
            Ok(t) => return Ok(t),
            Err(e) if Instant::now() >= deadline => return Err(failed(format!("{addr}: {e}"))),
            Err(_) => thread::sleep(Duration::from_millis(50)),
        }
    }
}

fn demo(run: &RunArgs) -> Result<(), Failure> {
    let group = load_group(&run.group)?;
    let cfg = config(run);
    let out = run_in_process(&group, &Seeds::from_master(run.seed), &cfg, None);
    print!("{}", demo_report(&group, run.seed, &cfg, &out));
    if let Some(p) = &run.transcript {
        write_transcript(p, &out.transcript)?;
    }
    match (&out.a, &out.b) {
        (Ok(a), Ok(b)) if a.key == b.key => Ok(()),
        _ => Err(failed("exchange failed")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match &cli.command {
        Command::VerifyIdentities(g) => verify_identities(g),
        Command::Build { presentation, out } => build(presentation, out),
        Command::Wp { group, word } => wp(group, word),
        Command::Growth { max, group, budget } => growth(*max, group, *budget),
        Command::Exchange { role, listen, connect, run } => exchange(*role, listen.as_deref(), connect.as_deref(), run),
        Command::Demo { run } => demo(run),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("plgroup: {msg}");
            ExitCode::from(code)
        }
    }
}
