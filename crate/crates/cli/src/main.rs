use std::fmt::Write as _;
use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ocspath::generators::{example1, example2, example3, random_oca, random_ocs, random_zocs};
use ocspath::io::{DocumentError, NormalizeDocument, PathDocument, System, SystemDocument};
use ocspath::normalize::normalize_path;
use ocspath::reach::{length_bound, min_zero_path, set_memory_budget, shortest_path, zero_bound};
use ocspath::{shortest_word, z_shortest_path, Config, Error, Ocs, ZConfig, ZOcs};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "ocspath", version, about = "Shortest paths and reachability in one-counter systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a generated system as JSON.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Shortest path between two configurations.
    Reach {
        /// System file, or `-` for stdin.
        file: String,
        #[command(flatten)]
        query: Query,
        #[arg(long, value_enum, default_value_t = Minimize::Length)]
        minimize: Minimize,
    },
    /// Path between two zero configurations with its per-arc decomposition.
    Normalize {
        file: String,
        #[command(flatten)]
        query: Query,
    },
    /// Shortest accepted word of an automaton.
    ShortestWord { file: String },
    /// Shortest path in a system whose counter ranges over the integers.
    Zreach {
        file: String,
        #[command(flatten)]
        query: Query,
    },
    /// Check the length bounds on random systems.
    Verify {
        #[arg(long, default_value_t = 8)]
        n_max: usize,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check that a path document is a valid run of a system.
    Validate { system: String, path: String },
}

#[derive(Args)]
struct Query {
    /// Source configuration as STATE:COUNTER.
    #[arg(long)]
    from: String,
    /// Target configuration as STATE:COUNTER.
    #[arg(long)]
    to: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Minimize {
    Length,
    Zeros,
}

#[derive(Clone, Copy, ValueEnum)]
enum RandomKind {
    Ocs,
    Oca,
    Zocs,
}

#[derive(Subcommand)]
enum Family {
    Example1 {
        #[arg(long)]
        n: usize,
    },
    Example2 {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
    },
    Example3 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        c_alpha: u64,
        #[arg(long, default_value_t = 0)]
        c_beta: u64,
    },
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        pos_density: f64,
        #[arg(long, default_value_t = 0.1)]
        zero_density: f64,
        /// Probability that an automaton transition reads no letter.
        #[arg(long, default_value_t = 0.2)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = RandomKind::Ocs)]
        kind: RandomKind,
    },
}

enum Failure {
    Unreachable(&'static str),
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unreachable => Failure::Unreachable("unreachable"),
            Error::Internal(_) => Failure::Internal(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<DocumentError> for Failure {
    fn from(e: DocumentError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read_input(file: &str) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if file == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(file).map(|t| text = t)
    };
    res.map_err(|e| Failure::Input(format!("{file}: {e}")))?;
    Ok(text)
}

fn load_system(file: &str) -> Result<System, Failure> {
    let text = read_input(file)?;
    Ok(SystemDocument::parse(&text)?.to_system()?)
}

fn split_config<'a>(names: &[String], spec: &'a str) -> Result<(usize, &'a str), Failure> {
    let (name, counter) =
        spec.rsplit_once(':').ok_or_else(|| Failure::Input(format!("{spec:?} is not of the form STATE:COUNTER")))?;
    let state =
        names.iter().position(|s| s == name).ok_or_else(|| Failure::Input(format!("unknown state {name:?}")))?;
    Ok((state, counter))
}

fn parse_config(names: &[String], spec: &str) -> Result<Config, Failure> {
    let (state, counter) = split_config(names, spec)?;
    let counter =
        counter.parse().map_err(|_| Failure::Input(format!("counter in {spec:?} must be a natural number")))?;
    Ok(Config::new(state, counter))
}

fn parse_zconfig(names: &[String], spec: &str) -> Result<ZConfig, Failure> {
    let (state, counter) = split_config(names, spec)?;
    let counter = counter.parse().map_err(|_| Failure::Input(format!("counter in {spec:?} must be an integer")))?;
    Ok(ZConfig::new(state, counter))
}

fn natural_system(system: &System, command: &str) -> Result<Ocs, Failure> {
    match system {
        System::Ocs(ocs) => Ok(ocs.clone()),
        System::Oca(oca) => Ok(oca.ocs().clone()),
        System::Zocs(_) => Err(Failure::Input(format!("{command} needs kind \"ocs\" or \"oca\"; use zreach"))),
    }
}

fn gen(family: Family) -> Outcome {
    let doc = match family {
        Family::Example1 { n } => SystemDocument::from_ocs(&example1(n)?.ocs),
        Family::Example2 { k, m } => SystemDocument::from_ocs(&example2(k, m)?.ocs),
        Family::Example3 { n, c_alpha, c_beta } => SystemDocument::from_ocs(&example3(n, c_alpha, c_beta)?.ocs),
        Family::Random { n, pos_density, zero_density, epsilon, seed, kind } => match kind {
            RandomKind::Ocs => SystemDocument::from_ocs(&random_ocs(n, pos_density, zero_density, seed)?),
            RandomKind::Oca => SystemDocument::from_oca(&random_oca(n, pos_density, zero_density, epsilon, seed)?),
            RandomKind::Zocs => SystemDocument::from_zocs(&random_zocs(n, pos_density, seed)?),
        },
    };
    Ok(doc.to_text())
}

fn reach(file: &str, query: &Query, minimize: Minimize) -> Outcome {
    let ocs = natural_system(&load_system(file)?, "reach")?;
    let alpha = parse_config(ocs.names(), &query.from)?;
    let beta = parse_config(ocs.names(), &query.to)?;
    let found = match minimize {
        Minimize::Length => shortest_path(&ocs, alpha, beta)?,
        Minimize::Zeros => min_zero_path(&ocs, alpha, beta)?,
    };
    let path = found.ok_or(Failure::Unreachable("unreachable"))?;
    Ok(PathDocument::from_path(&ocs, &path).to_text())
}

fn normalize(file: &str, query: &Query) -> Outcome {
    let ocs = natural_system(&load_system(file)?, "normalize")?;
    let alpha = parse_config(ocs.names(), &query.from)?;
    let beta = parse_config(ocs.names(), &query.to)?;
    let normalized = normalize_path(&ocs, alpha, beta)?;
    Ok(NormalizeDocument::new(&ocs, &normalized).to_text())
}

fn word(file: &str) -> Outcome {
    let System::Oca(oca) = load_system(file)? else {
        return Err(Failure::Input("shortest-word needs kind \"oca\"".into()));
    };
    let word = shortest_word(&oca)?.ok_or(Failure::Unreachable("empty language"))?;
    let doc = serde_json::json!({ "length": word.len(), "word": word });
    let mut text = serde_json::to_string_pretty(&doc).expect("json values always serialize");
    text.push('\n');
    Ok(text)
}

fn zreach(file: &str, query: &Query) -> Outcome {
    let z = match load_system(file)? {
        System::Zocs(z) => z,
        System::Ocs(ocs) => ZOcs::from_ocs(&ocs),
        System::Oca(oca) => ZOcs::from_ocs(oca.ocs()),
    };
    let alpha = parse_zconfig(z.names(), &query.from)?;
    let beta = parse_zconfig(z.names(), &query.to)?;
    let path = z_shortest_path(&z, alpha, beta)?.ok_or(Failure::Unreachable("unreachable"))?;
    Ok(PathDocument::from_zpath(&z, &path).to_text())
}

fn validate(system: &str, path: &str) -> Outcome {
    if system == "-" && path == "-" {
        return Err(Failure::Input("only one input can be read from stdin".into()));
    }
    let system = load_system(system)?;
    let doc = PathDocument::parse(&read_input(path)?)?;
    let length = match &system {
        System::Zocs(z) => doc.to_zpath(z)?.len(),
        other => doc.to_path(&natural_system(other, "validate")?)?.len(),
    };
    Ok(format!("valid: length {length}\n"))
}

/// Outcome of one random system in the sweep.
#[derive(Default)]
struct Trial {
    n: usize,
    /// Lengths of shortest zero-to-zero paths.
    lengths: Vec<usize>,
    /// Largest length divided by its bound, over queries with counters.
    counter_ratio: f64,
    queries: usize,
    violations: Vec<String>,
}

fn trial_seed(seed: u64, t: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(t)
}

fn run_trial(n_max: usize, seed: u64) -> Result<Trial, Error> {
    let n = 1 + (seed % n_max as u64) as usize;
    let density = [0.1, 0.3, 0.6][((seed / n_max as u64) % 3) as usize];
    let ocs = random_ocs(n, density, density / 2.0, seed)?;
    let mut trial = Trial { n, ..Trial::default() };
    let bound = zero_bound(n)?;
    for p in 0..n {
        for q in 0..n {
            let (alpha, beta) = (Config::new(p, 0), Config::new(q, 0));
            trial.queries += 1;
            if let Some(path) = shortest_path(&ocs, alpha, beta)? {
                if path.len() as u64 > bound {
                    trial.violations.push(format!("seed {seed}: {alpha} -> {beta} has length {}", path.len()));
                }
                let normalized = normalize_path(&ocs, alpha, beta)?;
                if normalized.path.len() as u64 > bound {
                    trial.violations.push(format!("seed {seed}: normalized {alpha} -> {beta} too long"));
                }
                trial.lengths.push(path.len());
            }

            let (ca, cb) = ((seed + p as u64) % (2 * n as u64 + 1), (seed / 7 + q as u64) % (2 * n as u64 + 1));
            let (alpha, beta) = (Config::new(p, ca), Config::new(q, cb));
            trial.queries += 1;
            if let Some(path) = shortest_path(&ocs, alpha, beta)? {
                let limit = length_bound(n, ca, cb)?;
                if path.len() as u64 > limit {
                    trial.violations.push(format!("seed {seed}: {alpha} -> {beta} has length {}", path.len()));
                }
                trial.counter_ratio = trial.counter_ratio.max(path.len() as f64 / limit as f64);
            }
        }
    }
    Ok(trial)
}

const BUCKET: f64 = 0.25;

fn verify(n_max: usize, trials: u64, seed: u64) -> Outcome {
    if n_max == 0 {
        return Err(Failure::Input("--n-max must be at least 1".into()));
    }
    let results: Vec<Trial> =
        (0..trials).into_par_iter().map(|t| run_trial(n_max, trial_seed(seed, t))).collect::<Result<_, _>>()?;

    let mut out = String::new();
    let queries: usize = results.iter().map(|t| t.queries).sum();
    let ratios: Vec<f64> =
        results.iter().flat_map(|t| t.lengths.iter().map(|&l| l as f64 / (t.n * t.n) as f64)).collect();
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let counter_ratio = results.iter().map(|t| t.counter_ratio).fold(0.0, f64::max);
    writeln!(out, "trials: {trials}").unwrap();
    writeln!(out, "queries: {queries}, reachable zero-to-zero: {}", ratios.len()).unwrap();
    writeln!(out, "max len/n^2: {max_ratio:.3} (bound 14)").unwrap();
    writeln!(out, "max len/(14n^2 + n*max(c)): {counter_ratio:.3} (bound 1)").unwrap();

    let buckets = ((max_ratio / BUCKET).floor() as usize + 1).max(4);
    let mut counts = vec![0usize; buckets];
    for r in &ratios {
        counts[((r / BUCKET).floor() as usize).min(buckets - 1)] += 1;
    }
    let widest = counts.iter().copied().max().unwrap_or(0).max(1);
    writeln!(out, "histogram of len/n^2:").unwrap();
    for (i, c) in counts.iter().enumerate() {
        let bar = "#".repeat((c * 40).div_ceil(widest));
        writeln!(out, "  [{:5.2}, {:5.2}) {c:>7} {bar}", i as f64 * BUCKET, (i + 1) as f64 * BUCKET).unwrap();
    }

    let violations: Vec<&String> = results.iter().flat_map(|t| &t.violations).collect();
    if !violations.is_empty() {
        print!("{out}");
        let list: Vec<&str> = violations.iter().map(|s| s.as_str()).collect();
        return Err(Failure::Internal(format!("bound violated:\n{}", list.join("\n"))));
    }
    Ok(out)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen { family } => gen(family),
        Command::Reach { file, query, minimize } => reach(&file, &query, minimize),
        Command::Normalize { file, query } => normalize(&file, &query),
        Command::ShortestWord { file } => word(&file),
        Command::Zreach { file, query } => zreach(&file, &query),
        Command::Verify { n_max, trials, seed } => verify(n_max, trials, seed),
        Command::Validate { system, path } => validate(&system, &path),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Ok(budget) = std::env::var("OCSPATH_MEM_BUDGET") {
        match budget.trim().parse() {
            Ok(bits) => set_memory_budget(bits),
            Err(_) => {
                eprintln!("error: OCSPATH_MEM_BUDGET must be a number of bits, got {budget:?}");
                return ExitCode::from(2);
            }
        }
    }
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Unreachable(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
