use std::collections::HashSet;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use slmc_core::automata::{project_direction, sentence_nondet};
use slmc_core::checker::{model_check, qptl_sentence, CheckRequest, Engine, Semantics};
use slmc_core::dependence::{
    count_dependence_maps, dualize_dependence, enumerate_dependence_maps, DependenceMap,
    Dualization, DEFAULT_BOUND,
};
use slmc_core::games::{parse_game, render_solution, solve_parity};
use slmc_core::model::{fixture, fixtures, load_cgs, Cgs};
use slmc_core::model::fixtures::fixture_source;
use slmc_core::semantics::{EvalMode, Verdict};
use slmc_core::syntax::{bound_agents, classify, parse_formula, Dialect, Formula, QuantPrefix};
use slmc_core::Error;

const EXIT_FALSE: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_ERROR: u8 = 3;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "slmc", version, about = "Strategy Logic model checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Model-check a sentence on a structure.
    Check(CheckArgs),
    /// Report fragment membership and counts for a formula.
    Classify(ClassifyArgs),
    /// Decide satisfiability of a QPTL sentence through the reduction structure.
    QptlSat(QptlArgs),
    /// Enumerate, count or dualize dependence maps.
    #[command(subcommand)]
    Depmap(DepmapCommand),
    /// Parity game utilities.
    #[command(subcommand)]
    Game(GameCommand),
    /// Print the nondeterministic automaton built for a sentence.
    Automaton(AutomatonArgs),
    /// List the bundled structures, or print one of them.
    Fixtures {
        /// Name of the fixture to print.
        #[arg(long)]
        show: Option<String>,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Bundled structure.
    #[arg(long, conflicts_with = "cgs")]
    fixture: Option<String>,
    /// Structure file in the `.cgs` format.
    #[arg(long)]
    cgs: Option<PathBuf>,
}

#[derive(Args)]
struct FormulaArgs {
    /// Formula text.
    #[arg(long, conflicts_with = "formula_file")]
    formula: Option<String>,
    /// Formula file (`.slf`); lines starting with `#` are ignored.
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    formula: FormulaArgs,
    /// auto, automata or enum.
    #[arg(long, default_value = "auto")]
    engine: String,
    /// classic or elementary.
    #[arg(long, default_value = "classic")]
    semantics: String,
    /// Mode forced on the enumerative engine: exact-horizon(h) or bounded-memory(m).
    #[arg(long)]
    mode: Option<String>,
    /// Memory states used when the enumerative engine falls back to transducers.
    #[arg(long, default_value_t = 1)]
    memory: usize,
    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    /// Structure whose agents are used; defaults to the agents bound in the formula.
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,
}

#[derive(Args)]
struct QptlArgs {
    #[command(flatten)]
    formula: FormulaArgs,
    /// Mode forced on the enumerative engine.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    report: ReportFormat,
}

#[derive(Args)]
struct PrefixArgs {
    /// Quantification prefix, for instance `[[x]]<<y>>`.
    #[arg(long)]
    prefix: String,
    /// Size of the domain `{0, .., d-1}`.
    #[arg(long, default_value_t = 2)]
    domain: usize,
}

#[derive(Subcommand)]
enum DepmapCommand {
    /// Print every dependence map.
    Enumerate {
        #[command(flatten)]
        prefix: PrefixArgs,
        /// Stop after this many maps.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Print the number of dependence maps.
    Count {
        #[command(flatten)]
        prefix: PrefixArgs,
    },
    /// Find a dual map into the target set or a map avoiding it.
    Dualize {
        #[command(flatten)]
        prefix: PrefixArgs,
        /// Valuations in prefix order, `;`-separated, values `,`-separated.
        #[arg(long)]
        target: String,
    },
}

#[derive(Subcommand)]
enum GameCommand {
    /// Solve a parity game given in the text format (`-` reads stdin).
    Solve { file: PathBuf },
}

#[derive(Args)]
struct AutomatonArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    formula: FormulaArgs,
    /// Project onto this starting state.
    #[arg(long)]
    state: Option<String>,
}

/// Failures, split by the exit code they map to.
enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("slmc: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Core(e)) => {
            eprintln!("slmc: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Check(args) => check(args),
        Command::Classify(args) => classify_cmd(args),
        Command::QptlSat(args) => qptl(args),
        Command::Depmap(cmd) => depmap(cmd),
        Command::Game(GameCommand::Solve { file }) => game_solve(&file),
        Command::Automaton(args) => automaton(args),
        Command::Fixtures { show } => fixtures_cmd(show),
    }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)
            .map_err(|e| Failure::Usage(format!("cannot read stdin: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_model(args: &ModelArgs) -> Result<Option<Cgs>, Failure> {
    match (&args.fixture, &args.cgs) {
        (Some(name), _) => match fixture_source(name) {
            Some(_) => Ok(Some(fixture(name)?)),
            None => Err(Failure::Usage(format!("unknown fixture `{name}`"))),
        },
        (None, Some(path)) => Ok(Some(load_cgs(&read(path)?)?)),
        (None, None) => Ok(None),
    }
}

fn require_model(args: &ModelArgs) -> Result<Cgs, Failure> {
    load_model(args)?.ok_or_else(|| Failure::Usage("one of --fixture or --cgs is required".into()))
}

fn formula_text(args: &FormulaArgs) -> Result<String, Failure> {
    match (&args.formula, &args.formula_file) {
        (Some(t), _) => Ok(t.clone()),
        (None, Some(path)) => Ok(read(path)?
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")),
        (None, None) => Err(Failure::Usage(
            "one of --formula or --formula-file is required".into(),
        )),
    }
}

fn parse_mode(mode: &Option<String>) -> Result<Option<EvalMode>, Failure> {
    mode.as_deref()
        .map(|m| m.parse().map_err(|e: Error| Failure::Usage(e.to_string())))
        .transpose()
}

fn verdict_code(v: &Verdict) -> u8 {
    match v {
        Verdict::True => 0,
        Verdict::False => EXIT_FALSE,
        Verdict::Unknown(_) => EXIT_UNKNOWN,
    }
}

fn check(args: CheckArgs) -> Outcome {
    let g = require_model(&args.model)?;
    let f = parse_formula(&formula_text(&args.formula)?, Dialect::Sl)?;
    let engine: Engine = args.engine.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let semantics: Semantics =
        args.semantics.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
    let mut req = CheckRequest::new(g, f)
        .engine(engine)
        .semantics(semantics)
        .memory(args.memory);
    req.mode = parse_mode(&args.mode)?;
    let report = model_check(&req)?;
    match args.report {
        ReportFormat::Text => print!("{}", report.to_text()),
        ReportFormat::Json => println!("{}", report.to_json()),
    }
    Ok(verdict_code(&report.verdict))
}

fn classify_cmd(args: ClassifyArgs) -> Outcome {
    let f: Formula = parse_formula(&formula_text(&args.formula)?, Dialect::Sl)?;
    let agents: Vec<String> = match load_model(&args.model)? {
        Some(g) => g.agents().to_vec(),
        None => bound_agents(&f).into_iter().collect(),
    };
    let r = classify(&f, &agents);
    match args.report {
        ReportFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&r).expect("fragment reports serialize")
        ),
        ReportFormat::Text => {
            println!("sentence        {}", r.is_sentence);
            println!("agent-closed    {}", r.is_agent_closed);
            println!("NG-SL           {}", r.ngsl);
            println!("BG-SL           {}", r.bgsl);
            println!("OG-SL           {}", r.ogsl);
            println!("fvs             {}", r.fvs);
            println!("agents used     {}", r.n_agents_used);
            println!("variables used  {}", r.n_vars_used);
            println!("alternation     {}", r.alternation);
        }
    }
    Ok(0)
}

fn qptl(args: QptlArgs) -> Outcome {
    let phi = parse_formula(&formula_text(&args.formula)?, Dialect::Qptl)?;
    let mut req = CheckRequest::new(fixture("rdc")?, qptl_sentence(&phi)?);
    req.mode = parse_mode(&args.mode)?;
    let report = model_check(&req)?;
    match args.report {
        ReportFormat::Text => {
            print!("{}", report.to_text());
            let answer = match report.verdict {
                Verdict::True => "satisfiable",
                Verdict::False => "unsatisfiable",
                Verdict::Unknown(_) => "unknown",
            };
            println!("{answer}");
        }
        ReportFormat::Json => println!("{}", report.to_json()),
    }
    Ok(verdict_code(&report.verdict))
}

fn show_map(prefix: &QuantPrefix, theta: &DependenceMap) -> String {
    let vars = prefix.vars();
    let universals = prefix.universals();
    theta
        .images()
        .iter()
        .map(|nu| {
            let given: Vec<String> = vars
                .iter()
                .zip(nu)
                .filter(|(x, _)| universals.contains(x))
                .map(|(x, v)| format!("{x}={v}"))
                .collect();
            let all: Vec<String> = vars.iter().zip(nu).map(|(x, v)| format!("{x}={v}")).collect();
            format!("  {} -> {}", given.join(" "), all.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn depmap(cmd: DepmapCommand) -> Outcome {
    let parse_prefix = |a: &PrefixArgs| -> Result<QuantPrefix, Failure> {
        if a.domain == 0 {
            return Err(Failure::Usage("the domain must not be empty".into()));
        }
        Ok(QuantPrefix::parse(&a.prefix)?)
    };
    match cmd {
        DepmapCommand::Count { prefix } => {
            let p = parse_prefix(&prefix)?;
            println!("{}", count_dependence_maps(&p, prefix.domain));
        }
        DepmapCommand::Enumerate { prefix, limit } => {
            let p = parse_prefix(&prefix)?;
            let maps = enumerate_dependence_maps(&p, prefix.domain, DEFAULT_BOUND)?;
            for (i, theta) in maps.take(limit.unwrap_or(usize::MAX)).enumerate() {
                println!("map {i}");
                println!("{}", show_map(&p, &theta));
            }
        }
        DepmapCommand::Dualize { prefix, target } => {
            let p = parse_prefix(&prefix)?;
            let set = parse_target(&target, p.len(), prefix.domain)?;
            match dualize_dependence(&p, prefix.domain, &set, DEFAULT_BOUND)? {
                Dualization::Dual(theta) => {
                    println!("dual map for {}", p.dual());
                    println!("{}", show_map(&p.dual(), &theta));
                }
                Dualization::Counterexample(theta) => {
                    println!("map for {p} avoiding the target");
                    println!("{}", show_map(&p, &theta));
                }
            }
        }
    }
    Ok(0)
}

fn parse_target(text: &str, len: usize, domain: usize) -> Result<HashSet<Vec<usize>>, Failure> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|v| {
            let nu: Vec<usize> = v
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| Failure::Usage(format!("bad valuation `{v}`")))?;
            if nu.len() != len || nu.iter().any(|&x| x >= domain) {
                return Err(Failure::Usage(format!(
                    "valuation `{v}` needs {len} values below {domain}"
                )));
            }
            Ok(nu)
        })
        .collect()
}

fn game_solve(file: &PathBuf) -> Outcome {
    let g = parse_game(&read(file)?)?;
    let sol = solve_parity(&g.game);
    print!("{}", render_solution(&g, &sol));
    Ok(0)
}

fn automaton(args: AutomatonArgs) -> Outcome {
    let g = require_model(&args.model)?;
    let f = parse_formula(&formula_text(&args.formula)?, Dialect::Sl)?;
    let nondet = sentence_nondet(&g, &f)?;
    let out = match &args.state {
        Some(name) => project_direction(&nondet, g.require_state(name)?)?,
        None => nondet,
    };
    print!("{}", out.dump());
    Ok(0)
}

fn fixtures_cmd(show: Option<String>) -> Outcome {
    match show {
        Some(name) => match fixture_source(&name) {
            Some(text) => print!("{text}"),
            None => return Err(Failure::Usage(format!("unknown fixture `{name}`"))),
        },
        None => {
            for (name, g) in fixtures() {
                println!(
                    "{name:4} {} agents, {} actions, {} states",
                    g.n_agents(),
                    g.n_actions(),
                    g.n_states()
                );
            }
        }
    }
    Ok(0)
}
