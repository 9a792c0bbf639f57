//! `boolps`: simulate, translate, check and control Boolean networks and
//! Boolean P systems from model files.
//!
//! Exit codes: 0 success, 1 no solution or failed check, 2 usage error,
//! 3 parse error, 4 capacity exceeded.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boolps::bcn::Control;
use boolps::cofase::{
    solve_cofase, solve_cofase_via_composite, verify_control_sequence, CompositeOptions,
    SearchOptions, Verification,
};
use boolps::equivalence::{
    boolp_transitions, check_bcn_simulation, check_bn_simulation, check_product_lemma,
    check_rs_embedding, EquivalenceReport,
};
use boolps::random::{
    random_bn, random_explicit_quasimode, random_freeze_bcn, random_mode, random_rs, random_system,
};
use boolps::syntax::{
    parse_bcn, parse_bn, parse_cofase, parse_quasimode, parse_rs, parse_system, system_to_text,
};
use boolps::translate::{
    bn_mode_to_quasimode, bn_to_boolp, rs_to_boolp, ControlRegime, ControlledComposite,
};
use boolps::{
    BooleanMode, BooleanPSystem, Error, Limits, Outcome, Policy, Quasimode, Rule, Semantics,
    Trajectory, VarTable,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "boolps",
    version,
    about = "Boolean networks, control networks and Boolean P systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Boolean networks.
    #[command(subcommand)]
    Bn(BnCommand),
    /// Boolean P systems.
    #[command(subcommand)]
    Pi(PiCommand),
    /// Translate a model into a Boolean P system.
    #[command(subcommand)]
    Translate(TranslateCommand),
    /// Union of two P systems; quasimodes present in both files are multiplied.
    Compose { first: PathBuf, second: PathBuf },
    /// Control sequence inference and verification.
    #[command(subcommand)]
    Cofase(CofaseCommand),
    /// Exhaustive equivalence checks, on a file or on seeded random models.
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Subcommand)]
enum BnCommand {
    /// All trajectories of a number of steps from a state.
    Trace {
        file: PathBuf,
        #[arg(long, default_value = "syn")]
        mode: String,
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 4)]
        steps: usize,
    },
    /// The labelled transition relation.
    Transitions {
        file: PathBuf,
        #[arg(long, default_value = "syn")]
        mode: String,
    },
    /// Terminal strongly connected components.
    Attractors {
        file: PathBuf,
        #[arg(long, default_value = "syn")]
        mode: String,
    },
}

#[derive(Subcommand)]
enum PiCommand {
    /// Every evolution from a configuration.
    Trace {
        file: PathBuf,
        /// Quasimode expression; defaults to the file's, else `maxpar`.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        init: String,
        #[arg(long, default_value_t = 4)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Filtered)]
        semantics: SemanticsArg,
    },
    /// The labelled transition relation over all configurations.
    Transitions {
        file: PathBuf,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Filtered)]
        semantics: SemanticsArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SemanticsArg {
    Filtered,
    Strict,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Filtered => Semantics::Filtered,
            SemanticsArg::Strict => Semantics::Strict,
        }
    }
}

#[derive(Subcommand)]
enum TranslateCommand {
    /// `Π(F)` with the quasimode of a network mode.
    Bn {
        file: PathBuf,
        #[arg(long, default_value = "syn")]
        mode: String,
    },
    /// The controlled composite of a control network.
    Bcn {
        file: PathBuf,
        #[arg(long, default_value = "syn")]
        mode: String,
        #[arg(long, value_enum, default_value_t = RegimeArg::Free)]
        regime: RegimeArg,
    },
    /// The embedding of a reaction system.
    Rs { file: PathBuf },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Free,
    Tcs,
    Acs,
}

impl From<RegimeArg> for ControlRegime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Free => ControlRegime::Free,
            RegimeArg::Tcs => ControlRegime::Total,
            RegimeArg::Acs => ControlRegime::Abiding,
        }
    }
}

#[derive(Subcommand)]
enum CofaseCommand {
    /// Search a shortest control sequence.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_phases: usize,
        #[arg(long, value_enum, default_value_t = PolicyArg::Uniform)]
        policy: PolicyArg,
        #[arg(long, default_value_t = 0)]
        min_steps_per_phase: usize,
        #[arg(long, value_enum, default_value_t = Engine::Direct)]
        engine: Engine,
        /// Longest composite run explored by the composite engine.
        #[arg(long, default_value_t = 16)]
        max_steps: usize,
    },
    /// Check a glued trajectory against a control sequence.
    Verify {
        file: PathBuf,
        /// Controls separated by `;`, e.g. `{};{u_x0};{u_y1}`.
        #[arg(long)]
        controls: String,
        /// States separated by `,` or whitespace, e.g. `01,10,01`.
        #[arg(long)]
        trajectory: String,
        /// Phase boundary indices, e.g. `2,4`.
        #[arg(long, default_value = "")]
        boundaries: String,
        #[arg(long, default_value_t = 0)]
        min_steps_per_phase: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PolicyArg {
    Uniform,
    PerStart,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Direct,
    Composite,
}

#[derive(Args)]
struct Suite {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: usize,
}

#[derive(Subcommand)]
enum CheckCommand {
    /// `Π(F)` against `F`, for every mode given.
    BnSim {
        file: Option<PathBuf>,
        #[arg(long, default_value = "syn")]
        mode: String,
        #[command(flatten)]
        suite: Suite,
    },
    /// The controlled composite against the control network.
    BcnSim {
        file: Option<PathBuf>,
        #[arg(long, default_value = "syn")]
        mode: String,
        #[command(flatten)]
        suite: Suite,
    },
    /// Deriving a dotted product against the product of derived modes.
    LemmaProduct {
        file: Option<PathBuf>,
        /// Explicit family, e.g. `{{r1},{r2}}`.
        #[arg(long)]
        first: Option<String>,
        #[arg(long)]
        second: Option<String>,
        #[arg(long, value_enum, default_value_t = SemanticsArg::Filtered)]
        semantics: SemanticsArg,
        #[command(flatten)]
        suite: Suite,
    },
    /// One maximally parallel step against the reaction system's result.
    RsEmbed {
        file: Option<PathBuf>,
        #[command(flatten)]
        suite: Suite,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

fn code_of(e: &Error) -> u8 {
    match e {
        Error::Usage(_) | Error::Validation(_) | Error::NotApplicable(_) => 2,
        Error::Parse { .. } => 3,
        Error::Capacity { .. } => 4,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: code_of(&e),
            message: e.to_string(),
        }
    }
}

/// Diagnostics for errors in a model file carry its path; semantic problems
/// with the file's content count as parse errors.
fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        let (code, message) = match &e {
            Error::Parse {
                line,
                offset,
                message,
            } => (3, format!("{}:{line}:{offset}: {message}", path.display())),
            Error::Validation(m) | Error::Usage(m) => (3, format!("{}: {m}", path.display())),
            other => (code_of(other), format!("{}: {other}", path.display())),
        };
        Failure { code, message }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

fn limits() -> Result<Limits, Failure> {
    let mut limits = Limits::default();
    if let Ok(v) = std::env::var("BOOLPS_CAP_VARS") {
        limits.vars = v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("BOOLPS_CAP_VARS must be a number, got `{v}`")))?;
    }
    Ok(limits)
}

/// What a command produced: its output and its exit code.
struct Done {
    output: String,
    code: u8,
}

impl Done {
    fn ok(output: String) -> Self {
        Done { output, code: 0 }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|done| {
        match &cli.out {
            Some(path) => fs::write(path, &done.output)
                .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?,
            None => {
                let mut out = io::stdout().lock();
                let _ = out.write_all(done.output.as_bytes());
            }
        }
        Ok(done.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("boolps: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<Done, Failure> {
    let limits = limits()?;
    let format = cli.format;
    match &cli.command {
        Command::Bn(cmd) => run_bn(cmd, format, &limits),
        Command::Pi(cmd) => run_pi(cmd, format, &limits),
        Command::Translate(cmd) => run_translate(cmd),
        Command::Compose { first, second } => run_compose(first, second),
        Command::Cofase(cmd) => run_cofase(cmd, format, &limits),
        Command::Check(cmd) => run_check(cmd, format, &limits),
    }
}

fn reject_dot(format: Format) -> Result<(), Failure> {
    if format == Format::Dot {
        return Err(Failure::usage(
            "`--format dot` applies to transition relations only",
        ));
    }
    Ok(())
}

fn load_bn(path: &Path) -> Result<boolps::BooleanNetwork, Failure> {
    parse_bn(&read(path)?).map_err(in_file(path))
}

fn mode_of(text: &str, table: &VarTable) -> Result<BooleanMode, Failure> {
    let mode =
        BooleanMode::parse(text, table).map_err(|e| Failure::usage(format!("--mode: {e}")))?;
    mode.check(table)?;
    Ok(mode)
}

fn state_of(text: &str, table: &VarTable) -> Result<boolps::StateSet, Failure> {
    table
        .parse_state(text)
        .map_err(|e| Failure::usage(format!("state `{text}`: {e}")))
}

fn run_bn(cmd: &BnCommand, format: Format, limits: &Limits) -> Result<Done, Failure> {
    match cmd {
        BnCommand::Trace {
            file,
            mode,
            init,
            steps,
        } => {
            reject_dot(format)?;
            let net = load_bn(file)?;
            let t = net.table();
            let mode = mode_of(mode, t)?;
            let start = state_of(init, t)?;
            let (trajectories, truncated) = net.trajectories(&mode, &start, *steps, limits)?;
            let output = match format {
                Format::Json => {
                    let list: Vec<_> = trajectories
                        .iter()
                        .map(|tr| {
                            tr.states
                                .iter()
                                .map(|s| t.show_digits(s))
                                .collect::<Vec<_>>()
                        })
                        .collect();
                    json!({ "trajectories": list, "truncated": truncated }).to_string() + "\n"
                }
                _ => trajectories
                    .iter()
                    .map(|tr| tr.show(|s| t.show_digits(s)) + "\n")
                    .collect(),
            };
            Ok(Done {
                output,
                code: if truncated { 4 } else { 0 },
            })
        }
        BnCommand::Transitions { file, mode } => {
            let net = load_bn(file)?;
            let mode = mode_of(mode, net.table())?;
            let rel = net.transitions(&mode, limits)?;
            Ok(Done::ok(match format {
                Format::Text => rel.to_text(),
                Format::Json => rel.to_json_lines(),
                Format::Dot => rel.to_dot(),
            }))
        }
        BnCommand::Attractors { file, mode } => {
            reject_dot(format)?;
            let net = load_bn(file)?;
            let t = net.table();
            let mode = mode_of(mode, t)?;
            let attractors = net.attractors(&mode, limits)?;
            let shown: Vec<Vec<String>> = attractors
                .iter()
                .map(|a| a.iter().map(|s| t.show_digits(s)).collect())
                .collect();
            Ok(Done::ok(match format {
                Format::Json => json!({ "attractors": shown }).to_string() + "\n",
                _ => shown
                    .iter()
                    .map(|a| format!("{{{}}}\n", a.join(", ")))
                    .collect(),
            }))
        }
    }
}

fn load_system(path: &Path) -> Result<boolps::syntax::SystemFile, Failure> {
    parse_system(&read(path)?).map_err(in_file(path))
}

fn quasimode_for(
    mode: &Option<String>,
    file_default: Option<&Quasimode>,
    system: &BooleanPSystem,
) -> Result<Quasimode, Failure> {
    let q = match mode {
        Some(text) => parse_quasimode(text).map_err(|e| Failure::usage(format!("--mode: {e}")))?,
        None => file_default.cloned().unwrap_or(Quasimode::MaxPar),
    };
    q.check(system)?;
    Ok(q)
}

fn run_pi(cmd: &PiCommand, format: Format, limits: &Limits) -> Result<Done, Failure> {
    match cmd {
        PiCommand::Trace {
            file,
            mode,
            init,
            steps,
            semantics,
        } => {
            reject_dot(format)?;
            let sf = load_system(file)?;
            let system = &sf.system;
            let t = system.table();
            let q = quasimode_for(mode, sf.quasimode.as_ref(), system)?;
            let view = system.derive(&q, (*semantics).into(), limits)?;
            let start = state_of(init, t)?;
            let evolution = system.evolve(&view, &start, *steps, limits)?;
            let output = match format {
                Format::Json => {
                    let runs: Vec<_> = evolution
                        .runs
                        .iter()
                        .map(|r| {
                            json!({
                                "states": r.trajectory.states.iter().map(|s| t.show_set(s)).collect::<Vec<_>>(),
                                "rules": r.trajectory.labels.iter().map(|l| system.ids_of(l)).collect::<Vec<_>>(),
                                "halting": r.halting,
                            })
                        })
                        .collect();
                    json!({ "runs": runs, "truncated": evolution.truncated }).to_string() + "\n"
                }
                _ => evolution
                    .runs
                    .iter()
                    .map(|r| {
                        let line = r.trajectory.show(|s| t.show_set(s));
                        if r.halting {
                            format!("{line} halting\n")
                        } else {
                            line + "\n"
                        }
                    })
                    .collect(),
            };
            Ok(Done {
                output,
                code: if evolution.truncated { 4 } else { 0 },
            })
        }
        PiCommand::Transitions {
            file,
            mode,
            semantics,
        } => {
            let sf = load_system(file)?;
            let system = &sf.system;
            let q = quasimode_for(mode, sf.quasimode.as_ref(), system)?;
            let view = system.derive(&q, (*semantics).into(), limits)?;
            let rel = boolp_transitions(system, &view, limits)?;
            Ok(Done::ok(match format {
                Format::Text => rel.to_text(),
                Format::Json => rel.to_json_lines(),
                Format::Dot => rel.to_dot(),
            }))
        }
    }
}

fn run_translate(cmd: &TranslateCommand) -> Result<Done, Failure> {
    match cmd {
        TranslateCommand::Bn { file, mode } => {
            let net = load_bn(file)?;
            let mode = mode_of(mode, net.table())?;
            let system = bn_to_boolp(&net)?;
            let q = bn_mode_to_quasimode(&mode, &net);
            Ok(Done::ok(system_to_text(&system, Some(&q))))
        }
        TranslateCommand::Bcn { file, mode, regime } => {
            let bcn = parse_bcn(&read(file)?).map_err(in_file(file))?;
            let mode = mode_of(mode, bcn.x_table())?;
            let composite = ControlledComposite::build(&bcn, &mode, (*regime).into())?;
            Ok(Done::ok(composite.to_text()))
        }
        TranslateCommand::Rs { file } => {
            let rs = parse_rs(&read(file)?).map_err(in_file(file))?;
            let (system, q) = rs_to_boolp(&rs)?;
            Ok(Done::ok(system_to_text(&system, Some(&q))))
        }
    }
}

fn run_compose(first: &Path, second: &Path) -> Result<Done, Failure> {
    let a = load_system(first)?;
    let b = load_system(second)?;
    let system = boolps::boolp::union_systems(&a.system, &b.system, &Limits::default())?;
    let q = match (a.quasimode, b.quasimode) {
        (Some(x), Some(y)) => Some(x.dotted(y)),
        (x, y) => x.or(y),
    };
    Ok(Done::ok(system_to_text(&system, q.as_ref())))
}

fn run_cofase(cmd: &CofaseCommand, format: Format, limits: &Limits) -> Result<Done, Failure> {
    reject_dot(format)?;
    match cmd {
        CofaseCommand::Solve {
            file,
            max_phases,
            policy,
            min_steps_per_phase,
            engine,
            max_steps,
        } => {
            let inst = parse_cofase(&read(file)?).map_err(in_file(file))?;
            let policy = match policy {
                PolicyArg::Uniform => Policy::Uniform,
                PolicyArg::PerStart => Policy::PerStart,
            };
            let outcome = match engine {
                Engine::Direct => solve_cofase(
                    &inst,
                    &SearchOptions {
                        max_phases: *max_phases,
                        policy,
                        min_steps_per_phase: *min_steps_per_phase,
                        limits: *limits,
                    },
                )?,
                Engine::Composite => solve_cofase_via_composite(
                    &inst,
                    &CompositeOptions {
                        max_steps: *max_steps,
                        max_phases: Some(*max_phases),
                        policy,
                        min_steps_per_phase: *min_steps_per_phase,
                        limits: *limits,
                    },
                )?,
            };
            let (x, u) = (inst.bcn.x_table(), inst.bcn.u_table());
            Ok(match outcome {
                Outcome::Solved(sol) => Done::ok(match format {
                    Format::Json => sol.to_json(&inst.bcn).to_string() + "\n",
                    _ => {
                        let mut out = format!("solved in {} phase(s)\n", sol.phases());
                        for w in &sol.witnesses {
                            let controls: Vec<String> =
                                w.controls.iter().map(|c| u.show_set(c)).collect();
                            out += &format!(
                                "start {}: controls {}\n  trajectory {}\n  boundaries {:?}\n",
                                x.show_digits(&w.start),
                                controls.join(" "),
                                w.trajectory.show(|s| x.show_digits(s)),
                                w.boundaries
                            );
                        }
                        out
                    }
                }),
                Outcome::NoSolutionWithinBound { bound } => Done {
                    output: match format {
                        Format::Json => {
                            json!({ "solved": false, "bound": bound }).to_string() + "\n"
                        }
                        _ => format!("no solution within bound {bound}\n"),
                    },
                    code: 1,
                },
            })
        }
        CofaseCommand::Verify {
            file,
            controls,
            trajectory,
            boundaries,
            min_steps_per_phase,
        } => {
            let inst = parse_cofase(&read(file)?).map_err(in_file(file))?;
            let (x, u) = (inst.bcn.x_table(), inst.bcn.u_table());
            let controls: Vec<Control> = controls
                .split(';')
                .map(|c| state_of(c, u))
                .collect::<Result<_, _>>()?;
            let states = trajectory
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| state_of(s, x))
                .collect::<Result<Vec<_>, _>>()?;
            let witness = Trajectory::from_states(states)?;
            let boundaries: Vec<usize> = boundaries
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|_| Failure::usage(format!("bad boundary `{s}`")))
                })
                .collect::<Result<_, _>>()?;
            let verdict = verify_control_sequence(
                &inst.bcn,
                &controls,
                &inst.mode,
                &witness,
                &boundaries,
                *min_steps_per_phase,
            )?;
            Ok(match verdict {
                Verification::Accepted => Done::ok(match format {
                    Format::Json => json!({ "accepted": true }).to_string() + "\n",
                    _ => "accepted\n".into(),
                }),
                Verification::Rejected { step, phase } => Done {
                    output: match format {
                        Format::Json => {
                            json!({ "accepted": false, "step": step, "phase": phase + 1 })
                                .to_string()
                                + "\n"
                        }
                        _ => format!("rejected at step {step} (phase {})\n", phase + 1),
                    },
                    code: 1,
                },
            })
        }
    }
}

fn report_output(reports: &[EquivalenceReport], format: Format) -> Done {
    let failed = reports.iter().filter(|r| !r.passed()).count();
    let output = match format {
        Format::Json if reports.len() == 1 => {
            serde_json::to_string(&reports[0]).expect("serializable") + "\n"
        }
        Format::Json => {
            let first_failure = reports.iter().find(|r| !r.passed());
            json!({
                "cases": reports.len(),
                "failed": failed,
                "first_failure": first_failure,
            })
            .to_string()
                + "\n"
        }
        _ if reports.len() == 1 => reports[0].to_text(),
        _ => {
            let mut out = format!(
                "{}: {}/{} cases pass\n",
                reports.first().map_or("check", |r| r.check.as_str()),
                reports.len() - failed,
                reports.len()
            );
            if let Some(r) = reports.iter().find(|r| !r.passed()) {
                out += &r.to_text();
            }
            out
        }
    };
    Done {
        output,
        code: u8::from(failed > 0),
    }
}

fn rename_rules(system: &BooleanPSystem, prefix: &str) -> BooleanPSystem {
    let rules = system
        .rules()
        .iter()
        .map(|r| {
            Rule::new(
                format!("{prefix}{}", r.id),
                r.lhs.clone(),
                r.rhs.clone(),
                r.guard.clone(),
            )
        })
        .collect();
    BooleanPSystem::new(system.table().clone(), rules).expect("same table")
}

fn explicit_family(text: &str, flag: &str) -> Result<Vec<BTreeSet<String>>, Failure> {
    match parse_quasimode(text).map_err(|e| Failure::usage(format!("{flag}: {e}")))? {
        Quasimode::Explicit(f) => Ok(f),
        other => Err(Failure::usage(format!(
            "{flag} must be an explicit family, got `{other}`"
        ))),
    }
}

fn run_check(cmd: &CheckCommand, format: Format, limits: &Limits) -> Result<Done, Failure> {
    reject_dot(format)?;
    let mut reports = Vec::new();
    match cmd {
        CheckCommand::BnSim { file, mode, suite } => match file {
            Some(path) => {
                let net = load_bn(path)?;
                let mode = mode_of(mode, net.table())?;
                reports.push(check_bn_simulation(&net, &mode, limits)?);
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(suite.seed);
                for _ in 0..suite.count {
                    let n = rng.gen_range(2..=5);
                    let net = random_bn(&mut rng, n);
                    let random = random_mode(&mut rng, net.table());
                    for m in [
                        BooleanMode::synchronous(net.table()),
                        BooleanMode::asynchronous(net.table()),
                        random,
                    ] {
                        reports.push(check_bn_simulation(&net, &m, limits)?);
                    }
                }
            }
        },
        CheckCommand::BcnSim { file, mode, suite } => match file {
            Some(path) => {
                let bcn = parse_bcn(&read(path)?).map_err(in_file(path))?;
                let mode = mode_of(mode, bcn.x_table())?;
                reports.push(check_bcn_simulation(&bcn, &mode, limits)?);
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(suite.seed);
                for _ in 0..suite.count {
                    let n = rng.gen_range(2..=3);
                    let bcn = random_freeze_bcn(&mut rng, n);
                    for m in [
                        BooleanMode::synchronous(bcn.x_table()),
                        BooleanMode::asynchronous(bcn.x_table()),
                    ] {
                        reports.push(check_bcn_simulation(&bcn, &m, limits)?);
                    }
                }
            }
        },
        CheckCommand::LemmaProduct {
            file,
            first,
            second,
            semantics,
            suite,
        } => match file {
            Some(path) => {
                let sf = load_system(path)?;
                let (Some(a), Some(b)) = (first, second) else {
                    return Err(Failure::usage("a file check needs --first and --second"));
                };
                let (a, b) = (
                    explicit_family(a, "--first")?,
                    explicit_family(b, "--second")?,
                );
                reports.push(check_product_lemma(
                    &sf.system,
                    &a,
                    &b,
                    (*semantics).into(),
                    limits,
                )?);
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(suite.seed);
                for _ in 0..suite.count {
                    let (v1, v2) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
                    let (r1, r2) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
                    let p1 = random_system(&mut rng, v1, r1);
                    let p2 = rename_rules(&random_system(&mut rng, v2, r2), "q");
                    let union = boolps::boolp::union_systems(&p1, &p2, limits)?;
                    let k1 = rng.gen_range(1..=3);
                    let k2 = rng.gen_range(1..=3);
                    let (Quasimode::Explicit(a), Quasimode::Explicit(b)) = (
                        random_explicit_quasimode(&mut rng, &p1, k1),
                        random_explicit_quasimode(&mut rng, &p2, k2),
                    ) else {
                        unreachable!("explicit generator")
                    };
                    reports.push(check_product_lemma(
                        &union,
                        &a,
                        &b,
                        (*semantics).into(),
                        limits,
                    )?);
                }
            }
        },
        CheckCommand::RsEmbed { file, suite } => match file {
            Some(path) => {
                let rs = parse_rs(&read(path)?).map_err(in_file(path))?;
                reports.push(check_rs_embedding(&rs, limits)?);
            }
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(suite.seed);
                for _ in 0..suite.count {
                    let s = rng.gen_range(1..=6);
                    let a = rng.gen_range(1..=5);
                    reports.push(check_rs_embedding(&random_rs(&mut rng, s, a), limits)?);
                }
            }
        },
    }
    Ok(report_output(&reports, format))
}
