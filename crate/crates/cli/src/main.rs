//! `symdyn`: batch commands over the constructions in the `symdyn` library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource limit.

mod manifest;

macro_rules! outln {
    ($($t:tt)*) => {
        writeln!(std::io::stdout(), $($t)*)?
    };
}

use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use symdyn::aperiodic::{self, PathWindow};
use symdyn::density::{self, CoveringForest, Slope};
use symdyn::group::DEFAULT_BALL_CAP;
use symdyn::lll::{self, LLLInstance, DEFAULT_RESAMPLE_CAP};
use symdyn::{Error, GroupModel, WindowConfig};

use manifest::Recorder;

#[derive(Parser)]
#[command(
    name = "symdyn",
    version,
    about = "Finite-window constructions from symbolic dynamics on groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Word problem and Cayley balls.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Local lemma constants and verification.
    #[command(subcommand)]
    Lll(LllCmd),
    /// Sample colorings with the resampling algorithm.
    #[command(subcommand)]
    Color(ColorCmd),
    /// Check saved configurations.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Path exhibiting a vertex-square in any coloring fixed by an element.
    Witness {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        word: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Covering forests and uniform-density configurations.
    #[command(subcommand)]
    Density(DensityCmd),
}

#[derive(Args, Clone)]
struct GroupArgs {
    /// `z^d`, `free:k`, `z2*z3` or `heisenberg`.
    #[arg(long)]
    group: String,
    /// Largest ball (in elements) any command may enumerate.
    #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
    ball_cap: usize,
}

impl GroupArgs {
    fn model(&self) -> Result<GroupModel, Failure> {
        Ok(self
            .group
            .parse::<GroupModel>()?
            .with_ball_cap(self.ball_cap))
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Csv,
    Pgm,
}

#[derive(Args, Clone)]
struct OutArgs {
    /// Output file; a manifest is written next to it. Without it, output goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Canonical form of a word.
    Canon {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        word: String,
    },
    /// Members of B(1, R) in canonical breadth-first order.
    Ball {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        radius: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Cayley-graph neighbours of an element.
    Neighbors {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        word: String,
    },
}

#[derive(Subcommand)]
enum LllCmd {
    /// Least C for which the distinct-neighbourhood inequality holds.
    CheckConstant {
        #[arg(long, default_value_t = 32)]
        c_max: u32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Number of colors sufficient for square-free colorings with |S| generators.
    AlphabetBound {
        #[arg(long)]
        s: u64,
    },
    /// Exact check of the asymmetric local lemma condition on an instance file.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args, Clone)]
struct SampleArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum number of resampling steps.
    #[arg(long, default_value_t = DEFAULT_RESAMPLE_CAP)]
    cap: usize,
    /// Also write the event instance as JSON.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Also write the resample trace (event ids in order) as JSON.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ColorCmd {
    /// 2-coloring whose translates by s_1, …, s_n differ on every T-set.
    Two {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        radius: u32,
        #[arg(long, default_value_t = 17)]
        c: u32,
        #[arg(long)]
        levels: usize,
        #[command(flatten)]
        sample: SampleArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Coloring with no vertex-square on paths of at most 2L vertices.
    Squarefree {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        alphabet: u32,
        #[arg(long)]
        maxlen: usize,
        #[command(flatten)]
        sample: SampleArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Distinct-neighbourhood condition on every (n, g) that fits the window.
    Distinct {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 17)]
        c: u32,
        #[arg(long)]
        levels: usize,
        #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
        ball_cap: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exhaustive vertex-square scan over odd paths.
    Squarefree {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        maxlen: usize,
    },
}

#[derive(Args, Clone)]
struct ForestArgs {
    /// Saved forest; otherwise rebuilt from the configuration's window.
    #[arg(long)]
    forest: Option<PathBuf>,
    #[arg(long)]
    levels: Option<usize>,
}

#[derive(Subcommand)]
enum DensityCmd {
    BuildForest {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        levels: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sturmian filling along the forest's convex leaf enumerations.
    Fill {
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long)]
        levels: Option<usize>,
        #[arg(long)]
        forest: Option<PathBuf>,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = DEFAULT_BALL_CAP)]
        ball_cap: usize,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Cluster bounds ⌊α|C|⌋ ≤ ones ≤ ⌊α|C|⌋ + 1 and the aggregate deviation bound.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        forest: ForestArgs,
        #[arg(long)]
        alpha: String,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Exact densities on the balls B(1, r).
    Measure {
        #[arg(long)]
        config: PathBuf,
        /// Radii as `a..b` (inclusive) or a single radius.
        #[arg(long)]
        balls: String,
        #[arg(long)]
        alpha: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
}

enum Failure {
    Usage(String),
    Verification(String),
    Resource(String),
    /// Stdout was closed by the reader (e.g. `| head`); not an error.
    Closed,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Closed => 0,
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Resource(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, msg) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Verification(m) => ("verification", m),
            Failure::Resource(m) => ("resource", m),
            Failure::Closed => return Ok(()),
        };
        write!(f, "error[{kind}]: {}", msg.replace('\n', " "))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else if matches!(e, Error::Inconclusive(_)) {
            Failure::Verification(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Failure::Closed;
        }
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut text = serde_json::to_vec_pretty(value)?;
    text.push(b'\n');
    Ok(text)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(rec: &mut Recorder, out: &OutArgs, bytes: &[u8]) -> CmdResult {
    match &out.out {
        Some(path) => rec.write_primary(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn write_extra(rec: &mut Recorder, path: &Option<PathBuf>, bytes: &[u8]) -> CmdResult {
    if let Some(path) = path {
        rec.write(path, bytes)?;
    }
    Ok(())
}

fn require_format(out: &OutArgs, allowed: &[Format], what: &str) -> CmdResult {
    if allowed.contains(&out.format) {
        Ok(())
    } else {
        let name = out
            .format
            .to_possible_value()
            .unwrap()
            .get_name()
            .to_string();
        Err(Failure::Usage(format!(
            "{what} cannot be written as {name}"
        )))
    }
}

fn config_bytes(x: &WindowConfig, format: Format) -> Result<Vec<u8>, Failure> {
    Ok(match format {
        Format::Json => {
            let mut t = x.to_json()?.into_bytes();
            t.push(b'\n');
            t
        }
        Format::Csv => x.to_csv()?.into_bytes(),
        Format::Pgm => x.to_pgm()?,
        Format::Dot => unreachable!("checked by require_format"),
    })
}

fn slope(text: &str) -> Result<Slope, Failure> {
    Ok(text.parse::<Slope>()?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut rec = Recorder::new();
    // The manifest is written even when verification fails, so failing runs stay auditable.
    let result = run(cli.command, &mut rec);
    let finished = rec.finish().map(|_| ()).map_err(Failure::from);
    let result = result.and(finished);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Closed) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code())
        }
    }
}

fn run(cmd: Command, rec: &mut Recorder) -> CmdResult {
    match cmd {
        Command::Group(c) => group_cmd(c, rec),
        Command::Lll(c) => lll_cmd(c, rec),
        Command::Color(c) => color_cmd(c, rec),
        Command::Verify(c) => verify_cmd(c, rec),
        Command::Witness { group, word, out } => {
            require_format(&out, &[Format::Json, Format::Dot], "a witness path")?;
            let g = group.model()?;
            rec.group = Some(g.spec());
            match aperiodic::witness_path(&g, &word)? {
                aperiodic::Witness::Trivial => {
                    outln!("{word} is the identity; every configuration is fixed by it");
                    Ok(())
                }
                aperiodic::Witness::Path(p) => {
                    let bytes = match out.format {
                        Format::Dot => p.to_dot(&g).into_bytes(),
                        _ => json(&p.to_record(&g))?,
                    };
                    emit(rec, &out, &bytes)
                }
            }
        }
        Command::Density(c) => density_cmd(c, rec),
    }
}

fn group_cmd(cmd: GroupCmd, rec: &mut Recorder) -> CmdResult {
    match cmd {
        GroupCmd::Canon { group, word } => {
            let g = group.model()?;
            outln!("{}", g.format(&g.canonicalize(&word)?));
        }
        GroupCmd::Ball { group, radius, out } => {
            require_format(&out, &[Format::Json], "a ball")?;
            let g = group.model()?;
            rec.group = Some(g.spec());
            rec.caps.insert("ball".into(), g.ball_cap());
            let ball = g.identity_ball(radius)?;
            #[derive(Serialize)]
            struct BallRecord {
                group: String,
                radius: u32,
                size: usize,
                members: Vec<String>,
            }
            let record = BallRecord {
                group: g.spec(),
                radius,
                size: ball.len(),
                members: ball.members().iter().map(|e| g.format(e)).collect(),
            };
            emit(rec, &out, &json(&record)?)?;
            if out.out.is_some() {
                outln!("{} elements", ball.len());
            }
        }
        GroupCmd::Neighbors { group, word } => {
            let g = group.model()?;
            let e = g.canonicalize(&word)?;
            for n in g.neighbors(&e) {
                outln!("{}", g.format(&n));
            }
        }
    }
    Ok(())
}

fn lll_cmd(cmd: LllCmd, rec: &mut Recorder) -> CmdResult {
    match cmd {
        LllCmd::CheckConstant { c_max, out } => {
            require_format(&out, &[Format::Json], "a constant scan")?;
            let least = lll::aperiodic_constant_scan(c_max).map_err(|_| {
                Failure::Verification(format!("no C ≤ {c_max} satisfies the inequality"))
            })?;
            outln!("{least}");
            if out.out.is_some() {
                #[derive(Serialize)]
                struct Row {
                    c: u32,
                    holds: bool,
                    value: f64,
                }
                #[derive(Serialize)]
                struct Scan {
                    least: u32,
                    rows: Vec<Row>,
                }
                let rows = (1..=c_max)
                    .map(|c| Row {
                        c,
                        holds: lll::aperiodic_constant_holds(c),
                        value: lll::aperiodic_constant_value(c),
                    })
                    .collect();
                emit(rec, &out, &json(&Scan { least, rows })?)?;
            }
        }
        LllCmd::AlphabetBound { s } => {
            if s == 0 {
                return Err(Failure::Usage("--s must be positive".into()));
            }
            outln!("{}", lll::squarefree_alphabet_bound(s));
        }
        LllCmd::Verify { instance, out } => {
            require_format(&out, &[Format::Json], "a verdict")?;
            let record = serde_json::from_str(&read(&instance)?)?;
            let inst = LLLInstance::from_record(&record)?;
            let verdict = lll::verify_condition(&inst)?;
            emit(rec, &out, &json(&verdict.to_record())?)?;
            let failing = verdict.failing().count();
            if !verdict.holds {
                return Err(Failure::Verification(format!(
                    "condition fails for {failing} of {} events",
                    inst.events().len()
                )));
            }
            eprintln!("condition holds for all {} events", inst.events().len());
        }
    }
    Ok(())
}

fn sample(
    rec: &mut Recorder,
    inst: &LLLInstance,
    args: &SampleArgs,
) -> Result<lll::Resampling, Failure> {
    rec.seed = Some(args.seed);
    rec.caps.insert("resample".into(), args.cap);
    write_extra(rec, &args.instance, &json(&inst.to_record())?)?;
    if inst.events().is_empty() {
        eprintln!("warning: the window admits no events; the sample is unconstrained");
    }
    let verdict = lll::verify_condition(inst)?;
    if !verdict.holds {
        eprintln!(
            "warning: local lemma condition fails for {} events; resampling may not terminate",
            verdict.failing().count()
        );
    }
    let run = lll::resample(inst, args.seed, args.cap)?;
    write_extra(rec, &args.log, &json(&run.trace)?)?;
    Ok(run)
}

fn color_cmd(cmd: ColorCmd, rec: &mut Recorder) -> CmdResult {
    match cmd {
        ColorCmd::Two {
            group,
            radius,
            c,
            levels,
            sample: args,
            out,
        } => {
            require_format(
                &out,
                &[Format::Json, Format::Csv, Format::Pgm],
                "a configuration",
            )?;
            let g = group.model()?;
            rec.group = Some(g.spec());
            rec.caps.insert("ball".into(), g.ball_cap());
            let tsets = aperiodic::build_t_sets(&g, c, levels)?;
            let built = aperiodic::build_2coloring_instance(&g, radius, &tsets, levels)?;
            let run = sample(rec, &built.instance, &args)?;
            let x = WindowConfig::new(g.clone(), built.window.clone(), 2, run.assignment)?;
            let report = aperiodic::verify_distinct_neighborhood(&x, &tsets, levels);
            emit(rec, &out, &config_bytes(&x, out.format)?)?;
            eprintln!(
                "{} events, {} resamples, {} of {} (n,g) pairs violated",
                built.instance.events().len(),
                run.trace.len(),
                report.violations.len(),
                report.checked
            );
            if !report.violations.is_empty() {
                return Err(Failure::Verification(format!(
                    "{} violations",
                    report.violations.len()
                )));
            }
        }
        ColorCmd::Squarefree {
            group,
            radius,
            alphabet,
            maxlen,
            sample: args,
            out,
        } => {
            require_format(
                &out,
                &[Format::Json, Format::Csv],
                "a square-free configuration",
            )?;
            let g = group.model()?;
            rec.group = Some(g.spec());
            rec.caps.insert("ball".into(), g.ball_cap());
            if !aperiodic::alphabet_is_sufficient(alphabet as u64, g.num_generators()) {
                eprintln!(
                    "warning: {alphabet} colors is below the guaranteed {}",
                    lll::squarefree_alphabet_bound(g.num_generators() as u64)
                );
            }
            let w = PathWindow::new(&g, radius)?;
            let inst = aperiodic::build_squarefree_instance(
                &w,
                alphabet,
                maxlen,
                aperiodic::DEFAULT_PATH_BUDGET,
            )?;
            let run = sample(rec, &inst, &args)?;
            let square = aperiodic::find_vertex_square(&run.assignment, w.graph(), maxlen);
            let x = WindowConfig::new(g.clone(), w.ball().clone(), alphabet, run.assignment)?;
            emit(rec, &out, &config_bytes(&x, out.format)?)?;
            eprintln!(
                "{} path events, {} resamples",
                inst.events().len(),
                run.trace.len()
            );
            if let Some(p) = square {
                return Err(Failure::Verification(format!(
                    "vertex-square on {}",
                    path_text(&g, w.ball(), &p)
                )));
            }
        }
    }
    Ok(())
}

fn path_text(g: &GroupModel, ball: &symdyn::Ball, path: &[usize]) -> String {
    path.iter()
        .map(|&v| {
            let w = g.format(ball.get(v));
            if w.is_empty() {
                "1".into()
            } else {
                w
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn load_config(path: &Path, ball_cap: usize) -> Result<WindowConfig, Failure> {
    let x = WindowConfig::from_json(&read(path)?)?;
    if ball_cap != DEFAULT_BALL_CAP {
        let g = x.group().clone().with_ball_cap(ball_cap);
        return Ok(WindowConfig::new(
            g,
            x.ball().clone(),
            x.alphabet_size(),
            x.symbols().to_vec(),
        )?);
    }
    Ok(x)
}

fn verify_cmd(cmd: VerifyCmd, rec: &mut Recorder) -> CmdResult {
    match cmd {
        VerifyCmd::Distinct {
            config,
            c,
            levels,
            ball_cap,
            out,
        } => {
            require_format(&out, &[Format::Json], "a report")?;
            let x = load_config(&config, ball_cap)?;
            rec.group = Some(x.group().spec());
            let tsets = aperiodic::build_t_sets(x.group(), c, levels)?;
            let report = aperiodic::verify_distinct_neighborhood(&x, &tsets, levels);
            if out.out.is_some() {
                emit(rec, &out, &json(&report)?)?;
            }
            if report.nothing_checked() {
                eprintln!("warning: no (n,g) pair fits the window; the check is vacuous");
            }
            if !report.violations.is_empty() {
                return Err(Failure::Verification(format!(
                    "{} violations among {} checked (n,g) pairs",
                    report.violations.len(),
                    report.checked
                )));
            }
            outln!("0 violations among {} checked (n,g) pairs", report.checked);
        }
        VerifyCmd::Squarefree { config, maxlen } => {
            let x = load_config(&config, DEFAULT_BALL_CAP)?;
            let g = x.group();
            let graph = symdyn::Graph::from_adjacency(x.ball().adjacency(g));
            if let Some(p) = aperiodic::find_vertex_square(x.symbols(), &graph, maxlen) {
                return Err(Failure::Verification(format!(
                    "vertex-square on {}",
                    path_text(g, x.ball(), &p)
                )));
            }
            outln!(
                "no vertex-square on paths of at most {} vertices",
                2 * maxlen
            );
        }
    }
    Ok(())
}

fn forest_for(x: &WindowConfig, args: &ForestArgs) -> Result<CoveringForest, Failure> {
    match (&args.forest, args.levels) {
        (Some(path), _) => {
            let record = serde_json::from_str(&read(path)?)?;
            Ok(CoveringForest::from_record(&record)?)
        }
        (None, Some(levels)) => Ok(CoveringForest::build(x.group(), x.radius(), levels)?),
        (None, None) => Err(Failure::Usage("pass --forest or --levels".into())),
    }
}

fn radii(text: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::Usage(format!("cannot parse radii {text:?}; expected a..b"));
    match text.split_once("..") {
        Some((a, b)) => {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![text.trim().parse().map_err(|_| bad())?]),
    }
}

fn density_cmd(cmd: DensityCmd, rec: &mut Recorder) -> CmdResult {
    match cmd {
        DensityCmd::BuildForest {
            group,
            radius,
            levels,
            out,
        } => {
            require_format(&out, &[Format::Json, Format::Dot], "a forest")?;
            let g = group.model()?;
            rec.group = Some(g.spec());
            let f = CoveringForest::build(&g, radius, levels)?;
            f.check_invariants()?;
            let bytes = match out.format {
                Format::Dot => f.to_dot().into_bytes(),
                _ => json(&f.to_record())?,
            };
            emit(rec, &out, &bytes)?;
            let sizes: Vec<String> = (0..=levels)
                .map(|n| f.centers(n).len().to_string())
                .collect();
            eprintln!("level sizes {}", sizes.join(" "));
        }
        DensityCmd::Fill {
            group,
            radius,
            levels,
            forest,
            alpha,
            ball_cap,
            out,
        } => {
            require_format(
                &out,
                &[Format::Json, Format::Csv, Format::Pgm],
                "a configuration",
            )?;
            let alpha = slope(&alpha)?;
            let f = match (forest, group, radius, levels) {
                (Some(path), _, _, _) => {
                    CoveringForest::from_record(&serde_json::from_str(&read(&path)?)?)?
                }
                (None, Some(group), Some(radius), Some(levels)) => {
                    let g = group.parse::<GroupModel>()?.with_ball_cap(ball_cap);
                    CoveringForest::build(&g, radius, levels)?
                }
                _ => {
                    return Err(Failure::Usage(
                        "pass --forest, or --group, --radius and --levels".into(),
                    ))
                }
            };
            rec.group = Some(f.group().spec());
            if let Some(x) = alpha.approximates() {
                eprintln!("note: slope {x} approximated by the convergent {alpha}");
            }
            let x = density::fill_density(&f, &alpha)?;
            emit(rec, &out, &config_bytes(&x, out.format)?)?;
        }
        DensityCmd::Verify {
            config,
            forest,
            alpha,
            out,
        } => {
            require_format(&out, &[Format::Json], "a report")?;
            let alpha = slope(&alpha)?;
            let x = load_config(&config, DEFAULT_BALL_CAP)?;
            rec.group = Some(x.group().spec());
            let f = forest_for(&x, &forest)?;
            let report = density::verify_condition1(&x, &f, &alpha)?;
            if out.out.is_some() {
                emit(rec, &out, &json(&report)?)?;
            }
            for a in &report.aggregates {
                eprintln!(
                    "level {}: {} interior clusters, |dens − α| = {} ≤ |V|/|U| = {}: {}",
                    a.level,
                    a.centers,
                    a.deviation,
                    a.bound,
                    if a.pass { "ok" } else { "FAILS" }
                );
            }
            if !report.holds() {
                return Err(Failure::Verification(format!(
                    "{} interior clusters violate the bound",
                    report.failures().count()
                )));
            }
            outln!(
                "{} interior clusters satisfy the bound",
                report.clusters.len()
            );
        }
        DensityCmd::Measure {
            config,
            balls,
            alpha,
            out,
        } => {
            require_format(&out, &[Format::Json], "a report")?;
            let x = load_config(&config, DEFAULT_BALL_CAP)?;
            rec.group = Some(x.group().spec());
            let alpha = alpha.as_deref().map(slope).transpose()?;
            let sets = density::ball_sequence(x.group(), radii(&balls)?)?;
            let report = density::measure_density(&x, &sets, alpha.as_ref())?;
            emit(rec, &out, &json(&report)?)?;
        }
    }
    Ok(())
}
