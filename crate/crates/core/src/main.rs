use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pavls::constructions::{
    self as cons, DummyReading, HardenedParams, LabeledElection, LayeredParams,
};
use pavls::election::{approx_f64, fraction_string, pav_score, validate_sequence};
use pavls::harness::{
    run_experiment, select_initial_committee, ComparisonConvention, ExperimentConfig, RuleKind,
    Source,
};
use pavls::io::{self, SequenceFile};
use pavls::oracle::{self, GainOutcome, LevelRule};
use pavls::samplers::{self, Model, SamplerConfig};
use pavls::search::{run, PivotRule};
use pavls::{Committee, Election, Epsilon, Rational};

#[derive(Parser)]
#[command(
    name = "pavls",
    version,
    about = "Local search for Proportional Approval Voting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a synthetic election.
    Sample(SampleArgs),
    /// Emit an instance family with its label sidecar and swap sequence.
    Construct(ConstructArgs),
    /// Replay a sequence file and report whether every swap is good.
    Certify(CertifyArgs),
    /// Run local search on one election.
    Run(RunArgs),
    /// Seeded repetitions over committee sizes and pivot rules.
    Experiment(ExperimentArgs),
    /// Brute-force checks.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Native,
    PreflibCat,
}

#[derive(Args)]
struct Input {
    /// Election file.
    #[arg(long)]
    election: PathBuf,
    #[arg(long, value_enum, default_value = "native")]
    format: Format,
    /// 1-based categories counted as approval (PrefLib input).
    #[arg(long, value_delimiter = ',', default_value = "1")]
    approve_categories: Vec<usize>,
    /// Committee size; required for PrefLib input, overrides the file otherwise.
    #[arg(long)]
    k: Option<usize>,
}

impl Input {
    fn load(&self) -> Result<Election> {
        let text = fs::read_to_string(&self.election)
            .with_context(|| format!("reading {}", self.election.display()))?;
        match self.format {
            Format::Native => {
                let e = io::parse_native(&text)?;
                Ok(match self.k {
                    Some(k) => e.resized(k)?,
                    None => e,
                })
            }
            Format::PreflibCat => {
                let approved: BTreeSet<usize> = self.approve_categories.iter().copied().collect();
                let data = io::parse_preflib_categorical(&text, &approved)?;
                for w in &data.warnings {
                    log::warn!("{w}");
                }
                let k = self.k.context("--k is required for PrefLib input")?;
                Ok(data.profile.with_committee_size(k)?)
            }
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    /// `ic:<p>`, `resampling:<p>:<phi>` or `euclidean:<d>:<r>`.
    #[arg(long)]
    model: String,
    #[arg(long, default_value_t = 100)]
    voters: usize,
    #[arg(long, default_value_t = 20)]
    candidates: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout if absent).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Warmup,
    F,
    E,
    Et,
    Layered,
    Hardened,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// Number of columns for layered/hardened (default ⌈log₂ k⌉).
    #[arg(long)]
    levels: Option<usize>,
    /// Realise the last column's extra dummy as an extra voter.
    #[arg(long)]
    extra_voter: bool,
    /// Blocker parameter γ as `num/den` or an integer.
    #[arg(long)]
    gamma: Option<String>,
    /// Election output; labels go to `<output>.labels`, the sequence to `<output>.seq`.
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Args)]
struct CertifyArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    sequence: PathBuf,
    /// `threshold`, `zero-plus` or a fraction.
    #[arg(long, default_value = "zero-plus")]
    epsilon: String,
    /// Starting committee when the sequence file has none.
    #[arg(long, value_delimiter = ',')]
    start: Option<Vec<usize>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Lex,
    Best,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value = "lex")]
    rule: Rule,
    #[arg(long, default_value = "zero-plus")]
    epsilon: String,
    /// Starting committee (default: the k most-approved candidates).
    #[arg(long, value_delimiter = ',')]
    start: Option<Vec<usize>>,
    #[arg(long)]
    step_cap: Option<usize>,
    /// Write the per-swap trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Sampling model; ignored with --election.
    #[arg(long, default_value = "ic:0.5")]
    model: String,
    #[arg(long, default_value_t = 100)]
    voters: usize,
    #[arg(long, default_value_t = 20)]
    candidates: usize,
    /// Fixed election instead of sampling.
    #[arg(long)]
    election: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "3,4,5,6,7,8,9,10")]
    k: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    repetitions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "lex-better,best")]
    rules: Vec<String>,
    #[arg(long, default_value = "zero-plus")]
    epsilon: String,
    #[arg(long)]
    parallel: bool,
    /// Leave out the final scan that finds no improving swap.
    #[arg(long)]
    exclude_final_scan: bool,
    /// Directory for runs.csv and aggregate.csv.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    Optimum,
    LocalOpt,
    GainSearch,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    mode: OracleMode,
    #[arg(long)]
    election: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "native")]
    format: Format,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    approve_categories: Vec<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Committee to test in local-opt mode.
    #[arg(long, value_delimiter = ',')]
    committee: Option<Vec<usize>>,
    #[arg(long, default_value = "zero-plus")]
    epsilon: String,
    /// Enumeration cap for optimum mode.
    #[arg(long, default_value_t = oracle::DEFAULT_ENUMERATION_CAP)]
    cap: u128,
    /// `log` or a fixed level count (gain-search mode).
    #[arg(long, default_value = "log")]
    levels: String,
    #[arg(long, default_value_t = 4)]
    k_min: usize,
    #[arg(long, default_value_t = 64)]
    k_max: usize,
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = dispatch(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sample(a) => sample(a),
        Command::Construct(a) => construct(a),
        Command::Certify(a) => certify(a),
        Command::Run(a) => run_one(a),
        Command::Experiment(a) => experiment(a),
        Command::Oracle(a) => oracle_cmd(a),
    }
}

fn write_or_print(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sample(a: SampleArgs) -> Result<()> {
    let config = SamplerConfig::new(Model::parse(&a.model)?, a.voters, a.candidates, a.seed)?;
    let election = samplers::sample(&config)?.with_committee_size(a.k)?;
    write_or_print(a.output.as_deref(), &io::serialize_native(&election))
}

fn parse_rational(text: &str) -> Result<Rational> {
    match Epsilon::parse(text)? {
        Epsilon::Custom(r) => Ok(r),
        _ => bail!("expected a number, got {text:?}"),
    }
}

fn sidecar(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn construct(a: ConstructArgs) -> Result<()> {
    let need = |v: Option<usize>, name: &str| {
        v.with_context(|| format!("--{name} is required for this family"))
    };
    let layered = || -> Result<LayeredParams> {
        let levels = a.levels.unwrap_or_else(|| LayeredParams::log_levels(a.k));
        let reading = if a.extra_voter {
            DummyReading::ExtraVoter
        } else {
            DummyReading::Candidate
        };
        Ok(LayeredParams::new(levels, a.k)?.with_dummy_reading(reading))
    };
    let (le, seq): (LabeledElection, Option<SequenceFile>) = match a.family {
        Family::Warmup => {
            let le = cons::warmup_election(a.k)?;
            let start = cons::warmup_initial_committee(&le)?.members().to_vec();
            let swaps = cons::warmup_sequence(a.k)?;
            (
                le,
                Some(SequenceFile {
                    start: Some(start),
                    swaps,
                }),
            )
        }
        Family::F => (cons::f_election(need(a.j, "j")?, a.k)?, None),
        Family::E => (cons::e_election(need(a.j, "j")?, a.k)?, None),
        Family::Et => (
            cons::e_t_election(need(a.t, "t")?, need(a.j, "j")?, a.k)?,
            None,
        ),
        Family::Layered => {
            let p = layered()?;
            let report = cons::gain_holds(&p);
            if !report.passes() {
                log::warn!(
                    "gain inequality fails for L = {}, k = {}",
                    p.levels(),
                    p.k()
                );
            }
            let le = cons::layered_election(&p)?;
            let swaps = cons::build_x_sequence(&p, p.levels(), 1);
            (
                le,
                Some(SequenceFile {
                    start: Some(p.initial_members()),
                    swaps,
                }),
            )
        }
        Family::Hardened => {
            let mut hp = HardenedParams::new(layered()?);
            if let Some(g) = &a.gamma {
                hp = hp.with_gamma(parse_rational(g)?)?;
            }
            if let Err(e) = cons::certify_gamma(&hp) {
                log::warn!("{e}");
            }
            let le = cons::hardened_election(&hp)?;
            let swaps = cons::build_z_sequence(&hp);
            (
                le,
                Some(SequenceFile {
                    start: Some(hp.initial_members()),
                    swaps,
                }),
            )
        }
    };
    fs::write(&a.output, io::serialize_native(&le.election))?;
    fs::write(sidecar(&a.output, ".labels"), io::serialize_labels(&le))?;
    if let Some(seq) = seq {
        fs::write(sidecar(&a.output, ".seq"), io::serialize_sequence(&seq))?;
    }
    println!(
        "wrote {} (m = {}, classes = {}, n = {}, k = {})",
        a.output.display(),
        le.election.candidate_count(),
        le.election.ballots().len(),
        le.election.voter_count(),
        le.election.committee_size()
    );
    Ok(())
}

fn certify(a: CertifyArgs) -> Result<()> {
    let election = a.input.load()?;
    let file = io::parse_sequence(&fs::read_to_string(&a.sequence)?)?;
    let start = file
        .start
        .or(a.start)
        .context("no starting committee in the sequence file or --start")?;
    let start = Committee::new(&election, start)?;
    let eps = Epsilon::parse(&a.epsilon)?;
    log::info!("replaying {} swaps", file.swaps.len());
    let report = validate_sequence(&election, &start, &file.swaps, &eps)?;
    println!(
        "swaps: {} replayed: {}",
        file.swaps.len(),
        report.steps_replayed
    );
    println!("epsilon: {}", fraction_string(&eps.value(&election)));
    if let Some(min) = &report.min_delta {
        println!("min delta: {}", fraction_string(min));
    }
    println!("total gain: {}", fraction_string(&report.total_gain));
    println!("final committee: {}", report.final_committee);
    if let Some((i, why)) = &report.structural_failure {
        bail!("step {i} is not a valid swap: {why}");
    }
    if let Some(i) = report.first_bad_step {
        bail!("step {i} is not good");
    }
    println!("certified");
    Ok(())
}

fn run_one(a: RunArgs) -> Result<()> {
    let election = a.input.load()?;
    let start = match a.start {
        Some(s) => Committee::new(&election, s)?,
        None => select_initial_committee(&election),
    };
    let eps = Epsilon::parse(&a.epsilon)?;
    let m = election.candidate_count();
    let rule = match a.rule {
        Rule::Lex => PivotRule::lex(m),
        Rule::Best => PivotRule::best(m),
    };
    log::info!("{} from {start}", rule.name());
    let trace = run(&election, &start, &eps, &rule, a.step_cap)?;
    let score = pav_score(&election, &trace.final_committee)?;
    println!("rule: {}", rule.name());
    println!("start: {}", trace.initial_committee);
    println!("swaps: {}", trace.swap_count());
    println!("comparisons: {}", trace.comparisons);
    println!("final committee: {}", trace.final_committee);
    println!(
        "final score: {} ({:.6})",
        fraction_string(&score),
        approx_f64(&score)
    );
    println!("terminated: {}", trace.terminated);
    if let Some(p) = a.trace {
        fs::write(&p, io::trace_table(&trace).to_csv()?)?;
    }
    Ok(())
}

fn experiment(a: ExperimentArgs) -> Result<()> {
    let source = match &a.election {
        Some(path) => Source::Profile {
            name: path.display().to_string(),
            profile: io::parse_native(&fs::read_to_string(path)?)?.into_profile(),
        },
        None => Source::Sampler(SamplerConfig::new(
            Model::parse(&a.model)?,
            a.voters,
            a.candidates,
            0,
        )?),
    };
    let mut config = ExperimentConfig::new(source, a.k, a.repetitions, a.seed);
    config.rules = a
        .rules
        .iter()
        .map(|r| RuleKind::parse(r))
        .collect::<pavls::Result<_>>()?;
    config.epsilon = Epsilon::parse(&a.epsilon)?;
    config.parallel = a.parallel;
    if a.exclude_final_scan {
        config.convention = ComparisonConvention::ExcludeFinalScan;
    }
    log::info!(
        "{} k values x {} repetitions x {} rules",
        config.k_values.len(),
        config.repetitions,
        config.rules.len()
    );
    let out = run_experiment(&config)?;
    log::info!("{} runs finished", out.runs.len());
    fs::create_dir_all(&a.out_dir)?;
    fs::write(a.out_dir.join("runs.csv"), &out.runs_csv)?;
    fs::write(a.out_dir.join("aggregate.csv"), &out.aggregate_csv)?;
    print!("{}", out.aggregate_csv);
    let failed = out.runs.iter().filter(|r| r.status != "ok").count();
    if failed > 0 {
        bail!("{failed} runs failed");
    }
    Ok(())
}

fn oracle_cmd(a: OracleArgs) -> Result<()> {
    if let OracleMode::GainSearch = a.mode {
        let rule = match a.levels.as_str() {
            "log" => LevelRule::Log,
            n => LevelRule::Fixed(n.parse().context("--levels must be `log` or an integer")?),
        };
        let report = oracle::min_k_gain_search(rule, a.k_min..=a.k_max);
        for e in &report.entries {
            let outcome = match &e.outcome {
                GainOutcome::Passes => "pass".to_string(),
                GainOutcome::Fails { worst_margin } => {
                    format!("fail (margin {})", fraction_string(worst_margin))
                }
                GainOutcome::InvalidParams(why) => format!("invalid ({why})"),
            };
            println!("k = {} L = {}: {outcome}", e.k, e.levels);
        }
        match report.first_pass {
            Some(k) => println!("first pass: k = {k}"),
            None => println!("no k in range passes"),
        }
        return Ok(());
    }
    let input = Input {
        election: a.election.context("--election is required")?,
        format: a.format,
        approve_categories: a.approve_categories,
        k: a.k,
    };
    let election = input.load()?;
    match a.mode {
        OracleMode::Optimum => {
            let r = oracle::brute_force_optimum(&election, Some(a.cap))?;
            println!(
                "optimum score: {} ({:.6})",
                fraction_string(&r.optimum_score),
                approx_f64(&r.optimum_score)
            );
            for w in &r.optimal_committees {
                println!("optimal: {w}");
            }
        }
        OracleMode::LocalOpt => {
            let w = match a.committee {
                Some(c) => Committee::new(&election, c)?,
                None => select_initial_committee(&election),
            };
            let r = oracle::is_locally_optimal(&election, &w, &Epsilon::parse(&a.epsilon)?)?;
            println!("committee: {w}");
            println!("locally optimal: {}", r.optimal);
            if let Some((s, d)) = r.witness {
                println!("witness: {s} delta {}", fraction_string(&d));
            }
        }
        OracleMode::GainSearch => unreachable!(),
    }
    Ok(())
}
