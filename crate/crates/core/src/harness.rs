//! Experiments: seeded repetitions over committee sizes and pivot rules,
//! per-run rows and nearest-rank aggregates.
//!
//! Run `i` (counted over `k` values, then repetitions) uses the seed
//! `base_seed · 1_000_003 + i` with wrapping arithmetic.

use rayon::prelude::*;

use crate::election::{
    approx_f64, fraction_string, pav_score, Committee, Election, Epsilon, Profile,
};
use crate::error::{Error, Result};
use crate::io::CsvTable;
use crate::samplers::{sample, SamplerConfig};
use crate::search::{run, CandidateOrder, PivotRule};

/// The `k` candidates with the highest approval weight, ties to the lower
/// index.
pub fn select_initial_committee(election: &Election) -> Committee {
    let counts = election.profile().approval_counts();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    order.truncate(election.committee_size());
    Committee::new(election, order).expect("top-k is a valid committee")
}

pub fn run_seed(base_seed: u64, index: u64) -> u64 {
    base_seed.wrapping_mul(1_000_003).wrapping_add(index)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleKind {
    LexBetter,
    Best,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::LexBetter => "lex-better",
            RuleKind::Best => "best",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "lex-better" | "lex" | "better" => Ok(RuleKind::LexBetter),
            "best" => Ok(RuleKind::Best),
            _ => Err(Error::InvalidParams(format!("unknown rule {text:?}"))),
        }
    }

    fn pivot(self, m: usize) -> PivotRule {
        match self {
            RuleKind::LexBetter => {
                PivotRule::LexicographicBetterResponse(CandidateOrder::identity(m))
            }
            RuleKind::Best => PivotRule::BestResponse(CandidateOrder::identity(m)),
        }
    }
}

/// Whether the final, unsuccessful scan counts towards comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComparisonConvention {
    #[default]
    IncludeFinalScan,
    ExcludeFinalScan,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Sampler(SamplerConfig),
    /// A fixed profile; every repetition runs on it.
    Profile {
        name: String,
        profile: Profile,
    },
}

impl Source {
    fn name(&self) -> String {
        match self {
            Source::Sampler(c) => format!("{}/n={}/m={}", c.model.name(), c.voters, c.candidates),
            Source::Profile { name, .. } => name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub source: Source,
    pub k_values: Vec<usize>,
    pub repetitions: usize,
    pub epsilon: Epsilon,
    pub rules: Vec<RuleKind>,
    pub base_seed: u64,
    pub parallel: bool,
    pub convention: ComparisonConvention,
    pub step_cap: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(source: Source, k_values: Vec<usize>, repetitions: usize, base_seed: u64) -> Self {
        Self {
            source,
            k_values,
            repetitions,
            epsilon: Epsilon::ZeroPlus,
            rules: vec![RuleKind::LexBetter, RuleKind::Best],
            base_seed,
            parallel: false,
            convention: ComparisonConvention::default(),
            step_cap: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::InvalidParams("repetitions must be >= 1".into()));
        }
        if self.k_values.is_empty() || self.rules.is_empty() {
            return Err(Error::InvalidParams(
                "need at least one k and one rule".into(),
            ));
        }
        let m = match &self.source {
            Source::Sampler(c) => {
                c.validate()?;
                c.candidates
            }
            Source::Profile { profile, .. } => profile.candidate_count(),
        };
        if let Some(&k) = self.k_values.iter().find(|&&k| k == 0 || k > m) {
            return Err(Error::InvalidParams(format!("k = {k} outside [1, {m}]")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunRow {
    pub k: usize,
    pub repetition: usize,
    pub seed: u64,
    pub rule: RuleKind,
    pub swaps: u64,
    pub comparisons: u64,
    pub final_score: String,
    pub final_score_float: String,
    /// `ok` or the error message of a failed run.
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregateRow {
    pub source: String,
    pub k: usize,
    pub rule: RuleKind,
    pub repetitions: usize,
    /// min, q25, median, q75, max.
    pub comparisons: [u64; 5],
    /// min, median, max.
    pub swaps: [u64; 3],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentOutput {
    pub runs: Vec<RunRow>,
    pub aggregates: Vec<AggregateRow>,
    pub runs_csv: String,
    pub aggregate_csv: String,
}

pub const RUN_HEADERS: [&str; 11] = [
    "source",
    "k",
    "repetition",
    "seed",
    "rule",
    "swaps",
    "comparisons",
    "final_score",
    "final_score_float",
    "status",
    "convention",
];

pub const AGGREGATE_HEADERS: [&str; 12] = [
    "source",
    "k",
    "rule",
    "repetitions",
    "comparisons_min",
    "comparisons_q25",
    "comparisons_median",
    "comparisons_q75",
    "comparisons_max",
    "swaps_min",
    "swaps_median",
    "swaps_max",
];

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let tasks: Vec<(usize, usize, u64)> = config
        .k_values
        .iter()
        .enumerate()
        .flat_map(|(ki, &k)| {
            (0..config.repetitions).map(move |rep| {
                (
                    k,
                    rep,
                    run_seed(config.base_seed, (ki * config.repetitions + rep) as u64),
                )
            })
        })
        .collect();
    let work = |&(k, rep, seed): &(usize, usize, u64)| run_task(config, k, rep, seed);
    let runs: Vec<RunRow> = if config.parallel {
        tasks.par_iter().flat_map_iter(work).collect()
    } else {
        tasks.iter().flat_map(work).collect()
    };
    let source = config.source.name();
    let aggregates = aggregate(&source, &runs);
    let convention = match config.convention {
        ComparisonConvention::IncludeFinalScan => "include-final-scan",
        ComparisonConvention::ExcludeFinalScan => "exclude-final-scan",
    };
    let mut runs_table = CsvTable::new(RUN_HEADERS);
    for r in &runs {
        runs_table.push([
            source.clone(),
            r.k.to_string(),
            r.repetition.to_string(),
            r.seed.to_string(),
            r.rule.name().to_string(),
            r.swaps.to_string(),
            r.comparisons.to_string(),
            r.final_score.clone(),
            r.final_score_float.clone(),
            r.status.clone(),
            convention.to_string(),
        ])?;
    }
    Ok(ExperimentOutput {
        aggregate_csv: aggregate_table(&aggregates)?.to_csv()?,
        runs_csv: runs_table.to_csv()?,
        runs,
        aggregates,
    })
}

fn run_task(config: &ExperimentConfig, k: usize, rep: usize, seed: u64) -> Vec<RunRow> {
    let failed = |rule: RuleKind, msg: String| RunRow {
        k,
        repetition: rep,
        seed,
        rule,
        swaps: 0,
        comparisons: 0,
        final_score: String::new(),
        final_score_float: String::new(),
        status: msg,
    };
    let profile = match &config.source {
        Source::Sampler(c) => sample(&c.with_seed(seed)),
        Source::Profile { profile, .. } => Ok(profile.clone()),
    };
    let election = match profile.and_then(|p| p.with_committee_size(k)) {
        Ok(e) => e,
        Err(e) => {
            return config
                .rules
                .iter()
                .map(|&r| failed(r, e.to_string()))
                .collect()
        }
    };
    let start = select_initial_committee(&election);
    config
        .rules
        .iter()
        .map(|&rule| {
            let trace = run(
                &election,
                &start,
                &config.epsilon,
                &rule.pivot(election.candidate_count()),
                config.step_cap,
            );
            match trace.and_then(|t| Ok((pav_score(&election, &t.final_committee)?, t))) {
                Ok((score, t)) => RunRow {
                    k,
                    repetition: rep,
                    seed,
                    rule,
                    swaps: t.swap_count() as u64,
                    comparisons: match config.convention {
                        ComparisonConvention::IncludeFinalScan => t.comparisons,
                        ComparisonConvention::ExcludeFinalScan => {
                            t.comparisons_excluding_final_scan()
                        }
                    },
                    final_score: fraction_string(&score),
                    final_score_float: format!("{:.6}", approx_f64(&score)),
                    status: "ok".into(),
                },
                Err(e) => failed(rule, e.to_string()),
            }
        })
        .collect()
}

/// Nearest-rank quantile of a sorted slice: the value at 1-based index
/// `⌈q·N⌉` with `q = num/den`.
pub fn nearest_rank(sorted: &[u64], num: usize, den: usize) -> Option<u64> {
    if sorted.is_empty() {
        return None;
    }
    let rank = (num * sorted.len()).div_ceil(den).max(1);
    Some(sorted[rank.min(sorted.len()) - 1])
}

/// Groups successful rows by `(k, rule)` in order of first appearance.
pub fn aggregate(source: &str, rows: &[RunRow]) -> Vec<AggregateRow> {
    let mut keys: Vec<(usize, RuleKind)> = Vec::new();
    for r in rows {
        if !keys.contains(&(r.k, r.rule)) {
            keys.push((r.k, r.rule));
        }
    }
    keys.into_iter()
        .filter_map(|(k, rule)| {
            let ok: Vec<&RunRow> = rows
                .iter()
                .filter(|r| r.k == k && r.rule == rule && r.status == "ok")
                .collect();
            if ok.is_empty() {
                log::warn!("no successful runs for k = {k}, rule = {}", rule.name());
                return None;
            }
            let mut cmp: Vec<u64> = ok.iter().map(|r| r.comparisons).collect();
            let mut swaps: Vec<u64> = ok.iter().map(|r| r.swaps).collect();
            cmp.sort_unstable();
            swaps.sort_unstable();
            let q = |v: &[u64], n| nearest_rank(v, n, 4).unwrap();
            Some(AggregateRow {
                source: source.to_string(),
                k,
                rule,
                repetitions: ok.len(),
                comparisons: [
                    cmp[0],
                    q(&cmp, 1),
                    q(&cmp, 2),
                    q(&cmp, 3),
                    cmp[cmp.len() - 1],
                ],
                swaps: [swaps[0], q(&swaps, 2), swaps[swaps.len() - 1]],
            })
        })
        .collect()
}

pub fn aggregate_table(rows: &[AggregateRow]) -> Result<CsvTable> {
    let mut t = CsvTable::new(AGGREGATE_HEADERS);
    for a in rows {
        let mut fields = vec![
            a.source.clone(),
            a.k.to_string(),
            a.rule.name().to_string(),
            a.repetitions.to_string(),
        ];
        fields.extend(a.comparisons.iter().map(u64::to_string));
        fields.extend(a.swaps.iter().map(u64::to_string));
        t.push(fields)?;
    }
    Ok(t)
}

/// Rebuilds run rows from a per-run CSV so aggregates can be recomputed.
pub fn rows_from_csv(table: &CsvTable) -> Result<Vec<RunRow>> {
    let col = |name| table.column(name);
    let (k, rep, seed, rule, swaps, cmp, score, score_f, status) = (
        col("k")?,
        col("repetition")?,
        col("seed")?,
        col("rule")?,
        col("swaps")?,
        col("comparisons")?,
        col("final_score")?,
        col("final_score_float")?,
        col("status")?,
    );
    let num = |s: &str| {
        s.parse::<u64>()
            .map_err(|_| Error::Schema(format!("bad integer {s:?}")))
    };
    table
        .rows
        .iter()
        .map(|r| {
            Ok(RunRow {
                k: num(&r[k])? as usize,
                repetition: num(&r[rep])? as usize,
                seed: num(&r[seed])?,
                rule: RuleKind::parse(&r[rule])?,
                swaps: num(&r[swaps])?,
                comparisons: num(&r[cmp])?,
                final_score: r[score].clone(),
                final_score_float: r[score_f].clone(),
                status: r[status].clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::election::fixtures::{blocs_and_singletons, two_blocs};
    use crate::election::{BallotClass, Rational};
    use crate::samplers::Model;

    #[test]
    fn initial_committee_rules() {
        assert_eq!(select_initial_committee(&two_blocs()).members(), &[0, 1, 2]);
        let e = Election::new(
            (0..5).map(|i| i.to_string()).collect(),
            vec![BallotClass::new(vec![], 3)],
            2,
        )
        .unwrap();
        assert_eq!(select_initial_committee(&e).members(), &[0, 1]);
    }

    #[test]
    fn quantiles() {
        let v = [1, 2, 3, 10];
        assert_eq!(nearest_rank(&v, 2, 4), Some(2));
        assert_eq!(nearest_rank(&v, 3, 4), Some(3));
        assert_eq!(nearest_rank(&v, 1, 4), Some(1));
        assert_eq!(nearest_rank(&[7], 1, 4), Some(7));
        assert_eq!(nearest_rank(&[], 1, 2), None);
    }

    #[test]
    fn blocs_and_singletons_ten_is_fixpoint() {
        let mut c = ExperimentConfig::new(
            Source::Profile {
                name: "blocs-and-singletons".into(),
                profile: blocs_and_singletons().into_profile(),
            },
            vec![3],
            1,
            0,
        );
        c.epsilon = Epsilon::custom(Rational::from_integer(10.into())).unwrap();
        let out = run_experiment(&c).unwrap();
        assert_eq!(out.runs.len(), 2);
        assert!(out.runs.iter().all(|r| r.swaps == 0 && r.status == "ok"));
    }

    #[test]
    fn parallel_matches_serial() {
        let cfg = SamplerConfig::new(Model::ImpartialCulture { p: 0.5 }, 30, 8, 0).unwrap();
        let mut c = ExperimentConfig::new(Source::Sampler(cfg), vec![2, 3], 5, 11);
        let serial = run_experiment(&c).unwrap();
        c.parallel = true;
        let parallel = run_experiment(&c).unwrap();
        assert_eq!(serial, parallel);
        let recomputed = aggregate(
            &serial.aggregates[0].source,
            &rows_from_csv(&crate::io::read_csv(&serial.runs_csv, Some(&RUN_HEADERS)).unwrap())
                .unwrap(),
        );
        assert_eq!(recomputed, serial.aggregates);
    }

    #[test]
    fn seeds() {
        assert_eq!(run_seed(1, 2), 1_000_005);
        assert_eq!(run_seed(u64::MAX, 0), u64::MAX.wrapping_mul(1_000_003));
    }
}
