//! The `klq` command line: argument parsing, job resolution, result files.
//!
//! Generators are named by their labels on the command line and in result
//! files: `1..=n` for finite types and Cartan files, `0..=n` for affine `Ã_n`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use clap::{ArgAction, ArgGroup, Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::affine_an::{is_p_restricted, weight_to_y, Weight};
use crate::coxeter::{CartanType, CoxeterSystem};
use crate::engine::{
    checkpoint_job, compute_checked, compute_target, resume_target, CheckpointPolicy,
    EngineOptions, KLResult, DEFAULT_CHECKPOINT_INTERVAL,
};
use crate::error::{KlError, Result};
use crate::laurent::LaurentPoly;
use crate::oracle::compare_all;

/// Environment variable overriding the default checkpoint interval (seconds).
pub const CHECKPOINT_INTERVAL_ENV: &str = "KLQ_CHECKPOINT_INTERVAL";

#[derive(Parser, Debug)]
#[command(name = "klq", version, about = "Targeted parabolic Kazhdan-Lusztig polynomials")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute all P^J_{x,y} and mu(x,y) for one target y.
    Compute(ComputeArgs),
    /// Continue a checkpointed computation.
    Resume(ResumeArgs),
    /// Compare the engine with the recursion oracle on every target.
    OracleCheck(OracleCheckArgs),
    /// Run the invariant suite on small systems.
    Selftest,
}

#[derive(Args, Debug, Clone)]
pub struct SystemArgs {
    /// Named type: A, B, D, G2 or affine-A.
    #[arg(long = "type", value_name = "TYPE", conflicts_with = "cartan")]
    pub kind: Option<CartanType>,
    /// Rank of the named type.
    #[arg(long)]
    pub n: Option<usize>,
    /// JSON file with {"cartan": [[..]], "J": [..]} or {"type", "n", "J"}.
    #[arg(long, value_name = "FILE")]
    pub cartan: Option<PathBuf>,
    /// Parabolic subset: a range "1..4", a list "1,3", or "none".
    #[arg(long = "J", value_name = "SET")]
    pub j: Option<String>,
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("target").required(true).args(["word", "weight"])))]
pub struct ComputeArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Reduced word of y, comma separated ("e" for the identity).
    #[arg(long, allow_hyphen_values = true)]
    pub word: Option<String>,
    /// Dominant weight selecting y in affine A_n, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<String>,
    /// Dilation for --weight; defaults to n + 1.
    #[arg(long, requires = "weight")]
    pub p: Option<i64>,
    /// Result file; stdout if absent.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Write only the mu values.
    #[arg(long)]
    pub mu_only: bool,
    /// Checkpoint file, written atomically during the run
    #[arg(long, value_name = "FILE")]
    pub checkpoint: Option<PathBuf>,
    /// Seconds between checkpoints.
    #[arg(long, value_name = "SECS", requires = "checkpoint")]
    pub checkpoint_interval: Option<u64>,
    /// Also checkpoint at every wave boundary.
    #[arg(long, requires = "checkpoint")]
    pub every_wave: bool,
    /// Worker threads for the corrections of one wave
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Capacity of the D' prefix cache (off by default).
    #[arg(long, value_name = "ENTRIES")]
    pub cache: Option<usize>,
    /// Accept weights outside [0, p-1].
    #[arg(long)]
    pub allow_unrestricted: bool,
    /// Stop after this many waves, leaving a checkpoint (testing aid).
    #[arg(long, hide = true, requires = "checkpoint")]
    pub halt_after_waves: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct ResumeArgs {
    /// Checkpoint written by an earlier compute run
    #[arg(long, value_name = "FILE")]
    pub checkpoint: PathBuf,
    /// Overrides the result path recorded in the checkpoint.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the original run's setting
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, hide = true)]
    pub halt_after_waves: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct OracleCheckArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Only targets up to this length (needed for infinite groups).
    #[arg(long, default_value_t = 64)]
    pub max_length: usize,
}

/// The Coxeter system of a job, without `J`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemSpec {
    Named {
        #[serde(rename = "type")]
        kind: CartanType,
        n: usize,
    },
    Cartan {
        cartan: Vec<Vec<i64>>,
    },
}

impl SystemSpec {
    /// Label of generator index 0.
    pub fn label_offset(&self) -> usize {
        match self {
            SystemSpec::Named {
                kind: CartanType::AffineA,
                ..
            } => 0,
            _ => 1,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            SystemSpec::Named {
                kind: CartanType::AffineA,
                n,
            } => n + 1,
            SystemSpec::Named { n, .. } => *n,
            SystemSpec::Cartan { cartan } => cartan.len(),
        }
    }

    /// Builds the system with `J` given by labels.
    pub fn build(&self, j_labels: &[usize]) -> Result<CoxeterSystem> {
        let j = labels_to_indices(j_labels, self.label_offset(), self.rank(), "J")?;
        match self {
            SystemSpec::Named { kind, n } => CoxeterSystem::named(*kind, *n, &j),
            SystemSpec::Cartan { cartan } => CoxeterSystem::from_cartan(cartan.clone(), &j),
        }
    }
}

/// What to compute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// Reduced word, by labels.
    Word(Vec<usize>),
    Weight { weight: Vec<i64>, p: i64 },
}

/// A fully validated `compute` job. Stored in checkpoints so that `resume`
/// needs nothing else.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub system: SystemSpec,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    pub target: Target,
    pub out: Option<PathBuf>,
    pub mu_only: bool,
    pub checkpoint: Option<PathBuf>,
    /// Seconds.
    pub checkpoint_interval: u64,
    pub every_wave: bool,
    pub threads: usize,
    pub cache: Option<usize>,
    pub allow_unrestricted: bool,
    #[serde(skip)]
    pub halt_after_waves: Option<u64>,
}

/// A parsed command line.
#[derive(Debug, Clone)]
pub enum Invocation {
    Compute(JobSpec),
    Resume(ResumeArgs),
    OracleCheck {
        system: SystemSpec,
        j: Vec<usize>,
        max_length: usize,
    },
    Selftest,
}

fn usage(msg: impl Into<String>) -> KlError {
    KlError::Usage(msg.into())
}

fn labels_to_indices(labels: &[usize], offset: usize, rank: usize, what: &str) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|&l| {
            l.checked_sub(offset)
                .filter(|&i| i < rank)
                .ok_or_else(|| {
                    KlError::InvalidInput(format!(
                        "{what}: generator label {l} is outside {offset}..={}",
                        offset + rank - 1
                    ))
                })
        })
        .collect()
}

/// Parses "e", "", "2,1,3,2" or "2 1 3 2".
pub fn parse_word(s: &str, flag: &str) -> Result<Vec<usize>> {
    let t = s.trim();
    if t.is_empty() || t == "e" {
        return Ok(Vec::new());
    }
    t.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| usage(format!("{flag}: {p:?} is not a generator label")))
        })
        .collect()
}

/// Parses "1..4" (inclusive), "1,3", or "none".
pub fn parse_label_set(s: &str) -> Result<Vec<usize>> {
    let t = s.trim();
    if t.is_empty() || t == "none" {
        return Ok(Vec::new());
    }
    let mut out = if let Some((a, b)) = t.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| usage(format!("--J: bad range {t:?}")))?;
        let b: usize = b
            .trim()
            .trim_start_matches('=')
            .parse()
            .map_err(|_| usage(format!("--J: bad range {t:?}")))?;
        (a..=b).collect()
    } else {
        parse_word(t, "--J")?
    };
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemFile {
    #[serde(default)]
    cartan: Option<Vec<Vec<i64>>>,
    #[serde(default, rename = "type")]
    kind: Option<CartanType>,
    #[serde(default)]
    n: Option<usize>,
    #[serde(default, rename = "J")]
    j: Option<Vec<usize>>,
}

fn named(kind: CartanType, n: Option<usize>) -> Result<SystemSpec> {
    let n = match (kind, n) {
        (CartanType::G2, None | Some(2)) => 2,
        (CartanType::G2, Some(n)) => return Err(usage(format!("--n: G2 has rank 2, not {n}"))),
        (_, Some(n)) if n >= 1 => n,
        (_, Some(_)) => return Err(usage("--n must be at least 1")),
        (_, None) => return Err(usage("--type requires --n")),
    };
    Ok(SystemSpec::Named { kind, n })
}

/// Resolves the system flags to a spec and the `J` labels.
pub fn resolve_system(args: &SystemArgs) -> Result<(SystemSpec, Option<Vec<usize>>)> {
    let flag_j = args.j.as_deref().map(parse_label_set).transpose()?;
    match (&args.kind, &args.cartan) {
        (Some(kind), None) => Ok((named(*kind, args.n)?, flag_j)),
        (None, Some(path)) => {
            if args.n.is_some() {
                return Err(usage("--n cannot be combined with --cartan"));
            }
            let text = fs::read_to_string(path).map_err(|e| {
                KlError::InvalidInput(format!("cannot read {}: {e}", path.display()))
            })?;
            let f: SystemFile = serde_json::from_str(&text).map_err(|e| {
                KlError::InvalidInput(format!("{}: {e}", path.display()))
            })?;
            let spec = match (f.cartan, f.kind) {
                (Some(c), None) => SystemSpec::Cartan { cartan: c },
                (None, Some(kind)) => named(kind, f.n)
                    .map_err(|e| KlError::InvalidInput(format!("{}: {e}", path.display())))?,
                _ => {
                    return Err(KlError::InvalidInput(format!(
                        "{}: give exactly one of \"cartan\" and \"type\"",
                        path.display()
                    )))
                }
            };
            Ok((spec, flag_j.or(f.j)))
        }
        (None, None) => Err(usage("one of --type or --cartan is required")),
        (Some(_), Some(_)) => Err(usage("--type and --cartan are mutually exclusive")),
    }
}

fn interval_default() -> Result<u64> {
    match std::env::var(CHECKPOINT_INTERVAL_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            usage(format!("{CHECKPOINT_INTERVAL_ENV}={v:?} is not a number of seconds"))
        }),
        Err(_) => Ok(DEFAULT_CHECKPOINT_INTERVAL.as_secs()),
    }
}

/// Turns `compute` flags into a job; the system itself is validated later.
pub fn job_from_args(a: &ComputeArgs) -> Result<JobSpec> {
    let (system, j) = resolve_system(&a.system)?;
    if a.threads == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    let (target, j) = match (&a.word, &a.weight) {
        (Some(w), None) => (Target::Word(parse_word(w, "--word")?), j.unwrap_or_default()),
        (None, Some(w)) => {
            let n = match system {
                SystemSpec::Named {
                    kind: CartanType::AffineA,
                    n,
                } => n,
                _ => return Err(usage("--weight requires --type affine-A")),
            };
            let weight: Weight = w.parse().map_err(|e: KlError| usage(format!("--weight: {e}")))?;
            let p = a.p.unwrap_or(n as i64 + 1);
            let full: Vec<usize> = (1..=n).collect();
            let j = j.unwrap_or_else(|| full.clone());
            if j != full {
                return Err(usage(format!("--weight requires --J 1..{n}")));
            }
            (
                Target::Weight {
                    weight: weight.0,
                    p,
                },
                j,
            )
        }
        _ => return Err(usage("exactly one of --word and --weight is required")),
    };
    let checkpoint_interval = match a.checkpoint_interval {
        Some(s) => s,
        None => interval_default()?,
    };
    Ok(JobSpec {
        system,
        j,
        target,
        out: a.out.clone(),
        mu_only: a.mu_only,
        checkpoint: a.checkpoint.clone(),
        checkpoint_interval,
        every_wave: a.every_wave,
        threads: a.threads,
        cache: a.cache,
        allow_unrestricted: a.allow_unrestricted,
        halt_after_waves: a.halt_after_waves,
    })
}

/// Parses a full argument vector (program name first).
pub fn parse_args<I, T>(argv: I) -> Result<Invocation>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| usage(e.to_string()))?;
    invocation(cli.command)
}

fn invocation(cmd: Command) -> Result<Invocation> {
    Ok(match cmd {
        Command::Compute(a) => Invocation::Compute(job_from_args(&a)?),
        Command::Resume(r) => {
            if r.threads == Some(0) {
                return Err(usage("--threads must be at least 1"));
            }
            Invocation::Resume(r)
        }
        Command::OracleCheck(o) => {
            let (system, j) = resolve_system(&o.system)?;
            Invocation::OracleCheck {
                system,
                j: j.unwrap_or_default(),
                max_length: o.max_length,
            }
        }
        Command::Selftest => Invocation::Selftest,
    })
}

/// A job resolved against its Coxeter system.
pub struct ResolvedJob {
    pub spec: JobSpec,
    pub system: Arc<CoxeterSystem>,
    /// Generator indices.
    pub y_word: Vec<usize>,
}

/// Builds the system and the target word, checking weights.
pub fn resolve_job(spec: &JobSpec) -> Result<ResolvedJob> {
    let sys = Arc::new(spec.system.build(&spec.j)?);
    let y_word = match &spec.target {
        Target::Word(labels) => {
            labels_to_indices(labels, spec.system.label_offset(), sys.rank(), "--word")?
        }
        Target::Weight { weight, p } => {
            let nu = Weight(weight.clone());
            if !spec.allow_unrestricted && !is_p_restricted(&nu, *p) {
                return Err(KlError::NotRestricted {
                    weight: weight.clone(),
                    p: *p,
                });
            }
            let n = sys.rank() - 1;
            weight_to_y(&sys, n, *p, &nu)?.y_word
        }
    };
    Ok(ResolvedJob {
        spec: spec.clone(),
        system: sys,
        y_word,
    })
}

impl ResolvedJob {
    fn labels(&self, word: &[usize]) -> Vec<usize> {
        let off = self.spec.system.label_offset();
        word.iter().map(|&s| s + off).collect()
    }

    /// Engine options for this job. The checkpoint carries the job itself.
    pub fn engine_options(&self) -> Result<EngineOptions> {
        let checkpoint = match &self.spec.checkpoint {
            Some(path) => Some(CheckpointPolicy {
                path: path.clone(),
                interval: Duration::from_secs(self.spec.checkpoint_interval),
                every_wave: self.spec.every_wave,
                job: Some(serde_json::to_value(&self.spec)?),
            }),
            None => None,
        };
        Ok(EngineOptions {
            threads: self.spec.threads,
            cache_capacity: self.spec.cache.and_then(NonZeroUsize::new),
            checkpoint,
            halt_after_waves: self.spec.halt_after_waves,
            ..EngineOptions::default()
        })
    }

    /// The result document.
    pub fn result_file(&self, r: &KLResult) -> ResultFile {
        let mut entries: Vec<EntryOut> = r
            .entries
            .iter()
            .map(|(k, e)| EntryOut {
                x_word: self.labels(k),
                length: e.length,
                p_coeffs_in_q: e.p.to_decimal_strings(),
            })
            .collect();
        entries.sort_by(|a, b| (a.length, &a.x_word).cmp(&(b.length, &b.x_word)));
        let mut mu: Vec<(u32, MuOut)> = r
            .mu
            .iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| {
                (
                    r.entries[k].length,
                    MuOut {
                        x_word: self.labels(k),
                        value: v.to_string(),
                    },
                )
            })
            .collect();
        mu.sort_by(|a, b| (a.0, &a.1.x_word).cmp(&(b.0, &b.1.x_word)));
        let (weight, p) = match &self.spec.target {
            Target::Weight { weight, p } => (Some(weight.clone()), Some(*p)),
            Target::Word(_) => (None, None),
        };
        ResultFile {
            system: self.spec.system.clone(),
            j: self.spec.j.clone(),
            weight,
            p,
            y_word: self.labels(&r.y_word),
            length: r.y.length(),
            entries: (!self.spec.mu_only).then_some(entries),
            mu: mu.into_iter().map(|m| m.1).collect(),
            stats: StatsOut {
                waves: r.stats.counters.waves,
                corrections: r.stats.counters.corrections,
                wave_lengths: r.stats.wave_log.iter().map(|w| w.length).collect(),
                interval_size: r.stats.interval_size,
                support: r.entries.len(),
            },
        }
    }
}

/// Serialized result. Contains nothing that depends on timing or thread
/// count, so identical jobs give identical bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultFile {
    pub system: SystemSpec,
    #[serde(rename = "J")]
    pub j: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    pub y_word: Vec<usize>,
    pub length: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<EntryOut>>,
    pub mu: Vec<MuOut>,
    pub stats: StatsOut,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryOut {
    pub x_word: Vec<usize>,
    pub length: u32,
    #[serde(rename = "P_coeffs_in_q")]
    pub p_coeffs_in_q: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuOut {
    pub x_word: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsOut {
    pub waves: u64,
    pub corrections: u64,
    pub wave_lengths: Vec<u32>,
    pub interval_size: usize,
    pub support: usize,
}

impl ResultFile {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn mu_value(&self, x_word: &[usize]) -> Option<&str> {
        self.mu
            .iter()
            .find(|m| m.x_word == x_word)
            .map(|m| m.value.as_str())
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| KlError::Io(e.error))?;
    Ok(())
}

fn emit(job: &ResolvedJob, r: &KLResult, out: &mut dyn Write) -> Result<()> {
    let doc = job.result_file(r);
    let text = doc.to_json()?;
    match &job.spec.out {
        Some(path) => {
            write_atomic(path, &text)?;
            let mu_e = doc.mu_value(&[]).unwrap_or("0");
            writeln!(
                out,
                "y = {} (length {}): {} entries, mu(e,y) = {mu_e}, {} waves, {} corrections; wrote {}",
                job.system.format_word(&r.y_word),
                doc.length,
                r.entries.len(),
                doc.stats.waves,
                doc.stats.corrections,
                path.display()
            )?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs a `compute` job, writing the result file (or JSON to `out`).
pub fn run_compute(spec: &JobSpec, out: &mut dyn Write) -> Result<()> {
    let job = resolve_job(spec)?;
    let r = compute_target(job.system.clone(), &job.y_word, job.engine_options()?)?;
    warn_negative(&r);
    emit(&job, &r, out)
}

/// Continues the job stored in a checkpoint.
pub fn run_resume(args: &ResumeArgs, out: &mut dyn Write) -> Result<()> {
    let value = checkpoint_job(&args.checkpoint)?.ok_or_else(|| KlError::CorruptCheckpoint {
        path: args.checkpoint.clone(),
        reason: "no job description stored".into(),
    })?;
    let mut spec: JobSpec =
        serde_json::from_value(value).map_err(|e| KlError::CorruptCheckpoint {
            path: args.checkpoint.clone(),
            reason: format!("job description: {e}"),
        })?;
    spec.checkpoint = Some(args.checkpoint.clone());
    if let Some(o) = &args.out {
        spec.out = Some(o.clone());
    }
    if let Some(t) = args.threads {
        spec.threads = t;
    }
    spec.halt_after_waves = args.halt_after_waves;
    let job = resolve_job(&spec)?;
    let r = resume_target(
        job.system.clone(),
        &job.y_word,
        &args.checkpoint,
        job.engine_options()?,
    )?;
    warn_negative(&r);
    emit(&job, &r, out)
}

fn warn_negative(r: &KLResult) {
    if r
        .entries
        .values()
        .any(|e| e.p.coeffs().iter().any(|c| c.is_negative()))
    {
        log::warn!("some polynomial has a negative coefficient");
    }
}

/// Engine against oracle for every target of `system` with `J`.
pub fn run_oracle_check(
    system: &SystemSpec,
    j: &[usize],
    max_length: usize,
    out: &mut dyn Write,
) -> Result<bool> {
    let sys = Arc::new(system.build(j)?);
    let reports = compare_all(sys.clone(), max_length)?;
    let bad: Vec<_> = reports.iter().filter(|r| !r.matches()).collect();
    if bad.is_empty() {
        writeln!(out, "all {} targets match", reports.len())?;
        return Ok(true);
    }
    for r in &bad {
        writeln!(
            out,
            "mismatch at y = {}: {}",
            sys.format_word(&r.y_word),
            r.divergence.as_deref().unwrap_or("")
        )?;
    }
    writeln!(out, "{} of {} targets differ", bad.len(), reports.len())?;
    Ok(false)
}

/// Small systems used by `selftest`, with names.
pub fn selftest_systems() -> Vec<(&'static str, CoxeterSystem)> {
    let mk = |c: Vec<Vec<i64>>| CoxeterSystem::from_cartan(c, &[]).expect("valid Cartan matrix");
    vec![
        ("A1", mk(vec![vec![2]])),
        ("A1xA1", mk(vec![vec![2, 0], vec![0, 2]])),
        ("A2", CoxeterSystem::type_a(2, &[]).expect("A2")),
        ("B2", CoxeterSystem::type_b(2, &[]).expect("B2")),
        ("G2", CoxeterSystem::type_g2(&[]).expect("G2")),
        ("A3", CoxeterSystem::type_a(3, &[]).expect("A3")),
    ]
}

/// Every target of every selftest system and every `J` goes through
/// [`compute_checked`]; a few Laurent identities are checked as well.
/// Returns the number of engine runs.
pub fn run_selftest(out: &mut dyn Write) -> Result<usize> {
    let samples = [
        LaurentPoly::from_terms([(2, 3), (0, -1), (-3, 5)]),
        LaurentPoly::from_terms([(1, 1), (-1, 1)]),
        LaurentPoly::from_terms([(-2, 7)]),
        LaurentPoly::from_terms([(4, -2), (0, 9), (-4, 1)]),
    ];
    for f in &samples {
        let g = f.make_g();
        if !g.is_bar_symmetric() || f.sub(&g).has_nonnegative_term() {
            return Err(KlError::InternalInvariant(format!("make_g failed on {f}")));
        }
        if f.bar().bar() != *f {
            return Err(KlError::InternalInvariant(format!("bar is not an involution on {f}")));
        }
    }
    let mut runs = 0;
    for (name, base) in selftest_systems() {
        let rank = base.rank();
        let mut count = 0;
        for mask in 0..(1u32 << rank) {
            let j: Vec<usize> = (0..rank).filter(|i| mask >> i & 1 == 1).collect();
            let sys = Arc::new(base.with_parabolic(&j)?);
            for x in sys.coset_reps_up_to(usize::MAX) {
                let w = sys.canonical_word(&x);
                compute_checked(sys.clone(), &w, EngineOptions::default())?;
                count += 1;
            }
        }
        writeln!(out, "{name}: {count} targets, all invariants hold")?;
        runs += count;
    }
    writeln!(out, "selftest passed ({runs} engine runs)")?;
    Ok(runs)
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp_secs()
        .try_init();
}

/// Entry point of the `klq` binary; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    init_logging(cli.verbose);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let res = invocation(cli.command).and_then(|inv| match inv {
        Invocation::Compute(spec) => run_compute(&spec, &mut out).map(|_| 0),
        Invocation::Resume(r) => run_resume(&r, &mut out).map(|_| 0),
        Invocation::OracleCheck {
            system,
            j,
            max_length,
        } => run_oracle_check(&system, &j, max_length, &mut out).map(|ok| if ok { 0 } else { 5 }),
        Invocation::Selftest => run_selftest(&mut out).map(|_| 0),
    });
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("klq: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        std::iter::once("klq".to_string())
            .chain(s.split_whitespace().map(String::from))
            .collect()
    }

    #[test]
    fn affine_job() {
        let inv =
            parse_args(argv("compute --type affine-A --n 4 --J 1..4 --weight 2,3,3,2 --p 5")).unwrap();
        let Invocation::Compute(spec) = inv else { panic!() };
        assert_eq!(spec.j, vec![1, 2, 3, 4]);
        assert_eq!(
            spec.target,
            Target::Weight {
                weight: vec![2, 3, 3, 2],
                p: 5
            }
        );
        assert_eq!(spec.system.label_offset(), 0);
    }

    #[test]
    fn two_targets_is_a_usage_error() {
        let e = parse_args(argv("compute --type A --n 3 --word 1 --weight 1,1")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().contains("--word") || e.to_string().contains("--weight"));
        let e = parse_args(argv("compute --type A --n 3")).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        let e = parse_args(argv("compute --type A --word 1")).unwrap_err();
        assert!(e.to_string().contains("--n"));
        let e = parse_args(argv("compute --type A --n 3 --word 1 --threads 0")).unwrap_err();
        assert!(e.to_string().contains("--threads"));
    }

    #[test]
    fn label_sets() {
        assert_eq!(parse_label_set("1..4").unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(parse_label_set("3,1").unwrap(), vec![1, 3]);
        assert_eq!(parse_label_set("none").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_word("e", "--word").unwrap(), Vec::<usize>::new());
        assert_eq!(parse_word("2,1,3,2", "--word").unwrap(), vec![2, 1, 3, 2]);
    }

    #[test]
    fn s4_result_file() {
        let Invocation::Compute(spec) = parse_args(argv("compute --type A --n 3 --word 2,1,3,2")).unwrap()
        else {
            panic!()
        };
        let job = resolve_job(&spec).unwrap();
        assert_eq!(job.y_word, vec![1, 0, 2, 1]);
        let r = compute_target(job.system.clone(), &job.y_word, EngineOptions::default()).unwrap();
        let doc = job.result_file(&r);
        let entries = doc.entries.as_ref().unwrap();
        let e = entries.iter().find(|e| e.x_word.is_empty()).unwrap();
        assert_eq!(e.p_coeffs_in_q, vec!["1", "1"]);
        let e = entries.iter().find(|e| e.x_word == vec![1, 3]).unwrap();
        assert_eq!(e.p_coeffs_in_q, vec!["1"]);
        assert_eq!(doc.y_word, vec![2, 1, 3, 2]);
    }

    #[test]
    fn bad_labels_are_invalid_input() {
        let Invocation::Compute(spec) = parse_args(argv("compute --type A --n 3 --word 4")).unwrap()
        else {
            panic!()
        };
        assert_eq!(resolve_job(&spec).err().unwrap().exit_code(), 3);
        let Invocation::Compute(spec) =
            parse_args(argv("compute --type A --n 3 --word 1,1")).unwrap()
        else {
            panic!()
        };
        let job = resolve_job(&spec).unwrap();
        let e = compute_target(job.system.clone(), &job.y_word, EngineOptions::default()).unwrap_err();
        assert!(matches!(e, KlError::NotReduced { .. }));
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn unrestricted_weight_refused() {
        let Invocation::Compute(spec) =
            parse_args(argv("compute --type affine-A --n 3 --weight 0,0,4 --p 4")).unwrap()
        else {
            panic!()
        };
        assert!(matches!(resolve_job(&spec), Err(KlError::NotRestricted { .. })));
    }

    #[test]
    fn oracle_check_a3() {
        let mut buf = Vec::new();
        let spec = SystemSpec::Named {
            kind: CartanType::A,
            n: 3,
        };
        assert!(run_oracle_check(&spec, &[], 64, &mut buf).unwrap());
        assert_eq!(String::from_utf8(buf).unwrap(), "all 24 targets match\n");
    }
}
