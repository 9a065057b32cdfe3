//! Targeted computation of a single parabolic canonical basis element.
//!
//! The working vector ("Fat") starts as `D'` of a reduced word for `y`. While
//! some `x ≠ y` carries a coefficient with a term of exponent `≥ 0`, every
//! such `x` of maximal length is cancelled at once by subtracting
//! `g_x · D'(w_x)`, where `g_x = f_{≥0}(t) + f_{>0}(t⁻¹)`. Once no such term
//! remains, Fat is the canonical basis element and its coefficients are read
//! off as `P^J_{x,y}`.
//!
//! Corrections of one wave only touch elements strictly below their own `x`,
//! so they are computed concurrently and then applied in canonical-word order.
//! Nothing but Fat and the in-flight corrections is held in memory.

mod checkpoint;

use std::collections::{BTreeMap, BTreeSet};
use std::num::NonZeroUsize;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checkpoint::{checkpoint_job, checkpoint_resume, checkpoint_save, CHECKPOINT_VERSION};

use crate::coxeter::{CoxeterSystem, GroupElement};
use crate::error::{KlError, Result};
use crate::heckemod::{
    check_target_word, d_prime_with, CosetArena, DPrimeCache, ElemId, FrozenArena, ModuleVector,
};
use crate::laurent::{Coeff, LaurentPoly, QPoly};

/// Default wall-clock interval between checkpoints.
pub const DEFAULT_CHECKPOINT_INTERVAL: Duration = Duration::from_secs(600);

#[derive(Debug, Clone)]
pub struct CheckpointPolicy {
    pub path: PathBuf,
    pub interval: Duration,
    /// Also save at every wave boundary regardless of the interval.
    pub every_wave: bool,
    /// Stored verbatim in every checkpoint written under this policy.
    pub job: Option<serde_json::Value>,
}

impl CheckpointPolicy {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        CheckpointPolicy {
            path: path.into(),
            interval: DEFAULT_CHECKPOINT_INTERVAL,
            every_wave: false,
            job: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EngineOptions {
    /// Worker threads for the corrections of a wave; at least 1.
    pub threads: usize,
    /// Optional bounded cache of `D'` prefix products. Off by default.
    pub cache_capacity: Option<NonZeroUsize>,
    pub checkpoint: Option<CheckpointPolicy>,
    /// Save a checkpoint and stop with [`KlError::Halted`] once this many
    /// waves have completed.
    pub halt_after_waves: Option<u64>,
    /// Same, counted in corrections; may stop in the middle of a wave.
    pub halt_after_corrections: Option<u64>,
    /// Interval between progress log lines.
    pub progress_interval: Duration,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            threads: 1,
            cache_capacity: None,
            checkpoint: None,
            halt_after_waves: None,
            halt_after_corrections: None,
            progress_interval: Duration::from_secs(60),
        }
    }
}

/// One completed wave.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveRecord {
    /// Length shared by all offenders of the wave.
    pub length: u32,
    pub offenders: usize,
    /// Most module vectors alive at once during the wave, Fat included.
    pub peak_live_vectors: usize,
    pub support_after: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    pub waves: u64,
    pub corrections: u64,
    pub peak_support: usize,
    pub bar_symmetric_checks: u64,
}

#[derive(Debug, Clone, Default)]
pub struct RunStats {
    pub counters: Counters,
    pub wave_log: Vec<WaveRecord>,
    /// Number of `W^J` elements interned for the run.
    pub interval_size: usize,
    pub elapsed: Duration,
    pub resumed: bool,
}

/// Checkpointable engine state.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineState {
    pub fingerprint: String,
    pub target: Vec<usize>,
    pub fat: ModuleVector,
    /// Every `x ≠ y` in Fat longer than this has a strictly negative
    /// coefficient.
    pub wave_floor: i64,
    /// Length of a wave that was interrupted by a checkpoint.
    pub wave_in_progress: Option<u32>,
    pub counters: Counters,
    pub wave_log: Vec<WaveRecord>,
}

/// `P^J_{x,y}` for one `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KLEntry {
    pub element: GroupElement,
    pub length: u32,
    pub p: QPoly,
}

/// All `P^J_{x,y}` and `^Jμ(x,y)` for a fixed `y`.
#[derive(Debug, Clone)]
pub struct KLResult {
    pub system: Arc<CoxeterSystem>,
    pub y: GroupElement,
    pub y_word: Vec<usize>,
    /// Keyed by canonical word of `x`.
    pub entries: BTreeMap<Vec<usize>, KLEntry>,
    /// `^Jμ(x,y)` for every `x < y` in the support (zero included).
    pub mu: BTreeMap<Vec<usize>, Coeff>,
    pub stats: RunStats,
}

impl KLResult {
    pub fn p(&self, x_word: &[usize]) -> QPoly {
        self.entries
            .get(x_word)
            .map(|e| e.p.clone())
            .unwrap_or_default()
    }

    pub fn mu_of(&self, x_word: &[usize]) -> Coeff {
        self.mu.get(x_word).cloned().unwrap_or_default()
    }

    /// Same polynomials and μ-values (run statistics ignored).
    pub fn same_values(&self, other: &KLResult) -> bool {
        self.first_divergence(other).is_none()
    }

    /// Describes the first key at which two results differ.
    pub fn first_divergence(&self, other: &KLResult) -> Option<String> {
        if self.y_word != other.y_word && self.y != other.y {
            return Some(format!("targets differ: {:?} vs {:?}", self.y_word, other.y_word));
        }
        let keys: BTreeSet<&Vec<usize>> =
            self.entries.keys().chain(other.entries.keys()).collect();
        for k in keys {
            let a = self.entries.get(k).map(|e| &e.p);
            let b = other.entries.get(k).map(|e| &e.p);
            if a != b {
                return Some(format!("P at x = {k:?}: {a:?} vs {b:?}"));
            }
        }
        let keys: BTreeSet<&Vec<usize>> = self.mu.keys().chain(other.mu.keys()).collect();
        for k in keys {
            if self.mu_of(k) != other.mu_of(k) {
                return Some(format!(
                    "mu at x = {k:?}: {} vs {}",
                    self.mu_of(k),
                    other.mu_of(k)
                ));
            }
        }
        None
    }

    /// Checks the output contract: `P_{y,y} = 1`, degree bound below `y`,
    /// and μ read from the right coefficient.
    pub fn check_invariants(&self) -> Result<()> {
        let ly = self.y.length();
        for (k, e) in &self.entries {
            if e.length == ly {
                if e.p != QPoly::one() || *k != self.system.canonical_word(&self.y) {
                    return Err(KlError::InternalInvariant(format!(
                        "entry at top length {k:?} is {}",
                        e.p
                    )));
                }
                continue;
            }
            let ldiff = ly - e.length;
            if let Some(d) = e.p.degree() {
                if 2 * d as u32 + 1 > ldiff {
                    return Err(KlError::InternalInvariant(format!(
                        "degree {d} of P at {k:?} exceeds bound for length gap {ldiff}"
                    )));
                }
            }
            let expect = if ldiff % 2 == 1 {
                e.p.coeff(((ldiff - 1) / 2) as usize)
            } else {
                Coeff::ZERO
            };
            if self.mu_of(k) != expect {
                return Err(KlError::InternalInvariant(format!("mu mismatch at {k:?}")));
            }
        }
        Ok(())
    }
}

/// Converts a finished vector (coefficient 1 at `y`, strictly negative
/// exponents elsewhere) into a [`KLResult`].
pub fn result_from_vector(
    arena: &CosetArena,
    y_id: ElemId,
    y_word: &[usize],
    v: &ModuleVector,
    stats: RunStats,
) -> Result<KLResult> {
    let y = arena.element(y_id).clone();
    let ly = y.length();
    let items: Vec<(ElemId, &LaurentPoly)> = v.iter().collect();
    type Row = (Vec<usize>, KLEntry, Option<Coeff>);
    let rows: Vec<Result<Row>> = items
        .par_iter()
        .map(|&(x, f)| {
            let lx = arena.length(x);
            if lx > ly {
                return Err(KlError::InternalInvariant(format!(
                    "support element of length {lx} above target length {ly}"
                )));
            }
            let p = f.to_q_polynomial(ly - lx)?;
            let word = arena.canonical_word(x);
            let mu = (x != y_id).then(|| f.mu_coefficient());
            Ok((
                word,
                KLEntry {
                    element: arena.element(x).clone(),
                    length: lx,
                    p,
                },
                mu,
            ))
        })
        .collect();
    let mut entries = BTreeMap::new();
    let mut mu = BTreeMap::new();
    for r in rows {
        let (w, e, m) = r?;
        if let Some(m) = m {
            mu.insert(w.clone(), m);
        }
        entries.insert(w, e);
    }
    let res = KLResult {
        system: arena.system_arc().clone(),
        y,
        y_word: y_word.to_vec(),
        entries,
        mu,
        stats,
    };
    res.check_invariants()?;
    Ok(res)
}

/// Offenders of maximal length in `fat`: elements `x ≠ y` whose coefficient
/// has a term of exponent ≥ 0, sorted by canonical word.
pub fn find_offenders(
    fat: &ModuleVector,
    y: ElemId,
    arena: &CosetArena,
) -> Vec<(ElemId, LaurentPoly)> {
    let mut best: Option<u32> = None;
    let mut found: Vec<(ElemId, LaurentPoly)> = Vec::new();
    for (x, f) in fat.iter() {
        if x == y || f.is_strictly_negative() {
            continue;
        }
        let l = arena.length(x);
        match best {
            Some(b) if l < b => continue,
            Some(b) if l == b => {}
            _ => {
                best = Some(l);
                found.clear();
            }
        }
        found.push((x, f.clone()));
    }
    let mut keyed: Vec<(Vec<usize>, (ElemId, LaurentPoly))> = found
        .into_iter()
        .map(|(x, f)| (arena.canonical_word(x), (x, f)))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, v)| v).collect()
}

fn parity_check(arena: &CosetArena, ly: u32, x: ElemId, f: &LaurentPoly) -> Result<()> {
    let parity = (ly + arena.length(x)) % 2;
    if !f.parity_ok(parity) {
        return Err(KlError::InternalParityViolation {
            word: arena.canonical_word(x),
            poly: f.to_string(),
            parity,
        });
    }
    Ok(())
}

/// Live module-vector accounting for the memory contract.
#[derive(Debug, Default)]
struct LiveVectors {
    live: AtomicUsize,
    peak: AtomicUsize,
}

impl LiveVectors {
    fn enter(&self) {
        let now = self.live.fetch_add(1, Ordering::SeqCst) + 1;
        self.peak.fetch_max(now, Ordering::SeqCst);
    }

    fn leave(&self) {
        self.live.fetch_sub(1, Ordering::SeqCst);
    }

    fn reset_peak(&self) {
        self.peak
            .store(self.live.load(Ordering::SeqCst), Ordering::SeqCst);
    }
}

/// A running (or resumable) targeted computation.
pub struct Engine {
    arena: FrozenArena,
    y_id: ElemId,
    y_len: u32,
    state: EngineState,
    options: EngineOptions,
    offenders: BTreeMap<u32, BTreeSet<ElemId>>,
    cache: Option<DPrimeCache>,
    live: LiveVectors,
    resumed: bool,
}

impl Engine {
    /// Initializes Fat to `D'(y_word)`.
    pub fn new(sys: Arc<CoxeterSystem>, y_word: &[usize], options: EngineOptions) -> Result<Self> {
        let (arena, fat, y_id) = Self::initial_vector(sys.clone(), y_word)?;
        let ly = arena.length(y_id);
        let state = EngineState {
            fingerprint: sys.fingerprint(),
            target: y_word.to_vec(),
            fat,
            wave_floor: i64::from(ly) - 1,
            wave_in_progress: None,
            counters: Counters::default(),
            wave_log: Vec::new(),
        };
        Self::with_state(arena, y_id, state, options, false)
    }

    /// Rebuilds the element interval for `y_word` and returns it with
    /// `D'(y_word)` and the id of `y`.
    pub(crate) fn initial_vector(
        sys: Arc<CoxeterSystem>,
        y_word: &[usize],
    ) -> Result<(FrozenArena, ModuleVector, ElemId)> {
        let y = check_target_word(&sys, y_word)?;
        let mut arena = CosetArena::new(sys);
        let fat = d_prime_with(y_word, &mut arena)?;
        let y_id = arena
            .id_of(&y)
            .ok_or_else(|| KlError::InternalInvariant("target missing from D'".into()))?;
        if fat.coeff(y_id) != LaurentPoly::one() {
            return Err(KlError::InternalInvariant(
                "D' coefficient at the target is not 1".into(),
            ));
        }
        Ok((arena.freeze(), fat, y_id))
    }

    pub(crate) fn with_state(
        arena: FrozenArena,
        y_id: ElemId,
        state: EngineState,
        options: EngineOptions,
        resumed: bool,
    ) -> Result<Self> {
        if options.threads == 0 {
            return Err(KlError::InvalidInput("thread count must be at least 1".into()));
        }
        let y_len = arena.length(y_id);
        let mut offenders: BTreeMap<u32, BTreeSet<ElemId>> = BTreeMap::new();
        for (x, f) in state.fat.iter() {
            parity_check(&arena, y_len, x, f)?;
            if x != y_id && f.has_nonnegative_term() {
                offenders.entry(arena.length(x)).or_default().insert(x);
            }
        }
        let cache = options.cache_capacity.map(DPrimeCache::new);
        let live = LiveVectors::default();
        live.enter(); // Fat
        let mut engine = Engine {
            arena,
            y_id,
            y_len,
            state,
            options,
            offenders,
            cache,
            live,
            resumed,
        };
        engine.state.counters.peak_support =
            engine.state.counters.peak_support.max(engine.state.fat.support_len());
        Ok(engine)
    }

    pub fn arena(&self) -> &CosetArena {
        &self.arena
    }

    pub fn state(&self) -> &EngineState {
        &self.state
    }

    pub fn y_id(&self) -> ElemId {
        self.y_id
    }

    /// Number of elements currently carrying an offending coefficient.
    pub fn pending_offenders(&self) -> usize {
        self.offenders.values().map(BTreeSet::len).sum()
    }

    fn maybe_checkpoint(&self, last: &mut Instant, wave_boundary: bool) -> Result<()> {
        if let Some(policy) = &self.options.checkpoint {
            let due = last.elapsed() >= policy.interval;
            if due || (wave_boundary && policy.every_wave) {
                checkpoint_save(&self.state, &self.arena, &policy.path, policy.job.as_ref())?;
                debug!("checkpoint written to {}", policy.path.display());
                *last = Instant::now();
            }
        }
        Ok(())
    }

    fn correction(&self, word: &[usize]) -> Result<ModuleVector> {
        let mut act = &self.arena;
        match &self.cache {
            Some(c) => c.d_prime(word, &mut act),
            None => d_prime_with(word, &mut act),
        }
    }

    /// Runs waves until no offender remains.
    pub fn run(&mut self) -> Result<()> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.options.threads)
            .build()
            .map_err(|e| KlError::InvalidInput(format!("thread pool: {e}")))?;
        let mut last_ckpt = Instant::now();
        let mut last_log = Instant::now();
        let mut prev_len: Option<u32> = self.state.wave_log.last().map(|w| w.length);
        let batch = self.options.threads.max(1) * 4;

        while let Some((&len, _)) = self.offenders.last_key_value() {
            let continuing = self.state.wave_in_progress == Some(len);
            if !continuing && prev_len.is_some_and(|p| len >= p) {
                return Err(KlError::InternalInvariant(format!(
                    "offending length {len} did not decrease below {prev_len:?}"
                )));
            }
            let ids = self.offenders.remove(&len).unwrap_or_default();
            let mut wave: Vec<(Vec<usize>, ElemId, LaurentPoly)> = Vec::with_capacity(ids.len());
            for x in ids {
                let f = self
                    .state
                    .fat
                    .get(x)
                    .ok_or_else(|| KlError::InternalInvariant("offender without coefficient".into()))?;
                let g = f.make_g();
                wave.push((self.arena.canonical_word(x), x, g));
            }
            wave.sort_by(|a, b| a.0.cmp(&b.0));
            let offender_count = wave.len();
            let offender_ids: Vec<ElemId> = wave.iter().map(|w| w.1).collect();
            self.state.wave_in_progress = Some(len);
            self.state.wave_floor = i64::from(len);
            self.live.reset_peak();
            info!(
                "wave {}: length {len}, {offender_count} offenders, support {}",
                self.state.counters.waves + 1,
                self.state.fat.support_len()
            );

            let n_chunks = wave.len().div_ceil(batch);
            for (ci, chunk) in wave.chunks(batch).enumerate() {
                let this = &*self;
                let computed: Vec<Result<ModuleVector>> = pool.install(|| {
                    chunk
                        .par_iter()
                        .map(|(word, _, _)| {
                            this.live.enter();
                            this.correction(word)
                        })
                        .collect()
                });
                for ((_, _, g), d) in chunk.iter().zip(computed) {
                    let d = d?;
                    if !g.is_bar_symmetric() {
                        return Err(KlError::InternalInvariant(format!(
                            "correction polynomial {g} is not bar-symmetric"
                        )));
                    }
                    self.state.counters.bar_symmetric_checks += 1;
                    let touched = self.state.fat.sub_scaled_assign(g, &d);
                    drop(d);
                    self.live.leave();
                    self.state.counters.corrections += 1;
                    self.reindex(&touched)?;
                }
                self.state.counters.peak_support =
                    self.state.counters.peak_support.max(self.state.fat.support_len());
                if last_log.elapsed() >= self.options.progress_interval {
                    info!(
                        "  length {len}: {} corrections so far, support {}",
                        self.state.counters.corrections,
                        self.state.fat.support_len()
                    );
                    last_log = Instant::now();
                }
                self.maybe_checkpoint(&mut last_ckpt, false)?;
                // only between chunks, so a wave is always closed in one run
                if ci + 1 < n_chunks
                    && self
                        .options
                        .halt_after_corrections
                        .is_some_and(|l| self.state.counters.corrections >= l)
                {
                    self.halt(true)?;
                }
            }

            for x in offender_ids {
                if self.state.fat.get(x).is_some_and(LaurentPoly::has_nonnegative_term) {
                    return Err(KlError::InternalInvariant(format!(
                        "offender {:?} still has a non-negative term after its correction",
                        self.arena.canonical_word(x)
                    )));
                }
            }
            if self.offenders.contains_key(&len) {
                return Err(KlError::InternalInvariant(format!(
                    "new offenders appeared at processed length {len}"
                )));
            }
            if self.state.fat.coeff(self.y_id) != LaurentPoly::one() {
                return Err(KlError::InternalInvariant(
                    "coefficient at the target changed".into(),
                ));
            }
            self.state.counters.waves += 1;
            self.state.wave_floor = i64::from(len) - 1;
            self.state.wave_in_progress = None;
            self.state.wave_log.push(WaveRecord {
                length: len,
                offenders: offender_count,
                peak_live_vectors: self.live.peak.load(Ordering::SeqCst),
                support_after: self.state.fat.support_len(),
            });
            prev_len = Some(len);
            self.maybe_checkpoint(&mut last_ckpt, true)?;

            if let Some(limit) = self.options.halt_after_waves {
                if self.state.counters.waves >= limit {
                    self.halt(!self.offenders.is_empty())?;
                }
            }
        }
        self.state.wave_floor = -1;
        if let Some(policy) = &self.options.checkpoint {
            checkpoint_save(&self.state, &self.arena, &policy.path, policy.job.as_ref())?;
        }
        Ok(())
    }

    /// Saves and stops, unless nothing is left to do.
    fn halt(&self, pending: bool) -> Result<()> {
        if !pending {
            return Ok(());
        }
        if let Some(policy) = &self.options.checkpoint {
            checkpoint_save(&self.state, &self.arena, &policy.path, policy.job.as_ref())?;
        }
        Err(KlError::Halted {
            wave: self.state.counters.waves,
        })
    }

    fn reindex(&mut self, touched: &[ElemId]) -> Result<()> {
        for &z in touched {
            if z == self.y_id {
                continue;
            }
            let lz = self.arena.length(z);
            match self.state.fat.get(z) {
                Some(f) => {
                    parity_check(&self.arena, self.y_len, z, f)?;
                    if f.has_nonnegative_term() {
                        self.offenders.entry(lz).or_default().insert(z);
                    } else {
                        self.remove_offender(lz, z);
                    }
                }
                None => self.remove_offender(lz, z),
            }
        }
        Ok(())
    }

    fn remove_offender(&mut self, len: u32, z: ElemId) {
        if let Some(set) = self.offenders.get_mut(&len) {
            set.remove(&z);
            if set.is_empty() {
                self.offenders.remove(&len);
            }
        }
    }

    /// Verifies the final-state predicate on every coefficient.
    pub fn check_final_state(&self) -> Result<()> {
        for (x, f) in self.state.fat.iter() {
            parity_check(&self.arena, self.y_len, x, f)?;
            if x == self.y_id {
                if *f != LaurentPoly::one() {
                    return Err(KlError::InternalInvariant("top coefficient is not 1".into()));
                }
            } else if !f.is_strictly_negative() {
                return Err(KlError::InternalInvariant(format!(
                    "coefficient {f} at {:?} is not strictly negative",
                    self.arena.canonical_word(x)
                )));
            }
        }
        Ok(())
    }

    /// Packages the finished state. Call after [`run`](Self::run).
    pub fn result(&self, elapsed: Duration) -> Result<KLResult> {
        self.check_final_state()?;
        let stats = RunStats {
            counters: self.state.counters.clone(),
            wave_log: self.state.wave_log.clone(),
            interval_size: self.arena.len(),
            elapsed,
            resumed: self.resumed,
        };
        result_from_vector(
            &self.arena,
            self.y_id,
            &self.state.target,
            &self.state.fat,
            stats,
        )
    }
}

/// Computes `^J C'_y` for the reduced word `y_word` of `y ∈ W^J`.
pub fn compute_target(
    sys: Arc<CoxeterSystem>,
    y_word: &[usize],
    options: EngineOptions,
) -> Result<KLResult> {
    let start = Instant::now();
    let mut engine = Engine::new(sys, y_word, options)?;
    engine.run()?;
    engine.result(start.elapsed())
}

/// Continues a checkpointed run of `y_word` to completion.
pub fn resume_target(
    sys: Arc<CoxeterSystem>,
    y_word: &[usize],
    path: &std::path::Path,
    options: EngineOptions,
) -> Result<KLResult> {
    let start = Instant::now();
    let mut engine = checkpoint_resume(path, sys, y_word, options)?;
    engine.run()?;
    engine.result(start.elapsed())
}

/// Runs `y_word` and checks every run-level invariant on top of those the
/// engine enforces while running: at most `ℓ(y)` waves with strictly
/// decreasing lengths, one bar-symmetry check per correction, the final-state
/// predicate, and idempotence (a second pass performs no correction).
pub fn compute_checked(
    sys: Arc<CoxeterSystem>,
    y_word: &[usize],
    options: EngineOptions,
) -> Result<KLResult> {
    let start = Instant::now();
    let mut engine = Engine::new(sys, y_word, options)?;
    engine.run()?;
    let fail = |m: String| Err(KlError::InternalInvariant(m));
    let st = engine.state();
    if st.counters.waves > u64::from(engine.y_len) {
        return fail(format!("{} waves for length {}", st.counters.waves, engine.y_len));
    }
    if st.wave_log.windows(2).any(|w| w[1].length >= w[0].length) {
        return fail("wave lengths are not strictly decreasing".into());
    }
    if st.counters.bar_symmetric_checks != st.counters.corrections {
        return fail("a correction skipped its bar-symmetry check".into());
    }
    let before = st.counters.clone();
    let fat = st.fat.clone();
    engine.run()?;
    if engine.state().counters != before || engine.state().fat != fat {
        return fail("re-running a finished state changed it".into());
    }
    engine.result(start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: usize, j: &[usize]) -> Arc<CoxeterSystem> {
        Arc::new(CoxeterSystem::type_a(n, j).unwrap())
    }

    #[test]
    fn a1_target() {
        let r = compute_target(a(1, &[]), &[0], EngineOptions::default()).unwrap();
        assert_eq!(r.entries.len(), 2);
        assert_eq!(r.p(&[]), QPoly::one());
        assert_eq!(r.p(&[0]), QPoly::one());
        assert_eq!(r.mu_of(&[]), Coeff::ONE);
        assert_eq!(r.stats.counters.corrections, 0);
    }

    #[test]
    fn s4_classical_polynomial() {
        // y = s2 s1 s3 s2 (0-based 1,0,2,1); P_{x,y} = 1 + q exactly for x ≤ s2.
        let r = compute_target(a(3, &[]), &[1, 0, 2, 1], EngineOptions::default()).unwrap();
        assert_eq!(r.entries.len(), 14);
        for (k, e) in &r.entries {
            if k.is_empty() || k == &vec![1] {
                assert_eq!(e.p, QPoly::from_i64s(&[1, 1]), "x = {k:?}");
            } else {
                assert_eq!(e.p, QPoly::one(), "x = {k:?}");
            }
        }
        assert_eq!(r.p(&[0, 2]), QPoly::one());
        // D'(s2 s1 s3 s2) is already canonical.
        assert_eq!(r.stats.counters.corrections, 0);
    }

    #[test]
    fn a2_longest_needs_one_correction() {
        let r = compute_target(a(2, &[]), &[0, 1, 0], EngineOptions::default()).unwrap();
        assert_eq!(r.stats.counters.corrections, 1);
        assert_eq!(r.stats.counters.waves, 1);
        assert!(r.entries.values().all(|e| e.p == QPoly::one()));
        assert_eq!(r.entries.len(), 6);
    }

    #[test]
    fn find_offenders_examples() {
        let sys = a(2, &[]);
        let (arena, v) = crate::heckemod::d_prime(sys, &[0, 1, 0]).unwrap();
        let y = arena.id_of(&arena.system().word_to_element(&[0, 1, 0]).unwrap().0).unwrap();
        // D'(s1 s2 s1) = C'_{s1s2s1} + C'_{s1}: offender at s1, length 1.
        let offs = find_offenders(&v, y, &arena);
        assert_eq!(offs.len(), 1);
        assert_eq!(arena.canonical_word(offs[0].0), vec![0]);

        let clean = ModuleVector::from_coeffs([(y, LaurentPoly::one())]);
        assert!(find_offenders(&clean, y, &arena).is_empty());

        let e_bad = ModuleVector::from_coeffs([
            (y, LaurentPoly::one()),
            (0, LaurentPoly::t_plus_tinv()),
        ]);
        let offs = find_offenders(&e_bad, y, &arena);
        assert_eq!(offs, vec![(0, LaurentPoly::t_plus_tinv())]);
    }

    #[test]
    fn find_offenders_takes_maximal_length() {
        let sys = a(3, &[]);
        let mut arena = CosetArena::new(sys);
        let short = arena.intern_word(&[0, 1, 2]).unwrap();
        let long = arena.intern_word(&[0, 1, 2, 0, 1]).unwrap();
        let y = arena.intern_word(&[0, 1, 2, 0, 1, 0]).unwrap();
        let v = ModuleVector::from_coeffs([
            (y, LaurentPoly::one()),
            (short, LaurentPoly::one()),
            (long, LaurentPoly::monomial(1, 1)),
        ]);
        let offs = find_offenders(&v, y, &arena);
        assert_eq!(offs.len(), 1);
        assert_eq!(offs[0].0, long);
    }

    #[test]
    fn rejects_bad_targets() {
        assert!(matches!(
            compute_target(a(2, &[]), &[0, 0], EngineOptions::default()),
            Err(KlError::NotReduced { .. })
        ));
        assert!(matches!(
            compute_target(a(2, &[0]), &[0], EngineOptions::default()),
            Err(KlError::NotCosetRep { .. })
        ));
        let opts = EngineOptions {
            threads: 0,
            ..Default::default()
        };
        assert!(compute_target(a(2, &[]), &[0], opts).is_err());
    }

    #[test]
    fn rerun_on_finished_state_is_idle() {
        let mut eng = Engine::new(a(3, &[]), &[1, 0, 2, 1], EngineOptions::default()).unwrap();
        eng.run().unwrap();
        let before = eng.state().counters.clone();
        eng.run().unwrap();
        assert_eq!(eng.state().counters, before);
        assert!(find_offenders(&eng.state().fat, eng.y_id(), eng.arena()).is_empty());
    }
}
