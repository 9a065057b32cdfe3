//! On-disk engine state.
//!
//! A checkpoint is a single JSON document: a versioned header naming the
//! system fingerprint and target word, then Fat as `(canonical word, Laurent
//! terms)` pairs sorted by word, the wave floor and the counters. Writes go
//! to a temporary file in the same directory and are renamed into place, so
//! an interrupted run always leaves the previous checkpoint intact.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Counters, Engine, EngineOptions, EngineState, WaveRecord};
use crate::coxeter::CoxeterSystem;
use crate::error::{KlError, Result};
use crate::heckemod::{CosetArena, ModuleVector};
use crate::laurent::LaurentPoly;

pub const CHECKPOINT_VERSION: u32 = 1;
const FORMAT_TAG: &str = "klq-checkpoint";

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
}

#[derive(Serialize, Deserialize)]
struct FatEntry {
    x: Vec<usize>,
    f: LaurentPoly,
}

#[derive(Serialize, Deserialize)]
struct CheckpointFile {
    format: String,
    version: u32,
    fingerprint: String,
    target: Vec<usize>,
    wave_floor: i64,
    wave_in_progress: Option<u32>,
    counters: Counters,
    wave_log: Vec<WaveRecord>,
    /// Opaque description of the job, for front ends that resume from the
    /// file alone.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    job: Option<serde_json::Value>,
    fat: Vec<FatEntry>,
}

/// Atomically writes `state` to `path`, with an optional job description.
pub fn checkpoint_save(
    state: &EngineState,
    arena: &CosetArena,
    path: &Path,
    job: Option<&serde_json::Value>,
) -> Result<()> {
    let mut fat: Vec<FatEntry> = state
        .fat
        .iter()
        .map(|(x, f)| FatEntry {
            x: arena.canonical_word(x),
            f: f.clone(),
        })
        .collect();
    fat.sort_by(|a, b| a.x.cmp(&b.x));
    let doc = CheckpointFile {
        format: FORMAT_TAG.into(),
        version: CHECKPOINT_VERSION,
        fingerprint: state.fingerprint.clone(),
        target: state.target.clone(),
        wave_floor: state.wave_floor,
        wave_in_progress: state.wave_in_progress,
        counters: state.counters.clone(),
        wave_log: state.wave_log.clone(),
        job: job.cloned(),
        fat,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    {
        let mut w = std::io::BufWriter::new(tmp.as_file_mut());
        serde_json::to_writer(&mut w, &doc)?;
        w.flush()?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| KlError::Io(e.error))?;
    Ok(())
}

fn corrupt(path: &Path, reason: impl Into<String>) -> KlError {
    KlError::CorruptCheckpoint {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn read_header(path: &Path) -> Result<String> {
    let text = fs::read_to_string(path)?;
    let header: Header =
        serde_json::from_str(&text).map_err(|e| corrupt(path, format!("header: {e}")))?;
    if header.format != FORMAT_TAG {
        return Err(corrupt(path, format!("unknown format tag {:?}", header.format)));
    }
    if header.version != CHECKPOINT_VERSION {
        return Err(KlError::VersionMismatch {
            expected: CHECKPOINT_VERSION,
            found: header.version,
        });
    }
    Ok(text)
}

/// The job description stored in a checkpoint, if any.
pub fn checkpoint_job(path: &Path) -> Result<Option<serde_json::Value>> {
    #[derive(Deserialize)]
    struct JobOnly {
        #[serde(default)]
        job: Option<serde_json::Value>,
    }
    let text = read_header(path)?;
    let j: JobOnly = serde_json::from_str(&text).map_err(|e| corrupt(path, e.to_string()))?;
    Ok(j.job)
}

/// Loads a checkpoint for the job `(sys, y_word)` and rebuilds a runnable
/// engine from it.
pub fn checkpoint_resume(
    path: &Path,
    sys: Arc<CoxeterSystem>,
    y_word: &[usize],
    options: EngineOptions,
) -> Result<Engine> {
    let text = read_header(path)?;
    let doc: CheckpointFile =
        serde_json::from_str(&text).map_err(|e| corrupt(path, e.to_string()))?;
    let expected = sys.fingerprint();
    if doc.fingerprint != expected {
        return Err(KlError::FingerprintMismatch {
            expected,
            found: doc.fingerprint,
        });
    }
    if doc.target != y_word {
        return Err(KlError::FingerprintMismatch {
            expected: format!("target {y_word:?}"),
            found: format!("target {:?}", doc.target),
        });
    }

    let (arena, _, y_id) = Engine::initial_vector(sys.clone(), y_word)?;
    let mut fat = ModuleVector::zero();
    for entry in doc.fat {
        let (x, reduced) = sys
            .word_to_element(&entry.x)
            .map_err(|e| corrupt(path, e.to_string()))?;
        if !reduced {
            return Err(corrupt(path, format!("word {:?} is not reduced", entry.x)));
        }
        let id = arena
            .id_of(&x)
            .ok_or_else(|| corrupt(path, format!("element {:?} is not below the target", entry.x)))?;
        if entry.f.is_zero() || fat.get(id).is_some() {
            return Err(corrupt(path, format!("bad or repeated entry at {:?}", entry.x)));
        }
        fat.insert(id, entry.f);
    }
    if fat.coeff(y_id) != LaurentPoly::one() {
        return Err(corrupt(path, "coefficient at the target is not 1"));
    }
    let state = EngineState {
        fingerprint: expected,
        target: doc.target,
        fat,
        wave_floor: doc.wave_floor,
        wave_in_progress: doc.wave_in_progress,
        counters: doc.counters,
        wave_log: doc.wave_log,
    };
    Engine::with_state(arena, y_id, state, options, true)
}
