use std::fs;
use std::sync::Arc;
use std::time::Duration;

use klq::affine_an::{affine_system, weight_to_y, Weight};
use klq::coxeter::CoxeterSystem;
use klq::engine::{
    checkpoint_resume, compute_target, resume_target, CheckpointPolicy, Engine, EngineOptions,
};
use klq::error::KlError;

fn n4_case() -> (Arc<CoxeterSystem>, Vec<usize>) {
    let sys = Arc::new(affine_system(4).unwrap());
    let case = weight_to_y(&sys, 4, 5, &Weight(vec![2, 3, 3, 2])).unwrap();
    (sys, case.y_word)
}

fn with_checkpoint(path: &std::path::Path) -> EngineOptions {
    EngineOptions {
        checkpoint: Some(CheckpointPolicy {
            path: path.to_path_buf(),
            interval: Duration::ZERO,
            every_wave: true,
            job: None,
        }),
        ..EngineOptions::default()
    }
}

#[test]
fn halting_at_every_wave_then_resuming_is_invisible() {
    let (sys, w) = n4_case();
    let full = compute_target(sys.clone(), &w, EngineOptions::default()).unwrap();
    let waves = full.stats.counters.waves;
    assert!(waves >= 3);
    let dir = tempfile::tempdir().unwrap();
    for k in 1..waves {
        let path = dir.path().join(format!("ck{k}.json"));
        let opts = EngineOptions {
            halt_after_waves: Some(k),
            ..with_checkpoint(&path)
        };
        let err = compute_target(sys.clone(), &w, opts).unwrap_err();
        assert!(matches!(err, KlError::Halted { wave } if wave == k));
        let r = resume_target(sys.clone(), &w, &path, EngineOptions::default()).unwrap();
        assert!(r.stats.resumed);
        assert_eq!(full.first_divergence(&r), None);
        assert_eq!(r.stats.counters.waves, waves);
        assert_eq!(r.stats.counters.corrections, full.stats.counters.corrections);
    }
}

#[test]
fn halting_inside_a_wave() {
    let sys = Arc::new(affine_system(5).unwrap());
    let case = weight_to_y(&sys, 5, 6, &Weight(vec![3, 4, 4, 4, 3])).unwrap();
    let full = compute_target(sys.clone(), &case.y_word, EngineOptions::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut mid_wave_seen = false;
    for limit in [5u64, 17, 40, 90, 140] {
        let path = dir.path().join(format!("mid{limit}.json"));
        let opts = EngineOptions {
            halt_after_corrections: Some(limit),
            ..with_checkpoint(&path)
        };
        match compute_target(sys.clone(), &case.y_word, opts) {
            Err(KlError::Halted { .. }) => {}
            other => panic!("expected a halt, got {:?}", other.map(|_| ())),
        }
        let eng = checkpoint_resume(&path, sys.clone(), &case.y_word, EngineOptions::default()).unwrap();
        mid_wave_seen |= eng.state().wave_in_progress.is_some();
        let r = resume_target(sys.clone(), &case.y_word, &path, EngineOptions::default()).unwrap();
        assert_eq!(full.first_divergence(&r), None);
        assert_eq!(r.stats.counters.corrections, full.stats.counters.corrections);
        assert_eq!(r.stats.counters.waves, full.stats.counters.waves);
        assert_eq!(r.stats.counters.bar_symmetric_checks, r.stats.counters.corrections);
    }
    assert!(mid_wave_seen);
}

#[test]
fn checkpoint_errors() {
    let (sys, w) = n4_case();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.json");
    let opts = EngineOptions {
        halt_after_waves: Some(2),
        ..with_checkpoint(&path)
    };
    assert!(compute_target(sys.clone(), &w, opts).is_err());

    let other_word = &w[..w.len() - 1];
    let e = checkpoint_resume(&path, sys.clone(), other_word, EngineOptions::default()).err().unwrap();
    assert!(matches!(e, KlError::FingerprintMismatch { .. }));
    assert_eq!(e.exit_code(), 4);

    let other_sys = Arc::new(CoxeterSystem::affine_a(4, &[1, 2, 3]).unwrap());
    let e = checkpoint_resume(&path, other_sys, &w, EngineOptions::default()).err().unwrap();
    assert!(matches!(e, KlError::FingerprintMismatch { .. }));

    let text = fs::read_to_string(&path).unwrap();
    fs::write(&path, "{\"format\":\"something-else\",\"version\":1}").unwrap();
    assert!(matches!(
        checkpoint_resume(&path, sys.clone(), &w, EngineOptions::default()),
        Err(KlError::CorruptCheckpoint { .. })
    ));
    fs::write(&path, text.replacen("\"version\":1", "\"version\":7", 1)).unwrap();
    assert!(matches!(
        checkpoint_resume(&path, sys.clone(), &w, EngineOptions::default()),
        Err(KlError::VersionMismatch { found: 7, .. })
    ));
    fs::write(&path, &text[..text.len() - 10]).unwrap();
    assert!(matches!(
        checkpoint_resume(&path, sys, &w, EngineOptions::default()),
        Err(KlError::CorruptCheckpoint { .. })
    ));
}

#[test]
fn atomic_writes_leave_no_temporaries() {
    let (sys, w) = n4_case();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ck.json");
    let mut eng = Engine::new(sys, &w, with_checkpoint(&path)).unwrap();
    eng.run().unwrap();
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names, vec![std::ffi::OsString::from("ck.json")]);
}
