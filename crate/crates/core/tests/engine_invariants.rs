use std::num::NonZeroUsize;
use std::sync::Arc;

use klq::coxeter::CoxeterSystem;
use klq::engine::{compute_checked, compute_target, find_offenders, Engine, EngineOptions};
use klq::heckemod::{CosetArena, ModuleVector, IDENTITY};
use klq::laurent::{LaurentPoly, QPoly};
use klq::oracle::{build_table, oracle_result};
use proptest::prelude::*;

fn coset_word(sys: &CoxeterSystem, raw: &[usize]) -> Vec<usize> {
    let mut x = sys.identity();
    for &r in raw {
        let s = r % sys.rank();
        let xs = sys.mul_gen_right(&x, s);
        if xs.length() > x.length() && sys.is_min_coset_rep(&xs) {
            x = xs;
        }
    }
    sys.canonical_word(&x)
}

fn b3(mask: u32) -> Arc<CoxeterSystem> {
    let j: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
    Arc::new(CoxeterSystem::type_b(3, &j).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn runs_satisfy_every_invariant(mask in 0u32..8, raw in prop::collection::vec(0usize..3, 0..16)) {
        let sys = b3(mask);
        let w = coset_word(&sys, &raw);
        let r = compute_checked(sys.clone(), &w, EngineOptions::default()).unwrap();
        r.check_invariants().unwrap();
        for wave in &r.stats.wave_log {
            prop_assert!(wave.peak_live_vectors <= 1 + wave.offenders);
        }
        let ly = w.len() as u32;
        for e in r.entries.values() {
            if e.length < ly {
                let d = e.p.degree().unwrap();
                prop_assert!(2 * (d as u32) < ly - e.length);
            }
            prop_assert_eq!(e.p.coeff(0), klq::laurent::Coeff::ONE);
        }
    }

    #[test]
    fn schedule_and_cache_do_not_change_results(mask in 0u32..8, raw in prop::collection::vec(0usize..3, 0..16)) {
        let sys = b3(mask);
        let w = coset_word(&sys, &raw);
        let one = compute_target(sys.clone(), &w, EngineOptions::default()).unwrap();
        let opts = EngineOptions {
            threads: 3,
            cache_capacity: NonZeroUsize::new(16),
            ..EngineOptions::default()
        };
        let many = compute_target(sys.clone(), &w, opts).unwrap();
        prop_assert!(one.same_values(&many));
        prop_assert_eq!(one.stats.counters.corrections, many.stats.counters.corrections);
        prop_assert_eq!(&one.stats.wave_log.iter().map(|w| w.length).collect::<Vec<_>>(),
                        &many.stats.wave_log.iter().map(|w| w.length).collect::<Vec<_>>());
    }

    #[test]
    fn matches_the_oracle(mask in 0u32..8, raw in prop::collection::vec(0usize..3, 0..16)) {
        let sys = b3(mask);
        let w = coset_word(&sys, &raw);
        let table = build_table(sys.clone(), w.len()).unwrap();
        let r = compute_target(sys.clone(), &w, EngineOptions::default()).unwrap();
        let o = oracle_result(&table, &r.y).unwrap();
        prop_assert_eq!(o.first_divergence(&r), None);
    }
}

#[test]
fn offender_selection() {
    let sys = Arc::new(CoxeterSystem::type_a(3, &[]).unwrap());
    let mut arena = CosetArena::new(sys);
    let y = arena.intern_word(&[1, 0, 2, 1]).unwrap();
    let a = arena.intern_word(&[0, 2, 1]).unwrap();
    let b = arena.intern_word(&[0]).unwrap();
    assert!(find_offenders(&ModuleVector::unit(), IDENTITY, &arena).is_empty());

    let clean = ModuleVector::from_coeffs([
        (y, LaurentPoly::one()),
        (IDENTITY, LaurentPoly::monomial(-2, 1)),
    ]);
    assert!(find_offenders(&clean, y, &arena).is_empty());

    let one = ModuleVector::from_coeffs([
        (y, LaurentPoly::one()),
        (IDENTITY, LaurentPoly::t_plus_tinv()),
    ]);
    assert_eq!(find_offenders(&one, y, &arena), vec![(IDENTITY, LaurentPoly::t_plus_tinv())]);

    let two = ModuleVector::from_coeffs([
        (y, LaurentPoly::one()),
        (a, LaurentPoly::monomial(0, 2)),
        (b, LaurentPoly::monomial(1, 1)),
    ]);
    assert_eq!(find_offenders(&two, y, &arena), vec![(a, LaurentPoly::monomial(0, 2))]);
}

#[test]
fn classical_values_in_s4() {
    let sys = Arc::new(CoxeterSystem::type_a(3, &[]).unwrap());
    let r = compute_target(sys, &[1, 0, 2, 1], EngineOptions::default()).unwrap();
    assert_eq!(r.p(&[]), QPoly::from_i64s(&[1, 1]));
    assert_eq!(r.p(&[1]), QPoly::from_i64s(&[1, 1]));
    assert_eq!(r.p(&[0, 2]), QPoly::one());
    assert_eq!(r.mu_of(&[1]), klq::laurent::Coeff::ONE);
}

#[test]
fn long_element_of_a3_is_corrected() {
    let sys = Arc::new(CoxeterSystem::type_a(3, &[]).unwrap());
    let mut eng = Engine::new(sys, &[0, 1, 0, 2, 1, 0], EngineOptions::default()).unwrap();
    eng.run().unwrap();
    assert!(eng.state().counters.corrections > 0);
    eng.check_final_state().unwrap();
    let r = eng.result(Default::default()).unwrap();
    assert_eq!(r.entries.len(), 24);
    assert!(r.entries.values().all(|e| e.p == QPoly::one()));
}

#[test]
fn parabolic_affine_target_is_finite() {
    let sys = Arc::new(CoxeterSystem::affine_a(2, &[1, 2]).unwrap());
    let w = coset_word(&sys, &[0, 1, 2, 0, 1, 2, 0, 1, 2, 0, 2, 1, 0]);
    let r = compute_checked(sys.clone(), &w, EngineOptions::default()).unwrap();
    let table = build_table(sys, w.len()).unwrap();
    assert_eq!(oracle_result(&table, &r.y).unwrap().first_divergence(&r), None);
}
