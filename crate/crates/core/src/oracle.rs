//! Reference values by the length-increasing recursion
//!
//! ```text
//! ^J C'_w = ^J C'_{ws} C'_s − Σ ^Jμ(z, ws) ^J C'_z     (zs < z or zs ∉ W^J)
//! ```
//!
//! over all of `W^J` up to a length bound. Every basis element is stored, so
//! this is only meant for small systems and for cross-checking the engine.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use crate::coxeter::{CoxeterSystem, GroupElement};
use crate::engine::{compute_target, result_from_vector, EngineOptions, KLResult, RunStats};
use crate::error::{KlError, Result};
use crate::heckemod::{apply_cs, CosetAction, CosetArena, ElemId, ModuleVector, Step, IDENTITY};
use crate::laurent::LaurentPoly;

static TABLES_BUILT: AtomicUsize = AtomicUsize::new(0);

/// Number of [`BasisTable`]s built so far in this process.
pub fn tables_built() -> usize {
    TABLES_BUILT.load(Ordering::SeqCst)
}

/// Every `^J C'_z` with `ℓ(z) ≤ bound`.
pub struct BasisTable {
    arena: CosetArena,
    vectors: BTreeMap<ElemId, ModuleVector>,
    /// Ids in length order, canonical word order within a length.
    order: Vec<ElemId>,
    bound: usize,
    complete: bool,
}

impl BasisTable {
    pub fn system(&self) -> &CoxeterSystem {
        self.arena.system()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// True when `W^J` has no element longer than those in the table.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn arena(&self) -> &CosetArena {
        &self.arena
    }

    /// Elements of the table in length order.
    pub fn elements(&self) -> impl Iterator<Item = &GroupElement> + '_ {
        self.order.iter().map(|&id| self.arena.element(id))
    }

    pub fn canonical_words(&self) -> Vec<Vec<usize>> {
        self.order
            .iter()
            .map(|&id| self.arena.canonical_word(id))
            .collect()
    }

    pub fn get(&self, z: &GroupElement) -> Option<&ModuleVector> {
        self.arena.id_of(z).and_then(|id| self.vectors.get(&id))
    }
}

/// Builds the table by breadth-first search over `W^J`, using the smallest
/// right descent of each new element.
pub fn build_table(sys: Arc<CoxeterSystem>, length_bound: usize) -> Result<BasisTable> {
    TABLES_BUILT.fetch_add(1, Ordering::SeqCst);
    let rank = sys.rank();
    let mut arena = CosetArena::new(sys);
    let mut vectors = BTreeMap::new();
    vectors.insert(IDENTITY, ModuleVector::unit());
    let mut order = vec![IDENTITY];
    let mut frontier = vec![IDENTITY];
    let mut len = 0;
    while !frontier.is_empty() && len < length_bound {
        let mut next = Vec::new();
        for &x in &frontier {
            for s in 0..rank {
                if let Step::UpIn(xs) = arena.step(x, s)? {
                    if !next.contains(&xs) {
                        next.push(xs);
                    }
                }
            }
        }
        next.sort_by_cached_key(|&w| arena.canonical_word(w));
        for &w in &next {
            let v = recursion_step(&mut arena, &vectors, w)?;
            check_basis_vector(&arena, w, &v)?;
            vectors.insert(w, v);
        }
        order.extend_from_slice(&next);
        frontier = next;
        len += 1;
    }
    let complete = frontier.is_empty()
        || frontier.iter().all(|&x| {
            (0..rank).all(|s| !matches!(arena.step(x, s), Ok(Step::UpIn(_))))
        });
    Ok(BasisTable {
        arena,
        vectors,
        order,
        bound: length_bound,
        complete,
    })
}

fn recursion_step(
    arena: &mut CosetArena,
    vectors: &BTreeMap<ElemId, ModuleVector>,
    w: ElemId,
) -> Result<ModuleVector> {
    let elem = arena.element(w).clone();
    let sys = arena.system_arc().clone();
    let s = sys
        .right_descents(&elem)
        .into_iter()
        .next()
        .ok_or_else(|| KlError::InternalInvariant("identity reached the recursion".into()))?;
    let ws = match arena.step(w, s)? {
        Step::Down(ws) => ws,
        other => {
            return Err(KlError::InternalInvariant(format!(
                "right descent {s} of {:?} gave {other:?}",
                arena.canonical_word(w)
            )))
        }
    };
    let prev = &vectors[&ws];
    let mut v = apply_cs(prev, s, arena)?;
    let mut terms: Vec<(ElemId, LaurentPoly)> = Vec::new();
    for z in prev.sorted_ids() {
        if z == ws {
            continue;
        }
        let mu = prev.coeff(z).mu_coefficient();
        if mu.is_zero() {
            continue;
        }
        if matches!(arena.step(z, s)?, Step::Down(_) | Step::UpOut) {
            terms.push((z, LaurentPoly::monomial(0, mu)));
        }
    }
    for (z, m) in terms {
        v.sub_scaled_assign(&m, &vectors[&z]);
    }
    Ok(v)
}

fn check_basis_vector(arena: &CosetArena, w: ElemId, v: &ModuleVector) -> Result<()> {
    let lw = arena.length(w);
    let bad = |what: &str| {
        KlError::InternalInvariant(format!(
            "recursion produced {what} for {:?}",
            arena.canonical_word(w)
        ))
    };
    if v.coeff(w) != LaurentPoly::one() {
        return Err(bad("a top coefficient other than 1"));
    }
    for (x, f) in v.iter() {
        if x == w {
            continue;
        }
        let lx = arena.length(x);
        if lx >= lw || !f.is_strictly_negative() || !f.parity_ok((lw - lx) % 2) {
            return Err(bad("a malformed coefficient"));
        }
    }
    Ok(())
}

/// Reads `P^J_{x,y}` for all `x` off the stored `^J C'_y`.
pub fn oracle_result(table: &BasisTable, y: &GroupElement) -> Result<KLResult> {
    let id = table.arena.id_of(y).filter(|id| table.vectors.contains_key(id));
    let id = id.ok_or_else(|| {
        KlError::InvalidInput(format!(
            "element {:?} is not in the table (bound {})",
            table.system().canonical_word(y),
            table.bound
        ))
    })?;
    let v = &table.vectors[&id];
    let stats = RunStats {
        interval_size: v.support_len(),
        ..RunStats::default()
    };
    result_from_vector(&table.arena, id, &table.arena.canonical_word(id), v, stats)
}

/// Outcome of comparing the engine with the oracle for one target.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub y_word: Vec<usize>,
    /// `None` when the results agree exactly.
    pub divergence: Option<String>,
}

impl CompareReport {
    pub fn matches(&self) -> bool {
        self.divergence.is_none()
    }
}

/// Engine versus oracle on a single target given by a reduced word.
pub fn compare(sys: Arc<CoxeterSystem>, y_word: &[usize]) -> Result<CompareReport> {
    let table = build_table(sys.clone(), y_word.len())?;
    compare_with(&table, y_word)
}

/// Engine versus an existing table.
pub fn compare_with(table: &BasisTable, y_word: &[usize]) -> Result<CompareReport> {
    let sys = table.arena.system_arc().clone();
    let engine = compute_target(sys.clone(), y_word, EngineOptions::default())?;
    let oracle = oracle_result(table, &engine.y)?;
    Ok(CompareReport {
        y_word: y_word.to_vec(),
        divergence: oracle.first_divergence(&engine),
    })
}

/// Engine versus oracle for every `y ∈ W^J` with `ℓ(y) ≤ length_bound`,
/// sharing one table.
pub fn compare_all(sys: Arc<CoxeterSystem>, length_bound: usize) -> Result<Vec<CompareReport>> {
    let table = build_table(sys, length_bound)?;
    table
        .canonical_words()
        .iter()
        .map(|w| compare_with(&table, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::QPoly;

    fn sys(s: CoxeterSystem) -> Arc<CoxeterSystem> {
        Arc::new(s)
    }

    #[test]
    fn a2_all_trivial() {
        let t = build_table(sys(CoxeterSystem::type_a(2, &[]).unwrap()), 3).unwrap();
        assert_eq!(t.len(), 6);
        assert!(t.is_complete());
        for y in t.elements() {
            let r = oracle_result(&t, y).unwrap();
            assert!(r.entries.values().all(|e| e.p == QPoly::one()));
        }
    }

    #[test]
    fn b2_all_trivial() {
        let b2 = CoxeterSystem::from_cartan(vec![vec![2, -1], vec![-2, 2]], &[]).unwrap();
        let b2 = sys(b2);
        let t = build_table(b2.clone(), 4).unwrap();
        assert_eq!(t.len(), 8);
        for y in t.elements() {
            let r = oracle_result(&t, y).unwrap();
            let below = t.elements().filter(|x| b2.bruhat_leq(x, y)).count();
            assert_eq!(r.entries.len(), below);
            assert!(r.entries.values().all(|e| e.p == QPoly::one()));
        }
    }

    #[test]
    fn a3_first_nontrivial() {
        let s = sys(CoxeterSystem::type_a(3, &[]).unwrap());
        let t = build_table(s.clone(), 4).unwrap();
        let y = s.reduced_word_to_element(&[1, 0, 2, 1]).unwrap();
        let r = oracle_result(&t, &y).unwrap();
        assert_eq!(r.p(&[]), QPoly::from_i64s(&[1, 1]));
        assert_eq!(r.p(&[1]), QPoly::from_i64s(&[1, 1]));
        assert_eq!(r.p(&[0, 2]), QPoly::one());
    }

    #[test]
    fn engine_agrees_on_s4() {
        let reports = compare_all(sys(CoxeterSystem::type_a(3, &[]).unwrap()), 6).unwrap();
        assert_eq!(reports.len(), 24);
        for r in reports {
            assert!(r.matches(), "{:?}: {:?}", r.y_word, r.divergence);
        }
    }

    #[test]
    fn parabolic_matches_longest_element_shift() {
        // P^J_{x,y} = P_{w_J x, w_J y} for A2 and A3 with every J.
        for n in [2usize, 3] {
            let full = sys(CoxeterSystem::type_a(n, &[]).unwrap());
            let full_table = build_table(full.clone(), 64).unwrap();
            for mask in 0..(1u32 << n) {
                let j: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let par = sys(CoxeterSystem::type_a(n, &j).unwrap());
                let wj = par.longest_parabolic_element(64).unwrap();
                let wj_word = full.canonical_word(&wj);
                let t = build_table(par.clone(), 64).unwrap();
                for yw in t.canonical_words() {
                    let y = par.reduced_word_to_element(&yw).unwrap();
                    let rp = oracle_result(&t, &y).unwrap();
                    let big: Vec<usize> = wj_word.iter().chain(&yw).copied().collect();
                    let wy = full.reduced_word_to_element(&big).unwrap();
                    let rf = oracle_result(&full_table, &wy).unwrap();
                    for (xw, e) in &rp.entries {
                        let big: Vec<usize> = wj_word.iter().chain(xw).copied().collect();
                        let wx = full.reduced_word_to_element(&big).unwrap();
                        let key = full.canonical_word(&wx);
                        assert_eq!(e.p, rf.p(&key), "J={j:?} y={yw:?} x={xw:?}");
                        assert_eq!(rp.mu_of(xw), if key == rf.y_word { Default::default() } else { rf.mu_of(&key) });
                    }
                }
            }
        }
    }

    #[test]
    fn counter_advances() {
        let before = tables_built();
        build_table(sys(CoxeterSystem::type_a(1, &[]).unwrap()), 1).unwrap();
        assert!(tables_built() > before);
    }
}
