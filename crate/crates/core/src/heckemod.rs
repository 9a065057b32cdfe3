//! The right Hecke module `M^J` in the normalized basis `m̃_x = m_x / t^{ℓ(x)}`.
//!
//! Elements of `W^J` are interned in a [`CosetArena`] and vectors refer to
//! them by [`ElemId`]. The arena memoizes, for every element and generator,
//! which of the three coset cases applies and where `xs` lands, so repeated
//! `C'_s` products never redo matrix arithmetic.
//!
//! In normalized coordinates the action of `C'_s` reads
//!
//! ```text
//! Down:  m̃_x C'_s = t·m̃_x + m̃_{xs}
//! UpIn:  m̃_x C'_s = t⁻¹·m̃_x + m̃_{xs}
//! UpOut: m̃_x C'_s = (t + t⁻¹)·m̃_x
//! ```

use std::collections::BTreeMap;
use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use lru::LruCache;
use rustc_hash::FxHashMap;

use crate::coxeter::{CosetCase, CoxeterSystem, GroupElement};
use crate::error::{KlError, Result};
use crate::laurent::LaurentPoly;

/// Index of an interned element of `W^J`.
pub type ElemId = u32;

/// Id of the identity in every arena.
pub const IDENTITY: ElemId = 0;

/// Memoized outcome of `x ↦ xs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Down(ElemId),
    UpIn(ElemId),
    UpOut,
    /// `xs ∈ W^J` but it was never interned (frozen arenas only).
    Escapes,
}

/// Something that can answer "what is `xs`" for interned `x`.
pub trait CosetAction {
    fn step(&mut self, x: ElemId, s: usize) -> Result<Step>;
    fn rank(&self) -> usize;
}

/// Growable store of `W^J` elements.
#[derive(Clone)]
pub struct CosetArena {
    sys: Arc<CoxeterSystem>,
    elems: Vec<GroupElement>,
    index: FxHashMap<GroupElement, ElemId>,
    steps: Vec<Option<Step>>,
}

impl CosetArena {
    pub fn new(sys: Arc<CoxeterSystem>) -> Self {
        let e = sys.identity();
        let rank = sys.rank();
        let mut index = FxHashMap::default();
        index.insert(e.clone(), IDENTITY);
        CosetArena {
            sys,
            elems: vec![e],
            index,
            steps: vec![None; rank],
        }
    }

    pub fn system(&self) -> &CoxeterSystem {
        &self.sys
    }

    pub fn system_arc(&self) -> &Arc<CoxeterSystem> {
        &self.sys
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn element(&self, id: ElemId) -> &GroupElement {
        &self.elems[id as usize]
    }

    pub fn length(&self, id: ElemId) -> u32 {
        self.elems[id as usize].length()
    }

    pub fn canonical_word(&self, id: ElemId) -> Vec<usize> {
        self.sys.canonical_word(self.element(id))
    }

    pub fn id_of(&self, x: &GroupElement) -> Option<ElemId> {
        self.index.get(x).copied()
    }

    /// Interns `x`, which must lie in `W^J`.
    pub fn intern(&mut self, x: GroupElement) -> Result<ElemId> {
        if let Some(&id) = self.index.get(&x) {
            return Ok(id);
        }
        if !self.sys.is_min_coset_rep(&x) {
            return Err(KlError::NotCosetRep {
                word: self.sys.canonical_word(&x),
            });
        }
        Ok(self.insert_unchecked(x))
    }

    fn insert_unchecked(&mut self, x: GroupElement) -> ElemId {
        let id = ElemId::try_from(self.elems.len()).expect("arena exceeds u32 ids");
        self.index.insert(x.clone(), id);
        self.elems.push(x);
        self.steps.extend(std::iter::repeat_n(None, self.sys.rank()));
        id
    }

    /// Resolves a word (checked reduced and inside `W^J`) to an id,
    /// interning as needed.
    pub fn intern_word(&mut self, word: &[usize]) -> Result<ElemId> {
        let x = self.sys.reduced_word_to_element(word)?;
        self.intern(x)
    }

    /// Fills every step, marking products outside the arena as
    /// [`Step::Escapes`]. No further elements can be added afterwards.
    pub fn freeze(self) -> FrozenArena {
        let rank = self.sys.rank();
        let mut steps = Vec::with_capacity(self.elems.len() * rank);
        for id in 0..self.elems.len() {
            for s in 0..rank {
                let st = match self.steps[id * rank + s] {
                    Some(st) => st,
                    None => {
                        let (case, xs) = self.sys.coset_case_unchecked(&self.elems[id], s);
                        let target = xs.and_then(|xs| self.index.get(&xs).copied());
                        match (case, target) {
                            (CosetCase::UpOut, _) => Step::UpOut,
                            (CosetCase::Down, Some(t)) => Step::Down(t),
                            (CosetCase::UpIn, Some(t)) => Step::UpIn(t),
                            (_, None) => Step::Escapes,
                        }
                    }
                };
                steps.push(st);
            }
        }
        FrozenArena { arena: self, steps }
    }
}

impl CosetAction for CosetArena {
    fn step(&mut self, x: ElemId, s: usize) -> Result<Step> {
        let rank = self.sys.rank();
        if s >= rank {
            return Err(KlError::GeneratorOutOfRange { index: s, rank });
        }
        let slot = x as usize * rank + s;
        if let Some(st) = self.steps[slot] {
            return Ok(st);
        }
        let (case, xs) = self.sys.coset_case_unchecked(&self.elems[x as usize], s);
        let st = match (case, xs) {
            (CosetCase::UpOut, _) => Step::UpOut,
            (CosetCase::Down, Some(xs)) => {
                let t = match self.index.get(&xs) {
                    Some(&t) => t,
                    None => self.insert_unchecked(xs),
                };
                Step::Down(t)
            }
            (CosetCase::UpIn, Some(xs)) => {
                let t = match self.index.get(&xs) {
                    Some(&t) => t,
                    None => self.insert_unchecked(xs),
                };
                Step::UpIn(t)
            }
            _ => unreachable!("coset_case returns an element unless UpOut"),
        };
        self.steps[slot] = Some(st);
        Ok(st)
    }

    fn rank(&self) -> usize {
        self.sys.rank()
    }
}

/// Read-only arena with every step precomputed; shareable across threads.
pub struct FrozenArena {
    arena: CosetArena,
    steps: Vec<Step>,
}

impl FrozenArena {
    pub fn arena(&self) -> &CosetArena {
        &self.arena
    }

    pub fn into_inner(self) -> CosetArena {
        self.arena
    }

    pub fn step_of(&self, x: ElemId, s: usize) -> Step {
        self.steps[x as usize * self.arena.sys.rank() + s]
    }
}

impl std::ops::Deref for FrozenArena {
    type Target = CosetArena;

    fn deref(&self) -> &CosetArena {
        &self.arena
    }
}

impl CosetAction for &FrozenArena {
    fn step(&mut self, x: ElemId, s: usize) -> Result<Step> {
        let rank = self.arena.sys.rank();
        if s >= rank {
            return Err(KlError::GeneratorOutOfRange { index: s, rank });
        }
        match self.step_of(x, s) {
            Step::Escapes => Err(KlError::InternalInvariant(format!(
                "product of element {:?} by generator {s} left the precomputed interval",
                self.arena.canonical_word(x)
            ))),
            st => Ok(st),
        }
    }

    fn rank(&self) -> usize {
        self.arena.sys.rank()
    }
}

/// Finitely supported vector in `M^J`; the coefficient stored at `x` is the
/// coefficient of `m̃_x`. Zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ModuleVector {
    coeffs: FxHashMap<ElemId, LaurentPoly>,
}

impl std::fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut keys: Vec<_> = self.coeffs.keys().copied().collect();
        keys.sort_unstable();
        f.debug_map()
            .entries(keys.iter().map(|k| (k, &self.coeffs[k])))
            .finish()
    }
}

impl ModuleVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `m_e = m̃_e`.
    pub fn unit() -> Self {
        let mut v = Self::default();
        v.coeffs.insert(IDENTITY, LaurentPoly::one());
        v
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (ElemId, LaurentPoly)>) -> Self {
        let mut v = Self::default();
        for (id, f) in coeffs {
            v.add_assign_at(id, &f, 0);
        }
        v
    }

    pub fn coeff(&self, x: ElemId) -> LaurentPoly {
        self.coeffs.get(&x).cloned().unwrap_or_default()
    }

    pub fn get(&self, x: ElemId) -> Option<&LaurentPoly> {
        self.coeffs.get(&x)
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ElemId, &LaurentPoly)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    /// Support ids in ascending order.
    pub fn sorted_ids(&self) -> Vec<ElemId> {
        let mut ids: Vec<ElemId> = self.coeffs.keys().copied().collect();
        ids.sort_unstable();
        ids
    }

    /// `coeff[x] += t^k * f`
    pub fn add_assign_at(&mut self, x: ElemId, f: &LaurentPoly, k: i32) {
        if f.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(x).or_default();
        slot.add_shifted_assign(f, k);
        if slot.is_zero() {
            self.coeffs.remove(&x);
        }
    }

    /// `self -= g * w`, returning the ids whose coefficient changed.
    pub fn sub_scaled_assign(&mut self, g: &LaurentPoly, w: &ModuleVector) -> Vec<ElemId> {
        let mut touched = Vec::with_capacity(w.coeffs.len());
        for (&x, h) in &w.coeffs {
            let slot = self.coeffs.entry(x).or_default();
            slot.add_product_assign(g, h, true);
            if slot.is_zero() {
                self.coeffs.remove(&x);
            }
            touched.push(x);
        }
        touched
    }

    /// `self -= w`, returning the ids whose coefficient changed.
    pub fn sub_assign(&mut self, w: &ModuleVector) -> Vec<ElemId> {
        let mut touched = Vec::with_capacity(w.coeffs.len());
        for (&x, h) in &w.coeffs {
            self.add_assign_at(x, &h.negate(), 0);
            touched.push(x);
        }
        touched
    }

    /// `self + other`
    pub fn add(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        for (&x, h) in &other.coeffs {
            out.add_assign_at(x, h, 0);
        }
        out
    }

    /// `f · self`
    pub fn scale(&self, f: &LaurentPoly) -> ModuleVector {
        let mut out = ModuleVector::zero();
        if f.is_zero() {
            return out;
        }
        for (&x, h) in &self.coeffs {
            out.coeffs.insert(x, f.mul(h));
        }
        out
    }

    /// Coefficients keyed by canonical word, for comparisons across arenas.
    pub fn to_canonical(&self, arena: &CosetArena) -> BTreeMap<Vec<usize>, LaurentPoly> {
        self.coeffs
            .iter()
            .map(|(&x, f)| (arena.canonical_word(x), f.clone()))
            .collect()
    }

    pub fn remove(&mut self, x: ElemId) -> Option<LaurentPoly> {
        self.coeffs.remove(&x)
    }

    pub fn insert(&mut self, x: ElemId, f: LaurentPoly) {
        if f.is_zero() {
            self.coeffs.remove(&x);
        } else {
            self.coeffs.insert(x, f);
        }
    }
}

/// `v · C'_s`.
pub fn apply_cs(v: &ModuleVector, s: usize, act: &mut impl CosetAction) -> Result<ModuleVector> {
    let mut out = ModuleVector {
        coeffs: FxHashMap::with_capacity_and_hasher(v.coeffs.len() * 2, Default::default()),
    };
    for (&x, f) in &v.coeffs {
        match act.step(x, s)? {
            Step::Down(xs) => {
                out.add_assign_at(x, f, 1);
                out.add_assign_at(xs, f, 0);
            }
            Step::UpIn(xs) => {
                out.add_assign_at(x, f, -1);
                out.add_assign_at(xs, f, 0);
            }
            Step::UpOut => {
                out.add_assign_at(x, f, 1);
                out.add_assign_at(x, f, -1);
            }
            Step::Escapes => unreachable!("CosetAction::step never yields Escapes"),
        }
    }
    Ok(out)
}

/// `m_e C'_{s_1} ⋯ C'_{s_k}` by left-to-right iteration. The word is not
/// validated here; see [`d_prime`] for the checked entry point.
pub fn d_prime_with(word: &[usize], act: &mut impl CosetAction) -> Result<ModuleVector> {
    d_prime_from(ModuleVector::unit(), word, act)
}

fn d_prime_from(
    mut v: ModuleVector,
    word: &[usize],
    act: &mut impl CosetAction,
) -> Result<ModuleVector> {
    for &s in word {
        v = apply_cs(&v, s, act)?;
    }
    Ok(v)
}

/// Checked `^J D'_s` in a fresh arena: the word must be reduced and its
/// product must lie in `W^J`.
pub fn d_prime(sys: Arc<CoxeterSystem>, word: &[usize]) -> Result<(CosetArena, ModuleVector)> {
    let mut arena = CosetArena::new(sys);
    check_target_word(arena.system(), word)?;
    let v = d_prime_with(word, &mut arena)?;
    Ok((arena, v))
}

/// Validates that `word` is a reduced word of an element of `W^J`.
pub fn check_target_word(sys: &CoxeterSystem, word: &[usize]) -> Result<GroupElement> {
    let y = sys.reduced_word_to_element(word)?;
    if !sys.is_min_coset_rep(&y) {
        return Err(KlError::NotCosetRep {
            word: word.to_vec(),
        });
    }
    Ok(y)
}

/// `v - g·w`
pub fn axpy_sub(v: &ModuleVector, g: &LaurentPoly, w: &ModuleVector) -> ModuleVector {
    let mut out = v.clone();
    out.sub_scaled_assign(g, w);
    out
}

/// Bounded LRU of `D'` prefix products, keyed by word. Off by default; it
/// trades memory for shared-prefix reuse.
pub struct DPrimeCache {
    inner: Mutex<LruCache<Vec<usize>, Arc<ModuleVector>>>,
    stride: usize,
}

impl DPrimeCache {
    pub fn new(capacity: NonZeroUsize) -> Self {
        DPrimeCache {
            inner: Mutex::new(LruCache::new(capacity)),
            stride: 4,
        }
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `D'(word)`, resuming from the longest cached prefix and storing
    /// every `stride`-th prefix plus the full word.
    pub fn d_prime(&self, word: &[usize], act: &mut impl CosetAction) -> Result<ModuleVector> {
        let (start, mut v) = {
            let mut guard = self.inner.lock().unwrap();
            (1..=word.len())
                .rev()
                .find_map(|k| guard.get(&word[..k]).map(|v| (k, (**v).clone())))
                .unwrap_or((0, ModuleVector::unit()))
        };
        for k in start..word.len() {
            v = apply_cs(&v, word[k], act)?;
            let done = k + 1;
            if done == word.len() || done % self.stride == 0 {
                self.inner
                    .lock()
                    .unwrap()
                    .put(word[..done].to_vec(), Arc::new(v.clone()));
            }
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(terms: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().copied())
    }

    fn canon(arena: &CosetArena, v: &ModuleVector) -> BTreeMap<Vec<usize>, LaurentPoly> {
        v.to_canonical(arena)
    }

    #[test]
    fn unit_vector() {
        let v = ModuleVector::unit();
        assert_eq!(v.coeff(IDENTITY), LaurentPoly::one());
        assert_eq!(v.coeff(7), LaurentPoly::zero());
        let sys = Arc::new(CoxeterSystem::type_a(2, &[]).unwrap());
        let mut arena = CosetArena::new(sys);
        assert_eq!(d_prime_with(&[], &mut arena).unwrap(), v);
    }

    #[test]
    fn cs_on_unit_free() {
        let sys = Arc::new(CoxeterSystem::type_a(1, &[]).unwrap());
        let mut arena = CosetArena::new(sys);
        let v = apply_cs(&ModuleVector::unit(), 0, &mut arena).unwrap();
        let c = canon(&arena, &v);
        assert_eq!(c[&vec![]], lp(&[(-1, 1)]));
        assert_eq!(c[&vec![0]], LaurentPoly::one());
        assert_eq!(c.len(), 2);

        // m̃_s C'_s = t m̃_s + m̃_e
        let s = arena.intern_word(&[0]).unwrap();
        let ms = ModuleVector::from_coeffs([(s, LaurentPoly::one())]);
        let v = apply_cs(&ms, 0, &mut arena).unwrap();
        let c = canon(&arena, &v);
        assert_eq!(c[&vec![0]], lp(&[(1, 1)]));
        assert_eq!(c[&vec![]], LaurentPoly::one());
    }

    #[test]
    fn cs_up_out() {
        let sys = Arc::new(CoxeterSystem::type_a(2, &[0]).unwrap());
        let mut arena = CosetArena::new(sys);
        let v = apply_cs(&ModuleVector::unit(), 0, &mut arena).unwrap();
        let c = canon(&arena, &v);
        assert_eq!(c.len(), 1);
        assert_eq!(c[&vec![]], LaurentPoly::t_plus_tinv());
    }

    #[test]
    fn d_prime_examples() {
        let sys = Arc::new(CoxeterSystem::type_a(2, &[]).unwrap());
        let (arena, v) = d_prime(sys.clone(), &[0, 1]).unwrap();
        let c = canon(&arena, &v);
        let expect: BTreeMap<Vec<usize>, LaurentPoly> = [
            (vec![], lp(&[(-2, 1)])),
            (vec![0], lp(&[(-1, 1)])),
            (vec![1], lp(&[(-1, 1)])),
            (vec![0, 1], LaurentPoly::one()),
        ]
        .into_iter()
        .collect();
        assert_eq!(c, expect);

        assert!(matches!(d_prime(sys.clone(), &[0, 0]), Err(KlError::NotReduced { .. })));
        let par = Arc::new(CoxeterSystem::type_a(2, &[0]).unwrap());
        assert!(matches!(d_prime(par, &[0, 1]), Err(KlError::NotCosetRep { .. })));
    }

    #[test]
    fn axpy_examples() {
        let sys = Arc::new(CoxeterSystem::type_a(1, &[]).unwrap());
        let (_, v) = d_prime(sys, &[0]).unwrap();
        assert_eq!(axpy_sub(&v, &LaurentPoly::zero(), &v), v);
        assert!(axpy_sub(&v, &LaurentPoly::one(), &v).is_zero());
        // {e: t², s: 1} − t·{e: t, s: t⁻¹} = {e: 0, s: 0}
        let a = ModuleVector::from_coeffs([(0, lp(&[(2, 1)])), (1, LaurentPoly::one())]);
        let b = ModuleVector::from_coeffs([(0, lp(&[(1, 1)])), (1, lp(&[(-1, 1)]))]);
        assert!(axpy_sub(&a, &lp(&[(1, 1)]), &b).is_zero());
        let r = axpy_sub(&a, &lp(&[(1, 2)]), &b);
        assert_eq!(r.coeff(0), lp(&[(2, -1)]));
        assert_eq!(r.coeff(1), lp(&[(0, -1)]));
    }

    #[test]
    fn frozen_arena_reports_escape() {
        let sys = Arc::new(CoxeterSystem::type_a(2, &[]).unwrap());
        let (arena, _) = d_prime(sys, &[0]).unwrap();
        let frozen = arena.freeze();
        let mut act = &frozen;
        assert!(d_prime_with(&[0], &mut act).is_ok());
        assert!(matches!(
            d_prime_with(&[1, 0], &mut act),
            Err(KlError::InternalInvariant(_))
        ));
    }

    #[test]
    fn cache_matches_direct() {
        let sys = Arc::new(CoxeterSystem::type_a(3, &[]).unwrap());
        let mut arena = CosetArena::new(sys);
        let cache = DPrimeCache::new(NonZeroUsize::new(8).unwrap());
        for word in [&[1usize, 0, 2, 1][..], &[1, 0, 2], &[1, 0, 2, 1, 0]] {
            let direct = d_prime_with(word, &mut arena).unwrap();
            let cached = cache.d_prime(word, &mut arena).unwrap();
            assert_eq!(direct, cached);
        }
        assert!(!cache.is_empty());
    }
}
