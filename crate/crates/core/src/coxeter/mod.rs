//! Coxeter systems realized by integral generalized Cartan matrices.
//!
//! An element `w` is stored as the images of the simple roots under `w`
//! (`fwd`, one column per simple root) and under `w⁻¹` (`inv`). The sign of a
//! column decides descents, so lengths and coset membership are exact integer
//! computations with no relations to rewrite.

mod matrix;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{KlError, Result};
use matrix::RootMatrix;

/// Coxeter exponent `m_ij` for `i ≠ j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bond {
    Order(u32),
    Infinite,
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Order(m) => write!(f, "{m}"),
            Bond::Infinite => write!(f, "∞"),
        }
    }
}

/// Where `xs` lands relative to `W^J`, for `x ∈ W^J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CosetCase {
    /// `ℓ(xs) < ℓ(x)`; `xs` is again in `W^J`.
    Down,
    /// `ℓ(xs) > ℓ(x)` and `xs ∈ W^J`.
    UpIn,
    /// `ℓ(xs) > ℓ(x)` and `xs ∉ W^J`.
    UpOut,
}

/// Named families accepted by [`CoxeterSystem::named`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "B")]
    B,
    #[serde(rename = "D")]
    D,
    #[serde(rename = "G2")]
    G2,
    #[serde(rename = "affine-A")]
    AffineA,
}

impl std::str::FromStr for CartanType {
    type Err = KlError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "D" => Ok(CartanType::D),
            "G2" => Ok(CartanType::G2),
            "affine-A" | "affineA" | "A~" => Ok(CartanType::AffineA),
            other => Err(KlError::InvalidInput(format!("unknown Cartan type {other:?}"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CoxeterSystem {
    rank: usize,
    cartan: Vec<Vec<i64>>,
    bond: Vec<Vec<Bond>>,
    parabolic: Vec<bool>,
    labels: Vec<String>,
}

impl fmt::Debug for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CoxeterSystem")
            .field("cartan", &self.cartan)
            .field("J", &self.parabolic_indices())
            .finish()
    }
}

fn bond_from_product(p: i64) -> Bond {
    match p {
        0 => Bond::Order(2),
        1 => Bond::Order(3),
        2 => Bond::Order(4),
        3 => Bond::Order(6),
        _ => Bond::Infinite,
    }
}

impl CoxeterSystem {
    /// Validates a generalized Cartan matrix and derives the bond labels.
    /// `parabolic` lists the generator indices (0-based) forming `J`.
    pub fn from_cartan(cartan: Vec<Vec<i64>>, parabolic: &[usize]) -> Result<Self> {
        let rank = cartan.len();
        if rank == 0 {
            return Err(KlError::InvalidCartan("empty matrix".into()));
        }
        for (i, row) in cartan.iter().enumerate() {
            if row.len() != rank {
                return Err(KlError::InvalidCartan(format!(
                    "row {i} has {} entries, expected {rank}",
                    row.len()
                )));
            }
        }
        let mut bond = vec![vec![Bond::Order(1); rank]; rank];
        for i in 0..rank {
            if cartan[i][i] != 2 {
                return Err(KlError::InvalidCartan(format!(
                    "diagonal entry a[{i}][{i}] = {} (must be 2)",
                    cartan[i][i]
                )));
            }
            for j in 0..rank {
                if i == j {
                    continue;
                }
                let (a, b) = (cartan[i][j], cartan[j][i]);
                if a > 0 {
                    return Err(KlError::InvalidCartan(format!(
                        "positive off-diagonal entry a[{i}][{j}] = {a}"
                    )));
                }
                if (a == 0) != (b == 0) {
                    return Err(KlError::InvalidCartan(format!(
                        "a[{i}][{j}] = {a} but a[{j}][{i}] = {b}"
                    )));
                }
                bond[i][j] = bond_from_product(a.checked_mul(b).ok_or_else(|| {
                    KlError::InvalidCartan(format!("entries at ({i},{j}) overflow"))
                })?);
            }
        }
        let labels = (1..=rank).map(|i| i.to_string()).collect();
        let mut sys = CoxeterSystem {
            rank,
            cartan,
            bond,
            parabolic: vec![false; rank],
            labels,
        };
        sys.set_parabolic(parabolic)?;
        Ok(sys)
    }

    /// Builds the integral realization of a Coxeter matrix given by bond
    /// labels (`None` means `∞`). Only crystallographic labels 2, 3, 4, 6 are
    /// accepted; `∞` is realized by `a_ij = a_ji = -2`.
    pub fn from_bonds(bonds: &[Vec<Option<u32>>], parabolic: &[usize]) -> Result<Self> {
        let rank = bonds.len();
        let mut cartan = vec![vec![0i64; rank]; rank];
        for i in 0..rank {
            if bonds[i].len() != rank {
                return Err(KlError::InvalidCartan(format!("bond row {i} has wrong length")));
            }
            cartan[i][i] = 2;
            for j in 0..rank {
                if i == j {
                    continue;
                }
                if bonds[i][j] != bonds[j][i] {
                    return Err(KlError::InvalidCartan(format!("bond ({i},{j}) not symmetric")));
                }
                // The larger entry sits below the diagonal.
                let (upper, lower) = match bonds[i][j] {
                    Some(2) => (0, 0),
                    Some(3) => (-1, -1),
                    Some(4) => (-1, -2),
                    Some(6) => (-1, -3),
                    None => (-2, -2),
                    Some(m) => {
                        return Err(KlError::InvalidCartan(format!(
                            "bond label {m} at ({i},{j}) has no integral realization"
                        )))
                    }
                };
                cartan[i][j] = if i < j { upper } else { lower };
            }
        }
        Self::from_cartan(cartan, parabolic)
    }

    /// Type `A_n` (the symmetric group on `n+1` letters), generators labelled
    /// `1..=n`.
    pub fn type_a(n: usize, parabolic: &[usize]) -> Result<Self> {
        Self::from_cartan(chain_cartan(n, &[]), parabolic)
    }

    /// Type `B_n`: the last bond has order 4.
    pub fn type_b(n: usize, parabolic: &[usize]) -> Result<Self> {
        if n < 2 {
            return Err(KlError::InvalidInput("type B needs n >= 2".into()));
        }
        Self::from_cartan(chain_cartan(n, &[(n - 2, n - 1, -1, -2)]), parabolic)
    }

    /// Type `D_n` (n ≥ 4): node `n-1` attaches to node `n-3`.
    pub fn type_d(n: usize, parabolic: &[usize]) -> Result<Self> {
        if n < 4 {
            return Err(KlError::InvalidInput("type D needs n >= 4".into()));
        }
        let mut c = chain_cartan(n, &[]);
        c[n - 2][n - 1] = 0;
        c[n - 1][n - 2] = 0;
        c[n - 3][n - 1] = -1;
        c[n - 1][n - 3] = -1;
        Self::from_cartan(c, parabolic)
    }

    pub fn type_g2(parabolic: &[usize]) -> Result<Self> {
        Self::from_cartan(vec![vec![2, -1], vec![-3, 2]], parabolic)
    }

    /// Affine `Ã_n` with generators `s_0, …, s_n` (labelled `0..=n`, index
    /// equal to label); `s_i s_{i+1}` and `s_n s_0` have order 3. For `n = 1`
    /// the single bond is `∞`.
    pub fn affine_a(n: usize, parabolic: &[usize]) -> Result<Self> {
        if n == 0 {
            return Err(KlError::InvalidInput("affine A needs n >= 1".into()));
        }
        let r = n + 1;
        // a cycle; for n = 1 both edges join the same pair
        let adjacent = |i: usize, j: usize| (i + 1) % r == j || (j + 1) % r == i;
        let c = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| match () {
                        _ if i == j => 2,
                        _ if n == 1 => -2,
                        _ if adjacent(i, j) => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        let mut sys = Self::from_cartan(c, parabolic)?;
        sys.labels = (0..r).map(|i| i.to_string()).collect();
        Ok(sys)
    }

    pub fn named(kind: CartanType, n: usize, parabolic: &[usize]) -> Result<Self> {
        match kind {
            CartanType::A => Self::type_a(n, parabolic),
            CartanType::B => Self::type_b(n, parabolic),
            CartanType::D => Self::type_d(n, parabolic),
            CartanType::G2 => Self::type_g2(parabolic),
            CartanType::AffineA => Self::affine_a(n, parabolic),
        }
    }

    /// Same Cartan data with a different parabolic subset.
    pub fn with_parabolic(&self, parabolic: &[usize]) -> Result<Self> {
        let mut s = self.clone();
        s.set_parabolic(parabolic)?;
        Ok(s)
    }

    fn set_parabolic(&mut self, parabolic: &[usize]) -> Result<()> {
        let mut mask = vec![false; self.rank];
        for &j in parabolic {
            if j >= self.rank {
                return Err(KlError::GeneratorOutOfRange {
                    index: j,
                    rank: self.rank,
                });
            }
            mask[j] = true;
        }
        self.parabolic = mask;
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank {
            return Err(KlError::InvalidInput(format!(
                "{} labels for rank {}",
                labels.len(),
                self.rank
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn bond(&self, i: usize, j: usize) -> Bond {
        self.bond[i][j]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, s: usize) -> &str {
        &self.labels[s]
    }

    /// Generator index carrying `label`.
    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn in_parabolic(&self, s: usize) -> bool {
        self.parabolic[s]
    }

    pub fn parabolic_indices(&self) -> Vec<usize> {
        (0..self.rank).filter(|&s| self.parabolic[s]).collect()
    }

    /// Hex SHA-256 over the Cartan matrix and `J`; identifies a system in
    /// checkpoints.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update((self.rank as u64).to_le_bytes());
        for row in &self.cartan {
            for v in row {
                h.update(v.to_le_bytes());
            }
        }
        for &p in &self.parabolic {
            h.update([u8::from(p)]);
        }
        hex::encode(h.finalize())
    }

    fn check_gen(&self, s: usize) -> Result<()> {
        if s >= self.rank {
            return Err(KlError::GeneratorOutOfRange {
                index: s,
                rank: self.rank,
            });
        }
        Ok(())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            fwd: RootMatrix::identity(self.rank),
            inv: RootMatrix::identity(self.rank),
            length: 0,
        }
    }

    /// `xs`. Panics if `s` is out of range.
    pub fn mul_gen_right(&self, x: &GroupElement, s: usize) -> GroupElement {
        let down = x.fwd.col_sign(s) < 0;
        let row = &self.cartan[s];
        let mut fwd = x.fwd.clone();
        // column j of x·r_s is x(α_j) - a_sj x(α_s); do column s last.
        for (j, &a) in row.iter().enumerate() {
            if j != s && a != 0 {
                let mut c = vec![0i64; self.rank];
                c[s] = a;
                fwd.col_combine(j, &c);
            }
        }
        let mut c = vec![0i64; self.rank];
        c[s] = 2;
        fwd.col_combine(s, &c);
        // r_s · inv changes only row s.
        let mut inv = x.inv.clone();
        inv.row_combine(s, row);
        GroupElement {
            fwd,
            inv,
            length: if down { x.length - 1 } else { x.length + 1 },
        }
    }

    /// `sx`. Panics if `s` is out of range.
    pub fn mul_gen_left(&self, s: usize, x: &GroupElement) -> GroupElement {
        self.mul_gen_right(&x.inverse(), s).inverse()
    }

    pub fn is_right_descent(&self, x: &GroupElement, s: usize) -> bool {
        x.fwd.col_sign(s) < 0
    }

    pub fn is_left_descent(&self, x: &GroupElement, s: usize) -> bool {
        x.inv.col_sign(s) < 0
    }

    pub fn right_descents(&self, x: &GroupElement) -> BTreeSet<usize> {
        (0..self.rank).filter(|&s| self.is_right_descent(x, s)).collect()
    }

    pub fn left_descents(&self, x: &GroupElement) -> BTreeSet<usize> {
        (0..self.rank).filter(|&s| self.is_left_descent(x, s)).collect()
    }

    /// Lexicographically smallest reduced word, built by repeatedly removing
    /// the smallest left descent.
    pub fn canonical_word(&self, x: &GroupElement) -> Vec<usize> {
        let mut word = Vec::with_capacity(x.length as usize);
        let mut cur = x.inverse();
        // left descents of x are right descents of x⁻¹
        while let Some(s) = (0..self.rank).find(|&s| cur.fwd.col_sign(s) < 0) {
            word.push(s);
            cur = self.mul_gen_right(&cur, s);
        }
        word
    }

    /// Product of `word`, and whether the word is reduced.
    pub fn word_to_element(&self, word: &[usize]) -> Result<(GroupElement, bool)> {
        let mut x = self.identity();
        for &s in word {
            self.check_gen(s)?;
            x = self.mul_gen_right(&x, s);
        }
        let reduced = x.length as usize == word.len();
        Ok((x, reduced))
    }

    /// Product of a word that must be reduced.
    pub fn reduced_word_to_element(&self, word: &[usize]) -> Result<GroupElement> {
        let (x, reduced) = self.word_to_element(word)?;
        if !reduced {
            return Err(KlError::NotReduced {
                word: word.to_vec(),
                length: x.length as usize,
            });
        }
        Ok(x)
    }

    /// `x ∈ W^J`: no left descent of `x` lies in `J`.
    pub fn is_min_coset_rep(&self, x: &GroupElement) -> bool {
        (0..self.rank).all(|s| !self.parabolic[s] || !self.is_left_descent(x, s))
    }

    /// Three-way split of `xs` for `x ∈ W^J`; the returned element is `xs`
    /// except in the `UpOut` case.
    pub fn coset_case(
        &self,
        x: &GroupElement,
        s: usize,
    ) -> Result<(CosetCase, Option<GroupElement>)> {
        self.check_gen(s)?;
        if !self.is_min_coset_rep(x) {
            return Err(KlError::NotCosetRep {
                word: self.canonical_word(x),
            });
        }
        Ok(self.coset_case_unchecked(x, s))
    }

    /// [`coset_case`](Self::coset_case) without the membership check.
    ///
    /// For `x ∈ W^J` with `ℓ(xs) > ℓ(x)`, `xs ∉ W^J` exactly when
    /// `x(α_s) = α_j` for some `j ∈ J` (then `xs = s_j x`).
    pub fn coset_case_unchecked(
        &self,
        x: &GroupElement,
        s: usize,
    ) -> (CosetCase, Option<GroupElement>) {
        if self.is_right_descent(x, s) {
            return (CosetCase::Down, Some(self.mul_gen_right(x, s)));
        }
        if let Some(j) = x.fwd.col_unit_index(s) {
            if self.parabolic[j] {
                return (CosetCase::UpOut, None);
            }
        }
        (CosetCase::UpIn, Some(self.mul_gen_right(x, s)))
    }

    /// Bruhat order via the lifting property along a right descent of `y`.
    pub fn bruhat_leq(&self, x: &GroupElement, y: &GroupElement) -> bool {
        let mut x = x.clone();
        let mut y = y.clone();
        loop {
            if x.length > y.length {
                return false;
            }
            if y.length == 0 {
                return x.length == 0;
            }
            if x.length == 0 {
                return true;
            }
            let s = (0..self.rank)
                .find(|&s| self.is_right_descent(&y, s))
                .expect("non-identity element has a right descent");
            if self.is_right_descent(&x, s) {
                x = self.mul_gen_right(&x, s);
            }
            y = self.mul_gen_right(&y, s);
        }
    }

    /// Longest element of `W_J`; `None` if `W_J` is infinite (detected by
    /// exceeding `max_len`).
    pub fn longest_parabolic_element(&self, max_len: usize) -> Option<GroupElement> {
        let mut w = self.identity();
        while let Some(s) =
            (0..self.rank).find(|&s| self.parabolic[s] && !self.is_right_descent(&w, s))
        {
            w = self.mul_gen_right(&w, s);
            if w.length as usize > max_len {
                return None;
            }
        }
        Some(w)
    }

    /// All `x ∈ W^J` with `ℓ(x) ≤ max_len`, in length order then discovery
    /// order.
    pub fn coset_reps_up_to(&self, max_len: usize) -> Vec<GroupElement> {
        let mut seen: HashSet<GroupElement> = HashSet::new();
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        let e = self.identity();
        seen.insert(e.clone());
        queue.push_back(e);
        while let Some(x) = queue.pop_front() {
            if (x.length as usize) < max_len {
                for s in 0..self.rank {
                    if let (CosetCase::UpIn, Some(xs)) = self.coset_case_unchecked(&x, s) {
                        if seen.insert(xs.clone()) {
                            queue.push_back(xs);
                        }
                    }
                }
            }
            out.push(x);
        }
        out
    }

    /// Renders a word with this system's labels, e.g. `s2 s1 s3`.
    pub fn format_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "e".into();
        }
        word.iter()
            .map(|&s| format!("s{}", self.labels[s]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Cartan matrix of a simply-laced chain of length `n`, with optional
/// `(i, j, a_ij, a_ji)` overrides.
fn chain_cartan(n: usize, overrides: &[(usize, usize, i64, i64)]) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        c[i][i] = 2;
        if i + 1 < n {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    }
    for &(i, j, a, b) in overrides {
        c[i][j] = a;
        c[j][i] = b;
    }
    c
}

/// A Coxeter group element as root-image matrices.
///
/// Equality and hashing use `fwd` only: the images of the simple roots
/// determine the element.
#[derive(Clone)]
pub struct GroupElement {
    fwd: RootMatrix,
    inv: RootMatrix,
    length: u32,
}

impl GroupElement {
    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            fwd: self.inv.clone(),
            inv: self.fwd.clone(),
            length: self.length,
        }
    }

    /// Coordinates of `w(α_j)` in the simple-root basis, as decimal strings
    /// when they exceed `i64`.
    pub fn root_image(&self, j: usize) -> Vec<num_bigint::BigInt> {
        (0..self.fwd.dim()).map(|i| self.fwd.get(i, j)).collect()
    }

    pub fn inverse_root_image(&self, j: usize) -> Vec<num_bigint::BigInt> {
        (0..self.inv.dim()).map(|i| self.inv.get(i, j)).collect()
    }

    /// `fwd · inv` is the identity.
    pub fn matrices_consistent(&self) -> bool {
        self.fwd.mul(&self.inv).is_identity()
    }

    /// Every column of `fwd` and `inv` is a positive or a negative root.
    pub fn roots_have_uniform_sign(&self) -> bool {
        let n = self.fwd.dim();
        (0..n).all(|j| !self.fwd.col_mixed_sign(j) && !self.inv.col_mixed_sign(j))
    }

    pub fn uses_big_coordinates(&self) -> bool {
        self.fwd.is_big() || self.inv.is_big()
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.fwd == other.fwd
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.fwd.hash(state);
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement(len {}, fwd {:?})", self.length, self.fwd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> CoxeterSystem {
        CoxeterSystem::type_a(2, &[]).unwrap()
    }

    fn w(sys: &CoxeterSystem, word: &[usize]) -> GroupElement {
        sys.word_to_element(word).unwrap().0
    }

    #[test]
    fn build_examples() {
        let s = CoxeterSystem::from_cartan(vec![vec![2, -1], vec![-1, 2]], &[]).unwrap();
        assert_eq!(s.bond(0, 1), Bond::Order(3));
        let s = CoxeterSystem::from_cartan(vec![vec![2, -2], vec![-2, 2]], &[]).unwrap();
        assert_eq!(s.bond(0, 1), Bond::Infinite);
        let s = CoxeterSystem::affine_a(3, &[1, 2, 3]).unwrap();
        assert_eq!(s.rank(), 4);
        for i in 0..4 {
            assert_eq!(s.bond(i, (i + 1) % 4), Bond::Order(3));
        }
        assert_eq!(s.bond(0, 2), Bond::Order(2));
        assert_eq!(s.parabolic_indices(), vec![1, 2, 3]);
        assert_eq!(CoxeterSystem::type_b(3, &[]).unwrap().bond(1, 2), Bond::Order(4));
        assert_eq!(CoxeterSystem::type_g2(&[]).unwrap().bond(0, 1), Bond::Order(6));
    }

    #[test]
    fn invalid_cartan() {
        let bad = [
            vec![vec![2, -1], vec![0, 2]],
            vec![vec![2, 1], vec![1, 2]],
            vec![vec![1, -1], vec![-1, 2]],
            vec![vec![2, -1, 0], vec![-1, 2]],
        ];
        for c in bad {
            assert!(matches!(
                CoxeterSystem::from_cartan(c, &[]),
                Err(KlError::InvalidCartan(_))
            ));
        }
        assert!(matches!(
            CoxeterSystem::type_a(2, &[5]),
            Err(KlError::GeneratorOutOfRange { .. })
        ));
    }

    #[test]
    fn from_bonds_realizations() {
        let s = CoxeterSystem::from_bonds(&[vec![None, None], vec![None, None]], &[]).unwrap();
        assert_eq!(s.cartan(), &[vec![2, -2], vec![-2, 2]]);
        assert_eq!(s.bond(0, 1), Bond::Infinite);
        let s = CoxeterSystem::from_bonds(
            &[vec![None, Some(4)], vec![Some(4), None]],
            &[],
        )
        .unwrap();
        assert_eq!(s.bond(0, 1), Bond::Order(4));
        assert!(CoxeterSystem::from_bonds(&[vec![None, Some(5)], vec![Some(5), None]], &[]).is_err());
    }

    #[test]
    fn identity_and_involution() {
        let sys = a2();
        let e = sys.identity();
        assert_eq!(e.length(), 0);
        let s = sys.mul_gen_right(&e, 0);
        assert_eq!(s.length(), 1);
        assert_eq!(sys.mul_gen_right(&s, 0), e);
        let aff = CoxeterSystem::affine_a(3, &[]).unwrap();
        assert_eq!(aff.identity().length(), 0);
    }

    #[test]
    fn right_and_left_multiplication() {
        let sys = a2();
        let s1s2 = w(&sys, &[0, 1]);
        let s1 = w(&sys, &[0]);
        assert_eq!(sys.mul_gen_right(&s1s2, 1), s1);
        let long = sys.mul_gen_right(&s1s2, 0);
        assert_eq!(long.length(), 3);
        assert_eq!(long, w(&sys, &[1, 0, 1]));
        assert_eq!(sys.mul_gen_left(0, &sys.identity()), s1);
        assert_eq!(sys.mul_gen_left(0, &s1s2), w(&sys, &[1]));
        assert_eq!(sys.mul_gen_left(1, &s1s2).length(), 3);
    }

    #[test]
    fn descents() {
        let sys = a2();
        let s1s2 = w(&sys, &[0, 1]);
        assert_eq!(sys.right_descents(&s1s2), BTreeSet::from([1]));
        assert_eq!(sys.left_descents(&s1s2), BTreeSet::from([0]));
        assert!(sys.right_descents(&sys.identity()).is_empty());
        assert!(sys.left_descents(&sys.identity()).is_empty());
    }

    #[test]
    fn canonical_words() {
        let sys = a2();
        assert_eq!(sys.canonical_word(&w(&sys, &[1, 0, 1])), vec![0, 1, 0]);
        assert!(sys.canonical_word(&sys.identity()).is_empty());
        assert_eq!(sys.canonical_word(&w(&sys, &[1])), vec![1]);
    }

    #[test]
    fn word_products() {
        let sys = a2();
        let (x, red) = sys.word_to_element(&[0, 1, 0]).unwrap();
        assert!(red);
        assert_eq!(x.length(), 3);
        let (x, red) = sys.word_to_element(&[0, 0]).unwrap();
        assert!(!red);
        assert!(x.is_identity());
        assert!(matches!(
            sys.reduced_word_to_element(&[0, 0]),
            Err(KlError::NotReduced { .. })
        ));
        let inf = CoxeterSystem::affine_a(1, &[]).unwrap();
        assert_eq!(inf.bond(0, 1), Bond::Infinite);
        let (x, red) = inf.word_to_element(&[0, 1, 0, 1, 0]).unwrap();
        assert!(red);
        assert_eq!(x.length(), 5);
    }

    #[test]
    fn coset_membership_and_cases() {
        let sys = CoxeterSystem::type_a(2, &[0]).unwrap();
        assert!(sys.is_min_coset_rep(&w(&sys, &[1, 0])));
        assert!(!sys.is_min_coset_rep(&w(&sys, &[0])));
        assert!(sys.is_min_coset_rep(&sys.identity()));
        let free = a2();
        for x in free.coset_reps_up_to(3) {
            assert!(free.is_min_coset_rep(&x));
        }
        assert_eq!(free.coset_reps_up_to(3).len(), 6);
        assert_eq!(sys.coset_reps_up_to(3).len(), 3);

        let (c, r) = sys.coset_case(&sys.identity(), 0).unwrap();
        assert_eq!((c, r), (CosetCase::UpOut, None));
        let (c, r) = sys.coset_case(&w(&sys, &[1]), 0).unwrap();
        assert_eq!(c, CosetCase::UpIn);
        assert_eq!(r.unwrap(), w(&sys, &[1, 0]));
        let (c, r) = sys.coset_case(&w(&sys, &[1, 0]), 0).unwrap();
        assert_eq!(c, CosetCase::Down);
        assert_eq!(r.unwrap(), w(&sys, &[1]));
        assert!(matches!(
            sys.coset_case(&w(&sys, &[0]), 1),
            Err(KlError::NotCosetRep { .. })
        ));
    }

    #[test]
    fn bruhat_examples() {
        let sys = a2();
        assert!(sys.bruhat_leq(&w(&sys, &[0]), &w(&sys, &[1, 0])));
        assert!(!sys.bruhat_leq(&w(&sys, &[0]), &w(&sys, &[1])));
        for y in sys.coset_reps_up_to(3) {
            assert!(sys.bruhat_leq(&sys.identity(), &y));
        }
    }

    #[test]
    fn longest_parabolic() {
        let sys = CoxeterSystem::type_a(3, &[0, 1, 2]).unwrap();
        assert_eq!(sys.longest_parabolic_element(100).unwrap().length(), 6);
        let aff = CoxeterSystem::affine_a(2, &[0, 1, 2]).unwrap();
        assert!(aff.longest_parabolic_element(50).is_none());
    }

    #[test]
    fn fingerprint_depends_on_parabolic() {
        let a = CoxeterSystem::type_a(3, &[]).unwrap();
        let b = CoxeterSystem::type_a(3, &[1]).unwrap();
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
    }
}
