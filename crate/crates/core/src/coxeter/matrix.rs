//! Square integer matrices holding root coordinates.
//!
//! Entries live in `i64` until an update would overflow, at which point the
//! whole matrix is promoted to `BigInt`. Promotion is one-way for a given
//! matrix value but results are demoted again when they fit, so equal
//! matrices always have equal representations.

use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub(crate) struct RootMatrix {
    n: usize,
    data: Data,
}

#[derive(Clone, Debug)]
enum Data {
    Small(Box<[i64]>),
    Big(Box<[BigInt]>),
}

impl RootMatrix {
    pub fn identity(n: usize) -> Self {
        let mut d = vec![0i64; n * n];
        for i in 0..n {
            d[i * n + i] = 1;
        }
        RootMatrix {
            n,
            data: Data::Small(d.into_boxed_slice()),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        match &self.data {
            Data::Small(d) => BigInt::from(d[i * self.n + j]),
            Data::Big(d) => d[i * self.n + j].clone(),
        }
    }

    pub fn is_big(&self) -> bool {
        matches!(self.data, Data::Big(_))
    }

    /// Sign of column `j` as a root: `-1` if some entry is negative, `+1` if
    /// some entry is positive and none negative, `0` for the zero column.
    pub fn col_sign(&self, j: usize) -> i8 {
        let n = self.n;
        let mut pos = false;
        match &self.data {
            Data::Small(d) => {
                for i in 0..n {
                    let v = d[i * n + j];
                    if v < 0 {
                        return -1;
                    }
                    pos |= v > 0;
                }
            }
            Data::Big(d) => {
                for i in 0..n {
                    let v = &d[i * n + j];
                    if v.is_negative() {
                        return -1;
                    }
                    pos |= v.is_positive();
                }
            }
        }
        i8::from(pos)
    }

    /// True when column `j` has both positive and negative entries.
    pub fn col_mixed_sign(&self, j: usize) -> bool {
        let n = self.n;
        let (mut pos, mut neg) = (false, false);
        for i in 0..n {
            let v = self.get(i, j);
            pos |= v.is_positive();
            neg |= v.is_negative();
        }
        pos && neg
    }

    /// If column `j` is a unit vector `e_k`, returns `k`.
    pub fn col_unit_index(&self, j: usize) -> Option<usize> {
        let n = self.n;
        let mut found = None;
        match &self.data {
            Data::Small(d) => {
                for i in 0..n {
                    match d[i * n + j] {
                        0 => {}
                        1 if found.is_none() => found = Some(i),
                        _ => return None,
                    }
                }
            }
            Data::Big(_) => return None,
        }
        found
    }

    /// Column `j` is replaced by `col_j - Σ_k coeffs[k] * col_k`.
    pub fn col_combine(&mut self, j: usize, coeffs: &[i64]) {
        let n = self.n;
        if let Data::Small(d) = &mut self.data {
            let mut col = vec![0i64; n];
            let mut ok = true;
            'rows: for (i, slot) in col.iter_mut().enumerate() {
                let mut v = d[i * n + j];
                for (k, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    match c.checked_mul(d[i * n + k]).and_then(|p| v.checked_sub(p)) {
                        Some(r) => v = r,
                        None => {
                            ok = false;
                            break 'rows;
                        }
                    }
                }
                *slot = v;
            }
            if ok {
                for (i, v) in col.into_iter().enumerate() {
                    d[i * n + j] = v;
                }
                return;
            }
            self.promote();
        }
        if let Data::Big(d) = &mut self.data {
            let col: Vec<BigInt> = (0..n)
                .map(|i| {
                    let mut v = d[i * n + j].clone();
                    for (k, &c) in coeffs.iter().enumerate() {
                        if c != 0 {
                            v -= &d[i * n + k] * c;
                        }
                    }
                    v
                })
                .collect();
            for (i, v) in col.into_iter().enumerate() {
                d[i * n + j] = v;
            }
        }
        self.demote();
    }

    /// Row `i` is replaced by `row_i - Σ_k coeffs[k] * row_k`.
    pub fn row_combine(&mut self, i: usize, coeffs: &[i64]) {
        let n = self.n;
        if let Data::Small(d) = &mut self.data {
            let mut row = vec![0i64; n];
            let mut ok = true;
            'cols: for (j, slot) in row.iter_mut().enumerate() {
                let mut v = d[i * n + j];
                for (k, &c) in coeffs.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    match c.checked_mul(d[k * n + j]).and_then(|p| v.checked_sub(p)) {
                        Some(r) => v = r,
                        None => {
                            ok = false;
                            break 'cols;
                        }
                    }
                }
                *slot = v;
            }
            if ok {
                d[i * n..(i + 1) * n].copy_from_slice(&row);
                return;
            }
            self.promote();
        }
        if let Data::Big(d) = &mut self.data {
            let row: Vec<BigInt> = (0..n)
                .map(|j| {
                    let mut v = d[i * n + j].clone();
                    for (k, &c) in coeffs.iter().enumerate() {
                        if c != 0 {
                            v -= &d[k * n + j] * c;
                        }
                    }
                    v
                })
                .collect();
            for (j, v) in row.into_iter().enumerate() {
                d[i * n + j] = v;
            }
        }
        self.demote();
    }

    pub fn mul(&self, other: &RootMatrix) -> RootMatrix {
        let n = self.n;
        let d: Vec<BigInt> = (0..n * n)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                (0..n).fold(BigInt::zero(), |acc, k| acc + self.get(i, k) * other.get(k, j))
            })
            .collect();
        let mut m = RootMatrix {
            n,
            data: Data::Big(d.into_boxed_slice()),
        };
        m.demote();
        m
    }

    pub fn is_identity(&self) -> bool {
        *self == RootMatrix::identity(self.n)
    }

    fn promote(&mut self) {
        if let Data::Small(d) = &self.data {
            let big: Vec<BigInt> = d.iter().map(|&v| BigInt::from(v)).collect();
            self.data = Data::Big(big.into_boxed_slice());
        }
    }

    fn demote(&mut self) {
        if let Data::Big(d) = &self.data {
            let small: Option<Vec<i64>> = d.iter().map(ToPrimitive::to_i64).collect();
            if let Some(s) = small {
                self.data = Data::Small(s.into_boxed_slice());
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn force_promote(&mut self) {
        self.promote();
    }
}

impl PartialEq for RootMatrix {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        match (&self.data, &other.data) {
            (Data::Small(a), Data::Small(b)) => a == b,
            (Data::Big(a), Data::Big(b)) => a == b,
            _ => (0..self.n * self.n)
                .all(|k| self.get(k / self.n, k % self.n) == other.get(k / other.n, k % other.n)),
        }
    }
}

impl Eq for RootMatrix {}

impl Hash for RootMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        match &self.data {
            Data::Small(d) => d.hash(state),
            Data::Big(d) => d.hash(state),
        }
    }
}
