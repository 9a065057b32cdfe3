//! Sparse Laurent polynomials in `t = q^{1/2}` with exact integer coefficients.
//!
//! Exponents are stored in `t`-units so half-integral powers of `q` never
//! appear. Terms are kept sorted by exponent with no zero coefficients, which
//! makes equality structural and serialization deterministic.

mod coeff;

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use coeff::Coeff;

use crate::error::KlError;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: Vec<(i32, Coeff)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConversionError {
    #[error("odd exponent {0} after renormalization")]
    OddExponent(i32),
    #[error("negative exponent {0} after renormalization")]
    NegativeExponent(i32),
}

impl From<ConversionError> for KlError {
    fn from(e: ConversionError) -> Self {
        KlError::InternalInvariant(e.to_string())
    }
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, Coeff::ONE)
    }

    pub fn monomial(exp: i32, c: impl Into<Coeff>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly { terms: vec![(exp, c)] }
    }

    /// `t + t^{-1}`
    pub fn t_plus_tinv() -> Self {
        Self::from_terms([(-1, 1), (1, 1)])
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs in any order;
    /// repeated exponents are summed.
    pub fn from_terms<C: Into<Coeff>>(terms: impl IntoIterator<Item = (i32, C)>) -> Self {
        let mut v: Vec<(i32, Coeff)> = terms.into_iter().map(|(e, c)| (e, c.into())).collect();
        v.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(i32, Coeff)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        LaurentPoly { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &Coeff)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i32) -> Coeff {
        match self.terms.binary_search_by_key(&exp, |(e, _)| *e) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Coeff::ZERO,
        }
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.first().map(|(e, _)| *e)
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.last().map(|(e, _)| *e)
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_shifted_assign(other, 0);
        out
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.negate())
    }

    pub fn negate(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i32) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Multiply by `t + t^{-1}`.
    pub fn times_t_plus_tinv(&self) -> LaurentPoly {
        let mut out = self.shift(1);
        out.add_shifted_assign(self, -1);
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        out.add_product_assign(self, other, false);
        out
    }

    pub fn scale(&self, c: &Coeff) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// `self += t^k * other`
    pub fn add_shifted_assign(&mut self, other: &LaurentPoly, k: i32) {
        if other.terms.is_empty() {
            return;
        }
        if self.terms.is_empty() {
            self.terms = other.terms.iter().map(|(e, c)| (e + k, c.clone())).collect();
            return;
        }
        let a = std::mem::take(&mut self.terms);
        let mut out = Vec::with_capacity(a.len() + other.terms.len());
        let mut ai = a.into_iter().peekable();
        let mut bi = other.terms.iter().map(|(e, c)| (e + k, c)).peekable();
        loop {
            match (ai.peek(), bi.peek()) {
                (Some((ea, _)), Some((eb, _))) => {
                    if ea < eb {
                        out.push(ai.next().unwrap());
                    } else if eb < ea {
                        let (e, c) = bi.next().unwrap();
                        out.push((e, c.clone()));
                    } else {
                        let (e, mut c) = ai.next().unwrap();
                        let (_, cb) = bi.next().unwrap();
                        c += cb;
                        if !c.is_zero() {
                            out.push((e, c));
                        }
                    }
                }
                (Some(_), None) => out.extend(ai.by_ref()),
                (None, Some(_)) => out.extend(bi.by_ref().map(|(e, c)| (e, c.clone()))),
                (None, None) => break,
            }
        }
        self.terms = out;
    }

    /// `self += a * b`, or `self -= a * b` when `subtract` is set.
    pub fn add_product_assign(&mut self, a: &LaurentPoly, b: &LaurentPoly, subtract: bool) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let (lo, hi) = match (
            a.min_exponent(),
            a.max_exponent(),
            b.min_exponent(),
            b.max_exponent(),
        ) {
            (Some(al), Some(ah), Some(bl), Some(bh)) => (al + bl, ah + bh),
            _ => unreachable!(),
        };
        let width = (hi - lo) as usize + 1;
        // Dense scratch buffer over the product's exponent range.
        let mut acc = vec![Coeff::ZERO; width];
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let slot = &mut acc[(ea + eb - lo) as usize];
                if subtract {
                    slot.sub_mul(ca, cb);
                } else {
                    slot.add_mul(ca, cb);
                }
            }
        }
        let prod = LaurentPoly {
            terms: acc
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (lo + i as i32, c))
                .collect(),
        };
        self.add_shifted_assign(&prod, 0);
    }

    /// The involution `t ↦ t^{-1}`.
    pub fn bar(&self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Correction polynomial `f_{≥0}(t) + f_{>0}(t^{-1})`.
    ///
    /// The result is bar-symmetric and `f - g` has only strictly negative
    /// exponents.
    pub fn make_g(&self) -> LaurentPoly {
        let nonneg: Vec<(i32, Coeff)> = self
            .terms
            .iter()
            .filter(|(e, _)| *e >= 0)
            .cloned()
            .collect();
        let mirrored = nonneg
            .iter()
            .filter(|(e, _)| *e > 0)
            .map(|(e, c)| (-e, c.clone()));
        LaurentPoly::from_terms(mirrored.chain(nonneg.iter().cloned()))
    }

    /// True when every term has exponent < 0 (the zero polynomial qualifies).
    pub fn is_strictly_negative(&self) -> bool {
        self.max_exponent().is_none_or(|e| e < 0)
    }

    /// True when some term has exponent ≥ 0.
    pub fn has_nonnegative_term(&self) -> bool {
        !self.is_strictly_negative()
    }

    pub fn is_bar_symmetric(&self) -> bool {
        *self == self.bar()
    }

    /// All exponents are congruent to `parity` modulo 2.
    pub fn parity_ok(&self, parity: u32) -> bool {
        self.terms.iter().all(|(e, _)| e.rem_euclid(2) as u32 == parity % 2)
    }

    /// Reads a normalized coefficient `f` of `m̃_x` as the polynomial `P` with
    /// `P(q) = f(t) * t^{ldiff}` under `q = t^2`.
    pub fn to_q_polynomial(&self, ldiff: u32) -> Result<QPoly, ConversionError> {
        let mut coeffs: Vec<Coeff> = Vec::new();
        for (e, c) in &self.terms {
            let shifted = e + ldiff as i32;
            if shifted < 0 {
                return Err(ConversionError::NegativeExponent(shifted));
            }
            if shifted % 2 != 0 {
                return Err(ConversionError::OddExponent(shifted));
            }
            let deg = (shifted / 2) as usize;
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, Coeff::ZERO);
            }
            coeffs[deg] = c.clone();
        }
        Ok(QPoly::new(coeffs))
    }

    /// Inverse of [`to_q_polynomial`](Self::to_q_polynomial).
    pub fn from_q_polynomial(p: &QPoly, ldiff: u32) -> LaurentPoly {
        LaurentPoly::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(d, c)| (2 * d as i32 - ldiff as i32, c.clone())),
        )
    }

    /// The `t^{-1}` coefficient of a finished normalized coefficient.
    pub fn mu_coefficient(&self) -> Coeff {
        self.coeff(-1)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { -c } else { c.clone() };
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let unit = abs == Coeff::ONE;
            match *e {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "t")?,
                1 => write!(f, "{abs}t")?,
                _ if unit => write!(f, "t^{e}")?,
                _ => write!(f, "{abs}t^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Serialized as `[[exponent, "coefficient"], ...]`, exponent-ascending.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<(i32, String)> =
            self.terms.iter().map(|(e, c)| (*e, c.to_string())).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs: Vec<(i32, String)> = Vec::deserialize(d)?;
        let mut terms = Vec::with_capacity(pairs.len());
        for (e, s) in pairs {
            let c: Coeff = s.parse().map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom(format!("zero coefficient at exponent {e}")));
            }
            if terms.last().is_some_and(|(le, _): &(i32, Coeff)| *le >= e) {
                return Err(D::Error::custom("exponents not strictly ascending"));
            }
            terms.push((e, c));
        }
        Ok(LaurentPoly { terms })
    }
}

/// An ordinary polynomial in `q`, coefficients in ascending degree.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct QPoly(Vec<Coeff>);

impl QPoly {
    pub fn new(mut coeffs: Vec<Coeff>) -> Self {
        while coeffs.last().is_some_and(Coeff::is_zero) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn one() -> Self {
        QPoly(vec![Coeff::ONE])
    }

    pub fn from_i64s(v: &[i64]) -> Self {
        QPoly::new(v.iter().map(|&c| Coeff::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.0
    }

    pub fn coeff(&self, deg: usize) -> Coeff {
        self.0.get(deg).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.0.iter().map(Coeff::to_string).collect()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let unit = *c == Coeff::ONE;
            match d {
                0 => write!(f, "{c}")?,
                1 if unit => write!(f, "q")?,
                1 => write!(f, "{c}q")?,
                _ if unit => write!(f, "q^{d}")?,
                _ => write!(f, "{c}q^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}
