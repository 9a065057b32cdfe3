//! Arbitrary-precision integer with an inline machine-word fast path.
//!
//! Almost every coefficient that shows up while multiplying by `C'_s` fits in
//! an `i64`; only a few long words push past it. `Coeff` keeps those in a
//! `BigInt` and demotes back as soon as a value fits again, so the
//! representation of a given value is unique and `Eq`/`Hash` are structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{AddAssign, Mul, Neg, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coeff(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64),
    // Invariant: never fits in an i64.
    Big(Box<BigInt>),
}

impl Coeff {
    pub const ZERO: Coeff = Coeff(Repr::Small(0));
    pub const ONE: Coeff = Coeff(Repr::Small(1));

    fn from_big(b: BigInt) -> Coeff {
        match b.to_i64() {
            Some(v) => Coeff(Repr::Small(v)),
            None => Coeff(Repr::Big(Box::new(b))),
        }
    }

    pub fn to_bigint(&self) -> BigInt {
        match &self.0 {
            Repr::Small(v) => BigInt::from(*v),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(v) => *v < 0,
            Repr::Big(b) => b.is_negative(),
        }
    }

    /// `Some` when the value fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        match self.0 {
            Repr::Small(v) => Some(v),
            Repr::Big(_) => None,
        }
    }

    /// `self += a * b`
    pub fn add_mul(&mut self, a: &Coeff, b: &Coeff) {
        if let (Repr::Small(x), Repr::Small(y)) = (&a.0, &b.0) {
            if let Some(p) = x.checked_mul(*y) {
                *self += &Coeff(Repr::Small(p));
                return;
            }
        }
        *self += &(a * b);
    }

    /// `self -= a * b`
    pub fn sub_mul(&mut self, a: &Coeff, b: &Coeff) {
        if let (Repr::Small(x), Repr::Small(y)) = (&a.0, &b.0) {
            if let Some(p) = x.checked_mul(*y) {
                *self -= &Coeff(Repr::Small(p));
                return;
            }
        }
        *self -= &(a * b);
    }
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::ZERO
    }
}

impl From<i64> for Coeff {
    fn from(v: i64) -> Self {
        Coeff(Repr::Small(v))
    }
}

impl From<BigInt> for Coeff {
    fn from(v: BigInt) -> Self {
        Coeff::from_big(v)
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, rhs: &Coeff) {
        if let (Repr::Small(x), Repr::Small(y)) = (&self.0, &rhs.0) {
            if let Some(s) = x.checked_add(*y) {
                self.0 = Repr::Small(s);
                return;
            }
        }
        *self = Coeff::from_big(self.to_bigint() + rhs.to_bigint());
    }
}

impl SubAssign<&Coeff> for Coeff {
    fn sub_assign(&mut self, rhs: &Coeff) {
        if let (Repr::Small(x), Repr::Small(y)) = (&self.0, &rhs.0) {
            if let Some(s) = x.checked_sub(*y) {
                self.0 = Repr::Small(s);
                return;
            }
        }
        *self = Coeff::from_big(self.to_bigint() - rhs.to_bigint());
    }
}

impl Mul for &Coeff {
    type Output = Coeff;

    fn mul(self, rhs: &Coeff) -> Coeff {
        if let (Repr::Small(x), Repr::Small(y)) = (&self.0, &rhs.0) {
            if let Some(p) = x.checked_mul(*y) {
                return Coeff(Repr::Small(p));
            }
        }
        Coeff::from_big(self.to_bigint() * rhs.to_bigint())
    }
}

impl Neg for &Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        match &self.0 {
            Repr::Small(v) => match v.checked_neg() {
                Some(n) => Coeff(Repr::Small(n)),
                None => Coeff::from_big(-BigInt::from(*v)),
            },
            Repr::Big(b) => Coeff::from_big(-(**b).clone()),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        -&self
    }
}

impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            _ => self.to_bigint().cmp(&other.to_bigint()),
        }
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(v) => write!(f, "{v}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Coeff {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Coeff(Repr::Small(v)));
        }
        s.parse::<BigInt>().map(Coeff::from_big)
    }
}

impl Zero for Coeff {
    fn zero() -> Self {
        Coeff::ZERO
    }

    fn is_zero(&self) -> bool {
        Coeff::is_zero(self)
    }
}

impl std::ops::Add for Coeff {
    type Output = Coeff;

    fn add(mut self, rhs: Coeff) -> Coeff {
        self += &rhs;
        self
    }
}
