//! Exact arithmetic in `Q(√2)`.
//!
//! Weights of the form `2^{-k/2}` with odd `k` are irrational, so the local
//! lemma inequality is evaluated over numbers `p + q√2` with rational `p, q`.
//! Signs are decided exactly by comparing squares.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

pub fn rational(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `2^{-k}` as an exact rational.
pub fn dyadic(k: u32) -> Rational {
    BigRational::new(BigInt::one(), BigInt::one() << k as usize)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very long numerators/denominators: scale both to f64 range first.
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = n.max(d) - 60;
        let num = (r.numer() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
        let den = (r.denom() >> shift.max(0) as usize).to_f64().unwrap_or(1.0);
        if den == 0.0 {
            f64::INFINITY
        } else {
            num / den
        }
    })
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => text.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// `rational + surd·√2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootTwo {
    pub rational: Rational,
    pub surd: Rational,
}

impl RootTwo {
    pub fn from_rational(r: Rational) -> Self {
        RootTwo {
            rational: r,
            surd: Rational::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    /// `2^{-k/2}`.
    pub fn dyadic_root(k: u32) -> Self {
        if k.is_multiple_of(2) {
            Self::from_rational(dyadic(k / 2))
        } else {
            // 2^{-k/2} = √2 · 2^{-(k+1)/2}
            RootTwo {
                rational: Rational::zero(),
                surd: dyadic(k.div_ceil(2)),
            }
        }
    }

    pub fn signum(&self) -> Ordering {
        let p = self.rational.cmp(&Rational::zero());
        let q = self.surd.cmp(&Rational::zero());
        match (p, q) {
            (Ordering::Equal, q) => q,
            (p, Ordering::Equal) => p,
            (p, q) if p == q => p,
            (p, _) => {
                // Opposite signs: compare p² with 2q².
                let p2 = &self.rational * &self.rational;
                let q2 = &self.surd * &self.surd * Rational::from_integer(BigInt::from(2));
                match p2.cmp(&q2) {
                    Ordering::Greater => p,
                    Ordering::Less => p.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = RootTwo::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.rational) + to_f64(&self.surd) * std::f64::consts::SQRT_2
    }
}

impl Mul for &RootTwo {
    type Output = RootTwo;

    fn mul(self, rhs: &RootTwo) -> RootTwo {
        let two = Rational::from_integer(BigInt::from(2));
        RootTwo {
            rational: &self.rational * &rhs.rational + &self.surd * &rhs.surd * two,
            surd: &self.rational * &rhs.surd + &self.surd * &rhs.rational,
        }
    }
}

impl Sub for &RootTwo {
    type Output = RootTwo;

    fn sub(self, rhs: &RootTwo) -> RootTwo {
        RootTwo {
            rational: &self.rational - &rhs.rational,
            surd: &self.surd - &rhs.surd,
        }
    }
}

impl PartialOrd for RootTwo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self - other).signum())
    }
}

impl fmt::Display for RootTwo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.surd.is_zero() {
            write!(f, "{}", format_rational(&self.rational))
        } else if self.rational.is_zero() {
            write!(f, "{}·√2", format_rational(&self.surd))
        } else {
            let sign = if self.surd.is_negative() { '-' } else { '+' };
            write!(
                f,
                "{} {} {}·√2",
                format_rational(&self.rational),
                sign,
                format_rational(&self.surd.abs())
            )
        }
    }
}

/// Serialized form of a `RootTwo`: exact parts as strings plus an approximation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootTwoRecord {
    pub rational: String,
    pub sqrt2: String,
    pub approx: f64,
}

impl From<&RootTwo> for RootTwoRecord {
    fn from(x: &RootTwo) -> Self {
        RootTwoRecord {
            rational: format_rational(&x.rational),
            sqrt2: format_rational(&x.surd),
            approx: x.to_f64(),
        }
    }
}
