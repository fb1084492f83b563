use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Largest denominator accepted when approximating a real slope.
pub const MAX_DENOMINATOR: u64 = 1 << 31;

/// A density target `p/q ∈ [0, 1]` in lowest terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slope {
    p: u64,
    q: u64,
    /// The real number this slope is a convergent of, when it was built from one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    approximates: Option<f64>,
}

impl Slope {
    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 || p > q {
            return Err(Error::Malformed(format!("slope {p}/{q} is not in [0,1]")));
        }
        let d = p.gcd(&q);
        Ok(Slope {
            p: p / d,
            q: q / d,
            approximates: None,
        })
    }

    /// The last continued-fraction convergent of `x` with denominator at most
    /// [`MAX_DENOMINATOR`].
    pub fn from_f64(x: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Malformed(format!("slope {x} is not in [0,1]")));
        }
        let (mut h0, mut h1) = (0u64, 1u64);
        let (mut k0, mut k1) = (1u64, 0u64);
        let mut rest = x;
        let mut truncated = true;
        for _ in 0..64 {
            let a = rest.floor();
            let ai = a as u64;
            let (h, k) = (ai * h1 + h0, ai * k1 + k0);
            if k > MAX_DENOMINATOR {
                break;
            }
            (h0, h1, k0, k1) = (h1, h, k1, k);
            let frac = rest - a;
            if frac < 1e-12 {
                truncated = false;
                break;
            }
            rest = 1.0 / frac;
        }
        let mut s = Slope::new(h1, k1)?;
        if truncated {
            s.approximates = Some(x);
        }
        Ok(s)
    }

    pub fn numer(&self) -> u64 {
        self.p
    }

    pub fn denom(&self) -> u64 {
        self.q
    }

    pub fn approximates(&self) -> Option<f64> {
        self.approximates
    }

    pub fn is_constant(&self) -> bool {
        self.p == 0 || self.p == self.q
    }

    pub fn value(&self) -> Rational {
        Rational::new(BigInt::from(self.p), BigInt::from(self.q))
    }

    pub fn value_f64(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `⌊k·p/q⌋`.
    pub fn floor_mul(&self, k: u64) -> u64 {
        ((k as u128 * self.p as u128) / self.q as u128) as u64
    }

    /// Continued-fraction expansion `[a_0; a_1, …]` of `p/q`.
    pub fn continued_fraction(&self) -> Vec<u64> {
        let (mut a, mut b) = (self.p, self.q);
        let mut out = Vec::new();
        while b != 0 {
            out.push(a / b);
            (a, b) = (b, a % b);
        }
        out
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Accepts `p/q`, an integer `0` or `1`, or a decimal approximated by a convergent.
impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Malformed(format!("cannot parse slope {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            return Slope::new(
                p.trim().parse().map_err(|_| bad())?,
                q.trim().parse().map_err(|_| bad())?,
            );
        }
        if let Ok(p) = s.parse::<u64>() {
            return Slope::new(p, 1);
        }
        Slope::from_f64(s.parse().map_err(|_| bad())?)
    }
}

/// `w_k = ⌊(k+1)α⌋ − ⌊kα⌋` for `k` in `range`.
pub fn sturmian(alpha: &Slope, range: std::ops::Range<u64>) -> Vec<u8> {
    range
        .map(|k| (alpha.floor_mul(k + 1) - alpha.floor_mul(k)) as u8)
        .collect()
}

/// Whether every two factors of length `≤ max_len` differ by at most one in
/// their number of ones.
pub fn is_balanced(word: &[u8], max_len: usize) -> bool {
    let mut prefix = vec![0usize; word.len() + 1];
    for (i, &b) in word.iter().enumerate() {
        prefix[i + 1] = prefix[i] + b as usize;
    }
    (1..=max_len.min(word.len())).all(|len| {
        let counts = (0..=word.len() - len).map(|i| prefix[i + len] - prefix[i]);
        let (lo, hi) = counts.fold((usize::MAX, 0), |(lo, hi), c| (lo.min(c), hi.max(c)));
        hi - lo <= 1
    })
}
