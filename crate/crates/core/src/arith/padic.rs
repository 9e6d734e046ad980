use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;

use super::rational::{serde_rational, BigRational};
use crate::error::{Error, Result};

/// p-adic valuation of a rational. Zero has valuation `Infinity`, which
/// compares above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_i64(*v),
            Valuation::Infinity => s.serialize_str("inf"),
        }
    }
}

/// A prime together with the number of digits shown by
/// [`PAdicContext::digit_expansion`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PAdicContext {
    prime: u64,
    display_precision: usize,
}

/// Leading digits `a_m, …, a_{m+K−1}` of `x = Σ a_k p^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PAdicView {
    pub prime: u64,
    pub valuation: Valuation,
    pub digits: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    #[serde(with = "serde_rational")]
    pub abs_x: BigRational,
    #[serde(with = "serde_rational")]
    pub abs_y: BigRational,
    #[serde(with = "serde_rational")]
    pub abs_sum: BigRational,
    pub holds: bool,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut q = 2u64;
    while q.saturating_mul(q) <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

fn strip_factor(n: &mut BigInt, p: &BigInt) -> i64 {
    let mut count = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return count;
        }
        *n = q;
        count += 1;
    }
}

impl PAdicContext {
    pub const DEFAULT_PRECISION: usize = 8;

    pub fn new(prime: u64, display_precision: usize) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        if display_precision == 0 {
            return Err(Error::ZeroPrecision);
        }
        Ok(Self { prime, display_precision })
    }

    pub fn with_prime(prime: u64) -> Result<Self> {
        Self::new(prime, Self::DEFAULT_PRECISION)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn display_precision(&self) -> usize {
        self.display_precision
    }

    fn p(&self) -> BigInt {
        BigInt::from(self.prime)
    }

    /// `p^e` for any integer exponent.
    pub fn power(&self, e: i64) -> BigRational {
        let mag = self.p().pow(e.unsigned_abs());
        if e >= 0 {
            BigRational::from_integer(mag)
        } else {
            BigRational::new(BigInt::one(), mag)
        }
    }

    pub fn valuation(&self, x: &BigRational) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinity;
        }
        let p = self.p();
        let mut n = x.numer().clone();
        let mut d = x.denom().clone();
        Valuation::Finite(strip_factor(&mut n, &p) - strip_factor(&mut d, &p))
    }

    /// `|x|_p = p^{−v(x)}`, and `0` for `x = 0`.
    pub fn abs(&self, x: &BigRational) -> BigRational {
        match self.valuation(x) {
            Valuation::Finite(v) => self.power(-v),
            Valuation::Infinity => BigRational::zero(),
        }
    }

    /// Digits by repeated reduction of the p-unit part modulo p.
    pub fn digit_expansion(&self, x: &BigRational) -> PAdicView {
        let m = match self.valuation(x) {
            Valuation::Infinity => {
                return PAdicView { prime: self.prime, valuation: Valuation::Infinity, digits: vec![] }
            }
            Valuation::Finite(m) => m,
        };
        let p = self.p();
        let mut unit = x / self.power(m);
        let mut digits = Vec::with_capacity(self.display_precision);
        for _ in 0..self.display_precision {
            let n = unit.numer().mod_floor(&p);
            let d = unit.denom().mod_floor(&p);
            // d is invertible mod p since the unit part has p-free denominator
            let d_inv = d.modpow(&(&p - 2u32), &p);
            let digit = (n * d_inv).mod_floor(&p);
            unit = (unit - BigRational::from_integer(digit.clone())) / BigRational::from_integer(p.clone());
            digits.push(digit.to_u64().expect("digit below p"));
        }
        PAdicView { prime: self.prime, valuation: Valuation::Finite(m), digits }
    }

    /// Checks `|x + y|_p = max(|x|_p, |y|_p)`; only claimed when the two
    /// absolute values differ.
    pub fn ultrametric_dominance(&self, x: &BigRational, y: &BigRational) -> Result<DominanceReport> {
        let abs_x = self.abs(x);
        let abs_y = self.abs(y);
        if abs_x == abs_y {
            return Err(Error::PreconditionViolation(format!(
                "|x|_{p} = |y|_{p} = {abs_x}; dominance needs distinct absolute values",
                p = self.prime
            )));
        }
        let abs_sum = self.abs(&(x + y));
        let holds = abs_sum == std::cmp::max(abs_x.clone(), abs_y.clone());
        Ok(DominanceReport { abs_x, abs_y, abs_sum, holds })
    }

    /// `x ∈ center + p^exponent ℤ_p`.
    pub fn ball_contains(&self, center: &BigRational, exponent: i64, x: &BigRational) -> bool {
        self.valuation(&(x - center)) >= Valuation::Finite(exponent)
    }
}

impl PAdicView {
    /// `Σ a_k p^k` over the shown digits.
    pub fn partial_sum(&self) -> BigRational {
        let Valuation::Finite(m) = self.valuation else {
            return BigRational::zero();
        };
        let p = BigRational::from_integer(BigInt::from(self.prime));
        let mut scale = if m >= 0 {
            Pow::pow(&p, m.unsigned_abs())
        } else {
            Pow::pow(p.recip(), m.unsigned_abs())
        };
        let mut sum = BigRational::zero();
        for &a in &self.digits {
            sum += &scale * BigRational::from_integer(BigInt::from(a));
            scale *= &p;
        }
        sum
    }
}

impl fmt::Display for PAdicView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            Valuation::Infinity => write!(f, "0 (p={})", self.prime),
            Valuation::Finite(m) => {
                let digits: Vec<String> = self.digits.iter().map(u64::to_string).collect();
                write!(f, "{}·p^{} (p={})", digits.join(" "), m, self.prime)
            }
        }
    }
}

impl PartialOrd<i64> for Valuation {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Valuation::Finite(*other)))
    }
}

impl PartialEq<i64> for Valuation {
    fn eq(&self, other: &i64) -> bool {
        *self == Valuation::Finite(*other)
    }
}
