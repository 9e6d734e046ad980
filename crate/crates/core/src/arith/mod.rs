//! Exact scalars: big rationals, the quadratic extension ℚ(√d) and p-adic
//! valuations of rationals.

mod padic;
mod quadratic;
mod rational;

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

pub use padic::{DominanceReport, PAdicContext, PAdicView, Valuation};
pub use quadratic::{is_squarefree_radicand, QuadraticElement};
pub use rational::{int, parse_rational, rat, serde_rational, serde_rational_vec, to_canonical, BigRational};

/// A field of exact scalars used both as points and as function values.
///
/// Rationals embed into every implementor through [`Scalar::from_rational`].
pub trait Scalar:
    Clone
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(r: BigRational) -> Self;

    /// `Some` exactly when the element lies in ℚ.
    fn to_rational(&self) -> Option<BigRational>;

    /// JSON form used in reports.
    fn encode(&self) -> serde_json::Value;

    /// Stable text key; rationals and rational elements of an extension share it.
    fn canonical_key(&self) -> String;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(int(n))
    }
}

impl Scalar for BigRational {
    fn from_rational(r: BigRational) -> Self {
        r
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn encode(&self) -> serde_json::Value {
        serde_json::Value::String(to_canonical(self))
    }

    fn canonical_key(&self) -> String {
        to_canonical(self)
    }
}
