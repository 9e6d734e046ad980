use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde_json::json;

use super::rational::{to_canonical, BigRational};
use super::Scalar;

/// True when `d > 1` and no prime square divides `d`.
pub const fn is_squarefree_radicand(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut q = 2u64;
    while q * q <= d {
        if d.is_multiple_of(q * q) {
            return false;
        }
        q += 1;
    }
    true
}

/// An element `a + b·√D` of ℚ(√D).
///
/// The radicand is part of the type, so arithmetic across different
/// extensions does not compile. A non-square-free `D` is rejected when the
/// first constructor is instantiated.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadraticElement<const D: u64 = 2> {
    rational_part: BigRational,
    surd_part: BigRational,
}

impl<const D: u64> QuadraticElement<D> {
    const RADICAND_OK: () = assert!(
        is_squarefree_radicand(D),
        "radicand must be square-free and greater than 1"
    );

    pub fn new(rational_part: BigRational, surd_part: BigRational) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::RADICAND_OK;
        Self { rational_part, surd_part }
    }

    /// `√D` itself.
    pub fn sqrt_radicand() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn radicand(&self) -> u64 {
        D
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational_part
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.surd_part
    }

    /// Exact class test: the element lies in ℚ iff its surd part vanishes.
    pub fn is_rational(&self) -> bool {
        self.surd_part.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.rational_part.clone(), -self.surd_part.clone())
    }

    /// `a² − D·b²`, the field norm down to ℚ.
    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(D.into());
        &self.rational_part * &self.rational_part - d * &self.surd_part * &self.surd_part
    }

    fn d() -> BigRational {
        BigRational::from_integer(D.into())
    }
}

impl<const D: u64> fmt::Display for QuadraticElement<D> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", to_canonical(&self.rational_part))
        } else {
            write!(
                f,
                "{} + {}*sqrt({})",
                to_canonical(&self.rational_part),
                to_canonical(&self.surd_part),
                D
            )
        }
    }
}

impl<const D: u64> Add for QuadraticElement<D> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.rational_part + rhs.rational_part, self.surd_part + rhs.surd_part)
    }
}

impl<const D: u64> Sub for QuadraticElement<D> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.rational_part - rhs.rational_part, self.surd_part - rhs.surd_part)
    }
}

impl<const D: u64> Mul for QuadraticElement<D> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (self.rational_part, self.surd_part);
        let (c, e) = (rhs.rational_part, rhs.surd_part);
        Self::new(&a * &c + Self::d() * &b * &e, a * e + b * c)
    }
}

impl<const D: u64> Div for QuadraticElement<D> {
    type Output = Self;
    /// Panics on division by zero, like `BigRational`.
    fn div(self, rhs: Self) -> Self {
        let n = rhs.norm();
        let num = self * rhs.conjugate();
        Self::new(num.rational_part / &n, num.surd_part / n)
    }
}

impl<const D: u64> Neg for QuadraticElement<D> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.rational_part, -self.surd_part)
    }
}

impl<const D: u64> Zero for QuadraticElement<D> {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.rational_part.is_zero() && self.surd_part.is_zero()
    }
}

impl<const D: u64> One for QuadraticElement<D> {
    fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }
}

impl<const D: u64> From<BigRational> for QuadraticElement<D> {
    fn from(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }
}

impl<const D: u64> Scalar for QuadraticElement<D> {
    fn from_rational(r: BigRational) -> Self {
        r.into()
    }

    fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rational_part.clone())
    }

    fn encode(&self) -> serde_json::Value {
        json!({
            "a": to_canonical(&self.rational_part),
            "b": to_canonical(&self.surd_part),
            "d": D,
        })
    }

    fn canonical_key(&self) -> String {
        if self.is_rational() {
            to_canonical(&self.rational_part)
        } else {
            format!(
                "{}+{}r{}",
                to_canonical(&self.rational_part),
                to_canonical(&self.surd_part),
                D
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    type Q2 = QuadraticElement<2>;

    fn q(a: BigRational, b: BigRational) -> Q2 {
        Q2::new(a, b)
    }

    #[test]
    fn radicand_check() {
        assert!(is_squarefree_radicand(2));
        assert!(is_squarefree_radicand(30));
        assert!(!is_squarefree_radicand(1));
        assert!(!is_squarefree_radicand(12));
        assert!(!is_squarefree_radicand(49));
    }

    #[test]
    fn sqrt_two_squares_to_two() {
        let r = Q2::sqrt_radicand();
        assert_eq!(r.clone() * r, Q2::from(int(2)));
    }

    #[test]
    fn times_conjugate_is_norm() {
        let x = q(rat(3, 2), rat(-5, 7));
        let n = x.norm();
        assert_eq!(x.clone() * x.conjugate(), Q2::from(n));
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = q(int(1), int(1));
        let y = q(rat(2, 3), int(-4));
        assert_eq!((x.clone() * y.clone()) / y, x);
    }

    #[test]
    fn encoding() {
        let x = q(int(6), int(4));
        assert_eq!(x.encode(), json!({"a": "6/1", "b": "4/1", "d": 2}));
        assert_eq!(Q2::from(rat(1, 3)).canonical_key(), "1/3");
        assert_eq!(x.to_string(), "6/1 + 4/1*sqrt(2)");
    }
}
