use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

pub use num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Canonical `"num/den"` form; zero is `"0/1"`.
pub fn to_canonical(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"num/den"` or a bare integer, with an optional sign on the numerator.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let err = || Error::ParseRational(s.to_string());
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let numer: BigInt = n.parse().map_err(|_| err())?;
    let denom: BigInt = d.parse().map_err(|_| err())?;
    if denom.is_zero() {
        return Err(err());
    }
    Ok(BigRational::new(numer, denom))
}

pub mod serde_rational {
    use serde::Serializer;

    use super::{to_canonical, BigRational};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_canonical(r))
    }
}

pub mod serde_rational_vec {
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    use super::{to_canonical, BigRational};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&to_canonical(r))?;
        }
        seq.end()
    }
}
