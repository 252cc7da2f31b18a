//! Arbitrary-precision rational scalars.
//!
//! Every computation in this crate is exact; floats are banned from the
//! public surface and from all internal arithmetic.  `Rat` values are kept
//! in canonical form (positive denominator, reduced fraction) by
//! `num-rational` itself.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `p/q` with `q > 0`; convenience for tables written in source.
pub fn rat(p: i64, q: i64) -> Rat {
    assert!(q != 0, "zero denominator");
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p`, `-p`, `p/q` or `-p/q` with decimal integers and `q > 0`
/// after reduction.  Anything else — including floats — is rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::input("empty rational literal"));
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numer: BigInt = num_str
        .parse()
        .map_err(|_| Error::input(format!("bad integer `{num_str}` in rational `{s}`")))?;
    let denom: BigInt = match den_str {
        Some(d) => d
            .parse()
            .map_err(|_| Error::input(format!("bad denominator `{d}` in rational `{s}`")))?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(Error::input(format!("zero denominator in rational `{s}`")));
    }
    if denom.is_negative() {
        return Err(Error::input(format!(
            "denominator must be positive in rational `{s}`"
        )));
    }
    Ok(Rat::new(numer, denom))
}

/// Renders in the same syntax `parse_rat` accepts: integer when the
/// denominator is 1, `p/q` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
