//! Exact arithmetic kernel: rationals, matrices, integer lattices, and the
//! q/t series algebra shared by every other module.

mod bipoly;
mod echelon;
pub mod intlin;
mod mat;
mod parse;
mod qpoly;
mod ratfun;
mod search;
mod series;

pub use bipoly::BiPoly;
pub use echelon::RowSpace;
pub use mat::{inverse, nullspace, rank, rref, solve, Mat};
pub use parse::{parse_bipoly, parse_denominator, parse_ratfun, ParseError};
pub use qpoly::QPoly;
pub use ratfun::{RatFun2, RatFunJson};
pub use search::{denominator_search, denominator_search_with, fit_numerator, SearchBounds, TDegBound};
pub use series::TQSeries;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Default truncation order for series.
pub const DEFAULT_T: usize = 10;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("insufficient truncation: series has order {have}, need at least {need}")]
    InsufficientTruncation { have: usize, need: usize },
    #[error("denominator factor (b={b}, a={a}) cannot be expanded as a power series in t")]
    BadFactor { b: u32, a: u32 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Scale a rational vector to a primitive integer vector with the same
/// ℚ-span direction (positive leading entry is *not* enforced).
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut out: Vec<BigInt> = v.iter().map(|x| (x * Rat::from_integer(lcm.clone())).to_integer()).collect();
    make_primitive(&mut out);
    out
}

/// Divide an integer vector by the gcd of its entries.
pub fn make_primitive(v: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in v.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for x in v.iter_mut() {
        if !x.is_zero() {
            *x /= &g;
        }
    }
}

/// Format a rational as `p` or `p/q`.
pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `p` or `p/q`.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rat::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rat_parse_round_trip() {
        let x = rat_frac(-6, 4);
        assert_eq!(fmt_rat(&x), "-3/2");
        assert_eq!(parse_rat("-3/2"), Some(x));
        assert_eq!(parse_rat("7"), Some(rat(7)));
        assert_eq!(parse_rat("1/0"), None);
    }

    #[test]
    fn primitive_vector() {
        let v = vec![rat_frac(1, 2), rat_frac(3, 4), rat(0)];
        let p = primitive_integer(&v);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(3), BigInt::from(0)]);
    }

    proptest! {
        #[test]
        fn add_sub_is_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = rat_frac(a, b);
            let y = rat_frac(c, d);
            let z = &(&x + &y) - &y;
            prop_assert_eq!(&z, &x);
            // always reduced
            prop_assert!(z.numer().gcd(z.denom()).is_one() || z.numer().is_zero());
            prop_assert!(z.denom() > &BigInt::zero());
        }
    }
}
