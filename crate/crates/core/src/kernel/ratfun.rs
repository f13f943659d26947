use super::{BiPoly, KernelError, QPoly, TQSeries};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Rational function `N(t,q) / ∏ (1 - q^a t^b)` with a polynomial numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun2 {
    num: BiPoly,
    den: Vec<(u32, u32)>,
}

/// Serialized form: `{"den": [[b,a],...], "num": [[tExp,qExp,coef],...]}`
/// with coefficients as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFunJson {
    pub den: Vec<[u32; 2]>,
    pub num: Vec<(i64, i64, String)>,
}

impl RatFun2 {
    /// Factors are kept sorted by `(b, a)`. A factor with `b = a = 0` is rejected.
    pub fn new(num: BiPoly, mut den: Vec<(u32, u32)>) -> Result<Self, KernelError> {
        if let Some(&(b, a)) = den.iter().find(|&&(b, a)| b == 0 && a == 0) {
            return Err(KernelError::BadFactor { b, a });
        }
        if num.terms().any(|(t, q, _)| t < 0 || q < 0) {
            return Err(KernelError::Dimension("numerator must be a polynomial".into()));
        }
        den.sort_unstable();
        Ok(RatFun2 { num, den })
    }

    pub fn numerator(&self) -> &BiPoly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(u32, u32)] {
        &self.den
    }

    /// Number of denominator factors.
    pub fn nu(&self) -> usize {
        self.den.len()
    }

    pub fn denominator(&self) -> BiPoly {
        self.den.iter().fold(BiPoly::one(), |acc, &(b, a)| acc.mul(&BiPoly::factor(b, a)))
    }

    /// Power-series expansion through `t^T`. Factors with `b = 0` are not
    /// power series in `t` and give an error.
    pub fn expand(&self, order: usize) -> Result<TQSeries, KernelError> {
        let mut coeffs = vec![QPoly::zero(); order + 1];
        for m in 0..=order {
            coeffs[m] = self.num.t_coeff(m as i64);
        }
        let mut s = TQSeries::from_coeffs(coeffs);
        for &(b, a) in &self.den {
            if b == 0 {
                return Err(KernelError::BadFactor { b, a });
            }
            s = s.div_factor(b as usize, a as usize)?;
        }
        Ok(s)
    }

    pub fn to_json(&self) -> RatFunJson {
        RatFunJson {
            den: self.den.iter().map(|&(b, a)| [b, a]).collect(),
            num: self.num.terms().map(|(t, q, c)| (t, q, c.to_string())).collect(),
        }
    }

    pub fn from_json(j: &RatFunJson) -> Result<Self, KernelError> {
        let mut num = BiPoly::zero();
        for (t, q, c) in &j.num {
            let c: BigInt = c.parse().map_err(|_| KernelError::Dimension(format!("bad coefficient {c:?}")))?;
            num.add_term(*t, *q, c);
        }
        RatFun2::new(num, j.den.iter().map(|p| (p[0], p[1])).collect())
    }

    /// Equality as rational functions (cross-multiplied).
    pub fn equals(&self, other: &RatFun2) -> bool {
        self.num.mul(&other.denominator()) == other.num.mul(&self.denominator())
    }
}

impl fmt::Display for RatFun2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / (", self.num)?;
        if self.den.is_empty() {
            write!(f, "1")?;
        }
        for (i, &(b, a)) in self.den.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "(1 - {})", BiPoly::monomial(1, b as i64, a as i64))?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for RatFun2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun2[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_examples() {
        let r = RatFun2::new(BiPoly::one(), vec![(1, 0), (1, 1)]).unwrap();
        let s = r.expand(2).unwrap();
        assert_eq!(s.coeffs(), &[QPoly::q_int(1), QPoly::q_int(2), QPoly::q_int(3)]);

        let r = RatFun2::new(BiPoly::from_terms(&[(0, 0, 1), (1, 1, 1)]), vec![(1, 0), (1, 2)]).unwrap();
        assert_eq!(r.expand(1).unwrap().coeffs(), &[QPoly::one(), QPoly::q_int(3)]);

        let z = RatFun2::new(BiPoly::zero(), vec![(1, 0)]).unwrap();
        assert!(z.expand(4).unwrap().is_zero());
    }

    #[test]
    fn rejects_constant_factor() {
        assert!(RatFun2::new(BiPoly::one(), vec![(0, 0)]).is_err());
        let r = RatFun2::new(BiPoly::one(), vec![(0, 1)]).unwrap();
        assert!(r.expand(3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let r = RatFun2::new(BiPoly::from_terms(&[(0, 0, 1), (2, 3, -4)]), vec![(2, 3), (1, 0)]).unwrap();
        let j = serde_json::to_string(&r.to_json()).unwrap();
        let back = RatFun2::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.den_factors(), &[(1, 0), (2, 3)]);
    }
}
