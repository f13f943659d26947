use super::{KernelError, QPoly};
use num_bigint::BigInt;
use std::fmt;

/// Power series in `t` with `QPoly` coefficients, truncated after `t^T`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TQSeries {
    coeffs: Vec<QPoly>,
}

impl TQSeries {
    pub fn zero(order: usize) -> Self {
        TQSeries { coeffs: vec![QPoly::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = TQSeries::zero(order);
        s.coeffs[0] = QPoly::one();
        s
    }

    /// Build from coefficients `t^0..t^T`; the order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<QPoly>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the t^0 coefficient");
        TQSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> &QPoly {
        &self.coeffs[m]
    }

    pub fn set_coeff(&mut self, m: usize, p: QPoly) {
        self.coeffs[m] = p;
    }

    pub fn truncate(&self, order: usize) -> Result<Self, KernelError> {
        if order > self.order() {
            return Err(KernelError::InsufficientTruncation { have: self.order(), need: order });
        }
        Ok(TQSeries { coeffs: self.coeffs[..=order].to_vec() })
    }

    fn check_same(&self, other: &TQSeries) -> Result<(), KernelError> {
        if self.order() != other.order() {
            return Err(KernelError::Dimension(format!(
                "series orders differ: {} vs {}",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &TQSeries) -> Result<Self, KernelError> {
        self.check_same(other)?;
        Ok(TQSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &TQSeries) -> Result<Self, KernelError> {
        self.check_same(other)?;
        Ok(TQSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn mul(&self, other: &TQSeries) -> Result<Self, KernelError> {
        self.check_same(other)?;
        let t = self.order();
        let mut out = vec![QPoly::zero(); t + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=t - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j].add_assign_ref(&(a * b));
                }
            }
        }
        Ok(TQSeries { coeffs: out })
    }

    /// Multiply by `c · q^a · t^b` (terms beyond `T` are dropped).
    pub fn mul_monomial(&self, c: &BigInt, b: usize, a: usize) -> Self {
        let t = self.order();
        let mut out = vec![QPoly::zero(); t + 1];
        for m in b..=t {
            out[m] = self.coeffs[m - b].shift(a).scale(c);
        }
        TQSeries { coeffs: out }
    }

    /// Multiply by the factor `(1 - q^a t^b)`.
    pub fn mul_factor(&self, b: usize, a: usize) -> Self {
        let mut out = self.coeffs.clone();
        for m in (b..=self.order()).rev() {
            let s = self.coeffs[m - b].shift(a);
            out[m].sub_assign_ref(&s);
        }
        TQSeries { coeffs: out }
    }

    /// Divide by `(1 - q^a t^b)`, i.e. multiply by `Σ_k q^{ak} t^{bk}`. Needs `b ≥ 1`.
    pub fn div_factor(&self, b: usize, a: usize) -> Result<Self, KernelError> {
        if b == 0 {
            return Err(KernelError::BadFactor { b: 0, a: a as u32 });
        }
        let mut out = self.coeffs.clone();
        for m in b..=self.order() {
            let s = out[m - b].shift(a);
            out[m].add_assign_ref(&s);
        }
        Ok(TQSeries { coeffs: out })
    }

    /// Coefficientwise (Hadamard) product in `t`.
    pub fn hadamard(&self, other: &TQSeries) -> Result<Self, KernelError> {
        self.check_same(other)?;
        Ok(TQSeries { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).collect() })
    }

    /// Specialize `q = 1`.
    pub fn at_q1(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(QPoly::eval_one).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(QPoly::is_zero)
    }
}

impl fmt::Display for TQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match m {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})t")?,
                _ => write!(f, "({c})t^{m}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.order() + 1)
    }
}

impl fmt::Debug for TQSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TQSeries[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_division() {
        let s = TQSeries::one(3).div_factor(1, 1).unwrap();
        for m in 0..=3 {
            assert_eq!(s.coeff(m), &QPoly::monomial(1, m));
        }
        assert_eq!(s.mul_factor(1, 1), TQSeries::one(3));
        assert!(TQSeries::one(2).div_factor(0, 1).is_err());
    }

    #[test]
    fn products() {
        let a = TQSeries::one(2).div_factor(1, 0).unwrap();
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.at_q1(), vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)]);
        let h = a.hadamard(&sq).unwrap();
        assert_eq!(h, sq);
        assert!(a.mul(&TQSeries::one(3)).is_err());
    }
}
