use super::QPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Laurent polynomial in `(t, q)` with integer coefficients, keyed by
/// `(t-exponent, q-exponent)`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly::default()
    }

    pub fn one() -> Self {
        BiPoly::monomial(1, 0, 0)
    }

    pub fn monomial(c: i64, t: i64, q: i64) -> Self {
        let mut p = BiPoly::zero();
        p.add_term(t, q, BigInt::from(c));
        p
    }

    /// Build from `(t, q, coeff)` triples.
    pub fn from_terms(terms: &[(i64, i64, i64)]) -> Self {
        let mut p = BiPoly::zero();
        for &(t, q, c) in terms {
            p.add_term(t, q, BigInt::from(c));
        }
        p
    }

    /// `Σ_m coeffs[m] t^m`.
    pub fn from_t_coeffs(coeffs: &[QPoly]) -> Self {
        let mut p = BiPoly::zero();
        for (m, c) in coeffs.iter().enumerate() {
            for (k, x) in c.coeffs().iter().enumerate() {
                p.add_term(m as i64, k as i64, x.clone());
            }
        }
        p
    }

    pub fn add_term(&mut self, t: i64, q: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((t, q)).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(t, q));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, &BigInt)> {
        self.terms.iter().map(|(&(t, q), c)| (t, q, c))
    }

    pub fn coeff(&self, t: i64, q: i64) -> BigInt {
        self.terms.get(&(t, q)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn t_degree(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn min_t(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.0).min()
    }

    /// Coefficient of `t^m` as a polynomial in `q`; panics on negative `q` powers.
    pub fn t_coeff(&self, m: i64) -> QPoly {
        let mut v: Vec<BigInt> = Vec::new();
        for (&(t, q), c) in self.terms.range((m, i64::MIN)..=(m, i64::MAX)) {
            debug_assert_eq!(t, m);
            assert!(q >= 0, "negative q exponent in t-coefficient");
            let q = q as usize;
            if v.len() <= q {
                v.resize(q + 1, BigInt::zero());
            }
            v[q] = c.clone();
        }
        QPoly::new(v)
    }

    pub fn add(&self, other: &BiPoly) -> BiPoly {
        let mut r = self.clone();
        for (&(t, q), c) in &other.terms {
            r.add_term(t, q, c.clone());
        }
        r
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        let mut r = self.clone();
        for (&(t, q), c) in &other.terms {
            r.add_term(t, q, -c);
        }
        r
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut r = BiPoly::zero();
        for (&(t1, q1), c1) in &self.terms {
            for (&(t2, q2), c2) in &other.terms {
                r.add_term(t1 + t2, q1 + q2, c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &BigInt) -> BiPoly {
        let mut r = BiPoly::zero();
        for (&(t, q), x) in &self.terms {
            r.add_term(t, q, x * c);
        }
        r
    }

    /// Multiply by `t^dt q^dq`.
    pub fn shift(&self, dt: i64, dq: i64) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(&(t, q), c)| ((t + dt, q + dq), c.clone())).collect() }
    }

    /// Substitute `t ↦ 1/t`, `q ↦ 1/q`.
    pub fn invert(&self) -> BiPoly {
        BiPoly { terms: self.terms.iter().map(|(&(t, q), c)| ((-t, -q), c.clone())).collect() }
    }

    /// The factor `1 - q^a t^b`.
    pub fn factor(b: u32, a: u32) -> BiPoly {
        let mut p = BiPoly::one();
        p.add_term(b as i64, a as i64, -BigInt::one());
        p
    }

    /// Specialize `q = 1`: coefficients of `t^0..`.
    pub fn at_q1(&self) -> BTreeMap<i64, BigInt> {
        let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (&(t, _), c) in &self.terms {
            *out.entry(t).or_default() += c;
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Evaluate `q` at a sign `ε = ±1`, leaving `t`.
    pub fn eval_q_sign(&self, negative: bool) -> BiPoly {
        let mut r = BiPoly::zero();
        for (&(t, q), c) in &self.terms {
            let c = if negative && q.rem_euclid(2) == 1 { -c } else { c.clone() };
            r.add_term(t, 0, c);
        }
        r
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, t: i64, q: i64) -> fmt::Result {
    let mut parts = Vec::new();
    match q {
        0 => {}
        1 => parts.push("q".to_string()),
        _ => parts.push(format!("q^{q}")),
    }
    match t {
        0 => {}
        1 => parts.push("t".to_string()),
        _ => parts.push(format!("t^{t}")),
    }
    write!(f, "{}", parts.join("*"))
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (&(t, q), c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let unit = t == 0 && q == 0;
            if unit || !mag.is_one() {
                write!(f, "{mag}")?;
                if !unit {
                    write!(f, "*")?;
                }
            }
            write_monomial(f, t, q)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly({self})")
    }
}
