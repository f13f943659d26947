use crate::kernel::{fmt_rat, rat, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector, ordered graded-lex with `x₁ > x₂ > ⋯`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// `a! = ∏ aᵢ!`
    pub fn factorial(&self) -> BigInt {
        let mut f = BigInt::one();
        for &a in &self.0 {
            for k in 2..=a {
                f *= k;
            }
        }
        f
    }

    pub fn eval(&self, z: &[i64]) -> BigInt {
        let mut v = BigInt::one();
        for (&a, &x) in self.0.iter().zip(z) {
            for _ in 0..a {
                v *= x;
            }
        }
        v
    }

    fn fmt_with(&self, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{var}{}", i + 1)?;
            if a > 1 {
                write!(f, "^{a}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with("x", f)
    }
}

/// All monomials of degree `d` in `n` variables, grlex ascending.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == n - 1 {
            cur.push(d);
            out.push(Monomial(cur.clone()));
            cur.pop();
            return;
        }
        for a in 0..=d {
            cur.push(a);
            rec(n, d - a, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        return if d == 0 { vec![Monomial(Vec::new())] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Polynomial with rational coefficients; zero terms are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    n: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(n: usize) -> Self {
        MultiPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        MultiPoly::monomial(Monomial::one(n), rat(1))
    }

    pub fn monomial(m: Monomial, c: Rat) -> Self {
        let mut p = MultiPoly::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn var(n: usize, i: usize) -> Self {
        MultiPoly::monomial(Monomial::var(n, i), rat(1))
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        MultiPoly::monomial(Monomial::one(n), c)
    }

    /// From `(exponents, integer coefficient)` pairs.
    pub fn from_terms(n: usize, terms: &[(&[u32], i64)]) -> Self {
        let mut p = MultiPoly::zero(n);
        for (e, c) in terms {
            assert_eq!(e.len(), n);
            p.add_term(Monomial(e.to_vec()), rat(*c));
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> MultiPoly {
        MultiPoly {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Top-degree homogeneous component `τ(f)`.
    pub fn top_component(&self) -> MultiPoly {
        match self.degree() {
            None => self.clone(),
            Some(d) => self.homogeneous_component(d),
        }
    }

    pub fn scale(&self, c: &Rat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.n);
        }
        MultiPoly { n: self.n, terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&(Rat::one() / c)),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut r = MultiPoly::zero(self.n);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> MultiPoly {
        MultiPoly { n: self.n, terms: self.terms.iter().map(|(k, x)| (k.mul(m), x * c)).collect() }
    }

    pub fn eval(&self, z: &[i64]) -> Rat {
        self.terms.iter().fold(Rat::zero(), |acc, (m, c)| acc + c * Rat::from_integer(m.eval(z)))
    }

    /// Substitute `yᵢ ↦ Σⱼ a[j][i]·yⱼ`, i.e. act by `y ↦ aᵀy`.
    pub fn linear_substitute(&self, a: &[Vec<i64>]) -> MultiPoly {
        let n = self.n;
        let images: Vec<MultiPoly> = (0..n)
            .map(|i| {
                let mut p = MultiPoly::zero(n);
                for (j, row) in a.iter().enumerate() {
                    p.add_term(Monomial::var(n, j), rat(row[i]));
                }
                p
            })
            .collect();
        let mut out = MultiPoly::zero(n);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(n, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&images[i]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Coefficient vector over the given monomial list.
    pub fn coords(&self, basis: &[Monomial]) -> Vec<Rat> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }

    pub fn fmt_vars(&self, var: &str) -> String {
        struct W<'a>(&'a MultiPoly, &'a str);
        impl fmt::Display for W<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write(self.1, f)
            }
        }
        W(self, var).to_string()
    }

    fn write(&self, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let mag = c.abs();
            let unit = m.degree() == 0;
            if unit {
                write!(f, "{}", fmt_rat(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", fmt_rat(&mag))?;
                }
                m.fmt_with(var, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write("x", f)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write("x", f)
    }
}

/// `⟨f(x), g(y)⟩`: the constant term of `f(∂/∂y) g(y)`, so `⟨xᵃ, yᵇ⟩ = a!·δ_{ab}`.
pub fn apolarity_pair(f: &MultiPoly, g: &MultiPoly) -> Rat {
    let mut s = Rat::zero();
    for (m, c) in f.terms() {
        let d = g.coeff(m);
        if !d.is_zero() {
            s += c * d * Rat::from_integer(m.factorial());
        }
    }
    s
}

/// `f ⊙ g = f(∂/∂y) g(y)`.
pub fn differentiate(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero(g.nvars());
    for (a, c) in f.terms() {
        for (b, d) in g.terms() {
            if !a.divides(b) {
                continue;
            }
            // ∂^a y^b = ∏ b_i!/(b_i - a_i)! y^{b-a}
            let mut k = BigInt::one();
            for (&ai, &bi) in a.exps().iter().zip(b.exps()) {
                for j in 0..ai {
                    k *= bi - j;
                }
            }
            out.add_term(a.quotient(b), c * d * Rat::from_integer(k));
        }
    }
    out
}
