//! Divided-power harmonic spaces over prime fields `F_p`.
//!
//! Over `F_p` the harmonic space lives in the divided power algebra with
//! basis `y^(a)`, multiplication `y^(a)·y^(b) = ∏ binom(aᵢ+bᵢ, aᵢ)·y^(a+b)`,
//! and pairing `⟨xᵃ, y^(b)⟩ = δ_{ab}`.

use crate::harmonics::engine::{self, Basis, Fp, Mode, Problem};
use crate::harmonics::{monomials_of_degree, Monomial};
use crate::polytope::PointLocus;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ModpError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("points {0:?} and {1:?} coincide mod {2}")]
    Collision(Vec<i64>, Vec<i64>, u64),
    #[error("point locus is empty")]
    Empty,
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|k| k * k <= p).all(|k| p % k != 0)
}

fn check_prime(p: u64) -> Result<(), ModpError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(ModpError::NotPrime(p))
    }
}

/// Element of `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FpScalar {
    value: u64,
    p: u64,
}

impl FpScalar {
    pub fn new(x: i64, p: u64) -> Self {
        FpScalar { value: x.rem_euclid(p as i64) as u64, p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn add(self, o: Self) -> Self {
        FpScalar { value: (self.value + o.value) % self.p, p: self.p }
    }

    pub fn sub(self, o: Self) -> Self {
        FpScalar { value: (self.value + self.p - o.value) % self.p, p: self.p }
    }

    pub fn mul(self, o: Self) -> Self {
        FpScalar { value: mulmod(self.value, o.value, self.p), p: self.p }
    }

    pub fn neg(self) -> Self {
        FpScalar { value: (self.p - self.value) % self.p, p: self.p }
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| FpScalar { value: engine::inv_mod(self.value, self.p), p: self.p })
    }
}

impl fmt::Display for FpScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// `binom(n, k) mod p` by Lucas's theorem.
pub fn binom_mod(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut r = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        // small binomial by the multiplicative formula
        let mut num = 1u64;
        let mut den = 1u64;
        for j in 0..ki {
            num = mulmod(num, ni - j, p);
            den = mulmod(den, j + 1, p);
        }
        r = mulmod(r, mulmod(num, engine::inv_mod(den, p), p), p);
        n /= p;
        k /= p;
    }
    r % p
}

/// `Σ c_a y^(a)` over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DividedPoly {
    p: u64,
    n: usize,
    terms: BTreeMap<Monomial, u64>,
}

impl DividedPoly {
    pub fn zero(n: usize, p: u64) -> Self {
        DividedPoly { p, n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize, p: u64) -> Self {
        DividedPoly::monomial(Monomial::one(n), 1, p)
    }

    /// `c·y^(a)`
    pub fn monomial(a: Monomial, c: i64, p: u64) -> Self {
        let mut f = DividedPoly::zero(a.nvars(), p);
        f.add_term(a, c);
        f
    }

    /// Degree-one element `Σ cᵢ yᵢ`.
    pub fn linear(c: &[i64], p: u64) -> Self {
        let n = c.len();
        let mut f = DividedPoly::zero(n, p);
        for (i, &ci) in c.iter().enumerate() {
            f.add_term(Monomial::var(n, i), ci);
        }
        f
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, a: Monomial, c: i64) {
        let c = c.rem_euclid(self.p as i64) as u64;
        self.add_raw(a, c);
    }

    fn add_raw(&mut self, a: Monomial, c: u64) {
        if c == 0 {
            return;
        }
        let e = self.terms.entry(a.clone()).or_insert(0);
        *e = (*e + c) % self.p;
        if *e == 0 {
            self.terms.remove(&a);
        }
    }

    pub fn coeff(&self, a: &Monomial) -> u64 {
        self.terms.get(a).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, u64)> {
        self.terms.iter().map(|(m, c)| (m, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &DividedPoly) -> Result<DividedPoly, ModpError> {
        same_modulus(self, o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_raw(m.clone(), *c);
        }
        Ok(r)
    }

    /// Divided power of a degree-one element: `ℓ^(d) = Σ_{|a|=d} cᵃ y^(a)`.
    pub fn divided_power_linear(c: &[i64], d: u32, p: u64) -> Self {
        let n = c.len();
        let mut f = DividedPoly::zero(n, p);
        for a in monomials_of_degree(n, d) {
            let mut coef = 1u64;
            for (&e, &ci) in a.exps().iter().zip(c) {
                coef = mulmod(coef, engine::pow_mod(ci.rem_euclid(p as i64) as u64, e as u64, p), p);
            }
            f.add_raw(a, coef);
        }
        f
    }

    /// Coordinates over a list of monomials.
    pub fn coords(&self, basis: &[Monomial]) -> Vec<u64> {
        basis.iter().map(|m| self.coeff(m)).collect()
    }
}

fn same_modulus(a: &DividedPoly, b: &DividedPoly) -> Result<(), ModpError> {
    if a.p != b.p {
        Err(ModpError::ModulusMismatch(a.p, b.p))
    } else {
        Ok(())
    }
}

impl fmt::Display for DividedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(j, &e)| if e == 1 { format!("y{}", j + 1) } else { format!("y{}^({e})", j + 1) })
                .collect();
            match (mono.is_empty(), *c == 1) {
                (true, _) => write!(f, "{c}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{c}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DividedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (mod {})", self.p)
    }
}

/// `y^(a)·y^(b) = ∏ binom(aᵢ+bᵢ, aᵢ) y^(a+b)`, extended bilinearly.
pub fn divided_mul(f: &DividedPoly, g: &DividedPoly) -> Result<DividedPoly, ModpError> {
    same_modulus(f, g)?;
    let p = f.p;
    let mut out = DividedPoly::zero(f.n, p);
    for (a, c) in &f.terms {
        for (b, d) in &g.terms {
            let mut k = mulmod(*c, *d, p);
            for (&ai, &bi) in a.exps().iter().zip(b.exps()) {
                if k == 0 {
                    break;
                }
                k = mulmod(k, binom_mod((ai + bi) as u64, ai as u64, p), p);
            }
            out.add_raw(a.mul(b), k);
        }
    }
    Ok(out)
}

/// Reduce coordinates into `[0, p)`, rejecting collisions.
pub fn reduce_locus(z: &PointLocus, p: u64) -> Result<PointLocus, ModpError> {
    check_prime(p)?;
    let mut seen: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    for pt in z.points() {
        let r: Vec<i64> = pt.iter().map(|x| x.rem_euclid(p as i64)).collect();
        if let Some(prev) = seen.insert(r, pt.clone()) {
            return Err(ModpError::Collision(prev, pt.clone(), p));
        }
    }
    Ok(PointLocus::new(z.ambient_dim(), seen.into_keys().collect()))
}

/// Sumset in `F_pⁿ`.
pub fn sumset_modp(z: &PointLocus, w: &PointLocus, p: u64) -> Result<PointLocus, ModpError> {
    if z.ambient_dim() != w.ambient_dim() {
        return Err(ModpError::DimensionMismatch(z.ambient_dim(), w.ambient_dim()));
    }
    check_prime(p)?;
    let mut out = BTreeSet::new();
    for a in z.points() {
        for b in w.points() {
            out.insert(a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(p as i64)).collect::<Vec<i64>>());
        }
    }
    Ok(PointLocus::new(z.ambient_dim(), out.into_iter().collect()))
}

/// Row space over `F_p` kept in reduced echelon form.
#[derive(Clone, Debug)]
struct FpSpace {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl FpSpace {
    fn new(p: u64) -> Self {
        FpSpace { p, rows: Vec::new() }
    }

    fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut v = v.to_vec();
        for (piv, r) in &self.rows {
            let c = v[*piv];
            if c != 0 {
                for (x, y) in v.iter_mut().zip(r) {
                    *x = (*x + p - mulmod(c, *y, p)) % p;
                }
            }
        }
        v
    }

    fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    fn insert(&mut self, v: &[u64]) -> bool {
        let p = self.p;
        let mut v = self.reduce(v);
        let Some(piv) = v.iter().position(|&x| x != 0) else { return false };
        let inv = engine::inv_mod(v[piv], p);
        for x in v.iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        for (_, r) in self.rows.iter_mut() {
            let c = r[piv];
            if c != 0 {
                for (x, y) in r.iter_mut().zip(&v) {
                    *x = (*x + p - mulmod(c, *y, p)) % p;
                }
            }
        }
        self.rows.push((piv, v));
        self.rows.sort_by_key(|r| r.0);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Degreewise basis of the divided-power harmonic space `V_Z ⊂ 𝔻_{F_p}`,
/// in reduced echelon form over grlex-descending columns.
pub fn harmonic_basis_modp(z: &PointLocus, p: u64) -> Result<Vec<Vec<DividedPoly>>, ModpError> {
    if z.is_empty() {
        return Err(ModpError::Empty);
    }
    let zr = reduce_locus(z, p)?;
    let n = zr.ambient_dim();
    let out = engine::run::<Fp>(&Problem { n, points: zr.points(), basis: Basis::Monomial, mode: Mode::Full }, &p)
        .expect("field arithmetic cannot overflow");
    let top = out.standard.iter().map(Monomial::degree).max().unwrap_or(0);
    let mut by_degree = Vec::new();
    for d in 0..=top {
        // h_s = y^(s) + Σ_b c_{b,s} y^(b), with x^b − Σ c_{b,s} x^s ∈ gr I
        let mut raw: BTreeMap<&Monomial, DividedPoly> = out
            .standard
            .iter()
            .filter(|s| s.degree() == d)
            .map(|s| (s, DividedPoly::monomial(s.clone(), 1, p)))
            .collect();
        for r in out.relations.iter().filter(|r| r.lead.degree() == d) {
            let ainv = engine::inv_mod(r.alpha.0, p);
            for (s, c) in out.standard.iter().zip(&r.comb) {
                if s.degree() == d && c.0 != 0 {
                    let coef = mulmod(p - c.0, ainv, p);
                    raw.get_mut(s).expect("standard").add_raw(r.lead.clone(), coef);
                }
            }
        }
        let cols: Vec<Monomial> = monomials_of_degree(n, d).into_iter().rev().collect();
        let mut space = FpSpace::new(p);
        for h in raw.values() {
            space.insert(&h.coords(&cols));
        }
        by_degree.push(
            space
                .rows
                .iter()
                .map(|(_, v)| {
                    let mut f = DividedPoly::zero(n, p);
                    for (m, &c) in cols.iter().zip(v) {
                        f.add_raw(m.clone(), c);
                    }
                    f
                })
                .collect(),
        );
    }
    Ok(by_degree)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModpClosureReport {
    pub holds: bool,
    pub witness: Option<(DividedPoly, DividedPoly, DividedPoly)>,
}

/// `V_Z · V_{Z′} ⊆ V_{Z+Z′}` in the divided power algebra over `F_p`.
pub fn closure_check_modp(z: &PointLocus, w: &PointLocus, p: u64) -> Result<ModpClosureReport, ModpError> {
    let sum = sumset_modp(&reduce_locus(z, p)?, &reduce_locus(w, p)?, p)?;
    let (vz, vw, vs) = (harmonic_basis_modp(z, p)?, harmonic_basis_modp(w, p)?, harmonic_basis_modp(&sum, p)?);
    let n = z.ambient_dim();
    for (i, fi) in vz.iter().enumerate() {
        for (j, gj) in vw.iter().enumerate() {
            let d = i + j;
            let cols = monomials_of_degree(n, d as u32);
            let mut target = FpSpace::new(p);
            for t in vs.get(d).map_or(&[][..], |v| v.as_slice()) {
                target.insert(&t.coords(&cols));
            }
            for f in fi {
                for g in gj {
                    let fg = divided_mul(f, g)?;
                    if !target.contains(&fg.coords(&cols)) {
                        return Ok(ModpClosureReport { holds: false, witness: Some((f.clone(), g.clone(), fg)) });
                    }
                }
            }
        }
    }
    Ok(ModpClosureReport { holds: true, witness: None })
}

/// `Σ_d dim (V_Z)_d` per degree over `F_p`.
pub fn hilbert_modp(z: &PointLocus, p: u64) -> Result<Vec<usize>, ModpError> {
    Ok(harmonic_basis_modp(z, p)?.iter().map(Vec::len).collect())
}

/// Smallest `n` with `(u+v)ⁿ ∈ (u^r, v^{r′})` over a field of characteristic `p`
/// (`p = 0` for characteristic zero).
pub fn beta_bound(r: u64, r2: u64, p: u64) -> u64 {
    assert!(r >= 1 && r2 >= 1, "beta_bound needs r, r' >= 1");
    (0..)
        .find(|&n| {
            (0..=n).all(|k| {
                let nonzero = if p == 0 { true } else { binom_mod(n, k, p) != 0 };
                !nonzero || k >= r || n - k >= r2
            })
        })
        .expect("r + r' - 1 always works")
}

/// Matrix rank over `F_p` (rows of residues).
pub fn rank_modp(rows: &[Vec<u64>], p: u64) -> usize {
    let mut s = FpSpace::new(p);
    for r in rows {
        s.insert(r);
    }
    s.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::hilbert_function;

    fn line(pts: &[i64]) -> PointLocus {
        PointLocus::new(1, pts.iter().map(|&x| vec![x]).collect())
    }

    fn y(k: u32, c: i64, p: u64) -> DividedPoly {
        DividedPoly::monomial(Monomial::new(vec![k]), c, p)
    }

    #[test]
    fn lucas() {
        for p in [2u64, 3, 5, 7] {
            for n in 0..30u64 {
                let mut row = vec![1u64];
                for k in 1..=n {
                    row.push(row[k as usize - 1] * (n - k + 1) / k);
                }
                for k in 0..=n {
                    assert_eq!(binom_mod(n, k, p), row[k as usize] % p, "C({n},{k}) mod {p}");
                }
            }
        }
    }

    #[test]
    fn divided_products() {
        assert_eq!(divided_mul(&y(1, 1, 2), &y(1, 1, 2)).unwrap(), DividedPoly::zero(1, 2));
        assert_eq!(divided_mul(&y(1, 1, 5), &y(1, 1, 5)).unwrap(), y(2, 2, 5));
        assert_eq!(divided_mul(&y(1, 1, 3), &y(2, 1, 3)).unwrap(), DividedPoly::zero(1, 3));
        assert_eq!(divided_mul(&DividedPoly::one(1, 3), &y(4, 2, 3)).unwrap(), y(4, 2, 3));
        assert_eq!(divided_mul(&y(1, 1, 3), &y(1, 1, 5)), Err(ModpError::ModulusMismatch(3, 5)));
    }

    #[test]
    fn beginners_binomial() {
        for p in [2u64, 3, 5] {
            let a = [1, 2];
            let b = [3, -1];
            let ab: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            for d in 0..=6 {
                let lhs = DividedPoly::divided_power_linear(&ab, d, p);
                let mut rhs = DividedPoly::zero(2, p);
                for d1 in 0..=d {
                    let t = divided_mul(
                        &DividedPoly::divided_power_linear(&a, d1, p),
                        &DividedPoly::divided_power_linear(&b, d - d1, p),
                    )
                    .unwrap();
                    rhs = rhs.add(&t).unwrap();
                }
                assert_eq!(lhs, rhs, "p={p} d={d}");
            }
        }
    }

    #[test]
    fn small_bases() {
        assert_eq!(harmonic_basis_modp(&line(&[0, 1]), 2).unwrap(), vec![vec![DividedPoly::one(1, 2)], vec![y(1, 1, 2)]]);
        assert_eq!(harmonic_basis_modp(&line(&[4]), 3).unwrap(), vec![vec![DividedPoly::one(1, 3)]]);
        let b = harmonic_basis_modp(&line(&[0, 1, 2]), 5).unwrap();
        assert_eq!(b, vec![vec![DividedPoly::one(1, 5)], vec![y(1, 1, 5)], vec![y(2, 1, 5)]]);
        assert!(matches!(harmonic_basis_modp(&line(&[0, 3]), 3), Err(ModpError::Collision(..))));
        assert!(matches!(harmonic_basis_modp(&line(&[0]), 4), Err(ModpError::NotPrime(4))));
    }

    #[test]
    fn dims_sum_to_size() {
        let z = PointLocus::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 1], vec![3, 4]]);
        for p in [5u64, 7, 11] {
            let h = hilbert_modp(&z, p).unwrap();
            assert_eq!(h.iter().sum::<usize>(), z.len());
        }
    }

    #[test]
    fn segment_dims_match_char_zero() {
        for v in 1..=4 {
            let z = line(&(0..=v).collect::<Vec<_>>());
            for p in [5u64, 7] {
                if (v as u64) < p {
                    assert_eq!(hilbert_modp(&z, p).unwrap(), hilbert_function(&z).unwrap());
                }
            }
        }
    }

    #[test]
    fn closure_small() {
        let z = line(&[0, 1]);
        assert!(closure_check_modp(&z, &z, 5).unwrap().holds);
        assert!(closure_check_modp(&z, &line(&[0]), 5).unwrap().holds);
        let t = PointLocus::new(2, vec![vec![0, 0], vec![1, 1], vec![2, 1], vec![1, 2]]);
        for p in [2u64, 3, 5] {
            if reduce_locus(&t, p).is_ok() {
                assert!(closure_check_modp(&t, &t, p).unwrap().holds);
            }
        }
    }

    #[test]
    fn beta_examples() {
        for r in 1..=8 {
            for s in 1..=8 {
                assert_eq!(beta_bound(r, s, 0), r + s - 1);
            }
        }
        assert_eq!(beta_bound(2, 2, 2), 2);
        for p in [2, 3, 5, 7] {
            assert_eq!(beta_bound(1, 4, p), 4);
        }
    }

    #[test]
    fn sumset_bound_on_progressions() {
        for p in [2i64, 3, 5, 7] {
            for r in 1..=5.min(p) {
                for s in 1..=5.min(p) {
                    for d1 in 1..p {
                        for d2 in 1..p {
                            let z = line(&(0..r).map(|k| k * d1 % p).collect::<Vec<_>>());
                            let w = line(&(0..s).map(|k| (1 + k * d2) % p).collect::<Vec<_>>());
                            let sum = sumset_modp(&z, &w, p as u64).unwrap();
                            let top = hilbert_modp(&sum, p as u64).unwrap().len() as u64 - 1;
                            assert!(top + 1 >= beta_bound(r as u64, s as u64, p as u64));
                        }
                    }
                }
            }
        }
    }
}
