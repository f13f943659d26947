//! Incremental evaluation-matrix elimination (Buchberger–Möller style).
//!
//! Monomials are visited in grlex order. Each one's evaluation vector on the
//! locus is reduced against the echelon rows of the standard monomials found
//! so far; it is standard iff a nonzero remainder survives. The combination
//! that produced a zero remainder is a polynomial vanishing on the locus.
//!
//! In binomial mode the evaluated functions are `∏ binom(xᵢ − loᵢ, aᵢ)`,
//! whose top-degree part is `xᵃ/a!`. They produce the same standard
//! monomials, keep the matrix integral and sparse, and for down-closed loci
//! make it unitriangular.

use super::poly::{monomials_of_degree, Monomial};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) trait Scalar: Clone + Send + Sync {
    type Ctx: Sync;
    fn nil() -> Self;
    fn is_nil(&self) -> bool;
    fn from_big(ctx: &Self::Ctx, x: &BigInt) -> Option<Self>;
    /// `a·x − b·y`, or `None` on overflow.
    fn cross(ctx: &Self::Ctx, a: &Self, x: &Self, b: &Self, y: &Self) -> Option<Self>;
    /// Bring a row to canonical scale; `v` is the evaluation part, `comb` the combination.
    fn normalize(ctx: &Self::Ctx, v: &mut [Self], comb: &mut [Self]);
}

impl Scalar for i64 {
    type Ctx = ();
    fn nil() -> Self {
        0
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn from_big(_: &(), x: &BigInt) -> Option<Self> {
        x.to_i64()
    }
    fn cross(_: &(), a: &i64, x: &i64, b: &i64, y: &i64) -> Option<i64> {
        let r = (*a as i128) * (*x as i128) - (*b as i128) * (*y as i128);
        i64::try_from(r).ok()
    }
    fn normalize(_: &(), v: &mut [i64], comb: &mut [i64]) {
        let mut g = 0i64;
        for x in v.iter().chain(comb.iter()) {
            if *x != 0 {
                g = g.gcd(x);
                if g == 1 {
                    return;
                }
            }
        }
        if g > 1 {
            for x in v.iter_mut().chain(comb.iter_mut()) {
                *x /= g;
            }
        }
    }
}

impl Scalar for BigInt {
    type Ctx = ();
    fn nil() -> Self {
        Zero::zero()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_big(_: &(), x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn cross(_: &(), a: &BigInt, x: &BigInt, b: &BigInt, y: &BigInt) -> Option<BigInt> {
        Some(match (Zero::is_zero(x), Zero::is_zero(y)) {
            (true, true) => BigInt::zero(),
            (false, true) => a * x,
            (true, false) => -(b * y),
            (false, false) => a * x - b * y,
        })
    }
    fn normalize(_: &(), v: &mut [BigInt], comb: &mut [BigInt]) {
        let mut g = BigInt::zero();
        for x in v.iter().chain(comb.iter()) {
            if !Zero::is_zero(x) {
                g = g.gcd(x);
                if g.is_one() {
                    return;
                }
            }
        }
        if g > BigInt::one() {
            for x in v.iter_mut().chain(comb.iter_mut()) {
                if !Zero::is_zero(x) {
                    *x /= &g;
                }
            }
        }
    }
}

/// Element of a prime field `F_p`; the modulus is the context.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Fp(pub u64);

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * a as u128) % p as u128) as u64;
        }
        a = ((a as u128 * a as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

impl Scalar for Fp {
    type Ctx = u64;
    fn nil() -> Self {
        Fp(0)
    }
    fn is_nil(&self) -> bool {
        self.0 == 0
    }
    fn from_big(p: &u64, x: &BigInt) -> Option<Self> {
        let r = x.mod_floor(&BigInt::from(*p));
        Some(Fp(r.to_u64().expect("residue fits")))
    }
    fn cross(p: &u64, a: &Fp, x: &Fp, b: &Fp, y: &Fp) -> Option<Fp> {
        let p = *p as u128;
        let l = (a.0 as u128 * x.0 as u128) % p;
        let r = (b.0 as u128 * y.0 as u128) % p;
        Some(Fp(((l + p - r) % p) as u64))
    }
    fn normalize(p: &u64, v: &mut [Fp], comb: &mut [Fp]) {
        let lead = v.iter().find(|x| x.0 != 0).or_else(|| comb.last().filter(|x| x.0 != 0)).copied();
        let Some(lead) = lead else { return };
        if lead.0 == 1 {
            return;
        }
        let inv = inv_mod(lead.0, *p);
        for x in v.iter_mut().chain(comb.iter_mut()) {
            x.0 = ((x.0 as u128 * inv as u128) % *p as u128) as u64;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Basis {
    Monomial,
    /// `∏ binom(xᵢ − loᵢ, aᵢ)` with `lo` the coordinatewise minimum of the locus.
    Binomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Standard monomials only.
    Hilbert,
    /// Standard monomials and the relations of minimal nonstandard monomials.
    Border,
    /// Relations of every nonstandard monomial up to the top standard degree.
    Full,
}

/// `alpha·f_b + Σ comb[k]·f_{std k}` vanishes on the locus.
#[derive(Clone, Debug)]
pub(crate) struct Relation<S> {
    pub lead: Monomial,
    pub alpha: S,
    pub comb: Vec<S>,
    pub minimal: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct EngineOutput<S> {
    pub standard: Vec<Monomial>,
    pub relations: Vec<Relation<S>>,
}

struct Row<S> {
    v: Vec<S>,
    comb: Vec<S>,
}

pub(crate) struct Problem<'a> {
    pub n: usize,
    pub points: &'a [Vec<i64>],
    pub basis: Basis,
    pub mode: Mode,
}

fn binom_table(max_k: usize, max_j: usize) -> Vec<Vec<BigInt>> {
    let mut t = vec![vec![BigInt::zero(); max_j + 1]; max_k + 1];
    for k in 0..=max_k {
        t[k][0] = BigInt::one();
        for j in 1..=max_j.min(k) {
            t[k][j] = if j == k { BigInt::one() } else { &t[k - 1][j - 1] + &t[k - 1][j] };
        }
    }
    t
}

/// Run the elimination. Returns `None` only if the scalar type overflowed.
pub(crate) fn run<S: Scalar>(prob: &Problem<'_>, ctx: &S::Ctx) -> Option<EngineOutput<S>> {
    let n = prob.n;
    let npts = prob.points.len();
    assert!(npts > 0, "empty locus");
    let lo: Vec<i64> = match prob.basis {
        Basis::Monomial => vec![0; n],
        Basis::Binomial => (0..n).map(|i| prob.points.iter().map(|p| p[i]).min().unwrap()).collect(),
    };
    // column order: shifted degree, then lexicographic
    let mut pts: Vec<Vec<i64>> = prob.points.iter().map(|p| p.iter().zip(&lo).map(|(x, l)| x - l).collect()).collect();
    pts.sort_by(|a, b| a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>()).then_with(|| a.cmp(b)));
    let max_shift = pts.iter().flatten().copied().max().unwrap_or(0).max(0) as usize;
    let mut table: Vec<Vec<BigInt>> = Vec::new();

    let track = prob.mode != Mode::Hilbert;
    let mut rows: Vec<Row<S>> = Vec::new();
    let mut pivot_row: Vec<Option<usize>> = vec![None; npts];
    let mut standard: Vec<Monomial> = Vec::new();
    let mut leads: Vec<Monomial> = Vec::new();
    let mut relations: Vec<Relation<S>> = Vec::new();

    let mut d: u32 = 0;
    loop {
        let mons = monomials_of_degree(n, d);
        let mut any_tested = false;
        for a in mons {
            let divisible = leads.iter().any(|l| l.divides(&a));
            if divisible && prob.mode != Mode::Full {
                continue;
            }
            if standard.len() == npts && prob.mode == Mode::Hilbert {
                leads.push(a);
                continue;
            }
            any_tested = true;
            if prob.basis == Basis::Binomial && table.first().map_or(true, |r| r.len() <= d as usize) {
                table = binom_table(max_shift, d as usize + 4);
            }
            let mut v: Vec<S> = Vec::with_capacity(npts);
            for z in &pts {
                let val = match prob.basis {
                    Basis::Monomial => {
                        let orig: Vec<i64> = z.iter().zip(&lo).map(|(x, l)| x + l).collect();
                        a.eval(&orig)
                    }
                    Basis::Binomial => {
                        let mut acc = BigInt::one();
                        for (&e, &x) in a.exps().iter().zip(z) {
                            if e == 0 {
                                continue;
                            }
                            if (x as usize) < e as usize {
                                acc = BigInt::zero();
                                break;
                            }
                            acc *= &table[x as usize][e as usize];
                        }
                        acc
                    }
                };
                v.push(S::from_big(ctx, &val)?);
            }
            let mut comb: Vec<S> = if track {
                let mut c = vec![S::nil(); standard.len() + 1];
                c[standard.len()] = S::from_big(ctx, &BigInt::one())?;
                c
            } else {
                Vec::new()
            };

            let mut pivot = None;
            for c in 0..npts {
                if v[c].is_nil() {
                    continue;
                }
                match pivot_row[c] {
                    None => {
                        pivot = Some(c);
                        break;
                    }
                    Some(r) => {
                        let row = &rows[r];
                        let (pa, pb) = (row.v[c].clone(), v[c].clone());
                        for j in c..npts {
                            if v[j].is_nil() && row.v[j].is_nil() {
                                continue;
                            }
                            v[j] = S::cross(ctx, &pa, &v[j], &pb, &row.v[j])?;
                        }
                        if track {
                            let zero = S::nil();
                            for j in 0..comb.len() {
                                let rj = row.comb.get(j).unwrap_or(&zero);
                                if comb[j].is_nil() && rj.is_nil() {
                                    continue;
                                }
                                comb[j] = S::cross(ctx, &pa, &comb[j], &pb, rj)?;
                            }
                        }
                        S::normalize(ctx, &mut v[c..], &mut comb);
                    }
                }
            }
            match pivot {
                Some(c) => {
                    pivot_row[c] = Some(rows.len());
                    rows.push(Row { v, comb });
                    standard.push(a);
                }
                None => {
                    if track {
                        let alpha = comb.pop().expect("own coefficient");
                        relations.push(Relation { lead: a.clone(), alpha, comb, minimal: !divisible });
                    }
                    if !divisible {
                        leads.push(a);
                    }
                }
            }
        }
        let done = standard.len() == npts
            && match prob.mode {
                Mode::Full => true,
                _ => !any_tested,
            };
        if done {
            break;
        }
        d += 1;
    }

    Some(EngineOutput { standard, relations })
}

/// Exact run: machine integers first, arbitrary precision on overflow.
pub(crate) fn run_exact(prob: &Problem<'_>) -> EngineOutput<BigInt> {
    if let Some(out) = run::<i64>(prob, &()) {
        return EngineOutput {
            standard: out.standard,
            relations: out
                .relations
                .into_iter()
                .map(|r| Relation {
                    lead: r.lead,
                    alpha: BigInt::from(r.alpha),
                    comb: r.comb.into_iter().map(BigInt::from).collect(),
                    minimal: r.minimal,
                })
                .collect(),
        };
    }
    run::<BigInt>(prob, &()).expect("arbitrary precision cannot overflow")
}
