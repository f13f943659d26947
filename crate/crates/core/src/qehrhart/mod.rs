//! q-Ehrhart series: `E_P(t,q) = Σ_m i_P(m;q) tᵐ` with `i_P(m;q)` the
//! Hilbert series of the orbit-harmonics ring of `ℤⁿ ∩ mP`, the interior
//! analogue `Ē_P`, weight enumerators, guessing and structural identities.

use crate::harmonics::{hilbert_function, HarmonicsError};
use crate::kernel::{
    denominator_search_with, solve, BiPoly, KernelError, Mat, QPoly, RatFun2, RatFunJson, Rat, SearchBounds, TDegBound,
    TQSeries,
};
use crate::par::Exec;
use crate::polytope::{LatticePolytope, PointLocus, PolytopeJson};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum QEhrhartError {
    #[error("polytope is not a simplex")]
    NotASimplex,
    #[error("weight enumerator needs points in the nonnegative orthant")]
    NegativeWeight,
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error(transparent)]
    Harmonics(#[from] HarmonicsError),
}

fn hilbert_qpoly(z: &PointLocus) -> QPoly {
    if z.is_empty() {
        return QPoly::zero();
    }
    let h = hilbert_function(z).expect("nonempty locus");
    QPoly::from_i64(&h.iter().map(|&x| x as i64).collect::<Vec<_>>())
}

/// `i_P(m; q)`.
pub fn iq(p: &LatticePolytope, m: usize) -> QPoly {
    hilbert_qpoly(&p.lattice_points(m))
}

/// `ī_P(m; q)`; zero for `m = 0`.
pub fn iq_interior(p: &LatticePolytope, m: usize) -> QPoly {
    if m == 0 {
        return QPoly::zero();
    }
    hilbert_qpoly(&p.interior_lattice_points(m))
}

pub fn series_e(p: &LatticePolytope, order: usize) -> TQSeries {
    series_e_with(p, order, Exec::default())
}

pub fn series_e_with(p: &LatticePolytope, order: usize, exec: Exec) -> TQSeries {
    TQSeries::from_coeffs(exec.map_range(order + 1, |m| iq(p, m)))
}

pub fn series_ebar(p: &LatticePolytope, order: usize) -> TQSeries {
    series_ebar_with(p, order, Exec::default())
}

pub fn series_ebar_with(p: &LatticePolytope, order: usize, exec: Exec) -> TQSeries {
    TQSeries::from_coeffs(exec.map_range(order + 1, |m| iq_interior(p, m)))
}

fn weight_enumerator(z: &PointLocus) -> Result<QPoly, QEhrhartError> {
    let mut c: Vec<BigInt> = Vec::new();
    for pt in z.points() {
        let w = pt.iter().sum::<i64>();
        if w < 0 {
            return Err(QEhrhartError::NegativeWeight);
        }
        let w = w as usize;
        if c.len() <= w {
            c.resize(w + 1, BigInt::zero());
        }
        c[w] += 1;
    }
    Ok(QPoly::new(c))
}

/// `W_P(t,q) = Σ_m Σ_{z ∈ ℤⁿ∩mP} q^{|z|} tᵐ` with `|z| = z₁+⋯+zₙ`.
pub fn weight_series_w(p: &LatticePolytope, order: usize) -> Result<TQSeries, QEhrhartError> {
    let c: Result<Vec<QPoly>, _> = (0..=order).map(|m| weight_enumerator(&p.lattice_points(m))).collect();
    Ok(TQSeries::from_coeffs(c?))
}

pub fn weight_series_wbar(p: &LatticePolytope, order: usize) -> Result<TQSeries, QEhrhartError> {
    let c: Result<Vec<QPoly>, _> = (0..=order)
        .map(|m| if m == 0 { Ok(QPoly::zero()) } else { weight_enumerator(&p.interior_lattice_points(m)) })
        .collect();
    Ok(TQSeries::from_coeffs(c?))
}

/// Numerators of the weight series of a lattice simplex over `∏ (1 − t q^{|v⁽ʲ⁾|})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexNumerators {
    /// Points of the half-open parallelepiped `Π`.
    pub num: BiPoly,
    /// Points of the opposite parallelepiped `Π^opp`.
    pub num_bar: BiPoly,
    /// q-exponents `|v⁽ʲ⁾|` of the factors `(1 − t q^{|v⁽ʲ⁾|})`.
    pub den: Vec<i64>,
}

impl SimplexNumerators {
    /// `N(t,1)`: the h*-vector.
    pub fn h_star(&self) -> Vec<BigInt> {
        let m = self.num.at_q1();
        let top = m.keys().copied().max().unwrap_or(0).max(0) as usize;
        (0..=top as i64).map(|k| m.get(&k).cloned().unwrap_or_default()).collect()
    }

    pub fn to_ratfuns(&self) -> Option<(RatFun2, RatFun2)> {
        let den: Option<Vec<(u32, u32)>> = self.den.iter().map(|&a| Some((1, u32::try_from(a).ok()?))).collect();
        let den = den?;
        Some((RatFun2::new(self.num.clone(), den.clone()).ok()?, RatFun2::new(self.num_bar.clone(), den).ok()?))
    }
}

/// Enumerate `Π = {Σ λⱼ (1, v⁽ʲ⁾) : 0 ≤ λⱼ < 1}` and its opposite.
pub fn simplex_numerators(p: &LatticePolytope) -> Result<SimplexNumerators, QEhrhartError> {
    if !p.is_simplex() {
        return Err(QEhrhartError::NotASimplex);
    }
    let d = p.dim();
    let verts = p.vertices();
    let n = p.ambient_dim();
    // columns (1, v⁽ʲ⁾)
    let rows: Vec<Vec<Rat>> = (0..=n)
        .map(|i| verts.iter().map(|v| Rat::from_integer(BigInt::from(if i == 0 { 1 } else { v[i - 1] }))).collect())
        .collect();
    let a = Mat::from_rows(rows, d + 1);
    let lambda = |m: usize, x: &[i64]| -> Vec<Rat> {
        let mut b = vec![Rat::from_integer(BigInt::from(m))];
        b.extend(x.iter().map(|&c| Rat::from_integer(BigInt::from(c))));
        solve(&a, &b).expect("point of mP lies in the cone")
    };
    let one = Rat::one();
    let mut num = BiPoly::zero();
    let mut num_bar = BiPoly::zero();
    for m in 0..=d + 1 {
        for x in p.lattice_points(m).points() {
            let l = lambda(m, x);
            let w = x.iter().sum::<i64>();
            if l.iter().all(|c| !c.is_negative() && c < &one) {
                num.add_term(m as i64, w, BigInt::one());
            }
            if l.iter().all(|c| c.is_positive() && c <= &one) {
                num_bar.add_term(m as i64, w, BigInt::one());
            }
        }
    }
    Ok(SimplexNumerators { num, num_bar, den: verts.iter().map(|v| v.iter().sum()).collect() })
}

/// Default search bounds: `b ≤ 4`, `a ≤ 2·max ‖z‖₁` over `ℤⁿ ∩ P`, `ν ≤ d+3`,
/// numerator t-degree `≤ Σbᵢ + 4`.
pub fn default_bounds(p: &LatticePolytope) -> SearchBounds {
    let max_norm = p.lattice_points(1).points().iter().map(|z| z.iter().map(|c| c.abs()).sum::<i64>()).max().unwrap_or(0);
    SearchBounds {
        b_max: 4,
        a_max: (2 * max_norm).max(1) as u32,
        nu_max: p.dim() + 3,
        t_deg: TDegBound::OverDenominator(4),
    }
}

/// Best rational form fitting the series, if any.
pub fn guess_series(s: &TQSeries, bounds: &SearchBounds) -> Option<RatFun2> {
    denominator_search_with(s, bounds, Exec::default()).into_iter().next()
}

/// `q^d · Ē(t,q) = (−1)^{d+1} E(1/t, 1/q)`, checked as an identity of rational functions.
pub fn reciprocity_check(e: &RatFun2, ebar: &RatFun2, d: usize) -> bool {
    reciprocity_with(e, ebar, d as i64, d)
}

/// `W̄(t,q) = (−1)^{d+1} W(1/t, 1/q)` for the weight series of a lattice d-simplex.
pub fn w_reciprocity_check(w: &RatFun2, wbar: &RatFun2, d: usize) -> bool {
    reciprocity_with(w, wbar, 0, d)
}

fn reciprocity_with(e: &RatFun2, ebar: &RatFun2, q_shift: i64, d: usize) -> bool {
    if e.numerator().is_zero() && ebar.numerator().is_zero() {
        return true;
    }
    // 1/(1 − x⁻¹) = −x/(1 − x)
    let mut n_inv = e.numerator().invert();
    for &(b, a) in e.den_factors() {
        n_inv = n_inv.shift(b as i64, a as i64).scale(&BigInt::from(-1));
    }
    if d % 2 == 0 {
        n_inv = n_inv.scale(&BigInt::from(-1));
    }
    let lhs = ebar.numerator().shift(0, q_shift).mul(&e.denominator());
    let rhs = n_inv.mul(&ebar.denominator());
    lhs == rhs
}

/// `E_{kP}` computed directly against `Σ i_P(km; q) tᵐ`.
pub fn check_dilation(p: &LatticePolytope, k: usize, order: usize) -> bool {
    let direct = series_e(&p.dilate(k as i64), order);
    let formula = TQSeries::from_coeffs(Exec::default().map_range(order + 1, |m| iq(p, k * m)));
    direct == formula
}

/// `E_{P×Q}` against the Hadamard product `E_P ⋆ E_Q`.
pub fn check_product(p: &LatticePolytope, q: &LatticePolytope, order: usize) -> bool {
    let direct = series_e(&p.product(q), order);
    let formula = series_e(p, order).hadamard(&series_e(q, order)).expect("same order");
    direct == formula
}

/// `E_{P*Q}` against `((1−t)/(1−qt))·E_P·E_Q`.
pub fn check_join(p: &LatticePolytope, q: &LatticePolytope, order: usize) -> bool {
    let direct = series_e(&p.join(q), order);
    let formula = series_e(p, order)
        .mul(&series_e(q, order))
        .expect("same order")
        .mul_factor(1, 0)
        .div_factor(1, 1)
        .expect("b = 1");
    direct == formula
}

/// Classical h*-vector: `E_P(t) = Σ h*ᵢ tⁱ / (1−t)^{d+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HStar(pub Vec<i64>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalReport {
    pub counts: Vec<usize>,
    pub normalized_volume: BigInt,
    pub q1_agrees: bool,
}

fn binom(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(n - j) / BigInt::from(j + 1))
}

/// h* from `i_P(0..=d+3)`, with rationality, `h*₀ = 1`, nonnegativity,
/// volume and `q = 1` checks.
pub fn classical_check(p: &LatticePolytope) -> Result<(HStar, ClassicalReport), QEhrhartError> {
    let d = p.dim();
    let counts: Vec<usize> = (0..=d + 3).map(|m| p.lattice_points(m).len()).collect();
    let conv = |k: usize| -> BigInt {
        (0..=k.min(d + 1))
            .map(|j| {
                let s = binom(d + 1, j) * BigInt::from(counts[k - j]);
                if j % 2 == 1 {
                    -s
                } else {
                    s
                }
            })
            .sum()
    };
    let h: Vec<BigInt> = (0..=d).map(conv).collect();
    for k in d + 1..=d + 3 {
        if !conv(k).is_zero() {
            return Err(QEhrhartError::Inconsistency(format!("(1-t)^{} E_P(t) has a nonzero t^{k} term", d + 1)));
        }
    }
    if !h[0].is_one() {
        return Err(QEhrhartError::Inconsistency("h*_0 != 1".into()));
    }
    if h.iter().any(Signed::is_negative) {
        return Err(QEhrhartError::Inconsistency("negative h* entry".into()));
    }
    // leading coefficient of the Ehrhart polynomial via d-th finite difference, times d!
    let normalized_volume: BigInt = (0..=d)
        .map(|j| {
            let s = binom(d, j) * BigInt::from(counts[d - j]);
            if j % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .sum();
    let hsum: BigInt = h.iter().sum();
    if hsum != normalized_volume {
        return Err(QEhrhartError::Inconsistency(format!("sum h* = {hsum} but normalized volume = {normalized_volume}")));
    }
    let e = series_e(p, d + 3);
    let q1_agrees = e.at_q1().iter().zip(&counts).all(|(a, &b)| *a == BigInt::from(b));
    if !q1_agrees {
        return Err(QEhrhartError::Inconsistency("E_P(t,1) differs from lattice point counts".into()));
    }
    let h = h.iter().map(|x| x.to_i64().expect("h* fits")).collect();
    Ok((HStar(h), ClassicalReport { counts, normalized_volume, q1_agrees }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "level", rename_all = "lowercase")]
pub enum Verification {
    None,
    Truncation {
        #[serde(rename = "T")]
        t: usize,
    },
    Generated {
        m0: usize,
        #[serde(rename = "T")]
        t: usize,
    },
}

/// Serializable bundle of everything computed for one polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QEhrhartRecord {
    pub polytope: PolytopeJson,
    #[serde(rename = "T")]
    pub t: usize,
    pub iq: Vec<Vec<i64>>,
    #[serde(rename = "iqInterior")]
    pub iq_interior: Vec<Vec<i64>>,
    pub guess: Option<RatFunJson>,
    #[serde(rename = "guessBar")]
    pub guess_bar: Option<RatFunJson>,
    pub verification: Verification,
}

fn coeff_rows(s: &TQSeries) -> Vec<Vec<i64>> {
    s.coeffs().iter().map(|c| c.to_i64_vec().expect("Hilbert coefficients fit in i64")).collect()
}

impl QEhrhartRecord {
    /// Series to order `T` plus, when `bounds` is given, guesses for `E` and `Ē`.
    pub fn compute(p: &LatticePolytope, name: &str, order: usize, bounds: Option<&SearchBounds>) -> Self {
        let e = series_e(p, order);
        let eb = series_ebar(p, order);
        let (guess, guess_bar) = match bounds {
            Some(b) => (guess_series(&e, b), guess_series(&eb, b)),
            None => (None, None),
        };
        let verification =
            if guess.is_some() || guess_bar.is_some() { Verification::Truncation { t: order } } else { Verification::None };
        QEhrhartRecord {
            polytope: p.to_json(name),
            t: order,
            iq: coeff_rows(&e),
            iq_interior: coeff_rows(&eb),
            guess: guess.map(|g| g.to_json()),
            guess_bar: guess_bar.map(|g| g.to_json()),
            verification,
        }
    }

    pub fn series(&self) -> TQSeries {
        TQSeries::from_coeffs(self.iq.iter().map(|c| QPoly::from_i64(c)).collect())
    }

    pub fn series_bar(&self) -> TQSeries {
        TQSeries::from_coeffs(self.iq_interior.iter().map(|c| QPoly::from_i64(c)).collect())
    }

    pub fn guessed_e(&self) -> Option<RatFun2> {
        self.guess.as_ref().and_then(|g| RatFun2::from_json(g).ok())
    }

    pub fn guessed_ebar(&self) -> Option<RatFun2> {
        self.guess_bar.as_ref().and_then(|g| RatFun2::from_json(g).ok())
    }
}
