//! The harmonic algebra `ℋ_P = ⊕_m y₀ᵐ ⊗ V_{ℤⁿ∩mP}`, bigraded by the
//! dilation index `m` (the `t`-degree) and the polynomial degree in `y`
//! (the `q`-degree). The `y₀ᵐ` factor is kept implicit as the tag `m`.

use crate::harmonics::{harmonic_basis, monomials_of_degree, HarmonicBasis, HarmonicsError, Monomial, MultiPoly};
use crate::kernel::{QPoly, RowSpace, TQSeries};
use crate::par::Exec;
use crate::polytope::{LatticePolytope, PointLocus, Poset};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum HAlgebraError {
    #[error("generator tagged t-degree {0} is not in that component: {1}")]
    NotInComponent(usize, String),
    #[error("generator is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("product {0} is not in the target component")]
    Containment(String),
    #[error("cutoff {0} exceeds horizon {1}")]
    BadHorizon(usize, usize),
    #[error(transparent)]
    Harmonics(#[from] HarmonicsError),
}

/// `(ℋ_P)_m`: the harmonic space of `ℤⁿ ∩ mP`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HComponent {
    pub m: usize,
    pub basis: HarmonicBasis,
}

impl HComponent {
    pub fn hilbert(&self) -> QPoly {
        QPoly::from_i64(&self.basis.hilbert().iter().map(|&x| x as i64).collect::<Vec<_>>())
    }
}

pub fn component(p: &LatticePolytope, m: usize) -> Result<HComponent, HAlgebraError> {
    Ok(HComponent { m, basis: harmonic_basis(&p.lattice_points(m))? })
}

/// Interior component: harmonic space of `ℤⁿ ∩ int(mP)`; `None` when empty.
pub fn interior_component(p: &LatticePolytope, m: usize) -> Result<Option<HComponent>, HAlgebraError> {
    let z = p.interior_lattice_points(m);
    if z.is_empty() || m == 0 {
        return Ok(None);
    }
    Ok(Some(HComponent { m, basis: harmonic_basis(&z)? }))
}

/// Span of homogeneous polynomials, one cell per degree.
#[derive(Clone, Debug)]
struct Cells {
    n: usize,
    cols: Vec<Vec<Monomial>>,
    spaces: Vec<RowSpace>,
    basis: Vec<Vec<MultiPoly>>,
}

impl Cells {
    fn new(n: usize) -> Self {
        Cells { n, cols: Vec::new(), spaces: Vec::new(), basis: Vec::new() }
    }

    fn ensure(&mut self, d: usize) {
        while self.spaces.len() <= d {
            let c = monomials_of_degree(self.n, self.spaces.len() as u32);
            self.spaces.push(RowSpace::new(c.len()));
            self.cols.push(c);
            self.basis.push(Vec::new());
        }
    }

    fn degree_of(f: &MultiPoly) -> usize {
        f.degree().unwrap_or(0) as usize
    }

    fn insert(&mut self, f: &MultiPoly) -> bool {
        if f.is_zero() {
            return false;
        }
        let d = Self::degree_of(f);
        self.ensure(d);
        if self.spaces[d].insert(&f.coords(&self.cols[d])) {
            self.basis[d].push(f.clone());
            true
        } else {
            false
        }
    }

    fn contains(&mut self, f: &MultiPoly) -> bool {
        if f.is_zero() {
            return true;
        }
        let d = Self::degree_of(f);
        self.ensure(d);
        self.spaces[d].contains(&f.coords(&self.cols[d]))
    }

    fn is_full_at(&self, d: usize, cap: usize) -> bool {
        self.spaces.get(d).map_or(cap == 0, |s| s.rank() >= cap)
    }

    fn dims(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.spaces.iter().map(RowSpace::rank).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    fn from_basis(n: usize, b: &HarmonicBasis) -> Self {
        let mut c = Cells::new(n);
        for f in b.iter() {
            c.insert(f);
        }
        c
    }

    fn iter(&self) -> impl Iterator<Item = &MultiPoly> {
        self.basis.iter().flatten()
    }
}

/// Outcome of multiplying two components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSpan {
    /// Dimension of `(ℋ_P)_m · (ℋ_P)_{m′}` per q-degree.
    pub dims: Vec<usize>,
    /// Dimension of `(ℋ_P)_{m+m′}` per q-degree.
    pub target_dims: Vec<usize>,
    pub contained: bool,
    pub equal: bool,
}

impl ProductSpan {
    pub fn top_degree(&self) -> Option<usize> {
        self.dims.iter().rposition(|&d| d > 0)
    }

    pub fn target_top_degree(&self) -> Option<usize> {
        self.target_dims.iter().rposition(|&d| d > 0)
    }
}

/// `(ℋ_P)_m · (ℋ_P)_{m′} ⊆ (ℋ_P)_{m+m′}`, with the span dimensions.
pub fn product_span(p: &LatticePolytope, m: usize, m2: usize) -> Result<ProductSpan, HAlgebraError> {
    let n = p.ambient_dim();
    let a = component(p, m)?;
    let b = component(p, m2)?;
    let target = component(p, m + m2)?;
    let mut tcells = Cells::from_basis(n, &target.basis);
    let mut span = Cells::new(n);
    for f in a.basis.iter() {
        for g in b.basis.iter() {
            let fg = f.mul(g);
            if !tcells.contains(&fg) {
                return Err(HAlgebraError::Containment(fg.fmt_vars("y")));
            }
            span.insert(&fg);
        }
    }
    let dims = span.dims();
    let target_dims = target.basis.hilbert();
    let equal = dims == target_dims;
    Ok(ProductSpan { dims, target_dims, contained: true, equal })
}

/// Whether components of t-degree `≤ m₀` generate `ℋ_P` through t-degree `T`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub m0: usize,
    #[serde(rename = "T")]
    pub t: usize,
    /// `status[m]`: the generated span fills `(ℋ_P)_m`.
    pub status: Vec<bool>,
    /// `missing[m][d]`: deficiency at bidegree `(m, q^d)`.
    pub missing: Vec<Vec<usize>>,
}

impl GenerationReport {
    pub fn fully_generated(&self) -> bool {
        self.status.iter().all(|&s| s)
    }

    pub fn first_deficiency(&self) -> Option<(usize, usize)> {
        self.missing.iter().enumerate().find_map(|(m, row)| row.iter().position(|&x| x > 0).map(|d| (m, d)))
    }
}

/// Default horizon `2·m₀ + 4`.
pub fn default_horizon(m0: usize) -> usize {
    2 * m0 + 4
}

pub fn generation_check(p: &LatticePolytope, m0: usize, t: usize) -> Result<GenerationReport, HAlgebraError> {
    if m0 > t {
        return Err(HAlgebraError::BadHorizon(m0, t));
    }
    let n = p.ambient_dim();
    let comps: Vec<HarmonicBasis> = Exec::default()
        .map_range(t + 1, |m| harmonic_basis(&p.lattice_points(m)))
        .into_iter()
        .collect::<Result<_, _>>()?;
    let mut gen: Vec<Cells> = Vec::with_capacity(t + 1);
    let mut status = Vec::with_capacity(t + 1);
    let mut missing = Vec::with_capacity(t + 1);
    for m in 0..=t {
        let target = comps[m].hilbert();
        let cells = if m <= m0 {
            Cells::from_basis(n, &comps[m])
        } else {
            let mut tcells = Cells::from_basis(n, &comps[m]);
            let mut c = Cells::new(n);
            for k in 1..=m0 {
                for f in comps[k].iter() {
                    let df = f.degree().unwrap_or(0) as usize;
                    for g in gen[m - k].iter() {
                        let d = df + g.degree().unwrap_or(0) as usize;
                        if c.is_full_at(d, target.get(d).copied().unwrap_or(0)) {
                            continue;
                        }
                        let fg = f.mul(g);
                        if !tcells.contains(&fg) {
                            return Err(HAlgebraError::Containment(fg.fmt_vars("y")));
                        }
                        c.insert(&fg);
                    }
                }
            }
            c
        };
        let dims = cells.dims();
        let miss: Vec<usize> = target.iter().enumerate().map(|(d, &x)| x - dims.get(d).copied().unwrap_or(0)).collect();
        status.push(miss.iter().all(|&x| x == 0));
        missing.push(miss);
        gen.push(cells);
    }
    Ok(GenerationReport { m0, t, status, missing })
}

/// Bigraded Hilbert series, through t-degree `T`, of the subalgebra generated
/// by `(m, f)` pairs (each `f` homogeneous and in `(ℋ_P)_m`).
pub fn subalgebra_hilbert(
    p: &LatticePolytope,
    gens: &[(usize, MultiPoly)],
    t: usize,
) -> Result<TQSeries, HAlgebraError> {
    let n = p.ambient_dim();
    let mut checked: Vec<Option<Cells>> = vec![None; t + 1];
    for (m, f) in gens {
        if *m > t {
            continue;
        }
        if !f.is_homogeneous() {
            return Err(HAlgebraError::NotHomogeneous(f.fmt_vars("y")));
        }
        if checked[*m].is_none() {
            checked[*m] = Some(Cells::from_basis(n, &component(p, *m)?.basis));
        }
        if !checked[*m].as_mut().unwrap().contains(f) {
            return Err(HAlgebraError::NotInComponent(*m, f.fmt_vars("y")));
        }
    }
    let mut span: Vec<Cells> = Vec::with_capacity(t + 1);
    let mut one = Cells::new(n);
    one.insert(&MultiPoly::one(n));
    for (m, f) in gens {
        if *m == 0 {
            one.insert(f);
        }
    }
    span.push(one);
    for m in 1..=t {
        let mut c = Cells::new(n);
        for (k, f) in gens {
            if *k == 0 || *k > m {
                continue;
            }
            for g in span[m - k].iter() {
                c.insert(&f.mul(g));
            }
        }
        span.push(c);
    }
    Ok(TQSeries::from_coeffs(
        span.iter().map(|c| QPoly::from_i64(&c.dims().iter().map(|&x| x as i64).collect::<Vec<_>>())).collect(),
    ))
}

fn same_space(a: &PointLocus, b: &PointLocus) -> Result<bool, HAlgebraError> {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => Ok(true),
        (false, false) => Ok(harmonic_basis(a)? == harmonic_basis(b)?),
        _ => Ok(false),
    }
}

/// `ℋ_{C_𝒫} = ℋ_{O_𝒫}` and `ℋ̄_{C_𝒫} = ℋ̄_{O_𝒫}` through t-degree `M`,
/// compared as normalized bases.
pub fn chain_order_equality(poset: &Poset, big_m: usize) -> Result<bool, HAlgebraError> {
    let o = poset.order_polytope();
    let c = poset.chain_polytope();
    for m in 0..=big_m {
        if !same_space(&o.lattice_points(m), &c.lattice_points(m))? {
            return Ok(false);
        }
        if m > 0 && !same_space(&o.interior_lattice_points(m), &c.interior_lattice_points(m))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Products of `(ℋ_P)_m` with `ℋ̄_P` at `m′` land in `ℋ̄_P` at `m+m′`.
pub fn interior_ideal_check(p: &LatticePolytope, m: usize, m2: usize) -> Result<bool, HAlgebraError> {
    let n = p.ambient_dim();
    let Some(inner) = interior_component(p, m2)? else { return Ok(true) };
    let Some(target) = interior_component(p, m + m2)? else { return Ok(false) };
    let a = component(p, m)?;
    let mut tcells = Cells::from_basis(n, &target.basis);
    for f in a.basis.iter() {
        for g in inner.basis.iter() {
            if !tcells.contains(&f.mul(g)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::x_poset;
    use crate::qehrhart::series_e;

    fn triangle() -> LatticePolytope {
        LatticePolytope::new(vec![vec![0, 0], vec![2, 1], vec![1, 2]]).unwrap()
    }

    fn y(terms: &[(&[u32], i64)]) -> MultiPoly {
        MultiPoly::from_terms(2, terms)
    }

    #[test]
    fn components() {
        let c = component(&triangle(), 1).unwrap();
        assert_eq!(c.basis.len(), 4);
        assert_eq!(c.basis.degree(2), &[y(&[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)])]);
        assert_eq!(component(&triangle(), 0).unwrap().basis.by_degree(), &[vec![MultiPoly::one(2)]]);
        let sq = component(&LatticePolytope::cube(2), 2).unwrap();
        assert!(sq.basis.iter().all(|f| f.len() == 1));
    }

    #[test]
    fn hilbert_identity() {
        let p = triangle();
        let s = series_e(&p, 4);
        for m in 0..=4 {
            assert_eq!(&component(&p, m).unwrap().hilbert(), s.coeff(m));
        }
    }

    #[test]
    fn contrast_triangle() {
        let p = LatticePolytope::new(vec![vec![0, 0], vec![1, 2], vec![3, 1]]).unwrap();
        let r = product_span(&p, 1, 1).unwrap();
        assert!(r.contained && !r.equal);
        assert_eq!(r.top_degree(), Some(4));
        assert_eq!(r.target_top_degree(), Some(5));
        let r0 = product_span(&p, 2, 0).unwrap();
        assert!(r0.equal);
        let t = product_span(&triangle(), 1, 1).unwrap();
        assert!(t.contained && !t.equal);
    }

    #[test]
    fn generation() {
        let p = triangle();
        let r = generation_check(&p, 1, 4).unwrap();
        assert!(!r.fully_generated());
        assert_eq!(r.first_deficiency(), Some((2, 3)));
        assert_eq!(r.missing[2], vec![0, 0, 0, 1, 0]);
        assert!(generation_check(&p, 2, 8).unwrap().fully_generated());
        assert!(generation_check(&p, 3, 8).unwrap().fully_generated());
        let sq = generation_check(&LatticePolytope::cube(2), 1, 6).unwrap();
        assert!(sq.fully_generated());
        assert!(matches!(generation_check(&p, 5, 4), Err(HAlgebraError::BadHorizon(5, 4))));
    }

    #[test]
    fn generation_agrees_with_subalgebra() {
        // the algebra generated by all of (ℋ_P)_1 and (ℋ_P)_2 has the full series
        let p = triangle();
        let mut gens = Vec::new();
        for m in 1..=2 {
            gens.extend(component(&p, m).unwrap().basis.iter().map(|f| (m, f.clone())));
        }
        let s = subalgebra_hilbert(&p, &gens, 6).unwrap();
        let e = series_e(&p, 6);
        assert_eq!(s.coeffs(), e.coeffs());
    }

    #[test]
    fn theta_subalgebra() {
        let p = triangle();
        let q = y(&[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)]);
        let thetas = vec![(1, MultiPoly::one(2)), (1, q), (2, y(&[(&[2, 1], 1), (&[1, 2], 1)]))];
        let s = subalgebra_hilbert(&p, &thetas, 6).unwrap();
        // 1/((1−t)²(1−t²)) at q = 1
        let want = [1, 2, 4, 6, 9, 12, 16];
        for (m, w) in want.iter().enumerate() {
            assert_eq!(s.coeff(m).eval_one(), (*w).into());
        }
        let one = subalgebra_hilbert(&p, &[(0, MultiPoly::one(2))], 3).unwrap();
        assert_eq!(one.coeffs(), &[QPoly::one(), QPoly::zero(), QPoly::zero(), QPoly::zero()]);
        let bad = subalgebra_hilbert(&p, &[(1, y(&[(&[2, 0], 1)]))], 2);
        assert!(matches!(bad, Err(HAlgebraError::NotInComponent(1, _))));
    }

    #[test]
    fn chain_order() {
        assert!(chain_order_equality(&Poset::antichain(2), 2).unwrap());
        assert!(chain_order_equality(&Poset::chain(3), 3).unwrap());
        let x = x_poset();
        assert!(chain_order_equality(&x, 1).unwrap());
    }

    #[test]
    fn interior_ideal() {
        let p = triangle();
        assert!(interior_ideal_check(&p, 1, 1).unwrap());
        assert!(interior_ideal_check(&p, 1, 2).unwrap());
        let r = LatticePolytope::reeve(1).dilate(1);
        assert!(interior_ideal_check(&r, 1, 4).unwrap());
    }
}
