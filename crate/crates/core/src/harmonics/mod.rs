//! Vanishing ideals, associated graded ideals and harmonic spaces of finite
//! point loci over ℚ.

mod buchberger;
pub(crate) mod engine;
mod poly;

pub use buchberger::{buchberger, normal_form};
pub use poly::{apolarity_pair, differentiate, monomials_of_degree, Monomial, MultiPoly};

use crate::kernel::{rref, Mat, Rat, RowSpace};
use crate::polytope::{self, PointLocus};
use engine::{Basis, EngineOutput, Mode, Problem};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum HarmonicsError {
    #[error("point locus is empty")]
    Empty,
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("instance too large: {0}")]
    TooLarge(String),
}

/// Gröbner basis under graded lex together with its standard monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GBasis {
    generators: Vec<MultiPoly>,
    standard: Vec<Monomial>,
}

impl GBasis {
    pub fn generators(&self) -> &[MultiPoly] {
        &self.generators
    }

    pub fn standard_monomials(&self) -> &[Monomial] {
        &self.standard
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.generators.iter().map(|g| g.leading_term().expect("nonzero generator").0.clone()).collect()
    }

    /// One generator per line, terms grlex-descending.
    pub fn dump(&self) -> String {
        self.generators.iter().map(|g| format!("{g}\n")).collect()
    }
}

/// Homogeneous basis of `V_Z`, indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HarmonicBasis {
    by_degree: Vec<Vec<MultiPoly>>,
}

impl HarmonicBasis {
    pub fn by_degree(&self) -> &[Vec<MultiPoly>] {
        &self.by_degree
    }

    pub fn degree(&self, d: usize) -> &[MultiPoly] {
        self.by_degree.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn hilbert(&self) -> Vec<usize> {
        self.by_degree.iter().map(Vec::len).collect()
    }

    pub fn len(&self) -> usize {
        self.by_degree.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = &MultiPoly> {
        self.by_degree.iter().flatten()
    }

    /// Degree blocks separated by a `# degree d` header.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (d, block) in self.by_degree.iter().enumerate() {
            s.push_str(&format!("# degree {d}\n"));
            for h in block {
                s.push_str(&h.fmt_vars("y"));
                s.push('\n');
            }
        }
        s
    }
}

fn nonempty(z: &PointLocus) -> Result<(), HarmonicsError> {
    if z.is_empty() {
        Err(HarmonicsError::Empty)
    } else {
        Ok(())
    }
}

fn ratio(a: &BigInt, b: &BigInt) -> Rat {
    Rat::new(a.clone(), b.clone())
}

/// Reduced Gröbner basis of `I(Z)` under graded lex.
pub fn buchberger_moeller(z: &PointLocus) -> Result<GBasis, HarmonicsError> {
    nonempty(z)?;
    let n = z.ambient_dim();
    let out = engine::run_exact(&Problem { n, points: z.points(), basis: Basis::Monomial, mode: Mode::Border });
    let mut generators: Vec<MultiPoly> = out
        .relations
        .iter()
        .map(|r| {
            let mut g = MultiPoly::monomial(r.lead.clone(), Rat::from_integer(1.into()));
            for (s, c) in out.standard.iter().zip(&r.comb) {
                if !c.is_zero() {
                    g.add_term(s.clone(), ratio(c, &r.alpha));
                }
            }
            g
        })
        .collect();
    generators.sort_by(|a, b| a.leading_term().unwrap().0.cmp(b.leading_term().unwrap().0));
    let mut standard = out.standard;
    standard.sort();
    Ok(GBasis { generators, standard })
}

/// Reduced Gröbner basis of `gr I(Z)`: top components of the basis of `I(Z)`.
pub fn gr_ideal(z: &PointLocus) -> Result<GBasis, HarmonicsError> {
    let g = buchberger_moeller(z)?;
    Ok(GBasis { generators: g.generators.iter().map(MultiPoly::top_component).collect(), standard: g.standard })
}

/// Standard monomials of `I(Z)` (equivalently of `gr I(Z)`), grlex ascending.
pub fn standard_monomials(z: &PointLocus) -> Result<Vec<Monomial>, HarmonicsError> {
    nonempty(z)?;
    let out = engine::run_exact(&Problem {
        n: z.ambient_dim(),
        points: z.points(),
        basis: Basis::Binomial,
        mode: Mode::Hilbert,
    });
    let mut s = out.standard;
    s.sort();
    Ok(s)
}

/// `dim (S/gr I(Z))_d` for `d = 0, 1, …` up to the top nonzero degree.
pub fn hilbert_function(z: &PointLocus) -> Result<Vec<usize>, HarmonicsError> {
    let std = standard_monomials(z)?;
    let top = std.iter().map(Monomial::degree).max().unwrap_or(0) as usize;
    let mut h = vec![0; top + 1];
    for m in &std {
        h[m.degree() as usize] += 1;
    }
    Ok(h)
}

/// Degreewise normal forms modulo `gr I(Z)`: for every nonstandard `x^b` of
/// degree at most the top standard degree, `x^b ≡ Σ e_{b,s} x^s` with `s`
/// standard of the same degree.
struct GradedData {
    n: usize,
    standard: Vec<Monomial>,
    top: u32,
    normal: BTreeMap<Monomial, Vec<(Monomial, Rat)>>,
}

fn graded_data(z: &PointLocus) -> Result<GradedData, HarmonicsError> {
    nonempty(z)?;
    let n = z.ambient_dim();
    let out: EngineOutput<BigInt> =
        engine::run_exact(&Problem { n, points: z.points(), basis: Basis::Binomial, mode: Mode::Full });
    let top = out.standard.iter().map(Monomial::degree).max().unwrap_or(0);
    let mut normal = BTreeMap::new();
    for r in &out.relations {
        // α·p_b + Σ comb_s p_s = 0 with p_a of top part x^a/a!
        let d = r.lead.degree();
        let bf = r.lead.factorial();
        let mut terms = Vec::new();
        for (s, c) in out.standard.iter().zip(&r.comb) {
            if s.degree() == d && !c.is_zero() {
                let e = Rat::new(-c * &bf, &r.alpha * s.factorial());
                terms.push((s.clone(), e));
            }
        }
        normal.insert(r.lead.clone(), terms);
    }
    let mut standard = out.standard;
    standard.sort();
    Ok(GradedData { n, standard, top, normal })
}

/// A basis of `(gr I(Z))_d`.
pub fn gr_component(z: &PointLocus, d: u32) -> Result<Vec<MultiPoly>, HarmonicsError> {
    let g = graded_data(z)?;
    let mons = monomials_of_degree(g.n, d);
    if d > g.top {
        return Ok(mons.into_iter().map(|m| MultiPoly::monomial(m, Rat::from_integer(1.into()))).collect());
    }
    let mut out = Vec::new();
    for b in mons.into_iter().rev() {
        if let Some(terms) = g.normal.get(&b) {
            let mut p = MultiPoly::monomial(b.clone(), Rat::from_integer(1.into()));
            for (s, e) in terms {
                p.add_term(s.clone(), -e.clone());
            }
            out.push(p);
        }
    }
    Ok(out)
}

/// Reduced echelon form of homogeneous polynomials of degree `d` with columns
/// in grlex-descending order and pivots scaled to 1.
pub fn echelonize(n: usize, d: u32, polys: &[MultiPoly]) -> Vec<MultiPoly> {
    let cols: Vec<Monomial> = monomials_of_degree(n, d).into_iter().rev().collect();
    let m = Mat::from_rows(polys.iter().map(|p| p.coords(&cols)).collect(), cols.len());
    let (r, piv) = rref(&m);
    (0..piv.len())
        .map(|i| {
            let mut p = MultiPoly::zero(n);
            for (j, c) in r.row(i).iter().enumerate() {
                p.add_term(cols[j].clone(), c.clone());
            }
            p
        })
        .collect()
}

/// Basis of `V_Z = (gr I(Z))^⊥` under `⟨xᵃ, yᵇ⟩ = a!·δ_{ab}`.
pub fn harmonic_basis(z: &PointLocus) -> Result<HarmonicBasis, HarmonicsError> {
    let g = graded_data(z)?;
    let mut by_degree = Vec::new();
    for d in 0..=g.top {
        let std_d: Vec<&Monomial> = g.standard.iter().filter(|s| s.degree() == d).collect();
        // y^s + Σ_b (e_{b,s}·s!/b!) y^b
        let mut raw: BTreeMap<&Monomial, MultiPoly> =
            std_d.iter().map(|s| (*s, MultiPoly::monomial((*s).clone(), Rat::from_integer(1.into())))).collect();
        for (b, terms) in g.normal.range(Monomial::one(g.n)..) {
            if b.degree() != d {
                continue;
            }
            let bf = b.factorial();
            for (s, e) in terms {
                let c = e * Rat::new(s.factorial(), bf.clone());
                raw.get_mut(s).expect("standard").add_term(b.clone(), c);
            }
        }
        let polys: Vec<MultiPoly> = raw.into_values().collect();
        by_degree.push(echelonize(g.n, d, &polys));
    }
    Ok(HarmonicBasis { by_degree })
}

pub fn minkowski_sum(z: &PointLocus, w: &PointLocus) -> Result<PointLocus, HarmonicsError> {
    if z.ambient_dim() != w.ambient_dim() {
        return Err(HarmonicsError::DimensionMismatch(z.ambient_dim(), w.ambient_dim()));
    }
    Ok(polytope::minkowski(z, w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub holds: bool,
    /// Products span a proper subspace of `V_{Z+Z′}`.
    pub proper: bool,
    /// `(f, g, f·g)` with `f·g ∉ V_{Z+Z′}`.
    pub witness: Option<(MultiPoly, MultiPoly, MultiPoly)>,
    pub product_dim: usize,
    pub target_dim: usize,
}

/// Test `V_Z · V_{Z′} ⊆ V_{Z+Z′}` degreewise by rank comparison.
pub fn closure_check(z: &PointLocus, w: &PointLocus) -> Result<ClosureReport, HarmonicsError> {
    let sum = minkowski_sum(z, w)?;
    let (vz, vw, vs) = (harmonic_basis(z)?, harmonic_basis(w)?, harmonic_basis(&sum)?);
    let n = z.ambient_dim();
    let mut holds = true;
    let mut witness = None;
    let mut product_dim = 0;
    for (d, target) in vs.by_degree().iter().enumerate() {
        let cols = monomials_of_degree(n, d as u32);
        let mut tspace = RowSpace::new(cols.len());
        for t in target {
            tspace.insert(&t.coords(&cols));
        }
        let mut pspace = RowSpace::new(cols.len());
        for i in 0..=d {
            for f in vz.degree(i) {
                for g in vw.degree(d - i) {
                    let fg = f.mul(g);
                    let v = fg.coords(&cols);
                    if !tspace.contains(&v) && witness.is_none() {
                        holds = false;
                        witness = Some((f.clone(), g.clone(), fg.clone()));
                    }
                    pspace.insert(&v);
                }
            }
        }
        product_dim += pspace.rank();
    }
    // products of degree beyond the target's top degree must vanish
    for i in 0..vz.by_degree().len() {
        for j in 0..vw.by_degree().len() {
            if i + j >= vs.by_degree().len() {
                for f in vz.degree(i) {
                    for g in vw.degree(j) {
                        let fg = f.mul(g);
                        if !fg.is_zero() && witness.is_none() {
                            holds = false;
                            witness = Some((f.clone(), g.clone(), fg));
                        }
                    }
                }
            }
        }
    }
    let target_dim = vs.len();
    Ok(ClosureReport { holds, proper: product_dim < target_dim, witness, product_dim, target_dim })
}

/// `∏_{z∈Z} (x_{p(z)} − z_{p(z)})` over all maps `p: Z → [n]`.
pub fn product_gens_oracle(z: &PointLocus) -> Result<Vec<MultiPoly>, HarmonicsError> {
    nonempty(z)?;
    let n = z.ambient_dim();
    if z.len() > 6 || n > 3 {
        return Err(HarmonicsError::TooLarge(format!("|Z| = {} (max 6), n = {} (max 3)", z.len(), n)));
    }
    let pts = z.points();
    let total = n.pow(pts.len() as u32);
    let mut out = Vec::with_capacity(total);
    for code in 0..total {
        let mut c = code;
        let mut p = MultiPoly::one(n);
        for pt in pts {
            let i = c % n;
            c /= n;
            let mut f = MultiPoly::var(n, i);
            f.add_term(Monomial::one(n), Rat::from_integer((-pt[i]).into()));
            p = p.mul(&f);
        }
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;
    use crate::LatticePolytope;

    fn locus(pts: &[&[i64]]) -> PointLocus {
        PointLocus::new(pts[0].len(), pts.iter().map(|p| p.to_vec()).collect())
    }

    fn triangle() -> LatticePolytope {
        LatticePolytope::new(vec![vec![0, 0], vec![2, 1], vec![1, 2]]).unwrap()
    }

    fn corner() -> LatticePolytope {
        LatticePolytope::new(vec![vec![0, 0], vec![1, 0], vec![0, 1]]).unwrap()
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn segment_ideal() {
        let z = LatticePolytope::segment(0, 3).lattice_points(1);
        let g = buchberger_moeller(&z).unwrap();
        // x(x-1)(x-2)(x-3) = x^4 - 6x^3 + 11x^2 - 6x
        assert_eq!(g.generators(), &[MultiPoly::from_terms(1, &[(&[4], 1), (&[3], -6), (&[2], 11), (&[1], -6)])]);
        assert_eq!(g.standard_monomials().len(), 4);
        let gr = gr_ideal(&z).unwrap();
        assert_eq!(gr.generators(), &[MultiPoly::from_terms(1, &[(&[4], 1)])]);
    }

    #[test]
    fn single_point() {
        let z = locus(&[&[2, -1]]);
        let g = buchberger_moeller(&z).unwrap();
        let want = vec![
            MultiPoly::from_terms(2, &[(&[0, 1], 1), (&[0, 0], 1)]),
            MultiPoly::from_terms(2, &[(&[1, 0], 1), (&[0, 0], -2)]),
        ];
        assert_eq!(g.generators(), want.as_slice());
        assert_eq!(g.standard_monomials(), &[Monomial::one(2)]);
        assert_eq!(gr_component(&z, 0).unwrap(), vec![]);
    }

    #[test]
    fn triangle_ideal() {
        let z = triangle().lattice_points(1);
        assert_eq!(z.len(), 4);
        let g = buchberger_moeller(&z).unwrap();
        assert_eq!(g.standard_monomials(), &[mono(&[0, 0]), mono(&[0, 1]), mono(&[1, 0]), mono(&[0, 2])]);
        assert_eq!(g.leading_monomials(), vec![mono(&[1, 1]), mono(&[2, 0]), mono(&[0, 3])]);
        for gen in g.generators() {
            assert!(z.points().iter().all(|p| gen.eval(p).is_zero()));
        }
        let gr = gr_ideal(&z).unwrap();
        let mut want = vec![
            MultiPoly::from_terms(2, &[(&[2, 0], 1), (&[0, 2], -1)]),
            MultiPoly::from_terms(2, &[(&[1, 1], 2), (&[0, 2], -1)]),
            MultiPoly::from_terms(2, &[(&[0, 3], 1)]),
        ];
        // same ideal: reduced bases agree after making the paper's generators monic
        want[1] = want[1].monic();
        let mut got = gr.generators().to_vec();
        got.sort_by(|a, b| a.leading_term().unwrap().0.cmp(b.leading_term().unwrap().0));
        want.sort_by(|a, b| a.leading_term().unwrap().0.cmp(b.leading_term().unwrap().0));
        assert_eq!(got, want);
        assert_eq!(gr_component(&z, 2).unwrap().len(), 2);
    }

    #[test]
    fn triangle_harmonics() {
        let v = harmonic_basis(&triangle().lattice_points(1)).unwrap();
        assert_eq!(v.hilbert(), vec![1, 2, 1]);
        assert_eq!(v.degree(2), &[MultiPoly::from_terms(2, &[(&[2, 0], 1), (&[1, 1], 1), (&[0, 2], 1)])]);
        assert_eq!(v.degree(1), &[MultiPoly::var(2, 0), MultiPoly::var(2, 1)]);

        let v2 = harmonic_basis(&triangle().lattice_points(2)).unwrap();
        assert_eq!(v2.len(), 10);
        let quartic = MultiPoly::from_terms(2, &[(&[4, 0], 1), (&[3, 1], 2), (&[2, 2], 3), (&[1, 3], 2), (&[0, 4], 1)]);
        let cols = monomials_of_degree(2, 4);
        let mut sp = RowSpace::new(cols.len());
        for h in v2.degree(4) {
            sp.insert(&h.coords(&cols));
        }
        assert!(sp.contains(&quartic.coords(&cols)));
    }

    #[test]
    fn shifted_locus_is_monomial() {
        let z = corner().lattice_points(3);
        assert!(z.is_shifted());
        let g = gr_ideal(&z).unwrap();
        assert!(g.generators().iter().all(|p| p.len() == 1));
        let v = harmonic_basis(&z).unwrap();
        let mut got: Vec<Vec<u32>> = v.iter().map(|h| {
            assert_eq!(h.len(), 1);
            h.leading_term().unwrap().0.exps().to_vec()
        }).collect();
        got.sort();
        let mut want: Vec<Vec<u32>> = z.points().iter().map(|p| p.iter().map(|&x| x as u32).collect()).collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn pairing_examples() {
        let x = |e: &[u32]| MultiPoly::from_terms(2, &[(e, 1)]);
        assert_eq!(apolarity_pair(&x(&[2, 0]), &x(&[2, 0])), rat(2));
        assert_eq!(apolarity_pair(&x(&[2, 0]), &x(&[1, 1])), rat(0));
        assert_eq!(apolarity_pair(&x(&[1, 1]), &x(&[1, 1])), rat(1));
    }

    #[test]
    fn perp_and_dimensions() {
        let z = triangle().lattice_points(2);
        let v = harmonic_basis(&z).unwrap();
        for d in 0..6u32 {
            let gi = gr_component(&z, d).unwrap();
            let sd = monomials_of_degree(2, d).len();
            assert_eq!(gi.len() + v.degree(d as usize).len(), sd);
            for f in &gi {
                for h in v.degree(d as usize) {
                    assert!(apolarity_pair(f, h).is_zero());
                }
            }
        }
    }

    #[test]
    fn gr_component_segment() {
        let z = LatticePolytope::segment(0, 2).lattice_points(1);
        assert_eq!(gr_component(&z, 3).unwrap(), vec![MultiPoly::from_terms(1, &[(&[3], 1)])]);
        assert_eq!(gr_component(&z, 2).unwrap(), vec![]);
    }

    #[test]
    fn minkowski_examples() {
        let z = triangle().lattice_points(1);
        assert_eq!(minkowski_sum(&z, &z).unwrap(), triangle().lattice_points(2));
        let a = locus(&[&[0], &[2], &[3]]);
        let s = minkowski_sum(&a, &a).unwrap();
        assert_eq!(s.points(), &[vec![0], vec![2], vec![3], vec![4], vec![5], vec![6]]);
        assert!(matches!(minkowski_sum(&a, &z), Err(HarmonicsError::DimensionMismatch(1, 2))));
    }

    #[test]
    fn closure_examples() {
        let z = triangle().lattice_points(1);
        let r = closure_check(&z, &z).unwrap();
        // products reach only y₁Q, y₂Q in degree 3 (Q = y₁² + y₁y₂ + y₂²)
        assert!(r.holds && r.proper);
        assert_eq!((r.product_dim, r.target_dim), (9, 10));

        let a = locus(&[&[0, 0], &[1, 0], &[0, 1]]);
        let b = locus(&[&[0, 0], &[1, 0], &[1, 1]]);
        let r = closure_check(&a, &b).unwrap();
        assert!(r.holds && r.proper);
        assert_eq!((r.product_dim, r.target_dim), (6, 7));

        let r = closure_check(&a, &locus(&[&[0, 0]])).unwrap();
        assert!(r.holds && !r.proper);
    }

    #[test]
    fn product_generators() {
        let z = locus(&[&[0, 0], &[2, 2]]);
        let gens = product_gens_oracle(&z).unwrap();
        assert_eq!(gens.len(), 4);
        let want = [
            MultiPoly::from_terms(2, &[(&[2, 0], 1), (&[1, 0], -2)]),
            MultiPoly::from_terms(2, &[(&[1, 1], 1), (&[1, 0], -2)]),
            MultiPoly::from_terms(2, &[(&[1, 1], 1), (&[0, 1], -2)]),
            MultiPoly::from_terms(2, &[(&[0, 2], 1), (&[0, 1], -2)]),
        ];
        for w in &want {
            assert!(gens.contains(w), "{w}");
        }
        assert_eq!(product_gens_oracle(&locus(&[&[0], &[1]])).unwrap(), vec![MultiPoly::from_terms(1, &[(&[2], 1), (&[1], -1)])]);
        let big = corner().lattice_points(2);
        assert!(matches!(product_gens_oracle(&big), Ok(_)));
        let bigger = corner().lattice_points(3);
        assert!(matches!(product_gens_oracle(&bigger), Err(HarmonicsError::TooLarge(_))));
    }

    #[test]
    fn bm_matches_classical_buchberger() {
        for z in [
            locus(&[&[0, 0], &[2, 2]]),
            locus(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]),
            triangle().lattice_points(1),
            locus(&[&[0], &[2], &[3]]),
            locus(&[&[1, -1], &[0, 2], &[-1, 0]]),
        ] {
            let g = buchberger_moeller(&z).unwrap();
            let oracle = buchberger(&product_gens_oracle(&z).unwrap());
            assert_eq!(g.generators(), oracle.as_slice());
        }
    }

    #[test]
    fn binomial_and_monomial_engines_agree() {
        let z = LatticePolytope::cross_polytope(2).lattice_points(2);
        let a = engine::run_exact(&Problem { n: 2, points: z.points(), basis: Basis::Binomial, mode: Mode::Hilbert });
        let b = engine::run_exact(&Problem { n: 2, points: z.points(), basis: Basis::Monomial, mode: Mode::Hilbert });
        assert_eq!(a.standard, b.standard);
        let lts: Vec<Monomial> = buchberger_moeller(&z).unwrap().leading_monomials();
        let gr_std = standard_monomials(&z).unwrap();
        assert!(gr_std.iter().all(|s| !lts.iter().any(|l| l.divides(s))));
    }

    #[test]
    fn dumps() {
        let z = triangle().lattice_points(1);
        assert_eq!(harmonic_basis(&z).unwrap().dump(), "# degree 0\n1\n# degree 1\ny1\ny2\n# degree 2\ny1^2 + y1*y2 + y2^2\n");
        assert_eq!(gr_ideal(&z).unwrap().dump(), "x1*x2 - 1/2*x2^2\nx1^2 - x2^2\nx2^3\n");
    }
}
