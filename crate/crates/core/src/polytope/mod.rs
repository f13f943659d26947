//! Lattice polytopes, point loci and poset polytopes.

mod poset;

pub use poset::{all_posets_up_to_iso, x_poset, Poset, PosetError, PosetJson};

use crate::kernel::{intlin, inverse, nullspace, rat, Mat, Rat};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polytope has no vertices")]
    Empty,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a simplex")]
    NotASimplex,
}

/// Finite set of integer points, sorted lexicographically without repeats.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointLocus {
    n: usize,
    points: Vec<Vec<i64>>,
}

impl PointLocus {
    pub fn new(n: usize, mut points: Vec<Vec<i64>>) -> Self {
        assert!(points.iter().all(|p| p.len() == n), "point of wrong dimension");
        points.sort();
        points.dedup();
        PointLocus { n, points }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points.binary_search_by(|x| x.as_slice().cmp(p)).is_ok()
    }

    /// True iff the locus lies in `ℕⁿ` and is closed under coordinatewise decrease.
    pub fn is_shifted(&self) -> bool {
        self.points.iter().all(|p| {
            p.iter().all(|&x| x >= 0)
                && (0..self.n).all(|i| {
                    p[i] == 0 || {
                        let mut q = p.clone();
                        q[i] -= 1;
                        self.contains(&q)
                    }
                })
        })
    }
}

/// A lattice polytope with its affine hull and facets cached.
///
/// Hull coordinates: every point of the affine hull of `mP` is
/// `m·base + Σ uᵢ·basis[i]`, and because the basis spans the saturated
/// direction lattice, `u` is integral exactly when the point is.
#[derive(Clone)]
pub struct LatticePolytope {
    n: usize,
    vertices: Vec<Vec<i64>>,
    base: Vec<i64>,
    basis: Vec<Vec<i64>>,
    coord_cols: Vec<usize>,
    coord_inv: Mat,
    hull_vertices: Vec<Vec<i64>>,
    facets: Vec<(Vec<i64>, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub name: String,
    pub vertices: Vec<Vec<i64>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticePolytope(n={}, d={}, vertices={:?})", self.n, self.dim(), self.vertices)
    }
}

fn to_i64(x: &Rat) -> i64 {
    assert!(x.is_integer(), "non-integral hull coordinate");
    x.to_integer().to_i64().expect("coordinate exceeds i64")
}

impl LatticePolytope {
    /// Convex hull of the given points. Repeated and non-extreme points are
    /// dropped; the remaining vertices keep their input order.
    pub fn new(points: Vec<Vec<i64>>) -> Result<Self, PolytopeError> {
        let first = points.first().ok_or(PolytopeError::Empty)?;
        let n = first.len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(PolytopeError::DimensionMismatch(format!("expected {n} coordinates, got {}", p.len())));
        }
        let mut seen = BTreeSet::new();
        let pts: Vec<Vec<i64>> = points.into_iter().filter(|p| seen.insert(p.clone())).collect();

        let base = pts[0].clone();
        let diffs: Vec<Vec<i64>> = pts.iter().map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect()).collect();
        let basis = intlin::saturate(&diffs, n);
        let d = basis.len();

        let bmat = Mat::from_i64(&basis);
        let (_, coord_cols) = if d == 0 { (Mat::zeros(0, n), Vec::new()) } else { crate::kernel::rref(&bmat) };
        // (x - base)[coord_cols] = Mᵀ u with M[i][k] = basis[i][coord_cols[k]]
        let mt = Mat::from_rows(
            (0..d).map(|k| (0..d).map(|i| rat(basis[i][coord_cols[k]])).collect()).collect(),
            d,
        );
        let coord_inv = inverse(&mt).expect("hull basis has full rank");

        let mut poly = LatticePolytope {
            n,
            vertices: Vec::new(),
            base,
            basis,
            coord_cols,
            coord_inv,
            hull_vertices: Vec::new(),
            facets: Vec::new(),
        };
        let hull_pts: Vec<Vec<i64>> = pts
            .iter()
            .map(|p| poly.hull_coords(p, 1).expect("point lies in its own hull").iter().map(to_i64).collect())
            .collect();
        poly.facets = brute_force_facets(&hull_pts, d);

        let mut vertices = Vec::new();
        let mut hull_vertices = Vec::new();
        for (p, u) in pts.into_iter().zip(hull_pts) {
            let tight: Vec<Vec<i64>> =
                poly.facets.iter().filter(|(nrm, c)| intlin::dot(nrm, &u) == *c).map(|(nrm, _)| nrm.clone()).collect();
            let r = if tight.is_empty() { 0 } else { crate::kernel::rank(&Mat::from_i64(&tight)) };
            if r == d {
                vertices.push(p);
                hull_vertices.push(u);
            }
        }
        poly.vertices = vertices;
        poly.hull_vertices = hull_vertices;
        Ok(poly)
    }

    pub fn from_json(j: &PolytopeJson) -> Result<Self, PolytopeError> {
        LatticePolytope::new(j.vertices.clone())
    }

    pub fn to_json(&self, name: &str) -> PolytopeJson {
        PolytopeJson { name: name.to_string(), vertices: self.vertices.clone() }
    }

    /// Single lattice point.
    pub fn point(p: Vec<i64>) -> Self {
        LatticePolytope::new(vec![p]).expect("nonempty")
    }

    /// Segment `[a, a+v] ⊂ ℝ¹`.
    pub fn segment(a: i64, v: i64) -> Self {
        LatticePolytope::new(vec![vec![a], vec![a + v]]).expect("nonempty")
    }

    /// Standard simplex `Δ^{n-1} = conv{e₁,…,eₙ} ⊂ ℝⁿ`.
    pub fn standard_simplex(n: usize) -> Self {
        LatticePolytope::new((0..n).map(|i| unit(n, i)).collect()).expect("nonempty")
    }

    /// Cross-polytope `◊ⁿ = conv{±eᵢ}`.
    pub fn cross_polytope(n: usize) -> Self {
        let mut v = Vec::new();
        for i in 0..n {
            v.push(unit(n, i));
            v.push(unit(n, i).into_iter().map(|x| -x).collect());
        }
        LatticePolytope::new(v).expect("nonempty")
    }

    /// Unit cube `[0,1]ⁿ`.
    pub fn cube(n: usize) -> Self {
        let v = (0..1u64 << n).map(|mask| (0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as i64).collect()).collect();
        LatticePolytope::new(v).expect("nonempty")
    }

    /// Reeve tetrahedron `conv{0, e₁, e₂, (1,1,v)}`.
    pub fn reeve(v: i64) -> Self {
        LatticePolytope::new(vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, v]]).expect("nonempty")
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn is_simplex(&self) -> bool {
        self.vertices.len() == self.dim() + 1
    }

    /// Facet inequalities `normal·u ≤ offset` in hull coordinates of `P`.
    pub fn facets(&self) -> &[(Vec<i64>, i64)] {
        &self.facets
    }

    pub fn hull_basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn hull_base(&self) -> &[i64] {
        &self.base
    }

    /// Hull coordinates of `x` relative to `mP`, or `None` if `x` is off the affine hull.
    pub fn hull_coords(&self, x: &[i64], m: i64) -> Option<Vec<Rat>> {
        if x.len() != self.n {
            return None;
        }
        let rel: Vec<i64> = x.iter().zip(&self.base).map(|(a, b)| a - m * b).collect();
        let y: Vec<Rat> = self.coord_cols.iter().map(|&c| rat(rel[c])).collect();
        let u = self.coord_inv.mul_vec(&y);
        for (j, &r) in rel.iter().enumerate() {
            let s = u.iter().zip(&self.basis).fold(Rat::zero(), |acc, (ui, b)| acc + ui * rat(b[j]));
            if s != rat(r) {
                return None;
            }
        }
        Some(u)
    }

    fn from_hull(&self, u: &[i64], m: i64) -> Vec<i64> {
        let mut x: Vec<i64> = self.base.iter().map(|b| m * b).collect();
        for (ui, b) in u.iter().zip(&self.basis) {
            for (xj, bj) in x.iter_mut().zip(b) {
                *xj += ui * bj;
            }
        }
        x
    }

    /// Membership of an integer point in `mP`; with `strict`, in its relative interior.
    pub fn contains_dilate(&self, x: &[i64], m: i64, strict: bool) -> bool {
        let Some(u) = self.hull_coords(x, m) else { return false };
        self.facets.iter().all(|(nrm, c)| {
            let lhs = nrm.iter().zip(&u).fold(Rat::zero(), |acc, (a, b)| acc + rat(*a) * b);
            let rhs = rat(m * c);
            if strict {
                lhs < rhs
            } else {
                lhs <= rhs
            }
        })
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.contains_dilate(x, 1, false)
    }

    fn enumerate(&self, m: usize, strict: bool) -> PointLocus {
        let mi = m as i64;
        let d = self.dim();
        if d == 0 {
            return PointLocus::new(self.n, vec![self.base.iter().map(|b| mi * b).collect()]);
        }
        let lo: Vec<i64> = (0..d).map(|i| mi * self.hull_vertices.iter().map(|u| u[i]).min().unwrap()).collect();
        let hi: Vec<i64> = (0..d).map(|i| mi * self.hull_vertices.iter().map(|u| u[i]).max().unwrap()).collect();
        let mut out = Vec::new();
        let mut u = lo.clone();
        'scan: loop {
            // solve the last coordinate's range directly from the facets
            let (mut a, mut b) = (lo[d - 1], hi[d - 1]);
            for (nrm, c) in &self.facets {
                let rest: i64 = (0..d - 1).map(|i| nrm[i] * u[i]).sum();
                let rhs = mi * c - rest - i64::from(strict);
                let k = nrm[d - 1];
                if k > 0 {
                    b = b.min(Integer::div_floor(&rhs, &k));
                } else if k < 0 {
                    a = a.max(Integer::div_ceil(&(-rhs), &(-k)));
                } else if rhs < 0 {
                    a = 1;
                    b = 0;
                }
            }
            for last in a..=b {
                u[d - 1] = last;
                out.push(self.from_hull(&u, mi));
            }
            let mut i = d - 1;
            loop {
                if i == 0 {
                    break 'scan;
                }
                i -= 1;
                if u[i] < hi[i] {
                    u[i] += 1;
                    for j in i + 1..d {
                        u[j] = lo[j];
                    }
                    break;
                }
            }
        }
        PointLocus::new(self.n, out)
    }

    /// `ℤⁿ ∩ mP`.
    pub fn lattice_points(&self, m: usize) -> PointLocus {
        self.enumerate(m, false)
    }

    /// `ℤⁿ ∩ relint(mP)`; empty for `m = 0`.
    pub fn interior_lattice_points(&self, m: usize) -> PointLocus {
        if m == 0 {
            return PointLocus::new(self.n, Vec::new());
        }
        self.enumerate(m, true)
    }

    pub fn dilate(&self, k: i64) -> Self {
        LatticePolytope::new(self.vertices.iter().map(|v| v.iter().map(|x| k * x).collect()).collect()).expect("nonempty")
    }

    pub fn product(&self, other: &LatticePolytope) -> Self {
        let mut v = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                v.push(a.iter().chain(b).copied().collect());
            }
        }
        LatticePolytope::new(v).expect("nonempty")
    }

    /// Free join: vertices `(1, v, 0)` and `(0, 0, w)`.
    pub fn join(&self, other: &LatticePolytope) -> Self {
        let (n, k) = (self.n, other.n);
        let mut v: Vec<Vec<i64>> = Vec::new();
        for a in &self.vertices {
            let mut p = vec![1];
            p.extend(a);
            p.extend(std::iter::repeat(0).take(k));
            v.push(p);
        }
        for b in &other.vertices {
            let mut p = vec![0];
            p.extend(std::iter::repeat(0).take(n));
            p.extend(b);
            v.push(p);
        }
        LatticePolytope::new(v).expect("nonempty")
    }

    /// Pyramid over `P`. When `P` lies in the hyperplane `Σx = 1` the apex is
    /// the origin of the same space, otherwise `P` is joined with a point.
    pub fn pyramid(&self) -> Self {
        if self.vertices.iter().all(|v| v.iter().sum::<i64>() == 1) {
            let mut v = self.vertices.clone();
            v.push(vec![0; self.n]);
            LatticePolytope::new(v).expect("nonempty")
        } else {
            self.join(&LatticePolytope::point(Vec::new()))
        }
    }

    /// Image under `x ↦ Ax + b`.
    pub fn affine_image(&self, a: &[Vec<i64>], b: &[i64]) -> Result<Self, PolytopeError> {
        if a.iter().any(|r| r.len() != self.n) || a.len() != b.len() {
            return Err(PolytopeError::DimensionMismatch("affine map does not fit the polytope".into()));
        }
        LatticePolytope::new(
            self.vertices
                .iter()
                .map(|v| a.iter().zip(b).map(|(row, bi)| intlin::dot(row, v) + bi).collect())
                .collect(),
        )
    }

    pub fn is_antiblocking(&self) -> bool {
        if self.vertices.iter().any(|v| v.iter().any(|&x| x < 0)) {
            return false;
        }
        self.vertices.iter().all(|v| {
            let support: Vec<usize> = (0..self.n).filter(|&i| v[i] != 0).collect();
            (0..1u64 << support.len()).all(|mask| {
                let mut z = v.clone();
                for (bit, &i) in support.iter().enumerate() {
                    if mask >> bit & 1 == 1 {
                        z[i] = 0;
                    }
                }
                self.contains(&z)
            })
        })
    }

    /// Integer decomposition check for the `m`-fold sum; on failure the
    /// lexicographically smallest point of `ℤⁿ∩mP` not reached.
    pub fn idp_check(&self, m: usize) -> (bool, Option<Vec<i64>>) {
        let one = self.lattice_points(1);
        let mut acc = PointLocus::new(self.n, vec![vec![0; self.n]]);
        for _ in 0..m {
            acc = minkowski(&acc, &one);
        }
        let target = self.lattice_points(m);
        let missing = target.points().iter().find(|p| !acc.contains(p)).cloned();
        (missing.is_none(), missing)
    }
}

/// Sumset of two loci of equal ambient dimension.
pub fn minkowski(a: &PointLocus, b: &PointLocus) -> PointLocus {
    assert_eq!(a.ambient_dim(), b.ambient_dim());
    let mut out = Vec::with_capacity(a.len() * b.len());
    for p in a.points() {
        for q in b.points() {
            out.push(p.iter().zip(q).map(|(x, y)| x + y).collect());
        }
    }
    PointLocus::new(a.ambient_dim(), out)
}

pub(crate) fn unit(n: usize, i: usize) -> Vec<i64> {
    (0..n).map(|j| (i == j) as i64).collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Facets of the full-dimensional hull of `pts ⊂ ℤ^d`, by trying every
/// hyperplane through `d` of the points.
fn brute_force_facets(pts: &[Vec<i64>], d: usize) -> Vec<(Vec<i64>, i64)> {
    if d == 0 {
        return Vec::new();
    }
    let mut out: BTreeSet<(Vec<i64>, i64)> = BTreeSet::new();
    for subset in combinations(pts.len(), d) {
        let p0 = &pts[subset[0]];
        let rows: Vec<Vec<i64>> =
            subset[1..].iter().map(|&j| pts[j].iter().zip(p0).map(|(a, b)| a - b).collect()).collect();
        let m = if rows.is_empty() { Mat::zeros(0, d) } else { Mat::from_i64(&rows) };
        let ns = nullspace(&m);
        if ns.len() != 1 {
            continue;
        }
        let nrm: Vec<i64> = crate::kernel::primitive_integer(&ns[0]).iter().map(|x| x.to_i64().unwrap()).collect();
        let c = intlin::dot(&nrm, p0);
        let vals: Vec<i64> = pts.iter().map(|p| intlin::dot(&nrm, p)).collect();
        if vals.iter().all(|&v| v <= c) {
            out.insert((nrm, c));
        } else if vals.iter().all(|&v| v >= c) {
            out.insert((nrm.iter().map(|x| -x).collect(), -c));
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(v: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::new(v.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn square_and_segment_facets() {
        let sq = LatticePolytope::cube(2);
        assert_eq!(sq.facets().len(), 4);
        let seg = LatticePolytope::segment(0, 2);
        assert_eq!(seg.facets(), &[(vec![-1], 0), (vec![1], 2)]);
        assert_eq!(seg.lattice_points(1).len(), 3);
    }

    #[test]
    fn cross_polytope_facets() {
        let c = LatticePolytope::cross_polytope(2);
        assert_eq!(c.facets().len(), 4);
        // full-dimensional hulls use the identity basis based at the first vertex
        assert_eq!(c.hull_basis(), &[vec![1, 0], vec![0, 1]]);
        for (nrm, off) in c.facets() {
            assert!(nrm.iter().all(|x| x.abs() == 1));
            assert_eq!(*off, 1 - intlin::dot(nrm, c.hull_base()));
        }
        assert_eq!(c.lattice_points(1).len(), 5);
    }

    #[test]
    fn triangle_points() {
        let p = poly(&[&[0, 0], &[1, 2], &[2, 1]]);
        assert_eq!(p.lattice_points(1).points(), &[vec![0, 0], vec![1, 1], vec![1, 2], vec![2, 1]]);
        let two = p.lattice_points(2);
        let expect = PointLocus::new(
            2,
            vec![
                vec![0, 0],
                vec![1, 1],
                vec![2, 1],
                vec![1, 2],
                vec![2, 2],
                vec![3, 2],
                vec![2, 3],
                vec![4, 2],
                vec![3, 3],
                vec![2, 4],
            ],
        );
        assert_eq!(two, expect);
        assert_eq!(p.lattice_points(0).points(), &[vec![0, 0]]);
    }

    #[test]
    fn interiors() {
        let seg = LatticePolytope::segment(0, 3);
        assert_eq!(seg.interior_lattice_points(2).points(), &[vec![1], vec![2], vec![3], vec![4], vec![5]]);
        let tri = poly(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert!(tri.interior_lattice_points(1).is_empty());
        assert_eq!(tri.interior_lattice_points(3).points(), &[vec![1, 1]]);
        let pt = LatticePolytope::point(vec![2, 3]);
        assert_eq!(pt.interior_lattice_points(2).points(), &[vec![4, 6]]);
    }

    #[test]
    fn lower_dimensional_simplex() {
        let d = LatticePolytope::standard_simplex(3);
        assert_eq!(d.dim(), 2);
        assert_eq!(d.lattice_points(2).len(), 6);
        assert_eq!(d.interior_lattice_points(3).points(), &[vec![1, 1, 1]]);
    }

    #[test]
    fn non_extreme_points_dropped() {
        let p = poly(&[&[0, 0], &[2, 0], &[1, 0], &[0, 2], &[1, 1], &[0, 0]]);
        assert_eq!(p.vertices(), &[vec![0, 0], vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn operations() {
        let j = LatticePolytope::segment(0, 1).join(&LatticePolytope::segment(0, 2));
        assert_eq!(j.lattice_points(1).len(), 5);
        let sq = LatticePolytope::segment(0, 1).product(&LatticePolytope::segment(0, 1));
        assert_eq!(sq.vertices(), LatticePolytope::cube(2).vertices());
        let pyr = LatticePolytope::standard_simplex(2).pyramid();
        assert_eq!(pyr.vertices(), &[vec![1, 0], vec![0, 1], vec![0, 0]]);
        let id = sq.affine_image(&[vec![1, 0], vec![0, 1]], &[0, 0]).unwrap();
        assert_eq!(id, sq);
        let moved = sq.affine_image(&[vec![1, 0], vec![0, 1]], &[5, 7]).unwrap();
        for m in 0..4 {
            assert_eq!(moved.lattice_points(m).len(), sq.lattice_points(m).len());
        }
    }

    #[test]
    fn antiblocking() {
        assert!(poly(&[&[0, 0], &[1, 0], &[0, 1]]).is_antiblocking());
        assert!(!poly(&[&[0, 0], &[1, 2], &[2, 1]]).is_antiblocking());
        assert!(!LatticePolytope::cross_polytope(2).is_antiblocking());
        assert!(!LatticePolytope::standard_simplex(2).is_antiblocking());
        assert!(LatticePolytope::cube(3).is_antiblocking());
    }

    #[test]
    fn idp() {
        let (ok, w) = LatticePolytope::reeve(2).idp_check(2);
        assert!(!ok);
        assert_eq!(w, Some(vec![1, 1, 1]));
        assert!(poly(&[&[0, 0], &[1, 2], &[3, 1]]).idp_check(2).0);
    }

    #[test]
    fn shifted_loci() {
        assert!(LatticePolytope::cube(2).lattice_points(3).is_shifted());
        assert!(!poly(&[&[0, 0], &[1, 2], &[2, 1]]).lattice_points(1).is_shifted());
    }
}
