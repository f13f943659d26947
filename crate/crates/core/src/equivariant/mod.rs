//! Graded characters of harmonic spaces under finite subgroups of `GL_n(ℤ)`.
//!
//! An element `g` acts on `y`-polynomials by `f(y) ↦ f(gᵀy)`; since the
//! characters involved are real, traces do not depend on this choice versus
//! the contragredient one.

use crate::harmonics::{harmonic_basis, HarmonicBasis, HarmonicsError};
use crate::kernel::{QPoly, Rat};
use crate::par::Exec;
use crate::polytope::LatticePolytope;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum EquivariantError {
    #[error("element {0} is not a square integer matrix of size {1}")]
    BadMatrix(String, usize),
    #[error("element {0} is not invertible over the integers")]
    NotInvertible(String),
    #[error("element {0} does not preserve the polytope")]
    NotASymmetry(String),
    #[error("the elements are not closed under multiplication")]
    NotClosed,
    #[error("unknown element id {0}")]
    UnknownElement(String),
    #[error("malformed character table: {0}")]
    BadTable(String),
    #[error("multiplicity of {0} is not a nonnegative integer polynomial")]
    NonIntegral(String),
    #[error(transparent)]
    Harmonics(#[from] HarmonicsError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElement {
    pub id: String,
    pub matrix: Vec<Vec<i64>>,
}

impl GroupElement {
    pub fn new(id: impl Into<String>, matrix: Vec<Vec<i64>>) -> Self {
        GroupElement { id: id.into(), matrix }
    }

    pub fn identity(n: usize) -> Self {
        GroupElement::new("e", (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn apply(&self, z: &[i64]) -> Vec<i64> {
        self.matrix.iter().map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum()).collect()
    }

    fn check_shape(&self) -> Result<(), EquivariantError> {
        let n = self.dim();
        if n == 0 || self.matrix.iter().any(|r| r.len() != n) {
            return Err(EquivariantError::BadMatrix(self.id.clone(), n));
        }
        if !det(&self.matrix).abs().is_one() {
            return Err(EquivariantError::NotInvertible(self.id.clone()));
        }
        Ok(())
    }
}

fn det(a: &[Vec<i64>]) -> BigInt {
    // Bareiss
    let n = a.len();
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

/// A finite matrix group given by its full element list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub elements: Vec<GroupElement>,
}

impl Group {
    /// Validates shapes, unimodularity, distinct ids and closure.
    pub fn new(elements: Vec<GroupElement>) -> Result<Self, EquivariantError> {
        let Some(first) = elements.first() else {
            return Err(EquivariantError::NotClosed);
        };
        let n = first.dim();
        let mut ids = BTreeSet::new();
        for g in &elements {
            g.check_shape()?;
            if g.dim() != n {
                return Err(EquivariantError::BadMatrix(g.id.clone(), n));
            }
            if !ids.insert(g.id.clone()) {
                return Err(EquivariantError::BadTable(format!("duplicate id {}", g.id)));
            }
        }
        let mats: BTreeSet<&Vec<Vec<i64>>> = elements.iter().map(|g| &g.matrix).collect();
        for a in &elements {
            for b in &elements {
                if !mats.contains(&matmul(&a.matrix, &b.matrix)) {
                    return Err(EquivariantError::NotClosed);
                }
            }
        }
        Ok(Group { elements })
    }

    pub fn from_json(s: &str) -> Result<Self, EquivariantError> {
        #[derive(Deserialize)]
        struct Raw {
            elements: Vec<GroupElement>,
        }
        let raw: Raw = serde_json::from_str(s).map_err(|e| EquivariantError::BadTable(e.to_string()))?;
        Group::new(raw.elements)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn get(&self, id: &str) -> Result<&GroupElement, EquivariantError> {
        self.elements.iter().find(|g| g.id == id).ok_or_else(|| EquivariantError::UnknownElement(id.to_string()))
    }

    /// `{±1}` acting on `ℝⁿ` by scalars.
    pub fn negation(n: usize) -> Self {
        let neg = GroupElement::new("-1", GroupElement::identity(n).matrix.iter().map(|r| r.iter().map(|x| -x).collect()).collect());
        Group::new(vec![GroupElement::identity(n), neg]).expect("group")
    }

    /// `Sₙ` permuting coordinates; ids are one-line notation, e.g. `"213"`.
    pub fn symmetric(n: usize) -> Self {
        let mut out = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let id: String = perm.iter().map(|i| char::from_digit(*i as u32 + 1, 36).unwrap()).collect();
            let m = (0..n).map(|i| (0..n).map(|j| i64::from(perm[j] == i)).collect()).collect();
            out.push(GroupElement::new(id, m));
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Group::new(out).expect("group")
    }

    /// Diagonal sign changes `{±1}ⁿ`; ids are strings of `+`/`-`.
    pub fn signs(n: usize) -> Self {
        let out = (0..1u32 << n)
            .map(|mask| {
                let s: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
                let id: String = s.iter().map(|&x| if x < 0 { '-' } else { '+' }).collect();
                let m = (0..n).map(|i| (0..n).map(|j| if i == j { s[i] } else { 0 }).collect()).collect();
                GroupElement::new(id, m)
            })
            .collect();
        Group::new(out).expect("group")
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// `g` permutes the vertex set of `P`.
pub fn stabilizer_check(p: &LatticePolytope, g: &GroupElement) -> bool {
    if g.dim() != p.ambient_dim() || g.check_shape().is_err() {
        return false;
    }
    let verts: BTreeSet<&Vec<i64>> = p.vertices().iter().collect();
    p.vertices().iter().all(|v| verts.contains(&g.apply(v)))
}

/// Number of `g`-fixed points of `ℤⁿ ∩ mP`.
pub fn fixed_points(p: &LatticePolytope, g: &GroupElement, m: usize) -> usize {
    p.lattice_points(m).points().iter().filter(|z| &g.apply(z) == *z).count()
}

/// Trace of `g` on each graded piece of a harmonic basis.
fn trace_on(basis: &HarmonicBasis, g: &GroupElement) -> Result<QPoly, EquivariantError> {
    let mut coeffs = Vec::new();
    for piece in basis.by_degree() {
        let leads: Vec<_> = piece.iter().map(|b| b.leading_term().expect("nonzero").0.clone()).collect();
        let mut tr = Rat::zero();
        for (i, b) in piece.iter().enumerate() {
            let gb = b.linear_substitute(&g.matrix);
            // the basis is reduced, so coordinates are read off at the pivots
            let mut rest = gb.clone();
            for (j, bj) in piece.iter().enumerate() {
                let c = gb.coeff(&leads[j]);
                if j == i {
                    tr += &c;
                }
                if !c.is_zero() {
                    rest = rest.sub(&bj.scale(&c));
                }
            }
            if !rest.is_zero() {
                return Err(EquivariantError::NotASymmetry(g.id.clone()));
            }
        }
        if !tr.is_integer() {
            return Err(EquivariantError::NotASymmetry(g.id.clone()));
        }
        coeffs.push(tr.to_integer());
    }
    Ok(QPoly::new(coeffs))
}

/// `Σ_d tr(g | V_{ℤⁿ∩mP, d}) q^d`.
pub fn graded_character(p: &LatticePolytope, g: &GroupElement, m: usize) -> Result<QPoly, EquivariantError> {
    if !stabilizer_check(p, g) {
        return Err(EquivariantError::NotASymmetry(g.id.clone()));
    }
    trace_on(&harmonic_basis(&p.lattice_points(m))?, g)
}

/// Per-element truncated equivariant series: `per_element[id][m]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCharacter {
    pub per_element: BTreeMap<String, Vec<QPoly>>,
}

impl GradedCharacter {
    pub fn get(&self, id: &str) -> Option<&[QPoly]> {
        self.per_element.get(id).map(Vec::as_slice)
    }

    /// Values at `t^m`, ordered like `ids`.
    pub fn at(&self, m: usize, ids: &[&str]) -> Vec<QPoly> {
        ids.iter().map(|id| self.per_element[*id][m].clone()).collect()
    }
}

pub fn equivariant_series(p: &LatticePolytope, elements: &[GroupElement], t: usize) -> Result<GradedCharacter, EquivariantError> {
    equivariant_series_with(p, elements, t, Exec::default())
}

pub fn equivariant_series_with(
    p: &LatticePolytope,
    elements: &[GroupElement],
    t: usize,
    exec: Exec,
) -> Result<GradedCharacter, EquivariantError> {
    if let Some(g) = elements.iter().find(|g| !stabilizer_check(p, g)) {
        return Err(EquivariantError::NotASymmetry(g.id.clone()));
    }
    let rows: Vec<Result<Vec<QPoly>, EquivariantError>> = exec.map_range(t + 1, |m| {
        let b = harmonic_basis(&p.lattice_points(m))?;
        elements.iter().map(|g| trace_on(&b, g)).collect()
    });
    let mut per_element: BTreeMap<String, Vec<QPoly>> = elements.iter().map(|g| (g.id.clone(), Vec::new())).collect();
    for row in rows {
        for (g, v) in elements.iter().zip(row?) {
            per_element.get_mut(&g.id).unwrap().push(v);
        }
    }
    Ok(GradedCharacter { per_element })
}

/// Real character table: one column per conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterTable {
    /// Class representative ids.
    pub classes: Vec<String>,
    #[serde(rename = "classSizes")]
    pub class_sizes: Vec<usize>,
    pub irreducibles: Vec<Irreducible>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Irreducible {
    pub name: String,
    pub values: Vec<i64>,
}

impl CharacterTable {
    pub fn new(classes: Vec<String>, class_sizes: Vec<usize>, irreducibles: Vec<Irreducible>) -> Result<Self, EquivariantError> {
        let t = CharacterTable { classes, class_sizes, irreducibles };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), EquivariantError> {
        let k = self.classes.len();
        if self.class_sizes.len() != k || self.irreducibles.len() != k {
            return Err(EquivariantError::BadTable("table is not square".into()));
        }
        if let Some(r) = self.irreducibles.iter().find(|r| r.values.len() != k) {
            return Err(EquivariantError::BadTable(format!("row {} has wrong length", r.name)));
        }
        let order: i64 = self.class_sizes.iter().sum::<usize>() as i64;
        for (i, a) in self.irreducibles.iter().enumerate() {
            for (j, b) in self.irreducibles.iter().enumerate() {
                let s: i64 = (0..k).map(|c| self.class_sizes[c] as i64 * a.values[c] * b.values[c]).sum();
                if s != if i == j { order } else { 0 } {
                    return Err(EquivariantError::BadTable(format!("rows {} and {} are not orthonormal", a.name, b.name)));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self, EquivariantError> {
        let t: CharacterTable = serde_json::from_str(s).map_err(|e| EquivariantError::BadTable(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn order(&self) -> usize {
        self.class_sizes.iter().sum()
    }

    pub fn trivial() -> Self {
        CharacterTable::new(vec!["e".into()], vec![1], vec![irr("trivial", &[1])]).unwrap()
    }

    /// `ℤ/2 = {e, s}`; reps `"e"` and `s`.
    pub fn z2(s: &str) -> Self {
        CharacterTable::new(vec!["e".into(), s.into()], vec![1, 1], vec![irr("trivial", &[1, 1]), irr("sign", &[1, -1])])
            .unwrap()
    }

    /// `S₂` with the ids of [`Group::symmetric`].
    pub fn s2() -> Self {
        let mut t = CharacterTable::z2("21");
        t.classes[0] = "12".into();
        t
    }

    /// `S₃` with the ids of [`Group::symmetric`].
    pub fn s3() -> Self {
        CharacterTable::new(
            vec!["123".into(), "213".into(), "231".into()],
            vec![1, 3, 2],
            vec![irr("trivial", &[1, 1, 1]), irr("sign", &[1, -1, 1]), irr("standard", &[2, 0, -1])],
        )
        .unwrap()
    }
}

fn irr(name: &str, v: &[i64]) -> Irreducible {
    Irreducible { name: name.into(), values: v.to_vec() }
}

/// Multiplicity of each irreducible in a graded class function given by its
/// values at the class representatives.
pub fn decompose(values: &[QPoly], table: &CharacterTable) -> Result<Vec<QPoly>, EquivariantError> {
    if values.len() != table.classes.len() {
        return Err(EquivariantError::BadTable("one value per class expected".into()));
    }
    let order = BigInt::from(table.order());
    let mut out = Vec::with_capacity(table.irreducibles.len());
    for chi in &table.irreducibles {
        let mut acc = QPoly::zero();
        for (c, v) in values.iter().enumerate() {
            acc = &acc + &v.scale(&BigInt::from(table.class_sizes[c] as i64 * chi.values[c]));
        }
        let mut coeffs = Vec::new();
        for c in acc.coeffs() {
            let (q, r) = c.div_rem(&order);
            if !r.is_zero() || q.is_negative() {
                return Err(EquivariantError::NonIntegral(chi.name.clone()));
            }
            coeffs.push(q);
        }
        out.push(QPoly::new(coeffs));
    }
    Ok(out)
}

/// Graded character restricted to the class representatives of `table`.
pub fn class_values(ch: &GradedCharacter, table: &CharacterTable, m: usize) -> Result<Vec<QPoly>, EquivariantError> {
    table
        .classes
        .iter()
        .map(|id| {
            ch.get(id).and_then(|s| s.get(m)).cloned().ok_or_else(|| EquivariantError::UnknownElement(id.clone()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qehrhart::iq;

    fn triangle() -> LatticePolytope {
        LatticePolytope::new(vec![vec![0, 0], vec![2, 1], vec![1, 2]]).unwrap()
    }

    fn swap() -> GroupElement {
        GroupElement::new("s", vec![vec![0, 1], vec![1, 0]])
    }

    #[test]
    fn stabilizers() {
        assert!(stabilizer_check(&triangle(), &swap()));
        assert!(stabilizer_check(&LatticePolytope::segment(-2, 4), &Group::negation(1).elements[1]));
        let t = LatticePolytope::new(vec![vec![0, 0], vec![1, 0], vec![0, 2]]).unwrap();
        assert!(!stabilizer_check(&t, &swap()));
        assert!(!stabilizer_check(&triangle(), &GroupElement::new("x", vec![vec![2, 0], vec![0, 1]])));
    }

    #[test]
    fn characters() {
        let seg = LatticePolytope::segment(-1, 2);
        let neg = &Group::negation(1).elements[1];
        assert_eq!(graded_character(&seg, neg, 1).unwrap(), QPoly::from_i64(&[1, -1, 1]));
        assert_eq!(graded_character(&triangle(), &swap(), 1).unwrap(), QPoly::from_i64(&[1, 0, 1]));
        for m in 0..4 {
            let id = GroupElement::identity(2);
            assert_eq!(graded_character(&triangle(), &id, m).unwrap(), iq(&triangle(), m));
            let c = graded_character(&triangle(), &swap(), m).unwrap();
            assert_eq!(c.eval_one(), BigInt::from(fixed_points(&triangle(), &swap(), m)));
        }
        let t = LatticePolytope::new(vec![vec![0, 0], vec![1, 0], vec![0, 2]]).unwrap();
        assert!(matches!(graded_character(&t, &swap(), 1), Err(EquivariantError::NotASymmetry(_))));
    }

    #[test]
    fn segment_series() {
        // (1 + t(q²[b−1]_{q²} + q[b]_{q²}ε)) / ((1−t)(1−tq^{2b})) with b = 2
        let seg = LatticePolytope::segment(-2, 4);
        let g = Group::negation(1);
        let ch = equivariant_series(&seg, &g.elements, 3).unwrap();
        let num_triv = QPoly::from_i64(&[0, 1, 1, 1]);
        let num_sign = QPoly::from_i64(&[0, -1, 1, -1]);
        for (id, n1) in [("e", num_triv), ("-1", num_sign)] {
            let mut want = vec![QPoly::one()];
            // multiply out 1/((1−t)(1−q⁴t)) against 1 + n1·t
            for m in 1..=3 {
                let mut c = QPoly::zero();
                for j in 0..=m {
                    c = &c + &QPoly::monomial(1, 4 * j);
                }
                let mut prev = QPoly::zero();
                for j in 0..m {
                    prev = &prev + &QPoly::monomial(1, 4 * j);
                }
                want.push(&c + &(&n1 * &prev));
            }
            assert_eq!(ch.get(id).unwrap(), want.as_slice(), "{id}");
        }
    }

    #[test]
    fn sign_group_on_cross_polytope() {
        let p = LatticePolytope::cross_polytope(2);
        let g = Group::signs(2);
        let ch = equivariant_series(&p, &g.elements, 3).unwrap();
        for el in &g.elements {
            for m in 0..=3 {
                assert_eq!(ch.get(&el.id).unwrap()[m].eval_one(), BigInt::from(fixed_points(&p, el, m)));
            }
        }
        // conjugate elements agree
        assert_eq!(ch.get("+-"), ch.get("-+"));
    }

    #[test]
    fn decompositions() {
        let seg = LatticePolytope::segment(-1, 2);
        let g = Group::negation(1);
        let ch = equivariant_series(&seg, &g.elements, 1).unwrap();
        let t = CharacterTable::z2("-1");
        let mult = decompose(&class_values(&ch, &t, 1).unwrap(), &t).unwrap();
        assert_eq!(mult, vec![QPoly::from_i64(&[1, 0, 1]), QPoly::from_i64(&[0, 1])]);

        let one = decompose(&[QPoly::from_i64(&[3, 1])], &CharacterTable::trivial()).unwrap();
        assert_eq!(one, vec![QPoly::from_i64(&[3, 1])]);

        let p = triangle();
        let grp = Group::new(vec![GroupElement::identity(2), swap()]).unwrap();
        let ch = equivariant_series(&p, &grp.elements, 3).unwrap();
        let t = CharacterTable::z2("s");
        let mult = decompose(&class_values(&ch, &t, 3).unwrap(), &t).unwrap();
        assert_eq!(&mult[0] + &mult[1], iq(&p, 3));

        assert!(matches!(decompose(&[QPoly::one(), QPoly::zero()], &t), Err(EquivariantError::NonIntegral(_))));
    }

    #[test]
    fn s3_on_simplex() {
        let p = LatticePolytope::standard_simplex(3);
        let g = Group::symmetric(3);
        assert_eq!(g.order(), 6);
        let ch = equivariant_series(&p, &g.elements, 3).unwrap();
        let t = CharacterTable::s3();
        for m in 0..=3 {
            let vals = class_values(&ch, &t, m).unwrap();
            let mult = decompose(&vals, &t).unwrap();
            // re-sum at the identity
            let dim = &(&mult[0] + &mult[1]) + &mult[2].scale(&BigInt::from(2));
            assert_eq!(dim, vals[0]);
        }
        assert_eq!(ch.get("213"), ch.get("132"));
    }

    #[test]
    fn json_round_trips() {
        let g = Group::symmetric(2);
        assert_eq!(Group::from_json(&g.to_json()).unwrap(), g);
        let t = CharacterTable::s3();
        assert_eq!(CharacterTable::from_json(&t.to_json()).unwrap(), t);
        let bad = r#"{"classes":["e","s"],"classSizes":[1,1],"irreducibles":[{"name":"a","values":[1,1]},{"name":"b","values":[1,1]}]}"#;
        assert!(CharacterTable::from_json(bad).is_err());
        let open = r#"{"elements":[{"id":"e","matrix":[[1,0],[0,1]]},{"id":"r","matrix":[[0,-1],[1,0]]}]}"#;
        assert_eq!(Group::from_json(open), Err(EquivariantError::NotClosed));
        assert_eq!(det(&[vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]), BigInt::one());
    }
}
