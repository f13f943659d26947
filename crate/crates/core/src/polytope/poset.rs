use super::LatticePolytope;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("cover ({0}, {1}) references an element outside 0..n")]
    OutOfRange(usize, usize),
    #[error("cover relation has a cycle")]
    Cyclic,
    #[error("cover ({0}, {1}) is implied by transitivity")]
    NotReduced(usize, usize),
    #[error("point is not in any dilate of the order polytope")]
    NotInOrderPolytope,
}

/// Finite poset on `0..n` given by its cover relation `p ⋖ p′`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    covers: Vec<(usize, usize)>,
    /// `less[p][p′]` iff `p ≺ p′`
    less: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub n: usize,
    pub covers: Vec<[usize; 2]>,
}

fn closure(n: usize, covers: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut less = vec![vec![false; n]; n];
    for &(a, b) in covers {
        less[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if less[i][k] {
                for j in 0..n {
                    if less[k][j] {
                        less[i][j] = true;
                    }
                }
            }
        }
    }
    less
}

impl Poset {
    pub fn new(n: usize, covers: Vec<(usize, usize)>) -> Result<Self, PosetError> {
        if let Some(&(a, b)) = covers.iter().find(|&&(a, b)| a >= n || b >= n) {
            return Err(PosetError::OutOfRange(a, b));
        }
        let less = closure(n, &covers);
        if (0..n).any(|i| less[i][i]) {
            return Err(PosetError::Cyclic);
        }
        for &(a, b) in &covers {
            if (0..n).any(|k| less[a][k] && less[k][b]) {
                return Err(PosetError::NotReduced(a, b));
            }
        }
        let mut seen = BTreeSet::new();
        let covers = covers.into_iter().filter(|c| seen.insert(*c)).collect();
        Ok(Poset { n, covers, less })
    }

    pub fn chain(n: usize) -> Self {
        Poset::new(n, (1..n).map(|i| (i - 1, i)).collect()).expect("chain")
    }

    pub fn antichain(n: usize) -> Self {
        Poset::new(n, Vec::new()).expect("antichain")
    }

    pub fn from_json(j: &PosetJson) -> Result<Self, PosetError> {
        Poset::new(j.n, j.covers.iter().map(|c| (c[0], c[1])).collect())
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson { n: self.n, covers: self.covers.iter().map(|&(a, b)| [a, b]).collect() }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    fn zero_one_points(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let n = self.n;
        (0..1u64 << n).map(move |mask| (0..n).map(|i| ((mask >> i) & 1) as i64).collect())
    }

    /// `O_𝒫 = {0 ≤ g ≤ 1, g(p) ≤ g(p′) for p ≺ p′}`; vertices are filter indicators.
    pub fn order_polytope(&self) -> LatticePolytope {
        let pts = self.zero_one_points().filter(|g| self.covers.iter().all(|&(a, b)| g[a] <= g[b])).collect();
        LatticePolytope::new(pts).expect("order polytope contains 0")
    }

    /// `C_𝒫 = {f ≥ 0, Σ_chain f ≤ 1}`; vertices are antichain indicators.
    pub fn chain_polytope(&self) -> LatticePolytope {
        let pts = self
            .zero_one_points()
            .filter(|f| (0..self.n).all(|a| (0..self.n).all(|b| !(self.less[a][b] && f[a] == 1 && f[b] == 1))))
            .collect();
        LatticePolytope::new(pts).expect("chain polytope contains 0")
    }

    /// `φg(p) = g(p) − max_{p′ ⋖ p} g(p′)` (the max over no covers is 0).
    pub fn stanley_transfer(&self, g: &[i64]) -> Result<Vec<i64>, PosetError> {
        if g.len() != self.n || g.iter().any(|&x| x < 0) || self.covers.iter().any(|&(a, b)| g[a] > g[b]) {
            return Err(PosetError::NotInOrderPolytope);
        }
        Ok((0..self.n)
            .map(|p| {
                let below = self.covers.iter().filter(|&&(_, b)| b == p).map(|&(a, _)| g[a]).max().unwrap_or(0);
                g[p] - below
            })
            .collect())
    }

    /// Relation bitmask under a relabelling, used for isomorphism classes.
    fn relabelled_mask(&self, perm: &[usize]) -> u64 {
        let mut mask = 0u64;
        for a in 0..self.n {
            for b in 0..self.n {
                if self.less[a][b] {
                    mask |= 1 << (perm[a] * self.n + perm[b]);
                }
            }
        }
        mask
    }

    fn canonical_mask(&self) -> u64 {
        permutations(self.n).iter().map(|p| self.relabelled_mask(p)).min().unwrap_or(0)
    }
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// One representative per isomorphism class of posets on `n` elements.
pub fn all_posets_up_to_iso(n: usize) -> Vec<Poset> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0..1u64 << pairs.len() {
        let rel: Vec<(usize, usize)> = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        let less = closure(n, &rel);
        // only strict orders that are already transitively closed
        if (0..n).any(|i| less[i][i]) || less.iter().flatten().filter(|&&x| x).count() != rel.len() {
            continue;
        }
        let covers: Vec<(usize, usize)> =
            rel.iter().copied().filter(|&(a, b)| !(0..n).any(|k| less[a][k] && less[k][b])).collect();
        let p = Poset::new(n, covers).expect("valid reduction");
        if seen.insert(p.canonical_mask()) {
            out.push(p);
        }
    }
    out
}

/// The 5-element X-shaped poset: two minima below a centre below two maxima.
pub fn x_poset() -> Poset {
    Poset::new(5, vec![(0, 2), (1, 2), (2, 3), (2, 4)]).expect("X poset")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(Poset::new(2, vec![(0, 1), (1, 0)]), Err(PosetError::Cyclic));
        assert_eq!(Poset::new(3, vec![(0, 1), (1, 2), (0, 2)]), Err(PosetError::NotReduced(0, 2)));
        assert!(Poset::new(2, vec![(0, 3)]).is_err());
    }

    #[test]
    fn chain_of_two() {
        let c = Poset::chain(2);
        let mut cv = c.chain_polytope().vertices().to_vec();
        cv.sort();
        assert_eq!(cv, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        let mut ov = c.order_polytope().vertices().to_vec();
        ov.sort();
        assert_eq!(ov, vec![vec![0, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn antichain_is_cube() {
        let a = Poset::antichain(3);
        let mut o = a.order_polytope().vertices().to_vec();
        let mut c = a.chain_polytope().vertices().to_vec();
        o.sort();
        c.sort();
        assert_eq!(o.len(), 8);
        assert_eq!(o, c);
    }

    #[test]
    fn transfer_examples() {
        let c = Poset::chain(2);
        assert_eq!(c.stanley_transfer(&[1, 1]).unwrap(), vec![1, 0]);
        assert_eq!(c.stanley_transfer(&[0, 1]).unwrap(), vec![0, 1]);
        assert_eq!(c.stanley_transfer(&[1, 0]), Err(PosetError::NotInOrderPolytope));
    }

    #[test]
    fn transfer_bijection_chain_m2() {
        let c = Poset::chain(2);
        let o = c.order_polytope().lattice_points(2);
        let ch = c.chain_polytope().lattice_points(2);
        assert_eq!(o.len(), 6);
        let img: BTreeSet<Vec<i64>> = o.points().iter().map(|g| c.stanley_transfer(g).unwrap()).collect();
        assert_eq!(img.len(), 6);
        assert!(img.iter().all(|p| ch.contains(p)));
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=4).map(|n| all_posets_up_to_iso(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16]);
    }

    #[test]
    fn json_round_trip() {
        let x = x_poset();
        assert_eq!(Poset::from_json(&x.to_json()).unwrap(), x);
    }
}
