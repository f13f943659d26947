use super::{make_primitive, primitive_integer, Rat};
use num_bigint::BigInt;
use num_traits::Zero;

/// Incrementally maintained row space over ℚ.
///
/// Rows are stored as primitive integer vectors in forward echelon form
/// (each row's pivot is its first nonzero column, pivots distinct), so
/// membership is decided by fraction-free reduction.
#[derive(Clone, Debug)]
pub struct RowSpace {
    dim: usize,
    rows: Vec<Vec<BigInt>>,
    pivot_row: Vec<Option<usize>>,
}

impl RowSpace {
    pub fn new(dim: usize) -> Self {
        RowSpace { dim, rows: Vec::new(), pivot_row: vec![None; dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    /// Reduce `v` against the stored rows. Returns the remainder (zero iff
    /// `v` lies in the span) together with its first nonzero column.
    fn reduce(&self, mut v: Vec<BigInt>) -> (Vec<BigInt>, Option<usize>) {
        let mut c = 0;
        while c < self.dim {
            if v[c].is_zero() {
                c += 1;
                continue;
            }
            match self.pivot_row[c] {
                None => return (v, Some(c)),
                Some(r) => {
                    let row = &self.rows[r];
                    let a = row[c].clone();
                    let b = v[c].clone();
                    for j in c..self.dim {
                        if row[j].is_zero() {
                            if !v[j].is_zero() {
                                v[j] *= &a;
                            }
                        } else {
                            v[j] = &a * &v[j] - &b * &row[j];
                        }
                    }
                    make_primitive(&mut v[c..]);
                    c += 1;
                }
            }
        }
        (v, None)
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.dim);
        self.reduce(primitive_integer(v)).1.is_none()
    }

    pub fn contains_int(&self, v: &[BigInt]) -> bool {
        self.reduce(v.to_vec()).1.is_none()
    }

    /// Insert `v`; returns true if it enlarged the span.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        assert_eq!(v.len(), self.dim);
        self.insert_int(primitive_integer(v))
    }

    pub fn insert_int(&mut self, v: Vec<BigInt>) -> bool {
        if self.is_full() {
            return false;
        }
        let (mut rem, piv) = self.reduce(v);
        match piv {
            None => false,
            Some(c) => {
                make_primitive(&mut rem);
                self.pivot_row[c] = Some(self.rows.len());
                self.rows.push(rem);
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::rat;
    use super::*;

    #[test]
    fn span_membership() {
        let mut s = RowSpace::new(3);
        assert!(s.insert(&[rat(1), rat(1), rat(0)]));
        assert!(s.insert(&[rat(0), rat(1), rat(1)]));
        assert!(!s.insert(&[rat(1), rat(2), rat(1)]));
        assert!(s.contains(&[rat(2), rat(0), rat(-2)]));
        assert!(!s.contains(&[rat(0), rat(0), rat(1)]));
        assert_eq!(s.rank(), 2);
        assert!(s.insert(&[rat(0), rat(0), rat(5)]));
        assert!(s.is_full());
    }
}
