use super::{primitive_integer, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

/// Dense row-major matrix over ℚ.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    /// Build from row vectors. All rows must share a length; `cols` is used
    /// when there are no rows.
    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(cols, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            data.extend(row);
        }
        Mat { rows: r, cols: c, data }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        Mat::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| Rat::from_integer(BigInt::from(x))).collect()).collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Rat::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(super::fmt_rat).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Fraction-free forward elimination (Bareiss) on integer rows. Returns the
/// echelon rows (only the first `pivots.len()` are nonzero) and the pivot
/// columns.
fn bareiss(mut rows: Vec<Vec<BigInt>>, cols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let n = rows.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let prow = &head[r];
        for row in tail.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            for j in (c + 1)..cols {
                let v = &prow[c] * &row[j] - &f * &prow[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (rows, pivots)
}

/// Reduced row-echelon form and pivot columns.
pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    let int_rows: Vec<Vec<BigInt>> = (0..m.rows).map(|i| primitive_integer(m.row(i))).collect();
    let (int_rows, pivots) = bareiss(int_rows, m.cols);
    let rank = pivots.len();
    let mut rows: Vec<Vec<Rat>> = int_rows
        .into_iter()
        .take(rank)
        .map(|r| r.into_iter().map(Rat::from_integer).collect())
        .collect();
    // exact division back to pivots of 1, then clear above
    for (i, &c) in pivots.iter().enumerate().rev() {
        let p = rows[i][c].clone();
        for x in rows[i].iter_mut() {
            *x /= &p;
        }
        for k in 0..i {
            let f = rows[k][c].clone();
            if f.is_zero() {
                continue;
            }
            for j in c..m.cols {
                let d = &f * &rows[i][j];
                rows[k][j] -= d;
            }
        }
    }
    rows.resize(m.rows, vec![Rat::zero(); m.cols]);
    (Mat::from_rows(rows, m.cols), pivots)
}

pub fn rank(m: &Mat) -> usize {
    let int_rows: Vec<Vec<BigInt>> = (0..m.rows).map(|i| primitive_integer(m.row(i))).collect();
    bareiss(int_rows, m.cols).1.len()
}

/// Basis of the right nullspace `{v : M v = 0}`, one vector per free column.
pub fn nullspace(m: &Mat) -> Vec<Vec<Rat>> {
    let (e, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rat::zero(); m.cols];
        v[free] = Rat::one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = -e.get(i, free).clone();
        }
        basis.push(v);
    }
    basis
}

/// One solution of `M x = b`, or `None` if inconsistent.
pub fn solve(m: &Mat, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(b.len(), m.rows);
    let aug = Mat::from_rows(
        (0..m.rows)
            .map(|i| {
                let mut r = m.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect(),
        m.cols + 1,
    );
    let (e, pivots) = rref(&aug);
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); m.cols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = e.get(i, m.cols).clone();
    }
    Some(x)
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(m: &Mat) -> Option<Mat> {
    assert_eq!(m.rows, m.cols, "inverse of a non-square matrix");
    let n = m.rows;
    let aug = Mat::from_rows(
        (0..n)
            .map(|i| {
                let mut r = m.row(i).to_vec();
                r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
                r
            })
            .collect(),
        2 * n,
    );
    let (e, pivots) = rref(&aug);
    if pivots.len() < n || pivots[..n].iter().copied().ne(0..n) {
        return None;
    }
    Some(Mat::from_rows((0..n).map(|i| e.row(i)[n..].to_vec()).collect(), n))
}
