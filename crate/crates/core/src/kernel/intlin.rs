//! Integer lattice helpers: Hermite-style column reduction, integer kernels
//! and saturation of sublattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("lattice coordinate exceeds i64")
}

/// Basis of the integer kernel `{x ∈ ℤⁿ : A x = 0}` of a `k × n` matrix.
///
/// Column operations bring `A` to column echelon form while tracking a
/// unimodular transform; the transform columns that end up with a zero
/// image span the kernel. The kernel is saturated by construction.
pub fn integer_kernel(a: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    let k = a.len();
    // column j = (A[:, j] ; e_j)
    let mut cols: Vec<Vec<BigInt>> = (0..n)
        .map(|j| {
            let mut c: Vec<BigInt> = a.iter().map(|row| BigInt::from(row[j])).collect();
            c.extend((0..n).map(|i| BigInt::from((i == j) as i64)));
            c
        })
        .collect();
    let mut piv = 0;
    for row in 0..k {
        loop {
            let nz: Vec<usize> = (piv..n).filter(|&j| !cols[j][row].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by(|&&x, &&y| cols[x][row].abs().cmp(&cols[y][row].abs())).unwrap();
            cols.swap(piv, best);
            if nz.len() == 1 {
                piv += 1;
                break;
            }
            let pivot_val = cols[piv][row].clone();
            for j in (piv + 1)..n {
                if cols[j][row].is_zero() {
                    continue;
                }
                let q = cols[j][row].div_floor(&pivot_val);
                let (left, right) = cols.split_at_mut(j);
                let pc = &left[piv];
                for (x, p) in right[0].iter_mut().zip(pc) {
                    *x -= &q * p;
                }
            }
        }
        if piv == n {
            break;
        }
    }
    cols[piv..].iter().map(|c| c[k..].iter().map(to_i64).collect()).collect()
}

/// Basis of the saturated lattice `ℤⁿ ∩ span_ℚ(vectors)`.
pub fn saturate(vectors: &[Vec<i64>], n: usize) -> Vec<Vec<i64>> {
    if vectors.iter().all(|v| v.iter().all(|&x| x == 0)) {
        return Vec::new();
    }
    let complement = integer_kernel(vectors, n);
    if complement.is_empty() {
        return (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    }
    integer_kernel(&complement, n)
}

pub fn gcd_vec(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Divide by the gcd so entries are coprime.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_vec(v);
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Determinant of a square integer matrix (Bareiss).
pub fn det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = 1i64;
    let mut prev = BigInt::from(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return BigInt::zero() };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for i in (c + 1)..n {
            for j in (c + 1)..n {
                a[i][j] = (&a[c][c] * &a[i][j] - &a[i][c] * &a[c][j]) / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    &a[n - 1][n - 1] * sign
}
