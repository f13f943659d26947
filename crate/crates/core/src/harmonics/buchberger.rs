//! Classical S-polynomial Buchberger over ℚ, graded lex. Exponential; only
//! meant as an independent check on small inputs.

use super::poly::{Monomial, MultiPoly};
use crate::kernel::Rat;

/// Full reduction of `f` modulo `gs`.
pub fn normal_form(f: &MultiPoly, gs: &[MultiPoly]) -> MultiPoly {
    let n = f.nvars();
    let mut p = f.clone();
    let mut r = MultiPoly::zero(n);
    while let Some((m, c)) = p.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
        let divisor = gs.iter().find_map(|g| {
            let (lm, lc) = g.leading_term()?;
            lm.divides(&m).then(|| (g, lm.quotient(&m), lc.clone()))
        });
        match divisor {
            Some((g, q, lc)) => p = p.sub(&g.mul_monomial(&q, &(c / lc))),
            None => {
                r.add_term(m.clone(), c.clone());
                p.add_term(m, -c);
            }
        }
    }
    r
}

fn s_poly(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fm, fc) = f.leading_term().expect("nonzero");
    let (gm, gc) = g.leading_term().expect("nonzero");
    let l = fm.lcm(gm);
    let one = Rat::from_integer(1.into());
    f.mul_monomial(&fm.quotient(&l), &(&one / fc)).sub(&g.mul_monomial(&gm.quotient(&l), &(&one / gc)))
}

/// Reduced Gröbner basis of the ideal generated by `gens`, sorted by leading monomial.
pub fn buchberger(gens: &[MultiPoly]) -> Vec<MultiPoly> {
    let mut g: Vec<MultiPoly> = gens.iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (li, lj) = (g[i].leading_term().unwrap().0, g[j].leading_term().unwrap().0);
        // coprime leading monomials reduce to zero
        if li.exps().iter().zip(lj.exps()).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let r = normal_form(&s_poly(&g[i], &g[j]), &g);
        if !r.is_zero() {
            let k = g.len();
            g.push(r);
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // minimal
    let lead = |p: &MultiPoly| p.leading_term().unwrap().0.clone();
    let mut min: Vec<MultiPoly> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let lp = lead(p);
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let lq = lead(q);
            j != i && lq.divides(&lp) && (lq != lp || j < i)
        });
        if !redundant {
            min.push(p.monic());
        }
    }
    // interreduce tails
    let mut out = Vec::with_capacity(min.len());
    for i in 0..min.len() {
        let others: Vec<MultiPoly> = min.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, q)| q.clone()).collect();
        let lm: Monomial = lead(&min[i]);
        let tail = min[i].sub(&MultiPoly::monomial(lm.clone(), Rat::from_integer(1.into())));
        let mut p = normal_form(&tail, &others);
        p.add_term(lm, Rat::from_integer(1.into()));
        out.push(p);
    }
    out.sort_by_key(lead);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twisted_pair() {
        // (x² − y, xy − 1): the classical textbook closure adds y² − x
        let f = MultiPoly::from_terms(2, &[(&[2, 0], 1), (&[0, 1], -1)]);
        let g = MultiPoly::from_terms(2, &[(&[1, 1], 1), (&[0, 0], -1)]);
        let gb = buchberger(&[f, g]);
        assert!(gb.contains(&MultiPoly::from_terms(2, &[(&[0, 2], 1), (&[1, 0], -1)])));
        for p in &gb {
            assert!(normal_form(p, &gb).is_zero());
        }
    }
}
