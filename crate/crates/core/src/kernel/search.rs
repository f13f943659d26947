use super::{BiPoly, KernelError, RatFun2, TQSeries};
use crate::par::Exec;
use num_traits::ToPrimitive;

/// Bound on the numerator's t-degree during a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TDegBound {
    Absolute(usize),
    /// `Σ b_i + slack` for the candidate denominator.
    OverDenominator(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub b_max: u32,
    pub a_max: u32,
    pub nu_max: usize,
    pub t_deg: TDegBound,
}

impl SearchBounds {
    pub fn new(b_max: u32, a_max: u32, nu_max: usize, t_deg_max: usize) -> Self {
        SearchBounds { b_max, a_max, nu_max, t_deg: TDegBound::Absolute(t_deg_max) }
    }
}

/// Fit a numerator over the given denominator: multiply `S` by every factor and
/// require all t-coefficients above `t_deg_max` to vanish through `t^T`.
pub fn fit_numerator(s: &TQSeries, den: &[(u32, u32)], t_deg_max: usize) -> Result<Option<BiPoly>, KernelError> {
    let sum_b: usize = den.iter().map(|&(b, _)| b as usize).sum();
    let need = t_deg_max + sum_b + 2;
    if s.order() < need {
        return Err(KernelError::InsufficientTruncation { have: s.order(), need });
    }
    let mut p = s.clone();
    for &(b, a) in den {
        if b == 0 {
            return Err(KernelError::BadFactor { b, a });
        }
        p = p.mul_factor(b as usize, a as usize);
    }
    if p.coeffs()[t_deg_max + 1..].iter().any(|c| !c.is_zero()) {
        return Ok(None);
    }
    Ok(Some(BiPoly::from_t_coeffs(&p.coeffs()[..=t_deg_max])))
}

/// Dense i64 image of a series for the inner search loop.
struct Dense {
    t: usize,
    w: usize,
    data: Vec<i64>,
}

impl Dense {
    fn from_series(s: &TQSeries, w: usize) -> Option<Dense> {
        let t = s.order();
        let mut data = vec![0i64; (t + 1) * w];
        for (m, c) in s.coeffs().iter().enumerate() {
            for (k, x) in c.coeffs().iter().enumerate() {
                data[m * w + k] = x.to_i64()?;
            }
        }
        Some(Dense { t, w, data })
    }

    /// `self · (1 - q^a t^b)`; `None` on overflow or q-width exhaustion.
    fn times_factor(&self, b: usize, a: usize) -> Option<Dense> {
        let w = self.w;
        let mut data = self.data.clone();
        for m in b..=self.t {
            let src = (m - b) * w;
            let dst = m * w;
            for k in 0..w {
                let x = self.data[src + k];
                if x == 0 {
                    continue;
                }
                if k + a >= w {
                    return None;
                }
                data[dst + k + a] = data[dst + k + a].checked_sub(x)?;
            }
        }
        Some(Dense { t: self.t, w, data })
    }

    fn vanishes_above(&self, cap: usize) -> bool {
        self.data[(cap + 1) * self.w..].iter().all(|&x| x == 0)
    }
}

fn sort_key(den: &[(u32, u32)]) -> (usize, u32, Vec<(u32, u32)>) {
    (den.len(), den.iter().map(|&(b, a)| a + b).sum(), den.to_vec())
}

/// Enumerate denominators `∏(1 - q^a t^b)` with `1 ≤ b ≤ b_max`, `0 ≤ a ≤ a_max`
/// and at most `nu_max` factors, keeping those over which a numerator fits.
///
/// Results are sorted by number of factors, then total degree `Σ(a+b)`, then
/// lexicographically, and candidates equal as rational functions to an earlier
/// one are dropped.
pub fn denominator_search(s: &TQSeries, bounds: &SearchBounds) -> Vec<RatFun2> {
    denominator_search_with(s, bounds, Exec::default())
}

pub fn denominator_search_with(s: &TQSeries, bounds: &SearchBounds, exec: Exec) -> Vec<RatFun2> {
    let factors: Vec<(u32, u32)> =
        (1..=bounds.b_max).flat_map(|b| (0..=bounds.a_max).map(move |a| (b, a))).collect();
    let qdeg = s.coeffs().iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    let w = qdeg + bounds.nu_max * bounds.a_max as usize + 1;
    let order = s.order();

    let cap_for = |den: &[(u32, u32)]| -> Option<usize> {
        let sum_b: usize = den.iter().map(|&(b, _)| b as usize).sum();
        let want = match bounds.t_deg {
            TDegBound::Absolute(x) => x,
            TDegBound::OverDenominator(slack) => sum_b + slack,
        };
        let room = order.checked_sub(sum_b + 2)?;
        Some(want.min(room))
    };

    let dense = Dense::from_series(s, w);
    let hits: Vec<Vec<(u32, u32)>> = exec
        .map_range(factors.len(), |first| {
            let mut found = Vec::new();
            let mut stack = vec![factors[first]];
            match &dense {
                Some(d) => {
                    let (b, a) = factors[first];
                    if let Some(next) = d.times_factor(b as usize, a as usize) {
                        dfs_dense(s, &next, &factors, first, &mut stack, bounds.nu_max, &cap_for, &mut found);
                    } else {
                        dfs_exact(s, &factors, first, &mut stack, bounds.nu_max, &cap_for, &mut found);
                    }
                }
                None => dfs_exact(s, &factors, first, &mut stack, bounds.nu_max, &cap_for, &mut found),
            }
            found
        })
        .into_iter()
        .flatten()
        .collect();

    let mut cands: Vec<RatFun2> = hits
        .into_iter()
        .filter_map(|den| {
            let cap = cap_for(&den)?;
            let num = fit_numerator(s, &den, cap).ok()??;
            RatFun2::new(num, den).ok()
        })
        .collect();
    cands.sort_by_cached_key(|r| sort_key(r.den_factors()));

    let mut out: Vec<RatFun2> = Vec::new();
    for c in cands {
        if !out.iter().any(|o| o.equals(&c)) {
            out.push(c);
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn dfs_dense(
    s: &TQSeries,
    cur: &Dense,
    factors: &[(u32, u32)],
    idx: usize,
    stack: &mut Vec<(u32, u32)>,
    nu_max: usize,
    cap_for: &dyn Fn(&[(u32, u32)]) -> Option<usize>,
    found: &mut Vec<Vec<(u32, u32)>>,
) {
    // Σb only grows, so once no room is left deeper nodes are hopeless too.
    let Some(cap) = cap_for(stack) else { return };
    if cur.vanishes_above(cap) {
        found.push(stack.clone());
    }
    if stack.len() == nu_max {
        return;
    }
    for j in idx..factors.len() {
        let (b, a) = factors[j];
        stack.push((b, a));
        if cap_for(stack).is_some() {
            match cur.times_factor(b as usize, a as usize) {
                Some(next) => dfs_dense(s, &next, factors, j, stack, nu_max, cap_for, found),
                None => dfs_exact(s, factors, j, stack, nu_max, cap_for, found),
            }
        }
        stack.pop();
    }
}

/// Fallback when coefficients do not fit in i64: test every multiset exactly.
fn dfs_exact(
    s: &TQSeries,
    factors: &[(u32, u32)],
    idx: usize,
    stack: &mut Vec<(u32, u32)>,
    nu_max: usize,
    cap_for: &dyn Fn(&[(u32, u32)]) -> Option<usize>,
    found: &mut Vec<Vec<(u32, u32)>>,
) {
    let Some(cap) = cap_for(stack) else { return };
    if matches!(fit_numerator(s, stack, cap), Ok(Some(_))) {
        found.push(stack.clone());
    }
    if stack.len() == nu_max {
        return;
    }
    for j in idx..factors.len() {
        stack.push(factors[j]);
        dfs_exact(s, factors, j, stack, nu_max, cap_for, found);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::QPoly;

    fn segment_series(v: usize, order: usize) -> TQSeries {
        TQSeries::from_coeffs((0..=order).map(|m| QPoly::q_int(m * v + 1)).collect())
    }

    #[test]
    fn fit_examples() {
        let s = segment_series(1, 12);
        assert_eq!(fit_numerator(&s, &[(1, 0), (1, 1)], 3).unwrap(), Some(BiPoly::one()));
        assert_eq!(fit_numerator(&s, &[(1, 0)], 3).unwrap(), None);
        assert!(matches!(
            fit_numerator(&s, &[(1, 0), (1, 1)], 10),
            Err(KernelError::InsufficientTruncation { .. })
        ));
    }

    #[test]
    fn round_trip() {
        let r = RatFun2::new(BiPoly::from_terms(&[(0, 0, 1), (1, 1, 2), (2, 2, 2), (3, 3, 1)]), vec![(1, 0), (1, 2), (2, 3)])
            .unwrap();
        let s = r.expand(10).unwrap();
        assert_eq!(fit_numerator(&s, r.den_factors(), 3).unwrap().as_ref(), Some(r.numerator()));
    }

    #[test]
    fn search_segment() {
        let s = segment_series(2, 10);
        let found = denominator_search(&s, &SearchBounds::new(2, 4, 3, 3));
        let best = &found[0];
        assert_eq!(best.den_factors(), &[(1, 0), (1, 2)]);
        assert_eq!(best.numerator(), &BiPoly::from_terms(&[(0, 0, 1), (1, 1, 1)]));
    }

    #[test]
    fn search_point() {
        let s = TQSeries::one(10).div_factor(1, 0).unwrap();
        let found = denominator_search(&s, &SearchBounds::new(1, 1, 2, 2));
        assert_eq!(found[0].den_factors(), &[(1, 0)]);
        assert_eq!(found[0].numerator(), &BiPoly::one());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let s = segment_series(3, 10);
        let b = SearchBounds::new(2, 4, 3, 3);
        assert_eq!(
            denominator_search_with(&s, &b, Exec::Sequential),
            denominator_search_with(&s, &b, Exec::Parallel)
        );
    }
}
