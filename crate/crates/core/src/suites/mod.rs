//! Built-in corpora with their published rational forms, and seeded property
//! suites over random loci, posets and symmetric polytopes.

use crate::equivariant::{equivariant_series_with, fixed_points, Group, GroupElement};
use crate::harmonics::{buchberger, buchberger_moeller, gr_ideal, monomials_of_degree, product_gens_oracle, standard_monomials};
use crate::harmonics::{closure_check, HarmonicsError};
use crate::halgebra::chain_order_equality;
use crate::kernel::{denominator_search_with, parse_ratfun, BiPoly, QPoly, RatFun2, SearchBounds, TDegBound, TQSeries};
use crate::modp::closure_check_modp;
use crate::par::Exec;
use crate::polytope::{all_posets_up_to_iso, x_poset, LatticePolytope, PointLocus};
use crate::qehrhart::{check_dilation, check_join, check_product, classical_check, series_e_with};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

const POLYGONS: &str = include_str!("../../data/polygons.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Corpus {
    Fig1,
    Fig2,
    Fig3,
    ClosedForms,
    ExtraData,
}

impl Corpus {
    pub const ALL: [Corpus; 5] = [Corpus::Fig1, Corpus::Fig2, Corpus::Fig3, Corpus::ClosedForms, Corpus::ExtraData];
}

impl fmt::Display for Corpus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Corpus::Fig1 => "fig1",
            Corpus::Fig2 => "fig2",
            Corpus::Fig3 => "fig3",
            Corpus::ClosedForms => "closedforms",
            Corpus::ExtraData => "extradata",
        })
    }
}

impl FromStr for Corpus {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Corpus::ALL.into_iter().find(|c| c.to_string() == s).ok_or_else(|| format!("unknown corpus {s}"))
    }
}

/// Where a stored form comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Printed and proven.
    PaperVerified,
    /// Printed as a guess; compared at truncation level only.
    PaperGuess,
    /// No form printed.
    PaperUnknown,
    /// The printed entries contradict each other (for example an h* that
    /// Pick's theorem rules out for the printed vertices). Checked and
    /// reported, never counted as a failure.
    PaperInconsistent,
}

#[derive(Deserialize)]
struct RawRow {
    corpus: Corpus,
    vertices: Vec<Vec<i64>>,
    hstar: Option<Vec<i64>>,
    num: Option<String>,
    den: Option<String>,
    provenance: Provenance,
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub name: String,
    pub polytope: LatticePolytope,
    pub expected: Option<RatFun2>,
    pub hstar: Option<Vec<i64>>,
    pub provenance: Provenance,
}

fn vertex_name(v: &[Vec<i64>]) -> String {
    v.iter()
        .map(|p| format!("({})", p.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(",")
}

fn stored_rows(c: Corpus) -> Vec<TableRow> {
    let raw: Vec<RawRow> = serde_json::from_str(POLYGONS).expect("embedded corpus");
    raw.into_iter()
        .filter(|r| r.corpus == c)
        .map(|r| {
            let expected = match (&r.num, &r.den) {
                (Some(n), Some(d)) => Some(parse_ratfun(n, d).expect("embedded form")),
                _ => None,
            };
            TableRow {
                name: vertex_name(&r.vertices),
                polytope: LatticePolytope::new(r.vertices).expect("embedded polytope"),
                expected,
                hstar: r.hstar,
                provenance: r.provenance,
            }
        })
        .collect()
}

/// `Σ_{w ∈ Sₙ} t^{des w} q^{maj w}` by brute force.
pub fn euler_mahonian(n: usize) -> BiPoly {
    let mut out = BiPoly::zero();
    let mut w: Vec<usize> = (0..n).collect();
    loop {
        let descents: Vec<usize> = (1..n).filter(|&i| w[i - 1] > w[i]).collect();
        out.add_term(descents.len() as i64, descents.iter().sum::<usize>() as i64, BigInt::from(1));
        let Some(i) = (1..n).rev().find(|&i| w[i - 1] < w[i]) else { break };
        let j = (i..n).rev().find(|&j| w[j] > w[i - 1]).unwrap();
        w.swap(i - 1, j);
        w[i..].reverse();
    }
    out
}

fn form(num: BiPoly, den: Vec<(u32, u32)>) -> RatFun2 {
    RatFun2::new(num, den).expect("valid form")
}

fn closed_form_rows() -> Vec<TableRow> {
    let mut rows = Vec::new();
    let mut push = |name: String, p: LatticePolytope, f: RatFun2| {
        rows.push(TableRow { name, polytope: p, expected: Some(f), hstar: None, provenance: Provenance::PaperVerified });
    };
    for v in 1..=6u32 {
        let mut num = BiPoly::one();
        for i in 1..v {
            num.add_term(1, i as i64, BigInt::from(1));
        }
        push(format!("segment v={v}"), LatticePolytope::segment(0, v as i64), form(num, vec![(1, 0), (1, v)]));
    }
    for n in 1..=4usize {
        let mut den = vec![(1, 0)];
        den.extend(std::iter::repeat_n((1, 1), n - 1));
        push(format!("simplex n={n}"), LatticePolytope::standard_simplex(n), form(BiPoly::one(), den.clone()));
        den.push((1, 1));
        push(format!("pyramid n={n}"), LatticePolytope::standard_simplex(n).pyramid(), form(BiPoly::one(), den));
    }
    for n in 1..=3usize {
        let mut num = BiPoly::one();
        let mut den = vec![(1, 0)];
        for _ in 0..n {
            num = num.mul(&BiPoly::from_terms(&[(0, 0, 1), (1, 1, 1)]));
            den.push((1, 2));
        }
        push(format!("cross-polytope n={n}"), LatticePolytope::cross_polytope(n), form(num, den));
    }
    for n in 1..=3usize {
        let den = (0..=n as u32).map(|i| (1, i)).collect();
        push(format!("cube n={n}"), LatticePolytope::cube(n), form(euler_mahonian(n), den));
    }
    push("Reeve v=1".into(), LatticePolytope::reeve(1), form(BiPoly::one(), vec![(1, 0), (1, 1), (1, 1), (1, 1)]));
    push(
        "Reeve v=2".into(),
        LatticePolytope::reeve(2),
        parse_ratfun("(1 + qt)(1 + q^2t^2)(1 + qt + q^2t^2)", "(1 - t)(1 - qt)(1 - q^3t^2)(1 - q^4 t^3)").unwrap(),
    );
    rows
}

pub fn table_rows(c: Corpus) -> Vec<TableRow> {
    match c {
        Corpus::ClosedForms => closed_form_rows(),
        _ => stored_rows(c),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Pass,
    Fail,
    /// A printed guess agrees with the computed truncation.
    TruncationConsistent,
    /// Nothing to compare against; truncation reported only.
    Computed,
    /// Source row is self-contradictory; `checks` shows how.
    SourceInconsistent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowOutcome {
    pub name: String,
    pub provenance: Provenance,
    pub status: RowStatus,
    /// Named sub-checks and their results.
    pub checks: Vec<(String, bool)>,
    /// Computed `i_P(m; q)` coefficient lists, `m = 0..=T`.
    pub series: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub corpus: Corpus,
    #[serde(rename = "T")]
    pub order: usize,
    #[serde(rename = "highDimT")]
    pub high_dim_order: usize,
    pub rows: Vec<RowOutcome>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status != RowStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RowOutcome> {
        self.rows.iter().filter(|r| r.status == RowStatus::Fail)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TableConfig {
    pub order: usize,
    /// Order used instead for polytopes of dimension three or more.
    pub high_dim_order: usize,
    /// Bounds for recovering printed forms; `None` skips the search.
    pub bounds: Option<SearchBounds>,
    pub exec: Exec,
}

impl TableConfig {
    /// `T = 10` (`T = 6` from dimension three on), search with `b ≤ 2`,
    /// `a ≤ 6`, `ν ≤ 4`.
    pub fn standard() -> Self {
        TableConfig {
            order: 10,
            high_dim_order: 6,
            bounds: Some(SearchBounds { b_max: 2, a_max: 6, nu_max: 4, t_deg: TDegBound::OverDenominator(4) }),
            exec: Exec::default(),
        }
    }
}

fn series_strings(s: &TQSeries) -> Vec<Vec<String>> {
    s.coeffs().iter().map(|c| c.coeffs().iter().map(BigInt::to_string).collect()).collect()
}

/// Some candidate equals `want`, as a rational function or (failing that)
/// by expansion to twice the order.
fn recovered(cands: &[RatFun2], want: &RatFun2, order: usize) -> bool {
    let Ok(w) = want.expand(2 * order) else { return false };
    cands.iter().any(|c| c.equals(want) || c.expand(2 * order).is_ok_and(|e| e == w))
}

fn trimmed(h: &[i64]) -> &[i64] {
    let end = h.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    &h[..end]
}

pub fn check_row(row: &TableRow, cfg: &TableConfig) -> RowOutcome {
    let order = if row.polytope.dim() >= 3 { cfg.order.min(cfg.high_dim_order) } else { cfg.order };
    let s = series_e_with(&row.polytope, order, cfg.exec);
    let mut checks = Vec::new();
    if let Some(want) = &row.expected {
        checks.push(("series".to_string(), want.expand(order).is_ok_and(|e| e == s)));
        if let (Some(b), Provenance::PaperVerified) = (&cfg.bounds, row.provenance) {
            if row.polytope.ambient_dim() == 2 {
                let cands = denominator_search_with(&s, b, cfg.exec);
                checks.push(("guess".to_string(), recovered(&cands, want, order)));
            }
        }
    }
    if let Some(h) = &row.hstar {
        let ok = classical_check(&row.polytope)
            .map(|(hs, rep)| rep.q1_agrees && trimmed(&hs.0) == h.as_slice())
            .unwrap_or(false);
        checks.push(("hstar".to_string(), ok));
    }
    let ok = checks.iter().all(|(_, b)| *b);
    let status = match (row.provenance, ok) {
        (Provenance::PaperInconsistent, _) => RowStatus::SourceInconsistent,
        (_, false) => RowStatus::Fail,
        (Provenance::PaperUnknown, true) => RowStatus::Computed,
        (Provenance::PaperGuess, true) => RowStatus::TruncationConsistent,
        (Provenance::PaperVerified, true) => RowStatus::Pass,
    };
    RowOutcome { name: row.name.clone(), provenance: row.provenance, status, checks, series: series_strings(&s) }
}

/// Compute and compare every row of a corpus, in corpus order.
pub fn run_table(c: Corpus, cfg: &TableConfig) -> TableReport {
    let rows = table_rows(c);
    // rows run one after another; each row fans out internally
    let outcomes = rows.iter().map(|r| check_row(r, cfg)).collect();
    TableReport { corpus: c, order: cfg.order, high_dim_order: cfg.high_dim_order.min(cfg.order), rows: outcomes }
}

/// Result of a property suite: how many trials ran and what failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub trials: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str, trials: usize, failures: Vec<Option<String>>) -> Self {
        SuiteReport { name: name.to_string(), trials, failures: failures.into_iter().flatten().collect() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(f, "{}: {} ({} trials, {} failures)", self.name, verdict, self.trials, self.failures.len())?;
        for x in &self.failures {
            write!(f, "\n  {x}")?;
        }
        Ok(())
    }
}

/// One rng per trial, derived from the suite seed, so results do not depend
/// on scheduling.
fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial as u64);
    r
}

/// Random nonempty locus of `1..=max_len` distinct points in `[lo, hi]ⁿ`.
pub fn random_locus(rng: &mut impl Rng, n: usize, max_len: usize, lo: i64, hi: i64) -> PointLocus {
    let len = rng.gen_range(1..=max_len);
    let pts = (0..len).map(|_| (0..n).map(|_| rng.gen_range(lo..=hi)).collect()).collect();
    PointLocus::new(n, pts)
}

/// `V_Z · V_{Z′} ⊆ V_{Z+Z′}` on random pairs in `ℤ²`, `|Z| ≤ 8`, coordinates in `[−3, 3]`.
pub fn closure_suite(trials: usize, seed: u64, exec: Exec) -> SuiteReport {
    let out = exec.map_range(trials, |i| {
        let mut rng = trial_rng(seed, i);
        let z = random_locus(&mut rng, 2, 8, -3, 3);
        let w = random_locus(&mut rng, 2, 8, -3, 3);
        match closure_check(&z, &w) {
            Ok(r) if r.holds => None,
            Ok(_) => Some(format!("trial {i}: Z={:?} Z'={:?}", z.points(), w.points())),
            Err(e) => Some(format!("trial {i}: {e}")),
        }
    });
    SuiteReport::new("closure", trials, out)
}

/// Closure in the divided power algebra on random pairs in `F_p²`, `|Z| ≤ 5`.
pub fn closure_modp_suite(trials: usize, primes: &[u64], seed: u64, exec: Exec) -> SuiteReport {
    let jobs: Vec<(u64, usize)> = primes.iter().flat_map(|&p| (0..trials).map(move |i| (p, i))).collect();
    let out = exec.map(&jobs, |&(p, i)| {
        let mut rng = trial_rng(seed ^ p, i);
        let max = 5.min((p * p) as usize);
        let z = random_locus(&mut rng, 2, max, 0, p as i64 - 1);
        let w = random_locus(&mut rng, 2, max, 0, p as i64 - 1);
        match closure_check_modp(&z, &w, p) {
            Ok(r) if r.holds => None,
            Ok(_) => Some(format!("p={p} trial {i}: Z={:?} Z'={:?}", z.points(), w.points())),
            Err(e) => Some(format!("p={p} trial {i}: {e}")),
        }
    });
    SuiteReport::new("closure-modp", jobs.len(), out)
}

fn oracle_one(z: &PointLocus) -> Result<Option<String>, HarmonicsError> {
    let bm = buchberger_moeller(z)?;
    let gr = gr_ideal(z)?;
    let hilb = standard_monomials(z)?;
    let lead = gr.leading_monomials();
    // standard monomials are exactly those not divisible by a leading monomial
    let from_leads: Vec<_> = (0..z.len() as u32)
        .flat_map(|d| monomials_of_degree(z.ambient_dim(), d))
        .filter(|m| !lead.iter().any(|l| l.divides(m)))
        .collect();
    if bm.standard_monomials() != hilb.as_slice() || from_leads != hilb {
        return Ok(Some("standard monomials disagree".into()));
    }
    if z.len() <= 5 {
        let gb = buchberger(&product_gens_oracle(z)?);
        if gb != bm.generators() {
            return Ok(Some("reduced Gröbner basis disagrees with the product-generator oracle".into()));
        }
    }
    Ok(None)
}

/// Standard monomials three ways, and the full reduced basis against
/// classical Buchberger for small loci.
pub fn oracle_suite(loci: &[PointLocus], exec: Exec) -> SuiteReport {
    let out = exec.map(loci, |z| match oracle_one(z) {
        Ok(None) => None,
        Ok(Some(msg)) => Some(format!("Z={:?}: {msg}", z.points())),
        Err(e) => Some(format!("Z={:?}: {e}", z.points())),
    });
    SuiteReport::new("oracle", loci.len(), out)
}

/// Seeded random loci for [`oracle_suite`]: `|Z| ≤ 12`, `n ≤ 2`, coordinates in `[−3, 3]`.
pub fn random_oracle_loci(count: usize, seed: u64) -> Vec<PointLocus> {
    (0..count)
        .map(|i| {
            let mut rng = trial_rng(seed, i);
            let n = rng.gen_range(1..=2);
            random_locus(&mut rng, n, 12, -3, 3)
        })
        .collect()
}

/// Dilation, product and join identities on a fixed family of small polytopes.
pub fn identities_suite(order: usize, exec: Exec) -> SuiteReport {
    let seg = |v| LatticePolytope::segment(0, v);
    let square = LatticePolytope::cube(2);
    let d1 = LatticePolytope::standard_simplex(2);
    let d2 = LatticePolytope::standard_simplex(3);
    let tri = LatticePolytope::new(vec![vec![0, 0], vec![2, 1], vec![1, 2]]).unwrap();
    let family = [("seg1", seg(1)), ("seg2", seg(2)), ("seg3", seg(3)), ("square", square), ("Δ1", d1), ("Δ2", d2), ("triangle", tri)];
    let mut jobs: Vec<(String, Box<dyn Fn() -> bool + Send + Sync>)> = Vec::new();
    for (name, p) in &family {
        for k in 1..=3 {
            let p = p.clone();
            jobs.push((format!("dilation {name} k={k}"), Box::new(move || check_dilation(&p, k, order))));
        }
    }
    let pairs = [(0, 1), (2, 4), (4, 5), (3, 1), (0, 6), (1, 1)];
    for &(i, j) in &pairs {
        let (p, q) = (family[i].1.clone(), family[j].1.clone());
        jobs.push((format!("product {}×{}", family[i].0, family[j].0), Box::new(move || check_product(&p, &q, order))));
    }
    let joins = [(0, 1), (4, 2), (0, 4), (3, 0), (0, 6)];
    for &(i, j) in &joins {
        let (p, q) = (family[i].1.clone(), family[j].1.clone());
        jobs.push((format!("join {}*{}", family[i].0, family[j].0), Box::new(move || check_join(&p, &q, order))));
    }
    let out = exec.map(&jobs, |(name, f)| (!f()).then(|| name.clone()));
    SuiteReport::new("identities", jobs.len(), out)
}

/// Chain and order polytopes have the same harmonic spaces: every poset on
/// `≤ max_n` elements up to isomorphism with horizon `big_m`, plus the
/// five-element X-poset with horizon `x_m`.
pub fn chain_order_suite(max_n: usize, big_m: usize, x_m: usize, exec: Exec) -> SuiteReport {
    let mut posets: Vec<(String, crate::polytope::Poset, usize)> = Vec::new();
    for n in 1..=max_n {
        for (k, p) in all_posets_up_to_iso(n).into_iter().enumerate() {
            posets.push((format!("n={n} #{k} covers={:?}", p.covers()), p, big_m));
        }
    }
    if x_m > 0 {
        posets.push(("X-poset".into(), x_poset(), x_m));
    }
    let out = exec.map(&posets, |(name, p, m)| match chain_order_equality(p, *m) {
        Ok(true) => None,
        Ok(false) => Some(format!("{name}: harmonic spaces differ")),
        Err(e) => Some(format!("{name}: {e}")),
    });
    SuiteReport::new("chainorder", posets.len(), out)
}

/// `Σ_{i<k} x^i`.
fn q_int_step(k: u32, step: usize) -> QPoly {
    let mut c = vec![0i64; step * k as usize + 1];
    for i in 0..k as usize {
        c[step * i] = 1;
    }
    QPoly::from_i64(&c)
}

/// Expand `(1 + n₁ t + n₂ t² + …)/∏(1 − q^a t^b)` to order `order`.
fn expand_num(num: &[QPoly], den: &[(u32, u32)], order: usize) -> Vec<QPoly> {
    let r = RatFun2::new(BiPoly::from_t_coeffs(num), den.to_vec()).expect("valid");
    r.expand(order).expect("b ≥ 1").coeffs().to_vec()
}

/// Graded characters of symmetric polytopes against closed forms and
/// fixed-point counts.
pub fn equivariant_suite(exec: Exec) -> SuiteReport {
    let mut failures = Vec::new();
    let mut trials = 0;
    for b in 1..=3u32 {
        let seg = LatticePolytope::segment(-(b as i64), 2 * b as i64);
        let g = Group::negation(1);
        let ch = match equivariant_series_with(&seg, &g.elements, 4, exec) {
            Ok(c) => c,
            Err(e) => {
                failures.push(Some(format!("segment b={b}: {e}")));
                continue;
            }
        };
        for (id, eps) in [("e", 1i64), ("-1", -1)] {
            trials += 1;
            // q²[b−1]_{q²} + ε·q[b]_{q²}
            let lin = &q_int_step(b - 1, 2).shift(2) + &q_int_step(b, 2).shift(1).scale(&BigInt::from(eps));
            let want = expand_num(&[QPoly::one(), lin], &[(1, 0), (1, 2 * b)], 4);
            if ch.get(id) != Some(want.as_slice()) {
                failures.push(Some(format!("segment b={b}, element {id}")));
            }
        }
        for el in &g.elements {
            for m in 0..=4 {
                trials += 1;
                if ch.get(&el.id).unwrap()[m].eval_one() != BigInt::from(fixed_points(&seg, el, m)) {
                    failures.push(Some(format!("segment b={b}, element {}, m={m}: fixed points", el.id)));
                }
            }
        }
    }
    let tri = LatticePolytope::new(vec![vec![0, 0], vec![2, 1], vec![1, 2]]).unwrap();
    let swap = GroupElement::new("s", vec![vec![0, 1], vec![1, 0]]);
    let elements = [GroupElement::identity(2), swap];
    match equivariant_series_with(&tri, &elements, 3, exec) {
        Ok(ch) => {
            for (id, eps) in [("e", 1i64), ("s", -1)] {
                trials += 1;
                let c = 1 + eps;
                let num = [
                    QPoly::one(),
                    QPoly::from_i64(&[0, c]),
                    QPoly::from_i64(&[0, 0, c]),
                    QPoly::from_i64(&[0, 0, 0, eps]),
                ];
                let want = expand_num(&num, &[(1, 0), (1, 2), (2, 3)], 3);
                if ch.get(id) != Some(want.as_slice()) {
                    failures.push(Some(format!("triangle, element {id}")));
                }
                for m in 0..=3 {
                    trials += 1;
                    let el = elements.iter().find(|g| g.id == id).unwrap();
                    if ch.get(id).unwrap()[m].eval_one() != BigInt::from(fixed_points(&tri, el, m)) {
                        failures.push(Some(format!("triangle, element {id}, m={m}: fixed points")));
                    }
                }
            }
        }
        Err(e) => failures.push(Some(format!("triangle: {e}"))),
    }
    let dia = LatticePolytope::cross_polytope(2);
    let g = Group::signs(2);
    match equivariant_series_with(&dia, &g.elements, 3, exec) {
        Ok(ch) => {
            for el in &g.elements {
                for m in 0..=3 {
                    trials += 1;
                    if ch.get(&el.id).unwrap()[m].eval_one() != BigInt::from(fixed_points(&dia, el, m)) {
                        failures.push(Some(format!("cross-polytope, element {}, m={m}: fixed points", el.id)));
                    }
                }
            }
        }
        Err(e) => failures.push(Some(format!("cross-polytope: {e}"))),
    }
    SuiteReport::new("equivariant", trials, failures)
}

/// Classical h* and `q = 1` agreement on every stored row that prints h*.
pub fn classical_suite(exec: Exec) -> SuiteReport {
    let rows: Vec<TableRow> =
        [Corpus::Fig1, Corpus::Fig2, Corpus::Fig3, Corpus::ExtraData].into_iter().flat_map(stored_rows)
            .filter(|r| r.hstar.is_some() && r.provenance != Provenance::PaperInconsistent)
            .collect();
    let out = exec.map(&rows, |r| {
        let want = r.hstar.as_ref().unwrap();
        match classical_check(&r.polytope) {
            Ok((h, rep)) if rep.q1_agrees && trimmed(&h.0) == want.as_slice() => None,
            Ok((h, _)) => Some(format!("{}: h* = {:?}, printed {:?}", r.name, h.0, want)),
            Err(e) => Some(format!("{}: {e}", r.name)),
        }
    });
    SuiteReport::new("classical", rows.len(), out)
}
