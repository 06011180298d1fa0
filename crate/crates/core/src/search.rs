//! Constrained equilibrium search: `k`-uniform scans for ε-NE questions and
//! support-pattern enumeration with exact LPs for ε-WSNE questions.
//!
//! Candidate order is fixed: for `k`-uniform scans, `k' = 1..=k`, then row
//! strategy, then column strategy (each in [`k_uniform_counts`] order); for
//! support patterns, total support size, then `|supp(x)|`, then the row set
//! and column set lexicographically. The first hit in that order is reported.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gadget::binomial;
use crate::game::{is_eps_wsne, BimatrixGame, Matrix, MixedProfile};
use crate::kernel::{le_cross, to_rational, Eval, Frac, IntGame, Layer};
use crate::linalg::{maximize, Constraint, LpOutcome, Relation};
use crate::scalar::{int, Rational};
use num_traits::{One, Signed, Zero};

/// Default cap on candidates examined by one search.
pub const DEFAULT_SEARCH_BUDGET: u128 = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Answer {
    Yes,
    No,
    /// The budget ran out before the candidate family was exhausted.
    Unknown,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "yes",
            Answer::No => "no",
            Answer::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub answer: Answer,
    pub witness: Option<MixedProfile<Rational>>,
    /// The second equilibrium for Problem 3.
    pub second_witness: Option<MixedProfile<Rational>>,
    pub checked_count: u128,
    /// Best welfare for [`lmm_best_welfare`].
    pub value: Option<Rational>,
}

impl SearchOutcome {
    fn new(answer: Answer, checked_count: u128) -> Self {
        SearchOutcome { answer, witness: None, second_witness: None, checked_count, value: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Ne,
    Wsne,
}

/// The ten constrained-equilibrium questions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Problem {
    /// `min(xᵀRy, xᵀCy) ≥ u`, `u ∈ (0,1]`.
    LargePayoffs { u: Rational },
    /// `supp(x) ⊆ S`.
    RestrictedSupport { s: Vec<usize> },
    /// Two ε-NE at TV distance `≥ d`, `d ∈ (0,1]`.
    FarApart { d: Rational },
    /// `max_i x_i ≤ p`, `p ∈ (0,1)`.
    SmallLargestProbability { p: Rational },
    /// `xᵀRy + xᵀCy ≤ v`, `v ∈ [0,2)`.
    SmallTotalPayoff { v: Rational },
    /// `xᵀRy ≤ u`, `u ∈ [0,1)`.
    SmallPayoff { u: Rational },
    /// `|supp(x)| + |supp(y)| ≥ 2k`.
    LargeTotalSupport { k: usize },
    /// `min(|supp(x)|, |supp(y)|) ≥ k`.
    LargeSmallestSupport { k: usize },
    /// `|supp(x)| ≥ k`.
    LargeSupport { k: usize },
    /// `S_R ⊆ supp(x)`.
    RestrictingSupport { s_r: Vec<usize> },
}

impl Problem {
    pub fn id(&self) -> u8 {
        match self {
            Problem::LargePayoffs { .. } => 1,
            Problem::RestrictedSupport { .. } => 2,
            Problem::FarApart { .. } => 3,
            Problem::SmallLargestProbability { .. } => 4,
            Problem::SmallTotalPayoff { .. } => 5,
            Problem::SmallPayoff { .. } => 6,
            Problem::LargeTotalSupport { .. } => 7,
            Problem::LargeSmallestSupport { .. } => 8,
            Problem::LargeSupport { .. } => 9,
            Problem::RestrictingSupport { .. } => 10,
        }
    }

    pub fn witness_kind(&self) -> WitnessKind {
        if self.id() <= 6 {
            WitnessKind::Ne
        } else {
            WitnessKind::Wsne
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionInstance {
    pub problem: Problem,
    pub game: BimatrixGame<Rational>,
    pub eps: Rational,
}

impl DecisionInstance {
    /// Validates the parameter against its allowed range. `eps` may be 0 so
    /// that exact equilibria can be asked for.
    pub fn new(problem: Problem, game: BimatrixGame<Rational>, eps: Rational) -> Result<Self> {
        let zero = Rational::zero();
        let one = Rational::one();
        if eps.is_negative() || eps >= one {
            return Err(Error::Validation(format!("eps = {eps} is outside [0,1)")));
        }
        let bad = |what: &str, v: &Rational, range: &str| Error::Validation(format!("{what} = {v} is outside {range}"));
        let check_rows = |s: &[usize], what: &str| -> Result<()> {
            if s.is_empty() {
                return Err(Error::Validation(format!("{what} is empty")));
            }
            if let Some(i) = s.iter().find(|&&i| i >= game.rows()) {
                return Err(Error::Validation(format!("{what} names row {i}, game has {}", game.rows())));
            }
            Ok(())
        };
        let n = game.rows().max(game.cols());
        match &problem {
            Problem::LargePayoffs { u } if *u <= zero || *u > one => return Err(bad("u", u, "(0,1]")),
            Problem::FarApart { d } if *d <= zero || *d > one => return Err(bad("d", d, "(0,1]")),
            Problem::SmallLargestProbability { p } if *p <= zero || *p >= one => return Err(bad("p", p, "(0,1)")),
            Problem::SmallTotalPayoff { v } if *v < zero || *v >= int(2) => return Err(bad("v", v, "[0,2)")),
            Problem::SmallPayoff { u } if *u < zero || *u >= one => return Err(bad("u", u, "[0,1)")),
            Problem::LargeTotalSupport { k } | Problem::LargeSmallestSupport { k } | Problem::LargeSupport { k }
                if *k == 0 || *k > n =>
            {
                return Err(Error::Validation(format!("k = {k} is outside [1,{n}]")))
            }
            Problem::RestrictedSupport { s } => check_rows(s, "S")?,
            Problem::RestrictingSupport { s_r } => check_rows(s_r, "S_R")?,
            _ => {}
        }
        Ok(DecisionInstance { problem, game, eps })
    }
}

/// Search limits. `k` is the uniformity level for ε-NE problems and the
/// largest support size per side for ε-WSNE problems.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub k: Option<usize>,
    pub budget: u128,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { k: None, budget: DEFAULT_SEARCH_BUDGET }
    }
}

/// Number of candidates in the union of `k'`-uniform families, `k' ≤ k`.
pub fn union_size(rows: usize, cols: usize, k: usize) -> u128 {
    (1..=k).fold(0u128, |acc, j| {
        acc.saturating_add(
            crate::kernel::multiset_count(rows, j).saturating_mul(crate::kernel::multiset_count(cols, j)),
        )
    })
}

/// `⌈log₂ n / eps²⌉`, lowered until the candidate union fits `budget`.
pub fn default_k(game: &BimatrixGame<Rational>, eps: &Rational, budget: u128) -> usize {
    default_k_clamped(game, eps, budget).0
}

/// [`default_k`] together with whether the budget forced it below the bound.
pub fn default_k_clamped(game: &BimatrixGame<Rational>, eps: &Rational, budget: u128) -> (usize, bool) {
    let n = game.rows().max(game.cols()).max(2);
    let e = num_traits::ToPrimitive::to_f64(eps).unwrap_or(0.0);
    let raw = if e <= 0.0 { usize::MAX } else { ((n as f64).log2() / (e * e)).ceil().max(1.0) as usize };
    let mut k = 1;
    while k < raw && union_size(game.rows(), game.cols(), k + 1) <= budget {
        k += 1;
    }
    (k, k < raw)
}

/// Highest-welfare ε-NE among all `k'`-uniform profile pairs with `k' ≤ k`.
pub fn lmm_best_welfare(game: &BimatrixGame<Rational>, eps: &Rational, k: usize) -> Result<SearchOutcome> {
    lmm_best_welfare_with_budget(game, eps, k, DEFAULT_SEARCH_BUDGET)
}

pub fn lmm_best_welfare_with_budget(
    game: &BimatrixGame<Rational>,
    eps: &Rational,
    k: usize,
    budget: u128,
) -> Result<SearchOutcome> {
    let ig = IntGame::new(game)?;
    let e = Frac::from_rational(eps)?;
    let mut checked = 0u128;
    // (welfare numerator, denominator, profile)
    let mut best: Option<(i128, i128, MixedProfile<Rational>)> = None;
    let mut complete = true;
    for kk in 1..=k {
        if checked.saturating_add(Layer::predicted_size(&ig, kk)) > budget {
            complete = false;
            break;
        }
        let layer = Layer::new(&ig, kk);
        checked += layer.size();
        let d = layer.denom(&ig);
        let hit = (0..layer.xs.len())
            .into_par_iter()
            .filter_map(|ix| {
                let mut local: Option<(i128, usize)> = None;
                for iy in 0..layer.ys.len() {
                    let ev = layer.eval(ix, iy);
                    if layer.is_eps_ne(&ig, &ev, e) && local.map_or(true, |(w, _)| ev.welfare() > w) {
                        local = Some((ev.welfare(), iy));
                    }
                }
                local.map(|(w, iy)| (w, ix, iy))
            })
            .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });
        if let Some((w, ix, iy)) = hit {
            let better = best.as_ref().map_or(true, |(bw, bd, _)| !le_cross(w, *bd, *bw, d));
            if better {
                best = Some((w, d, layer.profile(ix, iy)));
            }
        }
    }
    let answer = match (&best, complete) {
        (_, false) => Answer::Unknown,
        (Some(_), true) => Answer::Yes,
        (None, true) => Answer::No,
    };
    let mut out = SearchOutcome::new(answer, checked);
    if let Some((w, d, p)) = best {
        out.value = Some(to_rational(w, d));
        out.witness = Some(p);
    }
    Ok(out)
}

/// Decides one question with default limits.
pub fn decide(inst: &DecisionInstance, k: Option<usize>) -> Result<SearchOutcome> {
    decide_with(inst, &SearchConfig { k, ..SearchConfig::default() })
}

pub fn decide_with(inst: &DecisionInstance, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let out = match inst.problem.witness_kind() {
        WitnessKind::Ne => decide_ne(inst, cfg)?,
        WitnessKind::Wsne => decide_wsne(inst, cfg)?,
    };
    // a yes must stand on its own under exact verification
    if out.answer == Answer::Yes {
        let w = out.witness.as_ref().ok_or_else(|| Error::Internal("yes without a witness".into()))?;
        verify_witness(inst, w, out.second_witness.as_ref())?;
    }
    Ok(out)
}

/// Re-checks a witness against the instance predicate with exact arithmetic.
pub fn verify_witness(
    inst: &DecisionInstance,
    w: &MixedProfile<Rational>,
    second: Option<&MixedProfile<Rational>>,
) -> Result<()> {
    let g = &inst.game;
    let rep = crate::game::regret_report(g, w)?;
    let ok_kind = match inst.problem.witness_kind() {
        WitnessKind::Ne => rep.is_eps_ne(&inst.eps),
        WitnessKind::Wsne => rep.is_eps_wsne(&inst.eps),
    };
    let sx = w.support_x();
    let sy = w.support_y();
    let pred = match &inst.problem {
        Problem::LargePayoffs { u } => rep.row_payoff >= *u && rep.col_payoff >= *u,
        Problem::RestrictedSupport { s } => sx.iter().all(|i| s.contains(i)),
        Problem::FarApart { d } => match second {
            Some(w2) => crate::game::is_eps_ne(g, w2, &inst.eps)? && crate::game::tv_distance(w, w2)? >= *d,
            None => false,
        },
        Problem::SmallLargestProbability { p } => w.x.iter().all(|v| v <= p),
        Problem::SmallTotalPayoff { v } => rep.welfare <= *v,
        Problem::SmallPayoff { u } => rep.row_payoff <= *u,
        Problem::LargeTotalSupport { k } => sx.len() + sy.len() >= 2 * k,
        Problem::LargeSmallestSupport { k } => sx.len().min(sy.len()) >= *k,
        Problem::LargeSupport { k } => sx.len() >= *k,
        Problem::RestrictingSupport { s_r } => s_r.iter().all(|i| sx.contains(i)),
    };
    if ok_kind && pred {
        Ok(())
    } else {
        Err(Error::Internal(format!("witness for problem {} failed re-verification", inst.problem.id())))
    }
}

struct NeCheck {
    problem: Problem,
    // external parameters as fractions, when the problem has one
    param: Option<Frac>,
}

impl NeCheck {
    fn new(problem: &Problem) -> Result<Self> {
        let param = match problem {
            Problem::LargePayoffs { u } | Problem::SmallPayoff { u } => Some(Frac::from_rational(u)?),
            Problem::FarApart { d } => Some(Frac::from_rational(d)?),
            Problem::SmallLargestProbability { p } => Some(Frac::from_rational(p)?),
            Problem::SmallTotalPayoff { v } => Some(Frac::from_rational(v)?),
            _ => None,
        };
        Ok(NeCheck { problem: problem.clone(), param })
    }

    fn accepts(&self, layer: &Layer, ix: usize, ev: &Eval, d: i128) -> bool {
        let q = self.param;
        match &self.problem {
            Problem::LargePayoffs { .. } => {
                let u = q.unwrap();
                le_cross(u.num, d, ev.row_pay, u.den) && le_cross(u.num, d, ev.col_pay, u.den)
            }
            Problem::RestrictedSupport { s } => layer.xs[ix].iter().enumerate().all(|(i, &c)| c == 0 || s.contains(&i)),
            Problem::SmallLargestProbability { .. } => {
                let p = q.unwrap();
                let m = *layer.xs[ix].iter().max().unwrap() as i128;
                le_cross(m, p.den, p.num, layer.k as i128)
            }
            Problem::SmallTotalPayoff { .. } => {
                let v = q.unwrap();
                le_cross(ev.welfare(), v.den, v.num, d)
            }
            Problem::SmallPayoff { .. } => {
                let u = q.unwrap();
                le_cross(ev.row_pay, u.den, u.num, d)
            }
            // pairs are handled separately
            Problem::FarApart { .. } => true,
            _ => unreachable!("not an ε-NE problem"),
        }
    }
}

/// Uniformity level and whether a miss at that level is inconclusive: when
/// the budget cut the default below `⌈log₂ n / eps²⌉`, an empty scan proves
/// nothing and is reported as unknown.
fn search_k(inst: &DecisionInstance, cfg: &SearchConfig) -> (usize, bool) {
    match cfg.k {
        Some(k) => (k.max(1), false),
        None => default_k_clamped(&inst.game, &inst.eps, cfg.budget),
    }
}

fn decide_ne(inst: &DecisionInstance, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let ig = IntGame::new(&inst.game)?;
    let e = Frac::from_rational(&inst.eps)?;
    let check = NeCheck::new(&inst.problem)?;
    let (k, clamped) = search_k(inst, cfg);
    let exhausted = if clamped { Answer::Unknown } else { Answer::No };
    let mut checked = 0u128;
    // ε-NE seen so far, for Problem 3: (k, row counts, column counts)
    let mut seen: Vec<(usize, Vec<u32>, Vec<u32>)> = Vec::new();
    let mut pair_checks = 0u128;
    for kk in 1..=k {
        if checked.saturating_add(Layer::predicted_size(&ig, kk)) > cfg.budget {
            return Ok(SearchOutcome::new(Answer::Unknown, checked));
        }
        let layer = Layer::new(&ig, kk);
        let d = layer.denom(&ig);
        if let Problem::FarApart { .. } = inst.problem {
            let dist = check.param.unwrap();
            let hits: Vec<(usize, usize)> = (0..layer.xs.len())
                .into_par_iter()
                .flat_map_iter(|ix| {
                    let (layer, ig) = (&layer, &ig);
                    (0..layer.ys.len()).filter_map(move |iy| {
                        let ev = layer.eval(ix, iy);
                        layer.is_eps_ne(ig, &ev, e).then_some((ix, iy))
                    })
                })
                .collect();
            checked += layer.size();
            for (ix, iy) in hits {
                let (cx, cy) = (&layer.xs[ix], &layer.ys[iy]);
                pair_checks += seen.len() as u128;
                if pair_checks > cfg.budget {
                    return Ok(SearchOutcome::new(Answer::Unknown, checked));
                }
                let far = seen
                    .iter()
                    .position(|(k0, x0, y0)| tv_at_least(x0, *k0, cx, kk, dist) || tv_at_least(y0, *k0, cy, kk, dist));
                if let Some(pos) = far {
                    let (k0, x0, y0) = &seen[pos];
                    let mut out = SearchOutcome::new(Answer::Yes, checked);
                    out.witness = Some(MixedProfile {
                        x: crate::kernel::counts_to_strategy(x0, *k0),
                        y: crate::kernel::counts_to_strategy(y0, *k0),
                    });
                    out.second_witness = Some(layer.profile(ix, iy));
                    return Ok(out);
                }
                seen.push((kk, cx.clone(), cy.clone()));
            }
            continue;
        }
        let hit = (0..layer.xs.len()).into_par_iter().find_map_first(|ix| {
            (0..layer.ys.len()).find_map(|iy| {
                let ev = layer.eval(ix, iy);
                (layer.is_eps_ne(&ig, &ev, e) && check.accepts(&layer, ix, &ev, d)).then_some((ix, iy))
            })
        });
        if let Some((ix, iy)) = hit {
            let position = ix as u128 * layer.ys.len() as u128 + iy as u128 + 1;
            let mut out = SearchOutcome::new(Answer::Yes, checked + position);
            out.witness = Some(layer.profile(ix, iy));
            return Ok(out);
        }
        checked += layer.size();
    }
    Ok(SearchOutcome::new(exhausted, checked))
}

/// `max_i |a_i/ka − b_i/kb| ≥ d`.
fn tv_at_least(a: &[u32], ka: usize, b: &[u32], kb: usize, d: Frac) -> bool {
    a.iter().zip(b).any(|(&u, &v)| {
        let diff = (u as i128 * kb as i128 - v as i128 * ka as i128).abs();
        le_cross(d.num, (ka * kb) as i128, diff, d.den)
    })
}

/// All `r`-subsets of `pool`, lexicographic.
pub fn combinations(pool: &[usize], r: usize) -> Vec<Vec<usize>> {
    let n = pool.len();
    if r > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.iter().map(|&i| pool[i]).collect());
        let Some(p) = (0..r).rev().find(|&p| idx[p] < n - r + p) else { break };
        idx[p] += 1;
        for q in p + 1..r {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

/// Column strategy with support exactly `sy` under which every row of `sx`
/// is an `eps`-best response, if one exists.
fn side_lp(r: &Matrix<Rational>, sx: &[usize], sy: &[usize], eps: &Rational) -> Option<Vec<Rational>> {
    let s = sy.len();
    // variables: y_j (j in sy), t, M+, M-
    let nv = s + 3;
    let (t, mp, mn) = (s, s + 1, s + 2);
    let mut cons = Vec::with_capacity(1 + r.rows() + sx.len() + s);
    let mut sum = vec![Rational::zero(); nv];
    for c in sum.iter_mut().take(s) {
        *c = Rational::one();
    }
    cons.push(Constraint::new(sum, Relation::Eq, Rational::one()));
    let row_expr = |i: usize| -> Vec<Rational> {
        let mut v = vec![Rational::zero(); nv];
        for (k, &j) in sy.iter().enumerate() {
            v[k] = r.get(i, j).clone();
        }
        v[mp] = -Rational::one();
        v[mn] = Rational::one();
        v
    };
    for i in 0..r.rows() {
        cons.push(Constraint::new(row_expr(i), Relation::Le, Rational::zero()));
    }
    for &i in sx {
        cons.push(Constraint::new(row_expr(i), Relation::Ge, -eps.clone()));
    }
    for k in 0..s {
        let mut v = vec![Rational::zero(); nv];
        v[k] = Rational::one();
        v[t] = -Rational::one();
        cons.push(Constraint::new(v, Relation::Ge, Rational::zero()));
    }
    let mut obj = vec![Rational::zero(); nv];
    obj[t] = Rational::one();
    match maximize(&obj, &cons) {
        LpOutcome::Optimal { value, point } if value.is_positive() => {
            let mut y = vec![Rational::zero(); r.cols()];
            for (k, &j) in sy.iter().enumerate() {
                y[j] = point[k].clone();
            }
            Some(y)
        }
        _ => None,
    }
}

/// An ε-WSNE whose supports are exactly `sx` and `sy`, if any.
pub fn wsne_for_supports(
    game: &BimatrixGame<Rational>,
    sx: &[usize],
    sy: &[usize],
    eps: &Rational,
) -> Result<Option<MixedProfile<Rational>>> {
    let ig = IntGame::new(game)?;
    wsne_for_supports_in(game, &ig, sx, sy, eps)
}

fn wsne_for_supports_in(
    game: &BimatrixGame<Rational>,
    ig: &IntGame,
    sx: &[usize],
    sy: &[usize],
    eps: &Rational,
) -> Result<Option<MixedProfile<Rational>>> {
    let e = Frac::from_rational(eps)?;
    // cheap necessary condition before any LP
    let row_dead = sx.iter().any(|&i| (0..ig.rows).any(|i2| ig.row_dominated(i, i2, sy, e)));
    if row_dead || sy.iter().any(|&j| (0..ig.cols).any(|j2| ig.col_dominated(j, j2, sx, e))) {
        return Ok(None);
    }
    let Some(y) = side_lp(game.row_payoffs(), sx, sy, eps) else { return Ok(None) };
    let Some(x) = side_lp(&game.col_payoffs().transpose(), sy, sx, eps) else { return Ok(None) };
    let p = MixedProfile::new(x, y)?;
    if !is_eps_wsne(game, &p, eps)? || p.support_x() != sx || p.support_y() != sy {
        return Err(Error::Internal(format!("LP solution for supports {sx:?}/{sy:?} failed verification")));
    }
    Ok(Some(p))
}

/// A support pattern together with a witness.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportHit {
    pub sx: Vec<usize>,
    pub sy: Vec<usize>,
    pub profile: MixedProfile<Rational>,
}

struct PatternSearch<'a> {
    game: &'a BimatrixGame<Rational>,
    eps: &'a Rational,
    max_sx: usize,
    max_sy: usize,
    required: Vec<usize>,
    size_ok: Box<dyn Fn(usize, usize) -> bool + Sync + 'a>,
    budget: u128,
}

enum PatternResult {
    Done { hits: Vec<SupportHit>, checked: u128 },
    OutOfBudget { checked: u128 },
}

impl PatternSearch<'_> {
    fn run(&self, first_only: bool) -> Result<PatternResult> {
        let ig = IntGame::new(self.game)?;
        let (n, m) = (self.game.rows(), self.game.cols());
        let rest: Vec<usize> = (0..n).filter(|i| !self.required.contains(i)).collect();
        let mut required = self.required.clone();
        required.sort_unstable();
        let all_cols: Vec<usize> = (0..m).collect();
        let mut hits = Vec::new();
        let mut checked = 0u128;
        for total in 2..=self.max_sx + self.max_sy {
            for sx_len in 1..total {
                let sy_len = total - sx_len;
                if sx_len > self.max_sx || sy_len > self.max_sy || sx_len > n || sy_len > m {
                    continue;
                }
                if sx_len < required.len() || !(self.size_ok)(sx_len, sy_len) {
                    continue;
                }
                let layer = binomial(rest.len(), sx_len - required.len()).saturating_mul(binomial(m, sy_len));
                if checked.saturating_add(layer) > self.budget {
                    return Ok(PatternResult::OutOfBudget { checked });
                }
                let xs: Vec<Vec<usize>> = combinations(&rest, sx_len - required.len())
                    .into_iter()
                    .map(|mut c| {
                        c.extend_from_slice(&required);
                        c.sort_unstable();
                        c
                    })
                    .collect::<Vec<_>>();
                // merged supersets are no longer lexicographic
                let mut xs = xs;
                xs.sort();
                let ys = combinations(&all_cols, sy_len);
                let scan = |sx: &Vec<usize>| -> Result<Vec<SupportHit>> {
                    let mut found = Vec::new();
                    for sy in &ys {
                        if let Some(profile) = wsne_for_supports_in(self.game, &ig, sx, sy, self.eps)? {
                            found.push(SupportHit { sx: sx.clone(), sy: sy.clone(), profile });
                            if first_only {
                                break;
                            }
                        }
                    }
                    Ok(found)
                };
                if first_only {
                    let hit = xs.par_iter().map(scan).find_map_first(|r| match r {
                        Ok(v) if v.is_empty() => None,
                        other => Some(other),
                    });
                    match hit {
                        Some(Ok(mut v)) => {
                            let h = v.swap_remove(0);
                            let ix = xs.iter().position(|s| *s == h.sx).unwrap() as u128;
                            let iy = ys.iter().position(|s| *s == h.sy).unwrap() as u128;
                            checked += ix * ys.len() as u128 + iy + 1;
                            return Ok(PatternResult::Done { hits: vec![h], checked });
                        }
                        Some(Err(e)) => return Err(e),
                        None => {}
                    }
                } else {
                    let found: Vec<Vec<SupportHit>> = xs.par_iter().map(scan).collect::<Result<_>>()?;
                    hits.extend(found.into_iter().flatten());
                }
                checked += layer;
            }
        }
        Ok(PatternResult::Done { hits, checked })
    }
}

fn decide_wsne(inst: &DecisionInstance, cfg: &SearchConfig) -> Result<SearchOutcome> {
    let (n, m) = (inst.game.rows(), inst.game.cols());
    let (max_sx, max_sy) = match cfg.k {
        Some(k) => (k.min(n), k.min(m)),
        None => (n, m),
    };
    let (size_ok, required): (Box<dyn Fn(usize, usize) -> bool + Sync>, Vec<usize>) = match &inst.problem {
        Problem::LargeTotalSupport { k } => {
            let k = *k;
            (Box::new(move |a, b| a + b >= 2 * k), Vec::new())
        }
        Problem::LargeSmallestSupport { k } => {
            let k = *k;
            (Box::new(move |a, b| a.min(b) >= k), Vec::new())
        }
        Problem::LargeSupport { k } => {
            let k = *k;
            (Box::new(move |a, _| a >= k), Vec::new())
        }
        Problem::RestrictingSupport { s_r } => {
            let mut r = s_r.clone();
            r.sort_unstable();
            r.dedup();
            (Box::new(|_, _| true), r)
        }
        _ => unreachable!("not an ε-WSNE problem"),
    };
    let search =
        PatternSearch { game: &inst.game, eps: &inst.eps, max_sx, max_sy, required, size_ok, budget: cfg.budget };
    Ok(match search.run(true)? {
        PatternResult::Done { mut hits, checked } => match hits.pop() {
            Some(h) => {
                let mut out = SearchOutcome::new(Answer::Yes, checked);
                out.witness = Some(h.profile);
                out
            }
            None => SearchOutcome::new(Answer::No, checked),
        },
        PatternResult::OutOfBudget { checked, .. } => SearchOutcome::new(Answer::Unknown, checked),
    })
}

/// Every support pattern that carries an ε-WSNE, each with one witness.
pub fn wsne_support_patterns(game: &BimatrixGame<Rational>, eps: &Rational, budget: u128) -> Result<Vec<SupportHit>> {
    let search = PatternSearch {
        game,
        eps,
        max_sx: game.rows(),
        max_sy: game.cols(),
        required: Vec::new(),
        size_ok: Box::new(|_, _| true),
        budget,
    };
    match search.run(false)? {
        PatternResult::Done { hits, .. } => Ok(hits),
        PatternResult::OutOfBudget { checked, .. } => {
            Err(Error::Resource(format!("support enumeration needs more than {budget} patterns (checked {checked})")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::regret_report;
    use crate::scalar::ratio;

    fn coordination() -> BimatrixGame<Rational> {
        BimatrixGame::from_rows(
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
        )
        .unwrap()
    }

    fn pennies() -> BimatrixGame<Rational> {
        BimatrixGame::from_rows(
            vec![vec![int(1), int(0)], vec![int(0), int(1)]],
            vec![vec![int(0), int(1)], vec![int(1), int(0)]],
        )
        .unwrap()
    }

    #[test]
    fn lmm_examples() {
        let out = lmm_best_welfare(&coordination(), &int(0), 1).unwrap();
        assert_eq!(out.answer, Answer::Yes);
        assert_eq!(out.value, Some(int(2)));
        let out = lmm_best_welfare(&pennies(), &int(0), 2).unwrap();
        assert_eq!(out.value, Some(int(1)));
        assert_eq!(out.witness.unwrap().x, vec![ratio(1, 2), ratio(1, 2)]);
        let out = lmm_best_welfare(&pennies(), &int(0), 1).unwrap();
        assert_eq!(out.answer, Answer::No);
    }

    #[test]
    fn lmm_budget_gives_unknown_with_partial_best() {
        let out = lmm_best_welfare_with_budget(&coordination(), &int(0), 3, 6).unwrap();
        assert_eq!(out.answer, Answer::Unknown);
        assert_eq!(out.value, Some(int(2)));
    }

    #[test]
    fn parameter_ranges() {
        let g = coordination();
        let mk = |p: Problem| DecisionInstance::new(p, g.clone(), int(0));
        assert!(mk(Problem::LargePayoffs { u: int(0) }).is_err());
        assert!(mk(Problem::LargePayoffs { u: int(1) }).is_ok());
        assert!(mk(Problem::SmallTotalPayoff { v: int(2) }).is_err());
        assert!(mk(Problem::SmallPayoff { u: int(0) }).is_ok());
        assert!(mk(Problem::SmallLargestProbability { p: int(1) }).is_err());
        assert!(mk(Problem::FarApart { d: int(0) }).is_err());
        assert!(mk(Problem::LargeSupport { k: 0 }).is_err());
        assert!(mk(Problem::RestrictingSupport { s_r: vec![5] }).is_err());
        assert!(DecisionInstance::new(Problem::LargeSupport { k: 1 }, g, int(1)).is_err());
    }

    #[test]
    fn ne_problems_on_small_games() {
        let g = coordination();
        let yes = |p: Problem, eps: Rational, k: usize| {
            decide(&DecisionInstance::new(p, g.clone(), eps).unwrap(), Some(k)).unwrap().answer
        };
        assert_eq!(yes(Problem::LargePayoffs { u: int(1) }, int(0), 1), Answer::Yes);
        assert_eq!(yes(Problem::RestrictedSupport { s: vec![1] }, int(0), 1), Answer::Yes);
        assert_eq!(yes(Problem::FarApart { d: int(1) }, int(0), 1), Answer::Yes);
        // the only exact NE with max prob 1/2 is the mixed one
        assert_eq!(yes(Problem::SmallLargestProbability { p: ratio(1, 2) }, int(0), 1), Answer::No);
        assert_eq!(yes(Problem::SmallLargestProbability { p: ratio(1, 2) }, int(0), 2), Answer::Yes);
        assert_eq!(yes(Problem::SmallTotalPayoff { v: int(1) }, int(0), 2), Answer::Yes);
        assert_eq!(yes(Problem::SmallPayoff { u: ratio(1, 4) }, int(0), 4), Answer::No);
    }

    #[test]
    fn far_apart_reports_both_equilibria() {
        let inst = DecisionInstance::new(Problem::FarApart { d: int(1) }, coordination(), int(0)).unwrap();
        let out = decide(&inst, Some(2)).unwrap();
        let (a, b) = (out.witness.unwrap(), out.second_witness.unwrap());
        assert_eq!(crate::game::tv_distance(&a, &b).unwrap(), int(1));
    }

    #[test]
    fn wsne_problems() {
        let g = coordination();
        let run = |p: Problem, eps: Rational| decide(&DecisionInstance::new(p, g.clone(), eps).unwrap(), None).unwrap();
        let out = run(Problem::LargeSmallestSupport { k: 2 }, int(0));
        assert_eq!(out.answer, Answer::Yes);
        assert_eq!(out.witness.unwrap().x, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(run(Problem::RestrictingSupport { s_r: vec![1] }, int(0)).answer, Answer::Yes);
        assert_eq!(run(Problem::LargeTotalSupport { k: 2 }, int(0)).answer, Answer::Yes);
        // a strict dominance gap rules out full support
        let dom = BimatrixGame::from_rows(
            vec![vec![int(1), int(1)], vec![int(0), int(0)]],
            vec![vec![int(1), int(0)], vec![int(1), int(0)]],
        )
        .unwrap();
        let inst = DecisionInstance::new(Problem::LargeSupport { k: 2 }, dom.clone(), ratio(1, 2)).unwrap();
        assert_eq!(decide(&inst, None).unwrap().answer, Answer::No);
        let inst = DecisionInstance::new(Problem::LargeSupport { k: 2 }, dom, int(1) - ratio(1, 1000)).unwrap();
        assert_eq!(decide(&inst, None).unwrap().answer, Answer::No);
    }

    #[test]
    fn wsne_lp_finds_exact_supports() {
        let p = wsne_for_supports(&pennies(), &[0, 1], &[0, 1], &int(0)).unwrap().unwrap();
        assert_eq!(p.x, vec![ratio(1, 2), ratio(1, 2)]);
        assert!(wsne_for_supports(&pennies(), &[0], &[0], &int(0)).unwrap().is_none());
        let rep = regret_report(&pennies(), &p).unwrap();
        assert!(rep.row_pure_regret.is_zero());
        let all = wsne_support_patterns(&pennies(), &int(0), 1000).unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn budget_gives_unknown() {
        let inst = DecisionInstance::new(Problem::SmallPayoff { u: int(0) }, pennies(), int(0)).unwrap();
        let out = decide_with(&inst, &SearchConfig { k: Some(3), budget: 5 }).unwrap();
        assert_eq!(out.answer, Answer::Unknown);
    }

    #[test]
    fn combination_order() {
        assert_eq!(combinations(&[0, 1, 2], 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(combinations(&[4, 7], 0), vec![Vec::<usize>::new()]);
        assert!(combinations(&[1], 2).is_empty());
    }
}
