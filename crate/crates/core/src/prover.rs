//! Two-prover games, deterministic prover strategies and the game induced by
//! a profile on a gadget game.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, Block, Matrix, MixedProfile};
use crate::scalar::Scalar;

/// Default limit on `|S1|·|S2|` for [`game_value`].
pub const DEFAULT_VALUE_BUDGET: u128 = 1 << 24;

/// Questions are indices; question `x` has answers `0..answers_x[x]`.
///
/// `dist` may be a sub-distribution: missing mass pays 0.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoProverGame<T> {
    answers_x: Vec<usize>,
    answers_y: Vec<usize>,
    dist: Matrix<T>,
    // one table per question pair, indexed a * |B_y| + b
    verify: Vec<Vec<bool>>,
}

impl<T: Scalar> TwoProverGame<T> {
    pub fn new(answers_x: Vec<usize>, answers_y: Vec<usize>, dist: Matrix<T>, verify: Vec<Vec<bool>>) -> Result<Self> {
        let (nx, ny) = (answers_x.len(), answers_y.len());
        if nx == 0 || ny == 0 {
            return Err(Error::Shape("a prover game needs at least one question per side".into()));
        }
        if answers_x.iter().chain(&answers_y).any(|&k| k == 0) {
            return Err(Error::Validation("every question needs at least one answer".into()));
        }
        if dist.rows() != nx || dist.cols() != ny {
            return Err(Error::Shape(format!(
                "distribution is {}x{}, questions are {nx}x{ny}",
                dist.rows(),
                dist.cols()
            )));
        }
        if let Some(e) = dist.entries().find(|e| e.is_negative()) {
            return Err(Error::Validation(format!("negative question probability {e}")));
        }
        let total = dist.entries().cloned().fold(T::zero(), |a, b| a + b);
        if total > T::one() + T::sum_tolerance() {
            return Err(Error::Validation(format!("question distribution sums to {total} > 1")));
        }
        if verify.len() != nx * ny {
            return Err(Error::Shape(format!("expected {} verification tables, got {}", nx * ny, verify.len())));
        }
        for x in 0..nx {
            for y in 0..ny {
                let want = answers_x[x] * answers_y[y];
                let got = verify[x * ny + y].len();
                if got != want {
                    return Err(Error::Shape(format!("table for ({x},{y}) has {got} entries, expected {want}")));
                }
            }
        }
        Ok(TwoProverGame { answers_x, answers_y, dist, verify })
    }

    /// Builds `V` from a predicate over `(x, y, a, b)`.
    pub fn from_fn(
        answers_x: Vec<usize>,
        answers_y: Vec<usize>,
        dist: Matrix<T>,
        mut v: impl FnMut(usize, usize, usize, usize) -> bool,
    ) -> Result<Self> {
        let mut verify = Vec::with_capacity(answers_x.len() * answers_y.len());
        for (x, &na) in answers_x.iter().enumerate() {
            for (y, &nb) in answers_y.iter().enumerate() {
                let mut t = Vec::with_capacity(na * nb);
                for a in 0..na {
                    for b in 0..nb {
                        t.push(v(x, y, a, b));
                    }
                }
                verify.push(t);
            }
        }
        Self::new(answers_x, answers_y, dist, verify)
    }

    /// Free game: uniform product distribution.
    pub fn free(
        answers_x: Vec<usize>,
        answers_y: Vec<usize>,
        v: impl FnMut(usize, usize, usize, usize) -> bool,
    ) -> Result<Self> {
        let dist = uniform_dist(answers_x.len(), answers_y.len());
        Self::from_fn(answers_x, answers_y, dist, v)
    }

    pub fn num_x(&self) -> usize {
        self.answers_x.len()
    }

    pub fn num_y(&self) -> usize {
        self.answers_y.len()
    }

    pub fn answers_x(&self) -> &[usize] {
        &self.answers_x
    }

    pub fn answers_y(&self) -> &[usize] {
        &self.answers_y
    }

    pub fn dist(&self) -> &Matrix<T> {
        &self.dist
    }

    pub fn verify(&self, x: usize, y: usize, a: usize, b: usize) -> bool {
        self.verify[x * self.num_y() + y][a * self.answers_y[y] + b]
    }

    /// Total question mass.
    pub fn mass(&self) -> T {
        self.dist.entries().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// Uniform product distribution over all question pairs.
    pub fn is_free(&self) -> bool {
        let u = T::one() / T::from_usize(self.num_x() * self.num_y());
        self.dist.entries().all(|e| *e == u)
    }

    /// Same game with the distribution replaced.
    pub fn with_dist(&self, dist: Matrix<T>) -> Result<Self> {
        Self::new(self.answers_x.clone(), self.answers_y.clone(), dist, self.verify.clone())
    }

    /// Number of row answers, i.e. `Σ|A_x|`.
    pub fn total_answers_x(&self) -> usize {
        self.answers_x.iter().sum()
    }

    pub fn total_answers_y(&self) -> usize {
        self.answers_y.iter().sum()
    }

    /// Flattened `(x, a)` pairs in lexicographic order.
    pub fn row_labels(&self) -> Vec<(usize, usize)> {
        labels(&self.answers_x)
    }

    pub fn col_labels(&self) -> Vec<(usize, usize)> {
        labels(&self.answers_y)
    }

    /// `|S1|` and `|S2|`, saturating at `u128::MAX`.
    pub fn strategy_counts(&self) -> (u128, u128) {
        (product(&self.answers_x), product(&self.answers_y))
    }

    /// Repeats the whole question list on the chosen sides, halving the
    /// probability of each copy. Values are unchanged.
    pub fn duplicate_questions(&self, dup_x: bool, dup_y: bool) -> Result<Self> {
        let fx = if dup_x { 2 } else { 1 };
        let fy = if dup_y { 2 } else { 1 };
        let (nx, ny) = (self.num_x(), self.num_y());
        let scale = T::from_usize(fx * fy);
        let dist = Matrix::from_fn(nx * fx, ny * fy, |i, j| self.dist.get(i % nx, j % ny).clone() / scale.clone());
        let ax: Vec<usize> = (0..nx * fx).map(|i| self.answers_x[i % nx]).collect();
        let ay: Vec<usize> = (0..ny * fy).map(|j| self.answers_y[j % ny]).collect();
        let mut verify = Vec::with_capacity(ax.len() * ay.len());
        for i in 0..nx * fx {
            for j in 0..ny * fy {
                verify.push(self.verify[(i % nx) * ny + j % ny].clone());
            }
        }
        Self::new(ax, ay, dist, verify)
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> TwoProverGame<U> {
        TwoProverGame {
            answers_x: self.answers_x.clone(),
            answers_y: self.answers_y.clone(),
            dist: self.dist.map(f),
            verify: self.verify.clone(),
        }
    }

    /// Roles exchanged: `V'(y, x, b, a) = V(x, y, a, b)`.
    pub fn transpose(&self) -> Self {
        let (nx, ny) = (self.num_x(), self.num_y());
        let mut verify = Vec::with_capacity(nx * ny);
        for y in 0..ny {
            for x in 0..nx {
                let (na, nb) = (self.answers_x[x], self.answers_y[y]);
                let mut t = Vec::with_capacity(na * nb);
                for b in 0..nb {
                    for a in 0..na {
                        t.push(self.verify(x, y, a, b));
                    }
                }
                verify.push(t);
            }
        }
        TwoProverGame {
            answers_x: self.answers_y.clone(),
            answers_y: self.answers_x.clone(),
            dist: self.dist.transpose(),
            verify,
        }
    }
}

pub(crate) fn uniform_dist<T: Scalar>(nx: usize, ny: usize) -> Matrix<T> {
    let u = T::one() / T::from_usize(nx.max(1) * ny.max(1));
    Matrix::from_fn(nx, ny, |_, _| u.clone())
}

fn labels(sizes: &[usize]) -> Vec<(usize, usize)> {
    sizes.iter().enumerate().flat_map(|(q, &k)| (0..k).map(move |a| (q, a))).collect()
}

fn product(sizes: &[usize]) -> u128 {
    sizes.iter().fold(1u128, |acc, &k| acc.saturating_mul(k as u128))
}

/// A deterministic strategy: one answer per question.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProverStrategy {
    pub answers: Vec<usize>,
}

impl ProverStrategy {
    pub fn new(answers: Vec<usize>) -> Self {
        ProverStrategy { answers }
    }

    /// Checks totality and legality against the given answer-set sizes.
    pub fn validate(&self, sizes: &[usize]) -> Result<()> {
        if self.answers.len() != sizes.len() {
            return Err(Error::Validation(format!(
                "strategy answers {} questions, game has {}",
                self.answers.len(),
                sizes.len()
            )));
        }
        if let Some(q) = (0..sizes.len()).find(|&q| self.answers[q] >= sizes[q]) {
            return Err(Error::Validation(format!(
                "answer {} to question {q} is outside 0..{}",
                self.answers[q], sizes[q]
            )));
        }
        Ok(())
    }

    /// Decodes a mixed-radix index (first question least significant).
    pub fn from_index(mut index: u128, sizes: &[usize]) -> Self {
        let answers = sizes
            .iter()
            .map(|&k| {
                let a = (index % k as u128) as usize;
                index /= k as u128;
                a
            })
            .collect();
        ProverStrategy { answers }
    }

    /// Strategy played twice in a row, matching [`TwoProverGame::duplicate_questions`].
    pub fn repeated(&self) -> Self {
        let mut answers = self.answers.clone();
        answers.extend_from_slice(&self.answers);
        ProverStrategy { answers }
    }
}

/// Expected verifier acceptance of `(s1, s2)` under `D`.
pub fn prover_payoff<T: Scalar>(game: &TwoProverGame<T>, s1: &ProverStrategy, s2: &ProverStrategy) -> Result<T> {
    s1.validate(&game.answers_x)?;
    s2.validate(&game.answers_y)?;
    let mut total = T::zero();
    for x in 0..game.num_x() {
        for y in 0..game.num_y() {
            if game.verify(x, y, s1.answers[x], s2.answers[y]) {
                total = total + game.dist.get(x, y).clone();
            }
        }
    }
    Ok(total)
}

/// Value together with one optimal strategy pair.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueResult<T> {
    pub value: T,
    pub s1: ProverStrategy,
    pub s2: ProverStrategy,
}

/// `ω(T)` under [`DEFAULT_VALUE_BUDGET`].
pub fn game_value<T: Scalar>(game: &TwoProverGame<T>) -> Result<T> {
    Ok(game_value_with_budget(game, DEFAULT_VALUE_BUDGET)?.value)
}

/// Exact value. The smaller strategy space is enumerated and the other prover
/// best-responds question by question, which is exact because its payoff
/// separates over its questions.
pub fn game_value_with_budget<T: Scalar>(game: &TwoProverGame<T>, budget: u128) -> Result<ValueResult<T>> {
    let (c1, c2) = game.strategy_counts();
    let pairs = c1.saturating_mul(c2);
    if pairs > budget {
        let shown = if pairs == u128::MAX { "more than 2^128".to_string() } else { pairs.to_string() };
        return Err(Error::Resource(format!(
            "|S1|·|S2| = {c1}·{c2} = {shown} strategy pairs exceeds the budget of {budget}"
        )));
    }
    if c2 < c1 {
        let r = enumerate_first(&game.transpose());
        return Ok(ValueResult { value: r.value, s1: r.s2, s2: r.s1 });
    }
    Ok(enumerate_first(game))
}

fn enumerate_first<T: Scalar>(game: &TwoProverGame<T>) -> ValueResult<T> {
    let (count, _) = game.strategy_counts();
    let uniform = game.dist.entries().all(|e| e == game.dist.get(0, 0));
    let best = (0..count as u64)
        .into_par_iter()
        .map(|idx| {
            let s1 = ProverStrategy::from_index(idx as u128, &game.answers_x);
            let (value, s2) = if uniform { respond_counting(game, &s1) } else { respond_weighted(game, &s1) };
            (idx, value, s2)
        })
        .reduce_with(|a, b| {
            // max value, lowest index on ties: independent of split order
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .expect("strategy space is nonempty");
    ValueResult { value: best.1, s1: ProverStrategy::from_index(best.0 as u128, &game.answers_x), s2: best.2 }
}

fn respond_counting<T: Scalar>(game: &TwoProverGame<T>, s1: &ProverStrategy) -> (T, ProverStrategy) {
    let mut wins = 0usize;
    let mut answers = Vec::with_capacity(game.num_y());
    for y in 0..game.num_y() {
        let mut best = (0usize, 0usize);
        for b in 0..game.answers_y[y] {
            let c = (0..game.num_x()).filter(|&x| game.verify(x, y, s1.answers[x], b)).count();
            if c > best.1 {
                best = (b, c);
            }
        }
        wins += best.1;
        answers.push(best.0);
    }
    (game.dist.get(0, 0).clone() * T::from_usize(wins), ProverStrategy { answers })
}

fn respond_weighted<T: Scalar>(game: &TwoProverGame<T>, s1: &ProverStrategy) -> (T, ProverStrategy) {
    let mut total = T::zero();
    let mut answers = Vec::with_capacity(game.num_y());
    for y in 0..game.num_y() {
        let mut best: (usize, T) = (0, T::zero());
        for b in 0..game.answers_y[y] {
            let w = (0..game.num_x())
                .filter(|&x| game.verify(x, y, s1.answers[x], b))
                .fold(T::zero(), |acc, x| acc + game.dist.get(x, y).clone());
            if w > best.1 {
                best = (b, w);
            }
        }
        total = total + best.1;
        answers.push(best.0);
    }
    (total, ProverStrategy { answers })
}

/// `T_(x,y)` plus the data needed to compare it with the bimatrix payoff.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedGameResult<T> {
    pub game: TwoProverGame<T>,
    pub s_x: ProverStrategy,
    pub s_y: ProverStrategy,
    pub x_marginal: Vec<T>,
    pub y_marginal: Vec<T>,
    /// The profile after moving each question's mass onto one answer.
    pub canonical: MixedProfile<T>,
}

/// Reads the `RC` block of `g` as `X×A` rows and `Y×B` columns of `f`.
pub fn induced_two_prover<T: Scalar>(
    f: &TwoProverGame<T>,
    g: &BimatrixGame<T>,
    p: &MixedProfile<T>,
) -> Result<InducedGameResult<T>> {
    g.check_profile(p)?;
    let rc = g.block("RC").ok_or_else(|| Error::Validation("game has no RC block annotation".into()))?.clone();
    check_rc(f, &rc)?;

    let row_vals = g.row_values(&p.y);
    let x = concentrate(&p.x, &row_vals, rc.rows.start, f.answers_x());
    let col_vals = g.col_values(&x);
    let y = concentrate(&p.y, &col_vals, rc.cols.start, f.answers_y());

    let (x_marginal, s_x) = marginal(&x, rc.rows.start, f.answers_x());
    let (y_marginal, s_y) = marginal(&y, rc.cols.start, f.answers_y());
    let dist = Matrix::from_fn(f.num_x(), f.num_y(), |i, j| x_marginal[i].clone() * y_marginal[j].clone());
    let game = f.with_dist(dist)?;
    Ok(InducedGameResult { game, s_x, s_y, x_marginal, y_marginal, canonical: MixedProfile { x, y } })
}

fn check_rc<T: Scalar>(f: &TwoProverGame<T>, rc: &Block) -> Result<()> {
    if rc.rows.len() != f.total_answers_x() || rc.cols.len() != f.total_answers_y() {
        return Err(Error::Validation(format!(
            "RC block is {}x{}, the prover game has {}x{} answer pairs",
            rc.rows.len(),
            rc.cols.len(),
            f.total_answers_x(),
            f.total_answers_y()
        )));
    }
    Ok(())
}

/// Moves each question's mass onto its weakly best answer (lowest index on ties).
fn concentrate<T: Scalar>(v: &[T], values: &[T], start: usize, sizes: &[usize]) -> Vec<T> {
    let mut out = v.to_vec();
    let mut off = start;
    for &k in sizes {
        let range = off..off + k;
        let best = range.clone().fold(off, |b, i| if values[i] > values[b] { i } else { b });
        let mass = range.clone().fold(T::zero(), |acc, i| acc + v[i].clone());
        for i in range {
            out[i] = T::zero();
        }
        out[best] = mass;
        off += k;
    }
    out
}

fn marginal<T: Scalar>(v: &[T], start: usize, sizes: &[usize]) -> (Vec<T>, ProverStrategy) {
    let mut m = Vec::with_capacity(sizes.len());
    let mut answers = Vec::with_capacity(sizes.len());
    let mut off = start;
    for &k in sizes {
        let slice = &v[off..off + k];
        m.push(slice.iter().cloned().fold(T::zero(), |a, b| a + b));
        answers.push(slice.iter().position(|e| e.is_positive()).unwrap_or(0));
        off += k;
    }
    (m, ProverStrategy { answers })
}

/// `‖u_q − marginal‖₁`.
pub fn uniformity_gap<T: Scalar>(marginal: &[T], q: usize) -> Result<T> {
    if q == 0 {
        return Err(Error::Parameter("question-set size must be at least 1".into()));
    }
    if marginal.len() != q {
        return Err(Error::Shape(format!("marginal has {} entries, expected {q}", marginal.len())));
    }
    let u = T::one() / T::from_usize(q);
    Ok(marginal.iter().fold(T::zero(), |acc, m| acc + (m.clone() - u.clone()).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Rational};
    use num_traits::{One, Signed, Zero};

    fn constant(v: bool) -> TwoProverGame<Rational> {
        TwoProverGame::free(vec![2, 2], vec![2, 2], |_, _, _, _| v).unwrap()
    }

    // brute force over every pair, kept as the reference for the fast path
    fn naive_value(g: &TwoProverGame<Rational>) -> Rational {
        let (c1, c2) = g.strategy_counts();
        let mut best = Rational::zero();
        for i in 0..c1 {
            let s1 = ProverStrategy::from_index(i, g.answers_x());
            for j in 0..c2 {
                let s2 = ProverStrategy::from_index(j, g.answers_y());
                let v = prover_payoff(g, &s1, &s2).unwrap();
                if v > best {
                    best = v;
                }
            }
        }
        best
    }

    #[test]
    fn constant_verifiers() {
        let s = ProverStrategy::new(vec![0, 1]);
        assert_eq!(prover_payoff(&constant(true), &s, &s).unwrap(), int(1));
        assert_eq!(prover_payoff(&constant(false), &s, &s).unwrap(), int(0));
        assert_eq!(game_value(&constant(true)).unwrap(), int(1));
        assert_eq!(game_value(&constant(false)).unwrap(), int(0));
    }

    #[test]
    fn single_accepting_pair() {
        let g =
            TwoProverGame::<Rational>::free(vec![2, 2], vec![2, 2], |x, y, a, b| x == 0 && y == 0 && a == b).unwrap();
        let s = ProverStrategy::new(vec![1, 0]);
        assert_eq!(prover_payoff(&g, &s, &s).unwrap(), ratio(1, 4));
        assert_eq!(game_value(&g).unwrap(), ratio(1, 4));
    }

    #[test]
    fn partial_strategy_is_rejected() {
        let g = constant(true);
        let short = ProverStrategy::new(vec![0]);
        assert!(matches!(prover_payoff(&g, &short, &short), Err(Error::Validation(_))));
        let illegal = ProverStrategy::new(vec![0, 5]);
        assert!(prover_payoff(&g, &illegal, &ProverStrategy::new(vec![0, 0])).is_err());
    }

    #[test]
    fn sub_distribution_mass_pays_zero() {
        let g = constant(true).with_dist(Matrix::from_fn(2, 2, |_, _| ratio(1, 8))).unwrap();
        assert_eq!(game_value(&g).unwrap(), ratio(1, 2));
        let over = constant(true).with_dist(Matrix::from_fn(2, 2, |_, _| ratio(1, 2)));
        assert!(over.is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let g = TwoProverGame::<Rational>::free(vec![16; 4], vec![16; 4], |_, _, _, _| true).unwrap();
        match game_value(&g) {
            Err(Error::Resource(msg)) => assert!(msg.contains("4294967296")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fast_value_matches_pairwise_enumeration() {
        // xor-style game with uneven answer sets
        let g =
            TwoProverGame::<Rational>::free(vec![2, 3, 2], vec![3, 2], |x, y, a, b| (x + y + a + b) % 3 != 0 && a != x)
                .unwrap();
        assert_eq!(game_value(&g).unwrap(), naive_value(&g));
        let w = Matrix::from_fn(3, 2, |i, j| ratio((i + 2 * j + 1) as i64, 30));
        let g = g.with_dist(w).unwrap();
        let r = game_value_with_budget(&g, DEFAULT_VALUE_BUDGET).unwrap();
        assert_eq!(r.value, naive_value(&g));
        assert_eq!(prover_payoff(&g, &r.s1, &r.s2).unwrap(), r.value);
    }

    #[test]
    fn duplication_keeps_value() {
        let g = TwoProverGame::<Rational>::free(vec![2, 2, 2], vec![2, 2, 2], |x, y, a, b| (a ^ b) == ((x + y) % 2))
            .unwrap();
        let v = game_value(&g).unwrap();
        let d = g.duplicate_questions(true, true).unwrap();
        assert!(d.is_free());
        assert_eq!(d.num_x(), 6);
        assert_eq!(game_value(&d).unwrap(), v);
        let s1 = ProverStrategy::new(vec![0, 1, 0]);
        let s2 = ProverStrategy::new(vec![1, 1, 0]);
        assert_eq!(prover_payoff(&d, &s1.repeated(), &s2.repeated()).unwrap(), prover_payoff(&g, &s1, &s2).unwrap());
    }

    #[test]
    fn uniformity_gap_cases() {
        assert_eq!(uniformity_gap(&[ratio(1, 2), ratio(1, 2)], 2).unwrap(), int(0));
        assert_eq!(uniformity_gap(&[int(1), int(0)], 2).unwrap(), int(1));
        assert_eq!(uniformity_gap(&[int(0), int(0)], 2).unwrap(), int(1));
        assert!(matches!(uniformity_gap::<Rational>(&[], 0), Err(Error::Parameter(_))));
    }

    #[test]
    fn induced_game_on_bare_rc_block() {
        // G is just the RC block: R = C = V
        let f = TwoProverGame::free(vec![2, 2], vec![2, 2], |x, y, a, b| (a == b) == (x == y)).unwrap();
        let rows = f.row_labels();
        let cols = f.col_labels();
        let v = Matrix::from_fn(4, 4, |i, j| {
            if f.verify(rows[i].0, cols[j].0, rows[i].1, cols[j].1) {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let g = BimatrixGame::new(v.clone(), v).unwrap().with_blocks(vec![Block::new("RC", 0..4, 0..4)]).unwrap();
        // mass split over both answers of question 0 on the row side
        let p = MixedProfile::new(
            vec![ratio(1, 4), ratio(1, 4), ratio(1, 2), int(0)],
            vec![ratio(1, 2), int(0), int(0), ratio(1, 2)],
        )
        .unwrap();
        let r = induced_two_prover(&f, &g, &p).unwrap();
        assert_eq!(r.x_marginal, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(r.y_marginal, vec![ratio(1, 2), ratio(1, 2)]);
        assert_eq!(r.game.mass(), int(1));
        // each question now carries one answer
        for q in 0..2 {
            let pos = (0..2).filter(|a| r.canonical.x[2 * q + a].is_positive()).count();
            assert!(pos <= 1);
        }
        let payoff = prover_payoff(&r.game, &r.s_x, &r.s_y).unwrap();
        let before = crate::game::regret_report(&g, &p).unwrap().row_payoff;
        assert!(payoff >= before);
    }

    #[test]
    fn induced_needs_rc_block() {
        let f = constant(true);
        let g = BimatrixGame::from_rows(vec![vec![int(1); 4]; 4], vec![vec![int(1); 4]; 4]).unwrap();
        let p = MixedProfile::pure(4, 4, 0, 0);
        assert!(matches!(induced_two_prover(&f, &g, &p), Err(Error::Validation(_))));
    }
}
