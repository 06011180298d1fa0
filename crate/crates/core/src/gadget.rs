//! The hardness game built from a free game, its rescaling, the completeness
//! certificate, and the two extensions used for the decision problems.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, Block, Matrix, MixedProfile};
use crate::prover::{prover_payoff, ProverStrategy, TwoProverGame};
use crate::scalar::{int, ratio, Rational};
use num_traits::{One, Signed, Zero};

/// Default cap on the number of half-subset rows (and columns).
pub const DEFAULT_HALF_CAP: usize = 1 << 16;

/// Constants shared by the construction. All exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    pub g: Rational,
    pub delta: Rational,
    pub eps_star: Rational,
    pub delta_star: Rational,
    pub n_star: Rational,
    pub u_frak: Rational,
    pub d1_payoff: Rational,
}

pub fn g_const() -> Rational {
    ratio(1, 138)
}

impl ReductionParams {
    /// Parameters for a gadget built with soundness gap `delta ∈ (0, 1]`.
    pub fn with_delta(delta: Rational) -> Result<Self> {
        if !delta.is_positive() || delta > Rational::one() {
            return Err(Error::Parameter(format!("δ = {delta} is outside (0,1]")));
        }
        let g = g_const();
        let four_g_delta = int(4) * &g * &delta;
        let eps_star = (Rational::one() - &four_g_delta) / int(8);
        let u_frak = ratio(10, 8) - &delta / int(522);
        let d1_payoff = int(4) / (Rational::one() + four_g_delta);
        let n_star = Rational::one() / &delta;
        Ok(ReductionParams { g, delta: delta.clone(), eps_star, delta_star: delta, n_star, u_frak, d1_payoff })
    }

    /// `4gδ`.
    pub fn four_g_delta(&self) -> Rational {
        int(4) * &self.g * &self.delta
    }

    /// Approximation guarantee of the certificate on the unscaled game: `1 − 4gδ`.
    pub fn eps_unscaled(&self) -> Rational {
        Rational::one() - self.four_g_delta()
    }

    /// Same guarantee after rescaling: `(1 − 4gδ)/8`.
    pub fn eps_rescaled(&self) -> Rational {
        self.eps_unscaled() / int(8)
    }

    /// Payoff of every D1 row against a uniform column marginal: `2/(1 + 4gδ)`.
    pub fn d1_row_payoff(&self) -> Rational {
        &self.d1_payoff / int(2)
    }

    /// `1 − ε*/(1 − ε*)`.
    pub fn concentration_threshold(&self) -> Rational {
        Rational::one() - &self.eps_star / (Rational::one() - &self.eps_star)
    }
}

/// `δ*` from `ε* = (1 − 4gδ*)/8`, with `n* = 1/δ*` and `𝔲 = 10/8 − δ*/522`.
pub fn derive_params(eps_star: &Rational) -> Result<ReductionParams> {
    let delta_star = (Rational::one() - int(8) * eps_star) * int(138) / int(4);
    if !delta_star.is_positive() || delta_star >= Rational::one() {
        let lo = (Rational::one() - int(4) * g_const()) / int(8);
        return Err(Error::Parameter(format!(
            "ε* = {eps_star} gives δ* = {delta_star} ∉ (0,1]; ε* must lie in ({lo}, 1/8)"
        )));
    }
    ReductionParams::with_delta(delta_star)
}

/// Indicator vectors of all `q/2`-subsets of `0..q`, index sets in
/// lexicographic order (`q = 2` gives `[10, 01]`).
pub fn half_subsets(q: usize, cap: usize) -> Result<Vec<Vec<bool>>> {
    if q % 2 == 1 {
        return Err(Error::Parameter(format!("q = {q} is odd; duplicate the questions first")));
    }
    let h = q / 2;
    let count = binomial(q, h);
    if count > cap as u128 {
        return Err(Error::Resource(format!("C({q},{h}) = {count} half-subsets exceeds the cap of {cap}")));
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut idx: Vec<usize> = (0..h).collect();
    loop {
        let mut v = vec![false; q];
        for &i in &idx {
            v[i] = true;
        }
        out.push(v);
        // next combination
        let Some(p) = (0..h).rev().find(|&p| idx[p] < q - h + p) else { break };
        idx[p] += 1;
        for r in p + 1..h {
            idx[r] = idx[r - 1] + 1;
        }
    }
    Ok(out)
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// What a row or column of a gadget game stands for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Label {
    /// Question and answer of the free game.
    Answer { question: usize, answer: usize },
    /// Index into the half-subset list of the opposite side.
    Half(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GadgetGame {
    /// Unscaled game with blocks `RC`, `D2`, `D1`, `ZERO`.
    pub game: BimatrixGame<Rational>,
    /// The free game actually encoded (questions doubled if they were odd).
    pub free_game: TwoProverGame<Rational>,
    pub params: ReductionParams,
    pub row_index: Vec<Label>,
    pub col_index: Vec<Label>,
    /// Half-subsets of `Y` (D1 rows) and of `X` (D2 columns).
    pub half_y: Vec<Vec<bool>>,
    pub half_x: Vec<Vec<bool>>,
    pub duplicated_x: bool,
    pub duplicated_y: bool,
}

impl GadgetGame {
    pub fn rc_rows(&self) -> usize {
        self.free_game.total_answers_x()
    }

    pub fn rc_cols(&self) -> usize {
        self.free_game.total_answers_y()
    }

    /// Game row of the D1 row that selects the `|Y|/2` questions with the most
    /// mass in `y_marginal` (lowest index wins ties).
    pub fn top_half_row(&self, y_marginal: &[Rational]) -> usize {
        let ny = self.free_game.num_y();
        let mut order: Vec<usize> = (0..ny).collect();
        order.sort_by(|&a, &b| y_marginal[b].cmp(&y_marginal[a]).then(a.cmp(&b)));
        let mut f = vec![false; ny];
        for &q in &order[..ny / 2] {
            f[q] = true;
        }
        let h = self.half_y.iter().position(|v| *v == f).expect("every half-subset is listed");
        self.rc_rows() + h
    }

    /// Expands strategies of the original free game when questions were doubled.
    pub fn lift_strategies(&self, s1: &ProverStrategy, s2: &ProverStrategy) -> (ProverStrategy, ProverStrategy) {
        let lift = |s: &ProverStrategy, dup: bool, n: usize| {
            if dup && s.answers.len() * 2 == n {
                s.repeated()
            } else {
                s.clone()
            }
        };
        (lift(s1, self.duplicated_x, self.free_game.num_x()), lift(s2, self.duplicated_y, self.free_game.num_y()))
    }
}

/// Lays out `[[RC, D2], [D1, ZERO]]` from a free game.
pub fn build_hardness_game(f: &TwoProverGame<Rational>, params: &ReductionParams) -> Result<GadgetGame> {
    build_hardness_game_with_cap(f, params, DEFAULT_HALF_CAP)
}

pub fn build_hardness_game_with_cap(
    f: &TwoProverGame<Rational>,
    params: &ReductionParams,
    half_cap: usize,
) -> Result<GadgetGame> {
    if !f.is_free() {
        return Err(Error::Precondition("the hardness game needs a free game (uniform D)".into()));
    }
    let (dup_x, dup_y) = (f.num_x() % 2 == 1, f.num_y() % 2 == 1);
    let free_game = if dup_x || dup_y { f.duplicate_questions(dup_x, dup_y)? } else { f.clone() };
    let half_y = half_subsets(free_game.num_y(), half_cap)?;
    let half_x = half_subsets(free_game.num_x(), half_cap)?;
    let rows_lab = free_game.row_labels();
    let cols_lab = free_game.col_labels();
    let (n_rc, m_rc) = (rows_lab.len(), cols_lab.len());
    let rows = n_rc + half_y.len();
    let cols = m_rc + half_x.len();
    let d = params.d1_payoff.clone();
    let neg_d = -d.clone();

    let build_row = |i: usize| -> (Vec<Rational>, Vec<Rational>) {
        let mut r = Vec::with_capacity(cols);
        let mut c = Vec::with_capacity(cols);
        if i < n_rc {
            let (x, a) = rows_lab[i];
            for &(y, b) in &cols_lab {
                let v = if free_game.verify(x, y, a, b) { Rational::one() } else { Rational::zero() };
                r.push(v.clone());
                c.push(v);
            }
            for fx in &half_x {
                if fx[x] {
                    r.push(neg_d.clone());
                    c.push(d.clone());
                } else {
                    r.push(Rational::zero());
                    c.push(Rational::zero());
                }
            }
        } else {
            let fy = &half_y[i - n_rc];
            for &(y, _) in &cols_lab {
                if fy[y] {
                    r.push(d.clone());
                    c.push(neg_d.clone());
                } else {
                    r.push(Rational::zero());
                    c.push(Rational::zero());
                }
            }
            r.resize(cols, Rational::zero());
            c.resize(cols, Rational::zero());
        }
        (r, c)
    };
    let (r_rows, c_rows): (Vec<_>, Vec<_>) = (0..rows).into_par_iter().map(build_row).unzip();
    let game = BimatrixGame::new(Matrix::from_rows(r_rows)?, Matrix::from_rows(c_rows)?)?.with_blocks(vec![
        Block::new("RC", 0..n_rc, 0..m_rc),
        Block::new("D2", 0..n_rc, m_rc..cols),
        Block::new("D1", n_rc..rows, 0..m_rc),
        Block::new("ZERO", n_rc..rows, m_rc..cols),
    ])?;
    let row_index = rows_lab
        .iter()
        .map(|&(question, answer)| Label::Answer { question, answer })
        .chain((0..half_y.len()).map(Label::Half))
        .collect();
    let col_index = cols_lab
        .iter()
        .map(|&(question, answer)| Label::Answer { question, answer })
        .chain((0..half_x.len()).map(Label::Half))
        .collect();
    Ok(GadgetGame {
        game,
        free_game,
        params: params.clone(),
        row_index,
        col_index,
        half_y,
        half_x,
        duplicated_x: dup_x,
        duplicated_y: dup_y,
    })
}

/// Adds 4 and divides by 8, after checking every payoff lies in `(−4, 4)`.
pub fn rescale_game(gg: &GadgetGame) -> Result<BimatrixGame<Rational>> {
    let (lo, hi) = (int(-4), int(4));
    let bad = gg.game.row_payoffs().entries().chain(gg.game.col_payoffs().entries()).find(|e| **e <= lo || **e >= hi);
    if let Some(e) = bad {
        return Err(Error::Validation(format!("payoff {e} is outside (-4,4)")));
    }
    crate::game::affine_rescale(&gg.game, &hi, &int(8))
}

/// Uniform over the winning answer rows and columns.
pub fn completeness_certificate(
    f: &TwoProverGame<Rational>,
    s1: &ProverStrategy,
    s2: &ProverStrategy,
    gg: &GadgetGame,
) -> Result<MixedProfile<Rational>> {
    if prover_payoff(f, s1, s2)? != Rational::one() {
        return Err(Error::Precondition("the strategies do not win the free game with certainty".into()));
    }
    let (s1, s2) = gg.lift_strategies(s1, s2);
    let fg = &gg.free_game;
    if prover_payoff(fg, &s1, &s2)? != Rational::one() {
        return Err(Error::Precondition("the strategies do not win the encoded free game".into()));
    }
    let pick = |labels: &[Label], s: &ProverStrategy| -> Vec<usize> {
        labels
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(l, Label::Answer { question, answer } if s.answers[*question] == *answer))
            .map(|(i, _)| i)
            .collect()
    };
    let rows = pick(&gg.row_index, &s1);
    let cols = pick(&gg.col_index, &s2);
    MixedProfile::uniform_on(gg.game.rows(), gg.game.cols(), &rows, &cols)
}

fn five_eighths() -> Rational {
    ratio(5, 8)
}

fn check_unit_interval(g: &BimatrixGame<Rational>) -> Result<()> {
    let ok = |e: &Rational| !e.is_negative() && *e <= Rational::one();
    if g.row_payoffs().entries().chain(g.col_payoffs().entries()).all(ok) {
        Ok(())
    } else {
        Err(Error::Validation("payoffs must lie in [0,1]".into()))
    }
}

fn base_blocks(g: &BimatrixGame<Rational>) -> Vec<Block> {
    if g.blocks().is_empty() {
        vec![Block::new("base", 0..g.rows(), 0..g.cols())]
    } else {
        g.blocks().to_vec()
    }
}

/// Appends a row and column pair to `g`:
/// row vs old columns `row_pay`, old rows vs column `col_pay`, and `corner`.
fn append_border(
    g: &BimatrixGame<Rational>,
    row_pay: (Rational, Rational),
    col_pay: (Rational, Rational),
    corner: (Rational, Rational),
    names: [&str; 3],
) -> Result<BimatrixGame<Rational>> {
    let (n, m) = (g.rows(), g.cols());
    let pick = |i: usize, j: usize, first: bool| -> Rational {
        let sel = |p: &(Rational, Rational)| if first { p.0.clone() } else { p.1.clone() };
        match (i < n, j < m) {
            (true, true) => {
                if first {
                    g.row_payoffs().get(i, j).clone()
                } else {
                    g.col_payoffs().get(i, j).clone()
                }
            }
            (false, true) => sel(&row_pay),
            (true, false) => sel(&col_pay),
            (false, false) => sel(&corner),
        }
    };
    let r = Matrix::from_fn(n + 1, m + 1, |i, j| pick(i, j, true));
    let c = Matrix::from_fn(n + 1, m + 1, |i, j| pick(i, j, false));
    let mut blocks = base_blocks(g);
    blocks.push(Block::new(names[0], n..n + 1, 0..m));
    blocks.push(Block::new(names[1], 0..n, m..m + 1));
    blocks.push(Block::new(names[2], n..n + 1, m..m + 1));
    BimatrixGame::new(r, c)?.with_blocks(blocks)
}

/// `G′`: a row `𝔦` worth `5/8 + ε*` to the row player against every old
/// column, the mirrored column `𝔧`, and the pure equilibrium `(𝔦, 𝔧)` paying 1.
pub fn extend_gprime(gs: &BimatrixGame<Rational>, eps_star: &Rational) -> Result<BimatrixGame<Rational>> {
    if !eps_star.is_positive() || *eps_star >= ratio(1, 8) {
        return Err(Error::Parameter(format!("ε* = {eps_star} is outside (0,1/8)")));
    }
    check_unit_interval(gs)?;
    let high = five_eighths() + eps_star;
    append_border(
        gs,
        (high.clone(), Rational::zero()),
        (Rational::zero(), high),
        (Rational::one(), Rational::one()),
        ["extra-row-i", "extra-col-j", "corner-ij"],
    )
}

/// `G″`: a row `𝔦′` and column `𝔧′` paying `(5/8, 5/8)` against everything old,
/// and `(0, 0)` against each other.
pub fn extend_gdoubleprime(gp: &BimatrixGame<Rational>) -> Result<BimatrixGame<Rational>> {
    if gp.block("corner-ij").is_none() {
        return Err(Error::Validation("G″ extends a game produced by extend_gprime".into()));
    }
    let half = (five_eighths(), five_eighths());
    append_border(
        gp,
        half.clone(),
        half,
        (Rational::zero(), Rational::zero()),
        ["extra-row-i2", "extra-col-j2", "corner-i2j2"],
    )
}

/// Index of `𝔦`/`𝔧` in `G′` (or `G″`).
pub fn frak_i(g: &BimatrixGame<Rational>) -> Option<usize> {
    g.block("extra-row-i").map(|b| b.rows.start)
}

pub fn frak_j(g: &BimatrixGame<Rational>) -> Option<usize> {
    g.block("extra-col-j").map(|b| b.cols.start)
}

/// Index of `𝔦′`/`𝔧′` in `G″`.
pub fn frak_i2(g: &BimatrixGame<Rational>) -> Option<usize> {
    g.block("extra-row-i2").map(|b| b.rows.start)
}

pub fn frak_j2(g: &BimatrixGame<Rational>) -> Option<usize> {
    g.block("extra-col-j2").map(|b| b.cols.start)
}

/// Pads a profile of `G_s` with zeros for the `G′` border.
pub fn embed_in_gprime(p: &MixedProfile<Rational>) -> MixedProfile<Rational> {
    let mut x = p.x.clone();
    let mut y = p.y.clone();
    x.push(Rational::zero());
    y.push(Rational::zero());
    MixedProfile { x, y }
}

/// The satisfiable-case `G″` profile: `x` uniform over the certificate rows
/// and `𝔦′`, `y` the certificate column extended by zeros.
pub fn gdoubleprime_witness(
    cert: &MixedProfile<Rational>,
    gpp: &BimatrixGame<Rational>,
) -> Result<MixedProfile<Rational>> {
    let i2 = frak_i2(gpp).ok_or_else(|| Error::Validation("game has no 𝔦′ row".into()))?;
    if cert.x.len() + 2 != gpp.rows() || cert.y.len() + 2 != gpp.cols() {
        return Err(Error::Shape("certificate does not come from the base of this G″".into()));
    }
    let mut rows = cert.support_x();
    rows.push(i2);
    let mut y = cert.y.clone();
    y.extend([Rational::zero(), Rational::zero()]);
    let x = MixedProfile::uniform_on(gpp.rows(), 1, &rows, &[0])?.x;
    MixedProfile::new(x, y)
}
