//! Independent small-game oracles: exact equilibria by support enumeration
//! and grid scans.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{is_eps_ne, BimatrixGame, Matrix, MixedProfile};
use crate::kernel::{multiset_count, Frac, IntGame, Layer};
use crate::linalg::solve_unique;
use crate::scalar::{int, Rational};
use num_traits::{One, Signed, Zero};

/// Largest side accepted by the oracles.
pub const ORACLE_MAX_SIDE: usize = 8;

#[derive(Clone, Debug, PartialEq)]
pub struct NeOracle {
    /// Exact equilibria from support enumeration, deduplicated, in discovery order.
    pub exact: Vec<MixedProfile<Rational>>,
    /// Grid profiles whose regret is within `slack`.
    pub grid: Vec<MixedProfile<Rational>>,
    /// `3·M·max(n,m)/grid`, enough for every exact equilibrium to have a
    /// listed grid neighbour.
    pub slack: Rational,
}

impl NeOracle {
    pub fn all(&self) -> impl Iterator<Item = &MixedProfile<Rational>> {
        self.exact.iter().chain(&self.grid)
    }
}

fn check_small(game: &BimatrixGame<Rational>) -> Result<()> {
    if game.rows() > ORACLE_MAX_SIDE || game.cols() > ORACLE_MAX_SIDE {
        return Err(Error::Resource(format!(
            "oracle handles at most {ORACLE_MAX_SIDE}x{ORACLE_MAX_SIDE}, game is {}x{}",
            game.rows(),
            game.cols()
        )));
    }
    Ok(())
}

pub fn exhaustive_ne_oracle(game: &BimatrixGame<Rational>, grid: usize) -> Result<NeOracle> {
    check_small(game)?;
    if grid == 0 {
        return Err(Error::Parameter("grid resolution must be at least 1".into()));
    }
    let m = game
        .row_payoffs()
        .entries()
        .chain(game.col_payoffs().entries())
        .map(|e| e.abs())
        .fold(Rational::zero(), Rational::max);
    let slack = int(3) * m * int(game.rows().max(game.cols()) as i64) / int(grid as i64);
    Ok(NeOracle { exact: support_enumeration(game)?, grid: grid_eps_ne(game, &slack, grid)?, slack })
}

/// Every exact equilibrium whose supports determine it uniquely.
pub fn support_enumeration(game: &BimatrixGame<Rational>) -> Result<Vec<MixedProfile<Rational>>> {
    check_small(game)?;
    let (n, m) = (game.rows(), game.cols());
    let subsets = |k: usize| -> Vec<Vec<usize>> {
        (1u32..1 << k).map(|mask| (0..k).filter(|&i| mask >> i & 1 == 1).collect()).collect()
    };
    let mut sxs = subsets(n);
    let mut sys = subsets(m);
    sxs.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    sys.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    let ct = game.col_payoffs().transpose();
    let found: Vec<Vec<MixedProfile<Rational>>> = sxs
        .par_iter()
        .map(|sx| {
            sys.iter()
                .filter_map(|sy| {
                    let y = indifferent(game.row_payoffs(), sx, sy)?;
                    let x = indifferent(&ct, sy, sx)?;
                    Some(MixedProfile { x, y })
                })
                .collect()
        })
        .collect();
    let mut out: Vec<MixedProfile<Rational>> = Vec::new();
    for p in found.into_iter().flatten() {
        if !out.contains(&p) {
            if !is_eps_ne(game, &p, &Rational::zero())? {
                return Err(Error::Internal("support enumeration produced a non-equilibrium".into()));
            }
            out.push(p);
        }
    }
    Ok(out)
}

/// Opponent strategy on `sy` making every row of `sx` a best response with
/// equal payoff, when that strategy is unique.
fn indifferent(r: &Matrix<Rational>, sx: &[usize], sy: &[usize]) -> Option<Vec<Rational>> {
    // unknowns: y_j for j in sy, then v
    let s = sy.len();
    let mut a = Vec::with_capacity(sx.len() + 1);
    let mut b = Vec::with_capacity(sx.len() + 1);
    for &i in sx {
        let mut row: Vec<Rational> = sy.iter().map(|&j| r.get(i, j).clone()).collect();
        row.push(-Rational::one());
        a.push(row);
        b.push(Rational::zero());
    }
    let mut sum = vec![Rational::one(); s];
    sum.push(Rational::zero());
    a.push(sum);
    b.push(Rational::one());
    let sol = solve_unique(&a, &b)?;
    if sol[..s].iter().any(|v| v.is_negative()) {
        return None;
    }
    let mut y = vec![Rational::zero(); r.cols()];
    for (k, &j) in sy.iter().enumerate() {
        y[j] = sol[k].clone();
    }
    let v = &sol[s];
    let best = (0..r.rows()).all(|i| crate::game::dot(r.row(i), &y) <= *v);
    best.then_some(y)
}

/// Every pair of `grid`-uniform strategies that is an `eps`-NE.
pub fn grid_eps_ne(game: &BimatrixGame<Rational>, eps: &Rational, grid: usize) -> Result<Vec<MixedProfile<Rational>>> {
    grid_eps_ne_with_budget(game, eps, grid, crate::search::DEFAULT_SEARCH_BUDGET)
}

pub fn grid_eps_ne_with_budget(
    game: &BimatrixGame<Rational>,
    eps: &Rational,
    grid: usize,
    budget: u128,
) -> Result<Vec<MixedProfile<Rational>>> {
    let pairs = multiset_count(game.rows(), grid).saturating_mul(multiset_count(game.cols(), grid));
    if pairs > budget {
        return Err(Error::Resource(format!("grid {grid} has {pairs} profile pairs, budget is {budget}")));
    }
    let ig = IntGame::new(game)?;
    let e = Frac::from_rational(eps)?;
    let layer = Layer::new(&ig, grid);
    let hits: Vec<(usize, usize)> = (0..layer.xs.len())
        .into_par_iter()
        .flat_map_iter(|ix| {
            let (layer, ig) = (&layer, &ig);
            (0..layer.ys.len()).filter(move |&iy| layer.is_eps_ne(ig, &layer.eval(ix, iy), e)).map(move |iy| (ix, iy))
        })
        .collect();
    Ok(hits.into_iter().map(|(ix, iy)| layer.profile(ix, iy)).collect())
}
