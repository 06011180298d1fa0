//! Exact integer evaluation of `k`-uniform profiles.
//!
//! Payoffs are scaled by the common denominator `L` of the game, so for
//! count vectors `cx`, `cy` summing to `k` the row payoff is
//! `Σ cx_i (R'cy)_i / (L k²)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::BimatrixGame;
use crate::scalar::Rational;

/// Every `k`-multiset over `0..n` as a count vector, in lexicographic order of
/// the sorted multiset (so `(k,0,..)` comes first).
pub fn k_uniform_counts(n: usize, k: usize) -> KUniform {
    KUniform { n, seq: vec![0; k], done: n == 0 || k == 0 }
}

/// The strategies of [`k_uniform_counts`] as exact probability vectors.
pub fn k_uniform_profiles(n: usize, k: usize) -> impl Iterator<Item = Vec<Rational>> {
    k_uniform_counts(n, k).map(move |c| counts_to_strategy(&c, k))
}

pub fn counts_to_strategy(counts: &[u32], k: usize) -> Vec<Rational> {
    counts.iter().map(|&c| Rational::new(BigInt::from(c), BigInt::from(k))).collect()
}

pub struct KUniform {
    n: usize,
    seq: Vec<usize>,
    done: bool,
}

impl Iterator for KUniform {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let mut counts = vec![0u32; self.n];
        for &i in &self.seq {
            counts[i] += 1;
        }
        // advance the non-decreasing sequence
        match self.seq.iter().rposition(|&i| i + 1 < self.n) {
            Some(p) => {
                let v = self.seq[p] + 1;
                for s in &mut self.seq[p..] {
                    *s = v;
                }
            }
            None => self.done = true,
        }
        Some(counts)
    }
}

/// `C(n + k − 1, k)`, saturating.
pub fn multiset_count(n: usize, k: usize) -> u128 {
    if n == 0 {
        return u128::from(k == 0);
    }
    crate::gadget::binomial(n + k - 1, k)
}

/// A rational as `num/den` with `den > 0`, both fitting in `i128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frac {
    pub num: i128,
    pub den: i128,
}

impl Frac {
    pub fn from_rational(r: &Rational) -> Result<Self> {
        let (n, d) = (r.numer().to_i128(), r.denom().to_i128());
        match (n, d) {
            (Some(num), Some(den)) => Ok(Frac { num, den }),
            _ => Err(Error::Resource(format!("{r} is too large for the integer kernel"))),
        }
    }
}

/// `a·b ≤ c·d` without overflow.
pub fn le_cross(a: i128, b: i128, c: i128, d: i128) -> bool {
    match (a.checked_mul(b), c.checked_mul(d)) {
        (Some(l), Some(r)) => l <= r,
        _ => BigInt::from(a) * BigInt::from(b) <= BigInt::from(c) * BigInt::from(d),
    }
}

/// Integer-scaled copy of a rational game.
#[derive(Clone, Debug)]
pub struct IntGame {
    pub rows: usize,
    pub cols: usize,
    pub scale: i128,
    r: Vec<i128>,
    c: Vec<i128>,
}

const ENTRY_LIMIT: i128 = 1 << 62;

impl IntGame {
    pub fn new(game: &BimatrixGame<Rational>) -> Result<Self> {
        let entries = || game.row_payoffs().entries().chain(game.col_payoffs().entries());
        let l = entries().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let scale = l
            .to_i128()
            .filter(|s| *s < ENTRY_LIMIT)
            .ok_or_else(|| Error::Resource("payoff denominators are too large for the integer kernel".into()))?;
        let conv = |e: &Rational| -> Result<i128> {
            let v = e.numer() * (&l / e.denom());
            v.to_i128()
                .filter(|v| v.abs() < ENTRY_LIMIT)
                .ok_or_else(|| Error::Resource(format!("payoff {e} is too large for the integer kernel")))
        };
        let r = game.row_payoffs().entries().map(conv).collect::<Result<Vec<_>>>()?;
        let c = game.col_payoffs().entries().map(conv).collect::<Result<Vec<_>>>()?;
        Ok(IntGame { rows: game.rows(), cols: game.cols(), scale, r, c })
    }

    pub fn r(&self, i: usize, j: usize) -> i128 {
        self.r[i * self.cols + j]
    }

    pub fn c(&self, i: usize, j: usize) -> i128 {
        self.c[i * self.cols + j]
    }

    /// `R'·cy`.
    pub fn row_values(&self, cy: &[u32]) -> Vec<i128> {
        let nz = sparse(cy);
        (0..self.rows)
            .map(|i| {
                let row = &self.r[i * self.cols..(i + 1) * self.cols];
                nz.iter().map(|&(j, w)| row[j] * w as i128).sum()
            })
            .collect()
    }

    /// `C'ᵀ·cx`.
    pub fn col_values(&self, cx: &[u32]) -> Vec<i128> {
        let mut out = vec![0i128; self.cols];
        for (i, &w) in cx.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let row = &self.c[i * self.cols..(i + 1) * self.cols];
            for (o, &v) in out.iter_mut().zip(row) {
                *o += v * w as i128;
            }
        }
        out
    }

    /// Row `i` beats row `i2` by more than `eps` on every column of `cols`.
    pub fn row_dominated(&self, i: usize, i2: usize, cols: &[usize], eps: Frac) -> bool {
        // (R'_{i2,j} − R'_{i,j}) / L > eps
        cols.iter().all(|&j| !le_cross(self.r(i2, j) - self.r(i, j), eps.den, eps.num, self.scale))
    }

    pub fn col_dominated(&self, j: usize, j2: usize, rows: &[usize], eps: Frac) -> bool {
        rows.iter().all(|&i| !le_cross(self.c(i, j2) - self.c(i, j), eps.den, eps.num, self.scale))
    }
}

/// One `k`-uniform candidate family with cached best-response values.
pub struct Layer {
    pub k: usize,
    pub xs: Vec<Vec<u32>>,
    pub ys: Vec<Vec<u32>>,
    rv: Vec<Vec<i128>>,
    cv: Vec<Vec<i128>>,
    // max of each rv / cv entry, and the supports as (index, count)
    rmax: Vec<i128>,
    cmax: Vec<i128>,
    sx: Vec<Vec<(usize, u32)>>,
    sy: Vec<Vec<(usize, u32)>>,
}

fn sparse(counts: &[u32]) -> Vec<(usize, u32)> {
    counts.iter().enumerate().filter(|(_, &w)| w > 0).map(|(i, &w)| (i, w)).collect()
}

fn max_of(v: &[i128]) -> i128 {
    v.iter().copied().max().unwrap_or(0)
}

/// Payoffs of one candidate pair as numerators over `L·k²`.
#[derive(Clone, Copy, Debug)]
pub struct Eval {
    pub row_pay: i128,
    pub col_pay: i128,
    /// `k · max_i (R'cy)_i`, also over `L·k²`.
    pub row_best: i128,
    pub col_best: i128,
}

impl Eval {
    pub fn welfare(&self) -> i128 {
        self.row_pay + self.col_pay
    }
}

impl Layer {
    pub fn new(g: &IntGame, k: usize) -> Self {
        Self::with_grid(g, k, k)
    }

    /// Rows and columns both drawn from `k`-uniform strategies.
    fn with_grid(g: &IntGame, kx: usize, ky: usize) -> Self {
        let xs: Vec<Vec<u32>> = k_uniform_counts(g.rows, kx).collect();
        let ys: Vec<Vec<u32>> = k_uniform_counts(g.cols, ky).collect();
        let rv: Vec<Vec<i128>> = ys.par_iter().map(|cy| g.row_values(cy)).collect();
        let cv: Vec<Vec<i128>> = xs.par_iter().map(|cx| g.col_values(cx)).collect();
        let rmax = rv.iter().map(|v| max_of(v)).collect();
        let cmax = cv.iter().map(|v| max_of(v)).collect();
        let sx = xs.iter().map(|c| sparse(c)).collect();
        let sy = ys.iter().map(|c| sparse(c)).collect();
        Layer { k: kx, xs, ys, rv, cv, rmax, cmax, sx, sy }
    }

    pub fn size(&self) -> u128 {
        self.xs.len() as u128 * self.ys.len() as u128
    }

    /// Lower bound on the candidate count without building the layer.
    pub fn predicted_size(g: &IntGame, k: usize) -> u128 {
        multiset_count(g.rows, k).saturating_mul(multiset_count(g.cols, k))
    }

    pub fn eval(&self, ix: usize, iy: usize) -> Eval {
        let (rv, cv) = (&self.rv[iy], &self.cv[ix]);
        let k = self.k as i128;
        let row_pay = self.sx[ix].iter().map(|&(i, w)| w as i128 * rv[i]).sum();
        let col_pay = self.sy[iy].iter().map(|&(j, w)| w as i128 * cv[j]).sum();
        let row_best = k * self.rmax[iy];
        let col_best = k * self.cmax[ix];
        Eval { row_pay, col_pay, row_best, col_best }
    }

    /// Denominator `L·k²` of the numerators in [`Eval`].
    pub fn denom(&self, g: &IntGame) -> i128 {
        g.scale * (self.k * self.k) as i128
    }

    pub fn is_eps_ne(&self, g: &IntGame, e: &Eval, eps: Frac) -> bool {
        let d = self.denom(g);
        le_cross(e.row_best - e.row_pay, eps.den, eps.num, d) && le_cross(e.col_best - e.col_pay, eps.den, eps.num, d)
    }

    pub fn profile(&self, ix: usize, iy: usize) -> crate::game::MixedProfile<Rational> {
        crate::game::MixedProfile {
            x: counts_to_strategy(&self.xs[ix], self.k),
            y: counts_to_strategy(&self.ys[iy], self.k),
        }
    }
}

/// `num / den` as an exact rational.
pub fn to_rational(num: i128, den: i128) -> Rational {
    if den.is_zero() {
        return Rational::zero();
    }
    Rational::new(BigInt::from(num), BigInt::from(den))
}
