//! Bimatrix games, mixed profiles, regret and equilibrium checks.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged matrix rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }
}

/// Named rectangle of the payoff table, half-open on both axes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub name: String,
    pub rows: Range<usize>,
    pub cols: Range<usize>,
}

impl Block {
    pub fn new(name: impl Into<String>, rows: Range<usize>, cols: Range<usize>) -> Self {
        Block { name: name.into(), rows, cols }
    }

    fn area(&self) -> usize {
        self.rows.len() * self.cols.len()
    }
}

/// Two-player strategic-form game `(R, C)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BimatrixGame<T> {
    row_payoffs: Matrix<T>,
    col_payoffs: Matrix<T>,
    blocks: Vec<Block>,
}

impl<T: Scalar> BimatrixGame<T> {
    pub fn new(row_payoffs: Matrix<T>, col_payoffs: Matrix<T>) -> Result<Self> {
        if row_payoffs.rows() != col_payoffs.rows() || row_payoffs.cols() != col_payoffs.cols() {
            return Err(Error::Shape(format!(
                "R is {}x{} but C is {}x{}",
                row_payoffs.rows(),
                row_payoffs.cols(),
                col_payoffs.rows(),
                col_payoffs.cols()
            )));
        }
        if row_payoffs.rows() == 0 || row_payoffs.cols() == 0 {
            return Err(Error::Shape("games need at least one row and one column".into()));
        }
        Ok(BimatrixGame { row_payoffs, col_payoffs, blocks: Vec::new() })
    }

    pub fn from_rows(r: Vec<Vec<T>>, c: Vec<Vec<T>>) -> Result<Self> {
        Self::new(Matrix::from_rows(r)?, Matrix::from_rows(c)?)
    }

    /// Game whose row player receives `r` and column player `-r`.
    pub fn zero_sum(r: Matrix<T>) -> Result<Self> {
        let c = r.map(|v| -v.clone());
        Self::new(r, c)
    }

    /// Attaches block annotations; they must tile the whole table.
    pub fn with_blocks(mut self, blocks: Vec<Block>) -> Result<Self> {
        check_partition(self.rows(), self.cols(), &blocks)?;
        self.blocks = blocks;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.row_payoffs.rows()
    }

    pub fn cols(&self) -> usize {
        self.row_payoffs.cols()
    }

    pub fn row_payoffs(&self) -> &Matrix<T> {
        &self.row_payoffs
    }

    pub fn col_payoffs(&self) -> &Matrix<T> {
        &self.col_payoffs
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }

    /// The same game seen from the other side: `(Cᵀ, Rᵀ)`.
    pub fn swap_roles(&self) -> Self {
        let blocks = self.blocks.iter().map(|b| Block::new(b.name.clone(), b.cols.clone(), b.rows.clone())).collect();
        BimatrixGame { row_payoffs: self.col_payoffs.transpose(), col_payoffs: self.row_payoffs.transpose(), blocks }
    }

    /// Converts every payoff into another scalar type.
    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> BimatrixGame<U> {
        BimatrixGame {
            row_payoffs: self.row_payoffs.map(&f),
            col_payoffs: self.col_payoffs.map(&f),
            blocks: self.blocks.clone(),
        }
    }

    /// `(R·y)_i` for every row.
    pub fn row_values(&self, y: &[T]) -> Vec<T> {
        (0..self.rows()).map(|i| dot(self.row_payoffs.row(i), y)).collect()
    }

    /// `(xᵀ·C)_j` for every column.
    pub fn col_values(&self, x: &[T]) -> Vec<T> {
        let mut out = vec![T::zero(); self.cols()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, c) in self.col_payoffs.row(i).iter().enumerate() {
                out[j] = out[j].clone() + xi.clone() * c.clone();
            }
        }
        out
    }

    pub fn min_entry(&self) -> T {
        self.row_payoffs
            .entries()
            .chain(self.col_payoffs.entries())
            .cloned()
            .reduce(|a, b| if b < a { b } else { a })
            .expect("nonempty game")
    }

    pub fn max_entry(&self) -> T {
        self.row_payoffs.entries().chain(self.col_payoffs.entries()).cloned().reduce(T::max_of).expect("nonempty game")
    }

    pub fn check_profile(&self, p: &MixedProfile<T>) -> Result<()> {
        if p.x.len() != self.rows() || p.y.len() != self.cols() {
            return Err(Error::Shape(format!(
                "profile is {}x{} but game is {}x{}",
                p.x.len(),
                p.y.len(),
                self.rows(),
                self.cols()
            )));
        }
        Ok(())
    }
}

fn check_partition(rows: usize, cols: usize, blocks: &[Block]) -> Result<()> {
    if blocks.is_empty() {
        return Ok(());
    }
    for b in blocks {
        if b.rows.end > rows || b.cols.end > cols || b.rows.start > b.rows.end || b.cols.start > b.cols.end {
            return Err(Error::Validation(format!("block {} outside {rows}x{cols}", b.name)));
        }
    }
    let total: usize = blocks.iter().map(Block::area).sum();
    if total != rows * cols {
        return Err(Error::Validation(format!("blocks cover {total} cells, table has {}", rows * cols)));
    }
    for (k, a) in blocks.iter().enumerate() {
        for b in &blocks[k + 1..] {
            let rows_meet = a.rows.start < b.rows.end && b.rows.start < a.rows.end;
            let cols_meet = a.cols.start < b.cols.end && b.cols.start < a.cols.end;
            if rows_meet && cols_meet {
                return Err(Error::Validation(format!("blocks {} and {} overlap", a.name, b.name)));
            }
        }
    }
    Ok(())
}

pub(crate) fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).filter(|(_, v)| !v.is_zero()).fold(T::zero(), |acc, (u, v)| acc + u.clone() * v.clone())
}

/// Row and column mixed strategies.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MixedProfile<T> {
    pub x: Vec<T>,
    pub y: Vec<T>,
}

impl<T: Scalar> MixedProfile<T> {
    /// Builds a profile, rejecting anything that is not a pair of distributions.
    pub fn new(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        check_distribution("x", &x)?;
        check_distribution("y", &y)?;
        Ok(MixedProfile { x, y })
    }

    /// Divides each side by its sum; only nonnegative input with positive mass.
    pub fn normalized(x: Vec<T>, y: Vec<T>) -> Result<Self> {
        let norm = |name: &str, v: Vec<T>| -> Result<Vec<T>> {
            if v.iter().any(|e| e.is_negative()) {
                return Err(Error::Validation(format!("{name} has a negative entry")));
            }
            let s = v.iter().cloned().fold(T::zero(), |a, b| a + b);
            if !s.is_positive() {
                return Err(Error::Validation(format!("{name} has no mass")));
            }
            Ok(v.into_iter().map(|e| e / s.clone()).collect())
        };
        Self::new(norm("x", x)?, norm("y", y)?)
    }

    pub fn pure(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        MixedProfile { x: unit(rows, i), y: unit(cols, j) }
    }

    /// Uniform over the given supports.
    pub fn uniform_on(rows: usize, cols: usize, sx: &[usize], sy: &[usize]) -> Result<Self> {
        Self::new(uniform_over(rows, sx)?, uniform_over(cols, sy)?)
    }

    pub fn support_x(&self) -> Vec<usize> {
        support(&self.x)
    }

    pub fn support_y(&self) -> Vec<usize> {
        support(&self.y)
    }

    pub fn swapped(&self) -> Self {
        MixedProfile { x: self.y.clone(), y: self.x.clone() }
    }

    pub fn map_scalar<U: Scalar>(&self, f: impl Fn(&T) -> U) -> MixedProfile<U> {
        MixedProfile { x: self.x.iter().map(&f).collect(), y: self.y.iter().map(&f).collect() }
    }
}

pub(crate) fn unit<T: Scalar>(n: usize, i: usize) -> Vec<T> {
    let mut v = vec![T::zero(); n];
    v[i] = T::one();
    v
}

fn uniform_over<T: Scalar>(n: usize, s: &[usize]) -> Result<Vec<T>> {
    if s.is_empty() || s.iter().any(|&i| i >= n) {
        return Err(Error::Validation(format!("bad support {s:?} for {n} strategies")));
    }
    let mut v = vec![T::zero(); n];
    let w = T::one() / T::from_usize(s.len());
    for &i in s {
        v[i] = v[i].clone() + w.clone();
    }
    Ok(v)
}

pub(crate) fn support<T: Scalar>(v: &[T]) -> Vec<usize> {
    v.iter().enumerate().filter(|(_, e)| e.is_positive()).map(|(i, _)| i).collect()
}

fn check_distribution<T: Scalar>(name: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Validation(format!("{name} is empty")));
    }
    if let Some(i) = v.iter().position(|e| e.is_negative()) {
        return Err(Error::Validation(format!("{name}[{i}] = {} is negative", v[i])));
    }
    let sum = v.iter().cloned().fold(T::zero(), |a, b| a + b);
    if (sum.clone() - T::one()).abs() > T::sum_tolerance() {
        return Err(Error::Validation(format!("{name} sums to {sum}, not 1")));
    }
    Ok(())
}

/// Exact regret figures for one profile.
#[derive(Clone, Debug, PartialEq)]
pub struct RegretReport<T> {
    pub row_regret: T,
    pub col_regret: T,
    pub row_pure_regret: T,
    pub col_pure_regret: T,
    pub row_payoff: T,
    pub col_payoff: T,
    pub welfare: T,
    /// Lowest-index pure best response of the row player.
    pub row_best_response: usize,
    pub col_best_response: usize,
}

impl<T: Scalar> RegretReport<T> {
    pub fn is_eps_ne(&self, eps: &T) -> bool {
        self.row_regret <= *eps && self.col_regret <= *eps
    }

    pub fn is_eps_wsne(&self, eps: &T) -> bool {
        self.row_pure_regret <= *eps && self.col_pure_regret <= *eps
    }
}

/// Returns (max, lowest argmax, min over `support`).
fn spread<T: Scalar>(values: &[T], support: &[usize]) -> (T, usize, T) {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    let worst =
        support.iter().map(|&i| values[i].clone()).reduce(|a, b| if b < a { b } else { a }).expect("nonempty support");
    (values[best].clone(), best, worst)
}

pub fn regret_report<T: Scalar>(game: &BimatrixGame<T>, p: &MixedProfile<T>) -> Result<RegretReport<T>> {
    game.check_profile(p)?;
    check_distribution("x", &p.x)?;
    check_distribution("y", &p.y)?;
    let ry = game.row_values(&p.y);
    let xc = game.col_values(&p.x);
    let row_payoff = dot(&p.x, &ry);
    let col_payoff = dot(&xc, &p.y);
    let (row_max, row_best_response, row_min_supp) = spread(&ry, &p.support_x());
    let (col_max, col_best_response, col_min_supp) = spread(&xc, &p.support_y());
    Ok(RegretReport {
        row_regret: row_max.clone() - row_payoff.clone(),
        col_regret: col_max.clone() - col_payoff.clone(),
        row_pure_regret: row_max - row_min_supp,
        col_pure_regret: col_max - col_min_supp,
        welfare: row_payoff.clone() + col_payoff.clone(),
        row_payoff,
        col_payoff,
        row_best_response,
        col_best_response,
    })
}

pub fn is_eps_ne<T: Scalar>(game: &BimatrixGame<T>, p: &MixedProfile<T>, eps: &T) -> Result<bool> {
    Ok(regret_report(game, p)?.is_eps_ne(eps))
}

pub fn is_eps_wsne<T: Scalar>(game: &BimatrixGame<T>, p: &MixedProfile<T>, eps: &T) -> Result<bool> {
    Ok(regret_report(game, p)?.is_eps_wsne(eps))
}

/// `xᵀRy + xᵀCy`.
pub fn social_welfare<T: Scalar>(game: &BimatrixGame<T>, p: &MixedProfile<T>) -> Result<T> {
    game.check_profile(p)?;
    let ry = game.row_values(&p.y);
    let xc = game.col_values(&p.x);
    Ok(dot(&p.x, &ry) + dot(&xc, &p.y))
}

/// Largest coordinatewise probability gap over both players.
pub fn tv_distance<T: Scalar>(p1: &MixedProfile<T>, p2: &MixedProfile<T>) -> Result<T> {
    if p1.x.len() != p2.x.len() || p1.y.len() != p2.y.len() {
        return Err(Error::Shape("profiles have different dimensions".into()));
    }
    Ok(p1
        .x
        .iter()
        .zip(&p2.x)
        .chain(p1.y.iter().zip(&p2.y))
        .map(|(a, b)| (a.clone() - b.clone()).abs())
        .fold(T::zero(), T::max_of))
}

/// Maps every payoff `e` to `(e + shift) / divisor`.
pub fn affine_rescale<T: Scalar>(game: &BimatrixGame<T>, shift: &T, divisor: &T) -> Result<BimatrixGame<T>> {
    if !divisor.is_positive() {
        return Err(Error::Parameter(format!("divisor must be positive, got {divisor}")));
    }
    let f = |e: &T| (e.clone() + shift.clone()) / divisor.clone();
    Ok(BimatrixGame {
        row_payoffs: game.row_payoffs.map(f),
        col_payoffs: game.col_payoffs.map(f),
        blocks: game.blocks.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Rational};
    use num_traits::Zero;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    fn matching_pennies() -> BimatrixGame<Rational> {
        let r = q(&[&[1, 0], &[0, 1]]);
        let c = q(&[&[0, 1], &[1, 0]]);
        BimatrixGame::from_rows(r, c).unwrap()
    }

    fn half() -> Vec<Rational> {
        vec![ratio(1, 2), ratio(1, 2)]
    }

    #[test]
    fn matching_pennies_uniform_has_no_regret() {
        let g = matching_pennies();
        let p = MixedProfile::new(half(), half()).unwrap();
        let r = regret_report(&g, &p).unwrap();
        assert!(r.row_regret.is_zero() && r.col_regret.is_zero());
        assert!(r.row_pure_regret.is_zero() && r.col_pure_regret.is_zero());
        assert!(is_eps_ne(&g, &p, &int(0)).unwrap());
        assert!(is_eps_wsne(&g, &p, &int(0)).unwrap());
    }

    #[test]
    fn one_by_one_game() {
        let g = BimatrixGame::from_rows(q(&[&[1]]), q(&[&[1]])).unwrap();
        let p = MixedProfile::pure(1, 1, 0, 0);
        let r = regret_report(&g, &p).unwrap();
        assert!(r.row_regret.is_zero() && r.col_regret.is_zero());
        assert_eq!(r.welfare, int(2));
        assert_eq!(social_welfare(&g, &p).unwrap(), int(2));
    }

    #[test]
    fn off_diagonal_pure_profile_regret_is_one() {
        let r = q(&[&[1, 0], &[0, 0]]);
        let g = BimatrixGame::from_rows(r.clone(), q(&[&[1, 0], &[0, 0]])).unwrap();
        let p = MixedProfile::pure(2, 2, 1, 0);
        let rep = regret_report(&g, &p).unwrap();
        // brute force over pure deviations
        let payoff = |i: usize| r[i][0].clone();
        let brute = (0..2).map(payoff).max().unwrap() - payoff(1);
        assert_eq!(rep.row_regret, brute);
        assert_eq!(rep.row_regret, int(1));
        assert!(!is_eps_ne(&g, &p, &ratio(1, 2)).unwrap());
        assert!(is_eps_ne(&g, &p, &int(1)).unwrap());
    }

    #[test]
    fn mixing_over_unequal_rows_breaks_wsne() {
        let g = BimatrixGame::from_rows(q(&[&[1, 1], &[0, 0]]), q(&[&[0, 0], &[0, 0]])).unwrap();
        let p = MixedProfile::new(half(), half()).unwrap();
        let rep = regret_report(&g, &p).unwrap();
        assert_eq!(rep.row_pure_regret, int(1));
        assert!(!is_eps_wsne(&g, &p, &ratio(1, 2)).unwrap());
    }

    #[test]
    fn pure_exact_ne_is_zero_wsne() {
        let g = BimatrixGame::from_rows(q(&[&[2, 0], &[0, 1]]), q(&[&[2, 0], &[0, 1]])).unwrap();
        for k in 0..2 {
            let p = MixedProfile::pure(2, 2, k, k);
            assert!(is_eps_wsne(&g, &p, &int(0)).unwrap());
        }
    }

    #[test]
    fn zero_sum_welfare_vanishes() {
        let g = BimatrixGame::zero_sum(Matrix::from_rows(q(&[&[3, -1], &[-2, 5]])).unwrap()).unwrap();
        let p = MixedProfile::new(vec![ratio(1, 3), ratio(2, 3)], vec![ratio(1, 5), ratio(4, 5)]).unwrap();
        assert!(social_welfare(&g, &p).unwrap().is_zero());
    }

    #[test]
    fn tv_distance_cases() {
        let p = MixedProfile::new(half(), half()).unwrap();
        assert!(tv_distance(&p, &p).unwrap().is_zero());
        let a = MixedProfile::<Rational>::pure(2, 2, 0, 0);
        let b = MixedProfile::<Rational>::pure(2, 2, 1, 1);
        assert_eq!(tv_distance(&a, &b).unwrap(), int(1));
        let c = MixedProfile::new(vec![ratio(3, 4), ratio(1, 4)], vec![ratio(3, 4), ratio(1, 4)]).unwrap();
        assert_eq!(tv_distance(&p, &c).unwrap(), ratio(1, 4));
        let d = MixedProfile::<Rational>::pure(3, 2, 0, 0);
        assert!(matches!(tv_distance(&a, &d), Err(Error::Shape(_))));
    }

    #[test]
    fn rescale_maps_gadget_range_onto_unit_interval() {
        let g = BimatrixGame::from_rows(q(&[&[-4, 4, 0]]), q(&[&[4, -4, 0]])).unwrap();
        let s = affine_rescale(&g, &int(4), &int(8)).unwrap();
        assert_eq!(*s.row_payoffs().get(0, 0), int(0));
        assert_eq!(*s.row_payoffs().get(0, 1), int(1));
        assert_eq!(*s.row_payoffs().get(0, 2), ratio(1, 2));
        assert!(matches!(affine_rescale(&g, &int(0), &int(0)), Err(Error::Parameter(_))));
    }

    #[test]
    fn shape_and_validation_errors() {
        let g = matching_pennies();
        let wrong = MixedProfile::<Rational>::pure(3, 2, 0, 0);
        assert!(matches!(regret_report(&g, &wrong), Err(Error::Shape(_))));
        assert!(MixedProfile::new(vec![ratio(1, 2), ratio(1, 3)], half()).is_err());
        assert!(MixedProfile::new(vec![int(2), int(-1)], half()).is_err());
        let unnormalized = MixedProfile { x: vec![int(1), int(1)], y: half() };
        assert!(matches!(regret_report(&g, &unnormalized), Err(Error::Validation(_))));
        let fixed = MixedProfile::normalized(vec![int(1), int(1)], half()).unwrap();
        assert_eq!(fixed.x, half());
    }

    #[test]
    fn blocks_must_tile() {
        let g = matching_pennies();
        let ok = vec![Block::new("a", 0..1, 0..2), Block::new("b", 1..2, 0..2)];
        assert!(g.clone().with_blocks(ok).is_ok());
        let gap = vec![Block::new("a", 0..1, 0..2)];
        assert!(g.clone().with_blocks(gap).is_err());
        let overlap = vec![Block::new("a", 0..2, 0..1), Block::new("b", 0..1, 0..2)];
        assert!(g.with_blocks(overlap).is_err());
    }

    #[test]
    fn float_instance_agrees_on_easy_case() {
        let g = matching_pennies().map_scalar(f64::from_rational);
        let p = MixedProfile::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
        let r = regret_report(&g, &p).unwrap();
        assert!(r.row_regret.abs() < 1e-12);
    }
}
