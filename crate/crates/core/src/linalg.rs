//! Dense elimination and a two-phase simplex over any [`Scalar`].
//!
//! Pivoting follows Bland's rule so exact instances terminate without
//! perturbation.

use crate::scalar::Scalar;

/// Solves `a·z = b`, returning `Some` only when the solution exists and is unique.
pub fn solve_unique<T: Scalar>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut t: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivot_cols = Vec::with_capacity(n);
    for col in 0..n {
        let best = (pivot_row..m)
            .filter(|&i| !t[i][col].is_zero())
            .max_by(|&i, &k| t[i][col].abs().partial_cmp(&t[k][col].abs()).unwrap_or(std::cmp::Ordering::Equal));
        let Some(p) = best else { return None };
        t.swap(pivot_row, p);
        let inv = T::one() / t[pivot_row][col].clone();
        for v in t[pivot_row].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..m {
            if i != pivot_row && !t[i][col].is_zero() {
                let f = t[i][col].clone();
                for j in col..=n {
                    let d = f.clone() * t[pivot_row][j].clone();
                    t[i][j] = t[i][j].clone() - d;
                }
            }
        }
        pivot_cols.push(col);
        pivot_row += 1;
    }
    // leftover rows must read 0 = 0
    if t[pivot_row..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| t[i][n].clone()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint<T> {
    pub coeffs: Vec<T>,
    pub rel: Relation,
    pub rhs: T,
}

impl<T> Constraint<T> {
    pub fn new(coeffs: Vec<T>, rel: Relation, rhs: T) -> Self {
        Constraint { coeffs, rel, rhs }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { value: T, point: Vec<T> },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum ColKind {
    Decision,
    Slack,
    Artificial,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    kinds: Vec<ColKind>,
    width: usize,
}

impl<T: Scalar> Tableau<T> {
    fn rhs(&self, i: usize) -> &T {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = T::one() / self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.clone() - f.clone() * p.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs `z_j - c_j` and the current objective value.
    fn reduced(&self, cost: &[T]) -> (Vec<T>, T) {
        let mut z: Vec<T> = cost.iter().map(|c| -c.clone()).collect();
        let mut value = T::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (j, zj) in z.iter_mut().enumerate() {
                *zj = zj.clone() + cb.clone() * self.rows[i][j].clone();
            }
            value = value + cb.clone() * self.rhs(i).clone();
        }
        (z, value)
    }

    /// Runs primal simplex for `max cost·z`; `false` means unbounded.
    fn optimize(&mut self, cost: &[T], allow: impl Fn(ColKind) -> bool) -> bool {
        loop {
            let (z, _) = self.reduced(cost);
            let entering = (0..self.width).find(|&j| allow(self.kinds[j]) && z[j].is_negative());
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i).clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((k, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, c);
        }
    }
}

/// Maximizes `objective·z` subject to `constraints` and `z ≥ 0`.
pub fn maximize<T: Scalar>(objective: &[T], constraints: &[Constraint<T>]) -> LpOutcome<T> {
    let n = objective.len();
    let mut kinds = vec![ColKind::Decision; n];
    let mut rows: Vec<(Vec<T>, Relation, T)> = constraints
        .iter()
        .map(|c| {
            debug_assert_eq!(c.coeffs.len(), n);
            if c.rhs.is_negative() {
                let rel = match c.rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
                (c.coeffs.iter().map(|v| -v.clone()).collect(), rel, -c.rhs.clone())
            } else {
                (c.coeffs.clone(), c.rel, c.rhs.clone())
            }
        })
        .collect();
    let m = rows.len();
    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = n + slack_count + art_count;
    kinds.extend(std::iter::repeat(ColKind::Slack).take(slack_count));
    kinds.extend(std::iter::repeat(ColKind::Artificial).take(art_count));
    let mut table = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (n, n + slack_count);
    for (coeffs, rel, rhs) in rows.drain(..) {
        let mut row = coeffs;
        row.resize(width + 1, T::zero());
        row[width] = rhs;
        match rel {
            Relation::Le => {
                row[next_slack] = T::one();
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -T::one();
                next_slack += 1;
                row[next_art] = T::one();
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = T::one();
                basis.push(next_art);
                next_art += 1;
            }
        }
        table.push(row);
    }
    let mut tab = Tableau { rows: table, basis, kinds, width };

    if art_count > 0 {
        let phase1: Vec<T> =
            tab.kinds.iter().map(|k| if *k == ColKind::Artificial { -T::one() } else { T::zero() }).collect();
        tab.optimize(&phase1, |_| true);
        let (_, value) = tab.reduced(&phase1);
        if value.is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive zero-valued artificials out of the basis or drop redundant rows
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.kinds[tab.basis[i]] == ColKind::Artificial {
                let col = (0..tab.width).find(|&j| tab.kinds[j] != ColKind::Artificial && !tab.rows[i][j].is_zero());
                match col {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = objective.to_vec();
    cost.resize(width, T::zero());
    if !tab.optimize(&cost, |k| k != ColKind::Artificial) {
        return LpOutcome::Unbounded;
    }
    let (_, value) = tab.reduced(&cost);
    let mut point = vec![T::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            point[b] = tab.rhs(i).clone();
        }
    }
    LpOutcome::Optimal { value, point }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio, Rational};

    fn c(coeffs: &[i64], rel: Relation, rhs: i64) -> Constraint<Rational> {
        Constraint::new(coeffs.iter().map(|&v| int(v)).collect(), rel, int(rhs))
    }

    #[test]
    fn unique_solution() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        let z = solve_unique(&a, &[int(3), int(5)]).unwrap();
        assert_eq!(z, vec![ratio(4, 5), ratio(7, 5)]);
    }

    #[test]
    fn singular_and_inconsistent_systems() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(solve_unique(&a, &[int(1), int(2)]).is_none());
        let over = vec![vec![int(1)], vec![int(1)]];
        assert!(solve_unique(&over, &[int(1), int(2)]).is_none());
        assert_eq!(solve_unique(&over, &[int(3), int(3)]), Some(vec![int(3)]));
    }

    #[test]
    fn textbook_lp() {
        // max 3a + 5b, a <= 4, 2b <= 12, 3a + 2b <= 18  => (2, 6), 36
        let cons = vec![c(&[1, 0], Relation::Le, 4), c(&[0, 2], Relation::Le, 12), c(&[3, 2], Relation::Le, 18)];
        match maximize(&[int(3), int(5)], &cons) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, int(36));
                assert_eq!(point, vec![int(2), int(6)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn equality_and_ge_rows() {
        // max a, a + b = 1, b >= 1/2
        let cons = vec![c(&[1, 1], Relation::Eq, 1), Constraint::new(vec![int(0), int(1)], Relation::Ge, ratio(1, 2))];
        match maximize(&[int(1), int(0)], &cons) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, ratio(1, 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let cons = vec![c(&[1], Relation::Le, 1), c(&[1], Relation::Ge, 2)];
        assert_eq!(maximize(&[int(1)], &cons), LpOutcome::Infeasible);
        let cons = vec![c(&[1, -1], Relation::Le, 1)];
        assert_eq!(maximize(&[int(1), int(0)], &cons), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_equalities() {
        let cons = vec![c(&[1, 1], Relation::Eq, 2), c(&[2, 2], Relation::Eq, 4), c(&[1, 0], Relation::Le, 1)];
        match maximize(&[int(0), int(1)], &cons) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, int(2));
                assert_eq!(point, vec![int(0), int(2)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_is_normalized() {
        // max -a s.t. -a <= -3  => a >= 3 => value -3
        let cons = vec![c(&[-1], Relation::Le, -3)];
        match maximize(&[int(-1)], &cons) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, int(-3)),
            other => panic!("{other:?}"),
        }
    }
}
