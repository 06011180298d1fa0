//! 3SAT input, brute-force satisfiability oracles, the clause/variable
//! incidence graph and its partition, and the clause–variable free game.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::prover::{ProverStrategy, TwoProverGame};
use crate::scalar::{ratio, Rational};

/// Largest variable count the brute-force oracles will enumerate by default.
pub const DEFAULT_ASSIGNMENT_BUDGET: u32 = 24;
/// Default cap on answers per question of the free game.
pub const DEFAULT_ANSWER_CAP: usize = 1 << 16;

/// A literal is a nonzero DIMACS integer: `v` or `-v` for variable `v ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf3Formula {
    num_vars: usize,
    clauses: Vec<[i32; 3]>,
    max_var_degree: usize,
}

impl Cnf3Formula {
    pub fn new(num_vars: usize, clauses: Vec<[i32; 3]>) -> Result<Self> {
        for (k, c) in clauses.iter().enumerate() {
            for &lit in c {
                let v = lit.unsigned_abs() as usize;
                if lit == 0 || v > num_vars {
                    return Err(Error::Validation(format!("clause {k} uses undeclared variable {lit}")));
                }
            }
            let v: Vec<u32> = c.iter().map(|l| l.unsigned_abs()).collect();
            if v[0] == v[1] || v[0] == v[2] || v[1] == v[2] {
                return Err(Error::Validation(format!("clause {k} repeats a variable: {c:?}")));
            }
        }
        let mut degree = vec![0usize; num_vars];
        for c in &clauses {
            for &lit in c {
                degree[lit.unsigned_abs() as usize - 1] += 1;
            }
        }
        let max_var_degree = degree.into_iter().max().unwrap_or(0);
        Ok(Cnf3Formula { num_vars, clauses, max_var_degree })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[[i32; 3]] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// `d`: the most clauses any one variable appears in.
    pub fn max_var_degree(&self) -> usize {
        self.max_var_degree
    }

    /// 0-based variable indices of a clause.
    pub fn clause_vars(&self, c: usize) -> [usize; 3] {
        self.clauses[c].map(|l| l.unsigned_abs() as usize - 1)
    }

    /// `assignment[v]` is the value of variable `v + 1`.
    pub fn satisfies_clause(&self, c: usize, assignment: impl Fn(usize) -> bool) -> bool {
        self.clauses[c].iter().any(|&l| assignment(l.unsigned_abs() as usize - 1) == (l > 0))
    }

    pub fn satisfied_count(&self, assignment: &[bool]) -> usize {
        (0..self.clauses.len()).filter(|&c| self.satisfies_clause(c, |v| assignment[v])).count()
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            s.push_str(&format!("{} {} {} 0\n", c[0], c[1], c[2]));
        }
        s
    }

    fn masks(&self) -> Result<Vec<(u64, u64)>> {
        if self.num_vars > 64 {
            return Err(Error::Resource(format!("{} variables is beyond brute force", self.num_vars)));
        }
        Ok(self
            .clauses
            .iter()
            .map(|c| {
                c.iter().fold((0u64, 0u64), |(p, n), &l| {
                    let bit = 1u64 << (l.unsigned_abs() - 1);
                    if l > 0 {
                        (p | bit, n)
                    } else {
                        (p, n | bit)
                    }
                })
            })
            .collect())
    }

    fn check_budget(&self, max_vars: u32) -> Result<Vec<(u64, u64)>> {
        if self.num_vars > max_vars as usize {
            return Err(Error::Resource(format!("2^{} assignments exceeds the budget of 2^{max_vars}", self.num_vars)));
        }
        self.masks()
    }
}

fn count_sat(masks: &[(u64, u64)], assign: u64) -> usize {
    masks.iter().filter(|(p, n)| assign & p != 0 || !assign & n != 0).count()
}

fn bits(assign: u64, n: usize) -> Vec<bool> {
    (0..n).map(|v| assign >> v & 1 == 1).collect()
}

/// Reads DIMACS CNF; every clause must have exactly three literals over
/// distinct variables.
pub fn parse_dimacs(text: &str) -> Result<Cnf3Formula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut start_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if header.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                return Err(Error::format(line_no, format!("bad problem line `{line}`")));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| Error::format(line_no, format!("bad count `{s}`")));
            header = Some((num(parts[2])?, num(parts[3])?));
            continue;
        }
        let Some((nv, _)) = header else {
            return Err(Error::format(line_no, "clause before the `p cnf` line"));
        };
        for tok in line.split_whitespace() {
            let lit: i32 = tok.parse().map_err(|_| Error::format(line_no, format!("bad literal `{tok}`")))?;
            if current.is_empty() {
                start_line = line_no;
            }
            if lit == 0 {
                if current.len() != 3 {
                    return Err(Error::format(
                        start_line,
                        format!("clause has {} literals, expected 3", current.len()),
                    ));
                }
                let c = [current[0], current[1], current[2]];
                let vars = c.map(|l| l.unsigned_abs());
                if vars[0] == vars[1] || vars[0] == vars[2] || vars[1] == vars[2] {
                    return Err(Error::format(start_line, format!("clause repeats a variable: {c:?}")));
                }
                clauses.push(c);
                current.clear();
            } else {
                if lit.unsigned_abs() as usize > nv {
                    return Err(Error::format(
                        line_no,
                        format!("variable {} is not declared (p cnf {nv} ..)", lit.abs()),
                    ));
                }
                current.push(lit);
            }
        }
    }
    let Some((nv, nc)) = header else {
        return Err(Error::format(1, "missing `p cnf` line"));
    };
    if !current.is_empty() {
        return Err(Error::format(start_line, "last clause is not terminated by 0"));
    }
    if clauses.len() != nc {
        return Err(Error::format(1, format!("header declares {nc} clauses, found {}", clauses.len())));
    }
    Cnf3Formula::new(nv, clauses)
}

/// Maximum fraction of simultaneously satisfiable clauses; 1 for no clauses.
pub fn max_sat_fraction(f: &Cnf3Formula) -> Result<Rational> {
    max_sat_fraction_with_budget(f, DEFAULT_ASSIGNMENT_BUDGET)
}

pub fn max_sat_fraction_with_budget(f: &Cnf3Formula, max_vars: u32) -> Result<Rational> {
    let masks = f.check_budget(max_vars)?;
    if masks.is_empty() {
        return Ok(ratio(1, 1));
    }
    let best = (0..1u64 << f.num_vars).into_par_iter().map(|a| count_sat(&masks, a)).max().unwrap_or(0);
    Ok(ratio(best as i64, masks.len() as i64))
}

/// Lowest-index satisfying assignment (variable 1 is bit 0), if any.
pub fn satisfying_assignment(f: &Cnf3Formula) -> Result<Option<Vec<bool>>> {
    let masks = f.check_budget(DEFAULT_ASSIGNMENT_BUDGET)?;
    let m = masks.len();
    let hit = (0..1u64 << f.num_vars).into_par_iter().find_first(|&a| count_sat(&masks, a) == m);
    Ok(hit.map(|a| bits(a, f.num_vars)))
}

/// Bipartite graph with `left` and `right` vertex classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    pub left: usize,
    pub right: usize,
    /// `adj[r]` lists the left neighbours of right vertex `r`.
    pub adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn new(left: usize, adj: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(r) = adj.iter().position(|n| n.iter().any(|&l| l >= left)) {
            return Err(Error::Validation(format!("right vertex {r} has a neighbour outside 0..{left}")));
        }
        Ok(BipartiteGraph { left, right: adj.len(), adj })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.left];
        for n in &self.adj {
            for &l in n {
                deg[l] += 1;
            }
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        let l = self.left_degrees().into_iter().max().unwrap_or(0);
        let r = self.adj.iter().map(Vec::len).max().unwrap_or(0);
        l.max(r)
    }
}

/// Variables on the left, clauses on the right.
pub fn incidence_graph(f: &Cnf3Formula) -> BipartiteGraph {
    let adj = (0..f.num_clauses()).map(|c| f.clause_vars(c).to_vec()).collect();
    BipartiteGraph { left: f.num_vars(), right: f.num_clauses(), adj }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartitePartition {
    /// Left vertex sets, each sorted.
    pub s: Vec<Vec<usize>>,
    /// Right vertex sets, each sorted.
    pub t: Vec<Vec<usize>>,
}

impl BipartitePartition {
    pub fn k(&self) -> usize {
        self.s.len()
    }

    /// Checks both partition properties and the size and edge bounds.
    pub fn check(&self, g: &BipartiteGraph, d: usize) -> Result<()> {
        let cover = |sets: &[Vec<usize>], n: usize, side: &str| -> Result<()> {
            let mut seen = vec![false; n];
            for &v in sets.iter().flatten() {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::Validation(format!("{side} vertex {v} is out of range or repeated")));
                }
            }
            if let Some(v) = seen.iter().position(|s| !s) {
                return Err(Error::Validation(format!("{side} vertex {v} is in no set")));
            }
            Ok(())
        };
        cover(&self.s, g.left, "left")?;
        cover(&self.t, g.right, "right")?;
        let bound = 2 * ceil_sqrt(g.left + g.right);
        if let Some(set) = self.s.iter().chain(&self.t).find(|s| s.len() > bound) {
            return Err(Error::Validation(format!("a set has {} vertices, bound is {bound}", set.len())));
        }
        let owner = owners(&self.s, g.left);
        let edges = edge_counts(g, &owner, &self.t, self.k());
        for (i, row) in edges.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e > 2 * d * d {
                    return Err(Error::Validation(format!("S{i}-T{j} has {e} edges, bound is {}", 2 * d * d)));
                }
            }
        }
        Ok(())
    }
}

fn owners(s: &[Vec<usize>], left: usize) -> Vec<usize> {
    let mut owner = vec![0; left];
    for (i, set) in s.iter().enumerate() {
        for &v in set {
            owner[v] = i;
        }
    }
    owner
}

fn edge_counts(g: &BipartiteGraph, owner: &[usize], t: &[Vec<usize>], k: usize) -> Vec<Vec<usize>> {
    let mut e = vec![vec![0; t.len()]; k];
    for (j, set) in t.iter().enumerate() {
        for &r in set {
            for &l in &g.adj[r] {
                e[owner[l]][j] += 1;
            }
        }
    }
    e
}

pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// `K = ⌈√n⌉` sets per side. Left vertices are cut into contiguous blocks
/// whose sizes differ by at most one; right vertices go first-fit into the
/// lowest `T_j` that keeps `|T_j| < 2⌈√n⌉` and every `S_i`–`T_j` edge count
/// at most `2d²`.
pub fn partition_bipartite(g: &BipartiteGraph, d: usize) -> Result<BipartitePartition> {
    if g.left == 0 || g.right == 0 {
        return Err(Error::Precondition("both sides of the graph must be nonempty".into()));
    }
    if g.max_degree() > d {
        return Err(Error::Precondition(format!("graph has degree {} > d = {d}", g.max_degree())));
    }
    let k = ceil_sqrt(g.left + g.right);
    let cap = 2 * k;
    let (base, extra) = (g.left / k, g.left % k);
    let mut s = Vec::with_capacity(k);
    let mut next = 0;
    for i in 0..k {
        let len = base + usize::from(i < extra);
        s.push((next..next + len).collect::<Vec<_>>());
        next += len;
    }
    let owner = owners(&s, g.left);
    let mut t: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut edges = vec![vec![0usize; k]; k];
    for r in 0..g.right {
        let mut add = vec![0usize; k];
        for &l in &g.adj[r] {
            add[owner[l]] += 1;
        }
        let j = (0..k)
            .find(|&j| t[j].len() < cap && (0..k).all(|i| edges[i][j] + add[i] <= 2 * d * d))
            .ok_or_else(|| Error::Internal(format!("no feasible set for right vertex {r}")))?;
        t[j].push(r);
        for i in 0..k {
            edges[i][j] += add[i];
        }
    }
    Ok(BipartitePartition { s, t })
}

/// Result of a gap-amplification step.
#[derive(Clone, Debug, PartialEq)]
pub struct Amplified {
    pub formula: Cnf3Formula,
    pub requested_eps: Rational,
    /// `1 − max_sat_fraction`, when it was computable.
    pub achieved_gap: Option<Rational>,
}

/// Extension point for a PCP-style gap amplifier.
pub trait GapAmplifier {
    fn amplify(&self, f: &Cnf3Formula, eps: &Rational) -> Result<Amplified>;
}

/// Returns the formula unchanged.
#[derive(Clone, Copy, Debug, Default)]
pub struct IdentityAmplifier;

impl GapAmplifier for IdentityAmplifier {
    fn amplify(&self, f: &Cnf3Formula, eps: &Rational) -> Result<Amplified> {
        let achieved_gap = max_sat_fraction(f).ok().map(|m| ratio(1, 1) - m);
        Ok(Amplified { formula: f.clone(), requested_eps: eps.clone(), achieved_gap })
    }
}

pub fn pcp_amplify(f: &Cnf3Formula, eps: &Rational) -> Result<Amplified> {
    IdentityAmplifier.amplify(f, eps)
}

/// `F_φ` together with the variable bookkeeping needed to read strategies.
#[derive(Clone, Debug, PartialEq)]
pub struct ClauseVariableGame {
    pub game: TwoProverGame<Rational>,
    /// Sorted variables behind each row question (after duplication).
    pub x_vars: Vec<Vec<usize>>,
    /// Sorted variables appearing in each column question's clauses.
    pub y_vars: Vec<Vec<usize>>,
    pub y_clauses: Vec<Vec<usize>>,
    /// Whether the question lists were doubled to make their size even.
    pub duplicated: bool,
}

impl ClauseVariableGame {
    /// Both provers answer according to one global assignment.
    pub fn strategies_from_assignment(&self, assignment: &[bool]) -> (ProverStrategy, ProverStrategy) {
        let encode =
            |vars: &Vec<usize>| vars.iter().enumerate().fold(0, |acc, (k, &v)| acc | usize::from(assignment[v]) << k);
        (
            ProverStrategy::new(self.x_vars.iter().map(encode).collect()),
            ProverStrategy::new(self.y_vars.iter().map(encode).collect()),
        )
    }
}

/// Builds `F_φ`. Answers are bit vectors over the question's sorted variables
/// (bit `k` is the `k`-th variable). When `K` is odd both question lists are
/// repeated so that later half-subset constructions are possible.
pub fn build_clause_variable_free_game(
    f: &Cnf3Formula,
    partition: &BipartitePartition,
    answer_cap: usize,
) -> Result<ClauseVariableGame> {
    partition.check(&incidence_graph(f), partition_degree(f))?;
    let x_vars: Vec<Vec<usize>> = partition.s.clone();
    let y_clauses: Vec<Vec<usize>> = partition.t.clone();
    let y_vars: Vec<Vec<usize>> = y_clauses
        .iter()
        .map(|cs| {
            let mut v: Vec<usize> = cs.iter().flat_map(|&c| f.clause_vars(c)).collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    let size = |vars: &Vec<usize>| -> Result<usize> {
        if vars.len() >= usize::BITS as usize - 1 || 1usize << vars.len() > answer_cap {
            return Err(Error::Resource(format!(
                "a question over {} variables has 2^{} answers, cap is {answer_cap}",
                vars.len(),
                vars.len()
            )));
        }
        Ok(1 << vars.len())
    };
    let ax = x_vars.iter().map(size).collect::<Result<Vec<_>>>()?;
    let ay = y_vars.iter().map(size).collect::<Result<Vec<_>>>()?;

    // position of each variable inside a column question's answer bits
    let pos: Vec<Vec<Option<usize>>> = y_vars
        .iter()
        .map(|vars| {
            let mut p = vec![None; f.num_vars()];
            for (k, &v) in vars.iter().enumerate() {
                p[v] = Some(k);
            }
            p
        })
        .collect();
    // which column answers satisfy all their clauses
    let sat: Vec<Vec<bool>> = (0..y_vars.len())
        .map(|j| {
            (0..ay[j])
                .map(|b| y_clauses[j].iter().all(|&c| f.satisfies_clause(c, |v| b >> pos[j][v].unwrap() & 1 == 1)))
                .collect()
        })
        .collect();
    let game = TwoProverGame::free(ax, ay, |x, y, a, b| {
        sat[y][b]
            && x_vars[x].iter().enumerate().all(|(k, &v)| pos[y][v].map_or(true, |kb| (a >> k & 1) == (b >> kb & 1)))
    })?;
    let mut out = ClauseVariableGame { game, x_vars, y_vars, y_clauses, duplicated: false };
    if partition.k() % 2 == 1 {
        out.game = out.game.duplicate_questions(true, true)?;
        out.x_vars = [out.x_vars.clone(), out.x_vars].concat();
        out.y_vars = [out.y_vars.clone(), out.y_vars].concat();
        out.y_clauses = [out.y_clauses.clone(), out.y_clauses].concat();
        out.duplicated = true;
    }
    Ok(out)
}

/// Degree bound used for the partition: clauses always have degree 3.
pub fn partition_degree(f: &Cnf3Formula) -> usize {
    f.max_var_degree().max(3)
}

/// Incidence graph, partition and `F_φ` in one step.
pub fn formula_to_free_game(f: &Cnf3Formula, answer_cap: usize) -> Result<ClauseVariableGame> {
    let g = incidence_graph(f);
    let p = partition_bipartite(&g, partition_degree(f))?;
    build_clause_variable_free_game(f, &p, answer_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::{game_value, prover_payoff};
    use crate::scalar::int;

    pub(crate) fn full_pattern() -> Cnf3Formula {
        let mut clauses = Vec::new();
        for m in 0..8 {
            let lit = |v: i32, bit: i32| if m >> bit & 1 == 1 { -v } else { v };
            clauses.push([lit(1, 0), lit(2, 1), lit(3, 2)]);
        }
        Cnf3Formula::new(3, clauses).unwrap()
    }

    #[test]
    fn dimacs_basics() {
        let f = parse_dimacs("c tiny\np cnf 3 1\n1 2 3 0\n").unwrap();
        assert_eq!((f.num_vars(), f.num_clauses(), f.max_var_degree()), (3, 1, 1));
        assert!(parse_dimacs("p cnf 3 1\n1 1 2 0\n").is_err());
        assert!(matches!(parse_dimacs("p cnf 3 1\n1 2 0\n"), Err(Error::Format { .. })));
        assert!(matches!(parse_dimacs("p cnf 3 1\n1 2 4 0\n"), Err(Error::Format { .. })));
        // clauses may wrap lines
        let f = parse_dimacs("p cnf 4 2\n1 -2\n 3 0 -1 2 4 0\n%\n0\n").unwrap();
        assert_eq!(f.clauses(), &[[1, -2, 3], [-1, 2, 4]]);
        assert_eq!(parse_dimacs(&f.to_dimacs()).unwrap(), f);
    }

    #[test]
    fn full_pattern_degree_and_value() {
        let f = full_pattern();
        assert_eq!(f.max_var_degree(), 8);
        assert_eq!(max_sat_fraction(&f).unwrap(), ratio(7, 8));
        assert_eq!(incidence_graph(&f).edge_count(), 24);
        assert_eq!(satisfying_assignment(&f).unwrap(), None);
    }

    #[test]
    fn max_sat_easy_cases() {
        let f = Cnf3Formula::new(3, vec![[1, 2, 3], [-1, 2, 3]]).unwrap();
        assert_eq!(max_sat_fraction(&f).unwrap(), int(1));
        let empty = Cnf3Formula::new(2, vec![]).unwrap();
        assert_eq!(max_sat_fraction(&empty).unwrap(), int(1));
        let big = Cnf3Formula::new(40, vec![[1, 2, 3]]).unwrap();
        assert!(matches!(max_sat_fraction(&big), Err(Error::Resource(_))));
    }

    #[test]
    fn disjoint_clauses_give_three_edges_each() {
        let f = Cnf3Formula::new(9, vec![[1, 2, 3], [4, 5, 6], [7, 8, 9]]).unwrap();
        assert_eq!(incidence_graph(&f).edge_count(), 9);
    }

    #[test]
    fn ceil_sqrt_values() {
        let got: Vec<usize> = [1, 2, 4, 5, 8, 9, 10, 400, 401].iter().map(|&n| ceil_sqrt(n)).collect();
        assert_eq!(got, vec![1, 2, 2, 3, 3, 3, 4, 20, 21]);
    }

    #[test]
    fn partition_small_cases() {
        let f = Cnf3Formula::new(4, vec![[1, 2, 3], [2, 3, 4], [-1, -3, 4], [1, -2, -4]]).unwrap();
        let g = incidence_graph(&f);
        let p = partition_bipartite(&g, 3).unwrap();
        assert_eq!(p.k(), 3);
        p.check(&g, 3).unwrap();
        let one = Cnf3Formula::new(3, vec![[1, 2, 3]]).unwrap();
        let g = incidence_graph(&one);
        let p = partition_bipartite(&g, 3).unwrap();
        assert_eq!(p.k(), 2);
        p.check(&g, 3).unwrap();
        assert!(matches!(partition_bipartite(&g, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn full_pattern_partition_layout() {
        let f = full_pattern();
        let p = partition_bipartite(&incidence_graph(&f), 8).unwrap();
        assert_eq!(p.s, vec![vec![0], vec![1], vec![2], vec![]]);
        // 2⌈√11⌉ = 8 and 2d² = 128 let every clause into T1
        assert_eq!(p.t[0], (0..8).collect::<Vec<_>>());
        assert!(p.t[1..].iter().all(Vec::is_empty));
    }

    #[test]
    fn amplifier_stub_is_identity() {
        let f = full_pattern();
        let a = pcp_amplify(&f, &ratio(1, 10)).unwrap();
        assert_eq!(a.formula, f);
        assert_eq!(a.requested_eps, ratio(1, 10));
        assert_eq!(a.achieved_gap, Some(ratio(1, 8)));
    }

    #[test]
    fn free_game_values() {
        let sat = Cnf3Formula::new(4, vec![[1, 2, 3], [-1, 2, -4], [-2, 3, 4]]).unwrap();
        let cv = formula_to_free_game(&sat, DEFAULT_ANSWER_CAP).unwrap();
        assert!(cv.game.is_free());
        assert_eq!(cv.game.num_x() % 2, 0);
        assert_eq!(game_value(&cv.game).unwrap(), int(1));
        let a = satisfying_assignment(&sat).unwrap().unwrap();
        let (s1, s2) = cv.strategies_from_assignment(&a);
        assert_eq!(prover_payoff(&cv.game, &s1, &s2).unwrap(), int(1));

        let unsat = formula_to_free_game(&full_pattern(), DEFAULT_ANSWER_CAP).unwrap();
        let v = game_value(&unsat.game).unwrap();
        assert!(v < int(1));
        assert!(v <= int(1) - ratio(1, 8) / int(16));
    }

    #[test]
    fn no_shared_variables_accepts_satisfying_answer() {
        let f = Cnf3Formula::new(6, vec![[4, 5, 6]]).unwrap();
        let cv = formula_to_free_game(&f, DEFAULT_ANSWER_CAP).unwrap();
        // find a row question disjoint from the clause's variables
        let (x, y) = (0..cv.game.num_x())
            .flat_map(|x| (0..cv.game.num_y()).map(move |y| (x, y)))
            .find(|&(x, y)| !cv.y_clauses[y].is_empty() && cv.x_vars[x].iter().all(|v| !cv.y_vars[y].contains(v)))
            .unwrap();
        let b = 1; // first clause variable true
        for a in 0..cv.game.answers_x()[x] {
            assert!(cv.game.verify(x, y, a, b));
        }
    }

    #[test]
    fn answer_cap_is_enforced() {
        let f = full_pattern();
        assert!(matches!(formula_to_free_game(&f, 4), Err(Error::Resource(_))));
    }
}
