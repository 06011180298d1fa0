//! Seeded generators for test corpora. Every generator draws from a caller
//! supplied ChaCha stream so runs are reproducible from one seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::{BimatrixGame, Matrix, MixedProfile};
use crate::sat::{BipartiteGraph, Cnf3Formula};
use crate::scalar::{ratio, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random bipartite graph with at most `max_n` vertices in total and every
/// degree at most `max_deg`. Both sides are nonempty.
pub fn random_bipartite(rng: &mut ChaCha8Rng, max_n: usize, max_deg: usize) -> BipartiteGraph {
    assert!(max_n >= 2 && max_deg >= 1);
    let n = rng.gen_range(2..=max_n);
    let left = rng.gen_range(1..n);
    let right = n - left;
    let mut deg = vec![0usize; left];
    let mut adj = Vec::with_capacity(right);
    for _ in 0..right {
        let mut open: Vec<usize> = (0..left).filter(|&l| deg[l] < max_deg).collect();
        open.shuffle(rng);
        let want = rng.gen_range(0..=max_deg.min(open.len()));
        let mut nb: Vec<usize> = open[..want].to_vec();
        nb.sort_unstable();
        for &l in &nb {
            deg[l] += 1;
        }
        adj.push(nb);
    }
    BipartiteGraph::new(left, adj).expect("neighbours are in range")
}

/// Random 3-CNF with distinct variables per clause.
pub fn random_cnf(rng: &mut ChaCha8Rng, num_vars: usize, num_clauses: usize) -> Cnf3Formula {
    assert!(num_vars >= 3);
    let vars: Vec<i32> = (1..=num_vars as i32).collect();
    let clauses = (0..num_clauses)
        .map(|_| {
            let mut c = [0i32; 3];
            for (slot, v) in c.iter_mut().zip(vars.choose_multiple(rng, 3)) {
                *slot = if rng.gen_bool(0.5) { *v } else { -*v };
            }
            c
        })
        .collect();
    Cnf3Formula::new(num_vars, clauses).expect("clauses use distinct declared variables")
}

/// Entry `p/den` with `p` uniform in `lo..hi`.
fn entry(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    ratio(rng.gen_range(lo..hi), den)
}

/// Random game with payoffs in `[0,1]` on the grid `1/den`.
pub fn random_game(rng: &mut ChaCha8Rng, rows: usize, cols: usize, den: i64) -> BimatrixGame<Rational> {
    let r = Matrix::from_fn(rows, cols, |_, _| entry(rng, 0, den + 1, den));
    let c = Matrix::from_fn(rows, cols, |_, _| entry(rng, 0, den + 1, den));
    BimatrixGame::new(r, c).expect("shapes agree")
}

/// Random game whose payoffs all lie in `[0, 5/8)`, a base for `G′`.
pub fn capped_base_game(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> BimatrixGame<Rational> {
    // multiples of 1/16 up to 9/16
    let r = Matrix::from_fn(rows, cols, |_, _| entry(rng, 0, 10, 16));
    let c = Matrix::from_fn(rows, cols, |_, _| entry(rng, 0, 10, 16));
    BimatrixGame::new(r, c).expect("shapes agree")
}

fn random_distribution(rng: &mut ChaCha8Rng, n: usize, den: u32) -> Vec<Rational> {
    // random composition of `den` into `n` nonnegative parts
    let mut cuts: Vec<u32> = (0..n - 1).map(|_| rng.gen_range(0..=den)).collect();
    cuts.sort_unstable();
    let mut prev = 0;
    let mut out = Vec::with_capacity(n);
    for c in cuts.into_iter().chain(std::iter::once(den)) {
        out.push(ratio(i64::from(c - prev), i64::from(den)));
        prev = c;
    }
    out
}

pub fn random_profile(rng: &mut ChaCha8Rng, rows: usize, cols: usize, den: u32) -> MixedProfile<Rational> {
    let x = random_distribution(rng, rows, den);
    let y = random_distribution(rng, cols, den);
    MixedProfile::new(x, y).expect("compositions sum to one")
}

/// `eps` on the grid `1/den` in `[0,1]`.
pub fn random_eps(rng: &mut ChaCha8Rng, den: i64) -> Rational {
    entry(rng, 0, den + 1, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_corpus() {
        let a = random_game(&mut rng(7), 3, 4, 12);
        let b = random_game(&mut rng(7), 3, 4, 12);
        assert_eq!(a, b);
        let g = random_bipartite(&mut rng(9), 400, 4);
        assert_eq!(g, random_bipartite(&mut rng(9), 400, 4));
        assert!(g.max_degree() <= 4 && g.left + g.right <= 400);
    }

    #[test]
    fn profiles_are_distributions() {
        let mut r = rng(1);
        for _ in 0..50 {
            let p = random_profile(&mut r, 4, 3, 12);
            assert_eq!(p.x.len(), 4);
            assert_eq!(p.y.len(), 3);
        }
    }

    #[test]
    fn capped_games_stay_below_five_eighths() {
        let g = capped_base_game(&mut rng(3), 3, 3);
        assert!(g.max_entry() < ratio(5, 8));
    }
}
