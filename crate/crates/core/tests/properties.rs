use eqgap::corpus::{random_bipartite, random_cnf, random_eps, random_game, random_profile, rng};
use eqgap::gadget::{build_hardness_game, derive_params, GadgetGame};
use eqgap::game::{affine_rescale, is_eps_ne, is_eps_wsne, regret_report, social_welfare, MixedProfile};
use eqgap::io::write_fgm;
use eqgap::oracle::support_enumeration;
use eqgap::prover::{game_value, induced_two_prover, prover_payoff, uniformity_gap};
use eqgap::sat::{formula_to_free_game, partition_bipartite};
use eqgap::scalar::{int, ratio};
use eqgap::search::{decide, lmm_best_welfare, Answer, DecisionInstance, Problem};
use eqgap::{ProverGame, ProverStrategy, Rational};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn random_free(r: &mut ChaCha8Rng, nx: usize, ny: usize, na: usize) -> ProverGame {
    let table: Vec<bool> = (0..nx * ny * na * na).map(|_| r.gen_bool(0.6)).collect();
    ProverGame::free(vec![na; nx], vec![na; ny], |x, y, a, b| table[((x * ny + y) * na + a) * na + b]).unwrap()
}

fn gadget(seed: u64) -> GadgetGame {
    let mut r = rng(seed);
    let f = random_free(&mut r, 2, 2, 2);
    build_hardness_game(&f, &derive_params(&ratio(31, 250)).unwrap()).unwrap()
}

/// Distribution on `n` entries with mass `1 − out` spread over `0..inner` and
/// `out` over the rest.
fn split(r: &mut ChaCha8Rng, n: usize, inner: usize, out: &Rational) -> Vec<Rational> {
    let weights = |r: &mut ChaCha8Rng, k: usize| -> Vec<Rational> {
        let w: Vec<i64> = (0..k).map(|_| r.gen_range(0..20)).collect();
        let total: i64 = w.iter().sum();
        if total == 0 {
            let mut v = vec![Rational::zero(); k];
            v[0] = Rational::one();
            return v;
        }
        w.iter().map(|&v| ratio(v, total)).collect()
    };
    let inside = weights(r, inner);
    let mut v: Vec<Rational> = inside.into_iter().map(|e| e * (Rational::one() - out)).collect();
    if n > inner {
        v.extend(weights(r, n - inner).into_iter().map(|e| e * out));
    }
    v
}

/// Profile with at least `1 − gδ` mass on the RC block on each side.
fn concentrated(gg: &GadgetGame, r: &mut ChaCha8Rng) -> MixedProfile<Rational> {
    let gd = &gg.params.g * &gg.params.delta;
    let tx = &gd * ratio(r.gen_range(0..=10), 10);
    let ty = &gd * ratio(r.gen_range(0..=10), 10);
    MixedProfile { x: split(r, gg.game.rows(), gg.rc_rows(), &tx), y: split(r, gg.game.cols(), gg.rc_cols(), &ty) }
}

fn row_payoff(gg: &GadgetGame, p: &MixedProfile<Rational>) -> Rational {
    regret_report(&gg.game, p).unwrap().row_payoff
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_preserves_equilibria(seed in any::<u64>(), shift in 0i64..5, div in 1i64..9) {
        let mut r = rng(seed);
        let g = random_game(&mut r, 3, 3, 12);
        let p = random_profile(&mut r, 3, 3, 6);
        let eps = random_eps(&mut r, 16);
        let h = affine_rescale(&g, &int(shift), &int(div)).unwrap();
        let e2 = &eps / int(div);
        prop_assert_eq!(is_eps_ne(&g, &p, &eps).unwrap(), is_eps_ne(&h, &p, &e2).unwrap());
        prop_assert_eq!(is_eps_wsne(&g, &p, &eps).unwrap(), is_eps_wsne(&h, &p, &e2).unwrap());
    }

    #[test]
    fn wsne_is_ne(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r, 3, 4, 10);
        let p = random_profile(&mut r, 3, 4, 4);
        let eps = random_eps(&mut r, 8);
        if is_eps_wsne(&g, &p, &eps).unwrap() {
            prop_assert!(is_eps_ne(&g, &p, &eps).unwrap());
        }
    }

    #[test]
    fn swapping_players_swaps_regrets(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r, 3, 2, 10);
        let p = random_profile(&mut r, 3, 2, 5);
        let a = regret_report(&g, &p).unwrap();
        let b = regret_report(&g.swap_roles(), &p.swapped()).unwrap();
        prop_assert_eq!(a.row_regret, b.col_regret);
        prop_assert_eq!(a.col_regret, b.row_regret);
        prop_assert_eq!(a.row_payoff, b.col_payoff);
    }

    #[test]
    fn exact_equilibria_have_zero_regret(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r, 3, 3, 7);
        let ne = support_enumeration(&g).unwrap();
        prop_assert!(!ne.is_empty());
        for p in &ne {
            let rep = regret_report(&g, p).unwrap();
            prop_assert!(rep.row_regret.is_zero() && rep.col_regret.is_zero());
        }
    }

    #[test]
    fn value_bounds_every_strategy_pair(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_free(&mut r, 2, 3, 2);
        let v = game_value(&f).unwrap();
        for _ in 0..8 {
            let s1 = ProverStrategy::new((0..2).map(|_| r.gen_range(0..2)).collect());
            let s2 = ProverStrategy::new((0..3).map(|_| r.gen_range(0..2)).collect());
            prop_assert!(prover_payoff(&f, &s1, &s2).unwrap() <= v);
        }
        prop_assert_eq!(game_value(&f.transpose()).unwrap(), v);
    }

    #[test]
    fn partitions_respect_their_bounds(seed in any::<u64>(), d in 1usize..5) {
        let mut r = rng(seed);
        let g = random_bipartite(&mut r, 120, d);
        prop_assert!(partition_bipartite(&g, d).unwrap().check(&g, d).is_ok());
    }

    #[test]
    fn rc_payoff_matches_the_induced_game(seed in any::<u64>()) {
        let gg = gadget(seed);
        let mut r = rng(seed ^ 0x5eed);
        let p = concentrated(&gg, &mut r);
        let ind = induced_two_prover(&gg.free_game, &gg.game, &p).unwrap();
        let direct = row_payoff(&gg, &MixedProfile { x: ind.canonical.x.clone(), y: ind.canonical.y.clone() });
        let via = prover_payoff(&ind.game, &ind.s_x, &ind.s_y).unwrap();
        prop_assert!((direct - via).abs() <= gg.params.four_g_delta());
    }

    #[test]
    fn transport_cost_is_bounded_by_the_gaps(seed in any::<u64>()) {
        let gg = gadget(seed);
        let mut r = rng(seed ^ 0x7a);
        let p = random_profile(&mut r, gg.game.rows(), gg.game.cols(), 5);
        let ind = induced_two_prover(&gg.free_game, &gg.game, &p).unwrap();
        let f = &gg.free_game;
        let gx = uniformity_gap(&ind.x_marginal, f.num_x()).unwrap();
        let gy = uniformity_gap(&ind.y_marginal, f.num_y()).unwrap();
        let a = prover_payoff(&ind.game, &ind.s_x, &ind.s_y).unwrap();
        let b = prover_payoff(f, &ind.s_x, &ind.s_y).unwrap();
        prop_assert!((a - b).abs() <= int(2) * (gx + gy));
    }

    #[test]
    fn skewed_column_marginal_pays_the_top_half_row(seed in any::<u64>()) {
        let gg = gadget(seed);
        let mut r = rng(seed ^ 0xb0);
        let p = concentrated(&gg, &mut r);
        let ind = induced_two_prover(&gg.free_game, &gg.game, &p).unwrap();
        let gd = &gg.params.g * &gg.params.delta;
        let gap = uniformity_gap(&ind.y_marginal, gg.free_game.num_y()).unwrap();
        if gap >= int(16) * &gd {
            let rb = gg.top_half_row(&ind.y_marginal);
            let gain = gg.game.row_values(&p.y)[rb].clone() - row_payoff(&gg, &p);
            prop_assert!(gain > Rational::one() - int(3) * &gd, "gain {} at gap {}", gain, gap);
            prop_assert!(!is_eps_ne(&gg.game, &p, &gg.params.eps_unscaled()).unwrap());
        }
    }

    #[test]
    fn far_apart_is_symmetric_in_the_players(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r, 3, 3, 4);
        let eps = random_eps(&mut r, 8) / int(2);
        let d = ratio(r.gen_range(1..=4), 4);
        let a = decide(&DecisionInstance::new(Problem::FarApart { d: d.clone() }, g.clone(), eps.clone()).unwrap(), Some(2)).unwrap();
        let b = decide(&DecisionInstance::new(Problem::FarApart { d }, g.swap_roles(), eps).unwrap(), Some(2)).unwrap();
        prop_assert_eq!(a.answer, b.answer);
    }

    #[test]
    fn best_welfare_grows_with_k_and_exists_at_one_half(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_game(&mut r, 4, 4, 20);
        let eps = ratio(1, 2) + random_eps(&mut r, 8) / int(2);
        let one = lmm_best_welfare(&g, &eps, 1).unwrap();
        let two = lmm_best_welfare(&g, &eps, 2).unwrap();
        prop_assert_eq!(two.answer, Answer::Yes);
        let w = two.witness.unwrap();
        prop_assert!(is_eps_ne(&g, &w, &eps).unwrap());
        prop_assert_eq!(social_welfare(&g, &w).unwrap(), two.value.clone().unwrap());
        if let Some(v1) = one.value {
            prop_assert!(two.value.unwrap() >= v1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn reduction_output_is_deterministic(seed in any::<u64>()) {
        let f = random_cnf(&mut rng(seed), 4, 3);
        let a = write_fgm(&formula_to_free_game(&f, 1 << 20).unwrap().game);
        let b = write_fgm(&formula_to_free_game(&f, 1 << 20).unwrap().game);
        prop_assert_eq!(a, b);
    }
}
