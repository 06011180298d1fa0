//! End-to-end run: CNF → `F_φ` → `G` → `G_s` → `G′`/`G″`, the completeness
//! certificate when the formula is satisfiable, and the ten deciders.

use std::fs;
use std::path::{Path, PathBuf};

use num_traits::One;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gadget::{
    build_hardness_game_with_cap, completeness_certificate, derive_params, extend_gdoubleprime, extend_gprime, frak_i,
    frak_i2, frak_j, gdoubleprime_witness, rescale_game, GadgetGame, ReductionParams, DEFAULT_HALF_CAP,
};
use crate::game::{regret_report, BimatrixGame, MixedProfile, RegretReport};
use crate::io::{regret_json, write_bgm, write_fgm, write_prof};
use crate::prover::{game_value_with_budget, DEFAULT_VALUE_BUDGET};
use crate::sat::{
    formula_to_free_game, max_sat_fraction, parse_dimacs, pcp_amplify, satisfying_assignment, ClauseVariableGame,
    Cnf3Formula, DEFAULT_ANSWER_CAP,
};
use crate::scalar::{format_rational, ratio, Rational};
use crate::search::{
    decide_with, wsne_support_patterns, DecisionInstance, Problem, SearchConfig, SearchOutcome, WitnessKind,
};

/// Default cap on `k`-uniform candidates for the ε-NE deciders.
pub const DEFAULT_NE_BUDGET: u128 = 1 << 20;
/// Default cap on support patterns (one exact LP pair each) for the ε-WSNE
/// deciders and the exhaustive uniqueness scans.
pub const DEFAULT_PATTERN_BUDGET: u128 = 1 << 14;

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub eps_star: Rational,
    pub answer_cap: usize,
    pub half_cap: usize,
    pub value_budget: u128,
    pub search_budget: u128,
    /// Cap on support patterns for ε-WSNE searches.
    pub pattern_budget: u128,
    pub out_dir: PathBuf,
    /// Recorded in the report; the pipeline itself draws no random numbers.
    pub seed: u64,
}

impl PipelineConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        PipelineConfig {
            input: input.into(),
            eps_star: ratio(31, 250),
            answer_cap: DEFAULT_ANSWER_CAP,
            half_cap: DEFAULT_HALF_CAP,
            value_budget: DEFAULT_VALUE_BUDGET,
            search_budget: DEFAULT_NE_BUDGET,
            pattern_budget: DEFAULT_PATTERN_BUDGET,
            out_dir: out_dir.into(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.answer_cap == 0
            || self.half_cap == 0
            || self.value_budget == 0
            || self.search_budget == 0
            || self.pattern_budget == 0
        {
            return Err(Error::Parameter("caps and budgets must be positive".into()).in_stage("config"));
        }
        derive_params(&self.eps_star).map(|_| ()).stage("derive_params")
    }
}

/// Every game the reduction produces for one formula.
#[derive(Clone, Debug)]
pub struct BuiltGames {
    pub params: ReductionParams,
    pub free: ClauseVariableGame,
    pub gadget: GadgetGame,
    pub rescaled: BimatrixGame<Rational>,
    pub gprime: BimatrixGame<Rational>,
    pub gdouble: BimatrixGame<Rational>,
}

trait Stage<T> {
    fn stage(self, name: &'static str) -> Result<T>;
}

impl<T> Stage<T> for Result<T> {
    fn stage(self, name: &'static str) -> Result<T> {
        self.map_err(|e| e.in_stage(name))
    }
}

pub fn build_games(f: &Cnf3Formula, eps_star: &Rational, answer_cap: usize, half_cap: usize) -> Result<BuiltGames> {
    let params = derive_params(eps_star).stage("derive_params")?;
    let free = formula_to_free_game(f, answer_cap).stage("reduce")?;
    let gadget = build_hardness_game_with_cap(&free.game, &params, half_cap).stage("forge build")?;
    let rescaled = rescale_game(&gadget).stage("rescale")?;
    let gprime = extend_gprime(&rescaled, eps_star).stage("extend gprime")?;
    let gdouble = extend_gdoubleprime(&gprime).stage("extend gdoubleprime")?;
    Ok(BuiltGames { params, free, gadget, rescaled, gprime, gdouble })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CertificateCheck {
    pub profile: MixedProfile<Rational>,
    pub unscaled: RegretReport<Rational>,
    pub rescaled: RegretReport<Rational>,
    /// `(1−4gδ)`-NE of `G` with welfare 2.
    pub unscaled_ok: bool,
    /// `((1−4gδ)/8)`-NE of `G_s` with welfare 10/8.
    pub rescaled_ok: bool,
    /// ε*-WSNE of `G_s`.
    pub rescaled_wsne: bool,
    /// Every D1 row earns `2/(1+4gδ)` against the certificate column.
    pub d1_flat: bool,
    pub gdouble_witness: MixedProfile<Rational>,
    pub gdouble_wsne: bool,
    pub gdouble_support: usize,
}

impl CertificateCheck {
    pub fn all_ok(&self) -> bool {
        self.unscaled_ok && self.rescaled_ok && self.d1_flat && self.gdouble_wsne
    }
}

pub fn check_certificate(b: &BuiltGames, assignment: &[bool]) -> Result<CertificateCheck> {
    let (s1, s2) = b.free.strategies_from_assignment(assignment);
    let cert = completeness_certificate(&b.free.game, &s1, &s2, &b.gadget).stage("certificate")?;
    let p = &b.params;
    let unscaled = regret_report(&b.gadget.game, &cert)?;
    let rescaled = regret_report(&b.rescaled, &cert)?;
    let d1 = b.gadget.game.block("D1").ok_or_else(|| Error::Internal("gadget has no D1 block".into()))?;
    let rv = b.gadget.game.row_values(&cert.y);
    let d1_flat = d1.rows.clone().all(|r| rv[r] == p.d1_row_payoff());
    let w = gdoubleprime_witness(&cert, &b.gdouble)?;
    let wr = regret_report(&b.gdouble, &w)?;
    Ok(CertificateCheck {
        unscaled_ok: unscaled.is_eps_ne(&p.eps_unscaled()) && unscaled.welfare == ratio(2, 1),
        rescaled_ok: rescaled.is_eps_ne(&p.eps_rescaled()) && rescaled.welfare == ratio(10, 8),
        rescaled_wsne: rescaled.is_eps_wsne(&p.eps_star),
        d1_flat,
        gdouble_wsne: wr.is_eps_wsne(&p.eps_star),
        gdouble_support: w.support_x().len(),
        gdouble_witness: w,
        profile: cert,
        unscaled,
        rescaled,
    })
}

/// Instantiations of the ten questions: P1–P9 on `G′`, P10 on `G″`.
pub fn table_problems(b: &BuiltGames) -> Result<Vec<(Problem, &'static str)>> {
    let nx = b.gadget.free_game.num_x();
    let p = &b.params;
    let i2 = frak_i2(&b.gdouble).ok_or_else(|| Error::Internal("G″ has no 𝔦′ row".into()))?;
    Ok(vec![
        (Problem::LargePayoffs { u: ratio(5, 8) }, "Gprime"),
        (Problem::RestrictedSupport { s: (0..b.gadget.rc_rows()).collect() }, "Gprime"),
        (Problem::FarApart { d: p.concentration_threshold() }, "Gprime"),
        (Problem::SmallLargestProbability { p: ratio(1, nx as i64) }, "Gprime"),
        (Problem::SmallTotalPayoff { v: ratio(10, 8) }, "Gprime"),
        (Problem::SmallPayoff { u: ratio(5, 8) }, "Gprime"),
        (Problem::LargeTotalSupport { k: nx }, "Gprime"),
        (Problem::LargeSmallestSupport { k: nx }, "Gprime"),
        (Problem::LargeSupport { k: nx }, "Gprime"),
        (Problem::RestrictingSupport { s_r: vec![i2] }, "Gdouble"),
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeciderRun {
    pub problem: Problem,
    pub game: &'static str,
    pub outcome: SearchOutcome,
}

/// Result of the exhaustive ε*-WSNE support scan on one game.
#[derive(Clone, Debug, PartialEq)]
pub struct Uniqueness {
    pub game: &'static str,
    /// Support patterns carrying an ε*-WSNE, `None` when over budget.
    pub patterns: Option<Vec<(Vec<usize>, Vec<usize>)>>,
    pub expected: (usize, usize),
}

impl Uniqueness {
    pub fn unique(&self) -> Option<bool> {
        self.patterns.as_ref().map(|p| p.len() == 1 && p[0] == (vec![self.expected.0], vec![self.expected.1]))
    }
}

/// Exhaustive ε*-WSNE support scan, skipped when the pattern count exceeds `budget`.
pub fn wsne_uniqueness(
    g: &BimatrixGame<Rational>,
    name: &'static str,
    eps: &Rational,
    budget: u128,
) -> Result<Uniqueness> {
    let expected = (frak_i(g).unwrap_or(0), frak_j(g).unwrap_or(0));
    let count = |n: usize| if n >= 127 { u128::MAX } else { (1u128 << n) - 1 };
    let patterns = if count(g.rows()).saturating_mul(count(g.cols())) > budget {
        None
    } else {
        let hits = wsne_support_patterns(g, eps, budget)?;
        Some(hits.into_iter().map(|h| (h.sx, h.sy)).collect())
    };
    Ok(Uniqueness { game: name, patterns, expected })
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    pub config: PipelineConfig,
    pub formula: Cnf3Formula,
    pub max_sat: Option<Rational>,
    pub satisfiable: Option<bool>,
    pub value: Option<Rational>,
    pub games: BuiltGames,
    pub certificate: Option<CertificateCheck>,
    pub deciders: Vec<DeciderRun>,
    pub uniqueness: Vec<Uniqueness>,
    pub files: Vec<String>,
}

fn write(dir: &Path, name: &str, text: &str, files: &mut Vec<String>) -> Result<()> {
    fs::write(dir.join(name), text).map_err(|e| Error::from(e).in_stage("write"))?;
    files.push(name.to_string());
    Ok(())
}

pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport> {
    cfg.validate()?;
    let text = fs::read_to_string(&cfg.input).map_err(|e| Error::from(e).in_stage("read"))?;
    let parsed = parse_dimacs(&text).stage("parse")?;
    let formula = pcp_amplify(&parsed, &cfg.eps_star).stage("amplify")?.formula;
    let max_sat = max_sat_fraction(&formula).ok();
    let assignment = satisfying_assignment(&formula).ok();
    let satisfiable = assignment.as_ref().map(Option::is_some);
    let games = build_games(&formula, &cfg.eps_star, cfg.answer_cap, cfg.half_cap)?;
    let value = match game_value_with_budget(&games.free.game, cfg.value_budget) {
        Ok(v) => Some(v.value),
        Err(Error::Resource(_)) => None,
        Err(e) => return Err(e.in_stage("value")),
    };

    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::from(e).in_stage("write"))?;
    let dir = cfg.out_dir.as_path();
    let mut files = Vec::new();
    write(dir, "F.fgm", &write_fgm(&games.free.game), &mut files)?;
    write(dir, "G.bgm", &write_bgm(&games.gadget.game), &mut files)?;
    write(dir, "Gs.bgm", &write_bgm(&games.rescaled), &mut files)?;
    write(dir, "Gprime.bgm", &write_bgm(&games.gprime), &mut files)?;
    write(dir, "Gdouble.bgm", &write_bgm(&games.gdouble), &mut files)?;

    let certificate = match assignment.flatten() {
        Some(a) => {
            let c = check_certificate(&games, &a)?;
            write(dir, "cert.prof", &write_prof(&c.profile), &mut files)?;
            Some(c)
        }
        None => None,
    };

    let ne = SearchConfig { k: None, budget: cfg.search_budget };
    let wsne = SearchConfig { k: None, budget: cfg.pattern_budget };
    let mut deciders = Vec::new();
    for (problem, name) in table_problems(&games)? {
        let game = if name == "Gprime" { &games.gprime } else { &games.gdouble };
        let inst = DecisionInstance::new(problem.clone(), game.clone(), cfg.eps_star.clone()).stage("decide")?;
        let search = if problem.witness_kind() == WitnessKind::Ne { &ne } else { &wsne };
        let outcome = decide_with(&inst, search).stage("decide")?;
        let id = problem.id();
        if let Some(w) = &outcome.witness {
            write(dir, &format!("witness-p{id}.prof"), &write_prof(w), &mut files)?;
        }
        if let Some(w) = &outcome.second_witness {
            write(dir, &format!("witness-p{id}-second.prof"), &write_prof(w), &mut files)?;
        }
        deciders.push(DeciderRun { problem, game: name, outcome });
    }
    let uniqueness = vec![
        wsne_uniqueness(&games.gprime, "Gprime", &cfg.eps_star, cfg.pattern_budget).stage("uniqueness")?,
        wsne_uniqueness(&games.gdouble, "Gdouble", &cfg.eps_star, cfg.pattern_budget).stage("uniqueness")?,
    ];
    let report = PipelineReport {
        config: cfg.clone(),
        formula,
        max_sat,
        satisfiable,
        value,
        games,
        certificate,
        deciders,
        uniqueness,
        files,
    };
    let mut body = serde_json::to_string_pretty(&report.to_json()).expect("json values serialize");
    body.push('\n');
    fs::write(dir.join("report.json"), body).map_err(|e| Error::from(e).in_stage("write"))?;
    Ok(report)
}

fn opt_rat(r: &Option<Rational>) -> Value {
    r.as_ref().map_or(Value::Null, |r| Value::String(format_rational(r)))
}

fn problem_param(p: &Problem) -> Value {
    match p {
        Problem::LargePayoffs { u } | Problem::SmallPayoff { u } => json!({ "u": format_rational(u) }),
        Problem::FarApart { d } => json!({ "d": format_rational(d) }),
        Problem::SmallLargestProbability { p } => json!({ "p": format_rational(p) }),
        Problem::SmallTotalPayoff { v } => json!({ "v": format_rational(v) }),
        Problem::RestrictedSupport { s } => json!({ "S": s }),
        Problem::RestrictingSupport { s_r } => json!({ "S_R": s_r }),
        Problem::LargeTotalSupport { k } | Problem::LargeSmallestSupport { k } | Problem::LargeSupport { k } => {
            json!({ "k": k })
        }
    }
}

impl PipelineReport {
    pub fn to_json(&self) -> Value {
        let p = &self.games.params;
        let shape = |g: &BimatrixGame<Rational>| json!([g.rows(), g.cols()]);
        let cert = self.certificate.as_ref().map_or(Value::Null, |c| {
            json!({
                "unscaled": regret_json(&c.unscaled),
                "rescaled": regret_json(&c.rescaled),
                "unscaled_eps_ne_welfare_2": c.unscaled_ok,
                "rescaled_eps_ne_welfare_10_8": c.rescaled_ok,
                "rescaled_eps_star_wsne": c.rescaled_wsne,
                "d1_rows_flat": c.d1_flat,
                "gdouble_witness_wsne": c.gdouble_wsne,
                "gdouble_witness_support": c.gdouble_support,
            })
        });
        let deciders: Vec<Value> = self
            .deciders
            .iter()
            .map(|d| {
                json!({
                    "problem": format!("p{}", d.problem.id()),
                    "game": d.game,
                    "eps": format_rational(&self.config.eps_star),
                    "param": problem_param(&d.problem),
                    "answer": d.outcome.answer.to_string(),
                    "checked": d.outcome.checked_count.to_string(),
                    "witness": d.outcome.witness.as_ref().map(|_| format!("witness-p{}.prof", d.problem.id())),
                })
            })
            .collect();
        let uniq: Vec<Value> = self
            .uniqueness
            .iter()
            .map(|u| {
                json!({
                    "game": u.game,
                    "expected": [u.expected.0, u.expected.1],
                    "unique": u.unique(),
                    "patterns": u.patterns.as_ref().map(|v| v.len()),
                })
            })
            .collect();
        let gap = self.max_sat.as_ref().map(|m| Rational::one() - m);
        json!({
            "input": self.config.input.display().to_string(),
            "seed": self.config.seed,
            "formula": {
                "num_vars": self.formula.num_vars(),
                "num_clauses": self.formula.num_clauses(),
                "max_var_degree": self.formula.max_var_degree(),
                "max_sat_fraction": opt_rat(&self.max_sat),
                "gap": opt_rat(&gap),
                "satisfiable": self.satisfiable,
            },
            "free_game": {
                "num_x": self.games.free.game.num_x(),
                "num_y": self.games.free.game.num_y(),
                "duplicated": self.games.free.duplicated,
                "value": opt_rat(&self.value),
            },
            "params": {
                "g": format_rational(&p.g),
                "delta": format_rational(&p.delta),
                "eps_star": format_rational(&p.eps_star),
                "delta_star": format_rational(&p.delta_star),
                "n_star": format_rational(&p.n_star),
                "u_frak": format_rational(&p.u_frak),
                "d1_payoff": format_rational(&p.d1_payoff),
                "eps_unscaled": format_rational(&p.eps_unscaled()),
                "eps_rescaled": format_rational(&p.eps_rescaled()),
                "concentration_threshold": format_rational(&p.concentration_threshold()),
            },
            "games": {
                "G": shape(&self.games.gadget.game),
                "Gs": shape(&self.games.rescaled),
                "Gprime": shape(&self.games.gprime),
                "Gdouble": shape(&self.games.gdouble),
            },
            "certificate": cert,
            "deciders": deciders,
            "wsne_uniqueness": uniq,
            "files": self.files,
        })
    }
}
