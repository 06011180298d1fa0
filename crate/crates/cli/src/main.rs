use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eqgap::gadget::{
    build_hardness_game_with_cap, completeness_certificate, derive_params, extend_gdoubleprime, extend_gprime,
    rescale_game, DEFAULT_HALF_CAP,
};
use eqgap::game::regret_report;
use eqgap::io::{
    parse_bgm, parse_fgm, parse_prof, parse_strat, regret_json, write_bgm, write_fgm, write_prof, write_strat,
};
use eqgap::pipeline::{run_pipeline, PipelineConfig, DEFAULT_NE_BUDGET, DEFAULT_PATTERN_BUDGET};
use eqgap::prover::{game_value_with_budget, DEFAULT_VALUE_BUDGET};
use eqgap::sat::{formula_to_free_game, parse_dimacs, DEFAULT_ANSWER_CAP};
use eqgap::scalar::{format_rational, parse_rational, Rational};
use eqgap::search::{decide_with, Answer, DecisionInstance, Problem, SearchConfig, DEFAULT_SEARCH_BUDGET};

const EXIT_ERROR: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "eqgap",
    version,
    about = "Exact approximate-equilibrium tools and hardness gadgets for bimatrix games"
)]
struct Cli {
    /// Report format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check a profile against a game (exit 0 if it passes, 1 if not).
    Verify {
        game: PathBuf,
        profile: PathBuf,
        #[arg(long, value_parser = rational)]
        eps: Rational,
        #[arg(long, value_enum, default_value_t = Mode::Ne)]
        mode: Mode,
        /// Divide each side of the profile by its sum instead of rejecting it.
        #[arg(long)]
        normalize: bool,
    },
    /// Brute-force value of a two-prover game.
    Value {
        game: PathBuf,
        #[arg(long, default_value_t = DEFAULT_VALUE_BUDGET)]
        budget: u128,
        /// Write the optimal strategies as a .strat file.
        #[arg(long)]
        strategies: Option<PathBuf>,
    },
    /// Reductions between formats.
    Reduce {
        #[command(subcommand)]
        what: Reduce,
    },
    /// Gadget construction.
    Forge {
        #[command(subcommand)]
        what: Forge,
    },
    /// Decide one of the ten constrained-equilibrium questions
    /// (exit 0 = yes, 1 = no, 2 = unknown at budget).
    Decide(DecideArgs),
    /// Run the whole construction on a CNF file.
    Pipeline {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, value_parser = rational, default_value = "31/250")]
        eps_star: Rational,
        #[arg(long, default_value_t = DEFAULT_ANSWER_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_HALF_CAP)]
        half_cap: usize,
        #[arg(long, default_value_t = DEFAULT_VALUE_BUDGET)]
        value_budget: u128,
        #[arg(long, default_value_t = DEFAULT_NE_BUDGET)]
        budget: u128,
        #[arg(long, default_value_t = DEFAULT_PATTERN_BUDGET)]
        pattern_budget: u128,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Ne,
    Wsne,
}

#[derive(Subcommand, Debug)]
enum Reduce {
    /// DIMACS 3-CNF to the clause/variable free game.
    Sat2free {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Largest answer set per question.
        #[arg(long, default_value_t = DEFAULT_ANSWER_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum Forge {
    /// Unscaled hardness game from a free game.
    Build {
        input: PathBuf,
        #[arg(long, value_parser = rational)]
        eps_star: Rational,
        #[arg(short, long)]
        out: PathBuf,
        /// Also write the [0,1]-rescaled game here.
        #[arg(long)]
        rescaled: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_HALF_CAP)]
        half_cap: usize,
    },
    /// Border extensions of a rescaled game.
    Extend {
        #[command(subcommand)]
        which: Extend,
    },
    /// Completeness certificate for winning prover strategies.
    Cert {
        input: PathBuf,
        strategies: PathBuf,
        #[arg(long, value_parser = rational, default_value = "31/250")]
        eps_star: Rational,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HALF_CAP)]
        half_cap: usize,
    },
    /// Print the constants derived from ε*.
    Params {
        #[arg(long, value_parser = rational)]
        eps_star: Rational,
    },
}

#[derive(Subcommand, Debug)]
enum Extend {
    Gprime {
        input: PathBuf,
        #[arg(long, value_parser = rational)]
        eps_star: Rational,
        #[arg(short, long)]
        out: PathBuf,
    },
    Gdoubleprime {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct DecideArgs {
    /// p1 .. p10
    problem: String,
    game: PathBuf,
    #[arg(long, value_parser = rational)]
    eps: Rational,
    #[arg(long, value_parser = rational)]
    u: Option<Rational>,
    #[arg(long, value_parser = rational)]
    v: Option<Rational>,
    #[arg(long, value_parser = rational)]
    p: Option<Rational>,
    #[arg(long, value_parser = rational)]
    d: Option<Rational>,
    /// Support threshold for p7-p9; uniformity level for p1-p6; largest
    /// support per side for p10.
    #[arg(long)]
    k: Option<usize>,
    /// Row set for p2 and p10, e.g. `0,3,4`.
    #[arg(long, value_delimiter = ',')]
    set: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    budget: u128,
    /// Write the witness profile here.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(format: Format, v: &Value) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(v).expect("json values serialize")),
        Format::Text => print_text("", v),
    }
}

fn print_text(prefix: &str, v: &Value) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                print_text(&key, x);
            }
        }
        Value::String(s) => println!("{prefix}: {s}"),
        Value::Null => println!("{prefix}: -"),
        other => println!("{prefix}: {other}"),
    }
}

fn problem(a: &DecideArgs) -> Result<Problem> {
    let need = |v: &Option<Rational>, flag: &str| -> Result<Rational> {
        v.clone().with_context(|| format!("{} needs --{flag}", a.problem))
    };
    let size = || a.k.with_context(|| format!("{} needs --k", a.problem));
    let set = || -> Result<Vec<usize>> {
        if a.set.is_empty() {
            bail!("{} needs --set", a.problem)
        }
        Ok(a.set.clone())
    };
    Ok(match a.problem.to_ascii_lowercase().as_str() {
        "p1" => Problem::LargePayoffs { u: need(&a.u, "u")? },
        "p2" => Problem::RestrictedSupport { s: set()? },
        "p3" => Problem::FarApart { d: need(&a.d, "d")? },
        "p4" => Problem::SmallLargestProbability { p: need(&a.p, "p")? },
        "p5" => Problem::SmallTotalPayoff { v: need(&a.v, "v")? },
        "p6" => Problem::SmallPayoff { u: need(&a.u, "u")? },
        "p7" => Problem::LargeTotalSupport { k: size()? },
        "p8" => Problem::LargeSmallestSupport { k: size()? },
        "p9" => Problem::LargeSupport { k: size()? },
        "p10" => Problem::RestrictingSupport { s_r: set()? },
        other => bail!("unknown problem `{other}`, expected p1 .. p10"),
    })
}

fn run(cli: Cli) -> Result<u8> {
    let fmt = cli.format;
    match cli.cmd {
        Cmd::Verify { game, profile, eps, mode, normalize } => {
            let g = parse_bgm(&read(&game)?).context("game")?;
            let p = parse_prof(&read(&profile)?, normalize).context("profile")?;
            let rep = regret_report(&g, &p)?;
            let ok = match mode {
                Mode::Ne => rep.is_eps_ne(&eps),
                Mode::Wsne => rep.is_eps_wsne(&eps),
            };
            let mode = if mode == Mode::Ne { "ne" } else { "wsne" };
            emit(fmt, &json!({ "mode": mode, "eps": format_rational(&eps), "pass": ok, "report": regret_json(&rep) }));
            Ok(if ok { 0 } else { 1 })
        }
        Cmd::Value { game, budget, strategies } => {
            let f = parse_fgm(&read(&game)?)?;
            let v = game_value_with_budget(&f, budget)?;
            if let Some(path) = strategies {
                write(&path, &write_strat(&v.s1, &v.s2))?;
            }
            emit(fmt, &json!({ "value": format_rational(&v.value), "s1": v.s1.answers, "s2": v.s2.answers }));
            Ok(0)
        }
        Cmd::Reduce { what: Reduce::Sat2free { input, out, cap } } => {
            let f = parse_dimacs(&read(&input)?)?;
            let cv = formula_to_free_game(&f, cap)?;
            write(&out, &write_fgm(&cv.game))?;
            emit(
                fmt,
                &json!({
                    "num_x": cv.game.num_x(),
                    "num_y": cv.game.num_y(),
                    "answers_x": cv.game.answers_x(),
                    "answers_y": cv.game.answers_y(),
                    "duplicated": cv.duplicated,
                    "out": out.display().to_string(),
                }),
            );
            Ok(0)
        }
        Cmd::Forge { what } => forge(fmt, what),
        Cmd::Decide(a) => {
            let g = parse_bgm(&read(&a.game)?)?;
            let inst = DecisionInstance::new(problem(&a)?, g, a.eps.clone())?;
            let k = match inst.problem {
                Problem::LargeTotalSupport { .. }
                | Problem::LargeSmallestSupport { .. }
                | Problem::LargeSupport { .. } => None,
                _ => a.k,
            };
            let out = decide_with(&inst, &SearchConfig { k, budget: a.budget })?;
            if let (Some(path), Some(w)) = (&a.out, &out.witness) {
                write(path, &write_prof(w))?;
                if let Some(w2) = &out.second_witness {
                    let mut p2 = path.clone().into_os_string();
                    p2.push(".second");
                    write(Path::new(&p2), &write_prof(w2))?;
                }
            }
            let prof = |w: &Option<eqgap::Profile>| {
                w.as_ref().map(|w| {
                    json!({
                        "x": w.x.iter().map(format_rational).collect::<Vec<_>>(),
                        "y": w.y.iter().map(format_rational).collect::<Vec<_>>(),
                    })
                })
            };
            emit(
                fmt,
                &json!({
                    "problem": format!("p{}", inst.problem.id()),
                    "answer": out.answer.to_string(),
                    "checked": out.checked_count.to_string(),
                    "witness": prof(&out.witness),
                    "second_witness": prof(&out.second_witness),
                }),
            );
            Ok(match out.answer {
                Answer::Yes => 0,
                Answer::No => 1,
                Answer::Unknown => 2,
            })
        }
        Cmd::Pipeline { input, out, eps_star, cap, half_cap, value_budget, budget, pattern_budget, seed } => {
            let cfg = PipelineConfig {
                input,
                eps_star,
                answer_cap: cap,
                half_cap,
                value_budget,
                search_budget: budget,
                pattern_budget,
                out_dir: out,
                seed,
            };
            let report = run_pipeline(&cfg)?;
            emit(fmt, &report.to_json());
            Ok(0)
        }
    }
}

fn forge(fmt: Format, what: Forge) -> Result<u8> {
    match what {
        Forge::Build { input, eps_star, out, rescaled, half_cap } => {
            let f = parse_fgm(&read(&input)?)?;
            let params = derive_params(&eps_star)?;
            let gg = build_hardness_game_with_cap(&f, &params, half_cap)?;
            write(&out, &write_bgm(&gg.game))?;
            if let Some(path) = &rescaled {
                write(path, &write_bgm(&rescale_game(&gg)?))?;
            }
            emit(
                fmt,
                &json!({
                    "rows": gg.game.rows(),
                    "cols": gg.game.cols(),
                    "duplicated_x": gg.duplicated_x,
                    "duplicated_y": gg.duplicated_y,
                    "d1_payoff": format_rational(&params.d1_payoff),
                }),
            );
        }
        Forge::Extend { which } => {
            let (input, out, g) = match which {
                Extend::Gprime { input, eps_star, out } => {
                    let g = extend_gprime(&parse_bgm(&read(&input)?)?, &eps_star)?;
                    (input, out, g)
                }
                Extend::Gdoubleprime { input, out } => {
                    let g = extend_gdoubleprime(&parse_bgm(&read(&input)?)?)?;
                    (input, out, g)
                }
            };
            write(&out, &write_bgm(&g))?;
            emit(fmt, &json!({ "input": input.display().to_string(), "rows": g.rows(), "cols": g.cols() }));
        }
        Forge::Cert { input, strategies, eps_star, out, half_cap } => {
            let f = parse_fgm(&read(&input)?)?;
            let (s1, s2) = parse_strat(&read(&strategies)?)?;
            let params = derive_params(&eps_star)?;
            let gg = build_hardness_game_with_cap(&f, &params, half_cap)?;
            let cert = completeness_certificate(&f, &s1, &s2, &gg)?;
            write(&out, &write_prof(&cert))?;
            let rep = regret_report(&gg.game, &cert)?;
            emit(
                fmt,
                &json!({
                    "eps_unscaled": format_rational(&params.eps_unscaled()),
                    "eps_ne": rep.is_eps_ne(&params.eps_unscaled()),
                    "report": regret_json(&rep),
                }),
            );
        }
        Forge::Params { eps_star } => {
            let p = derive_params(&eps_star)?;
            emit(
                fmt,
                &json!({
                    "g": format_rational(&p.g),
                    "eps_star": format_rational(&p.eps_star),
                    "delta_star": format_rational(&p.delta_star),
                    "n_star": format_rational(&p.n_star),
                    "u_frak": format_rational(&p.u_frak),
                    "d1_payoff": format_rational(&p.d1_payoff),
                    "concentration_threshold": format_rational(&p.concentration_threshold()),
                }),
            );
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
