//! Text formats: `.bgm` games, `.fgm` free games, `.prof` profiles and
//! `.strat` prover strategies. Writers are byte-deterministic.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, Block, Matrix, MixedProfile, RegretReport};
use crate::prover::{uniform_dist, ProverStrategy, TwoProverGame};
use crate::scalar::{format_rational, parse_rational, Rational};

/// Non-empty lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty())
}

fn header<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>, tag: &str) -> Result<()> {
    match it.next() {
        Some((_, l)) if l.split_whitespace().collect::<Vec<_>>() == [tag, "1"] => Ok(()),
        Some((n, l)) => Err(Error::format(n, format!("expected `{tag} 1`, found `{l}`"))),
        None => Err(Error::format(1, format!("empty input, expected `{tag} 1`"))),
    }
}

fn counts(line: usize, text: &str, want: usize) -> Result<Vec<usize>> {
    let v = text
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| Error::format(line, format!("bad count `{t}`"))))
        .collect::<Result<Vec<_>>>()?;
    if v.len() != want {
        return Err(Error::format(line, format!("expected {want} counts, found {}", v.len())));
    }
    Ok(v)
}

fn rat(line: usize, tok: &str) -> Result<Rational> {
    parse_rational(tok).map_err(|e| Error::format(line, e.to_string()))
}

fn next_line<'a>(it: &mut impl Iterator<Item = (usize, &'a str)>, what: &str) -> Result<(usize, &'a str)> {
    it.next().ok_or_else(|| Error::format(0, format!("unexpected end of input, expected {what}")))
}

pub fn parse_bgm(text: &str) -> Result<BimatrixGame<Rational>> {
    let mut it = lines(text);
    header(&mut it, "bgm")?;
    let (n, dims) = next_line(&mut it, "dimensions")?;
    let d = counts(n, dims, 2)?;
    let (rows, cols) = (d[0], d[1]);
    let mut r = Vec::with_capacity(rows * cols);
    let mut c = Vec::with_capacity(rows * cols);
    let mut blocks = Vec::new();
    for (n, l) in it {
        if let Some(rest) = l.strip_prefix("#block") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 5 {
                return Err(Error::format(n, "expected `#block <name> <r0> <r1> <c0> <c1>`"));
            }
            let b = counts(n, &parts[1..].join(" "), 4)?;
            blocks.push(Block::new(parts[0], b[0]..b[1], b[2]..b[3]));
            continue;
        }
        if l.starts_with('#') {
            continue;
        }
        if !blocks.is_empty() {
            return Err(Error::format(n, "payoff line after block annotations"));
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::format(n, format!("expected `R_ij C_ij`, found `{l}`")));
        }
        r.push(rat(n, toks[0])?);
        c.push(rat(n, toks[1])?);
    }
    if r.len() != rows * cols {
        return Err(Error::format(0, format!("expected {} payoff lines, found {}", rows * cols, r.len())));
    }
    let mut ri = r.into_iter();
    let mut ci = c.into_iter();
    let rm = Matrix::from_fn(rows, cols, |_, _| ri.next().unwrap());
    let cm = Matrix::from_fn(rows, cols, |_, _| ci.next().unwrap());
    let g = BimatrixGame::new(rm, cm)?;
    if blocks.is_empty() {
        Ok(g)
    } else {
        g.with_blocks(blocks)
    }
}

pub fn write_bgm(g: &BimatrixGame<Rational>) -> String {
    let mut s = format!("bgm 1\n{} {}\n", g.rows(), g.cols());
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let _ = writeln!(
                s,
                "{} {}",
                format_rational(g.row_payoffs().get(i, j)),
                format_rational(g.col_payoffs().get(i, j))
            );
        }
    }
    for b in g.blocks() {
        let _ = writeln!(s, "#block {} {} {} {} {}", b.name, b.rows.start, b.rows.end, b.cols.start, b.cols.end);
    }
    s
}

pub fn parse_fgm(text: &str) -> Result<TwoProverGame<Rational>> {
    let mut it = lines(text);
    header(&mut it, "fgm")?;
    let (n, dims) = next_line(&mut it, "question counts")?;
    let d = counts(n, dims, 2)?;
    let (nx, ny) = (d[0], d[1]);
    let (n, l) = next_line(&mut it, "row answer counts")?;
    let ax = counts(n, l, nx)?;
    let (n, l) = next_line(&mut it, "column answer counts")?;
    let ay = counts(n, l, ny)?;
    let mut verify = Vec::with_capacity(nx * ny);
    for x in 0..nx {
        for y in 0..ny {
            let (n, l) = next_line(&mut it, "verification table")?;
            let bits: Vec<bool> = l
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::format(n, format!("verification entries are 0/1, found `{c}`"))),
                })
                .collect::<Result<_>>()?;
            if bits.len() != ax[x] * ay[y] {
                return Err(Error::format(
                    n,
                    format!("pair ({x},{y}) needs {} entries, found {}", ax[x] * ay[y], bits.len()),
                ));
            }
            verify.push(bits);
        }
    }
    let dist = match it.next() {
        None => uniform_dist(nx, ny),
        Some((_, "D")) => {
            let mut rows = Vec::with_capacity(nx);
            for _ in 0..nx {
                let (n, l) = next_line(&mut it, "distribution row")?;
                let row = l.split_whitespace().map(|t| rat(n, t)).collect::<Result<Vec<_>>>()?;
                if row.len() != ny {
                    return Err(Error::format(n, format!("distribution row needs {ny} entries")));
                }
                rows.push(row);
            }
            Matrix::from_rows(rows)?
        }
        Some((n, l)) => return Err(Error::format(n, format!("unexpected `{l}`, expected `D` or end of input"))),
    };
    if let Some((n, l)) = it.next() {
        return Err(Error::format(n, format!("trailing content `{l}`")));
    }
    TwoProverGame::new(ax, ay, dist, verify)
}

pub fn write_fgm(f: &TwoProverGame<Rational>) -> String {
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    let mut s = format!("fgm 1\n{} {}\n{}\n{}\n", f.num_x(), f.num_y(), join(f.answers_x()), join(f.answers_y()));
    for x in 0..f.num_x() {
        for y in 0..f.num_y() {
            for a in 0..f.answers_x()[x] {
                for b in 0..f.answers_y()[y] {
                    s.push(if f.verify(x, y, a, b) { '1' } else { '0' });
                }
            }
            s.push('\n');
        }
    }
    if !f.is_free() {
        s.push_str("D\n");
        for x in 0..f.num_x() {
            let row: Vec<String> = f.dist().row(x).iter().map(format_rational).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
    }
    s
}

/// Reads a profile; with `normalize` each side is divided by its sum instead
/// of being required to sum to exactly 1.
pub fn parse_prof(text: &str, normalize: bool) -> Result<MixedProfile<Rational>> {
    let mut it = lines(text);
    header(&mut it, "prof")?;
    let (n, dims) = next_line(&mut it, "dimensions")?;
    let d = counts(n, dims, 2)?;
    let mut vals = Vec::with_capacity(d[0] + d[1]);
    for (n, l) in it {
        for t in l.split_whitespace() {
            vals.push(rat(n, t)?);
        }
    }
    if vals.len() != d[0] + d[1] {
        return Err(Error::format(0, format!("expected {} probabilities, found {}", d[0] + d[1], vals.len())));
    }
    let y = vals.split_off(d[0]);
    if normalize {
        MixedProfile::normalized(vals, y)
    } else {
        MixedProfile::new(vals, y)
    }
}

pub fn write_prof(p: &MixedProfile<Rational>) -> String {
    let side = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(" ");
    format!("prof 1\n{} {}\n{}\n{}\n", p.x.len(), p.y.len(), side(&p.x), side(&p.y))
}

pub fn parse_strat(text: &str) -> Result<(ProverStrategy, ProverStrategy)> {
    let mut it = lines(text);
    header(&mut it, "strat")?;
    let mut read = |what: &str| -> Result<ProverStrategy> {
        let (n, l) = next_line(&mut it, what)?;
        let v = l
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::format(n, format!("bad answer `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(ProverStrategy::new(v))
    };
    let s1 = read("row prover answers")?;
    let s2 = read("column prover answers")?;
    if let Some((n, l)) = it.next() {
        return Err(Error::format(n, format!("trailing content `{l}`")));
    }
    Ok((s1, s2))
}

pub fn write_strat(s1: &ProverStrategy, s2: &ProverStrategy) -> String {
    let join = |s: &ProverStrategy| s.answers.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    format!("strat 1\n{}\n{}\n", join(s1), join(s2))
}

/// Regret report with every rational printed as `p/q`.
pub fn regret_json(r: &RegretReport<Rational>) -> serde_json::Value {
    serde_json::json!({
        "row_regret": format_rational(&r.row_regret),
        "col_regret": format_rational(&r.col_regret),
        "row_pure_regret": format_rational(&r.row_pure_regret),
        "col_pure_regret": format_rational(&r.col_pure_regret),
        "row_payoff": format_rational(&r.row_payoff),
        "col_payoff": format_rational(&r.col_payoff),
        "welfare": format_rational(&r.welfare),
        "row_best_response": r.row_best_response,
        "col_best_response": r.col_best_response,
    })
}
