use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use nncomplete::geometry::svg::render_svg;
use nncomplete::nn3::Verdict;
use nncomplete::{
    classify_one_missing, decide_nn3_two_missing, nn_rank2_complete_3x3, nn_rank_at_most_3,
    rank1_complete, CompletionOutcome, Error, Matrix, NestedPair, PartialMatrix, Point, Rational,
    Triangle,
};

#[derive(Parser)]
#[command(
    name = "nncomplete",
    version,
    about = "Exact (nonnegative) low-rank matrix completion"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Io {
    /// Matrix file, or `-` for standard input.
    input: String,
    /// Write the output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact rank of a fully observed matrix.
    Rank {
        #[command(flatten)]
        io: Io,
    },
    /// Rank-1 completion (or 3x3 nonnegative rank-2 with `--rank 2 --nonnegative`).
    Complete {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        nonnegative: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Classify the completions of a single missing entry.
    OneMissing {
        #[arg(long)]
        rank: usize,
        /// Missing entry `i,j` (1-based); defaults to the only `?`.
        #[arg(long, value_parser = parse_hole)]
        hole: Option<(usize, usize)>,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Decide nonnegative rank at most 3 and print a witness.
    CheckNnrank3 {
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Decide a 4x4 two-missing-entry matrix and print the certificate.
    Nn3Decide {
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        io: Io,
    },
    /// SVG of the nested polygons (and triangle, if any).
    Plot {
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        io: Io,
    },
}

fn parse_hole(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s.split_once(',').ok_or("expected i,j")?;
    let i = i.trim().parse::<usize>().map_err(|e| e.to_string())?;
    let j = j.trim().parse::<usize>().map_err(|e| e.to_string())?;
    if i == 0 || j == 0 {
        return Err("indices are 1-based".into());
    }
    Ok((i, j))
}

/// Failure with a one-line diagnostic.
struct Fail(String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        Fail(e.to_string())
    }
}

impl From<io::Error> for Fail {
    fn from(e: io::Error) -> Fail {
        Fail(e.to_string())
    }
}

fn read_input(path: &str) -> Result<PartialMatrix, Fail> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Fail(format!("{path}: {e}")))?
    };
    Ok(PartialMatrix::parse(&text)?)
}

fn full(m: &PartialMatrix) -> Result<Matrix, Fail> {
    m.to_matrix()
        .ok_or_else(|| Fail("precondition violated: matrix has missing entries".into()))
}

fn text(m: &Matrix) -> String {
    PartialMatrix::from_matrix(m).to_text()
}

fn q(x: &Rational) -> Value {
    Value::String(x.to_string())
}

fn mat(m: &Matrix) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(q).collect()))
            .collect(),
    )
}

fn pts(ps: &[Point]) -> Value {
    Value::Array(ps.iter().map(|p| json!([q(&p.x), q(&p.y)])).collect())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn outcome_text(o: &CompletionOutcome) -> String {
    let mut s = format!("{}\n", o.kind());
    if let CompletionOutcome::Infinite { free, .. } = o {
        let f: Vec<String> = free.iter().map(|(i, j)| format!("{i},{j}")).collect();
        s.push_str(&format!("free {}\n", f.join(" ")));
    }
    if let Some(m) = o.matrix() {
        s.push_str(&text(m));
    }
    s
}

/// Output text and exit status.
fn run(cmd: Cmd) -> Result<(String, Option<PathBuf>, u8), Fail> {
    match cmd {
        Cmd::Rank { io } => {
            let m = full(&read_input(&io.input)?)?;
            Ok((format!("{}\n", m.rank()), io.out, 0))
        }
        Cmd::Complete {
            rank,
            nonnegative,
            io,
        } => {
            let m = read_input(&io.input)?;
            let o = match (rank, nonnegative) {
                (1, nn) => rank1_complete(&m, nn)?,
                (2, true) => nn_rank2_complete_3x3(&m)?,
                _ => {
                    return Err(Fail(format!(
                        "unsupported: complete handles --rank 1, or --rank 2 --nonnegative on 3x3 (got --rank {rank})"
                    )))
                }
            };
            Ok((outcome_text(&o), io.out, 0))
        }
        Cmd::OneMissing {
            rank,
            hole,
            json,
            io,
        } => {
            let m = read_input(&io.input)?;
            let hole = match hole {
                Some(h) => h,
                None => match m.missing().as_slice() {
                    [h] => *h,
                    _ => return Err(Fail("precondition violated: give --hole i,j".into())),
                },
            };
            let o = classify_one_missing(&m, hole, rank)?;
            let value = match &o {
                CompletionOutcome::Unique(c) => Some(c.get(hole.0, hole.1).clone()),
                _ => None,
            };
            let out = if json {
                pretty(&json!({
                    "classification": o.kind(),
                    "hole": [hole.0, hole.1],
                    "rank": rank,
                    "value": value.as_ref().map(q),
                    "completion": o.matrix().map(mat),
                }))
            } else {
                match &value {
                    Some(v) => format!("{} {v}\n", o.kind()),
                    None => format!("{}\n", o.kind()),
                }
            };
            Ok((out, io.out, 0))
        }
        Cmd::CheckNnrank3 { json, io } => {
            let m = full(&read_input(&io.input)?)?;
            let r = nn_rank_at_most_3(&m)?;
            let out = if json {
                pretty(&json!({
                    "holds": r.holds,
                    "rank": r.rank,
                    "w": r.witness.as_ref().map(|(w, _)| mat(w)),
                    "h": r.witness.as_ref().map(|(_, h)| mat(h)),
                    "triangle": r.triangle.as_ref().map(|t| pts(t.vertices())),
                    "inner": r.pair.as_ref().map(|p| pts(p.inner.vertices())),
                    "outer": r.pair.as_ref().map(|p| pts(p.outer.vertices())),
                }))
            } else {
                let mut s = format!("{}\n", if r.holds { "TRUE" } else { "FALSE" });
                if let Some((w, h)) = &r.witness {
                    s.push_str(&format!("W\n{}H\n{}", text(w), text(h)));
                }
                s
            };
            Ok((out, io.out, 0))
        }
        Cmd::Nn3Decide { json, io } => {
            let m = read_input(&io.input)?;
            let c = decide_nn3_two_missing(&m)?;
            let out = if json {
                pretty(&c.to_json())
            } else {
                format!("{c}\n")
            };
            let status = if c.verdict == Verdict::Unknown { 2 } else { 0 };
            Ok((out, io.out, status))
        }
        Cmd::Plot { svg, io } => {
            let m = read_input(&io.input)?;
            let (pair, tri) = plot_pair(&m)?;
            let out = render_svg(&pair, tri.as_ref());
            Ok((out, svg.or(io.out), 0))
        }
    }
}

/// Nested pair to draw: the rank-3 pair of a full matrix, or for two missing
/// entries the certified member (or the first envelope piece).
fn plot_pair(m: &PartialMatrix) -> Result<(NestedPair, Option<Triangle>), Fail> {
    if let Some(full) = m.to_matrix() {
        let r = nn_rank_at_most_3(&full)?;
        let pair = r.pair.ok_or_else(|| {
            Fail(format!(
                "precondition violated: rank is {}, nested polygons need rank 3",
                r.rank
            ))
        })?;
        return Ok((pair, r.triangle));
    }
    let c = decide_nn3_two_missing(m)?;
    if let Some(pair) = c.pair {
        return Ok((pair, c.triangle));
    }
    match c.envelope.first() {
        Some(p) => match &p.outer {
            Some(o) => Ok((NestedPair::from_polygons(p.inner.clone(), o.clone()), None)),
            None => Err(Fail("nothing to plot: the outer envelope is empty".into())),
        },
        None => Err(Fail(format!("nothing to plot for route {}", c.route))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok((out, path, status)) => {
            let written = match path {
                Some(p) => {
                    fs::write(&p, out.as_bytes()).map_err(|e| format!("{}: {e}", p.display()))
                }
                None => io::stdout()
                    .write_all(out.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(status)
        }
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
