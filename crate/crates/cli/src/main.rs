//! `popboards`: command-line access to boards, claw families, the insertion
//! encoding and avoider counts.

use std::fmt::Debug;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use popboards::{
    count_avoiders_formula, count_square_formula, decode, distinguishing_board_search, encode,
    equivalence_check, transfer, valid_count, valid_positions, BoardError, BruteForce, ClawFamily,
    CodecError, CountError, EncodingWord, ExactCount, FerrersBoard, Pop, PopError, Transversal,
    DEFAULT_CAP,
};
use serde_json::{json, Map, Value};

const CAP_VAR: &str = "POPBOARDS_CAP";

#[derive(Parser)]
#[command(
    name = "popboards",
    version,
    about = "Claw-shaped POP avoidance on Ferrers-board transversals"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Plain)]
    format: Format,
    /// Worker threads for brute-force enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Largest board order for brute force (overrides POPBOARDS_CAP).
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Brute,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Board utilities.
    Board {
        #[command(subcommand)]
        action: BoardAction,
    },
    /// List the transversals of a board, optionally only the avoiders.
    Enumerate {
        #[arg(long)]
        board: String,
        #[arg(long)]
        family: Option<String>,
    },
    /// Count the transversals of a board avoiding a family.
    Count {
        #[arg(long)]
        board: String,
        #[arg(long)]
        family: String,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Encode an avoiding transversal as a word.
    Encode {
        #[arg(long)]
        board: String,
        #[arg(long)]
        family: String,
        #[arg(long)]
        transversal: String,
    },
    /// Decode a word into an avoiding transversal.
    Decode {
        #[arg(long)]
        board: String,
        #[arg(long)]
        family: String,
        #[arg(long)]
        word: String,
    },
    /// Map an avoider of one family onto an avoider of another with the same (m, k, d).
    Transfer {
        #[arg(long)]
        board: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        transversal: String,
    },
    /// Brute-force both counts and certify the transfer bijection.
    Equiv {
        #[arg(long)]
        board: String,
        #[arg(long = "a")]
        family_a: String,
        #[arg(long = "b")]
        family_b: String,
    },
    /// Avoider counts on square boards for n = 1..=n-max.
    Table {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
    },
    /// Find the first board on which two families have different counts.
    SearchDistinguisher {
        #[arg(long = "a")]
        family_a: String,
        #[arg(long = "b")]
        family_b: String,
        #[arg(long)]
        max_n: usize,
    },
    /// List the classical patterns of a POP such as "4: 1>2, 1>4".
    ExpandPop { pop: String },
    /// Valid positions among l white cells for a family.
    ValidPositions {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        family: String,
    },
    /// Occurrences of a POP or classical pattern in a permutation.
    Occurrences {
        #[arg(long)]
        perm: String,
        #[arg(long, conflicts_with = "pattern", required_unless_present = "pattern")]
        pop: Option<String>,
        /// Classical pattern such as 2,3,1.
        #[arg(long)]
        pattern: Option<String>,
    },
    /// Least occurrence of a POP in a transversal.
    Occurs {
        #[arg(long)]
        board: String,
        #[arg(long)]
        transversal: String,
        #[arg(long)]
        pop: String,
    },
}

#[derive(Subcommand)]
enum BoardAction {
    /// Validate a board and show its white profile.
    Check { board: String },
}

#[derive(Debug)]
enum CliError {
    Board(BoardError),
    Pop(PopError),
    Codec(CodecError),
    Count(CountError),
    Input(String),
}

impl From<BoardError> for CliError {
    fn from(e: BoardError) -> Self {
        CliError::Board(e)
    }
}

impl From<PopError> for CliError {
    fn from(e: PopError) -> Self {
        CliError::Pop(e)
    }
}

impl From<CodecError> for CliError {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::Board(b) => CliError::Board(b),
            e => CliError::Codec(e),
        }
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::Board(b) => CliError::Board(b),
            CountError::Codec(c) => c.into(),
            e => CliError::Count(e),
        }
    }
}

/// Variant name of an error, e.g. `NotAvoiding`.
fn variant_name<E: Debug>(e: &E) -> String {
    format!("{e:?}")
        .chars()
        .take_while(|c| c.is_alphanumeric())
        .collect()
}

impl CliError {
    fn kind(&self) -> String {
        match self {
            CliError::Board(e) => variant_name(e),
            CliError::Pop(e) => variant_name(e),
            CliError::Codec(e) => variant_name(e),
            CliError::Count(e) => variant_name(e),
            CliError::Input(_) => "Input".into(),
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Board(e) => e.to_string(),
            CliError::Pop(e) => e.to_string(),
            CliError::Codec(e) => e.to_string(),
            CliError::Count(e) => e.to_string(),
            CliError::Input(m) => m.clone(),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Inline value, or the trimmed contents of a file when written as `@path`.
fn resolve(arg: &str) -> CliResult<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn board_arg(arg: &str) -> CliResult<FerrersBoard> {
    Ok(resolve(arg)?.parse()?)
}

fn family_arg(arg: &str) -> CliResult<ClawFamily> {
    Ok(resolve(arg)?.parse()?)
}

fn big(x: &ExactCount) -> Value {
    serde_json::from_str(&x.to_string()).expect("integer literal")
}

struct Output {
    format: Format,
    lines: Vec<String>,
}

impl Output {
    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn json(&mut self, v: Value) {
        self.lines.push(v.to_string());
    }
}

struct Context {
    brute: BruteForce,
}

fn brute_settings(cli: &Cli) -> CliResult<BruteForce> {
    let cap = match cli.cap {
        Some(cap) => cap,
        None => match std::env::var(CAP_VAR) {
            Ok(v) => v.trim().parse().map_err(|_| {
                CliError::Input(format!(
                    "{CAP_VAR} must be a non-negative integer, got {v:?}"
                ))
            })?,
            Err(_) => DEFAULT_CAP,
        },
    };
    Ok(BruteForce::with_cap(cap).jobs(cli.jobs))
}

fn run(cli: &Cli, out: &mut Output) -> CliResult<()> {
    let ctx = Context {
        brute: brute_settings(cli)?,
    };
    let format = out.format;
    match &cli.command {
        Command::Board {
            action: BoardAction::Check { board },
        } => {
            let board = board_arg(board)?;
            let profile = board.white_profile().ok();
            let list = |xs: &[usize]| {
                xs.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            };
            match format {
                Format::Json => out.json(json!({
                    "board": board.to_string(),
                    "order": board.order(),
                    "feasible": board.is_feasible(),
                    "row_lengths": board.row_lengths_top_down(),
                    "profile": profile,
                })),
                Format::Csv => {
                    out.line("board,order,feasible,profile");
                    out.line(format!(
                        "\"{board}\",{},{},\"{}\"",
                        board.order(),
                        board.is_feasible(),
                        profile.as_deref().map(list).unwrap_or_default()
                    ));
                }
                Format::Plain => {
                    out.line(format!("board {board}"));
                    out.line(format!("order {}", board.order()));
                    out.line(format!(
                        "row-lengths {}",
                        list(&board.row_lengths_top_down())
                    ));
                    out.line(format!("feasible {}", board.is_feasible()));
                    if let Some(p) = profile {
                        out.line(format!("profile {}", list(&p)));
                    }
                }
            }
        }
        Command::Enumerate { board, family } => {
            let board = board_arg(board)?;
            let family = family.as_deref().map(family_arg).transpose()?;
            let items: Vec<Transversal> = match &family {
                Some(f) => ctx.brute.avoiders(&board, f)?,
                None => {
                    if board.order() > ctx.brute.cap {
                        return Err(CountError::CapExceeded {
                            n: board.order(),
                            cap: ctx.brute.cap,
                        }
                        .into());
                    }
                    board.transversals().collect()
                }
            };
            match format {
                Format::Json => out.json(json!({
                    "board": board.to_string(),
                    "family": family.map(|f| f.to_string()),
                    "transversals": items.iter().map(|t| t.values().to_vec()).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    out.line("transversal");
                    items.iter().for_each(|t| out.line(format!("\"{t}\"")));
                }
                Format::Plain => items.iter().for_each(|t| out.line(t.to_string())),
            }
        }
        Command::Count {
            board,
            family,
            method,
        } => {
            let board = board_arg(board)?;
            let family = family_arg(family)?;
            let (count, tag) = count_with(&ctx, &board, &family, *method)?;
            match format {
                Format::Json => out.json(json!({
                    "board": board.to_string(),
                    "familyA": family.to_string(),
                    "method": tag,
                    "count": big(&count),
                })),
                Format::Csv => {
                    out.line("board,family,method,count");
                    out.line(format!("\"{board}\",\"{family}\",{tag},{count}"));
                }
                Format::Plain => out.line(count.to_string()),
            }
        }
        Command::Encode {
            board,
            family,
            transversal,
        } => {
            let board = board_arg(board)?;
            let family = family_arg(family)?;
            let t = Transversal::parse(board, &resolve(transversal)?)?;
            let word = encode(&t, &family)?;
            emit_sequence(out, "word", &word.to_string(), word.letters());
        }
        Command::Decode {
            board,
            family,
            word,
        } => {
            let board = board_arg(board)?;
            let family = family_arg(family)?;
            let word: EncodingWord = resolve(word)?.parse()?;
            let t = decode(&word, &board, &family)?;
            emit_sequence(out, "transversal", &t.to_string(), t.values());
        }
        Command::Transfer {
            board,
            from,
            to,
            transversal,
        } => {
            let board = board_arg(board)?;
            let from = family_arg(from)?;
            let to = family_arg(to)?;
            let t = Transversal::parse(board, &resolve(transversal)?)?;
            let image = transfer(&t, &from, &to)?;
            emit_sequence(out, "transversal", &image.to_string(), image.values());
        }
        Command::Equiv {
            board,
            family_a,
            family_b,
        } => {
            let board = board_arg(board)?;
            let a = family_arg(family_a)?;
            let b = family_arg(family_b)?;
            let report = equivalence_check::<ExactCount>(&board, &a, &b, &ctx.brute)?;
            let count_b = report.count_b.clone().expect("pair report");
            match format {
                Format::Json => out.json(json!({
                    "board": board.to_string(),
                    "familyA": a.to_string(),
                    "familyB": b.to_string(),
                    "method": report.method,
                    "counts": [big(&report.count_a), big(&count_b)],
                    "certified": report.certified(),
                    "pairsChecked": report.pairs_checked,
                })),
                Format::Csv => {
                    out.line("board,familyA,familyB,countA,countB,certified");
                    out.line(format!(
                        "\"{board}\",\"{a}\",\"{b}\",{},{},{}",
                        report.count_a,
                        count_b,
                        report.certified()
                    ));
                }
                Format::Plain => out.line(format!(
                    "{} = {} certified {}",
                    report.count_a,
                    count_b,
                    report.pairs_checked.unwrap_or(0)
                )),
            }
        }
        Command::Table {
            family,
            n_max,
            method,
        } => {
            let family = family_arg(family)?;
            let mut rows = Vec::with_capacity(*n_max);
            for n in 1..=*n_max {
                let count = match method {
                    Method::Formula => count_square_formula::<ExactCount>(n, family.shape())?,
                    _ => count_with(&ctx, &FerrersBoard::square(n), &family, *method)?.0,
                };
                rows.push((n, count));
            }
            match format {
                Format::Json => out.json(json!({
                    "family": family.to_string(),
                    "rows": rows.iter().map(|(n, c)| json!({"n": n, "count": big(c)})).collect::<Vec<_>>(),
                })),
                Format::Csv => {
                    out.line("n,count");
                    rows.iter().for_each(|(n, c)| out.line(format!("{n},{c}")));
                }
                Format::Plain => rows.iter().for_each(|(n, c)| out.line(format!("{n} {c}"))),
            }
        }
        Command::SearchDistinguisher {
            family_a,
            family_b,
            max_n,
        } => {
            let a = family_arg(family_a)?;
            let b = family_arg(family_b)?;
            let hit = distinguishing_board_search::<ExactCount>(&a, &b, *max_n, &ctx.brute)?;
            match format {
                Format::Json => out.json(json!({
                    "familyA": a.to_string(),
                    "familyB": b.to_string(),
                    "maxN": max_n,
                    "board": hit.as_ref().map(|h| h.board.to_string()),
                    "counts": hit.as_ref().map(|h| vec![big(&h.count_a), big(&h.count_b)]),
                })),
                Format::Csv => {
                    out.line("board,countA,countB");
                    if let Some(h) = &hit {
                        out.line(format!("\"{}\",{},{}", h.board, h.count_a, h.count_b));
                    }
                }
                Format::Plain => match &hit {
                    Some(h) => out.line(format!("{} {} {}", h.board, h.count_a, h.count_b)),
                    None => out.line("none"),
                },
            }
        }
        Command::ExpandPop { pop } => {
            let pop: Pop = resolve(pop)?.parse()?;
            let patterns: Vec<String> = pop
                .patterns()
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(if pop.size() > 9 { "," } else { "" })
                })
                .collect();
            match format {
                Format::Json => out.json(json!({"pop": pop.to_string(), "patterns": patterns})),
                Format::Csv => {
                    out.line("pattern");
                    patterns.into_iter().for_each(|p| out.line(p));
                }
                Format::Plain => patterns.into_iter().for_each(|p| out.line(p)),
            }
        }
        Command::ValidPositions { l, family } => {
            let family = family_arg(family)?;
            let set = valid_positions(*l, &family);
            let size = valid_count(*l, family.shape());
            let list = set
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            match format {
                Format::Json => out.json(json!({
                    "l": l,
                    "family": family.to_string(),
                    "positions": set,
                    "closedForm": size,
                })),
                Format::Csv => {
                    out.line("l,positions,closed_form");
                    out.line(format!("{l},\"{list}\",{size}"));
                }
                Format::Plain => out.line(list),
            }
        }
        Command::Occurrences { perm, pop, pattern } => {
            let perm = parse_perm(&resolve(perm)?)?;
            let pop = match (pop, pattern) {
                (Some(p), _) => resolve(p)?.parse::<Pop>()?,
                (None, Some(p)) => Pop::classical(&parse_perm(&resolve(p)?)?)?,
                (None, None) => unreachable!("clap requires one of --pop/--pattern"),
            };
            let found: Vec<Vec<usize>> = pop
                .occurrences_in_permutation(&perm)
                .into_iter()
                .map(|idx| idx.iter().map(|&i| perm[i - 1]).collect())
                .collect();
            match format {
                Format::Json => out.json(json!({
                    "pop": pop.to_string(),
                    "count": found.len(),
                    "occurrences": found,
                })),
                Format::Csv => {
                    out.line("occurrence");
                    found
                        .iter()
                        .for_each(|o| out.line(format!("\"{}\"", join(o))));
                }
                Format::Plain => {
                    out.line(found.len().to_string());
                    found.iter().for_each(|o| out.line(join(o)));
                }
            }
        }
        Command::Occurs {
            board,
            transversal,
            pop,
        } => {
            let board = board_arg(board)?;
            let t = Transversal::parse(board, &resolve(transversal)?)?;
            let pop: Pop = resolve(pop)?.parse()?;
            let witness = pop.occurrence_in(&t);
            match format {
                Format::Json => out.json(json!({
                    "transversal": t.to_string(),
                    "pop": pop.to_string(),
                    "columns": witness.as_ref().map(|w| w.columns.clone()),
                    "values": witness.as_ref().map(|w| w.values.clone()),
                })),
                Format::Csv => {
                    out.line("columns,values");
                    if let Some(w) = &witness {
                        out.line(format!("\"{}\",\"{}\"", join(&w.columns), join(&w.values)));
                    }
                }
                Format::Plain => match &witness {
                    Some(w) => out.line(format!(
                        "columns {} values {}",
                        join(&w.columns),
                        join(&w.values)
                    )),
                    None => out.line("none"),
                },
            }
        }
    }
    Ok(())
}

/// A permutation of `1..=n`, comma-separated or as a digit string like `45213`.
fn parse_perm(s: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Input(format!("not a permutation: {s:?}"));
    let items: Vec<usize> = if s.contains(',') {
        s.split(',')
            .map(|x| x.trim().parse().map_err(|_| bad()))
            .collect::<CliResult<_>>()?
    } else {
        s.trim()
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
            .collect::<CliResult<_>>()?
    };
    let mut sorted = items.clone();
    sorted.sort_unstable();
    if !sorted.iter().copied().eq(1..=items.len()) {
        return Err(bad());
    }
    Ok(items)
}

fn join(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn emit_sequence(out: &mut Output, key: &str, text: &str, items: &[usize]) {
    match out.format {
        Format::Json => {
            let mut map = Map::new();
            map.insert(key.to_string(), json!(items));
            out.json(Value::Object(map));
        }
        Format::Csv => {
            out.line(key);
            out.line(format!("\"{text}\""));
        }
        Format::Plain => out.line(text),
    }
}

/// Count by formula, brute force, or both (which must agree).
fn count_with(
    ctx: &Context,
    board: &FerrersBoard,
    family: &ClawFamily,
    method: Method,
) -> CliResult<(ExactCount, &'static str)> {
    match method {
        Method::Formula => Ok((count_avoiders_formula(board, family)?, "formula")),
        Method::Brute => Ok((ctx.brute.count(board, family)?, "bruteforce")),
        Method::Both => {
            let formula: ExactCount = count_avoiders_formula(board, family)?;
            let brute: ExactCount = ctx.brute.count(board, family)?;
            if formula != brute {
                return Err(CountError::EquivalenceViolated {
                    board: board.to_string(),
                    reason: format!("formula {formula} but enumeration {brute} for {family}"),
                }
                .into());
            }
            Ok((formula, "formula+bruteforce"))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Output {
        format: cli.format,
        lines: Vec::new(),
    };
    match run(&cli, &mut out) {
        Ok(()) => {
            for line in out.lines {
                println!("{line}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let body = json!({"error": e.kind(), "message": e.message()});
            eprintln!("{body}");
            ExitCode::from(1)
        }
    }
}
