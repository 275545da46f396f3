//! `typik`: entailment checks, answer sets, normal forms, program export,
//! reduction cross-checks and scaling tables.
//!
//! Exit codes: 0 entailed (or success), 1 not entailed (or disagreement),
//! 2 no model or no T-complete answer set, 3 budget exhausted or usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use serde_json::json;

use typik_core::engine::{answer_sets, extract_model, Budget};
use typik_core::minimal::{named_atoms, satisfiable_concepts};
use typik_core::parser::{print_kb, Document};
use typik_core::pdlp::{cross_check, random_pdlp, Pdlp};
use typik_core::replicate::{bench_table, Dimension, MULTIPLIERS};
use typik_core::{
    compile, emit_asp, entails, fixtures, normalize, parse_document, parse_query, Answer, EntailOptions, Mode, Query,
    RankProfile, ReasonError, Verdict,
};

/// Writes to standard output, ignoring a closed pipe.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

#[derive(Parser, Debug)]
#[command(name = "typik", version, about = "Reasoner for SROEL(⊓,×) with typicality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Rational,
    Tmin,
    TminAbox,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Rational => Mode::Rational,
            ModeArg::Tmin => Mode::Tmin,
            ModeArg::TminAbox => Mode::TminAbox,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DimArg {
    Abox,
    Kb,
    Both,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a query; without --query, every query of the file.
    Check {
        input: String,
        #[arg(long)]
        query: Option<String>,
        #[arg(long, value_enum, default_value = "rational")]
        mode: ModeArg,
        /// Time budget in seconds.
        #[arg(long)]
        budget: Option<f64>,
        /// Maximum number of witness profiles.
        #[arg(long, default_value_t = 3)]
        limit: usize,
        /// Reason on the whole KB even when it splits into independent parts.
        #[arg(long)]
        no_split: bool,
    },
    /// List answer sets in canonical order.
    Models {
        input: String,
        #[arg(long)]
        query: Option<String>,
        #[arg(long, default_value_t = 10)]
        limit: usize,
        #[arg(long)]
        budget: Option<f64>,
        /// Also print the ranked model of each answer set.
        #[arg(long)]
        interpretation: bool,
    },
    /// Print the normal form.
    Normalize { input: String },
    /// Print the program with preference statements.
    EmitAsp {
        input: String,
        #[arg(long)]
        query: Option<String>,
        #[arg(long, value_enum, default_value = "tmin")]
        mode: ModeArg,
        #[arg(long)]
        budget: Option<f64>,
    },
    /// Compare minimal-model entailment of a disjunctive program with the
    /// reasoner's verdict on its reduction.
    Pdlp {
        /// Program file: one clause per line, `-` marks negation.
        #[arg(long, conflicts_with = "random")]
        file: Option<PathBuf>,
        /// Literal to check; all literals when absent.
        #[arg(long, requires = "file", allow_hyphen_values = true)]
        lit: Option<String>,
        /// Number of random programs.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_vars: usize,
        #[arg(long, default_value_t = 6)]
        max_clauses: usize,
        #[arg(long, value_enum, default_value = "tmin")]
        mode: ModeArg,
    },
    /// Time the ABox-minimal check on replicated copies of a KB.
    Bench {
        /// Defaults to the bundled ex1.
        input: Option<String>,
        #[arg(long)]
        query: Option<String>,
        #[arg(long, value_enum, default_value = "both")]
        dimension: DimArg,
        #[arg(long, value_delimiter = ',', default_values_t = MULTIPLIERS)]
        multipliers: Vec<usize>,
        /// Budget per cell in seconds.
        #[arg(long, default_value_t = 60.0)]
        budget: f64,
        #[arg(long)]
        no_split: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let fmt = cli.format;
    match cli.command {
        Command::Check {
            input,
            query,
            mode,
            budget,
            limit,
            no_split,
        } => {
            if limit == 0 {
                bail!("--limit must be at least 1");
            }
            let doc = load(&input)?;
            let queries = queries(&doc, query.as_deref())?;
            let opts = EntailOptions {
                budget: budget_of(budget)?,
                witness_limit: limit,
                split: !no_split,
            };
            let mut code = 0;
            for q in &queries {
                let v = match entails(&doc.kb, q, mode.into(), opts) {
                    Ok(v) => v,
                    Err(ReasonError::NoTCompleteModel) => Verdict {
                        query: q.clone(),
                        mode: mode.into(),
                        answer: Answer::NoTCompleteModel,
                        witnesses: vec![],
                    },
                    Err(e) => return Err(e.into()),
                };
                print_verdict(&v, fmt)?;
                code = code.max(answer_code(v.answer));
            }
            Ok(code)
        }
        Command::Models {
            input,
            query,
            limit,
            budget,
            interpretation,
        } => {
            let doc = load(&input)?;
            let q = query.map(|t| parse_query(&t, &doc.kb.signature)).transpose()?;
            let p = compile(&doc.kb, q.as_ref())?;
            let sets = answer_sets(&p, Some(limit), budget_of(budget)?)?;
            if sets.is_empty() && fmt == Format::Text {
                outln!("inconsistent KB: no answer set");
            }
            let mut out = vec![];
            for (i, a) in sets.iter().enumerate() {
                let profile = RankProfile::of(a);
                let atoms = named_atoms(a);
                let model = interpretation.then(|| extract_model(a));
                match fmt {
                    Format::Text => {
                        outln!("answer set {}: {profile}", i + 1);
                        if !atoms.is_empty() {
                            outln!("  {}", atoms.join(" "));
                        }
                        if let Some(m) = &model {
                            for (e, label) in m.domain.iter().enumerate() {
                                outln!("  element {label} rank {}", m.rank[e]);
                            }
                        }
                    }
                    Format::Json => out.push(json!({"profile": profile, "atoms": atoms, "model": model})),
                }
            }
            if fmt == Format::Json {
                outln!("{}", serde_json::to_string_pretty(&out)?);
            }
            Ok(if sets.is_empty() { 2 } else { 0 })
        }
        Command::Normalize { input } => {
            let doc = load(&input)?;
            typik_core::model::ensure_valid(&doc.kb)?;
            let nkb = normalize(&doc.kb);
            match fmt {
                Format::Text => {
                    for (name, c) in &nkb.fresh_names {
                        outln!("# {name} = {c}");
                    }
                    out!("{}", print_kb(&nkb.as_kb()));
                }
                Format::Json => {
                    let fresh: Vec<_> = nkb
                        .fresh_names
                        .iter()
                        .map(|(n, c)| json!({"name": n, "concept": c.to_string()}))
                        .collect();
                    let axioms: Vec<String> = nkb.axioms.iter().map(|a| a.to_string()).collect();
                    outln!(
                        "{}",
                        serde_json::to_string_pretty(&json!({"fresh_names": fresh, "axioms": axioms}))?
                    );
                }
            }
            Ok(0)
        }
        Command::EmitAsp {
            input,
            query,
            mode,
            budget,
        } => {
            let doc = load(&input)?;
            let q = query.map(|t| parse_query(&t, &doc.kb.signature)).transpose()?;
            let p = compile(&doc.kb, q.as_ref())?;
            let sat = satisfiable_concepts(&p, budget_of(budget)?)?;
            out!("{}", emit_asp(&p.facts, mode.into(), &sat));
            Ok(0)
        }
        Command::Pdlp {
            file,
            lit,
            random,
            seed,
            max_vars,
            max_clauses,
            mode,
        } => {
            let programs: Vec<Pdlp> = match (&file, random) {
                (Some(f), _) => {
                    let text = std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
                    vec![Pdlp::parse(&text)?]
                }
                (None, Some(n)) => {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    (0..n).map(|_| random_pdlp(&mut rng, max_vars, max_clauses)).collect()
                }
                (None, None) => bail!("give --file or --random"),
            };
            let start = Instant::now();
            let (mut total, mut agree) = (0usize, 0usize);
            let mut rows = vec![];
            for p in &programs {
                let lits = match &lit {
                    Some(l) => vec![p.literal(l)?],
                    None => p.literals().collect(),
                };
                for l in lits {
                    let c = cross_check(p, l, mode.into(), EntailOptions::default())?;
                    total += 1;
                    agree += c.agree as usize;
                    if fmt == Format::Text && (file.is_some() || !c.agree) {
                        if random.is_some() {
                            outln!("program: {}", p.to_string().replace('\n', "; "));
                        }
                        outln!(
                            "{}: minimal models {}, reasoner {}{}",
                            c.literal,
                            if c.bruteforce { "entail" } else { "do not entail" },
                            c.reasoner,
                            if c.agree { "" } else { "  DISAGREE" }
                        );
                    }
                    rows.push(json!({"program": p.to_string(), "check": c}));
                }
            }
            match fmt {
                Format::Text => outln!(
                    "{agree}/{total} literals agree ({} mode, {:.1}s)",
                    Mode::from(mode),
                    start.elapsed().as_secs_f64()
                ),
                Format::Json => outln!(
                    "{}",
                    serde_json::to_string_pretty(&json!({"total": total, "agree": agree, "checks": rows}))?
                ),
            }
            Ok(if agree == total { 0 } else { 1 })
        }
        Command::Bench {
            input,
            query,
            dimension,
            multipliers,
            budget,
            no_split,
        } => {
            let doc = match &input {
                Some(i) => load(i)?,
                None => fixtures::ex1(),
            };
            let q = queries(&doc, query.as_deref())?.remove(0);
            let dims = match dimension {
                DimArg::Abox => vec![Dimension::Abox],
                DimArg::Kb => vec![Dimension::Kb],
                DimArg::Both => vec![Dimension::Abox, Dimension::Kb],
            };
            let table = bench_table(&doc.kb, &q, &dims, &multipliers, seconds(budget)?, !no_split)?;
            match fmt {
                Format::Text => {
                    outln!("query {q}, mode tmin_abox, seconds");
                    out!("{table}");
                }
                Format::Json => outln!("{}", serde_json::to_string_pretty(&table)?),
            }
            Ok(0)
        }
    }
}

fn answer_code(a: Answer) -> u8 {
    match a {
        Answer::Entailed => 0,
        Answer::NotEntailed => 1,
        Answer::NoModel | Answer::NoTCompleteModel => 2,
    }
}

fn print_verdict(v: &Verdict, fmt: Format) -> Result<()> {
    match fmt {
        Format::Json => outln!("{}", serde_json::to_string(v)?),
        Format::Text => {
            let answer = match v.answer {
                Answer::NoModel => "inconsistent KB".to_string(),
                a => a.to_string(),
            };
            outln!("{} [{}]: {answer}", v.query, v.mode);
            for w in &v.witnesses {
                let tag = if w.falsifying { "falsified by" } else { "minimal" };
                outln!("  {tag}: {}", w.profile);
                if !w.atoms.is_empty() {
                    outln!("    {}", w.atoms.join(" "));
                }
            }
        }
    }
    Ok(())
}

fn seconds(s: f64) -> Result<Duration> {
    if !(s > 0.0 && s.is_finite()) {
        bail!("budget must be a positive number of seconds");
    }
    Ok(Duration::from_secs_f64(s))
}

fn budget_of(s: Option<f64>) -> Result<Budget> {
    Ok(Budget {
        max_nodes: None,
        deadline: s.map(seconds).transpose()?.map(|d| Instant::now() + d),
    })
}

/// Reads a `.tkb` file, falling back to the bundled example of that name.
fn load(input: &str) -> Result<Document> {
    let path = Path::new(input);
    if path.exists() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {input}"))?;
        return Ok(parse_document(&text, input)?);
    }
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or(input);
    fixtures::load(name).ok_or_else(|| anyhow!("{input}: no such file or bundled example"))
}

fn queries(doc: &Document, query: Option<&str>) -> Result<Vec<Query>> {
    match query {
        Some(t) => Ok(vec![parse_query(t, &doc.kb.signature)?]),
        None if doc.queries.is_empty() => bail!("no --query given and the file has no query section"),
        None => Ok(doc.queries.clone()),
    }
}
