use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use homometry_lab::classify::{
    classify_pair, verify_partition_homometry, verify_patterson, verify_singletons_proposition,
    verify_sparse_theorem, verify_two_alphabet_theorem, PairClass, VerifyMode, VerifyReport,
    SCHEMA,
};
use homometry_lab::diffsets::{cross_difference, self_difference};
use homometry_lab::dihedral::{are_equivalent_partitions, are_pseudo_equivalent};
use homometry_lab::domain::parse_index_list;
use homometry_lab::experiments::{
    default_mode, profile_for_n, run_table1, with_workers, ExperimentReport, CSV_HEADER,
    TABLE_SAMPLE_SIZE,
};
use homometry_lab::{DihedralElement, Error, OrderedPartition, RingSize, SubsetMask};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;

/// Homometric sets, dihedral equivalence and autocorrelation forms on Z_N.
///
/// Sets are comma-separated indices ("0,1,4,7"). Ordered partitions separate
/// blocks with '|' ("0,1,4,7|2,6|3,5").
#[derive(Parser)]
#[command(name = "homometry-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print A-A, or A-B when a second --set is given.
    Diffset {
        #[arg(long)]
        n: usize,
        /// Comma-separated indices; give twice for a cross difference.
        #[arg(
            long = "set",
            num_args = 1,
            required = true,
            allow_hyphen_values = true
        )]
        sets: Vec<String>,
        #[arg(long)]
        json: bool,
    },
    /// Classify a pair of ordered partitions as equivalent, pseudo-only,
    /// homometric-only or not homometric.
    Classify {
        #[arg(long)]
        n: usize,
        /// First partition, e.g. "0,1,4,7|2,6|3,5".
        #[arg(long)]
        p: String,
        /// Second partition, same number of blocks.
        #[arg(long)]
        q: String,
        #[arg(long)]
        json: bool,
    },
    /// Pair counts over three-block partitions of the balanced profile for N.
    Table1 {
        #[arg(long, required_unless_present = "all", conflicts_with = "all")]
        n: Option<usize>,
        /// Rows N = 6..13. Rings up to 7 run exhaustively, the rest on a
        /// seeded sample, unless --mode is given.
        #[arg(long)]
        all: bool,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = TABLE_SAMPLE_SIZE)]
        sample_size: usize,
        /// Write to this file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON array of reports instead of CSV.
        #[arg(long)]
        json: bool,
        /// Worker threads (default: all cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Exhaustively (or by sampling) check one of the structural theorems.
    /// Exit status 0: no violation, 1: violation found, 2: usage error.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        #[arg(long)]
        n: usize,
        /// Number of blocks (sparse, singletons, forms).
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Patterson only.
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Sampled pairs for the Patterson sampler.
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Numeric draws for the two-alphabet check.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        workers: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, ValueEnum)]
enum Theorem {
    /// Homometric sets have homometric complements.
    Patterson,
    /// Two-letter signals: forms, blocks and partitions agree.
    TwoAlphabet,
    /// Forms with the first letter set to zero.
    Sparse,
    /// (N-K, 1, ..., 1) partitions: homometric iff equivalent.
    Singletons,
    /// Equal coefficient forms iff homometric partitions.
    Forms,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn ring(n: usize) -> Result<RingSize, ExitCode> {
    RingSize::new(n).map_err(usage)
}

fn parse_set(ring: RingSize, text: &str) -> Result<SubsetMask, ExitCode> {
    let indices = parse_index_list(text).map_err(usage)?;
    SubsetMask::from_indices(ring, indices).map_err(usage)
}

fn parse_partition(ring: RingSize, text: &str) -> Result<OrderedPartition, ExitCode> {
    OrderedPartition::parse(ring, text).map_err(usage)
}

fn emit_json<T: Serialize>(value: &T) -> ExitCode {
    match serde_json::to_string_pretty(value) {
        Ok(s) => {
            println!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => usage(e),
    }
}

#[derive(Serialize)]
struct DiffsetOutput {
    schema: &'static str,
    n: usize,
    sets: Vec<Vec<usize>>,
    multiset: String,
    mult: Vec<u32>,
}

fn cmd_diffset(n: usize, sets: &[String], json: bool) -> Result<ExitCode, ExitCode> {
    let ring = ring(n)?;
    let parsed = sets
        .iter()
        .map(|s| parse_set(ring, s))
        .collect::<Result<Vec<_>, _>>()?;
    let ms = match parsed.as_slice() {
        [a] => self_difference(a),
        [a, b] => cross_difference(a, b),
        _ => return Err(usage("--set takes one or two sets")),
    }
    .map_err(usage)?;
    if json {
        return Ok(emit_json(&DiffsetOutput {
            schema: SCHEMA,
            n,
            sets: parsed.iter().map(SubsetMask::to_vec).collect(),
            multiset: ms.to_string(),
            mult: ms.multiplicities().to_vec(),
        }));
    }
    println!("{ms}");
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ClassifyOutput {
    schema: &'static str,
    n: usize,
    p: OrderedPartition,
    q: OrderedPartition,
    homometric: bool,
    class: PairClass,
    equivalent: Option<DihedralElement>,
    pseudo_equivalent: Option<Vec<DihedralElement>>,
}

fn cmd_classify(n: usize, p: &str, q: &str, json: bool) -> Result<ExitCode, ExitCode> {
    let ring = ring(n)?;
    let p = parse_partition(ring, p)?;
    let q = parse_partition(ring, q)?;
    let taxonomy = classify_pair(&p, &q).map_err(usage)?;
    let equivalent = are_equivalent_partitions(&p, &q).map_err(usage)?;
    let pseudo = are_pseudo_equivalent(&p, &q).map_err(usage)?;
    let out = ClassifyOutput {
        schema: SCHEMA,
        n,
        p,
        q,
        homometric: taxonomy.homometric,
        class: taxonomy.class,
        equivalent,
        pseudo_equivalent: pseudo,
    };
    if json {
        return Ok(emit_json(&out));
    }
    let class = serde_json::to_value(out.class).map_err(usage)?;
    println!("class: {}", class.as_str().unwrap_or_default());
    println!("homometric: {}", out.homometric);
    match out.equivalent {
        Some(g) => println!("equivalent: yes, via {g}"),
        None => println!("equivalent: no"),
    }
    match &out.pseudo_equivalent {
        Some(gs) => {
            let list: Vec<String> = gs.iter().map(ToString::to_string).collect();
            println!("pseudo-equivalent: yes, via ({})", list.join(", "));
        }
        None => println!("pseudo-equivalent: no"),
    }
    Ok(ExitCode::SUCCESS)
}

struct Table1Args {
    rows: Vec<usize>,
    mode: Option<Mode>,
    seed: u64,
    sample_size: usize,
    out: Option<PathBuf>,
    json: bool,
    workers: Option<usize>,
}

fn write_table(reports: &[ExperimentReport], json: bool, sink: &mut dyn Write) -> io::Result<()> {
    if json {
        serde_json::to_writer_pretty(&mut *sink, reports)?;
        writeln!(sink)?;
        return Ok(());
    }
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        w.write_record(r.csv_record())?;
    }
    w.flush()
}

fn cmd_table1(args: Table1Args) -> Result<ExitCode, ExitCode> {
    let mut reports = Vec::new();
    let mut status = ExitCode::SUCCESS;
    for n in args.rows {
        let ring = ring(n)?;
        let profile = profile_for_n(ring);
        let mode = match args.mode {
            Some(Mode::Exhaustive) => VerifyMode::Exhaustive,
            Some(Mode::Sample) => VerifyMode::Sampled {
                count: args.sample_size,
                seed: args.seed,
            },
            None => match default_mode(ring, args.seed) {
                VerifyMode::Sampled { seed, .. } => VerifyMode::Sampled {
                    count: args.sample_size,
                    seed,
                },
                m => m,
            },
        };
        let start = Instant::now();
        match run_table1(ring, &profile, mode, args.workers) {
            Ok(r) => {
                eprintln!(
                    "N={n}: {} pairs in {:.2?}",
                    r.pairs_checked,
                    start.elapsed()
                );
                reports.push(r);
            }
            Err(e @ Error::CrossCheck(_)) => {
                eprintln!("error: N={n}: {e}");
                status = ExitCode::from(EXIT_VIOLATION);
            }
            Err(e) => {
                eprintln!("error: N={n}: {e}");
                if status == ExitCode::SUCCESS {
                    status = ExitCode::from(EXIT_USAGE);
                }
            }
        }
    }
    let written = match &args.out {
        Some(path) => File::create(path).and_then(|mut f| write_table(&reports, args.json, &mut f)),
        None => write_table(&reports, args.json, &mut io::stdout().lock()),
    };
    written.map_err(usage)?;
    Ok(status)
}

struct VerifyArgs {
    theorem: Theorem,
    n: usize,
    k: usize,
    mode: Mode,
    count: usize,
    seed: u64,
    trials: usize,
    workers: Option<usize>,
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode, ExitCode> {
    let ring = ring(a.n)?;
    let start = Instant::now();
    let report: Result<VerifyReport, Error> = with_workers(a.workers, || match a.theorem {
        Theorem::Patterson => {
            let mode = match a.mode {
                Mode::Exhaustive => VerifyMode::Exhaustive,
                Mode::Sample => VerifyMode::Sampled {
                    count: a.count,
                    seed: a.seed,
                },
            };
            verify_patterson(ring, mode)
        }
        Theorem::TwoAlphabet => verify_two_alphabet_theorem(ring, a.trials, a.seed),
        Theorem::Sparse => verify_sparse_theorem(ring, a.k),
        Theorem::Singletons => verify_singletons_proposition(ring, a.k),
        Theorem::Forms => verify_partition_homometry(ring, a.k),
    });
    let report = report.map_err(usage)?;
    eprintln!(
        "{} N={}: {} pairs, {} violations in {:.2?}",
        report.theorem,
        report.n,
        report.checked,
        report.violation_count,
        start.elapsed()
    );
    let code = emit_json(&report);
    if code != ExitCode::SUCCESS {
        return Ok(code);
    }
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Diffset { n, sets, json } => cmd_diffset(n, &sets, json),
        Command::Classify { n, p, q, json } => cmd_classify(n, &p, &q, json),
        Command::Table1 {
            n,
            all,
            mode,
            seed,
            sample_size,
            out,
            json,
            workers,
        } => cmd_table1(Table1Args {
            rows: if all {
                (6..=13).collect()
            } else {
                n.into_iter().collect()
            },
            mode,
            seed,
            sample_size,
            out,
            json,
            workers,
        }),
        Command::Verify {
            theorem,
            n,
            k,
            mode,
            count,
            seed,
            trials,
            workers,
        } => cmd_verify(VerifyArgs {
            theorem,
            n,
            k,
            mode,
            count,
            seed,
            trials,
            workers,
        }),
    };
    result.unwrap_or_else(|code| code)
}
