use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use guidetree_core::eval::{
    compare_groups, load_dataset, sample_size, score_transcript, write_tidy_csv, CompareConfig,
    Criterion, GroupPair,
};
use guidetree_core::format::{parse_case, parse_transcript, parse_tree_bytes, FormatError};
use guidetree_service::{serve, ServeConfig};
use serde_json::json;

#[derive(Parser)]
#[command(name = "guidetree", version, about = "Decision-tree navigation and evaluation tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one transcript against its case's gold answers.
    Score {
        #[arg(long)]
        case: PathBuf,
        #[arg(long)]
        transcript: PathBuf,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Compare groups of a study dataset with Welch tests.
    Compare {
        /// Directory with `cases/*.case.json` and `transcripts/*.json`.
        #[arg(long)]
        dataset: PathBuf,
        /// Group pair such as `A:B` or `AB:C`; repeatable.
        #[arg(long = "pair", default_values = ["A:B", "A:C", "B:C", "AB:C"])]
        pairs: Vec<GroupPair>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Number of tests for the per-criterion correction.
        #[arg(long, default_value_t = Criterion::COUNT as u32)]
        bonferroni: u32,
        /// Where to write the JSON report.
        #[arg(long)]
        out: PathBuf,
        /// Also write the long-format table (one row per case-solve and
        /// criterion) as CSV.
        #[arg(long)]
        tidy: Option<PathBuf>,
    },
    /// Case-solves per group for a two-sample comparison.
    Samplesize {
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.8)]
        power: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        sd: f64,
        #[arg(long)]
        json: bool,
    },
    /// Check tree definition files.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "GUIDETREE_TREES")]
        trees: PathBuf,
        #[arg(long, env = "GUIDETREE_DATA")]
        data: PathBuf,
        #[arg(long, env = "GUIDETREE_LISTEN", default_value = "127.0.0.1:8080")]
        listen: SocketAddr,
        #[arg(long = "static", env = "GUIDETREE_STATIC")]
        static_dir: Option<PathBuf>,
    },
}

type Result<T> = std::result::Result<T, Box<dyn std::error::Error + Send + Sync>>;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn in_file<T>(path: &Path, r: std::result::Result<T, FormatError>) -> Result<T> {
    r.map_err(|e| format!("{}: {e}", path.display()).into())
}

fn score(case: &Path, transcript: &Path, as_json: bool) -> Result<()> {
    let c = in_file(case, parse_case(&read(case)?))?;
    let t = in_file(transcript, parse_transcript(&read(transcript)?))?;
    let s = score_transcript(&c, &t)?;
    if as_json {
        let points: serde_json::Map<String, serde_json::Value> = Criterion::ALL
            .iter()
            .map(|&k| (k.token().to_owned(), s.get(k).into()))
            .collect();
        let out = json!({
            "participant": t.participant,
            "group": t.group,
            "case": t.case,
            "points": points,
            "total": s.total(),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    }
    let show = |a: Option<&guidetree_core::eval::Answer>| {
        a.map_or_else(|| "-".to_owned(), |a| serde_json::to_string(a).unwrap_or_default())
    };
    println!("{:<28} {:>16} {:>16}  point", "criterion", "answer", "gold");
    for k in Criterion::ALL {
        println!(
            "{:<28} {:>16} {:>16}  {}",
            k.label(),
            show(t.answers.get(&k)),
            show(c.gold.get(&k)),
            s.get(k)
        );
    }
    println!("total {}/{}", s.total(), Criterion::COUNT);
    Ok(())
}

fn compare(
    dataset: &Path,
    pairs: Vec<GroupPair>,
    alpha: f64,
    tests: u32,
    out: &Path,
    tidy: Option<&Path>,
) -> Result<()> {
    let scored = load_dataset(dataset)?.score()?;
    let report = compare_groups(&scored, &CompareConfig { pairs, alpha, tests })?;
    fs::write(out, report.to_json()).map_err(|e| format!("{}: {e}", out.display()))?;
    if let Some(path) = tidy {
        let file = fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        write_tidy_csv(&scored, file)?;
    }
    print!("{}", report.summary_table());
    Ok(())
}

fn samplesize(alpha: f64, power: f64, delta: f64, sd: f64, as_json: bool) -> Result<()> {
    let n = sample_size(alpha, power, delta, sd)?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&n)?);
        return Ok(());
    }
    println!("{} case-solves per group (exact {:.3})", n.per_group, n.exact);
    if let Some(note) = &n.note {
        println!("note: {note}");
    }
    Ok(())
}

fn validate(files: &[PathBuf]) -> Result<bool> {
    let mut ok = true;
    for path in files {
        let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
        match parse_tree_bytes(&bytes) {
            Ok(tree) => println!("{}: ok ({} nodes)", path.display(), tree.node_count()),
            Err(FormatError::Validation(report)) => {
                ok = false;
                for issue in &report.issues {
                    println!("{}: {issue}", path.display());
                }
            }
            Err(e) => {
                ok = false;
                println!("{}: {e}", path.display());
            }
        }
    }
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Score {
            case,
            transcript,
            json,
        } => score(&case, &transcript, json)?,
        Command::Compare {
            dataset,
            pairs,
            alpha,
            bonferroni,
            out,
            tidy,
        } => compare(&dataset, pairs, alpha, bonferroni, &out, tidy.as_deref())?,
        Command::Samplesize {
            alpha,
            power,
            delta,
            sd,
            json,
        } => samplesize(alpha, power, delta, sd, json)?,
        Command::Validate { files } => return validate(&files),
        Command::Serve {
            trees,
            data,
            listen,
            static_dir,
        } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(serve(ServeConfig {
                trees,
                data,
                listen,
                static_dir,
            }))?;
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
