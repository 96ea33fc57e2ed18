//! `mfc`: build coset complexes, inspect walls and run theorem checks.
//!
//! Exit codes: 0 pass, 1 disagreement, 2 usage or input error, 3 cap
//! exceeded without `allow_skip`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use mfc_core::complex::{milnor_fiber_complex, reduced_homology, DEFAULT_SIMPLEX_CAP};
use mfc_core::group::{enumerate_cached, DEFAULT_CAP};
use mfc_core::verify::{cap_reason, load_suite, RunOptions, SkipReason, Status, TheoremId, Verifier, VerifyError};
use mfc_core::walls::{wall, Recognizer};
use mfc_core::{parse_symbol, Diagram};

#[derive(Parser)]
#[command(
    name = "mfc",
    version,
    about = "Milnor fiber complexes of Coxeter and Shephard groups"
)]
struct Cli {
    /// Largest group order to enumerate (suite files may set their own).
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Largest number of faces in a complex.
    #[arg(long, global = true)]
    simplex_cap: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Components, families and basic degrees of a diagram.
    Classify { symbol: String },
    /// Builds the coset complex and prints its f-vector and homology.
    Build {
        symbol: String,
        /// Writes the complex in the facet-list export format.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Recognition of the wall of each reflection class.
    Walls {
        symbol: String,
        /// Only this class, by index in the listing; prints the full verdict.
        #[arg(long)]
        class: Option<usize>,
    },
    /// Runs one theorem check and prints its report.
    Verify {
        /// A, B, counts, orlik, monomial or join.
        theorem: String,
        symbol: String,
        #[arg(long)]
        timings: bool,
    },
    /// Runs a suite file and writes `report.json` to the output directory.
    Suite {
        file: PathBuf,
        #[arg(long)]
        deep: bool,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "mfc-out")]
        out: PathBuf,
        #[arg(long)]
        timings: bool,
    },
}

impl Cli {
    fn cap(&self) -> usize {
        self.cap.unwrap_or(DEFAULT_CAP)
    }

    fn simplex_cap(&self) -> u64 {
        self.simplex_cap.unwrap_or(DEFAULT_SIMPLEX_CAP)
    }
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("MFC_CACHE_DIR").map(PathBuf::from)
}

fn parse(symbol: &str) -> Result<Diagram, VerifyError> {
    Ok(parse_symbol(symbol)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = match e.downcast_ref::<VerifyError>() {
                Some(v) if cap_reason(v).is_some() => 3,
                Some(VerifyError::Complex(_)) => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.command {
        Command::Classify { symbol } => {
            let d = parse(symbol)?;
            println!("symbol: {}", d.to_symbol());
            println!("name: {}", d.canonical_name()?);
            for f in d.families()? {
                let degrees: Vec<String> = f.degrees().iter().map(u64::to_string).collect();
                println!(
                    "component: {}  degrees {}  order {}",
                    f.name(),
                    degrees.join(","),
                    f.order()
                );
            }
            println!("order: {}", d.group_order()?);
            Ok(0)
        }
        Command::Build { symbol, export } => {
            let d = parse(symbol)?;
            let table = enumerate_cached(&d, cli.cap(), cache_dir().as_deref()).map_err(VerifyError::from)?;
            let (c, _) = milnor_fiber_complex(Arc::new(table), cli.simplex_cap()).map_err(VerifyError::from)?;
            let h = reduced_homology(&c);
            println!("f-vector: {:?}", c.f_vector());
            println!("reduced betti: {:?} (degree -1: {})", h.betti, h.betti_minus_one);
            println!("torsion: {:?}", h.torsion);
            if let Some(path) = export {
                std::fs::write(path, c.to_export_string()).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(0)
        }
        Command::Walls { symbol, class } => {
            let d = parse(symbol)?;
            let table = Arc::new(enumerate_cached(&d, cli.cap(), cache_dir().as_deref()).map_err(VerifyError::from)?);
            let (c, action) = milnor_fiber_complex(table.clone(), cli.simplex_cap()).map_err(VerifyError::from)?;
            let mut recognizer = Recognizer::new(cli.cap(), cli.simplex_cap());
            recognizer.cache_dir = cache_dir();
            let classes = table.reflection_classes();
            if let Some(k) = class {
                let cl = classes
                    .get(*k)
                    .with_context(|| format!("class index {k} out of range (0..{})", classes.len()))?;
                let w = wall(&c, &action, cl.rep);
                let verdict = recognizer.recognize(&w, d.rank() - 1).map_err(VerifyError::from)?;
                let search = recognizer.milnor_wall_search(&w, d.rank()).map_err(VerifyError::from)?;
                let out = serde_json::json!({
                    "rep": cl.rep,
                    "word": table.word_string(cl.rep),
                    "class_size": cl.elements.len(),
                    "wall_f_vector": w.f_vector(),
                    "recognition": verdict,
                    "milnor_wall": search.certificate,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
                return Ok(0);
            }
            println!(
                "{:>3}  {:<14} {:>5} {:>6}  {:<16} {:<12} milnor wall",
                "k", "rep", "order", "size", "wall f", "outcome"
            );
            for (k, cl) in classes.iter().enumerate() {
                let w = wall(&c, &action, cl.rep);
                let verdict = recognizer.recognize(&w, d.rank() - 1).map_err(VerifyError::from)?;
                let search = recognizer.milnor_wall_search(&w, d.rank()).map_err(VerifyError::from)?;
                let outcome = verdict
                    .recognized()
                    .map_or_else(|| "not_mfc".to_string(), str::to_string);
                let milnor = search.certificate.map_or_else(|| "none".to_string(), |c| c.recognized);
                println!(
                    "{k:>3}  {:<14} {:>5} {:>6}  {:<16} {:<12} {milnor}",
                    table.word_string(cl.rep),
                    table.element_order(cl.rep),
                    cl.elements.len(),
                    format!("{:?}", w.f_vector()),
                    outcome,
                );
            }
            Ok(0)
        }
        Command::Verify {
            theorem,
            symbol,
            timings,
        } => {
            let t: TheoremId = theorem.parse()?;
            let d = parse(symbol)?;
            let v = Verifier::new(cli.cap(), cli.simplex_cap(), cache_dir()).with_timings(*timings);
            let report = v.verify(t, &d)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(match report.status {
                Status::Agree | Status::Skipped(SkipReason::DeepOnly) => 0,
                Status::Disagree => 1,
                Status::Skipped(SkipReason::Cap { .. }) => 3,
            })
        }
        Command::Suite {
            file,
            deep,
            jobs,
            out,
            timings,
        } => {
            let suite = load_suite(file)?;
            let opts = RunOptions {
                deep: *deep,
                cap: cli.cap,
                simplex_cap: cli.simplex_cap,
                jobs: *jobs,
                timings: *timings,
                cache_dir: cache_dir(),
            };
            let bundle = suite.run(&opts)?;
            for r in bundle.reports() {
                let status = match &r.status {
                    Status::Agree => "agree".to_string(),
                    Status::Disagree => "DISAGREE".to_string(),
                    Status::Skipped(SkipReason::DeepOnly) => "skipped (deep only)".to_string(),
                    Status::Skipped(SkipReason::Cap { detail }) => format!("skipped ({detail})"),
                };
                println!("{:<10} {:<8} {status}", r.name, r.theorem);
            }
            let s = &bundle.summary;
            println!("agree {}  disagree {}  skipped {}", s.agree, s.disagree, s.skipped);
            let path = bundle.write(out)?;
            println!("report: {}", path.display());
            Ok(bundle.exit_code() as u8)
        }
    }
}
