//! Command-line front end: ingest design files, evaluate and rank pools,
//! emit bounds and criterion reports, run improvement searches.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use latmaj::classical::DiscrepancyParams;
use latmaj::construction::{descend, restarted_search, DescentTrace, TiePolicy};
use latmaj::design::{
    equidistance_class, parse_design, pc_vector, project, random_balanced, write_design, Design,
    DesignFile,
};
use latmaj::kernel::{parse_kernel_spec, KernelSpec};
use latmaj::majorization::{benchmark_pc, compare_pc};
use latmaj::report::{criterion_report, trace_to_jsonl};
use latmaj::schur::benchmark_bound;

#[derive(Parser)]
#[command(
    name = "latmaj",
    version,
    about = "Balanced lattice design assessment through pairwise coincidences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a design file is a balanced (U-type) lattice design
    Validate {
        file: PathBuf,
        /// Level count; otherwise read from the #q= directive or inferred
        #[arg(long)]
        q: Option<u32>,
    },
    /// Pairwise coincidence vector, summary statistics and benchmark profile
    Pc {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Majorization comparison of two designs from the same class
    Compare {
        file_a: PathBuf,
        file_b: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Two-stage ranking: admissibility classification, then Schur ordering
    Rank {
        /// Design files forming the pool; or one file with --choose
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Rank all k-column projections of a single input design
        #[arg(long)]
        choose: Option<usize>,
        /// Convex kernel (variance, quadratic, power:<p>, exp:<rho>,
        /// exp:golden, choose:<j>, table:<v0,...,vs>)
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        json: bool,
    },
    /// Full classical-criterion report with benchmarks
    Criteria {
        file: PathBuf,
        /// Categorical-discrepancy parameter a (default 0.25)
        #[arg(long, default_value_t = 0.25)]
        disc_a: f64,
        /// Categorical-discrepancy parameter b (default 0)
        #[arg(long, default_value_t = 0.0)]
        disc_b: f64,
        #[arg(long)]
        json: bool,
    },
    /// Universal lower bound for a design class and kernel
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        kernel: String,
        #[arg(long)]
        json: bool,
    },
    /// Improve a design by iterated coincidence-flattening swaps
    Improve {
        file: PathBuf,
        #[arg(long)]
        kernel: String,
        /// Iteration cap per descent (default 10*n*s)
        #[arg(long)]
        max_iters: Option<usize>,
        /// Additional random restarts beside the descent from the input
        #[arg(long, default_value_t = 0)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the improved design here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the descent trace as JSON lines
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Generate a uniformly random balanced design
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify all k-column projections of a design
    Subdesigns {
        file: PathBuf,
        #[arg(long)]
        choose: usize,
        /// List every projection with its status
        #[arg(long)]
        list: bool,
    },
}

/// Domain failures exit 1; usage failures exit 2 (clap already exits 2 on
/// grammar errors).
enum CliError {
    Domain(String),
    Usage(String),
}

impl CliError {
    fn domain(e: impl std::fmt::Display) -> CliError {
        CliError::Domain(e.to_string())
    }
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// LATMAJ_THREADS caps parallelism; default is all cores. Results do not
/// depend on the thread count.
fn init_thread_pool() {
    if let Ok(v) = std::env::var("LATMAJ_THREADS") {
        if let Ok(k) = v.trim().parse::<usize>() {
            if k >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
        }
    }
}

fn run(command: Command) -> CliResult {
    match command {
        Command::Validate { file, q } => {
            let parsed = load(&file, q)?;
            let d = &parsed.design;
            println!(
                "ok: {} is a balanced U({}, {}^{}) design{}",
                file.display(),
                d.n(),
                d.q(),
                d.s(),
                match equidistance_class(d) {
                    latmaj::design::EquidistanceClass::Equidistant => " (equidistant)",
                    latmaj::design::EquidistanceClass::WeakEquidistant => " (weak equidistant)",
                    latmaj::design::EquidistanceClass::Neither => "",
                }
            );
            Ok(())
        }
        Command::Pc { file, json } => {
            let parsed = load(&file, None)?;
            let design = parsed.design.with_label(stem(&file));
            output::pc(&design, json);
            Ok(())
        }
        Command::Compare {
            file_a,
            file_b,
            json,
        } => {
            let a = load(&file_a, None)?.design;
            let b = load(&file_b, None)?.design;
            if (a.n(), a.s(), a.q()) != (b.n(), b.s(), b.q()) {
                return Err(CliError::Domain(format!(
                    "designs come from different classes: U({}, {}^{}) vs U({}, {}^{})",
                    a.n(),
                    a.q(),
                    a.s(),
                    b.n(),
                    b.q(),
                    b.s()
                )));
            }
            let rel = compare_pc(&pc_vector(&a), &pc_vector(&b)).map_err(CliError::domain)?;
            output::compare(&rel, json);
            Ok(())
        }
        Command::Rank {
            files,
            choose,
            kernel,
            json,
        } => {
            let spec = parse_spec(&kernel)?;
            let (designs, labels) = build_pool(&files, choose)?;
            output::rank(&designs, &labels, &spec, &kernel, json).map_err(CliError::domain)
        }
        Command::Criteria {
            file,
            disc_a,
            disc_b,
            json,
        } => {
            let parsed = load(&file, None)?;
            let design = parsed.design.with_label(stem(&file));
            let params =
                DiscrepancyParams::new(disc_a, disc_b, design.q()).map_err(CliError::domain)?;
            let report = criterion_report(&design, &params).map_err(CliError::domain)?;
            output::criteria(&report, json);
            Ok(())
        }
        Command::Bounds {
            n,
            s,
            q,
            kernel,
            json,
        } => {
            let spec = parse_spec(&kernel)?;
            let resolved = spec.resolve(n, s, q).map_err(CliError::domain)?;
            let bound = benchmark_bound(n, s, q, &resolved).map_err(CliError::domain)?;
            let bench = benchmark_pc(n, s, q).map_err(CliError::domain)?;
            output::bounds(n, s, q, &kernel, bound, &bench, json);
            Ok(())
        }
        Command::Improve {
            file,
            kernel,
            max_iters,
            restarts,
            seed,
            out,
            trace,
        } => {
            let parsed = load(&file, None)?;
            improve(
                parsed.design,
                &kernel,
                max_iters,
                restarts,
                seed,
                out,
                trace,
            )
        }
        Command::Gen { n, s, q, seed, out } => {
            let d = random_balanced(n, s, q, seed).map_err(CliError::domain)?;
            emit_design(&d, None, out.as_deref())
        }
        Command::Subdesigns { file, choose, list } => {
            let parsed = load(&file, None)?;
            let (designs, labels) = projections(&parsed, choose)?;
            output::subdesigns(&designs, &labels, choose, list).map_err(CliError::domain)
        }
    }
}

fn load(path: &Path, q: Option<u32>) -> Result<DesignFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    parse_design(&text, q).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn parse_spec(text: &str) -> Result<KernelSpec, CliError> {
    parse_kernel_spec(text).map_err(CliError::domain)
}

/// The rank pool: several files, or the k-column projections of one file.
fn build_pool(
    files: &[PathBuf],
    choose: Option<usize>,
) -> Result<(Vec<Design>, Vec<String>), CliError> {
    match choose {
        Some(k) => {
            if files.len() != 1 {
                return Err(CliError::Usage(
                    "--choose expects exactly one input design".to_owned(),
                ));
            }
            let parsed = load(&files[0], None)?;
            projections(&parsed, k)
        }
        None => {
            if files.len() < 2 {
                return Err(CliError::Usage(
                    "rank needs at least two design files, or one file with --choose".to_owned(),
                ));
            }
            let mut designs = Vec::new();
            let mut labels = Vec::new();
            for f in files {
                designs.push(load(f, None)?.design);
                labels.push(stem(f));
            }
            Ok((designs, labels))
        }
    }
}

/// All k-column projections in lexicographic column order, labelled by the
/// header letters when present, otherwise by 1-based column numbers.
fn projections(parsed: &DesignFile, k: usize) -> Result<(Vec<Design>, Vec<String>), CliError> {
    let s = parsed.design.s();
    if k == 0 || k > s {
        return Err(CliError::Usage(format!(
            "--choose must be in 1..={s}, got {k}"
        )));
    }
    let mut designs = Vec::new();
    let mut labels = Vec::new();
    let mut cols: Vec<usize> = (0..k).collect();
    loop {
        let label = match &parsed.column_labels {
            Some(names) => cols
                .iter()
                .map(|&c| names[c].as_str())
                .collect::<Vec<_>>()
                .join(""),
            None => cols
                .iter()
                .map(|&c| (c + 1).to_string())
                .collect::<Vec<_>>()
                .join("+"),
        };
        designs.push(
            project(&parsed.design, &cols)
                .map_err(CliError::domain)?
                .with_label(&label),
        );
        labels.push(label);
        // next lexicographic combination
        let mut i = k;
        loop {
            if i == 0 {
                return Ok((designs, labels));
            }
            i -= 1;
            if cols[i] != i + s - k {
                break;
            }
            if i == 0 {
                return Ok((designs, labels));
            }
        }
        cols[i] += 1;
        for j in i + 1..k {
            cols[j] = cols[j - 1] + 1;
        }
    }
}

fn improve(
    design: Design,
    kernel_text: &str,
    max_iters: Option<usize>,
    restarts: usize,
    seed: u64,
    out: Option<PathBuf>,
    trace_path: Option<PathBuf>,
) -> CliResult {
    let spec = parse_spec(kernel_text)?;
    let kernel = spec.resolve_for(&design).map_err(CliError::domain)?;
    let cap = max_iters.unwrap_or_else(|| latmaj::construction::default_iteration_cap(&design));
    let from_input = descend(&design, &kernel, cap, TiePolicy::Lexicographic, seed);
    let best: DescentTrace = if restarts == 0 {
        from_input
    } else {
        let searched = restarted_search(
            design.n(),
            design.s(),
            design.q(),
            &kernel,
            restarts,
            cap,
            seed,
        );
        if searched.best_trace.final_psi < from_input.final_psi {
            searched.best_trace
        } else {
            from_input
        }
    };
    eprintln!(
        "improve: psi {} -> {} (bound {}), {} swap(s), {}",
        output::dec4(best.initial_psi),
        output::dec4(best.final_psi),
        output::dec4(best.bound),
        best.iterations.len(),
        match best.terminated {
            latmaj::construction::Terminated::LocalOptimum => "local optimum",
            latmaj::construction::Terminated::IterationCap => "iteration cap",
        }
    );
    if let Some(path) = trace_path {
        std::fs::write(&path, trace_to_jsonl(&best))
            .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    }
    emit_design(&best.final_design, None, out.as_deref())
}

fn emit_design(d: &Design, labels: Option<&[String]>, out: Option<&Path>) -> CliResult {
    let text = write_design(d, labels);
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Domain(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
