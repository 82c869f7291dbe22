use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rmove::experiment::{run_row, AlgOptions, Algorithm, LpCache, RowOptions, CSV_HEADER};
use rmove::instances::{
    gen_densest_reduction, gen_integrality_gap, gen_sbm, load_labeled_edgelist, Relabel,
    SbmParams, DEFAULT_REDUCTION_NODE_BOUND,
};
use rmove::io::{format_instance, load_instance, load_plain_edgelist};
use rmove::lp::{build_ckr_lp, build_lagrangian_lp, build_rmove2_lp, build_rmove_lp};
use rmove::{Error, Instance};

#[derive(Parser)]
#[command(name = "rmove", version, about = "Budgeted multiway cut solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated or converted instance file.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Run one algorithm on an instance file and print a CSV row.
    Solve(SolveArgs),
    /// Run algorithms over instances, budgets and seeds and write CSV.
    Sweep(SweepArgs),
    /// Print an LP of an instance, one constraint per line.
    LpDump(LpDumpArgs),
}

#[derive(Args)]
struct Output {
    /// Output path (standard output if omitted).
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Family {
    /// Stochastic block model with one terminal per block.
    Sbm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        pin: f64,
        #[arg(long)]
        pout: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        r: usize,
        /// Keep nodes in their own block instead of relabeling at random.
        #[arg(long)]
        keep_labels: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Two-path instance whose LP is r+1 times below the integer optimum.
    Gap {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        tail: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Densest-subgraph reduction of an unweighted `u v` edge list.
    Reduction {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = DEFAULT_REDUCTION_NODE_BOUND)]
        node_bound: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Induced subgraph of the largest labeled blocks of an edge list.
    Load {
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long, default_value_t = 3)]
        top: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
struct RunFlags {
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.75)]
    gamma: f64,
    /// Largest number of labelings the exact search may visit.
    #[arg(long, default_value_t = rmove::baselines::DEFAULT_WORK_BOUND)]
    work_bound: u64,
    /// Skip the LP: leave lp_obj and ratio empty.
    #[arg(long)]
    no_lp: bool,
    /// Leave time_ms empty so reruns are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

impl RunFlags {
    fn options(&self) -> RowOptions {
        RowOptions {
            alg: AlgOptions {
                epsilon: self.epsilon,
                gamma: self.gamma,
                work_bound: self.work_bound,
            },
            with_lp: !self.no_lp,
            timing: !self.no_timing,
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_parser = parse_alg)]
    alg: Algorithm,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Override the move budget stored in the file.
    #[arg(long)]
    r: Option<usize>,
    /// Print the CSV header before the row.
    #[arg(long)]
    header: bool,
    #[command(flatten)]
    flags: RunFlags,
}

#[derive(Args)]
struct SweepArgs {
    /// Instance files to sweep (alternative to --family).
    #[arg(long, num_args = 1.., conflicts_with = "family")]
    instances: Vec<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<SweepFamily>,
    /// Comma-separated algorithm names.
    #[arg(long)]
    algs: String,
    /// Budgets: `a..b` (inclusive) or a comma-separated list.
    #[arg(long, value_parser = parse_range)]
    r: Option<Range>,
    /// Seeds for randomized algorithms, same syntax as --r.
    #[arg(long, value_parser = parse_range, default_value = "0")]
    seeds: Range,
    #[arg(long, default_value_t = 90)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 0.3)]
    pin: f64,
    #[arg(long, default_value_t = 0.1)]
    pout: f64,
    /// Number of generated SBM graphs.
    #[arg(long, default_value_t = 1)]
    graphs: u64,
    /// Seed of the first generated graph; graph i uses graph_seed + i.
    #[arg(long, default_value_t = 0)]
    graph_seed: u64,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    #[arg(long, default_value_t = 6)]
    tail: usize,
    #[command(flatten)]
    flags: RunFlags,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFamily {
    Sbm,
    Gap,
}

#[derive(Clone, Copy, ValueEnum)]
enum LpForm {
    Rmove,
    Ckr,
    Rmove2,
    Lagrangian,
}

#[derive(Args)]
struct LpDumpArgs {
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "rmove")]
    form: LpForm,
    #[arg(long, default_value_t = 0.0)]
    alpha: f64,
    #[command(flatten)]
    output: Output,
}

fn parse_alg(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone)]
struct Range(Vec<u64>);

fn parse_range(s: &str) -> Result<Range, String> {
    let bad = |_| format!("cannot read {s:?} as `a..b` or `a,b,...`");
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        return Ok(Range((a..=b).collect()));
    }
    s.split(',')
        .map(|x| x.trim().parse().map_err(bad))
        .collect::<Result<_, _>>()
        .map(Range)
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.into())
    }
}

fn open_output(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_text(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    let mut w = open_output(out)?;
    w.write_all(text.as_bytes())?;
    w.flush()?;
    Ok(())
}

fn instance_name(path: &Path) -> String {
    path.display().to_string().replace(',', "_")
}

fn cmd_gen(family: Family) -> Result<(), Failure> {
    let (instance, output) = match family {
        Family::Sbm {
            n,
            k,
            pin,
            pout,
            seed,
            r,
            keep_labels,
            output,
        } => {
            let mut params = SbmParams::new(n, k, pin, pout, seed);
            params.r = r;
            if keep_labels {
                params.relabel = Relabel::Keep;
            }
            (gen_sbm(&params)?, output)
        }
        Family::Gap { r, eps, tail, output } => (gen_integrality_gap(r, eps, tail)?, output),
        Family::Reduction {
            input,
            r,
            node_bound,
            output,
        } => {
            let g = load_plain_edgelist(&input)?;
            (gen_densest_reduction(&g, r, node_bound)?.0, output)
        }
        Family::Load {
            edges,
            labels,
            top,
            r,
            output,
        } => {
            let (inst, report) = load_labeled_edgelist(&edges, &labels, top, r)?;
            if report.self_loops > 0 || report.duplicate_edges > 0 {
                eprintln!(
                    "dropped {} self-loops and {} repeated edges",
                    report.self_loops, report.duplicate_edges
                );
            }
            (inst, output)
        }
    };
    write_text(&output.out, &format_instance(&instance))
}

fn cmd_solve(args: SolveArgs) -> Result<(), Failure> {
    let mut instance = load_instance(&args.instance)?;
    if let Some(r) = args.r {
        instance = instance.with_r(r);
    }
    let mut cache = LpCache::new();
    let row = run_row(
        &instance,
        &instance_name(&args.instance),
        args.alg,
        args.seed,
        &args.flags.options(),
        &mut cache,
    )?;
    let mut text = String::new();
    if args.header {
        text.push_str(CSV_HEADER);
        text.push('\n');
    }
    text.push_str(&row.to_csv());
    text.push('\n');
    write_text(&None, &text)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), Failure> {
    let algs: Vec<Algorithm> = args
        .algs
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|e: Error| Failure::Usage(e.to_string())))
        .collect::<Result<_, _>>()?;
    if algs.is_empty() {
        return Err(Failure::Usage("no algorithms given".into()));
    }
    let budgets: Option<Vec<usize>> = args
        .r
        .as_ref()
        .map(|v| v.0.iter().map(|&r| r as usize).collect());
    let mut cells: Vec<(String, Instance)> = Vec::new();
    match args.family {
        Some(SweepFamily::Sbm) => {
            for i in 0..args.graphs {
                let seed = args.graph_seed + i;
                let inst = gen_sbm(&SbmParams::new(args.n, args.k, args.pin, args.pout, seed))?;
                let name = format!("sbm-n{}-k{}-s{seed}", args.n, args.k);
                for &r in budgets.as_deref().unwrap_or(&[0]) {
                    cells.push((name.clone(), inst.with_r(r)));
                }
            }
        }
        Some(SweepFamily::Gap) => {
            let rs = budgets
                .clone()
                .ok_or_else(|| Failure::Usage("--r is required for the gap family".into()))?;
            for r in rs {
                let inst = gen_integrality_gap(r, args.eps, args.tail)?;
                cells.push((format!("gap-r{r}"), inst));
            }
        }
        None => {
            if args.instances.is_empty() {
                return Err(Failure::Usage("give --instances or --family".into()));
            }
            for path in &args.instances {
                let inst = load_instance(path)?;
                let name = instance_name(path);
                match &budgets {
                    Some(rs) => cells.extend(rs.iter().map(|&r| (name.clone(), inst.with_r(r)))),
                    None => cells.push((name, inst)),
                }
            }
        }
    }
    let opts = args.flags.options();
    let mut cache = LpCache::new();
    let mut w = open_output(&args.output.out)?;
    writeln!(w, "{CSV_HEADER}")?;
    for (name, inst) in &cells {
        for &alg in &algs {
            let seeds: &[u64] = if alg.is_randomized() {
                &args.seeds.0
            } else {
                &args.seeds.0[..1]
            };
            for &seed in seeds {
                let row = run_row(inst, name, alg, seed, &opts, &mut cache)?;
                writeln!(w, "{}", row.to_csv())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

fn cmd_lp_dump(args: LpDumpArgs) -> Result<(), Failure> {
    let instance = load_instance(&args.instance)?;
    let lp = match args.form {
        LpForm::Rmove => build_rmove_lp(&instance),
        LpForm::Ckr => build_ckr_lp(&instance),
        LpForm::Rmove2 => build_rmove2_lp(&instance)?,
        LpForm::Lagrangian => build_lagrangian_lp(&instance, args.alpha)?,
    };
    write_text(&args.output.out, &lp.to_text())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) => 2,
        Error::RequiresTwoPartitions(_) => 3,
        Error::Capacity(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen { family } => cmd_gen(family),
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::LpDump(args) => cmd_lp_dump(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
