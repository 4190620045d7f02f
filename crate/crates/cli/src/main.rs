use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hsd::catalog::{verify_entry, CatalogFilter, Status};
use hsd::constructions::{fill_holes_a, fill_holes_b, multiply, MapSupplier};
use hsd::format::{parse_design, parse_starters, write_design, write_starters, DESIGN_HEADER, STARTER_HEADER};
use hsd::prover::{existence_table, prove, prove_type, Mode, ProveOptions, Verdict};
use hsd::quasigroup::to_quasigroup;
use hsd::search::{search_direct, search_starters, SearchBudget, SearchResult};
use hsd::{catalog_get, catalog_list, catalog_verify_all, develop, is_feasible, verify_design, Design, TypeSpec};

/// `println!` that exits quietly when the reader has gone away.
macro_rules! out {
    ($($arg:tt)*) => { emit(format!("{}\n", format_args!($($arg)*))) };
}

/// `print!` counterpart of [`out!`].
macro_rules! out_raw {
    ($($arg:tt)*) => { emit(format!($($arg)*)) };
}

fn emit(text: String) {
    if let Err(e) = io::stdout().write_all(text.as_bytes()) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: writing output: {e}");
        std::process::exit(USAGE as i32);
    }
}

/// Exit codes scripts can branch on.
const OK: u8 = 0;
const INVALID: u8 = 1;
const UNKNOWN: u8 = 2;
const USAGE: u8 = 3;

#[derive(Parser)]
#[command(name = "hsd", version, about = "Holey Schröder designs: verify, construct, search, prove")]
struct Cli {
    /// Seed for randomized search; fixed by default so runs repeat.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Worker threads (0: all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Verify a design (or a starter file, after developing it).
    Verify { file: PathBuf },
    /// Develop a starter file into the full block list.
    Develop {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Necessary conditions for an HSD(3^n u^1).
    Feasible { n: u64, u: u64 },
    /// Embedded starter tables, base designs and 4-GDDs.
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Prove existence of an HSD of the given type, e.g. "3^12 4^1".
    Prove {
        #[arg(value_name = "TYPE")]
        type_spec: String,
        /// Execute the recipe and certify the design.
        #[arg(long)]
        materialize: bool,
        /// Lift the desk-scale point cap.
        #[arg(long)]
        large: bool,
        /// Also try a starter search on the target itself.
        #[arg(long)]
        search: bool,
        /// Write the certified design here (implies --materialize).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Existence table for 4 ≤ n ≤ nmax, 0 ≤ u ≤ umax.
    Table {
        #[arg(long)]
        nmax: u64,
        #[arg(long)]
        umax: u64,
        #[arg(long)]
        materialize: bool,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Exact-cover searches; NONE is a proof of non-existence.
    #[command(subcommand)]
    Search(SearchCmd),
    /// Multiply every hole of a design by m.
    Multiply {
        file: PathBuf,
        m: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fill the holes of an outer design with smaller HSDs.
    #[command(subcommand)]
    Fill(FillCmd),
    /// Other representations of a design.
    #[command(subcommand)]
    Convert(ConvertCmd),
}

#[derive(Subcommand)]
enum CatalogCmd {
    /// One line per entry: id, kind, status, type, summary.
    List {
        #[arg(long)]
        status: Option<Status>,
        /// starter, design or gdd
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        prefix: Option<String>,
        #[arg(long = "type")]
        type_spec: Option<TypeSpec>,
    },
    /// Print an entry as stored.
    Get {
        id: String,
        /// Print the developed design instead of the stored text.
        #[arg(long)]
        develop: bool,
    },
    /// Checksum, develop and verify every entry.
    VerifyAll,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long = "type")]
    type_spec: TypeSpec,
    /// Seconds.
    #[arg(long, default_value_t = 60)]
    budget: u64,
    #[arg(long)]
    nodes: Option<u64>,
    /// Write the per-branch search log here.
    #[arg(long)]
    proof_log: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SearchCmd {
    /// Starter blocks developed with +step.
    Starter {
        #[command(flatten)]
        args: SearchArgs,
        #[arg(long, default_value_t = 1)]
        step: u32,
    },
    /// Exact cover over all candidate blocks.
    Direct {
        #[command(flatten)]
        args: SearchArgs,
    },
}

#[derive(Args)]
struct FillArgs {
    /// Outer design.
    outer: PathBuf,
    /// HSD(h^s v^1) laid over the s-holes.
    #[arg(long)]
    inner: PathBuf,
    #[arg(long, default_value_t = 3)]
    h: u64,
    #[arg(long)]
    s: u64,
    #[arg(long, default_value_t = 0)]
    v: u64,
    /// Size of the hole kept open.
    #[arg(long, default_value_t = 0)]
    w: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FillCmd {
    /// HSD((hs)^m w^1) + HSD(h^s v^1) → HSD(h^{sm} (w+v)^1).
    A(FillArgs),
    /// HSD((hs)^m (ht)^1 w^1) + HSD(h^s v^1) + HSD(h^t v^1) → HSD(h^{sm+t} (w+v)^1).
    B {
        #[command(flatten)]
        args: FillArgs,
        /// HSD(h^t v^1); omit when it has at most one hole.
        #[arg(long)]
        inner_t: Option<PathBuf>,
        #[arg(long)]
        t: u64,
    },
}

#[derive(Subcommand)]
enum ConvertCmd {
    /// Print the quasigroup multiplication table of a design.
    Quasigroup { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    if cli.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global();
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

/// `-` is standard input.
fn read(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// `None` or `-` is standard output.
fn write(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) if p != Path::new("-") => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        _ => {
            emit(text.to_string());
            Ok(())
        }
    }
}

/// A design file, or a starter file developed on the fly.
fn load_design(path: &Path) -> Result<Design> {
    let text = read(path)?;
    let header = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).find(|l| !l.is_empty()).unwrap_or("");
    if header == STARTER_HEADER {
        let s = parse_starters(&text).with_context(|| format!("parsing {}", path.display()))?;
        return develop(&s).map_err(|e| anyhow!("developing {}: {e}", path.display()));
    }
    if header != DESIGN_HEADER {
        bail!("{}: expected a `{DESIGN_HEADER}` or `{STARTER_HEADER}` file", path.display());
    }
    parse_design(&text).with_context(|| format!("parsing {}", path.display()))
}

fn budget(cli: &Cli, a: &SearchArgs) -> SearchBudget {
    SearchBudget { node_limit: a.nodes, threads: cli.threads, ..SearchBudget::seconds(a.budget).with_seed(cli.seed) }
}

fn search_code<T>(r: &SearchResult<T>) -> u8 {
    match r {
        SearchResult::Found(_) => OK,
        SearchResult::Exhausted => INVALID,
        SearchResult::Timeout => UNKNOWN,
    }
}

fn run(cli: &Cli) -> Result<u8> {
    match &cli.cmd {
        Cmd::Verify { file } => {
            let rep = verify_design(&load_design(file)?);
            out!("{rep}");
            Ok(if rep.passed() { OK } else { INVALID })
        }
        Cmd::Develop { file, output } => {
            let s = parse_starters(&read(file)?).with_context(|| format!("parsing {}", file.display()))?;
            match develop(&s) {
                Ok(d) => {
                    write(output.as_deref(), &write_design(&d))?;
                    Ok(OK)
                }
                Err(e) => {
                    eprintln!("{e}");
                    Ok(INVALID)
                }
            }
        }
        Cmd::Feasible { n, u } => {
            let r = is_feasible(*n, *u);
            out!("{r}");
            Ok(if r.feasible { OK } else { INVALID })
        }
        Cmd::Catalog(c) => catalog(c),
        Cmd::Prove { type_spec, materialize, large, search, output } => {
            let t: TypeSpec = type_spec.parse().map_err(|e| anyhow!("bad type `{type_spec}`: {e}"))?;
            let opts = ProveOptions {
                mode: if *materialize || output.is_some() { Mode::Materialize } else { Mode::Plan },
                large: *large,
                search_target: *search,
                seed: cli.seed,
                threads: cli.threads,
                ..Default::default()
            };
            let v = match t.as_uniform_plus_one() {
                Some((3, n, u)) => prove(n, u, &opts),
                _ => prove_type(&t, &opts),
            };
            out!("{v}");
            if let (Some(d), Some(_)) = (v.design(), output) {
                write(output.as_deref(), &write_design(d))?;
            }
            Ok(match v {
                Verdict::Exists { .. } => OK,
                Verdict::Infeasible(_) => INVALID,
                Verdict::Unknown { .. } => UNKNOWN,
            })
        }
        Cmd::Table { nmax, umax, materialize, csv } => {
            let opts = ProveOptions {
                mode: if *materialize { Mode::Materialize } else { Mode::Plan },
                seed: cli.seed,
                ..Default::default()
            };
            let t = existence_table(*nmax, *umax, &opts);
            out!("{t}");
            if let Some(p) = csv {
                write(Some(p), &t.to_csv())?;
            }
            Ok(if t.count("UNKNOWN_HERE") == 0 { OK } else { UNKNOWN })
        }
        Cmd::Search(SearchCmd::Starter { args, step }) => {
            let r = search_starters(&args.type_spec, *step, &budget(cli, args));
            eprintln!("{r}");
            if let Some(p) = &args.proof_log {
                write(Some(p), &(r.log.join("\n") + "\n"))?;
            }
            match r.result.found() {
                Some(s) => write(args.output.as_deref(), &write_starters(s))?,
                None => out!("{}", r.result.label()),
            }
            Ok(search_code(&r.result))
        }
        Cmd::Search(SearchCmd::Direct { args }) => {
            let r = search_direct(&args.type_spec, &budget(cli, args));
            eprintln!("{r}");
            if let Some(p) = &args.proof_log {
                write(Some(p), &(r.log.join("\n") + "\n"))?;
            }
            match r.result.found() {
                Some(d) => write(args.output.as_deref(), &write_design(d))?,
                None => out!("{}", r.result.label()),
            }
            Ok(search_code(&r.result))
        }
        Cmd::Multiply { file, m, output } => {
            let d = multiply(&load_design(file)?, *m)?;
            write(output.as_deref(), &write_design(&d))?;
            Ok(OK)
        }
        Cmd::Fill(FillCmd::A(a)) => {
            let supply = MapSupplier(vec![load_design(&a.inner)?]);
            let d = fill_holes_a(&load_design(&a.outer)?, &supply, a.h, a.s, a.v, a.w)?;
            write(a.output.as_deref(), &write_design(&d))?;
            Ok(OK)
        }
        Cmd::Fill(FillCmd::B { args: a, inner_t, t }) => {
            let mut inner = vec![load_design(&a.inner)?];
            if let Some(p) = inner_t {
                inner.push(load_design(p)?);
            }
            let d = fill_holes_b(&load_design(&a.outer)?, &MapSupplier(inner), a.h, a.s, *t, a.v, a.w)?;
            write(a.output.as_deref(), &write_design(&d))?;
            Ok(OK)
        }
        Cmd::Convert(ConvertCmd::Quasigroup { file }) => match to_quasigroup(&load_design(file)?) {
            Ok(q) => {
                out_raw!("{q}");
                Ok(OK)
            }
            Err(e) => {
                eprintln!("{e}");
                Ok(INVALID)
            }
        },
    }
}

fn catalog(c: &CatalogCmd) -> Result<u8> {
    match c {
        CatalogCmd::List { status, kind, prefix, type_spec } => {
            let f = CatalogFilter { status: *status, kind: kind.clone(), prefix: prefix.clone(), type_spec: type_spec.clone() };
            for e in catalog_list(&f) {
                out!("{e}");
            }
            Ok(OK)
        }
        CatalogCmd::Get { id, develop } => {
            let e = catalog_get(id)?;
            if !*develop {
                out_raw!("{}", e.text);
                return Ok(OK);
            }
            match e.design() {
                Some(Ok(d)) => out_raw!("{}", write_design(&d)),
                Some(Err(err)) => {
                    eprintln!("{err}");
                    return Ok(INVALID);
                }
                None => out_raw!("{}", e.text),
            }
            let rep = verify_entry(e);
            eprintln!("{rep}");
            Ok(if rep.passed() { OK } else { INVALID })
        }
        CatalogCmd::VerifyAll => {
            let rep = catalog_verify_all();
            out!("{rep}");
            Ok(if rep.passed() { OK } else { INVALID })
        }
    }
}
