use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use pda_forge::bounds::{cheng_bound, classify, wei_bound, wei_equality_possible};
use pda_forge::design::{catalog, catalog_design, load_design, verify_design, Design};
use pda_forge::hpda::{hpda_from_scheme, hpda_loads, verify_hpda, Hpda};
use pda_forge::pda::{transpose, verify_pda, verify_pda_with, LabelPolicy, Pda};
use pda_forge::schemes::{construct, ConstructOptions, Scheme, SchemeSpec, DEFAULT_CELL_BUDGET};
use pda_forge::sim::{
    run_flat, run_hierarchical, Demand, FileLibrary, SimOptions, SimReport, DEFAULT_PACKET_BYTES,
};
use pda_forge::tables::{default_table3, emit_table2, emit_table3, table2_csv, table3_csv};

/// Build and check placement delivery arrays from combinatorial designs.
#[derive(Parser)]
#[command(name = "pda-forge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect block designs.
    #[command(subcommand)]
    Design(DesignCommand),
    /// Build a PDA from a design.
    Construct(ConstructArgs),
    /// Check a PDA and print its (K,F,Z,S) parameters.
    Verify {
        file: PathBuf,
        /// Require integers to be exactly 0..S-1.
        #[arg(long)]
        strict_labels: bool,
    },
    /// Transpose a PDA whose rows all carry the same number of stars.
    Transpose {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Lower bounds on S for (K, F, Z), or for a PDA file.
    Bounds {
        #[arg(required_unless_present = "pda", num_args = 3, value_names = ["K", "F", "Z"])]
        kfz: Vec<u64>,
        #[arg(long, conflicts_with = "kfz")]
        pda: Option<PathBuf>,
    },
    /// Compare a PDA's S with the lower bounds.
    Classify { file: PathBuf },
    /// Hierarchical PDAs.
    #[command(subcommand)]
    Hpda(HpdaCommand),
    /// Run the coded caching protocol on real bytes.
    #[command(subcommand)]
    Sim(SimCommand),
    /// Comparison tables.
    #[command(subcommand)]
    Table(TableCommand),
}

#[derive(Subcommand)]
enum DesignCommand {
    /// Check the design axioms.
    Verify { design: String },
    /// List the built-in designs.
    List,
    /// Print a design as JSON.
    Show { design: String },
}

#[derive(Args)]
struct SchemeArgs {
    #[arg(long, value_parser = ["1", "2"])]
    scheme: String,
    /// Catalog name or path to a design JSON file.
    #[arg(long)]
    design: String,
    #[arg(long)]
    i: u64,
    /// Keep the construction's own integer numbering.
    #[arg(long)]
    no_normalize: bool,
    /// Refuse arrays with more cells than this.
    #[arg(long, env = "PDA_FORGE_CELL_BUDGET", default_value_t = DEFAULT_CELL_BUDGET)]
    cell_budget: u64,
}

impl SchemeArgs {
    fn spec(&self) -> SchemeSpec {
        let scheme = if self.scheme == "1" {
            Scheme::I
        } else {
            Scheme::II
        };
        SchemeSpec::new(scheme, self.i)
    }

    fn options(&self) -> ConstructOptions {
        ConstructOptions {
            normalize: !self.no_normalize,
            cell_budget: self.cell_budget,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    /// Write here instead of standard output.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[command(flatten)]
    out: Output,
}

#[derive(Subcommand)]
enum HpdaCommand {
    /// Lift a construction to a hierarchical PDA.
    Build {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the hierarchical conditions.
    Verify { file: PathBuf },
    /// Print R1, R2 and coding delays.
    Loads { file: PathBuf },
}

#[derive(Subcommand)]
enum SimCommand {
    /// One server, K users.
    Flat {
        #[arg(long)]
        pda: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// File index per user, comma separated. Random when absent.
        #[arg(long)]
        demand: Option<String>,
        #[command(flatten)]
        sim: SimFlags,
    },
    /// Server, mirrors and users.
    Hier {
        #[arg(long)]
        hpda: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        sim: SimFlags,
    },
}

#[derive(Args)]
struct SimFlags {
    /// Library size; defaults to the number of users.
    #[arg(long)]
    files: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_PACKET_BYTES)]
    packet_bytes: usize,
    /// Include every transmission in the report.
    #[arg(long)]
    trace: bool,
}

#[derive(Subcommand)]
enum TableCommand {
    /// Scheme II against flat baselines.
    Two {
        #[arg(long, default_value = "des_3_8_4_1")]
        design: String,
        /// Comma-separated indices; defaults to 1..t-1.
        #[arg(long, value_delimiter = ',')]
        i: Option<Vec<u64>>,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Hierarchical schemes against cited baselines.
    Three {
        /// Extra design files, matched to rows by name.
        #[arg(long)]
        design_file: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn resolve_design(name_or_path: &str) -> Result<Design> {
    if let Ok(d) = catalog_design(name_or_path) {
        return Ok(d);
    }
    let path = Path::new(name_or_path);
    if !path.exists() {
        bail!("{name_or_path:?} is neither a catalog design nor a file");
    }
    load_design(&read(path)?).with_context(|| format!("loading {name_or_path}"))
}

/// JSON documents, or whitespace/comma separated grids with `*` for stars.
fn load_pda(path: &Path) -> Result<Pda> {
    let text = read(path)?;
    let parsed = if text.trim_start().starts_with('{') {
        Pda::from_json(&text)
    } else {
        Pda::parse_text(&text.replace(',', " "))
    };
    parsed.with_context(|| format!("loading {}", path.display()))
}

fn load_hpda(path: &Path) -> Result<Hpda> {
    Hpda::from_json(&read(path)?).with_context(|| format!("loading {}", path.display()))
}

fn write_pda(p: &Pda, out: &Output) -> Result<()> {
    let text = match out.format {
        Format::Json => p.to_json(),
        Format::Csv => p.to_csv()?,
    };
    emit(&text, out.output.as_deref())
}

fn design_command(cmd: DesignCommand) -> Result<ExitCode> {
    match cmd {
        DesignCommand::Verify { design } => {
            let d = resolve_design(&design)?;
            let report = verify_design(&d);
            print!("{}", json(&report));
            Ok(if report.valid {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        DesignCommand::List => {
            for d in catalog() {
                println!(
                    "{}  {}-({},{},{})  b={}",
                    d.name(),
                    d.t(),
                    d.v(),
                    d.k(),
                    d.lambda(),
                    d.b()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        DesignCommand::Show { design } => {
            print!("{}", json(&resolve_design(&design)?.to_document()));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn hpda_command(cmd: HpdaCommand) -> Result<ExitCode> {
    match cmd {
        HpdaCommand::Build { scheme, output } => {
            let d = resolve_design(&scheme.design)?;
            let q = hpda_from_scheme(&d, scheme.spec(), scheme.options())?;
            emit(&q.to_json(), output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        HpdaCommand::Verify { file } => {
            let q = load_hpda(&file)?;
            match verify_hpda(&q) {
                Ok(()) => {
                    println!(
                        "(K1,K2,F,Z1,Z2)=({},{},{},{},{})",
                        q.k1(),
                        q.k2(),
                        q.f(),
                        q.z1(),
                        q.z2()
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Err(violations) => {
                    for v in violations {
                        println!("{v}");
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        HpdaCommand::Loads { file } => {
            let q = load_hpda(&file)?;
            if let Err(v) = verify_hpda(&q) {
                eprintln!("not an HPDA: {} violation(s), first: {}", v.len(), v[0]);
                return Ok(ExitCode::from(1));
            }
            let loads = hpda_loads(&q);
            let mut value = serde_json::to_value(&loads)?;
            value["T_serial"] = loads.t_serial().to_string().into();
            value["T_parallel"] = loads.t_parallel().to_string().into();
            print!("{}", json(&value));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn sim_outcome(report: &SimReport) -> ExitCode {
    print!("{}", json(report));
    if report.all_decoded() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn sim_command(cmd: SimCommand) -> Result<ExitCode> {
    match cmd {
        SimCommand::Flat {
            pda,
            seed,
            demand,
            sim,
        } => {
            let p = load_pda(&pda)?;
            if let Err(v) = verify_pda(&p) {
                eprintln!("not a PDA: {} violation(s), first: {}", v.len(), v[0]);
                return Ok(ExitCode::from(1));
            }
            let files = sim.files.unwrap_or(p.k());
            let lib = FileLibrary::random(files, p.f(), sim.packet_bytes, seed);
            let d = match demand {
                Some(text) => Demand::parse_flat_csv(&text)?,
                None => Demand::random_flat(p.k(), files, seed),
            };
            let report = run_flat(&p, &lib, &d, SimOptions { trace: sim.trace })?;
            Ok(sim_outcome(&report))
        }
        SimCommand::Hier { hpda, seed, sim } => {
            let q = load_hpda(&hpda)?;
            if let Err(v) = verify_hpda(&q) {
                eprintln!("not an HPDA: {} violation(s), first: {}", v.len(), v[0]);
                return Ok(ExitCode::from(1));
            }
            let files = sim.files.unwrap_or(q.k1() * q.k2());
            let lib = FileLibrary::random(files, q.f(), sim.packet_bytes, seed);
            let d = Demand::random_hierarchical(q.k1(), q.k2(), files, seed);
            let report = run_hierarchical(&q, &lib, &d, SimOptions { trace: sim.trace })?;
            Ok(sim_outcome(&report))
        }
    }
}

fn table_command(cmd: TableCommand) -> Result<ExitCode> {
    let opts = ConstructOptions::default();
    match cmd {
        TableCommand::Two {
            design,
            i,
            json: as_json,
            output,
        } => {
            let d = resolve_design(&design)?;
            let is = i.unwrap_or_else(|| (1..d.t()).collect());
            let rows = emit_table2(&d, &is, opts)?;
            let text = if as_json {
                json(&rows)
            } else {
                table2_csv(&rows)?
            };
            emit(&text, output.as_deref())?;
        }
        TableCommand::Three {
            design_file,
            json: as_json,
            output,
        } => {
            let designs = design_file
                .iter()
                .map(|p| load_design(&read(p)?).with_context(|| format!("loading {}", p.display())))
                .collect::<Result<Vec<_>>>()?;
            let rows = emit_table3(&default_table3(), &designs, opts)?;
            let text = if as_json {
                json(&rows)
            } else {
                table3_csv(&rows)?
            };
            emit(&text, output.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Design(cmd) => design_command(cmd),
        Command::Construct(args) => {
            let d = resolve_design(&args.scheme.design)?;
            let built = construct(&d, args.scheme.spec(), args.scheme.options())?;
            write_pda(&built.pda, &args.out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            file,
            strict_labels,
        } => {
            let p = load_pda(&file)?;
            let policy = if strict_labels {
                LabelPolicy::ZeroBased
            } else {
                LabelPolicy::AnyDistinct
            };
            match verify_pda_with(&p, policy) {
                Ok(params) => {
                    println!("{params}");
                    Ok(ExitCode::SUCCESS)
                }
                Err(violations) => {
                    for v in violations {
                        println!("{v}");
                    }
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Transpose { file, out } => {
            let t = transpose(&load_pda(&file)?)?;
            write_pda(&t, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { kfz, pda } => {
            let (k, f, z) = match pda {
                Some(path) => {
                    let p = load_pda(&path)?;
                    match verify_pda(&p) {
                        Ok(params) => (params.k, params.f, params.z),
                        Err(v) => {
                            eprintln!("not a PDA: {} violation(s), first: {}", v.len(), v[0]);
                            return Ok(ExitCode::from(1));
                        }
                    }
                }
                None => (kfz[0], kfz[1], kfz[2]),
            };
            println!(
                "cheng={} wei={}",
                cheng_bound(k, f, z)?,
                wei_bound(k, f, z)?
            );
            if !wei_equality_possible(k, f, z)? {
                println!("wei bound cannot be met with equality");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify { file } => {
            let p = load_pda(&file)?;
            if let Err(v) = verify_pda(&p) {
                for v in v {
                    println!("{v}");
                }
                return Ok(ExitCode::from(1));
            }
            print!("{}", json(&classify(&p)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Hpda(cmd) => hpda_command(cmd),
        Command::Sim(cmd) => sim_command(cmd),
        Command::Table(cmd) => table_command(cmd),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
