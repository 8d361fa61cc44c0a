//! Command-line front end: parses an instance description, drives the
//! engine, and renders results as JSON or Graphviz DOT.
//!
//! Exit codes: 0 on success (including a PASS verdict), 1 when
//! `oracle-verify` reports FAIL, 2 on any error (parse, semantic,
//! capacity).

mod dsl;
mod emit;

use std::io::Read;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use eqlat::constructions::{
    incr_bijection, slice_decompose, sliced_normalize, BijectionConstraint,
};
use eqlat::family::{extend_witness, predicates, relation_checks};
use eqlat::galois::{closure, cone, lattice, least_element, sign_split, touch};
use eqlat::oracle::{
    brute_closure, default_value_lattice, enum_pl, oracle_verify, witness_pool,
    OracleVerdict,
};
use eqlat::rat::{ratio, Rat};
use eqlat::{DenseSet, Domain, FamilyDesc, PLFunc, Universe};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "eqlat",
    version,
    about = "Exact engine for the correspondence between families of continuous \
             functions and hereditary families of closed sets"
)]
struct Cli {
    /// Instance description file ('-' reads stdin)
    #[arg(short, long, global = true)]
    input: Option<String>,

    /// Universe the set families live in (default: grid when one is
    /// declared, pl otherwise)
    #[arg(long, global = true, value_enum)]
    universe: Option<UniverseArg>,

    /// Output format; dot applies to `lattice` only
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Work cap for enumerations and the brute-force oracle
    #[arg(long, global = true, default_value_t = 1 << 22)]
    budget: u64,

    /// Seed for extra randomized probes in `oracle-verify`
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UniverseArg {
    /// Restrict attention to subsets of the declared grid
    Grid,
    /// Closed sets cut out by piecewise-linear data
    Pl,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Closure of a set family under a function family
    Closure { family: String, efam: String },
    /// Fixed-point lattice of the closure operator over a grid
    Lattice {
        family: String,
        grid: Option<String>,
    },
    /// Least fixed point of the closure operator
    Least { family: String },
    /// Structural predicates and relation checks of a family
    Check { family: String },
    /// Separating and extension witnesses
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Compare the closed-form closure against the brute-force oracle
    OracleVerify {
        family: String,
        efam: String,
        grid: Option<String>,
    },
    /// Constructive lemmas: bijections, band stacking, slice decomposition
    #[command(subcommand)]
    Construct(ConstructCmd),
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// The base function plus |x - apex|: agrees with the base exactly at
    /// the apex
    Cone { func: String, apex: String },
    /// Touches the base at one point and stays strictly above elsewhere
    Touch { func: String, point: String },
    /// Sits above the base on a regular open set and below it outside
    SignSplit { func: String, set: String },
    /// A family member agreeing with a function on a set, if one exists
    Extend {
        family: String,
        func: String,
        set: String,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Strictly increasing bijection through dense constraints, e.g.
    /// `bijection [0,4] [0,1] 1=dyadic 2=shift:1/3`
    Bijection {
        from: String,
        to: String,
        constraints: Vec<String>,
    },
    /// Stack the bands of a sliced family
    Normalize { family: String },
    /// Decompose a family into slices
    Decompose { family: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Adapts engine errors (which are plain enums) into anyhow's chain.
fn ce(e: eqlat::Error) -> anyhow::Error {
    anyhow!("{e}")
}

fn load(cli: &Cli) -> Result<dsl::Instance> {
    let path = cli
        .input
        .as_deref()
        .ok_or_else(|| anyhow!("this command needs --input <FILE>"))?;
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .context("reading stdin")?;
        buf
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
    };
    dsl::parse_instance(&text)
}

fn universe_for(
    cli: &Cli,
    inst: &dsl::Instance,
    grid_name: Option<&str>,
) -> Result<Universe> {
    let wants_grid = match cli.universe {
        Some(UniverseArg::Grid) => true,
        Some(UniverseArg::Pl) => false,
        None => grid_name.is_some() || !inst.grids.is_empty(),
    };
    if wants_grid {
        Ok(Universe::FiniteGrid(inst.the_grid(grid_name)?.clone()))
    } else {
        Ok(Universe::PlClosed(inst.domain.clone()))
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    if cli.format == Format::Dot && !matches!(cli.command, Command::Lattice { .. }) {
        bail!("dot output is only available for the lattice command");
    }
    match &cli.command {
        Command::Closure { family, efam } => {
            let inst = load(&cli)?;
            let g = inst.resolve_family(family)?;
            let e = inst.resolve_efam(efam)?;
            let u = universe_for(&cli, &inst, None)?;
            let c = closure(&g, &e, &u).map_err(ce)?;
            print!(
                "{}",
                emit::to_pretty(&json!({ "closure": emit::efam_json(&c) }))
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Lattice { family, grid } => {
            let inst = load(&cli)?;
            let g = inst.resolve_family(family)?;
            let grid = inst.the_grid(grid.as_deref())?;
            let l = lattice(&g, grid).map_err(ce)?;
            match cli.format {
                Format::Json => print!("{}", emit::to_pretty(&emit::lattice_json(&l))),
                Format::Dot => print!("{}", emit::lattice_dot(&l)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Least { family } => {
            let inst = load(&cli)?;
            let g = inst.resolve_family(family)?;
            let u = universe_for(&cli, &inst, None)?;
            let least = least_element(&g, &u).map_err(ce)?;
            print!(
                "{}",
                emit::to_pretty(&json!({ "least": emit::efam_json(&least) }))
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { family } => {
            let inst = load(&cli)?;
            let g = inst.resolve_family(family)?;
            let p = predicates(&g).map_err(ce)?;
            let r = relation_checks(&g).map_err(ce)?;
            print!(
                "{}",
                emit::to_pretty(&json!({
                    "predicates": {
                        "complete": p.complete,
                        "connected": p.connected,
                        "order_interval": p.order_interval,
                    },
                    "relation_checks": {
                        "transitive": r.transitive,
                        "sequential": r.sequential,
                    },
                }))
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness(kind) => {
            let inst = load(&cli)?;
            let out = match kind {
                WitnessCmd::Cone { func, apex } => {
                    let g = inst.resolve_fn(func)?;
                    let a = dsl::parse_rat(apex)?;
                    Some(cone(&g, &a).map_err(ce)?)
                }
                WitnessCmd::Touch { func, point } => {
                    let g = inst.resolve_fn(func)?;
                    let z = dsl::parse_rat(point)?;
                    Some(touch(&g, &z).map_err(ce)?)
                }
                WitnessCmd::SignSplit { func, set } => {
                    let g = inst.resolve_fn(func)?;
                    let u_set = inst.resolve_set(set)?;
                    Some(sign_split(&g, &u_set).map_err(ce)?)
                }
                WitnessCmd::Extend { family, func, set } => {
                    let g = inst.resolve_family(family)?;
                    let f = inst.resolve_fn(func)?;
                    let e = inst.resolve_set(set)?;
                    extend_witness(&g, &f, &e).map_err(ce)?
                }
            };
            match out {
                Some(f) => println!("{}", dsl::fn_str(&f)),
                None => println!("none"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::OracleVerify { family, efam, grid } => {
            let inst = load(&cli)?;
            let g = inst.resolve_family(family)?;
            let e = inst.resolve_efam(efam)?;
            let grid = inst.the_grid(grid.as_deref())?;
            let budget = u128::from(cli.budget);
            let verdict = match cli.seed {
                None => oracle_verify(&g, &e, grid, budget).map_err(ce)?,
                Some(seed) => {
                    // Same composition as the plain path, widened with
                    // seeded random probes: a richer pool can only tighten
                    // the brute-force upper bound.
                    let values = default_value_lattice(&g, grid).map_err(ce)?;
                    let mut pool = enum_pl(grid, &values, budget).map_err(ce)?;
                    let support = e.union_support(grid.domain()).map_err(ce)?;
                    pool.extend(witness_pool(&g, &support, grid).map_err(ce)?);
                    pool.extend(random_probes(grid.domain(), seed, 32));
                    let brute = brute_closure(&g, &e, grid, &pool, budget).map_err(ce)?;
                    let theorem = closure(&g, &e, &Universe::FiniteGrid(grid.clone()))
                        .map_err(ce)?
                        .to_downset(grid)
                        .map_err(ce)?;
                    OracleVerdict {
                        pass: theorem == brute.upper,
                        theorem,
                        upper: brute.upper,
                        certificates: brute.certificates,
                    }
                }
            };
            let pass = verdict.pass;
            print!("{}", emit::to_pretty(&emit::verdict_json(&verdict, grid)));
            Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Construct(what) => {
            let out = match what {
                ConstructCmd::Bijection {
                    from,
                    to,
                    constraints,
                } => {
                    let i = dsl::parse_domain(from)?;
                    let j = dsl::parse_domain(to)?;
                    let cs: Vec<BijectionConstraint> = constraints
                        .iter()
                        .map(|c| parse_constraint(c))
                        .collect::<Result<_>>()?;
                    let out = incr_bijection(&i, &j, &cs).map_err(ce)?;
                    let stages: Vec<String> =
                        out.stages.iter().map(dsl::fn_str).collect();
                    json!({ "result": dsl::fn_str(&out.result), "stages": stages })
                }
                ConstructCmd::Normalize { family } => {
                    let inst = load(&cli)?;
                    let g = inst.resolve_family(family)?;
                    let FamilyDesc::Sliced(slices) = g else {
                        bail!("normalize needs a sliced family");
                    };
                    let normal = sliced_normalize(&slices).map_err(ce)?;
                    json!({ "family": dsl::family_str(&FamilyDesc::Sliced(normal)) })
                }
                ConstructCmd::Decompose { family } => {
                    let inst = load(&cli)?;
                    let g = inst.resolve_family(family)?;
                    let d = slice_decompose(&g).map_err(ce)?;
                    json!({ "family": dsl::family_str(&d) })
                }
            };
            print!("{}", emit::to_pretty(&out));
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Parses `x=dyadic` or `x=shift:p/q` into a bijection constraint.
fn parse_constraint(text: &str) -> Result<BijectionConstraint> {
    let (x, dense) = text
        .split_once('=')
        .ok_or_else(|| anyhow!("constraint '{text}' is not of the form x=dense"))?;
    let x = dsl::parse_rat(x)?;
    let values = match dense {
        "dyadic" => DenseSet::dyadic(),
        shifted => match shifted.strip_prefix("shift:") {
            Some(offset) => DenseSet::shifted(dsl::parse_rat(offset)?),
            None => bail!(
                "unknown dense set '{dense}' (expected 'dyadic' or 'shift:p/q')"
            ),
        },
    };
    Ok(BijectionConstraint::new(x, values))
}

/// Deterministic random piecewise-linear probes over the domain.
fn random_probes(dom: &Domain, seed: u64, count: usize) -> Vec<PLFunc> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let span = dom.hi() - dom.lo();
    (0..count)
        .map(|_| {
            let mut xs: Vec<Rat> = Vec::new();
            for _ in 0..rng.gen_range(0..=3) {
                let x = dom.lo() + &span * ratio(rng.gen_range(1..=15), 16);
                if !xs.contains(&x) {
                    xs.push(x);
                }
            }
            xs.push(dom.lo().clone());
            xs.push(dom.hi().clone());
            xs.sort();
            xs.dedup();
            let ys: Vec<Rat> = (0..xs.len())
                .map(|_| ratio(rng.gen_range(-24..=24), rng.gen_range(1..=4)))
                .collect();
            PLFunc::through_points(dom, &xs, &ys).expect("probe nodes are valid")
        })
        .collect()
}
