//! Argument definitions and the dispatch from subcommands to library calls.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tilelab::constructions::{self, ConstructionCertificate};
use tilelab::fractional::{self, FractionalTiling};
use tilelab::hypergraph::{self as hgraph, complete_partite};
use tilelab::invariants::{realizations, structural_invariants, vertex_cover_number};
use tilelab::lattice;
use tilelab::rational::{self, Rational};
use tilelab::solver::{self, TuranMode};
use tilelab::thresholds;
use tilelab::{hg, Budget, Error, Hypergraph, PartiteProfile};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "tilelab", version, about = "Perfect tilings of uniform hypergraphs")]
pub struct Cli {
    /// Search node budget for exact computations.
    #[arg(long, global = true, env = "TILELAB_BUDGET", default_value_t = Budget::DEFAULT_LIMIT)]
    pub budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report wall-clock time in the output envelope.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// S(F), D(F), gcd(F), sigma(F) and tau(F) of a pattern.
    Invariants { file: PathBuf },
    /// Every k-partite realization of a pattern.
    Realizations { file: PathBuf },
    /// Vertex cover number of a pattern.
    Tau { file: PathBuf },
    /// Frobenius number of a comma-separated list.
    Frobenius {
        #[arg(value_delimiter = ',', required = true)]
        values: Vec<u64>,
    },
    /// Minimum codegree threshold formulas.
    Threshold {
        #[command(subcommand)]
        which: ThresholdCmd,
    },
    /// Build a hypergraph, optionally writing it as .hg.
    Construct {
        /// Output .hg path; the hypergraph is embedded in the result otherwise.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
        #[command(subcommand)]
        which: ConstructCmd,
    },
    /// Exact tiling questions on a host.
    Tile {
        #[arg(value_enum)]
        mode: TileMode,
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Turan or codegree Turan number on n vertices.
    Turan {
        #[arg(value_enum)]
        kind: TuranKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
        mode: ModeArg,
    },
    /// Whether every t-set lies in exactly one edge.
    Steiner {
        #[arg(long)]
        t: usize,
        file: PathBuf,
    },
    /// Fractional homomorphic tilings.
    Fractional {
        #[command(subcommand)]
        which: FractionalCmd,
    },
    /// Index vectors and lattice membership.
    Lattice {
        #[command(subcommand)]
        which: LatticeCmd,
    },
    /// Edge density of a set of floor((1 - sigma) n) vertices, given or minimised.
    Extremal {
        #[arg(long)]
        sigma: String,
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<usize>>,
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum ThresholdCmd {
    /// General threshold from the pattern's structural invariants.
    Mycroft {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        n: u64,
    },
    /// Exact threshold for K(1, ..., 1, 2).
    K112 {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        n: u64,
    },
    /// Threshold for loose cycles.
    Cycle {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        n: u64,
    },
    /// Upper bound a1 n/m + f(n) + C for a complete partite pattern.
    Bound {
        #[arg(long, value_delimiter = ',', required = true)]
        profile: Vec<usize>,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = TuranSource::Exact)]
        turan: TuranSource,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TuranSource {
    /// Exact Turan numbers by search (tiny N only).
    Exact,
    /// floor(binom(N, k-1) / k), valid for K(1, ..., 1, 2).
    K112Upper,
}

#[derive(Debug, Args)]
pub struct ProfileArg {
    #[arg(long, value_delimiter = ',', required = true)]
    profile: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum ConstructCmd {
    /// All k-sets meeting a set of tau(F) n/m - 1 vertices.
    SpaceBarrier {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Space barrier for a profile with a given G on the large side.
    Strengthened {
        #[command(flatten)]
        profile: ProfileArg,
        #[arg(long)]
        n: usize,
        /// Hypergraph placed on B; edgeless when omitted.
        #[arg(long)]
        g: Option<PathBuf>,
    },
    /// The finite field construction on (q-1)^2/(t-1) vertices.
    Mubayi {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        t: u64,
        #[arg(long)]
        q: u64,
    },
    /// G plus every k-set meeting A in an even number of vertices.
    Parity {
        #[arg(long)]
        g: PathBuf,
        #[arg(long, value_delimiter = ',')]
        a: Vec<usize>,
    },
    CompletePartite {
        #[command(flatten)]
        profile: ProfileArg,
    },
    LooseCycle {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
    },
    LoosePath {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        s: usize,
    },
    /// K(a, b, ..., b) plus one edge through a large-class vertex.
    Khat {
        #[command(flatten)]
        profile: ProfileArg,
    },
    Fano,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TileMode {
    /// Perfect tiling, lexicographically least.
    Factor,
    /// Maximum number of disjoint copies.
    Max,
    /// Whether the host avoids the pattern.
    Free,
    /// Every vertex set spanning a copy.
    Copies,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TuranKind {
    Ex,
    Coex,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Auto,
    Exhaustive,
    Reduced,
}

#[derive(Debug, Subcommand)]
pub enum FractionalCmd {
    /// Check a weighting given as JSON.
    Validate {
        #[arg(long)]
        host: PathBuf,
        #[command(flatten)]
        profile: ProfileArg,
        #[arg(long)]
        weights: PathBuf,
    },
    /// The balanced weighting of K(a, b, ..., b).
    Standard {
        #[command(flatten)]
        profile: ProfileArg,
        #[command(flatten)]
        out: WeightingOut,
    },
    /// The weighting of the one-edge extension of K(a, b, ..., b).
    Extended {
        #[command(flatten)]
        profile: ProfileArg,
        #[command(flatten)]
        out: WeightingOut,
    },
    /// Maximum-weight valid weighting of a small host.
    Maximize {
        #[arg(long)]
        host: PathBuf,
        #[command(flatten)]
        profile: ProfileArg,
    },
}

#[derive(Debug, Args)]
pub struct WeightingOut {
    /// Write the host hypergraph here.
    #[arg(long)]
    host_out: Option<PathBuf>,
    /// Write the weighting JSON here.
    #[arg(long)]
    weights_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum LatticeCmd {
    /// Whether the target is an integer combination of the generators.
    Member {
        /// Vectors separated by `;`, coordinates by `,`.
        #[arg(long, allow_hyphen_values = true)]
        generators: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        target: Vec<i64>,
    },
    /// Whether every u_i - u_j lies in the lattice.
    Transferrals {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "profile", required_unless_present = "profile")]
        generators: Option<String>,
        /// Use the difference vectors of this profile as generators.
        #[arg(long, value_delimiter = ',')]
        profile: Option<Vec<usize>>,
        #[arg(long)]
        r: usize,
    },
    /// Index vectors realised by at least mu n^m labelled copies.
    Robust {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        /// Parts separated by `;`, vertices by `,`.
        #[arg(long)]
        parts: String,
        #[arg(long)]
        mu: String,
    },
    /// Index vector of a vertex set.
    Index {
        #[arg(long)]
        parts: String,
        #[arg(long, value_delimiter = ',')]
        set: Vec<usize>,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError { code: e.code(), message: e.to_string() }
    }
}

type CliResult<T> = Result<T, CliError>;

fn input_error(message: impl Into<String>) -> CliError {
    CliError { code: "input", message: message.into() }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError { code: "io", message: format!("{}: {e}", path.display()) })
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError { code: "io", message: format!("{}: {e}", path.display()) })
}

fn read_hg(path: &Path) -> CliResult<Hypergraph> {
    hg::parse(&read_text(path)?).map_err(|e| CliError { code: e.code(), message: format!("{}: {e}", path.display()) })
}

fn to_json<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("library types serialize")
}

fn graph_json(h: &Hypergraph) -> Value {
    json!({ "k": h.k(), "n": h.n(), "edges": h.edges() })
}

fn profile(sizes: &[usize]) -> CliResult<PartiteProfile> {
    Ok(PartiteProfile::new(sizes.to_vec())?)
}

fn parse_rational(text: &str) -> CliResult<Rational> {
    Ok(rational::parse(text)?)
}

fn parse_lists<T: std::str::FromStr>(text: &str) -> CliResult<Vec<Vec<T>>> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';')
        .map(|group| {
            let group = group.trim();
            if group.is_empty() {
                return Ok(Vec::new());
            }
            group
                .split(',')
                .map(|x| x.trim().parse::<T>().map_err(|_| input_error(format!("cannot parse {x:?} in {text:?}"))))
                .collect()
        })
        .collect()
}

pub fn run(cli: &Cli) -> CliResult<Value> {
    let mut budget = Budget::new(cli.budget);
    let budget = &mut budget;
    match &cli.command {
        Command::Invariants { file } => Ok(to_json(&structural_invariants(&read_hg(file)?, budget)?)),
        Command::Realizations { file } => {
            let list = realizations(&read_hg(file)?, budget)?;
            let classes: Vec<_> = list.iter().map(|r| r.classes().to_vec()).collect();
            Ok(json!({ "count": classes.len(), "realizations": classes }))
        }
        Command::Tau { file } => Ok(json!({ "tau": vertex_cover_number(&read_hg(file)?, budget)? })),
        Command::Frobenius { values } => Ok(json!({ "value": thresholds::frobenius(values)? })),
        Command::Threshold { which } => threshold(which, budget),
        Command::Construct { output, which } => construct(which, output.as_deref(), budget),
        Command::Tile { mode, host, pattern } => tile(*mode, &read_hg(host)?, &read_hg(pattern)?, budget),
        Command::Turan { kind, n, pattern, mode } => {
            let f = read_hg(pattern)?;
            let mode = match mode {
                ModeArg::Auto => TuranMode::Auto,
                ModeArg::Exhaustive => TuranMode::Exhaustive,
                ModeArg::Reduced => TuranMode::IsomorphReduced,
            };
            let result = match kind {
                TuranKind::Ex => solver::turan_brute(*n, &f, mode, budget)?,
                TuranKind::Coex => solver::coex_brute(*n, &f, mode, budget)?,
            };
            Ok(json!({ "value": result.value, "mode": to_json(&result.mode), "witness": graph_json(&result.witness) }))
        }
        Command::Steiner { t, file } => Ok(json!({ "steiner": solver::is_steiner_system(&read_hg(file)?, *t)? })),
        Command::Fractional { which } => fractional_cmd(which, budget),
        Command::Lattice { which } => lattice_cmd(which, budget),
        Command::Extremal { sigma, set, file } => {
            let h = read_hg(file)?;
            let sigma = parse_rational(sigma)?;
            let deficit = solver::extremal_deficit(&h, &sigma, set.as_deref(), budget)?;
            Ok(json!({ "deficit": rational::to_string(&deficit) }))
        }
    }
}

fn threshold(which: &ThresholdCmd, budget: &mut Budget) -> CliResult<Value> {
    match which {
        ThresholdCmd::Mycroft { pattern, n } => Ok(to_json(&thresholds::mycroft_threshold(&read_hg(pattern)?, *n, budget)?)),
        ThresholdCmd::K112 { k, n } => {
            let report = thresholds::k112_threshold(*k, *n)?;
            Ok(json!({
                "value": report.integer_value(),
                "case": to_json(&report.case),
                "divisibility": report.witnesses.divisibility,
                "n_prime": report.witnesses.n_prime,
            }))
        }
        ThresholdCmd::Cycle { k, s, n } => {
            Ok(json!({ "value": rational::to_string(&thresholds::cycle_threshold(*k, *s, *n)?) }))
        }
        ThresholdCmd::Bound { profile: sizes, n, turan } => {
            let p = profile(sizes)?;
            let bound = match turan {
                TuranSource::K112Upper => thresholds::degree_bound(&p, *n, &mut thresholds::k112_turan_upper(p.k() as u64))?,
                TuranSource::Exact => {
                    let f = complete_partite(&p);
                    let mut exact = |size: u64| -> tilelab::Result<u64> {
                        Ok(solver::turan_brute(size as usize, &f, TuranMode::Auto, budget)?.value)
                    };
                    thresholds::degree_bound(&p, *n, &mut exact)?
                }
            };
            Ok(to_json(&bound))
        }
    }
}

fn construct(which: &ConstructCmd, output: Option<&Path>, budget: &mut Budget) -> CliResult<Value> {
    let (h, cert): (Hypergraph, Option<ConstructionCertificate>) = match which {
        ConstructCmd::SpaceBarrier { pattern, n } => {
            let (h, c) = constructions::space_barrier(&read_hg(pattern)?, *n, budget)?;
            (h, Some(c))
        }
        ConstructCmd::Strengthened { profile: p, n, g } => {
            let p = profile(&p.profile)?;
            let g = match g {
                Some(path) => read_hg(path)?,
                None => {
                    let a = (p.smallest() * n / p.m()).saturating_sub(1);
                    Hypergraph::new(p.k(), n.saturating_sub(a))?
                }
            };
            let (h, c) = constructions::strengthened_barrier(&p, *n, &g)?;
            (h, Some(c))
        }
        ConstructCmd::Mubayi { k, t, q } => {
            let (h, c) = constructions::mubayi_graph(*k, *t, *q)?;
            (h, Some(c))
        }
        ConstructCmd::Parity { g, a } => (constructions::parity_construction(&read_hg(g)?, a)?, None),
        ConstructCmd::CompletePartite { profile: p } => (complete_partite(&profile(&p.profile)?), None),
        ConstructCmd::LooseCycle { k, s } => (hgraph::loose_cycle(*k, *s)?, None),
        ConstructCmd::LoosePath { k, s } => (hgraph::loose_path(*k, *s)?, None),
        ConstructCmd::Khat { profile: p } => (hgraph::khat_extension(&profile(&p.profile)?)?, None),
        ConstructCmd::Fano => (hgraph::fano_plane(), None),
    };
    let text = match &cert {
        Some(c) => hg::write_with_certificate(&h, c)?,
        None => hg::write(&h, &[]),
    };
    let mut data = json!({
        "k": h.k(),
        "n": h.n(),
        "edge_count": h.edge_count(),
        "certificate": cert.as_ref().map(to_json),
    });
    match output {
        Some(path) => {
            write_text(path, &text)?;
            data["output"] = json!(path.display().to_string());
        }
        None => data["hg"] = json!(text),
    }
    Ok(data)
}

fn tile(mode: TileMode, h: &Hypergraph, f: &Hypergraph, budget: &mut Budget) -> CliResult<Value> {
    Ok(match mode {
        TileMode::Factor => {
            let cert = solver::has_perfect_tiling(h, f, budget)?;
            json!({ "exists": cert.is_some(), "certificate": cert.as_ref().map(to_json) })
        }
        TileMode::Max => to_json(&solver::max_tiling(h, f, budget)?),
        TileMode::Free => json!({ "free": solver::is_subgraph_free(h, f, budget)? }),
        TileMode::Copies => {
            let copies = solver::enumerate_copies(h, f, budget)?;
            json!({ "count": copies.len(), "copies": to_json(&copies) })
        }
    })
}

fn weighting_result(
    l: &Hypergraph,
    p: &PartiteProfile,
    h: &FractionalTiling,
    out: Option<&WeightingOut>,
) -> CliResult<Value> {
    let validation = fractional::validate(l, p, h)?;
    if let Some(out) = out {
        if let Some(path) = &out.host_out {
            write_text(path, &hg::write(l, &[]))?;
        }
        if let Some(path) = &out.weights_out {
            let text = serde_json::to_string_pretty(h).expect("weightings serialize");
            write_text(path, &format!("{text}\n"))?;
        }
    }
    Ok(json!({ "host": graph_json(l), "tiling": to_json(h), "validation": to_json(&validation) }))
}

fn fractional_cmd(which: &FractionalCmd, budget: &mut Budget) -> CliResult<Value> {
    match which {
        FractionalCmd::Validate { host, profile: p, weights } => {
            let l = read_hg(host)?;
            let h: FractionalTiling = serde_json::from_str(&read_text(weights)?)
                .map_err(|e| input_error(format!("{}: {e}", weights.display())))?;
            Ok(to_json(&fractional::validate(&l, &profile(&p.profile)?, &h)?))
        }
        FractionalCmd::Standard { profile: p, out } => {
            let p = profile(&p.profile)?;
            let (l, h) = fractional::standard_weights(&p)?;
            weighting_result(&l, &p, &h, Some(out))
        }
        FractionalCmd::Extended { profile: p, out } => {
            let p = profile(&p.profile)?;
            let (l, h) = fractional::extended_weights(&p)?;
            let mut data = weighting_result(&l, &p, &h, Some(out))?;
            data["formula"] = json!(rational::to_string(&fractional::extended_weight_formula(&p)?));
            Ok(data)
        }
        FractionalCmd::Maximize { host, profile: p } => {
            let l = read_hg(host)?;
            let p = profile(&p.profile)?;
            let (h, weight) = fractional::maximize_small(&l, &p, budget)?;
            let mut data = weighting_result(&l, &p, &h, None)?;
            data["weight"] = json!(rational::to_string(&weight));
            Ok(data)
        }
    }
}

fn lattice_cmd(which: &LatticeCmd, budget: &mut Budget) -> CliResult<Value> {
    match which {
        LatticeCmd::Member { generators, target } => {
            let gens: Vec<Vec<i64>> = parse_lists(generators)?;
            Ok(json!({ "member": lattice::lattice_contains(&gens, target)? }))
        }
        LatticeCmd::Transferrals { generators, profile: sizes, r } => {
            let gens = match (generators, sizes) {
                (Some(text), _) => parse_lists(text)?,
                (None, Some(sizes)) => lattice::difference_generators(&profile(sizes)?, *r),
                (None, None) => return Err(input_error("give --generators or --profile")),
            };
            Ok(json!({ "complete": lattice::transferral_complete(&gens, *r)?, "generators": gens }))
        }
        LatticeCmd::Robust { host, pattern, parts, mu } => {
            let parts: Vec<Vec<usize>> = parse_lists(parts)?;
            let found = lattice::robust_vectors(&read_hg(host)?, &parts, &read_hg(pattern)?, &parse_rational(mu)?, budget)?;
            // Counts can exceed the range JSON readers handle exactly.
            let vectors: Vec<Value> = found
                .iter()
                .map(|r| json!({ "vector": r.vector, "copies": r.copies.to_string() }))
                .collect();
            Ok(json!({ "vectors": vectors }))
        }
        LatticeCmd::Index { parts, set } => {
            let parts: Vec<Vec<usize>> = parse_lists(parts)?;
            Ok(json!({ "vector": lattice::index_vector(&parts, set)? }))
        }
    }
}
