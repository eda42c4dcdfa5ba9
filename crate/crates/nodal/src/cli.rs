//! Command-line front-end.
//!
//! Exit codes: 0 on success, 1 when argv does not parse, 2 when a value is
//! rejected by one of the core error contracts.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use nodal_core::classifier::{self, existence_status, Canonical, CaseLabel, CaseTag, NonminimalKind, ReplayTarget};
use nodal_core::exact::{int, parse_rational, rational_string};
use nodal_core::f2;
use nodal_core::invariants::{self, SurfaceInvariants};
use nodal_core::lattice::{self, AdeLabel, GramMatrix};
use nodal_core::singularity::{self, CanonicalClass, OrbifoldSurface, ResolutionString};
use serde_json::{json, Map, Value};

use crate::json;
use crate::report::Report;
use crate::text;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] nodal_core::Error),
    #[error("{0}")]
    Input(String),
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "nodal", version, about = "Lattice and orbifold obstructions for surfaces with disjoint nodal curves")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integer lattices given by Gram matrices.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Quotient singularities and orbifold inequalities.
    Sing {
        #[command(subcommand)]
        op: SingOp,
    },
    /// Numerical invariants of surfaces.
    Invariants {
        #[command(subcommand)]
        op: InvariantsOp,
    },
    /// The mod-2 obstruction.
    Obstruct {
        #[command(subcommand)]
        op: ObstructOp,
    },
    /// Classification verdicts with traces.
    Classify {
        #[command(subcommand)]
        op: ClassifyOp,
    },
    /// Replay a full classification: theorem-1.3 (max-nodal), theorem-1.4
    /// (near-max-nodal) or cor-1.2 (homology-plane).
    Replay { target: String },
}

#[derive(Debug, Subcommand)]
enum LatticeOp {
    /// Exact determinant.
    Det {
        /// JSON array of rows, or `-` to read it from stdin.
        #[arg(long)]
        gram: String,
    },
    /// Signature (positive, negative, zero).
    Signature {
        #[arg(long)]
        gram: String,
    },
    /// Smith normal form.
    Snf {
        #[arg(long)]
        gram: String,
    },
    /// Orthogonal direct sum.
    Sum {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Whether |det| is a perfect square.
    SquareTest {
        #[arg(long)]
        gram: String,
    },
    /// Root lattice of an ADE label such as A1, D4 or E8.
    Ade {
        #[arg(long)]
        label: String,
    },
}

/// A comma-separated list of self-intersections, e.g. `-3,-2`.
#[derive(Debug, Clone)]
struct Chain(Vec<i64>);

impl FromStr for Chain {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|x| x.trim().parse::<i64>().map_err(|_| format!("not an integer: {x:?}")))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Chain)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    Nef,
    AntiNef,
}

#[derive(Debug, Subcommand)]
enum SingOp {
    /// Hirzebruch-Jung resolution of the cyclic quotient of type (n, q).
    Resolve {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
    },
    /// Discrepancies of a chain (`--chain=-3,-2`) or a tree given by its Gram matrix.
    Discrepancy {
        #[arg(long, allow_hyphen_values = true, conflicts_with = "gram", required_unless_present = "gram")]
        chain: Option<Chain>,
        #[arg(long)]
        gram: Option<String>,
    },
    /// Orbifold Euler number.
    Euler {
        #[arg(long, allow_hyphen_values = true)]
        euler: i64,
        /// Number of ordinary nodes.
        #[arg(long, default_value_t = 0)]
        nodes: usize,
        /// Further cyclic points by resolution chain; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        chain: Vec<Chain>,
    },
    /// Orbifold Bogomolov-Miyaoka-Yau check.
    Bmy {
        #[arg(long, allow_hyphen_values = true)]
        euler: i64,
        /// K_S^2 as `p/q` or an integer; required for nef.
        #[arg(long, allow_hyphen_values = true)]
        ksq: Option<String>,
        #[arg(long, default_value_t = 0)]
        nodes: usize,
        #[arg(long, allow_hyphen_values = true)]
        chain: Vec<Chain>,
        #[arg(long, value_enum, default_value_t = ClassArg::Nef)]
        class: ClassArg,
    },
    /// Largest number of points of order >= m keeping e_orb >= 0.
    MaxPoints {
        #[arg(long, allow_hyphen_values = true)]
        euler: i64,
        #[arg(long, default_value_t = 2)]
        order: u64,
    },
}

#[derive(Debug, Subcommand)]
enum InvariantsOp {
    /// K^2 and e from (q, pg, h11).
    Noether {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        pg: u64,
        #[arg(long)]
        h11: u64,
    },
    /// Invariants after contracting mu disjoint nodal curves.
    Contract {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        pg: u64,
        #[arg(long)]
        h11: u64,
        #[arg(long)]
        mu: u64,
    },
    /// All (q, pg, h11) with 4q + 4pg + h11/2 <= bound.
    Enumerate {
        #[arg(long)]
        bound: String,
        #[arg(long, default_value_t = 1)]
        h11_min: u64,
    },
}

#[derive(Debug, Subcommand)]
enum ObstructOp {
    /// Whether mu disjoint nodal curves survive the mod-2 argument.
    Mod2 {
        #[arg(long)]
        mu: usize,
        /// Rank of the ambient unimodular lattice.
        #[arg(long, alias = "rank")]
        h11: usize,
    },
    /// Look for a doubly-even subspace of F2^mu of the given dimension.
    Search {
        #[arg(long)]
        mu: usize,
        #[arg(long)]
        dim: usize,
    },
}

#[derive(Debug, Subcommand)]
enum ClassifyOp {
    /// Surfaces with h11 - 1 disjoint nodal curves.
    MaxNodal {
        #[arg(long, action = clap::ArgAction::Set)]
        nef: bool,
    },
    /// Surfaces with h11 - 2 disjoint nodal curves.
    NearMax {
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        pg: Option<u64>,
        #[arg(long)]
        h11: Option<u64>,
        #[arg(long, action = clap::ArgAction::Set)]
        nef: Option<bool>,
        /// For non-nef input: kappa_nonneg, irrational_ruled or rational.
        #[arg(long)]
        kind: Option<String>,
        /// JSON object with the same fields, or `-` for stdin.
        #[arg(long, conflicts_with_all = ["q", "pg", "h11", "nef", "kind"])]
        input: Option<String>,
    },
    /// Singular fibre multisets of an elliptic fibration.
    Fibres {
        #[arg(long)]
        euler: u64,
        #[arg(long)]
        nodal: usize,
    },
    /// Decision tree for a non-minimal surface.
    Nonminimal {
        #[arg(long)]
        kind: String,
    },
    /// Known existence status of a case.
    Status {
        #[arg(long)]
        tag: String,
        #[arg(long)]
        ksq: Option<i64>,
    },
    /// Nodal bound on a blowup of a surface with mu nodal curves.
    Blowdown {
        #[arg(long)]
        mu: u64,
        #[arg(long)]
        r: u64,
    },
}

/// Runs one invocation and returns the exit code.
pub fn run<I, T>(argv: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{rendered}");
                1
            } else {
                let _ = write!(stdout, "{rendered}");
                0
            };
        }
    };
    match execute(cli.command, stdin) {
        Ok(report) => {
            let out = match cli.format {
                Format::Json => report.render_json(),
                Format::Text => text::render(&report),
            };
            match stdout.write_all(out.as_bytes()) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    2
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn read_arg(value: &str, stdin: &mut dyn Read) -> Result<String> {
    if value == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| CliError::Input(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        Ok(value.to_string())
    }
}

fn read_gram(value: &str, stdin: &mut dyn Read) -> Result<GramMatrix> {
    Ok(json::gram_from_str(&read_arg(value, stdin)?)?)
}

fn inputs(pairs: impl IntoIterator<Item = (&'static str, Value)>) -> Map<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn flatten(report: &mut Report, v: Value) {
    if let Value::Object(m) = v {
        for (k, v) in m {
            report.set(&k, v);
        }
    }
}

fn execute(command: Command, stdin: &mut dyn Read) -> Result<Report> {
    match command {
        Command::Lattice { op } => lattice_cmd(op, stdin),
        Command::Sing { op } => sing_cmd(op, stdin),
        Command::Invariants { op } => invariants_cmd(op),
        Command::Obstruct { op } => obstruct_cmd(op),
        Command::Classify { op } => classify_cmd(op, stdin),
        Command::Replay { target } => {
            let target: ReplayTarget = target.parse()?;
            let v = classifier::replay(target);
            let mut r = Report::new(target.title(), inputs([("target", json!(target.id()))])).with_verdict(&v);
            r.set("target", target.id());
            Ok(r)
        }
    }
}

fn lattice_cmd(op: LatticeOp, stdin: &mut dyn Read) -> Result<Report> {
    match op {
        LatticeOp::Det { gram } => {
            let g = read_gram(&gram, stdin)?;
            let mut r = Report::new("determinant", inputs([("gram", json::gram_to_json(&g))]));
            r.set("det", json::integer(&lattice::determinant(&g)));
            Ok(r)
        }
        LatticeOp::Signature { gram } => {
            let g = read_gram(&gram, stdin)?;
            let s = lattice::signature(&g);
            let mut r = Report::new("signature", inputs([("gram", json::gram_to_json(&g))]));
            r.set("signature", json::signature(&s)).set("rank", s.rank());
            Ok(r)
        }
        LatticeOp::Snf { gram } => {
            let g = read_gram(&gram, stdin)?;
            let s = lattice::smith_normal_form(&g);
            let mut r = Report::new("Smith normal form", inputs([("gram", json::gram_to_json(&g))]));
            r.set("elementary_divisors", json::smith(&s)).set("torsion_order", json::integer(&s.torsion_order()));
            Ok(r)
        }
        LatticeOp::Sum { a, b } => {
            if a == "-" && b == "-" {
                return Err(CliError::Input("only one of --a and --b can be read from stdin".into()));
            }
            let (ga, gb) = (read_gram(&a, stdin)?, read_gram(&b, stdin)?);
            let sum = lattice::direct_sum(&ga, &gb);
            let mut r =
                Report::new("direct sum", inputs([("a", json::gram_to_json(&ga)), ("b", json::gram_to_json(&gb))]));
            r.set("gram", json::gram_to_json(&sum));
            Ok(r)
        }
        LatticeOp::SquareTest { gram } => {
            let g = read_gram(&gram, stdin)?;
            let square = lattice::square_discriminant_test(&g)?;
            let mut r = Report::new("square discriminant test", inputs([("gram", json::gram_to_json(&g))]));
            r.set("det", json::integer(&lattice::determinant(&g))).set("square", square);
            Ok(r)
        }
        LatticeOp::Ade { label } => {
            let label: AdeLabel = label.parse()?;
            let g = lattice::ade_gram(label);
            let mut r = Report::new("root lattice", inputs([("label", json!(label.to_string()))]));
            r.set("label", label.to_string())
                .set("rank", label.rank())
                .set("gram", json::gram_to_json(&g))
                .set("det", json::integer(&lattice::determinant(&g)))
                .set("signature", json::signature(&lattice::signature(&g)));
            Ok(r)
        }
    }
}

fn chains_json(chains: &[Chain]) -> Value {
    json!(chains.iter().map(|c| c.0.clone()).collect::<Vec<_>>())
}

fn orbifold(
    euler: i64,
    nodes: usize,
    chains: &[Chain],
    ksq: Option<nodal_core::BigRational>,
) -> Result<OrbifoldSurface> {
    let mut s = OrbifoldSurface::with_nodes(euler, nodes, ksq);
    for c in chains {
        s.singularities.push(singularity::solve_discrepancies(&c.0)?);
    }
    Ok(s)
}

fn sing_cmd(op: SingOp, stdin: &mut dyn Read) -> Result<Report> {
    match op {
        SingOp::Resolve { n, q } => {
            let chain = singularity::hj_string(n, q)?;
            let res = singularity::solve_discrepancies(&chain)?;
            let mut r = Report::new("cyclic quotient resolution", inputs([("n", json!(n)), ("q", json!(q))]));
            flatten(&mut r, json::resolution(&res));
            Ok(r)
        }
        SingOp::Discrepancy { chain, gram } => {
            let (res, echo): (ResolutionString, _) = match (chain, gram) {
                (Some(c), _) => (singularity::solve_discrepancies(&c.0)?, ("chain", json!(c.0))),
                (None, Some(g)) => {
                    let g = read_gram(&g, stdin)?;
                    (singularity::solve_discrepancies_gram(&g)?, ("gram", json::gram_to_json(&g)))
                }
                (None, None) => unreachable!("clap requires one of --chain and --gram"),
            };
            let mut r = Report::new("discrepancies", inputs([echo]));
            flatten(&mut r, json::resolution(&res));
            Ok(r)
        }
        SingOp::Euler { euler, nodes, chain } => {
            let s = orbifold(euler, nodes, &chain, None)?;
            let e = singularity::orbifold_euler(&s)?;
            let mut r = Report::new(
                "orbifold Euler number",
                inputs([("euler", json!(euler)), ("nodes", json!(nodes)), ("chains", chains_json(&chain))]),
            );
            r.set("orbifold_euler", json::rational(&e));
            Ok(r)
        }
        SingOp::Bmy { euler, ksq, nodes, chain, class } => {
            let ksq = ksq
                .map(|k| parse_rational(&k).ok_or_else(|| CliError::Input(format!("not a rational: {k:?}"))))
                .transpose()?;
            let class = match class {
                ClassArg::Nef => CanonicalClass::Nef,
                ClassArg::AntiNef => CanonicalClass::AntiNef,
            };
            let s = orbifold(euler, nodes, &chain, ksq.clone())?;
            let verdict = singularity::bmy_check(&s, class)?;
            let e = singularity::orbifold_euler(&s)?;
            let mut r = Report::new(
                "orbifold BMY check",
                inputs([
                    ("euler", json!(euler)),
                    ("ksq", ksq.as_ref().map_or(Value::Null, json::rational)),
                    ("nodes", json!(nodes)),
                    ("chains", chains_json(&chain)),
                    ("class", json!(if class == CanonicalClass::Nef { "nef" } else { "anti-nef" })),
                ]),
            );
            r.set("orbifold_euler", json::rational(&e));
            if class == CanonicalClass::Nef {
                r.set("bound", json::rational(&(int(3) * &e)));
            }
            r.set("bmy", verdict.as_str()).set("holds", verdict.holds());
            Ok(r)
        }
        SingOp::MaxPoints { euler, order } => {
            if order < 2 {
                return Err(CliError::Input("--order must be at least 2".into()));
            }
            let mut r =
                Report::new("singular point count filter", inputs([("euler", json!(euler)), ("order", json!(order))]));
            r.set("max_points", singularity::max_singular_points_filter(euler, order));
            Ok(r)
        }
    }
}

fn invariants_cmd(op: InvariantsOp) -> Result<Report> {
    match op {
        InvariantsOp::Noether { q, pg, h11 } => {
            let x = invariants::noether(q, pg, h11)?;
            let mut r =
                Report::new("Noether bookkeeping", inputs([("q", json!(q)), ("pg", json!(pg)), ("h11", json!(h11))]));
            flatten(&mut r, json::invariants(&x));
            Ok(r)
        }
        InvariantsOp::Contract { q, pg, h11, mu } => {
            let c = invariants::contract(invariants::noether(q, pg, h11)?, mu)?;
            let mut r = Report::new(
                "nodal contraction",
                inputs([("q", json!(q)), ("pg", json!(pg)), ("h11", json!(h11)), ("mu", json!(mu))]),
            );
            flatten(&mut r, json::contraction(&c));
            Ok(r)
        }
        InvariantsOp::Enumerate { bound, h11_min } => {
            let b = parse_rational(&bound).ok_or_else(|| CliError::Input(format!("not a rational: {bound:?}")))?;
            let solutions = invariants::bmy_solution_enumerator(&b, h11_min);
            let mut r = Report::new(
                "BMY solution enumeration",
                inputs([("bound", json!(rational_string(&b))), ("h11_min", json!(h11_min))]),
            );
            r.set("count", solutions.len())
                .set("solutions", solutions.iter().map(json::invariants).collect::<Vec<_>>());
            Ok(r)
        }
    }
}

fn obstruct_cmd(op: ObstructOp) -> Result<Report> {
    match op {
        ObstructOp::Mod2 { mu, h11 } => {
            let report = f2::nodal_embedding_obstruction(mu, h11)?;
            let mut r = Report::new("mod-2 obstruction", inputs([("mu", json!(mu)), ("ambient_rank", json!(h11))]));
            flatten(&mut r, json::obstruction(&report));
            Ok(r)
        }
        ObstructOp::Search { mu, dim } => {
            let found = f2::doubly_even_subspace_search(mu, dim)?;
            let mut r = Report::new("doubly-even subspace search", inputs([("mu", json!(mu)), ("dim", json!(dim))]));
            r.set("found", found.is_some()).set("witness", found.as_ref().map_or(Value::Null, json::subspace));
            Ok(r)
        }
    }
}

fn near_max_input(
    q: Option<u64>,
    pg: Option<u64>,
    h11: Option<u64>,
    nef: Option<bool>,
    kind: Option<String>,
    input: Option<String>,
    stdin: &mut dyn Read,
) -> Result<(SurfaceInvariants, bool, Option<String>)> {
    if let Some(input) = input {
        let doc: Value = serde_json::from_str(&read_arg(&input, stdin)?)
            .map_err(|e| CliError::Input(format!("invalid JSON input: {e}")))?;
        let field = |k: &str| {
            doc.get(k)
                .and_then(Value::as_u64)
                .ok_or_else(|| CliError::Input(format!("input needs a nonnegative integer {k:?}")))
        };
        let nef = doc
            .get("nef")
            .and_then(Value::as_bool)
            .ok_or_else(|| CliError::Input("input needs a boolean \"nef\"".into()))?;
        let kind = doc.get("kind").and_then(Value::as_str).map(str::to_string);
        return Ok((SurfaceInvariants { q: field("q")?, pg: field("pg")?, h11: field("h11")? }, nef, kind));
    }
    match (q, pg, h11, nef) {
        (Some(q), Some(pg), Some(h11), Some(nef)) => Ok((SurfaceInvariants { q, pg, h11 }, nef, kind)),
        _ => Err(CliError::Input("near-max needs --q, --pg, --h11 and --nef, or --input".into())),
    }
}

fn classify_cmd(op: ClassifyOp, stdin: &mut dyn Read) -> Result<Report> {
    match op {
        ClassifyOp::MaxNodal { nef } => {
            let v = classifier::classify_max_nodal(nef);
            Ok(Report::new("maximal nodal classification", inputs([("nef", json!(nef))])).with_verdict(&v))
        }
        ClassifyOp::NearMax { q, pg, h11, nef, kind, input } => {
            let (x, nef, kind) = near_max_input(q, pg, h11, nef, kind, input, stdin)?;
            let canonical = if nef {
                Canonical::Nef
            } else {
                let kind = kind.as_deref().ok_or_else(|| CliError::Input("non-nef input needs --kind".into()))?;
                Canonical::NotNef(kind.parse::<NonminimalKind>()?)
            };
            // Invariants are validated by the classifier, so build the echo
            // from the raw triple.
            let echo = inputs([
                ("q", json!(x.q)),
                ("pg", json!(x.pg)),
                ("h11", json!(x.h11)),
                ("nef", json!(nef)),
                (
                    "kind",
                    match canonical {
                        Canonical::NotNef(k) => json!(k.as_str()),
                        Canonical::Nef => Value::Null,
                    },
                ),
            ]);
            let v = classifier::classify_near_max(x, canonical)?;
            Ok(Report::new("near-maximal nodal classification", echo).with_verdict(&v))
        }
        ClassifyOp::Fibres { euler, nodal } => {
            let found = classifier::elliptic_fibre_search(euler, nodal);
            let mut r =
                Report::new("elliptic fibre search", inputs([("euler", json!(euler)), ("nodal", json!(nodal))]));
            r.set("count", found.len())
                .set("multisets", found.iter().map(|m| classifier::fibres::multiset_string(m)).collect::<Vec<_>>())
                .set("fibres", found.iter().map(|m| m.iter().map(json::fibre).collect::<Vec<_>>()).collect::<Vec<_>>());
            Ok(r)
        }
        ClassifyOp::Nonminimal { kind } => {
            let kind: NonminimalKind = kind.parse()?;
            let v = classifier::nonminimal_decision_tree(kind);
            Ok(Report::new("non-minimal decision tree", inputs([("kind", json!(kind.as_str()))])).with_verdict(&v))
        }
        ClassifyOp::Status { tag, ksq } => {
            let tag: CaseTag = tag.parse()?;
            let label = CaseLabel { ksq, ..CaseLabel::new(tag) };
            let status = existence_status(&label)?;
            let mut r = Report::new("existence status", inputs([("tag", json!(tag.as_str())), ("ksq", json!(ksq))]));
            r.set("label", label.to_string()).set("existence", status.as_str());
            Ok(r)
        }
        ClassifyOp::Blowdown { mu, r: blowups } => {
            let mut r = Report::new("nodal bound after blowups", inputs([("mu", json!(mu)), ("r", json!(blowups))]));
            r.set("mu_bound", classifier::mu_bound_after_blowdowns(mu, blowups));
            Ok(r)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("nodal").chain(args.iter().copied());
        let code = run(argv, &mut std::io::empty(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn chain_parses_negative_lists() {
        assert_eq!(Chain::from_str("-3,-2").unwrap().0, [-3, -2]);
        assert!(Chain::from_str("-3,x").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["lattice", "det", "--gram", "[[-2]]"]).0, 0);
        assert_eq!(call(&["frobnicate"]).0, 1);
        assert_eq!(call(&["lattice", "det", "--gram", "[[1,2],[3,4]]"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(call(&["--version"]).0, 0);
    }
}
