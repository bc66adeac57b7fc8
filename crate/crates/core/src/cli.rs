//! The `gapforge` command line. Exit codes: 0 when every assertion holds,
//! 1 when one fails (the report is still printed), 2 for usage errors and
//! infeasible requests.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bell::{bell_kp, bell_kp_refinement, bound_band, egf_dominates, egf_upper_ln, enumerate_hier, DEFAULT_HIER_CAP};
use crate::error::{Error, Result};
use crate::io::{self, Artifact, SolveReport};
use crate::label_cover::{gen_disjoint, gen_planted, gen_random, max_weak_fraction_with_witness, DEFAULT_ASSIGNMENT_CAP};
use crate::math::{fmt_rational, parse_rational};
use crate::modified_vs::{bernoulli_tail, brute_force_mvs, search_mvs, verify_mvs};
use crate::reduction::{verify_base_gap, ReductionInstance};
use crate::report::{GapReport, VerificationReport};
use crate::tensor::{
    min_cost, verify_infty_recurrence, verify_infty_sum_bound, verify_no_bound, verify_pairwise_l2, Caps,
    DEFAULT_DIM_CAP, DEFAULT_PAIR_CAP, DEFAULT_PATH_CAP,
};
use crate::trees::{
    aut_count, build_binary_family, check_low_tran, enumerate_kp_trees, gamma_size, nice_family_bound, tran,
    tree_lower_bound, PlaneTree, DEFAULT_TREE_CAP,
};
use crate::vector_systems::{verify_vector_system, VectorSystem, DEFAULT_EXHAUSTIVE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "gapforge", version, about = "Build and exactly verify ℓp-shortest-path hardness gadgets")]
pub struct Cli {
    /// Seed for every randomized generator and search.
    #[arg(long, global = true, env = "GAPFORGE_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of tensor paths (or assignments) to enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_PATH_CAP)]
    pub cap_paths: u64,
    /// Maximum number of materialized coordinates.
    #[arg(long, global = true, default_value_t = DEFAULT_DIM_CAP)]
    pub cap_dims: u64,
    /// Write the produced artifact or report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Vector systems over finite fields.
    #[command(subcommand)]
    Vs(VsCmd),
    /// Modified (0/1) vector systems for ℓ∞.
    #[command(subcommand)]
    Mvs(MvsCmd),
    /// Hypergraph label cover instances.
    #[command(subcommand)]
    Lc(LcCmd),
    /// Build reductions and check the order-1 gap.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Exact minimum cost and bound checks over tensor powers.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Higher-order Bell numbers.
    #[command(subcommand)]
    Bell(BellCmd),
    /// Plane trees and the Bell lower bounds built from them.
    #[command(subcommand)]
    Trees(TreesCmd),
    /// Exact Bernoulli tail check.
    #[command(subcommand)]
    Bernoulli(BernoulliCmd),
}

#[derive(Debug, Args)]
pub struct Input {
    /// Input file; standard input when omitted or `-`.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VsCmd {
    Build {
        #[arg(short)]
        r: u64,
        #[arg(short)]
        p: u32,
        /// Embedding power (defaults to p).
        #[arg(long)]
        embed: Option<u32>,
        /// Build the smallest system with this many colors in general position.
        #[arg(long, conflicts_with = "embed")]
        colors: Option<usize>,
        #[arg(long)]
        allow_prime: bool,
    },
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_CAP)]
        exhaustive_cap: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum MvsCmd {
    Search {
        #[arg(short)]
        q: usize,
        #[arg(short)]
        p: u32,
        #[arg(long)]
        d0: Option<usize>,
        #[arg(long, default_value_t = 100)]
        max_tries: u64,
    },
    Brute {
        #[arg(short)]
        q: usize,
        #[arg(short)]
        p: u32,
        #[arg(long)]
        d0: usize,
    },
    Verify {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(short)]
    pub r: usize,
    #[arg(long, default_value_t = 1)]
    pub part_size: usize,
    #[arg(long)]
    pub labels: usize,
    #[arg(long)]
    pub colors: usize,
    #[arg(long)]
    pub edges: usize,
}

#[derive(Debug, Subcommand)]
pub enum LcCmd {
    GenPlanted(GenArgs),
    GenRandom(GenArgs),
    /// Per-part color palettes (small ε*); `--colors` is per part.
    GenDisjoint {
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long, default_value_t = 0)]
        noisy: usize,
    },
    /// Brute-force ε*, the largest weakly satisfied fraction.
    Eps {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Subcommand)]
pub enum ReduceCmd {
    Build {
        /// Label cover file.
        #[arg(long)]
        lc: PathBuf,
        #[arg(short)]
        p: u32,
        #[arg(long)]
        allow_prime: bool,
    },
    BuildInfty {
        #[arg(long)]
        lc: PathBuf,
        /// Modified vector system file; searched for when omitted.
        #[arg(long)]
        mvs: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        mvs_p: u32,
        #[arg(long)]
        d0: Option<usize>,
        #[arg(long, default_value_t = 100)]
        max_tries: u64,
    },
    Gap {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Debug, Subcommand)]
pub enum SolveCmd {
    Min {
        #[command(flatten)]
        input: Input,
        #[arg(short, default_value_t = 1)]
        k: u32,
    },
    VerifyNo {
        #[command(flatten)]
        input: Input,
        #[arg(short, default_value_t = 1)]
        k: u32,
    },
    VerifyPairwise {
        #[command(flatten)]
        input: Input,
        #[arg(short, default_value_t = 1)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_PAIR_CAP)]
        cap_pairs: u64,
    },
    /// ℓ∞ recurrence over orders 1..k, or the sum bound for given base paths.
    VerifyInfty {
        #[command(flatten)]
        input: Input,
        #[arg(short, default_value_t = 2)]
        k: u32,
        /// Base paths as label lists, e.g. `0,1;1,1`.
        #[arg(long)]
        sum_paths: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BellCmd {
    Eval {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        p: usize,
        /// Also evaluate through the refinement recurrence and compare.
        #[arg(long)]
        cross_check: bool,
    },
    Enum {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        p: usize,
    },
    Band {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        p: usize,
    },
    Egf {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        p: usize,
        #[arg(short)]
        x: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum TreesCmd {
    Enum {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        p: usize,
    },
    /// Transformation count of a tree given as preorder child counts.
    Tran { tree: String },
    Aut { tree: String },
    Lower {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        p: usize,
    },
    /// Low-transformation (k,p)-tree.
    Construct {
        #[arg(short)]
        k: u32,
        #[arg(short)]
        p: usize,
    },
    /// Binary family of (Δ,q)-trees from interval labelings.
    Family {
        #[arg(long)]
        delta: usize,
        #[arg(short)]
        q: usize,
    },
    /// Bell lower bound from a family of 30-nice trees.
    Nice {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        p: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum BernoulliCmd {
    Check {
        /// Comma-separated non-negative rational weights.
        #[arg(long)]
        weights: String,
        /// Threshold multiplier c in [0,1], rational.
        #[arg(short)]
        c: String,
    },
}

/// What a command produced.
struct Outcome {
    /// Printed in text mode.
    text: String,
    /// Printed in machine mode.
    machine: String,
    /// Artifact written to `--out` when given.
    artifact: Option<Artifact>,
    pass: bool,
}

impl Outcome {
    fn artifact(a: Artifact) -> Self {
        let s = io::to_string(&a);
        Outcome { text: s.clone(), machine: s, artifact: Some(a), pass: true }
    }

    fn report(a: Artifact, text: String, pass: bool) -> Self {
        Outcome { machine: io::to_string(&a), text, artifact: Some(a), pass }
    }

    fn value<T: Serialize>(v: &T, text: String, pass: bool) -> Self {
        let mut machine = serde_json::to_string_pretty(v).expect("serializable");
        machine.push('\n');
        Outcome { text, machine, artifact: None, pass }
    }
}

fn gap(rep: GapReport) -> Outcome {
    let pass = !rep.failed();
    let text = rep.to_string();
    Outcome::report(Artifact::GapReport(rep), text, pass)
}

fn verification(rep: VerificationReport) -> Outcome {
    let pass = rep.pass();
    let text = rep.to_string();
    Outcome::report(Artifact::VerificationReport(rep), text, pass)
}

fn read_input(input: &Input, stdin: &mut dyn Read) -> Result<String> {
    match &input.input {
        Some(p) if p.as_os_str() != "-" => Ok(std::fs::read_to_string(p)?),
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn read_path(p: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(p)?)
}

fn parse_sum_paths(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split(';')
        .map(|part| {
            part.split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|e| Error::InvalidArgument(format!("bad label {x:?}: {e}"))))
                .collect()
        })
        .collect()
}

fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome> {
    let caps = Caps { paths: cli.cap_paths, dims: cli.cap_dims, pairs: DEFAULT_PAIR_CAP, assignments: DEFAULT_ASSIGNMENT_CAP.max(cli.cap_paths) };
    Ok(match &cli.command {
        Command::Vs(VsCmd::Build { r, p, embed, colors, allow_prime }) => {
            let s = match colors {
                Some(n) => VectorSystem::for_reduction(*r, *p, *n, *allow_prime)?,
                None => VectorSystem::build_embedded(*r, *p, embed.unwrap_or(*p), *allow_prime)?,
            };
            Outcome::artifact(Artifact::VectorSystem(s))
        }
        Command::Vs(VsCmd::Verify { input, exhaustive_cap }) => {
            let s = io::parse_vector_system(&read_input(input, stdin)?)?;
            verification(verify_vector_system(&s, *exhaustive_cap))
        }
        Command::Mvs(MvsCmd::Search { q, p, d0, max_tries }) => {
            let found = search_mvs(*q, *p, *d0, cli.seed, *max_tries)?;
            Outcome::artifact(Artifact::ModifiedVs(found.system))
        }
        Command::Mvs(MvsCmd::Brute { q, p, d0 }) => match brute_force_mvs(*q, *p, *d0)? {
            Some(s) => Outcome::artifact(Artifact::ModifiedVs(s)),
            None => Outcome::value(
                &json!({ "q": q, "p": p, "d0": d0, "exists": false }),
                format!("no ({q},{p})-system with d0 = {d0}\n"),
                false,
            ),
        },
        Command::Mvs(MvsCmd::Verify { input }) => {
            let s = io::parse_modified_vs(&read_input(input, stdin)?)?;
            verification(verify_mvs(&s))
        }
        Command::Lc(LcCmd::GenPlanted(g)) => {
            let (inst, _) = gen_planted(g.r, g.part_size, g.labels, g.colors, g.edges, cli.seed)?;
            Outcome::artifact(Artifact::LabelCover(inst))
        }
        Command::Lc(LcCmd::GenRandom(g)) => {
            Outcome::artifact(Artifact::LabelCover(gen_random(g.r, g.part_size, g.labels, g.colors, g.edges, cli.seed)?))
        }
        Command::Lc(LcCmd::GenDisjoint { gen: g, noisy }) => Outcome::artifact(Artifact::LabelCover(gen_disjoint(
            g.r,
            g.part_size,
            g.labels,
            g.colors,
            g.edges,
            *noisy,
            cli.seed,
        )?)),
        Command::Lc(LcCmd::Eps { input }) => {
            let inst = io::parse_label_cover(&read_input(input, stdin)?)?;
            let (eps, sigma) = max_weak_fraction_with_witness(&inst, caps.assignments)?;
            Outcome::value(
                &json!({ "eps_star": crate::report::serde_rat::to_pair(&eps), "witness": sigma }),
                format!("ε* = {}\nwitness = {:?}\n", fmt_rational(&eps), sigma),
                true,
            )
        }
        Command::Reduce(ReduceCmd::Build { lc, p, allow_prime }) => {
            let src = io::parse_label_cover(&read_path(lc)?)?;
            let vs = VectorSystem::for_reduction(src.r() as u64, *p, src.num_colors(), *allow_prime)?;
            Outcome::artifact(Artifact::Reduction(ReductionInstance::build_base(&src, *p, &vs, false)?))
        }
        Command::Reduce(ReduceCmd::BuildInfty { lc, mvs, mvs_p, d0, max_tries }) => {
            let src = io::parse_label_cover(&read_path(lc)?)?;
            let sys = match mvs {
                Some(path) => io::parse_modified_vs(&read_path(path)?)?,
                None => search_mvs(src.num_colors().max(2), *mvs_p, *d0, cli.seed, *max_tries)?.system,
            };
            Outcome::artifact(Artifact::Reduction(ReductionInstance::build_base_infty(&src, &sys)?))
        }
        Command::Reduce(ReduceCmd::Gap { input }) => {
            let inst = io::parse_reduction(&read_input(input, stdin)?)?;
            gap(verify_base_gap(&inst, cli.cap_paths)?)
        }
        Command::Solve(SolveCmd::Min { input, k }) => {
            let inst = io::parse_reduction(&read_input(input, stdin)?)?;
            let sol = min_cost(&inst, *k, caps.paths, caps.dims)?;
            let rep = SolveReport::new(&inst, *k, &sol);
            let text = format!(
                "min cost (k = {k}): {}\nwitness: {}\npaths enumerated: {} (exhaustive)\npaths evaluated: {}\n",
                fmt_rational(&sol.best),
                sol.witness,
                sol.paths_enumerated,
                sol.leaves_evaluated
            );
            Outcome::report(Artifact::SolveReport(rep), text, true)
        }
        Command::Solve(SolveCmd::VerifyNo { input, k }) => {
            let inst = io::parse_reduction(&read_input(input, stdin)?)?;
            gap(verify_no_bound(&inst, *k, &caps)?)
        }
        Command::Solve(SolveCmd::VerifyPairwise { input, k, cap_pairs }) => {
            let inst = io::parse_reduction(&read_input(input, stdin)?)?;
            gap(verify_pairwise_l2(&inst, *k, &Caps { pairs: *cap_pairs, ..caps })?)
        }
        Command::Solve(SolveCmd::VerifyInfty { input, k, sum_paths }) => {
            let inst = io::parse_reduction(&read_input(input, stdin)?)?;
            match sum_paths {
                Some(s) => gap(verify_infty_sum_bound(&inst, &parse_sum_paths(s)?)?),
                None => gap(verify_infty_recurrence(&inst, *k, &caps)?),
            }
        }
        Command::Bell(BellCmd::Eval { k, p, cross_check }) => {
            let v = bell_kp(*k, *p);
            let other = cross_check.then(|| bell_kp_refinement(*k, *p));
            let pass = other.as_ref().is_none_or(|o| *o == v);
            let mut text = format!("{v}\n");
            if let Some(o) = &other {
                text.push_str(&format!("refinement route: {o} ({})\n", if pass { "agrees" } else { "DIFFERS" }));
            }
            Outcome::value(
                &json!({ "k": k, "p": p, "bell": v.to_string(), "refinement": other.map(|o| o.to_string()) }),
                text,
                pass,
            )
        }
        Command::Bell(BellCmd::Enum { k, p }) => {
            let all = enumerate_hier(*k, *p, cli.cap_paths.min(DEFAULT_HIER_CAP.max(cli.cap_paths)))?;
            let text: String = all.iter().map(|h| format!("{h}\n")).collect();
            let rows: Vec<String> = all.iter().map(ToString::to_string).collect();
            let pass = num_bigint::BigUint::from(all.len()) == bell_kp(*k, *p);
            Outcome::value(&json!({ "k": k, "p": p, "count": all.len(), "partitions": rows }), text, pass)
        }
        Command::Bell(BellCmd::Band { k, p }) => {
            let b = bound_band(*k, *p)?;
            let text = format!(
                "k = {}  p = {}  k0 = {}  branch = {}\nbell^(1/p) = {:.6}  ref = {:.6}  ratio = {:.6}  {}\n",
                b.k,
                b.p,
                b.k0,
                b.branch,
                b.bell_root,
                b.reference,
                b.ratio,
                if b.within_band { "within band" } else { "OUTSIDE band" }
            );
            let pass = b.within_band;
            Outcome::value(&b, text, pass)
        }
        Command::Bell(BellCmd::Egf { k, p, x }) => {
            let ln_bound = egf_upper_ln(*k, *p, *x)?;
            let holds = egf_dominates(*k, *p, *x)?;
            let bell = bell_kp(*k, *p);
            let text = format!(
                "ln(p!/x^p·(f_k(x)−1)) = {ln_bound:.6}\nln bell_k(p) = {:.6}\n{}\n",
                crate::math::ln_big(&bell),
                if holds { "PASS" } else { "FAIL" }
            );
            Outcome::value(
                &json!({ "k": k, "p": p, "x": x, "ln_bound": ln_bound, "bell": bell.to_string(), "holds": holds }),
                text,
                holds,
            )
        }
        Command::Trees(TreesCmd::Enum { k, p }) => {
            let all = enumerate_kp_trees(*k, *p, cli.cap_paths.max(DEFAULT_TREE_CAP))?;
            let text: String = all.iter().map(|t| format!("{t}\n")).collect();
            Outcome::value(&json!({ "k": k, "p": p, "count": all.len(), "trees": all }), text, true)
        }
        Command::Trees(TreesCmd::Tran { tree }) => {
            let t: PlaneTree = tree.parse()?;
            let v = tran(&t);
            Outcome::value(&json!({ "tree": t, "tran": v.to_string() }), format!("{v}\n"), true)
        }
        Command::Trees(TreesCmd::Aut { tree }) => {
            let t: PlaneTree = tree.parse()?;
            let a = aut_count(&t);
            let g = gamma_size(&t)?;
            let pass = a <= tran(&t);
            Outcome::value(
                &json!({ "tree": t, "aut": a.to_string(), "gamma": g.to_string() }),
                format!("|Aut| = {a}\n|Γ| = {g}\n"),
                pass,
            )
        }
        Command::Trees(TreesCmd::Lower { k, p }) => {
            let b = tree_lower_bound(*k, *p, cli.cap_paths.max(DEFAULT_TREE_CAP))?;
            let text = format!(
                "p!·Σ 1/|Aut(T)| = {} over {} classes\nbell_k(p) = {}\n{}{}\n",
                b.bound,
                b.classes,
                b.bell,
                if b.holds { "PASS" } else { "FAIL" },
                if b.equal { " (equal)" } else { "" }
            );
            Outcome::value(
                &json!({ "k": k, "p": p, "bound": b.bound.to_string(), "bell": b.bell.to_string(),
                         "classes": b.classes, "holds": b.holds, "equal": b.equal }),
                text,
                b.holds,
            )
        }
        Command::Trees(TreesCmd::Construct { k, p }) => {
            let c = check_low_tran(*k, *p)?;
            let text = format!(
                "{}\nTran = {}\nTran^(1/p) = {:.6} vs 10·log^(k) p = {:.6}  {}\n",
                c.tree,
                c.tran,
                c.tran_root,
                c.bound,
                if c.holds { "PASS" } else { "FAIL" }
            );
            Outcome::value(
                &json!({ "k": k, "p": p, "tree": c.tree, "tran": c.tran.to_string(),
                         "tran_root": c.tran_root, "bound": c.bound, "holds": c.holds }),
                text,
                c.holds,
            )
        }
        Command::Trees(TreesCmd::Family { delta, q }) => {
            let f = build_binary_family(*delta, *q, cli.cap_paths.max(DEFAULT_TREE_CAP))?;
            let mut text: String = f.trees.iter().map(|t| format!("{t}\n")).collect();
            text.push_str(&format!(
                "family size {} ; ⌈Δ^(q−1)/(8q)⌉ = {} ({}) ; Δ^(q−1)/3^s = {} ({})\n",
                f.labelings,
                f.stated_bound,
                if f.meets_stated { "met" } else { "not met" },
                fmt_rational(&f.derived_bound),
                if f.meets_derived { "met" } else { "not met" },
            ));
            Outcome::value(
                &json!({ "delta": delta, "q": q, "size": f.labelings.to_string(), "trees": f.trees,
                         "stated_bound": f.stated_bound.to_string(), "meets_stated": f.meets_stated,
                         "derived_bound": crate::report::serde_rat::to_pair(&f.derived_bound),
                         "meets_derived": f.meets_derived }),
                text,
                f.meets_derived,
            )
        }
        Command::Trees(TreesCmd::Nice { k, p }) => gap(nice_family_bound(*k, *p, cli.cap_paths.max(DEFAULT_TREE_CAP))?),
        Command::Bernoulli(BernoulliCmd::Check { weights, c }) => {
            let ws = weights
                .split(',')
                .map(|w| parse_rational(w.trim()).ok_or_else(|| Error::InvalidArgument(format!("bad weight {w:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let c = parse_rational(c).ok_or_else(|| Error::InvalidArgument(format!("bad c {c:?}")))?;
            let o = bernoulli_tail(&ws, &c)?;
            let text = format!(
                "Pr(X >= μ + cσ) = {}\n(1−c)²/4 = {}\n{}\n",
                fmt_rational(&o.prob),
                fmt_rational(&o.bound),
                if o.pass { "PASS" } else { "FAIL" }
            );
            Outcome::value(
                &json!({ "prob": crate::report::serde_rat::to_pair(&o.prob),
                         "bound": crate::report::serde_rat::to_pair(&o.bound), "pass": o.pass }),
                text,
                o.pass,
            )
        }
    })
}

/// Run with explicit arguments and streams; returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let msg = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{msg}");
            } else {
                let _ = write!(stderr, "{msg}");
            }
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(&cli, stdin) {
        Ok(out) => {
            let mut body = match cli.format {
                Format::Text => out.text,
                Format::Machine => out.machine,
            };
            if let (Some(path), Some(a)) = (&cli.out, &out.artifact) {
                if let Err(e) = io::save(a, path) {
                    let _ = writeln!(stderr, "error: {e}");
                    return 2;
                }
                if matches!(a, Artifact::LabelCover(_) | Artifact::VectorSystem(_) | Artifact::ModifiedVs(_) | Artifact::Reduction(_)) {
                    body = format!("wrote {} to {}\n", a.kind(), path.display());
                }
            } else if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &body) {
                    let _ = writeln!(stderr, "error: {e}");
                    return 2;
                }
            }
            let _ = stdout.write_all(body.as_bytes());
            if out.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

/// Entry point for the binary.
pub fn main_with_env() -> i32 {
    let stdin = std::io::stdin();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdin.lock(), &mut stdout.lock(), &mut stderr.lock())
}
