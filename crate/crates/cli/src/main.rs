//! Command-line front end: norm profiles, composition-operator bounds,
//! compactness diagnostics, and verification suites for discrete Hardy
//! spaces on (q+1)-homogeneous rooted trees.
//!
//! Exit codes: 0 when every check passes, 1 when a quantitative check fails,
//! 2 on usage or input errors.

mod config;
mod report;
mod table;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hardy_tree::{
    automorphism_norm, compactness_diagnostics, compose, counting_function, growth_bound_check,
    lower_bound_fw, opnorm_infinity, random_dense_function, sequential_probe, sufficiency_series,
    truncated_opnorm, DiagnosticsReport, GrowthReport, InfinityOpNorm, LowerBound, NormReport,
    OracleResult, PExponent, ProbeReport, SufficiencySeries, TreeFunction, TreeParams,
    TrialFamily,
};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use report::{close, Check, Format, OutputArgs, TOL};

#[derive(Parser)]
#[command(
    name = "hardy-tree",
    version,
    about = "Norms, composition-operator bounds, and compactness diagnostics on homogeneous rooted trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Norm profile and growth-ceiling check for a function on the tree
    Norm(NormArgs),
    /// Lower bound, truncated oracle, and sufficiency estimate for a composition operator
    Opnorm(OpnormArgs),
    /// Compactness diagnostics and trial-sequence probes for a self-map
    Diagnose(DiagnoseArgs),
    /// Run a named suite of quantitative checks
    Verify(VerifyArgs),
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<bool> {
    match Cli::parse().command {
        Command::Norm(args) => cmd_norm(args),
        Command::Opnorm(args) => cmd_opnorm(args),
        Command::Diagnose(args) => cmd_diagnose(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

#[derive(Args)]
struct NormArgs {
    /// Branching number: the root has q + 1 children, every other vertex q
    #[arg(long)]
    q: u32,
    /// Exponent p >= 1, or "inf" for the sup norm
    #[arg(long, default_value = "2")]
    p: PExponent,
    /// Read the function from a JSON file
    #[arg(long, value_name = "PATH", conflicts_with_all = ["random", "depth", "seed"])]
    file: Option<PathBuf>,
    /// Sample a dense uniform function on the ball instead
    #[arg(long)]
    random: bool,
    /// Ball radius for --random
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// RNG seed for --random
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
struct NormOutput {
    q: u32,
    p: PExponent,
    depth: usize,
    source: String,
    norm: NormReport,
    growth: Option<GrowthReport>,
}

fn cmd_norm(args: NormArgs) -> Result<bool> {
    let params = TreeParams::new(args.q)?;
    let (f, source) = if let Some(path) = &args.file {
        let f = TreeFunction::read_file(path)
            .with_context(|| format!("reading function file {}", path.display()))?;
        ensure!(
            f.params().q() == args.q,
            "the file stores q = {} but --q {} was given",
            f.params().q(),
            args.q
        );
        (f, format!("file {}", path.display()))
    } else if args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let f = random_dense_function(&params, args.depth, &mut rng)?;
        (f, format!("random (seed {}, depth {})", args.seed, args.depth))
    } else {
        bail!("pass --file <PATH> or --random");
    };
    let norm = f.tp_norm(args.p)?;
    let growth = if args.p.is_finite() && norm.sup > 0.0 {
        Some(growth_bound_check(&f, args.p)?)
    } else {
        None
    };
    let out = NormOutput {
        q: args.q,
        p: args.p,
        depth: f.depth(),
        source,
        norm,
        growth,
    };
    let body = match args.output.format {
        Format::Text => render_norm_text(&out),
        Format::Json => report::to_json(&out)?,
        Format::Csv => render_norm_csv(&out),
    };
    report::emit(&args.output.out, &body)?;
    Ok(true)
}

fn render_norm_text(out: &NormOutput) -> String {
    let mut s = format!(
        "norm profile: q = {}, p = {}, depth {}\nsource: {}\nlevel means:\n",
        out.q, out.p, out.depth, out.source
    );
    for (n, m) in out.norm.per_level.iter().enumerate() {
        s.push_str(&format!("  M({n}) = {m}\n"));
    }
    s.push_str(&format!("norm (sup over levels): {}\n", out.norm.sup));
    match &out.growth {
        Some(g) => s.push_str(&format!(
            "growth ceiling: max |f(v)| / (W(v)^(1/p) ||f||) = {} at vertex {}\n",
            g.max_ratio, g.witness
        )),
        None => s.push_str("growth ceiling: not applicable (sup norm or zero function)\n"),
    }
    s
}

fn render_norm_csv(out: &NormOutput) -> String {
    let mut rows: Vec<(String, usize, f64)> = out
        .norm
        .per_level
        .iter()
        .enumerate()
        .map(|(n, m)| ("level_mean".to_string(), n, *m))
        .collect();
    rows.push(("norm".to_string(), 0, out.norm.sup));
    if let Some(g) = &out.growth {
        rows.push(("growth_ratio".to_string(), 0, g.max_ratio));
    }
    report::csv_table(&rows)
}

#[derive(Args)]
struct OpnormArgs {
    /// Branching number: the root has q + 1 children, every other vertex q
    #[arg(long)]
    q: u32,
    /// Exponent p >= 1, or "inf" for the sup norm
    #[arg(long, default_value = "2")]
    p: PExponent,
    /// Self-map spec: identity | parent | child[:k] | collapse | halving | shift:<vertex> | file:<path>
    #[arg(long)]
    map: String,
    /// Truncation level: counting and bounds scan levels 0..=depth
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Cap the preimage radius scanned by the oracle (defaults to the image radius)
    #[arg(long, value_name = "RADIUS")]
    domain_depth: Option<usize>,
    /// Fail (exit 1) unless the computed ||C||^p matches this value within 1e-12
    #[arg(long, value_name = "PTH_POWER")]
    expect: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum UpperVerdict {
    /// A closed form valid at every depth, not just the scanned one.
    Certified { value_pth_power: f64, basis: String },
    /// The best estimate the scanned data supports.
    Observed {
        value_pth_power: f64,
        still_growing: bool,
    },
    /// The lower certificates themselves are still climbing at the boundary.
    UnboundedTrend { tail_pth_powers: Vec<f64> },
}

#[derive(Serialize)]
struct OpnormOutput {
    q: u32,
    p: PExponent,
    map: String,
    coverage_depth: usize,
    depth: usize,
    lower: Option<LowerBound>,
    oracle: Option<OracleResult>,
    sufficiency: Option<SufficiencySeries>,
    sup_norm: Option<InfinityOpNorm>,
    upper: UpperVerdict,
    checks: Vec<Check>,
}

fn cmd_opnorm(args: OpnormArgs) -> Result<bool> {
    let params = TreeParams::new(args.q)?;
    let choice = config::parse_map(&args.map, params, args.depth)?;
    let map = choice.map();
    let mut checks = Vec::new();

    let out = if args.p.is_finite() {
        let lower = lower_bound_fw(map, args.p, args.depth, None)?;
        let oracle = truncated_opnorm(map, args.p, args.domain_depth, args.depth)?;
        let sufficiency = sufficiency_series(map, args.depth)?;

        checks.push(Check::new(
            "bound-sandwich",
            lower.value_pth_power <= oracle.value_pth_power + TOL
                && oracle.value_pth_power
                    <= sufficiency.upper_estimate_pth_power * (1.0 + TOL) + TOL,
            format!(
                "{} <= {} <= {}",
                lower.value_pth_power, oracle.value_pth_power, sufficiency.upper_estimate_pth_power
            ),
        ));
        if oracle.value > 0.0 {
            let image = compose(map, &oracle.witness, args.depth)?;
            let recheck = image.tp_norm(args.p)?.sup;
            checks.push(Check::new(
                "witness-attainment",
                close(recheck, oracle.value),
                format!(
                    "composing the unit witness yields norm {recheck} against the oracle value {}",
                    oracle.value
                ),
            ));
        }
        if let Some(aut) = choice.shift() {
            let k = aut.root_image().depth();
            let expected = params.level_size(k)? as f64;
            let formula = automorphism_norm(aut, args.p)?;
            checks.push(Check::new(
                "shift-formula",
                close(oracle.value_pth_power, expected) && close(formula, oracle.value),
                format!(
                    "oracle pth power {} against (q+1) q^(k-1) = {expected} for k = {k}",
                    oracle.value_pth_power
                ),
            ));
        }
        if args.q == 1 {
            checks.push(Check::new(
                "line-ceiling",
                oracle.value_pth_power <= 2.0 + TOL,
                format!(
                    "doubled-line pth power {} stays under the universal bound 2",
                    oracle.value_pth_power
                ),
            ));
        }
        if let Some(expect) = args.expect {
            checks.push(Check::new(
                "expected-value",
                close(oracle.value_pth_power, expect),
                format!("computed ||C||^p = {} vs expected {expect}", oracle.value_pth_power),
            ));
        }

        let upper = if let Some(aut) = choice.shift() {
            let k = aut.root_image().depth();
            UpperVerdict::Certified {
                value_pth_power: params.level_size(k)? as f64,
                basis: "automorphism level-shift formula (q+1) q^(k-1)".to_string(),
            }
        } else if args.q == 1 {
            UpperVerdict::Certified {
                value_pth_power: 2.0,
                basis: "universal doubled-line bound".to_string(),
            }
        } else if lower.growing_at_boundary() {
            let t = &lower.per_radius_pth_power;
            UpperVerdict::UnboundedTrend {
                tail_pth_powers: t[t.len().saturating_sub(3)..].to_vec(),
            }
        } else {
            UpperVerdict::Observed {
                value_pth_power: sufficiency.upper_estimate_pth_power,
                still_growing: sufficiency.growing_at_boundary(),
            }
        };

        OpnormOutput {
            q: args.q,
            p: args.p,
            map: map.label().to_string(),
            coverage_depth: map.coverage_depth(),
            depth: args.depth,
            lower: Some(lower),
            oracle: Some(oracle),
            sufficiency: Some(sufficiency),
            sup_norm: None,
            upper,
            checks: checks.clone(),
        }
    } else {
        let sup = opnorm_infinity(map)?;
        let radius = counting_function(map, args.depth)?.image_radius();
        let image = compose(map, &sup.witness.extended(radius)?, args.depth)?;
        let attained = image.tp_norm(PExponent::Infinity)?.sup;
        checks.push(Check::new(
            "witness-attainment",
            sup.value == 1.0 && attained == 1.0,
            format!(
                "the indicator of {} composes to sup-norm {attained}",
                sup.witness_vertex
            ),
        ));
        if let Some(expect) = args.expect {
            checks.push(Check::new(
                "expected-value",
                close(sup.value, expect),
                format!("computed ||C|| = {} vs expected {expect}", sup.value),
            ));
        }
        OpnormOutput {
            q: args.q,
            p: args.p,
            map: map.label().to_string(),
            coverage_depth: map.coverage_depth(),
            depth: args.depth,
            lower: None,
            oracle: None,
            sufficiency: None,
            sup_norm: Some(sup),
            upper: UpperVerdict::Certified {
                value_pth_power: 1.0,
                basis: "every composition operator is a sup-norm contraction".to_string(),
            },
            checks: checks.clone(),
        }
    };

    let body = match args.output.format {
        Format::Text => render_opnorm_text(&out),
        Format::Json => report::to_json(&out)?,
        Format::Csv => render_opnorm_csv(&out),
    };
    report::emit(&args.output.out, &body)?;
    Ok(report::all_passed(&out.checks))
}

fn render_opnorm_text(out: &OpnormOutput) -> String {
    let mut s = format!(
        "composition operator bounds\nmap: {} (coverage depth {}), q = {}, p = {}, truncation depth {}\n",
        out.map, out.coverage_depth, out.q, out.p, out.depth
    );
    if let Some(lower) = &out.lower {
        s.push_str(&format!(
            "atom lower bound: ||C||^p >= {} (witness {} at radius {})\n",
            lower.value_pth_power,
            lower.witness_vertex,
            lower.witness_vertex.depth()
        ));
    }
    if let Some(oracle) = &out.oracle {
        s.push_str(&format!(
            "truncated oracle: ||C||^p = {} at this depth (best level {}, ||C|| = {})\n",
            oracle.value_pth_power, oracle.best_level, oracle.value
        ));
    }
    if let Some(series) = &out.sufficiency {
        s.push_str(&format!(
            "sufficiency estimate: ||C||^p <= {} at this depth (max S(n) = {} at n = {}, root term {})\n",
            series.upper_estimate_pth_power, series.max_value, series.max_level,
            series.root_term_pth_power
        ));
    }
    if let Some(sup) = &out.sup_norm {
        s.push_str(&format!(
            "sup-norm operator: ||C|| = {} attained by the indicator of {}\n",
            sup.value, sup.witness_vertex
        ));
    }
    let verdict = match &out.upper {
        UpperVerdict::Certified {
            value_pth_power,
            basis,
        } => format!("certified ||C||^p <= {value_pth_power} ({basis})"),
        UpperVerdict::Observed {
            value_pth_power,
            still_growing,
        } => format!(
            "observed ||C||^p <= {value_pth_power} at this truncation ({})",
            if *still_growing {
                "estimate still growing at the boundary"
            } else {
                "estimate stabilized"
            }
        ),
        UpperVerdict::UnboundedTrend { tail_pth_powers } => format!(
            "no finite bound in sight: atom certificates still growing at the boundary {tail_pth_powers:?}"
        ),
    };
    s.push_str(&format!("upper verdict: {verdict}\nchecks:\n"));
    for check in &out.checks {
        s.push_str("  ");
        s.push_str(&check.line());
        s.push('\n');
    }
    s
}

fn render_opnorm_csv(out: &OpnormOutput) -> String {
    let mut rows: Vec<(String, usize, f64)> = Vec::new();
    if let Some(lower) = &out.lower {
        for (r, v) in lower.per_radius_pth_power.iter().enumerate() {
            rows.push(("lower_per_radius".to_string(), r, *v));
        }
    }
    if let Some(oracle) = &out.oracle {
        for (n, v) in oracle.per_level_pth_power.iter().enumerate() {
            rows.push(("oracle_per_level".to_string(), n, *v));
        }
        rows.push(("oracle".to_string(), 0, oracle.value_pth_power));
    }
    if let Some(series) = &out.sufficiency {
        for entry in &series.entries {
            rows.push(("sufficiency".to_string(), entry.level, entry.value));
        }
    }
    if let Some(sup) = &out.sup_norm {
        rows.push(("sup_norm".to_string(), 0, sup.value));
    }
    report::csv_table(&rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    /// Extremal atoms along the lexicographically first branch
    LexBranch,
    /// The lexicographically first image vertex at each positive radius
    InRange,
}

#[derive(Args)]
struct DiagnoseArgs {
    /// Branching number: the root has q + 1 children, every other vertex q
    #[arg(long)]
    q: u32,
    /// Self-map spec: identity | parent | child[:k] | collapse | halving | shift:<vertex> | file:<path>
    #[arg(long)]
    map: String,
    /// Scan depth: preimages are counted on levels 0..=depth
    #[arg(long, default_value_t = 8)]
    depth: usize,
    /// Exponent for the trial-sequence probe
    #[arg(long, default_value = "2")]
    p: PExponent,
    /// Trial family for the probe
    #[arg(long, value_enum, default_value_t = FamilyArg::LexBranch)]
    family: FamilyArg,
    /// Explicit trial vertices (repeatable); overrides --family
    #[arg(long = "trial", value_name = "VERTEX")]
    trials: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Serialize)]
struct DiagnoseOutput {
    q: u32,
    map: String,
    depth: usize,
    diagnostics: DiagnosticsReport,
    probe: ProbeReport,
}

fn cmd_diagnose(args: DiagnoseArgs) -> Result<bool> {
    let params = TreeParams::new(args.q)?;
    let choice = config::parse_map(&args.map, params, args.depth)?;
    let map = choice.map();
    let diagnostics = compactness_diagnostics(map, args.depth)?;
    let family = if args.trials.is_empty() {
        match args.family {
            FamilyArg::LexBranch => TrialFamily::LexBranch,
            FamilyArg::InRange => TrialFamily::InRange,
        }
    } else {
        let mut atoms = Vec::new();
        for t in &args.trials {
            atoms.push(params.parse_vertex(t)?);
        }
        TrialFamily::Custom(atoms)
    };
    let probe = sequential_probe(map, args.p, args.depth, family)?;
    let out = DiagnoseOutput {
        q: args.q,
        map: map.label().to_string(),
        depth: args.depth,
        diagnostics,
        probe,
    };
    let body = match args.output.format {
        Format::Text => render_diagnose_text(&out),
        Format::Json => report::to_json(&out)?,
        Format::Csv => render_diagnose_csv(&out),
    };
    report::emit(&args.output.out, &body)?;
    Ok(true)
}

fn render_diagnose_text(out: &DiagnoseOutput) -> String {
    let d = &out.diagnostics;
    let mut s = format!(
        "compactness diagnostics\nmap: {}, q = {}, scanned depth {}\nimage radius: {} (per level: {:?})\n",
        out.map, out.q, out.depth, d.image_radius, d.image_radius_per_level
    );
    s.push_str("preimage weight decay:\n");
    for entry in &d.decay {
        match (&entry.witness, entry.attained_level) {
            (Some(w), Some(level)) => s.push_str(&format!(
                "  d({}) = {} ({} * q^{}, witness {w}, attained at level {level})\n",
                entry.radius, entry.value, entry.count, entry.exponent
            )),
            _ => s.push_str(&format!(
                "  d({}) = 0 (no preimages within reach)\n",
                entry.radius
            )),
        }
    }
    s.push_str(&format!(
        "displacement tail minima: {:?}\n",
        d.displacement.tail_min
    ));
    s.push_str("hints:\n");
    for hint in &d.hints {
        s.push_str(&format!(
            "  [{:?}] {}: {}\n",
            hint.status, hint.criterion, hint.detail
        ));
    }
    s.push_str(&format!(
        "trial probe (family {}, p = {}):\n",
        out.probe.family, out.probe.p
    ));
    for entry in &out.probe.entries {
        s.push_str(&format!(
            "  {}: ||C f||^p = {} (atom {})\n",
            entry.index, entry.norm_pth_power, entry.vertex
        ));
    }
    s.push_str(&format!(
        "probe vanished at boundary: {}\n",
        out.probe.vanished_at_boundary
    ));
    s
}

fn render_diagnose_csv(out: &DiagnoseOutput) -> String {
    let mut rows: Vec<(String, usize, f64)> = Vec::new();
    for entry in &out.diagnostics.decay {
        rows.push(("decay".to_string(), entry.radius, entry.value));
    }
    for (n, v) in out.diagnostics.displacement.tail_min.iter().enumerate() {
        rows.push(("tail_min".to_string(), n, *v as f64));
    }
    for entry in &out.probe.entries {
        rows.push(("probe".to_string(), entry.index, entry.norm_pth_power));
    }
    report::csv_table(&rows)
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: norms | operators | q1-bound | table | all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Restrict checks to a single branching number (default: 1, 2, and 3)
    #[arg(long)]
    q: Option<u32>,
    /// Ball radius used by every sampled object
    #[arg(long, default_value_t = 6)]
    depth: usize,
    /// RNG seed shared by all sampled checks
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let qs: Vec<u32> = match args.q {
        Some(q) => vec![q],
        None => vec![1, 2, 3],
    };
    let rep = verify::run_suite(&args.suite, &qs, args.depth, args.seed)?;
    let body = match args.output.format {
        Format::Text => verify::render_text(&rep),
        Format::Json => report::to_json(&rep)?,
        Format::Csv => verify::render_csv(&rep),
    };
    report::emit(&args.output.out, &body)?;
    Ok(report::all_passed(&rep.checks))
}
