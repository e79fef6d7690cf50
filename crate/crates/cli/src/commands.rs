use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use flipcut::construction::{
    default_nk, smoothed_trial, token_certificate, two_flip_longest, verify_gn, GnReport, SetupMode, TrialParams,
    TrialReport,
};
use flipcut::engine::{run_flip, FlipConfig, PivotRule, Termination, DEFAULT_ENUM_BUDGET};
use flipcut::format::{parse_graph, write_graph};
use flipcut::instance::{build_gn, build_hk_with, sample_cut, sample_grid_weight, sample_weights, Family};
use flipcut::rng::tag;
use flipcut::signs::epsilon_decay_study;
use flipcut::weight::{rational_to_f64, Rational};
use flipcut::{Cut, FlipSequence, RngSeed, Weight, WeightedGraph};

use crate::config::{Command, ExperimentConfig, Format};
use crate::output::{self, in_dir};
use crate::CliError;

/// Numerator and denominator of a rational, for exact CSV columns.
fn parts(r: &Rational) -> (String, String) {
    (r.numer().to_string(), r.denom().to_string())
}

#[derive(Parser, Debug)]
#[command(name = "flipcut", version, about = "Exact local search experiments on weighted Max-Cut")]
pub struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Write a G_n or H_k instance and its metadata sidecar.
    #[command(args_override_self = true)]
    Gen(GenArgs),
    /// Run FLIP or k-FLIP on an instance file and write the trace.
    #[command(args_override_self = true)]
    RunFlip(RunFlipArgs),
    /// Certify the long improving sequence on G_n.
    #[command(args_override_self = true)]
    VerifyGn(VerifyGnArgs),
    /// Seeded smoothed 3-FLIP trials on H_k.
    #[command(args_override_self = true)]
    SmoothHk(SmoothHkArgs),
    /// Decay of the sign-approximation error with n.
    #[command(args_override_self = true)]
    EpsilonStudy(EpsilonArgs),
    /// Check the quadratic bound for 2-flip sequences on random graphs.
    #[command(args_override_self = true)]
    TwoFlipBound(TwoFlipArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// File of `key = value` lines supplying defaults for any flag.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Master seed; all randomness derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "out-dir", alias = "output-dir", env = "FLIPCUT_OUT", default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Add decimal approximations next to exact values.
    #[arg(long)]
    decimal: bool,
    /// Worker threads for trial-level parallelism (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
}

impl Common {
    fn config(&self, command: Command, mut params: BTreeMap<String, String>) -> ExperimentConfig {
        if self.decimal {
            params.insert("decimal".into(), "true".into());
        }
        ExperimentConfig {
            command,
            params,
            master_seed: self.seed,
            output_dir: self.out_dir.display().to_string(),
            format: self.format,
        }
    }
}

fn params<const N: usize>(pairs: [(&str, Option<String>); N]) -> BTreeMap<String, String> {
    pairs.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))).collect()
}

fn weight(s: &str, what: &str) -> Result<Weight, CliError> {
    s.parse().map_err(|e: flipcut::Error| CliError::invalid(format!("--{what}: {e}")))
}

fn decimal(r: &Rational) -> String {
    format!("{:e}", rational_to_f64(r))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Gn,
    Hk,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Levels of G_n.
    #[arg(long)]
    n: Option<usize>,
    /// Levels of H_k.
    #[arg(long)]
    k: Option<usize>,
    /// Star size of H_k (default 32(k+4)).
    #[arg(long)]
    nk: Option<usize>,
    /// Sample H_k weights uniformly on [a, b] (needs both ends).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
    /// Join the H_k trees with connector edges.
    #[arg(long)]
    connectors: bool,
    /// Output file stem.
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    family: &'a Family,
    vertices: usize,
    edges: usize,
    initial_cut: Option<&'a Cut>,
    interval: Option<(String, String)>,
    weight_seed: Option<&'a RngSeed>,
    labels: &'a BTreeMap<String, Vec<usize>>,
}

fn gen(args: GenArgs) -> Result<(), CliError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::invalid(format!("--{flag} is required for this family")));
    let (inst, stem, p) = match args.family {
        FamilyArg::Gn => {
            let n = need(args.n, "n")?;
            (build_gn(n), format!("gn-{n}"), params([("family", Some("gn".into())), ("n", Some(n.to_string()))]))
        }
        FamilyArg::Hk => {
            let k = need(args.k, "k")?;
            let nk = args.nk.unwrap_or_else(|| default_nk(k));
            let mut inst = build_hk_with(k, nk, args.connectors)?;
            let seed = RngSeed::new(args.common.seed);
            match (&args.a, &args.b) {
                (Some(a), Some(b)) => {
                    inst = sample_weights(&inst, &weight(a, "a")?, &weight(b, "b")?, &seed)?;
                    inst.initial_cut = Some(sample_cut(&inst, &seed));
                }
                (None, None) => {}
                _ => return Err(CliError::invalid("give both --a and --b to sample weights")),
            }
            let p = params([
                ("family", Some("hk".into())),
                ("k", Some(k.to_string())),
                ("nk", Some(nk.to_string())),
                ("a", args.a.clone()),
                ("b", args.b.clone()),
                ("connectors", Some(args.connectors.to_string())),
            ]);
            (inst, format!("hk-{k}-{nk}"), p)
        }
    };
    let mut p = p;
    let stem = args.name.clone().unwrap_or(stem);
    p.insert("name".into(), stem.clone());
    let cfg = args.common.config(Command::Gen, p);

    let header: Vec<String> = output::comment_header(&cfg).lines().map(|l| l.trim_start_matches("# ").to_string()).collect();
    let graph_path = in_dir(&cfg, &format!("{stem}.graph"));
    output::write_atomic(&graph_path, write_graph(&inst.graph, &header).as_bytes())?;
    let sidecar = Sidecar {
        family: &inst.family,
        vertices: inst.graph.n_vertices(),
        edges: inst.graph.n_edges(),
        initial_cut: inst.initial_cut.as_ref(),
        interval: inst.interval.as_ref().map(|(a, b)| (a.to_string(), b.to_string())),
        weight_seed: inst.weight_seed.as_ref(),
        labels: &inst.labels,
    };
    output::write_atomic(&sidecar_path(&graph_path), &output::json(&cfg, &sidecar)?)?;
    println!("wrote {} ({} vertices, {} edges)", graph_path.display(), inst.graph.n_vertices(), inst.graph.n_edges());
    Ok(())
}

fn sidecar_path(graph: &Path) -> PathBuf {
    graph.with_extension("json")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PivotArg {
    Greedy,
    FirstImprovement,
    Random,
    Scripted,
}

#[derive(Args, Debug)]
struct RunFlipArgs {
    /// Graph file written by `gen` or by hand.
    #[arg(long)]
    instance: PathBuf,
    /// Initial cut as a `+`/`-` string; defaults to the sidecar's cut.
    #[arg(long, allow_hyphen_values = true)]
    cut: Option<String>,
    /// Largest number of vertices moved per step.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, value_enum, default_value_t = PivotArg::Greedy)]
    pivot: PivotArg,
    /// Comma-separated vertex order for first-improvement (default 0..n).
    #[arg(long)]
    order: Option<String>,
    /// Flip sequence file for the scripted rule: one step per line.
    #[arg(long)]
    script: Option<PathBuf>,
    /// Step budget.
    #[arg(long, default_value_t = 1_000_000)]
    budget: usize,
    /// Cap on subsets visited per enumeration.
    #[arg(long, default_value_t = DEFAULT_ENUM_BUDGET)]
    enum_budget: u128,
    /// Output file stem (default: the instance's).
    #[arg(long)]
    name: Option<String>,
    #[command(flatten)]
    common: Common,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn initial_cut(args: &RunFlipArgs, g: &WeightedGraph) -> Result<Cut, CliError> {
    let cut: Cut = match &args.cut {
        Some(s) => s.parse()?,
        None => {
            let side = sidecar_path(&args.instance);
            let meta: serde_json::Value = serde_json::from_str(&read(&side)?)
                .map_err(|e| CliError::invalid(format!("{}: {e}", side.display())))?;
            let text = meta["initial_cut"]
                .as_str()
                .ok_or_else(|| CliError::invalid("no --cut given and the sidecar has no initial cut"))?;
            text.parse()?
        }
    };
    if cut.len() != g.n_vertices() {
        return Err(CliError::invalid(format!("cut has {} entries, graph has {} vertices", cut.len(), g.n_vertices())));
    }
    Ok(cut)
}

fn run_flip_cmd(args: RunFlipArgs) -> Result<(), CliError> {
    let g = parse_graph(&read(&args.instance)?)?;
    let sigma = initial_cut(&args, &g)?;
    let seed = RngSeed::new(args.common.seed);
    let rule = match args.pivot {
        PivotArg::Greedy => PivotRule::Greedy,
        PivotArg::FirstImprovement => {
            let order = match &args.order {
                Some(s) => s
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| CliError::invalid(format!("bad vertex `{t}` in --order"))))
                    .collect::<Result<Vec<usize>, _>>()?,
                None => (0..g.n_vertices()).collect(),
            };
            PivotRule::FirstImprovement { order }
        }
        PivotArg::Random => PivotRule::Random { seed: seed.child(tag::PIVOT) },
        PivotArg::Scripted => {
            let path = args.script.as_ref().ok_or_else(|| CliError::invalid("the scripted rule needs --script"))?;
            PivotRule::Scripted { script: read(path)?.parse::<FlipSequence>()? }
        }
    };
    let stem = match &args.name {
        Some(n) => n.clone(),
        None => args.instance.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "run".into()),
    };
    let pivot = format!("{:?}", args.pivot).to_lowercase();
    let p = params([
        ("instance", Some(args.instance.display().to_string())),
        ("cut", Some(sigma.to_string())),
        ("k", Some(args.k.to_string())),
        ("pivot", Some(pivot)),
        ("order", args.order.clone()),
        ("script", args.script.as_ref().map(|s| s.display().to_string())),
        ("budget", Some(args.budget.to_string())),
        ("enum_budget", Some(args.enum_budget.to_string())),
        ("name", Some(stem.clone())),
    ]);
    let cfg = args.common.config(Command::RunFlip, p);
    let config = FlipConfig { k: args.k, step_budget: args.budget, enum_budget: args.enum_budget };
    let trace = run_flip(&g, &sigma, &rule, &config)?;

    let mut text = serde_json::to_string(&serde_json::json!({ "tool_version": output::TOOL_VERSION, "config": &cfg }))
        .map_err(|e| CliError::invalid(e.to_string()))?;
    text.push('\n');
    text.push_str(&trace.to_jsonl());
    let path = in_dir(&cfg, &format!("{stem}.trace.jsonl"));
    output::write_atomic(&path, text.as_bytes())?;
    println!("{} steps, terminated {:?}; trace in {}", trace.step_count, trace.terminated, path.display());
    if trace.terminated == Termination::ScriptFail {
        return Err(CliError::verification(format!("scripted step is not improving: {:?}", trace.script_failure)));
    }
    Ok(())
}

#[derive(Args, Debug)]
struct VerifyGnArgs {
    #[arg(long)]
    n: usize,
    /// Stop after this many steps and report the run as incomplete.
    #[arg(long)]
    budget: Option<usize>,
    #[command(flatten)]
    common: Common,
}

fn verify_gn_cmd(args: VerifyGnArgs) -> Result<(), CliError> {
    let cfg = args.common.config(
        Command::VerifyGn,
        params([("n", Some(args.n.to_string())), ("budget", args.budget.map(|b| b.to_string()))]),
    );
    let report: GnReport = verify_gn(args.n, args.budget.unwrap_or(usize::MAX));
    let stem = format!("verify-gn-{}", args.n);
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                passed: bool,
                report: &'a GnReport,
            }
            output::write_atomic(&in_dir(&cfg, &format!("{stem}.json")), &output::json(&cfg, &Body { passed: report.passed(), report: &report })?)?;
        }
        Format::Csv => {
            let header = [
                "n", "expected_length", "length", "complete", "improving", "unique_moves", "local_optimum", "length_ok",
                "exhaustive_unique", "violations", "passed",
            ];
            let row = vec![
                report.n.to_string(),
                report.expected_length.to_string(),
                report.length.to_string(),
                report.complete.to_string(),
                report.improving.to_string(),
                report.unique_moves.to_string(),
                report.local_optimum.to_string(),
                report.length_ok.to_string(),
                report.exhaustive_unique.map_or("not_run".into(), |b| b.to_string()),
                report.violations.len().to_string(),
                report.passed().to_string(),
            ];
            output::write_atomic(&in_dir(&cfg, &format!("{stem}.csv")), &output::csv(&cfg, &header, &[row])?)?;
        }
    }
    println!(
        "G_{}: length {} (expected {}), {}",
        report.n,
        report.length,
        report.expected_length,
        if report.passed() { "all checks passed" } else { "FAILED" }
    );
    if let Some(v) = report.violations.first() {
        println!("first violation at step {}: {:?} {:?}", v.step, v.kind, v.vertices);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::verification(format!("G_{} certification failed", report.n)))
    }
}

#[derive(Args, Debug)]
struct SmoothHkArgs {
    #[arg(long)]
    k: usize,
    /// Star size (default 32(k+4)).
    #[arg(long)]
    nk: Option<usize>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    b: String,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// adaptive or faithful.
    #[arg(long, default_value = "adaptive")]
    mode: String,
    #[arg(long)]
    connectors: bool,
    #[command(flatten)]
    common: Common,
}

fn pool(jobs: Option<usize>) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError { code: crate::EXIT_RESOURCE, msg: format!("cannot start worker threads: {e}") })
}

#[derive(Serialize)]
struct SmoothSummary {
    trials: usize,
    setup_ok: usize,
    successes: usize,
    min_counter_len: Option<usize>,
    max_total_steps: usize,
}

fn smooth_hk(args: SmoothHkArgs) -> Result<(), CliError> {
    let nk = args.nk.unwrap_or_else(|| default_nk(args.k));
    let mode: SetupMode = args.mode.parse()?;
    let (a, b) = (weight(&args.a, "a")?, weight(&args.b, "b")?);
    if a >= b {
        return Err(CliError::invalid("--a must be below --b"));
    }
    if args.k == 0 || nk == 0 || args.trials == 0 {
        return Err(CliError::invalid("k, nk and trials must be positive"));
    }
    let cfg = args.common.config(
        Command::SmoothHk,
        params([
            ("k", Some(args.k.to_string())),
            ("nk", Some(nk.to_string())),
            ("a", Some(a.to_string())),
            ("b", Some(b.to_string())),
            ("trials", Some(args.trials.to_string())),
            ("mode", Some(format!("{mode:?}").to_lowercase())),
            ("connectors", Some(args.connectors.to_string())),
        ]),
    );
    let master = RngSeed::new(cfg.master_seed);
    let reports: Vec<TrialReport> = pool(args.common.jobs)?.install(|| {
        (0..args.trials)
            .into_par_iter()
            .map(|t| {
                smoothed_trial(&TrialParams {
                    k: args.k,
                    n_k: nk,
                    a: a.clone(),
                    b: b.clone(),
                    seed: master.child(t as u64),
                    mode,
                    connectors: args.connectors,
                })
            })
            .collect()
    });

    let summary = SmoothSummary {
        trials: reports.len(),
        setup_ok: reports.iter().filter(|r| r.setup_ok).count(),
        successes: reports.iter().filter(|r| r.success()).count(),
        min_counter_len: reports.iter().filter(|r| r.success()).map(|r| r.counter_len).min(),
        max_total_steps: reports.iter().map(|r| r.total_steps).max().unwrap_or(0),
    };
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                summary: &'a SmoothSummary,
                trials: &'a [TrialReport],
            }
            output::write_atomic(&in_dir(&cfg, "smooth-hk.json"), &output::json(&cfg, &Body { summary: &summary, trials: &reports })?)?;
        }
        Format::Csv => {
            let mut header = vec![
                "trial", "k", "n_k", "master_seed", "setup_ok", "max_deviation_num", "max_deviation_den", "counter_len",
                "total_steps", "success",
            ];
            if args.common.decimal {
                header.push("max_deviation");
            }
            let rows: Vec<Vec<String>> = reports
                .iter()
                .enumerate()
                .map(|(t, r)| {
                    let dev: Option<Rational> = r.max_deviation.as_deref().and_then(|s| s.parse().ok());
                    let (num, den) = dev.as_ref().map(parts).unwrap_or_default();
                    let mut row = vec![
                        t.to_string(),
                        args.k.to_string(),
                        nk.to_string(),
                        cfg.master_seed.to_string(),
                        r.setup_ok.to_string(),
                        num,
                        den,
                        r.counter_len.to_string(),
                        r.total_steps.to_string(),
                        r.success().to_string(),
                    ];
                    if args.common.decimal {
                        row.push(dev.as_ref().map(decimal).unwrap_or_default());
                    }
                    row
                })
                .collect();
            output::write_atomic(&in_dir(&cfg, "smooth-hk.csv"), &output::csv(&cfg, &header, &rows)?)?;
            output::write_atomic(&in_dir(&cfg, "smooth-hk-summary.json"), &output::json(&cfg, &summary)?)?;
        }
    }
    println!(
        "k = {}, n_k = {nk}: setup reached every target in {}/{} trials, {} certified",
        args.k, summary.setup_ok, summary.trials, summary.successes
    );
    // A tuned cut whose counter sequence fails would contradict the construction.
    if let Some((t, r)) = reports.iter().enumerate().find(|(_, r)| r.setup_ok && !r.success()) {
        return Err(CliError::verification(format!("trial {t}: counter sequence not certified ({:?})", r.error)));
    }
    Ok(())
}

#[derive(Args, Debug)]
struct EpsilonArgs {
    /// Comma-separated sample sizes.
    #[arg(long, value_delimiter = ',', default_value = "8,12,16,20,24")]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Values are drawn uniformly from [b, b+1].
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    b: String,
    #[command(flatten)]
    common: Common,
}

fn epsilon_study(args: EpsilonArgs) -> Result<(), CliError> {
    let b = weight(&args.b, "b")?;
    let n_list: Vec<String> = args.n_list.iter().map(ToString::to_string).collect();
    let cfg = args.common.config(
        Command::EpsilonStudy,
        params([
            ("n_list", Some(n_list.join(","))),
            ("trials", Some(args.trials.to_string())),
            ("b", Some(b.to_string())),
        ]),
    );
    let study = pool(args.common.jobs)?.install(|| epsilon_decay_study(&args.n_list, &b, args.trials, &RngSeed::new(cfg.master_seed)))?;

    #[derive(Serialize)]
    struct Row {
        n: usize,
        median: String,
        max: String,
        median_decimal: f64,
        values: Vec<String>,
    }
    #[derive(Serialize)]
    struct Body {
        slope: f64,
        rows: Vec<Row>,
    }
    let body = Body {
        slope: study.slope,
        rows: study
            .rows
            .iter()
            .map(|r| Row {
                n: r.n,
                median: r.median.to_string(),
                max: r.max.to_string(),
                median_decimal: rational_to_f64(&r.median),
                values: r.values.iter().map(ToString::to_string).collect(),
            })
            .collect(),
    };
    match cfg.format {
        Format::Json => output::write_atomic(&in_dir(&cfg, "epsilon-study.json"), &output::json(&cfg, &body)?)?,
        Format::Csv => {
            let mut header = vec!["n", "trial", "epsilon_num", "epsilon_den"];
            if args.common.decimal {
                header.push("epsilon");
            }
            let mut rows = Vec::new();
            for r in &study.rows {
                for (t, v) in r.values.iter().enumerate() {
                    let (num, den) = parts(v);
                    let mut row = vec![r.n.to_string(), t.to_string(), num, den];
                    if args.common.decimal {
                        row.push(decimal(v));
                    }
                    rows.push(row);
                }
            }
            output::write_atomic(&in_dir(&cfg, "epsilon-study.csv"), &output::csv(&cfg, &header, &rows)?)?;
            output::write_atomic(&in_dir(&cfg, "epsilon-study-summary.json"), &output::json(&cfg, &body)?)?;
        }
    }
    for r in &body.rows {
        println!("n = {:>2}: median epsilon {:.3e}", r.n, r.median_decimal);
    }
    println!("log2 slope {:.3}", study.slope);
    Ok(())
}

#[derive(Args, Debug)]
struct TwoFlipArgs {
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Largest graph size.
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    /// Largest independent set.
    #[arg(long, default_value_t = 5)]
    max_set: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Serialize)]
struct TwoFlipRow {
    trial: usize,
    n: usize,
    edges: usize,
    set: Vec<usize>,
    longest: usize,
    bound: usize,
    certificate_valid: bool,
    initial_tokens: usize,
    removed: usize,
    moved: usize,
}

fn two_flip_trial(seed: &RngSeed, trial: usize, max_n: usize, max_set: usize) -> Result<TwoFlipRow, CliError> {
    use rand::seq::SliceRandom;
    use rand::Rng;
    let mut rng = seed.child(tag::TWO_FLIP).child(trial as u64).rng();
    let n = rng.gen_range(2..=max_n);
    let (lo, hi) = (Weight::from_int(-1), Weight::from_int(1));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(0.5) {
                edges.push((u, v, sample_grid_weight(&mut rng, &lo, &hi)));
            }
        }
    }
    let g = WeightedGraph::new(n, edges)?;
    let sigma = Cut::new((0..n).map(|_| if rng.gen() { 1 } else { -1 }).collect())?;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut set = Vec::new();
    for v in order {
        if set.len() < max_set && set.iter().all(|&u| g.edge_between(u, v).is_none()) {
            set.push(v);
        }
    }
    set.sort_unstable();
    let (longest, seq) = two_flip_longest(&g, &sigma, &set)?;
    let cert = token_certificate(&g, &sigma, &set, &seq)?;
    Ok(TwoFlipRow {
        trial,
        n,
        edges: g.n_edges(),
        bound: set.len() * set.len(),
        set,
        longest,
        certificate_valid: cert.valid(),
        initial_tokens: cert.initial_tokens,
        removed: cert.removed,
        moved: cert.moved,
    })
}

fn two_flip_bound(args: TwoFlipArgs) -> Result<(), CliError> {
    if args.max_n < 2 {
        return Err(CliError::invalid("--max-n must be at least 2"));
    }
    let cfg = args.common.config(
        Command::TwoFlipBound,
        params([
            ("trials", Some(args.trials.to_string())),
            ("max_n", Some(args.max_n.to_string())),
            ("max_set", Some(args.max_set.to_string())),
        ]),
    );
    let seed = RngSeed::new(cfg.master_seed);
    let rows: Vec<TwoFlipRow> = pool(args.common.jobs)?.install(|| {
        (0..args.trials).into_par_iter().map(|t| two_flip_trial(&seed, t, args.max_n, args.max_set)).collect::<Result<_, _>>()
    })?;
    let violations = rows.iter().filter(|r| r.longest > r.bound || !r.certificate_valid).count();
    match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Body<'a> {
                violations: usize,
                trials: &'a [TwoFlipRow],
            }
            output::write_atomic(&in_dir(&cfg, "two-flip-bound.json"), &output::json(&cfg, &Body { violations, trials: &rows })?)?;
        }
        Format::Csv => {
            let header = [
                "trial", "n", "edges", "set_size", "longest", "bound", "certificate_valid", "initial_tokens", "removed", "moved",
            ];
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.trial.to_string(),
                        r.n.to_string(),
                        r.edges.to_string(),
                        r.set.len().to_string(),
                        r.longest.to_string(),
                        r.bound.to_string(),
                        r.certificate_valid.to_string(),
                        r.initial_tokens.to_string(),
                        r.removed.to_string(),
                        r.moved.to_string(),
                    ]
                })
                .collect();
            output::write_atomic(&in_dir(&cfg, "two-flip-bound.csv"), &output::csv(&cfg, &header, &table)?)?;
        }
    }
    let longest = rows.iter().map(|r| r.longest).max().unwrap_or(0);
    println!("{} trials, longest sequence {longest}, {violations} violations", rows.len());
    if violations > 0 {
        return Err(CliError::verification(format!("{violations} trials broke the |I|^2 bound or its certificate")));
    }
    Ok(())
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::RunFlip(a) => run_flip_cmd(a),
        Cmd::VerifyGn(a) => verify_gn_cmd(a),
        Cmd::SmoothHk(a) => smooth_hk(a),
        Cmd::EpsilonStudy(a) => epsilon_study(a),
        Cmd::TwoFlipBound(a) => two_flip_bound(a),
    }
}
