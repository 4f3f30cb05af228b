//! The `eapcluster` command line: `cluster`, `localview`, `eval`, `gen` and
//! `suggest`.
//!
//! Exit codes: 0 success, 2 usage error, 3 input error, 4 overflowed
//! messages or, under `--strict`, no convergence.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::ap::{ap_decide, ap_run};
use crate::decision::{decide, ClusteringResult};
use crate::document::{
    Grid, InputSpec, LocalViewTables, Mode, Real, ResultDocument, RunConfig, SweepGrids, SweepRow,
};
use crate::eap::eap_run;
use crate::error::Error;
use crate::ingest::{
    build_neighborhoods, load_points, load_similarity, similarity_from_points, suggest_epsilon,
    suggest_q, EngineParams, Generator, SimilarityMatrix,
};
use crate::localview::{pair_strengths, prune};
use crate::metrics::{contingency, score, score_labels, ScoreTriple};
use crate::msg::ConvergenceStatus;
use crate::shape::shape_run;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Input(#[from] Error),
    #[error("engine did not converge")]
    NotConverged,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(Error::InvalidParam(_) | Error::UnknownGenerator(_)) => 2,
            CliError::Input(Error::Diverged(_)) | CliError::NotConverged => 4,
            CliError::Input(_) => 3,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Debug, Parser)]
#[command(
    name = "eapcluster",
    version,
    about = "Exemplar-based clustering (AP, EAP, SHAPE)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Cluster a data set and write a result document.
    Cluster(ClusterArgs),
    /// Exemplar-count and pair-strength tables, optionally pruning.
    Localview(LocalviewArgs),
    /// Score a result document against ground truth.
    Eval(EvalArgs),
    /// Write a synthetic data set.
    Gen(GenArgs),
    /// Suggest q and epsilon from similarity percentiles.
    Suggest(SuggestArgs),
}

#[derive(Debug, Clone, Args)]
#[group(id = "input", required = true, multiple = false, args = ["points", "similarity", "generate"])]
pub struct InputArgs {
    /// Points file, one point per row.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Square similarity matrix file.
    #[arg(long)]
    pub similarity: Option<PathBuf>,
    /// Generator spec, e.g. `half-moons:n=800;noise=0.05`.
    #[arg(long)]
    pub generate: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ClusterArgs {
    #[arg(long, value_enum, default_value_t = Mode::Ap)]
    pub mode: Mode,
    #[command(flatten)]
    pub input: InputArgs,
    /// Zero-based column holding integer labels.
    #[arg(long)]
    pub label_col: Option<usize>,
    /// Preference on the diagonal; defaults to the median similarity.
    #[arg(long, allow_hyphen_values = true)]
    pub preference: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "percentile_q")]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "percentile_eps")]
    pub epsilon: Option<f64>,
    /// Second-layer preference (shape mode).
    #[arg(long, allow_hyphen_values = true)]
    pub p2: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    pub damping: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 25)]
    pub conv_window: usize,
    #[arg(long, allow_hyphen_values = true, value_name = "LO:HI:STEPS")]
    pub sweep_preference: Option<Grid>,
    #[arg(long, allow_hyphen_values = true, value_name = "LO:HI:STEPS")]
    pub sweep_q: Option<Grid>,
    #[arg(long, allow_hyphen_values = true, value_name = "LO:HI:STEPS")]
    pub sweep_epsilon: Option<Grid>,
    #[arg(long, allow_hyphen_values = true, value_name = "LO:HI:STEPS")]
    pub sweep_p2: Option<Grid>,
    /// q = minus this percentile of the off-diagonal similarities.
    #[arg(long)]
    pub percentile_q: Option<f64>,
    /// epsilon = this percentile of the off-diagonal similarities.
    #[arg(long)]
    pub percentile_eps: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Attach local-view tables with this fanout.
    #[arg(long)]
    pub fanout: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Exit with code 4 when any engine layer fails to converge.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Clone, Args)]
pub struct LocalviewArgs {
    /// Result document written by `cluster`.
    #[arg(long)]
    pub result: PathBuf,
    #[arg(long, default_value_t = 3)]
    pub fanout: usize,
    /// Prune exemplar pairs sharing fewer than this many points.
    #[arg(long)]
    pub prune: Option<usize>,
    /// Directory for `exemplar_counts.tsv`, `pair_strengths.tsv` and
    /// `pruned.json`; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Reload points from here instead of the path in the document.
    #[arg(long, conflicts_with = "similarity")]
    pub points: Option<PathBuf>,
    #[arg(long)]
    pub similarity: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub result: PathBuf,
    /// Ground truth: one line of cluster ids per point, or a points file
    /// together with `--label-col`.
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long)]
    pub label_col: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    /// `blobs` or `half-moons`, optionally followed by `:key=value;...`.
    pub generator: String,
    /// Points (half-moons) or points per blob (blobs).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub noise: Option<f64>,
    /// Blob centers, `x,y|x,y|...`.
    #[arg(long, allow_hyphen_values = true)]
    pub centers: Option<String>,
    /// Blob standard deviations, `s|s|...`.
    #[arg(long)]
    pub stddevs: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SuggestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub label_col: Option<usize>,
    #[arg(long, default_value_t = 95.0)]
    pub percentile_q: f64,
    #[arg(long, default_value_t = 95.0)]
    pub percentile_eps: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Data ready for clustering: similarities with a zero diagonal plus the
/// labels, when known.
#[derive(Debug, Clone)]
pub struct LoadedInput {
    pub spec: InputSpec,
    pub similarity: SimilarityMatrix,
    pub labels: Option<Vec<i64>>,
}

impl InputArgs {
    pub fn to_spec(&self, label_col: Option<usize>, seed: u64) -> CliResult<InputSpec> {
        if let Some(p) = &self.points {
            return Ok(InputSpec::Points {
                path: p.display().to_string(),
                label_column: label_col,
            });
        }
        if label_col.is_some() {
            return Err(usage("--label-col only applies to --points"));
        }
        if let Some(p) = &self.similarity {
            return Ok(InputSpec::Similarity {
                path: p.display().to_string(),
            });
        }
        let spec = self
            .generate
            .as_deref()
            .ok_or_else(|| usage("no input given"))?;
        let g: Generator = spec.parse()?;
        Ok(InputSpec::Generator {
            spec: g.to_string(),
            seed,
        })
    }
}

pub fn load_input(spec: &InputSpec) -> crate::Result<LoadedInput> {
    let (similarity, labels) = match spec {
        InputSpec::Points { path, label_column } => {
            let ps = load_points(path, *label_column)?;
            let labels = ps.labels().map(<[i64]>::to_vec);
            (similarity_from_points(&ps, 0.0), labels)
        }
        InputSpec::Similarity { path } => (load_similarity(path)?.with_preference(0.0), None),
        InputSpec::Generator { spec, seed } => {
            let ps = spec.parse::<Generator>()?.generate(*seed)?;
            let labels = ps.labels().map(<[i64]>::to_vec);
            (similarity_from_points(&ps, 0.0), labels)
        }
    };
    Ok(LoadedInput {
        spec: spec.clone(),
        similarity,
        labels,
    })
}

/// Runs one engine and its decision step on `s`, whose diagonal already
/// carries the preference. Returns one convergence status per layer.
pub fn run_engine(
    mode: Mode,
    s: &SimilarityMatrix,
    params: &EngineParams,
) -> crate::Result<(ClusteringResult, Vec<ConvergenceStatus>)> {
    match mode {
        Mode::Ap => {
            let (b, st) = ap_run(s, params)?;
            Ok((ap_decide(s, &b), vec![st]))
        }
        Mode::Eap => {
            let nbr = build_neighborhoods(s, params.epsilon);
            let (b, st) = eap_run(s, &nbr, params)?;
            Ok((decide(s, &b), vec![st]))
        }
        Mode::Shape => {
            let r = shape_run(s, params)?;
            Ok((r.final_result, vec![r.layer1_status, r.layer2_status]))
        }
    }
}

struct GridPoint {
    preference: f64,
    q: f64,
    epsilon: f64,
    p2: f64,
    /// Position along each swept axis.
    coords: [usize; 4],
}

struct Outcome {
    result: ClusteringResult,
    convergence: Vec<ConvergenceStatus>,
    scores: Option<ScoreTriple>,
}

fn axis(grid: Option<Grid>, fixed: f64) -> Vec<f64> {
    grid.map(|g| g.values()).unwrap_or_else(|| vec![fixed])
}

/// Index of the grid point whose cluster count agrees with the most of its
/// ±1 neighbors along any single axis; first in grid order on ties. Points
/// without a result (`None`) are never chosen and never agree.
fn most_stable(points: &[GridPoint], clusters: &[Option<usize>]) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (a, pa) in points.iter().enumerate() {
        let Some(k) = clusters[a] else { continue };
        let agree = points
            .iter()
            .zip(clusters)
            .filter(|(pb, kb)| {
                let dist: usize = (0..4).map(|d| pa.coords[d].abs_diff(pb.coords[d])).sum();
                dist == 1 && **kb == Some(k)
            })
            .count();
        if best.is_none_or(|(_, b)| agree > b) {
            best = Some((a, agree));
        }
    }
    best.map(|(a, _)| a)
}

/// Builds the result document for `cluster`, running every sweep point.
pub fn cmd_cluster(args: &ClusterArgs) -> CliResult<ResultDocument> {
    let spec = args.input.to_spec(args.label_col, args.seed)?;
    let input = load_input(&spec)?;
    let base = &input.similarity;

    if args.mode == Mode::Eap
        && args.epsilon.is_none()
        && args.percentile_eps.is_none()
        && args.sweep_epsilon.is_none()
    {
        return Err(usage(
            "--mode eap needs --epsilon, --percentile-eps or --sweep-epsilon",
        ));
    }
    if args.mode == Mode::Shape && args.p2.is_none() && args.sweep_p2.is_none() {
        return Err(usage("--mode shape needs --p2 or --sweep-p2"));
    }
    if args.mode == Mode::Ap
        && (args.q.is_some()
            || args.percentile_q.is_some()
            || args.sweep_q.is_some()
            || args.epsilon.is_some()
            || args.percentile_eps.is_some()
            || args.sweep_epsilon.is_some())
    {
        return Err(usage("--mode ap takes no q or epsilon"));
    }
    if args.mode != Mode::Shape && (args.p2.is_some() || args.sweep_p2.is_some()) {
        return Err(usage("--p2 only applies to --mode shape"));
    }
    if args.mode == Mode::Shape
        && (args.epsilon.is_some() || args.percentile_eps.is_some() || args.sweep_epsilon.is_some())
    {
        return Err(usage("--mode shape takes no epsilon"));
    }

    let preference = match args.preference {
        Some(p) => p,
        None => base.median_off_diagonal().ok_or(Error::TooFewPoints {
            needed: 2,
            got: base.n(),
        })?,
    };
    let q = match (args.q, args.percentile_q) {
        (Some(q), _) => q,
        (None, Some(x)) => suggest_q(base, x)?,
        (None, None) => f64::NEG_INFINITY,
    };
    let epsilon = match (args.epsilon, args.percentile_eps) {
        (Some(e), _) => e,
        (None, Some(x)) => suggest_epsilon(base, x)?,
        (None, None) => f64::INFINITY,
    };
    let p2 = args.p2.unwrap_or(0.0);

    let grids = SweepGrids {
        preference: args.sweep_preference,
        q: args.sweep_q,
        epsilon: args.sweep_epsilon,
        p2: args.sweep_p2,
    };
    let mut points = Vec::new();
    for (a, &pv) in axis(grids.preference, preference).iter().enumerate() {
        for (b, &qv) in axis(grids.q, q).iter().enumerate() {
            for (c, &ev) in axis(grids.epsilon, epsilon).iter().enumerate() {
                for (d, &p2v) in axis(grids.p2, p2).iter().enumerate() {
                    points.push(GridPoint {
                        preference: pv,
                        q: qv,
                        epsilon: ev,
                        p2: p2v,
                        coords: [a, b, c, d],
                    });
                }
            }
        }
    }

    let params_at = |g: &GridPoint| EngineParams {
        preference: g.preference,
        q: g.q,
        epsilon: g.epsilon,
        p2: g.p2,
        damping: args.damping,
        max_iters: args.max_iters,
        convergence_window: args.conv_window,
    };
    params_at(&points[0]).validate()?;
    if args.mode == Mode::Shape && points.iter().any(|g| g.p2 > g.preference) {
        eprintln!("warning: p2 exceeds the first-layer preference");
    }

    let runs: Vec<crate::Result<Outcome>> = points
        .par_iter()
        .map(|g| -> crate::Result<Outcome> {
            let s = base.clone().with_preference(g.preference);
            let (result, convergence) = run_engine(args.mode, &s, &params_at(g))?;
            let scores = match &input.labels {
                Some(l) => Some(score_labels(l, &result.cluster_ids)?),
                None => None,
            };
            Ok(Outcome {
                result,
                convergence,
                scores,
            })
        })
        .collect();
    // an overflowing point only drops out of a sweep; anything else aborts
    let mut outcomes = Vec::with_capacity(runs.len());
    let mut first_divergence = None;
    for run in runs {
        match run {
            Ok(o) => outcomes.push(Ok(o)),
            Err(e @ Error::Diverged(_)) => {
                outcomes.push(Err(e.to_string()));
                first_divergence.get_or_insert(e);
            }
            Err(e) => return Err(e.into()),
        }
    }

    let best = if input.labels.is_some() {
        let mut best: Option<usize> = None;
        for (k, o) in outcomes.iter().enumerate() {
            let Ok(o) = o else { continue };
            let acc = o.scores.unwrap().accuracy;
            if best.is_none_or(|b| acc > outcomes[b].as_ref().unwrap().scores.unwrap().accuracy) {
                best = Some(k);
            }
        }
        best
    } else {
        let clusters: Vec<Option<usize>> = outcomes
            .iter()
            .map(|o| o.as_ref().ok().map(|o| o.result.n_clusters()))
            .collect();
        most_stable(&points, &clusters)
    };
    let Some(best) = best else {
        return Err(first_divergence.expect("every point failed").into());
    };

    let g = &points[best];
    let config = RunConfig {
        mode: args.mode,
        input: spec,
        preference: Real(g.preference),
        q: Real(if args.mode == Mode::Ap {
            f64::NEG_INFINITY
        } else {
            g.q
        }),
        epsilon: (args.mode == Mode::Eap).then_some(Real(g.epsilon)),
        p2: (args.mode == Mode::Shape).then_some(Real(g.p2)),
        damping: args.damping,
        max_iters: args.max_iters,
        convergence_window: args.conv_window,
        percentile_q: args.percentile_q,
        percentile_eps: args.percentile_eps,
        sweep: (!grids.is_empty()).then_some(grids.clone()),
        seed: args.seed,
    };
    let chosen = outcomes[best].as_ref().expect("best point has a result");
    let mut doc = ResultDocument::new(config, &chosen.result, chosen.convergence.clone());
    doc.scores = chosen.scores;
    if let Some(m) = args.fanout {
        let s = base.clone().with_preference(g.preference);
        let report = pair_strengths(&chosen.result, &s, m);
        doc.local_view = Some(LocalViewTables::build(&chosen.result, &report, m));
    }
    if !grids.is_empty() {
        doc.sweep = Some(
            points
                .iter()
                .zip(&outcomes)
                .map(|(g, o)| SweepRow {
                    preference: Real(g.preference),
                    q: Real(g.q),
                    epsilon: (args.mode == Mode::Eap).then_some(Real(g.epsilon)),
                    p2: (args.mode == Mode::Shape).then_some(Real(g.p2)),
                    n_clusters: o.as_ref().map_or(0, |o| o.result.n_clusters()),
                    n_exemplars: o.as_ref().map_or(0, |o| o.result.exemplars.len()),
                    converged: o
                        .as_ref()
                        .is_ok_and(|o| o.convergence.iter().all(|c| c.converged)),
                    accuracy: o.as_ref().ok().and_then(|o| o.scores.map(|s| s.accuracy)),
                    error: o.as_ref().err().cloned(),
                })
                .collect(),
        );
    }
    Ok(doc)
}

fn write_or_print(out: Option<&Path>, text: &str) -> crate::Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Similarities for a stored document, preference applied.
fn rebuild_similarity(doc: &ResultDocument, args: &LocalviewArgs) -> crate::Result<LoadedInput> {
    let spec = match (&args.points, &args.similarity, &doc.config.input) {
        (Some(p), _, InputSpec::Points { label_column, .. }) => InputSpec::Points {
            path: p.display().to_string(),
            label_column: *label_column,
        },
        (Some(p), _, _) => InputSpec::Points {
            path: p.display().to_string(),
            label_column: None,
        },
        (None, Some(p), _) => InputSpec::Similarity {
            path: p.display().to_string(),
        },
        (None, None, spec) => spec.clone(),
    };
    let mut input = load_input(&spec)?;
    if input.similarity.n() != doc.n_points {
        return Err(Error::PointCountMismatch(
            input.similarity.n(),
            doc.n_points,
        ));
    }
    input.similarity.set_preference(doc.config.preference.0);
    Ok(input)
}

/// Local-view tables for a stored result, plus the pruned document when
/// `--prune` is given.
pub fn cmd_localview(args: &LocalviewArgs) -> CliResult<(LocalViewTables, Option<ResultDocument>)> {
    let doc = ResultDocument::read(&args.result)?;
    let h = doc.assignment_matrix()?;
    let input = rebuild_similarity(&doc, args)?;
    let s = &input.similarity;
    let res = ClusteringResult::from_assignment(s, h)?;
    let report = pair_strengths(&res, s, args.fanout);
    let tables = LocalViewTables::build(&res, &report, args.fanout);

    let pruned = match args.prune {
        None => None,
        Some(nt) => {
            let p = prune(&res, s, nt)?;
            let mut pd = ResultDocument::new(doc.config.clone(), &p, doc.convergence.clone());
            pd.pruned_with = Some(nt);
            if let Some(l) = &input.labels {
                pd.scores = Some(score_labels(l, &p.cluster_ids)?);
            }
            let rep = pair_strengths(&p, s, args.fanout);
            pd.local_view = Some(LocalViewTables::build(&p, &rep, args.fanout));
            Some(pd)
        }
    };
    Ok((tables, pruned))
}

/// Per-point truth membership sets: either a labelled points file or one
/// line of integer ids per point.
pub fn read_truth(path: &Path, label_col: Option<usize>) -> crate::Result<Vec<BTreeSet<i64>>> {
    if let Some(c) = label_col {
        let ps = load_points(path, Some(c))?;
        return Ok(ps
            .labels()
            .unwrap_or_default()
            .iter()
            .map(|&l| BTreeSet::from([l]))
            .collect());
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (row, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ids = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<i64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    row: row + 1,
                    message: format!("bad cluster id `{t}`"),
                })
            })
            .collect::<crate::Result<BTreeSet<i64>>>()?;
        out.push(ids);
    }
    Ok(out)
}

pub fn cmd_eval(args: &EvalArgs) -> CliResult<ScoreTriple> {
    let doc = ResultDocument::read(&args.result)?;
    let truth = read_truth(&args.truth, args.label_col)?;
    if truth.len() != doc.n_points {
        return Err(Error::PointCountMismatch(truth.len(), doc.n_points).into());
    }
    let est: Vec<BTreeSet<i64>> = doc
        .cluster_ids
        .iter()
        .map(|&c| BTreeSet::from([c as i64]))
        .collect();
    Ok(score(&contingency(&truth, &est)?)?)
}

pub fn cmd_gen(args: &GenArgs) -> CliResult<String> {
    let mut g: Generator = args.generator.parse()?;
    if let Some(n) = args.n {
        g.set("n", &n.to_string())?;
    }
    if let Some(v) = args.noise {
        g.set("noise", &v.to_string())?;
    }
    if let Some(v) = &args.centers {
        g.set("centers", v)?;
    }
    if let Some(v) = &args.stddevs {
        g.set("stddevs", v)?;
    }
    Ok(g.generate(args.seed)?.to_text())
}

/// `(q, epsilon)` suggestions.
pub fn cmd_suggest(args: &SuggestArgs) -> CliResult<(f64, f64)> {
    let spec = args.input.to_spec(args.label_col, args.seed)?;
    let input = load_input(&spec)?;
    Ok((
        suggest_q(&input.similarity, args.percentile_q)?,
        suggest_epsilon(&input.similarity, args.percentile_eps)?,
    ))
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Cluster(a) => {
            let doc = cmd_cluster(&a)?;
            write_or_print(a.out.as_deref(), &doc.to_json()?)?;
            if a.strict && !doc.converged() {
                return Err(CliError::NotConverged);
            }
        }
        Command::Localview(a) => {
            let (tables, pruned) = cmd_localview(&a)?;
            match &a.out {
                Some(dir) => {
                    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
                    write_or_print(Some(&dir.join("exemplar_counts.tsv")), &tables.counts_tsv())?;
                    write_or_print(Some(&dir.join("pair_strengths.tsv")), &tables.pairs_tsv())?;
                    if let Some(p) = pruned {
                        write_or_print(Some(&dir.join("pruned.json")), &p.to_json()?)?;
                    }
                }
                None => {
                    print!("{}\n{}", tables.counts_tsv(), tables.pairs_tsv());
                    if let Some(p) = pruned {
                        print!("\n{}", p.to_json()?);
                    }
                }
            }
        }
        Command::Eval(a) => {
            let sc = cmd_eval(&a)?;
            println!(
                "sn {:.6}\nppv {:.6}\naccuracy {:.6}",
                sc.sn, sc.ppv, sc.accuracy
            );
        }
        Command::Gen(a) => {
            let text = cmd_gen(&a)?;
            write_or_print(a.out.as_deref(), &text)?;
        }
        Command::Suggest(a) => {
            let (q, eps) = cmd_suggest(&a)?;
            println!("q {q:?}\nepsilon {eps:?}");
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("eapcluster").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn minus_infinity_parses() {
        let cli = parse(&[
            "cluster",
            "--mode",
            "eap",
            "--generate",
            "blobs",
            "--q",
            "-inf",
            "--epsilon",
            "inf",
        ]);
        let Command::Cluster(a) = cli.command else {
            panic!()
        };
        assert_eq!(a.q, Some(f64::NEG_INFINITY));
        assert_eq!(a.epsilon, Some(f64::INFINITY));
        assert_eq!(a.damping, 0.5);
        assert_eq!((a.max_iters, a.conv_window), (1000, 25));
    }

    #[test]
    fn input_is_required_and_exclusive() {
        let none = Cli::try_parse_from(["eapcluster", "cluster"]);
        assert!(none.is_err());
        let both = Cli::try_parse_from([
            "eapcluster",
            "cluster",
            "--points",
            "a",
            "--similarity",
            "b",
        ]);
        assert!(both.is_err());
    }

    #[test]
    fn eap_without_epsilon_is_usage_error() {
        let Command::Cluster(a) =
            parse(&["cluster", "--mode", "eap", "--generate", "blobs:n=5"]).command
        else {
            panic!()
        };
        let e = cmd_cluster(&a).unwrap_err();
        assert_eq!(e.exit_code(), 2);
    }

    #[test]
    fn stability_prefers_agreeing_neighbors() {
        let pts: Vec<GridPoint> = (0..5)
            .map(|k| GridPoint {
                preference: k as f64,
                q: 0.0,
                epsilon: 0.0,
                p2: 0.0,
                coords: [k, 0, 0, 0],
            })
            .collect();
        let some = |v: [usize; 5]| v.map(Some);
        assert_eq!(most_stable(&pts, &some([5, 4, 3, 3, 3])), Some(3));
        assert_eq!(most_stable(&pts, &some([1, 2, 3, 4, 5])), Some(0));
        assert_eq!(
            most_stable(&pts, &[None, Some(2), None, None, None]),
            Some(1)
        );
        assert_eq!(most_stable(&pts, &[None; 5]), None);
    }
}
