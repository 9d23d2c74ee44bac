use std::fs;
use std::path::Path;
use std::time::Instant;

use momentdist::baselines::{corpus_distance_matrix, Method, MethodParams};
use momentdist::distance_matrix::DistanceMatrix;
use momentdist::graph::generate_rewired;
use momentdist::learn::{
    cluster_distances, clustering_accuracy, kernel_from_distances, kernel_kmeans, knn_classify, ClusterOutcome,
    ExperimentReport, KMeansOptions, KnnOptions, LabeledCorpus,
};
use momentdist::metrics::{graph_moment_matrix, pairwise_from_moment_matrices, DistanceConfig, Scaling};
use momentdist::moments::{trace_moments, vector_state_moments};
use momentdist::spectral::{graph_spectral_measure, SpectralOptions};
use momentdist::Graph;
use serde::Serialize;
use serde_json::{Number, Value};

use crate::corpus::{expand_inputs, file_label, load_corpus, load_edge_list, load_named};
use crate::error::{CliError, CliResult};
use crate::manifest::{Recorder, RunManifest};
use crate::{
    BenchArgs, ClassifyArgs, ClusterArgs, DistanceArgs, GraphSource, IndexingArg, MatrixFormat, MethodArgs,
    MomentsArgs, PairwiseArgs, SpectrumArgs, StateArg,
};

fn emit(rec: &Recorder, out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::io(path, e))?;
            rec.write_sidecar(path)
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_source(rec: &mut Recorder, src: &GraphSource, indexing: IndexingArg) -> CliResult<Graph> {
    match (&src.named, &src.input) {
        (Some(n), _) => load_named(n),
        (None, Some(p)) => load_edge_list(rec, p, indexing.into()),
        (None, None) => Err(CliError::config("one of --named or --input is required")),
    }
}

/// Integral values print without a fractional part.
fn json_number(x: f64) -> Value {
    if x.fract() == 0.0 && x.abs() < 9.0e15 {
        Value::from(x as i64)
    } else {
        Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
    }
}

fn distance_config(d: &DistanceArgs) -> DistanceConfig {
    DistanceConfig {
        degree: d.degree,
        metric: d.metric,
        eps: d.reg,
        scaling: d.scale,
    }
}

fn method_params(m: &MethodArgs, seed: u64) -> MethodParams {
    MethodParams {
        moment: distance_config(&m.distance),
        cov_order: m.cov_order,
        cov_center: true,
        cov_jitter: m.cov_jitter,
        eigs_k: m.eigs_k,
        gk4_samples: m.gk4_samples,
        seed,
    }
}

/// Distance matrix of a corpus under any method. Moment distances apply
/// the scaling per pair; baseline distances are scaled afterwards.
fn method_distances(gs: &[Graph], labels: Vec<String>, m: &MethodArgs, seed: u64) -> CliResult<DistanceMatrix> {
    let params = method_params(m, seed);
    params.moment.validate()?;
    let d = corpus_distance_matrix(gs, labels, m.method, &params)?;
    if m.method == Method::Moment || m.distance.scale == Scaling::None {
        Ok(d)
    } else {
        Ok(d.map(|x| m.distance.scale.apply(x))?)
    }
}

pub fn moments(a: &MomentsArgs) -> CliResult<()> {
    let mut rec = Recorder::new("moments", a)?;
    let g = load_source(&mut rec, &a.source, a.indexing)?;
    let ms = rec.time("moments", || match a.state {
        StateArg::Vector => vector_state_moments(&g, a.order),
        StateArg::Trace => trace_moments(&g, a.order),
    })?;
    let out = serde_json::json!({
        "values": ms.values().iter().map(|&x| json_number(x)).collect::<Vec<_>>(),
    });
    emit(&rec, a.out.as_deref(), &(serde_json::to_string(&out)? + "\n"))
}

pub fn pairwise(a: &PairwiseArgs) -> CliResult<()> {
    let mut rec = Recorder::new("pairwise", a)?;
    rec.seed(a.seed);
    let mut graphs = Vec::new();
    let mut labels = Vec::new();
    for n in &a.named {
        graphs.push(load_named(n)?);
        labels.push(n.clone());
    }
    for p in expand_inputs(&a.inputs)? {
        graphs.push(load_edge_list(&mut rec, &p, a.indexing.into())?);
        labels.push(file_label(&p));
    }
    if graphs.is_empty() {
        return Err(CliError::config("no input graphs"));
    }
    let d = if graphs.len() == 1 {
        DistanceMatrix::from_pairs(labels, |_, _| Ok(0.0))?
    } else {
        rec.time("distances", || method_distances(&graphs, labels, &a.method, a.seed))?
    };
    let format = a.format.unwrap_or(match a.out.as_ref().and_then(|p| p.extension()) {
        Some(ext) if ext == "json" => MatrixFormat::Json,
        _ => MatrixFormat::Csv,
    });
    let text = match format {
        MatrixFormat::Csv => d.to_csv(),
        MatrixFormat::Json => d.to_json()? + "\n",
    };
    emit(&rec, a.out.as_deref(), &text)
}

#[derive(Serialize)]
struct ReportFile<'a> {
    #[serde(flatten)]
    report: &'a ExperimentReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    assignment: Option<&'a [usize]>,
    names: &'a [String],
    labels: &'a [usize],
    manifest: &'a RunManifest,
}

fn write_report(
    rec: &Recorder,
    report: &ExperimentReport,
    assignment: Option<&[usize]>,
    corpus: &LabeledCorpus,
    out: Option<&Path>,
) -> CliResult<()> {
    let file = ReportFile {
        report,
        assignment,
        names: &corpus.names,
        labels: &corpus.labels,
        manifest: &rec.manifest,
    };
    emit(rec, out, &(serde_json::to_string_pretty(&file)? + "\n"))
}

pub fn cluster(a: &ClusterArgs) -> CliResult<()> {
    let mut rec = Recorder::new("cluster", a)?;
    rec.seed(a.seed);
    let start = Instant::now();
    let corpus = load_corpus(&mut rec, &a.corpus, a.indexing.into())?;
    rec.record("load", start.elapsed());
    let d = rec.time("distances", || {
        method_distances(&corpus.graphs, corpus.names.clone(), &a.method, a.seed)
    })?;
    let k = a.clusters.unwrap_or_else(|| corpus.class_count());
    let opts = KMeansOptions {
        restarts: a.restarts,
        max_iter: a.max_iter,
        seed: a.seed,
    };
    let outcome = rec.time("cluster", || {
        if k == corpus.class_count() {
            cluster_distances(&d, &corpus.labels, &opts)
        } else {
            cluster_with_k(&d, &corpus.labels, k, &opts)
        }
    })?;
    let report = ExperimentReport {
        task: "cluster".into(),
        method: a.method.method.name().into(),
        params: serde_json::json!({
            "method": method_params(&a.method, a.seed),
            "kmeans": { "clusters": k, "restarts": a.restarts, "max_iter": a.max_iter, "seed": a.seed },
            "objective": outcome.objective,
        }),
        accuracy_mean: outcome.accuracy,
        accuracy_std: 0.0,
        per_fold: vec![outcome.accuracy],
    };
    write_report(&rec, &report, Some(&outcome.assignment), &corpus, a.out.as_deref())
}

/// Clusters into `k` groups when `k` differs from the class count; accuracy
/// is still measured against the true classes.
fn cluster_with_k(
    d: &DistanceMatrix,
    labels: &[usize],
    k: usize,
    opts: &KMeansOptions,
) -> momentdist::Result<ClusterOutcome> {
    let r = kernel_kmeans(&kernel_from_distances(d), k, opts)?;
    Ok(ClusterOutcome {
        accuracy: clustering_accuracy(&r.assignment, labels)?,
        assignment: r.assignment,
        objective: r.objective,
    })
}

pub fn classify(a: &ClassifyArgs) -> CliResult<()> {
    let mut rec = Recorder::new("classify", a)?;
    rec.seed(a.seed);
    let start = Instant::now();
    let corpus = load_corpus(&mut rec, &a.corpus, a.indexing.into())?;
    rec.record("load", start.elapsed());
    let d = rec.time("distances", || {
        method_distances(&corpus.graphs, corpus.names.clone(), &a.method, a.seed)
    })?;
    let opts = KnnOptions {
        k: a.k,
        folds: a.folds,
        seed: a.seed,
    };
    let r = rec.time("classify", || knn_classify(&d, &corpus.labels, &opts))?;
    let report = ExperimentReport {
        task: "classify".into(),
        method: a.method.method.name().into(),
        params: serde_json::json!({
            "method": method_params(&a.method, a.seed),
            "knn": { "k": a.k, "folds": a.folds, "seed": a.seed, "stratified": r.stratified },
        }),
        accuracy_mean: r.accuracy_mean,
        accuracy_std: r.accuracy_std,
        per_fold: r.per_fold,
    };
    write_report(&rec, &report, None, &corpus, a.out.as_deref())
}

pub fn spectrum(a: &SpectrumArgs) -> CliResult<()> {
    let mut rec = Recorder::new("spectrum", a)?;
    let g = load_source(&mut rec, &a.source, a.indexing)?;
    let mu = rec.time("spectrum", || graph_spectral_measure(&g, &SpectralOptions::default()))?;
    emit(&rec, a.out.as_deref(), &mu.to_csv())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

pub fn bench(a: &BenchArgs) -> CliResult<()> {
    if a.count == 0 || a.repeats == 0 {
        return Err(CliError::config("--count and --repeats must be at least 1"));
    }
    let cfg = distance_config(&a.distance);
    cfg.validate()?;
    let mut rec = Recorder::new("bench", a)?;
    rec.seed(a.seed);
    let mut table = String::from("nv,ne,count,pairs,moment_seconds,pairwise_seconds\n");
    for (s, size) in a.sizes.iter().enumerate() {
        let base = a.seed.wrapping_add((s * a.count) as u64);
        let graphs = (0..a.count)
            .map(|i| generate_rewired(size.nv, size.ne, a.rho, base.wrapping_add(i as u64)))
            .collect::<momentdist::Result<Vec<_>>>()?;
        let mut moment_times = Vec::new();
        let mut pair_times = Vec::new();
        let labels: Vec<String> = (0..a.count).map(|i| format!("g{i}")).collect();
        for _ in 0..a.repeats {
            let start = Instant::now();
            let mats = graphs
                .iter()
                .map(|g| graph_moment_matrix(g, cfg.degree))
                .collect::<momentdist::Result<Vec<_>>>()?;
            moment_times.push(start.elapsed().as_secs_f64());
            let start = Instant::now();
            let d = pairwise_from_moment_matrices(&mats, labels.clone(), &cfg)?;
            std::hint::black_box(&d);
            pair_times.push(start.elapsed().as_secs_f64());
        }
        let pairs = a.count * (a.count - 1) / 2;
        table.push_str(&format!(
            "{},{},{},{},{:.6},{:.6}\n",
            size.nv,
            size.ne,
            a.count,
            pairs,
            median(moment_times),
            median(pair_times)
        ));
    }
    emit(&rec, a.out.as_deref(), &table)
}
