use std::fmt;
use std::fs;

use anyhow::{Context, Result};
use graphsw_core::codec::{CodeParams, SimSummary, Simulator, TrialRecord};
use graphsw_core::ensembles::{parse_model_config, sample_model, Model};
use graphsw_core::entropy::{bc_entropy, exact_shannon_er, rate_region_contains, ConstraintCheck, RateTuple};
use graphsw_core::local_weak::{dist_tv, empirical_u, er_limit_law, sample_gw_law, NeighborhoodDist};
use graphsw_core::marked_graph::{joint_counts, serialize_graph};
use graphsw_core::oracles::{run_suite, Suite};
use graphsw_core::rng::SeedStream;
use rayon::prelude::*;
use serde::Serialize;

use crate::cli::{Cli, CodecSimArgs, Command, EntropyArgs, Format, LwcArgs, ModelArg, RateRegionArgs, SampleArgs};
use crate::output::Sink;
use crate::sweep::parse_sweep;

/// A request that is malformed rather than a computation that failed.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

fn load_model(arg: &ModelArg) -> Result<Model> {
    let text = fs::read_to_string(&arg.config).with_context(|| format!("cannot read {}", arg.config.display()))?;
    parse_model_config(&text).with_context(|| format!("in {}", arg.config.display()))
}

fn tuple(text: &str) -> Result<RateTuple> {
    RateTuple::parse(text).map_err(|e| UsageError(e.to_string()).into())
}

fn sweep(spec: &str) -> Result<Vec<usize>> {
    parse_sweep(spec).map_err(|e| UsageError(format!("{e:#}")).into())
}

struct Ctx {
    seed: u64,
    format: Option<Format>,
    pool: rayon::ThreadPool,
}

impl Ctx {
    fn format(&self, sweeping: bool) -> Format {
        self.format.unwrap_or(if sweeping { Format::Csv } else { Format::Json })
    }
}

/// Runs one subcommand. `Ok(false)` means the command ran but reported failure.
pub fn run(cli: Cli) -> Result<bool> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build()?;
    let ctx = Ctx { seed: cli.seed, format: cli.format, pool };
    let mut out = Sink::open(cli.out.as_deref())?;
    let ok = match &cli.command {
        Command::Sample(a) => sample(&ctx, a, &mut out).map(|_| true),
        Command::Entropy(a) => entropy(&ctx, a, &mut out).map(|_| true),
        Command::RateRegion(a) => region(&ctx, a, &mut out).map(|_| true),
        Command::CodecSim(a) => codec_sim(&ctx, a, &mut out).map(|_| true),
        Command::LwcDist(a) => lwc(&ctx, a, &mut out).map(|_| true),
        Command::Verify(a) => {
            let suite: Suite = a.suite.parse().map_err(|e: graphsw_core::Error| UsageError(e.to_string()))?;
            let report = run_suite(suite, ctx.seed);
            match ctx.format(false) {
                Format::Json => out.json(&report)?,
                Format::Csv => out.csv(&report.checks)?,
            }
            Ok(report.passed)
        }
    }?;
    out.finish()?;
    Ok(ok)
}

fn model_kind(model: &Model) -> &'static str {
    match model {
        Model::Er(_) => "er",
        Model::Cm(_) => "cm",
    }
}

#[derive(Serialize)]
struct SampleOut {
    model: &'static str,
    n: usize,
    seed: u64,
    edge_count: usize,
    edge_counts: Vec<u64>,
    vertex_counts: Vec<u64>,
    /// The graph in the line-oriented text format.
    graph: String,
}

fn sample(ctx: &Ctx, a: &SampleArgs, out: &mut Sink) -> Result<()> {
    if ctx.format(false) == Format::Csv {
        return usage("sample writes JSON only");
    }
    let model = load_model(&a.model)?;
    let g = sample_model(&model, a.n, &SeedStream::new(ctx.seed).split("sample"))?;
    let cv = joint_counts(&g, model.marks());
    out.json(&SampleOut {
        model: model_kind(&model),
        n: a.n,
        seed: ctx.seed,
        edge_count: g.edge_count(),
        edge_counts: cv.edge_counts,
        vertex_counts: cv.vertex_counts,
        graph: serialize_graph(&g, model.marks()),
    })
}

#[derive(Serialize)]
struct ShannonRow {
    n: usize,
    shannon: f64,
    /// `(H − (d₁,₂/2) n ln n) / n`, which tends to `sigma12`.
    normalized: f64,
    sigma12: f64,
}

fn entropy(ctx: &Ctx, a: &EntropyArgs, out: &mut Sink) -> Result<()> {
    let model = load_model(&a.model)?;
    let bc = bc_entropy(&model)?;
    let Some(spec) = &a.sweep else {
        return match ctx.format(false) {
            Format::Json => out.json(&bc),
            Format::Csv => out.csv(&[bc]),
        };
    };
    let Model::Er(er) = &model else {
        return usage("entropy sweeps need an ER model (the exact Shannon entropy is ER-only)");
    };
    let rows = sweep(spec)?
        .into_iter()
        .map(|n| {
            let h = exact_shannon_er(er, n)?;
            let nf = n as f64;
            Ok(ShannonRow { n, shannon: h, normalized: (h - bc.d12 / 2.0 * nf * nf.ln()) / nf, sigma12: bc.sigma12 })
        })
        .collect::<Result<Vec<_>>>()?;
    emit_rows(ctx, out, &rows)
}

fn emit_rows<T: Serialize>(ctx: &Ctx, out: &mut Sink, rows: &[T]) -> Result<()> {
    match ctx.format(true) {
        Format::Csv => out.csv(rows),
        Format::Json => rows.iter().try_for_each(|r| out.json_line(r)),
    }
}

#[derive(Serialize)]
struct RegionOut {
    tuple: RateTuple,
    contained: bool,
    constraints: Vec<ConstraintCheck>,
}

fn region(ctx: &Ctx, a: &RateRegionArgs, out: &mut Sink) -> Result<()> {
    let t = tuple(&a.tuple)?;
    let model = load_model(&a.model)?;
    let verdict = rate_region_contains(&bc_entropy(&model)?, &t);
    match ctx.format(false) {
        Format::Json => out.json(&RegionOut { tuple: t, contained: verdict.contained, constraints: verdict.constraints }),
        Format::Csv => out.csv(&verdict.constraints),
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum SimLine<'a> {
    Trial(&'a TrialRecord),
    Summary(SummaryOut),
}

#[derive(Serialize)]
struct SummaryOut {
    n: usize,
    tuple: RateTuple,
    seed: u64,
    binning_seed: u64,
    #[serde(flatten)]
    summary: SimSummary,
}

#[derive(Serialize)]
struct CodecRow {
    n: usize,
    trials: u64,
    pe: f64,
    pe_lo: f64,
    pe_hi: f64,
    e1: f64,
    e2: f64,
    e3: f64,
    e4: f64,
    not_found: u64,
    ambiguous: u64,
    typical_set_size: usize,
}

fn run_codec(ctx: &Ctx, model: &Model, n: usize, t: RateTuple, trials: u64, binning: u64) -> Result<(SimSummary, Vec<TrialRecord>)> {
    let sim = Simulator::new(CodeParams::new(n, t, binning)?, model, ctx.seed)?;
    log::info!("n = {n}: typical set of {} graphs", sim.index().size());
    let records = ctx.pool.install(|| (0..trials).into_par_iter().map(|i| sim.trial(i)).collect::<Result<Vec<_>, _>>())?;
    Ok((sim.summarize(&records), records))
}

fn codec_sim(ctx: &Ctx, a: &CodecSimArgs, out: &mut Sink) -> Result<()> {
    let t = tuple(&a.tuple)?;
    let model = load_model(&a.model)?;
    let binning = a.binning_seed.unwrap_or(ctx.seed);
    if let Some(spec) = &a.sweep {
        let mut rows = Vec::new();
        for n in sweep(spec)? {
            let (s, _) = run_codec(ctx, &model, n, t, a.trials, binning)?;
            rows.push(CodecRow {
                n,
                trials: s.trials,
                pe: s.pe.rate,
                pe_lo: s.pe.lo,
                pe_hi: s.pe.hi,
                e1: s.e1.rate,
                e2: s.e2.rate,
                e3: s.e3.rate,
                e4: s.e4.rate,
                not_found: s.not_found,
                ambiguous: s.ambiguous,
                typical_set_size: s.typical_set_size,
            });
        }
        return emit_rows(ctx, out, &rows);
    }
    let (summary, records) = run_codec(ctx, &model, a.n, t, a.trials, binning)?;
    match ctx.format(false) {
        Format::Json => {
            for r in &records {
                out.json_line(&SimLine::Trial(r))?;
            }
            out.json_line(&SimLine::Summary(SummaryOut { n: a.n, tuple: t, seed: ctx.seed, binning_seed: binning, summary }))
        }
        Format::Csv => out.csv(&records),
    }
}

#[derive(Serialize)]
struct LwcOut {
    n: usize,
    depth: u32,
    trials: u64,
    tv: Vec<f64>,
    tv_mean: f64,
    limit: NeighborhoodDist,
    /// Empirical law of the first sampled graph.
    empirical: NeighborhoodDist,
}

#[derive(Serialize)]
struct LwcRow {
    n: usize,
    depth: u32,
    trials: u64,
    tv_mean: f64,
}

fn limit_law(model: &Model, depth: u32, samples: usize, stream: &SeedStream) -> Result<NeighborhoodDist> {
    Ok(match model {
        Model::Er(er) if depth <= 1 => er_limit_law(er, depth)?,
        _ => sample_gw_law(model, depth, samples, stream)?,
    })
}

fn lwc_trials(ctx: &Ctx, model: &Model, n: usize, a: &LwcArgs, limit: &NeighborhoodDist) -> Result<Vec<(f64, NeighborhoodDist)>> {
    let root = SeedStream::new(ctx.seed).split("graph").split_index(n as u64);
    ctx.pool.install(|| {
        (0..a.trials)
            .into_par_iter()
            .map(|t| {
                let g = sample_model(model, n, &root.split_index(t))?;
                let u = empirical_u(&g, model.marks(), a.depth)?;
                Ok((dist_tv(&u, limit)?, u))
            })
            .collect()
    })
}

fn lwc(ctx: &Ctx, a: &LwcArgs, out: &mut Sink) -> Result<()> {
    if a.trials == 0 {
        return usage("--trials must be positive");
    }
    let model = load_model(&a.model)?;
    let limit = limit_law(&model, a.depth, a.limit_samples, &SeedStream::new(ctx.seed).split("limit"))?;
    if let Some(spec) = &a.sweep {
        let mut rows = Vec::new();
        for n in sweep(spec)? {
            let runs = lwc_trials(ctx, &model, n, a, &limit)?;
            let tv_mean = runs.iter().map(|r| r.0).sum::<f64>() / runs.len() as f64;
            rows.push(LwcRow { n, depth: a.depth, trials: a.trials, tv_mean });
        }
        return emit_rows(ctx, out, &rows);
    }
    let runs = lwc_trials(ctx, &model, a.n, a, &limit)?;
    let tv: Vec<f64> = runs.iter().map(|r| r.0).collect();
    let tv_mean = tv.iter().sum::<f64>() / tv.len() as f64;
    match ctx.format(false) {
        Format::Json => {
            let empirical = runs.into_iter().next().expect("at least one trial").1;
            out.json(&LwcOut { n: a.n, depth: a.depth, trials: a.trials, tv, tv_mean, limit, empirical })
        }
        Format::Csv => emit_rows(ctx, out, &[LwcRow { n: a.n, depth: a.depth, trials: a.trials, tv_mean }]),
    }
}
