use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use havqds_core::driver::write_amplitudes;
use havqds_core::oracle::{lowest_levels, DENSE_LEVELS_MAX_QUBITS};
use havqds_core::trajectory::mean_std;
use havqds_core::trotter::{DilemmaRow, DilemmaTable, RecordMode};
use havqds_core::{build_h_ad, run_avqds_only, run_havqds, run_trotter, sample_sk, Protocol, RunConfig, TrotterConfig};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::cli::{Command, HavqdsArgs, InstanceArgs, ReportArgs, SpectrumArgs, TrotterArgs, Variant};
use crate::error::CliError;
use crate::grid;
use crate::output::{create_dir, time_tag, write_csv, write_text, Manifest, RunEntry, RunStatus};

pub const SUMMARY_NAME: &str = "summary.csv";

/// Where and how a command runs.
pub struct Context {
    pub out: PathBuf,
    pub parallelism: usize,
}

/// What a finished sweep reports back to `main`.
pub struct Finished {
    pub dir: PathBuf,
    pub runs: usize,
    pub failed: usize,
}

struct Outcome<S> {
    entry: RunEntry,
    summary: Option<S>,
}

fn run_all<J: Sync, S: Send>(jobs: &[J], parallelism: usize, f: impl Fn(&J) -> Outcome<S> + Sync) -> Vec<Outcome<S>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .expect("thread pool");
    pool.install(|| jobs.par_iter().map(&f).collect())
}

fn entry(label: String, n: usize, total_time: Option<f64>, seed: u64, result: Result<Vec<String>, String>) -> RunEntry {
    match result {
        Ok(files) => RunEntry {
            label,
            n,
            total_time,
            seed,
            status: RunStatus::Ok,
            files,
            error: None,
        },
        Err(error) => RunEntry {
            label,
            n,
            total_time,
            seed,
            status: RunStatus::Failed,
            files: Vec::new(),
            error: Some(error),
        },
    }
}

#[allow(clippy::too_many_arguments)]
fn finish<S: Serialize>(
    ctx: &Context,
    dir: &Path,
    experiment: &str,
    command: &Command,
    config: serde_json::Value,
    seeds: Vec<u64>,
    started: Instant,
    outcomes: Vec<Outcome<S>>,
) -> Result<Finished, CliError> {
    let mut runs = Vec::with_capacity(outcomes.len());
    let mut summary = Vec::new();
    for outcome in outcomes {
        runs.push(outcome.entry);
        summary.extend(outcome.summary);
    }
    let mut outputs = Vec::new();
    if !summary.is_empty() {
        write_csv(&dir.join(SUMMARY_NAME), &summary)?;
        outputs.push(SUMMARY_NAME.to_string());
    }
    let manifest = Manifest {
        tool: "havqds".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        experiment: experiment.into(),
        command: command.clone(),
        config,
        seeds,
        parallelism: ctx.parallelism,
        wall_time_seconds: started.elapsed().as_secs_f64(),
        runs,
        outputs,
    };
    manifest.write(dir)?;
    Ok(Finished {
        dir: dir.to_path_buf(),
        runs: manifest.runs.len(),
        failed: manifest.failed(),
    })
}

fn experiment_dir(ctx: &Context, name: &str) -> Result<PathBuf, CliError> {
    let dir = ctx.out.join(name);
    create_dir(&dir)?;
    Ok(dir)
}

pub fn instance(ctx: &Context, command: &Command, args: &InstanceArgs) -> Result<Finished, CliError> {
    let started = Instant::now();
    let sizes = grid::sizes(&args.n)?;
    let seeds = grid::seeds(&args.seeds)?;
    let dir = experiment_dir(ctx, "instance")?;
    let jobs: Vec<(usize, u64)> = sizes.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let outcomes = run_all(&jobs, ctx.parallelism, |&(n, seed)| {
        let name = format!("sk_n{n}_seed{seed}.json");
        let result = sample_sk(n, seed)
            .and_then(|inst| inst.to_json())
            .map_err(|e| e.to_string())
            .and_then(|text| write_text(&dir.join(&name), &(text + "\n")).map_err(|e| e.to_string()))
            .map(|()| vec![name]);
        Outcome::<()> {
            entry: entry("instance".into(), n, None, seed, result),
            summary: None,
        }
    });
    let config = json!({ "n": sizes });
    finish(ctx, &dir, "instance", command, config, seeds, started, outcomes)
}

#[derive(Serialize, Deserialize)]
struct TrotterStepRow {
    protocol: Protocol,
    n: usize,
    #[serde(rename = "T")]
    total_time: f64,
    dt: f64,
    seed: u64,
    step: usize,
    s: f64,
    energy: f64,
    ratio: f64,
    cnot_cumulative: u64,
}

#[derive(Serialize, Deserialize)]
pub struct TrotterSummaryRow {
    pub protocol: Protocol,
    pub n: usize,
    #[serde(rename = "T")]
    pub total_time: f64,
    pub seed: u64,
    pub r_final: f64,
    pub cnot_total: u64,
}

pub fn trotter(ctx: &Context, command: &Command, args: &TrotterArgs) -> Result<Finished, CliError> {
    let started = Instant::now();
    let sizes = grid::sizes(&args.n)?;
    let times = grid::times(&args.t)?;
    let seeds = grid::seeds(&args.seeds)?;
    if !(args.dt > 0.0) || !args.dt.is_finite() {
        return Err(CliError::Config(format!("--dt must be positive, got {}", args.dt)));
    }
    let mut protocols: Vec<Protocol> = args.protocol.iter().map(|&p| p.into()).collect();
    protocols.sort();
    protocols.dedup();
    let dir = experiment_dir(ctx, "trotter")?;
    let mut jobs = Vec::new();
    for &protocol in &protocols {
        for &n in &sizes {
            for &total_time in &times {
                for &seed in &seeds {
                    jobs.push((protocol, n, total_time, seed));
                }
            }
        }
    }
    let outcomes = run_all(&jobs, ctx.parallelism, |&(protocol, n, total_time, seed)| {
        let name = format!("trotter_{protocol}_n{n}_T{}_seed{seed}.csv", time_tag(total_time));
        let mut config = TrotterConfig::new(total_time).with_dt(args.dt);
        if args.final_only {
            config.record = RecordMode::FinalOnly;
        }
        let run = sample_sk(n, seed).and_then(|inst| run_trotter(&inst, protocol, &config));
        let result = run.map_err(|e| e.to_string()).and_then(|run| {
            let rows: Vec<TrotterStepRow> = run
                .records
                .iter()
                .map(|r| TrotterStepRow {
                    protocol,
                    n,
                    total_time,
                    dt: args.dt,
                    seed,
                    step: r.step,
                    s: r.s,
                    energy: r.energy,
                    ratio: r.ratio,
                    cnot_cumulative: r.cnot_total,
                })
                .collect();
            write_csv(&dir.join(&name), &rows).map_err(|e| e.to_string())?;
            Ok(TrotterSummaryRow {
                protocol,
                n,
                total_time,
                seed,
                r_final: run.final_ratio(),
                cnot_total: run.tally.cnot_count,
            })
        });
        let (files, summary) = match result {
            Ok(row) => (Ok(vec![name]), Some(row)),
            Err(e) => (Err(e), None),
        };
        Outcome {
            entry: entry(protocol.to_string(), n, Some(total_time), seed, files),
            summary,
        }
    });
    let config = json!({
        "n": sizes,
        "T": times,
        "dt": args.dt,
        "protocols": protocols,
        "final_only": args.final_only,
    });
    finish(ctx, &dir, "trotter", command, config, seeds, started, outcomes)
}

#[derive(Serialize, Deserialize)]
struct HavqdsStepRow {
    variant: String,
    n: usize,
    #[serde(rename = "T")]
    total_time: f64,
    seed: u64,
    step: usize,
    t: f64,
    s: f64,
    energy: f64,
    variance: f64,
    ratio: f64,
    ansatz_size: usize,
    cnot_total: u64,
    imag_steps: usize,
}

#[derive(Serialize, Deserialize)]
pub struct HavqdsSummaryRow {
    pub variant: String,
    pub n: usize,
    #[serde(rename = "T")]
    pub total_time: f64,
    pub seed: u64,
    pub r_final: f64,
    pub final_energy: f64,
    pub cnot_total: u64,
    pub ansatz_size: usize,
    pub imag_steps: usize,
    pub degraded_steps: usize,
    pub max_distance: f64,
    pub max_energy_increase: f64,
}

pub fn run_config(args: &HavqdsArgs, total_time: f64) -> Result<RunConfig, CliError> {
    let config = RunConfig {
        dt: args.dt,
        dtau: args.dtau,
        delta_cut: args.delta_cut,
        eps_var: args.eps_var,
        k_max: args.k_max as usize,
        lambda: args.lambda,
        max_generators: args.max_generators,
        ratio_every_step: !args.final_ratio_only,
        ..RunConfig::new(total_time)
    };
    config.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(config)
}

pub fn havqds(ctx: &Context, command: &Command, args: &HavqdsArgs) -> Result<Finished, CliError> {
    let started = Instant::now();
    let sizes = grid::sizes(&args.n)?;
    let times = grid::times(&args.t)?;
    let seeds = grid::seeds(&args.seeds)?;
    let configs: Vec<RunConfig> = times.iter().map(|&t| run_config(args, t)).collect::<Result<_, _>>()?;
    let mut variants = args.variant.clone();
    variants.sort_by_key(|v| v.name());
    variants.dedup();
    let dir = experiment_dir(ctx, "havqds")?;
    let mut jobs = Vec::new();
    for &variant in &variants {
        for &n in &sizes {
            for config in &configs {
                for &seed in &seeds {
                    jobs.push((variant, n, config, seed));
                }
            }
        }
    }
    let outcomes = run_all(&jobs, ctx.parallelism, |&(variant, n, config, seed)| {
        let total_time = config.total_time;
        let stem = format!("{}_n{n}_T{}_seed{seed}", variant.name(), time_tag(total_time));
        let run = sample_sk(n, seed).and_then(|inst| match variant {
            Variant::Havqds => run_havqds(&inst, config),
            Variant::Avqds => run_avqds_only(&inst, config),
        });
        let result = run.map_err(|e| e.to_string()).and_then(|run| {
            let rows: Vec<HavqdsStepRow> = run
                .records
                .iter()
                .map(|r| HavqdsStepRow {
                    variant: variant.name().into(),
                    n,
                    total_time,
                    seed,
                    step: r.step,
                    t: r.t,
                    s: r.s,
                    energy: r.energy,
                    variance: r.variance,
                    ratio: r.ratio,
                    ansatz_size: r.ansatz_size,
                    cnot_total: r.cnot_total,
                    imag_steps: r.imag_steps,
                })
                .collect();
            let csv_name = format!("{stem}.csv");
            write_csv(&dir.join(&csv_name), &rows).map_err(|e| e.to_string())?;
            let mut files = vec![csv_name];
            if args.dump_amplitudes {
                let amp_name = format!("{stem}.amp");
                let path = dir.join(&amp_name);
                let file = File::create(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                write_amplitudes(&run.ansatz.prepare(), BufWriter::new(file)).map_err(|e| e.to_string())?;
                files.push(amp_name);
            }
            let summary = HavqdsSummaryRow {
                variant: variant.name().into(),
                n,
                total_time,
                seed,
                r_final: run.final_ratio(),
                final_energy: run.final_energy,
                cnot_total: run.cnot_total(),
                ansatz_size: run.ansatz.len(),
                imag_steps: run.diagnostics.imaginary_steps,
                degraded_steps: run.diagnostics.degraded_steps,
                max_distance: run.diagnostics.max_distance,
                max_energy_increase: run.diagnostics.max_energy_increase,
            };
            Ok((files, summary))
        });
        let (files, summary) = match result {
            Ok((files, row)) => (Ok(files), Some(row)),
            Err(e) => (Err(e), None),
        };
        Outcome {
            entry: entry(variant.name().into(), n, Some(total_time), seed, files),
            summary,
        }
    });
    let config = json!({
        "n": sizes,
        "T": times,
        "variants": variants,
        "dt": args.dt,
        "dtau": args.dtau,
        "delta_cut": args.delta_cut,
        "eps_var": args.eps_var,
        "k_max": args.k_max,
        "lambda": args.lambda,
        "max_generators": args.max_generators,
        "ratio_every_step": !args.final_ratio_only,
        "dump_amplitudes": args.dump_amplitudes,
    });
    finish(ctx, &dir, "havqds", command, config, seeds, started, outcomes)
}

pub fn spectrum(ctx: &Context, command: &Command, args: &SpectrumArgs) -> Result<Finished, CliError> {
    let started = Instant::now();
    let sizes = grid::sizes(&args.n)?;
    let seeds = grid::seeds(&args.seeds)?;
    if let Some(n) = sizes.iter().find(|&&n| n > DENSE_LEVELS_MAX_QUBITS) {
        return Err(CliError::Config(format!(
            "spectrum needs dense diagonalization; n = {n} exceeds {DENSE_LEVELS_MAX_QUBITS}"
        )));
    }
    let points = args.grid as usize;
    let dir = experiment_dir(ctx, "spectrum")?;
    let jobs: Vec<(usize, u64)> = sizes.iter().flat_map(|&n| seeds.iter().map(move |&s| (n, s))).collect();
    let outcomes = run_all(&jobs, ctx.parallelism, |&(n, seed)| {
        let name = format!("spectrum_n{n}_seed{seed}.csv");
        let levels = 5.min(1 << n);
        let result = (|| -> Result<Vec<String>, String> {
            let inst = sample_sk(n, seed).map_err(|e| e.to_string())?;
            let mut rows = Vec::with_capacity(points);
            for k in 0..points {
                let s = k as f64 / (points - 1) as f64;
                let h = build_h_ad(&inst, s).map_err(|e| e.to_string())?;
                let values = lowest_levels(&h, levels).map_err(|e| e.to_string())?;
                rows.push((s, values));
            }
            let path = dir.join(&name);
            let mut writer = csv::Writer::from_path(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let mut header = vec!["s".to_string()];
            header.extend((0..levels).map(|k| format!("E{k}")));
            writer.write_record(&header).map_err(|e| e.to_string())?;
            for (s, values) in rows {
                let mut record = vec![s.to_string()];
                record.extend(values.iter().map(|v| v.to_string()));
                writer.write_record(&record).map_err(|e| e.to_string())?;
            }
            writer.flush().map_err(|e| e.to_string())?;
            Ok(vec![name.clone()])
        })();
        Outcome::<()> {
            entry: entry("spectrum".into(), n, None, seed, result),
            summary: None,
        }
    });
    let config = json!({ "n": sizes, "grid": points, "levels": 5 });
    finish(ctx, &dir, "spectrum", command, config, seeds, started, outcomes)
}

#[derive(Serialize)]
struct TrotterReportRow {
    protocol: Protocol,
    n: usize,
    #[serde(rename = "T")]
    total_time: f64,
    count: usize,
    mean_r: f64,
    std_r: f64,
    mean_cnot: f64,
}

#[derive(Serialize)]
struct HavqdsReportRow {
    variant: String,
    n: usize,
    #[serde(rename = "T")]
    total_time: f64,
    count: usize,
    mean_r: f64,
    std_r: f64,
    mean_cnot: f64,
    std_cnot: f64,
    mean_imag_steps: f64,
}

fn read_summary<R: for<'de> Deserialize<'de>>(path: &Path) -> Result<Option<Vec<R>>, CliError> {
    if !path.is_file() {
        return Ok(None);
    }
    let malformed = |e: csv::Error| CliError::Malformed {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut reader = csv::Reader::from_path(path).map_err(malformed)?;
    let rows = reader.deserialize().collect::<Result<Vec<R>, _>>().map_err(malformed)?;
    Ok(Some(rows).filter(|r| !r.is_empty()))
}

fn havqds_report(rows: &[HavqdsSummaryRow]) -> Vec<HavqdsReportRow> {
    let mut keys: Vec<(String, usize, f64)> = rows.iter().map(|r| (r.variant.clone(), r.n, r.total_time)).collect();
    keys.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)).then(a.2.total_cmp(&b.2)));
    keys.dedup();
    keys.into_iter()
        .map(|(variant, n, total_time)| {
            let members: Vec<&HavqdsSummaryRow> = rows
                .iter()
                .filter(|r| r.variant == variant && r.n == n && r.total_time == total_time)
                .collect();
            let stats = |f: fn(&HavqdsSummaryRow) -> f64| mean_std(&members.iter().map(|r| f(r)).collect::<Vec<_>>());
            let (mean_r, std_r) = stats(|r| r.r_final);
            let (mean_cnot, std_cnot) = stats(|r| r.cnot_total as f64);
            HavqdsReportRow {
                variant,
                n,
                total_time,
                count: members.len(),
                mean_r,
                std_r,
                mean_cnot,
                std_cnot,
                mean_imag_steps: stats(|r| r.imag_steps as f64).0,
            }
        })
        .collect()
}

/// Reads `trotter/summary.csv` and `havqds/summary.csv` under the input
/// directory and writes the aggregated tables to `<out>/report/`. Nothing is
/// written unless at least one summary has rows.
pub fn report(ctx: &Context, args: &ReportArgs) -> Result<Vec<PathBuf>, CliError> {
    let input = args.input.clone().unwrap_or_else(|| ctx.out.clone());
    if !input.is_dir() {
        return Err(CliError::EmptyInput(format!("{} is not a directory", input.display())));
    }
    let trotter: Option<Vec<TrotterSummaryRow>> = read_summary(&input.join("trotter").join(SUMMARY_NAME))?;
    let hybrid: Option<Vec<HavqdsSummaryRow>> = read_summary(&input.join("havqds").join(SUMMARY_NAME))?;
    if trotter.is_none() && hybrid.is_none() {
        return Err(CliError::EmptyInput(format!(
            "no trotter/{SUMMARY_NAME} or havqds/{SUMMARY_NAME} with rows under {}",
            input.display()
        )));
    }
    let trotter_rows: Option<Vec<TrotterReportRow>> = trotter.map(|rows| {
        let rows = rows
            .into_iter()
            .map(|r| DilemmaRow {
                protocol: r.protocol,
                n: r.n,
                total_time: r.total_time,
                seed: r.seed,
                r_final: r.r_final,
                cnot_total: r.cnot_total,
            })
            .collect();
        DilemmaTable::from_rows(rows)
            .cells
            .into_iter()
            .map(|c| TrotterReportRow {
                protocol: c.protocol,
                n: c.n,
                total_time: c.total_time,
                count: c.count,
                mean_r: c.mean_r,
                std_r: c.std_r,
                mean_cnot: c.mean_cnot,
            })
            .collect()
    });
    let hybrid_rows = hybrid.map(|rows| havqds_report(&rows));

    let dir = ctx.out.join("report");
    create_dir(&dir)?;
    let mut written = Vec::new();
    if let Some(rows) = trotter_rows {
        let path = dir.join("trotter_report.csv");
        write_csv(&path, &rows)?;
        written.push(path);
    }
    if let Some(rows) = hybrid_rows {
        let path = dir.join("havqds_report.csv");
        write_csv(&path, &rows)?;
        written.push(path);
    }
    Ok(written)
}
