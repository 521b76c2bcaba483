//! Batch experiments over the random models.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{default_level, theorem_check, Options};
use crate::complex::validate;
use crate::error::{GarlandError, Result, Stage};
use crate::generators::{random_complex, Model, RandomModelParams, DEFAULT_REJECTION_CAP};
use crate::poset::FacePoset;
use crate::rng::derive_seed;
use crate::spectral::Status;

#[derive(Debug, Clone, Copy)]
pub struct ExperimentConfig {
    pub model: Model,
    pub h: usize,
    pub d: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub options: Options,
    /// Cap on conditioning draws per sample (`zbox`).
    pub rejection_cap: u64,
    /// Cap on resampling after validation or structure failures, per trial.
    pub max_resamples: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(model: Model, h: usize, d: usize, k: usize, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            model,
            h,
            d,
            k,
            trials,
            seed,
            options: Options::default(),
            rejection_cap: DEFAULT_REJECTION_CAP,
            max_resamples: 10_000,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentRecord {
    pub trial: usize,
    pub seed: u64,
    pub model: Model,
    pub h: usize,
    pub d: usize,
    pub k: usize,
    pub level: usize,
    /// Gluing draws over all resamples, including conditioning rejections.
    pub attempts: u64,
    pub validation_rejections: u64,
    pub structure_rejections: u64,
    pub verdict: Status,
    #[serde(serialize_with = "crate::spectral::serialize_extended")]
    pub min_gap: f64,
    pub threshold: String,
    /// Reduced Betti numbers in every degree.
    pub betti: Vec<usize>,
    pub dim_l: usize,
    pub dim_t: usize,
    #[serde(rename = "dimLplusT")]
    pub dim_lt: usize,
    #[serde(rename = "h0B")]
    pub h0b: usize,
    #[serde(serialize_with = "crate::spectral::serialize_extended")]
    pub alpha: f64,
    #[serde(serialize_with = "crate::spectral::serialize_extended")]
    pub beta: f64,
    pub theorem_consistent: bool,
    pub components: usize,
    pub ms_sample: u64,
    pub ms_analyze: u64,
}

impl ExperimentRecord {
    pub fn betti_at_level(&self) -> usize {
        self.betti.get(self.level).copied().unwrap_or(0)
    }
}

/// CSV header; the two timing columns come last.
pub const CSV_HEADER: &str = "trial,seed,model,h,d,k,level,attempts,validation_rejections,\
structure_rejections,verdict,min_gap,threshold,betti,dim_l,dim_t,dim_lt,h0b,alpha,beta,\
theorem_consistent,components,ms_sample,ms_analyze";

/// Number of trailing timing columns in [`CSV_HEADER`].
pub const TIMING_COLUMNS: usize = 2;

fn real(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

impl ExperimentRecord {
    pub fn csv_row(&self) -> String {
        let betti: Vec<String> = self.betti.iter().map(|b| b.to_string()).collect();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.trial,
            self.seed,
            self.model,
            self.h,
            self.d,
            self.k,
            self.level,
            self.attempts,
            self.validation_rejections,
            self.structure_rejections,
            self.verdict,
            real(self.min_gap),
            self.threshold,
            betti.join(";"),
            self.dim_l,
            self.dim_t,
            self.dim_lt,
            self.h0b,
            real(self.alpha),
            real(self.beta),
            self.theorem_consistent,
            self.components,
            self.ms_sample,
            self.ms_analyze,
        )
    }
}

pub fn to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(out, "{}", r.csv_row()).expect("writing to a String");
    }
    out
}

fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<ExperimentRecord> {
    let seed = derive_seed(cfg.seed, trial as u64);
    let mut attempts = 0u64;
    let mut validation_rejections = 0u64;
    let mut structure_rejections = 0u64;
    let mut ms_sample = 0u64;
    for draw in 0..cfg.max_resamples {
        let params = RandomModelParams {
            model: cfg.model,
            h: cfg.h,
            d: cfg.d,
            k: cfg.k,
            seed: if draw == 0 {
                seed
            } else {
                derive_seed(seed, draw)
            },
        };
        let started = Instant::now();
        let sample = random_complex(&params, cfg.rejection_cap)?;
        attempts += sample.attempts;
        let report = validate(&sample.complex);
        ms_sample += started.elapsed().as_millis() as u64;
        if !report.ok {
            validation_rejections += 1;
            continue;
        }
        let started = Instant::now();
        let fp = FacePoset::from_complex_unchecked(&sample.complex)?;
        let level = default_level(&fp);
        let result = match theorem_check(&fp, level, &cfg.options) {
            Ok(r) => r,
            Err(e) if e.stage() == Stage::Structure => {
                structure_rejections += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let ms_analyze = started.elapsed().as_millis() as u64;
        let c = &result.cohomology;
        return Ok(ExperimentRecord {
            trial,
            seed,
            model: cfg.model,
            h: cfg.h,
            d: cfg.d,
            k: cfg.k,
            level,
            attempts,
            validation_rejections,
            structure_rejections,
            verdict: result.verdict,
            min_gap: result.min_gap,
            threshold: result.threshold.clone(),
            betti: c.betti.clone(),
            dim_l: c.dim_l,
            dim_t: c.dim_t,
            dim_lt: c.dim_lt,
            h0b: c.h0b,
            alpha: result.exactness.alpha,
            beta: result.exactness.beta,
            theorem_consistent: result.consistent(),
            components: result.exactness.per_a.len(),
            ms_sample,
            ms_analyze,
        });
    }
    Err(GarlandError::RejectionCap {
        attempts: cfg.max_resamples,
        reason: format!(
            "trial {trial}: no valid sample ({validation_rejections} invalid, {structure_rejections} structurally rejected)"
        ),
    })
}

/// Runs all trials, concurrently, returning records in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    let params = RandomModelParams {
        model: cfg.model,
        h: cfg.h,
        d: cfg.d,
        k: cfg.k,
        seed: cfg.seed,
    };
    params.check()?;
    let work = || -> Result<Vec<ExperimentRecord>> {
        (0..cfg.trials)
            .into_par_iter()
            .map(|t| run_trial(cfg, t))
            .collect()
    };
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| GarlandError::Parameter(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GapBucket {
    /// Inclusive lower edge; `null` collects infinite gaps.
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExperimentSummary {
    pub model: Model,
    pub h: usize,
    pub d: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub holds: usize,
    pub fails: usize,
    pub inconclusive: usize,
    pub holds_rate: f64,
    pub fails_rate: f64,
    pub inconclusive_rate: f64,
    pub gap_histogram: Vec<GapBucket>,
    pub mean_betti: f64,
    pub all_consistent: bool,
    pub inconsistent_trials: Vec<usize>,
    pub attempts: u64,
    pub validation_rejections: u64,
    pub structure_rejections: u64,
}

/// Histogram bucket width for minimum gaps on `[0, 2]`.
pub const GAP_BUCKET_WIDTH: f64 = 0.1;

pub fn summarize(cfg: &ExperimentConfig, records: &[ExperimentRecord]) -> ExperimentSummary {
    let n = records.len();
    let count = |s: Status| records.iter().filter(|r| r.verdict == s).count();
    let rate = |c: usize| if n == 0 { 0.0 } else { c as f64 / n as f64 };
    let (holds, fails, inconclusive) = (
        count(Status::Holds),
        count(Status::Fails),
        count(Status::Inconclusive),
    );
    let buckets = (2.0 / GAP_BUCKET_WIDTH).round() as usize;
    let mut gap_histogram: Vec<GapBucket> = (0..buckets)
        .map(|i| GapBucket {
            from: Some(i as f64 * GAP_BUCKET_WIDTH),
            to: Some((i + 1) as f64 * GAP_BUCKET_WIDTH),
            count: 0,
        })
        .collect();
    gap_histogram.push(GapBucket {
        from: None,
        to: None,
        count: 0,
    });
    for r in records {
        let i = if r.min_gap.is_finite() {
            ((r.min_gap.max(0.0) / GAP_BUCKET_WIDTH) as usize).min(buckets - 1)
        } else {
            buckets
        };
        gap_histogram[i].count += 1;
    }
    let mean_betti = if n == 0 {
        0.0
    } else {
        records
            .iter()
            .map(|r| r.betti_at_level() as f64)
            .sum::<f64>()
            / n as f64
    };
    let inconsistent_trials: Vec<usize> = records
        .iter()
        .filter(|r| !r.theorem_consistent)
        .map(|r| r.trial)
        .collect();
    ExperimentSummary {
        model: cfg.model,
        h: cfg.h,
        d: cfg.d,
        k: cfg.k,
        trials: n,
        seed: cfg.seed,
        holds,
        fails,
        inconclusive,
        holds_rate: rate(holds),
        fails_rate: rate(fails),
        inconclusive_rate: rate(inconclusive),
        gap_histogram,
        mean_betti,
        all_consistent: inconsistent_trials.is_empty(),
        inconsistent_trials,
        attempts: records.iter().map(|r| r.attempts).sum(),
        validation_rejections: records.iter().map(|r| r.validation_rejections).sum(),
        structure_rejections: records.iter().map(|r| r.structure_rejections).sum(),
    }
}
