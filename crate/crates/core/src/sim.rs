//! Monte Carlo sweeps: sample, decode, classify, aggregate.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::decoder::{default_damping, default_pattern, Decoder, DecoderConfig};
use crate::error::{Error, Result};
use crate::geometry::{PatternFamily, SurfaceCode};
use crate::mp::{MpMode, PhiMode};
use crate::noise::{prior_of, trial_rng, trial_seed, NoiseKind, NoiseModel};
use crate::pauli::{classify_residual, syndrome};

pub const CSV_HEADER: &str =
    "d,p,noise,pattern,eps,trials,nonconv,logical_fail,total_error_rate,mean_iters,median_iters,max_iters,seed";

/// Parse `start:stop:step` (inclusive of `stop` up to rounding), a
/// comma-separated list, or a single value.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("invalid number `{t}`")))
    };
    let values = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("grid `{s}` is not start:stop:step")));
        }
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || stop < start {
            return Err(Error::Parse(format!(
                "grid `{s}` is empty or has a non-positive step"
            )));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| start + i as f64 * step)
            .map(|v| (v * 1e12).round() / 1e12)
            .collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<f64>>>()?
    };
    if let Some(&p) = values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidProbability(p));
    }
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PatternChoice {
    /// Family chosen from the noise model.
    Auto,
    Family(PatternFamily),
}

impl PatternChoice {
    pub fn resolve(self, noise: NoiseKind) -> PatternFamily {
        match self {
            PatternChoice::Auto => default_pattern(noise),
            PatternChoice::Family(f) => f,
        }
    }
}

impl std::str::FromStr for PatternChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            Ok(PatternChoice::Auto)
        } else {
            Ok(PatternChoice::Family(s.parse()?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum EpsChoice {
    /// Per-distance default.
    Auto,
    Global(f64),
    PerD(BTreeMap<usize, f64>),
}

impl EpsChoice {
    pub fn resolve(&self, noise: NoiseKind, d: usize) -> f64 {
        match self {
            EpsChoice::Auto => default_damping(noise, d),
            EpsChoice::Global(e) => *e,
            EpsChoice::PerD(map) => map
                .get(&d)
                .copied()
                .unwrap_or_else(|| default_damping(noise, d)),
        }
    }
}

impl std::str::FromStr for EpsChoice {
    type Err = Error;

    /// `auto`, a single value, or `d=eps` pairs separated by commas.
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(EpsChoice::Auto);
        }
        let bad = || Error::Parse(format!("invalid damping `{s}`"));
        if !s.contains('=') {
            return Ok(EpsChoice::Global(s.trim().parse().map_err(|_| bad())?));
        }
        let mut map = BTreeMap::new();
        for pair in s.split(',') {
            let (d, e) = pair.split_once('=').ok_or_else(bad)?;
            map.insert(
                d.trim().parse().map_err(|_| bad())?,
                e.trim().parse().map_err(|_| bad())?,
            );
        }
        Ok(EpsChoice::PerD(map))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub distances: Vec<usize>,
    pub ps: Vec<f64>,
    pub noise: NoiseKind,
    pub pattern: PatternChoice,
    pub eps: EpsChoice,
    pub trials: usize,
    pub seed: u64,
    pub mode: MpMode,
    pub phi_mode: PhiMode,
    pub budget: Option<usize>,
    /// `false` runs only the undiluted graph with the whole budget.
    pub dilution: bool,
}

impl SweepSpec {
    pub fn new(distances: Vec<usize>, ps: Vec<f64>, noise: NoiseKind, trials: usize) -> Self {
        SweepSpec {
            distances,
            ps,
            noise,
            pattern: PatternChoice::Auto,
            eps: EpsChoice::Auto,
            trials,
            seed: 0,
            mode: MpMode::MinSum,
            phi_mode: PhiMode::Max,
            budget: None,
            dilution: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.distances.is_empty() || self.ps.is_empty() {
            return Err(Error::Config("empty distance or p grid".into()));
        }
        if let Some(&d) = self.distances.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidDistance(d));
        }
        if let Some(&p) = self.ps.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidProbability(p));
        }
        for &d in &self.distances {
            let e = self.eps.resolve(self.noise, d);
            if !(0.0..1.0).contains(&e) {
                return Err(Error::Config(format!("damping {e} outside [0, 1)")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: usize,
    pub p: f64,
    pub noise: NoiseKind,
    /// `None` when dilution is off.
    pub pattern: Option<PatternFamily>,
    pub eps: f64,
    pub trials: usize,
    pub nonconv: usize,
    pub logical_fail: usize,
    pub total_error_rate: f64,
    pub mean_iters: f64,
    pub median_iters: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub wall_time_s: f64,
}

impl SweepRow {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.8},{:.4},{},{},{}",
            self.d,
            self.p,
            self.noise,
            self.pattern.map_or("none".to_string(), |f| f.to_string()),
            self.eps,
            self.trials,
            self.nonconv,
            self.logical_fail,
            self.total_error_rate,
            self.mean_iters,
            self.median_iters,
            self.max_iters,
            self.seed
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrialOutcome {
    Success,
    LogicalFailure,
    NonConverged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub outcome: TrialOutcome,
    pub iterations: usize,
}

/// Seed for the trials at one `(d, p)` point.
pub fn point_seed(master: u64, d: usize, p: f64) -> u64 {
    trial_seed(trial_seed(master, d as u64), p.to_bits())
}

/// Everything needed to run trials at one point.
#[derive(Debug, Clone)]
pub struct PointRunner {
    code: SurfaceCode,
    decoder: Decoder,
    model: NoiseModel,
    prior: crate::noise::Prior,
    pub pattern: Option<PatternFamily>,
    pub eps: f64,
    pub seed: u64,
}

impl PointRunner {
    pub fn new(spec: &SweepSpec, d: usize, p: f64) -> Result<Self> {
        let code = SurfaceCode::new(d)?;
        let family = spec.pattern.resolve(spec.noise);
        let eps = spec.eps.resolve(spec.noise, d);
        let config = DecoderConfig {
            mode: spec.mode,
            phi_mode: spec.phi_mode,
            damping: eps,
            dilution: spec.dilution,
            budget: spec.budget,
        };
        let decoder = Decoder::with_family(&code, family, config)?;
        let model = NoiseModel::new(spec.noise, p)?;
        let prior = prior_of(&model)?;
        Ok(PointRunner {
            code,
            decoder,
            model,
            prior,
            pattern: spec.dilution.then_some(family),
            eps,
            seed: point_seed(spec.seed, d, p),
        })
    }

    pub fn trial(&self, index: u64) -> Result<TrialRecord> {
        let mut rng = trial_rng(self.seed, index);
        let e = self.model.sample(self.code.n, &mut rng)?;
        let s = syndrome(&self.code, &e)?;
        let out = self.decoder.decode(&s, &self.prior)?;
        let outcome = if !out.converged {
            TrialOutcome::NonConverged
        } else if classify_residual(&self.code, &out.estimate.apply(&e)?)?.is_logical_error() {
            TrialOutcome::LogicalFailure
        } else {
            TrialOutcome::Success
        };
        Ok(TrialRecord {
            outcome,
            iterations: out.total_iterations,
        })
    }

    pub fn run(&self, trials: usize) -> Result<Vec<TrialRecord>> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..trials as u64)
                .into_par_iter()
                .map(|t| self.trial(t))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..trials as u64).map(|t| self.trial(t)).collect()
        }
    }
}

fn summarize(
    spec: &SweepSpec,
    runner: &PointRunner,
    d: usize,
    p: f64,
    records: &[TrialRecord],
    wall: f64,
) -> SweepRow {
    let trials = records.len();
    let nonconv = records
        .iter()
        .filter(|r| r.outcome == TrialOutcome::NonConverged)
        .count();
    let logical_fail = records
        .iter()
        .filter(|r| r.outcome == TrialOutcome::LogicalFailure)
        .count();
    let mut iters: Vec<usize> = records.iter().map(|r| r.iterations).collect();
    iters.sort_unstable();
    let mean_iters = iters.iter().sum::<usize>() as f64 / trials.max(1) as f64;
    let median_iters = match trials {
        0 => 0.0,
        t if t % 2 == 1 => iters[t / 2] as f64,
        t => (iters[t / 2 - 1] + iters[t / 2]) as f64 / 2.0,
    };
    SweepRow {
        d,
        p,
        noise: spec.noise,
        pattern: runner.pattern,
        eps: runner.eps,
        trials,
        nonconv,
        logical_fail,
        total_error_rate: (nonconv + logical_fail) as f64 / trials.max(1) as f64,
        mean_iters,
        median_iters,
        max_iters: iters.last().copied().unwrap_or(0),
        seed: spec.seed,
        wall_time_s: wall,
    }
}

pub fn run_point(spec: &SweepSpec, d: usize, p: f64) -> Result<SweepRow> {
    let start = Instant::now();
    let runner = PointRunner::new(spec, d, p)?;
    let records = runner.run(spec.trials)?;
    Ok(summarize(
        spec,
        &runner,
        d,
        p,
        &records,
        start.elapsed().as_secs_f64(),
    ))
}

/// Rows in spec order (distances outer, p inner); `on_row` sees each row as
/// soon as it is complete.
pub fn run_sweep_with(
    spec: &SweepSpec,
    mut on_row: impl FnMut(&SweepRow) -> Result<()>,
) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let mut rows = Vec::new();
    for &d in &spec.distances {
        for &p in &spec.ps {
            let row = run_point(spec, d, p)?;
            on_row(&row)?;
            rows.push(row);
        }
    }
    Ok(rows)
}

pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    run_sweep_with(spec, |_| Ok(()))
}

pub fn write_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationHistogram {
    pub d: usize,
    pub p: f64,
    /// `counts[i]`: trials that stopped after exactly `i` total iterations.
    pub counts: Vec<usize>,
    /// Cumulative iteration index at which each stage after the first begins.
    pub stage_starts: Vec<usize>,
    pub nonconverged: usize,
}

impl IterationHistogram {
    /// Converged trial counts grouped by the stage they finished in.
    pub fn per_stage(&self) -> Vec<usize> {
        let mut out = vec![0; self.stage_starts.len() + 1];
        for (i, &c) in self.counts.iter().enumerate() {
            let stage = self.stage_starts.iter().filter(|&&s| i > s).count();
            out[stage] += c;
        }
        out
    }
}

/// Histogram of total iterations over converged trials at one point.
pub fn iteration_histogram(spec: &SweepSpec, d: usize, p: f64) -> Result<IterationHistogram> {
    spec.validate()?;
    let runner = PointRunner::new(spec, d, p)?;
    let records = runner.run(spec.trials)?;
    let schedule = runner
        .decoder
        .config
        .schedule(runner.decoder.sequence.k_max());
    let mut stage_starts = Vec::new();
    let mut acc = 0;
    for &it in &schedule[..schedule.len() - 1] {
        acc += it;
        stage_starts.push(acc);
    }
    let max = records.iter().map(|r| r.iterations).max().unwrap_or(0);
    let mut counts = vec![0; max + 1];
    let mut nonconverged = 0;
    for r in &records {
        if r.outcome == TrialOutcome::NonConverged {
            nonconverged += 1;
        } else {
            counts[r.iterations] += 1;
        }
    }
    Ok(IterationHistogram {
        d,
        p,
        counts,
        stage_starts,
        nonconverged,
    })
}

/// The four `(dilution, eps)` combinations: `(false, 0)`, `(false, 0.15)`,
/// `(true, 0)`, `(true, 0.15)`.
pub const NONCONV_VARIANTS: [(bool, f64); 4] =
    [(false, 0.0), (false, 0.15), (true, 0.0), (true, 0.15)];

/// Non-convergence comparison with and without dilution and damping. `base`
/// fixes everything except dilution and damping.
pub fn nonconvergence_sweep(base: &SweepSpec) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for (dilution, eps) in NONCONV_VARIANTS {
        let spec = SweepSpec {
            dilution,
            eps: EpsChoice::Global(eps),
            ..base.clone()
        };
        rows.extend(run_sweep(&spec)?);
    }
    Ok(rows)
}
