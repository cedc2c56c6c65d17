//! One-dimensional periodic strip: a ladder of two rails of length `d` joined
//! by `d` rungs, with X noise on every edge. Dilution removes rungs, so
//! stage `k` keeps the rungs at positions divisible by `2^k` and has girth
//! `2^(k+1) + 2`. The logical is a loop along one rail.

use rand::seq::index::sample as sample_indices;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::DilutedGraph;
use crate::mp::{run_mp, MpConfig, MpGraph, MpMode, PhiMode};
use crate::noise::{trial_seed, Prior};
use crate::pauli::Syndrome;

/// Iterations at strip stage `k`: `min(2^k, 20k + 20)`.
pub fn strip_stage_iterations(k: usize) -> usize {
    let pow = if k >= usize::BITS as usize - 1 {
        usize::MAX
    } else {
        1usize << k
    };
    pow.min(20 * k + 20)
}

#[derive(Debug, Clone)]
pub struct Strip {
    pub d: usize,
    pub k_max: usize,
    /// `z_checks[v]`: qubits at ladder vertex `v`.
    checks: Vec<Vec<usize>>,
    graphs: Vec<MpGraph>,
    girths: Vec<Option<usize>>,
}

impl Strip {
    /// Ladder of length `d` with the largest stage count that keeps every
    /// diluted ladder uniform.
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDistance(d));
        }
        let k_max = (usize::BITS - 1 - d.leading_zeros()) as usize;
        let k_max = (0..=k_max)
            .rev()
            .find(|&k| d.is_multiple_of(1 << k))
            .unwrap_or(0);
        Strip::with_stages(d, k_max)
    }

    pub fn with_stages(d: usize, k_max: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDistance(d));
        }
        if k_max >= usize::BITS as usize || !d.is_multiple_of(1 << k_max) {
            return Err(Error::Config(format!(
                "length {d} is not divisible by 2^{k_max}"
            )));
        }
        let mut checks = vec![Vec::with_capacity(3); 2 * d];
        for i in 0..d {
            let prev = (i + d - 1) % d;
            checks[i] = vec![prev, i, 2 * d + i];
            checks[d + i] = vec![d + prev, d + i, 2 * d + i];
        }
        let mut strip = Strip {
            d,
            k_max,
            checks,
            graphs: Vec::new(),
            girths: Vec::new(),
        };
        for k in 0..=k_max {
            let g = strip.stage_graph(k);
            strip.girths.push(g.girth);
            strip.graphs.push(MpGraph::new(&g));
        }
        Ok(strip)
    }

    pub fn n(&self) -> usize {
        3 * self.d
    }

    pub fn rail_left(&self, i: usize) -> usize {
        i % self.d
    }

    pub fn rail_right(&self, i: usize) -> usize {
        self.d + i % self.d
    }

    pub fn rung(&self, i: usize) -> usize {
        2 * self.d + i % self.d
    }

    /// Whether qubit `q` is kept at stage `k`.
    pub fn active(&self, k: usize, q: usize) -> bool {
        q < 2 * self.d || (q - 2 * self.d).is_multiple_of(1 << k)
    }

    pub fn stage_graph(&self, k: usize) -> DilutedGraph {
        let active = (0..self.n()).map(|q| self.active(k, q)).collect();
        DilutedGraph::with_mask(self.n(), &self.checks, &[], active)
    }

    pub fn girth(&self, k: usize) -> Option<usize> {
        self.girths.get(k).copied().flatten()
    }

    pub fn syndrome(&self, e: &[bool]) -> Vec<bool> {
        self.checks
            .iter()
            .map(|c| c.iter().fold(false, |acc, &q| acc ^ e[q]))
            .collect()
    }

    /// Parity of `e` on the cut between positions `d-1` and `0`: odd iff
    /// a closed `e` winds around the strip.
    pub fn cut_parity(&self, e: &[bool]) -> bool {
        e[self.rail_left(self.d - 1)] ^ e[self.rail_right(self.d - 1)]
    }

    fn check_len(&self, e: &[bool]) -> Result<()> {
        if e.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: e.len(),
            });
        }
        Ok(())
    }
}

/// Minimum-weight configurations on the stage-`k` ladder with the given
/// vertex syndrome, one per winding class (`None` when a class is
/// unreachable). Exact transfer-matrix sweep around the ring.
pub fn renormalize_by_class(
    strip: &Strip,
    k: usize,
    syndrome: &[bool],
) -> Result<[Option<Vec<bool>>; 2]> {
    let d = strip.d;
    if syndrome.len() != 2 * d {
        return Err(Error::LengthMismatch {
            expected: 2 * d,
            got: syndrome.len(),
        });
    }
    const INF: usize = usize::MAX / 4;
    let mut best: [Option<(usize, Vec<bool>)>; 2] = [None, None];
    for start in 0..4usize {
        // cost[s]: best weight so far ending with rail state s; back[i][s]: (prev state, rung)
        let mut cost = [INF; 4];
        cost[start] = 0;
        let mut back = vec![[(0u8, false); 4]; d];
        for i in 0..d {
            let mut next = [INF; 4];
            let rungs: &[bool] = if strip.active(k, strip.rung(i)) {
                &[false, true]
            } else {
                &[false]
            };
            for s in 0..4 {
                if cost[s] >= INF {
                    continue;
                }
                let (a_l, a_r) = (s & 1 == 1, s & 2 == 2);
                for &r in rungs {
                    let b_l = syndrome[i] ^ a_l ^ r;
                    let b_r = syndrome[d + i] ^ a_r ^ r;
                    let ns = b_l as usize | (b_r as usize) << 1;
                    let c = cost[s] + r as usize + b_l as usize + b_r as usize;
                    if c < next[ns] {
                        next[ns] = c;
                        back[i][ns] = (s as u8, r);
                    }
                }
            }
            cost = next;
        }
        if cost[start] >= INF {
            continue;
        }
        let mut e = vec![false; strip.n()];
        let mut s = start;
        for i in (0..d).rev() {
            let (prev, r) = back[i][s];
            e[strip.rail_left(i)] = s & 1 == 1;
            e[strip.rail_right(i)] = s & 2 == 2;
            e[strip.rung(i)] = r;
            s = prev as usize;
        }
        let class = ((start & 1) ^ (start >> 1)) & 1;
        if best[class].as_ref().is_none_or(|(c, _)| cost[start] < *c) {
            best[class] = Some((cost[start], e));
        }
    }
    Ok(best.map(|b| b.map(|(_, e)| e)))
}

/// `R^k`: a minimum-weight configuration on the stage-`k` ladder with the
/// same syndrome as `e`.
pub fn renormalize(strip: &Strip, k: usize, e: &[bool]) -> Result<Vec<bool>> {
    strip.check_len(e)?;
    let [a, b] = renormalize_by_class(strip, k, &strip.syndrome(e))?;
    let weight = |v: &Option<Vec<bool>>| {
        v.as_ref()
            .map_or(usize::MAX, |v| v.iter().filter(|&&x| x).count())
    };
    match (weight(&a) <= weight(&b), a, b) {
        (true, Some(a), _) => Ok(a),
        (_, _, Some(b)) => Ok(b),
        (_, Some(a), None) => Ok(a),
        _ => Err(Error::Unsatisfiable),
    }
}

fn binary_prior(p: f64) -> Result<Prior> {
    Prior::product(p, 0.0)
}

fn mp_config(iters: usize, eps: f64) -> MpConfig {
    MpConfig {
        mode: MpMode::MinSum,
        damping: eps,
        max_iters: iters,
        phi_mode: PhiMode::Max,
        ..MpConfig::default()
    }
}

fn to_syndrome(bits: Vec<bool>) -> Syndrome {
    Syndrome {
        z_checks: bits,
        x_checks: Vec::new(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StripOutcome {
    pub success: bool,
    pub converged: bool,
    pub estimate: Vec<bool>,
    pub per_stage_iterations: Vec<usize>,
}

/// Multi-stage binary Min-Sum on the strip with schedule `min(2^k, 20k+20)`.
/// Success iff the final estimate reproduces the syndrome and differs from
/// `error` by a non-winding loop.
pub fn strip_decode(strip: &Strip, error: &[bool], p: f64, eps: f64) -> Result<StripOutcome> {
    strip.check_len(error)?;
    let prior = binary_prior(p)?;
    let n = strip.n();
    let target = strip.syndrome(error);
    let mut residual = target.clone();
    let mut frozen = vec![false; n];
    let mut per_stage = Vec::new();
    let mut estimate = frozen.clone();
    for k in 0..=strip.k_max {
        let iters = strip_stage_iterations(k);
        let out = run_mp(
            &strip.graphs[k],
            &to_syndrome(residual.clone()),
            &prior,
            &mp_config(iters, eps),
            None,
        )?;
        per_stage.push(out.converged_at.unwrap_or(iters));
        if out.converged_at.is_some() || k == strip.k_max {
            estimate = frozen
                .iter()
                .zip(&out.estimate.x)
                .map(|(a, b)| a ^ b)
                .collect();
            break;
        }
        let mut now = vec![false; n];
        for q in 2 * strip.d..n {
            if strip.active(k, q) && !strip.active(k + 1, q) {
                now[q] = out.estimate.x[q];
            }
        }
        for (r, s) in residual.iter_mut().zip(strip.syndrome(&now)) {
            *r ^= s;
        }
        for (f, x) in frozen.iter_mut().zip(&now) {
            *f ^= x;
        }
    }
    let converged = strip.syndrome(&estimate) == target;
    let diff: Vec<bool> = estimate.iter().zip(error).map(|(a, b)| a ^ b).collect();
    let success = converged && !strip.cut_parity(&diff);
    Ok(StripOutcome {
        success,
        converged,
        estimate,
        per_stage_iterations: per_stage,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapStep {
    /// `e^(k+1)`, supported on the stage-`k+1` ladder.
    pub next: Vec<bool>,
    /// Frozen values on the rungs removed at stage `k+1`.
    pub decimated: Vec<bool>,
}

/// One application of the stage map: Min-Sum on the stage-`k` ladder,
/// decimation of the rungs removed at `k+1`, then renormalization onto
/// the stage-`k+1` ladder.
pub fn dilution_map_step(strip: &Strip, k: usize, e: &[bool], p: f64, eps: f64) -> Result<MapStep> {
    strip.check_len(e)?;
    if k >= strip.k_max {
        return Err(Error::Config(format!(
            "stage {k} has no successor (last stage {})",
            strip.k_max
        )));
    }
    if let Some(q) = (0..strip.n()).find(|&q| e[q] && !strip.active(k, q)) {
        return Err(Error::Config(format!(
            "qubit {q} is not on the stage-{k} ladder"
        )));
    }
    let prior = binary_prior(p)?;
    let iters = strip_stage_iterations(k);
    let out = run_mp(
        &strip.graphs[k],
        &to_syndrome(strip.syndrome(e)),
        &prior,
        &mp_config(iters, eps),
        None,
    )?;
    let mut decimated = vec![false; strip.n()];
    for q in 2 * strip.d..strip.n() {
        if strip.active(k, q) && !strip.active(k + 1, q) {
            decimated[q] = out.estimate.x[q];
        }
    }
    let residual: Vec<bool> = e.iter().zip(&decimated).map(|(a, b)| a ^ b).collect();
    let next = renormalize(strip, k + 1, &residual)?;
    Ok(MapStep { next, decimated })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockExperimentResult {
    pub k: usize,
    pub n_b: usize,
    pub nbar_c: f64,
    pub n_samples: usize,
    pub n_correct: usize,
    pub n_wrong: usize,
    pub w_corr: f64,
    pub w_wrong: f64,
}

impl BlockExperimentResult {
    pub const CSV_HEADER: &'static str = "k,n_B,nbar_C,n_samples,w_corr,w_wrong";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{:.6},{},{},{}",
            self.k, self.n_b, self.nbar_c, self.n_samples, self.w_corr, self.w_wrong
        )
    }
}

/// Qubits of the stage-`k` block starting at position `start`: both rails
/// over `2^(k+1)` positions and the rungs at its two ends and its middle.
pub fn block_qubits(strip: &Strip, k: usize, start: usize) -> Vec<usize> {
    let len = 1 << (k + 1);
    let mut q: Vec<usize> = (start..start + len)
        .flat_map(|i| [strip.rail_left(i), strip.rail_right(i)])
        .collect();
    q.extend([
        strip.rung(start),
        strip.rung(start + len / 2),
        strip.rung(start + len),
    ]);
    q
}

/// Block-to-cell experiment. A block of the stage-`k` ladder is embedded in
/// an otherwise clean ring of four blocks; `n_b` errors are placed uniformly
/// inside it, the stage map is applied, and the output weight is counted on
/// the block's image cell (the block minus its middle rung). Samples whose
/// middle rung is decimated correctly get weight `w_corr`, others `w_wrong`.
pub fn block_experiment(
    k: usize,
    n_b: usize,
    samples: usize,
    w_corr: f64,
    w_wrong: f64,
    p: f64,
    seed: u64,
) -> Result<BlockExperimentResult> {
    let len = 1usize << (k + 1);
    let strip = Strip::with_stages(4 * len, k + 1)?;
    let start = len;
    let block = block_qubits(&strip, k, start);
    if n_b > block.len() {
        return Err(Error::Config(format!(
            "block holds {} qubits, asked for {n_b} errors",
            block.len()
        )));
    }
    if !(w_corr >= 0.0 && w_wrong >= 0.0 && w_corr + w_wrong > 0.0) {
        return Err(Error::Config(
            "sample weights must be non-negative and not both zero".into(),
        ));
    }
    let middle = strip.rung(start + len / 2);
    let cell: Vec<usize> = block.iter().copied().filter(|&q| q != middle).collect();
    let (mut num, mut den) = (0.0, 0.0);
    let (mut n_correct, mut n_wrong) = (0, 0);
    for t in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t as u64));
        let mut e = vec![false; strip.n()];
        for i in sample_indices(&mut rng, block.len(), n_b) {
            e[block[i]] = true;
        }
        let step = dilution_map_step(&strip, k, &e, p, 0.0)?;
        let out = cell.iter().filter(|&&q| step.next[q]).count() as f64;
        let w = if step.decimated[middle] == e[middle] {
            n_correct += 1;
            w_corr
        } else {
            n_wrong += 1;
            w_wrong
        };
        num += w * out;
        den += w;
    }
    let nbar_c = if den > 0.0 { num / den } else { 0.0 };
    Ok(BlockExperimentResult {
        k,
        n_b,
        nbar_c,
        n_samples: samples,
        n_correct,
        n_wrong,
        w_corr,
        w_wrong,
    })
}
