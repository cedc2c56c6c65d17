//! Log-domain quaternary message passing on a (diluted) Tanner graph.
//!
//! Every message is a log-ratio `log(nu(0) / nu(1))` of a binary component: a
//! Z-check edge carries the X bit of its qubit, an X-check edge the Z bit. The
//! two components of a qubit are coupled only through the prior `psi(x, z)`
//! via the correlation messages `phi_X`, `phi_Z`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CheckType, DilutedGraph};
use crate::noise::{xz_coupling, Prior};
use crate::pauli::{PauliConfig, Syndrome};

/// Bound on all log-ratio messages.
pub const CLIP: f64 = 30.0;

/// Below this `|kappa|` the prior is treated as a product and the correlation
/// messages reduce to marginal log-ratios.
pub const PRODUCT_PRIOR_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MpMode {
    MinSum,
    SumProduct,
}

/// Marginalization over the opposite component inside the correlation message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhiMode {
    Max,
    Sum,
}

impl MpMode {
    pub fn name(self) -> &'static str {
        match self {
            MpMode::MinSum => "minsum",
            MpMode::SumProduct => "sumproduct",
        }
    }
}

impl std::str::FromStr for MpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "minsum" | "ms" => Ok(MpMode::MinSum),
            "sumproduct" | "sp" | "bp" => Ok(MpMode::SumProduct),
            other => Err(Error::Parse(format!(
                "unknown message-passing mode `{other}`"
            ))),
        }
    }
}

impl PhiMode {
    pub fn name(self) -> &'static str {
        match self {
            PhiMode::Max => "max",
            PhiMode::Sum => "sum",
        }
    }
}

impl std::str::FromStr for PhiMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "max" => Ok(PhiMode::Max),
            "sum" => Ok(PhiMode::Sum),
            other => Err(Error::Parse(format!("unknown phi mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MpConfig {
    pub mode: MpMode,
    pub damping: f64,
    pub max_iters: usize,
    pub clip: f64,
    pub phi_mode: PhiMode,
}

impl Default for MpConfig {
    fn default() -> Self {
        MpConfig {
            mode: MpMode::MinSum,
            damping: 0.0,
            max_iters: 20,
            clip: CLIP,
            phi_mode: PhiMode::Max,
        }
    }
}

impl MpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.damping) {
            return Err(Error::Config(format!(
                "damping must lie in [0, 1), got {}",
                self.damping
            )));
        }
        if !(self.clip > 0.0 && self.clip.is_finite()) {
            return Err(Error::Config(format!(
                "clip must be positive and finite, got {}",
                self.clip
            )));
        }
        Ok(())
    }

    /// Marginalization actually used by the correlation message.
    pub fn effective_phi_mode(&self) -> PhiMode {
        match self.mode {
            MpMode::SumProduct => PhiMode::Sum,
            MpMode::MinSum => self.phi_mode,
        }
    }
}

/// Compressed adjacency of one check type: edges are grouped by check.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeSet {
    /// `check_ptr[a]..check_ptr[a+1]` are the edges of check `a`.
    pub check_ptr: Vec<usize>,
    pub edge_qubit: Vec<usize>,
    pub edge_check: Vec<usize>,
    /// `qubit_ptr[q]..qubit_ptr[q+1]` index into `qubit_edges`.
    pub qubit_ptr: Vec<usize>,
    pub qubit_edges: Vec<usize>,
}

impl EdgeSet {
    fn new(n: usize, checks: &[Vec<usize>]) -> Self {
        let mut check_ptr = vec![0];
        let mut edge_qubit = Vec::new();
        let mut edge_check = Vec::new();
        for (a, support) in checks.iter().enumerate() {
            for &q in support {
                edge_qubit.push(q);
                edge_check.push(a);
            }
            check_ptr.push(edge_qubit.len());
        }
        let mut per_qubit = vec![Vec::new(); n];
        for (e, &q) in edge_qubit.iter().enumerate() {
            per_qubit[q].push(e);
        }
        let mut qubit_ptr = vec![0];
        let mut qubit_edges = Vec::with_capacity(edge_qubit.len());
        for list in per_qubit {
            qubit_edges.extend(list);
            qubit_ptr.push(qubit_edges.len());
        }
        EdgeSet {
            check_ptr,
            edge_qubit,
            edge_check,
            qubit_ptr,
            qubit_edges,
        }
    }

    pub fn num_edges(&self) -> usize {
        self.edge_qubit.len()
    }

    pub fn num_checks(&self) -> usize {
        self.check_ptr.len() - 1
    }

    pub fn check_edges(&self, a: usize) -> std::ops::Range<usize> {
        self.check_ptr[a]..self.check_ptr[a + 1]
    }

    pub fn edges_of_qubit(&self, q: usize) -> &[usize] {
        &self.qubit_edges[self.qubit_ptr[q]..self.qubit_ptr[q + 1]]
    }
}

/// A Tanner graph compiled for message passing.
#[derive(Debug, Clone, PartialEq)]
pub struct MpGraph {
    pub n: usize,
    pub active: Vec<bool>,
    pub active_list: Vec<usize>,
    /// Z-check edges, carrying X components.
    pub z: EdgeSet,
    /// X-check edges, carrying Z components.
    pub x: EdgeSet,
}

impl MpGraph {
    pub fn new(graph: &DilutedGraph) -> Self {
        let n = graph.n();
        let strip = |checks: &[Vec<usize>]| -> Vec<Vec<usize>> {
            checks
                .iter()
                .map(|s| s.iter().copied().filter(|&q| graph.active[q]).collect())
                .collect()
        };
        let z = EdgeSet::new(n, &strip(graph.check_neighbors(CheckType::Z)));
        let x = EdgeSet::new(n, &strip(graph.check_neighbors(CheckType::X)));
        let active_list = (0..n).filter(|&q| graph.active[q]).collect();
        MpGraph {
            n,
            active: graph.active.clone(),
            active_list,
            z,
            x,
        }
    }

    pub fn edges(&self, ty: CheckType) -> &EdgeSet {
        match ty {
            CheckType::Z => &self.z,
            CheckType::X => &self.x,
        }
    }

    fn check_dims(&self, syndrome: &Syndrome) -> Result<()> {
        if syndrome.z_checks.len() != self.z.num_checks() {
            return Err(Error::LengthMismatch {
                expected: self.z.num_checks(),
                got: syndrome.z_checks.len(),
            });
        }
        if syndrome.x_checks.len() != self.x.num_checks() {
            return Err(Error::LengthMismatch {
                expected: self.x.num_checks(),
                got: syndrome.x_checks.len(),
            });
        }
        Ok(())
    }

    /// Syndrome of `estimate` restricted to this graph's edges.
    pub fn syndrome_of(&self, estimate: &PauliConfig) -> Syndrome {
        let parity = |set: &EdgeSet, bits: &[bool]| -> Vec<bool> {
            (0..set.num_checks())
                .map(|a| {
                    set.check_edges(a)
                        .fold(false, |acc, e| acc ^ bits[set.edge_qubit[e]])
                })
                .collect()
        };
        Syndrome {
            z_checks: parity(&self.z, &estimate.x),
            x_checks: parity(&self.x, &estimate.z),
        }
    }
}

/// Log-domain prior with the zero-probability entries kept as `-inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPrior {
    /// `[[ln psi(0,0), ln psi(0,1)], [ln psi(1,0), ln psi(1,1)]]`, indexed `[x][z]`.
    pub l: [[f64; 2]; 2],
    /// Marginal log-ratios used when the prior factorizes.
    pub product: Option<(f64, f64)>,
}

impl LogPrior {
    pub fn new(prior: &Prior, clip: f64) -> Self {
        let l = [
            [prior.psi(false, false).ln(), prior.psi(false, true).ln()],
            [prior.psi(true, false).ln(), prior.psi(true, true).ln()],
        ];
        let product = (xz_coupling(prior).abs() <= PRODUCT_PRIOR_TOL).then(|| {
            let px = prior.marginal_x();
            let pz = prior.marginal_z();
            (log_ratio(1.0 - px, px, clip), log_ratio(1.0 - pz, pz, clip))
        });
        LogPrior { l, product }
    }
}

fn log_ratio(a: f64, b: f64, clip: f64) -> f64 {
    clamp_ratio(a.ln() - b.ln(), clip)
}

fn clamp_ratio(v: f64, clip: f64) -> f64 {
    if v.is_nan() {
        0.0
    } else {
        v.clamp(-clip, clip)
    }
}

fn lse(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn combine(a: f64, b: f64, mode: PhiMode) -> f64 {
    match mode {
        PhiMode::Max => a.max(b),
        PhiMode::Sum => lse(a, b),
    }
}

/// Correlation messages `(phi_X, phi_Z)` as clipped log-ratios, given the summed
/// incoming log-ratios `s_x` from X-checks (about z) and `s_z` from Z-checks
/// (about x).
pub fn correlation_message(
    s_x: f64,
    s_z: f64,
    prior: &LogPrior,
    mode: PhiMode,
    clip: f64,
) -> (f64, f64) {
    if let Some((lx, lz)) = prior.product {
        return (lx, lz);
    }
    let l = &prior.l;
    // incoming belief on z normalized to nu(0) = 1, nu(1) = exp(-s_x)
    let phi_x = combine(l[0][0], l[0][1] - s_x, mode) - combine(l[1][0], l[1][1] - s_x, mode);
    let phi_z = combine(l[0][0], l[1][0] - s_z, mode) - combine(l[0][1], l[1][1] - s_z, mode);
    (clamp_ratio(phi_x, clip), clamp_ratio(phi_z, clip))
}

/// Messages and fields of one message-passing run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageState {
    /// Variable-to-Z-check messages (X component), indexed by Z-edge.
    pub var_to_z: Vec<f64>,
    /// Z-check-to-variable messages.
    pub z_to_var: Vec<f64>,
    pub var_to_x: Vec<f64>,
    pub x_to_var: Vec<f64>,
    pub h_x: Vec<f64>,
    pub h_z: Vec<f64>,
    /// Fields of the previous iteration, used by the damping term.
    pub h_prev_x: Vec<f64>,
    pub h_prev_z: Vec<f64>,
    pub iteration: usize,
}

impl MessageState {
    /// Prior-only start: variable-to-check messages `(1 - eps) * phi` with
    /// uniform incoming beliefs, fields at the bare prior, no memory.
    pub fn init(graph: &MpGraph, prior: &Prior, config: &MpConfig) -> Self {
        let lp = LogPrior::new(prior, config.clip);
        let mode = config.effective_phi_mode();
        let (phi_x, phi_z) = correlation_message(0.0, 0.0, &lp, mode, config.clip);
        let keep = 1.0 - config.damping;
        let mut h_x = vec![0.0; graph.n];
        let mut h_z = vec![0.0; graph.n];
        for &q in &graph.active_list {
            h_x[q] = phi_x;
            h_z[q] = phi_z;
        }
        MessageState {
            var_to_z: vec![clamp_ratio(keep * phi_x, config.clip); graph.z.num_edges()],
            z_to_var: vec![0.0; graph.z.num_edges()],
            var_to_x: vec![clamp_ratio(keep * phi_z, config.clip); graph.x.num_edges()],
            x_to_var: vec![0.0; graph.x.num_edges()],
            h_x,
            h_z,
            h_prev_x: vec![0.0; graph.n],
            h_prev_z: vec![0.0; graph.n],
            iteration: 0,
        }
    }

    pub fn is_finite_within(&self, clip: f64) -> bool {
        [
            &self.var_to_z,
            &self.z_to_var,
            &self.var_to_x,
            &self.x_to_var,
        ]
        .iter()
        .all(|v| v.iter().all(|m| m.is_finite() && m.abs() <= clip))
    }
}

fn check_update_set(
    set: &EdgeSet,
    syndrome: &[bool],
    incoming: &[f64],
    out: &mut [f64],
    mode: MpMode,
    clip: f64,
) {
    for a in 0..set.num_checks() {
        let range = set.check_edges(a);
        if range.is_empty() {
            continue;
        }
        let flip = syndrome[a];
        match mode {
            MpMode::MinSum => {
                let mut negative = flip;
                let mut min1 = clip;
                let mut min2 = clip;
                let mut arg = usize::MAX;
                for e in range.clone() {
                    let m = incoming[e];
                    negative ^= m < 0.0;
                    let mag = m.abs();
                    if mag < min1 {
                        min2 = min1;
                        min1 = mag;
                        arg = e;
                    } else if mag < min2 {
                        min2 = mag;
                    }
                }
                for e in range {
                    let mag = if e == arg { min2 } else { min1 };
                    let neg = negative ^ (incoming[e] < 0.0);
                    out[e] = if neg { -mag } else { mag };
                }
            }
            MpMode::SumProduct => {
                let len = range.len();
                let start = range.start;
                let t: Vec<f64> = range.clone().map(|e| (incoming[e] / 2.0).tanh()).collect();
                let mut prefix = vec![1.0; len + 1];
                for i in 0..len {
                    prefix[i + 1] = prefix[i] * t[i];
                }
                let mut suffix = 1.0;
                for i in (0..len).rev() {
                    let prod = prefix[i] * suffix;
                    let v = if len == 1 {
                        clip
                    } else {
                        clamp_ratio(2.0 * prod.atanh(), clip)
                    };
                    out[start + i] = if flip { -v } else { v };
                    suffix *= t[i];
                }
            }
        }
    }
}

/// Factor-to-variable update on both check types.
pub fn check_update(
    graph: &MpGraph,
    syndrome: &Syndrome,
    state: &mut MessageState,
    config: &MpConfig,
) {
    check_update_set(
        &graph.z,
        &syndrome.z_checks,
        &state.var_to_z,
        &mut state.z_to_var,
        config.mode,
        config.clip,
    );
    check_update_set(
        &graph.x,
        &syndrome.x_checks,
        &state.var_to_x,
        &mut state.x_to_var,
        config.mode,
        config.clip,
    );
}

/// Variable-to-factor update. Also refreshes the effective fields and shifts
/// the previous fields into the damping memory.
pub fn variable_update(
    graph: &MpGraph,
    prior: &LogPrior,
    state: &mut MessageState,
    config: &MpConfig,
) {
    let eps = config.damping;
    let keep = 1.0 - eps;
    let clip = config.clip;
    let mode = config.effective_phi_mode();
    for &q in &graph.active_list {
        let ze = graph.z.edges_of_qubit(q);
        let xe = graph.x.edges_of_qubit(q);
        let s_z: f64 = ze.iter().map(|&e| state.z_to_var[e]).sum();
        let s_x: f64 = xe.iter().map(|&e| state.x_to_var[e]).sum();
        let (phi_x, phi_z) = correlation_message(s_x, s_z, prior, mode, clip);
        let base_x = keep * phi_x + eps * state.h_prev_x[q];
        let base_z = keep * phi_z + eps * state.h_prev_z[q];
        for &e in ze {
            state.var_to_z[e] = clamp_ratio(s_z - state.z_to_var[e] + base_x, clip);
        }
        for &e in xe {
            state.var_to_x[e] = clamp_ratio(s_x - state.x_to_var[e] + base_z, clip);
        }
        let h_x = s_z + phi_x;
        let h_z = s_x + phi_z;
        state.h_x[q] = h_x;
        state.h_z[q] = h_z;
        state.h_prev_x[q] = h_x;
        state.h_prev_z[q] = h_z;
    }
}

/// `(h_X, h_Z)` recomputed from the current check-to-variable messages.
pub fn effective_fields(
    graph: &MpGraph,
    prior: &Prior,
    state: &MessageState,
    config: &MpConfig,
) -> (Vec<f64>, Vec<f64>) {
    let lp = LogPrior::new(prior, config.clip);
    let mut h_x = vec![0.0; graph.n];
    let mut h_z = vec![0.0; graph.n];
    for &q in &graph.active_list {
        let s_z: f64 = graph
            .z
            .edges_of_qubit(q)
            .iter()
            .map(|&e| state.z_to_var[e])
            .sum();
        let s_x: f64 = graph
            .x
            .edges_of_qubit(q)
            .iter()
            .map(|&e| state.x_to_var[e])
            .sum();
        let (phi_x, phi_z) =
            correlation_message(s_x, s_z, &lp, config.effective_phi_mode(), config.clip);
        h_x[q] = s_z + phi_x;
        h_z[q] = s_x + phi_z;
    }
    (h_x, h_z)
}

/// `x = 1` iff `h_X < 0`, `z = 1` iff `h_Z < 0`; inactive qubits stay I.
pub fn hard_decision(graph: &MpGraph, h_x: &[f64], h_z: &[f64]) -> PauliConfig {
    let mut e = PauliConfig::identity(graph.n);
    for &q in &graph.active_list {
        e.x[q] = h_x[q] < 0.0;
        e.z[q] = h_z[q] < 0.0;
    }
    e
}

/// One flooding iteration.
pub fn iterate(
    graph: &MpGraph,
    syndrome: &Syndrome,
    prior: &LogPrior,
    state: &mut MessageState,
    config: &MpConfig,
) {
    check_update(graph, syndrome, state, config);
    variable_update(graph, prior, state, config);
    state.iteration += 1;
}

#[derive(Debug, Clone, PartialEq)]
pub struct MpOutcome {
    pub state: MessageState,
    /// Iteration (1-based) at which the hard decision reproduced the syndrome.
    pub converged_at: Option<usize>,
    pub estimate: PauliConfig,
}

/// Run up to `config.max_iters` iterations, stopping as soon as the hard
/// decision on the active qubits reproduces `syndrome`.
pub fn run_mp(
    graph: &MpGraph,
    syndrome: &Syndrome,
    prior: &Prior,
    config: &MpConfig,
    init: Option<MessageState>,
) -> Result<MpOutcome> {
    config.validate()?;
    graph.check_dims(syndrome)?;
    let lp = LogPrior::new(prior, config.clip);
    let mut state = init.unwrap_or_else(|| MessageState::init(graph, prior, config));
    let mut estimate = hard_decision(graph, &state.h_x, &state.h_z);
    let mut converged_at = None;
    for t in 1..=config.max_iters {
        iterate(graph, syndrome, &lp, &mut state, config);
        estimate = hard_decision(graph, &state.h_x, &state.h_z);
        if graph.syndrome_of(&estimate) == *syndrome {
            converged_at = Some(t);
            break;
        }
    }
    Ok(MpOutcome {
        state,
        converged_at,
        estimate,
    })
}
