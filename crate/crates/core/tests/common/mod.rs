//! Reference computations shared by the property suites and the acceptance run.
#![allow(dead_code)]

use dilution_core::mp::{iterate, EdgeSet, LogPrior, MessageState, CLIP};
use dilution_core::noise::sample_prior;
use dilution_core::{
    sparsify, syndrome, DilutedGraph, MpConfig, MpGraph, MpMode, PatternFamily, PhiMode, Prior,
    SparsificationPattern, SurfaceCode, Syndrome,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random Tanner tree: node 0 is a qubit, every later node hangs off an
/// earlier node of the other kind, and every check ends with degree >= 2.
pub fn random_tree(parents: &[(usize, bool)]) -> (usize, Vec<Vec<usize>>, Vec<Vec<usize>>) {
    // kind: Some(qubit index) or check (type, index)
    enum Node {
        Qubit(usize),
        Check(bool, usize),
    }
    let mut nodes = vec![Node::Qubit(0)];
    let mut n = 1;
    let mut z: Vec<Vec<usize>> = Vec::new();
    let mut x: Vec<Vec<usize>> = Vec::new();
    for &(pick, is_z) in parents {
        let parent = pick % nodes.len();
        match nodes[parent] {
            Node::Qubit(q) => {
                let list = if is_z { &mut z } else { &mut x };
                list.push(vec![q]);
                nodes.push(Node::Check(is_z, list.len() - 1));
            }
            Node::Check(t, a) => {
                let list = if t { &mut z } else { &mut x };
                list[a].push(n);
                nodes.push(Node::Qubit(n));
                n += 1;
            }
        }
    }
    for list in [&mut z, &mut x] {
        for support in list.iter_mut() {
            if support.len() < 2 {
                support.push(n);
                n += 1;
            }
        }
    }
    (n, z, x)
}

fn log_psi(prior: &Prior, x: bool, z: bool) -> f64 {
    prior.psi(x, z).ln()
}

/// Exact per-qubit (h_X, h_Z) as max- or sum-marginal log-ratios; infinite
/// when a value is excluded.
pub fn exact_fields(
    n: usize,
    z: &[Vec<usize>],
    x: &[Vec<usize>],
    syn: &Syndrome,
    prior: &Prior,
    sum: bool,
) -> Vec<(f64, f64)> {
    let neg = f64::NEG_INFINITY;
    let mut acc = vec![[[neg; 2]; 2]; n];
    let combine = |a: f64, b: f64| {
        if sum {
            let m = a.max(b);
            if m == neg {
                neg
            } else {
                m + ((a - m).exp() + (b - m).exp()).ln()
            }
        } else {
            a.max(b)
        }
    };
    for mask in 0u64..(1 << (2 * n)) {
        let xb: Vec<bool> = (0..n).map(|q| mask >> q & 1 == 1).collect();
        let zb: Vec<bool> = (0..n).map(|q| mask >> (n + q) & 1 == 1).collect();
        let ok_z = z
            .iter()
            .zip(&syn.z_checks)
            .all(|(s, &b)| s.iter().fold(false, |a, &q| a ^ xb[q]) == b);
        let ok_x = x
            .iter()
            .zip(&syn.x_checks)
            .all(|(s, &b)| s.iter().fold(false, |a, &q| a ^ zb[q]) == b);
        if !ok_z || !ok_x {
            continue;
        }
        let w: f64 = (0..n).map(|q| log_psi(prior, xb[q], zb[q])).sum();
        for q in 0..n {
            acc[q][0][xb[q] as usize] = combine(acc[q][0][xb[q] as usize], w);
            acc[q][1][zb[q] as usize] = combine(acc[q][1][zb[q] as usize], w);
        }
    }
    acc.iter()
        .map(|a| (a[0][0] - a[0][1], a[1][0] - a[1][1]))
        .collect()
}

pub fn run_fields(
    graph: &MpGraph,
    syn: &Syndrome,
    prior: &Prior,
    config: &MpConfig,
    iters: usize,
) -> MessageState {
    let lp = LogPrior::new(prior, config.clip);
    let mut state = MessageState::init(graph, prior, config);
    for _ in 0..iters {
        iterate(graph, syn, &lp, &mut state, config);
    }
    state
}

pub fn random_prior(a: f64, b: f64, c: f64) -> Prior {
    let pi = 0.55 + 0.4 * a;
    let rest = 1.0 - pi;
    let px = rest * b;
    let py = (rest - px) * c;
    Prior::new(pi, px, py, rest - px - py).unwrap()
}

/// Runs message passing on the tree built from `parents` and compares the
/// fields with enumeration. `Ok(false)` means the tree was too large to enumerate.
pub fn check_tree(
    parents: &[(usize, bool)],
    prior: &Prior,
    seed: u64,
    mode: MpMode,
    tol: f64,
) -> Result<bool, String> {
    let (n, z, x) = random_tree(parents);
    if n > 8 {
        return Ok(false);
    }
    let graph = MpGraph::new(&DilutedGraph::from_checks(n, z.clone(), x.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = sample_prior(prior, n, &mut rng);
    let syn = Syndrome {
        z_checks: z
            .iter()
            .map(|s| s.iter().fold(false, |a, &q| a ^ e.x[q]))
            .collect(),
        x_checks: x
            .iter()
            .map(|s| s.iter().fold(false, |a, &q| a ^ e.z[q]))
            .collect(),
    };
    let (phi, sum) = match mode {
        MpMode::MinSum => (PhiMode::Max, false),
        MpMode::SumProduct => (PhiMode::Sum, true),
    };
    let config = MpConfig {
        mode,
        damping: 0.0,
        max_iters: 0,
        clip: CLIP,
        phi_mode: phi,
    };
    let state = run_fields(&graph, &syn, prior, &config, 2 * n + 2);
    let exact = exact_fields(n, &z, &x, &syn, prior, sum);
    for q in 0..n {
        for (got, want) in [(state.h_x[q], exact[q].0), (state.h_z[q], exact[q].1)] {
            let ok = if want.is_finite() {
                (got - want).abs() <= tol
            } else {
                got.signum() == want.signum() && got.abs() >= CLIP - 1e-9
            };
            if !ok {
                return Err(format!("qubit {q}: got {got}, exact {want}"));
            }
        }
    }
    Ok(true)
}

/// Independent binary Min-Sum on one edge set, written against the same
/// arithmetic as the quaternary engine.
pub struct BinaryMinSum<'a> {
    set: &'a EdgeSet,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    h_prev: Vec<f64>,
}

impl<'a> BinaryMinSum<'a> {
    pub fn new(set: &'a EdgeSet, n: usize, llr: f64, eps: f64) -> Self {
        let init = ((1.0 - eps) * llr).clamp(-CLIP, CLIP);
        BinaryMinSum {
            set,
            v2c: vec![init; set.num_edges()],
            c2v: vec![0.0; set.num_edges()],
            h_prev: vec![0.0; n],
        }
    }

    pub fn step(&mut self, syn: &[bool], active: &[usize], llr: f64, eps: f64) {
        for a in 0..self.set.num_checks() {
            let r = self.set.check_edges(a);
            for e in r.clone() {
                let mut neg = syn[a];
                let mut mag = CLIP;
                for f in r.clone() {
                    if f != e {
                        neg ^= self.v2c[f] < 0.0;
                        mag = mag.min(self.v2c[f].abs());
                    }
                }
                self.c2v[e] = if neg { -mag } else { mag };
            }
        }
        for &q in active {
            let edges = self.set.edges_of_qubit(q);
            let s: f64 = edges.iter().map(|&e| self.c2v[e]).sum();
            let base = (1.0 - eps) * llr + eps * self.h_prev[q];
            for &e in edges {
                self.v2c[e] = (s - self.c2v[e] + base).clamp(-CLIP, CLIP);
            }
            self.h_prev[q] = s + llr;
        }
    }
}

/// Runs quaternary Min-Sum with a product prior next to two independent
/// binary runs and reports the first message that differs in any bit.
pub fn check_decoupling(
    d: usize,
    s: usize,
    px: f64,
    pz: f64,
    eps: f64,
    diag: bool,
    seed: u64,
) -> Result<(), String> {
    let code = SurfaceCode::new(d).unwrap();
    let family = if diag {
        PatternFamily::DV
    } else {
        PatternFamily::CH
    };
    let graph = MpGraph::new(&sparsify(&code, SparsificationPattern::new(family, s)).unwrap());
    let prior = Prior::product(px, pz).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let e = sample_prior(&Prior::product(0.1, 0.1).unwrap(), code.n, &mut rng);
    let syn = syndrome(&code, &e).unwrap();
    let config = MpConfig {
        damping: eps,
        phi_mode: PhiMode::Sum,
        ..MpConfig::default()
    };
    let lp = LogPrior::new(&prior, CLIP);
    let mut state = MessageState::init(&graph, &prior, &config);
    // the engine derives its log-ratios from the prior's marginals
    let (mx, mz) = (prior.marginal_x(), prior.marginal_z());
    let lx = ((1.0 - mx).ln() - mx.ln()).clamp(-CLIP, CLIP);
    let lz = ((1.0 - mz).ln() - mz.ln()).clamp(-CLIP, CLIP);
    let mut bz = BinaryMinSum::new(&graph.z, code.n, lx, eps);
    let mut bx = BinaryMinSum::new(&graph.x, code.n, lz, eps);
    let bits = |v: &[f64]| v.iter().map(|m| m.to_bits()).collect::<Vec<_>>();
    for it in 0..25 {
        iterate(&graph, &syn, &lp, &mut state, &config);
        bz.step(&syn.z_checks, &graph.active_list, lx, eps);
        bx.step(&syn.x_checks, &graph.active_list, lz, eps);
        let same = bits(&state.var_to_z) == bits(&bz.v2c)
            && bits(&state.z_to_var) == bits(&bz.c2v)
            && bits(&state.var_to_x) == bits(&bx.v2c)
            && bits(&state.x_to_var) == bits(&bx.c2v);
        if !same {
            return Err(format!("messages differ at iteration {}", it + 1));
        }
    }
    Ok(())
}
