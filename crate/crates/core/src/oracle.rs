//! Exact reference computations: minimum-weight corrections on (diluted)
//! lattices, error-correcting radii, cavity discrepancies and the reflection
//! isomorphism between the two component lattices.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    sparsify, CheckType, ComponentLattice, DilutedGraph, Orientation, PatternFamily,
    SparsificationPattern, SurfaceCode,
};
use crate::noise::{xz_coupling, Prior};
use crate::pauli::PauliConfig;

/// Largest defect set handled by the exact matcher.
pub const MAX_DEFECTS: usize = 16;

const INF: u32 = 1 << 28;
const NONE: u32 = u32::MAX;

/// All-pairs shortest paths on a component lattice, tracking the parity of
/// crossings of a fixed qubit set `L` (a logical representative). Two
/// corrections with the same defects are in the same class iff their
/// crossing parities agree.
#[derive(Debug, Clone)]
pub struct Matcher {
    num_vertices: usize,
    edge_qubit: Vec<usize>,
    edge_ends: Vec<(usize, Option<usize>)>,
    /// `dist[(src * V + v) * 2 + p]`.
    dist: Vec<u32>,
    /// Predecessor `(edge, previous state)` on a shortest path from `src`.
    pred: Vec<(u32, u32)>,
    /// `bdist[src * 2 + p]`: shortest route to the boundary.
    bdist: Vec<u32>,
    /// Final `(state, dangling edge)` of the best boundary route.
    bexit: Vec<(u32, u32)>,
}

impl Matcher {
    pub fn new(lattice: &ComponentLattice, logical: &[usize]) -> Self {
        let v_count = lattice.num_vertices;
        let max_q = lattice.edges.iter().map(|e| e.qubit + 1).max().unwrap_or(0);
        let max_q = max_q.max(logical.iter().map(|&q| q + 1).max().unwrap_or(0));
        let mut in_l = vec![false; max_q];
        for &q in logical {
            in_l[q] = true;
        }
        let edge_qubit: Vec<usize> = lattice.edges.iter().map(|e| e.qubit).collect();
        let edge_ends: Vec<(usize, Option<usize>)> =
            lattice.edges.iter().map(|e| (e.a, e.b)).collect();
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); v_count];
        let mut dangling: Vec<Vec<usize>> = vec![Vec::new(); v_count];
        for (ei, &(a, b)) in edge_ends.iter().enumerate() {
            match b {
                Some(b) => {
                    adj[a].push((b, ei));
                    adj[b].push((a, ei));
                }
                None => dangling[a].push(ei),
            }
        }
        let flip = |ei: usize| in_l[edge_qubit[ei]] as usize;
        let states = 2 * v_count;
        let mut dist = vec![INF; v_count * states];
        let mut pred = vec![(NONE, NONE); v_count * states];
        let mut bdist = vec![INF; v_count * 2];
        let mut bexit = vec![(NONE, NONE); v_count * 2];
        let mut queue = VecDeque::new();
        for src in 0..v_count {
            let base = src * states;
            dist[base + 2 * src] = 0;
            queue.clear();
            queue.push_back(2 * src);
            while let Some(st) = queue.pop_front() {
                let (u, p) = (st / 2, st % 2);
                let du = dist[base + st];
                for &(w, ei) in &adj[u] {
                    let ns = 2 * w + (p ^ flip(ei));
                    if dist[base + ns] == INF {
                        dist[base + ns] = du + 1;
                        pred[base + ns] = (ei as u32, st as u32);
                        queue.push_back(ns);
                    }
                }
                for &ei in &dangling[u] {
                    let bp = p ^ flip(ei);
                    if du + 1 < bdist[src * 2 + bp] {
                        bdist[src * 2 + bp] = du + 1;
                        bexit[src * 2 + bp] = (st as u32, ei as u32);
                    }
                }
            }
        }
        Matcher {
            num_vertices: v_count,
            edge_qubit,
            edge_ends,
            dist,
            pred,
            bdist,
            bexit,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    #[inline]
    fn d(&self, u: usize, v: usize, p: usize) -> u32 {
        self.dist[(u * self.num_vertices + v) * 2 + p]
    }

    fn table(
        &self,
        defects: &[usize],
        choice: Option<&mut Vec<[(u8, u8); 2]>>,
        f: &mut Vec<[u32; 2]>,
    ) {
        let m = defects.len();
        f.clear();
        f.resize(1 << m, [INF, INF]);
        f[0] = [0, INF];
        let mut choice = choice;
        if let Some(c) = choice.as_deref_mut() {
            c.clear();
            c.resize(1 << m, [(u8::MAX, 0); 2]);
        }
        for mask in 1usize..(1 << m) {
            let i = mask.trailing_zeros() as usize;
            let rest = mask & !(1 << i);
            let di = defects[i];
            let mut best = [INF, INF];
            let mut arg = [(u8::MAX, 0u8); 2];
            for q in 0..2 {
                let bd = self.bdist[di * 2 + q];
                if bd >= INF {
                    continue;
                }
                for p in 0..2 {
                    let c = f[rest][p].saturating_add(bd);
                    if c < best[p ^ q] {
                        best[p ^ q] = c;
                        arg[p ^ q] = (i as u8, q as u8);
                    }
                }
            }
            let mut others = rest;
            while others != 0 {
                let j = others.trailing_zeros() as usize;
                others &= others - 1;
                let rest2 = rest & !(1 << j);
                for q in 0..2 {
                    let dd = self.d(di, defects[j], q);
                    if dd >= INF {
                        continue;
                    }
                    for p in 0..2 {
                        let c = f[rest2][p].saturating_add(dd);
                        if c < best[p ^ q] {
                            best[p ^ q] = c;
                            arg[p ^ q] = (j as u8, q as u8);
                        }
                    }
                }
            }
            f[mask] = [best[0].min(INF), best[1].min(INF)];
            if let Some(c) = choice.as_deref_mut() {
                c[mask] = arg;
            }
        }
    }

    /// Minimum correction weight in each crossing-parity class; `None` when
    /// no correction of that class exists.
    pub fn coset_costs(&self, defects: &[usize]) -> Result<[Option<u32>; 2]> {
        self.check_defects(defects)?;
        let mut f = Vec::new();
        self.table(defects, None, &mut f);
        let last = f[(1 << defects.len()) - 1];
        Ok(last.map(|c| (c < INF).then_some(c)))
    }

    /// Same as [`coset_costs`](Self::coset_costs) with a caller-provided
    /// buffer and no validation.
    pub fn coset_costs_with(&self, defects: &[usize], buf: &mut Vec<[u32; 2]>) -> [u32; 2] {
        self.table(defects, None, buf);
        buf[(1 << defects.len()) - 1]
    }

    fn check_defects(&self, defects: &[usize]) -> Result<()> {
        if defects.len() > MAX_DEFECTS {
            return Err(Error::TooManyDefects {
                got: defects.len(),
                max: MAX_DEFECTS,
            });
        }
        if let Some(&v) = defects.iter().find(|&&v| v >= self.num_vertices) {
            return Err(Error::Parse(format!("defect vertex {v} out of range")));
        }
        Ok(())
    }

    /// A minimum-weight correction, restricted to parity class `parity` if given.
    pub fn correction(&self, defects: &[usize], parity: Option<usize>) -> Result<Vec<usize>> {
        self.check_defects(defects)?;
        let mut sorted = defects.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Parse("repeated defect vertex".into()));
        }
        let m = sorted.len();
        let mut f = Vec::new();
        let mut choice = Vec::new();
        self.table(&sorted, Some(&mut choice), &mut f);
        let full = (1usize << m) - 1;
        let mut p = match parity {
            Some(p) => p & 1,
            None => {
                if f[full][0] <= f[full][1] {
                    0
                } else {
                    1
                }
            }
        };
        if f[full][p] >= INF {
            return Err(Error::Unsatisfiable);
        }
        let mut used = vec![false; self.edge_qubit.len()];
        let mut mask = full;
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            let (j, q) = choice[mask][p];
            let (j, q) = (j as usize, q as usize);
            if j == i {
                self.walk_boundary(sorted[i], q, &mut used);
                mask &= !(1 << i);
            } else {
                self.walk(sorted[i], sorted[j], q, &mut used);
                mask &= !(1 << i) & !(1 << j);
            }
            p ^= q;
        }
        let mut qubits: Vec<usize> = used
            .iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(ei, _)| self.edge_qubit[ei])
            .collect();
        qubits.sort_unstable();
        Ok(qubits)
    }

    fn walk_from(&self, src: usize, mut st: usize, used: &mut [bool]) {
        let states = 2 * self.num_vertices;
        while st != 2 * src {
            let (ei, prev) = self.pred[src * states + st];
            used[ei as usize] ^= true;
            st = prev as usize;
        }
    }

    fn walk(&self, src: usize, dst: usize, parity: usize, used: &mut [bool]) {
        self.walk_from(src, 2 * dst + parity, used);
    }

    fn walk_boundary(&self, src: usize, parity: usize, used: &mut [bool]) {
        let (st, ei) = self.bexit[src * 2 + parity];
        used[ei as usize] ^= true;
        self.walk_from(src, st as usize, used);
    }

    /// Endpoints of the lattice edge carrying `qubit`, if present.
    pub fn endpoints(&self, qubit: usize) -> Option<(usize, Option<usize>)> {
        self.edge_qubit
            .iter()
            .position(|&q| q == qubit)
            .map(|ei| self.edge_ends[ei])
    }
}

/// Exact minimum-weight qubit set on `lattice` whose boundary is `defects`.
pub fn min_weight_correction(lattice: &ComponentLattice, defects: &[usize]) -> Result<Vec<usize>> {
    Matcher::new(lattice, &[]).correction(defects, None)
}

fn defects_of(lattice_checks: &[Vec<usize>], bits: &[bool]) -> Vec<usize> {
    lattice_checks
        .iter()
        .enumerate()
        .filter(|(_, s)| s.iter().fold(false, |acc, &q| acc ^ bits[q]))
        .map(|(a, _)| a)
        .collect()
}

/// Minimum-weight configuration supported on `graph` with the same syndrome as
/// `e`, computed separately for the X part (Z-lattice) and Z part (X-lattice).
pub fn effective_error(
    code: &SurfaceCode,
    graph: &DilutedGraph,
    e: &PauliConfig,
) -> Result<PauliConfig> {
    if e.len() != code.n || graph.n() != code.n {
        return Err(Error::LengthMismatch {
            expected: code.n,
            got: e.len(),
        });
    }
    let mut out = PauliConfig::identity(code.n);
    let z_defects = defects_of(&code.z_checks, &e.x);
    if !z_defects.is_empty() {
        for q in min_weight_correction(&graph.component_lattice(CheckType::Z), &z_defects)? {
            out.x[q] = true;
        }
    }
    let x_defects = defects_of(&code.x_checks, &e.z);
    if !x_defects.is_empty() {
        for q in min_weight_correction(&graph.component_lattice(CheckType::X), &x_defects)? {
            out.z[q] = true;
        }
    }
    Ok(out)
}

/// Lower bound on the radius of the diluted Z-lattice for the families it covers.
pub fn theorem_lower_bound(d: usize, pattern: SparsificationPattern) -> Option<usize> {
    let s = pattern.s;
    if s == 0 {
        return Some((d - 1) / 2);
    }
    match pattern.family {
        PatternFamily::DH => Some((d - 1) / (2 * s.div_ceil(2) + 2)),
        PatternFamily::CH => Some((d - 1) / ((s - 1) / 2 + 2)),
        _ => None,
    }
}

/// How the ideal decoder resolves a tie between the two logical classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TieRule {
    /// A tie is a failure: some minimum-weight correction is wrong.
    Strict,
    /// A tie is resolved in favour of the true class.
    Favorable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusReport {
    pub d: usize,
    pub pattern: PatternFamily,
    pub s: usize,
    pub tie_rule: TieRule,
    pub computed_radius: usize,
    pub theorem_lower_bound: Option<usize>,
    /// Largest weight enumerated exhaustively.
    pub max_weight_checked: usize,
    /// True when no failure was found up to `max_weight_checked`, so the
    /// computed radius is only a lower bound.
    pub lower_bound_only: bool,
    pub errors_checked: u64,
    /// Minimal failing errors (single-X, qubit indices).
    pub witnesses: Vec<Vec<usize>>,
}

impl RadiusReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Radius of the diluted Z-lattice against single-X errors anywhere on the
/// full lattice, by exhaustive enumeration with weight cap `⌊(d-1)/2⌋ + 1`.
pub fn error_correcting_radius(
    code: &SurfaceCode,
    pattern: SparsificationPattern,
) -> Result<RadiusReport> {
    error_correcting_radius_capped(code, pattern, TieRule::Strict, (code.d - 1) / 2 + 1, 4)
}

/// As [`error_correcting_radius`] with an explicit weight cap and a limit on
/// the number of witnesses kept.
pub fn error_correcting_radius_capped(
    code: &SurfaceCode,
    pattern: SparsificationPattern,
    tie_rule: TieRule,
    max_weight: usize,
    max_witnesses: usize,
) -> Result<RadiusReport> {
    let graph = sparsify(code, pattern)?;
    let lattice = graph.component_lattice(CheckType::Z);
    if lattice.num_vertices > 128 {
        return Err(Error::NotApplicable(format!(
            "exhaustive radius needs at most 128 checks per type, d={} has {}",
            code.d, lattice.num_vertices
        )));
    }
    let matcher = Matcher::new(&lattice, &code.logical_z);
    let n = code.n;
    // per-qubit defect toggles on the full lattice and class parity
    let toggles: Vec<u128> = (0..n)
        .map(|q| {
            code.qubit_checks(q, CheckType::Z)
                .iter()
                .fold(0u128, |m, &a| m ^ (1u128 << a))
        })
        .collect();
    let in_l: Vec<bool> = {
        let mut v = vec![false; n];
        for &q in &code.logical_z {
            v[q] = true;
        }
        v
    };

    let mut errors_checked = 0u64;
    let mut radius = max_weight;
    let mut witnesses = Vec::new();
    let mut lower_bound_only = true;
    for w in 1..=max_weight {
        let (count, found) = enumerate_weight(
            &matcher,
            &toggles,
            &in_l,
            n,
            w,
            tie_rule,
            max_witnesses.max(1),
        );
        errors_checked += count;
        if !found.is_empty() {
            radius = w - 1;
            witnesses = found;
            lower_bound_only = false;
            break;
        }
    }
    Ok(RadiusReport {
        d: code.d,
        pattern: pattern.family,
        s: pattern.s,
        tie_rule,
        computed_radius: radius,
        theorem_lower_bound: theorem_lower_bound(code.d, pattern),
        max_weight_checked: if lower_bound_only {
            max_weight
        } else {
            radius + 1
        },
        lower_bound_only,
        errors_checked,
        witnesses,
    })
}

/// Whether the ideal decoder fails on an error with defect mask `mask` and
/// class parity `parity`.
fn fails(
    matcher: &Matcher,
    mask: u128,
    parity: usize,
    rule: TieRule,
    defects: &mut Vec<usize>,
    buf: &mut Vec<[u32; 2]>,
) -> bool {
    defects.clear();
    let mut m = mask;
    while m != 0 {
        defects.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    let costs = matcher.coset_costs_with(defects, buf);
    match rule {
        TieRule::Strict => costs[parity] >= INF || costs[parity] >= costs[1 - parity],
        TieRule::Favorable => costs[parity] >= INF || costs[parity] > costs[1 - parity],
    }
}

fn enumerate_weight(
    matcher: &Matcher,
    toggles: &[u128],
    in_l: &[bool],
    n: usize,
    w: usize,
    rule: TieRule,
    max_witnesses: usize,
) -> (u64, Vec<Vec<usize>>) {
    let witnesses_found = AtomicUsize::new(0);
    let run = |first: usize| -> (u64, Vec<Vec<usize>>) {
        if witnesses_found.load(Ordering::Relaxed) >= max_witnesses {
            return (0, Vec::new());
        }
        let mut stack = vec![first];
        let mut count = 0u64;
        let mut found = Vec::new();
        let mut defects = Vec::with_capacity(2 * w);
        let mut buf = Vec::new();
        let mut masks = vec![0u128; w + 1];
        let mut pars = vec![0usize; w + 1];
        masks[1] = toggles[first];
        pars[1] = in_l[first] as usize;
        if w == 1 {
            count += 1;
            if fails(matcher, masks[1], pars[1], rule, &mut defects, &mut buf) {
                found.push(vec![first]);
                witnesses_found.fetch_add(1, Ordering::Relaxed);
            }
            return (count, found);
        }
        // iterative combination enumeration over indices greater than `first`
        let mut next = first + 1;
        loop {
            if count.is_multiple_of(4096)
                && witnesses_found.load(Ordering::Relaxed) >= max_witnesses
            {
                break;
            }
            if next < n && stack.len() < w {
                let depth = stack.len();
                masks[depth + 1] = masks[depth] ^ toggles[next];
                pars[depth + 1] = pars[depth] ^ in_l[next] as usize;
                stack.push(next);
                if stack.len() == w {
                    count += 1;
                    if fails(matcher, masks[w], pars[w], rule, &mut defects, &mut buf) {
                        found.push(stack.clone());
                        if witnesses_found.fetch_add(1, Ordering::Relaxed) + 1 >= max_witnesses {
                            break;
                        }
                    }
                    stack.pop();
                }
                next += 1;
                continue;
            }
            // backtrack
            if stack.len() <= 1 {
                break;
            }
            let last = stack.pop().unwrap();
            next = last + 1;
        }
        (count, found)
    };
    let firsts: Vec<usize> = (0..n).collect();
    let results: Vec<(u64, Vec<Vec<usize>>)> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            firsts.par_iter().map(|&f| run(f)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            firsts.iter().map(|&f| run(f)).collect()
        }
    };
    let mut total = 0;
    let mut found = Vec::new();
    for (c, f) in results {
        total += c;
        for wit in f {
            if found.len() < max_witnesses {
                found.push(wit);
            }
        }
    }
    (total, found)
}

/// Largest effective weight of a single removed horizontal qubit in the bulk
/// of a diagonal diluted lattice, together with the number of vertical edges
/// in its effective error.
pub fn diagonal_local_expansion(
    code: &SurfaceCode,
    pattern: SparsificationPattern,
) -> Result<(usize, usize)> {
    if pattern.family != PatternFamily::DH {
        return Err(Error::NotApplicable(
            "local expansion is defined for the DH family".into(),
        ));
    }
    let graph = sparsify(code, pattern)?;
    let lattice = graph.component_lattice(CheckType::Z);
    let matcher = Matcher::new(&lattice, &[]);
    let d = code.d;
    let margin = pattern.s + 1;
    let mut worst = (0, 0);
    for (q, qb) in code.qubits.iter().enumerate() {
        let bulk =
            qb.row >= margin && qb.row + margin < d && qb.col > margin && qb.col + margin < d - 1;
        if graph.active[q] || qb.orientation != Orientation::Horizontal || !bulk {
            continue;
        }
        let defects = code.qubit_checks(q, CheckType::Z).to_vec();
        let corr = matcher.correction(&defects, None)?;
        let vertical = corr
            .iter()
            .filter(|&&c| code.qubits[c].orientation == Orientation::Vertical)
            .count();
        worst = worst.max((corr.len(), vertical));
    }
    Ok(worst)
}

/// Total-variation distance between the joint of `(x_i, x_j)` conditioned on
/// `z_i xor z_j = sigma` and the product of its marginals, both qubits with
/// prior `prior`. Exact enumeration of the 16 joint outcomes.
pub fn cavity_discrepancy_exact(prior: &Prior, sigma: bool) -> Result<f64> {
    prior.validate()?;
    let mut joint = [[0.0f64; 2]; 2];
    let mut total = 0.0;
    for xi in 0..2 {
        for zi in 0..2 {
            for xj in 0..2 {
                for zj in 0..2 {
                    if ((zi ^ zj) == 1) != sigma {
                        continue;
                    }
                    let w = prior.psi(xi == 1, zi == 1) * prior.psi(xj == 1, zj == 1);
                    joint[xi][xj] += w;
                    total += w;
                }
            }
        }
    }
    if total <= 0.0 {
        return Err(Error::ZeroProbabilityEvent);
    }
    for row in joint.iter_mut() {
        for v in row.iter_mut() {
            *v /= total;
        }
    }
    let mi = [joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]];
    let mj = [joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]];
    let mut tv = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            tv += (joint[a][b] - mi[a] * mj[b]).abs();
        }
    }
    Ok(0.5 * tv)
}

/// Closed form of [`cavity_discrepancy_exact`] in terms of `kappa` and the
/// marginal Z rate.
pub fn cavity_discrepancy_closed(prior: &Prior, sigma: bool) -> Result<f64> {
    prior.validate()?;
    let k = xz_coupling(prior);
    let pz = prior.marginal_z();
    let denom = if sigma {
        2.0 * pz * (1.0 - pz)
    } else {
        (1.0 - pz).powi(2) + pz.powi(2)
    };
    if denom <= 0.0 {
        return Err(Error::ZeroProbabilityEvent);
    }
    Ok(2.0 * k * k / (denom * denom))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prop1Report {
    pub valid: bool,
    /// Image of each qubit under the reflection.
    pub qubit_map: Vec<usize>,
    /// Image of each Z-check (an X-check index).
    pub check_map: Vec<usize>,
}

/// Check that the diagonal reflection maps the diluted Z-lattice onto the
/// diluted X-lattice: active qubits to active qubits, Z-checks to X-checks,
/// preserving incidence.
pub fn verify_prop1(code: &SurfaceCode, pattern: SparsificationPattern) -> Result<Prop1Report> {
    if !pattern.family.is_diagonal() {
        return Err(Error::NotApplicable(format!(
            "{} is not a diagonal pattern",
            pattern.family
        )));
    }
    let graph = sparsify(code, pattern)?;
    let qubit_map: Vec<usize> = (0..code.n).map(|q| code.reflect_qubit(q)).collect();
    let check_map: Vec<usize> = (0..code.z_checks.len())
        .map(|a| code.reflect_check(CheckType::Z, a).1)
        .collect();
    let mut valid = (0..code.n).all(|q| graph.active[q] == graph.active[qubit_map[q]]);
    let mut seen = vec![false; code.x_checks.len()];
    for (a, support) in graph.z_check_neighbors.iter().enumerate() {
        let b = check_map[a];
        if seen[b] {
            valid = false;
        }
        seen[b] = true;
        let mut image: Vec<usize> = support.iter().map(|&q| qubit_map[q]).collect();
        image.sort_unstable();
        let mut target = graph.x_check_neighbors[b].clone();
        target.sort_unstable();
        valid &= image == target;
    }
    valid &= seen.iter().all(|&s| s);
    Ok(Prop1Report {
        valid,
        qubit_map,
        check_map,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::{prior_of, NoiseModel};
    use crate::pauli::syndrome;

    fn full_z(code: &SurfaceCode) -> ComponentLattice {
        DilutedGraph::full(code).component_lattice(CheckType::Z)
    }

    #[test]
    fn empty_and_adjacent() {
        let code = SurfaceCode::new(5).unwrap();
        let lat = full_z(&code);
        assert!(min_weight_correction(&lat, &[]).unwrap().is_empty());
        // Z(1,1) and Z(1,2) share h(1,2)
        let corr = min_weight_correction(&lat, &[5, 6]).unwrap();
        assert_eq!(corr, vec![7]);
        // Z(1,1) and Z(2,1) share v(1,1)
        let corr = min_weight_correction(&lat, &[5, 9]).unwrap();
        assert_eq!(corr, vec![25 + 4 + 1]);
    }

    #[test]
    fn correction_reproduces_defects() {
        let code = SurfaceCode::new(7).unwrap();
        let lat = full_z(&code);
        let defects = [0, 5, 13, 20, 29];
        let corr = min_weight_correction(&lat, &defects).unwrap();
        let e = PauliConfig::x_on(code.n, &corr);
        let s = syndrome(&code, &e).unwrap();
        let got: Vec<usize> = s
            .z_checks
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(a, _)| a)
            .collect();
        assert_eq!(got, defects.to_vec());
    }

    #[test]
    fn defect_order_does_not_matter() {
        let code = SurfaceCode::new(7).unwrap();
        let m = Matcher::new(&full_z(&code), &code.logical_z);
        let a = m.coset_costs(&[3, 17, 22, 40]).unwrap();
        let b = m.coset_costs(&[40, 22, 3, 17]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn too_many_defects() {
        let code = SurfaceCode::new(9).unwrap();
        let defects: Vec<usize> = (0..17).collect();
        assert_eq!(
            min_weight_correction(&full_z(&code), &defects),
            Err(Error::TooManyDefects {
                got: 17,
                max: MAX_DEFECTS
            })
        );
    }

    #[test]
    fn unsatisfiable_on_disconnected_lattice() {
        let code = SurfaceCode::new(5).unwrap();
        let g = sparsify(&code, SparsificationPattern::new(PatternFamily::CH, 3)).unwrap();
        let lat = g.component_lattice(CheckType::X);
        // X(0,0) and X(0,1) lie in different components with no boundary edge
        // between them once the interior horizontal rows are gone
        let (labels, count) = lat.components();
        assert!(count >= 2);
        let a = 0;
        let b = (0..lat.num_vertices)
            .find(|&v| labels[v] != labels[a])
            .unwrap();
        let m = Matcher::new(&lat, &[]);
        let costs = m.coset_costs(&[a, b]).unwrap();
        if costs.iter().all(|c| c.is_none()) {
            assert_eq!(m.correction(&[a, b], None), Err(Error::Unsatisfiable));
        }
    }

    #[test]
    fn effective_error_never_heavier_on_support() {
        let code = SurfaceCode::new(5).unwrap();
        let g = sparsify(&code, SparsificationPattern::new(PatternFamily::DH, 1)).unwrap();
        let on: Vec<usize> = (0..code.n).filter(|&q| g.active[q]).take(3).collect();
        let e = PauliConfig::x_on(code.n, &on);
        let r = effective_error(&code, &g, &e).unwrap();
        assert!(r.weight() <= e.weight());
        assert_eq!(syndrome(&code, &r).unwrap(), syndrome(&code, &e).unwrap());
        assert!(r.x.iter().enumerate().all(|(q, &b)| !b || g.active[q]));
    }

    #[test]
    fn undiluted_radius() {
        for d in [3, 5] {
            let code = SurfaceCode::new(d).unwrap();
            let r =
                error_correcting_radius(&code, SparsificationPattern::new(PatternFamily::CH, 0))
                    .unwrap();
            assert_eq!(r.computed_radius, (d - 1) / 2);
            assert!(!r.lower_bound_only);
            assert!(!r.witnesses.is_empty());
        }
    }

    #[test]
    fn ch1_radius_d5() {
        let code = SurfaceCode::new(5).unwrap();
        let r = error_correcting_radius(&code, SparsificationPattern::new(PatternFamily::CH, 1))
            .unwrap();
        assert_eq!(r.computed_radius, 2);
        let back = RadiusReport::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn bounds() {
        let dh =
            |s| theorem_lower_bound(9, SparsificationPattern::new(PatternFamily::DH, s)).unwrap();
        let ch =
            |s| theorem_lower_bound(9, SparsificationPattern::new(PatternFamily::CH, s)).unwrap();
        assert_eq!((dh(1), dh(2), dh(3)), (2, 2, 1));
        assert_eq!((ch(1), ch(2), ch(3)), (4, 4, 2));
        assert_eq!(
            theorem_lower_bound(9, SparsificationPattern::new(PatternFamily::DV, 1)),
            None
        );
    }

    #[test]
    fn cavity_examples() {
        let prod = Prior::product(0.1, 0.2).unwrap();
        for sigma in [false, true] {
            assert!(cavity_discrepancy_exact(&prod, sigma).unwrap() < 1e-15);
        }
        let dep = prior_of(&NoiseModel::depolarizing(0.1).unwrap()).unwrap();
        let exact = cavity_discrepancy_exact(&dep, false).unwrap();
        let closed = cavity_discrepancy_closed(&dep, false).unwrap();
        assert!((exact - closed).abs() < 1e-12, "{exact} vs {closed}");
        assert!((exact - 2.177e-3).abs() < 1e-5, "{exact}");
        let exact1 = cavity_discrepancy_exact(&dep, true).unwrap();
        let closed1 = cavity_discrepancy_closed(&dep, true).unwrap();
        assert!((exact1 - closed1).abs() < 1e-12, "{exact1} vs {closed1}");
        let sx = prior_of(&NoiseModel::single_x(0.1).unwrap()).unwrap();
        assert_eq!(
            cavity_discrepancy_exact(&sx, true),
            Err(Error::ZeroProbabilityEvent)
        );
    }

    #[test]
    fn prop1_small() {
        for (d, s) in [(5, 1), (3, 1)] {
            let code = SurfaceCode::new(d).unwrap();
            for fam in [PatternFamily::DV, PatternFamily::DH] {
                assert!(
                    verify_prop1(&code, SparsificationPattern::new(fam, s))
                        .unwrap()
                        .valid
                );
            }
        }
        let code = SurfaceCode::new(5).unwrap();
        assert!(matches!(
            verify_prop1(&code, SparsificationPattern::new(PatternFamily::CH, 1)),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn ch2_tie_at_d5() {
        // X on h(1,1), h(2,2): both classes cost 6
        let code = SurfaceCode::new(5).unwrap();
        let p = SparsificationPattern::new(PatternFamily::CH, 2);
        let strict = error_correcting_radius(&code, p).unwrap();
        assert_eq!(strict.computed_radius, 1);
        let fav = error_correcting_radius_capped(&code, p, TieRule::Favorable, 3, 4).unwrap();
        assert_eq!(fav.computed_radius, 2);
    }

    #[test]
    fn diagonal_expansion_matches_band_width() {
        let code = SurfaceCode::new(33).unwrap();
        for s in 1..=7 {
            let (len, vertical) =
                diagonal_local_expansion(&code, SparsificationPattern::new(PatternFamily::DH, s))
                    .unwrap();
            assert_eq!(vertical, 2 * s.div_ceil(2), "s={s}");
            assert_eq!(len, vertical + 1);
        }
    }
}
