//! Planar surface-code geometry, sparsification patterns and dilution sequences.
//!
//! Qubits live on the edges of the Z-lattice: a grid whose vertices are the
//! Z-checks. In doubled coordinates `(i, j)` a horizontal qubit `h(r, c)` sits at
//! `(2r, 2c)`, a vertical qubit `v(r, c)` at `(2r+1, 2c+1)`, a Z-check at
//! `(2r, 2c+1)` and an X-check at `(2r+1, 2c)`. Every check touches the qubits
//! one step away in the four axis directions.
//!
//! The Z-lattice has `d` rows of `d-1` vertices; its horizontal edges (including
//! the dangling ones at the left/right rough boundaries) are the `d x d`
//! h-qubits, its vertical edges the `(d-1) x (d-1)` v-qubits. The X-lattice is
//! the mirror image under the reflection `(i, j) -> (j, i)`.

use std::collections::VecDeque;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Orientation {
    Horizontal,
    Vertical,
}

/// A qubit as an edge of the Z-lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Qubit {
    pub orientation: Orientation,
    pub row: usize,
    pub col: usize,
}

impl Qubit {
    /// Position in doubled coordinates.
    pub fn doubled(&self) -> (usize, usize) {
        match self.orientation {
            Orientation::Horizontal => (2 * self.row, 2 * self.col),
            Orientation::Vertical => (2 * self.row + 1, 2 * self.col + 1),
        }
    }

    /// Index of the anti-diagonal line through the edge midpoint.
    pub fn diagonal(&self) -> usize {
        let (i, j) = self.doubled();
        (i + j) / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CheckType {
    X,
    Z,
}

impl CheckType {
    pub fn other(self) -> CheckType {
        match self {
            CheckType::X => CheckType::Z,
            CheckType::Z => CheckType::X,
        }
    }
}

impl fmt::Display for CheckType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckType::X => f.write_str("X"),
            CheckType::Z => f.write_str("Z"),
        }
    }
}

/// Distance-`d` planar surface code.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceCode {
    pub d: usize,
    pub n: usize,
    pub qubits: Vec<Qubit>,
    pub x_checks: Vec<Vec<usize>>,
    pub z_checks: Vec<Vec<usize>>,
    /// X-type logical: the top row of horizontal qubits.
    pub logical_x: Vec<usize>,
    /// Z-type logical: the left column of horizontal qubits.
    pub logical_z: Vec<usize>,
    qubit_x_checks: Vec<Vec<usize>>,
    qubit_z_checks: Vec<Vec<usize>>,
}

impl SurfaceCode {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDistance(d));
        }
        let mut qubits = Vec::with_capacity(d * d + (d - 1) * (d - 1));
        for row in 0..d {
            for col in 0..d {
                qubits.push(Qubit {
                    orientation: Orientation::Horizontal,
                    row,
                    col,
                });
            }
        }
        for row in 0..d - 1 {
            for col in 0..d - 1 {
                qubits.push(Qubit {
                    orientation: Orientation::Vertical,
                    row,
                    col,
                });
            }
        }
        let n = qubits.len();
        let h = |r: usize, c: usize| r * d + c;
        let v = |r: usize, c: usize| d * d + r * (d - 1) + c;

        let mut z_checks = Vec::with_capacity(d * (d - 1));
        for r in 0..d {
            for c in 0..d - 1 {
                let mut support = vec![h(r, c), h(r, c + 1)];
                if r >= 1 {
                    support.push(v(r - 1, c));
                }
                if r + 1 < d {
                    support.push(v(r, c));
                }
                support.sort_unstable();
                z_checks.push(support);
            }
        }
        let mut x_checks = Vec::with_capacity(d * (d - 1));
        for r in 0..d - 1 {
            for c in 0..d {
                let mut support = vec![h(r, c), h(r + 1, c)];
                if c >= 1 {
                    support.push(v(r, c - 1));
                }
                if c + 1 < d {
                    support.push(v(r, c));
                }
                support.sort_unstable();
                x_checks.push(support);
            }
        }
        let logical_x = (0..d).map(|c| h(0, c)).collect();
        let logical_z = (0..d).map(|r| h(r, 0)).collect();

        let mut qubit_x_checks = vec![Vec::new(); n];
        let mut qubit_z_checks = vec![Vec::new(); n];
        for (a, support) in x_checks.iter().enumerate() {
            for &q in support {
                qubit_x_checks[q].push(a);
            }
        }
        for (a, support) in z_checks.iter().enumerate() {
            for &q in support {
                qubit_z_checks[q].push(a);
            }
        }
        Ok(SurfaceCode {
            d,
            n,
            qubits,
            x_checks,
            z_checks,
            logical_x,
            logical_z,
            qubit_x_checks,
            qubit_z_checks,
        })
    }

    pub fn num_checks(&self, ty: CheckType) -> usize {
        self.checks(ty).len()
    }

    pub fn checks(&self, ty: CheckType) -> &[Vec<usize>] {
        match ty {
            CheckType::X => &self.x_checks,
            CheckType::Z => &self.z_checks,
        }
    }

    /// Checks of type `ty` acting on qubit `q` (one or two of them).
    pub fn qubit_checks(&self, q: usize, ty: CheckType) -> &[usize] {
        match ty {
            CheckType::X => &self.qubit_x_checks[q],
            CheckType::Z => &self.qubit_z_checks[q],
        }
    }

    pub fn qubit_index(&self, qubit: Qubit) -> Option<usize> {
        let d = self.d;
        match qubit.orientation {
            Orientation::Horizontal if qubit.row < d && qubit.col < d => {
                Some(qubit.row * d + qubit.col)
            }
            Orientation::Vertical if qubit.row + 1 < d && qubit.col + 1 < d => {
                Some(d * d + qubit.row * (d - 1) + qubit.col)
            }
            _ => None,
        }
    }

    /// Doubled coordinates of a check.
    pub fn check_doubled(&self, ty: CheckType, a: usize) -> (usize, usize) {
        match ty {
            CheckType::Z => {
                let (r, c) = (a / (self.d - 1), a % (self.d - 1));
                (2 * r, 2 * c + 1)
            }
            CheckType::X => {
                let (r, c) = (a / self.d, a % self.d);
                (2 * r + 1, 2 * c)
            }
        }
    }

    /// Image of a qubit under the diagonal reflection `(i, j) -> (j, i)`.
    pub fn reflect_qubit(&self, q: usize) -> usize {
        let qb = self.qubits[q];
        let image = Qubit {
            orientation: qb.orientation,
            row: qb.col,
            col: qb.row,
        };
        self.qubit_index(image)
            .expect("reflection maps qubits to qubits")
    }

    /// Image of a check under the diagonal reflection; the type flips.
    pub fn reflect_check(&self, ty: CheckType, a: usize) -> (CheckType, usize) {
        let d = self.d;
        match ty {
            // Z(r, c) at (2r, 2c+1) -> (2c+1, 2r) = X(c, r)
            CheckType::Z => {
                let (r, c) = (a / (d - 1), a % (d - 1));
                (CheckType::X, c * d + r)
            }
            // X(r, c) at (2r+1, 2c) -> (2c, 2r+1) = Z(c, r)
            CheckType::X => {
                let (r, c) = (a / d, a % d);
                (CheckType::Z, c * (d - 1) + r)
            }
        }
    }

    /// Largest dilution stage index, `floor(log2(d - 1))`.
    pub fn max_stage(&self) -> usize {
        max_stage(self.d)
    }
}

/// `K = floor(log2(d - 1))`, with `K = 0` for `d = 2`.
pub fn max_stage(d: usize) -> usize {
    let m = d.saturating_sub(1).max(1);
    (usize::BITS - 1 - m.leading_zeros()) as usize
}

/// Sparsification ratio used at stage `k` of a dilution sequence.
pub fn stage_ratio(k: usize) -> usize {
    (1usize << k) - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternFamily {
    /// Diagonal, vertical edges removed off the retained diagonals.
    DV,
    /// Diagonal, horizontal edges removed off the retained diagonals.
    DH,
    /// Cartesian, vertical grid lines sparsified.
    CV,
    /// Cartesian, horizontal grid lines sparsified.
    CH,
}

impl PatternFamily {
    pub const ALL: [PatternFamily; 4] = [
        PatternFamily::DV,
        PatternFamily::DH,
        PatternFamily::CV,
        PatternFamily::CH,
    ];

    pub fn is_diagonal(self) -> bool {
        matches!(self, PatternFamily::DV | PatternFamily::DH)
    }

    pub fn name(self) -> &'static str {
        match self {
            PatternFamily::DV => "dv",
            PatternFamily::DH => "dh",
            PatternFamily::CV => "cv",
            PatternFamily::CH => "ch",
        }
    }
}

impl fmt::Display for PatternFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PatternFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dv" => Ok(PatternFamily::DV),
            "dh" => Ok(PatternFamily::DH),
            "cv" => Ok(PatternFamily::CV),
            "ch" => Ok(PatternFamily::CH),
            other => Err(Error::Parse(format!("unknown pattern `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparsificationPattern {
    pub family: PatternFamily,
    pub s: usize,
}

impl SparsificationPattern {
    pub fn new(family: PatternFamily, s: usize) -> Self {
        SparsificationPattern { family, s }
    }

    /// Whether the pattern keeps qubit `qubit`.
    pub fn retains(&self, qubit: &Qubit) -> bool {
        let period = self.s + 1;
        let on_diagonal = qubit.diagonal().is_multiple_of(period);
        match (self.family, qubit.orientation) {
            (PatternFamily::DV, Orientation::Horizontal) => true,
            (PatternFamily::DV, Orientation::Vertical) => on_diagonal,
            (PatternFamily::DH, Orientation::Vertical) => true,
            (PatternFamily::DH, Orientation::Horizontal) => on_diagonal,
            // grid lines are numbered from 1; line k is kept iff k = 1 (mod s+1)
            (PatternFamily::CH, Orientation::Vertical) => true,
            (PatternFamily::CH, Orientation::Horizontal) => qubit.row.is_multiple_of(period),
            (PatternFamily::CV, Orientation::Horizontal) => true,
            (PatternFamily::CV, Orientation::Vertical) => qubit.col.is_multiple_of(period),
        }
    }
}

/// One stage's Tanner graph: the qubits kept by a sparsification and, for every
/// check, the kept part of its support. Checks are never dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilutedGraph {
    pub stage: usize,
    pub s: usize,
    pub family: Option<PatternFamily>,
    pub active: Vec<bool>,
    pub z_check_neighbors: Vec<Vec<usize>>,
    pub x_check_neighbors: Vec<Vec<usize>>,
    /// Girth of the Z-lattice (boundary edges excluded); `None` if acyclic.
    pub girth: Option<usize>,
}

impl DilutedGraph {
    /// Build a graph directly from check supports. Every qubit is active.
    pub fn from_checks(n: usize, z_checks: Vec<Vec<usize>>, x_checks: Vec<Vec<usize>>) -> Self {
        let mut g = DilutedGraph {
            stage: 0,
            s: 0,
            family: None,
            active: vec![true; n],
            z_check_neighbors: z_checks,
            x_check_neighbors: x_checks,
            girth: None,
        };
        g.girth = g.graphic_girth(CheckType::Z);
        g
    }

    /// Girth of a component lattice, or `None` when some qubit touches more
    /// than two checks of that type (not a graph).
    fn graphic_girth(&self, ty: CheckType) -> Option<usize> {
        let mut deg = vec![0usize; self.n()];
        for support in self.check_neighbors(ty) {
            for &q in support {
                deg[q] += 1;
            }
        }
        if deg.iter().any(|&k| k > 2) {
            return None;
        }
        self.component_lattice(ty).girth()
    }

    /// The undiluted Tanner graph.
    pub fn full(code: &SurfaceCode) -> Self {
        let mut g = DilutedGraph::from_checks(code.n, code.z_checks.clone(), code.x_checks.clone());
        g.family = None;
        g
    }

    /// Restrict to an active mask; supports are intersected with it.
    pub fn with_mask(
        n: usize,
        z_checks: &[Vec<usize>],
        x_checks: &[Vec<usize>],
        active: Vec<bool>,
    ) -> Self {
        assert_eq!(active.len(), n);
        let keep = |support: &Vec<usize>| {
            support
                .iter()
                .copied()
                .filter(|&q| active[q])
                .collect::<Vec<_>>()
        };
        let z_check_neighbors = z_checks.iter().map(keep).collect();
        let x_check_neighbors = x_checks.iter().map(keep).collect();
        let mut g = DilutedGraph {
            stage: 0,
            s: 0,
            family: None,
            active,
            z_check_neighbors,
            x_check_neighbors,
            girth: None,
        };
        g.girth = g.graphic_girth(CheckType::Z);
        g
    }

    pub fn n(&self) -> usize {
        self.active.len()
    }

    pub fn num_active(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    pub fn check_neighbors(&self, ty: CheckType) -> &[Vec<usize>] {
        match ty {
            CheckType::X => &self.x_check_neighbors,
            CheckType::Z => &self.z_check_neighbors,
        }
    }

    /// The lattice whose vertices are the checks of type `ty` and whose edges
    /// are the active qubits. A qubit with a single check of that type is a
    /// boundary (dangling) edge.
    pub fn component_lattice(&self, ty: CheckType) -> ComponentLattice {
        let checks = self.check_neighbors(ty);
        let mut ends: Vec<Vec<usize>> = vec![Vec::new(); self.n()];
        for (a, support) in checks.iter().enumerate() {
            for &q in support {
                ends[q].push(a);
            }
        }
        let edges = ends
            .iter()
            .enumerate()
            .filter(|(q, e)| self.active[*q] && !e.is_empty())
            .map(|(q, e)| {
                assert!(e.len() <= 2, "qubit {q} touches more than two {ty}-checks");
                LatticeEdge {
                    qubit: q,
                    a: e[0],
                    b: e.get(1).copied(),
                }
            })
            .collect();
        ComponentLattice {
            check_type: ty,
            num_vertices: checks.len(),
            edges,
        }
    }

    /// `(x_lattice, z_lattice)`.
    pub fn component_lattices(&self) -> (ComponentLattice, ComponentLattice) {
        (
            self.component_lattice(CheckType::X),
            self.component_lattice(CheckType::Z),
        )
    }

    /// Girths of the X- and Z-lattice.
    pub fn lattice_girths(&self) -> (Option<usize>, Option<usize>) {
        (
            self.component_lattice(CheckType::X).girth(),
            self.component_lattice(CheckType::Z).girth(),
        )
    }

    pub fn export(&self, format: &str) -> Result<String> {
        match format {
            "dot" => Ok(self.to_dot()),
            "edge-list" | "edgelist" | "edges" => Ok(self.to_edge_list()),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }

    /// Whitespace-separated `<X|Z> <check_id> <qubit_id>` lines, preceded by
    /// `#` header lines carrying the sizes and stage metadata.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let family = self.family.map(|f| f.name()).unwrap_or("none");
        writeln!(
            out,
            "# qubits {} z_checks {} x_checks {}",
            self.n(),
            self.z_check_neighbors.len(),
            self.x_check_neighbors.len()
        )
        .unwrap();
        writeln!(out, "# stage {} s {} family {}", self.stage, self.s, family).unwrap();
        let active: Vec<String> = self
            .active
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(q, _)| q.to_string())
            .collect();
        writeln!(out, "# active {}", active.join(" ")).unwrap();
        for ty in [CheckType::Z, CheckType::X] {
            for (a, support) in self.check_neighbors(ty).iter().enumerate() {
                for &q in support {
                    writeln!(out, "{ty} {a} {q}").unwrap();
                }
            }
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut sizes: Option<(usize, usize, usize)> = None;
        let mut stage = 0;
        let mut s = 0;
        let mut family = None;
        let mut active_list: Option<Vec<usize>> = None;
        let mut edges = Vec::new();
        let bad = |line: &str| Error::Parse(format!("malformed edge-list line `{line}`"));
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                match toks.first().copied() {
                    Some("qubits") if toks.len() == 6 => {
                        let num = |i: usize| toks[i].parse::<usize>().map_err(|_| bad(line));
                        sizes = Some((num(1)?, num(3)?, num(5)?));
                    }
                    Some("stage") if toks.len() == 6 => {
                        stage = toks[1].parse().map_err(|_| bad(line))?;
                        s = toks[3].parse().map_err(|_| bad(line))?;
                        family = match toks[5] {
                            "none" => None,
                            f => Some(f.parse()?),
                        };
                    }
                    Some("active") => {
                        let qs = toks[1..]
                            .iter()
                            .map(|t| t.parse::<usize>().map_err(|_| bad(line)))
                            .collect::<Result<Vec<_>>>()?;
                        active_list = Some(qs);
                    }
                    _ => {}
                }
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 3 {
                return Err(bad(line));
            }
            let ty = match toks[0] {
                "X" => CheckType::X,
                "Z" => CheckType::Z,
                _ => return Err(bad(line)),
            };
            let a: usize = toks[1].parse().map_err(|_| bad(line))?;
            let q: usize = toks[2].parse().map_err(|_| bad(line))?;
            edges.push((ty, a, q));
        }
        let (n, nz, nx) = sizes.ok_or_else(|| Error::Parse("missing `# qubits` header".into()))?;
        let mut z = vec![Vec::new(); nz];
        let mut x = vec![Vec::new(); nx];
        let mut active = vec![false; n];
        for (ty, a, q) in edges {
            if q >= n {
                return Err(Error::Parse(format!("qubit {q} out of range")));
            }
            let list = match ty {
                CheckType::Z => z.get_mut(a),
                CheckType::X => x.get_mut(a),
            }
            .ok_or_else(|| Error::Parse(format!("{ty}-check {a} out of range")))?;
            list.push(q);
            active[q] = true;
        }
        if let Some(qs) = active_list {
            active = vec![false; n];
            for q in qs {
                *active
                    .get_mut(q)
                    .ok_or_else(|| Error::Parse(format!("qubit {q} out of range")))? = true;
            }
        }
        let mut g = DilutedGraph::with_mask(n, &z, &x, active);
        g.stage = stage;
        g.s = s;
        g.family = family;
        Ok(g)
    }

    /// Graphviz rendering; node positions follow the doubled coordinates when
    /// the graph belongs to `code`.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let label = self.family.map(|f| f.name()).unwrap_or("full");
        writeln!(out, "graph tanner_{label}_s{} {{", self.s).unwrap();
        for (q, &on) in self.active.iter().enumerate() {
            if on {
                writeln!(out, "  q{q} [shape=point];").unwrap();
            }
        }
        for (ty, color) in [(CheckType::Z, "red"), (CheckType::X, "blue")] {
            for a in 0..self.check_neighbors(ty).len() {
                writeln!(out, "  {ty}{a} [shape=square,color={color}];").unwrap();
            }
        }
        for ty in [CheckType::Z, CheckType::X] {
            for (a, support) in self.check_neighbors(ty).iter().enumerate() {
                for &q in support {
                    writeln!(out, "  {ty}{a} -- q{q};").unwrap();
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Apply a sparsification pattern to a code.
pub fn sparsify(code: &SurfaceCode, pattern: SparsificationPattern) -> Result<DilutedGraph> {
    if pattern.s >= code.d {
        return Err(Error::InvalidRatio {
            s: pattern.s,
            d: code.d,
        });
    }
    let active = code.qubits.iter().map(|q| pattern.retains(q)).collect();
    let mut g = DilutedGraph::with_mask(code.n, &code.z_checks, &code.x_checks, active);
    g.s = pattern.s;
    g.family = Some(pattern.family);
    Ok(g)
}

/// Nested diluted graphs with ratios `s_k = 2^k - 1`, `k = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct DilutionSequence {
    pub d: usize,
    pub family: PatternFamily,
    pub stages: Vec<DilutedGraph>,
}

impl DilutionSequence {
    pub fn new(code: &SurfaceCode, family: PatternFamily) -> Self {
        let stages = (0..=code.max_stage())
            .map(|k| {
                let mut g = sparsify(code, SparsificationPattern::new(family, stage_ratio(k)))
                    .expect("2^K - 1 < d by construction");
                g.stage = k;
                g
            })
            .collect();
        DilutionSequence {
            d: code.d,
            family,
            stages,
        }
    }

    /// Largest stage index.
    pub fn k_max(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn ratios(&self) -> Vec<usize> {
        self.stages.iter().map(|g| g.s).collect()
    }
}

pub fn dilution_sequence(code: &SurfaceCode, family: PatternFamily) -> DilutionSequence {
    DilutionSequence::new(code, family)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatticeEdge {
    pub qubit: usize,
    pub a: usize,
    /// Second endpoint; `None` for an edge ending on the boundary.
    pub b: Option<usize>,
}

/// Check-vertex / qubit-edge structure of one check type.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentLattice {
    pub check_type: CheckType,
    pub num_vertices: usize,
    pub edges: Vec<LatticeEdge>,
}

impl ComponentLattice {
    /// Adjacency lists `(neighbor, qubit)`, boundary edges omitted.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.num_vertices];
        for e in &self.edges {
            if let Some(b) = e.b {
                adj[e.a].push((b, e.qubit));
                adj[b].push((e.a, e.qubit));
            }
        }
        adj
    }

    /// Connected components over check vertices (boundary not a vertex).
    /// Returns a component label per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.num_vertices];
        let mut count = 0;
        for root in 0..self.num_vertices {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = count;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                for &(w, _) in &adj[u] {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Length of the shortest cycle (boundary edges excluded).
    pub fn girth(&self) -> Option<usize> {
        let adj = self.adjacency();
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.num_vertices];
        let mut via = vec![usize::MAX; self.num_vertices];
        for root in 0..self.num_vertices {
            dist.iter_mut().for_each(|x| *x = usize::MAX);
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for &(w, q) in &adj[u] {
                    if q == via[u] && u != root {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = q;
                        queue.push_back(w);
                    } else {
                        best = best.min(dist[u] + dist[w] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// The lattice restricted to an induced set of edges, sharing vertex ids.
    pub fn filter_edges(&self, mut keep: impl FnMut(&LatticeEdge) -> bool) -> ComponentLattice {
        ComponentLattice {
            check_type: self.check_type,
            num_vertices: self.num_vertices,
            edges: self.edges.iter().copied().filter(|e| keep(e)).collect(),
        }
    }
}
