//! Colored graphs and the qudit graph states built from them.
//!
//! Vertex indices are 0-based here; [`GraphDocument`] (the text format) and
//! error messages use 1-based labels.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{c64, hadamard, CVector, LinearOperator, QuditRegister, StateVector};

/// Graph with a uniform local dimension and a partition of its vertices into
/// color classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    d: usize,
    edges: Vec<(usize, usize)>,
    colors: Vec<Vec<usize>>,
}

impl ColoredGraph {
    /// Checks structure (indices, no loops, exact partition) but not that the
    /// coloring is proper; see [`ColoredGraph::validate_coloring`].
    pub fn new(n: usize, d: usize, edges: Vec<(usize, usize)>, colors: Vec<Vec<usize>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGraph("graph needs at least one vertex".into()));
        }
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        let mut set = BTreeSet::new();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({}, {}) references a missing vertex", a + 1, b + 1)));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {}", a + 1)));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut seen = vec![false; n];
        let mut colors = colors;
        for class in colors.iter_mut() {
            if class.is_empty() {
                return Err(Error::InvalidGraph("empty color class".into()));
            }
            class.sort_unstable();
            for &v in class.iter() {
                if v >= n {
                    return Err(Error::InvalidGraph(format!("color class references missing vertex {}", v + 1)));
                }
                if seen[v] {
                    return Err(Error::InvalidGraph(format!("vertex {} colored twice", v + 1)));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGraph(format!("vertex {} has no color", v + 1)));
        }
        Ok(Self { n, d, edges: set.into_iter().collect(), colors })
    }

    /// Graph colored greedily in vertex order (smallest free color first).
    pub fn with_greedy_coloring(n: usize, d: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let bare = Self::new(n, d, edges, vec![(0..n.max(1)).collect()])?;
        let mut color = vec![usize::MAX; n];
        for v in 0..n {
            let used: BTreeSet<usize> = bare.neighbors(v).into_iter().map(|u| color[u]).collect();
            color[v] = (0..).find(|c| !used.contains(c)).unwrap();
        }
        let q = color.iter().max().map_or(0, |m| m + 1);
        let classes = (0..q).map(|c| (0..n).filter(|&v| color[v] == c).collect()).collect();
        Self::new(n, d, bare.edges, classes)
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Edges as `(min, max)` pairs, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn colors(&self) -> &[Vec<usize>] {
        &self.colors
    }

    /// Number of color classes.
    pub fn q(&self) -> usize {
        self.colors.len()
    }

    pub fn register(&self) -> Result<QuditRegister> {
        QuditRegister::uniform(self.n, self.d)
    }

    /// Sorted neighbors of `v`.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .edges
            .iter()
            .filter_map(|&(a, b)| if a == v { Some(b) } else if b == v { Some(a) } else { None })
            .collect();
        out.sort_unstable();
        out
    }

    fn color_of(&self) -> Vec<usize> {
        let mut c = vec![0; self.n];
        for (m, class) in self.colors.iter().enumerate() {
            for &v in class {
                c[v] = m;
            }
        }
        c
    }

    /// Edges whose endpoints share a color; empty iff the coloring is proper.
    pub fn validate_coloring(&self) -> Vec<(usize, usize)> {
        let c = self.color_of();
        self.edges.iter().copied().filter(|&(a, b)| c[a] == c[b]).collect()
    }

    /// Errors with the 1-based violating edges unless the coloring is proper.
    pub fn ensure_proper(&self) -> Result<()> {
        let bad = self.validate_coloring();
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::ImproperColoring(bad.into_iter().map(|(a, b)| (a + 1, b + 1)).collect()))
        }
    }

    /// Same graph with vertices relabeled: vertex `v` becomes `map[v]`.
    pub fn relabel(&self, map: &[usize]) -> Result<Self> {
        if map.len() != self.n {
            return Err(Error::InvalidGraph("relabeling has the wrong length".into()));
        }
        let edges = self.edges.iter().map(|&(a, b)| (map[a], map[b])).collect();
        let colors = self.colors.iter().map(|c| c.iter().map(|&v| map[v]).collect()).collect();
        Self::new(self.n, self.d, edges, colors)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            n: self.n,
            d: self.d,
            edges: self.edges.iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
            colors: Some(self.colors.iter().map(|c| c.iter().map(|v| v + 1).collect()).collect()),
        }
    }
}

/// Key-value graph document (TOML), 1-based vertex labels.
///
/// ```toml
/// n = 4
/// d = 2
/// edges = [[1, 2], [2, 3], [3, 4]]
/// colors = [[1, 3], [2, 4]]
/// ```
///
/// A missing `colors` key selects the greedy coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub n: usize,
    pub d: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<Vec<usize>>>,
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("graph document serializes")
    }

    /// Builds the graph, rejecting improper colorings.
    pub fn into_graph(self) -> Result<ColoredGraph> {
        let zero = |v: usize| -> Result<usize> {
            v.checked_sub(1).ok_or_else(|| Error::InvalidGraph("vertex labels are 1-based".into()))
        };
        let edges = self
            .edges
            .iter()
            .map(|[a, b]| Ok((zero(*a)?, zero(*b)?)))
            .collect::<Result<Vec<_>>>()?;
        let graph = match self.colors {
            Some(colors) => {
                let colors = colors
                    .iter()
                    .map(|c| c.iter().map(|&v| zero(v)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                ColoredGraph::new(self.n, self.d, edges, colors)?
            }
            None => ColoredGraph::with_greedy_coloring(self.n, self.d, edges)?,
        };
        graph.ensure_proper()?;
        Ok(graph)
    }
}

/// Two-qudit edge gate `sum_v |v><v| (x) Z^v`, diagonal with entries `omega^{vk}`.
pub fn edge_unitary(d: usize) -> Result<LinearOperator> {
    let reg = QuditRegister::new(vec![d, d])?;
    let diag: Vec<c64> = (0..d * d)
        .map(|i| c64::from_polar(1.0, 2.0 * PI * (((i / d) * (i % d)) % d) as f64 / d as f64))
        .collect();
    LinearOperator::diagonal(reg, &diag)
}

/// `prod_{(i,j) in E} U_(i,j) (x)_k F|0>`.
///
/// The diagonal edge gates are accumulated as integer phase exponents mod `d`,
/// so the result is bitwise independent of edge order.
pub fn build_graph_state(graph: &ColoredGraph) -> Result<StateVector> {
    let reg = graph.register()?;
    let d = graph.d;
    let total = reg.total_dim();
    let strides = reg.strides();
    let table: Vec<c64> = (0..d)
        .map(|k| c64::from_polar(1.0 / (total as f64).sqrt(), 2.0 * PI * k as f64 / d as f64))
        .collect();
    let amps = CVector::from_fn(total, |idx, _| {
        let mut k = 0usize;
        for &(a, b) in &graph.edges {
            let va = (idx / strides[a]) % d;
            let vb = (idx / strides[b]) % d;
            k += va * vb;
        }
        table[k % d]
    });
    Ok(StateVector::from_parts_unchecked(reg, amps))
}

/// Named graphs used throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Path `1 - 2 - ... - n`, colored by parity.
    Chain { n: usize, d: usize },
    /// Vertex 1 joined to every other vertex; center vs. leaves.
    Star { n: usize, d: usize },
    /// 4-cycle `1-2-3-4-1`, colored `{1,3}, {2,4}`.
    Box4 { d: usize },
    /// The chain-type 4-qubit horseshoe cluster (a 4-vertex path).
    Horseshoe4 { d: usize },
    /// Single edge.
    TwoVertex { d: usize },
    /// The polarization/path encoded 4-qubit cluster, locally equivalent to
    /// the 4-chain by Hadamards on vertices 1 and 4.
    G4Prime,
}

impl Preset {
    /// Parses `chain`, `star`, `box4`, `horseshoe4`, `two_vertex` or `g4_prime`,
    /// using `n` and `d` where the preset takes them.
    pub fn from_name(name: &str, n: Option<usize>, d: Option<usize>) -> Result<Self> {
        let d = d.unwrap_or(2);
        let need_n = |n: Option<usize>| n.ok_or_else(|| Error::InvalidGraph(format!("preset `{name}` needs n")));
        Ok(match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "chain" => Preset::Chain { n: need_n(n)?, d },
            "chain4" => Preset::Chain { n: 4, d },
            "star" => Preset::Star { n: need_n(n)?, d },
            "box" | "box4" => Preset::Box4 { d },
            "horseshoe" | "horseshoe4" => Preset::Horseshoe4 { d },
            "two_vertex" | "twovertex" | "pair" => Preset::TwoVertex { d },
            "g4_prime" | "g4prime" => Preset::G4Prime,
            _ => return Err(Error::UnknownPreset(name.to_string())),
        })
    }

    /// Short name used in reports and CSV rows.
    pub fn kind(&self) -> &'static str {
        match self {
            Preset::Chain { .. } => "chain",
            Preset::Star { .. } => "star",
            Preset::Box4 { .. } => "box4",
            Preset::Horseshoe4 { .. } => "horseshoe4",
            Preset::TwoVertex { .. } => "two_vertex",
            Preset::G4Prime => "g4_prime",
        }
    }

    pub fn graph(&self) -> Result<ColoredGraph> {
        match *self {
            Preset::Chain { n, d } => chain_graph(n, d),
            Preset::Star { n, d } => {
                if n < 2 {
                    return Err(Error::InvalidGraph("star needs at least 2 vertices".into()));
                }
                ColoredGraph::new(n, d, (1..n).map(|k| (0, k)).collect(), vec![vec![0], (1..n).collect()])
            }
            Preset::Box4 { d } => {
                ColoredGraph::new(4, d, vec![(0, 1), (1, 2), (2, 3), (3, 0)], vec![vec![0, 2], vec![1, 3]])
            }
            Preset::Horseshoe4 { d } => chain_graph(4, d),
            Preset::TwoVertex { d } => ColoredGraph::new(2, d, vec![(0, 1)], vec![vec![0], vec![1]]),
            Preset::G4Prime => chain_graph(4, 2),
        }
    }

    /// The graph and its state. For [`Preset::G4Prime`] the state is built
    /// from its amplitude expression, not from the graph.
    pub fn build(&self) -> Result<(ColoredGraph, StateVector)> {
        let graph = self.graph()?;
        let state = match self {
            Preset::G4Prime => g4_prime_state(),
            _ => build_graph_state(&graph)?,
        };
        Ok((graph, state))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Preset::Chain { n, d } | Preset::Star { n, d } => write!(f, "{}(n={n}, d={d})", self.kind()),
            Preset::Box4 { d } | Preset::Horseshoe4 { d } | Preset::TwoVertex { d } => {
                write!(f, "{}(d={d})", self.kind())
            }
            Preset::G4Prime => f.write_str("g4_prime"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Accepts `name`, `name(d)` or `name(n,d)`, e.g. `chain(4,3)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced preset `{s}`")))?;
                let args = inner
                    .split(',')
                    .filter(|a| !a.trim().is_empty())
                    .map(|a| a.trim().parse::<usize>().map_err(|e| Error::Parse(e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                (name, args)
            }
            None => (s, vec![]),
        };
        let (n, d) = match (name, args.as_slice()) {
            ("chain" | "star", [n, d]) => (Some(*n), Some(*d)),
            ("chain" | "star", [n]) => (Some(*n), None),
            (_, [d]) => (None, Some(*d)),
            (_, []) => (None, None),
            _ => return Err(Error::Parse(format!("bad preset arguments in `{s}`"))),
        };
        Preset::from_name(name, n, d)
    }
}

fn chain_graph(n: usize, d: usize) -> Result<ColoredGraph> {
    if n < 2 {
        return Err(Error::InvalidGraph("chain needs at least 2 vertices".into()));
    }
    let edges = (0..n - 1).map(|k| (k, k + 1)).collect();
    let colors = vec![(0..n).step_by(2).collect(), (1..n).step_by(2).collect()];
    ColoredGraph::new(n, d, edges, colors)
}

/// `(|00> + |11>)|00> + (|00> - |11>)|11>`, normalized, on qubits (1,2,3,4).
pub fn g4_prime_state() -> StateVector {
    let reg = QuditRegister::uniform(4, 2).expect("4 qubits");
    let mut amps = CVector::zeros(16);
    for a in 0..2usize {
        for b in 0..2usize {
            let sign = if a == 1 && b == 1 { -0.5 } else { 0.5 };
            amps[reg.index_of(&[a, a, b, b])] = c64::new(sign, 0.0);
        }
    }
    StateVector::from_parts_unchecked(reg, amps)
}

/// Local unitaries taking the 4-chain cluster to [`g4_prime_state`]:
/// Hadamards on vertices 1 and 4 (0-based parties 0 and 3).
pub fn g4_prime_local_unitaries() -> Vec<(usize, LinearOperator)> {
    vec![(0, hadamard()), (3, hadamard())]
}
