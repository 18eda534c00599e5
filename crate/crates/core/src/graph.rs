//! Sequence graphs and the multigraph operations behind the minor reduction.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{SortPermutation, SortedSequence};

/// Which Hamiltonian cycle an edge belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cycle {
    /// Index order: `(i, i + 1 mod N)`.
    #[serde(rename = "C1")]
    C1,
    /// Sorted order: `(pi(k), pi(k + 1 mod N))`.
    #[serde(rename = "Cpi")]
    Cpi,
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Cycle::C1 => "C1",
            Cycle::Cpi => "Cpi",
        })
    }
}

/// Identity of an edge: its cycle and position within that cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    pub cycle: Cycle,
    pub index: usize,
}

impl EdgeId {
    pub fn c1(index: usize) -> Self {
        EdgeId {
            cycle: Cycle::C1,
            index,
        }
    }

    pub fn cpi(index: usize) -> Self {
        EdgeId {
            cycle: Cycle::Cpi,
            index,
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.cycle, self.index)
    }
}

/// An oriented edge `u -> v`. For C1 edges `v = u + 1 mod N`; for Cpi
/// edges `v = S(u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
}

/// The N-th sequence graph: two edge-labelled Hamiltonian cycles on `0..N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceGraph {
    n: usize,
    c1: Vec<Edge>,
    cpi: Vec<Edge>,
}

impl SequenceGraph {
    pub fn from_permutation(perm: &SortPermutation) -> Self {
        let n = perm.len();
        let pi = perm.pi();
        let c1 = (0..n)
            .map(|i| Edge {
                id: EdgeId::c1(i),
                u: i,
                v: (i + 1) % n,
            })
            .collect();
        let cpi = (0..n)
            .map(|k| Edge {
                id: EdgeId::cpi(k),
                u: pi[k],
                v: pi[(k + 1) % n],
            })
            .collect();
        SequenceGraph { n, c1, cpi }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c1_edges(&self) -> &[Edge] {
        &self.c1
    }

    pub fn cpi_edges(&self) -> &[Edge] {
        &self.cpi
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.c1.iter().chain(&self.cpi)
    }

    /// Degree counting multiplicity, loops twice.
    pub fn degree(&self, v: usize) -> usize {
        self.edges()
            .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
            .sum()
    }

    /// Vertices in the order the Cpi cycle visits them, starting at `pi(0)`.
    pub fn cpi_order(&self) -> Vec<usize> {
        self.cpi.iter().map(|e| e.u).collect()
    }

    /// The sorting permutation the Cpi cycle encodes.
    pub fn permutation(&self) -> SortPermutation {
        SortPermutation::from_pi(self.cpi_order()).expect("Cpi is Hamiltonian")
    }

    pub fn to_multigraph(&self) -> MultiGraph {
        let mut g = MultiGraph::with_vertices(0..self.n);
        for e in self.edges() {
            g.edges.insert(e.id, (e.u, e.v));
        }
        g
    }

    /// `G'_N`: this graph with the C1 edge `(N - 1, 0)` deleted.
    pub fn without_last_edge(&self) -> MultiGraph {
        let mut g = self.to_multigraph();
        g.remove_edge(EdgeId::c1(self.n - 1))
            .expect("every sequence graph has its closing C1 edge");
        g
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.n,
            edges: self.edges().map(EdgeJson::from).collect(),
        }
    }

    /// Rebuilds a sequence graph from its JSON form, checking both cycles.
    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let n = json.n;
        if n == 0 {
            return Err(Error::Parse("graph has no vertices".into()));
        }
        let mut c1: Vec<Option<Edge>> = vec![None; n];
        let mut cpi: Vec<Option<Edge>> = vec![None; n];
        for e in &json.edges {
            let slot = match e.cycle {
                Cycle::C1 => &mut c1,
                Cycle::Cpi => &mut cpi,
            };
            if e.index >= n || e.u >= n || e.v >= n || slot[e.index].is_some() {
                return Err(Error::Parse(format!("bad or repeated edge {}#{}", e.cycle, e.index)));
            }
            slot[e.index] = Some(Edge {
                id: EdgeId {
                    cycle: e.cycle,
                    index: e.index,
                },
                u: e.u,
                v: e.v,
            });
        }
        let c1: Vec<Edge> = c1
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse("missing C1 edge".into()))?;
        let cpi: Vec<Edge> = cpi
            .into_iter()
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse("missing Cpi edge".into()))?;
        if c1.iter().any(|e| e.v != (e.u + 1) % n || e.u != e.id.index) {
            return Err(Error::Parse("C1 edges are not (i, i+1 mod N)".into()));
        }
        let order: Vec<usize> = cpi.iter().map(|e| e.u).collect();
        let perm = SortPermutation::from_pi(order)
            .map_err(|_| Error::Parse("Cpi is not a Hamiltonian cycle".into()))?;
        let rebuilt = SequenceGraph::from_permutation(&perm);
        if rebuilt.cpi != cpi {
            return Err(Error::Parse("Cpi edges do not chain into a cycle".into()));
        }
        Ok(SequenceGraph { n, c1, cpi })
    }
}

/// Builds the sequence graph of a sorted prefix.
pub fn build_graph(seq: &SortedSequence) -> SequenceGraph {
    SequenceGraph::from_permutation(seq.permutation())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub u: usize,
    pub v: usize,
    pub cycle: Cycle,
    pub index: usize,
}

impl From<&Edge> for EdgeJson {
    fn from(e: &Edge) -> Self {
        EdgeJson {
            u: e.u,
            v: e.v,
            cycle: e.id.cycle,
            index: e.id.index,
        }
    }
}

/// A vertex-labelled multigraph whose edges keep their sequence-graph
/// identities through deletion and contraction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: BTreeSet<usize>,
    edges: BTreeMap<EdgeId, (usize, usize)>,
}

impl MultiGraph {
    pub fn with_vertices(vertices: impl IntoIterator<Item = usize>) -> Self {
        MultiGraph {
            vertices: vertices.into_iter().collect(),
            edges: BTreeMap::new(),
        }
    }

    pub fn vertices(&self) -> &BTreeSet<usize> {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|(&id, &(u, v))| Edge { id, u, v })
    }

    pub fn edge(&self, id: EdgeId) -> Option<Edge> {
        self.edges.get(&id).map(|&(u, v)| Edge { id, u, v })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .values()
            .map(|&(a, b)| usize::from(a == v) + usize::from(b == v))
            .sum()
    }

    pub fn incident(&self, v: usize) -> Vec<Edge> {
        self.edges().filter(|e| e.u == v || e.v == v).collect()
    }

    pub fn add_edge(&mut self, id: EdgeId, u: usize, v: usize) -> Result<()> {
        if !self.vertices.contains(&u) || !self.vertices.contains(&v) {
            return Err(Error::InvalidParam(format!("edge {id} has an endpoint outside the graph")));
        }
        if self.edges.contains_key(&id) {
            return Err(Error::InvalidParam(format!("edge {id} already present")));
        }
        self.edges.insert(id, (u, v));
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<Edge> {
        self.edges
            .remove(&id)
            .map(|(u, v)| Edge { id, u, v })
            .ok_or(Error::NoSuchEdge(id))
    }

    /// Removes a vertex and every edge incident to it.
    pub fn remove_vertex(&mut self, v: usize) -> Result<()> {
        if !self.vertices.remove(&v) {
            return Err(Error::InvalidParam(format!("no vertex {v}")));
        }
        self.edges.retain(|_, &mut (a, b)| a != v && b != v);
        Ok(())
    }

    /// Contracts edge `id`, merging its endpoints into the smaller label.
    ///
    /// Other copies of the contracted edge become loops and are dropped;
    /// loops that already existed are kept. Returns the surviving label.
    pub fn contract(&mut self, id: EdgeId) -> Result<usize> {
        let (u, v) = *self.edges.get(&id).ok_or(Error::NoSuchEdge(id))?;
        if u == v {
            return Err(Error::LoopContraction(id));
        }
        self.edges.remove(&id);
        let (keep, gone) = (u.min(v), u.max(v));
        self.edges.retain(|_, &mut (a, b)| !((a == u && b == v) || (a == v && b == u)));
        for (a, b) in self.edges.values_mut() {
            if *a == gone {
                *a = keep;
            }
            if *b == gone {
                *b = keep;
            }
        }
        self.vertices.remove(&gone);
        Ok(keep)
    }

    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.vertices.first() else {
            return true;
        };
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &(a, b) in self.edges.values() {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in adj.get(&x).into_iter().flatten() {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// Edge multiset keyed by unordered endpoints and cycle label.
    pub fn labeled_edge_multiset(&self) -> BTreeMap<(usize, usize, Cycle), usize> {
        let mut out = BTreeMap::new();
        for (id, &(a, b)) in &self.edges {
            *out.entry((a.min(b), a.max(b), id.cycle)).or_insert(0) += 1;
        }
        out
    }

    pub fn to_json(&self) -> MultiGraphJson {
        MultiGraphJson {
            vertices: self.vertices.iter().copied().collect(),
            edges: self.edges().map(|e| EdgeJson::from(&e)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiGraphJson {
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeJson>,
}

pub fn delete_edge(g: &MultiGraph, id: EdgeId) -> Result<MultiGraph> {
    let mut out = g.clone();
    out.remove_edge(id)?;
    Ok(out)
}

pub fn contract_edge(g: &MultiGraph, id: EdgeId) -> Result<MultiGraph> {
    let mut out = g.clone();
    out.contract(id)?;
    Ok(out)
}

/// Same vertex labels and same edge multiset, ignoring edge indices.
pub fn is_same_labeled_graph(a: &MultiGraph, b: &MultiGraph) -> bool {
    a.vertices == b.vertices && a.labeled_edge_multiset() == b.labeled_edge_multiset()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionStep {
    /// The degree-2 vertex being absorbed.
    pub vertex: usize,
    pub edge: EdgeId,
    /// The neighbour whose label survives.
    pub into: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorReduction {
    pub graph: MultiGraph,
    pub deleted: Vec<EdgeId>,
    pub contractions: Vec<ContractionStep>,
}

/// Reduces `G_M` to `G'_N` by edge deletions and contractions.
///
/// Deletes the C1 edges `(N-1, N), ..., (M-2, M-1), (M-1, 0)`, leaving every
/// vertex `k >= N` with just its two Cpi edges, then absorbs `M-1, ..., N`
/// in turn, each into its lower-labelled Cpi neighbour.
pub fn minor_reduce(g_m: &SequenceGraph, n: usize) -> Result<MinorReduction> {
    let m = g_m.n();
    if n >= m {
        return Err(Error::InvalidRange { n, m });
    }
    if n < 2 {
        return Err(Error::InvalidParam(format!("target size {n} must be at least 2")));
    }
    let mut g = g_m.to_multigraph();
    let deleted: Vec<EdgeId> = (n - 1..m).map(EdgeId::c1).collect();
    for &id in &deleted {
        g.remove_edge(id)?;
    }
    let mut contractions = Vec::with_capacity(m - n);
    for k in (n..m).rev() {
        let incident = g.incident(k);
        assert_eq!(g.degree(k), 2, "vertex {k} must have degree 2 before contraction");
        let chosen = incident
            .iter()
            .map(|e| (if e.u == k { e.v } else { e.u }, e.id))
            .min()
            .expect("degree-2 vertex has incident edges");
        let into = g.contract(chosen.1)?;
        debug_assert_eq!(into, chosen.0);
        contractions.push(ContractionStep {
            vertex: k,
            edge: chosen.1,
            into,
        });
    }
    Ok(MinorReduction {
        graph: g,
        deleted,
        contractions,
    })
}
