//! Rotation systems, face tracing and genus.
//!
//! Edge `e = (u, v)` owns two darts: `2e` leaves `u` and `2e + 1` leaves
//! `v`. A rotation system lists, for every vertex, the darts leaving it in
//! cyclic order. Faces are the orbits of `d -> rot_next(reverse(d))`.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Cycle, MultiGraph, SequenceGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationSystem {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    rotation: Vec<Vec<usize>>,
}

impl RotationSystem {
    /// Checks that every dart appears exactly once, at the vertex it leaves.
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>, rotation: Vec<Vec<usize>>) -> Result<Self> {
        if rotation.len() != vertex_count {
            return Err(Error::InvalidRotation(format!(
                "{} rotations for {vertex_count} vertices",
                rotation.len()
            )));
        }
        let mut placed = vec![false; 2 * edges.len()];
        for (v, darts) in rotation.iter().enumerate() {
            for &d in darts {
                let Some(&(a, b)) = edges.get(d / 2) else {
                    return Err(Error::InvalidRotation(format!("dart {d} has no edge")));
                };
                let origin = if d % 2 == 0 { a } else { b };
                if origin != v {
                    return Err(Error::InvalidRotation(format!(
                        "dart {d} leaves {origin}, listed at {v}"
                    )));
                }
                if std::mem::replace(&mut placed[d], true) {
                    return Err(Error::InvalidRotation(format!("dart {d} listed twice")));
                }
            }
        }
        if let Some(d) = placed.iter().position(|p| !p) {
            return Err(Error::InvalidRotation(format!("dart {d} not listed")));
        }
        Ok(RotationSystem {
            vertex_count,
            edges,
            rotation,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn origin(&self, dart: usize) -> usize {
        let (a, b) = self.edges[dart / 2];
        if dart.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.vertex_count];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceReport {
    pub vertices: usize,
    pub edges: usize,
    pub face_count: usize,
    /// Dart count of each face, in order of the smallest dart.
    pub face_sizes: Vec<usize>,
    pub euler_characteristic: i64,
    pub genus: i64,
}

/// Traces the faces of a connected rotation system.
pub fn face_trace(rs: &RotationSystem) -> Result<FaceReport> {
    if !rs.is_connected() {
        return Err(Error::InvalidRotation("graph is not connected".into()));
    }
    let darts = 2 * rs.edge_count();
    let mut next_at = vec![0usize; darts];
    for darts_at in &rs.rotation {
        for (k, &d) in darts_at.iter().enumerate() {
            next_at[d] = darts_at[(k + 1) % darts_at.len()];
        }
    }
    let mut visited = vec![false; darts];
    let mut face_sizes = Vec::new();
    for start in 0..darts {
        if visited[start] {
            continue;
        }
        let mut size = 0;
        let mut d = start;
        while !visited[d] {
            visited[d] = true;
            size += 1;
            d = next_at[d ^ 1];
        }
        face_sizes.push(size);
    }
    let euler = rs.vertex_count as i64 - rs.edge_count() as i64 + face_sizes.len() as i64;
    if (2 - euler) % 2 != 0 {
        return Err(Error::InvalidRotation(format!(
            "odd Euler characteristic {euler}"
        )));
    }
    Ok(FaceReport {
        vertices: rs.vertex_count,
        edges: rs.edge_count(),
        face_count: face_sizes.len(),
        face_sizes,
        euler_characteristic: euler,
        genus: (2 - euler) / 2,
    })
}

/// Cyclic order of the four darts at each vertex of a circulant graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TorusOrder {
    /// `(+1, +c, -1, -c)`.
    Standard,
    /// `(+1, -c, -1, +c)`.
    Mirrored,
}

/// Rotation system of the circulant multigraph with edges `(i, i+1)` and
/// `(i, i+c)` for every `i`, parallel edges kept distinct. Edge `i` is the
/// `+1` edge at `i`, edge `n + i` the `+c` edge at `i`.
pub fn circulant_rotation_system(n: usize, c: usize, order: TorusOrder) -> Result<RotationSystem> {
    if n < 2 || c.is_multiple_of(n) {
        return Err(Error::DegenerateConnectionSet { n, c });
    }
    let c = c % n;
    let mut edges = Vec::with_capacity(2 * n);
    edges.extend((0..n).map(|i| (i, (i + 1) % n)));
    edges.extend((0..n).map(|i| (i, (i + c) % n)));
    let rotation = (0..n)
        .map(|i| {
            let plus_one = 2 * i;
            let plus_c = 2 * (n + i);
            let minus_one = 2 * ((i + n - 1) % n) + 1;
            let minus_c = 2 * (n + (i + n - c) % n) + 1;
            match order {
                TorusOrder::Standard => vec![plus_one, plus_c, minus_one, minus_c],
                TorusOrder::Mirrored => vec![plus_one, minus_c, minus_one, plus_c],
            }
        })
        .collect();
    RotationSystem::new(n, edges, rotation)
}

/// The torus rotation `(+1, +c, -1, -c)` on the circulant `C_N({1, c})`.
/// Rejects connection sets that collapse to `{1}`.
pub fn torus_rotation_system(n: usize, c: usize) -> Result<RotationSystem> {
    if n < 3 || [0, 1, n - 1].contains(&(c % n)) {
        return Err(Error::DegenerateConnectionSet { n, c });
    }
    circulant_rotation_system(n, c, TorusOrder::Standard)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorusEmbedding {
    pub n: usize,
    pub c: usize,
    pub order: TorusOrder,
    pub faces: FaceReport,
}

/// Finds a genus-one rotation of the circulant multigraph: the standard
/// order first, then the mirrored one. Returns the last attempt if neither
/// reaches genus one.
pub fn torus_embedding(n: usize, c: usize) -> Result<TorusEmbedding> {
    let mut last = None;
    for order in [TorusOrder::Standard, TorusOrder::Mirrored] {
        let faces = face_trace(&circulant_rotation_system(n, c, order)?)?;
        let done = faces.genus == 1;
        last = Some(TorusEmbedding { n, c: c % n, order, faces });
        if done {
            break;
        }
    }
    Ok(last.expect("two orders tried"))
}

/// Deterministic rotation for a sequence graph: at each vertex, outgoing C1,
/// outgoing Cpi, incoming C1, incoming Cpi.
pub fn canonical_rotation(g: &SequenceGraph) -> Result<RotationSystem> {
    canonical_rotation_of(&g.to_multigraph())
}

/// Canonical rotation of any multigraph with oriented, cycle-tagged edges,
/// such as the reduced graphs. Vertices are renumbered in ascending label
/// order; darts at a vertex are ranked by (direction, cycle, edge id).
pub fn canonical_rotation_of(g: &MultiGraph) -> Result<RotationSystem> {
    if g.vertex_count() < 3 {
        return Err(Error::DegenerateGraph(g.vertex_count()));
    }
    let index: BTreeMap<usize, usize> = g.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::with_capacity(g.edge_count());
    let mut ranked: Vec<Vec<((u8, u8), usize)>> = vec![Vec::new(); g.vertex_count()];
    for (k, e) in g.edges().enumerate() {
        let (u, v) = (index[&e.u], index[&e.v]);
        edges.push((u, v));
        let cycle_rank = match e.id.cycle {
            Cycle::C1 => 0,
            Cycle::Cpi => 1,
        };
        ranked[u].push(((0, cycle_rank), 2 * k));
        ranked[v].push(((1, cycle_rank), 2 * k + 1));
    }
    let rotation = ranked
        .into_iter()
        .map(|mut darts| {
            darts.sort();
            darts.into_iter().map(|(_, d)| d).collect()
        })
        .collect();
    RotationSystem::new(g.vertex_count(), edges, rotation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::sequence::{kronecker_prefix, KroneckerParams, Theta};

    #[test]
    fn torus_examples() {
        for (n, c) in [(8, 5), (5, 2)] {
            let f = face_trace(&torus_rotation_system(n, c).unwrap()).unwrap();
            assert_eq!(f.euler_characteristic, 0, "N = {n}, c = {c}");
            assert_eq!(f.genus, 1);
        }
        assert!(matches!(
            torus_rotation_system(3, 1),
            Err(Error::DegenerateConnectionSet { n: 3, c: 1 })
        ));
    }

    #[test]
    fn collapsed_sets_still_reach_the_torus() {
        for (n, c) in [(2, 1), (3, 1), (3, 2), (4, 3)] {
            assert_eq!(torus_embedding(n, c).unwrap().faces.genus, 1, "N = {n}, c = {c}");
        }
    }

    #[test]
    fn loop_on_one_vertex_is_a_sphere() {
        let rs = RotationSystem::new(1, vec![(0, 0)], vec![vec![0, 1]]).unwrap();
        let f = face_trace(&rs).unwrap();
        assert_eq!((f.face_count, f.euler_characteristic, f.genus), (2, 2, 0));
    }

    #[test]
    fn bad_rotations() {
        assert!(RotationSystem::new(2, vec![(0, 1)], vec![vec![0], vec![0]]).is_err());
        assert!(RotationSystem::new(2, vec![(0, 1)], vec![vec![0], vec![]]).is_err());
        let split = RotationSystem::new(4, vec![(0, 1), (2, 3)], vec![vec![0], vec![1], vec![2], vec![3]]).unwrap();
        assert!(matches!(face_trace(&split), Err(Error::InvalidRotation(_))));
    }

    #[test]
    fn canonical_golden_eight() {
        let g = build_graph(&kronecker_prefix(&KroneckerParams::new(Theta::Golden), 8).unwrap());
        let f = face_trace(&canonical_rotation(&g).unwrap()).unwrap();
        assert_eq!(f.genus, 1);
        let small = build_graph(&kronecker_prefix(&KroneckerParams::new(Theta::Golden), 2).unwrap());
        assert!(matches!(canonical_rotation(&small), Err(Error::DegenerateGraph(2))));
    }
}
