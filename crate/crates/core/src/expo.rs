//! Exponential graphs `K_k^H` and `C_k^H`.
//!
//! A vertex is a function `f: V(H) -> V(K)`; `f` and `g` are adjacent when
//! for every edge `uv` of `H` both `f(u)g(v)` and `f(v)g(u)` are edges of
//! the target `K`. Everything here that materializes part of the graph takes
//! a cap, because the vertex count is `k^|V(H)|`.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{Assignment, Color};
use crate::error::{Error, Result};
use crate::graph::{self, CycleWitness, Graph};

/// Default cap on materialized exponential-graph vertices.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// The target graph `K` of `K^H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    /// `K_k`: distinct colors are adjacent.
    Complete(u32),
    /// `C_k`: colors adjacent when they differ by one mod `k`.
    Cycle(u32),
}

impl Target {
    pub const K3: Target = Target::Complete(3);

    /// Number of target vertices.
    pub fn k(self) -> u32 {
        match self {
            Target::Complete(k) | Target::Cycle(k) => k,
        }
    }

    #[inline]
    pub fn adjacent(self, i: Color, j: Color) -> bool {
        match self {
            Target::Complete(_) => i != j,
            Target::Cycle(k) => {
                let d = (i + k - j) % k;
                d == 1 || d == k - 1
            }
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            Target::Complete(k) if k >= 1 => Ok(()),
            Target::Cycle(k) if k >= 3 => Ok(()),
            t => Err(Error::arg(format!("invalid target {t:?}"))),
        }
    }
}

fn check_assignment(h: &Graph, f: &Assignment, target: Target) -> Result<()> {
    target.validate()?;
    if f.len() != h.vertex_count() {
        return Err(Error::arg(format!(
            "assignment has {} entries, host has {} vertices",
            f.len(),
            h.vertex_count()
        )));
    }
    f.check_range(target.k())
}

/// Adjacency of `f` and `g` in `target^h`.
pub fn are_adjacent(h: &Graph, f: &Assignment, g: &Assignment, target: Target) -> Result<bool> {
    check_assignment(h, f, target)?;
    check_assignment(h, g, target)?;
    Ok(h
        .edges()
        .all(|(u, v)| target.adjacent(f[u], g[v]) && target.adjacent(f[v], g[u])))
}

/// Colors `g(v)` may take in a neighbor `g` of `f`: those adjacent in the
/// target to `f(u)` for every host neighbor `u` of `v`.
pub fn allowed_colors(h: &Graph, f: &Assignment, target: Target, v: usize) -> Vec<Color> {
    (1..=target.k())
        .filter(|&c| h.neighbors(v).iter().all(|&u| target.adjacent(f[u], c)))
        .collect()
}

/// True iff `f` has no neighbor, i.e. some host vertex has no allowed color.
/// Costs `O(|E(h)| k)`; the neighbor product is never expanded.
pub fn is_isolated(h: &Graph, f: &Assignment, target: Target) -> Result<bool> {
    check_assignment(h, f, target)?;
    Ok((0..h.vertex_count()).any(|v| allowed_colors(h, f, target, v).is_empty()))
}

/// Every neighbor of `f` in `target^h`, in lexicographic order.
pub fn neighbors(h: &Graph, f: &Assignment, target: Target) -> Result<Neighbors> {
    check_assignment(h, f, target)?;
    let allowed: Vec<Vec<Color>> = (0..h.vertex_count())
        .map(|v| allowed_colors(h, f, target, v))
        .collect();
    let exhausted = allowed.iter().any(Vec::is_empty);
    Ok(Neighbors {
        cursor: vec![0; allowed.len()],
        allowed,
        exhausted,
    })
}

/// Odometer over the product of per-vertex allowed color sets.
#[derive(Clone, Debug)]
pub struct Neighbors {
    allowed: Vec<Vec<Color>>,
    cursor: Vec<usize>,
    exhausted: bool,
}

impl Neighbors {
    /// Per-vertex allowed color sets.
    pub fn allowed(&self) -> &[Vec<Color>] {
        &self.allowed
    }

    /// Number of neighbors, `None` on overflow.
    pub fn total(&self) -> Option<u64> {
        self.allowed
            .iter()
            .try_fold(1u64, |acc, set| acc.checked_mul(set.len() as u64))
    }
}

impl Iterator for Neighbors {
    type Item = Assignment;

    fn next(&mut self) -> Option<Assignment> {
        if self.exhausted {
            return None;
        }
        let current: Vec<Color> = self
            .cursor
            .iter()
            .zip(&self.allowed)
            .map(|(&i, set)| set[i])
            .collect();
        let mut pos = self.cursor.len();
        loop {
            if pos == 0 {
                self.exhausted = true;
                break;
            }
            pos -= 1;
            self.cursor[pos] += 1;
            if self.cursor[pos] < self.allowed[pos].len() {
                break;
            }
            self.cursor[pos] = 0;
        }
        Some(Assignment::from(current))
    }
}

/// `k^m` if it fits under `cap`.
pub fn space_size(k: u32, m: usize, cap: u64) -> Result<u64> {
    let size = (k as u64).checked_pow(m as u32);
    match size {
        Some(s) if s <= cap => Ok(s),
        _ => Err(Error::capacity(
            "function space",
            format!("{k}^{m}"),
            cap,
        )),
    }
}

/// The assignment with lexicographic rank `index` among all `k^m`.
pub fn decode(index: u64, k: u32, m: usize) -> Assignment {
    let mut values = vec![0; m];
    let mut x = index;
    for slot in values.iter_mut().rev() {
        *slot = (x % k as u64) as Color + 1;
        x /= k as u64;
    }
    Assignment::from(values)
}

/// Lexicographic rank of `f` among all `k^m` assignments.
pub fn encode(f: &Assignment, k: u32) -> u64 {
    f.values()
        .iter()
        .fold(0u64, |acc, &c| acc * k as u64 + (c - 1) as u64)
}

/// Fully materialized `target^host`.
#[derive(Clone, Debug)]
pub struct ExpoGraph {
    host: Graph,
    target: Target,
    vertices: Vec<Assignment>,
    adj: Vec<Vec<usize>>,
    loops: Vec<bool>,
}

/// Enumerates all `k^|V(h)|` functions and every adjacency among them.
/// Self-adjacent functions (homomorphisms `h -> target`) are recorded as
/// loops rather than edges.
pub fn build_exponential(h: &Graph, target: Target, cap: u64) -> Result<ExpoGraph> {
    target.validate()?;
    let k = target.k();
    let m = h.vertex_count();
    let total = space_size(k, m, cap)?;
    let vertices: Vec<Assignment> = (0..total).map(|i| decode(i, k, m)).collect();
    let rows: Vec<(Vec<usize>, bool)> = vertices
        .par_iter()
        .enumerate()
        .map(|(i, f)| {
            let mut row = Vec::new();
            let mut looped = false;
            for g in neighbors(h, f, target).expect("enumerated assignments are in range") {
                let j = encode(&g, k) as usize;
                if j == i {
                    looped = true;
                } else {
                    row.push(j);
                }
            }
            (row, looped)
        })
        .collect();
    let (adj, loops) = rows.into_iter().unzip();
    Ok(ExpoGraph {
        host: h.clone(),
        target,
        vertices,
        adj,
        loops,
    })
}

/// Component of `f` by breadth-first search over neighbor streams.
pub fn component_of(h: &Graph, f: &Assignment, target: Target, cap: u64) -> Result<Vec<Assignment>> {
    check_assignment(h, f, target)?;
    let mut seen: HashSet<Assignment> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(f.clone());
    queue.push_back(f.clone());
    while let Some(x) = queue.pop_front() {
        for y in neighbors(h, &x, target)? {
            if !seen.contains(&y) {
                if seen.len() as u64 >= cap {
                    return Err(Error::capacity(
                        "component",
                        format!("more than {cap} vertices"),
                        cap,
                    ));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<Assignment> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Kind of a connected component of `K_3^H`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentClass {
    Isolated,
    Bipartite,
    /// Not bipartite. When `H` is not 3-colorable such components of
    /// `K_3^H` are exactly 3-chromatic.
    ThreeChromatic,
    /// Contains a function adjacent to itself, which happens only when `H`
    /// maps to the target. Outside the trichotomy.
    ReflexiveVertex,
}

/// Vertices selected from an [`ExpoGraph`] with their induced loop-free
/// subgraph; `graph` vertex `i` is `vertices[i]`.
#[derive(Clone, Debug)]
pub struct InducedExpo {
    pub vertices: Vec<Assignment>,
    pub graph: Graph,
    pub loops: Vec<bool>,
}

impl ExpoGraph {
    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn target(&self) -> Target {
        self.target
    }

    /// All assignments, lexicographically ordered; position is the index.
    pub fn vertices(&self) -> &[Assignment] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, f: &Assignment) -> Option<usize> {
        if f.len() != self.host.vertex_count() || f.check_range(self.target.k()).is_err() {
            return None;
        }
        Some(encode(f, self.target.k()) as usize)
    }

    /// Neighbor indices of vertex `i`, excluding `i` itself.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_loop(&self, i: usize) -> bool {
        self.loops[i]
    }

    pub fn loop_count(&self) -> usize {
        self.loops.iter().filter(|&&l| l).count()
    }

    /// Edges between distinct vertices.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The loop-free simple graph on vertex indices.
    pub fn graph(&self) -> Graph {
        let edges = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().filter(move |&&j| i < j).map(move |&j| (i, j)));
        Graph::from_edges(self.len(), edges).expect("stored adjacency is loop-free and in range")
    }

    /// Induced subgraph on the assignments satisfying `keep`.
    pub fn induced_by<F>(&self, keep: F) -> InducedExpo
    where
        F: Fn(&Assignment) -> bool,
    {
        let chosen: Vec<usize> = (0..self.len()).filter(|&i| keep(&self.vertices[i])).collect();
        self.induced(&chosen)
    }

    /// Induced subgraph on the given indices (kept in the given order).
    pub fn induced(&self, indices: &[usize]) -> InducedExpo {
        InducedExpo {
            vertices: indices.iter().map(|&i| self.vertices[i].clone()).collect(),
            graph: self.graph().induced(indices),
            loops: indices.iter().map(|&i| self.loops[i]).collect(),
        }
    }

    /// Connected components as sorted index lists, ordered by lowest index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        graph::connected_components(&self.graph())
    }

    /// Classifies a connected vertex set of this graph.
    pub fn classify_component(&self, comp: &[usize]) -> Result<ComponentClass> {
        if comp.is_empty() {
            return Err(Error::arg("empty component"));
        }
        let sub = self.graph().induced(comp);
        if graph::connected_components(&sub).len() != 1 {
            return Err(Error::arg("vertex set is not connected"));
        }
        if comp.iter().any(|&i| self.loops[i]) {
            return Ok(ComponentClass::ReflexiveVertex);
        }
        if comp.len() == 1 {
            return Ok(ComponentClass::Isolated);
        }
        Ok(match graph::bipartition(&sub) {
            Some(_) => ComponentClass::Bipartite,
            None => ComponentClass::ThreeChromatic,
        })
    }

    /// `{"n", "edges", "assignments", "loops"}`: the graph-core JSON format
    /// plus the index-to-assignment sidecar and the looped indices.
    pub fn to_json(&self) -> String {
        let value = serde_json::json!({
            "n": self.len(),
            "edges": self.graph().edges().map(|(u, v)| [u, v]).collect::<Vec<_>>(),
            "assignments": self.vertices,
            "loops": (0..self.len()).filter(|&i| self.loops[i]).collect::<Vec<_>>(),
        });
        value.to_string()
    }
}

/// `f` read along the cycle: `(f(c_0), .., f(c_{2n}))`.
pub fn restrict(h: &Graph, f: &Assignment, cyc: &CycleWitness) -> Result<Assignment> {
    if f.len() != h.vertex_count() {
        return Err(Error::arg(format!(
            "assignment has {} entries, host has {} vertices",
            f.len(),
            h.vertex_count()
        )));
    }
    cyc.check_in(h)?;
    Ok(Assignment::from(
        cyc.vertices().iter().map(|&v| f[v]).collect::<Vec<_>>(),
    ))
}
