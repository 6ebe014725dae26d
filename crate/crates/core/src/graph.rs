//! Undirected simple graphs over dense `0..n` vertex ids, the generators used
//! as test inputs, and the small exact solvers the verifiers lean on.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Graphs above this size are refused by [`chromatic_number_exact`].
///
/// The solver is intended for roughly 24 vertices or fewer; it accepts
/// larger inputs because colorable graphs of a few dozen vertices (such as
/// the non-isolated part of `K_3^{K_4}`) are still settled instantly by the
/// saturation-ordered search.
pub const CHROMATIC_HARD_CAP: usize = 64;

/// Simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphJson", into = "GraphJson")]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

/// On-disk form: `{"n": 5, "edges": [[0,1], ...]}` with 0-based ids.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(value: GraphJson) -> Result<Self> {
        Graph::from_edges(value.n, value.edges.iter().map(|&[u, v]| (u, v)))
    }
}

impl From<Graph> for GraphJson {
    fn from(g: Graph) -> Self {
        GraphJson {
            n: g.vertex_count(),
            edges: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list. Duplicate edges are merged;
    /// self-loops and out-of-range ids are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::arg(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::arg(format!("self-loop at vertex {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted neighbor ids of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Each edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    /// Subgraph induced on `vertices`; vertex `vertices[i]` becomes id `i`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<usize> = self.adj[v]
                    .iter()
                    .filter_map(|&w| (index[w] != usize::MAX).then_some(index[w]))
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph { adj }
    }

    /// Checks the structural invariants: symmetric sorted adjacency, ids in
    /// range, no self-loops.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertex_count();
        for (u, list) in self.adj.iter().enumerate() {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Invariant(format!("adjacency of {u} not strictly sorted")));
            }
            for &v in list {
                if v >= n || v == u || !self.has_edge(v, u) {
                    return Err(Error::Invariant(format!("bad adjacency entry {u} -> {v}")));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::arg(format!("bad graph JSON: {e}")))
    }

    /// Graphviz rendering, one line per edge.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.vertex_count() {
            if self.adj[v].is_empty() {
                let _ = writeln!(out, "  {v};");
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

/// The cycle `C_len` on vertices `0..len`. Only odd lengths are accepted.
pub fn make_cycle(len: usize) -> Result<Graph> {
    if len < 3 || len % 2 == 0 {
        return Err(Error::arg(format!(
            "cycle length must be odd and at least 3, got {len}"
        )));
    }
    Graph::from_edges(len, (0..len).map(|i| (i, (i + 1) % len)))
}

/// The complete graph `K_k`.
pub fn make_complete(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::arg("complete graph needs at least one vertex"));
    }
    Graph::from_edges(k, (0..k).flat_map(|u| (u + 1..k).map(move |v| (u, v))))
}

/// Mycielski construction. Vertex `i < n` is the original, `n + i` its
/// shadow (adjacent to the original neighbors of `i`), and `2n` the apex
/// joined to every shadow.
pub fn make_mycielski(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let apex = 2 * n;
    let mut edges = Vec::with_capacity(3 * g.edge_count() + n);
    for (u, v) in g.edges() {
        edges.push((u, v));
        edges.push((n + u, v));
        edges.push((u, n + v));
    }
    edges.extend((0..n).map(|i| (n + i, apex)));
    Graph::from_edges(2 * n + 1, edges).expect("Mycielski edges are in range and loop-free")
}

/// True iff `colors` (indexed by vertex, values in `1..=k`) is a proper
/// coloring of `g`.
pub fn is_proper_coloring(g: &Graph, colors: &[u32], k: u32) -> Result<bool> {
    if colors.len() != g.vertex_count() {
        return Err(Error::arg(format!(
            "coloring covers {} vertices, graph has {}",
            colors.len(),
            g.vertex_count()
        )));
    }
    if colors.iter().any(|&c| c == 0 || c > k) {
        return Ok(false);
    }
    Ok(g.edges().all(|(u, v)| colors[u] != colors[v]))
}

/// Two-coloring by BFS. Components are processed in order of their lowest
/// vertex id, which is always placed on the first side.
pub fn bipartition(g: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let side = two_color(g).ok()?;
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (v, s) in side.into_iter().enumerate() {
        if s == 0 {
            a.push(v);
        } else {
            b.push(v);
        }
    }
    Some((a, b))
}

/// BFS side assignment, or the BFS parent array plus a conflicting edge.
fn two_color(g: &Graph) -> std::result::Result<Vec<u8>, OddWitness> {
    let n = g.vertex_count();
    let mut side = vec![u8::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if side[root] != u8::MAX {
            continue;
        }
        side[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if side[v] == u8::MAX {
                    side[v] = 1 - side[u];
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    queue.push_back(v);
                } else if side[v] == side[u] {
                    return Err(OddWitness {
                        parent,
                        depth,
                        edge: (u, v),
                    });
                }
            }
        }
    }
    Ok(side)
}

struct OddWitness {
    parent: Vec<usize>,
    depth: Vec<usize>,
    edge: (usize, usize),
}

impl OddWitness {
    /// Closes the conflicting edge with the two BFS tree paths up to their
    /// lowest common ancestor.
    fn into_cycle(self) -> Vec<usize> {
        let (mut u, mut v) = self.edge;
        let mut left = vec![u];
        let mut right = vec![v];
        while self.depth[u] > self.depth[v] {
            u = self.parent[u];
            left.push(u);
        }
        while self.depth[v] > self.depth[u] {
            v = self.parent[v];
            right.push(v);
        }
        while u != v {
            u = self.parent[u];
            v = self.parent[v];
            left.push(u);
            right.push(v);
        }
        right.pop();
        right.reverse();
        left.extend(right);
        left
    }
}

/// Some odd cycle of the subgraph induced on `{v : keep[v]}`, in host ids.
pub fn odd_cycle_within(g: &Graph, keep: &[bool]) -> Option<CycleWitness> {
    let vertices: Vec<usize> = (0..g.vertex_count()).filter(|&v| keep[v]).collect();
    let sub = g.induced(&vertices);
    match two_color(&sub) {
        Ok(_) => None,
        Err(witness) => {
            let cycle = witness.into_cycle().into_iter().map(|i| vertices[i]).collect();
            Some(CycleWitness { vertices: cycle })
        }
    }
}

/// Connected components, each sorted, ordered by lowest member.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut comp = vec![root];
        let mut i = 0;
        while i < comp.len() {
            let u = comp[i];
            i += 1;
            for &v in g.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Minimum number of colors of a proper coloring of `g`.
///
/// Clique lower bound, bipartiteness for the two-color case, then a
/// saturation-ordered backtracking search for each larger candidate.
pub fn chromatic_number_exact(g: &Graph) -> Result<usize> {
    let n = g.vertex_count();
    if n > CHROMATIC_HARD_CAP {
        return Err(Error::capacity(
            "exact chromatic number",
            format!("{n} vertices"),
            CHROMATIC_HARD_CAP as u64,
        ));
    }
    if n == 0 {
        return Ok(0);
    }
    if g.edge_count() == 0 {
        return Ok(1);
    }
    if bipartition(g).is_some() {
        return Ok(2);
    }
    let mut k = greedy_clique(g).max(3);
    loop {
        if find_coloring(g, k).is_some() {
            return Ok(k);
        }
        k += 1;
    }
}

fn greedy_clique(g: &Graph) -> usize {
    let mut best = 0;
    for start in 0..g.vertex_count() {
        let mut clique = vec![start];
        let mut candidates: Vec<usize> = g.neighbors(start).to_vec();
        candidates.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        for v in candidates {
            if clique.iter().all(|&c| g.has_edge(c, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// A proper coloring with colors `1..=k`, if one exists.
pub fn find_coloring(g: &Graph, k: usize) -> Option<Vec<u32>> {
    let mut colors = vec![0u32; g.vertex_count()];
    if color_rec(g, k as u32, &mut colors, 0, 0) {
        Some(colors)
    } else {
        None
    }
}

fn color_rec(g: &Graph, k: u32, colors: &mut [u32], done: usize, used: u32) -> bool {
    if done == colors.len() {
        return true;
    }
    // DSATUR pick: most distinct neighbor colors, then highest degree.
    let mut pick = usize::MAX;
    let mut best = (0usize, 0usize);
    let mut pick_mask = 0u128;
    for v in 0..colors.len() {
        if colors[v] != 0 {
            continue;
        }
        let mask = g
            .neighbors(v)
            .iter()
            .fold(0u128, |m, &w| m | (1u128 << colors[w]));
        let sat = (mask >> 1).count_ones() as usize;
        let key = (sat, g.degree(v));
        if pick == usize::MAX || key > best {
            pick = v;
            best = key;
            pick_mask = mask;
        }
    }
    // New colors beyond `used + 1` are symmetric to `used + 1`.
    for c in 1..=k.min(used + 1) {
        if pick_mask & (1u128 << c) != 0 {
            continue;
        }
        colors[pick] = c;
        if color_rec(g, k, colors, done + 1, used.max(c)) {
            return true;
        }
    }
    colors[pick] = 0;
    false
}

/// An odd cycle in a host graph, listed in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleWitness {
    vertices: Vec<usize>,
}

impl CycleWitness {
    /// Validates that `vertices` is an odd cycle of length at least 3 in `g`.
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Self> {
        let witness = CycleWitness { vertices };
        witness.check_in(g)?;
        Ok(witness)
    }

    pub fn check_in(&self, g: &Graph) -> Result<()> {
        let len = self.vertices.len();
        if len < 3 || len % 2 == 0 {
            return Err(Error::arg(format!("cycle length {len} is not odd and >= 3")));
        }
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != len {
            return Err(Error::arg("cycle repeats a vertex"));
        }
        for i in 0..len {
            let (u, v) = (self.vertices[i], self.vertices[(i + 1) % len]);
            if !g.has_edge(u, v) {
                return Err(Error::arg(format!("{u} and {v} are not adjacent in the host")));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `n` such that the cycle has length `2n + 1`.
    pub fn half_len(&self) -> usize {
        self.vertices.len() / 2
    }
}

/// All odd cycles of length at most `max_len`, shortest first.
///
/// Each cycle is reported once, starting at its minimum vertex and oriented
/// so that the second vertex is smaller than the last.
pub fn odd_cycles(g: &Graph, max_len: usize) -> OddCycles<'_> {
    OddCycles {
        g,
        max_len,
        len: 3,
        start: 0,
        pending: VecDeque::new(),
    }
}

pub struct OddCycles<'a> {
    g: &'a Graph,
    max_len: usize,
    len: usize,
    start: usize,
    pending: VecDeque<CycleWitness>,
}

impl Iterator for OddCycles<'_> {
    type Item = CycleWitness;

    fn next(&mut self) -> Option<CycleWitness> {
        loop {
            if let Some(c) = self.pending.pop_front() {
                return Some(c);
            }
            if self.len > self.max_len || self.len > self.g.vertex_count() {
                return None;
            }
            let mut path = vec![self.start];
            let mut on_path = vec![false; self.g.vertex_count()];
            on_path[self.start] = true;
            extend_paths(self.g, self.len, &mut path, &mut on_path, &mut self.pending);
            self.start += 1;
            if self.start == self.g.vertex_count() {
                self.start = 0;
                self.len += 2;
            }
        }
    }
}

fn extend_paths(
    g: &Graph,
    len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut VecDeque<CycleWitness>,
) {
    let start = path[0];
    let last = *path.last().unwrap();
    if path.len() == len {
        if g.has_edge(last, start) && path[1] < last {
            out.push_back(CycleWitness {
                vertices: path.clone(),
            });
        }
        return;
    }
    for &v in g.neighbors(last) {
        if v <= start || on_path[v] {
            continue;
        }
        on_path[v] = true;
        path.push(v);
        extend_paths(g, len, path, on_path, out);
        path.pop();
        on_path[v] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn cycle_generator() {
        let c3 = make_cycle(3).unwrap();
        assert_eq!(c3.edge_count(), 3);
        assert_eq!(c3, make_complete(3).unwrap());
        let c5 = make_cycle(5).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert_eq!(chromatic_number_exact(&c5).unwrap(), 3);
        assert!(matches!(make_cycle(4), Err(Error::Argument(_))));
        assert!(make_cycle(1).is_err());
    }

    #[test]
    fn complete_generator() {
        let k1 = make_complete(1).unwrap();
        assert_eq!((k1.vertex_count(), k1.edge_count()), (1, 0));
        let k4 = make_complete(4).unwrap();
        assert_eq!(k4.edge_count(), 6);
        assert_eq!(chromatic_number_exact(&k4).unwrap(), 4);
        assert!(make_complete(0).is_err());
    }

    #[test]
    fn mycielski_small_cases() {
        let grotzsch = make_mycielski(&make_cycle(5).unwrap());
        assert_eq!(grotzsch.vertex_count(), 11);
        assert_eq!(grotzsch.edge_count(), 20);
        assert_eq!(chromatic_number_exact(&grotzsch).unwrap(), 4);
        assert_eq!(odd_cycles(&grotzsch, 3).count(), 0);

        // One vertex: the apex meets the lone shadow, the original stays isolated.
        let m1 = make_mycielski(&make_complete(1).unwrap());
        assert_eq!((m1.vertex_count(), m1.edge_count()), (3, 1));
        assert_eq!(chromatic_number_exact(&m1).unwrap(), 2);

        let m2 = make_mycielski(&make_complete(2).unwrap());
        assert_eq!((m2.vertex_count(), m2.edge_count()), (5, 5));
        assert!(m2.neighbors(0).len() == 2 && (0..5).all(|v| m2.degree(v) == 2));
        assert_eq!(odd_cycles(&m2, 5).count(), 1);
    }

    #[test]
    fn proper_coloring_predicate() {
        let c5 = make_cycle(5).unwrap();
        assert!(is_proper_coloring(&c5, &[1, 2, 1, 2, 3], 3).unwrap());
        assert!(!is_proper_coloring(&c5, &[1, 1, 2, 3, 2], 3).unwrap());
        assert!(!is_proper_coloring(&c5, &[1, 2, 1, 2, 4], 3).unwrap());
        let k4 = make_complete(4).unwrap();
        assert!(!is_proper_coloring(&k4, &[1, 2, 3, 3], 3).unwrap());
        assert!(is_proper_coloring(&k4, &[1, 2], 3).is_err());
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(chromatic_number_exact(&make_cycle(7).unwrap()).unwrap(), 3);
        assert_eq!(chromatic_number_exact(&Graph::empty(3)).unwrap(), 1);
        assert_eq!(chromatic_number_exact(&c4()).unwrap(), 2);
        let big = Graph::empty(CHROMATIC_HARD_CAP + 1);
        assert!(matches!(chromatic_number_exact(&big), Err(Error::Capacity { .. })));
    }

    #[test]
    fn bipartition_cases() {
        assert_eq!(bipartition(&c4()), Some((vec![0, 2], vec![1, 3])));
        assert_eq!(bipartition(&make_cycle(5).unwrap()), None);
        assert_eq!(bipartition(&Graph::empty(3)), Some((vec![0, 1, 2], vec![])));
    }

    #[test]
    fn odd_cycle_enumeration() {
        let k4 = make_complete(4).unwrap();
        let triangles: Vec<_> = odd_cycles(&k4, 3).map(|c| c.vertices().to_vec()).collect();
        assert_eq!(
            triangles,
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]
        );
        let c5 = make_cycle(5).unwrap();
        let all: Vec<_> = odd_cycles(&c5, 5).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].vertices(), &[0, 1, 2, 3, 4]);
        assert_eq!(odd_cycles(&c4(), 5).count(), 0);
        // K_5 has 10 triangles and 12 five-cycles.
        let k5 = make_complete(5).unwrap();
        let lens: Vec<usize> = odd_cycles(&k5, 5).map(|c| c.len()).collect();
        assert_eq!(lens.iter().filter(|&&l| l == 3).count(), 10);
        assert_eq!(lens.iter().filter(|&&l| l == 5).count(), 12);
        assert!(lens.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn odd_cycle_within_subset() {
        let g = make_mycielski(&make_cycle(5).unwrap());
        let all = vec![true; g.vertex_count()];
        let c = odd_cycle_within(&g, &all).unwrap();
        c.check_in(&g).unwrap();
        let mut keep = vec![false; g.vertex_count()];
        keep[0] = true;
        keep[1] = true;
        assert!(odd_cycle_within(&g, &keep).is_none());
    }

    #[test]
    fn witness_validation() {
        let k4 = make_complete(4).unwrap();
        assert!(CycleWitness::new(&k4, vec![0, 1, 2]).is_ok());
        assert!(CycleWitness::new(&k4, vec![0, 1, 2, 3]).is_err());
        assert!(CycleWitness::new(&c4(), vec![0, 1, 2]).is_err());
        assert!(CycleWitness::new(&k4, vec![0, 1, 1]).is_err());
    }

    #[test]
    fn json_and_dot() {
        let c5 = make_cycle(5).unwrap();
        let text = c5.to_json();
        assert_eq!(text, r#"{"n":5,"edges":[[0,1],[0,4],[1,2],[2,3],[3,4]]}"#);
        assert_eq!(Graph::from_json(&text).unwrap(), c5);
        assert!(Graph::from_json(r#"{"n":2,"edges":[[0,2]]}"#).is_err());
        assert!(Graph::from_json(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
        let dot = Graph::empty(1).to_dot();
        assert_eq!(dot, "graph G {\n  0;\n}\n");
        assert!(c5.to_dot().contains("  0 -- 4;\n"));
    }
}
