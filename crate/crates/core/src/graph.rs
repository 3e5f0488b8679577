//! Signed multigraphs on half-edges.
//!
//! Vertices are dense `0..n` indices and edges are identified by their
//! position in the edge list, so parallel edges and loops are first-class.
//! Every edge owns two half-edges, one per endpoint; a loop's two half-edges
//! sit at the same vertex and are told apart by [`End`].

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    pub fn from_value(v: i64) -> Sign {
        if v < 0 {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

/// Which endpoint of an edge a half-edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum End {
    First,
    Second,
}

impl End {
    pub fn index(self) -> usize {
        match self {
            End::First => 0,
            End::Second => 1,
        }
    }

    pub fn other(self) -> End {
        match self {
            End::First => End::Second,
            End::Second => End::First,
        }
    }

    pub const BOTH: [End; 2] = [End::First, End::Second];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfEdge {
    pub edge: usize,
    pub end: End,
}

impl HalfEdge {
    pub fn new(edge: usize, end: End) -> Self {
        HalfEdge { edge, end }
    }

    pub fn mate(self) -> HalfEdge {
        HalfEdge { edge: self.edge, end: self.end.other() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub ends: [usize; 2],
    pub sign: Sign,
}

impl Edge {
    pub fn new(u: usize, v: usize, sign: Sign) -> Self {
        Edge { ends: [u, v], sign }
    }

    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }

    pub fn end(&self, end: End) -> usize {
        self.ends[end.index()]
    }

    /// The endpoint opposite to `v`; for a loop this is `v` itself.
    pub fn opposite(&self, v: usize) -> usize {
        if self.ends[0] == v {
            self.ends[1]
        } else {
            self.ends[0]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedGraph {
    num_vertices: usize,
    edges: Vec<Edge>,
    incidence: Vec<Vec<HalfEdge>>,
}

impl SignedGraph {
    pub fn new(num_vertices: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut incidence = vec![Vec::new(); num_vertices];
        for (id, e) in edges.iter().enumerate() {
            for end in End::BOTH {
                let v = e.end(end);
                if v >= num_vertices {
                    return Err(Error::UnknownVertex(v));
                }
                incidence[v].push(HalfEdge::new(id, end));
            }
        }
        Ok(SignedGraph { num_vertices, edges, incidence })
    }

    /// Builds a graph from `(u, v, sign)` triples with 0-based vertices.
    pub fn from_triples(num_vertices: usize, triples: &[(usize, usize, Sign)]) -> Result<Self> {
        Self::new(
            num_vertices,
            triples.iter().map(|&(u, v, s)| Edge::new(u, v, s)).collect(),
        )
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn sign(&self, e: usize) -> Sign {
        self.edges[e].sign
    }

    pub fn signs(&self) -> Vec<Sign> {
        self.edges.iter().map(|e| e.sign).collect()
    }

    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        self.edges[h.edge].end(h.end)
    }

    /// Half-edges incident with `v`, in edge order; a loop appears twice.
    pub fn half_edges_at(&self, v: usize) -> &[HalfEdge] {
        &self.incidence[v]
    }

    /// Number of half-edges at `v` (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn negative_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].sign.is_negative()).collect()
    }

    pub fn num_negative(&self) -> usize {
        self.edges.iter().filter(|e| e.sign.is_negative()).count()
    }

    /// Same underlying graph with a new signature.
    pub fn with_signs(&self, signs: &[Sign]) -> SignedGraph {
        assert_eq!(signs.len(), self.edges.len());
        let edges = self
            .edges
            .iter()
            .zip(signs)
            .map(|(e, &s)| Edge { ends: e.ends, sign: s })
            .collect();
        SignedGraph {
            num_vertices: self.num_vertices,
            edges,
            incidence: self.incidence.clone(),
        }
    }

    /// Same underlying graph with every sign reversed.
    pub fn negated(&self) -> SignedGraph {
        let signs: Vec<Sign> = self.edges.iter().map(|e| e.sign.flip()).collect();
        self.with_signs(&signs)
    }

    pub fn is_cubic(&self) -> bool {
        self.edges.iter().all(|e| !e.is_loop()) && (0..self.num_vertices).all(|v| self.degree(v) == 3)
    }

    /// Switching at every vertex of `set`: non-loop edges with exactly one
    /// endpoint in the set change sign.
    pub fn switch(&self, set: &[usize]) -> Result<SignedGraph> {
        let mask = self.vertex_mask(set)?;
        let signs: Vec<Sign> = self
            .edges
            .iter()
            .map(|e| if mask[e.ends[0]] != mask[e.ends[1]] { e.sign.flip() } else { e.sign })
            .collect();
        Ok(self.with_signs(&signs))
    }

    pub(crate) fn vertex_mask(&self, set: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.num_vertices];
        for &v in set {
            if v >= self.num_vertices {
                return Err(Error::UnknownVertex(v));
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.num_vertices];
        let mut out = Vec::new();
        for s in 0..self.num_vertices {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let v = members[i];
                i += 1;
                for h in &self.incidence[v] {
                    let w = self.edges[h.edge].opposite(v);
                    if comp[w] == usize::MAX {
                        comp[w] = id;
                        members.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Component index of every vertex, consistent with [`Self::connected_components`].
    pub fn component_map(&self) -> Vec<usize> {
        let mut map = vec![0; self.num_vertices];
        for (i, c) in self.connected_components().iter().enumerate() {
            for &v in c {
                map[v] = i;
            }
        }
        map
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Every vertex has even degree (a loop adds two).
    pub fn is_eulerian(&self) -> bool {
        (0..self.num_vertices).all(|v| self.degree(v) % 2 == 0)
    }

    /// Cut-edges in increasing order. Loops and edges with a parallel mate
    /// are never bridges.
    pub fn find_bridges(&self) -> Vec<usize> {
        let n = self.num_vertices;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut bridges = Vec::new();
        let mut timer = 0;
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            // (vertex, parent edge, next incidence index)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
                if *idx < self.incidence[v].len() {
                    let h = self.incidence[v][*idx];
                    *idx += 1;
                    if h.edge == pe || self.edges[h.edge].is_loop() {
                        continue;
                    }
                    let w = self.edges[h.edge].opposite(v);
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, h.edge, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(p, _, _)) = stack.last() {
                        low[p] = low[p].min(low[v]);
                        if low[v] > disc[p] {
                            bridges.push(pe);
                        }
                    }
                }
            }
        }
        bridges.sort_unstable();
        bridges
    }

    /// Subgraph on the given edge ids (vertex set unchanged). Returns the
    /// subgraph and, for each of its edges, the original edge id.
    pub fn edge_subgraph(&self, edges: &[usize]) -> (SignedGraph, Vec<usize>) {
        let kept: Vec<Edge> = edges.iter().map(|&e| self.edges[e]).collect();
        let g = SignedGraph::new(self.num_vertices, kept).expect("endpoints already valid");
        (g, edges.to_vec())
    }

    /// Subgraph induced by a vertex set. Returns the subgraph (vertices
    /// renumbered in the order given), the original vertex of every new
    /// vertex, and the original edge of every new edge.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (SignedGraph, Vec<usize>, Vec<usize>) {
        let mut index = vec![usize::MAX; self.num_vertices];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        let mut edge_map = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            let (a, b) = (index[e.ends[0]], index[e.ends[1]]);
            if a != usize::MAX && b != usize::MAX {
                edges.push(Edge { ends: [a, b], sign: e.sign });
                edge_map.push(id);
            }
        }
        let g = SignedGraph::new(vertices.len(), edges).expect("renumbered endpoints valid");
        (g, vertices.to_vec(), edge_map)
    }

    /// Shortest path (as edge ids, in order) from any vertex of `from` to any
    /// vertex of `to`, using only edges allowed by `allowed`. Ties broken by
    /// edge id. Returns the path and its two end vertices.
    pub(crate) fn shortest_path_between(
        &self,
        from: &[usize],
        to: &[usize],
        allowed: impl Fn(usize) -> bool,
    ) -> Option<(Vec<usize>, usize, usize)> {
        let n = self.num_vertices;
        let mut target = vec![false; n];
        for &v in to {
            target[v] = true;
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        let mut sources: Vec<usize> = from.to_vec();
        sources.sort_unstable();
        sources.dedup();
        for &s in &sources {
            if target[s] {
                return Some((Vec::new(), s, s));
            }
            seen[s] = true;
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            for h in &self.incidence[v] {
                if !allowed(h.edge) {
                    continue;
                }
                let w = self.edges[h.edge].opposite(v);
                if seen[w] {
                    continue;
                }
                seen[w] = true;
                parent[w] = Some((v, h.edge));
                if target[w] {
                    let mut path = Vec::new();
                    let mut cur = w;
                    while let Some((p, e)) = parent[cur] {
                        path.push(e);
                        cur = p;
                    }
                    path.reverse();
                    return Some((path, cur, w));
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// Canonical line-oriented serialization (1-based vertices).
    pub fn to_text(&self) -> String {
        let mut out = format!("p {} {}\n", self.num_vertices, self.edges.len());
        for e in &self.edges {
            let s = if e.sign.is_negative() { '-' } else { '+' };
            out.push_str(&format!("e {} {} {}\n", e.ends[0] + 1, e.ends[1] + 1, s));
        }
        out
    }

    /// Parses the graph file format:
    ///
    /// ```text
    /// # comment
    /// p <num_vertices> <num_edges>
    /// e <u> <v> <+|->
    /// ```
    ///
    /// Vertices are 1-based in the file. The `/` character is accepted as a
    /// line separator so that one-line instances can be written inline.
    pub fn parse(text: &str) -> Result<SignedGraph> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        let lines = text.split(['\n', '/']);
        for (idx, raw) in lines.enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let err = |message: String| Error::Parse { line: line_no, message };
            match tokens[0] {
                "p" => {
                    if header.is_some() {
                        return Err(err("duplicate header".into()));
                    }
                    if tokens.len() != 3 {
                        return Err(err("expected `p <num_vertices> <num_edges>`".into()));
                    }
                    let n = tokens[1]
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad vertex count `{}`", tokens[1])))?;
                    let m = tokens[2]
                        .parse::<usize>()
                        .map_err(|_| err(format!("bad edge count `{}`", tokens[2])))?;
                    header = Some((n, m));
                }
                "e" => {
                    let (n, _) = header.ok_or_else(|| err("edge before header".into()))?;
                    if tokens.len() != 4 {
                        return Err(err("expected `e <u> <v> <+|->`".into()));
                    }
                    let mut ends = [0usize; 2];
                    for (slot, tok) in ends.iter_mut().zip(&tokens[1..3]) {
                        let v = tok
                            .parse::<usize>()
                            .map_err(|_| err(format!("bad vertex `{tok}`")))?;
                        if v == 0 || v > n {
                            return Err(Error::UnknownVertex(v));
                        }
                        *slot = v - 1;
                    }
                    let sign = match tokens[3] {
                        "+" => Sign::Positive,
                        "-" => Sign::Negative,
                        other => return Err(err(format!("sign must be + or -, got `{other}`"))),
                    };
                    edges.push(Edge { ends, sign });
                }
                other => return Err(err(format!("unknown record `{other}`"))),
            }
        }
        let (n, m) = header.ok_or(Error::Parse { line: 0, message: "missing header".into() })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: 0,
                message: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        SignedGraph::new(n, edges)
    }
}

impl fmt::Display for SignedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
