//! Exhaustive backtracking over integer edge values.

use crate::error::{Error, Result};
use crate::flow::FlowAssignment;
use crate::graph::{End, HalfEdge, SignedGraph};
use crate::limits::Limits;
use crate::orientation::Orientation;

/// Edges in depth-first discovery order: visiting a vertex appends its
/// not-yet-listed edges in id order.
pub(crate) fn dfs_edge_order(g: &SignedGraph) -> Vec<usize> {
    let mut seen_v = vec![false; g.num_vertices()];
    let mut listed = vec![false; g.num_edges()];
    let mut order = Vec::with_capacity(g.num_edges());
    for r in 0..g.num_vertices() {
        if seen_v[r] {
            continue;
        }
        seen_v[r] = true;
        let mut stack = vec![(r, 0usize)];
        for h in g.half_edges_at(r) {
            if !listed[h.edge] {
                listed[h.edge] = true;
                order.push(h.edge);
            }
        }
        while let Some((v, i)) = stack.last_mut() {
            let inc = g.half_edges_at(*v);
            if *i >= inc.len() {
                stack.pop();
                continue;
            }
            let w = g.edge(inc[*i].edge).opposite(*v);
            *i += 1;
            if seen_v[w] {
                continue;
            }
            seen_v[w] = true;
            for h in g.half_edges_at(w) {
                if !listed[h.edge] {
                    listed[h.edge] = true;
                    order.push(h.edge);
                }
            }
            stack.push((w, 0));
        }
    }
    order
}

/// Values tried in order 1, -1, 2, -2, ... up to `max`.
pub(crate) fn symmetric_domain(max: i64) -> Vec<i64> {
    (1..=max).flat_map(|a| [a, -a]).collect()
}

/// Search for integer edge values, one from each edge's domain, with zero
/// boundary under `orientation` (or boundary divisible by `modulus`).
pub(crate) struct Search<'a> {
    domains: &'a [Vec<i64>],
    modulus: Option<i64>,
    order: Vec<usize>,
    /// Per edge: (vertex, coefficient) contributions; a loop contributes once
    /// with its summed coefficient.
    coeffs: Vec<Vec<(usize, i64)>>,
    boundary: Vec<i64>,
    remaining: Vec<usize>,
    slack: Vec<i64>,
    values: Vec<i64>,
    nodes: u64,
    cap: u64,
}

impl<'a> Search<'a> {
    pub fn new(
        g: &'a SignedGraph,
        orientation: &Orientation,
        domains: &'a [Vec<i64>],
        modulus: Option<i64>,
        cap: u64,
    ) -> Self {
        let n = g.num_vertices();
        let mut coeffs = vec![Vec::new(); g.num_edges()];
        let mut remaining = vec![0usize; n];
        let mut slack = vec![0i64; n];
        for (e, edge) in g.edges().iter().enumerate() {
            let mut cs: Vec<(usize, i64)> = Vec::new();
            for end in End::BOTH {
                let v = edge.end(end);
                let d = orientation.dir(HalfEdge::new(e, end));
                match cs.iter_mut().find(|(w, _)| *w == v) {
                    Some(slot) => slot.1 += d,
                    None => cs.push((v, d)),
                }
            }
            let max_abs = domains[e].iter().map(|x| x.abs()).max().unwrap_or(0);
            for &(v, c) in &cs {
                remaining[v] += 1;
                slack[v] += c.abs() * max_abs;
            }
            coeffs[e] = cs;
        }
        Search {
            domains,
            modulus,
            order: dfs_edge_order(g),
            coeffs,
            boundary: vec![0; n],
            remaining,
            slack,
            values: vec![0; g.num_edges()],
            nodes: 0,
            cap,
        }
    }

    pub fn run(mut self) -> Result<Option<Vec<i64>>> {
        if self.domains.iter().any(|d| d.is_empty()) {
            return Ok(None);
        }
        // vertices without edges, or whose edges all have zero coefficient
        if self.remaining.iter().zip(&self.boundary).any(|(&r, &b)| r == 0 && !self.closed_ok(b)) {
            return Ok(None);
        }
        if self.descend(0)? {
            Ok(Some(self.values))
        } else {
            Ok(None)
        }
    }

    fn closed_ok(&self, b: i64) -> bool {
        match self.modulus {
            Some(k) => b.rem_euclid(k) == 0,
            None => b == 0,
        }
    }

    fn descend(&mut self, depth: usize) -> Result<bool> {
        if depth == self.order.len() {
            return Ok(true);
        }
        let e = self.order[depth];
        let max_abs = self.domains[e].iter().map(|x| x.abs()).max().unwrap_or(0);
        for &(v, c) in &self.coeffs[e] {
            self.remaining[v] -= 1;
            self.slack[v] -= c.abs() * max_abs;
        }
        let mut found = false;
        for i in 0..self.domains[e].len() {
            let x = self.domains[e][i];
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::ResourceCap { what: "flow search", limit: self.cap });
            }
            let mut ok = true;
            for &(v, c) in &self.coeffs[e] {
                let b = self.boundary[v] + c * x;
                ok &= if self.remaining[v] == 0 {
                    self.closed_ok(b)
                } else {
                    self.modulus.is_some() || b.abs() <= self.slack[v]
                };
            }
            if !ok {
                continue;
            }
            for &(v, c) in &self.coeffs[e] {
                self.boundary[v] += c * x;
            }
            self.values[e] = x;
            let res = self.descend(depth + 1);
            for &(v, c) in &self.coeffs[e] {
                self.boundary[v] -= c * x;
            }
            if res? {
                found = true;
                break;
            }
        }
        if !found {
            for &(v, c) in &self.coeffs[e] {
                self.remaining[v] += 1;
                self.slack[v] += c.abs() * max_abs;
            }
            self.values[e] = 0;
        }
        Ok(found)
    }
}

/// A nowhere-zero integer `k`-flow under the canonical orientation, or a
/// proof by exhaustion that none exists.
pub fn find_nz_k_flow(g: &SignedGraph, k: u32) -> Result<Option<FlowAssignment>> {
    find_nz_k_flow_with(g, k, Limits::global())
}

pub fn find_nz_k_flow_with(g: &SignedGraph, k: u32, limits: &Limits) -> Result<Option<FlowAssignment>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    let domains = vec![symmetric_domain(k as i64 - 1); g.num_edges()];
    find_flow_with_domains(g, &domains, limits)
}

/// A nowhere-zero `Z_k`-flow (values `1..k-1`) under the canonical orientation.
pub fn find_nz_zk_flow(g: &SignedGraph, k: u32) -> Result<Option<FlowAssignment>> {
    find_nz_zk_flow_with(g, k, Limits::global())
}

pub fn find_nz_zk_flow_with(g: &SignedGraph, k: u32, limits: &Limits) -> Result<Option<FlowAssignment>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    let domains = vec![(1..k as i64).collect::<Vec<_>>(); g.num_edges()];
    let o = Orientation::canonical(g);
    let res = Search::new(g, &o, &domains, Some(k as i64), limits.search_nodes).run()?;
    Ok(res.map(|v| FlowAssignment::from_integers(o, &v)))
}

/// An integer flow (exact zero boundary) under the canonical orientation
/// with every edge value drawn from its own domain.
pub fn find_flow_with_domains(
    g: &SignedGraph,
    domains: &[Vec<i64>],
    limits: &Limits,
) -> Result<Option<FlowAssignment>> {
    if domains.len() != g.num_edges() {
        return Err(Error::InvalidParameter("one domain per edge required".into()));
    }
    let o = Orientation::canonical(g);
    let res = Search::new(g, &o, domains, None, limits.search_nodes).run()?;
    Ok(res.map(|v| FlowAssignment::from_integers(o, &v)))
}
