//! Modulo-`k` to integer `k`-flow conversion for odd `k` on graphs without
//! long barbells, by switching and minusing.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{check_flow, FlowAssignment, FlowKind};
use crate::graph::{HalfEdge, SignedGraph};
use crate::limits::Limits;
use crate::orientation::Orientation;
use crate::structure::find_long_barbell_with;

/// A diwalk given by its start vertex and the half-edge it leaves through on
/// each step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ditrail {
    pub start: usize,
    pub departures: Vec<HalfEdge>,
}

impl Ditrail {
    pub fn empty(start: usize) -> Self {
        Ditrail { start, departures: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.departures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.departures.is_empty()
    }

    pub fn edges(&self) -> Vec<usize> {
        self.departures.iter().map(|h| h.edge).collect()
    }

    /// Vertices visited, starting with `start`.
    pub fn vertices(&self, g: &SignedGraph) -> Vec<usize> {
        let mut out = vec![self.start];
        for h in &self.departures {
            out.push(g.vertex_of(h.mate()));
        }
        out
    }

    pub fn end(&self, g: &SignedGraph) -> usize {
        self.departures.last().map_or(self.start, |h| g.vertex_of(h.mate()))
    }

    /// Checks the diwalk chaining rule under `o` and that no edge repeats.
    /// Returns the direction of the final arriving half-edge (`+1` for a
    /// negative ditrail, `-1` for a positive one), or `None` if the walk is
    /// not a ditrail. An empty walk counts as positive.
    pub fn polarity(&self, g: &SignedGraph, o: &Orientation) -> Option<i64> {
        let mut used = vec![false; g.num_edges()];
        let mut at = self.start;
        let mut arriving = -1i64;
        for h in &self.departures {
            if h.edge >= g.num_edges() || g.vertex_of(*h) != at || used[h.edge] {
                return None;
            }
            if o.dir(*h) != -arriving {
                return None;
            }
            used[h.edge] = true;
            arriving = o.dir(h.mate());
            at = g.vertex_of(h.mate());
        }
        Some(arriving)
    }

    pub fn is_dipath(&self, g: &SignedGraph) -> bool {
        let mut vs = self.vertices(g);
        let n = vs.len();
        vs.sort_unstable();
        vs.dedup();
        vs.len() == n
    }
}

/// A positive dipath (`tail`) from `tail_end` to `meet`, followed by a
/// closed negative ditrail (`head`) at `meet`. The two parts share no edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tadpole {
    pub tail: Ditrail,
    pub head: Ditrail,
    pub tail_end: usize,
    pub meet: usize,
}

impl Tadpole {
    pub fn verify(&self, g: &SignedGraph, o: &Orientation) -> bool {
        let tail_ok = self.tail.start == self.tail_end
            && self.tail.end(g) == self.meet
            && self.tail.is_dipath(g)
            && self.tail.polarity(g, o) == Some(-1);
        let head_ok = !self.head.is_empty()
            && self.head.start == self.meet
            && self.head.end(g) == self.meet
            && self.head.polarity(g, o) == Some(1);
        let tail_edges = self.tail.edges();
        tail_ok && head_ok && self.head.edges().iter().all(|e| !tail_edges.contains(e))
    }
}

/// Mutable configuration of the conversion: orientation, values in
/// `(0, k)` and the journals of applied operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionState {
    graph: SignedGraph,
    pub orientation: Orientation,
    pub values: Vec<i64>,
    pub k: i64,
    pub switch_log: Vec<usize>,
    pub minus_log: Vec<Vec<usize>>,
}

impl ConversionState {
    /// Lifts a modulo-`k` assignment to values in `(0, k)`. The orientation
    /// is kept; the signature is carried by the orientation from here on.
    pub fn new(g: &SignedGraph, fa: &FlowAssignment, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
        }
        if let Some(v) = check_flow(g, fa, &FlowKind::Modulo { k })? {
            return Err(Error::Precondition(format!("input is not a nowhere-zero Z_{k}-flow: {v}")));
        }
        let k = k as i64;
        let values = fa
            .values
            .iter()
            .map(|v| {
                v.to_integer()
                    .mod_floor(&BigInt::from(k))
                    .to_i64()
                    .expect("residue fits")
            })
            .collect();
        Ok(ConversionState {
            graph: g.clone(),
            orientation: fa.orientation.clone(),
            values,
            k,
            switch_log: Vec::new(),
            minus_log: Vec::new(),
        })
    }

    pub fn graph(&self) -> &SignedGraph {
        &self.graph
    }

    pub fn boundary(&self) -> Vec<i64> {
        let g = &self.graph;
        let mut b = vec![0i64; g.num_vertices()];
        for v in 0..g.num_vertices() {
            for h in g.half_edges_at(v) {
                b[v] += self.orientation.dir(*h) * self.values[h.edge];
            }
        }
        b
    }

    pub fn eta(&self) -> i64 {
        self.boundary().iter().map(|b| b.abs()).sum()
    }

    pub fn sources(&self) -> Vec<usize> {
        let b = self.boundary();
        (0..b.len()).filter(|&v| b[v] > 0).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        let b = self.boundary();
        (0..b.len()).filter(|&v| b[v] < 0).collect()
    }

    /// Reverses every half-edge at `v`.
    pub fn switch(&mut self, v: usize) {
        self.orientation.switch_vertex(&self.graph, v);
        self.switch_log.push(v);
    }

    /// Reverses both half-edges of every listed edge and replaces its value
    /// `f` by `k - f`.
    pub fn minus(&mut self, edges: &[usize]) {
        for &e in edges {
            self.orientation.reverse_edge(e);
            self.values[e] = self.k - self.values[e];
        }
        self.minus_log.push(edges.to_vec());
    }

    fn is_positive(&self, e: usize) -> bool {
        !self.orientation.sign(e).is_negative()
    }

    /// A negative ditrail from `x` to `y`, by exhaustive search.
    pub fn find_negative_ditrail(&self, x: usize, y: usize, limits: &Limits) -> Result<Option<Ditrail>> {
        self.negative_ditrail_to(x, &|v| v == y, limits)
    }

    /// A negative ditrail from `x` to any vertex accepted by `target`
    /// (possibly `x` itself), preferring the first found in half-edge order.
    fn negative_ditrail_to(
        &self,
        x: usize,
        target: &dyn Fn(usize) -> bool,
        limits: &Limits,
    ) -> Result<Option<Ditrail>> {
        let mut search = TrailSearch {
            g: &self.graph,
            o: &self.orientation,
            used: vec![false; self.graph.num_edges()],
            on_path: vec![false; self.graph.num_vertices()],
            trail: Vec::new(),
            states: 0,
            cap: limits.ditrail_states,
        };
        let found = search.trail_dfs(x, -1, &mut |v, arriving| arriving == 1 && target(v))?;
        Ok(found.then(|| Ditrail { start: x, departures: search.trail }))
    }

    /// For every vertex, whether a positive and whether a negative dipath
    /// from `x` reaches it.
    fn dipath_reach(&self, x: usize, limits: &Limits) -> Result<(Vec<bool>, Vec<bool>)> {
        let n = self.graph.num_vertices();
        let mut pos = vec![false; n];
        let mut neg = vec![false; n];
        pos[x] = true;
        let mut search = TrailSearch {
            g: &self.graph,
            o: &self.orientation,
            used: vec![false; self.graph.num_edges()],
            on_path: vec![false; n],
            trail: Vec::new(),
            states: 0,
            cap: limits.ditrail_states,
        };
        search.on_path[x] = true;
        search.path_dfs(x, -1, &mut |v, arriving| {
            if arriving < 0 {
                pos[v] = true;
            } else {
                neg[v] = true;
            }
            false
        })?;
        Ok((pos, neg))
    }

    /// A positive dipath from `x` to `y`.
    fn positive_dipath(&self, x: usize, y: usize, limits: &Limits) -> Result<Option<Ditrail>> {
        if x == y {
            return Ok(Some(Ditrail::empty(x)));
        }
        let mut search = TrailSearch {
            g: &self.graph,
            o: &self.orientation,
            used: vec![false; self.graph.num_edges()],
            on_path: vec![false; self.graph.num_vertices()],
            trail: Vec::new(),
            states: 0,
            cap: limits.ditrail_states,
        };
        search.on_path[x] = true;
        let found = search.path_dfs(x, -1, &mut |v, arriving| v == y && arriving < 0)?;
        Ok(found.then(|| Ditrail { start: x, departures: search.trail }))
    }

    /// A tadpole with tail end `x`: an all-positive dipath to a sink edge,
    /// closed back by a positive dipath to the far end of that edge and
    /// spliced at the last edge the two dipaths share. `None` when no sink
    /// edge is reachable along positive edges, or when the far end of the
    /// sink edge is not reached by a positive dipath.
    pub fn find_tadpole(&self, x: usize, limits: &Limits) -> Result<Option<Tadpole>> {
        let g = &self.graph;
        let o = &self.orientation;
        // breadth-first search along positive edges in their direction
        let n = g.num_vertices();
        let mut parent: Vec<Option<HalfEdge>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[x] = true;
        let mut queue = std::collections::VecDeque::from([x]);
        let mut sink = None;
        'bfs: while let Some(v) = queue.pop_front() {
            for h in g.half_edges_at(v) {
                if !self.is_positive(h.edge) {
                    let [a, b] = o.dirs(h.edge);
                    if a > 0 && b > 0 {
                        sink = Some((v, *h));
                        break 'bfs;
                    }
                }
            }
            for h in g.half_edges_at(v) {
                if self.is_positive(h.edge) && !g.edge(h.edge).is_loop() && o.dir(*h) > 0 {
                    let w = g.vertex_of(h.mate());
                    if !seen[w] {
                        seen[w] = true;
                        parent[w] = Some(*h);
                        queue.push_back(w);
                    }
                }
            }
        }
        let Some((u1, sink_half)) = sink else { return Ok(None) };
        let mut first = Vec::new();
        let mut cur = u1;
        while let Some(h) = parent[cur] {
            first.push(h);
            cur = g.vertex_of(h);
        }
        first.reverse();
        let u2 = g.vertex_of(sink_half.mate());
        let Some(second) = self.positive_dipath(x, u2, limits)? else { return Ok(None) };

        let first_edges: Vec<usize> = first.iter().map(|h| h.edge).collect();
        let s = second.departures.iter().rposition(|h| first_edges.contains(&h.edge));
        let (meet, split) = match s {
            None => (x, 0),
            Some(i) => {
                let e = second.departures[i].edge;
                let j = first_edges.iter().position(|&f| f == e).expect("shared edge");
                (g.vertex_of(second.departures[i].mate()), j + 1)
            }
        };
        let tail = Ditrail { start: x, departures: first[..split].to_vec() };
        let mut head = first[split..].to_vec();
        head.push(sink_half);
        let rest_start = s.map_or(0, |i| i + 1);
        for h in second.departures[rest_start..].iter().rev() {
            head.push(h.mate());
        }
        let tadpole = Tadpole { tail, head: Ditrail { start: meet, departures: head }, tail_end: x, meet };
        if !tadpole.verify(g, o) {
            return Err(Error::InvariantViolation(format!("malformed tadpole at vertex {x}")));
        }
        Ok(Some(tadpole))
    }
}

struct TrailSearch<'a> {
    g: &'a SignedGraph,
    o: &'a Orientation,
    used: Vec<bool>,
    on_path: Vec<bool>,
    trail: Vec<HalfEdge>,
    states: u64,
    cap: u64,
}

impl TrailSearch<'_> {
    fn tick(&mut self) -> Result<()> {
        self.states += 1;
        if self.states > self.cap {
            return Err(Error::ResourceCap { what: "ditrail search states", limit: self.cap });
        }
        Ok(())
    }

    /// Ditrails (no repeated edge) leaving `v`, which was entered through a
    /// half-edge of direction `arriving`. Stops when `accept` holds at a
    /// newly reached vertex; the trail is then left in `self.trail`.
    fn trail_dfs(&mut self, v: usize, arriving: i64, accept: &mut dyn FnMut(usize, i64) -> bool) -> Result<bool> {
        for &h in self.g.half_edges_at(v) {
            if self.used[h.edge] || self.o.dir(h) != -arriving {
                continue;
            }
            self.tick()?;
            let w = self.g.vertex_of(h.mate());
            let arr = self.o.dir(h.mate());
            self.used[h.edge] = true;
            self.trail.push(h);
            if accept(w, arr) || self.trail_dfs(w, arr, accept)? {
                return Ok(true);
            }
            self.trail.pop();
            self.used[h.edge] = false;
        }
        Ok(false)
    }

    /// Dipaths (no repeated vertex) leaving `v`; `v` must already be marked.
    fn path_dfs(&mut self, v: usize, arriving: i64, accept: &mut dyn FnMut(usize, i64) -> bool) -> Result<bool> {
        for &h in self.g.half_edges_at(v) {
            if self.o.dir(h) != -arriving {
                continue;
            }
            let w = self.g.vertex_of(h.mate());
            if self.on_path[w] {
                continue;
            }
            self.tick()?;
            let arr = self.o.dir(h.mate());
            self.on_path[w] = true;
            self.trail.push(h);
            if accept(w, arr) || self.path_dfs(w, arr, accept)? {
                return Ok(true);
            }
            self.trail.pop();
            self.on_path[w] = false;
        }
        Ok(false)
    }
}

/// Options for [`modflow_to_intflow_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConversionOptions {
    /// Skip the long-barbell precondition.
    pub allow_long_barbell: bool,
    /// Accept even `k`; the scheduler then reports failure instead of
    /// raising an invariant violation when it gets stuck.
    pub experimental_even_k: bool,
}

/// Step counters of a conversion run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConversionStats {
    pub sink_switches: usize,
    pub reach_switches: usize,
    pub pair_minusings: usize,
    pub closed_minusings: usize,
    pub splits: usize,
    pub relocations: usize,
    pub initial_eta: i64,
}

/// Result of a conversion run. `flow` is `None` only for a stuck run in
/// experimental even-`k` mode, with the reason in `stuck`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConversionReport {
    pub flow: Option<FlowAssignment>,
    pub stuck: Option<String>,
    pub stats: ConversionStats,
    pub switch_log: Vec<usize>,
    pub minus_log: Vec<Vec<usize>>,
}

/// Converts a nowhere-zero `Z_k`-flow (odd `k ≥ 3`) of a graph without long
/// barbells into a nowhere-zero integer `k`-flow under the same orientation
/// with congruent values.
pub fn modflow_to_intflow(g: &SignedGraph, fa: &FlowAssignment, k: u32) -> Result<FlowAssignment> {
    let report = modflow_to_intflow_with(g, fa, k, ConversionOptions::default(), Limits::global())?;
    Ok(report.flow.expect("non-experimental runs either succeed or fail"))
}

pub fn modflow_to_intflow_with(
    g: &SignedGraph,
    fa: &FlowAssignment,
    k: u32,
    options: ConversionOptions,
    limits: &Limits,
) -> Result<ConversionReport> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("k must be at least 3, got {k}")));
    }
    if k % 2 == 0 && !options.experimental_even_k {
        return Err(Error::InvalidParameter(format!(
            "k = {k} is even; the conversion is only guaranteed for odd k"
        )));
    }
    if !options.allow_long_barbell && find_long_barbell_with(g, limits)?.is_some() {
        return Err(Error::LongBarbell);
    }
    let mut state = ConversionState::new(g, fa, k)?;
    let mut stats = ConversionStats { initial_eta: state.eta(), ..Default::default() };
    let k = state.k;
    let n = g.num_vertices();
    let bound = (stats.initial_eta / (2 * k) + 1) as usize * (2 * n + 4);

    let stuck = |state: ConversionState, stats: ConversionStats, reason: String| -> Result<ConversionReport> {
        if options.experimental_even_k && k % 2 == 0 {
            Ok(ConversionReport {
                flow: None,
                stuck: Some(reason),
                stats,
                switch_log: state.switch_log,
                minus_log: state.minus_log,
            })
        } else {
            Err(Error::InvariantViolation(reason))
        }
    };

    for _ in 0..bound {
        // sinks become sources
        for v in state.sinks() {
            state.switch(v);
            stats.sink_switches += 1;
        }
        let sources = state.sources();
        if sources.is_empty() {
            let flow = unwind(g, fa, &state)?;
            return Ok(ConversionReport {
                flow: Some(flow),
                stuck: None,
                stats,
                switch_log: state.switch_log,
                minus_log: state.minus_log,
            });
        }

        // a negative ditrail between two distinct sources
        let mut is_source = vec![false; n];
        for &x in &sources {
            is_source[x] = true;
        }
        let mut pair = None;
        for &x in &sources {
            if let Some(t) = state.negative_ditrail_to(x, &|v| v != x && is_source[v], limits)? {
                pair = Some(t);
                break;
            }
        }
        if let Some(t) = pair {
            let before = state.eta();
            state.minus(&t.edges());
            expect_eta(&state, before - 2 * k)?;
            stats.pair_minusings += 1;
            continue;
        }

        let x = sources[0];
        let (pos, neg) = state.dipath_reach(x, limits)?;
        let b = state.boundary();
        for y in 0..n {
            if neg[y] && !pos[y] {
                if b[y] != 0 {
                    return Err(Error::InvariantViolation(format!(
                        "vertex {y} reached by a negative dipath carries boundary {}",
                        b[y]
                    )));
                }
                state.switch(y);
                stats.reach_switches += 1;
            }
        }
        let Some(tp) = state.find_tadpole(x, limits)? else {
            return stuck(state, stats, format!("no tadpole with tail end {x}"));
        };
        let bx = state.boundary()[x];
        if bx >= 2 * k {
            let before = state.eta();
            if tp.meet == x {
                state.minus(&tp.head.edges());
                expect_eta(&state, before - 2 * k)?;
                stats.closed_minusings += 1;
            } else {
                // the far end carries zero boundary and becomes a new source
                state.minus(&tp.tail.edges());
                expect_eta(&state, before)?;
                stats.splits += 1;
            }
            continue;
        }
        let component = g.component_map();
        let others = sources.iter().any(|&s| s != x && component[s] == component[x]);
        if !others {
            return stuck(
                state,
                stats,
                format!("vertex {x} is the only source of its component and has boundary {bx}"),
            );
        }
        if tp.tail.is_empty() {
            return stuck(state, stats, format!("no productive move from source {x} with a tailless tadpole"));
        }
        let before = state.eta();
        state.minus(&tp.tail.edges());
        expect_eta(&state, before)?;
        stats.relocations += 1;
    }
    stuck(state, stats, format!("iteration bound {bound} exceeded"))
}

fn expect_eta(state: &ConversionState, expected: i64) -> Result<()> {
    let eta = state.eta();
    if eta != expected {
        return Err(Error::InvariantViolation(format!("eta is {eta}, expected {expected}")));
    }
    Ok(())
}

/// Undoes the switchings on a zero-boundary state and expresses the result
/// under the input orientation.
fn unwind(g: &SignedGraph, fa: &FlowAssignment, state: &ConversionState) -> Result<FlowAssignment> {
    let mut parity = vec![false; g.num_vertices()];
    for &v in &state.switch_log {
        parity[v] ^= true;
    }
    let mut o = state.orientation.clone();
    o.switch_in_place(g, &parity);
    if !o.is_consistent_with(g) {
        return Err(Error::InvariantViolation("unwound orientation does not match the signature".into()));
    }
    let out = FlowAssignment::from_integers(o, &state.values).reoriented(&fa.orientation);
    let k = state.k;
    if let Some(v) = check_flow(g, &out, &FlowKind::Integer { k: k as u32 })? {
        return Err(Error::InvariantViolation(format!("converted assignment is not a {k}-flow: {v}")));
    }
    for e in 0..g.num_edges() {
        if !((&out.values[e] - &fa.values[e]).to_integer() % k).to_i64().is_some_and(|r| r == 0) {
            return Err(Error::InvariantViolation(format!("edge {e} lost its residue")));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::rat;
    use crate::solve::{find_nz_k_flow, find_nz_zk_flow};

    const K4: &str = "p 4 6 / e 1 2 + / e 1 3 + / e 1 4 + / e 2 3 + / e 2 4 + / e 3 4 +";

    fn congruent(a: &FlowAssignment, b: &FlowAssignment, k: i64) -> bool {
        a.values.iter().zip(&b.values).all(|(x, y)| ((x - y).to_integer() % k).to_i64() == Some(0))
    }

    #[test]
    fn minus_empty_and_single() {
        let g = SignedGraph::parse("p 2 1 / e 1 2 +").unwrap();
        let fa = FlowAssignment::from_integers(Orientation::canonical(&g), &[1]);
        let mut s = ConversionState {
            graph: g.clone(),
            orientation: fa.orientation.clone(),
            values: vec![1],
            k: 5,
            switch_log: vec![],
            minus_log: vec![],
        };
        let before = s.clone();
        s.minus(&[]);
        assert_eq!(s.values, before.values);
        assert_eq!(s.orientation, before.orientation);
        s.minus(&[0]);
        assert_eq!(s.values, vec![4]);
        assert_eq!(s.orientation.dirs(0), [-1, 1]);
        s.minus(&[0]);
        assert_eq!(s.values, before.values);
        assert_eq!(s.orientation, before.orientation);
    }

    #[test]
    fn ditrail_between_sources_on_negative_edge() {
        let g = SignedGraph::parse("p 2 1 / e 1 2 -").unwrap();
        let s = ConversionState {
            graph: g.clone(),
            orientation: Orientation::canonical(&g),
            values: vec![1],
            k: 3,
            switch_log: vec![],
            minus_log: vec![],
        };
        assert_eq!(s.sources(), vec![0, 1]);
        let t = s.find_negative_ditrail(0, 1, &Limits::default()).unwrap().unwrap();
        assert_eq!(t.edges(), vec![0]);
        assert_eq!(t.polarity(&g, &s.orientation), Some(1));
    }

    #[test]
    fn tadpole_with_tail() {
        // source 1 on a positive path into a negative loop at 3
        let g = SignedGraph::parse("p 3 3 / e 1 2 + / e 2 3 + / e 3 3 -").unwrap();
        let s = ConversionState {
            graph: g.clone(),
            orientation: Orientation::canonical(&g),
            values: vec![1, 1, 1],
            k: 3,
            switch_log: vec![],
            minus_log: vec![],
        };
        let tp = s.find_tadpole(0, &Limits::default()).unwrap().unwrap();
        assert_eq!(tp.tail.edges(), vec![0, 1]);
        assert_eq!(tp.head.edges(), vec![2]);
        assert_eq!(tp.meet, 2);
        assert!(tp.verify(&g, &s.orientation));
    }

    #[test]
    fn balanced_graph_has_no_tadpole() {
        let g = SignedGraph::parse(K4).unwrap();
        let s = ConversionState {
            graph: g.clone(),
            orientation: Orientation::canonical(&g),
            values: vec![1; 6],
            k: 3,
            switch_log: vec![],
            minus_log: vec![],
        };
        for x in 0..4 {
            assert_eq!(s.find_tadpole(x, &Limits::default()).unwrap(), None);
        }
    }

    #[test]
    fn unsigned_k4_mod3_has_no_3_flow_input() {
        let g = SignedGraph::parse(K4).unwrap();
        assert!(find_nz_zk_flow(&g, 3).unwrap().is_none());
    }

    #[test]
    fn converts_z5_flow_on_k4() {
        let g = SignedGraph::parse(K4).unwrap();
        let z = find_nz_zk_flow(&g, 5).unwrap().unwrap();
        let f = modflow_to_intflow(&g, &z, 5).unwrap();
        assert_eq!(check_flow(&g, &f, &FlowKind::Integer { k: 5 }).unwrap(), None);
        assert!(congruent(&f, &z, 5));
    }

    #[test]
    fn integer_flow_input_is_kept_congruent() {
        let g = SignedGraph::parse(K4).unwrap();
        let f0 = find_nz_k_flow(&g, 4).unwrap().unwrap();
        let f = modflow_to_intflow(&g, &f0, 5).unwrap();
        assert_eq!(check_flow(&g, &f, &FlowKind::Integer { k: 5 }).unwrap(), None);
        assert!(congruent(&f, &f0, 5));
    }

    // K_4 with a negative perfect matching: every unbalanced circuit is a triangle
    const SIGNED_K4: &str = "p 4 6 / e 1 2 - / e 1 3 + / e 1 4 + / e 2 3 + / e 2 4 + / e 3 4 -";

    #[test]
    fn signed_k4_conversion() {
        let g = SignedGraph::parse(SIGNED_K4).unwrap();
        for k in [3u32, 5, 7] {
            let Some(z) = find_nz_zk_flow(&g, k).unwrap() else { continue };
            let f = modflow_to_intflow(&g, &z, k).unwrap();
            assert_eq!(check_flow(&g, &f, &FlowKind::Integer { k }).unwrap(), None);
            assert!(congruent(&f, &z, k as i64));
        }
    }

    #[test]
    fn residue_lift_with_far_values() {
        let g = SignedGraph::parse(SIGNED_K4).unwrap();
        let z = find_nz_zk_flow(&g, 5).unwrap().unwrap();
        let shifted: Vec<_> = z.values.iter().enumerate().map(|(e, v)| v + rat(if e % 2 == 0 { -10 } else { 15 })).collect();
        let fa = FlowAssignment::new(z.orientation.clone(), shifted);
        assert_eq!(check_flow(&g, &fa, &FlowKind::Modulo { k: 5 }).unwrap(), None);
        let f = modflow_to_intflow(&g, &fa, 5).unwrap();
        assert_eq!(check_flow(&g, &f, &FlowKind::Integer { k: 5 }).unwrap(), None);
        assert!(congruent(&f, &fa, 5));
    }

    #[test]
    fn rejects_even_k_and_long_barbells() {
        let g = SignedGraph::parse(K4).unwrap();
        let z = find_nz_zk_flow(&g, 4).unwrap().unwrap();
        assert!(matches!(modflow_to_intflow(&g, &z, 4), Err(Error::InvalidParameter(_))));
        let g = SignedGraph::parse("p 2 3 / e 1 1 - / e 1 2 + / e 2 2 -").unwrap();
        let z = FlowAssignment::from_integers(Orientation::canonical(&g), &[1, 1, 2]);
        let r = modflow_to_intflow(&g, &z, 3);
        assert_eq!(r, Err(Error::LongBarbell));
    }
}
