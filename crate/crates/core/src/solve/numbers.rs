//! Integer and circular flow numbers.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{rat, FlowAssignment, Rational};
use crate::graph::{End, HalfEdge, SignedGraph};
use crate::limits::Limits;
use crate::orientation::Orientation;
use crate::solve::lp::{minimize, LpOutcome};
use crate::solve::search::{dfs_edge_order, find_nz_k_flow_with};
use crate::structure::is_flow_admissible;

/// Flow numbers with their witnesses; `None` where not computed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FlowNumbers {
    pub phi_i: Option<u32>,
    pub phi_i_witness: Option<FlowAssignment>,
    pub phi_c: Option<Rational>,
    pub phi_c_witness: Option<FlowAssignment>,
}

/// Serializable summary of [`FlowNumbers`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowNumbersSummary {
    pub phi_i: Option<u32>,
    pub phi_c: Option<String>,
}

impl FlowNumbers {
    pub fn summary(&self) -> FlowNumbersSummary {
        FlowNumbersSummary {
            phi_i: self.phi_i,
            phi_c: self.phi_c.as_ref().map(crate::flow::format_rational),
        }
    }
}

/// Smallest `k ≤ k_max` admitting a nowhere-zero `k`-flow, with a witness.
/// `None` for graphs that are not flow-admissible or need more than `k_max`.
pub fn integer_flow_number(g: &SignedGraph, k_max: u32) -> Result<Option<(u32, FlowAssignment)>> {
    integer_flow_number_with(g, k_max, Limits::global())
}

pub fn integer_flow_number_with(
    g: &SignedGraph,
    k_max: u32,
    limits: &Limits,
) -> Result<Option<(u32, FlowAssignment)>> {
    if k_max < 2 {
        return Err(Error::InvalidParameter(format!("k_max must be at least 2, got {k_max}")));
    }
    if !is_flow_admissible(g).admissible {
        return Ok(None);
    }
    for k in 2..=k_max {
        if let Some(f) = find_nz_k_flow_with(g, k, limits)? {
            return Ok(Some((k, f)));
        }
    }
    Ok(None)
}

/// The circular flow number and a circular flow attaining it.
///
/// Every edge sign pattern `s` (first edge of each component fixed, since
/// negating a flow keeps it valid) gives a linear program: minimize `t` with
/// `Σ c_e(v) s_e x_e = 0` at every vertex and `1 ≤ x_e ≤ t`. The flow number is
/// `1 + min t`. Patterns forcing a vertex to have all incident terms of one
/// sign are pruned.
pub fn circular_flow_number(g: &SignedGraph) -> Result<(Rational, FlowAssignment)> {
    circular_flow_number_with(g, Limits::global())
}

pub fn circular_flow_number_with(g: &SignedGraph, limits: &Limits) -> Result<(Rational, FlowAssignment)> {
    if !is_flow_admissible(g).admissible {
        return Err(Error::NotFlowAdmissible);
    }
    if g.num_edges() > limits.circular_max_edges {
        return Err(Error::ResourceCap {
            what: "circular flow number edge count",
            limit: limits.circular_max_edges as u64,
        });
    }
    let canon = Orientation::canonical(g);
    let mut values = vec![Rational::zero(); g.num_edges()];
    let mut best = rat(2);
    let comp = g.component_map();
    let order = dfs_edge_order(g);
    for vertices in g.connected_components() {
        let cid = comp[vertices[0]];
        let edges: Vec<usize> = order.iter().copied().filter(|&e| comp[g.edge(e).ends[0]] == cid).collect();
        if edges.is_empty() {
            continue;
        }
        let (t, x) = component_optimum(g, &canon, &vertices, &edges)
            .ok_or_else(|| Error::InvariantViolation("admissible component without a circular flow".into()))?;
        let r = t + Rational::one();
        if r > best {
            best = r;
        }
        for (e, v) in x {
            values[e] = v;
        }
    }
    Ok((best, FlowAssignment::new(canon, values)))
}

/// Coefficient of edge `e` in the boundary at `v` under `o`.
fn coefficient(g: &SignedGraph, o: &Orientation, e: usize, v: usize) -> i64 {
    End::BOTH
        .iter()
        .filter(|&&end| g.edge(e).end(end) == v)
        .map(|&end| o.dir(HalfEdge::new(e, end)))
        .sum()
}

/// Minimum `t` over sign patterns for one component, with the signed
/// values of the optimal flow.
fn component_optimum(
    g: &SignedGraph,
    o: &Orientation,
    vertices: &[usize],
    edges: &[usize],
) -> Option<(Rational, Vec<(usize, Rational)>)> {
    let m = edges.len();
    let local = |v: usize| vertices.binary_search(&v).expect("vertex in component");
    // coefficient matrix: rows = vertices, columns = local edge index
    let mut coeff = vec![vec![0i64; m]; vertices.len()];
    // last local edge index touching each vertex with a non-zero coefficient
    let mut closes_at = vec![None; vertices.len()];
    for (j, &e) in edges.iter().enumerate() {
        for v in g.edge(e).ends {
            let c = coefficient(g, o, e, v);
            coeff[local(v)][j] = c;
            if c != 0 {
                closes_at[local(v)] = Some(j);
            }
        }
    }
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (i, c) in closes_at.iter().enumerate() {
        if let Some(j) = c {
            closing[*j].push(i);
        }
    }
    let mut signs = vec![1i64; m];
    let mut best: Option<(Rational, Vec<Rational>)> = None;
    sweep(0, &mut signs, &coeff, &closing, &mut best);
    best.map(|(t, x)| (t, edges.iter().copied().zip(x).collect()))
}

fn sweep(
    j: usize,
    signs: &mut Vec<i64>,
    coeff: &[Vec<i64>],
    closing: &[Vec<usize>],
    best: &mut Option<(Rational, Vec<Rational>)>,
) {
    let m = signs.len();
    if j == m {
        if let Some((t, x)) = solve_pattern(signs, coeff) {
            let better = match best {
                None => true,
                Some((bt, bx)) => t < *bt || (t == *bt && x < *bx),
            };
            if better {
                *best = Some((t, x));
            }
        }
        return;
    }
    let choices: &[i64] = if j == 0 { &[1] } else { &[1, -1] };
    for &s in choices {
        signs[j] = s;
        let ok = closing[j].iter().all(|&v| {
            let row = &coeff[v];
            let pos = (0..=j).any(|i| row[i] * signs[i] > 0);
            let neg = (0..=j).any(|i| row[i] * signs[i] < 0);
            pos && neg
        });
        if ok {
            sweep(j + 1, signs, coeff, closing, best);
        }
    }
    signs[j] = 1;
}

/// LP for one sign pattern. Variables: `y_e = x_e - 1`, slacks `w_e`, and
/// `u = t - 1`. Returns `t` and the signed flow values.
fn solve_pattern(signs: &[i64], coeff: &[Vec<i64>]) -> Option<(Rational, Vec<Rational>)> {
    let m = signs.len();
    let width = 2 * m + 1;
    let mut a = Vec::new();
    let mut b = Vec::new();
    for row in coeff {
        if row.iter().all(|&c| c == 0) {
            continue;
        }
        let mut r = vec![0i64; width];
        let mut rhs = 0i64;
        for j in 0..m {
            r[j] = row[j] * signs[j];
            rhs -= row[j] * signs[j];
        }
        a.push(r);
        b.push(rhs);
    }
    for j in 0..m {
        let mut r = vec![0i64; width];
        r[j] = 1;
        r[m + j] = 1;
        r[2 * m] = -1;
        a.push(r);
        b.push(0);
    }
    let mut c = vec![0i64; width];
    c[2 * m] = 1;
    match minimize(&a, &b, &c) {
        LpOutcome::Optimal { value, solution } => {
            let t = value + Rational::one();
            let x = (0..m).map(|j| (&solution[j] + Rational::one()) * rat(signs[j])).collect();
            Some((t, x))
        }
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("objective bounded below by zero"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{check_flow, ratio, FlowKind};

    #[test]
    fn even_circuit_has_circular_number_two() {
        let g = SignedGraph::parse("p 4 4 / e 1 2 + / e 2 3 + / e 3 4 + / e 4 1 +").unwrap();
        let (r, f) = circular_flow_number(&g).unwrap();
        assert_eq!(r, rat(2));
        assert_eq!(check_flow(&g, &f, &FlowKind::circular(&r)).unwrap(), None);
        assert_eq!(integer_flow_number(&g, 8).unwrap().unwrap().0, 2);
    }

    #[test]
    fn k4_circular_number() {
        // classical value 4 for K_4
        let g = SignedGraph::parse("p 4 6 / e 1 2 + / e 1 3 + / e 1 4 + / e 2 3 + / e 2 4 + / e 3 4 +").unwrap();
        let (r, f) = circular_flow_number(&g).unwrap();
        assert_eq!(r, rat(4));
        assert_eq!(check_flow(&g, &f, &FlowKind::circular(&r)).unwrap(), None);
    }

    #[test]
    fn wheel_w5_unsigned() {
        // self-dual planar; a universal vertex forces circular chromatic number = chromatic number = 4
        let g = SignedGraph::parse(
            "p 6 10 / e 1 2 + / e 1 3 + / e 1 4 + / e 1 5 + / e 1 6 + / e 2 3 + / e 3 4 + / e 4 5 + / e 5 6 + / e 6 2 +",
        )
        .unwrap();
        let (r, f) = circular_flow_number(&g).unwrap();
        assert_eq!(r, rat(4));
        assert_eq!(check_flow(&g, &f, &FlowKind::circular(&r)).unwrap(), None);
    }

    #[test]
    fn five_parallel_edges() {
        // planar dual of C_5
        let g = SignedGraph::parse("p 2 5 / e 1 2 + / e 1 2 + / e 1 2 + / e 1 2 + / e 1 2 +").unwrap();
        let (r, f) = circular_flow_number(&g).unwrap();
        assert_eq!(r, ratio(5, 2));
        assert_eq!(check_flow(&g, &f, &FlowKind::circular(&r)).unwrap(), None);
    }

    #[test]
    fn not_admissible_rejected() {
        let g = SignedGraph::parse("p 1 1 / e 1 1 -").unwrap();
        assert_eq!(circular_flow_number(&g).unwrap_err(), Error::NotFlowAdmissible);
        assert_eq!(integer_flow_number(&g, 8).unwrap(), None);
    }
}
