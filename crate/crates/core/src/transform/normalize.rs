//! Moving a circular flow onto the `1/q` grid by pushing along signed
//! circuits of its off-grid edges.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::flow::{check_flow, format_rational, rat, FlowAssignment, FlowKind, Rational};
use crate::graph::SignedGraph;
use crate::limits::Limits;
use crate::orientation::Orientation;
use crate::solve::signed_circuit_flow;
use crate::structure::{find_long_barbell_with, find_signed_circuit_in, Circuit};

/// Terminal state of a normalization run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationState {
    pub orientation: Orientation,
    /// Values in `[1, p/q]`.
    pub values: Vec<Rational>,
    pub p: i64,
    pub q: i64,
    /// Edges whose value is not a multiple of `1/q`.
    pub off_grid: Vec<usize>,
    pub pushes: usize,
}

impl NormalizationState {
    pub fn flow(&self) -> FlowAssignment {
        FlowAssignment::new(self.orientation.clone(), self.values.clone())
    }

    fn recompute_off_grid(&self) -> Vec<usize> {
        off_grid(&self.values, self.q)
    }
}

/// Edges whose value is not a multiple of `1/q`.
pub fn off_grid(values: &[Rational], q: i64) -> Vec<usize> {
    (0..values.len()).filter(|&e| !(&values[e] * rat(q)).is_integer()).collect()
}

/// Pushes a circular `(p/q + 1)`-flow with positive values along signed
/// circuits inside its off-grid edges until none remains. On a graph without
/// long barbells every value then lies on the `1/q` grid; otherwise the
/// off-grid edges form vertex-disjoint unbalanced circuits carrying odd
/// multiples of `1/(2q)`.
pub fn normalize_circular_flow(g: &SignedGraph, fa: &FlowAssignment, p: i64, q: i64) -> Result<NormalizationState> {
    normalize_circular_flow_with(g, fa, p, q, Limits::global())
}

pub fn normalize_circular_flow_with(
    g: &SignedGraph,
    fa: &FlowAssignment,
    p: i64,
    q: i64,
    limits: &Limits,
) -> Result<NormalizationState> {
    if q < 1 || p < q {
        return Err(Error::InvalidParameter(format!("need q >= 1 and p >= q, got p = {p}, q = {q}")));
    }
    let r = Rational::new(p.into(), q.into()) + rat(1);
    if let Some(v) = check_flow(g, fa, &FlowKind::circular(&r))? {
        return Err(Error::Precondition(format!("input is not a circular {}-flow: {v}", format_rational(&r))));
    }
    if let Some(e) = fa.values.iter().position(|v| v.is_negative()) {
        return Err(Error::Precondition(format!("edge {e} carries a negative value")));
    }
    let mut state = NormalizationState {
        orientation: fa.orientation.clone(),
        values: fa.values.clone(),
        p,
        q,
        off_grid: off_grid(&fa.values, q),
        pushes: 0,
    };
    let kind = FlowKind::circular(&r);
    let qr = rat(q);
    while !state.off_grid.is_empty() {
        let Some(w) = find_signed_circuit_in(g, &state.off_grid) else { break };
        let phi1 = signed_circuit_flow(g, &w)?.reoriented(&state.orientation);
        // step length to the next grid point in each direction
        let step = |d: i64| -> Rational {
            let mut best: Option<Rational> = None;
            for e in phi1.support() {
                let delta = &phi1.values[e] * rat(d);
                let scaled = &state.values[e] * &qr;
                let gap = if delta.is_positive() { scaled.ceil() - &scaled } else { &scaled - scaled.floor() };
                let eps = gap / (&qr * delta.abs());
                if best.as_ref().is_none_or(|b| eps < *b) {
                    best = Some(eps);
                }
            }
            best.expect("signed circuit has edges")
        };
        let (up, down) = (step(1), step(-1));
        let (d, eps) = if up <= down { (1, up) } else { (-1, down) };
        if eps.is_zero() {
            return Err(Error::InvariantViolation("zero push on an off-grid circuit".into()));
        }
        for e in phi1.support() {
            state.values[e] += &eps * &phi1.values[e] * rat(d);
        }
        state.pushes += 1;
        let fresh = state.recompute_off_grid();
        if fresh.len() >= state.off_grid.len() {
            return Err(Error::InvariantViolation("push did not shrink the off-grid set".into()));
        }
        state.off_grid = fresh;
        if let Some(v) = check_flow(g, &state.flow(), &kind)? {
            return Err(Error::InvariantViolation(format!("push left the circular flow range: {v}")));
        }
    }
    if !state.off_grid.is_empty() {
        check_terminal(g, &state.off_grid, &state.values, state.q)?;
        if find_long_barbell_with(g, limits)?.is_none() {
            return Err(Error::InvariantViolation(
                "off-grid unbalanced circuit left on a graph without long barbells".into(),
            ));
        }
    }
    Ok(state)
}

/// Off-grid edges form vertex-disjoint unbalanced circuits, each value an
/// odd multiple of `1/(2q)`.
pub fn check_terminal(g: &SignedGraph, off_grid: &[usize], values: &[Rational], q: i64) -> Result<()> {
    let (sub, map) = g.edge_subgraph(off_grid);
    let comp = sub.component_map();
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &e) in map.iter().enumerate() {
        groups.entry(comp[sub.edge(i).ends[0]]).or_default().push(e);
    }
    for edges in groups.values() {
        let ok = Circuit::from_edges(g, edges).is_some_and(|c| !c.is_balanced(g));
        if !ok {
            return Err(Error::InvariantViolation("off-grid edges do not form unbalanced circuits".into()));
        }
    }
    for &e in off_grid {
        let twice = &values[e] * rat(2 * q);
        if !twice.is_integer() || (twice.to_integer() % 2u32).is_zero() {
            return Err(Error::InvariantViolation(format!("edge {e} is not an odd multiple of 1/(2q)")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{g_family, g_family_circular_witness};
    use crate::flow::ratio;

    #[test]
    fn on_grid_flow_is_unchanged() {
        let g = SignedGraph::parse("p 2 3 / e 1 2 + / e 2 1 + / e 2 1 +").unwrap();
        let fa = FlowAssignment::new(Orientation::canonical(&g), vec![rat(2), rat(1), rat(1)]);
        let s = normalize_circular_flow(&g, &fa, 2, 1).unwrap();
        assert!(s.off_grid.is_empty());
        assert_eq!(s.values, fa.values);
        assert_eq!(s.pushes, 0);
    }

    #[test]
    fn g1_keeps_half_values_on_loops() {
        let g = g_family(1).unwrap();
        let fa = g_family_circular_witness(1).unwrap().folded_positive();
        let s = normalize_circular_flow(&g, &fa, 2, 1).unwrap();
        assert_eq!(s.off_grid, vec![0, 1]);
        assert_eq!(s.values[0], ratio(3, 2));
        assert_eq!(s.values[1], ratio(3, 2));
    }

    #[test]
    fn perturbed_flow_returns_to_grid() {
        // three parallel edges: shift the balanced circuit on edges 0, 1 by 1/3
        let g = SignedGraph::parse("p 2 3 / e 1 2 + / e 2 1 + / e 2 1 +").unwrap();
        let base = FlowAssignment::new(Orientation::canonical(&g), vec![rat(2), rat(1), rat(1)]);
        let mut fa = base.clone();
        fa.values[0] += ratio(1, 3);
        fa.values[1] += ratio(1, 3);
        let s = normalize_circular_flow(&g, &fa, 3, 1).unwrap();
        assert!(s.off_grid.is_empty());
        assert!(s.values.iter().all(|v| v.is_integer()));
        assert_eq!(check_flow(&g, &s.flow(), &FlowKind::circular(&rat(4))).unwrap(), None);
    }
}
