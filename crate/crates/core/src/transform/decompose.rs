//! Splitting a positive integer `k`-flow into `k - 1` non-negative 2-flows.

use crate::error::{Error, Result};
use crate::flow::{check_flow, FlowAssignment, FlowKind};
use crate::graph::SignedGraph;
use crate::limits::Limits;
use crate::orientation::Orientation;
use crate::solve::two_flow::two_flow_on_edges;
use crate::structure::find_long_barbell_with;
use crate::transform::conversion::{modflow_to_intflow_with, ConversionOptions};

/// Writes a positive integer `k`-flow of a graph without long barbells as a
/// sum of `k - 1` flows with values in `{0, 1}`, all under the input
/// orientation.
pub fn decompose_into_2_flows(g: &SignedGraph, fa: &FlowAssignment, k: u32) -> Result<Vec<FlowAssignment>> {
    decompose_into_2_flows_with(g, fa, k, Limits::global())
}

pub fn decompose_into_2_flows_with(
    g: &SignedGraph,
    fa: &FlowAssignment,
    k: u32,
    limits: &Limits,
) -> Result<Vec<FlowAssignment>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
    }
    if let Some(v) = check_flow(g, fa, &FlowKind::Integer { k })? {
        return Err(Error::Precondition(format!("input is not a nowhere-zero {k}-flow: {v}")));
    }
    let values = fa.integer_values().expect("checked integer flow");
    if let Some(e) = values.iter().position(|&v| v < 1) {
        return Err(Error::Precondition(format!("edge {e} carries a negative value")));
    }
    if find_long_barbell_with(g, limits)?.is_some() {
        return Err(Error::LongBarbell);
    }
    let parts = split(g, &fa.orientation, values.clone(), k as i64, limits)?;
    // exact re-summation
    let mut sum = vec![0i64; g.num_edges()];
    for p in &parts {
        for (s, v) in sum.iter_mut().zip(p) {
            *s += v;
        }
    }
    if sum != values || parts.len() != k as usize - 1 {
        return Err(Error::InvariantViolation("summands do not add up to the input".into()));
    }
    let out: Vec<FlowAssignment> =
        parts.iter().map(|p| FlowAssignment::from_integers(fa.orientation.clone(), p)).collect();
    for (i, f) in out.iter().enumerate() {
        if !crate::flow::is_flow(g, f) {
            return Err(Error::InvariantViolation(format!("summand {i} has a nonzero boundary")));
        }
    }
    Ok(out)
}

/// Recursive step on a non-negative `k`-flow (zeros allowed).
fn split(g: &SignedGraph, o: &Orientation, f: Vec<i64>, k: i64, limits: &Limits) -> Result<Vec<Vec<i64>>> {
    debug_assert!(f.iter().all(|&v| (0..k).contains(&v)));
    if k == 2 {
        return Ok(vec![f]);
    }
    if k % 2 == 1 {
        let odd: Vec<usize> = (0..f.len()).filter(|&e| f[e] % 2 == 1).collect();
        let canon = Orientation::canonical(g);
        let g0 = two_flow_on_edges(g, &odd).ok_or_else(|| {
            Error::InvariantViolation("odd-valued edges carry no 2-flow".into())
        })?;
        let g0: Vec<i64> = (0..f.len())
            .map(|e| if o.is_reversed_from(&canon, e) { -g0[e] } else { g0[e] })
            .collect();
        let up: Vec<i64> = f.iter().zip(&g0).map(|(a, b)| (a + b) / 2).collect();
        let down: Vec<i64> = f.iter().zip(&g0).map(|(a, b)| (a - b) / 2).collect();
        let half = (k - 1) / 2 + 1;
        let mut out = split(g, o, up, half, limits)?;
        out.extend(split(g, o, down, half, limits)?);
        return Ok(out);
    }
    // even k: convert the residues mod k - 1 on their support
    let m = k - 1;
    let support: Vec<usize> = (0..f.len()).filter(|&e| f[e] % m != 0).collect();
    let mut g0 = vec![0i64; f.len()];
    if !support.is_empty() {
        let (sub, map) = g.edge_subgraph(&support);
        let so = Orientation::from_directions(map.iter().map(|&e| o.dirs(e)).collect())?;
        let residues: Vec<i64> = map.iter().map(|&e| f[e]).collect();
        let options = ConversionOptions::default();
        let report = modflow_to_intflow_with(
            &sub,
            &FlowAssignment::from_integers(so, &residues),
            m as u32,
            options,
            limits,
        )?;
        let conv = report.flow.expect("odd modulus").integer_values().expect("integer flow");
        for (i, &e) in map.iter().enumerate() {
            g0[e] = conv[i];
        }
    }
    let f1: Vec<i64> = f.iter().zip(&g0).map(|(a, b)| (a - b) / m).collect();
    if f1.iter().any(|&v| v != 0 && v != 1) {
        return Err(Error::InvariantViolation("quotient is not a non-negative 2-flow".into()));
    }
    let rest: Vec<i64> = f.iter().zip(&f1).map(|(a, b)| a - b).collect();
    let mut out = vec![f1];
    out.extend(split(g, o, rest, m, limits)?);
    Ok(out)
}
