//! Flow assignments, boundaries and the defining flow conditions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{End, HalfEdge, SignedGraph};
use crate::orientation::Orientation;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("not a fraction: `{s}`"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// An orientation together with one exact value per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowAssignment {
    pub orientation: Orientation,
    pub values: Vec<Rational>,
}

impl FlowAssignment {
    pub fn new(orientation: Orientation, values: Vec<Rational>) -> Self {
        FlowAssignment { orientation, values }
    }

    pub fn from_integers(orientation: Orientation, values: &[i64]) -> Self {
        FlowAssignment { orientation, values: values.iter().map(|&v| rat(v)).collect() }
    }

    pub fn zero(orientation: Orientation) -> Self {
        let m = orientation.num_edges();
        FlowAssignment { orientation, values: vec![Rational::zero(); m] }
    }

    pub fn num_edges(&self) -> usize {
        self.values.len()
    }

    /// Integer view; `None` if some value is fractional or does not fit.
    pub fn integer_values(&self) -> Option<Vec<i64>> {
        self.values
            .iter()
            .map(|v| if v.is_integer() { v.to_integer().to_i64() } else { None })
            .collect()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&e| !self.values[e].is_zero()).collect()
    }

    /// The same flow expressed under `target`, which must induce the same
    /// signature: reversed edges have their value negated.
    pub fn reoriented(&self, target: &Orientation) -> FlowAssignment {
        let values = (0..self.values.len())
            .map(|e| {
                if self.orientation.is_reversed_from(target, e) {
                    -self.values[e].clone()
                } else {
                    self.values[e].clone()
                }
            })
            .collect();
        FlowAssignment { orientation: target.clone(), values }
    }

    /// Reverses every edge carrying a negative value so all values become
    /// non-negative.
    pub fn folded_positive(&self) -> FlowAssignment {
        let mut out = self.clone();
        for e in 0..out.values.len() {
            if out.values[e].is_negative() {
                out.orientation.reverse_edge(e);
                out.values[e] = -out.values[e].clone();
            }
        }
        out
    }

    /// Boundary `∂(τ,f)(v) = Σ_{h ∈ H(v)} τ(h) f(e_h)` at every vertex.
    pub fn boundary(&self, g: &SignedGraph) -> Vec<Rational> {
        let mut b = vec![Rational::zero(); g.num_vertices()];
        for (e, edge) in g.edges().iter().enumerate() {
            if self.values[e].is_zero() {
                continue;
            }
            for end in End::BOTH {
                let d = self.orientation.dir(HalfEdge::new(e, end));
                let v = edge.end(end);
                if d > 0 {
                    b[v] += &self.values[e];
                } else {
                    b[v] -= &self.values[e];
                }
            }
        }
        b
    }

    /// Edge boundary `-(τ(h1)+τ(h2)) f(e)`; non-zero only on negative edges.
    pub fn edge_boundary(&self, e: usize) -> Rational {
        let [a, b] = self.orientation.dirs(e);
        -(rat(a as i64 + b as i64)) * &self.values[e]
    }
}

/// Boundary of a flow assignment on `g`.
pub fn boundary(g: &SignedGraph, fa: &FlowAssignment) -> Vec<Rational> {
    fa.boundary(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FlowKind {
    /// Nowhere-zero integer `k`-flow.
    Integer { k: u32 },
    /// Nowhere-zero `Z_k`-flow.
    Modulo { k: u32 },
    /// Circular `r`-flow, `r` given as a fraction string.
    Circular { r: String },
}

impl FlowKind {
    pub fn circular(r: &Rational) -> FlowKind {
        FlowKind::Circular { r: format_rational(r) }
    }
}

impl fmt::Display for FlowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowKind::Integer { k } => write!(f, "integer {k}-flow"),
            FlowKind::Modulo { k } => write!(f, "Z_{k}-flow"),
            FlowKind::Circular { r } => write!(f, "circular {r}-flow"),
        }
    }
}

/// The first defining condition a candidate flow violates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "kebab-case")]
pub enum Violation {
    OrientationInconsistent { edge: usize },
    SupportNotFull { edge: usize },
    NotInteger { edge: usize },
    ValueOutOfRange { edge: usize },
    NonzeroBoundary { vertex: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OrientationInconsistent { edge } => {
                write!(f, "orientation inconsistent with signature at edge {edge}")
            }
            Violation::SupportNotFull { edge } => write!(f, "support ≠ E (edge {edge} is zero)"),
            Violation::NotInteger { edge } => write!(f, "edge {edge} carries a non-integer value"),
            Violation::ValueOutOfRange { edge } => write!(f, "edge {edge} value out of range"),
            Violation::NonzeroBoundary { vertex } => write!(f, "non-zero boundary at vertex {vertex}"),
        }
    }
}

/// Checks the exact defining conditions of the requested flow kind.
/// `Ok(None)` means the assignment is valid.
pub fn check_flow(g: &SignedGraph, fa: &FlowAssignment, kind: &FlowKind) -> Result<Option<Violation>> {
    if fa.values.len() != g.num_edges() || fa.orientation.num_edges() != g.num_edges() {
        return Err(Error::InvalidParameter(format!(
            "assignment has {} values for {} edges",
            fa.values.len(),
            g.num_edges()
        )));
    }
    match kind {
        FlowKind::Integer { k } | FlowKind::Modulo { k } if *k < 2 => {
            return Err(Error::InvalidParameter(format!("k must be at least 2, got {k}")));
        }
        _ => {}
    }
    let r = match kind {
        FlowKind::Circular { r } => {
            let r = parse_rational(r)?;
            if r < rat(2) {
                return Err(Error::InvalidParameter(format!("r must be at least 2, got {}", format_rational(&r))));
            }
            Some(r)
        }
        _ => None,
    };
    if let Some(edge) = fa.orientation.first_inconsistency(g) {
        return Ok(Some(Violation::OrientationInconsistent { edge }));
    }
    for (e, v) in fa.values.iter().enumerate() {
        match kind {
            FlowKind::Integer { k } => {
                if !v.is_integer() {
                    return Ok(Some(Violation::NotInteger { edge: e }));
                }
                if v.is_zero() {
                    return Ok(Some(Violation::SupportNotFull { edge: e }));
                }
                if v.abs() > rat(*k as i64 - 1) {
                    return Ok(Some(Violation::ValueOutOfRange { edge: e }));
                }
            }
            FlowKind::Modulo { k } => {
                if !v.is_integer() {
                    return Ok(Some(Violation::NotInteger { edge: e }));
                }
                if v.to_integer().mod_floor(&BigInt::from(*k)).is_zero() {
                    return Ok(Some(Violation::SupportNotFull { edge: e }));
                }
            }
            FlowKind::Circular { .. } => {
                if v.is_zero() {
                    return Ok(Some(Violation::SupportNotFull { edge: e }));
                }
                let a = v.abs();
                if a < Rational::one() || a > r.as_ref().unwrap() - Rational::one() {
                    return Ok(Some(Violation::ValueOutOfRange { edge: e }));
                }
            }
        }
    }
    let b = fa.boundary(g);
    for (vertex, bv) in b.iter().enumerate() {
        let ok = match kind {
            FlowKind::Modulo { k } => bv.to_integer().mod_floor(&BigInt::from(*k)).is_zero(),
            _ => bv.is_zero(),
        };
        if !ok {
            return Ok(Some(Violation::NonzeroBoundary { vertex }));
        }
    }
    Ok(None)
}

/// `true` when the assignment is a flow (zero boundary), regardless of support or bounds.
pub fn is_flow(g: &SignedGraph, fa: &FlowAssignment) -> bool {
    fa.orientation.is_consistent_with(g) && fa.boundary(g).iter().all(Zero::is_zero)
}

/// Number of negative edges carrying an odd integer value. Always even for
/// an integer flow.
pub fn odd_negative_count(g: &SignedGraph, fa: &FlowAssignment) -> usize {
    g.negative_edges()
        .into_iter()
        .filter(|&e| fa.values[e].is_integer() && fa.values[e].to_integer().is_odd())
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circuit_boundary_vanishes() {
        let g = SignedGraph::parse("p 3 3 / e 1 2 + / e 2 3 + / e 3 1 +").unwrap();
        let fa = FlowAssignment::from_integers(Orientation::canonical(&g), &[1, 1, 1]);
        assert!(fa.boundary(&g).iter().all(Zero::is_zero));
        assert_eq!(check_flow(&g, &fa, &FlowKind::Integer { k: 2 }).unwrap(), None);
    }

    #[test]
    fn negative_loop_boundary() {
        let g = SignedGraph::parse("p 1 1 / e 1 1 -").unwrap();
        let fa = FlowAssignment::new(Orientation::canonical(&g), vec![ratio(3, 2)]);
        assert_eq!(fa.boundary(&g), vec![rat(3)]);
        assert_eq!(fa.edge_boundary(0), rat(-3));
    }

    #[test]
    fn positive_loop_contributes_nothing() {
        let g = SignedGraph::parse("p 1 1 / e 1 1 +").unwrap();
        let fa = FlowAssignment::from_integers(Orientation::canonical(&g), &[5]);
        assert_eq!(fa.boundary(&g), vec![rat(0)]);
    }

    #[test]
    fn zeroed_value_fails_support() {
        let g = SignedGraph::parse("p 2 2 / e 1 2 + / e 2 1 +").unwrap();
        let fa = FlowAssignment::from_integers(Orientation::canonical(&g), &[0, 0]);
        assert_eq!(
            check_flow(&g, &fa, &FlowKind::Integer { k: 3 }).unwrap(),
            Some(Violation::SupportNotFull { edge: 0 })
        );
    }

    #[test]
    fn modulo_and_circular_checks() {
        let g = SignedGraph::parse("p 2 2 / e 1 2 + / e 1 2 +").unwrap();
        let o = Orientation::canonical(&g);
        // both edges point 1 -> 2; 1 + 2 ≡ 0 (mod 3)
        let fa = FlowAssignment::from_integers(o.clone(), &[1, 2]);
        assert_eq!(check_flow(&g, &fa, &FlowKind::Modulo { k: 3 }).unwrap(), None);
        assert!(check_flow(&g, &fa, &FlowKind::Integer { k: 3 }).unwrap().is_some());
        let fa = FlowAssignment::new(o, vec![ratio(3, 2), ratio(-3, 2)]);
        assert_eq!(check_flow(&g, &fa, &FlowKind::circular(&ratio(5, 2))).unwrap(), None);
        assert_eq!(
            check_flow(&g, &fa, &FlowKind::circular(&rat(2))).unwrap(),
            Some(Violation::ValueOutOfRange { edge: 0 })
        );
    }

    #[test]
    fn malformed_parameters() {
        let g = SignedGraph::parse("p 1 0").unwrap();
        let fa = FlowAssignment::zero(Orientation::canonical(&g));
        assert!(check_flow(&g, &fa, &FlowKind::Integer { k: 1 }).is_err());
        assert!(check_flow(&g, &fa, &FlowKind::Circular { r: "3/2".into() }).is_err());
        assert!(check_flow(&g, &fa, &FlowKind::Circular { r: "x".into() }).is_err());
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(format_rational(&ratio(3, 2)), "3/2");
        assert_eq!(format_rational(&rat(-4)), "-4");
        assert!(parse_rational("1/0").is_err());
    }
}
