//! Self-verifying JSON certificates.
//!
//! A certificate carries the canonical graph text, its SHA-256, a claim with
//! its witness, and the verdict computed when it was issued. [`Certificate::verify`]
//! recomputes the verdict from the graph and the witness alone; any edit to
//! the graph, the witness or the verdict makes it fail. Edge and vertex ids
//! are 0-based positions.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::balance::{is_balanced, BalanceCertificate};
use crate::error::{Error, Result};
use crate::flow::{check_flow, format_rational, is_flow, parse_rational, rat, FlowAssignment, FlowKind, Rational};
use crate::graph::SignedGraph;
use crate::limits::Limits;
use crate::orientation::Orientation;
use crate::solve::{circular_flow_number_with, find_nz_k_flow_with, find_nz_zk_flow_with};
use crate::structure::find_long_barbell_with;
use crate::transform::eulerian::{DecompositionMember, EulerianDecomposition};
use crate::transform::normalize::{check_terminal, off_grid};

pub const SCHEMA_VERSION: u32 = 1;

/// Flow values as fraction strings, with the orientation as the edges
/// reversed from the canonical one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowWitness {
    pub flips: Vec<usize>,
    pub values: Vec<String>,
}

impl FlowWitness {
    pub fn from_flow(g: &SignedGraph, fa: &FlowAssignment) -> Result<Self> {
        Ok(FlowWitness { flips: fa.orientation.flips(g)?, values: fa.values.iter().map(format_rational).collect() })
    }

    pub fn to_flow(&self, g: &SignedGraph) -> Result<FlowAssignment> {
        if self.values.len() != g.num_edges() {
            return Err(Error::InvalidWitness(format!(
                "{} values for {} edges",
                self.values.len(),
                g.num_edges()
            )));
        }
        let values = self.values.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        Ok(FlowAssignment::new(Orientation::from_flips(g, &self.flips)?, values))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Claim {
    /// The witness is a flow of the stated kind.
    Flow { flow_kind: FlowKind, witness: FlowWitness },
    /// Exhaustive search finds no flow of the stated kind.
    Nonexistence { flow_kind: FlowKind },
    /// `value` is the circular flow number, attained by the witness.
    CircularFlowNumber { value: String, witness: FlowWitness },
    Balance { certificate: BalanceCertificate },
    /// `output` is an integer `k`-flow congruent to the `Z_k`-flow `input`.
    Conversion {
        k: u32,
        input: FlowWitness,
        output: FlowWitness,
        switch_journal: Vec<usize>,
        minus_journal: Vec<Vec<usize>>,
    },
    /// `parts` are `k - 1` flows with values in `{0, 1}` summing to `input`.
    TwoFlowDecomposition { k: u32, input: FlowWitness, parts: Vec<FlowWitness> },
    EulerianDecomposition { members: Vec<DecompositionMember> },
    /// `output` is a circular `(p/q + 1)`-flow whose off-grid edges are
    /// `off_grid`.
    Normalization { p: i64, q: i64, input: FlowWitness, output: FlowWitness, off_grid: Vec<usize> },
}

impl Claim {
    pub fn kind(&self) -> &'static str {
        match self {
            Claim::Flow { .. } => "flow",
            Claim::Nonexistence { .. } => "nonexistence",
            Claim::CircularFlowNumber { .. } => "circular-flow-number",
            Claim::Balance { .. } => "balance",
            Claim::Conversion { .. } => "conversion",
            Claim::TwoFlowDecomposition { .. } => "two-flow-decomposition",
            Claim::EulerianDecomposition { .. } => "eulerian-decomposition",
            Claim::Normalization { .. } => "normalization",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resources {
    pub search_node_cap: u64,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub graph: String,
    pub graph_sha256: String,
    pub claim: Claim,
    pub verdict: Verdict,
    pub resources: Resources,
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl Certificate {
    /// Issues a certificate, computing the verdict.
    pub fn issue(g: &SignedGraph, claim: Claim, limits: &Limits) -> Result<Certificate> {
        let start = std::time::Instant::now();
        let verdict = evaluate(g, &claim, limits)?;
        let graph = g.to_text();
        Ok(Certificate {
            schema_version: SCHEMA_VERSION,
            graph_sha256: sha256_hex(&graph),
            graph,
            claim,
            verdict,
            resources: Resources {
                search_node_cap: limits.search_nodes,
                elapsed_ms: start.elapsed().as_millis() as u64,
            },
        })
    }

    /// Recomputes the verdict. `Ok(())` when the hash matches, the claim
    /// holds and the stored verdict agrees.
    pub fn verify(&self, limits: &Limits) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidWitness(format!("unknown schema version {}", self.schema_version)));
        }
        if sha256_hex(&self.graph) != self.graph_sha256 {
            return Err(Error::InvalidWitness("graph hash mismatch".into()));
        }
        let g = SignedGraph::parse(&self.graph)?;
        if g.to_text() != self.graph {
            return Err(Error::InvalidWitness("graph text is not canonical".into()));
        }
        let fresh = evaluate(&g, &self.claim, limits)?;
        if fresh != self.verdict {
            return Err(Error::InvalidWitness(format!(
                "recorded verdict {:?} but recomputed {:?}",
                self.verdict, fresh
            )));
        }
        if !fresh.holds {
            return Err(Error::InvalidWitness(format!("claim does not hold: {}", fresh.detail)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Certificate> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }
}

fn holds(detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { holds: true, detail: detail.into() })
}

fn fails(detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict { holds: false, detail: detail.into() })
}

fn evaluate(g: &SignedGraph, claim: &Claim, limits: &Limits) -> Result<Verdict> {
    match claim {
        Claim::Flow { flow_kind, witness } => {
            let fa = match witness.to_flow(g) {
                Ok(fa) => fa,
                Err(e) => return fails(e.to_string()),
            };
            match check_flow(g, &fa, flow_kind)? {
                None => holds(format!("valid {flow_kind}")),
                Some(v) => fails(v.to_string()),
            }
        }
        Claim::Nonexistence { flow_kind } => {
            let found = match flow_kind {
                FlowKind::Integer { k } => find_nz_k_flow_with(g, *k, limits)?.is_some(),
                FlowKind::Modulo { k } => find_nz_zk_flow_with(g, *k, limits)?.is_some(),
                FlowKind::Circular { r } => {
                    let r = parse_rational(r)?;
                    match circular_flow_number_with(g, limits) {
                        Ok((phi, _)) => phi <= r,
                        Err(Error::NotFlowAdmissible) => false,
                        Err(e) => return Err(e),
                    }
                }
            };
            if found {
                fails(format!("a {flow_kind} exists"))
            } else {
                holds(format!("exhaustive search: no {flow_kind}"))
            }
        }
        Claim::CircularFlowNumber { value, witness } => {
            let r = parse_rational(value)?;
            let fa = match witness.to_flow(g) {
                Ok(fa) => fa,
                Err(e) => return fails(e.to_string()),
            };
            if r < rat(2) {
                return fails("value below 2");
            }
            if let Some(v) = check_flow(g, &fa, &FlowKind::circular(&r))? {
                return fails(format!("witness: {v}"));
            }
            let (phi, _) = circular_flow_number_with(g, limits)?;
            if phi != r {
                return fails(format!("circular flow number is {}", format_rational(&phi)));
            }
            holds(format!("circular flow number {value}"))
        }
        Claim::Balance { certificate } => {
            if !certificate.verify(g) {
                return fails("certificate does not substitute");
            }
            if certificate.is_balanced() != is_balanced(g).is_balanced() {
                return fails("balance disagrees");
            }
            holds(if certificate.is_balanced() { "balanced" } else { "unbalanced" })
        }
        Claim::Conversion { k, input, output, .. } => {
            let (Ok(z), Ok(f)) = (input.to_flow(g), output.to_flow(g)) else {
                return fails("malformed witness");
            };
            if let Some(v) = check_flow(g, &z, &FlowKind::Modulo { k: *k })? {
                return fails(format!("input: {v}"));
            }
            if let Some(v) = check_flow(g, &f, &FlowKind::Integer { k: *k })? {
                return fails(format!("output: {v}"));
            }
            if z.orientation != f.orientation {
                return fails("orientation changed");
            }
            let kk = rat(*k as i64);
            if let Some(e) = (0..g.num_edges()).find(|&e| !((&f.values[e] - &z.values[e]) / &kk).is_integer()) {
                return fails(format!("edge {e} is not congruent"));
            }
            holds(format!("integer {k}-flow congruent to the input"))
        }
        Claim::TwoFlowDecomposition { k, input, parts } => {
            let Ok(f) = input.to_flow(g) else { return fails("malformed input") };
            if let Some(v) = check_flow(g, &f, &FlowKind::Integer { k: *k })? {
                return fails(format!("input: {v}"));
            }
            if f.values.iter().any(|v| v.is_negative()) {
                return fails("input has a negative value");
            }
            if parts.len() + 1 != *k as usize {
                return fails(format!("{} parts", parts.len()));
            }
            let mut sum = vec![Rational::zero(); g.num_edges()];
            for (i, p) in parts.iter().enumerate() {
                let Ok(p) = p.to_flow(g) else { return fails(format!("malformed part {i}")) };
                let in_01 = p.values.iter().all(|v| v.is_zero() || *v == rat(1));
                if !in_01 || p.orientation != f.orientation || !is_flow(g, &p) {
                    return fails(format!("part {i} is not a non-negative 2-flow"));
                }
                for (s, v) in sum.iter_mut().zip(&p.values) {
                    *s += v;
                }
            }
            if sum != f.values {
                return fails("parts do not sum to the input");
            }
            holds(format!("{} non-negative 2-flows", parts.len()))
        }
        Claim::EulerianDecomposition { members } => {
            let d = EulerianDecomposition { members: members.clone() };
            if d.verify(g) {
                holds(format!("{} members", members.len()))
            } else {
                fails("members do not partition the edges into balanced circuits and short barbells")
            }
        }
        Claim::Normalization { p, q, input, output, off_grid: claimed } => {
            if *q < 1 || p < q {
                return fails("bad p/q");
            }
            let (Ok(a), Ok(b)) = (input.to_flow(g), output.to_flow(g)) else {
                return fails("malformed witness");
            };
            let r = Rational::new((*p).into(), (*q).into()) + rat(1);
            let kind = FlowKind::circular(&r);
            if let Some(v) = check_flow(g, &a, &kind)? {
                return fails(format!("input: {v}"));
            }
            if let Some(v) = check_flow(g, &b, &kind)? {
                return fails(format!("output: {v}"));
            }
            if a.orientation != b.orientation || b.values.iter().any(|v| v.is_negative()) {
                return fails("output orientation or signs differ");
            }
            let fresh = off_grid(&b.values, *q);
            if &fresh != claimed {
                return fails("off-grid set differs");
            }
            if !fresh.is_empty() {
                if let Err(e) = check_terminal(g, &fresh, &b.values, *q) {
                    return fails(e.to_string());
                }
                if find_long_barbell_with(g, limits)?.is_none() {
                    return fails("off-grid edges on a graph without long barbells");
                }
            }
            holds(format!("{} off-grid edges", fresh.len()))
        }
    }
}
