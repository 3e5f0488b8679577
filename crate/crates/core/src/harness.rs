//! Theorem-verification suites over enumerated corpora.
//!
//! Items are checked in parallel; results are collected in corpus order so a
//! summary does not depend on the number of worker threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{enumerate_signed_graphs, signed_petersen, w5_all_signatures};
use crate::error::{Error, Result};
use crate::flow::{check_flow, format_rational, is_flow, odd_negative_count, rat, FlowAssignment, FlowKind};
use crate::graph::SignedGraph;
use crate::limits::Limits;
use crate::solve::{circular_flow_number_with, find_nz_k_flow_with, find_nz_zk_flow_with, integer_flow_number_with};
use crate::structure::cubic::three_edge_coloring_with;
use crate::structure::{find_long_barbell_with, is_flow_admissible};
use crate::transform::{
    decompose_into_2_flows_with, eulerian_decompose_with, modflow_to_intflow_with, normalize_circular_flow_with,
    ConversionOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    SixFlow,
    ModIntEquiv,
    Conversion,
    TwoFlowSum,
    EulerianDecomp,
    PhiEquality,
    CubicZ4,
    EvenKExperimental,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::SixFlow,
        Suite::ModIntEquiv,
        Suite::Conversion,
        Suite::TwoFlowSum,
        Suite::EulerianDecomp,
        Suite::PhiEquality,
        Suite::CubicZ4,
        Suite::EvenKExperimental,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SixFlow => "six-flow",
            Suite::ModIntEquiv => "mod-int-equiv",
            Suite::Conversion => "conversion",
            Suite::TwoFlowSum => "two-flow-sum",
            Suite::EulerianDecomp => "eulerian-decomp",
            Suite::PhiEquality => "phi-equality",
            Suite::CubicZ4 => "cubic-z4",
            Suite::EvenKExperimental => "even-k-experimental",
        }
    }

    /// Values of `k` used when none are given.
    pub fn default_ks(self) -> Vec<u32> {
        match self {
            Suite::SixFlow => vec![6],
            Suite::ModIntEquiv => vec![3, 5, 6, 7],
            Suite::Conversion => vec![3, 5, 7],
            Suite::TwoFlowSum => vec![2, 3, 4, 5, 6],
            Suite::CubicZ4 => vec![4],
            Suite::EvenKExperimental => vec![4, 6],
            Suite::EulerianDecomp | Suite::PhiEquality => vec![],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub max_v: usize,
    pub max_e: usize,
    /// Empty means [`Suite::default_ks`].
    pub ks: Vec<u32>,
    /// Edge bound for the circular flow number in `phi-equality`.
    pub phi_max_edges: usize,
    pub limits: Limits,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_v: 5, max_e: 8, ks: Vec::new(), phi_max_edges: 12, limits: *Limits::global() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteFailure {
    pub index: usize,
    pub graph: String,
    pub message: String,
}

/// Outcome of one suite. `failures` lists theorem breaches and solver
/// errors; items that hit a resource cap are counted in `capped` only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub max_v: usize,
    pub max_e: usize,
    pub ks: Vec<u32>,
    pub corpus_size: usize,
    pub checked: usize,
    pub passed: usize,
    pub capped: usize,
    pub failures: Vec<SuiteFailure>,
    /// Integer flows whose odd negative edges were counted.
    pub parity_checks: usize,
    pub parity_failures: usize,
    /// Recorded counters, not asserted.
    pub notes: BTreeMap<String, u64>,
}

impl SuiteSummary {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.capped == 0 && self.parity_failures == 0
    }
}

#[derive(Default)]
struct Item {
    checked: bool,
    capped: bool,
    failure: Option<String>,
    parity_checks: usize,
    parity_failures: usize,
    notes: Vec<String>,
}

impl Item {
    fn parity(&mut self, g: &SignedGraph, fa: &FlowAssignment) {
        self.parity_checks += 1;
        if odd_negative_count(g, fa) % 2 == 1 {
            self.parity_failures += 1;
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }
}

/// Runs `suite` over the connected signed graphs within the bounds.
pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteSummary> {
    let mut corpus = enumerate_signed_graphs(config.max_v, config.max_e)?;
    match suite {
        Suite::CubicZ4 => corpus.push(signed_petersen()),
        Suite::EvenKExperimental => corpus.extend(w5_all_signatures()),
        _ => {}
    }
    run_suite_on(suite, config, &corpus)
}

/// Runs `suite` over an explicit corpus.
pub fn run_suite_on(suite: Suite, config: &SuiteConfig, corpus: &[SignedGraph]) -> Result<SuiteSummary> {
    let ks = if config.ks.is_empty() { suite.default_ks() } else { config.ks.clone() };
    validate_ks(suite, &ks)?;
    let items: Vec<Item> = corpus
        .par_iter()
        .map(|g| {
            let mut item = Item::default();
            match run_item(suite, g, &ks, config, &mut item) {
                Ok(()) => {}
                Err(Error::ResourceCap { what, limit }) => {
                    item.capped = true;
                    item.note(format!("cap: {what} ({limit})"));
                }
                Err(e) => item.failure = Some(e.to_string()),
            }
            item
        })
        .collect();
    let mut summary = SuiteSummary {
        suite,
        max_v: config.max_v,
        max_e: config.max_e,
        ks,
        corpus_size: corpus.len(),
        checked: 0,
        passed: 0,
        capped: 0,
        failures: Vec::new(),
        parity_checks: 0,
        parity_failures: 0,
        notes: BTreeMap::new(),
    };
    for (index, (item, g)) in items.into_iter().zip(corpus).enumerate() {
        summary.parity_checks += item.parity_checks;
        summary.parity_failures += item.parity_failures;
        for n in item.notes {
            *summary.notes.entry(n).or_default() += 1;
        }
        if item.capped {
            summary.capped += 1;
            continue;
        }
        if !item.checked && item.failure.is_none() {
            continue;
        }
        summary.checked += 1;
        match item.failure {
            None => summary.passed += 1,
            Some(message) => summary.failures.push(SuiteFailure { index, graph: g.to_text(), message }),
        }
    }
    Ok(summary)
}

fn validate_ks(suite: Suite, ks: &[u32]) -> Result<()> {
    let bad = |msg: &str| Err(Error::InvalidParameter(format!("{suite}: {msg}")));
    if ks.iter().any(|&k| k < 2) {
        return bad("k must be at least 2");
    }
    match suite {
        Suite::Conversion if ks.iter().any(|&k| k < 3 || k % 2 == 0) => bad("k must be odd and at least 3"),
        Suite::EvenKExperimental if ks.iter().any(|&k| k < 4 || k % 2 == 1) => bad("k must be even and at least 4"),
        _ => Ok(()),
    }
}

fn barbell_free(g: &SignedGraph, limits: &Limits) -> Result<bool> {
    Ok(find_long_barbell_with(g, limits)?.is_none())
}

fn admissible_barbell_free(g: &SignedGraph, limits: &Limits) -> Result<bool> {
    Ok(is_flow_admissible(g).admissible && barbell_free(g, limits)?)
}

fn fail(item: &mut Item, msg: String) -> Result<()> {
    item.failure = Some(msg);
    Ok(())
}

fn run_item(suite: Suite, g: &SignedGraph, ks: &[u32], config: &SuiteConfig, item: &mut Item) -> Result<()> {
    let limits = &config.limits;
    match suite {
        Suite::SixFlow => {
            if !admissible_barbell_free(g, limits)? {
                return Ok(());
            }
            item.checked = true;
            for &k in ks {
                let Some(f) = find_nz_k_flow_with(g, k, limits)? else {
                    return fail(item, format!("no nowhere-zero {k}-flow"));
                };
                if let Some(v) = check_flow(g, &f, &FlowKind::Integer { k })? {
                    return fail(item, format!("{k}-flow witness rejected: {v}"));
                }
                item.parity(g, &f);
            }
        }
        Suite::ModIntEquiv => {
            if !admissible_barbell_free(g, limits)? {
                return Ok(());
            }
            item.checked = true;
            for &k in ks {
                let int = find_nz_k_flow_with(g, k, limits)?;
                let zk = find_nz_zk_flow_with(g, k, limits)?;
                if let Some(f) = &int {
                    if let Some(v) = check_flow(g, f, &FlowKind::Integer { k })? {
                        return fail(item, format!("{k}-flow witness rejected: {v}"));
                    }
                    item.parity(g, f);
                }
                if let Some(f) = &zk {
                    if let Some(v) = check_flow(g, f, &FlowKind::Modulo { k })? {
                        return fail(item, format!("Z_{k}-flow witness rejected: {v}"));
                    }
                }
                if int.is_some() != zk.is_some() {
                    return fail(
                        item,
                        format!("k = {k}: integer flow {}, Z_k flow {}", int.is_some(), zk.is_some()),
                    );
                }
            }
        }
        Suite::Conversion => {
            if !admissible_barbell_free(g, limits)? {
                return Ok(());
            }
            for &k in ks {
                let Some(z) = find_nz_zk_flow_with(g, k, limits)? else { continue };
                item.checked = true;
                let report = modflow_to_intflow_with(g, &z, k, ConversionOptions::default(), limits)?;
                let Some(f) = report.flow else {
                    return fail(item, format!("k = {k}: conversion returned no flow"));
                };
                if let Some(msg) = integer_congruent(g, &z, &f, k)? {
                    return fail(item, format!("k = {k}: {msg}"));
                }
                item.parity(g, &f);
                let s = report.stats;
                for (name, n) in [
                    ("pair-minusings", s.pair_minusings),
                    ("closed-minusings", s.closed_minusings),
                    ("splits", s.splits),
                    ("relocations", s.relocations),
                    ("reach-switches", s.reach_switches),
                ] {
                    for _ in 0..n {
                        item.note(format!("moves: {name}"));
                    }
                }
            }
        }
        Suite::TwoFlowSum => {
            if !admissible_barbell_free(g, limits)? {
                return Ok(());
            }
            for &k in ks {
                let Some(f) = find_nz_k_flow_with(g, k, limits)? else { continue };
                item.checked = true;
                let f = f.folded_positive();
                item.parity(g, &f);
                let parts = decompose_into_2_flows_with(g, &f, k, limits)?;
                if parts.len() != k as usize - 1 {
                    return fail(item, format!("k = {k}: {} summands", parts.len()));
                }
                for (e, v) in f.values.iter().enumerate() {
                    let s: crate::flow::Rational = parts.iter().map(|p| p.values[e].clone()).sum();
                    if &s != v {
                        return fail(item, format!("k = {k}: summands do not add up on edge {e}"));
                    }
                }
                for p in &parts {
                    let nonneg_01 = p.values.iter().all(|v| v.is_integer() && !v.is_negative() && *v <= rat(1));
                    if !nonneg_01 || !is_flow(g, p) || p.orientation != f.orientation {
                        return fail(item, format!("k = {k}: a summand is not a non-negative 2-flow"));
                    }
                    item.parity(g, p);
                }
            }
        }
        Suite::EulerianDecomp => {
            if !g.is_eulerian() || g.num_negative() % 2 == 1 || !admissible_barbell_free(g, limits)? {
                return Ok(());
            }
            item.checked = true;
            let d = eulerian_decompose_with(g, limits)?;
            if !d.verify(g) {
                return fail(item, "decomposition does not verify".into());
            }
            for m in &d.members {
                item.note(format!("members: {:?}", m.kind));
            }
        }
        Suite::PhiEquality => {
            if g.num_edges() > config.phi_max_edges || !is_flow_admissible(g).admissible {
                return Ok(());
            }
            let free = barbell_free(g, limits)?;
            let (phi_c, witness) = circular_flow_number_with(g, limits)?;
            if let Some(v) = check_flow(g, &witness, &FlowKind::circular(&phi_c))? {
                return fail(item, format!("circular witness rejected: {v}"));
            }
            let ceil = phi_c.ceil().to_integer().to_u32().expect("small flow number");
            let Some((phi_i, f)) = integer_flow_number_with(g, ceil.max(6) + 2, limits)? else {
                return fail(item, "no integer flow found".into());
            };
            item.parity(g, &f);
            // normalization of the optimal circular flow
            let s = &phi_c - rat(1);
            let (p, q) = (s.numer().to_i64().expect("small"), s.denom().to_i64().expect("small"));
            let state = normalize_circular_flow_with(g, &witness.folded_positive(), p, q, limits)?;
            item.note(if state.off_grid.is_empty() { "normalized: on grid" } else { "normalized: loops left" });
            if free {
                item.checked = true;
                if !state.off_grid.is_empty() {
                    return fail(item, "normalization left off-grid edges".into());
                }
                if ceil != phi_i {
                    return fail(
                        item,
                        format!("ceil(phi_c) = {ceil} (phi_c = {}) but phi_i = {phi_i}", format_rational(&phi_c)),
                    );
                }
            } else {
                item.note(format!("barbell gap: {}", phi_i as i64 - ceil as i64));
            }
        }
        Suite::CubicZ4 => {
            if !g.is_cubic() || !admissible_barbell_free(g, limits)? {
                return Ok(());
            }
            let colouring = match three_edge_coloring_with(g, limits) {
                Err(Error::NotCubic) => {
                    item.note("skipped: loop");
                    return Ok(());
                }
                r => r?,
            };
            item.checked = true;
            for &k in ks {
                let z = find_nz_zk_flow_with(g, k, limits)?;
                item.note(format!("Z_{k}: {}, colorable: {}", z.is_some(), colouring.is_some()));
                if z.is_some() != colouring.is_some() {
                    return fail(
                        item,
                        format!("Z_{k}-flow {} but 3-edge-colorable {}", z.is_some(), colouring.is_some()),
                    );
                }
            }
        }
        Suite::EvenKExperimental => {
            if !admissible_barbell_free(g, limits)? {
                return Ok(());
            }
            let options = ConversionOptions { experimental_even_k: true, ..Default::default() };
            for &k in ks {
                let Some(z) = find_nz_zk_flow_with(g, k, limits)? else { continue };
                item.checked = true;
                let int = find_nz_k_flow_with(g, k, limits)?.is_some();
                let report = modflow_to_intflow_with(g, &z, k, options, limits)?;
                match report.flow {
                    Some(f) => {
                        if let Some(msg) = integer_congruent(g, &z, &f, k)? {
                            return fail(item, format!("k = {k}: {msg}"));
                        }
                        item.parity(g, &f);
                        item.note(format!("k={k}: converted"));
                    }
                    None => item.note(format!("k={k}: stuck (integer {k}-flow exists: {int})")),
                }
                if !int {
                    item.note(format!("k={k}: Z_k-flow without integer k-flow"));
                }
            }
        }
    }
    Ok(())
}

/// `None` when `f` is a nowhere-zero integer `k`-flow congruent to `z`
/// modulo `k` edge by edge under the same orientation.
fn integer_congruent(g: &SignedGraph, z: &FlowAssignment, f: &FlowAssignment, k: u32) -> Result<Option<String>> {
    if let Some(v) = check_flow(g, f, &FlowKind::Integer { k })? {
        return Ok(Some(format!("output is not an integer {k}-flow: {v}")));
    }
    if f.orientation != z.orientation {
        return Ok(Some("orientation changed".into()));
    }
    for e in 0..g.num_edges() {
        let d = (&f.values[e] - &z.values[e]).to_integer();
        if !d.is_multiple_of(&num_bigint::BigInt::from(k)) {
            return Ok(Some(format!("edge {e} is not congruent mod {k}")));
        }
    }
    debug_assert!(f.values.iter().all(|v| v.abs() >= crate::flow::Rational::one()));
    Ok(None)
}
