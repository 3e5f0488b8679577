use std::sync::OnceLock;

/// Search budgets shared by the exhaustive routines.
///
/// Every budget is a hard cap: exceeding it aborts with
/// [`crate::Error::ResourceCap`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Backtracking nodes per flow / coloring search.
    pub search_nodes: u64,
    /// Circuits enumerated by the long-barbell search.
    pub circuits: u64,
    /// DFS states visited per ditrail / dipath search.
    pub ditrail_states: u64,
    /// Largest edge count accepted by the orientation sweep behind the
    /// circular flow number.
    pub circular_max_edges: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            search_nodes: 2_000_000_000,
            circuits: 1_000_000,
            ditrail_states: 10_000_000,
            circular_max_edges: 20,
        }
    }
}

impl Limits {
    /// Defaults, with `SG_RESOURCE_CAP` (if set to an integer) overriding the
    /// node, circuit and ditrail-state caps.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var("SG_RESOURCE_CAP")
            .ok()
            .and_then(|s| s.trim().parse::<u64>().ok())
        {
            limits.search_nodes = cap;
            limits.circuits = cap;
            limits.ditrail_states = cap;
        }
        limits
    }

    /// Process-wide limits, read from the environment once.
    pub fn global() -> &'static Limits {
        static GLOBAL: OnceLock<Limits> = OnceLock::new();
        GLOBAL.get_or_init(Limits::from_env)
    }
}
