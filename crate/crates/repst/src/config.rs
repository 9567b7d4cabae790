//! Resource limits. Every cap the library enforces lives here, with
//! environment-variable overrides (`REPST_*`) picked up on first use.

use serde::Serialize;
use std::sync::OnceLock;

#[derive(Debug, Clone, Serialize)]
pub struct Limits {
    /// Largest ground set for set-partition enumeration.
    pub partition_enumeration: usize,
    /// Largest hom-space diagram basis that may be materialized, as a Bell
    /// number bound on Bell(a+b). Default Bell(8).
    pub bell_hom: u64,
    /// Largest k for the distinct-index idempotent e_k.
    pub distinct_idempotent: usize,
    /// Largest degree for exhaustive subgroup enumeration.
    pub subgroup_degree: usize,
    /// Largest dimension for equivariant-algebra simplicity deciders.
    pub equivariant_dim: usize,
    /// Bound on n^(a+b) for fiber matrices.
    pub fiber_budget: u64,
    /// Randomized embedding-search attempts per candidate level.
    pub retraction_attempts: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            partition_enumeration: 12,
            bell_hom: 4140,
            distinct_idempotent: 5,
            subgroup_degree: 6,
            equivariant_dim: 300,
            fiber_budget: 1_000_000,
            retraction_attempts: 8,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let mut l = Limits::default();
        let get = |name: &str| std::env::var(name).ok().and_then(|v| v.parse::<u64>().ok());
        if let Some(v) = get("REPST_ENUM_LIMIT") {
            l.partition_enumeration = v as usize;
        }
        if let Some(v) = get("REPST_BELL_LIMIT") {
            l.bell_hom = v;
        }
        if let Some(v) = get("REPST_EK_LIMIT") {
            l.distinct_idempotent = v as usize;
        }
        if let Some(v) = get("REPST_SUBGROUP_DEGREE") {
            l.subgroup_degree = v as usize;
        }
        if let Some(v) = get("REPST_EQUIV_DIM") {
            l.equivariant_dim = v as usize;
        }
        if let Some(v) = get("REPST_FIBER_BUDGET") {
            l.fiber_budget = v;
        }
        if let Some(v) = get("REPST_RETRACTION_ATTEMPTS") {
            l.retraction_attempts = v as u32;
        }
        l
    }
}

static LIMITS: OnceLock<Limits> = OnceLock::new();

/// The process-wide limits, initialized from the environment on first use.
pub fn limits() -> &'static Limits {
    LIMITS.get_or_init(Limits::from_env)
}
