//! Operation counting.
//!
//! Every arithmetic operation routed through a field context with an attached
//! [`OpCounter`] is tallied, as is every application of a factor block
//! `F_j^{m_j}` to a vector. Named phases record the counts accumulated while
//! a closure runs, so one pipeline run can be broken down into its stages.
//!
//! Totals are kept in relaxed atomics: the final values do not depend on how
//! concurrent increments interleave.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

/// Counts for one phase (or for a whole run).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseCounts {
    pub field_ops: u64,
    pub block_apps: u64,
}

impl PhaseCounts {
    fn delta(self, earlier: PhaseCounts) -> PhaseCounts {
        PhaseCounts {
            field_ops: self.field_ops - earlier.field_ops,
            block_apps: self.block_apps - earlier.block_apps,
        }
    }

    fn accumulate(&mut self, other: PhaseCounts) {
        self.field_ops += other.field_ops;
        self.block_apps += other.block_apps;
    }
}

/// Snapshot of a counter: totals plus the per-phase breakdown.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostProfile {
    pub field_ops: u64,
    pub block_apps: u64,
    pub phases: BTreeMap<String, PhaseCounts>,
}

impl CostProfile {
    /// Counts recorded for `phase`, zero if the phase never ran.
    pub fn phase(&self, phase: &str) -> PhaseCounts {
        self.phases.get(phase).copied().unwrap_or_default()
    }

    /// Sums the counts of every phase whose name starts with `prefix`.
    pub fn phase_prefix(&self, prefix: &str) -> PhaseCounts {
        let mut total = PhaseCounts::default();
        for (name, counts) in &self.phases {
            if name.starts_with(prefix) {
                total.accumulate(*counts);
            }
        }
        total
    }

    /// Adds another profile into this one. Merging is commutative.
    pub fn merge(&mut self, other: &CostProfile) {
        self.field_ops += other.field_ops;
        self.block_apps += other.block_apps;
        for (name, counts) in &other.phases {
            self.phases.entry(name.clone()).or_default().accumulate(*counts);
        }
    }
}

#[derive(Debug, Default)]
pub struct OpCounter {
    field_ops: AtomicU64,
    block_apps: AtomicU64,
    phases: Mutex<BTreeMap<String, PhaseCounts>>,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn shared() -> Arc<Self> {
        Arc::new(Self::new())
    }

    #[inline]
    pub fn add_field_ops(&self, k: u64) {
        self.field_ops.fetch_add(k, Ordering::Relaxed);
    }

    #[inline]
    pub fn add_block_apps(&self, k: u64) {
        self.block_apps.fetch_add(k, Ordering::Relaxed);
    }

    pub fn field_ops(&self) -> u64 {
        self.field_ops.load(Ordering::Relaxed)
    }

    pub fn block_apps(&self) -> u64 {
        self.block_apps.load(Ordering::Relaxed)
    }

    pub fn totals(&self) -> PhaseCounts {
        PhaseCounts {
            field_ops: self.field_ops(),
            block_apps: self.block_apps(),
        }
    }

    /// Runs `f` and attributes the counts it produced to `phase`.
    ///
    /// Repeated phases accumulate. Phases may nest; the outer phase includes
    /// the inner one's counts.
    pub fn measure<R>(&self, phase: &str, f: impl FnOnce() -> R) -> R {
        let before = self.totals();
        let out = f();
        let delta = self.totals().delta(before);
        self.phases
            .lock()
            .expect("phase map poisoned")
            .entry(phase.to_string())
            .or_default()
            .accumulate(delta);
        out
    }

    pub fn profile(&self) -> CostProfile {
        CostProfile {
            field_ops: self.field_ops(),
            block_apps: self.block_apps(),
            phases: self.phases.lock().expect("phase map poisoned").clone(),
        }
    }

    /// Clears all counts. Only meaningful between runs.
    pub fn reset(&self) {
        self.field_ops.store(0, Ordering::Relaxed);
        self.block_apps.store(0, Ordering::Relaxed);
        self.phases.lock().expect("phase map poisoned").clear();
    }
}

/// Runs `run` against a fresh counter and returns its result with the
/// resulting profile.
pub fn measure<R>(run: impl FnOnce(&Arc<OpCounter>) -> R) -> (R, CostProfile) {
    let counter = OpCounter::shared();
    let out = run(&counter);
    (out, counter.profile())
}

/// `ceil(log2 q)` for `q >= 1`.
pub fn ceil_log2(q: usize) -> u32 {
    assert!(q > 0, "ceil_log2 of zero");
    usize::BITS - (q - 1).leading_zeros()
}

/// Upper bound on factor-block applications for the binary splitting tree
/// over `q` factors.
pub fn split_tree_block_bound(q: usize) -> u64 {
    q as u64 * ceil_log2(q) as u64
}

/// Factor-block applications of the sequential cofactor computation.
pub fn sequential_block_count(q: usize) -> u64 {
    (q * q.saturating_sub(1)) as u64
}
