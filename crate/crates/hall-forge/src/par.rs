//! Toggleable data-parallel mapping.
//!
//! Heavy inner loops (structure-constant batches, identity sweeps) funnel
//! through [`map_collect`].  When the crate is built with the `parallel`
//! feature the work is distributed with rayon; a runtime switch can force
//! sequential execution (the CLI default) so that timings of both strategies
//! can be compared on identical binaries.  Without the feature the fallback
//! is a plain sequential map and the switch is inert.

use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Runtime switch; meaningful only when the `parallel` feature is compiled
/// in.  Defaults to on so library users get parallelism without ceremony.
static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Enables or disables data-parallel execution at runtime.  A no-op unless
/// the crate was built with the `parallel` feature.
pub fn set_parallel(on: bool) {
    PARALLEL.store(on, Ordering::Relaxed);
}

/// True iff calls to [`map_collect`] will actually fan out across threads.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::Relaxed)
}

/// Maps `f` over `items`, preserving order; parallel when enabled.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    if PARALLEL.load(Ordering::Relaxed) {
        items.into_par_iter().map(f).collect()
    } else {
        items.into_iter().map(f).collect()
    }
}

/// Maps `f` over `items`, preserving order; parallel when enabled.
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Send + Sync,
{
    items.into_iter().map(f).collect()
}

// =============================== Tests ===============================
