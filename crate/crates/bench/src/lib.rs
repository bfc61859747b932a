//! Fixed inputs shared by the benchmarks.

use adhm_core::rep::{sample_stable, DimVector};
use adhm_core::{CaseKind, EnhancedRep, Exact};

/// One stable point per case, conjugated by a random basis change.
pub fn case_points(seed: u64) -> Vec<(CaseKind, EnhancedRep<Exact>)> {
    CaseKind::ALL
        .iter()
        .map(|&k| {
            let s = sample_stable::<Exact>(DimVector::N131, k, true, seed).expect("sampler");
            (k, s.rep)
        })
        .collect()
}
