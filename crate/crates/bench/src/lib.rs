//! Shared fixtures for the criterion benchmarks.

use compatamg::{default_splitting, generate, CFPartition, Matrix, ProblemKind, ProblemSpec, SplitPolicy};

/// Upwind advection of size `n` with alternating C-points.
pub fn advection_fixture(n: usize) -> (Matrix, CFPartition) {
    let a = generate(&ProblemSpec::new(ProblemKind::Advection1D, n)).expect("valid size");
    let part = default_splitting(n, SplitPolicy::Alternate).expect("valid size");
    (a, part)
}
