//! Inputs shared by the benchmarks.

use dgres_core::combin::{build_family, edge_ideal, FamilySpec};
use dgres_core::MonomialIdeal;

/// Edge ideal of a named family, e.g. `C6` or `T4(2;1,1)`.
pub fn family_ideal(spec: &str) -> MonomialIdeal {
    let spec: FamilySpec = spec.parse().expect("valid family");
    edge_ideal(&build_family(&spec).expect("buildable family"))
}
