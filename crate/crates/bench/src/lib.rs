//! Shared fixtures for the stage benchmarks.

use unshuffle_core::instance::{generate_instance, ProblemInstance};
use unshuffle_core::moment::{assemble_sdp, default_relaxation_order, SdpProblem};
use unshuffle_core::polysys::build_system;

/// A deterministic clean instance for the given dimension.
pub fn fixture(n: usize, m: usize) -> ProblemInstance {
    generate_instance(n, m, None, 42).expect("valid benchmark dimensions")
}

/// The assembled relaxation of the default system for an instance.
pub fn assembled(instance: &ProblemInstance) -> SdpProblem {
    let system = build_system(&instance.a, instance.y.as_slice(), instance.n + 1)
        .expect("system within measurement count");
    assemble_sdp(&system, instance.n, default_relaxation_order(instance.n))
        .expect("relaxation order fits the system")
}
