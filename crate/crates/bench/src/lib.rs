//! Benchmark fixtures.

use banach_core::Space;

/// The built-in planes benchmarked by every group.
pub fn battery() -> Vec<(&'static str, Space)> {
    vec![
        ("l2", Space::l2()),
        ("l1", Space::l1()),
        ("linf", Space::linf()),
        ("xmu-1.2", Space::xmu(1.2).expect("valid mu")),
        ("hexagon", Space::hexagon()),
    ]
}
