//! Runs the exhaustive suite and prints the reports.
//!
//! `cargo run --release -p dnb-core --example verify_all -- 36`

use dnb_core::verify::{check_equivalence, check_invariants, check_worked_examples, DEFAULT_MAX_SIZE};

fn main() {
    let max = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_SIZE);
    for report in [check_worked_examples(), check_equivalence(max), check_invariants(max)] {
        print!("{report}");
    }
}
