#![no_main]

use kgroup_core::automata::{membership_test, AutomatonSpec, ExactOracle};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = AutomatonSpec::from_json(text) {
        assert_eq!(AutomatonSpec::from_json(&spec.to_json()).unwrap(), spec);
        let _ = membership_test(&spec, 2, 8, &ExactOracle(spec.g()));
    }
});
