#![no_main]

use kgroup_core::subshift::OraclePrefix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = OraclePrefix::parse(text) {
        assert_eq!(OraclePrefix::parse(&p.to_string()).unwrap(), p);
        assert!(p.le(&p));
    }
});
