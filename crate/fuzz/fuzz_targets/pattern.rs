#![no_main]

use kgroup_core::subshift::Pattern;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if text.len() > 4096 {
        return;
    }
    if let Ok(p) = Pattern::parse(text) {
        let again = Pattern::parse(&p.to_text()).expect("printed patterns parse");
        assert_eq!(again.values(), p.values());
    }
});
