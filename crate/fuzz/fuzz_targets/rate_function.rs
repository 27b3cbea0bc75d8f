#![no_main]

use kgroup_core::recursion::RateFunction;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = text.parse::<RateFunction>() {
        assert_eq!(r.to_string().parse::<RateFunction>().unwrap(), r);
        let _ = r.eval(u64::MAX);
        let _ = r.eval(17);
    }
});
