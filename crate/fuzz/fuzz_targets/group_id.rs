#![no_main]

use kgroup_core::groups::GroupCtx;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ctx) = GroupCtx::parse(text) {
        let again = GroupCtx::parse(ctx.name()).expect("printed ids parse");
        assert_eq!(again.generators(), ctx.generators());
    }
});
