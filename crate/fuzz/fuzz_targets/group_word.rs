#![no_main]

use kgroup_core::groups::GroupCtx;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&which, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let ctx = match which % 4 {
        0 => GroupCtx::z(),
        1 => GroupCtx::s3(),
        2 => GroupCtx::grigorchuk(),
        _ => GroupCtx::product(GroupCtx::z(), GroupCtx::s3()),
    };
    if let Ok(w) = ctx.parse_word(text) {
        let printed = ctx.format_word(&w);
        assert_eq!(ctx.parse_word(&printed).expect("printed words parse"), w);
        if w.len() <= 64 {
            let _ = ctx.is_identity(&w);
        }
    }
    let _ = ctx.parse_element(text);
});
