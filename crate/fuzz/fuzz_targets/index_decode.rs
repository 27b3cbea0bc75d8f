#![no_main]

use kgroup_core::groups::GroupCtx;
use kgroup_core::kgroup::KTemplate;
use kgroup_core::recursion::MachineEnumeration;
use libfuzzer_sys::fuzz_target;
use num_bigint::BigUint;

fuzz_target!(|data: &[u8]| {
    if data.len() > 64 {
        return;
    }
    let n = BigUint::from_bytes_le(data);
    let _ = MachineEnumeration::program(&n);
    let t = KTemplate::new(GroupCtx::z(), GroupCtx::s3());
    let w = t.word_at(&n);
    assert_eq!(t.index_of(&w), n);
    let g = GroupCtx::grigorchuk();
    assert_eq!(g.word_index(&g.enumerate_words(&n)), n);
});
