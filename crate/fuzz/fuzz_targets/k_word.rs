#![no_main]

use kgroup_core::kgroup::KTemplate;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((t, w)) = KTemplate::parse_word(text) {
        let (t2, w2) = KTemplate::parse_word(&t.format_word(&w)).expect("printed K-words parse");
        assert!(t2 == t && w2 == w);
        assert_eq!(t.word_at(&t.index_of(&w)), w);
    }
});
