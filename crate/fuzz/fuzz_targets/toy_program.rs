#![no_main]

use kgroup_core::recursion::{run_program, ToyProgram};
use kgroup_core::subshift::OraclePrefix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = ToyProgram::parse(text) {
        assert_eq!(ToyProgram::parse(&p.to_text()).unwrap(), p);
        let oracle = OraclePrefix::parse("0110").unwrap();
        let _ = run_program(&p, 3, &oracle, 1000);
    }
});
