#![no_main]

use dment::io::parse_env;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok([c0, c1]) = parse_env("--env", text) {
        let _ = dment::env_qubit(c0, c1);
    }
});
