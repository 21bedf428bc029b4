#![no_main]

use dment::io::{read_sidecar, write_sidecar};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(sidecar) = read_sidecar(data) else {
        return;
    };
    assert_eq!(sidecar.schema, 1);
    let mut out = Vec::new();
    write_sidecar(&mut out, &sidecar).expect("writing to memory succeeds");
    let _ = read_sidecar(out.as_slice());
});
