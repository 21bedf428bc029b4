#![no_main]

use dment::io::{read_sweep_csv, write_sweep_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(records) = read_sweep_csv(data) else {
        return;
    };
    let mut out = Vec::new();
    write_sweep_csv(&mut out, &records).expect("writing to memory succeeds");
    let again = read_sweep_csv(out.as_slice()).expect("written tables parse");
    assert_eq!(again, records);
});
