#![no_main]

use dment::io::parse_axis;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(axis) = parse_axis("--theta-range", text) {
        assert!(axis.step > 0.0 && axis.start <= axis.stop);
        assert!(axis.len() <= dment::scan::MAX_AXIS_POINTS);
    }
});
