#![no_main]

use dment::io::parse_measures;
use dment::repro::Target;
use dment::{CouplingSite, NegativityConvention};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(measures) = parse_measures("--measures", text) {
        for m in measures {
            assert_eq!(m.name().parse::<dment::Measure>().unwrap(), m);
        }
    }
    let _ = text.parse::<Target>();
    let _ = text.parse::<CouplingSite>();
    let _ = text.parse::<NegativityConvention>();
});
