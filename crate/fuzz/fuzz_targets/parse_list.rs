#![no_main]

use dment::io::parse_list;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&len, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(values) = parse_list("--w", text, (len % 5) as usize) {
        assert_eq!(values.len(), (len % 5) as usize);
        assert!(values.iter().all(|v| v.is_finite()));
        if values.len() == 3 {
            let _ = dment::w_state(values[0], values[1], values[2]);
            let _ = dment::states::normalize_real(&values);
        }
    }
});
