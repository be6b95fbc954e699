#![no_main]

use fracbvp_cli::Range;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = text.parse::<Range>() {
        let v = r.values();
        assert_eq!(v.len(), r.count);
        assert_eq!(r.to_string().parse::<Range>(), Ok(r));
    }
});
