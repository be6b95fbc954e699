#![no_main]

use fracbvp_cli::parse_expr;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    match parse_expr(text, "u") {
        Ok(e) => {
            // printing must round-trip, and evaluation must not panic
            let printed = e.display("u").to_string();
            assert_eq!(parse_expr(&printed, "u").as_ref(), Ok(&e), "{printed}");
            for x in [0.0, 0.5, 1.0, 1e6] {
                let _ = e.eval(x);
            }
        }
        Err(err) => assert!(err.offset <= text.len()),
    }
});
