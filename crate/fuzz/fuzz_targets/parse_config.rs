#![no_main]

use fracbvp_cli::RunConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    if let Ok(cfg) = RunConfig::parse(&text) {
        let keys: Vec<String> = cfg.keys().map(str::to_owned).collect();
        for key in &keys {
            let _ = cfg.f64(key);
            let _ = cfg.usize(key);
            let _ = cfg.range(key);
        }
    }
});
