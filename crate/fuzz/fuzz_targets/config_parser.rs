#![no_main]

use libfuzzer_sys::fuzz_target;
use vacuumlab_cli::parse_config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = parse_config(text) {
        // validation paths that do no numerics
        let _ = cfg.command();
        let _ = cfg.quadrature();
        let mut c = cfg.clone();
        if let (Some(p), Some(v)) = (cfg.parameter.as_deref(), cfg.values.as_ref()) {
            for &x in v.iter().take(8) {
                let _ = c.set_number(p, x);
            }
        }
        let _ = cfg.overlay(c);
    }
});
