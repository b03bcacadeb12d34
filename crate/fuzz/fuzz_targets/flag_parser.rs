#![no_main]

use libfuzzer_sys::fuzz_target;
use vacuumlab_cli::args::parse_args;

// NUL-separated argv, program name prepended
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let argv = std::iter::once("vacuumlab").chain(text.split('\0'));
    if let Ok(args) = parse_args(argv) {
        if let Ok(cfg) = args.to_config() {
            let _ = cfg.quadrature();
        }
    }
});
