//! The parser must never panic, and anything it accepts must survive a
//! render/parse cycle unchanged: floats print in round-trip form.

#![no_main]

use libfuzzer_sys::fuzz_target;
use sdc_optics::config::{parse_config, render_config};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = parse_config(text) {
        let rendered = render_config(&config);
        let again = parse_config(&rendered).expect("rendered config parses");
        assert_eq!(again, config);
    }
});
