//! The CSV reader must never panic. Rendering quantizes values to ten
//! significant digits, so a parse/render cycle is only a fixed point from
//! the second render onward; that fixed point is asserted.

#![no_main]

use libfuzzer_sys::fuzz_target;
use sdc_optics::io::{parse_profile_csv, render_profile_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(profile) = parse_profile_csv(text) {
        let rendered = render_profile_csv(&profile);
        if let Ok(again) = parse_profile_csv(&rendered) {
            assert_eq!(render_profile_csv(&again), rendered);
        }
    }
});
