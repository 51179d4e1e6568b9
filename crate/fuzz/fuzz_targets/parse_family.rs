#![no_main]

use libfuzzer_sys::fuzz_target;
use mildcut::combinatorics::{
    is_combinatorially_free, FreenessOptions, MonomialFamily, ParamMonomial,
};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let _ = s.parse::<ParamMonomial>();
    if let Ok(family) = MonomialFamily::parse(s, 6) {
        // unsupported parametric shapes are reported as errors, never panics
        let _ = is_combinatorially_free(&family, FreenessOptions::default());
    }
});
