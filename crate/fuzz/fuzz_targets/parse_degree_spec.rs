#![no_main]

use libfuzzer_sys::fuzz_target;
use mildcut::poincare::{mild_poincare, DegreeSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(spec) = s.parse::<DegreeSpec>() {
        if spec.finite().len() < 64 {
            let _ = mild_poincare(3, &spec, 8);
        }
    }
});
