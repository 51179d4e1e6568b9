#![no_main]

use libfuzzer_sys::fuzz_target;
use mildcut::magnus::{expand, GroupWord};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(w) = s.parse::<GroupWord>() else {
        return;
    };
    let d = w.max_generator() as usize;
    if (1..=6).contains(&d) {
        let _ = expand(&w, 3, d, 4);
    }
});
