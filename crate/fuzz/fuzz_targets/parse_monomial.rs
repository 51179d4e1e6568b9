#![no_main]

use libfuzzer_sys::fuzz_target;
use mildcut::series::Monomial;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = s.parse::<Monomial>() {
            assert_eq!(m.to_string().parse::<Monomial>().unwrap(), m);
        }
    }
});
