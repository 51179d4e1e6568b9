#![no_main]

use libfuzzer_sys::fuzz_target;
use mildcut::arithmetic::{parse_prime_list, Constraint};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(c) = s.parse::<Constraint>() {
            assert_eq!(c.to_string().parse::<Constraint>().unwrap(), c);
        }
        let _ = parse_prime_list(s);
    }
});
