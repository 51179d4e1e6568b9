#![no_main]

use libfuzzer_sys::fuzz_target;
use mildcut::series::TruncatedSeries;

fuzz_target!(|data: &[u8]| {
    if data.len() < 2 {
        return;
    }
    let d = 1 + (data[0] % 4) as usize;
    let Ok(s) = std::str::from_utf8(&data[1..]) else {
        return;
    };
    if let Ok(series) = TruncatedSeries::parse(s, d, 5, Some(6)) {
        let again = TruncatedSeries::parse(&series.to_string(), d, 5, None).unwrap();
        assert_eq!(again, series);
    }
});
