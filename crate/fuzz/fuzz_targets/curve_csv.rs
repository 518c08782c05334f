#![no_main]

use hhck::export::{parse_curve_csv, write_curve_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((meta, path)) = parse_curve_csv(text) {
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &meta, &path).unwrap();
        let again =
            parse_curve_csv(std::str::from_utf8(&buf).unwrap()).expect("written curve parses");
        assert_eq!(again, (meta, path));
    }
});
