#![no_main]

use hhck::kernel::parse_kernel;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(kernel) = parse_kernel("fuzz", text) {
        let again = parse_kernel("fuzz", &kernel.to_text()).expect("rendered kernel parses");
        assert_eq!(again.path(), kernel.path());
    }
});
