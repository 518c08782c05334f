#![no_main]

use hhck::stroke::parse_strokes;
use hhck::{GridPoint, StrokeString};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&head, rest)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let Ok(strokes) = parse_strokes(text) else {
        return;
    };
    let side = 1u32 << (head & 7);
    let origin = GridPoint::new(u32::from(head >> 3) % side, 0);
    let s = StrokeString::new(origin, strokes);
    if let Ok(cells) = s.walk(side) {
        assert_eq!(cells.len(), s.len() + 1);
        assert_eq!(StrokeString::from_cells(&cells).unwrap(), s);
    }
    let _ = s.to_path(side);
});
