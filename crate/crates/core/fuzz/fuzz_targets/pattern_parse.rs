#![no_main]

use grover_core::grover::{OracleStyle, Pattern};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(pattern) = text.parse::<Pattern>() {
        assert_eq!(pattern.to_string(), text);
        assert_eq!(pattern.len(), text.len());
    }
    let _ = text.parse::<OracleStyle>();
    let _ = grover_core::bits::label_to_index(text);
});
