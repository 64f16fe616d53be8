#![no_main]

use grover_core::cli::{AnalyticReport, CompareReport, PhaseCheckReport, RunReport};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = RunReport::from_json(text);
    let _ = AnalyticReport::from_json(text);
    let _ = CompareReport::from_json(text);
    let _ = PhaseCheckReport::from_json(text);
});
