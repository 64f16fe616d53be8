#![no_main]

use libfuzzer_sys::fuzz_target;

// Only argument parsing: executing arbitrary commands could allocate huge
// state vectors or write files.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let argv = std::iter::once("grover").chain(text.split(['\n', ' ']));
    let _ = grover_core::cli::parse_args(argv);
});
