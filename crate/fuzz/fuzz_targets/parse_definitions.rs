//! The definition-file parser must never panic on arbitrary input; errors
//! are expected, panics are not.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let _ = engel_cli::parse_definitions(&text);
});
