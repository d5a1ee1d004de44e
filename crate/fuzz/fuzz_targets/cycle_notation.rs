//! Cycle-notation parser on arbitrary text and degrees.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.is_empty() {
        return;
    }
    // first byte picks the degree, the rest is the cycle list
    let degree = (data[0] as u16).max(1);
    let text = String::from_utf8_lossy(&data[1..]);
    let _ = engel_cli::defs::parse_cycle_list(&text, degree);
    let _ = engel_cli::defs::parse_word_text(&text);
});
