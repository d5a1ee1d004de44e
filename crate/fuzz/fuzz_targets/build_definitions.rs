//! Full pipeline: parse untrusted definitions and build the groups under a
//! small cap. Construction errors are expected; panics and runaway memory
//! are not.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let Ok(defs) = engel_cli::parse_definitions(&text) else {
        return;
    };
    if defs.len() > 8 {
        return;
    }
    let _ = engel_cli::build(&defs, Some(2_000));
});
