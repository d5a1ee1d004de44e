//! Accepted definitions must render back to text that reparses to the same
//! constructors.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let Ok(defs) = engel_cli::parse_definitions(&text) else {
        return;
    };
    let rendered: String = defs.iter().map(|d| format!("{d}\n")).collect();
    let reparsed =
        engel_cli::parse_definitions(&rendered).expect("rendered definitions must reparse");
    assert_eq!(defs.len(), reparsed.len());
    for (a, b) in defs.iter().zip(&reparsed) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.ctor, b.ctor, "rendered: {rendered}");
    }
});
