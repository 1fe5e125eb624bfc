#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(term) = realmod_core::comb::parse_term(text) {
            // printing and reparsing a parsed term must round-trip
            let printed = term.to_string();
            let again = realmod_core::comb::parse_term(&printed)
                .expect("printed term reparses");
            assert_eq!(term, again);
        }
    }
});
