#![no_main]

use libfuzzer_sys::fuzz_target;
use realmod_core::ehp::sexp;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(d) = sexp::parse_derivation(text) {
            // validation must not panic, and well-formed derivations
            // round-trip through the printer
            let _ = d.validate(&[]);
            let printed = sexp::derivation_to_string(&d);
            let again = sexp::parse_derivation(&printed).expect("reparses");
            assert_eq!(d, again);
        }
        let _ = sexp::parse_proof_corpus(text);
    }
});
