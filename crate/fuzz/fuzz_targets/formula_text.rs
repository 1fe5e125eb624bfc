#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    thread_local! {
        static SIG: realmod_core::semantics::Signature = {
            let ctx = realmod_core::heyting::Ctx::new(
                realmod_core::backend::Backend::term_model(),
            );
            realmod_core::models::arith::arith_structure(4, &ctx).sig
        };
    }
    if let Ok(text) = std::str::from_utf8(data) {
        SIG.with(|sig| {
            let _ = realmod_core::formula_syntax::parse_formula(text, sig);
            let _ = realmod_core::formula_syntax::parse_corpus(text, sig);
        });
    }
});
