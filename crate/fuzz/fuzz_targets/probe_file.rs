#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    thread_local! {
        static CTX: realmod_core::heyting::Ctx = realmod_core::heyting::Ctx::new(
            realmod_core::backend::Backend::term_model(),
        );
    }
    if let Ok(text) = std::str::from_utf8(data) {
        CTX.with(|ctx| {
            let _ = realmod_core::suites::parse_probe_file(text, ctx);
        });
    }
});
