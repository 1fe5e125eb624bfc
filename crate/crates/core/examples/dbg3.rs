use realmod_core::backend::BackendKind;
use realmod_core::report::RunConfig;
use realmod_core::suites::run;
use std::time::Instant;
fn main() {
    for backend in [BackendKind::Scott, BackendKind::K2] {
        let t0 = Instant::now();
        let config = RunConfig {
            suites: vec!["ehp".to_string()],
            backend,
            ..RunConfig::default()
        };
        let r = run(&config);
        println!("{:?}: unexpected={} in {:?}", backend, r.unexpected, t0.elapsed());
        if !r.exit_ok() {
            for it in r.items.iter().filter(|i| !i.ok) {
                println!("  [FAIL] {}/{} -> {} {}", it.suite, it.item, it.verdict, it.detail.clone().unwrap_or_default());
            }
        }
    }
}
