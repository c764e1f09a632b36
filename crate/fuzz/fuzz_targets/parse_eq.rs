#![no_main]

use libfuzzer_sys::fuzz_target;
use semisum::AxiomSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ax) = AxiomSet::parse(text, "fuzz", None) {
        let reparsed = AxiomSet::parse(&ax.to_string(), "fuzz", None).expect("own output parses");
        assert_eq!(reparsed.identities, ax.identities);
        assert_eq!(reparsed.quasi_identities, ax.quasi_identities);
    }
});
