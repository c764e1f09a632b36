#![no_main]

use libfuzzer_sys::fuzz_target;
use semisum::Signature;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(sig) = Signature::parse(text) {
        let reparsed = Signature::parse(&sig.to_string()).expect("own output parses");
        assert_eq!(reparsed, sig);
    }
});
