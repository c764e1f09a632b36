#![no_main]

use libfuzzer_sys::fuzz_target;
use semisum::algebra::{parse_ualg_file, write_ualg};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((sig, algebras)) = parse_ualg_file(text) {
        // anything accepted must survive a write/parse round trip
        let rewritten = write_ualg(&sig, &algebras);
        let (sig2, algebras2) = parse_ualg_file(&rewritten).expect("own output parses");
        assert_eq!(sig, sig2);
        assert_eq!(algebras, algebras2);
    }
});
