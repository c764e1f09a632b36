#![no_main]

use libfuzzer_sys::fuzz_target;
use semisum::{Signature, Term};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let sig = Signature::parse("mul 2\nf 3\ninv 1").unwrap();
    if let Ok(term) = Term::parse(text, &sig) {
        term.validate(&sig).expect("parsed terms validate");
        let reparsed = Term::parse(&term.to_string(), &sig).expect("own output parses");
        assert_eq!(reparsed, term);
        let vars = term.variables();
        assert!(term.is_member_tn(vars.len()));
    }
});
