#![no_main]

use libfuzzer_sys::fuzz_target;
use semisum::Partition;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(partition) = Partition::parse(text) {
        let reparsed = Partition::parse(&partition.to_string()).expect("own output parses");
        assert_eq!(reparsed, partition);
    }
});
