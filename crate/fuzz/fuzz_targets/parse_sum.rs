#![no_main]

use libfuzzer_sys::fuzz_target;
use semisum::parse_sum_file;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_sum_file(text) {
        // constructions must either validate or report a structured error
        let _ = file.clone().into_plonka().map(|sys| sys.validate());
        let _ = file.into_lallement().map(|data| data.validate());
    }
});
