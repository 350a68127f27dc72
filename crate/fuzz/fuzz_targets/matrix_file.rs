#![no_main]

use libfuzzer_sys::fuzz_target;
use pdbarv::format::{parse_matrix_file, write_matrix_file};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_matrix_file(text) {
        let again = parse_matrix_file(&write_matrix_file(&m)).expect("written matrix file parses");
        assert_eq!(again, m);
    }
});
