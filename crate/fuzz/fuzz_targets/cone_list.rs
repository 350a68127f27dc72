#![no_main]

use libfuzzer_sys::fuzz_target;
use pdbarv::format::{parse_cone_list, parse_run_record};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((dim, cones)) = parse_cone_list(text) {
        assert!(cones.iter().all(|c| c.generators.rows() == dim && c.generators.cols() == dim));
    }
    if let Ok(rec) = parse_run_record(text) {
        let json = rec.to_json();
        let again = parse_run_record(&json).expect("emitted record parses");
        assert_eq!(again.to_json(), json);
    }
});
