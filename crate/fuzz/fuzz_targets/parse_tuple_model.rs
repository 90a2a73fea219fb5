#![no_main]

use libfuzzer_sys::fuzz_target;

use cherngate::gate::{check_projective, parse_model_tuple};
use cherngate::manifold::projective_space;

fuzz_target!(|data: &[u8]| {
    if data.len() > 2048 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let p3 = projective_space(3);
    if let Ok(tuple) = parse_model_tuple(&p3, s) {
        // accepted tuples evaluate without panicking
        let _ = check_projective(3, &tuple);
    }
});
