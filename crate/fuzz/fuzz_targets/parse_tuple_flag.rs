#![no_main]

use libfuzzer_sys::fuzz_target;

use cherngate::gate::{check_flag_weights, parse_flag_tuple, Conventions};
use cherngate::manifold::FlagTarget;

fuzz_target!(|data: &[u8]| {
    if data.len() > 2048 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let target = FlagTarget::new("A2".parse().unwrap(), vec![]).unwrap();
    if let Ok(classes) = parse_flag_tuple(&target, s) {
        let conv = Conventions::calibrated();
        let _ = check_flag_weights(&target, &classes, &conv, 100);
    }
});
