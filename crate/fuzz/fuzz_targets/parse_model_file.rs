#![no_main]

use libfuzzer_sys::fuzz_target;

use cherngate::manifold::ingest_str;

fuzz_target!(|data: &[u8]| {
    if data.len() > 2048 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(model) = ingest_str(s) {
        // an accepted model is fully validated
        model.validate().expect("accepted models validate");
        let _ = model.h2_generates();
    }
});
