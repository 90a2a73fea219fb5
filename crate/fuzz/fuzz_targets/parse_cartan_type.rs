#![no_main]

use libfuzzer_sys::fuzz_target;

use cherngate::root_system::{CartanType, RootDatum};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(ctype) = s.parse::<CartanType>() {
        // a valid type must always build and round-trip through Display
        let datum = RootDatum::build(ctype.clone()).expect("valid type builds");
        assert_eq!(datum.num_positive(), ctype.num_positive_roots());
        let rendered = ctype.to_string();
        assert_eq!(rendered.parse::<CartanType>().unwrap(), ctype);
    }
});
