#![no_main]

use libfuzzer_sys::fuzz_target;

use cherngate::poly::{GradedPoly, PolyContext};

fuzz_target!(|data: &[u8]| {
    if data.len() > 4096 {
        return;
    }
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let ctx = PolyContext::weight_vars(3, 6);
    if let Ok(p) = GradedPoly::parse(&ctx, s) {
        // rendering must re-parse to the same polynomial
        let rendered = p.to_string();
        let back = GradedPoly::parse(&ctx, &rendered).expect("rendered form parses");
        assert_eq!(p, back);
    }
});
