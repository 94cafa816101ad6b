#![no_main]

use libfuzzer_sys::fuzz_target;
use synchro::codes::{Decoder, PrefixCode};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(code) = PrefixCode::parse(text) {
        assert_eq!(
            PrefixCode::parse(&code.to_text()).expect("printed code must parse"),
            code
        );
        if code.len() <= 256 {
            let d = Decoder::from_code(&code).expect("valid code has a decoder");
            assert_eq!(d.code().expect("decoder labels form a code"), code);
        }
    }
});
