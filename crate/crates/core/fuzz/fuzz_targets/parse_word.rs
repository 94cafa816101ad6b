#![no_main]

use libfuzzer_sys::fuzz_target;
use synchro::Word;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(w) = Word::parse_machine(text) {
        assert_eq!(
            Word::parse_machine(&w.to_machine()).expect("printed word must parse"),
            w
        );
    }
});
