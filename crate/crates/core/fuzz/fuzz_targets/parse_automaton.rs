#![no_main]

use libfuzzer_sys::fuzz_target;
use synchro::codes::Decoder;
use synchro::Automaton;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(a) = Automaton::parse(text) {
        let again = Automaton::parse(&a.to_text()).expect("printed automaton must parse");
        assert_eq!(a, again);
        if a.n() <= 64 {
            let _ = a.is_synchronizing();
            let _ = Decoder::from_automaton(&a);
        }
    }
});
