#![no_main]

use libfuzzer_sys::fuzz_target;
use shadowable::rational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(list) = rational::parse_list(text) {
        assert!(list.windows(2).all(|w| w[0] < w[1]));
        let joined: Vec<String> = list.iter().map(rational::format).collect();
        assert_eq!(rational::parse_list(&joined.join(",")).expect("reparse"), list);
    }
});
