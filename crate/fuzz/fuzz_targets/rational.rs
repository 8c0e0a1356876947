#![no_main]

use libfuzzer_sys::fuzz_target;
use shadowable::rational;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = rational::parse(text) {
        let printed = rational::format(&r);
        assert_eq!(rational::parse(&printed).expect("formatted rationals parse"), r);
        assert_eq!(rational::parse_scale(text).is_ok(), r >= rational::int(0));
    }
});
