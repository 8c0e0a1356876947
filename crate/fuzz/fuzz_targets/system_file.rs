#![no_main]

use libfuzzer_sys::fuzz_target;
use shadowable::io::SystemFile;
use shadowable::shadow::{ShadowConfig, Shadowing};

fuzz_target!(|data: &[u8]| {
    let Ok(file) = SystemFile::parse_bytes(data) else { return };
    let again = SystemFile::parse(&file.to_json()).expect("serialized files parse");
    assert_eq!(again, file);
    let Ok(sys) = file.to_system() else { return };
    if sys.len() > 64 {
        return;
    }
    let config = ShadowConfig { state_cap: 10_000, short_circuit: true };
    let engine = Shadowing::with_config(&sys, config);
    let cands = sys.space().candidate_distances();
    let eps = cands[cands.len() / 2];
    if let Ok(set) = engine.shadowable_points(&eps, &eps) {
        for x in 0..sys.len() {
            let v = engine.is_shadowable(x, &eps, &eps).expect("same cap, same scales");
            assert_eq!(v.shadowable, set.contains(x));
        }
    }
    let _ = sys.chain_classes(&eps);
    let _ = sys.distality_margin();
});
