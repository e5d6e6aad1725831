#![no_main]

use ihq_core::instances::{load_instance, save_instance};
use libfuzzer_sys::fuzz_target;

// Whatever loads must survive save → load unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(inst) = load_instance(text) {
        let saved = save_instance(&inst);
        let again = load_instance(&saved).expect("saved documents load");
        assert_eq!(inst, again);
        assert_eq!(saved, save_instance(&again));
    }
});
