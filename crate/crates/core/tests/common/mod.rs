#![allow(dead_code)]

use std::path::PathBuf;

use ihq_core::instances::load_instance;
use ihq_core::{Instance, Rational};

/// Interior critical values plus two regular levels in every chamber.
pub fn test_levels(inst: &Instance) -> Vec<Rational> {
    let cv = inst.critical_values();
    let three = Rational::from_integer(3.into());
    let mut out = Vec::new();
    for (i, w) in cv.windows(2).enumerate() {
        if i > 0 {
            out.push(w[0].clone());
        }
        let step = (&w[1] - &w[0]) / &three;
        out.push(&w[0] + &step);
        out.push(&w[0] + &step + &step);
    }
    out
}

/// Midpoints of the chambers only.
pub fn regular_levels(inst: &Instance) -> Vec<Rational> {
    let two = Rational::from_integer(2.into());
    inst.critical_values()
        .windows(2)
        .map(|w| (&w[0] + &w[1]) / &two)
        .collect()
}

pub fn fixture(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    load_instance(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
