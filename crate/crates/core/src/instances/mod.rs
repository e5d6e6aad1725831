//! Instance generators, the verified corpus, and JSON load/save.

mod builders;
mod document;

pub use builders::{build_projective_space, build_sphere_product};
pub use document::{
    load_instance, save_instance, ClassDocument, CohomologyDocument, ComponentDocument, InstanceDocument, RingDocument,
    TermDocument, WeightDocument, MAX_CLASSES, MAX_COMPONENTS, MAX_DIM,
};

use crate::model::Instance;
use crate::rational::{frac, int};

/// The built-in corpus, in a fixed order.
pub fn corpus() -> Vec<Instance> {
    let build = [
        build_sphere_product(&[1], &int(0)),
        build_projective_space(&[0, 1], &frac(1, 2)),
        build_sphere_product(&[1, 1], &int(0)),
        build_projective_space(&[0, 1, 3], &int(1)),
        build_projective_space(&[0, 1, 2, 3], &frac(3, 2)),
        build_sphere_product(&[1, 1, 2], &int(0)),
    ];
    build.into_iter().map(|r| r.expect("corpus instances build")).collect()
}
