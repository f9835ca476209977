//! Decision procedures for nil, nilpotent and strongly nilpotent algebras.

pub mod filtration;
pub mod nil;
pub mod nilpotent;
pub mod oracle;
pub mod strong;

pub use filtration::{
    compute_filtration, quotient_reduction_check, strict_upper_permutation, Filtration, QuotientCheck,
};
pub use nil::{
    all_elements, diag_nil_precheck, is_nil_algebra, is_nil_element, DiagPrecheck, NilAlgebraVerdict,
    NilElementVerdict, NilScan, DEFAULT_NIL_CAP,
};
pub use nilpotent::{
    is_nilpotent, partial_products, path_product, NilpotencyOptions, NilpotencyVerdict, PathProduct, PumpingWitness,
    WitnessKind, DEFAULT_DP_CYCLE_CAP,
};
pub use strong::{is_strongly_nilpotent, nonzero_word, word_product, StrongNilpotencyVerdict};
