//! Pseudo-summation on finite alphabets.
//!
//! A binary operation on an alphabet of `N` points is stored as an `N x N`
//! look-up table of indices ([`LutTable`]). When the table is associative the
//! law of `X_1 ⊕ ... ⊕ X_m` for i.i.d. `X_k` is well defined and can be
//! computed exactly ([`dist`]). Two operations get dedicated treatment:
//!
//! * addition modulo `N` seen through a relabeling permutation ([`cyclic`]),
//!   where characteristic functions turn pseudo-convolution into pointwise
//!   products and give a complete description of stable laws, their domains
//!   of attraction and infinitely divisible laws;
//! * the maximum ([`extremal`]), where CDFs multiply.
//!
//! [`montecarlo`] samples pseudo-sums with a reproducible counter-based RNG
//! for checking the exact engine empirically.

pub mod cyclic;
pub mod dist;
pub mod error;
pub mod extremal;
pub mod lut;
pub mod montecarlo;

pub use cyclic::{
    classify_stable, construct_id, decompose_id, doa_attractor, enumerate_stable, from_spectrum,
    in_doa, in_doa_spectral, is_infinitely_divisible, make_cyclic_lut, multiply_spectra,
    nth_root_oracle, spectrum, IdDecomposition, NthRoot, Permutation, Spectrum, StableLaw,
};
pub use dist::{
    convolve, is_stable, limit, power, tv_distance, Distribution, LimitResult,
    DEFAULT_MAX_DOUBLINGS, DEFAULT_STABLE_TOL,
};
pub use error::{Error, Result};
pub use extremal::{make_max_lut, make_max_lut_on, max_convolve, max_doa, max_nth_root, max_stable_set, Cdf};
pub use lut::{Alphabet, Associativity, Commutativity, LutTable};
pub use montecarlo::{empirical_counts, empirical_fold, empirical_fold_with_workers, sample_index, SimConfig};
