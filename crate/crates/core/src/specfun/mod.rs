//! Special functions: complete elliptic integrals and toroidal harmonics.

mod elliptic;
mod toroidal;

pub use elliptic::{
    carlson_rd, carlson_rf, elliptic_e, elliptic_e_complementary, elliptic_k,
    elliptic_k_complementary,
};
pub use toroidal::{
    arg_to_xi, harmonic_table, legendre_p_half, overflow_horizon, seeds, HarmonicTable,
    PHalfRecurrence, Seeds, MIN_ARGUMENT_OFFSET,
};
