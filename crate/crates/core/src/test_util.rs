pub use crate::random::{
    random_hermitian, random_matrix, random_psd, random_skew_hermitian, random_vector, SeededRng,
};

pub fn rng(seed: u64) -> SeededRng {
    crate::random::seeded(seed)
}
