//! Deterministic synthetic FITS inputs from a seeded PRNG.

use fedfaas_core::fits::FitsImage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn synthetic_image(width: usize, height: usize, seed: u64) -> FitsImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pixels = (0..width * height).map(|_| rng.gen_range(-100.0..100.0)).collect();
    FitsImage::new(width, height, pixels).expect("valid synthetic dimensions")
}
