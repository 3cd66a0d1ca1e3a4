//! Gaussian convolution of 2D images: normalized discrete kernel with
//! truncation radius ceil(3*sigma), symmetric-reflection boundary, and a
//! separable two-pass implementation.

use crate::fits::{CardValue, FitsImage, HeaderCard};
use crate::ivoid::IvoId;
use thiserror::Error;

pub const SIGMA_MIN: f64 = 1.0;
pub const SIGMA_MAX: f64 = 10.0;
pub const SIGMA_MESSAGE: &str = "Sigma must be between 1 and 10";

#[derive(Debug, Clone, PartialEq)]
pub struct GaussConvParams {
    pub ivo: IvoId,
    pub sigma: f64,
}

#[derive(Debug, Error, PartialEq)]
#[error("{SIGMA_MESSAGE}: got {0}")]
pub struct SigmaOutOfRange(pub f64);

pub fn validate_sigma(sigma: f64) -> Result<(), SigmaOutOfRange> {
    if !(SIGMA_MIN..=SIGMA_MAX).contains(&sigma) {
        return Err(SigmaOutOfRange(sigma));
    }
    Ok(())
}

/// Normalized 2D kernel plus the 1D factor used by the separable passes.
#[derive(Debug, Clone)]
pub struct Kernel {
    pub radius: usize,
    /// (2*radius+1)^2 weights, row-major, summing to 1.
    pub weights: Vec<f64>,
    /// 2*radius+1 normalized 1D weights; the 2D kernel is their outer product.
    pub weights_1d: Vec<f64>,
}

impl Kernel {
    pub fn size(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn weight(&self, di: i64, dj: i64) -> f64 {
        let n = self.size() as i64;
        let r = self.radius as i64;
        debug_assert!(di.abs() <= r && dj.abs() <= r);
        self.weights[((di + r) * n + (dj + r)) as usize]
    }
}

pub fn build_kernel(sigma: f64) -> Result<Kernel, SigmaOutOfRange> {
    validate_sigma(sigma)?;
    let radius = (3.0 * sigma).ceil() as usize;
    let n = 2 * radius + 1;
    let mut w1: Vec<f64> = (0..n)
        .map(|i| {
            let d = i as f64 - radius as f64;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let s1: f64 = w1.iter().sum();
    for w in &mut w1 {
        *w /= s1;
    }
    let mut weights = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            weights.push(w1[i] * w1[j]);
        }
    }
    // divide out the residual so the 2D sum is exactly normalized
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ok(Kernel { radius, weights, weights_1d: w1 })
}

/// Symmetric reflection: -1 -> 0, n -> n-1, recursively for deeper overhang.
fn reflect(mut i: i64, n: i64) -> usize {
    loop {
        if i < 0 {
            i = -i - 1;
        } else if i >= n {
            i = 2 * n - 1 - i;
        } else {
            return i as usize;
        }
    }
}

fn convolve_rows(width: usize, height: usize, src: &[f64], w1: &[f64], radius: usize) -> Vec<f64> {
    let mut out = vec![0.0; src.len()];
    let r = radius as i64;
    for y in 0..height {
        let row = &src[y * width..(y + 1) * width];
        for x in 0..width {
            let mut acc = 0.0;
            for (k, w) in w1.iter().enumerate() {
                let sx = reflect(x as i64 + k as i64 - r, width as i64);
                acc += w * row[sx];
            }
            out[y * width + x] = acc;
        }
    }
    out
}

fn transpose(width: usize, height: usize, src: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; src.len()];
    for y in 0..height {
        for x in 0..width {
            out[x * height + y] = src[y * width + x];
        }
    }
    out
}

/// Separable two-pass convolution; output dimensions equal input dimensions.
pub fn convolve2d(image: &FitsImage, kernel: &Kernel) -> FitsImage {
    let (w, h) = (image.width, image.height);
    let horiz = convolve_rows(w, h, &image.pixels, &kernel.weights_1d, kernel.radius);
    let t = transpose(w, h, &horiz);
    let vert = convolve_rows(h, w, &t, &kernel.weights_1d, kernel.radius);
    let pixels = transpose(h, w, &vert);
    FitsImage { cards: image.cards.clone(), width: w, height: h, pixels }
}

/// Build the kernel, convolve, and record the operation in a HISTORY card.
pub fn gaussconv(image: &FitsImage, params: &GaussConvParams) -> Result<FitsImage, SigmaOutOfRange> {
    let kernel = build_kernel(params.sigma)?;
    let mut out = convolve2d(image, &kernel);
    out.push_card(HeaderCard::with_comment(
        "HISTORY",
        CardValue::None,
        &format!("gaussconv sigma={:?}", params.sigma),
    ));
    Ok(out)
}
