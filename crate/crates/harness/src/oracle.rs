//! Brute-force direct-sum convolution oracle. Independent of the engine's
//! separable fast path; scenario expectations and the acceptance gate
//! compare runtime output against this.

use fedfaas_core::fits::FitsImage;
use fedfaas_core::gauss::Kernel;

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

pub fn direct_convolve(image: &FitsImage, kernel: &Kernel) -> Vec<f64> {
    let (w, h) = (image.width as i64, image.height as i64);
    let r = kernel.radius as i64;
    let mut out = vec![0.0; image.pixels.len()];
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for di in -r..=r {
                for dj in -r..=r {
                    let sy = reflect(y + di, h);
                    let sx = reflect(x + dj, w);
                    acc += kernel.weight(di, dj) * image.pixels[sy * w as usize + sx];
                }
            }
            out[(y * w + x) as usize] = acc;
        }
    }
    out
}
