//! 4-D DFT on cubical grids of side L = 2^ℓ, built from 1-D FFTs.
//!
//! Layout is row-major lexicographic: index(α) = ((α₁·L + α₂)·L + α₃)·L + α₄.
//! Conventions (unnormalized forward, 1/L⁴ on the inverse):
//!
//!   forward:  U(m) = Σ_α u(α) e^{−2πi m·α/L}
//!   inverse:  u(α) = L⁻⁴ Σ_m U(m) e^{+2πi m·α/L}

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct Fft4 {
    side: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Fft4 {
    pub fn new(side: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            side,
            forward: planner.plan_fft_forward(side),
            inverse: planner.plan_fft_inverse(side),
        }
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.side.pow(4)
    }

    pub fn is_empty(&self) -> bool {
        self.side == 0
    }

    /// In-place unnormalized forward transform.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.transform(data, &self.forward);
    }

    /// In-place inverse transform including the 1/L⁴ normalization.
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.transform(data, &self.inverse);
        let scale = 1.0 / self.len() as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn transform(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>) {
        let l = self.side;
        assert_eq!(data.len(), l.pow(4));
        let mut lane = vec![Complex64::default(); l];
        // axis strides in the row-major layout
        let strides = [l * l * l, l * l, l, 1];
        for (axis, &stride) in strides.iter().enumerate() {
            // enumerate all lines along `axis`
            let outer: [usize; 3] = match axis {
                0 => [l * l, l, 1],
                1 => [l * l * l, l, 1],
                2 => [l * l * l, l * l, 1],
                _ => [l * l * l, l * l, l],
            };
            for i in 0..l {
                for j in 0..l {
                    for k in 0..l {
                        let base = i * outer[0] + j * outer[1] + k * outer[2];
                        for (t, v) in lane.iter_mut().enumerate() {
                            *v = data[base + t * stride];
                        }
                        fft.process(&mut lane);
                        for (t, v) in lane.iter().enumerate() {
                            data[base + t * stride] = *v;
                        }
                    }
                }
            }
        }
    }
}

/// Row-major index of a 4-index on a side-L grid.
#[inline]
pub fn grid_index(side: usize, a: [usize; 4]) -> usize {
    ((a[0] * side + a[1]) * side + a[2]) * side + a[3]
}

/// Inverse of [`grid_index`].
#[inline]
pub fn grid_coords(side: usize, mut idx: usize) -> [usize; 4] {
    let a4 = idx % side;
    idx /= side;
    let a3 = idx % side;
    idx /= side;
    let a2 = idx % side;
    idx /= side;
    [idx, a2, a3, a4]
}
