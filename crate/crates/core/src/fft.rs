//! Centered 2-D FFT helpers on `Array2<Complex64>`.
//!
//! Arrays use the lattice convention of [`crate::grid::GridSpec`]: index `i`
//! maps to coordinate `(i - n/2) * d`. A quadrant swap before and after the
//! raw FFT turns it into the centered transform, so spectra index the same
//! way: bin `q` maps to frequency `(q - n/2) / (n * d)`.

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::FftPlanner;
use std::sync::{Mutex, OnceLock};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

#[derive(Clone, Copy, PartialEq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// Unnormalized forward / inverse FFT over both axes. The inverse applies the
/// usual `1/(nx*ny)` factor so that `fft2(a, Inverse)` undoes `Forward`.
fn fft2_in_place(a: &mut Array2<Complex64>, dir: Direction) {
    let (ny, nx) = a.dim();
    transform_rows(a, nx, dir);
    let mut t = transposed(a);
    transform_rows(&mut t, ny, dir);
    *a = transposed(&t);
    if dir == Direction::Inverse {
        let scale = 1.0 / (nx as f64 * ny as f64);
        a.mapv_inplace(|v| v * scale);
    }
}

fn transform_rows(a: &mut Array2<Complex64>, len: usize, dir: Direction) {
    let fft = {
        let mut planner = planner().lock().unwrap();
        match dir {
            Direction::Forward => planner.plan_fft_forward(len),
            Direction::Inverse => planner.plan_fft_inverse(len),
        }
    };
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for mut row in a.rows_mut() {
        let slice = row.as_slice_mut().expect("rows are contiguous");
        fft.process_with_scratch(slice, &mut scratch);
    }
}

fn transposed(a: &Array2<Complex64>) -> Array2<Complex64> {
    let (ny, nx) = a.dim();
    Array2::from_shape_fn((nx, ny), |(i, j)| a[[j, i]])
}

/// Uncentered transform over both axes, returning a new array.
pub(crate) fn fft2(a: &Array2<Complex64>, dir: Direction) -> Array2<Complex64> {
    let mut out = a.clone();
    fft2_in_place(&mut out, dir);
    out
}

/// Circularly shifts both axes by half their length. For even dimensions this
/// is an involution and equals both fftshift and ifftshift.
pub(crate) fn swap_quadrants(a: &mut Array2<Complex64>) {
    let (ny, nx) = a.dim();
    debug_assert!(ny % 2 == 0 && nx % 2 == 0);
    for j in 0..ny / 2 {
        for i in 0..nx {
            let partner = ((j + ny / 2) % ny, (i + nx / 2) % nx);
            let tmp = a[[j, i]];
            a[[j, i]] = a[partner];
            a[partner] = tmp;
        }
    }
}

/// Centered forward transform: quadrant swap, FFT, quadrant swap.
pub(crate) fn cfft2(a: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = a.clone();
    swap_quadrants(&mut out);
    fft2_in_place(&mut out, Direction::Forward);
    swap_quadrants(&mut out);
    out
}

/// Centered inverse transform; exact inverse of [`cfft2`].
pub(crate) fn icfft2(a: &Array2<Complex64>) -> Array2<Complex64> {
    let mut out = a.clone();
    swap_quadrants(&mut out);
    fft2_in_place(&mut out, Direction::Inverse);
    swap_quadrants(&mut out);
    out
}

/// Centered frequency of bin `q`: `(q - n/2) / (n * d)`.
pub(crate) fn freq_at(q: usize, n: usize, d: f64) -> f64 {
    (q as f64 - (n / 2) as f64) / (n as f64 * d)
}
