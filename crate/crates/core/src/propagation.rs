//! Fresnel and Fraunhofer propagators, the thin-lens transform, and a
//! brute-force quadrature oracle.
//!
//! Two FFT realizations of the Fresnel convolution are provided. The
//! transfer-function method multiplies the centered spectrum by the exact
//! quadratic-phase transfer function; it is unitary and composes exactly, but
//! its kernel is adequately sampled only for short distances. The
//! impulse-response method samples the spatial kernel and performs a
//! zero-padded linear convolution; it is the right choice for long distances
//! and, by construction, equals the discretized Fresnel integral that
//! [`fresnel_direct_quadrature`] evaluates term by term.
//!
//! The boundary between the regimes on each axis is the critical-sampling
//! condition `d^2 * n = lambda * z`.

use ndarray::{s, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::field::ComplexField;
use crate::grid::GridSpec;

use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagationMethod {
    /// Pick per grid, wavelength, and distance; see [`resolve_method`].
    Auto,
    TransferFunction,
    ImpulseResponse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolvedMethod {
    TransferFunction,
    ImpulseResponse,
}

/// Auto-selection rule: transfer function when `d^2 * n >= lambda * z` on
/// both axes (short distance), impulse response otherwise.
pub fn resolve_method(
    grid: GridSpec,
    wavelength: f64,
    z: f64,
    method: PropagationMethod,
) -> ResolvedMethod {
    match method {
        PropagationMethod::TransferFunction => ResolvedMethod::TransferFunction,
        PropagationMethod::ImpulseResponse => ResolvedMethod::ImpulseResponse,
        PropagationMethod::Auto => {
            let lz = wavelength * z;
            let tf_x = grid.dx() * grid.dx() * grid.nx() as f64 >= lz;
            let tf_y = grid.dy() * grid.dy() * grid.ny() as f64 >= lz;
            if tf_x && tf_y {
                ResolvedMethod::TransferFunction
            } else {
                ResolvedMethod::ImpulseResponse
            }
        }
    }
}

/// Whether `method`'s kernel is adequately sampled on both axes for this
/// grid, wavelength, and distance.
pub fn sampling_satisfied(
    grid: GridSpec,
    wavelength: f64,
    z: f64,
    method: PropagationMethod,
) -> bool {
    let lz = wavelength * z;
    let cx = grid.dx() * grid.dx() * grid.nx() as f64;
    let cy = grid.dy() * grid.dy() * grid.ny() as f64;
    match resolve_method(grid, wavelength, z, method) {
        ResolvedMethod::TransferFunction => cx >= lz && cy >= lz,
        ResolvedMethod::ImpulseResponse => cx <= lz && cy <= lz,
    }
}

fn check_distance(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveDistance(z))
    }
}

/// Propagates `f` over the distance `z` with the quadratic-phase Fresnel
/// kernel at the field's own wavelength.
///
/// A sampling-criterion violation for the selected method is not fatal: the
/// propagation still runs, a warning is logged, and callers can interrogate
/// [`sampling_satisfied`] beforehand.
pub fn propagate_fresnel(
    f: &ComplexField,
    z: f64,
    method: PropagationMethod,
) -> Result<ComplexField> {
    check_distance(z)?;
    let grid = f.grid();
    let wavelength = f.wavelength();
    let resolved = resolve_method(grid, wavelength, z, method);
    if !sampling_satisfied(grid, wavelength, z, method) {
        log::warn!(
            "fresnel {:?} over {z} m at {} m wavelength violates the sampling \
             criterion on a {} x {} grid ({} x {} m spacing)",
            resolved,
            wavelength,
            grid.nx(),
            grid.ny(),
            grid.dx(),
            grid.dy()
        );
    }
    match resolved {
        ResolvedMethod::TransferFunction => Ok(propagate_transfer_function(f, z)),
        ResolvedMethod::ImpulseResponse => Ok(propagate_impulse_response(f, z)),
    }
}

/// Pure spectral multiply by `exp(ikz) * exp(-i pi lambda z (fx^2 + fy^2))`.
fn propagate_transfer_function(f: &ComplexField, z: f64) -> ComplexField {
    let grid = f.grid();
    let lambda = f.wavelength();
    let kz = 2.0 * PI * z / lambda;
    let mut spectrum = fft::cfft2(f.amplitude());
    let (ny, nx) = spectrum.dim();
    let fx2: Vec<f64> = (0..nx)
        .map(|i| {
            let fx = fft::freq_at(i, nx, grid.dx());
            fx * fx
        })
        .collect();
    for (j, mut row) in spectrum.rows_mut().into_iter().enumerate() {
        let fy = fft::freq_at(j, ny, grid.dy());
        let fy2 = fy * fy;
        for (i, v) in row.iter_mut().enumerate() {
            let phase = kz - PI * lambda * z * (fx2[i] + fy2);
            *v *= Complex64::from_polar(1.0, phase);
        }
    }
    let amplitude = fft::icfft2(&spectrum);
    ComplexField::from_amplitude(grid, lambda, amplitude)
        .expect("propagation preserves shape and finiteness")
}

/// Zero-padded linear convolution with the sampled impulse response
/// `exp(ikz)/(i lambda z) * exp(i pi (x^2 + y^2) / (lambda z))`.
///
/// Padding to double size makes the circular convolution exact for every
/// in-window source/target pair, so this method reproduces the discrete
/// Fresnel sum of [`fresnel_direct_quadrature`] up to FFT roundoff.
fn propagate_impulse_response(f: &ComplexField, z: f64) -> ComplexField {
    let grid = f.grid();
    let lambda = f.wavelength();
    let lz = lambda * z;
    let (ny, nx) = (grid.ny(), grid.nx());
    let (py, px) = (2 * ny, 2 * nx);

    let mut padded = Array2::from_elem((py, px), Complex64::default());
    padded.slice_mut(s![0..ny, 0..nx]).assign(f.amplitude());
    let mut spectrum = fft::fft2(&padded, fft::Direction::Forward);

    // Kernel sampled at wrapped signed offsets, so bin p holds the
    // displacement (p <= n ? p : p - 2n) * d on each axis. The constant
    // phase 2 pi z / lambda is huge; applying it once at the end instead of
    // inside every cis argument keeps the sum phase-congruent with
    // [`fresnel_direct_quadrature`].
    let mut kernel = Array2::from_shape_fn((py, px), |(j, i)| {
        let sy = if j < ny { j as f64 } else { j as f64 - py as f64 } * grid.dy();
        let sx = if i < nx { i as f64 } else { i as f64 - px as f64 } * grid.dx();
        Complex64::from_polar(1.0, PI * (sx * sx + sy * sy) / lz)
    });
    kernel = fft::fft2(&kernel, fft::Direction::Forward);

    spectrum *= &kernel;
    let conv = fft::fft2(&spectrum, fft::Direction::Inverse);
    let base_phase = 2.0 * PI * z / lambda - FRAC_PI_2;
    let scale = Complex64::from_polar(grid.cell_area() / lz, base_phase);
    let amplitude = conv.slice(s![0..ny, 0..nx]).mapv(|v| v * scale);
    ComplexField::from_amplitude(grid, lambda, amplitude)
        .expect("propagation preserves shape and finiteness")
}

/// Far-field propagator: a scaled Fourier transform of the input field.
///
/// The output lattice keeps the point counts but rescales the spacings to
/// `lambda * z / (n * d)` per axis, the natural far-field lattice.
pub fn propagate_fraunhofer(f: &ComplexField, z: f64) -> Result<ComplexField> {
    check_distance(z)?;
    let grid = f.grid();
    let lambda = f.wavelength();
    let lz = lambda * z;
    let (ny, nx) = (grid.ny(), grid.nx());
    let out_grid = GridSpec::new(
        nx,
        ny,
        lz / (nx as f64 * grid.dx()),
        lz / (ny as f64 * grid.dy()),
    )?;
    let mut spectrum = fft::cfft2(f.amplitude());
    let scale = grid.cell_area() / lz;
    let base_phase = 2.0 * PI * z / lambda - FRAC_PI_2;
    for (j, mut row) in spectrum.rows_mut().into_iter().enumerate() {
        let y = out_grid.y_at(j);
        for (i, v) in row.iter_mut().enumerate() {
            let x = out_grid.x_at(i);
            let phase = base_phase + PI * (x * x + y * y) / lz;
            *v *= Complex64::from_polar(scale, phase);
        }
    }
    ComplexField::from_amplitude(out_grid, lambda, spectrum)
}

/// Thin spherical lens: multiplies by `exp(-i k rho^2 / 2f)` at the field's
/// wavelength. Negative focal lengths give a diverging lens.
pub fn apply_thin_lens(f: &ComplexField, focal_length: f64) -> Result<ComplexField> {
    lens_impl(f, focal_length, true)
}

/// Cylindrical variant acting on the vertical axis only:
/// `exp(-i k y^2 / 2f)`. Models optics that focus the profile direction
/// while leaving the slit direction untouched.
pub fn apply_thin_lens_vertical(f: &ComplexField, focal_length: f64) -> Result<ComplexField> {
    lens_impl(f, focal_length, false)
}

fn lens_impl(f: &ComplexField, focal_length: f64, spherical: bool) -> Result<ComplexField> {
    if focal_length == 0.0 || !focal_length.is_finite() {
        return Err(Error::ZeroFocalLength);
    }
    let grid = f.grid();
    let lambda = f.wavelength();
    let lf = lambda * focal_length;

    let (ex, ey) = grid.extent();
    let ymax = ey / 2.0;
    let xmax = ex / 2.0;
    if ymax / lf.abs() > 0.5 / grid.dy() || (spherical && xmax / lf.abs() > 0.5 / grid.dx()) {
        log::warn!(
            "thin lens f = {focal_length} m phase exceeds the grid Nyquist rate near the \
             window edge"
        );
    }

    let mut out = f.clone();
    for (j, mut row) in out.amplitude_mut().rows_mut().into_iter().enumerate() {
        let y = grid.y_at(j);
        for (i, v) in row.iter_mut().enumerate() {
            let r2 = if spherical {
                let x = grid.x_at(i);
                x * x + y * y
            } else {
                y * y
            };
            *v *= Complex64::from_polar(1.0, -PI * r2 / lf);
        }
    }
    Ok(out)
}

/// Direct term-by-term evaluation of the discretized Fresnel integral at
/// arbitrary transverse target points.
///
/// This is the oracle the FFT methods are checked against: `O(N^2 * M)`,
/// intended for grids up to about 256 x 256.
pub fn fresnel_direct_quadrature(
    f: &ComplexField,
    z: f64,
    targets: &[(f64, f64)],
) -> Result<Vec<Complex64>> {
    check_distance(z)?;
    if targets.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::InvalidField("non-finite quadrature target".into()));
    }
    let grid = f.grid();
    let lz = f.wavelength() * z;
    let base_phase = 2.0 * PI * z / f.wavelength() - FRAC_PI_2;
    let weight = grid.cell_area() / lz;
    let xs: Vec<f64> = (0..grid.nx()).map(|i| grid.x_at(i)).collect();
    let ys: Vec<f64> = (0..grid.ny()).map(|j| grid.y_at(j)).collect();
    let amplitude = f.amplitude();

    let mut out = Vec::with_capacity(targets.len());
    for &(tx, ty) in targets {
        let mut sum = Complex64::default();
        for (j, row) in amplitude.rows().into_iter().enumerate() {
            let dy2 = (ty - ys[j]) * (ty - ys[j]);
            let row = row.as_slice().expect("rows are contiguous");
            for (i, u) in row.iter().enumerate() {
                let dx = tx - xs[i];
                let phase = PI * (dx * dx + dy2) / lz;
                sum += u * Complex64::from_polar(1.0, phase);
            }
        }
        out.push(sum * Complex64::from_polar(weight, base_phase));
    }
    Ok(out)
}

/// Far-field regime classification for an aperture of radius `rho_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FraunhoferRegime {
    /// `rho_max^2 / (lambda * z)`.
    pub ratio: f64,
    /// True when the ratio is below 0.1.
    pub fraunhofer: bool,
}

/// Computes `rho_max^2 / (lambda z)` and flags the Fraunhofer regime when the
/// ratio is below 0.1.
pub fn fraunhofer_validity(aperture_radius: f64, wavelength: f64, z: f64) -> FraunhoferRegime {
    assert!(
        aperture_radius >= 0.0 && wavelength > 0.0 && z > 0.0,
        "fraunhofer_validity arguments must be positive"
    );
    let ratio = aperture_radius * aperture_radius / (wavelength * z);
    FraunhoferRegime {
        ratio,
        fraunhofer: ratio < 0.1,
    }
}

/// Radius around the axis containing `fraction` of the field's power.
/// Useful as the `rho_max` input of [`fraunhofer_validity`].
pub fn effective_radius(f: &ComplexField, fraction: f64) -> f64 {
    assert!((0.0..=1.0).contains(&fraction));
    let grid = f.grid();
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(grid.nx() * grid.ny());
    for (j, row) in f.amplitude().rows().into_iter().enumerate() {
        let y = grid.y_at(j);
        for (i, a) in row.iter().enumerate() {
            let x = grid.x_at(i);
            samples.push((x * x + y * y, a.norm_sqr()));
        }
    }
    let total: f64 = samples.iter().map(|(_, p)| p).sum();
    if total <= 0.0 {
        return 0.0;
    }
    samples.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut acc = 0.0;
    for (r2, p) in samples {
        acc += p;
        if acc >= fraction * total {
            return r2.sqrt();
        }
    }
    let (ex, ey) = grid.extent();
    0.5 * ex.hypot(ey)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::multiply_fields;
    use approx::assert_relative_eq;

    fn rel_l2(a: &ComplexField, b: &ComplexField) -> f64 {
        let num: f64 = a
            .amplitude()
            .iter()
            .zip(b.amplitude().iter())
            .map(|(x, y)| (x - y).norm_sqr())
            .sum();
        let den: f64 = b.amplitude().iter().map(|v| v.norm_sqr()).sum();
        (num / den).sqrt()
    }

    fn gaussian(grid: GridSpec, waist: f64, wavelength: f64) -> ComplexField {
        ComplexField::from_fn(grid, wavelength, |x, y| {
            Complex64::new((-(x * x + y * y) / (waist * waist)).exp(), 0.0)
        })
        .unwrap()
    }

    #[test]
    fn rejects_nonpositive_distance() {
        let g = GridSpec::square(16, 1e-5).unwrap();
        let f = ComplexField::uniform(g, Complex64::new(1.0, 0.0), 442e-9).unwrap();
        assert!(propagate_fresnel(&f, 0.0, PropagationMethod::Auto).is_err());
        assert!(propagate_fresnel(&f, -0.3, PropagationMethod::Auto).is_err());
        assert!(propagate_fraunhofer(&f, 0.0).is_err());
    }

    #[test]
    fn auto_selects_by_critical_sampling() {
        let g = GridSpec::square(256, 1e-5).unwrap();
        // Critical distance: d^2 n / lambda.
        let zc = 1e-10 * 256.0 / 442e-9;
        assert_eq!(
            resolve_method(g, 442e-9, zc * 0.5, PropagationMethod::Auto),
            ResolvedMethod::TransferFunction
        );
        assert_eq!(
            resolve_method(g, 442e-9, zc * 2.0, PropagationMethod::Auto),
            ResolvedMethod::ImpulseResponse
        );
        assert!(sampling_satisfied(g, 442e-9, zc * 0.5, PropagationMethod::Auto));
        assert!(sampling_satisfied(g, 442e-9, zc * 2.0, PropagationMethod::Auto));
        assert!(!sampling_satisfied(
            g,
            442e-9,
            zc * 2.0,
            PropagationMethod::TransferFunction
        ));
        assert!(!sampling_satisfied(
            g,
            442e-9,
            zc * 0.5,
            PropagationMethod::ImpulseResponse
        ));
    }

    #[test]
    fn plane_wave_is_a_transfer_function_eigenmode() {
        let g = GridSpec::square(64, 1e-5).unwrap();
        let f = ComplexField::uniform(g, Complex64::new(1.2, -0.5), 442e-9).unwrap();
        let p = propagate_fresnel(&f, 0.01, PropagationMethod::TransferFunction).unwrap();
        // Uniform intensity, power conserved to roundoff.
        let i0 = f.amplitude()[[0, 0]].norm_sqr();
        for v in p.amplitude().iter() {
            assert!((v.norm_sqr() - i0).abs() < 1e-10 * i0);
        }
        assert_relative_eq!(p.total_power(), f.total_power(), max_relative = 1e-12);
    }

    #[test]
    fn transfer_function_conserves_power_for_any_field() {
        let g = GridSpec::square(64, 1e-5).unwrap();
        let f = ComplexField::from_fn(g, 845e-9, |x, y| {
            Complex64::new((x * 3e4).sin() + 0.2, (y * 5e4).cos())
        })
        .unwrap();
        let p = propagate_fresnel(&f, 0.005, PropagationMethod::TransferFunction).unwrap();
        assert_relative_eq!(p.total_power(), f.total_power(), max_relative = 1e-12);
    }

    #[test]
    fn transfer_function_steps_compose_exactly() {
        let g = GridSpec::square(32, 2e-5).unwrap();
        let f = ComplexField::from_fn(g, 442e-9, |x, y| {
            Complex64::new((-(x * x + y * y) / 1e-7).exp(), x * 1e3)
        })
        .unwrap();
        let two = propagate_fresnel(
            &propagate_fresnel(&f, 0.02, PropagationMethod::TransferFunction).unwrap(),
            0.03,
            PropagationMethod::TransferFunction,
        )
        .unwrap();
        let one = propagate_fresnel(&f, 0.05, PropagationMethod::TransferFunction).unwrap();
        // The kernels agree analytically; in floats the phase kz ~ 7e5 rad
        // is rounded per step, so the split path drifts by ~ kz * eps.
        assert!(rel_l2(&two, &one) < 1e-9);
    }

    #[test]
    fn gaussian_beam_spreads_at_the_analytic_rate() {
        // w0 = 0.5 mm at 442 nm over 0.8 m; 1/e^2 radius grows by sqrt(1 + (z/zR)^2).
        let g = GridSpec::square(512, 3e-5).unwrap();
        let w0 = 5e-4;
        let lambda = 442e-9;
        let f = gaussian(g, w0, lambda);
        let p = propagate_fresnel(&f, 0.8, PropagationMethod::Auto).unwrap();
        let zr = PI * w0 * w0 / lambda;
        let expected = w0 * (1.0 + (0.8 / zr) * (0.8 / zr)).sqrt();
        // For intensity ~ exp(-2 y^2 / w^2) the second moment is w^2/4.
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, row) in p.amplitude().rows().into_iter().enumerate() {
            let y = g.y_at(j);
            for v in row.iter() {
                num += y * y * v.norm_sqr();
                den += v.norm_sqr();
            }
        }
        let measured = 2.0 * (num / den).sqrt();
        assert_relative_eq!(measured, expected, max_relative = 0.01);
    }

    #[test]
    fn impulse_response_equals_direct_quadrature_on_the_grid() {
        let g = GridSpec::square(16, 4e-5).unwrap();
        let f = ComplexField::from_fn(g, 925e-9, |x, y| {
            Complex64::new((x * 2e4).cos(), (y * 3e4).sin() * 0.5)
        })
        .unwrap();
        let z = 0.7;
        let p = propagate_fresnel(&f, z, PropagationMethod::ImpulseResponse).unwrap();
        let targets: Vec<(f64, f64)> = (0..16)
            .flat_map(|j| (0..16).map(move |i| (j, i)))
            .map(|(j, i)| (g.x_at(i), g.y_at(j)))
            .collect();
        let q = fresnel_direct_quadrature(&f, z, &targets).unwrap();
        let scale = q.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for (n, v) in q.iter().enumerate() {
            let (j, i) = (n / 16, n % 16);
            assert!((p.amplitude()[[j, i]] - v).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn quadrature_of_zero_field_is_zero() {
        let g = GridSpec::square(16, 1e-5).unwrap();
        let f = ComplexField::uniform(g, Complex64::default(), 442e-9).unwrap();
        let q = fresnel_direct_quadrature(&f, 0.5, &[(0.0, 0.0), (1e-4, -2e-4)]).unwrap();
        assert!(q.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn on_axis_quadrature_matches_an_independent_integrator() {
        // Rectangular aperture, on-axis value. The reference is a Simpson
        // integration of the separable 1-D Fresnel integrals with a step
        // unrelated to the grid pitch.
        let lambda = 925e-9;
        let z = 1.0;
        let lz = lambda * z;
        let g = GridSpec::new(16, 1024, 2.5e-6, 1e-6).unwrap();
        let half_y = 250.5e-6;
        let half_x = 11.25e-6;
        let f = ComplexField::from_fn(g, lambda, |x, y| {
            if y.abs() < half_y && x.abs() < half_x {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        })
        .unwrap();
        let got = fresnel_direct_quadrature(&f, z, &[(0.0, 0.0)]).unwrap()[0];

        let chirp_integral = |half: f64| {
            let n = 20_000;
            let h = 2.0 * half / n as f64;
            let mut sum = Complex64::default();
            for k in 0..=n {
                let y = -half + k as f64 * h;
                let w = if k == 0 || k == n {
                    1.0
                } else if k % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                sum += w * Complex64::from_polar(1.0, PI * y * y / lz);
            }
            sum * (h / 3.0)
        };
        let expected = chirp_integral(half_y) * chirp_integral(half_x)
            * Complex64::from_polar(1.0 / lz, 2.0 * PI * z / lambda - FRAC_PI_2);
        // The quadrature is a Riemann sum on the grid pitch, the reference a
        // converged integral; with 9 samples across x the O(dx^2) chirp error
        // sits near 2e-6 of the result.
        assert!(
            (got - expected).norm() <= 1e-5 * expected.norm(),
            "got {got}, expected {expected}"
        );
    }

    #[test]
    fn fraunhofer_conserves_power_and_rescales_the_grid() {
        let g = GridSpec::new(64, 128, 1e-5, 2e-5).unwrap();
        let f = gaussian(g, 2e-4, 442e-9);
        let z = 1.3;
        let p = propagate_fraunhofer(&f, z).unwrap();
        assert_relative_eq!(p.total_power(), f.total_power(), max_relative = 1e-10);
        assert_relative_eq!(
            p.grid().dx(),
            442e-9 * z / (64.0 * 1e-5),
            max_relative = 1e-12
        );
        assert_relative_eq!(
            p.grid().dy(),
            442e-9 * z / (128.0 * 2e-5),
            max_relative = 1e-12
        );
    }

    #[test]
    fn fraunhofer_of_a_symmetric_real_field_is_symmetric() {
        let g = GridSpec::square(64, 1e-5).unwrap();
        let f = ComplexField::from_fn(g, 845e-9, |x, y| {
            Complex64::new((-(x * x + 4.0 * y * y) / 1e-8).exp(), 0.0)
        })
        .unwrap();
        let m = propagate_fraunhofer(&f, 1.0).unwrap().intensity_map(1.0);
        let mm = m.mirrored_through_origin();
        for (a, b) in m.values().iter().zip(mm.values().iter()) {
            assert!((a - b).abs() <= 1e-10 * m.max_value());
        }
    }

    #[test]
    fn conjugation_mirrors_the_fraunhofer_intensity_exactly() {
        let g = GridSpec::square(32, 1e-5).unwrap();
        let f = ComplexField::from_fn(g, 845e-9, |x, y| {
            Complex64::new((x * 7e4).sin() + 0.1, (y * 9e4).cos() * 0.7)
        })
        .unwrap();
        let direct = propagate_fraunhofer(&f, 0.9).unwrap().intensity_map(0.9);
        let conj = propagate_fraunhofer(&f.conjugated(), 0.9)
            .unwrap()
            .intensity_map(0.9);
        let mirrored = direct.mirrored_through_origin();
        for (a, b) in conj.values().iter().zip(mirrored.values().iter()) {
            assert!((a - b).abs() <= 1e-12 * direct.max_value());
        }
    }

    #[test]
    fn airy_first_zero_matches_the_analytic_radius() {
        let g = GridSpec::square(2048, 1e-5).unwrap();
        let radius = 5e-4;
        let lambda = 442e-9;
        let f = ComplexField::from_fn(g, lambda, |x, y| {
            if x * x + y * y < radius * radius {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        })
        .unwrap();
        let z = 1.0;
        let p = propagate_fraunhofer(&f, z).unwrap();
        let profile = p.vertical_profile(z);
        // Walk outward from the axis to the first local minimum, then refine
        // with a parabola through its neighbors.
        let n0 = profile.len() / 2;
        let v = profile.values();
        let mut m = n0 + 1;
        while m + 1 < v.len() && !(v[m] <= v[m - 1] && v[m] <= v[m + 1]) {
            m += 1;
        }
        let denom = v[m - 1] - 2.0 * v[m] + v[m + 1];
        let delta = if denom.abs() > 0.0 {
            0.5 * (v[m - 1] - v[m + 1]) / denom
        } else {
            0.0
        };
        let measured = profile.positions()[m] + delta * profile.spacing();
        let expected = 1.22 * lambda * z / (2.0 * radius);
        assert_relative_eq!(measured, expected, max_relative = 0.02);
    }

    #[test]
    fn lens_rejects_zero_focal_length_and_huge_f_is_a_no_op() {
        let g = GridSpec::square(32, 1e-5).unwrap();
        let f = gaussian(g, 1e-4, 442e-9);
        assert!(apply_thin_lens(&f, 0.0).is_err());
        let weak = apply_thin_lens(&f, 1e12).unwrap();
        assert!(rel_l2(&weak, &f) < 1e-8);
        assert_relative_eq!(weak.total_power(), f.total_power(), max_relative = 1e-12);
    }

    #[test]
    fn lens_focuses_a_collimated_gaussian_to_the_analytic_waist() {
        let g = GridSpec::square(512, 1e-5).unwrap();
        let w0 = 5e-4;
        let lambda = 442e-9;
        let focal = 0.2;
        let f = gaussian(g, w0, lambda);
        let focused = propagate_fresnel(
            &apply_thin_lens(&f, focal).unwrap(),
            focal,
            PropagationMethod::Auto,
        )
        .unwrap();
        let expected_waist = lambda * focal / (PI * w0);
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, row) in focused.amplitude().rows().into_iter().enumerate() {
            let y = g.y_at(j);
            for v in row.iter() {
                num += y * y * v.norm_sqr();
                den += v.norm_sqr();
            }
        }
        let measured = 2.0 * (num / den).sqrt();
        assert_relative_eq!(measured, expected_waist, max_relative = 0.02);

        // At least 95% of the power within three diffraction-limited radii.
        let r3 = 3.0 * expected_waist;
        let mut inside = 0.0;
        let mut total = 0.0;
        for (j, row) in focused.amplitude().rows().into_iter().enumerate() {
            let y = g.y_at(j);
            for (i, v) in row.iter().enumerate() {
                let x = g.x_at(i);
                let p = v.norm_sqr();
                total += p;
                if x * x + y * y <= r3 * r3 {
                    inside += p;
                }
            }
        }
        assert!(inside / total >= 0.95, "focal containment {}", inside / total);
    }

    #[test]
    fn lens_images_an_offset_slit_with_the_geometric_magnification() {
        // Object 0.3 m before the lens, f = 0.1 m, image 0.15 m after:
        // magnification -1/2. Centroids are immune to symmetric blur, so the
        // centroid ratio measures the magnification.
        let g = GridSpec::square(512, 1.5e-5).unwrap();
        let lambda = 925e-9;
        let offset = 5e-4;
        let width = 8e-4;
        let object = ComplexField::from_fn(g, lambda, |_, y| {
            if (y - offset).abs() < width / 2.0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        })
        .unwrap();
        let at_lens = propagate_fresnel(&object, 0.3, PropagationMethod::Auto).unwrap();
        let lensed = apply_thin_lens(&at_lens, 0.1).unwrap();
        let image = propagate_fresnel(&lensed, 0.15, PropagationMethod::Auto).unwrap();
        let map = image.intensity_map(0.15);
        let peak = map.max_value();
        let mut num = 0.0;
        let mut den = 0.0;
        for (j, row) in map.values().rows().into_iter().enumerate() {
            let y = g.y_at(j);
            for v in row.iter() {
                if *v >= 0.02 * peak {
                    num += y * v;
                    den += v;
                }
            }
        }
        let magnification = (num / den) / offset;
        assert_relative_eq!(magnification, -0.5, max_relative = 0.02);
    }

    #[test]
    fn vertical_lens_leaves_the_horizontal_axis_untouched() {
        let g = GridSpec::square(64, 1e-5).unwrap();
        let f = gaussian(g, 2e-4, 845e-9);
        let v = apply_thin_lens_vertical(&f, 0.15).unwrap();
        // Rows at y = 0 keep their original values; other rows only gain
        // an x-independent phase.
        let j0 = g.ny() / 2;
        for i in 0..g.nx() {
            assert!((v.amplitude()[[j0, i]] - f.amplitude()[[j0, i]]).norm() < 1e-14);
        }
        let j = 5;
        let ratio = v.amplitude()[[j, 0]] / f.amplitude()[[j, 0]];
        for i in 1..g.nx() {
            let r = v.amplitude()[[j, i]] / f.amplitude()[[j, i]];
            assert!((r - ratio).norm() < 1e-12);
        }
    }

    #[test]
    fn regime_classifier_reproduces_the_reference_arithmetic() {
        let r = fraunhofer_validity(1e-4, 1e-6, 1.0);
        assert_relative_eq!(r.ratio, 0.01, max_relative = 1e-12);
        assert!(r.fraunhofer);

        let r = fraunhofer_validity(6e-4, 845e-9, 0.8);
        assert_relative_eq!(r.ratio, 0.5325, max_relative = 1e-3);
        assert!(!r.fraunhofer);

        let r = fraunhofer_validity(0.0, 1e-6, 1.0);
        assert_eq!(r.ratio, 0.0);
        assert!(r.fraunhofer);
    }

    #[test]
    fn effective_radius_of_a_gaussian_brackets_the_waist() {
        let g = GridSpec::square(128, 1e-5).unwrap();
        let w = 3e-4;
        let f = gaussian(g, w, 442e-9);
        // Intensity exp(-2 r^2 / w^2): 95% of the power inside r = w * sqrt(ln(20)/2).
        let r95 = effective_radius(&f, 0.95);
        let expected = w * (0.5 * 20.0_f64.ln()).sqrt();
        assert_relative_eq!(r95, expected, max_relative = 0.05);
        let zero = ComplexField::uniform(g, Complex64::default(), 442e-9).unwrap();
        assert_eq!(effective_radius(&zero, 0.95), 0.0);
    }

    #[test]
    fn product_field_propagates_at_the_tagged_wavelength() {
        // The same samples tagged with different wavelengths must spread
        // differently; guards the out_wavelength plumbing end to end.
        let g = GridSpec::square(128, 1e-5).unwrap();
        let one = ComplexField::uniform(g, Complex64::new(1.0, 0.0), 442e-9).unwrap();
        let slit = ComplexField::from_fn(g, 442e-9, |_, y| {
            if y.abs() < 1e-4 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::default()
            }
        })
        .unwrap();
        let retagged = multiply_fields(&slit, &one, 925e-9).unwrap();
        let a = propagate_fresnel(&slit, 0.4, PropagationMethod::ImpulseResponse).unwrap();
        let b = propagate_fresnel(&retagged, 0.4, PropagationMethod::ImpulseResponse).unwrap();
        assert!(rel_l2(&b, &a) > 0.05);
    }
}
