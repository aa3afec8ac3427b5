//! Randomized invariants over the propagators, masks, metrics, and the two
//! text formats.

use num_complex::Complex64;
use proptest::prelude::*;

use sdc_optics::analysis::{centroid, fringe_spacing, visibility};
use sdc_optics::config::{
    parse_config, render_config, BeamConfig, BeamId, ExperimentConfig, LensAxis, LensConfig,
    MaskConfig, MaskElement,
};
use sdc_optics::downconversion::CrystalMixParams;
use sdc_optics::elements::{
    apply_double_slit, apply_knife_edge, CoveredSide, DoubleSlitSpec, KnifeEdgeSpec,
};
use sdc_optics::io::{parse_profile_csv_at, render_profile_csv};
use sdc_optics::propagation::{
    fresnel_direct_quadrature, propagate_fraunhofer, propagate_fresnel, PropagationMethod,
};
use sdc_optics::{ComplexField, GridSpec, IntensityProfile};

const STEP: f64 = 1e-5;

fn random_field(n: usize, wavelength: f64) -> impl Strategy<Value = ComplexField> {
    let grid = GridSpec::square(n, STEP).unwrap();
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n * n).prop_map(move |parts| {
        let mut next = parts.into_iter();
        ComplexField::from_fn(grid, wavelength, |_, _| {
            let (re, im) = next.next().unwrap();
            Complex64::new(re, im)
        })
        .unwrap()
    })
}

fn relative_l2(a: &ComplexField, b: &ComplexField) -> f64 {
    let diff: f64 = a
        .amplitude()
        .iter()
        .zip(b.amplitude())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    (diff / b.total_power() * b.grid().cell_area()).sqrt()
}

/// Distance at which the quadratic kernel is critically sampled on this
/// square grid; the spectral method holds below it, the convolution above.
fn critical_distance(n: usize, wavelength: f64) -> f64 {
    STEP * STEP * n as f64 / wavelength
}

proptest! {
    #[test]
    fn conjugation_is_an_involution_and_preserves_power(
        field in random_field(16, 633e-9),
    ) {
        let twice = field.conjugated().conjugated();
        prop_assert_eq!(twice.amplitude(), field.amplitude());
        prop_assert_eq!(field.conjugated().total_power(), field.total_power());
    }

    #[test]
    fn far_field_intensity_of_the_conjugate_is_the_mirror(
        field in random_field(16, 633e-9),
        z in 0.1..2.0f64,
    ) {
        let far = propagate_fraunhofer(&field, z).unwrap().intensity_map(z);
        let far_conj = propagate_fraunhofer(&field.conjugated(), z).unwrap().intensity_map(z);
        let mirrored = far.mirrored_through_origin();
        let peak = mirrored.max_value();
        for (a, b) in far_conj.values().iter().zip(mirrored.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * peak);
        }
    }

    #[test]
    fn spectral_propagation_is_unitary(
        field in random_field(16, 633e-9),
        fraction in 0.05..1.0f64,
    ) {
        let z = fraction * critical_distance(16, 633e-9);
        let out = propagate_fresnel(&field, z, PropagationMethod::TransferFunction).unwrap();
        prop_assert!((out.total_power() / field.total_power() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn spectral_legs_compose(
        field in random_field(16, 633e-9),
        fraction in 0.05..1.0f64,
        split in 0.1..0.9f64,
    ) {
        let z = fraction * critical_distance(16, 633e-9);
        let method = PropagationMethod::TransferFunction;
        let one = propagate_fresnel(&field, z, method).unwrap();
        let first = propagate_fresnel(&field, split * z, method).unwrap();
        let two = propagate_fresnel(&first, (1.0 - split) * z, method).unwrap();
        prop_assert!(relative_l2(&two, &one) <= 1e-9);
    }

    #[test]
    fn fresnel_methods_agree_at_the_critical_distance(
        field in random_field(16, 633e-9),
    ) {
        let z = critical_distance(16, 633e-9);
        let tf = propagate_fresnel(&field, z, PropagationMethod::TransferFunction).unwrap();
        let ir = propagate_fresnel(&field, z, PropagationMethod::ImpulseResponse).unwrap();
        prop_assert!(relative_l2(&tf, &ir) <= 1e-9);
    }

    #[test]
    fn knife_edge_is_an_idempotent_contraction(
        field in random_field(16, 633e-9),
        edge in -8e-5..8e-5f64,
        below in proptest::bool::ANY,
    ) {
        let spec = KnifeEdgeSpec {
            edge_position: edge,
            covered_side: if below { CoveredSide::Below } else { CoveredSide::Above },
        };
        let once = apply_knife_edge(&field, &spec).unwrap();
        let twice = apply_knife_edge(&once, &spec).unwrap();
        prop_assert_eq!(twice.amplitude(), once.amplitude());
        prop_assert!(once.total_power() <= field.total_power());
    }

    #[test]
    fn double_slit_only_attenuates(
        field in random_field(32, 633e-9),
        width in 1e-5..5e-5f64,
        gap in 0.0..5e-5f64,
        t_lower in 0.0..1.0f64,
        t_upper in 0.0..1.0f64,
        length in 2e-5..3e-4f64,
    ) {
        let spec = DoubleSlitSpec::new(width, gap, (t_lower, t_upper))
            .unwrap()
            .with_slit_length(length)
            .unwrap();
        let masked = apply_double_slit(&field, &spec).unwrap();
        prop_assert!(masked.total_power() <= field.total_power());
        for (a, b) in masked.amplitude().iter().zip(field.amplitude()) {
            prop_assert!(a.norm() <= b.norm() + 1e-15);
        }
    }

    #[test]
    fn visibility_is_bounded_and_centroid_stays_inside(
        values in proptest::collection::vec(0.0..1e3f64, 8..64),
        dy in 1e-6..1e-4f64,
    ) {
        let n = values.len();
        let positions: Vec<f64> = (0..n).map(|j| (j as f64 - (n / 2) as f64) * dy).collect();
        let mut values = values;
        values[n / 2] += 1.0;
        let profile = IntensityProfile::new(positions.clone(), values, 0.5).unwrap();
        let v = visibility(&profile).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        let c = centroid(&profile).unwrap();
        prop_assert!(positions[0] <= c && c <= positions[n - 1]);
    }

    #[test]
    fn cosine_squared_fringes_report_their_period(
        period in 6e-5..4e-4f64,
        phase in 0.0..std::f64::consts::PI,
    ) {
        let n = 256;
        let positions: Vec<f64> = (0..n).map(|j| (j as f64 - (n / 2) as f64) * STEP).collect();
        let values: Vec<f64> = positions
            .iter()
            .map(|y| (std::f64::consts::PI * y / period + phase).cos().powi(2))
            .collect();
        let profile = IntensityProfile::new(positions, values, 0.8).unwrap();
        let spacing = fringe_spacing(&profile).unwrap();
        prop_assert!((spacing / period - 1.0).abs() <= 0.02);
    }

    #[test]
    fn profile_csv_round_trips(
        values in proptest::collection::vec(0.0..1e6f64, 2..256),
        dy in 1e-6..1e-3f64,
        plane in 0.1..2.0f64,
    ) {
        let n = values.len();
        let positions: Vec<f64> = (0..n).map(|j| (j as f64 - (n / 2) as f64) * dy).collect();
        let profile = IntensityProfile::new(positions, values, plane).unwrap();
        let parsed = parse_profile_csv_at(&render_profile_csv(&profile), plane).unwrap();
        prop_assert_eq!(parsed.len(), profile.len());
        prop_assert_eq!(parsed.plane_distance(), plane);
        for (a, b) in parsed.positions().iter().zip(profile.positions()) {
            prop_assert!((a - b).abs() <= 1e-8 * (b.abs() + dy));
        }
        for (a, b) in parsed.values().iter().zip(profile.values()) {
            prop_assert!((a - b).abs() <= 1e-8 * (b.abs() + 1e-300));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fft_convolution_matches_the_direct_sum(
        field in random_field(16, 633e-9),
        fraction in 1.0..10.0f64,
    ) {
        let z = fraction * critical_distance(16, 633e-9);
        let grid = field.grid();
        let propagated =
            propagate_fresnel(&field, z, PropagationMethod::ImpulseResponse).unwrap();
        let targets: Vec<(f64, f64)> = (0..grid.ny())
            .flat_map(|j| (0..grid.nx()).map(move |i| (i, j)))
            .map(|(i, j)| (grid.x_at(i), grid.y_at(j)))
            .collect();
        let oracle = fresnel_direct_quadrature(&field, z, &targets).unwrap();
        let mut diff = 0.0;
        let mut norm = 0.0;
        for (k, (i, j)) in (0..grid.ny())
            .flat_map(|j| (0..grid.nx()).map(move |i| (i, j)))
            .enumerate()
        {
            diff += (propagated.amplitude()[[j, i]] - oracle[k]).norm_sqr();
            norm += oracle[k].norm_sqr();
        }
        prop_assert!((diff / norm).sqrt() <= 1e-9);
    }
}

fn config_strategy() -> impl Strategy<Value = ExperimentConfig> {
    let grid = (4usize..48, 4usize..48, 1e-6..1e-4f64, 1e-6..1e-4f64)
        .prop_map(|(nx, ny, dx, dy)| GridSpec::new(2 * nx, 2 * ny, dx, dy).unwrap());
    let lens = proptest::option::of(
        (
            proptest::bool::ANY,
            prop_oneof![0.01..2.0f64, -2.0..-0.01f64],
            0.0..1.0f64,
            proptest::bool::ANY,
        )
            .prop_map(|(pump, focal_length, distance, vertical)| LensConfig {
                beam: if pump { BeamId::Pump } else { BeamId::Auxiliary },
                focal_length,
                distance,
                axis: if vertical { LensAxis::Vertical } else { LensAxis::Spherical },
            }),
    );
    let crystal = (1e-7..2e-6f64, 0.1..10.0f64, 0.0..1e3f64)
        .prop_map(|(wl, gain, weight)| CrystalMixParams::new(wl, gain, weight).unwrap());
    let method = prop_oneof![
        Just(PropagationMethod::Auto),
        Just(PropagationMethod::TransferFunction),
        Just(PropagationMethod::ImpulseResponse),
    ];
    (grid, beam_strategy(), beam_strategy(), lens, crystal, 0.01..2.0f64, method, "[a-z]{1,12}")
        .prop_map(
        |(grid, pump, auxiliary, lens, crystal, detection_distance, method, output_directory)| {
            ExperimentConfig {
                grid,
                pump,
                auxiliary,
                lens,
                crystal,
                detection_distance,
                method,
                output_directory,
            }
        },
    )
}

fn beam_strategy() -> impl Strategy<Value = BeamConfig> {
    let mask = proptest::option::of(mask_strategy());
    (1e-7..2e-6f64, 0.1..10.0f64, proptest::option::of(1e-5..1e-2f64), mask).prop_map(
        |(wavelength, amplitude, waist, mask)| BeamConfig {
            wavelength,
            amplitude,
            waist,
            mask,
        },
    )
}

fn mask_strategy() -> impl Strategy<Value = MaskConfig> {
    let slit = (1e-5..5e-4f64, 0.0..5e-4f64, 0.0..1.0f64, 0.0..1.0f64, 1e-5..5e-3f64)
        .prop_map(|(width, gap, lower, upper, length)| {
            MaskElement::DoubleSlit(
                DoubleSlitSpec::new(width, gap, (lower, upper))
                    .unwrap()
                    .with_slit_length(length)
                    .unwrap(),
            )
        });
    let knife = (-1e-3..1e-3f64, proptest::bool::ANY).prop_map(|(edge, below)| {
        MaskElement::KnifeEdge(KnifeEdgeSpec {
            edge_position: edge,
            covered_side: if below { CoveredSide::Below } else { CoveredSide::Above },
        })
    });
    (0.0..1.0f64, prop_oneof![slit, knife])
        .prop_map(|(distance, element)| MaskConfig { distance, element })
}

proptest! {
    #[test]
    fn config_documents_round_trip(config in config_strategy()) {
        prop_assert!(config.validate().is_ok());
        let parsed = parse_config(&render_config(&config)).unwrap();
        prop_assert_eq!(parsed, config);
    }
}
