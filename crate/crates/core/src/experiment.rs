//! Runs a configured bench end to end: sources, masks, lens, crystal mixing,
//! detection-plane profiles, and the derived metrics.

use crate::analysis::{centroid, fringe_spacing, mirror_correlation, visibility};
use crate::config::{BeamConfig, BeamId, ExperimentConfig, LensAxis, MaskElement};
use crate::downconversion::{idler_intensity_at_plane, idler_source_field};
use crate::elements::{apply_double_slit, apply_knife_edge, gaussian_source};
use crate::error::Result;
use crate::field::{ComplexField, IntensityMap, IntensityProfile};
use crate::propagation::{
    apply_thin_lens, apply_thin_lens_vertical, effective_radius, fraunhofer_validity,
    propagate_fresnel, sampling_satisfied, FraunhoferRegime,
};
use num_complex::Complex64;

/// Detection-plane profiles of the three beams plus derived metrics.
///
/// All three profiles live at the same plane distance, the configured
/// crystal-to-detector separation.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub pump_profile: IntensityProfile,
    pub auxiliary_profile: IntensityProfile,
    pub idler_profile: IntensityProfile,
    /// Full 2-D idler intensity, for image output.
    pub idler_map: IntensityMap,
    pub metrics: Metrics,
}

/// Metrics are optional where the underlying measurement is undefined for
/// the bench at hand (no fringes, zero beam, no masked partner image).
#[derive(Debug, Clone, Copy)]
pub struct Metrics {
    pub pump_fringe_spacing: Option<f64>,
    pub auxiliary_fringe_spacing: Option<f64>,
    pub idler_fringe_spacing: Option<f64>,
    pub pump_centroid: Option<f64>,
    pub auxiliary_centroid: Option<f64>,
    pub idler_centroid: Option<f64>,
    pub idler_visibility: Option<f64>,
    pub image_correlation: Option<ImageCorrelation>,
    /// Far-field classification of the idler source leaving the crystal.
    pub idler_regime: Option<FraunhoferRegime>,
    /// False when any propagation leg violated its sampling criterion.
    pub sampling_ok: bool,
}

/// Correlation between the idler profile and the masked beam's image.
///
/// The idler axis is divided by `scale = lambda_idler / lambda_partner`
/// before correlating, so patterns are compared shape to shape.
#[derive(Debug, Clone, Copy)]
pub struct ImageCorrelation {
    pub partner: BeamId,
    pub scale: f64,
    pub direct: f64,
    pub mirrored: f64,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let z = config.detection_distance;
    let mut sampling_ok = true;

    let pump_at_crystal = beam_at_crystal(config, BeamId::Pump, &mut sampling_ok)?;
    let aux_at_crystal = beam_at_crystal(config, BeamId::Auxiliary, &mut sampling_ok)?;

    for field in [&pump_at_crystal, &aux_at_crystal] {
        sampling_ok &= sampling_satisfied(field.grid(), field.wavelength(), z, config.method);
    }
    sampling_ok &= sampling_satisfied(
        config.grid,
        config.crystal.idler_wavelength,
        z,
        config.method,
    );

    let pump_profile = propagate_fresnel(&pump_at_crystal, z, config.method)?.vertical_profile(z);
    let aux_profile = propagate_fresnel(&aux_at_crystal, z, config.method)?.vertical_profile(z);
    let idler_map = idler_intensity_at_plane(
        &pump_at_crystal,
        &aux_at_crystal,
        z,
        &config.crystal,
        config.method,
    )?;
    let idler_profile = idler_map.vertical_profile();

    let idler_regime = {
        let source = idler_source_field(&pump_at_crystal, &aux_at_crystal, &config.crystal)?;
        if source.total_power() > 0.0 {
            let radius = effective_radius(&source, 0.95);
            Some(fraunhofer_validity(
                radius.max(f64::MIN_POSITIVE),
                config.crystal.idler_wavelength,
                z,
            ))
        } else {
            None
        }
    };

    let image_correlation = correlate_with_partner(config, &idler_profile, &pump_profile, &aux_profile);

    let metrics = Metrics {
        pump_fringe_spacing: fringe_spacing(&pump_profile).ok(),
        auxiliary_fringe_spacing: fringe_spacing(&aux_profile).ok(),
        idler_fringe_spacing: fringe_spacing(&idler_profile).ok(),
        pump_centroid: centroid(&pump_profile).ok(),
        auxiliary_centroid: centroid(&aux_profile).ok(),
        idler_centroid: centroid(&idler_profile).ok(),
        idler_visibility: visibility(&idler_profile).ok(),
        image_correlation,
        idler_regime,
        sampling_ok,
    };

    Ok(ExperimentResult {
        pump_profile,
        auxiliary_profile: aux_profile,
        idler_profile,
        idler_map,
        metrics,
    })
}

/// The beam that carries the transferred image: the masked one, pump first
/// when both are masked.
pub fn image_partner(config: &ExperimentConfig) -> Option<BeamId> {
    if config.pump.mask.is_some() {
        Some(BeamId::Pump)
    } else if config.auxiliary.mask.is_some() {
        Some(BeamId::Auxiliary)
    } else {
        None
    }
}

fn correlate_with_partner(
    config: &ExperimentConfig,
    idler: &IntensityProfile,
    pump: &IntensityProfile,
    aux: &IntensityProfile,
) -> Option<ImageCorrelation> {
    let partner = image_partner(config)?;
    let (partner_profile, partner_wavelength) = match partner {
        BeamId::Pump => (pump, config.pump.wavelength),
        BeamId::Auxiliary => (aux, config.auxiliary.wavelength),
    };
    let scale = config.crystal.idler_wavelength / partner_wavelength;
    let rescaled = idler.rescale_positions(scale).ok()?;
    let pair = mirror_correlation(&rescaled, partner_profile).ok()?;
    Some(ImageCorrelation {
        partner,
        scale,
        direct: pair.direct,
        mirrored: pair.mirrored,
    })
}

/// Builds one beam and carries it to the crystal plane.
///
/// The source is born at the farthest configured element (mask or lens);
/// elements apply in decreasing-distance order with Fresnel legs between
/// distinct planes. With no elements the source is taken directly at the
/// crystal. Elements at equal distances stack with no propagation between
/// them; an amplitude mask and a phase lens commute, so their order is
/// immaterial.
fn beam_at_crystal(
    config: &ExperimentConfig,
    which: BeamId,
    sampling_ok: &mut bool,
) -> Result<ComplexField> {
    let beam = match which {
        BeamId::Pump => &config.pump,
        BeamId::Auxiliary => &config.auxiliary,
    };

    enum Element<'a> {
        Mask(&'a MaskElement),
        Lens(f64, LensAxis),
    }

    let mut stations: Vec<(f64, Element)> = Vec::new();
    if let Some(mask) = &beam.mask {
        stations.push((mask.distance, Element::Mask(&mask.element)));
    }
    if let Some(lens) = &config.lens {
        if lens.beam == which {
            stations.push((lens.distance, Element::Lens(lens.focal_length, lens.axis)));
        }
    }
    // Farthest upstream first; mask ahead of lens on ties.
    stations.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| match (&a.1, &b.1) {
        (Element::Mask(_), Element::Lens(..)) => std::cmp::Ordering::Less,
        (Element::Lens(..), Element::Mask(_)) => std::cmp::Ordering::Greater,
        _ => std::cmp::Ordering::Equal,
    }));

    let mut field = source_field(config, beam)?;
    let mut position = stations.first().map(|(d, _)| *d).unwrap_or(0.0);
    for (distance, element) in &stations {
        let gap = position - distance;
        if gap > 0.0 {
            *sampling_ok &=
                sampling_satisfied(field.grid(), field.wavelength(), gap, config.method);
            field = propagate_fresnel(&field, gap, config.method)?;
        }
        position = *distance;
        field = match element {
            Element::Mask(MaskElement::DoubleSlit(spec)) => apply_double_slit(&field, spec)?,
            Element::Mask(MaskElement::KnifeEdge(spec)) => apply_knife_edge(&field, spec)?,
            Element::Lens(focal, LensAxis::Spherical) => apply_thin_lens(&field, *focal)?,
            Element::Lens(focal, LensAxis::Vertical) => apply_thin_lens_vertical(&field, *focal)?,
        };
    }
    if position > 0.0 {
        *sampling_ok &=
            sampling_satisfied(field.grid(), field.wavelength(), position, config.method);
        field = propagate_fresnel(&field, position, config.method)?;
    }
    Ok(field)
}

fn source_field(config: &ExperimentConfig, beam: &BeamConfig) -> Result<ComplexField> {
    match beam.waist {
        Some(waist) => gaussian_source(config.grid, waist, beam.wavelength, beam.amplitude),
        None => ComplexField::uniform(
            config.grid,
            Complex64::new(beam.amplitude, 0.0),
            beam.wavelength,
        ),
    }
}
