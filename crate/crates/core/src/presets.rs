//! Built-in bench configurations.
//!
//! Five presets cover the canonical image-transfer experiments. Grids are
//! chosen so every propagation leg satisfies its sampling criterion under
//! automatic method selection, and windows are wide enough that the largest
//! transferred image stays clear of the edges.

use crate::config::{
    BeamConfig, BeamId, ExperimentConfig, LensAxis, LensConfig, MaskConfig, MaskElement,
    DEFAULT_OUTPUT_DIRECTORY,
};
use crate::downconversion::CrystalMixParams;
use crate::elements::{CoveredSide, DoubleSlitSpec, KnifeEdgeSpec};
use crate::grid::GridSpec;
use crate::propagation::PropagationMethod;

pub const PRESET_NAMES: [&str; 5] = ["fig2", "fig4", "fig6", "fig8", "fig10"];

const PUMP_WAVELENGTH: f64 = 442e-9;
const AUX_WAVELENGTH: f64 = 845e-9;
const IDLER_WAVELENGTH: f64 = 925e-9;
const DETECTION_DISTANCE: f64 = 0.8;
/// Object plane of the imaging benches, upstream of the crystal.
const OBJECT_DISTANCE: f64 = 0.15;

/// Returns the named preset, or `None` for an unknown name.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    match name {
        "fig2" => Some(fig2()),
        "fig4" => Some(fig4()),
        "fig6" => Some(fig6()),
        "fig8" => Some(fig8()),
        "fig10" => Some(fig10()),
        _ => None,
    }
}

pub fn description(name: &str) -> Option<&'static str> {
    match name {
        "fig2" => Some(
            "double-slit pump, uniform auxiliary: idler fringes magnified by the \
             idler/pump wavelength ratio",
        ),
        "fig4" => Some(
            "double slit on the auxiliary near the crystal: idler repeats the slit \
             image without inversion",
        ),
        "fig6" => Some(
            "asymmetric slit pair on the pump, focused onto the crystal: idler \
             reproduces the pump image",
        ),
        "fig8" => Some(
            "asymmetric slit pair on the auxiliary, focused onto the crystal: the \
             conjugated idler image comes out inverted",
        ),
        "fig10" => Some(
            "knife-edged Gaussian auxiliary, focused onto the crystal: the idler \
             darkens on the side opposite the auxiliary",
        ),
        _ => None,
    }
}

fn common(grid: GridSpec, pump: BeamConfig, auxiliary: BeamConfig) -> ExperimentConfig {
    ExperimentConfig {
        grid,
        pump,
        auxiliary,
        lens: None,
        crystal: CrystalMixParams {
            idler_wavelength: IDLER_WAVELENGTH,
            gain: 1.0,
            spontaneous_weight: 0.0,
        },
        detection_distance: DETECTION_DISTANCE,
        method: PropagationMethod::Auto,
        output_directory: DEFAULT_OUTPUT_DIRECTORY.to_string(),
    }
}

/// Fringe magnification: double slit on the pump just before the crystal.
///
/// The slit mask sits 1 cm upstream so the pattern at the detector is a
/// clean far-field fringe system for both the pump and the idler, and the
/// fringe-spacing ratio lands on the wavelength ratio. Slits much narrower
/// than their 0.6 mm center spacing keep the sinc envelope broad, so the
/// side peaks sit within about a percent of the point-source prediction.
fn fig2() -> ExperimentConfig {
    let mut pump = BeamConfig::uniform(PUMP_WAVELENGTH);
    pump.mask = Some(MaskConfig {
        distance: 0.01,
        element: MaskElement::DoubleSlit(DoubleSlitSpec {
            slit_width: 1.2e-4,
            edge_gap: 4.8e-4,
            transmissions: (1.0, 1.0),
            slit_length: 5e-3,
        }),
    });
    common(
        GridSpec::square(1024, 1e-5).unwrap(),
        pump,
        BeamConfig::uniform(AUX_WAVELENGTH),
    )
}

/// Near-field transfer: double slit on the auxiliary at the object plane,
/// no lens. The detector sees the slit shadow, not its far field, and the
/// unequal transmissions mark one slit so orientation is measurable.
fn fig4() -> ExperimentConfig {
    let mut auxiliary = BeamConfig::uniform(AUX_WAVELENGTH);
    auxiliary.mask = Some(MaskConfig {
        distance: OBJECT_DISTANCE,
        element: MaskElement::DoubleSlit(DoubleSlitSpec {
            slit_width: 4e-4,
            edge_gap: 2e-4,
            transmissions: (1.0, 0.7),
            slit_length: 5e-3,
        }),
    });
    common(
        GridSpec::square(1024, 1.2e-5).unwrap(),
        BeamConfig::uniform(PUMP_WAVELENGTH),
        auxiliary,
    )
}

/// The unequal slit pair used by the imaging benches. Slit width is kept
/// well under the shadow diffraction scale so each slit images as a single
/// smooth lobe; wider slits grow edge ripples whose layout depends on the
/// leg wavelengths and dilutes the idler-to-source image correlation.
fn asymmetric_slits(slit_width: f64, edge_gap: f64) -> MaskElement {
    MaskElement::DoubleSlit(DoubleSlitSpec {
        slit_width,
        edge_gap,
        transmissions: (1.0, 0.7),
        slit_length: 3e-3,
    })
}

/// Cylindrical lens at the object plane with focal length equal to the
/// object-to-crystal distance: it converges the illumination onto the
/// crystal, which puts the detection plane in the far field of the object
/// and forms a magnified image there for the source beam and the idler
/// alike, with the idler/source scale ratio exactly the wavelength ratio.
fn object_plane_lens(beam: BeamId, distance: f64) -> LensConfig {
    LensConfig {
        beam,
        focal_length: distance,
        distance,
        axis: LensAxis::Vertical,
    }
}

/// Image transfer from the pump.
fn fig6() -> ExperimentConfig {
    let mut pump = BeamConfig::uniform(PUMP_WAVELENGTH);
    pump.mask = Some(MaskConfig {
        distance: OBJECT_DISTANCE,
        element: asymmetric_slits(3e-4, 1.7e-3),
    });
    let mut config = common(
        GridSpec::new(256, 8192, 4e-5, 6.6e-6).unwrap(),
        pump,
        BeamConfig::uniform(AUX_WAVELENGTH),
    );
    config.lens = Some(object_plane_lens(BeamId::Pump, OBJECT_DISTANCE));
    config
}

/// Image transfer from the auxiliary; conjugation inverts the idler image.
///
/// Conjugation subtracts the object leg from the idler's reduced path, so a
/// long object leg makes the idler and auxiliary lobes diffract by visibly
/// different amounts. The short 4 cm object leg keeps the two shapes close
/// while leaving inversion, the wavelength-ratio scale, and the swapped
/// lobe heights intact; the tall window absorbs the high magnification.
fn fig8() -> ExperimentConfig {
    let mut auxiliary = BeamConfig::uniform(AUX_WAVELENGTH);
    auxiliary.mask = Some(MaskConfig {
        distance: 0.04,
        element: asymmetric_slits(2.6e-4, 1.04e-3),
    });
    let mut config = common(
        GridSpec::new(256, 8192, 3.8e-5, 9e-6).unwrap(),
        BeamConfig::uniform(PUMP_WAVELENGTH),
        auxiliary,
    );
    config.lens = Some(object_plane_lens(BeamId::Auxiliary, 0.04));
    config
}

/// Knife edge on a Gaussian auxiliary at the object plane: the auxiliary
/// image keeps one side dark and the conjugated idler darkens the other.
fn fig10() -> ExperimentConfig {
    let pump = BeamConfig::uniform(PUMP_WAVELENGTH);
    let mut auxiliary = BeamConfig::uniform(AUX_WAVELENGTH);
    auxiliary.waist = Some(1.2e-3);
    auxiliary.mask = Some(MaskConfig {
        distance: OBJECT_DISTANCE,
        element: MaskElement::KnifeEdge(KnifeEdgeSpec {
            edge_position: 0.0,
            covered_side: CoveredSide::Below,
        }),
    });
    let mut config = common(
        GridSpec::new(256, 2048, 2.6e-5, 1.2e-5).unwrap(),
        pump,
        auxiliary,
    );
    config.lens = Some(object_plane_lens(BeamId::Auxiliary, OBJECT_DISTANCE));
    config
}
