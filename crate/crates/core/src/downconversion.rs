//! The stimulated down-conversion mixing engine.
//!
//! With pump field `W_p` and auxiliary field `W_s` given at the crystal
//! plane, the stimulated idler leaving the crystal is proportional to
//! `W_p * conj(W_s)` and propagates with the idler wavevector. The detected
//! idler intensity is that propagated product plus a position-independent
//! spontaneous background proportional to the integrated pump intensity.
//! Conjugating the auxiliary field is what makes the idler a phase-conjugate
//! beam: in the far field its pattern is the mirror image of the pattern the
//! un-conjugated product would produce.

use crate::error::{Error, Result};
use crate::field::{multiply_fields, ComplexField, IntensityMap};
use crate::propagation::{propagate_fresnel, PropagationMethod};

/// Mixing parameters: idler wavelength, stimulated amplitude gain, and the
/// weight of the spontaneous background term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalMixParams {
    pub idler_wavelength: f64,
    pub gain: f64,
    pub spontaneous_weight: f64,
}

impl CrystalMixParams {
    pub fn new(idler_wavelength: f64, gain: f64, spontaneous_weight: f64) -> Result<Self> {
        let params = CrystalMixParams {
            idler_wavelength,
            gain,
            spontaneous_weight,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.idler_wavelength > 0.0 && self.idler_wavelength.is_finite()) {
            return Err(Error::InvalidCrystalParams(format!(
                "idler wavelength must be positive, got {}",
                self.idler_wavelength
            )));
        }
        if !(self.gain >= 0.0 && self.gain.is_finite()) {
            return Err(Error::InvalidCrystalParams(format!(
                "gain must be >= 0, got {}",
                self.gain
            )));
        }
        if !(self.spontaneous_weight >= 0.0 && self.spontaneous_weight.is_finite()) {
            return Err(Error::InvalidCrystalParams(format!(
                "spontaneous weight must be >= 0, got {}",
                self.spontaneous_weight
            )));
        }
        Ok(())
    }
}

/// Stimulated idler source at the crystal plane:
/// `gain * pump * conj(aux)`, tagged with the idler wavelength.
pub fn idler_source_field(
    pump: &ComplexField,
    aux: &ComplexField,
    params: &CrystalMixParams,
) -> Result<ComplexField> {
    params.validate()?;
    let product = multiply_fields(pump, &aux.conjugated(), params.idler_wavelength)?;
    Ok(product.scaled(params.gain.into()))
}

/// Idler intensity at the plane `z` meters downstream of the crystal:
/// the propagated stimulated term plus the uniform spontaneous background
/// `spontaneous_weight * integral |W_p|^2`.
pub fn idler_intensity_at_plane(
    pump: &ComplexField,
    aux: &ComplexField,
    z: f64,
    params: &CrystalMixParams,
    method: PropagationMethod,
) -> Result<IntensityMap> {
    let source = idler_source_field(pump, aux, params)?;
    let background = params.spontaneous_weight * pump.total_power();
    let mut map = if params.gain == 0.0 {
        // Nothing stimulated to propagate.
        ComplexField::uniform(source.grid(), 0.0.into(), params.idler_wavelength)?
            .intensity_map(z)
    } else {
        propagate_fresnel(&source, z, method)?.intensity_map(z)
    };
    if background > 0.0 {
        map.values_mut().mapv_inplace(|v| v + background);
    }
    Ok(map)
}

/// Peak of the propagated stimulated term divided by the spontaneous
/// background at plane `z`. Returns infinity when the background weight is
/// zero but the stimulated term is not.
pub fn stimulated_to_spontaneous_ratio(
    pump: &ComplexField,
    aux: &ComplexField,
    z: f64,
    params: &CrystalMixParams,
    method: PropagationMethod,
) -> Result<f64> {
    let peak = stimulated_peak(pump, aux, z, params, method)?;
    if peak == 0.0 {
        return Ok(0.0);
    }
    let background = params.spontaneous_weight * pump.total_power();
    if background == 0.0 {
        Ok(f64::INFINITY)
    } else {
        Ok(peak / background)
    }
}

/// Spontaneous weight that sets [`stimulated_to_spontaneous_ratio`] to
/// `target_ratio` for the given beams and plane.
pub fn spontaneous_weight_for_ratio(
    pump: &ComplexField,
    aux: &ComplexField,
    z: f64,
    gain: f64,
    idler_wavelength: f64,
    target_ratio: f64,
    method: PropagationMethod,
) -> Result<f64> {
    if !(target_ratio > 0.0 && target_ratio.is_finite()) {
        return Err(Error::InvalidCrystalParams(format!(
            "target ratio must be positive, got {target_ratio}"
        )));
    }
    let params = CrystalMixParams::new(idler_wavelength, gain, 0.0)?;
    let peak = stimulated_peak(pump, aux, z, &params, method)?;
    let pump_power = pump.total_power();
    if peak == 0.0 || pump_power == 0.0 {
        return Err(Error::InvalidCrystalParams(
            "cannot tune the spontaneous weight for a zero stimulated term".into(),
        ));
    }
    Ok(peak / (target_ratio * pump_power))
}

fn stimulated_peak(
    pump: &ComplexField,
    aux: &ComplexField,
    z: f64,
    params: &CrystalMixParams,
    method: PropagationMethod,
) -> Result<f64> {
    let source = idler_source_field(pump, aux, params)?;
    if params.gain == 0.0 || source.total_power() == 0.0 {
        return Ok(0.0);
    }
    Ok(propagate_fresnel(&source, z, method)?.intensity_map(z).max_value())
}
