//! Sources and amplitude masks: Gaussian beams, double slits, knife edges.
//!
//! Slits are oriented horizontally and separated vertically, so diffraction
//! structure appears along the vertical axis that profiles are taken on.
//! Mask edges are hard; no sub-pixel anti-aliasing is attempted, and grids
//! should resolve a slit width with at least ~20 samples.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::ComplexField;
use crate::grid::GridSpec;

/// Pair of horizontal slits separated vertically.
///
/// `edge_gap` is the edge-to-edge separation, so the center-to-center spacing
/// is `edge_gap + slit_width`. `transmissions` are amplitude factors for the
/// lower (y < 0) and upper slit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleSlitSpec {
    pub slit_width: f64,
    pub edge_gap: f64,
    pub transmissions: (f64, f64),
    /// Horizontal slit extent.
    pub slit_length: f64,
}

pub const DEFAULT_SLIT_LENGTH: f64 = 5e-3;

impl DoubleSlitSpec {
    pub fn new(slit_width: f64, edge_gap: f64, transmissions: (f64, f64)) -> Result<Self> {
        let spec = DoubleSlitSpec {
            slit_width,
            edge_gap,
            transmissions,
            slit_length: DEFAULT_SLIT_LENGTH,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_slit_length(mut self, slit_length: f64) -> Result<Self> {
        self.slit_length = slit_length;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.slit_width > 0.0 && self.slit_width.is_finite()) {
            return Err(Error::ElementOutsideGrid(format!(
                "slit width must be positive, got {}",
                self.slit_width
            )));
        }
        if !(self.edge_gap >= 0.0 && self.edge_gap.is_finite()) {
            return Err(Error::ElementOutsideGrid(format!(
                "slit gap must be >= 0, got {}",
                self.edge_gap
            )));
        }
        let (t1, t2) = self.transmissions;
        if !((0.0..=1.0).contains(&t1) && (0.0..=1.0).contains(&t2)) {
            return Err(Error::ElementOutsideGrid(format!(
                "transmissions must lie in [0, 1], got ({t1}, {t2})"
            )));
        }
        if !(self.slit_length > 0.0 && self.slit_length.is_finite()) {
            return Err(Error::ElementOutsideGrid(format!(
                "slit length must be positive, got {}",
                self.slit_length
            )));
        }
        Ok(())
    }

    /// Center-to-center slit spacing, the `d` of fringe-period formulas.
    pub fn center_spacing(&self) -> f64 {
        self.edge_gap + self.slit_width
    }

    /// Vertical half-extent of the whole pattern.
    pub fn half_extent(&self) -> f64 {
        self.edge_gap / 2.0 + self.slit_width
    }
}

/// Half-plane amplitude mask with a horizontal edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KnifeEdgeSpec {
    /// Vertical coordinate of the blade edge.
    pub edge_position: f64,
    pub covered_side: CoveredSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoveredSide {
    /// Blocks y >= edge_position.
    Above,
    /// Blocks y < edge_position.
    Below,
}

/// `amplitude * exp(-rho^2 / waist^2)` with flat phase, centered on axis.
pub fn gaussian_source(
    grid: GridSpec,
    waist: f64,
    wavelength: f64,
    amplitude: f64,
) -> Result<ComplexField> {
    if !(waist > 0.0 && waist.is_finite()) {
        return Err(Error::Undersampled(format!(
            "waist must be positive, got {waist}"
        )));
    }
    let min_waist = 4.0 * grid.dx().max(grid.dy());
    if waist < min_waist {
        return Err(Error::Undersampled(format!(
            "waist {waist} m needs at least 4 samples per radius; minimum on this grid is \
             {min_waist} m"
        )));
    }
    if !amplitude.is_finite() {
        return Err(Error::InvalidField(format!(
            "non-finite source amplitude {amplitude}"
        )));
    }
    let inv_w2 = 1.0 / (waist * waist);
    ComplexField::from_fn(grid, wavelength, |x, y| {
        Complex64::new(amplitude * (-(x * x + y * y) * inv_w2).exp(), 0.0)
    })
}

/// Multiplies the field by the double-slit transmission pattern: `t_lower`
/// inside the lower slit, `t_upper` inside the upper slit, zero elsewhere.
pub fn apply_double_slit(f: &ComplexField, spec: &DoubleSlitSpec) -> Result<ComplexField> {
    spec.validate()?;
    let grid = f.grid();
    let (ex, ey) = grid.extent();
    if spec.half_extent() > ey / 2.0 || spec.slit_length / 2.0 > ex / 2.0 {
        return Err(Error::ElementOutsideGrid(format!(
            "double slit spans {:.3e} x {:.3e} m on a {:.3e} x {:.3e} m grid",
            spec.slit_length,
            2.0 * spec.half_extent(),
            ex,
            ey
        )));
    }
    let center = spec.center_spacing() / 2.0;
    let half_w = spec.slit_width / 2.0;
    let half_len = spec.slit_length / 2.0;
    let (t_lower, t_upper) = spec.transmissions;

    let mut out = f.clone();
    for (j, mut row) in out.amplitude_mut().rows_mut().into_iter().enumerate() {
        let y = grid.y_at(j);
        let t = if (y + center).abs() < half_w {
            t_lower
        } else if (y - center).abs() < half_w {
            t_upper
        } else {
            0.0
        };
        for (i, v) in row.iter_mut().enumerate() {
            let inside = grid.x_at(i).abs() < half_len;
            *v *= if inside { t } else { 0.0 };
        }
    }
    Ok(out)
}

/// Zeroes the field on the covered side of the blade edge.
///
/// `Below` blocks `y < edge`, `Above` blocks `y >= edge`; with the edge on
/// the axis of an even grid each variant keeps exactly half the rows.
pub fn apply_knife_edge(f: &ComplexField, spec: &KnifeEdgeSpec) -> Result<ComplexField> {
    let grid = f.grid();
    let half = grid.extent().1 / 2.0;
    if !spec.edge_position.is_finite() || spec.edge_position.abs() > half {
        return Err(Error::ElementOutsideGrid(format!(
            "knife edge at {} m lies outside the grid half-extent {half} m",
            spec.edge_position
        )));
    }
    let mut out = f.clone();
    for (j, mut row) in out.amplitude_mut().rows_mut().into_iter().enumerate() {
        let y = grid.y_at(j);
        let covered = match spec.covered_side {
            CoveredSide::Below => y < spec.edge_position,
            CoveredSide::Above => y >= spec.edge_position,
        };
        if covered {
            row.fill(Complex64::default());
        }
    }
    Ok(out)
}
