use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Complex scalar field sampled on a [`GridSpec`], tagged with the wavelength
/// it propagates at.
///
/// `amplitude` is stored row-major as `(ny, nx)`; element `[j, i]` belongs to
/// the point `(grid.x_at(i), grid.y_at(j))`. Values are field amplitudes in
/// arbitrary units; `|amplitude|^2` is intensity per unit area.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: GridSpec,
    wavelength: f64,
    amplitude: Array2<Complex64>,
}

impl ComplexField {
    /// Field with every sample equal to `fill`.
    pub fn uniform(grid: GridSpec, fill: Complex64, wavelength: f64) -> Result<Self> {
        check_wavelength(wavelength)?;
        if !fill.re.is_finite() || !fill.im.is_finite() {
            return Err(Error::InvalidField(format!("non-finite fill value {fill}")));
        }
        Ok(ComplexField {
            grid,
            wavelength,
            amplitude: Array2::from_elem((grid.ny(), grid.nx()), fill),
        })
    }

    /// Field built by evaluating `f(x, y)` at every lattice point.
    pub fn from_fn(
        grid: GridSpec,
        wavelength: f64,
        mut f: impl FnMut(f64, f64) -> Complex64,
    ) -> Result<Self> {
        check_wavelength(wavelength)?;
        let amplitude =
            Array2::from_shape_fn((grid.ny(), grid.nx()), |(j, i)| f(grid.x_at(i), grid.y_at(j)));
        let field = ComplexField {
            grid,
            wavelength,
            amplitude,
        };
        field.check_finite()?;
        Ok(field)
    }

    /// Wraps an existing amplitude array. Shape must match the grid.
    pub fn from_amplitude(
        grid: GridSpec,
        wavelength: f64,
        amplitude: Array2<Complex64>,
    ) -> Result<Self> {
        check_wavelength(wavelength)?;
        if amplitude.dim() != (grid.ny(), grid.nx()) {
            return Err(Error::InvalidField(format!(
                "amplitude shape {:?} does not match grid {} x {}",
                amplitude.dim(),
                grid.ny(),
                grid.nx()
            )));
        }
        let field = ComplexField {
            grid,
            wavelength,
            amplitude,
        };
        field.check_finite()?;
        Ok(field)
    }

    fn check_finite(&self) -> Result<()> {
        if self
            .amplitude
            .iter()
            .all(|a| a.re.is_finite() && a.im.is_finite())
        {
            Ok(())
        } else {
            Err(Error::InvalidField("non-finite amplitude sample".into()))
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn amplitude(&self) -> &Array2<Complex64> {
        &self.amplitude
    }

    pub(crate) fn amplitude_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.amplitude
    }

    /// Same samples re-tagged to a different wavelength.
    pub fn with_wavelength(&self, wavelength: f64) -> Result<Self> {
        check_wavelength(wavelength)?;
        Ok(ComplexField {
            grid: self.grid,
            wavelength,
            amplitude: self.amplitude.clone(),
        })
    }

    /// Total power `sum |a|^2 * dx * dy`.
    pub fn total_power(&self) -> f64 {
        self.amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.cell_area()
    }

    /// Pointwise complex conjugate; grid and wavelength unchanged.
    pub fn conjugated(&self) -> Self {
        ComplexField {
            grid: self.grid,
            wavelength: self.wavelength,
            amplitude: self.amplitude.mapv(|a| a.conj()),
        }
    }

    /// Every sample multiplied by `factor`.
    pub fn scaled(&self, factor: Complex64) -> Self {
        ComplexField {
            grid: self.grid,
            wavelength: self.wavelength,
            amplitude: self.amplitude.mapv(|a| a * factor),
        }
    }

    /// Intensity `|a|^2` on the same grid.
    pub fn intensity_map(&self, plane_distance: f64) -> IntensityMap {
        IntensityMap {
            grid: self.grid,
            plane_distance,
            values: self.amplitude.mapv(|a| a.norm_sqr()),
        }
    }

    /// Intensity along the central vertical line (the column at x = 0).
    pub fn vertical_profile(&self, plane_distance: f64) -> IntensityProfile {
        let col = self.grid.nx() / 2;
        let values = (0..self.grid.ny())
            .map(|j| self.amplitude[[j, col]].norm_sqr())
            .collect();
        IntensityProfile {
            positions: self.grid.y_coords(),
            values,
            plane_distance,
        }
    }
}

fn check_wavelength(wavelength: f64) -> Result<()> {
    if wavelength > 0.0 && wavelength.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidField(format!(
            "wavelength must be positive and finite, got {wavelength}"
        )))
    }
}

/// Pointwise product `a * b`, tagged with `out_wavelength`.
///
/// The output wavelength is explicit because the product of two fields is
/// generally a source term for a third beam that propagates with its own
/// wavevector.
pub fn multiply_fields(
    a: &ComplexField,
    b: &ComplexField,
    out_wavelength: f64,
) -> Result<ComplexField> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch(format!(
            "{:?} vs {:?}",
            a.grid, b.grid
        )));
    }
    ComplexField::from_amplitude(a.grid, out_wavelength, &a.amplitude * &b.amplitude)
}

/// Nonnegative intensity samples on a 2-D grid at a detection plane.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityMap {
    grid: GridSpec,
    plane_distance: f64,
    values: Array2<f64>,
}

impl IntensityMap {
    pub fn new(grid: GridSpec, plane_distance: f64, values: Array2<f64>) -> Result<Self> {
        if values.dim() != (grid.ny(), grid.nx()) {
            return Err(Error::InvalidField(format!(
                "intensity shape {:?} does not match grid {} x {}",
                values.dim(),
                grid.ny(),
                grid.nx()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidField(
                "intensity samples must be finite and >= 0".into(),
            ));
        }
        Ok(IntensityMap {
            grid,
            plane_distance,
            values,
        })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn plane_distance(&self) -> f64 {
        self.plane_distance
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }

    /// Intensity along the central vertical line.
    pub fn vertical_profile(&self) -> IntensityProfile {
        let col = self.grid.nx() / 2;
        IntensityProfile {
            positions: self.grid.y_coords(),
            values: (0..self.grid.ny()).map(|j| self.values[[j, col]]).collect(),
            plane_distance: self.plane_distance,
        }
    }

    /// Map mirrored through the origin: sample `(x, y)` takes the value at
    /// `(-x, -y)`.
    ///
    /// On a centered even lattice the mirror of index `i` is `(n - i) % n`;
    /// the single row/column at the negative edge has no positive partner and
    /// maps to itself.
    pub fn mirrored_through_origin(&self) -> IntensityMap {
        let (ny, nx) = self.values.dim();
        let values = Array2::from_shape_fn((ny, nx), |(j, i)| {
            self.values[[(ny - j) % ny, (nx - i) % nx]]
        });
        IntensityMap {
            grid: self.grid,
            plane_distance: self.plane_distance,
            values,
        }
    }
}

/// 1-D intensity samples along the vertical axis at a detection plane.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityProfile {
    positions: Vec<f64>,
    values: Vec<f64>,
    plane_distance: f64,
}

impl IntensityProfile {
    /// Positions must be strictly increasing and uniformly spaced (1e-6
    /// relative tolerance on the step); values must be finite and >= 0.
    pub fn new(positions: Vec<f64>, values: Vec<f64>, plane_distance: f64) -> Result<Self> {
        if positions.len() != values.len() {
            return Err(Error::InvalidField(format!(
                "profile length mismatch: {} positions vs {} values",
                positions.len(),
                values.len()
            )));
        }
        if positions.len() < 2 {
            return Err(Error::InvalidField(
                "profile needs at least two samples".into(),
            ));
        }
        let step = positions[1] - positions[0];
        if !(step > 0.0) {
            return Err(Error::InvalidField(
                "profile positions must be strictly increasing".into(),
            ));
        }
        for w in positions.windows(2) {
            let d = w[1] - w[0];
            if !(d > 0.0) || (d - step).abs() > 1e-6 * step {
                return Err(Error::InvalidField(
                    "profile positions must be uniformly spaced".into(),
                ));
            }
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidField(
                "profile values must be finite and >= 0".into(),
            ));
        }
        Ok(IntensityProfile {
            positions,
            values,
            plane_distance,
        })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn plane_distance(&self) -> f64 {
        self.plane_distance
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sample step (positions are uniform by construction).
    pub fn spacing(&self) -> f64 {
        self.positions[1] - self.positions[0]
    }

    /// Same values with every position divided by `scale` (> 0). Used to
    /// compare patterns whose spatial scale differs by a known factor.
    pub fn rescale_positions(&self, scale: f64) -> Result<IntensityProfile> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Analysis(format!(
                "position scale must be positive and finite, got {scale}"
            )));
        }
        Ok(IntensityProfile {
            positions: self.positions.iter().map(|p| p / scale).collect(),
            values: self.values.clone(),
            plane_distance: self.plane_distance,
        })
    }

    /// Linear interpolation at `y`; `None` outside the sampled range.
    pub fn sample_at(&self, y: f64) -> Option<f64> {
        let first = *self.positions.first().unwrap();
        let last = *self.positions.last().unwrap();
        if y < first || y > last {
            return None;
        }
        let t = (y - first) / self.spacing();
        let i = (t.floor() as usize).min(self.len() - 2);
        let frac = t - i as f64;
        Some(self.values[i] * (1.0 - frac) + self.values[i + 1] * frac)
    }
}
