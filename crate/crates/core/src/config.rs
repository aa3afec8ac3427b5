//! Bench configuration: a flat sectioned key-value format, its parser, and
//! the canonical renderer.
//!
//! The format is line oriented. `[section]` headers group `key = value`
//! pairs, `#` starts a full-line comment, and every length is in meters as a
//! decimal or scientific literal. Parsing collects every problem it can find
//! into one error so a config can be fixed in a single pass, and each message
//! carries the line it came from.
//!
//! ```text
//! [grid]
//! nx = 1024
//! ny = 1024
//! dx = 0.00001
//! dy = 0.00001
//!
//! [pump]
//! wavelength = 0.000000442
//!
//! [pump.mask]
//! kind = double_slit
//! slit_width = 0.0002
//! edge_gap = 0.0004
//! transmission_lower = 1
//! transmission_upper = 1
//! distance = 0.01
//!
//! [auxiliary]
//! wavelength = 0.000000845
//!
//! [crystal]
//! idler_wavelength = 0.000000925
//! gain = 1
//! spontaneous_weight = 0
//!
//! [detection]
//! distance = 0.8
//! ```

use std::cell::Cell;
use std::collections::BTreeMap;

use crate::elements::{CoveredSide, DoubleSlitSpec, KnifeEdgeSpec, DEFAULT_SLIT_LENGTH};
use crate::downconversion::CrystalMixParams;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::propagation::PropagationMethod;

pub const DEFAULT_OUTPUT_DIRECTORY: &str = "out";

/// A full bench description: grid, two input beams with optional masks, an
/// optional lens, the crystal mixing parameters, and the detection plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub grid: GridSpec,
    pub pump: BeamConfig,
    pub auxiliary: BeamConfig,
    pub lens: Option<LensConfig>,
    pub crystal: CrystalMixParams,
    /// Crystal-to-detection-plane distance in meters.
    pub detection_distance: f64,
    pub method: PropagationMethod,
    pub output_directory: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamConfig {
    pub wavelength: f64,
    /// Source amplitude in arbitrary units.
    pub amplitude: f64,
    /// `None` models a collimated beam much wider than the grid.
    pub waist: Option<f64>,
    pub mask: Option<MaskConfig>,
}

impl BeamConfig {
    pub fn uniform(wavelength: f64) -> Self {
        BeamConfig {
            wavelength,
            amplitude: 1.0,
            waist: None,
            mask: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaskConfig {
    /// Meters upstream of the crystal.
    pub distance: f64,
    pub element: MaskElement,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MaskElement {
    DoubleSlit(DoubleSlitSpec),
    KnifeEdge(KnifeEdgeSpec),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensConfig {
    pub beam: BeamId,
    pub focal_length: f64,
    /// Meters upstream of the crystal.
    pub distance: f64,
    pub axis: LensAxis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BeamId {
    Pump,
    Auxiliary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LensAxis {
    /// Ordinary lens curved along both axes.
    Spherical,
    /// Cylindrical lens acting on the vertical axis only.
    Vertical,
}

impl ExperimentConfig {
    /// Semantic checks for configs assembled in code; [`parse_config`] runs
    /// the same checks with line-level diagnostics.
    pub fn validate(&self) -> Result<()> {
        // The grid carries no check here: GridSpec is valid by construction.
        let mut errors = Vec::new();
        validate_beam(&self.pump, "pump", &mut errors);
        validate_beam(&self.auxiliary, "auxiliary", &mut errors);
        if let Some(lens) = &self.lens {
            if !(lens.focal_length != 0.0 && lens.focal_length.is_finite()) {
                errors.push("[lens]: focal_length must be nonzero and finite".into());
            }
            if !(lens.distance > 0.0 && lens.distance.is_finite()) {
                errors.push("[lens]: distance must be > 0".into());
            }
        }
        self.crystal.validate().err().push_to(&mut errors, "[crystal]");
        if !(self.detection_distance > 0.0 && self.detection_distance.is_finite()) {
            errors.push("[detection]: distance must be > 0".into());
        }
        if self.output_directory.is_empty() {
            errors.push("[output]: directory must not be empty".into());
        }
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errors))
        }
    }
}

fn validate_beam(beam: &BeamConfig, name: &str, errors: &mut Vec<String>) {
    if !(beam.wavelength > 0.0 && beam.wavelength.is_finite()) {
        errors.push(format!("[{name}]: wavelength must be > 0"));
    }
    if !(beam.amplitude > 0.0 && beam.amplitude.is_finite()) {
        errors.push(format!("[{name}]: amplitude must be > 0"));
    }
    if let Some(w) = beam.waist {
        if !(w > 0.0 && w.is_finite()) {
            errors.push(format!("[{name}]: waist must be > 0"));
        }
    }
    if let Some(mask) = &beam.mask {
        if !(mask.distance > 0.0 && mask.distance.is_finite()) {
            errors.push(format!("[{name}.mask]: distance must be > 0"));
        }
        match &mask.element {
            MaskElement::DoubleSlit(spec) => {
                spec.validate()
                    .err()
                    .push_to(errors, &format!("[{name}.mask]"));
            }
            MaskElement::KnifeEdge(spec) => {
                if !spec.edge_position.is_finite() {
                    errors.push(format!("[{name}.mask]: edge_position must be finite"));
                }
            }
        }
    }
}

trait PushTo {
    fn push_to(self, errors: &mut Vec<String>, context: &str);
}

impl PushTo for Option<Error> {
    fn push_to(self, errors: &mut Vec<String>, context: &str) {
        if let Some(e) = self {
            errors.push(format!("{context}: {e}"));
        }
    }
}

pub fn method_token(method: PropagationMethod) -> &'static str {
    match method {
        PropagationMethod::Auto => "auto",
        PropagationMethod::TransferFunction => "tf",
        PropagationMethod::ImpulseResponse => "ir",
    }
}

pub fn parse_method_token(token: &str) -> Option<PropagationMethod> {
    match token {
        "auto" => Some(PropagationMethod::Auto),
        "tf" => Some(PropagationMethod::TransferFunction),
        "ir" => Some(PropagationMethod::ImpulseResponse),
        _ => None,
    }
}

const SECTION_NAMES: [&str; 10] = [
    "grid",
    "pump",
    "pump.mask",
    "auxiliary",
    "auxiliary.mask",
    "lens",
    "crystal",
    "detection",
    "propagation",
    "output",
];

struct RawEntry {
    key: String,
    value: String,
    line: usize,
    used: Cell<bool>,
}

struct RawSection {
    line: usize,
    entries: Vec<RawEntry>,
}

/// Parses and validates a configuration document.
///
/// All diagnosable problems are reported together in an [`Error::Config`],
/// one `line N: ...` message per problem.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut errors: Vec<String> = Vec::new();
    let sections = split_sections(text, &mut errors);

    let grid = grid_section(&sections, &mut errors);
    let pump = beam_sections(&sections, "pump", &mut errors);
    let auxiliary = beam_sections(&sections, "auxiliary", &mut errors);
    let lens = lens_section(&sections, &mut errors);
    let crystal = crystal_section(&sections, &mut errors);
    let detection_distance = detection_section(&sections, &mut errors);
    let method = propagation_section(&sections, &mut errors);
    let output_directory = output_section(&sections, &mut errors);

    for (name, section) in &sections {
        for entry in &section.entries {
            if !entry.used.get() {
                errors.push(format!(
                    "line {}: unknown key `{}` in [{}]",
                    entry.line, entry.key, name
                ));
            }
        }
    }

    if !errors.is_empty() {
        errors.sort_by_key(|m| line_of(m));
        return Err(Error::Config(errors));
    }

    // Every extractor returned Some or pushed an error, so these unwraps
    // cannot fire once the error list is empty.
    Ok(ExperimentConfig {
        grid: grid.unwrap(),
        pump: pump.unwrap(),
        auxiliary: auxiliary.unwrap(),
        lens,
        crystal: crystal.unwrap(),
        detection_distance: detection_distance.unwrap(),
        method,
        output_directory,
    })
}

/// Line number referenced by a diagnostic, for sorting; section-level
/// messages without one sort first.
fn line_of(message: &str) -> usize {
    message
        .strip_prefix("line ")
        .and_then(|rest| rest.split(':').next())
        .and_then(|n| n.parse().ok())
        .unwrap_or(0)
}

fn split_sections(text: &str, errors: &mut Vec<String>) -> BTreeMap<String, RawSection> {
    let mut sections: BTreeMap<String, RawSection> = BTreeMap::new();
    // Key of the section currently being filled; None before any header or
    // inside a section being skipped (unknown or duplicate).
    let mut current: Option<String> = None;
    let mut skipping = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line.starts_with('[') {
            skipping = false;
            current = None;
            let name = match line.strip_suffix(']').map(|s| &s[1..]) {
                Some(name) if !name.is_empty() => name,
                _ => {
                    errors.push(format!("line {lineno}: malformed section header `{line}`"));
                    skipping = true;
                    continue;
                }
            };
            if !SECTION_NAMES.contains(&name) {
                errors.push(format!("line {lineno}: unknown section [{name}]"));
                skipping = true;
                continue;
            }
            if sections.contains_key(name) {
                errors.push(format!("line {lineno}: duplicate section [{name}]"));
                skipping = true;
                continue;
            }
            sections.insert(
                name.to_string(),
                RawSection {
                    line: lineno,
                    entries: Vec::new(),
                },
            );
            current = Some(name.to_string());
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(format!("line {lineno}: expected `key = value`, got `{line}`"));
            continue;
        };
        if skipping {
            continue;
        }
        let Some(section) = current.as_ref().and_then(|name| sections.get_mut(name)) else {
            errors.push(format!("line {lineno}: key outside any section"));
            continue;
        };
        let key = key.trim().to_string();
        if key.is_empty() {
            errors.push(format!("line {lineno}: empty key"));
            continue;
        }
        if section.entries.iter().any(|e| e.key == key) {
            errors.push(format!(
                "line {lineno}: duplicate key `{key}` in [{}]",
                current.as_deref().unwrap_or_default()
            ));
            continue;
        }
        section.entries.push(RawEntry {
            key,
            value: value.trim().to_string(),
            line: lineno,
            used: Cell::new(false),
        });
    }
    sections
}

/// Typed access to one section's entries. Every `take_*` marks the entry
/// used; entries never taken are reported as unknown keys afterwards.
struct SectionView<'a> {
    name: &'a str,
    line: usize,
    entries: &'a [RawEntry],
}

impl<'a> SectionView<'a> {
    fn get(sections: &'a BTreeMap<String, RawSection>, name: &'a str) -> Option<Self> {
        sections.get(name).map(|s| SectionView {
            name,
            line: s.line,
            entries: &s.entries,
        })
    }

    fn require(
        sections: &'a BTreeMap<String, RawSection>,
        name: &'a str,
        errors: &mut Vec<String>,
    ) -> Option<Self> {
        let view = Self::get(sections, name);
        if view.is_none() {
            errors.push(format!("missing required section [{name}]"));
        }
        view
    }

    fn take(&self, key: &str) -> Option<(&'a str, usize)> {
        self.entries.iter().find(|e| e.key == key).map(|e| {
            e.used.set(true);
            (e.value.as_str(), e.line)
        })
    }

    fn req_f64(&self, key: &str, errors: &mut Vec<String>) -> Option<f64> {
        match self.take(key) {
            Some(pair) => self.parse_f64(key, pair, errors),
            None => {
                errors.push(format!(
                    "line {}: [{}] is missing required key `{key}`",
                    self.line, self.name
                ));
                None
            }
        }
    }

    fn opt_f64(&self, key: &str, errors: &mut Vec<String>) -> Option<Option<f64>> {
        match self.take(key) {
            Some(pair) => self.parse_f64(key, pair, errors).map(Some),
            None => Some(None),
        }
    }

    fn parse_f64(
        &self,
        key: &str,
        (value, line): (&str, usize),
        errors: &mut Vec<String>,
    ) -> Option<f64> {
        match value.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                errors.push(format!(
                    "line {line}: `{key}` must be a finite number, got `{value}`"
                ));
                None
            }
        }
    }

    /// Required f64 that must be strictly positive (distances, widths,
    /// wavelengths).
    fn req_positive(&self, key: &str, errors: &mut Vec<String>) -> Option<f64> {
        let v = self.req_f64(key, errors)?;
        if v > 0.0 {
            Some(v)
        } else {
            errors.push(format!(
                "line {}: `{key}` must be > 0, got {v}",
                self.line_for(key)
            ));
            None
        }
    }

    fn req_usize(&self, key: &str, errors: &mut Vec<String>) -> Option<usize> {
        match self.take(key) {
            Some((value, line)) => match value.parse::<usize>() {
                Ok(v) => Some(v),
                Err(_) => {
                    errors.push(format!(
                        "line {line}: `{key}` must be a nonnegative integer, got `{value}`"
                    ));
                    None
                }
            },
            None => {
                errors.push(format!(
                    "line {}: [{}] is missing required key `{key}`",
                    self.line, self.name
                ));
                None
            }
        }
    }

    fn req_token(
        &self,
        key: &str,
        allowed: &[&str],
        errors: &mut Vec<String>,
    ) -> Option<(&'a str, usize)> {
        match self.take(key) {
            Some((value, line)) => {
                if allowed.contains(&value) {
                    Some((value, line))
                } else {
                    errors.push(format!(
                        "line {line}: `{key}` must be one of {}, got `{value}`",
                        allowed.join("|")
                    ));
                    None
                }
            }
            None => {
                errors.push(format!(
                    "line {}: [{}] is missing required key `{key}`",
                    self.line, self.name
                ));
                None
            }
        }
    }

    /// Line of an already-taken key, for follow-up diagnostics.
    fn line_for(&self, key: &str) -> usize {
        self.entries
            .iter()
            .find(|e| e.key == key)
            .map(|e| e.line)
            .unwrap_or(self.line)
    }
}

fn grid_section(
    sections: &BTreeMap<String, RawSection>,
    errors: &mut Vec<String>,
) -> Option<GridSpec> {
    let view = SectionView::require(sections, "grid", errors)?;
    let nx = view.req_usize("nx", errors);
    let ny = view.req_usize("ny", errors);
    let dx = view.req_positive("dx", errors);
    let dy = view.req_positive("dy", errors);
    match GridSpec::new(nx?, ny?, dx?, dy?) {
        Ok(grid) => Some(grid),
        Err(e) => {
            errors.push(format!("line {}: {e}", view.line));
            None
        }
    }
}

fn beam_sections(
    sections: &BTreeMap<String, RawSection>,
    name: &'static str,
    errors: &mut Vec<String>,
) -> Option<BeamConfig> {
    let view = SectionView::require(sections, name, errors)?;
    let wavelength = view.req_positive("wavelength", errors);
    let amplitude = match view.opt_f64("amplitude", errors)? {
        Some(a) if a > 0.0 => Some(a),
        Some(a) => {
            errors.push(format!(
                "line {}: `amplitude` must be > 0, got {a}",
                view.line_for("amplitude")
            ));
            None
        }
        None => Some(1.0),
    };
    let waist = match view.opt_f64("waist", errors)? {
        Some(w) if w > 0.0 => Some(Some(w)),
        Some(w) => {
            errors.push(format!(
                "line {}: `waist` must be > 0, got {w}",
                view.line_for("waist")
            ));
            None
        }
        None => Some(None),
    };
    let mask_name = match name {
        "pump" => "pump.mask",
        _ => "auxiliary.mask",
    };
    let mask = mask_section(sections, mask_name, errors);
    Some(BeamConfig {
        wavelength: wavelength?,
        amplitude: amplitude?,
        waist: waist?,
        mask: mask?,
    })
}

fn mask_section(
    sections: &BTreeMap<String, RawSection>,
    name: &'static str,
    errors: &mut Vec<String>,
) -> Option<Option<MaskConfig>> {
    let Some(view) = SectionView::get(sections, name) else {
        return Some(None);
    };
    let distance = view.req_positive("distance", errors);
    let kind = view.req_token("kind", &["double_slit", "knife_edge"], errors);
    let element = match kind {
        Some(("double_slit", _)) => {
            let slit_width = view.req_positive("slit_width", errors);
            let edge_gap = view.req_f64("edge_gap", errors);
            let t_lower = view.req_f64("transmission_lower", errors);
            let t_upper = view.req_f64("transmission_upper", errors);
            let slit_length = view.opt_f64("slit_length", errors)?;
            let spec = DoubleSlitSpec {
                slit_width: slit_width?,
                edge_gap: edge_gap?,
                transmissions: (t_lower?, t_upper?),
                slit_length: slit_length.unwrap_or(DEFAULT_SLIT_LENGTH),
            };
            match spec.validate() {
                Ok(()) => Some(MaskElement::DoubleSlit(spec)),
                Err(e) => {
                    errors.push(format!("line {}: {e}", view.line));
                    None
                }
            }
        }
        Some(("knife_edge", _)) => {
            let edge_position = view.req_f64("edge_position", errors);
            let covered = view.req_token("covered_side", &["below", "above"], errors);
            let covered_side = match covered {
                Some(("below", _)) => Some(CoveredSide::Below),
                Some(("above", _)) => Some(CoveredSide::Above),
                _ => None,
            };
            Some(MaskElement::KnifeEdge(KnifeEdgeSpec {
                edge_position: edge_position?,
                covered_side: covered_side?,
            }))
        }
        _ => None,
    };
    Some(Some(MaskConfig {
        distance: distance?,
        element: element?,
    }))
}

fn lens_section(
    sections: &BTreeMap<String, RawSection>,
    errors: &mut Vec<String>,
) -> Option<LensConfig> {
    let view = SectionView::get(sections, "lens")?;
    let beam = match view.req_token("beam", &["pump", "auxiliary"], errors) {
        Some(("pump", _)) => Some(BeamId::Pump),
        Some(("auxiliary", _)) => Some(BeamId::Auxiliary),
        _ => None,
    };
    let focal_length = match view.req_f64("focal_length", errors) {
        Some(f) if f != 0.0 => Some(f),
        Some(_) => {
            errors.push(format!(
                "line {}: `focal_length` must be nonzero",
                view.line_for("focal_length")
            ));
            None
        }
        None => None,
    };
    let distance = view.req_positive("distance", errors);
    let axis = match view.take("axis") {
        Some(("spherical", _)) => Some(LensAxis::Spherical),
        Some(("vertical", _)) => Some(LensAxis::Vertical),
        Some((other, line)) => {
            errors.push(format!(
                "line {line}: `axis` must be one of spherical|vertical, got `{other}`"
            ));
            None
        }
        None => Some(LensAxis::Spherical),
    };
    Some(LensConfig {
        beam: beam?,
        focal_length: focal_length?,
        distance: distance?,
        axis: axis?,
    })
}

fn crystal_section(
    sections: &BTreeMap<String, RawSection>,
    errors: &mut Vec<String>,
) -> Option<CrystalMixParams> {
    let view = SectionView::require(sections, "crystal", errors)?;
    let idler_wavelength = view.req_positive("idler_wavelength", errors);
    let gain = view.req_f64("gain", errors);
    let spontaneous_weight = view.req_f64("spontaneous_weight", errors);
    match CrystalMixParams::new(idler_wavelength?, gain?, spontaneous_weight?) {
        Ok(params) => Some(params),
        Err(e) => {
            errors.push(format!("line {}: {e}", view.line));
            None
        }
    }
}

fn detection_section(
    sections: &BTreeMap<String, RawSection>,
    errors: &mut Vec<String>,
) -> Option<f64> {
    let view = SectionView::require(sections, "detection", errors)?;
    view.req_positive("distance", errors)
}

fn propagation_section(
    sections: &BTreeMap<String, RawSection>,
    errors: &mut Vec<String>,
) -> PropagationMethod {
    let Some(view) = SectionView::get(sections, "propagation") else {
        return PropagationMethod::Auto;
    };
    match view.req_token("method", &["auto", "tf", "ir"], errors) {
        Some((token, _)) => parse_method_token(token).unwrap_or(PropagationMethod::Auto),
        None => PropagationMethod::Auto,
    }
}

fn output_section(sections: &BTreeMap<String, RawSection>, errors: &mut Vec<String>) -> String {
    let Some(view) = SectionView::get(sections, "output") else {
        return DEFAULT_OUTPUT_DIRECTORY.to_string();
    };
    match view.take("directory") {
        Some((value, line)) => {
            if value.is_empty() {
                errors.push(format!("line {line}: `directory` must not be empty"));
                DEFAULT_OUTPUT_DIRECTORY.to_string()
            } else {
                value.to_string()
            }
        }
        None => DEFAULT_OUTPUT_DIRECTORY.to_string(),
    }
}

/// Renders a config in the canonical section and key order. The output
/// parses back to an equal config: floats print in shortest round-trip form.
pub fn render_config(c: &ExperimentConfig) -> String {
    let mut out = String::new();
    let grid = c.grid;
    out.push_str(&format!(
        "[grid]\nnx = {}\nny = {}\ndx = {}\ndy = {}\n",
        grid.nx(),
        grid.ny(),
        grid.dx(),
        grid.dy()
    ));
    render_beam(&mut out, "pump", &c.pump);
    render_beam(&mut out, "auxiliary", &c.auxiliary);
    if let Some(lens) = &c.lens {
        out.push_str(&format!(
            "\n[lens]\nbeam = {}\nfocal_length = {}\ndistance = {}\naxis = {}\n",
            match lens.beam {
                BeamId::Pump => "pump",
                BeamId::Auxiliary => "auxiliary",
            },
            lens.focal_length,
            lens.distance,
            match lens.axis {
                LensAxis::Spherical => "spherical",
                LensAxis::Vertical => "vertical",
            }
        ));
    }
    out.push_str(&format!(
        "\n[crystal]\nidler_wavelength = {}\ngain = {}\nspontaneous_weight = {}\n",
        c.crystal.idler_wavelength, c.crystal.gain, c.crystal.spontaneous_weight
    ));
    out.push_str(&format!(
        "\n[detection]\ndistance = {}\n",
        c.detection_distance
    ));
    out.push_str(&format!(
        "\n[propagation]\nmethod = {}\n",
        method_token(c.method)
    ));
    out.push_str(&format!("\n[output]\ndirectory = {}\n", c.output_directory));
    out
}

fn render_beam(out: &mut String, name: &str, beam: &BeamConfig) {
    out.push_str(&format!(
        "\n[{name}]\nwavelength = {}\namplitude = {}\n",
        beam.wavelength, beam.amplitude
    ));
    if let Some(w) = beam.waist {
        out.push_str(&format!("waist = {w}\n"));
    }
    if let Some(mask) = &beam.mask {
        out.push_str(&format!("\n[{name}.mask]\n"));
        match &mask.element {
            MaskElement::DoubleSlit(s) => {
                out.push_str(&format!(
                    "kind = double_slit\nslit_width = {}\nedge_gap = {}\n\
                     transmission_lower = {}\ntransmission_upper = {}\nslit_length = {}\n",
                    s.slit_width, s.edge_gap, s.transmissions.0, s.transmissions.1, s.slit_length
                ));
            }
            MaskElement::KnifeEdge(s) => {
                out.push_str(&format!(
                    "kind = knife_edge\nedge_position = {}\ncovered_side = {}\n",
                    s.edge_position,
                    match s.covered_side {
                        CoveredSide::Below => "below",
                        CoveredSide::Above => "above",
                    }
                ));
            }
        }
        out.push_str(&format!("distance = {}\n", mask.distance));
    }
}
