//! Metrics extracted from 1-D intensity profiles: fringe spacing, centroid,
//! modulation visibility, and direct-vs-mirrored correlation.

use crate::error::{Error, Result};
use crate::field::IntensityProfile;

/// A refined local maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub position: f64,
    pub value: f64,
}

/// Interior local maxima with quadratic sub-sample refinement.
///
/// A sample qualifies when it is strictly larger than both neighbours. The
/// refined position fits a parabola through the three samples around the
/// peak; the offset is clamped to half a step so a degenerate fit cannot
/// throw the peak into a neighbouring cell.
fn local_maxima(p: &IntensityProfile) -> Vec<Peak> {
    let v = p.values();
    let y = p.positions();
    let dy = p.spacing();
    let mut peaks = Vec::new();
    for i in 1..v.len() - 1 {
        if v[i] > v[i - 1] && v[i] > v[i + 1] {
            let denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
            let mut offset = 0.0;
            if denom < 0.0 {
                offset = (0.5 * (v[i - 1] - v[i + 1]) / denom).clamp(-0.5, 0.5);
            }
            let value = v[i] - 0.25 * (v[i - 1] - v[i + 1]) * offset;
            peaks.push(Peak {
                position: y[i] + offset * dy,
                value,
            });
        }
    }
    peaks
}

/// Mean spacing of consecutive fringe maxima.
///
/// Qualifying maxima are the interior local maxima whose raw sample value
/// exceeds half the global maximum; at least three must be present.
pub fn fringe_spacing(p: &IntensityProfile) -> Result<f64> {
    let global = p.values().iter().cloned().fold(0.0, f64::max);
    if global <= 0.0 {
        return Err(Error::Analysis("profile has no intensity".into()));
    }
    let peaks: Vec<Peak> = local_maxima(p)
        .into_iter()
        .filter(|pk| pk.value > 0.5 * global)
        .collect();
    if peaks.len() < 3 {
        return Err(Error::Analysis(format!(
            "need at least 3 fringe maxima above half the global maximum, found {}",
            peaks.len()
        )));
    }
    let gaps: Vec<f64> = peaks.windows(2).map(|w| w[1].position - w[0].position).collect();
    Ok(gaps.iter().sum::<f64>() / gaps.len() as f64)
}

/// Intensity-weighted mean position.
pub fn centroid(p: &IntensityProfile) -> Result<f64> {
    let total: f64 = p.values().iter().sum();
    if total <= 0.0 {
        return Err(Error::Analysis(
            "centroid of a zero profile is undefined".into(),
        ));
    }
    let weighted: f64 = p
        .positions()
        .iter()
        .zip(p.values())
        .map(|(y, v)| y * v)
        .sum();
    Ok(weighted / total)
}

/// Modulation visibility around the strongest fringe:
/// `(max - min) / (max + min)` where `min` averages the two minima flanking
/// the global maximum. A minimum that runs off the end of the profile uses
/// the boundary sample.
pub fn visibility(p: &IntensityProfile) -> Result<f64> {
    let v = p.values();
    let (imax, &vmax) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    if vmax <= 0.0 {
        return Err(Error::Analysis("profile has no intensity".into()));
    }
    let mut left = imax;
    while left > 0 && v[left - 1] < v[left] {
        left -= 1;
    }
    let mut right = imax;
    while right + 1 < v.len() && v[right + 1] < v[right] {
        right += 1;
    }
    if left == imax && right == imax {
        return Err(Error::Analysis(
            "profile is flat around its maximum".into(),
        ));
    }
    let vmin = 0.5 * (v[left] + v[right]);
    Ok((vmax - vmin) / (vmax + vmin))
}

/// Direct and mirrored Pearson correlations between two profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationPair {
    pub direct: f64,
    pub mirrored: f64,
}

/// Correlates `a` against `b` and against `b` mirrored through the origin.
///
/// Callers comparing beams of different wavelengths are expected to divide
/// the second profile's axis by the wavelength ratio first (see
/// [`IntensityProfile::rescale_positions`]); this function only handles the
/// overlap and resampling. Both comparisons use the same axis, the
/// intersection of `a`, `b`, and mirrored `b`, so the two coefficients are
/// computed from identical sample counts.
pub fn mirror_correlation(a: &IntensityProfile, b: &IntensityProfile) -> Result<CorrelationPair> {
    let pd = a.plane_distance();
    if (pd - b.plane_distance()).abs() > 1e-12 * pd.abs().max(1.0) {
        return Err(Error::Analysis(format!(
            "profiles are at different planes: {} m vs {} m",
            pd,
            b.plane_distance()
        )));
    }
    let (a_lo, a_hi) = (a.positions()[0], *a.positions().last().unwrap());
    let (b_lo, b_hi) = (b.positions()[0], *b.positions().last().unwrap());
    let lo = a_lo.max(b_lo).max(-b_hi);
    let hi = a_hi.min(b_hi).min(-b_lo);
    if !(hi > lo) {
        return Err(Error::Analysis(
            "profiles do not overlap on a common axis".into(),
        ));
    }
    const SAMPLES: usize = 512;
    let step = (hi - lo) / (SAMPLES - 1) as f64;
    let mut va = Vec::with_capacity(SAMPLES);
    let mut vb = Vec::with_capacity(SAMPLES);
    let mut vm = Vec::with_capacity(SAMPLES);
    for k in 0..SAMPLES {
        let y = lo + k as f64 * step;
        // All three lookups are in range by construction of [lo, hi];
        // clamp guards the float edge cases at the interval ends.
        let y = y.clamp(lo, hi);
        va.push(a.sample_at(y).unwrap_or(0.0));
        vb.push(b.sample_at(y).unwrap_or(0.0));
        vm.push(b.sample_at(-y).unwrap_or(0.0));
    }
    let direct = pearson(&va, &vb)?;
    let mirrored = pearson(&va, &vm)?;
    Ok(CorrelationPair { direct, mirrored })
}

fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(Error::Analysis(
            "correlation of a zero-variance profile is undefined".into(),
        ));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// The two tallest well-separated maxima, ordered by position.
///
/// The second peak is the tallest maximum at least `min_separation` away
/// from the first, so the two sides of a split pattern are picked up rather
/// than two samples of one broad lobe.
pub fn dominant_peaks(p: &IntensityProfile, min_separation: f64) -> Result<(Peak, Peak)> {
    if !(min_separation > 0.0 && min_separation.is_finite()) {
        return Err(Error::Analysis(format!(
            "minimum peak separation must be positive, got {min_separation}"
        )));
    }
    let peaks = local_maxima(p);
    let first = peaks
        .iter()
        .cloned()
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| Error::Analysis("profile has no interior maxima".into()))?;
    let second = peaks
        .iter()
        .cloned()
        .filter(|pk| (pk.position - first.position).abs() >= min_separation)
        .max_by(|a, b| a.value.total_cmp(&b.value))
        .ok_or_else(|| {
            Error::Analysis("no second maximum beyond the separation threshold".into())
        })?;
    if first.position <= second.position {
        Ok((first, second))
    } else {
        Ok((second, first))
    }
}
