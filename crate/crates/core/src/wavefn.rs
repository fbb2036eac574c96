//! Reduced radial wavefunctions `chi_l(r) = r R_l(r)` of cavity eigenmodes.
//!
//! `chi` is normalized on the radial line, `int |chi|^2 dr = 1`. The shell
//! amplitude is `R_l(r) = chi_l(r) / (sqrt(4 pi) r)`, so that
//! `|R_l|^2 4 pi r^2 = |chi_l|^2` and the shell probability also integrates
//! to one.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::simpson;
use crate::spectra::{CavitySpec, Convention, EigenMode};
use crate::specfun::{j_unchecked, y_unchecked};

/// Simpson panels used for normalization and overlaps.
pub const PANELS: usize = 10_000;

/// Samples used for node counting and the density identity.
pub const SCAN_POINTS: usize = 10_000;

/// Largest boundary residual, relative to `max |chi|`, accepted for a mode.
pub const BOUNDARY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    /// `sin(k (r - eps))`, the `l = 0` shell solution.
    Sine { eps: f64 },
    /// `r j_l(k r)`, regular at the origin.
    Regular,
    /// `r (y_l(kr) j_l(k eps) - j_l(kr) y_l(k eps))`, scaled by the modulus at `eps`.
    Shell { j_core: f64, y_core: f64 },
}

/// A normalized reduced radial function on `[r_min, r_max]`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiFunction {
    pub l: usize,
    pub n: usize,
    pub k: f64,
    pub r_min: f64,
    pub r_max: f64,
    /// `N` in `chi = N * shape`; positive.
    pub norm_constant: f64,
    shape: Shape,
}

impl ChiFunction {
    fn shape_at(&self, r: f64) -> f64 {
        if r <= self.r_min || r > self.r_max {
            return 0.0;
        }
        let kr = self.k * r;
        match self.shape {
            Shape::Sine { eps } => (self.k * (r - eps)).sin(),
            Shape::Regular => r * j_unchecked(self.l, kr),
            Shape::Shell { j_core, y_core } => {
                r * (y_unchecked(self.l, kr) * j_core - j_unchecked(self.l, kr) * y_core)
            }
        }
    }

    /// `chi_l(r)`.
    pub fn value(&self, r: f64) -> f64 {
        self.norm_constant * self.shape_at(r)
    }

    /// `R_l(r) = chi_l(r) / (sqrt(4 pi) r)`.
    pub fn radial(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        self.value(r) / ((4.0 * PI).sqrt() * r)
    }

    /// `|R_l(r)|^2`.
    pub fn radial_density(&self, r: f64) -> f64 {
        self.radial(r).powi(2)
    }

    /// A copy with `chi` multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        ChiFunction { norm_constant: self.norm_constant * factor, ..*self }
    }

    /// `int |chi|^2 dr` with `panels` Simpson panels.
    pub fn norm_integral(&self, panels: usize) -> f64 {
        simpson(|r| self.value(r).powi(2), self.r_min, self.r_max, panels)
    }

    /// `int |R_l|^2 4 pi r^2 dr`.
    pub fn shell_probability(&self) -> f64 {
        simpson(|r| self.radial_density(r) * 4.0 * PI * r * r, self.r_min, self.r_max, PANELS)
    }

    /// Evenly spaced points strictly inside the domain.
    fn interior(&self, count: usize) -> impl Iterator<Item = f64> + '_ {
        let h = (self.r_max - self.r_min) / (count + 1) as f64;
        (1..=count).map(move |i| self.r_min + i as f64 * h)
    }
}

/// Build the normalized `chi` of `mode` in `spec`.
pub fn build_mode_chi(spec: &CavitySpec, mode: &EigenMode) -> Result<ChiFunction> {
    if spec.convention() == Convention::CavityIIPaper {
        return Err(Error::Domain("the ii-paper spectrum defines no radial wavefunction".into()));
    }
    let outer = spec.outer_radius();
    let eps = spec.core_radius();
    let k = mode.k_r / outer;
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::Domain(format!("wavenumber must be positive, got kR = {}", mode.k_r)));
    }
    let shape = if eps == 0.0 {
        Shape::Regular
    } else if mode.l == 0 {
        Shape::Sine { eps }
    } else {
        let (j, y) = (j_unchecked(mode.l, k * eps), y_unchecked(mode.l, k * eps));
        if !y.is_finite() {
            return Err(Error::Overflow(format!("y_{}(k eps) overflows for eps = {eps}", mode.l)));
        }
        let scale = j.hypot(y);
        Shape::Shell { j_core: j / scale, y_core: y / scale }
    };
    let mut chi = ChiFunction { l: mode.l, n: mode.n, k, r_min: eps, r_max: outer, norm_constant: 1.0, shape };

    let peak = chi.interior(SCAN_POINTS).fold(0.0_f64, |m, r| m.max(chi.shape_at(r).abs()));
    let residual = chi.shape_at(outer).abs() / peak;
    if !(residual <= BOUNDARY_TOLERANCE) {
        return Err(Error::NotEigenmode { k, residual });
    }
    chi.norm_constant = 1.0 / chi.norm_integral(PANELS).sqrt();
    Ok(chi)
}

/// Largest pointwise deviation of `|R_l|^2 4 pi r^2` from `|chi|^2`,
/// relative to `|chi|^2`, over interior samples where `chi != 0`.
pub fn density_relation_check(chi: &ChiFunction) -> f64 {
    chi.interior(1000)
        .filter_map(|r| {
            let c2 = chi.value(r).powi(2);
            (c2 > 0.0).then(|| ((chi.radial_density(r) * 4.0 * PI * r * r - c2) / c2).abs())
        })
        .fold(0.0, f64::max)
}

/// Interior sign changes of `chi` on a uniform scan, ignoring values below
/// `1e-12` in magnitude.
pub fn count_nodes(chi: &ChiFunction) -> usize {
    let mut last = 0.0_f64;
    let mut nodes = 0;
    for r in chi.interior(SCAN_POINTS) {
        let v = chi.value(r);
        if v.abs() < 1e-12 {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            nodes += 1;
        }
        last = v;
    }
    nodes
}

/// `int chi_a chi_b dr` over the common domain.
pub fn overlap(a: &ChiFunction, b: &ChiFunction) -> f64 {
    let lo = a.r_min.max(b.r_min);
    let hi = a.r_max.min(b.r_max);
    simpson(|r| a.value(r) * b.value(r), lo, hi, PANELS)
}

/// One row of a wavefunction export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSample {
    pub r: f64,
    pub chi: f64,
    #[serde(rename = "R_l")]
    pub radial: f64,
    /// `|chi|^2`, the probability density along the radial line.
    pub density: f64,
}

/// `samples` evenly spaced points from `r_min` to `r_max` inclusive.
pub fn sample(chi: &ChiFunction, samples: usize) -> Vec<WaveSample> {
    let samples = samples.max(2);
    let h = (chi.r_max - chi.r_min) / (samples - 1) as f64;
    (0..samples)
        .map(|i| {
            let r = if i + 1 == samples { chi.r_max } else { chi.r_min + i as f64 * h };
            let c = chi.value(r);
            WaveSample { r, chi: c, radial: chi.radial(r), density: c * c }
        })
        .collect()
}
