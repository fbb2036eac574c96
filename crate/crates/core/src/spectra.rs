//! Energy spectra of the hard-walled sphere, with and without a central hard
//! core, in units of `h^2 / (8 M R^2)`.
//!
//! In these units a mode with wavenumber `k` has energy `(kR / pi)^2`, so
//! the `l = 0` levels of the bare sphere are the integers `n^2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;
use crate::roots::{self, Bracket};
use crate::specfun::{self, Order};

/// Label for the units of every dimensionless energy.
pub const ENERGY_UNITS: &str = "h^2/(8 M R^2)";

/// Planck constant in J s (exact SI value).
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Which cavity, and which formula for it, a spectrum refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Convention {
    /// Sphere with a hard core of radius `eps` (or the `eps -> 0+` limit).
    #[serde(rename = "i")]
    CavityI,
    /// Bare sphere, regular solution at the centre: `k R = beta pi`.
    #[serde(rename = "ii-conv")]
    CavityIIConventional,
    /// Bare sphere with the node spacing taken as the diameter: `k D = beta pi`.
    #[serde(rename = "ii-paper")]
    CavityIIPaper,
}

impl Convention {
    pub const ALL: [Convention; 3] =
        [Convention::CavityI, Convention::CavityIIConventional, Convention::CavityIIPaper];

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::CavityI => "i",
            Convention::CavityIIConventional => "ii-conv",
            Convention::CavityIIPaper => "ii-paper",
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "i" => Ok(Convention::CavityI),
            "ii-conv" => Ok(Convention::CavityIIConventional),
            "ii-paper" => Ok(Convention::CavityIIPaper),
            other => Err(Error::Domain(format!("unknown convention {other:?}"))),
        }
    }
}

/// How an [`EigenMode`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    Analytic,
    CrossProduct,
    FiniteDifference,
}

/// Cavity geometry plus the convention used to compute its spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavitySpec {
    outer_radius: f64,
    core_radius: f64,
    convention: Convention,
}

impl CavitySpec {
    pub fn new(outer_radius: f64, core_radius: f64, convention: Convention) -> Result<Self> {
        if !(outer_radius > 0.0) || !outer_radius.is_finite() {
            return Err(Error::Domain(format!("outer radius must be positive, got {outer_radius}")));
        }
        if !(core_radius >= 0.0 && core_radius < outer_radius) {
            return Err(Error::Domain(format!(
                "core radius must satisfy 0 <= eps < R, got eps = {core_radius}, R = {outer_radius}"
            )));
        }
        if convention != Convention::CavityI && core_radius != 0.0 {
            return Err(Error::Domain(format!(
                "convention {} describes a cavity without a core; eps must be 0",
                convention.as_str()
            )));
        }
        Ok(CavitySpec { outer_radius, core_radius, convention })
    }

    pub fn outer_radius(&self) -> f64 {
        self.outer_radius
    }

    pub fn core_radius(&self) -> f64 {
        self.core_radius
    }

    /// Always `2 R`.
    pub fn diameter(&self) -> f64 {
        2.0 * self.outer_radius
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }
}

/// One eigenstate: quantum numbers, dimensionless wavenumber `kR` and energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenMode {
    pub n: usize,
    pub l: usize,
    #[serde(rename = "kR")]
    pub k_r: f64,
    pub energy: f64,
    pub provenance: Provenance,
}

impl EigenMode {
    pub fn from_k_r(n: usize, l: usize, k_r: f64, provenance: Provenance) -> Self {
        let ratio = k_r / PI;
        EigenMode { n, l, k_r, energy: ratio * ratio, provenance }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("radial quantum number n starts at 1".into()));
    }
    Ok(())
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    Ok(())
}

/// `k = n pi / (R - a)`, the `l = 0` wavenumbers of the spherical shell `a < r < R`.
pub fn annulus_k_l0(n: usize, outer: f64, inner: f64) -> Result<f64> {
    check_n(n)?;
    check_radius(outer)?;
    if !(inner >= 0.0 && inner < outer) {
        return Err(Error::Domain(format!("need 0 <= a < R, got a = {inner}, R = {outer}")));
    }
    Ok(n as f64 * PI / (outer - inner))
}

/// Cross product `j_l(ka) y_l(kR) - y_l(ka) j_l(kR)`, divided by the
/// (never vanishing) modulus `hypot(j_l(ka), y_l(ka))`.
fn cross_product(l: usize, k: f64, outer: f64, inner: f64) -> f64 {
    let ja = specfun::j_unchecked(l, k * inner);
    let ya = specfun::y_unchecked(l, k * inner);
    let scale = ja.hypot(ya);
    (ja / scale) * specfun::y_unchecked(l, k * outer) - (ya / scale) * specfun::j_unchecked(l, k * outer)
}

/// The `n`-th wavenumber of the spherical shell `a < r < R` for any `l`.
///
/// Sign changes of the cross product are located by stepping `k (R - a)` in
/// increments of `pi / 8`, then refined with [`roots::find_root`].
pub fn annulus_k_general(n: usize, l: usize, outer: f64, inner: f64) -> Result<f64> {
    check_n(n)?;
    Order::new(l)?;
    check_radius(outer)?;
    if !(inner > 0.0 && inner < outer) {
        return Err(Error::Domain(format!(
            "cross-product solver needs 0 < a < R (use the Bessel-zero path for a = 0), got a = {inner}, R = {outer}"
        )));
    }
    let width = outer - inner;
    let step = PI / 8.0;
    let g = |t: f64| cross_product(l, t / width, outer, inner);

    if !specfun::y_unchecked(l, step / width * inner).is_finite() {
        return Err(Error::Overflow(format!("y_{l} overflows at the inner radius a = {inner}")));
    }

    let max_steps = 8 * (n + l + 20);
    let mut found = 0;
    let mut t_lo = step;
    let mut g_lo = g(t_lo);
    for i in 2..=max_steps {
        let t_hi = i as f64 * step;
        let g_hi = g(t_hi);
        if g_hi == 0.0 {
            found += 1;
            if found == n {
                return Ok(t_hi / width);
            }
        } else if g_lo * g_hi < 0.0 {
            found += 1;
            if found == n {
                let t = roots::find_root(g, Bracket::from_values(t_lo, t_hi, g_lo, g_hi)?, roots::DEFAULT_TOL)?;
                return Ok(t / width);
            }
        }
        t_lo = t_hi;
        g_lo = g_hi;
    }
    Err(Error::RootScan { wanted: n, found, from: step / width, to: max_steps as f64 * step / width })
}

/// `beta_{n,l}^2`: energy of Cavity-(i) in the `eps -> 0+` limit.
pub fn energy_cavity_i(n: usize, l: usize, outer: f64) -> Result<f64> {
    let spec = CavitySpec::new(outer, 0.0, Convention::CavityI)?;
    Ok(mode(&spec, n, l)?.energy)
}

/// `beta_{n,l}^2`: the bare sphere with the regular solution `j_l(kr)`.
pub fn energy_cavity_ii_conventional(n: usize, l: usize, outer: f64) -> Result<f64> {
    check_radius(outer)?;
    let beta = roots::bessel_zero(n, l)?.beta;
    Ok(beta * beta)
}

/// `beta_{n,l}^2 / 4`: the bare sphere with `k D = beta pi`, `D = 2R`.
pub fn energy_cavity_ii_paper(n: usize, l: usize, outer: f64) -> Result<f64> {
    check_radius(outer)?;
    let beta = roots::bessel_zero(n, l)?.beta;
    let diameter = 2.0 * outer;
    let scaled = beta * outer / diameter;
    Ok(scaled * scaled)
}

/// The mode `(n, l)` of `spec`.
pub fn mode(spec: &CavitySpec, n: usize, l: usize) -> Result<EigenMode> {
    check_n(n)?;
    let outer = spec.outer_radius();
    match spec.convention() {
        Convention::CavityI if spec.core_radius() > 0.0 => {
            let eps = spec.core_radius();
            if l == 0 {
                let k = annulus_k_l0(n, outer, eps)?;
                Ok(EigenMode::from_k_r(n, l, k * outer, Provenance::Analytic))
            } else {
                let k = annulus_k_general(n, l, outer, eps)?;
                Ok(EigenMode::from_k_r(n, l, k * outer, Provenance::CrossProduct))
            }
        }
        Convention::CavityI | Convention::CavityIIConventional => {
            let zero = roots::bessel_zero(n, l)?;
            Ok(EigenMode { n, l, k_r: zero.x, energy: zero.beta * zero.beta, provenance: Provenance::Analytic })
        }
        Convention::CavityIIPaper => {
            let zero = roots::bessel_zero(n, l)?;
            // k D = beta pi  =>  k R = beta pi R / D
            let scale = outer / spec.diameter();
            let beta = zero.beta * scale;
            Ok(EigenMode { n, l, k_r: zero.x * scale, energy: beta * beta, provenance: Provenance::Analytic })
        }
    }
}

/// All modes with `1 <= n <= n_max`, `0 <= l <= l_max`, ordered by `(l, n)`.
pub fn modes(spec: &CavitySpec, n_max: usize, l_max: usize) -> Result<Vec<EigenMode>> {
    (0..=l_max)
        .flat_map(|l| (1..=n_max).map(move |n| (n, l)))
        .map(|(n, l)| mode(spec, n, l))
        .collect()
}

/// Convert a dimensionless energy to joules for mass `M` (kg) and radius `R` (m).
pub fn energy_joules(energy: f64, mass_kg: f64, radius_m: f64) -> Result<f64> {
    if !(mass_kg > 0.0) || !(radius_m > 0.0) {
        return Err(Error::Domain("mass and radius must be positive for SI conversion".into()));
    }
    Ok(energy * PLANCK * PLANCK / (8.0 * mass_kg * radius_m * radius_m))
}

/// Geometry echoed into reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    #[serde(rename = "R")]
    pub outer_radius: f64,
    pub eps: f64,
    #[serde(rename = "D")]
    pub diameter: f64,
}

impl Geometry {
    pub fn new(outer_radius: f64, eps: f64) -> Result<Self> {
        CavitySpec::new(outer_radius, eps, Convention::CavityI)?;
        Ok(Geometry { outer_radius, eps, diameter: 2.0 * outer_radius })
    }
}

/// One `(n, l)` line of a [`SpectrumReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: usize,
    pub l: usize,
    pub e_i: f64,
    pub e_ii_conventional: f64,
    pub e_ii_paper: f64,
    pub ratio_paper_over_conventional: f64,
    /// Relative error of the finite-difference oracle against `e_i`, when computed.
    pub oracle_error: Option<f64>,
}

/// Side-by-side energies of the three conventions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub geometry: Geometry,
    pub units: String,
    pub rows: Vec<ReportRow>,
}

/// Compare Cavity-(i) (with core radius `eps`, possibly 0) against both
/// Cavity-(ii) formulas for every `n <= n_max`, `l <= l_max`.
pub fn equality_check(n_max: usize, l_max: usize, outer: f64, eps: f64) -> Result<SpectrumReport> {
    check_n(n_max)?;
    let geometry = Geometry::new(outer, eps)?;
    let cavity_i = CavitySpec::new(outer, eps, Convention::CavityI)?;
    let mut rows = Vec::with_capacity(n_max * (l_max + 1));
    for l in 0..=l_max {
        for n in 1..=n_max {
            let e_i = mode(&cavity_i, n, l)?.energy;
            let e_ii_conventional = energy_cavity_ii_conventional(n, l, outer)?;
            let e_ii_paper = energy_cavity_ii_paper(n, l, outer)?;
            rows.push(ReportRow {
                n,
                l,
                e_i,
                e_ii_conventional,
                e_ii_paper,
                ratio_paper_over_conventional: e_ii_paper / e_ii_conventional,
                oracle_error: None,
            });
        }
    }
    Ok(SpectrumReport { geometry, units: ENERGY_UNITS.to_string(), rows })
}

/// One core radius of an [`eps_convergence_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub eps: f64,
    #[serde(rename = "kR")]
    pub k_r: f64,
    /// `|kR - beta_{n,l} pi|`.
    pub abs_error: f64,
    pub rel_error: f64,
}

/// Shell wavenumbers `kR` for each core radius, and their distance from the
/// Bessel zero `beta_{n,l} pi` of the bare sphere.
///
/// For small cores the distance drops below the spacing of doubles near
/// `kR`, so it is obtained from the Riccati-Bessel phase instead of by
/// subtraction: with `theta_l' (z) = 1 / (z^2 (j_l^2 + y_l^2))`, the shift
/// `d = kR - x` solves
/// `int_x^{x+d} theta_l'(z) dz = -atan(j_l(k eps) / y_l(k eps))`.
pub fn eps_convergence_sweep(n: usize, l: usize, outer: f64, eps_list: &[f64]) -> Result<Vec<SweepPoint>> {
    let zero = roots::bessel_zero(n, l)?;
    let gl = GaussLegendre::new(12);
    eps_list
        .iter()
        .map(|&eps| {
            if !(eps > 0.0 && eps < outer) {
                return Err(Error::Domain(format!("sweep needs 0 < eps < R, got eps = {eps}, R = {outer}")));
            }
            let k_r = annulus_k_general(n, l, outer, eps)? * outer;
            let direct = (k_r - zero.x).abs();
            let abs_error = phase_shift(l, zero.x, eps / outer, &gl).unwrap_or(direct);
            Ok(SweepPoint { eps, k_r, abs_error, rel_error: abs_error / zero.x })
        })
        .collect()
}

/// `theta_l'(z)`, zero where `y_l` overflows.
fn phase_slope(l: usize, z: f64) -> f64 {
    let j = specfun::j_unchecked(l, z);
    let y = specfun::y_unchecked(l, z);
    let v = 1.0 / (z * z * (j * j + y * y));
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

/// Shift of the shell root above the Bessel zero `x` for core ratio `rho`.
/// `None` when the core phase is too large for the single-branch formula.
fn phase_shift(l: usize, x: f64, rho: f64, gl: &GaussLegendre) -> Option<f64> {
    let core_phase = |z: f64| {
        let w = z * rho;
        let (j, y) = (specfun::j_unchecked(l, w), specfun::y_unchecked(l, w));
        if y.is_finite() {
            (j / y).atan()
        } else {
            0.0
        }
    };
    if core_phase(x).abs() > 0.5 {
        return None;
    }
    // the integral is parametrized by the shift itself: x + shift rounds to x
    // once the shift falls below an ulp of x
    let mut shift = 0.0_f64;
    let mut step = f64::INFINITY;
    for _ in 0..50 {
        let z = x + shift;
        let residual = gl.integrate_span(|s| phase_slope(l, s), x, shift) + core_phase(z);
        let slope = phase_slope(l, z) - rho * phase_slope(l, z * rho);
        step = residual / slope;
        shift -= step;
        if step.abs() <= 1e-14 * shift.abs() || residual == 0.0 {
            break;
        }
    }
    (shift > 0.0 && step.abs() <= 1e-10 * shift.abs()).then_some(shift)
}
