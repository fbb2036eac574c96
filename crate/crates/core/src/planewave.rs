//! Axial partial-wave expansion of a plane wave,
//! `exp(i kr cos(theta)) = sum_l (2l + 1) i^l j_l(kr) P_l(cos(theta))`,
//! truncated at finite order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{self, j_unchecked, legendre_unchecked};

/// Cosine grid size used by [`truncation_profile`].
pub const PROFILE_GRID: usize = 41;

/// Terms summed past the truncation order when estimating the tail.
const TAIL_TERMS: usize = 80;

/// A point `(kr, cos(theta))` of the expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionPoint {
    kr: f64,
    cos_theta: f64,
}

impl ExpansionPoint {
    pub fn new(kr: f64, cos_theta: f64) -> Result<Self> {
        if !(kr >= 0.0) || !kr.is_finite() {
            return Err(Error::Domain(format!("kr must be non-negative, got {kr}")));
        }
        if !(cos_theta.abs() <= 1.0) {
            return Err(Error::Domain(format!("cos(theta) must lie in [-1, 1], got {cos_theta}")));
        }
        Ok(ExpansionPoint { kr, cos_theta })
    }

    pub fn kr(&self) -> f64 {
        self.kr
    }

    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    /// `exp(i kr cos(theta))` evaluated directly, as `(re, im)`.
    pub fn exact(&self) -> (f64, f64) {
        let phase = self.kr * self.cos_theta;
        (phase.cos(), phase.sin())
    }
}

/// Partial sum through order `order` with an upper bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncatedSum {
    #[serde(rename = "L")]
    pub order: usize,
    pub real_part: f64,
    pub imag_part: f64,
    /// `sum_{l > L} (2l + 1) |j_l(kr)|`, which bounds the tail since `|P_l| <= 1`.
    pub tail_bound: f64,
}

impl TruncatedSum {
    pub fn error_against(&self, point: &ExpansionPoint) -> f64 {
        let (re, im) = point.exact();
        (self.real_part - re).hypot(self.imag_part - im)
    }

    /// False when the tail bound exceeds `tolerance`; the CLI reports this as a warning.
    pub fn is_converged(&self, tolerance: f64) -> bool {
        self.tail_bound <= tolerance
    }

    pub fn modulus(&self) -> f64 {
        self.real_part.hypot(self.imag_part)
    }
}

/// `j_l(kr)` with the `kr = 0` limit filled in.
fn bessel_j(l: usize, kr: f64) -> f64 {
    if kr == 0.0 {
        if l == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        j_unchecked(l, kr)
    }
}

/// `i^l` as `(re, im)`.
fn i_power(l: usize) -> (f64, f64) {
    match l % 4 {
        0 => (1.0, 0.0),
        1 => (0.0, 1.0),
        2 => (-1.0, 0.0),
        _ => (0.0, -1.0),
    }
}

fn tail_bound(kr: f64, order: usize) -> f64 {
    (order + 1..=order + TAIL_TERMS).map(|l| (2 * l + 1) as f64 * bessel_j(l, kr).abs()).sum()
}

/// Sum of the first `order + 1` partial waves at `point`.
pub fn expand_plane_wave(point: &ExpansionPoint, order: usize) -> Result<TruncatedSum> {
    let cap = specfun::l_max();
    if order > cap {
        return Err(Error::OrderTooLarge { l: order, cap });
    }
    let (mut re, mut im) = (0.0, 0.0);
    for l in 0..=order {
        let weight = (2 * l + 1) as f64 * bessel_j(l, point.kr) * legendre_unchecked(l, point.cos_theta);
        let (pr, pi) = i_power(l);
        re += pr * weight;
        im += pi * weight;
    }
    Ok(TruncatedSum { order, real_part: re, imag_part: im, tail_bound: tail_bound(point.kr, order) })
}

/// Largest error of the order-`order` sum against the direct exponential
/// over a `grid x grid` lattice of `kr in [0, kr_max]`, `cos(theta) in [-1, 1]`.
pub fn max_identity_error(kr_max: f64, grid: usize, order: usize) -> Result<f64> {
    let grid = grid.max(2);
    let mut worst = 0.0_f64;
    for i in 0..grid {
        let kr = kr_max * i as f64 / (grid - 1) as f64;
        for j in 0..grid {
            let u = -1.0 + 2.0 * j as f64 / (grid - 1) as f64;
            let point = ExpansionPoint::new(kr, u)?;
            worst = worst.max(expand_plane_wave(&point, order)?.error_against(&point));
        }
    }
    Ok(worst)
}

/// Smallest order whose error stays within `tolerance` over a uniform
/// [`PROFILE_GRID`]-point grid in `cos(theta)`.
pub fn truncation_profile(kr: f64, tolerance: f64) -> Result<usize> {
    if !(0.0..=100.0).contains(&kr) {
        return Err(Error::Domain(format!("profile needs 0 <= kr <= 100, got {kr}")));
    }
    if !(tolerance > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tolerance}")));
    }
    let cap = specfun::l_max();
    let points: Vec<ExpansionPoint> = (0..PROFILE_GRID)
        .map(|j| ExpansionPoint::new(kr, -1.0 + 2.0 * j as f64 / (PROFILE_GRID - 1) as f64))
        .collect::<Result<_>>()?;
    let mut sums = vec![(0.0, 0.0); points.len()];
    for l in 0..=cap {
        let jl = (2 * l + 1) as f64 * bessel_j(l, kr);
        let (pr, pi) = i_power(l);
        let mut worst = 0.0_f64;
        for (sum, p) in sums.iter_mut().zip(&points) {
            let w = jl * legendre_unchecked(l, p.cos_theta);
            sum.0 += pr * w;
            sum.1 += pi * w;
            let (re, im) = p.exact();
            worst = worst.max((sum.0 - re).hypot(sum.1 - im));
        }
        if worst <= tolerance {
            return Ok(l);
        }
    }
    Err(Error::CapExceeded { kr, tolerance, cap })
}
