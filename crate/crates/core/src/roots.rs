//! Bracketed root finding and the table of spherical Bessel zeros.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::specfun::{self, Order};

/// Default absolute tolerance on the bracket width.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Iteration limit for [`find_root`].
pub const MAX_ITERATIONS: usize = 200;

/// An interval `[lo, hi]` over which `f` changes sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Evaluate `f` at both ends and check for a sign change.
    pub fn new<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<Self> {
        Self::from_values(lo, hi, f(lo), f(hi))
    }

    pub fn from_values(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self> {
        let invalid = || Error::InvalidBracket { lo, hi, f_lo, f_hi };
        if !(lo < hi) || !(f_lo * f_hi < 0.0) {
            return Err(invalid());
        }
        Ok(Bracket { lo, hi, f_lo, f_hi })
    }
}

/// Brent's method: inverse quadratic / secant steps guarded by bisection.
///
/// Returns a point from a final bracket of width at most `tol`.
pub fn find_root<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let Bracket { lo, hi, f_lo, f_hi } = Bracket::from_values(bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi)?;

    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f_lo, f_hi);
    let (mut c, mut fc) = (b, fb);
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITERATIONS {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        // b is the best estimate, [b, c] brackets the root
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.25 * tol;
        let half = 0.5 * (c - b);
        // stop once the bracket is no wider than tol, or is a few ulps wide
        if fb == 0.0 || half.abs() <= 0.5 * tol || half.abs() <= 2.0 * f64::EPSILON * b.abs() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * half * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(half) };
        fb = f(b);
    }
    let (lo, hi) = if b < c { (b, c) } else { (c, b) };
    Err(Error::NoConvergence { iterations: MAX_ITERATIONS, lo, hi })
}

/// The `n`-th positive zero of `j_l` and `beta = x / pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselZero {
    pub n: usize,
    pub l: Order,
    pub x: f64,
    pub beta: f64,
}

/// Rows of zeros, one per order, each extended on demand.
fn zero_cache() -> &'static Mutex<HashMap<usize, Vec<f64>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Vec<f64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// First `count` positive zeros of `j_l`, in increasing order.
///
/// Zeros of `j_{l+1}` are bracketed by consecutive zeros of `j_l`, starting
/// from the exact zeros `n * pi` of `j_0`.
pub fn bessel_zeros(l: usize, count: usize) -> Result<Vec<f64>> {
    Order::new(l)?;
    let mut cache = zero_cache().lock().unwrap_or_else(|p| p.into_inner());
    zeros_locked(&mut cache, l, count)
}

fn zeros_locked(cache: &mut HashMap<usize, Vec<f64>>, l: usize, count: usize) -> Result<Vec<f64>> {
    if let Some(row) = cache.get(&l) {
        if row.len() >= count {
            return Ok(row[..count].to_vec());
        }
    }
    let row: Vec<f64> = if l == 0 {
        (1..=count).map(|n| n as f64 * PI).collect()
    } else {
        let below = zeros_locked(cache, l - 1, count + 1)?;
        let f = |x: f64| specfun::j_unchecked(l, x);
        below
            .windows(2)
            .map(|w| find_root(f, Bracket::new(f, w[0], w[1])?, DEFAULT_TOL))
            .collect::<Result<_>>()?
    };
    let out = row[..count].to_vec();
    let slot = cache.entry(l).or_default();
    if row.len() > slot.len() {
        *slot = row;
    }
    Ok(out)
}

/// The `n`-th (1-based) positive zero of `j_l`.
pub fn bessel_zero(n: usize, l: usize) -> Result<BesselZero> {
    if n == 0 {
        return Err(Error::Domain("zero index n is 1-based".into()));
    }
    let order = Order::new(l)?;
    if l == 0 {
        return Ok(BesselZero { n, l: order, x: n as f64 * PI, beta: n as f64 });
    }
    let x = bessel_zeros(l, n)?[n - 1];
    Ok(BesselZero { n, l: order, x, beta: x / PI })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain bisection on the closed form of j_1, independent of Brent and of
    /// the recurrence evaluator.
    fn bisect_j1_closed(mut lo: f64, mut hi: f64) -> f64 {
        let f = |x: f64| x.sin() / (x * x) - x.cos() / x;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn oracle_first_j1_zero() {
        let x = bisect_j1_closed(4.0, 5.0);
        assert!((x - 4.49340945790906).abs() < 1e-10);
    }

    #[test]
    fn cos_root() {
        let b = Bracket::new(f64::cos, 1.0, 2.0).unwrap();
        let x = find_root(f64::cos, b, 1e-12).unwrap();
        assert!((x - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn j0_root() {
        let f = |x: f64| specfun::sph_bessel_j(0, x).unwrap();
        let x = find_root(f, Bracket::new(f, 3.0, 4.0).unwrap(), 1e-12).unwrap();
        assert!((x - PI).abs() < 1e-12);
    }

    #[test]
    fn j1_root() {
        let f = |x: f64| specfun::sph_bessel_j(1, x).unwrap();
        let x = find_root(f, Bracket::new(f, 4.0, 5.0).unwrap(), 1e-12).unwrap();
        assert!((x - bisect_j1_closed(4.0, 5.0)).abs() < 1e-10);
    }

    #[test]
    fn invalid_brackets_rejected() {
        assert!(matches!(Bracket::new(f64::cos, 2.0, 3.0), Err(Error::InvalidBracket { .. })));
        assert!(matches!(Bracket::new(f64::cos, 2.0, 1.0), Err(Error::InvalidBracket { .. })));
        // zero at an endpoint is a degenerate bracket
        assert!(Bracket::new(|x| x, 0.0, 1.0).is_err());
        let bad = Bracket { lo: 0.0, hi: 1.0, f_lo: 1.0, f_hi: 2.0 };
        assert!(find_root(|x| x + 1.0, bad, 1e-12).is_err());
    }

    #[test]
    fn bracket_width_meets_tolerance() {
        let f = |x: f64| x * x * x - 2.0;
        let x = find_root(f, Bracket::new(f, 0.0, 2.0).unwrap(), 1e-12).unwrap();
        assert!((x - 2f64.cbrt()).abs() <= 1e-12);
    }

    #[test]
    fn zero_examples() {
        assert_eq!(bessel_zero(1, 0).unwrap().beta, 1.0);
        assert_eq!(bessel_zero(3, 0).unwrap().beta, 3.0);
        let z = bessel_zero(1, 1).unwrap();
        assert!((z.x - bisect_j1_closed(4.0, 5.0)).abs() < 1e-10);
        assert!((z.beta - 1.4302966531242027).abs() < 1e-10);
    }

    // 20-digit values from an independent high-precision evaluation.
    #[test]
    fn zeros_match_reference() {
        let reference: [(usize, [f64; 4]); 3] = [
            (1, [4.4934094579090641753, 7.7252518369377071642, 10.904121659428899827, 14.06619391283147348]),
            (2, [5.7634591968945497914, 9.0950113304763551563, 12.322940970566582052, 15.51460301088674823]),
            (3, [6.987932000500519959, 10.417118547379364763, 13.698023153249249, 16.923621285213839579]),
        ];
        for (l, xs) in reference {
            let got = bessel_zeros(l, 4).unwrap();
            for (g, want) in got.iter().zip(xs) {
                assert!((g - want).abs() < 1e-11, "l = {l}: {g} vs {want}");
            }
        }
    }

    #[test]
    fn zero_index_must_be_positive() {
        assert!(matches!(bessel_zero(0, 1), Err(Error::Domain(_))));
        assert!(bessel_zero(1, specfun::DEFAULT_L_MAX + 1).is_err());
    }
}
