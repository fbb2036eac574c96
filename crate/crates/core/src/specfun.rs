//! Spherical Bessel functions of the first and second kind and Legendre
//! polynomials, evaluated by three-term recurrences.
//!
//! `j_l` runs upward from the closed forms while `l <= x` and switches to a
//! normalized downward (Miller) recurrence when `l > x`, where the upward
//! direction loses precision. `y_l` is always computed upward.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

/// Default cap on the angular momentum order.
pub const DEFAULT_L_MAX: usize = 100;

static L_MAX: AtomicUsize = AtomicUsize::new(DEFAULT_L_MAX);

/// Current cap on `l` accepted by the public evaluators.
pub fn l_max() -> usize {
    L_MAX.load(Ordering::Relaxed)
}

/// Replace the process-wide cap on `l`.
pub fn set_l_max(cap: usize) {
    L_MAX.store(cap, Ordering::Relaxed);
}

/// Orbital angular momentum quantum number, validated against [`l_max`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(usize);

impl Order {
    pub fn new(l: usize) -> Result<Self> {
        check_order(l)?;
        Ok(Order(l))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Which special function a [`SpecialValue`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    BesselJ,
    BesselY,
    Legendre,
}

/// An evaluated special function together with its order and argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub kind: Kind,
    pub order: Order,
    pub argument: f64,
    pub value: f64,
}

impl SpecialValue {
    pub fn evaluate(kind: Kind, l: usize, argument: f64) -> Result<Self> {
        let order = Order::new(l)?;
        let value = match kind {
            Kind::BesselJ => sph_bessel_j(l, argument)?,
            Kind::BesselY => sph_bessel_y(l, argument)?,
            Kind::Legendre => legendre_p(l, argument)?,
        };
        Ok(SpecialValue { kind, order, argument, value })
    }
}

fn check_order(l: usize) -> Result<()> {
    let cap = l_max();
    if l > cap {
        return Err(Error::OrderTooLarge { l, cap });
    }
    Ok(())
}

fn check_argument(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "spherical Bessel argument must be positive and finite, got {x}"
        )));
    }
    Ok(())
}

/// Spherical Bessel function of the first kind, `j_l(x)`, for `x > 0`.
pub fn sph_bessel_j(l: usize, x: f64) -> Result<f64> {
    check_order(l)?;
    check_argument(x)?;
    Ok(j_unchecked(l, x))
}

/// Spherical Bessel function of the second kind, `y_l(x)`, for `x > 0`.
pub fn sph_bessel_y(l: usize, x: f64) -> Result<f64> {
    check_order(l)?;
    check_argument(x)?;
    let v = y_unchecked(l, x);
    if !v.is_finite() {
        return Err(Error::Overflow(format!("y_{l}({x}) exceeds the double range")));
    }
    Ok(v)
}

/// Derivative `j_l'(x)` from `j_l' = j_{l-1} - (l+1)/x j_l` (and `j_0' = -j_1`).
pub fn sph_bessel_j_deriv(l: usize, x: f64) -> Result<f64> {
    check_order(l)?;
    check_argument(x)?;
    Ok(deriv(l, x, j_unchecked))
}

/// Derivative `y_l'(x)`, same recurrence as [`sph_bessel_j_deriv`].
pub fn sph_bessel_y_deriv(l: usize, x: f64) -> Result<f64> {
    check_order(l)?;
    check_argument(x)?;
    let v = deriv(l, x, y_unchecked);
    if !v.is_finite() {
        return Err(Error::Overflow(format!("y_{l}'({x}) exceeds the double range")));
    }
    Ok(v)
}

fn deriv(l: usize, x: f64, f: fn(usize, f64) -> f64) -> f64 {
    if l == 0 {
        -f(1, x)
    } else {
        f(l - 1, x) - (l as f64 + 1.0) / x * f(l, x)
    }
}

/// Legendre polynomial `P_l(u)` for `|u| <= 1` by Bonnet's recurrence.
pub fn legendre_p(l: usize, u: f64) -> Result<f64> {
    check_order(l)?;
    if !(u.abs() <= 1.0) {
        return Err(Error::Domain(format!("Legendre argument must satisfy |u| <= 1, got {u}")));
    }
    Ok(legendre_unchecked(l, u))
}

pub(crate) fn legendre_unchecked(l: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, u);
    if l == 0 {
        return prev;
    }
    for k in 1..l {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * u * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

pub(crate) fn j_unchecked(l: usize, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    if l == 0 {
        return j0;
    }
    if (l as f64) <= x {
        let mut prev = j0;
        let mut cur = s / (x * x) - c / x;
        for k in 1..l {
            let next = (2 * k + 1) as f64 / x * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    } else {
        j_miller(l, x, j0, s / (x * x) - c / x)
    }
}

/// Starting order for the downward recurrence. The offset keeps the ratio
/// `j_start / j_l` below roughly 1e-17 (Debye decay past the turning point).
fn miller_start(l: usize, x: f64) -> usize {
    let offset = 0.5 * (120.0 * x.max(1.0).sqrt()).powf(2.0 / 3.0) + 10.0;
    l + offset.ceil() as usize
}

fn j_miller(l: usize, x: f64, j0: f64, j1: f64) -> f64 {
    const BIG: f64 = 1e250;
    let start = miller_start(l, x);
    let mut upper = 0.0; // f_{k+1}
    let mut cur = 1e-280; // f_k
    let mut at_l = 0.0;
    let mut f1 = 0.0;
    for k in (1..=start).rev() {
        let lower = (2 * k + 1) as f64 / x * cur - upper;
        upper = cur;
        cur = lower;
        if k - 1 == l {
            at_l = cur;
        }
        if k - 1 == 1 {
            f1 = cur;
        }
        if cur.abs() > BIG {
            cur /= BIG;
            upper /= BIG;
            at_l /= BIG;
            f1 /= BIG;
        }
    }
    // cur now holds f_0
    if j0.abs() >= j1.abs() {
        at_l * (j0 / cur)
    } else {
        at_l * (j1 / f1)
    }
}

pub(crate) fn y_unchecked(l: usize, x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    let y0 = -c / x;
    if l == 0 {
        return y0;
    }
    let mut prev = y0;
    let mut cur = -c / (x * x) - s / x;
    for k in 1..l {
        let next = (2 * k + 1) as f64 / x * cur - prev;
        prev = cur;
        cur = next;
        if !cur.is_finite() {
            return cur;
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn j0_closed_form_points() {
        assert!(sph_bessel_j(0, PI).unwrap().abs() < 1e-14);
        assert!(rel(sph_bessel_j(0, PI / 2.0).unwrap(), 2.0 / PI) < 1e-15);
    }

    #[test]
    fn j1_first_zero() {
        assert!(sph_bessel_j(1, 4.49340945790906).unwrap().abs() < 1e-10);
    }

    #[test]
    fn y0_closed_form_points() {
        assert!(sph_bessel_y(0, PI / 2.0).unwrap().abs() < 1e-14);
        assert!(rel(sph_bessel_y(0, PI).unwrap(), 1.0 / PI) < 1e-15);
    }

    #[test]
    fn y2_at_three_satisfies_wronskian() {
        let x = 3.0;
        let w = sph_bessel_j(2, x).unwrap() * sph_bessel_y_deriv(2, x).unwrap()
            - sph_bessel_j_deriv(2, x).unwrap() * sph_bessel_y(2, x).unwrap();
        assert!(rel(w, 1.0 / (x * x)) < 1e-12);
        // y_2(x) = (-3/x^3 + 1/x) cos x - 3/x^2 sin x
        let closed = (-3.0 / x.powi(3) + 1.0 / x) * x.cos() - 3.0 / (x * x) * x.sin();
        assert!(rel(sph_bessel_y(2, x).unwrap(), closed) < 1e-14);
    }

    // Reference values from an independent 40-digit evaluation of
    // sqrt(pi / 2x) J_{l+1/2}(x) and sqrt(pi / 2x) Y_{l+1/2}(x).
    const REFERENCE: &[(usize, f64, f64, f64)] = &[
        (0, 0.5, 0.95885107720840600055, -1.7551651237807454322),
        (1, 0.1, 0.033300011902557571571, -100.49875069427084703),
        (2, 3.0, 0.29863749707573354751, -0.26703833526449917565),
        (5, 1.0, 0.000092561158611258163567, -999.44034339223640949),
        (10, 2.5, 6.0504362296385397812e-7, -32423.794085334419855),
        (20, 15.0, 0.0015467058510412507907, -1.555996576565217559),
        (50, 0.1, 3.6326917273532343606e-131, -2.7255297893660272677e+129),
        (50, 60.0, -0.021230978268738994477, 0.0078198768555267006714),
        (50, 49.5, 0.016359018068367931683, -0.047146056940078537008),
        (30, 100.0, 0.0087006285144475758186, -0.0054129293488705718549),
        (3, 1e-4, 9.5238095185185198889e-15, -150000000149999971.37),
        (100, 99.0, 0.0086542978347495335372, -0.027596166540984616065),
    ];

    #[test]
    fn matches_reference_values() {
        for &(l, x, j, y) in REFERENCE {
            let got_j = sph_bessel_j(l, x).unwrap();
            let got_y = sph_bessel_y(l, x).unwrap();
            assert!(rel(got_j, j) < 1e-12, "j_{l}({x}) = {got_j}, want {j}");
            assert!(rel(got_y, y) < 1e-12, "y_{l}({x}) = {got_y}, want {y}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(sph_bessel_j(0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(sph_bessel_j(1, -1.0), Err(Error::Domain(_))));
        assert!(matches!(sph_bessel_y(0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(sph_bessel_j(DEFAULT_L_MAX + 1, 1.0), Err(Error::OrderTooLarge { .. })));
        assert!(matches!(legendre_p(2, 1.5), Err(Error::Domain(_))));
        assert!(matches!(legendre_p(2, f64::NAN), Err(Error::Domain(_))));
        assert!(Order::new(DEFAULT_L_MAX + 1).is_err());
    }

    #[test]
    fn y_overflow_is_reported() {
        assert!(matches!(sph_bessel_y(100, 1e-3), Err(Error::Overflow(_))));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre_p(0, 0.3).unwrap(), 1.0);
        assert_eq!(legendre_p(1, -0.5).unwrap(), -0.5);
        assert!((legendre_p(2, 0.5).unwrap() + 0.125).abs() < 1e-16);
    }

    #[test]
    fn legendre_endpoints_and_bound() {
        for l in 0..=100 {
            assert_eq!(legendre_p(l, 1.0).unwrap(), 1.0);
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(legendre_p(l, -1.0).unwrap(), sign);
            for i in 0..=200 {
                let u = -1.0 + i as f64 / 100.0;
                assert!(legendre_p(l, u).unwrap().abs() <= 1.0 + 1e-14);
            }
        }
    }

    #[test]
    fn small_argument_limit() {
        let x = 1e-4;
        let mut double_factorial = 1.0;
        for l in 0..=6usize {
            if l > 0 {
                double_factorial *= (2 * l + 1) as f64;
            }
            let ratio = sph_bessel_j(l, x).unwrap() / x.powi(l as i32);
            assert!(rel(ratio, 1.0 / double_factorial) < 1e-6, "l = {l}");
        }
    }

    #[test]
    fn special_value_bookkeeping() {
        let v = SpecialValue::evaluate(Kind::BesselJ, 0, PI / 2.0).unwrap();
        assert_eq!(v.order.get(), 0);
        assert_eq!(v.argument, PI / 2.0);
        assert!(rel(v.value, 2.0 / PI) < 1e-15);
    }
}
