use proptest::prelude::*;

use cavityspec::format::fmt_f64;
use cavityspec::planewave::{expand_plane_wave, ExpansionPoint};
use cavityspec::radial_oracle;
use cavityspec::roots::{find_root, Bracket, DEFAULT_TOL};
use cavityspec::specfun::{legendre_p, sph_bessel_j, sph_bessel_j_deriv, sph_bessel_y, sph_bessel_y_deriv};
use cavityspec::spectra::{mode, CavitySpec, Convention};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wronskian(l in 0usize..=50, x in 0.1f64..100.0) {
        let w = sph_bessel_j(l, x).unwrap() * sph_bessel_y_deriv(l, x).unwrap()
            - sph_bessel_j_deriv(l, x).unwrap() * sph_bessel_y(l, x).unwrap();
        prop_assert!((w * x * x - 1.0).abs() < 1e-10, "l={} x={} w x^2={}", l, x, w * x * x);
    }

    #[test]
    fn three_term_recurrence(l in 1usize..=60, x in 0.05f64..120.0) {
        let c = (2 * l + 1) as f64 / x;
        let (a, b, d) = (sph_bessel_j(l - 1, x).unwrap(), sph_bessel_j(l, x).unwrap(), sph_bessel_j(l + 1, x).unwrap());
        let scale = a.abs().max((c * b).abs()).max(d.abs());
        prop_assert!((a + d - c * b).abs() <= 1e-10 * scale);
    }

    #[test]
    fn legendre_parity(l in 0usize..=100, u in -1.0f64..=1.0) {
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        let (p, q) = (legendre_p(l, u).unwrap(), legendre_p(l, -u).unwrap());
        prop_assert!((q - sign * p).abs() <= 1e-12 * p.abs().max(1.0));
        prop_assert!(p.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn plane_wave_reflection(kr in 0.0f64..10.0, u in -1.0f64..=1.0) {
        let a = expand_plane_wave(&ExpansionPoint::new(kr, u).unwrap(), 40).unwrap();
        let b = expand_plane_wave(&ExpansionPoint::new(kr, -u).unwrap(), 40).unwrap();
        prop_assert!((a.real_part - b.real_part).abs() <= 1e-12);
        prop_assert!((a.imag_part + b.imag_part).abs() <= 1e-12);
    }

    #[test]
    fn spectrum_monotone(n in 1usize..=8, l in 0usize..=6, eps in prop_oneof![Just(0.0), 0.01f64..0.6]) {
        let spec = CavitySpec::new(1.0, eps, Convention::CavityI).unwrap();
        let e = mode(&spec, n, l).unwrap().energy;
        prop_assert!(mode(&spec, n + 1, l).unwrap().energy > e);
        prop_assert!(mode(&spec, n, l + 1).unwrap().energy > e);
    }

    #[test]
    fn formatting_round_trips(x in prop::num::f64::NORMAL) {
        let parsed: f64 = fmt_f64(x).parse().unwrap();
        prop_assert!(((parsed - x) / x).abs() <= 1e-14);
    }

    #[test]
    fn cubic_roots(r in -5.0f64..5.0, a in 0.1f64..3.0, b in -2.0f64..2.0) {
        // (x - r)(x^2 + b x + a + b^2) has the single real root r
        let f = |x: f64| (x - r) * (x * x + b * x + a + b * b);
        let root = find_root(f, Bracket::new(f, -10.0, 10.0).unwrap(), DEFAULT_TOL).unwrap();
        prop_assert!((root - r).abs() <= 1e-11);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finite_difference_approaches_from_below(l in 0usize..=3, n in 1usize..=3, eps in prop_oneof![Just(0.0), 0.05f64..0.4]) {
        let spec = CavitySpec::new(1.0, eps, Convention::CavityI).unwrap();
        let exact = (mode(&spec, n, l).unwrap().k_r).powi(2);
        let coarse = radial_oracle::oracle_eigenvalues(&spec, l, n, 200, false).unwrap()[n - 1];
        let fine = radial_oracle::oracle_eigenvalues(&spec, l, n, 401, false).unwrap()[n - 1];
        prop_assert!(coarse < fine && fine < exact, "{} {} {}", coarse, fine, exact);
    }

    #[test]
    fn discrete_nodes(l in 0usize..=3, n in 1usize..=5, eps in prop_oneof![Just(0.0), 0.05f64..0.4]) {
        let spec = CavitySpec::new(1.0, eps, Convention::CavityI).unwrap();
        prop_assert_eq!(radial_oracle::oracle_node_count(&spec, l, n, 400).unwrap(), n - 1);
    }
}
