//! Finite-difference eigensolver for the reduced radial equation
//! `-chi'' + l(l+1)/r^2 chi = k^2 chi` on `[eps, R]` with `chi = 0` at both
//! walls.
//!
//! This path shares no code with the Bessel evaluators or the root finder:
//! eigenvalues of the three-point operator come from Sturm-sequence
//! bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::{self, CavitySpec, Convention, EigenMode, Provenance, SpectrumReport};

/// Fewest interior points accepted by [`build_operator`].
pub const MIN_POINTS: usize = 16;

/// Uniform grid of interior nodes `r_i = r_min + i h`, `i = 1..=points`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    points: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(r_min >= 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::Domain(format!("grid needs 0 <= r_min < r_max, got [{r_min}, {r_max}]")));
        }
        if points == 0 {
            return Err(Error::GridTooCoarse { points, min: 1 });
        }
        Ok(RadialGrid { r_min, r_max, points })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        (self.r_max - self.r_min) / (self.points + 1) as f64
    }

    /// Interior node `i` (1-based).
    pub fn node(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.spacing()
    }

    /// The grid with exactly half the spacing (`2N + 1` interior points).
    pub fn refined(&self) -> Self {
        RadialGrid { points: 2 * self.points + 1, ..*self }
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalOperator {
    pub diagonal: Vec<f64>,
    pub off_diagonal: Vec<f64>,
}

impl TridiagonalOperator {
    /// Three-point discretization without the coarseness guard.
    pub fn assemble(l: usize, grid: &RadialGrid) -> Self {
        let h = grid.spacing();
        let inv_h2 = 1.0 / (h * h);
        let centrifugal = (l * (l + 1)) as f64;
        let diagonal = (1..=grid.points())
            .map(|i| {
                let r = grid.node(i);
                2.0 * inv_h2 + centrifugal / (r * r)
            })
            .collect();
        let off_diagonal = vec![-inv_h2; grid.points() - 1];
        TridiagonalOperator { diagonal, off_diagonal }
    }

    pub fn dim(&self) -> usize {
        self.diagonal.len()
    }

    /// Number of eigenvalues strictly below `lambda`: negative pivots of
    /// the `LDL^T` factorization of `T - lambda I`.
    pub fn count_below(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut pivot = 1.0;
        for (i, &d) in self.diagonal.iter().enumerate() {
            let coupling = if i == 0 { 0.0 } else { self.off_diagonal[i - 1].powi(2) / pivot };
            pivot = d - lambda - coupling;
            if pivot == 0.0 {
                pivot = -f64::EPSILON * (d.abs() + lambda.abs()).max(f64::MIN_POSITIVE);
            }
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off_diagonal[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off_diagonal[i].abs() } else { 0.0 };
            lo = lo.min(self.diagonal[i] - left - right);
            hi = hi.max(self.diagonal[i] + left + right);
        }
        (lo, hi)
    }

    /// Eigenvector for an eigenvalue estimate, by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.dim();
        let shift = lambda - 1e-10 * lambda.abs().max(1.0);
        let mut v = vec![1.0; n];
        for _ in 0..4 {
            v = self.solve_shifted(shift, &v);
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
        }
        v
    }

    /// Thomas algorithm for `(T - shift I) x = rhs`.
    fn solve_shifted(&self, shift: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        let guard = |p: f64| if p == 0.0 { f64::EPSILON } else { p };
        let mut pivot = guard(self.diagonal[0] - shift);
        c_prime[0] = if n > 1 { self.off_diagonal[0] / pivot } else { 0.0 };
        d_prime[0] = rhs[0] / pivot;
        for i in 1..n {
            let e = self.off_diagonal[i - 1];
            pivot = guard(self.diagonal[i] - shift - e * c_prime[i - 1]);
            c_prime[i] = if i + 1 < n { self.off_diagonal[i] / pivot } else { 0.0 };
            d_prime[i] = (rhs[i] - e * d_prime[i - 1]) / pivot;
        }
        let mut x = vec![0.0; n];
        x[n - 1] = d_prime[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = d_prime[i] - c_prime[i] * x[i + 1];
        }
        x
    }
}

/// Operator for order `l` on `grid`; rejects grids with fewer than
/// [`MIN_POINTS`] interior points.
pub fn build_operator(l: usize, grid: &RadialGrid) -> Result<TridiagonalOperator> {
    if grid.points() < MIN_POINTS {
        return Err(Error::GridTooCoarse { points: grid.points(), min: MIN_POINTS });
    }
    Ok(TridiagonalOperator::assemble(l, grid))
}

/// The `count` smallest eigenvalues, ascending, by Sturm bisection.
pub fn lowest_eigenvalues(op: &TridiagonalOperator, count: usize) -> Result<Vec<f64>> {
    if count > op.dim() {
        return Err(Error::Domain(format!("requested {count} eigenvalues of a {}x{} matrix", op.dim(), op.dim())));
    }
    let (lo, hi) = op.gershgorin();
    Ok((0..count).map(|k| kth_eigenvalue(op, k, lo, hi)).collect())
}

fn kth_eigenvalue(op: &TridiagonalOperator, k: usize, mut lo: f64, mut hi: f64) -> f64 {
    // invariant: count_below(lo) <= k < count_below(hi)
    hi += f64::EPSILON * hi.abs().max(1.0);
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 * lo.abs().max(hi.abs()) {
            return mid;
        }
        if op.count_below(mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Sign changes between consecutive entries, skipping near-zero entries.
pub fn count_sign_changes(values: &[f64]) -> usize {
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let mut last = 0.0;
    let mut changes = 0;
    for &v in values {
        if v.abs() <= 1e-12 * scale {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = v;
    }
    changes
}

/// `(4 fine - coarse) / 3`: removes the `h^2` term when the spacing is halved.
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Least-squares slope of `log(error)` against `log(h)`.
pub fn observed_order(spacings: &[f64], errors: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = spacings.iter().zip(errors).map(|(h, e)| (h.ln(), e.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn oracle_grid(spec: &CavitySpec, points: usize) -> Result<RadialGrid> {
    if spec.convention() == Convention::CavityIIPaper {
        return Err(Error::Domain(
            "the ii-paper spectrum is a formula evaluation with no boundary-value problem to discretize".into(),
        ));
    }
    RadialGrid::new(spec.core_radius(), spec.outer_radius(), points)
}

/// Lowest `count` eigenvalues `k^2` of the cavity for order `l`, optionally
/// Richardson-extrapolated from grids with `points` and `2 points + 1` nodes.
pub fn oracle_eigenvalues(spec: &CavitySpec, l: usize, count: usize, points: usize, extrapolate: bool) -> Result<Vec<f64>> {
    let grid = oracle_grid(spec, points)?;
    let coarse = lowest_eigenvalues(&build_operator(l, &grid)?, count)?;
    if !extrapolate {
        return Ok(coarse);
    }
    let fine = lowest_eigenvalues(&build_operator(l, &grid.refined())?, count)?;
    Ok(coarse.iter().zip(&fine).map(|(&c, &f)| richardson(c, f)).collect())
}

/// Finite-difference modes of `spec` for order `l`.
pub fn oracle_spectrum(spec: &CavitySpec, l: usize, count: usize, points: usize, extrapolate: bool) -> Result<Vec<EigenMode>> {
    let outer = spec.outer_radius();
    Ok(oracle_eigenvalues(spec, l, count, points, extrapolate)?
        .into_iter()
        .enumerate()
        .map(|(i, lambda)| EigenMode::from_k_r(i + 1, l, outer * lambda.sqrt(), Provenance::FiniteDifference))
        .collect())
}

/// Interior sign changes of the discrete eigenvector of mode `n`.
pub fn oracle_node_count(spec: &CavitySpec, l: usize, n: usize, points: usize) -> Result<usize> {
    let op = build_operator(l, &oracle_grid(spec, points)?)?;
    let lambda = *lowest_eigenvalues(&op, n)?.last().ok_or_else(|| Error::Domain("n starts at 1".into()))?;
    Ok(count_sign_changes(&op.eigenvector(lambda)))
}

/// Analytic and finite-difference `kR` side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub n: usize,
    pub l: usize,
    #[serde(rename = "kR_analytic")]
    pub k_r_analytic: f64,
    #[serde(rename = "kR_oracle")]
    pub k_r_oracle: f64,
    pub rel_error: f64,
}

pub fn compare(spec: &CavitySpec, l: usize, count: usize, points: usize, extrapolate: bool) -> Result<Vec<Comparison>> {
    let oracle = oracle_spectrum(spec, l, count, points, extrapolate)?;
    oracle
        .iter()
        .map(|fd| {
            let exact = spectra::mode(spec, fd.n, l)?;
            Ok(Comparison {
                n: fd.n,
                l,
                k_r_analytic: exact.k_r,
                k_r_oracle: fd.k_r,
                rel_error: ((fd.k_r - exact.k_r) / exact.k_r).abs(),
            })
        })
        .collect()
}

/// Fill `oracle_error` (relative energy error of the extrapolated oracle
/// against `e_i`) for every row of `report`.
pub fn attach_oracle_errors(report: &mut SpectrumReport, points: usize) -> Result<()> {
    let spec = CavitySpec::new(report.geometry.outer_radius, report.geometry.eps, Convention::CavityI)?;
    let l_max = report.rows.iter().map(|r| r.l).max().unwrap_or(0);
    let n_max = report.rows.iter().map(|r| r.n).max().unwrap_or(0);
    for l in 0..=l_max {
        let fd = oracle_spectrum(&spec, l, n_max, points, true)?;
        for row in report.rows.iter_mut().filter(|r| r.l == l) {
            let e = fd[row.n - 1].energy;
            row.oracle_error = Some(((e - row.e_i) / row.e_i).abs());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn three_point() -> TridiagonalOperator {
        TridiagonalOperator::assemble(0, &RadialGrid::new(0.0, 1.0, 3).unwrap())
    }

    #[test]
    fn three_point_laplacian_entries() {
        let op = three_point();
        assert_eq!(op.diagonal, vec![32.0; 3]);
        assert_eq!(op.off_diagonal, vec![-16.0; 2]);
    }

    #[test]
    fn three_point_centrifugal_entries() {
        let op = TridiagonalOperator::assemble(1, &RadialGrid::new(0.0, 1.0, 3).unwrap());
        for (d, r) in op.diagonal.iter().zip([0.25, 0.5, 0.75]) {
            assert!((d - (32.0 + 2.0 / (r * r))).abs() < 1e-12);
        }
    }

    #[test]
    fn three_point_eigenvalues_closed_form() {
        let got = lowest_eigenvalues(&three_point(), 3).unwrap();
        for (m, g) in (1..=3).zip(got) {
            let want = 32.0 * (1.0 - (m as f64 * PI / 4.0).cos());
            assert!(((g - want) / want).abs() < 1e-12, "m = {m}: {g} vs {want}");
        }
    }

    #[test]
    fn dirichlet_laplacian_matches_closed_form_at_large_n() {
        let grid = RadialGrid::new(0.0, 1.0, 500).unwrap();
        let op = build_operator(0, &grid).unwrap();
        let h = grid.spacing();
        let got = lowest_eigenvalues(&op, 5).unwrap();
        for (m, g) in (1..=5).zip(got) {
            let s = (m as f64 * PI * h / 2.0).sin();
            let want = 4.0 / (h * h) * s * s;
            assert!(((g - want) / want).abs() < 1e-11, "m = {m}: {g} vs {want}");
        }
    }

    #[test]
    fn continuum_limit_l0() {
        let op = build_operator(0, &RadialGrid::new(0.0, 1.0, 2000).unwrap()).unwrap();
        let got = lowest_eigenvalues(&op, 3).unwrap();
        for (m, g) in (1..=3).zip(got) {
            let want = (m as f64 * PI).powi(2);
            assert!(((g - want) / want).abs() < 1e-5);
        }
    }

    #[test]
    fn diagonal_shift_moves_spectrum() {
        let mut op = build_operator(2, &RadialGrid::new(0.1, 1.0, 40).unwrap()).unwrap();
        let before = lowest_eigenvalues(&op, 4).unwrap();
        op.diagonal.iter_mut().for_each(|d| *d += 7.5);
        let after = lowest_eigenvalues(&op, 4).unwrap();
        for (b, a) in before.iter().zip(&after) {
            assert!((a - b - 7.5).abs() < 1e-9 * a.abs());
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let grid = RadialGrid::new(0.0, 1.0, 15).unwrap();
        assert!(matches!(build_operator(0, &grid), Err(Error::GridTooCoarse { points: 15, min: 16 })));
        assert!(lowest_eigenvalues(&three_point(), 4).is_err());
    }

    #[test]
    fn oracle_examples() {
        let bare = CavitySpec::new(1.0, 0.0, Convention::CavityI).unwrap();
        let m = oracle_spectrum(&bare, 0, 1, 2000, true).unwrap()[0];
        assert!(((m.k_r - PI) / PI).abs() < 1e-8);
        assert_eq!(m.provenance, Provenance::FiniteDifference);

        let cored = CavitySpec::new(1.0, 0.2, Convention::CavityI).unwrap();
        let m = oracle_spectrum(&cored, 0, 1, 2000, true).unwrap()[0];
        assert!(((m.k_r - PI / 0.8) / (PI / 0.8)).abs() < 1e-8);

        let m = oracle_spectrum(&bare, 1, 1, 2000, true).unwrap()[0];
        assert!((m.k_r - 4.4934094579090641753).abs() < 1e-5);
    }

    #[test]
    fn paper_convention_has_no_oracle() {
        let spec = CavitySpec::new(1.0, 0.0, Convention::CavityIIPaper).unwrap();
        assert!(oracle_spectrum(&spec, 0, 1, 100, false).is_err());
    }

    #[test]
    fn eigenvector_nodes() {
        let spec = CavitySpec::new(1.0, 0.1, Convention::CavityI).unwrap();
        for l in 0..=3 {
            for n in 1..=4 {
                assert_eq!(oracle_node_count(&spec, l, n, 400).unwrap(), n - 1, "l = {l}, n = {n}");
            }
        }
    }

    #[test]
    fn sign_changes_skip_grazing_values() {
        assert_eq!(count_sign_changes(&[1.0, 0.0, -1.0, 1e-20, -2.0, 3.0]), 2);
        assert_eq!(count_sign_changes(&[]), 0);
    }

    #[test]
    fn observed_order_of_exact_power_law() {
        let hs = [0.1, 0.05, 0.025];
        let errs: Vec<f64> = hs.iter().map(|h| 3.0 * h * h).collect();
        assert!((observed_order(&hs, &errs) - 2.0).abs() < 1e-12);
    }
}
