//! Lowest eigenpairs of `-d^2/dr^2 + V` discretized with the three-point
//! Laplacian and hard walls at the grid ends.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::potential::PotentialProfile;
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Fewest contiguous unmasked samples a solve accepts.
pub const MIN_SAMPLES: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// One per eigenvalue, sampled on `grid` including the zero end values,
    /// normalized so that `sum psi^2 h = 1`.
    pub eigenvectors: Vec<Vec<f64>>,
    pub grid: Grid,
    /// Index of `grid.start` in the grid of the profile.
    pub offset: usize,
    pub step: f64,
    pub boundary: String,
}

impl EigenResult {
    /// `max |<psi_i, psi_j> - delta_ij|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let h = self.step;
        let mut worst = 0.0f64;
        for (i, a) in self.eigenvectors.iter().enumerate() {
            for (j, b) in self.eigenvectors.iter().enumerate().skip(i) {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() * h;
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - want).abs());
            }
        }
        worst
    }
}

/// Symmetric tridiagonal `T` with diagonal `diag` and constant
/// off-diagonal `off`.
struct Tridiag<'a> {
    diag: &'a [f64],
    off: f64,
}

impl Tridiag<'_> {
    fn len(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let b2 = self.off * self.off;
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            q = if i == 0 { a - x } else { a - x - b2 / q };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let lo = self.diag.iter().fold(f64::INFINITY, |a, &b| a.min(b)) - r;
        let hi = self.diag.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) + r;
        (lo, hi)
    }

    /// `k`-th smallest eigenvalue (0-based) by bisection.
    fn eigenvalue(&self, k: usize, lo: f64, hi: f64) -> f64 {
        let (mut lo, mut hi) = (lo, hi);
        let scale = lo.abs().max(hi.abs()).max(1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo < 4.0 * f64::EPSILON * scale {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solve `(T - shift) x = b` by Gaussian elimination with partial
    /// pivoting; `b` is overwritten with `x`.
    fn solve_shifted(&self, shift: f64, b: &mut [f64]) {
        let n = self.len();
        let norm = self.gershgorin().1.abs().max(self.gershgorin().0.abs()).max(1.0);
        let floor = f64::EPSILON * norm;
        let mut d: Vec<f64> = self.diag.iter().map(|a| a - shift).collect();
        let mut du = vec![self.off; n.saturating_sub(1)];
        let mut dl = du.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = floor;
                }
                let f = dl[i] / d[i];
                d[i + 1] -= f * du[i];
                b[i + 1] -= f * b[i];
                dl[i] = 0.0;
            } else {
                let f = d[i] / dl[i];
                d[i] = dl[i];
                let t = d[i + 1];
                d[i + 1] = du[i] - f * t;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du2[i];
                }
                du[i] = t;
                b.swap(i, i + 1);
                b[i + 1] -= f * b[i];
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = floor;
        }
        b[n - 1] /= d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
        }
    }
}

fn normalize(v: &mut [f64], h: f64) {
    let norm = (v.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
    let peak = v.iter().fold(0.0f64, |a, b| a.max(b.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-6 * peak) {
        if *first < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Solve on `values` taken as an unmasked run of samples with spacing `h`.
fn solve_run(values: &[f64], h: f64, n_states: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let interior = &values[1..values.len() - 1];
    let inv = 1.0 / (h * h);
    let diag: Vec<f64> = interior.iter().map(|v| 2.0 * inv + v).collect();
    if diag.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numerical("non-finite potential sample".into()));
    }
    let t = Tridiag { diag: &diag, off: -inv };
    let n = t.len();
    if n_states > n {
        return Err(Error::InsufficientGrid(format!("{n_states} states requested on {n} unknowns")));
    }
    let (lo, hi) = t.gershgorin();
    let cluster = 1e-3 * lo.abs().max(hi.abs());
    let mut vals = Vec::with_capacity(n_states);
    let mut vecs: Vec<Vec<f64>> = Vec::with_capacity(n_states);
    for k in 0..n_states {
        let lam = t.eigenvalue(k, lo, hi);
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.5 * (0.7 * i as f64 + k as f64).sin()).collect();
        for _ in 0..4 {
            t.solve_shifted(lam, &mut x);
            for (j, prev) in vecs.iter().enumerate() {
                let lj: f64 = vals[j];
                if (lj - lam).abs() <= cluster {
                    let dot: f64 = x.iter().zip(&prev[1..]).map(|(a, b)| a * b).sum::<f64>() * h;
                    for (a, b) in x.iter_mut().zip(&prev[1..]) {
                        *a -= dot * b;
                    }
                }
            }
            let norm = x.iter().map(|a| a * a).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::Numerical(format!("inverse iteration failed for state {k}")));
            }
            for a in x.iter_mut() {
                *a /= norm;
            }
        }
        let mut full = Vec::with_capacity(n + 2);
        full.push(0.0);
        full.extend_from_slice(&x);
        full.push(0.0);
        normalize(&mut full, h);
        vals.push(lam);
        vecs.push(full);
    }
    Ok((vals, vecs))
}

/// Lowest `n_states` eigenpairs on the whole grid of `p`, which must be
/// unmasked.
pub fn eigensolve(p: &PotentialProfile, n_states: usize) -> Result<EigenResult> {
    if let Some(i) = p.mask.iter().position(|&m| m) {
        return Err(Error::InsufficientGrid(format!(
            "sample {i} is masked; solve per cell instead"
        )));
    }
    solve_slice(&p.values, p.grid, 0, n_states)
}

/// Solve directly on samples `values` over `grid`.
pub fn eigensolve_values(values: &[f64], grid: Grid, n_states: usize) -> Result<EigenResult> {
    if values.len() != grid.count {
        return Err(Error::Domain("values and grid differ in length".into()));
    }
    solve_slice(values, grid, 0, n_states)
}

fn solve_slice(values: &[f64], grid: Grid, offset: usize, n_states: usize) -> Result<EigenResult> {
    if values.len() < MIN_SAMPLES {
        return Err(Error::InsufficientGrid(format!(
            "{} contiguous samples, need {MIN_SAMPLES}",
            values.len()
        )));
    }
    let (eigenvalues, eigenvectors) = solve_run(values, grid.step, n_states)?;
    Ok(EigenResult {
        eigenvalues,
        eigenvectors,
        grid,
        offset,
        step: grid.step,
        boundary: "hard_wall".into(),
    })
}

/// Maximal runs of unmasked samples as `(first, len)`.
pub fn unmasked_runs(mask: &[bool]) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = None;
    for (i, &m) in mask.iter().chain(std::iter::once(&true)).enumerate() {
        match (m, start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                runs.push((s, i - s));
                start = None;
            }
            _ => {}
        }
    }
    runs
}

/// Solve each unmasked run of at least [`MIN_SAMPLES`] samples as its own
/// hard-walled cell. Runs that are too short are skipped.
pub fn eigensolve_cells(p: &PotentialProfile, n_states: usize) -> Result<Vec<EigenResult>> {
    let runs: Vec<(usize, usize)> = unmasked_runs(&p.mask)
        .into_iter()
        .filter(|&(_, len)| len >= MIN_SAMPLES)
        .collect();
    if runs.is_empty() {
        return Err(Error::InsufficientGrid(format!("no unmasked run of {MIN_SAMPLES} samples")));
    }
    runs.par_iter()
        .map(|&(first, len)| {
            let grid = Grid::new(p.grid.at(first), p.grid.step, len)?;
            solve_slice(&p.values[first..first + len], grid, first, n_states)
        })
        .collect()
}

/// Fourth-order five-point second derivative at `i`.
pub(crate) fn d2_5pt(f: &[f64], i: usize, h: f64) -> f64 {
    (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h)
}

/// Fourth-order first derivative at every sample, one-sided at the ends.
pub fn derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "derivative needs five samples");
    let mut out = vec![0.0; n];
    let c = 12.0 * h;
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / c;
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / c;
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / c;
    }
    out[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / c;
    out[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / c;
    out
}

/// `sqrt(sum r_i^2 h)` of `r = -psi'' + V psi - c psi` over `2..n-3`,
/// with the five-point Laplacian.
pub fn operator_residual(values: &[f64], psi: &[f64], c: f64, h: f64) -> f64 {
    let n = psi.len();
    let mut acc = 0.0;
    for i in 2..n.saturating_sub(2) {
        let r = -d2_5pt(psi, i, h) + (values[i] - c) * psi[i];
        acc += r * r;
    }
    (acc * h).sqrt()
}

/// Residual of mode `k` of `res` under the five-point Laplacian, which
/// measures the discretization error of the three-point solve.
pub fn self_residual(p_values: &[f64], res: &EigenResult, k: usize) -> f64 {
    let v = &p_values[res.offset..res.offset + res.grid.count];
    operator_residual(v, &res.eigenvectors[k], res.eigenvalues[k], res.step)
}
