//! Coupled-regime solutions `R' = A R` for an arbitrary `f2`, and the
//! disjoint-support profiles used at `[2m] = 0`.

use serde::{Deserialize, Serialize};

use super::eigen::derivative;
use super::potential::{casimir_w, kappa};
use super::realization::RadialProfile;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::qnum::Deformation;

/// Samples where `|f1|` is below this are masked out of the solve.
pub const F1_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoupledSolution {
    pub grid: Grid,
    pub mask: Vec<bool>,
    /// `A(r)`.
    pub a: Vec<f64>,
    /// `ln R` with `R = 1` at the grid centre.
    pub log_r: Vec<f64>,
    /// `(C R) / R` pointwise.
    pub c_profile: Vec<f64>,
    /// Median of `c_profile` over the interior.
    pub c: f64,
    /// Largest `|c(r) - c|` over the interior.
    pub residual: f64,
    pub success: bool,
    /// Largest `|B - A|` where `B` is the alternative exponent
    /// `([2]/2) eta^2 [2m][m]^2 f1 - [2](2 + eta^2 [m]^2) f2 - 4 f2'/f1`,
    /// which equals `eta^2 [2m] A`.
    pub alt_exponent_gap: f64,
}

impl CoupledSolution {
    /// `R(r)`.
    pub fn r(&self) -> Vec<f64> {
        self.log_r.iter().map(|x| x.exp()).collect()
    }
}

/// Build `A`, integrate `ln R` from the centre and evaluate the Casimir
/// on `R`. `f1` and `f2` share one grid.
pub fn coupled_solve(d: &Deformation, m: f64, f1: &RadialProfile, f2: &RadialProfile) -> Result<CoupledSolution> {
    if let Some((p, l)) = d.root_of_unity() {
        return Err(Error::RootOfUnity { p, l });
    }
    let q2m = d.q_num(2.0 * m);
    if q2m.abs() < 1e-12 {
        return Err(Error::Domain(format!("[2m] vanishes at m = {m}")));
    }
    if f1.grid != f2.grid {
        return Err(Error::Domain("f1 and f2 are sampled on different grids".into()));
    }
    let grid = f1.grid;
    let n = grid.count;
    if n < 9 {
        return Err(Error::InsufficientGrid(format!("{n} samples")));
    }
    let h = grid.step;
    let eta2 = d.eta_sq();
    let q2 = d.q_num(2.0);
    let qm2 = d.q_num(m).powi(2);
    let mask: Vec<bool> = (0..n)
        .map(|i| {
            f1.mask[i] || f2.mask[i] || f1.values[i].abs() < F1_FLOOR || !f1.values[i].is_finite() || !f2.values[i].is_finite()
        })
        .collect();
    let mut a = vec![f64::NAN; n];
    let mut gap = 0.0f64;
    for i in 0..n {
        if mask[i] {
            continue;
        }
        let (u, v, vp) = (f1.values[i], f2.values[i], f2.d1[i]);
        a[i] = 0.5 * q2 * qm2 * u - q2 * (2.0 / (eta2 * q2m) + qm2 / q2m) * v - 4.0 * vp / (eta2 * q2m * u);
        let b = 0.5 * q2 * eta2 * q2m * qm2 * u - q2 * v * (2.0 + eta2 * qm2) - 4.0 * vp / u;
        gap = gap.max((b - a[i]).abs());
    }
    let centre = grid.center_index();
    if mask[centre] {
        return Err(Error::Domain("grid centre is masked".into()));
    }
    // trapezoid from the centre within its unmasked run
    let mut log_r = vec![f64::NAN; n];
    log_r[centre] = 0.0;
    for i in centre + 1..n {
        if mask[i] {
            break;
        }
        log_r[i] = log_r[i - 1] + 0.5 * h * (a[i - 1] + a[i]);
    }
    for i in (0..centre).rev() {
        if mask[i] {
            break;
        }
        log_r[i] = log_r[i + 1] - 0.5 * h * (a[i + 1] + a[i]);
    }
    if log_r.iter().any(|x| x.is_infinite()) {
        return Err(Error::Numerical("ln R overflowed".into()));
    }
    let run: Vec<usize> = (0..n).filter(|&i| log_r[i].is_finite()).collect();
    let (lo, hi) = (run[0], run[run.len() - 1]);
    let slice: Vec<f64> = a[lo..=hi].to_vec();
    let ap = derivative(&slice, h);
    let kap = kappa(d, m);
    let mut c_profile = vec![f64::NAN; n];
    for i in lo..=hi {
        let ai = a[i];
        let p = -kap * f1.values[i];
        let w = casimir_w(d, m, f1.values[i], f1.d1[i], f2.values[i], f2.d1[i]);
        c_profile[i] = -(ap[i - lo] + ai * ai) + p * ai + w;
    }
    let interior: Vec<f64> = (lo + 2..hi.saturating_sub(1)).map(|i| c_profile[i]).collect();
    if interior.is_empty() || interior.iter().any(|x| x.is_nan()) {
        return Err(Error::Numerical("Casimir profile is not finite".into()));
    }
    let mut sorted = interior.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    let c = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        0.5 * (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2])
    };
    let residual = interior.iter().map(|x| (x - c).abs()).fold(0.0, f64::max);
    Ok(CoupledSolution {
        grid,
        mask,
        a,
        log_r,
        c_profile,
        c,
        residual,
        success: residual < 1e-4 * (1.0 + c.abs()),
        alt_exponent_gap: gap,
    })
}

/// Piecewise-constant `f1`, `f2` on cells `[n w, (n + 1) w)`: `f1 = h1`
/// on the first `(1 - eps)` of each cell in `i1`, `f2 = h2` likewise on
/// `i2`, zero elsewhere. `i1` and `i2` must be disjoint.
pub fn disjoint_support_pair(
    grid: Grid,
    width: f64,
    i1: &[i64],
    i2: &[i64],
    eps: f64,
    heights: (f64, f64),
) -> Result<(RadialProfile, RadialProfile)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps = {eps} is outside (0, 1)")));
    }
    if !(width > 0.0) {
        return Err(Error::Domain("cell width must be positive".into()));
    }
    if let Some(k) = i1.iter().find(|k| i2.contains(k)) {
        return Err(Error::Domain(format!("cell {k} is in both supports")));
    }
    let cell_of = |r: f64| -> Option<i64> {
        let x = r / width;
        let n = x.floor();
        (x - n < 1.0 - eps).then_some(n as i64)
    };
    let mask = vec![false; grid.count];
    let f1 = RadialProfile::from_fn(grid, mask.clone(), |r| match cell_of(r) {
        Some(n) if i1.contains(&n) => (heights.0, 0.0, 0.0),
        _ => (0.0, 0.0, 0.0),
    });
    let f2 = RadialProfile::from_fn(grid, mask, |r| match cell_of(r) {
        Some(n) if i2.contains(&n) => (heights.1, 0.0, 0.0),
        _ => (0.0, 0.0, 0.0),
    });
    Ok((f1, f2))
}
