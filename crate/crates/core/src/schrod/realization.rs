//! Closed-form `f1` and `f2` of the differential realization
//! `J_+- = e^{+-i phi}(+-d_r + f1 [2 i d_phi]/2 + f2)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::qnum::Deformation;

/// `|cos s|` below this counts as `cos s = 0`.
pub const LINEAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum F1Branch {
    /// `-tan(k r)/k`, `k = sqrt(cos s)`, needs `cos s > 0`.
    Tan,
    /// `-tanh(k r)/k`, `k = sqrt(-cos s)`, needs `cos s < 0`.
    Tanh,
    /// `sigma/k` with `sigma = +-1`, needs `cos s < 0`.
    Constant { sigma: f64 },
    /// `-r`, needs `cos s = 0`.
    Linear,
}

impl F1Branch {
    /// The branch with `f1(0) = 0`, `f1'(0) = -1` for this `s`.
    pub fn canonical(d: &Deformation) -> Self {
        let c = d.cos_s();
        if c.abs() < LINEAR_TOL {
            F1Branch::Linear
        } else if c > 0.0 {
            F1Branch::Tan
        } else {
            F1Branch::Tanh
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            F1Branch::Tan => "tan",
            F1Branch::Tanh => "tanh",
            F1Branch::Constant { .. } => "constant",
            F1Branch::Linear => "linear",
        }
    }

    fn check(&self, d: &Deformation) -> Result<()> {
        let c = d.cos_s();
        let ok = match self {
            F1Branch::Tan => c >= LINEAR_TOL,
            F1Branch::Tanh => c <= -LINEAR_TOL,
            F1Branch::Constant { sigma } => c <= -LINEAR_TOL && (sigma.abs() - 1.0).abs() < 1e-12,
            F1Branch::Linear => c.abs() < LINEAR_TOL,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BranchMismatch {
                branch: self.name().into(),
                cos_s: c,
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum F2Branch {
    /// `F1 / cosh(k r - d1)`, pairs with [`F1Branch::Tanh`].
    Sech,
    /// `F2 exp(sigma k r)`, pairs with [`F1Branch::Constant`].
    Exponential,
    /// `F3 / |cos(k r + d2)|`, pairs with [`F1Branch::Tan`].
    Secant,
    /// `F3 cos(k r + d2)`, kept for comparison; it does not solve the
    /// decoupled equation.
    CosineLiteral,
    /// `F4`, pairs with [`F1Branch::Linear`].
    Constant,
    Zero,
}

impl F2Branch {
    pub fn paired(f1: F1Branch) -> Self {
        match f1 {
            F1Branch::Tan => F2Branch::Secant,
            F1Branch::Tanh => F2Branch::Sech,
            F1Branch::Constant { .. } => F2Branch::Exponential,
            F1Branch::Linear => F2Branch::Constant,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            F2Branch::Sech => "sech",
            F2Branch::Exponential => "exponential",
            F2Branch::Secant => "secant",
            F2Branch::CosineLiteral => "cosine",
            F2Branch::Constant => "constant",
            F2Branch::Zero => "zero",
        }
    }

    fn compatible(&self, f1: F1Branch) -> bool {
        matches!(
            (self, f1),
            (F2Branch::Zero, _)
                | (F2Branch::Sech, F1Branch::Tanh)
                | (F2Branch::Exponential, F1Branch::Constant { .. })
                | (F2Branch::Secant | F2Branch::CosineLiteral, F1Branch::Tan)
                | (F2Branch::Constant, F1Branch::Linear)
        )
    }
}

/// Integration constants. `amp[i]` is the amplitude `F_{i+1}` of the
/// matching `f2` branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub d1: f64,
    pub d2: f64,
    pub amp: [f64; 4],
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            d1: 0.0,
            d2: 0.0,
            amp: [1.0; 4],
        }
    }
}

/// A function sampled on a grid with its first two derivatives. Masked
/// samples hold `NaN`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub mask: Vec<bool>,
}

impl RadialProfile {
    /// Sample `f`, which returns `(value, first, second)` derivatives.
    pub fn from_fn(grid: Grid, mask: Vec<bool>, f: impl Fn(f64) -> (f64, f64, f64)) -> Self {
        let n = grid.count;
        let (mut values, mut d1, mut d2) = (vec![f64::NAN; n], vec![f64::NAN; n], vec![f64::NAN; n]);
        for i in 0..n {
            if !mask[i] {
                let (a, b, c) = f(grid.at(i));
                values[i] = a;
                d1[i] = b;
                d2[i] = c;
            }
        }
        Self { grid, values, d1, d2, mask }
    }

    pub fn unmasked(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.grid.count).filter(|&i| !self.mask[i])
    }
}

/// Pole positions `(pi/2 + j pi)/k` of `tan(k r)` inside `[lo, hi]`.
pub fn tan_poles(k: f64, lo: f64, hi: f64) -> Vec<f64> {
    let period = PI / k;
    let j_lo = ((lo - 0.5 * period) / period).floor() as i64 - 1;
    let j_hi = ((hi - 0.5 * period) / period).ceil() as i64 + 1;
    (j_lo..=j_hi)
        .map(|j| (0.5 + j as f64) * period)
        .filter(|&r| r >= lo && r <= hi)
        .collect()
}

/// Mask samples within `width` grid steps of a pole.
pub fn pole_mask(grid: &Grid, poles: &[f64], width: f64) -> Vec<bool> {
    let reach = width * grid.step * (1.0 + 1e-9);
    (0..grid.count)
        .map(|i| {
            let r = grid.at(i);
            poles.iter().any(|&p| (r - p).abs() <= reach)
        })
        .collect()
}

/// `k = sqrt(|cos s|)`.
pub fn scale_k(d: &Deformation) -> f64 {
    d.cos_s().abs().sqrt()
}

/// `f1` with `d = 0`, masked within two grid steps of poles.
pub fn solve_f1(d: &Deformation, branch: F1Branch, grid: Grid) -> Result<RadialProfile> {
    branch.check(d)?;
    let k = scale_k(d);
    let cos_s = d.cos_s();
    let mask = match branch {
        F1Branch::Tan => pole_mask(&grid, &tan_poles(k, grid.start, grid.stop()), 2.0),
        _ => vec![false; grid.count],
    };
    // second derivative from differentiating f1' = -1 - cos(s) f1^2
    let second = move |f: f64, fp: f64| -2.0 * cos_s * f * fp;
    let prof = match branch {
        F1Branch::Tan => RadialProfile::from_fn(grid, mask, |r| {
            let t = (k * r).tan();
            let f = -t / k;
            let fp = -1.0 - t * t;
            (f, fp, second(f, fp))
        }),
        F1Branch::Tanh => RadialProfile::from_fn(grid, mask, |r| {
            let t = (k * r).tanh();
            let f = -t / k;
            let fp = -1.0 + t * t;
            (f, fp, second(f, fp))
        }),
        F1Branch::Constant { sigma } => RadialProfile::from_fn(grid, mask, |_| (sigma / k, 0.0, 0.0)),
        F1Branch::Linear => RadialProfile::from_fn(grid, mask, |r| (-r, -1.0, 0.0)),
    };
    Ok(prof)
}

/// `f2` for the decoupled regime, on the grid and mask of `f1`.
pub fn solve_f2(
    d: &Deformation,
    f1: &RadialProfile,
    f1_branch: F1Branch,
    branch: F2Branch,
    constants: &Constants,
) -> Result<RadialProfile> {
    if !branch.compatible(f1_branch) {
        return Err(Error::BranchMismatch {
            branch: format!("{}/{}", f1_branch.name(), branch.name()),
            cos_s: d.cos_s(),
        });
    }
    let k = scale_k(d);
    let grid = f1.grid;
    let mask = f1.mask.clone();
    let [a1, a2, a3, a4] = constants.amp;
    let (d1, d2) = (constants.d1, constants.d2);
    let prof = match branch {
        F2Branch::Zero => RadialProfile::from_fn(grid, mask, |_| (0.0, 0.0, 0.0)),
        F2Branch::Constant => RadialProfile::from_fn(grid, mask, |_| (a4, 0.0, 0.0)),
        F2Branch::Sech => RadialProfile::from_fn(grid, mask, |r| {
            let x = k * r - d1;
            let sech = 1.0 / x.cosh();
            let t = x.tanh();
            let f = a1 * sech;
            (f, -k * t * f, k * k * f * (t * t - sech * sech))
        }),
        F2Branch::Exponential => {
            let F1Branch::Constant { sigma } = f1_branch else { unreachable!() };
            RadialProfile::from_fn(grid, mask, |r| {
                let f = a2 * (sigma * k * r).exp();
                (f, sigma * k * f, k * k * f)
            })
        }
        F2Branch::Secant => RadialProfile::from_fn(grid, mask, |r| {
            let x = k * r + d2;
            let c = x.cos();
            let t = x.tan();
            let f = a3 / c.abs();
            (f, k * t * f, k * k * f * (2.0 * t * t + 1.0))
        }),
        F2Branch::CosineLiteral => RadialProfile::from_fn(grid, mask, |r| {
            let x = k * r + d2;
            let f = a3 * x.cos();
            (f, -k * a3 * x.sin(), -k * k * f)
        }),
    };
    Ok(prof)
}

/// Scaled pointwise residual of `f1' = -1 - cos(s) f1^2`,
/// `|f1' + 1 + cos(s) f1^2| / max(1, |f1'|)`, worst over unmasked samples.
pub fn f1_residual(d: &Deformation, f1: &RadialProfile) -> f64 {
    f1.unmasked()
        .map(|i| {
            let (f, fp) = (f1.values[i], f1.d1[i]);
            (fp + 1.0 + d.cos_s() * f * f).abs() / fp.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

/// Scaled pointwise residual of `cos(s) f1 f2 = -f2'`.
pub fn f2_residual(d: &Deformation, f1: &RadialProfile, f2: &RadialProfile) -> f64 {
    f2.unmasked()
        .map(|i| {
            let a = d.cos_s() * f1.values[i] * f2.values[i];
            let b = f2.d1[i];
            (a + b).abs() / a.abs().max(b.abs()).max(1.0)
        })
        .fold(0.0, f64::max)
}

/// `|eta^2 [2m]|`, the size of the coupling between `f2` and the radial
/// function.
pub fn coupling_strength(d: &Deformation, m: f64) -> f64 {
    (d.eta_sq() * d.q_num(2.0 * m)).abs()
}

/// Default threshold on [`coupling_strength`] below which `f2` is treated
/// as decoupled.
pub const DECOUPLED_THRESHOLD: f64 = 0.05;

pub fn is_decoupled(d: &Deformation, m: f64, threshold: f64) -> bool {
    coupling_strength(d, m) < threshold
}

/// `f1` and `f2` for one `(s, m)` together with their tags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationFns {
    pub s: f64,
    pub m: f64,
    pub f1_branch: F1Branch,
    pub f2_branch: F2Branch,
    pub constants: Constants,
    pub f1: RadialProfile,
    pub f2: RadialProfile,
    pub decoupled: bool,
}

impl RealizationFns {
    pub fn new(
        d: &Deformation,
        m: f64,
        f1_branch: F1Branch,
        f2_branch: F2Branch,
        constants: Constants,
        grid: Grid,
    ) -> Result<Self> {
        let f1 = solve_f1(d, f1_branch, grid)?;
        let f2 = solve_f2(d, &f1, f1_branch, f2_branch, &constants)?;
        Ok(Self {
            s: d.s(),
            m,
            f1_branch,
            f2_branch,
            constants,
            f1,
            f2,
            decoupled: is_decoupled(d, m, DECOUPLED_THRESHOLD),
        })
    }

    /// Canonical `f1` branch and its paired `f2`.
    pub fn canonical(d: &Deformation, m: f64, constants: Constants, grid: Grid) -> Result<Self> {
        let b1 = F1Branch::canonical(d);
        Self::new(d, m, b1, F2Branch::paired(b1), constants, grid)
    }

    pub fn grid(&self) -> Grid {
        self.f1.grid
    }

    pub fn mask(&self) -> &[bool] {
        &self.f1.mask
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: f64) -> Deformation {
        Deformation::new(s).unwrap()
    }

    fn grid() -> Grid {
        Grid::span(-6.0, 6.0, 6000).unwrap()
    }

    #[test]
    fn linear_is_exact() {
        let dd = d(PI / 2.0);
        let f1 = solve_f1(&dd, F1Branch::Linear, grid()).unwrap();
        for i in 0..f1.grid.count {
            assert_eq!(f1.values[i], -f1.grid.at(i));
        }
        assert!(f1_residual(&dd, &f1) < 1e-14);
    }

    #[test]
    fn constant_branch_residual_vanishes() {
        let dd = d(2.5);
        let f1 = solve_f1(&dd, F1Branch::Constant { sigma: 1.0 }, grid()).unwrap();
        assert!((f1.values[0] - 1.0 / (-dd.cos_s()).sqrt()).abs() < 1e-15);
        assert!(f1_residual(&dd, &f1) < 1e-15);
    }

    #[test]
    fn branch_mismatch() {
        assert!(solve_f1(&d(0.3), F1Branch::Tanh, grid()).is_err());
        assert!(solve_f1(&d(2.3), F1Branch::Tan, grid()).is_err());
        assert!(solve_f1(&d(1.0), F1Branch::Linear, grid()).is_err());
        let dd = d(0.3);
        let f1 = solve_f1(&dd, F1Branch::Tan, grid()).unwrap();
        assert!(solve_f2(&dd, &f1, F1Branch::Tan, F2Branch::Sech, &Constants::default()).is_err());
    }

    #[test]
    fn ode_residuals() {
        for &(s, b1) in &[
            (0.25, F1Branch::Tan),
            (1.2, F1Branch::Tan),
            (3.0, F1Branch::Tanh),
            (2.0, F1Branch::Constant { sigma: 1.0 }),
            (2.0, F1Branch::Constant { sigma: -1.0 }),
        ] {
            let dd = d(s);
            let f1 = solve_f1(&dd, b1, grid()).unwrap();
            assert!(f1_residual(&dd, &f1) < 1e-9, "s={s}");
            let f2 = solve_f2(&dd, &f1, b1, F2Branch::paired(b1), &Constants::default()).unwrap();
            assert!(f2_residual(&dd, &f1, &f2) < 1e-9, "s={s}");
        }
    }

    #[test]
    fn cosine_reading_fails_decoupled_equation() {
        let dd = d(0.4);
        let f1 = solve_f1(&dd, F1Branch::Tan, grid()).unwrap();
        let f2 = solve_f2(&dd, &f1, F1Branch::Tan, F2Branch::CosineLiteral, &Constants::default()).unwrap();
        assert!(f2_residual(&dd, &f1, &f2) > 0.1);
    }

    #[test]
    fn poles_are_masked() {
        let dd = d(0.25);
        let g = Grid::span(-10.0, 10.0, 20000).unwrap();
        let f1 = solve_f1(&dd, F1Branch::Tan, g).unwrap();
        let k = scale_k(&dd);
        let poles = tan_poles(k, -10.0, 10.0);
        assert!(!poles.is_empty());
        for i in 0..g.count {
            let near = poles.iter().any(|p| (g.at(i) - p).abs() < 1.5 * g.step);
            if near {
                assert!(f1.mask[i]);
            }
            if !f1.mask[i] {
                assert!(f1.values[i].is_finite());
            }
        }
    }

    #[test]
    fn continuity_through_half_pi() {
        let g = Grid::span(-1.0, 1.0, 2000).unwrap();
        for &(s, b) in &[(PI / 2.0 - 1e-3, F1Branch::Tan), (PI / 2.0 + 1e-3, F1Branch::Tanh)] {
            let dd = d(s);
            let f1 = solve_f1(&dd, b, g).unwrap();
            let dev = (0..g.count).map(|i| (f1.values[i] + g.at(i)).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-3);
        }
        // on [-2, 2] the deviation is cos(s) r^3 / 3 to leading order
        let dd = d(PI / 2.0 - 1e-3);
        let g = Grid::span(-2.0, 2.0, 4000).unwrap();
        let f1 = solve_f1(&dd, F1Branch::Tan, g).unwrap();
        let dev = (0..g.count).map(|i| (f1.values[i] + g.at(i)).abs()).fold(0.0, f64::max);
        assert!((dev - dd.cos_s() * 8.0 / 3.0).abs() < 1e-5);
    }

    #[test]
    fn decoupling() {
        assert!(is_decoupled(&d(PI / 2.0), 2.0, DECOUPLED_THRESHOLD));
        assert!(!is_decoupled(&d(1.0), 0.7, DECOUPLED_THRESHOLD));
        assert!(is_decoupled(&d(0.05), 1.0, DECOUPLED_THRESHOLD));
    }
}
