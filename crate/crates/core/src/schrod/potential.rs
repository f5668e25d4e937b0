//! The Liouville factor and the potential `V(r; m, s)` obtained from the
//! Casimir of the realization.

use serde::{Deserialize, Serialize};

use super::realization::{scale_k, tan_poles, Constants, F1Branch, F2Branch, RadialProfile, RealizationFns};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::qnum::Deformation;

/// Parameter regime the potential is built for; recorded with the profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Near0,
    NearPi,
    NearHalfPi,
}

impl Regime {
    pub fn for_s(d: &Deformation) -> Self {
        let s = d.s().rem_euclid(std::f64::consts::PI);
        if s < std::f64::consts::FRAC_PI_4 {
            Regime::Near0
        } else if s > 3.0 * std::f64::consts::FRAC_PI_4 {
            Regime::NearPi
        } else {
            Regime::NearHalfPi
        }
    }
}

/// How the Casimir is turned into `-d^2 + V`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[derive(Default)]
pub enum PotentialForm {
    /// `C = -d^2 + p d + W` with `p = -cos((2m-1)s) f1`, transformed with
    /// `a' / a = p/2`, giving `V = W - p'/2 + p^2/4`.
    #[default]
    Derived,
    /// The raw term list `-a''/a + [2m][2m-2] f1^2/4 - f1 f2 [2m-1]
    /// - f1^(n)/2 [2m] + f2^2 + f2' + [m]^2 + [m-1/2]^2` with
    /// `a = exp(-int f1)`, using `f1''` when `second_derivative` is set
    /// and `f1'` otherwise.
    TermList { second_derivative: bool },
}


#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LiouvilleMode {
    /// `2 a' + kappa f1 a = 0`.
    #[default]
    FirstDerivativeElimination,
    /// `a = exp(-int f1)`.
    ExpIntegral,
}

/// `kappa = cos((2m - 1) s)`, so that the first-derivative coefficient of
/// the Casimir is `-kappa f1`.
pub fn kappa(d: &Deformation, m: f64) -> f64 {
    ((2.0 * m - 1.0) * d.s()).cos()
}

/// Antiderivative of `f1` on its closed form.
pub fn f1_antiderivative(d: &Deformation, branch: F1Branch, r: f64) -> f64 {
    let k = scale_k(d);
    match branch {
        F1Branch::Tan => (k * r).cos().abs().ln() / (k * k),
        F1Branch::Tanh => {
            let x = (k * r).abs();
            // ln cosh x without overflow
            -(x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2) / (k * k)
        }
        F1Branch::Constant { sigma } => sigma * r / k,
        F1Branch::Linear => -0.5 * r * r,
    }
}

/// `ln a(r)` normalized to `0` at the grid centre; `a = exp` of this.
pub fn liouville_log_factor(d: &Deformation, f1: &RadialProfile, branch: F1Branch, mode: LiouvilleMode, kappa: f64) -> Vec<f64> {
    let scale = match mode {
        LiouvilleMode::FirstDerivativeElimination => 0.5 * kappa,
        LiouvilleMode::ExpIntegral => 1.0,
    };
    let r0 = f1.grid.at(f1.grid.center_index());
    let base = f1_antiderivative(d, branch, r0);
    (0..f1.grid.count)
        .map(|i| {
            if f1.mask[i] {
                f64::NAN
            } else {
                -scale * (f1_antiderivative(d, branch, f1.grid.at(i)) - base)
            }
        })
        .collect()
}

/// `a(r)` with `a = 1` at the grid centre.
pub fn liouville_factor(d: &Deformation, f1: &RadialProfile, branch: F1Branch, mode: LiouvilleMode, kappa: f64) -> Vec<f64> {
    liouville_log_factor(d, f1, branch, mode, kappa)
        .into_iter()
        .map(f64::exp)
        .collect()
}

/// Largest `|p - 2 a'/a| / max(1, |p|)` over unmasked samples, where
/// `p = -kappa f1` is the first-derivative coefficient of the Casimir and
/// `a'/a` is a five-point difference of the closed-form `ln a`. The step
/// shrinks near poles of `f1` to keep the difference accurate.
pub fn first_derivative_coefficient(
    d: &Deformation,
    f1: &RadialProfile,
    branch: F1Branch,
    mode: LiouvilleMode,
    kappa: f64,
) -> f64 {
    let scale = match mode {
        LiouvilleMode::FirstDerivativeElimination => 0.5 * kappa,
        LiouvilleMode::ExpIntegral => 1.0,
    };
    let k = scale_k(d);
    let poles = match branch {
        F1Branch::Tan => tan_poles(k, f1.grid.start - 1.0, f1.grid.stop() + 1.0),
        _ => Vec::new(),
    };
    let log_a = |r: f64| -scale * f1_antiderivative(d, branch, r);
    let mut worst = 0.0f64;
    for i in f1.unmasked() {
        let r = f1.grid.at(i);
        let dist = poles.iter().map(|x| (x - r).abs()).fold(f64::INFINITY, f64::min);
        let dr = f1.grid.step.min(dist / 500.0);
        let dl = (-log_a(r + 2.0 * dr) + 8.0 * log_a(r + dr) - 8.0 * log_a(r - dr) + log_a(r - 2.0 * dr)) / (12.0 * dr);
        let p = -kappa * f1.values[i];
        worst = worst.max((p - 2.0 * dl).abs() / p.abs().max(1.0));
    }
    worst
}

/// Everything needed to rebuild a potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    pub s: f64,
    pub m: f64,
    pub f1_branch: F1Branch,
    pub f2_branch: F2Branch,
    pub constants: Constants,
    pub regime: Regime,
    pub form: PotentialForm,
    pub grid: Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialProfile {
    pub grid: Grid,
    /// `NaN` on masked samples.
    pub values: Vec<f64>,
    pub mask: Vec<bool>,
    pub params: PotentialParams,
}

impl PotentialProfile {
    pub fn unmasked(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.grid.count).filter(|&i| !self.mask[i])
    }

    /// Rebuild from the recorded parameters.
    pub fn rebuild(params: &PotentialParams) -> Result<Self> {
        let d = Deformation::new(params.s)?;
        let fns = RealizationFns::new(&d, params.m, params.f1_branch, params.f2_branch, params.constants, params.grid)?;
        build_potential_with(&d, params.m, &fns, params.regime, params.form)
    }
}

/// `W`, the multiplicative part of the Casimir `[m - 1/2]^2 + J_+ J_-` on
/// `R(r) e^{i m phi}`.
pub fn casimir_w(d: &Deformation, m: f64, f1: f64, f1p: f64, f2: f64, f2p: f64) -> f64 {
    let q2m = d.q_num(2.0 * m);
    f2p - 0.5 * f1p * q2m + f2 * f2 - d.cos_s() * d.q_num(2.0 * m - 1.0) * f1 * f2
        + 0.25 * q2m * d.q_num(2.0 * m - 2.0) * f1 * f1
        + d.q_num(m - 0.5).powi(2)
}

fn check_regime(d: &Deformation, fns: &RealizationFns, regime: Regime) -> Result<()> {
    let ok = match regime {
        Regime::NearHalfPi => true,
        Regime::Near0 => d.cos_s() > 0.0,
        Regime::NearPi => d.cos_s() < 0.0,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::BranchMismatch {
            branch: format!("{}/{} in regime {:?}", fns.f1_branch.name(), fns.f2_branch.name(), regime),
            cos_s: d.cos_s(),
        })
    }
}

pub fn build_potential(d: &Deformation, m: f64, fns: &RealizationFns, regime: Regime) -> Result<PotentialProfile> {
    build_potential_with(d, m, fns, regime, PotentialForm::Derived)
}

pub fn build_potential_with(
    d: &Deformation,
    m: f64,
    fns: &RealizationFns,
    regime: Regime,
    form: PotentialForm,
) -> Result<PotentialProfile> {
    check_regime(d, fns, regime)?;
    let grid = fns.grid();
    let mask = fns.mask().to_vec();
    let kap = kappa(d, m);
    let q2m = d.q_num(2.0 * m);
    let (f1, f2) = (&fns.f1, &fns.f2);
    let values = (0..grid.count)
        .map(|i| {
            if mask[i] {
                return f64::NAN;
            }
            let (a, ap, app) = (f1.values[i], f1.d1[i], f1.d2[i]);
            let (b, bp) = (f2.values[i], f2.d1[i]);
            match form {
                PotentialForm::Derived => {
                    0.5 * kap * ap + 0.25 * kap * kap * a * a + casimir_w(d, m, a, ap, b, bp)
                }
                PotentialForm::TermList { second_derivative } => {
                    let a_ratio = a * a - ap;
                    let curv = if second_derivative { app } else { ap };
                    -a_ratio + 0.25 * q2m * d.q_num(2.0 * m - 2.0) * a * a
                        - a * b * d.q_num(2.0 * m - 1.0)
                        - 0.5 * curv * q2m
                        + b * b
                        + bp
                        + d.q_num(m).powi(2)
                        + d.q_num(m - 0.5).powi(2)
                }
            }
        })
        .collect();
    Ok(PotentialProfile {
        grid,
        values,
        mask,
        params: PotentialParams {
            s: d.s(),
            m,
            f1_branch: fns.f1_branch,
            f2_branch: fns.f2_branch,
            constants: fns.constants,
            regime,
            form,
            grid,
        },
    })
}

/// Least-squares polynomial fit of degree `deg` over unmasked samples;
/// returns the residual RMS relative to the RMS of the values (or the
/// absolute RMS when the values vanish).
pub fn polyfit_relative_residual(p: &PotentialProfile, deg: usize) -> f64 {
    let idx: Vec<usize> = p.unmasked().collect();
    let n = idx.len();
    let cols = deg + 1;
    let center = 0.5 * (p.grid.start + p.grid.stop());
    let half = 0.5 * (p.grid.stop() - p.grid.start);
    let mut a = nalgebra::DMatrix::<f64>::zeros(n, cols);
    let mut y = nalgebra::DVector::<f64>::zeros(n);
    for (row, &i) in idx.iter().enumerate() {
        let x = (p.grid.at(i) - center) / half;
        let mut v = 1.0;
        for c in 0..cols {
            a[(row, c)] = v;
            v *= x;
        }
        y[row] = p.values[i];
    }
    let Ok(coef) = a.clone().svd(true, true).solve(&y, 1e-14) else {
        return f64::INFINITY;
    };
    let resid = &a * coef - &y;
    let rms = (resid.norm_squared() / n as f64).sqrt();
    let scale = (y.norm_squared() / n as f64).sqrt();
    if scale > 0.0 {
        rms / scale
    } else {
        rms
    }
}

/// Worst `|V(r + period) - V(r)| / max(1, |V(r)|)` over sample pairs that
/// are both unmasked; `period` must be a multiple of the grid step.
pub fn periodicity_defect(p: &PotentialProfile, period: f64) -> Result<f64> {
    let shift = period / p.grid.step;
    let n = shift.round();
    if (shift - n).abs() > 1e-6 || n < 1.0 {
        return Err(Error::InsufficientGrid(format!(
            "period {period} is not a whole number of steps {}",
            p.grid.step
        )));
    }
    let n = n as usize;
    let mut worst = 0.0f64;
    for i in 0..p.grid.count.saturating_sub(n) {
        if p.mask[i] || p.mask[i + n] {
            continue;
        }
        let (a, b) = (p.values[i], p.values[i + n]);
        worst = worst.max((a - b).abs() / a.abs().max(1.0));
    }
    Ok(worst)
}

/// Pearson autocorrelation of `atan((V - med) / mad)` at lags of
/// `1..=max_lag` samples, over pairs where both samples are unmasked;
/// `med` and `mad` are the median and median absolute deviation of the
/// unmasked values. The squashing keeps poles from dominating.
pub fn autocorrelation(values: &[f64], mask: &[bool], max_lag: usize) -> Vec<f64> {
    let ok = |i: usize| !mask[i] && values[i].is_finite();
    let median = |mut v: Vec<f64>| -> f64 {
        if v.is_empty() {
            return 0.0;
        }
        v.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        v[v.len() / 2]
    };
    let med = median((0..values.len()).filter(|&i| ok(i)).map(|i| values[i]).collect());
    let mad = median((0..values.len()).filter(|&i| ok(i)).map(|i| (values[i] - med).abs()).collect());
    let mad = if mad > 0.0 { mad } else { 1.0 };
    let x: Vec<f64> = values.iter().map(|v| ((v - med) / mad).atan()).collect();
    (1..=max_lag)
        .map(|lag| {
            let pairs: Vec<(f64, f64)> = (0..x.len().saturating_sub(lag))
                .filter(|&i| ok(i) && ok(i + lag))
                .map(|i| (x[i], x[i + lag]))
                .collect();
            let n = pairs.len() as f64;
            if n < 2.0 {
                return 0.0;
            }
            let (ma, mb) = pairs.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0, b + p.1));
            let (ma, mb) = (ma / n, mb / n);
            let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
            for (a, b) in &pairs {
                sab += (a - ma) * (b - mb);
                saa += (a - ma).powi(2);
                sbb += (b - mb).powi(2);
            }
            if saa == 0.0 || sbb == 0.0 {
                0.0
            } else {
                sab / (saa * sbb).sqrt()
            }
        })
        .collect()
}

/// Largest autocorrelation at lags from `min_lag` to `max_lag` samples.
pub fn secondary_peak(values: &[f64], mask: &[bool], min_lag: usize, max_lag: usize) -> f64 {
    autocorrelation(values, mask, max_lag)
        .into_iter()
        .skip(min_lag.saturating_sub(1))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Threshold on [`secondary_peak`] for calling a potential commensurate.
pub const COMMENSURATE_PEAK: f64 = 0.95;

/// Secondary autocorrelation peak of `p` at lags from half of `period` up
/// to ten periods, and whether it reaches [`COMMENSURATE_PEAK`].
pub fn commensurability(p: &PotentialProfile, period: f64) -> (f64, bool) {
    let n = (period / p.grid.step).round().max(2.0) as usize;
    let peak = secondary_peak(&p.values, &p.mask, n / 2, 10 * n);
    (peak, peak >= COMMENSURATE_PEAK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schrod::realization::{solve_f1, F2Branch};
    use std::f64::consts::PI;

    fn d(s: f64) -> Deformation {
        Deformation::new(s).unwrap()
    }

    #[test]
    fn liouville_closed_forms() {
        let dd = d(PI / 2.0);
        let g = Grid::span(-2.0, 2.0, 400).unwrap();
        let f1 = solve_f1(&dd, F1Branch::Linear, g).unwrap();
        let a = liouville_factor(&dd, &f1, F1Branch::Linear, LiouvilleMode::FirstDerivativeElimination, 1.0);
        let lit = liouville_factor(&dd, &f1, F1Branch::Linear, LiouvilleMode::ExpIntegral, 1.0);
        for i in 0..g.count {
            let r = g.at(i);
            assert!((a[i] - (r * r / 4.0).exp()).abs() < 1e-12 * a[i]);
            assert!((lit[i] - (r * r / 2.0).exp()).abs() < 1e-12 * lit[i]);
        }
        let dd = d(2.2);
        let f1 = solve_f1(&dd, F1Branch::Constant { sigma: 1.0 }, g).unwrap();
        let c = f1.values[0];
        let a = liouville_factor(&dd, &f1, F1Branch::Constant { sigma: 1.0 }, LiouvilleMode::FirstDerivativeElimination, 1.0);
        for i in 0..g.count {
            assert!((a[i] - (-c * g.at(i) / 2.0).exp()).abs() < 1e-12 * a[i]);
        }
    }

    #[test]
    fn transform_removes_first_derivative() {
        for &(s, m) in &[(0.25, 1.0), (3.0, 1.0), (3.0, 2.5), (2.0, 1.5)] {
            let dd = d(s);
            let g = Grid::span(-3.0, 3.0, 6000).unwrap();
            let b = F1Branch::canonical(&dd);
            let f1 = solve_f1(&dd, b, g).unwrap();
            let k = kappa(&dd, m);
            let e = first_derivative_coefficient(&dd, &f1, b, LiouvilleMode::FirstDerivativeElimination, k);
            assert!(e < 1e-8, "s={s} m={m} {e}");
            if (k - 2.0).abs() > 0.1 {
                assert!(first_derivative_coefficient(&dd, &f1, b, LiouvilleMode::ExpIntegral, k) > 1e-3);
            }
        }
    }

    #[test]
    fn euclidean_point_is_flat() {
        let dd = d(PI / 2.0);
        let g = Grid::span(-5.0, 5.0, 1000).unwrap();
        for m in -3..=3 {
            let fns = RealizationFns::canonical(&dd, m as f64, Constants::default(), g).unwrap();
            let p = build_potential(&dd, m as f64, &fns, Regime::NearHalfPi).unwrap();
            for v in &p.values {
                assert!((v - 1.5).abs() < 1e-12, "m={m} v={v}");
            }
            assert!(polyfit_relative_residual(&p, 2) < 1e-8);
        }
    }

    #[test]
    fn term_list_form_differs() {
        let dd = d(PI / 2.0);
        let g = Grid::span(-5.0, 5.0, 1000).unwrap();
        let fns = RealizationFns::canonical(&dd, 1.0, Constants::default(), g).unwrap();
        let p = build_potential_with(&dd, 1.0, &fns, Regime::NearHalfPi, PotentialForm::TermList { second_derivative: false }).unwrap();
        // quadratic from -a''/a with a = exp(r^2/2)
        assert!(polyfit_relative_residual(&p, 2) < 1e-8);
        assert!(polyfit_relative_residual(&p, 0) > 0.1);
    }

    #[test]
    fn periodic_regime() {
        let dd = d(0.25);
        let k = scale_k(&dd);
        let period = PI / k;
        let g = Grid::new(-period, period / 2000.0, 6001).unwrap();
        let fns = RealizationFns::canonical(&dd, 1.0, Constants::default(), g).unwrap();
        let p = build_potential(&dd, 1.0, &fns, Regime::Near0).unwrap();
        assert!(periodicity_defect(&p, period).unwrap() < 1e-9);
    }

    #[test]
    fn poschl_teller_shape() {
        let dd = d(3.0);
        let g = Grid::span(-8.0, 8.0, 1600).unwrap();
        let mut c = Constants::default();
        c.amp[0] = 0.0;
        let fns = RealizationFns::new(&dd, 1.0, F1Branch::Tanh, F2Branch::Sech, c, g).unwrap();
        let p = build_potential(&dd, 1.0, &fns, Regime::NearPi).unwrap();
        let k = scale_k(&dd);
        let v_inf = p.values[0] + 0.75 * k * k / (k * g.at(0)).cosh().powi(2);
        for i in 0..g.count {
            let r = g.at(i);
            let want = v_inf - 0.75 * k * k / (k * r).cosh().powi(2);
            assert!((p.values[i] - want).abs() < 1e-12);
            assert!((p.values[i] - p.values[g.count - 1 - i]).abs() < 1e-12);
        }
    }

    #[test]
    fn rebuild_is_bit_identical() {
        let dd = d(0.25);
        let g = Grid::span(-10.0, 10.0, 2000).unwrap();
        let fns = RealizationFns::canonical(&dd, 1.5, Constants::default(), g).unwrap();
        let p = build_potential(&dd, 1.5, &fns, Regime::Near0).unwrap();
        let q = PotentialProfile::rebuild(&p.params).unwrap();
        for (a, b) in p.values.iter().zip(&q.values) {
            assert!(a.to_bits() == b.to_bits());
        }
    }

    #[test]
    fn regime_mismatch() {
        let dd = d(3.0);
        let g = Grid::span(-1.0, 1.0, 100).unwrap();
        let fns = RealizationFns::canonical(&dd, 1.0, Constants::default(), g).unwrap();
        assert!(build_potential(&dd, 1.0, &fns, Regime::Near0).is_err());
    }

    #[test]
    fn commensurability_flag() {
        use crate::schrod::realization::RadialProfile;
        let dd = d(0.25);
        let k = scale_k(&dd);
        let period = PI / k;
        let h = period / 400.0;
        let g = Grid::new(-12.0 * period, h, 24 * 400 + 1).unwrap();
        let mut flags = Vec::new();
        for ratio in [1.0, 2.0, (1.0 + 5f64.sqrt()) / 2.0] {
            let mut fns = RealizationFns::canonical(&dd, 1.5, Constants::default(), g).unwrap();
            let w = 2.0 * k * ratio;
            fns.f2 = RadialProfile::from_fn(g, fns.f1.mask.clone(), |r| {
                (10.0 * (w * r).cos(), -10.0 * w * (w * r).sin(), -10.0 * w * w * (w * r).cos())
            });
            let p = build_potential(&dd, 1.5, &fns, Regime::Near0).unwrap();
            flags.push(commensurability(&p, period).1);
        }
        assert_eq!(flags, vec![true, true, false]);
    }
}
