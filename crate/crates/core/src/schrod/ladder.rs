//! `Psi_{c, m+-1} = +-R' + (-(f1/2)[2m] + f2) R` on the grid, with the
//! Liouville factors of `m` and `m +- 1`.

use serde::{Deserialize, Serialize};

use super::eigen::{derivative, operator_residual, EigenResult};
use super::potential::{build_potential_with, kappa, liouville_factor, LiouvilleMode, PotentialForm, Regime};
use super::realization::RealizationFns;
use crate::error::{Error, Result, Sign};
use crate::qnum::Deformation;

/// `g_m = f2 - f1 [2m] / 2` at sample `i`.
pub fn ladder_g(d: &Deformation, fns: &RealizationFns, m: f64, i: usize) -> f64 {
    fns.f2.values[i] - 0.5 * fns.f1.values[i] * d.q_num(2.0 * m)
}

/// Apply the raising or lowering operator to `psi`, sampled on the grid
/// of `fns` from index `offset`. Returns the new wavefunction in the
/// Schrödinger gauge of `m +- 1`.
pub fn ladder_apply(
    d: &Deformation,
    fns: &RealizationFns,
    m: f64,
    sign: Sign,
    psi: &[f64],
    offset: usize,
) -> Result<Vec<f64>> {
    let n = psi.len();
    if offset + n > fns.grid().count || n < 5 {
        return Err(Error::Domain("wavefunction does not fit the realization grid".into()));
    }
    if fns.mask()[offset..offset + n].iter().any(|&b| b) {
        return Err(Error::Domain("wavefunction overlaps masked samples".into()));
    }
    let mode = LiouvilleMode::FirstDerivativeElimination;
    let m_new = m + sign.as_f64();
    let a = liouville_factor(d, &fns.f1, fns.f1_branch, mode, kappa(d, m));
    let a_new = liouville_factor(d, &fns.f1, fns.f1_branch, mode, kappa(d, m_new));
    let r: Vec<f64> = (0..n).map(|j| a[offset + j] * psi[j]).collect();
    let dr = derivative(&r, fns.grid().step);
    Ok((0..n)
        .map(|j| {
            let i = offset + j;
            (sign.as_f64() * dr[j] + ladder_g(d, fns, m, i) * r[j]) / a_new[i]
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderCheck {
    pub m: f64,
    pub m_new: f64,
    pub c: f64,
    pub psi: Vec<f64>,
    /// `sqrt(sum psi^2 h)` of the image relative to the input.
    pub norm_ratio: f64,
    /// `||(-D^2 + V_{m+-1} - c) psi'|| / ||psi'||` with the five-point
    /// Laplacian, `0` when the image vanishes.
    pub residual: f64,
    /// `c - [m +- 1/2]^2`.
    pub radicand: f64,
    pub unitary: bool,
}

/// Ladder step from mode `k` of `eig`, an eigensolve of the potential at
/// `m` built from `fns`.
pub fn ladder_step(
    d: &Deformation,
    fns: &RealizationFns,
    m: f64,
    sign: Sign,
    eig: &EigenResult,
    k: usize,
    regime: Regime,
) -> Result<LadderCheck> {
    let c = eig.eigenvalues[k];
    let psi = &eig.eigenvectors[k];
    ladder_check(d, fns, m, sign, psi, eig.offset, c, regime)
}

/// Ladder step from an arbitrary sampled `psi` taken to have Casimir `c`.
#[allow(clippy::too_many_arguments)]
pub fn ladder_check(
    d: &Deformation,
    fns: &RealizationFns,
    m: f64,
    sign: Sign,
    psi: &[f64],
    offset: usize,
    c: f64,
    regime: Regime,
) -> Result<LadderCheck> {
    let h = fns.grid().step;
    let out = ladder_apply(d, fns, m, sign, psi, offset)?;
    let m_new = m + sign.as_f64();
    let v = build_potential_with(d, m_new, fns, regime, PotentialForm::Derived)?;
    let n = out.len();
    let norm = |f: &[f64]| (f.iter().map(|x| x * x).sum::<f64>() * h).sqrt();
    let out_norm = norm(&out);
    let in_norm = norm(psi);
    let residual = if out_norm > 0.0 {
        operator_residual(&v.values[offset..offset + n], &out, c, h) / out_norm
    } else {
        0.0
    };
    let radicand = c - d.q_num(m + 0.5 * sign.as_f64()).powi(2);
    Ok(LadderCheck {
        m,
        m_new,
        c,
        norm_ratio: if in_norm > 0.0 { out_norm / in_norm } else { 0.0 },
        psi: out,
        residual,
        radicand,
        unitary: radicand >= -1e-12 * c.abs().max(1.0),
    })
}
