//! Explicit matrices of `J_z`, `J_+`, `J_-` on a finite stretch of `m`
//! labels, and residual checks of the defining relations.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Sign};
use crate::qnum::Deformation;
use crate::repcls::ladder_radicand;

/// Squared coefficients this close to zero (relative to `max(1, c)`) are
/// treated as exact closures.
const CLOSURE_TOL: f64 = 1e-12;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub entries: CMatrix,
    pub basis: Vec<f64>,
    pub s: f64,
}

/// Row-major serialisation of an [`OperatorMatrix`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub s: f64,
    pub basis: Vec<f64>,
    /// `[re, im]` pairs, row by row.
    pub entries: Vec<[f64; 2]>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> MatrixJson {
        let (r, c) = self.entries.shape();
        let mut entries = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                let z = self.entries[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        MatrixJson {
            rows: r,
            cols: c,
            s: self.s,
            basis: self.basis.clone(),
            entries,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepTriple {
    pub jz: OperatorMatrix,
    pub jp: OperatorMatrix,
    pub jm: OperatorMatrix,
    /// The ladder does not close at one of the basis ends, so edge rows are
    /// excluded from residuals.
    pub truncated: bool,
}

/// `sqrt(c - [m +- 1/2]^2)`.
pub fn ladder_coeff(d: &Deformation, c: f64, m: f64, direction: Sign) -> Result<f64> {
    let r = ladder_radicand(d, c, m, direction.as_f64());
    if r >= 0.0 {
        Ok(r.sqrt())
    } else if r >= -CLOSURE_TOL * c.abs().max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::UnitarityViolation {
            c,
            m,
            sign: direction,
            radicand: r,
        })
    }
}

/// Ladder coefficient of the continuous series labelled by `sigma`, written
/// with `cosh`/`sinh` of `s sigma` and `beta = -+ m s - s/2`.
pub fn ladder_coeff_continuous(d: &Deformation, sigma: f64, m: f64, direction: Sign) -> f64 {
    let s = d.s();
    let beta = -direction.as_f64() * m * s - 0.5 * s;
    let (sb, cb) = beta.sin_cos();
    let ch = (sigma * s).cosh();
    let sh = (sigma * s).sinh();
    (cb * cb * ch * ch + sb * sb * sh * sh).sqrt() / d.sin_s().abs()
}

fn diag(values: impl IntoIterator<Item = f64>) -> CMatrix {
    let v: Vec<Complex64> = values.into_iter().map(|x| Complex64::new(x, 0.0)).collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(v))
}

/// Matrices of the generators on consecutive labels `m_list`.
pub fn build_rep(d: &Deformation, c: f64, m_list: &[f64]) -> Result<RepTriple> {
    let n = m_list.len();
    if n == 0 {
        return Err(Error::Domain("empty basis".into()));
    }
    for w in m_list.windows(2) {
        if ((w[1] - w[0]) - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "basis labels must be spaced by exactly 1, found {} -> {}",
                w[0], w[1]
            )));
        }
    }
    let mut jp = CMatrix::zeros(n, n);
    for i in 0..n.saturating_sub(1) {
        let v = ladder_coeff(d, c, m_list[i], Sign::Plus)?;
        jp[(i + 1, i)] = Complex64::new(v, 0.0);
    }
    let top = ladder_coeff(d, c, m_list[n - 1], Sign::Plus)?;
    let bottom = ladder_coeff(d, c, m_list[0], Sign::Minus)?;
    let jm = jp.transpose();
    let wrap = |entries| OperatorMatrix {
        entries,
        basis: m_list.to_vec(),
        s: d.s(),
    };
    Ok(RepTriple {
        jz: wrap(diag(m_list.iter().copied())),
        jp: wrap(jp),
        jm: wrap(jm),
        truncated: top > 1e-10 || bottom > 1e-10,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlgebraReport {
    /// `max(|[J_z, J_+] - J_+|, |[J_z, J_-] + J_-|)`.
    pub res_jz_jpm: f64,
    /// `|[J_+, J_-] - [2 J_z]|`.
    pub res_jp_jm: f64,
    /// Worst deviation of the two Casimir forms from `c`.
    pub res_casimir: f64,
    /// `|[J_z +- 1/2]^2 + J_-+ J_+- - c|` for the upper and lower sign.
    pub res_casimir_ladder: f64,
    /// `|cos s [J_z]^2 + (J_+J_- + J_-J_+)/2 + [1/2]^2 - c|`.
    pub res_casimir_symmetric: f64,
    /// Largest difference between the two Casimir forms.
    pub casimir_form_gap: f64,
    /// Largest commutator of the Casimir with a generator.
    pub casimir_commutator: f64,
    /// `|J_- - J_+^dagger|`.
    pub hermiticity: f64,
    /// Spread of `C - cos s [J_z]^2 - (J_+J_- + J_-J_+)/2` around
    /// `1/(4 cos^2(s/2))`.
    pub maekawa_same_s: f64,
    /// The same with `[J_z]` and `cos` taken at `2s`.
    pub maekawa_double_s: f64,
    /// `|C - (J_x^2 + J_y^2 + 1/2)|`, meaningful at `s = pi/2`.
    pub euclidean_casimir: f64,
    /// First and last (inclusive) row used for the residuals.
    pub rows: (usize, usize),
    pub truncated: bool,
}

impl AlgebraReport {
    /// The relations that must hold exactly on any unitary representation.
    pub fn max_defining_residual(&self) -> f64 {
        self.res_jz_jpm
            .max(self.res_jp_jm)
            .max(self.res_casimir)
            .max(self.hermiticity)
    }
}

fn block_norm(m: &CMatrix, rows: (usize, usize)) -> f64 {
    let mut best = 0.0f64;
    for i in rows.0..=rows.1 {
        for j in 0..m.ncols() {
            best = best.max(m[(i, j)].norm());
        }
    }
    best
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Residuals of the commutation relations and the Casimir forms.
pub fn verify_algebra(t: &RepTriple, d: &Deformation, c: f64) -> AlgebraReport {
    let n = t.jz.dim();
    let rows = if t.truncated {
        if n >= 5 {
            (2, n - 3)
        } else {
            (0, 0)
        }
    } else {
        (0, n - 1)
    };
    let (jz, jp, jm) = (&t.jz.entries, &t.jp.entries, &t.jm.entries);
    let m: Vec<f64> = t.jz.basis.clone();
    let id = CMatrix::identity(n, n);
    let cid = &id * Complex64::new(c, 0.0);

    let r1 = block_norm(&(commutator(jz, jp) - jp), rows)
        .max(block_norm(&(commutator(jz, jm) + jm), rows));
    let q2m = diag(m.iter().map(|&x| d.q_num(2.0 * x)));
    let r2 = block_norm(&(commutator(jp, jm) - &q2m), rows);

    let up = diag(m.iter().map(|&x| d.q_num(x + 0.5).powi(2))) + jm * jp;
    let dn = diag(m.iter().map(|&x| d.q_num(x - 0.5).powi(2))) + jp * jm;
    let anti = (jp * jm + jm * jp) * Complex64::new(0.5, 0.0);
    let qz2 = diag(m.iter().map(|&x| d.q_num(x).powi(2)));
    let half_sq = d.q_num(0.5).powi(2);
    let sym = &qz2 * Complex64::new(d.cos_s(), 0.0) + &anti + &id * Complex64::new(half_sq, 0.0);

    let res_ladder = block_norm(&(&up - &cid), rows).max(block_norm(&(&dn - &cid), rows));
    let res_sym = block_norm(&(&sym - &cid), rows);
    let gap = block_norm(&(&up - &sym), rows).max(block_norm(&(&dn - &sym), rows));

    let cas = &up;
    let cc = block_norm(&commutator(cas, jz), rows)
        .max(block_norm(&commutator(cas, jp), rows))
        .max(block_norm(&commutator(cas, jm), rows));
    let herm = (jm - jp.adjoint()).iter().fold(0.0f64, |a, z| a.max(z.norm()));

    let maekawa_target = 0.25 / (0.5 * d.s()).cos().powi(2);
    let same = cas - &qz2 * Complex64::new(d.cos_s(), 0.0) - &anti;
    let maekawa_same_s = block_norm(&(same - &id * Complex64::new(maekawa_target, 0.0)), rows);
    let s2 = 2.0 * d.s();
    let qz2_double = diag(m.iter().map(|&x| ((x * s2).sin() / s2.sin()).powi(2)));
    let double = cas - &qz2_double * Complex64::new(s2.cos(), 0.0) - &anti;
    let maekawa_double_s = block_norm(&(double - &id * Complex64::new(maekawa_target, 0.0)), rows);

    let euclid = cas - &anti - &id * Complex64::new(0.5, 0.0);

    AlgebraReport {
        res_jz_jpm: r1,
        res_jp_jm: r2,
        res_casimir: res_ladder.max(res_sym),
        res_casimir_ladder: res_ladder,
        res_casimir_symmetric: res_sym,
        casimir_form_gap: gap,
        casimir_commutator: cc,
        hermiticity: herm,
        maekawa_same_s,
        maekawa_double_s,
        euclidean_casimir: block_norm(&euclid, rows),
        rows,
        truncated: t.truncated,
    }
}
