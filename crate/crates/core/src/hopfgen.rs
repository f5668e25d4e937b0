//! The real-`q` deformation `L_{g,q}` with a general function
//! `f = g^2` of `J_z`: unitarity windows, spectra, truncated representations
//! and numerical checks of the Hopf structure.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type RMatrix = DMatrix<f64>;

/// Shape of `f(m, q1)` (equivalently of `b(m)`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Profile {
    /// `f = (f_hi - f_lo)/cosh^2 m + f_lo`.
    Sech { f_lo: f64, f_hi: f64 },
    /// `b(m) = b`.
    Constant { b: f64 },
    /// `f = f0 * q1^m`, the profile for which `g^2 J_+ g^-2 = q1 J_+` holds.
    Covariant { f0: f64 },
    /// `b` tabulated at increasing `m`, linearly interpolated and held
    /// constant outside the table.
    Tabulated { m: Vec<f64>, b: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenDeformation {
    pub alpha: f64,
    pub q1: f64,
    /// `q1 - 1/q1`.
    pub h: f64,
    pub c1: f64,
    pub c2: f64,
    /// Coefficient of `J_+ J_-` in the Casimir, `2^(1/3)/(q^(1/2) + q^(-1/2))^(1/3)`.
    pub k: f64,
    pub profile: Profile,
}

/// The `2^(4/3)` and `2^(1/3)` prefactors over powers of `q - 1/q` and
/// `q^(1/2) - q^(-1/2)`, with the fractional powers taken of absolute values.
pub fn casimir_constants(q: f64) -> (f64, f64, f64) {
    let u = q.sqrt() - 1.0 / q.sqrt();
    let v = q.sqrt() + 1.0 / q.sqrt();
    let h = q - 1.0 / q;
    let c1 = 2f64.powf(4.0 / 3.0) / (h.abs().powf(4.0 / 3.0) * u.abs().powf(2.0 / 3.0));
    let c2 = 2f64.cbrt() / u.abs().cbrt();
    let k = 2f64.cbrt() / v.cbrt();
    (c1, c2, k)
}

impl GenDeformation {
    pub fn new(alpha: f64, profile: Profile) -> Result<Self> {
        if !(alpha.is_finite()) || alpha == 0.0 {
            return Err(Error::Domain(format!("alpha must be finite and nonzero, got {alpha}")));
        }
        let q1 = (alpha - 1.0) / alpha;
        if !(q1 > 0.0) {
            return Err(Error::Domain(format!(
                "q1 = (alpha - 1)/alpha = {q1} must be positive (alpha > 1 or alpha < 0)"
            )));
        }
        match &profile {
            Profile::Sech { f_lo, f_hi } if !(*f_hi > *f_lo && *f_lo > 0.0) => {
                return Err(Error::Domain(format!(
                    "sech profile needs f_hi > f_lo > 0, got f_lo = {f_lo}, f_hi = {f_hi}"
                )))
            }
            Profile::Covariant { f0 } if !(*f0 > 0.0) => {
                return Err(Error::Domain(format!("covariant profile needs f0 > 0, got {f0}")))
            }
            Profile::Tabulated { m, b }
                if (m.len() != b.len() || m.len() < 2 || m.windows(2).any(|w| w[1] <= w[0])) => {
                    return Err(Error::Domain(
                        "tabulated profile needs >= 2 strictly increasing m values with matching b".into(),
                    ));
                }
            _ => {}
        }
        let (c1, c2, k) = casimir_constants(q1);
        Ok(Self {
            alpha,
            q1,
            h: q1 - 1.0 / q1,
            c1,
            c2,
            k,
            profile,
        })
    }

    /// `b(m)`.
    pub fn b(&self, m: f64) -> f64 {
        let w = (self.q1 - 1.0).powi(2);
        match &self.profile {
            Profile::Sech { f_lo, f_hi } => (sech_value(m, *f_lo, *f_hi) - 1.0) / w,
            Profile::Constant { b } => *b,
            Profile::Covariant { f0 } => (f0 * self.q1.powf(m) - 1.0) / w,
            Profile::Tabulated { m: ms, b } => interpolate(ms, b, m),
        }
    }

    /// `f(m, q1)`.
    pub fn f(&self, m: f64) -> f64 {
        match &self.profile {
            Profile::Sech { f_lo, f_hi } => sech_value(m, *f_lo, *f_hi),
            Profile::Covariant { f0 } => f0 * self.q1.powf(m),
            _ => deformation_f(m, self, self.q1),
        }
    }

    /// `C1 (f/sqrt(q) - 2 + sqrt(q)/f)`, the `g`-dependent part of the
    /// Casimir.
    pub fn casimir_g_part(&self, f: f64) -> f64 {
        let r = self.q1.sqrt();
        self.c1 * (f / r - 2.0 + r / f)
    }

    /// `2 (f - 1/f)/h`, the diagonal of `[J_+, J_-]`.
    pub fn commutator_diag(&self, f: f64) -> f64 {
        2.0 * (f - 1.0 / f) / self.h
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[xs.len() - 1] {
        return ys[ys.len() - 1];
    }
    let i = xs.partition_point(|&v| v <= x) - 1;
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + t * (ys[i + 1] - ys[i])
}

fn sech_value(m: f64, f_lo: f64, f_hi: f64) -> f64 {
    let ch = m.cosh();
    if ch.is_finite() {
        (f_hi - f_lo) / (ch * ch) + f_lo
    } else {
        f_lo
    }
}

/// `f(m, q) = 1 + (q - 1) m + (q - 1)^2 (alpha m + b(m))`.
pub fn deformation_f(m: f64, gd: &GenDeformation, q: f64) -> f64 {
    let e = q - 1.0;
    1.0 + e * m + e * e * (gd.alpha * m + gd.b(m))
}

/// `(f_hi - f_lo)/cosh^2 m + f_lo`.
pub fn sech_profile(m: f64, _gd: &GenDeformation, f_lo: f64, f_hi: f64) -> f64 {
    sech_value(m, f_lo, f_hi)
}

/// How the second unitarity inequality is written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum WindowConvention {
    /// `<J_- J_+> = (c - C1 (g~ - 1/g~)^2)/K - 2 (f - 1/f)/h`, the form
    /// implied by the commutator and the Casimir used to build
    /// representations.
    #[default]
    Consistent,
    /// `(c - C1 (g~ - 1/g~)^2 - 2 C2 (g~^2 - g~^-2)/h)/C2` with
    /// `g~ = q^(-1/4) sqrt(f)`.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitarityWindow {
    pub c: f64,
    pub big_l1: f64,
    pub big_l2: f64,
    /// Closed-form roots of the second inequality (`NaN` when complex).
    pub l1: f64,
    pub l2: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub c_min: f64,
    pub convention: WindowConvention,
}

impl UnitarityWindow {
    pub fn is_empty(&self) -> bool {
        !(self.f_max > self.f_min)
    }

    pub fn contains(&self, f: f64) -> bool {
        f > self.f_min && f < self.f_max
    }
}

/// Coefficients `(P, Q)` of `P x^2 - 2 beta x + Q <= 0`, `x = f/sqrt(q1)`,
/// equivalent to the second inequality.
fn second_quadratic(gd: &GenDeformation, conv: WindowConvention) -> (f64, f64) {
    let r = gd.q1.sqrt();
    match conv {
        WindowConvention::Consistent => {
            let gamma = 2.0 * gd.k / (gd.c1 * gd.h);
            (1.0 + gamma * r, 1.0 - gamma / r)
        }
        WindowConvention::Literal => {
            let gamma = 2.0 * gd.c2 / (gd.c1 * gd.h);
            (1.0 + gamma, 1.0 - gamma)
        }
    }
}

/// The positive `x` solving `P x^2 - 2 beta x + Q <= 0`; always a single
/// (possibly empty or unbounded) interval since `beta > 0`.
fn positive_solution_set(p: f64, q: f64, beta: f64) -> (f64, f64) {
    let disc = beta * beta - p * q;
    if p > 0.0 {
        if disc < 0.0 {
            return (f64::NAN, f64::NAN);
        }
        let root = disc.sqrt();
        ((beta - root) / p, (beta + root) / p)
    } else if p < 0.0 {
        if q >= 0.0 {
            // roots of opposite sign
            let root = disc.sqrt();
            ((beta - root) / p, f64::INFINITY)
        } else {
            (0.0, f64::INFINITY)
        }
    } else {
        (q / (2.0 * beta), f64::INFINITY)
    }
}

fn window_raw(c: f64, gd: &GenDeformation, conv: WindowConvention) -> (f64, f64, f64, f64, f64, f64) {
    let r = gd.q1.sqrt();
    let beta = 1.0 + c / (2.0 * gd.c1);
    let root = (beta * beta - 1.0).max(0.0).sqrt();
    let (big_l1, big_l2) = (r * (beta - root), r * (beta + root));
    let (p, q) = second_quadratic(gd, conv);
    let (ap, am) = (1.0 / p, 1.0 / q);
    let rad = beta * beta * ap * ap - ap / am;
    let (l1, l2) = if rad >= 0.0 {
        (r * (beta * ap - rad.sqrt()), r * (beta * ap + rad.sqrt()))
    } else {
        (f64::NAN, f64::NAN)
    };
    let (x_lo, x_hi) = positive_solution_set(p, q, beta);
    let (f_lo, f_hi) = (r * x_lo.max(0.0), r * x_hi);
    let f_min = big_l1.max(f_lo);
    let f_max = big_l2.min(f_hi);
    (big_l1, big_l2, l1, l2, f_min, f_max)
}

fn nonempty(c: f64, gd: &GenDeformation, conv: WindowConvention) -> bool {
    let (.., f_min, f_max) = window_raw(c, gd, conv);
    f_max > f_min
}

/// Smallest `c` with a nonempty window, by bisection (`inf` if none below
/// 1e12).
pub fn c_min(gd: &GenDeformation, conv: WindowConvention) -> f64 {
    if nonempty(0.0, gd, conv) {
        return 0.0;
    }
    let mut hi = 1e-3;
    while !nonempty(hi, gd, conv) {
        hi *= 2.0;
        if hi > 1e12 {
            return f64::INFINITY;
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if nonempty(mid, gd, conv) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    hi
}

pub fn unitarity_window(c: f64, gd: &GenDeformation) -> Result<UnitarityWindow> {
    unitarity_window_with(c, gd, WindowConvention::Consistent)
}

pub fn unitarity_window_with(c: f64, gd: &GenDeformation, conv: WindowConvention) -> Result<UnitarityWindow> {
    if !(c >= 0.0) {
        return Err(Error::Domain(format!("window needs c >= 0, got {c}")));
    }
    let (big_l1, big_l2, l1, l2, f_min, f_max) = window_raw(c, gd, conv);
    Ok(UnitarityWindow {
        c,
        big_l1,
        big_l2,
        l1,
        l2,
        f_min,
        f_max,
        c_min: c_min(gd, conv),
        convention: conv,
    })
}

/// Direct evaluation of both unitarity inequalities at a given `f`,
/// returning `(<J_+J_->, <J_-J_+>)`.
pub fn unitarity_values(c: f64, f: f64, gd: &GenDeformation, conv: WindowConvention) -> (f64, f64) {
    let r = gd.q1.sqrt();
    match conv {
        WindowConvention::Consistent => {
            let pm = (c - gd.casimir_g_part(f)) / gd.k;
            (pm, pm - gd.commutator_diag(f))
        }
        WindowConvention::Literal => {
            let gt2 = f / r;
            let a = gd.c1 * (gt2 - 2.0 + 1.0 / gt2);
            let pm = (c - a) / gd.c2;
            (pm, (c - a - 2.0 * gd.c2 / gd.h * (gt2 - 1.0 / gt2)) / gd.c2)
        }
    }
}

/// `2 (f - 1/f)/h` over the labels.
pub fn spectrum_2jz(gd: &GenDeformation, ms: &[f64]) -> Result<Vec<f64>> {
    ms.iter()
        .map(|&m| {
            let f = gd.f(m);
            if f > 0.0 {
                Ok(gd.commutator_diag(f))
            } else {
                Err(Error::Domain(format!("f({m}) = {f} is not positive")))
            }
        })
        .collect()
}

/// Common limit of both tails of a sequence sampled on increasing labels,
/// if both tails are monotone with shrinking steps and agree within `tol`.
pub fn accumulation_point(values: &[f64], tail: usize, tol: f64) -> Option<f64> {
    let n = values.len();
    if n < 2 * tail || tail < 3 {
        return None;
    }
    let tail_limit = |seq: &[f64]| -> Option<f64> {
        let d: Vec<f64> = seq.windows(2).map(|w| w[1] - w[0]).collect();
        let signs_ok = d.iter().all(|&x| x >= 0.0) || d.iter().all(|&x| x <= 0.0);
        let shrinking = d.windows(2).all(|w| w[1].abs() <= w[0].abs() + 1e-300);
        if !(signs_ok && shrinking) {
            return None;
        }
        let last = seq[seq.len() - 1];
        let (d1, d2) = (d[d.len() - 2], d[d.len() - 1]);
        // Aitken step when it is well conditioned
        let den = d2 - d1;
        if den.abs() > 1e-300 && (d2 * d2 / den).is_finite() {
            Some(last - d2 * d2 / den)
        } else {
            Some(last)
        }
    };
    let right = tail_limit(&values[n - tail..])?;
    let left_rev: Vec<f64> = values[..tail].iter().rev().copied().collect();
    let left = tail_limit(&left_rev)?;
    if (right - left).abs() <= tol * right.abs().max(1.0) {
        Some(0.5 * (left + right))
    } else {
        None
    }
}

/// Truncated representation of `L_{g,q1}` on `m = m0 .. m0 + dim - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenRep {
    pub basis: Vec<f64>,
    pub jz: RMatrix,
    pub jp: RMatrix,
    pub jm: RMatrix,
    /// `diag(sqrt f)`.
    pub g: RMatrix,
    pub g_inv: RMatrix,
    /// `|N_i|^2` on the links `m_i -> m_i + 1`.
    pub n_sq: Vec<f64>,
    pub anchor: usize,
    pub c: f64,
    pub q: f64,
}

/// Build the ladder by telescoping `|N_{i-1}|^2 - |N_i|^2 = 2 (f_i - 1/f_i)/h`
/// outwards from the basis midpoint, where the Casimir equals `c`.
pub fn build_gen_rep(gd: &GenDeformation, m0: f64, dim: usize, c: f64) -> Result<GenRep> {
    if dim < 3 {
        return Err(Error::Domain(format!("generalized representation needs dim >= 3, got {dim}")));
    }
    let basis: Vec<f64> = (0..dim).map(|i| m0 + i as f64).collect();
    let f: Vec<f64> = basis.iter().map(|&m| gd.f(m)).collect();
    if let Some((i, v)) = f.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        return Err(Error::Domain(format!("f({}) = {v} is not positive", basis[i])));
    }
    let a = dim / 2;
    let mut n_sq = vec![0.0; dim - 1];
    n_sq[a - 1] = (c - gd.casimir_g_part(f[a])) / gd.k;
    for i in a..dim - 1 {
        n_sq[i] = n_sq[i - 1] - gd.commutator_diag(f[i]);
    }
    for i in (1..a).rev() {
        n_sq[i - 1] = n_sq[i] + gd.commutator_diag(f[i]);
    }
    let scale = c.abs().max(1.0);
    if let Some((link, &value)) = n_sq.iter().enumerate().find(|(_, v)| **v < -1e-14 * scale) {
        return Err(Error::NoUnitaryTruncation { link, value });
    }
    let mut jp = RMatrix::zeros(dim, dim);
    for (i, &v) in n_sq.iter().enumerate() {
        jp[(i + 1, i)] = v.max(0.0).sqrt();
    }
    let jm = jp.transpose();
    Ok(GenRep {
        jz: RMatrix::from_diagonal(&nalgebra::DVector::from_vec(basis.clone())),
        g: RMatrix::from_diagonal(&nalgebra::DVector::from_iterator(dim, f.iter().map(|v| v.sqrt()))),
        g_inv: RMatrix::from_diagonal(&nalgebra::DVector::from_iterator(dim, f.iter().map(|v| 1.0 / v.sqrt()))),
        basis,
        jp,
        jm,
        n_sq,
        anchor: a,
        c,
        q: gd.q1,
    })
}

/// Generators of `L_{g,q}` as symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gen {
    Jp,
    Jm,
    G,
    Ginv,
}

/// A product of generators (empty means the identity).
pub type Word = Vec<Gen>;

/// `coef * (leg_1 ⊗ leg_2 ⊗ ...)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub legs: Vec<Word>,
}

pub type Tensor = Vec<Term>;

/// Coproduct of a single generator as two-leg terms.
pub fn coproduct_gen(x: Gen) -> Tensor {
    let t = |a: Word, b: Word| Term { coef: 1.0, legs: vec![a, b] };
    match x {
        Gen::Jp => vec![t(vec![Gen::Jp], vec![Gen::Ginv]), t(vec![Gen::G], vec![Gen::Jp])],
        Gen::Jm => vec![t(vec![Gen::Jm], vec![Gen::Ginv]), t(vec![Gen::G], vec![Gen::Jm])],
        Gen::G => vec![t(vec![Gen::G], vec![Gen::G])],
        Gen::Ginv => vec![t(vec![Gen::Ginv], vec![Gen::Ginv])],
    }
}

/// Coproduct of a word, extended multiplicatively.
pub fn coproduct_word(w: &[Gen]) -> Tensor {
    let mut acc: Tensor = vec![Term { coef: 1.0, legs: vec![vec![], vec![]] }];
    for &x in w {
        let dx = coproduct_gen(x);
        let mut next = Vec::with_capacity(acc.len() * dx.len());
        for a in &acc {
            for b in &dx {
                let legs = a
                    .legs
                    .iter()
                    .zip(&b.legs)
                    .map(|(l, r)| l.iter().chain(r).copied().collect())
                    .collect();
                next.push(Term { coef: a.coef * b.coef, legs });
            }
        }
        acc = next;
    }
    acc
}

/// Apply the coproduct to leg `leg` of every term.
pub fn coproduct_on_leg(t: &Tensor, leg: usize) -> Tensor {
    let mut out = Vec::new();
    for term in t {
        for d in coproduct_word(&term.legs[leg]) {
            let mut legs = term.legs[..leg].to_vec();
            legs.extend(d.legs);
            legs.extend_from_slice(&term.legs[leg + 1..]);
            out.push(Term { coef: term.coef * d.coef, legs });
        }
    }
    out
}

pub fn counit_word(w: &[Gen]) -> f64 {
    if w.iter().any(|g| matches!(g, Gen::Jp | Gen::Jm)) {
        0.0
    } else {
        1.0
    }
}

/// Antipode of a word: reversed order, `S(J_+-) = -q^(-+1) J_+-`,
/// `S(g^+-1) = g^-+1`.
pub fn antipode_word(w: &[Gen], q: f64) -> (f64, Word) {
    let mut coef = 1.0;
    let mut out = Vec::with_capacity(w.len());
    for &x in w.iter().rev() {
        match x {
            Gen::Jp => {
                coef *= -1.0 / q;
                out.push(Gen::Jp);
            }
            Gen::Jm => {
                coef *= -q;
                out.push(Gen::Jm);
            }
            Gen::G => out.push(Gen::Ginv),
            Gen::Ginv => out.push(Gen::G),
        }
    }
    (coef, out)
}

/// Matrices standing for the generators.
#[derive(Debug, Clone)]
pub struct GenMatrices {
    pub jp: RMatrix,
    pub jm: RMatrix,
    pub g: RMatrix,
    pub g_inv: RMatrix,
}

impl GenMatrices {
    pub fn dim(&self) -> usize {
        self.jp.nrows()
    }

    fn gen(&self, x: Gen) -> &RMatrix {
        match x {
            Gen::Jp => &self.jp,
            Gen::Jm => &self.jm,
            Gen::G => &self.g,
            Gen::Ginv => &self.g_inv,
        }
    }

    pub fn word(&self, w: &[Gen]) -> RMatrix {
        let n = self.dim();
        w.iter().fold(RMatrix::identity(n, n), |acc, &x| acc * self.gen(x))
    }

    pub fn tensor(&self, t: &Tensor) -> RMatrix {
        let legs = t.first().map(|x| x.legs.len()).unwrap_or(1);
        let n = self.dim().pow(legs as u32);
        let mut out = RMatrix::zeros(n, n);
        for term in t {
            let mut m = RMatrix::identity(1, 1);
            for w in &term.legs {
                m = m.kronecker(&self.word(w));
            }
            out += m * term.coef;
        }
        out
    }
}

/// Which element plays the role of `g` in the Hopf maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GConvention {
    /// `g = sqrt(f)`, so `g^2 = f`.
    SqrtF,
    /// `g = f`.
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfReport {
    pub coassociativity: f64,
    pub counit: f64,
    /// `m (S ⊗ id) Δ - η ε` and `m (id ⊗ S) Δ - η ε`, worst over generators,
    /// for `g = sqrt f`.
    pub antipode_sqrt_f: f64,
    /// The same with `g = f`.
    pub antipode_f: f64,
    /// `Δ([J_+, J_-]) - [Δ J_+, Δ J_-]` on interior tensor rows.
    pub homomorphism: f64,
    /// `g^2 J_+ g^-2 - q J_+` on interior rows.
    pub eq_covariance: f64,
    /// `[J_+, J_-] - 2 (g^2 - g^-2)/h` on interior rows.
    pub commutator: f64,
    /// Largest deviation of the Casimir diagonal from `c` on interior rows.
    pub casimir_spread: f64,
}

fn max_abs_rows(m: &RMatrix, rows: &[usize]) -> f64 {
    let mut best = 0.0f64;
    for &i in rows {
        for j in 0..m.ncols() {
            best = best.max(m[(i, j)].abs());
        }
    }
    best
}

fn max_abs(m: &RMatrix) -> f64 {
    m.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}

fn antipode_residual(mats: &GenMatrices, q: f64, rows: &[usize]) -> f64 {
    let n = mats.dim();
    let mut worst = 0.0f64;
    for x in [Gen::Jp, Gen::Jm, Gen::G, Gen::Ginv] {
        let target = RMatrix::identity(n, n) * counit_word(&[x]);
        let mut left = RMatrix::zeros(n, n);
        let mut right = RMatrix::zeros(n, n);
        for term in coproduct_gen(x) {
            let (ca, sa) = antipode_word(&term.legs[0], q);
            let mut w: Word = sa;
            w.extend(&term.legs[1]);
            left += mats.word(&w) * (term.coef * ca);
            let (cb, sb) = antipode_word(&term.legs[1], q);
            let mut w: Word = term.legs[0].clone();
            w.extend(sb);
            right += mats.word(&w) * (term.coef * cb);
        }
        worst = worst
            .max(max_abs_rows(&(left - &target), rows))
            .max(max_abs_rows(&(right - &target), rows));
    }
    worst
}

/// Numerical residuals of the Hopf maps and the defining relations on a
/// truncated representation.
pub fn hopf_axiom_report(gd: &GenDeformation, rep: &GenRep) -> HopfReport {
    let n = rep.basis.len();
    let q = gd.q1;
    let interior: Vec<usize> = (1..n - 1).collect();
    let mats = GenMatrices {
        jp: rep.jp.clone(),
        jm: rep.jm.clone(),
        g: rep.g.clone(),
        g_inv: rep.g_inv.clone(),
    };

    let mut coassoc = 0.0f64;
    let mut counit = 0.0f64;
    for x in [Gen::Jp, Gen::Jm, Gen::G, Gen::Ginv] {
        let d = coproduct_gen(x);
        let left = mats.tensor(&coproduct_on_leg(&d, 0));
        let right = mats.tensor(&coproduct_on_leg(&d, 1));
        coassoc = coassoc.max(max_abs(&(left - right)));
        let target = mats.word(&[x]);
        let mut eps_id = RMatrix::zeros(n, n);
        let mut id_eps = RMatrix::zeros(n, n);
        for term in &d {
            eps_id += mats.word(&term.legs[1]) * (term.coef * counit_word(&term.legs[0]));
            id_eps += mats.word(&term.legs[0]) * (term.coef * counit_word(&term.legs[1]));
        }
        counit = counit.max(max_abs(&(eps_id - &target))).max(max_abs(&(id_eps - &target)));
    }

    let antipode_sqrt_f = antipode_residual(&mats, q, &interior);
    let f_mats = GenMatrices {
        g: &rep.g * &rep.g,
        g_inv: &rep.g_inv * &rep.g_inv,
        ..mats.clone()
    };
    let antipode_f = antipode_residual(&f_mats, q, &interior);

    let g2 = &rep.g * &rep.g;
    let g2_inv = &rep.g_inv * &rep.g_inv;
    let comm_rhs = (&g2 - &g2_inv) * (2.0 / gd.h);
    let comm = &rep.jp * &rep.jm - &rep.jm * &rep.jp;
    let commutator = max_abs_rows(&(&comm - &comm_rhs), &interior);

    let dp = mats.tensor(&coproduct_gen(Gen::Jp));
    let dm = mats.tensor(&coproduct_gen(Gen::Jm));
    let lhs = (g2.kronecker(&g2) - g2_inv.kronecker(&g2_inv)) * (2.0 / gd.h);
    let rhs = &dp * &dm - &dm * &dp;
    let tensor_rows: Vec<usize> = interior
        .iter()
        .flat_map(|&i| interior.iter().map(move |&j| i * n + j))
        .collect();
    let homomorphism = max_abs_rows(&(lhs - rhs), &tensor_rows);

    let cov = &g2 * &rep.jp * &g2_inv - &rep.jp * q;
    let eq_covariance = max_abs_rows(&cov, &interior);

    let mut casimir_spread = 0.0f64;
    for i in 1..n {
        let f = g2[(i, i)];
        let val = gd.casimir_g_part(f) + gd.k * rep.n_sq[i - 1];
        casimir_spread = casimir_spread.max((val - rep.c).abs());
    }

    HopfReport {
        coassociativity: coassoc,
        counit,
        antipode_sqrt_f,
        antipode_f,
        homomorphism,
        eq_covariance,
        commutator,
        casimir_spread,
    }
}
