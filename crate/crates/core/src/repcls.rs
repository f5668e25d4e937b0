//! Unitary representations of `su_q(2)` at `q = exp(is)`: Casimir thresholds,
//! the periodic allowed-`m` intervals and the representation classes.
//!
//! Functions here assume the principal range `s` in `(0, pi)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qnum::Deformation;

const M_TOL: f64 = 1e-9;
const C_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// `1/sin^2 s`, lower edge of the continuous series.
    pub c0: f64,
    /// `1/(4 sin^2(s/2))`, lower edge of the mixed series and the singlet value.
    pub c1: f64,
    /// `1/(4 cos^2(s/2))`, lower edge of the discrete series.
    pub c2: f64,
}

pub fn thresholds(d: &Deformation) -> Thresholds {
    let s = d.s();
    let half_sin = (0.5 * s).sin();
    let half_cos = (0.5 * s).cos();
    Thresholds {
        c0: 1.0 / (d.sin_s() * d.sin_s()),
        c1: 0.25 / (half_sin * half_sin),
        c2: 0.25 / (half_cos * half_cos),
    }
}

/// `c - [m + sign/2]^2`, the squared ladder coefficient.
pub fn ladder_radicand(d: &Deformation, c: f64, m: f64, sign: f64) -> f64 {
    let v = d.q_num(m + 0.5 * sign);
    c - v * v
}

/// Both ladder directions have non-negative squared coefficients.
pub fn unitary_ok(d: &Deformation, c: f64, m: f64) -> bool {
    let lhs = c * d.sin_s() * d.sin_s();
    let up = (d.s() * (m + 0.5)).sin();
    let dn = (d.s() * (m - 0.5)).sin();
    lhs >= up * up && lhs >= dn * dn
}

/// Like [`unitary_ok`] but accepts squared coefficients down to `-tol`, for
/// labels sitting exactly on a closing edge.
pub fn unitary_ok_tol(d: &Deformation, c: f64, m: f64, tol: f64) -> bool {
    ladder_radicand(d, c, m, 1.0) >= -tol && ladder_radicand(d, c, m, -1.0) >= -tol
}

/// The Casimir eigenvalue `cosh^2(s sigma)/sin^2 s` of the continuous series.
/// `k` labels the interval the series is attached to; the value does not
/// depend on it.
pub fn continuous_series_c(d: &Deformation, _k: i64, sigma: f64) -> f64 {
    let ch = (d.s() * sigma).cosh();
    ch * ch / (d.sin_s() * d.sin_s())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum IntervalKind {
    /// Short interval centred at `(k + 1/2) pi/s`.
    Small,
    /// Long interval centred at `k pi/s`.
    Large,
}

/// A closed interval of allowed `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MInterval {
    pub kind: IntervalKind,
    pub k: i64,
    pub lo: f64,
    pub hi: f64,
}

impl MInterval {
    pub fn contains(&self, m: f64) -> bool {
        m >= self.lo && m <= self.hi
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalStructure {
    pub s: f64,
    pub alpha: f64,
    /// Length of the small intervals.
    pub delta: f64,
    /// Length of the large intervals.
    pub big_delta: f64,
    /// Length of each forbidden interval.
    pub gap: f64,
    /// `pi/s`.
    pub period: f64,
}

impl IntervalStructure {
    fn raw(d: &Deformation, c: f64) -> Self {
        let s = d.s();
        let arg = (c.max(0.0) * d.sin_s() * d.sin_s()).sqrt().min(1.0);
        let alpha = arg.asin();
        Self {
            s,
            alpha,
            delta: (s - PI + 2.0 * alpha) / s,
            big_delta: (2.0 * alpha - s) / s,
            gap: (PI - 2.0 * alpha) / s,
            period: PI / s,
        }
    }

    pub fn small_center(&self, k: i64) -> f64 {
        (k as f64 + 0.5) * self.period
    }

    pub fn large_center(&self, k: i64) -> f64 {
        k as f64 * self.period
    }

    /// Allowed intervals meeting `[lo, hi]`, ordered by position. Families
    /// with negative length are absent.
    pub fn intervals_in(&self, lo: f64, hi: f64) -> Vec<MInterval> {
        let k_lo = (lo / self.period).floor() as i64 - 1;
        let k_hi = (hi / self.period).ceil() as i64 + 1;
        let mut out = Vec::new();
        for k in k_lo..=k_hi {
            if self.big_delta >= 0.0 {
                let c = self.large_center(k);
                out.push(MInterval {
                    kind: IntervalKind::Large,
                    k,
                    lo: c - 0.5 * self.big_delta,
                    hi: c + 0.5 * self.big_delta,
                });
            }
            if self.delta >= 0.0 {
                let c = self.small_center(k);
                out.push(MInterval {
                    kind: IntervalKind::Small,
                    k,
                    lo: c - 0.5 * self.delta,
                    hi: c + 0.5 * self.delta,
                });
            }
        }
        out.retain(|iv| iv.hi >= lo && iv.lo <= hi);
        out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        out
    }

    /// Forbidden intervals between consecutive allowed ones inside `[lo, hi]`.
    pub fn gaps_in(&self, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let ivs = self.intervals_in(lo - self.period, hi + self.period);
        ivs.windows(2)
            .filter(|w| w[1].lo > w[0].hi)
            .map(|w| (w[0].hi, w[1].lo))
            .filter(|&(a, b)| b >= lo && a <= hi)
            .collect()
    }
}

/// Interval structure of the mixed series, valid for `c1 <= c <= c0`.
pub fn interval_structure(d: &Deformation, c: f64) -> Result<IntervalStructure> {
    let th = thresholds(d);
    let (lo, hi) = (th.c1.min(th.c0), th.c0);
    if c < lo * (1.0 - 1e-14) || c > hi * (1.0 + 1e-14) {
        let class = if c > hi {
            "continuous series (c > c0)"
        } else if c >= th.c2 {
            "discrete series (c2 <= c < c1)"
        } else {
            "no unitary representation (c < c2)"
        };
        return Err(Error::Domain(format!(
            "interval structure needs c in [{lo}, {hi}], got c = {c}; this c belongs to the {class}"
        )));
    }
    Ok(IntervalStructure::raw(d, c))
}

/// The set of `m` allowed by unitarity at Casimir value `c`, in closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AllowedSet {
    All,
    Intervals(IntervalStructure),
}

impl AllowedSet {
    pub fn contains(&self, m: f64) -> bool {
        match self {
            AllowedSet::All => true,
            AllowedSet::Intervals(st) => st
                .intervals_in(m - 1.0, m + 1.0)
                .iter()
                .any(|iv| iv.contains(m)),
        }
    }
}

/// Closed-form allowed set for any `c >= 0`.
pub fn allowed_set(d: &Deformation, c: f64) -> AllowedSet {
    if c * d.sin_s() * d.sin_s() >= 1.0 {
        AllowedSet::All
    } else {
        AllowedSet::Intervals(IntervalStructure::raw(d, c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RepClass {
    Continuous1,
    Mixed2a,
    Finite2b,
    Singlet2c,
    Discrete3,
}

impl std::fmt::Display for RepClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            RepClass::Continuous1 => "continuous1",
            RepClass::Mixed2a => "mixed2a",
            RepClass::Finite2b => "finite2b",
            RepClass::Singlet2c => "singlet2c",
            RepClass::Discrete3 => "discrete3",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MRule {
    /// Every `m` except the points `(pi/s)(k + 1/2) +- 1/2`.
    Unbounded { period: f64 },
    /// `m0 + l` for all integers `l`; `m0` may be moved anywhere in
    /// `m0_range` without leaving the unitary region.
    Lattice { m0: f64, m0_range: (f64, f64), period: usize },
    Finite(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepDescriptor {
    pub class: RepClass,
    pub c: f64,
    pub s: f64,
    pub m_rule: MRule,
    /// Dimension minus one for finite representations.
    pub n: Option<usize>,
    /// Window label: finite representations are centred in window `k`.
    pub k: Option<i64>,
    /// `s/pi` irrational (to the rationality test) for the continuous series.
    pub strange: bool,
    /// Number of distinct up-ladder coefficients over one period (lattice
    /// classes).
    pub distinct_ladder_values: Option<usize>,
}

impl RepDescriptor {
    /// Forbidden points of the continuous series inside `[lo, hi]`.
    pub fn forbidden_points(&self, lo: f64, hi: f64) -> Vec<f64> {
        let MRule::Unbounded { period } = self.m_rule else {
            return Vec::new();
        };
        let k_lo = (lo / period).floor() as i64 - 1;
        let k_hi = (hi / period).ceil() as i64 + 1;
        let mut pts: Vec<f64> = (k_lo..=k_hi)
            .flat_map(|k| {
                let c = period * (k as f64 + 0.5);
                [c - 0.5, c + 0.5]
            })
            .filter(|&m| m >= lo && m <= hi)
            .collect();
        pts.sort_by(f64::total_cmp);
        pts
    }

    /// Whether `m` is a label of this representation.
    pub fn allows(&self, m: f64) -> bool {
        match &self.m_rule {
            MRule::Unbounded { .. } => self
                .forbidden_points(m - 1.0, m + 1.0)
                .iter()
                .all(|&f| (f - m).abs() > M_TOL),
            MRule::Lattice { m0, .. } => {
                let t = m - m0;
                (t - t.round()).abs() <= M_TOL
            }
            MRule::Finite(list) => list.iter().any(|&x| (x - m).abs() <= M_TOL),
        }
    }

    /// Labels of this representation inside `[lo, hi]`.
    pub fn labels_in(&self, lo: f64, hi: f64) -> Vec<f64> {
        match &self.m_rule {
            MRule::Unbounded { .. } => Vec::new(),
            MRule::Lattice { m0, .. } => {
                let a = (lo - m0).ceil() as i64;
                let b = (hi - m0).floor() as i64;
                (a..=b).map(|l| m0 + l as f64).collect()
            }
            MRule::Finite(list) => list.iter().copied().filter(|&m| m >= lo && m <= hi).collect(),
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        self.n.map(|n| n + 1)
    }
}

fn finite_labels(center: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|j| center - 0.5 * n as f64 + j as f64).collect()
}

/// Finite representations with `c = [(N+1)/2]^2`, centred on the large
/// interval of window `k`.
fn finite_descriptors(d: &Deformation, c: f64) -> Vec<RepDescriptor> {
    let s = d.s();
    let mut out = Vec::new();
    let n_max = (PI / s).ceil() as usize;
    for n in 0..=n_max {
        if n as f64 * s >= PI {
            break;
        }
        let target = d.q_num(0.5 * (n as f64 + 1.0)).powi(2);
        if (c - target).abs() > C_TOL * c.abs().max(1.0) {
            continue;
        }
        let class = if n as f64 > PI / s - 2.0 {
            RepClass::Finite2b
        } else {
            RepClass::Discrete3
        };
        out.push(RepDescriptor {
            class,
            c,
            s,
            m_rule: MRule::Finite(finite_labels(0.0, n)),
            n: Some(n),
            k: Some(0),
            strange: false,
            distinct_ladder_values: None,
        });
    }
    out
}

fn count_distinct(values: &[f64]) -> usize {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
    v.len()
}

fn up_coefficients(d: &Deformation, c: f64, m0: f64, period: usize) -> Vec<f64> {
    (0..period)
        .map(|j| ladder_radicand(d, c, m0 + j as f64, 1.0).max(0.0).sqrt())
        .collect()
}

/// Cyclic series at a rational `s/pi = p/l`: ranges of `m0` in `[0, 1)`
/// for which every label `m0 + j` has strictly positive ladder coefficients.
fn cyclic_descriptors(d: &Deformation, c: f64, p: i64, l: i64) -> Vec<RepDescriptor> {
    let _ = p;
    let period = l as usize;
    let steps = 4096usize;
    let ok = |m0: f64| {
        (0..period).all(|j| {
            let m = m0 + j as f64;
            ladder_radicand(d, c, m, 1.0) > 1e-12 && ladder_radicand(d, c, m, -1.0) > 1e-12
        })
    };
    let flags: Vec<bool> = (0..steps).map(|i| ok(i as f64 / steps as f64)).collect();
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut i = 0;
    while i < steps {
        if flags[i] {
            let start = i;
            while i < steps && flags[i] {
                i += 1;
            }
            runs.push((start, i - 1));
        } else {
            i += 1;
        }
    }
    // join a run wrapping across m0 = 1 with the one starting at 0
    if runs.len() > 1 && runs[0].0 == 0 && runs.last().unwrap().1 == steps - 1 {
        let last = runs.pop().unwrap();
        runs[0] = (last.0, runs[0].1 + steps);
    }
    runs.into_iter()
        .map(|(a, b)| {
            let lo = a as f64 / steps as f64;
            let hi = (b + 1) as f64 / steps as f64;
            let mut m0 = 0.5 * (lo + hi);
            if m0 >= 1.0 {
                m0 -= 1.0;
            }
            RepDescriptor {
                class: RepClass::Mixed2a,
                c,
                s: d.s(),
                m_rule: MRule::Lattice {
                    m0,
                    m0_range: (lo, hi),
                    period,
                },
                n: None,
                k: None,
                strange: false,
                distinct_ladder_values: Some(count_distinct(&up_coefficients(d, c, m0, period))),
            }
        })
        .collect()
}

/// All representation classes available at Casimir value `c`.
pub fn classify(d: &Deformation, c: f64) -> Vec<RepDescriptor> {
    let s = d.s();
    let th = thresholds(d);
    let mut out = Vec::new();
    if !(c > 0.0) {
        return out;
    }
    if c > th.c0 {
        out.push(RepDescriptor {
            class: RepClass::Continuous1,
            c,
            s,
            m_rule: MRule::Unbounded { period: PI / s },
            n: None,
            k: None,
            strange: d.root_of_unity().is_none(),
            distinct_ladder_values: None,
        });
        return out;
    }
    if c > th.c1 {
        if let Some((p, l)) = d.root_of_unity() {
            out.extend(cyclic_descriptors(d, c, p, l));
        }
    }
    if (c - th.c1).abs() <= C_TOL * th.c1.max(1.0) {
        out.push(RepDescriptor {
            class: RepClass::Singlet2c,
            c,
            s,
            m_rule: MRule::Finite(vec![0.5 * PI / s]),
            n: Some(0),
            k: Some(0),
            strange: false,
            distinct_ladder_values: None,
        });
    }
    out.extend(finite_descriptors(d, c));
    out
}

/// The cyclic series at `s = pi/(k+1)` with `m0 = (k+1)/2 - delta/2 + eps`.
pub fn class2a_enumerate(d: &Deformation, c: f64, epsilon: f64) -> Result<RepDescriptor> {
    let ratio = PI / d.s();
    let k_plus_1 = ratio.round();
    if (ratio - k_plus_1).abs() > 1e-9 || k_plus_1 < 2.0 {
        return Err(Error::Domain(format!(
            "cyclic series needs s = pi/(k+1) with k >= 1, got s = {}",
            d.s()
        )));
    }
    let th = thresholds(d);
    if !(c > th.c1 && c < th.c0) {
        return Err(Error::Domain(format!(
            "cyclic series needs c in ({}, {}), got {c}",
            th.c1, th.c0
        )));
    }
    let st = IntervalStructure::raw(d, c);
    if !(epsilon > 0.0 && epsilon < st.delta) {
        return Err(Error::Domain(format!(
            "epsilon must lie in (0, {}), got {epsilon}",
            st.delta
        )));
    }
    let m0 = 0.5 * k_plus_1 - 0.5 * st.delta + epsilon;
    let period = k_plus_1 as usize;
    let lo = 0.5 * k_plus_1 - 0.5 * st.delta;
    Ok(RepDescriptor {
        class: RepClass::Mixed2a,
        c,
        s: d.s(),
        m_rule: MRule::Lattice {
            m0,
            m0_range: (lo, lo + st.delta),
            period,
        },
        n: None,
        k: Some(period as i64 - 1),
        strange: false,
        distinct_ladder_values: Some(count_distinct(&up_coefficients(d, c, m0, period))),
    })
}

/// Labels on the lattice `lo, lo + step, ...` allowed by the closed-form set.
pub fn allowed_on_lattice(d: &Deformation, c: f64, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let set = allowed_set(d, c);
    lattice(lo, hi, step).into_iter().filter(|&m| set.contains(m)).collect()
}

/// Labels on the lattice passing the pointwise unitarity test.
pub fn scan_on_lattice(d: &Deformation, c: f64, lo: f64, hi: f64, step: f64) -> Vec<f64> {
    lattice(lo, hi, step).into_iter().filter(|&m| unitary_ok(d, c, m)).collect()
}

fn lattice(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|i| lo + i as f64 * step).collect()
}
