//! Sections `J_y = 0` of the Casimir level sets and the flow of the
//! `[2J_z]` eigenvalues with `s`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::qnum::Deformation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    Connected,
    Disconnected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSection {
    pub s: f64,
    pub c: f64,
    pub jz: Grid,
    /// `sqrt(radicand)` where the radicand is non-negative, `None` elsewhere.
    pub jx: Vec<Option<f64>>,
    pub connectivity: Connectivity,
    pub components: usize,
}

/// `c - cos s sin^2(s jz) / sin^2 s`.
pub fn section_radicand(d: &Deformation, c: f64, jz: f64) -> f64 {
    c - d.cos_s() * (d.s() * jz).sin().powi(2) / d.sin_s().powi(2)
}

/// Number of maximal runs of `true`.
pub fn count_runs(present: impl IntoIterator<Item = bool>) -> usize {
    let mut runs = 0;
    let mut prev = false;
    for p in present {
        if p && !prev {
            runs += 1;
        }
        prev = p;
    }
    runs
}

pub fn level_section(d: &Deformation, c: f64, jz: Grid) -> Result<LevelSection> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("section needs c > 0, got {c}")));
    }
    let jx: Vec<Option<f64>> = jz
        .points()
        .into_iter()
        .map(|z| {
            let r = section_radicand(d, c, z);
            (r >= 0.0).then(|| r.sqrt())
        })
        .collect();
    let components = count_runs(jx.iter().map(Option::is_some));
    Ok(LevelSection {
        s: d.s(),
        c,
        jz,
        jx,
        connectivity: if components <= 1 {
            Connectivity::Connected
        } else {
            Connectivity::Disconnected
        },
        components,
    })
}

/// Window of three `J_z` periods centred on zero with `samples` intervals.
pub fn default_window(d: &Deformation, samples: usize) -> Result<Grid> {
    let half = 1.5 * std::f64::consts::PI / d.s().abs();
    Grid::span(-half, half, samples)
}

/// Section on [`default_window`] with 3000 intervals.
pub fn classify_section(d: &Deformation, c: f64) -> Result<LevelSection> {
    level_section(d, c, default_window(d, 3000)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transition {
    pub c: f64,
    /// Per `s`, in grid order.
    pub classes: Vec<(f64, Connectivity)>,
    /// Midpoint of the first bracket where the class changes.
    pub s_star: Option<f64>,
    pub bracket: Option<(f64, f64)>,
}

/// Classify every `s` of `s_grid` and locate the change between
/// disconnected and connected sections.
pub fn topology_transition(c: f64, s_grid: &[f64]) -> Result<Transition> {
    let classes: Vec<(f64, Connectivity)> = s_grid
        .par_iter()
        .map(|&s| {
            let d = Deformation::new(s)?;
            Ok((s, classify_section(&d, c)?.connectivity))
        })
        .collect::<Result<_>>()?;
    let bracket = classes
        .windows(2)
        .find(|w| w[0].1 != w[1].1)
        .map(|w| (w[0].0, w[1].0));
    Ok(Transition {
        c,
        classes,
        s_star: bracket.map(|(a, b)| 0.5 * (a + b)),
        bracket,
    })
}

/// The root of `cos s = c sin^2 s` in `(0, pi/2)`.
pub fn transition_closed_form(c: f64) -> f64 {
    // c x^2 + x - c = 0 with x = cos s
    let x = (-1.0 + (1.0 + 4.0 * c * c).sqrt()) / (2.0 * c);
    x.acos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossingKind {
    /// The difference changes sign between two samples.
    SignChange,
    /// The difference is within tolerance at a sample.
    Touch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub s: f64,
    pub m1: f64,
    pub m2: f64,
    pub kind: CrossingKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearCrossing {
    pub s: f64,
    pub m1: f64,
    pub m2: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowTable {
    pub s: Vec<f64>,
    pub m: Vec<f64>,
    /// `curves[j][i] = [2 m_j](s_i)`.
    pub curves: Vec<Vec<f64>>,
    pub crossings: Vec<Crossing>,
    pub near_crossings: Vec<NearCrossing>,
}

pub const CROSSING_TOL: f64 = 1e-9;
/// Local minima of a curve gap below this are reported as near crossings.
pub const NEAR_GAP: f64 = 1e-3;

/// `[2m](s)` for `m = 0, 1/2, ..., m_max`.
pub fn spectral_flow(m_max: f64, s_grid: &[f64]) -> Result<FlowTable> {
    for &s in s_grid {
        let k = (s / std::f64::consts::PI).round();
        if (s - k * std::f64::consts::PI).abs() < 1e-6 {
            return Err(Error::SingularDeformation { s });
        }
    }
    let count = (2.0 * m_max).floor().max(0.0) as usize + 1;
    let m: Vec<f64> = (0..count).map(|j| 0.5 * j as f64).collect();
    let curves: Vec<Vec<f64>> = m
        .iter()
        .map(|&mj| s_grid.iter().map(|&s| (2.0 * mj * s).sin() / s.sin()).collect())
        .collect();
    let mut crossings = Vec::new();
    let mut near = Vec::new();
    for a in 0..count {
        for b in a + 1..count {
            let diff: Vec<f64> = curves[a].iter().zip(&curves[b]).map(|(x, y)| x - y).collect();
            let n = diff.len();
            for i in 0..n {
                if diff[i].abs() <= CROSSING_TOL {
                    crossings.push(Crossing { s: s_grid[i], m1: m[a], m2: m[b], kind: CrossingKind::Touch });
                    continue;
                }
                if i + 1 < n && diff[i + 1].abs() > CROSSING_TOL && diff[i].signum() != diff[i + 1].signum() {
                    let t = diff[i] / (diff[i] - diff[i + 1]);
                    let s = s_grid[i] + t * (s_grid[i + 1] - s_grid[i]);
                    crossings.push(Crossing { s, m1: m[a], m2: m[b], kind: CrossingKind::SignChange });
                }
                if i > 0
                    && i + 1 < n
                    && diff[i].abs() < NEAR_GAP
                    && diff[i].abs() < diff[i - 1].abs()
                    && diff[i].abs() < diff[i + 1].abs()
                    && diff[i - 1].signum() == diff[i + 1].signum()
                    && diff[i].signum() == diff[i + 1].signum()
                {
                    near.push(NearCrossing { s: s_grid[i], m1: m[a], m2: m[b], gap: diff[i].abs() });
                }
            }
        }
    }
    crossings.sort_by(|x, y| x.s.total_cmp(&y.s).then(x.m1.total_cmp(&y.m1)).then(x.m2.total_cmp(&y.m2)));
    Ok(FlowTable { s: s_grid.to_vec(), m, curves, crossings, near_crossings: near })
}

impl FlowTable {
    /// `max |[2m](s)| sin s`.
    pub fn bound_ratio(&self) -> f64 {
        let mut worst = 0.0f64;
        for c in &self.curves {
            for (v, s) in c.iter().zip(&self.s) {
                worst = worst.max(v.abs() * s.sin().abs());
            }
        }
        worst
    }

    /// Crossings within `tol` of `s`.
    pub fn crossings_near(&self, s: f64, tol: f64) -> Vec<Crossing> {
        self.crossings.iter().copied().filter(|c| (c.s - s).abs() <= tol).collect()
    }
}

/// Number of distinct values of `[2m]`, `m = 0..=k`, at `s = pi/(k+1)`.
pub fn distinct_flow_values(k: usize) -> usize {
    let s = std::f64::consts::PI / (k as f64 + 1.0);
    let mut vals: Vec<f64> = (0..=k).map(|m| (2.0 * m as f64 * s).sin() / s.sin()).collect();
    vals.sort_by(f64::total_cmp);
    vals.dedup_by(|a, b| (*a - *b).abs() < CROSSING_TOL);
    vals.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn d(s: f64) -> Deformation {
        Deformation::new(s).unwrap()
    }

    #[test]
    fn negative_cosine_is_connected() {
        for s in [1.6, 2.0, 2.9] {
            for c in [0.01, 1.0, 5.0] {
                let sec = classify_section(&d(s), c).unwrap();
                assert_eq!(sec.connectivity, Connectivity::Connected);
                assert!(sec.jx.iter().all(Option::is_some));
            }
        }
    }

    #[test]
    fn positive_cosine_splits_below_threshold() {
        let dd = d(0.5);
        let thr = dd.cos_s() / dd.sin_s().powi(2);
        let sec = classify_section(&dd, 0.5 * thr).unwrap();
        assert_eq!(sec.connectivity, Connectivity::Disconnected);
        assert!(sec.components >= 2);
        let sec = classify_section(&dd, 1.5 * thr).unwrap();
        assert_eq!(sec.connectivity, Connectivity::Connected);
    }

    #[test]
    fn transition_at_unit_c() {
        let s_grid: Vec<f64> = (1..3000).map(|i| PI * i as f64 / 3000.0).collect();
        let t = topology_transition(1.0, &s_grid).unwrap();
        let (a, b) = t.bracket.unwrap();
        let exact = transition_closed_form(1.0);
        assert!((exact - ((5f64.sqrt() - 1.0) / 2.0).acos()).abs() < 1e-15);
        assert!(a <= exact && exact <= b);
        assert!((t.s_star.unwrap() - 0.9046).abs() < 1e-3);
        assert!(topology_transition(1e6, &s_grid).unwrap().s_star.is_none());
    }

    #[test]
    fn flow_limits() {
        let s_grid: Vec<f64> = (1..=499).map(|i| PI * i as f64 / 500.0).collect();
        let f = spectral_flow(4.0, &s_grid).unwrap();
        assert_eq!(f.curves.len(), 9);
        assert!(f.bound_ratio() <= 1.0 + 1e-12);
        for k in [2.0, 3.0, 4.0] {
            assert!(!f.crossings_near(PI / k, PI / 500.0).is_empty());
        }
        let tiny = spectral_flow(4.0, &[1e-5, PI - 1e-5, PI / 2.0]).unwrap();
        for (j, m) in tiny.m.iter().enumerate() {
            assert!((tiny.curves[j][0] - 2.0 * m).abs() < 1e-4);
            if m.fract() == 0.0 {
                assert!((tiny.curves[j][1] + 2.0 * m).abs() < 1e-3);
                assert!(tiny.curves[j][2].abs() < 1e-12);
            }
        }
        assert!(spectral_flow(1.0, &[PI]).is_err());
    }

    #[test]
    fn distinct_values_bounded() {
        for k in 1..10 {
            assert!(distinct_flow_values(k) <= k + 1);
        }
    }
}
