//! Uniform one-dimensional grids and the `start:stop:step` syntax used on the
//! command line.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform grid `start + i * step` for `i in 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl Grid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) || !start.is_finite() {
            return Err(Error::Domain(format!(
                "grid needs finite start and positive step, got start={start}, step={step}"
            )));
        }
        if count < 2 {
            return Err(Error::InsufficientGrid(format!("grid has {count} samples")));
        }
        Ok(Self { start, step, count })
    }

    /// Grid covering `[start, stop]` with `intervals` equal steps (so
    /// `intervals + 1` samples, both ends included).
    pub fn span(start: f64, stop: f64, intervals: usize) -> Result<Self> {
        if !(stop > start) || intervals == 0 {
            return Err(Error::Domain(format!(
                "span needs stop > start and intervals > 0, got [{start}, {stop}] / {intervals}"
            )));
        }
        Self::new(start, (stop - start) / intervals as f64, intervals + 1)
    }

    /// Parse `start:stop:step`. The last sample is the largest
    /// `start + i*step` not exceeding `stop` by more than 1e-9 of a step.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!(
                "grid spec '{spec}' must have the form start:stop:step"
            )));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("'{p}' in grid spec '{spec}' is not a number")))
        };
        let (start, stop, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || !(stop > start) {
            return Err(Error::Parse(format!(
                "grid spec '{spec}' needs stop > start and step > 0"
            )));
        }
        let intervals = ((stop - start) / step + 1e-9).floor() as usize;
        Self::new(start, step, intervals + 1)
    }

    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn stop(&self) -> f64 {
        self.at(self.count - 1)
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.at(i)).collect()
    }

    /// Index of the sample closest to the middle of the grid.
    pub fn center_index(&self) -> usize {
        self.count / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_spec_counts_inclusive_end() {
        let g = Grid::parse_spec("0:1:0.25").unwrap();
        assert_eq!(g.count, 5);
        assert!((g.stop() - 1.0).abs() < 1e-15);
        let g = Grid::parse_spec("0.2:2.0:0.01").unwrap();
        assert_eq!(g.count, 181);
    }

    #[test]
    fn parse_spec_rejects_garbage() {
        assert!(Grid::parse_spec("0:1").is_err());
        assert!(Grid::parse_spec("a:1:0.1").is_err());
        assert!(Grid::parse_spec("1:0:0.1").is_err());
        assert!(Grid::parse_spec("0:1:-0.1").is_err());
    }

    #[test]
    fn span_has_both_ends() {
        let g = Grid::span(-2.0, 2.0, 400).unwrap();
        assert_eq!(g.count, 401);
        assert_eq!(g.at(0), -2.0);
        assert!((g.stop() - 2.0).abs() < 1e-12);
    }
}
