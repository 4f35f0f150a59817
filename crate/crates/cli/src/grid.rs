//! Range arguments: `x` for a single point, `start:stop:points` for an
//! evenly spaced grid, `lo:hi` for an inclusive integer range.

use std::str::FromStr;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn single(x: f64) -> Self {
        Self {
            start: x,
            stop: x,
            points: 1,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("bad number '{p}': {e}"));
        let grid = match parts.as_slice() {
            [x] => Self::single(num(x)?),
            [a, b, n] => {
                let points = n
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| format!("bad point count '{n}': {e}"))?;
                if points == 0 {
                    return Err("point count must be at least 1".into());
                }
                Self {
                    start: num(a)?,
                    stop: num(b)?,
                    points,
                }
            }
            _ => return Err(format!("expected 'x' or 'start:stop:points', got '{s}'")),
        };
        if !(grid.start.is_finite() && grid.stop.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn values(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let int = |p: &str| p.trim().parse::<i64>().map_err(|e| format!("bad integer '{p}': {e}"));
        let (lo, hi) = match s.split_once(':') {
            Some((a, b)) => (int(a)?, int(b)?),
            None => {
                let x = int(s)?;
                (x, x)
            }
        };
        if lo > hi {
            return Err(format!("empty range {lo}:{hi}"));
        }
        Ok(Self { lo, hi })
    }
}
