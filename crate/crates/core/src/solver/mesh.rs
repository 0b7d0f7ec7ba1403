use serde::{Deserialize, Serialize};

use crate::error::{hyp, NsfError, Result, Violation};

/// Uniform cell-centred mesh on `[x0, x1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mesh1D {
    pub x0: f64,
    pub x1: f64,
    pub n: usize,
}

impl Mesh1D {
    pub fn new(x0: f64, x1: f64, n: usize) -> Result<Self> {
        let m = Self { x0, x1, n };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.x0.is_finite() && self.x1.is_finite() && self.x1 > self.x0) {
            bad.push(Violation::new("mesh.x1", hyp::SCHEMA, "need finite endpoints with x1 > x0"));
        }
        if self.n == 0 {
            bad.push(Violation::new("mesh.n", hyp::SCHEMA, "need at least one cell"));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(NsfError::Invalid(bad))
        }
    }

    pub fn h(&self) -> f64 {
        (self.x1 - self.x0) / self.n as f64
    }

    pub fn measure(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.h()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.center(i)).collect()
    }

    /// Face `f` sits between cells `f - 1` and `f`; there are `n + 1` faces.
    pub fn face(&self, f: usize) -> f64 {
        if f == self.n {
            self.x1
        } else {
            self.x0 + f as f64 * self.h()
        }
    }

    pub fn widths(&self) -> Vec<f64> {
        vec![self.h(); self.n]
    }

    pub fn refined(&self, factor: usize) -> Self {
        Self { n: self.n * factor, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometry() {
        let m = Mesh1D::new(0.0, 2.0, 4).unwrap();
        assert_eq!(m.h(), 0.5);
        assert_eq!(m.center(0), 0.25);
        assert_eq!(m.face(4), 2.0);
        assert_eq!((0..=m.n).count(), 5);
        assert!(Mesh1D::new(1.0, 1.0, 3).is_err());
        assert!(Mesh1D::new(0.0, 1.0, 0).is_err());
    }
}
