use crate::error::{GmError, Result};
use crate::spaces::{check_weight, Space};

/// ℝ with `|x − y|`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealLine;

impl Space for RealLine {
    type Object = f64;

    fn name(&self) -> &'static str {
        "real"
    }

    fn distance(&self, a: &f64, b: &f64) -> Result<f64> {
        Ok((a - b).abs())
    }

    fn weighted_mean(&self, x: &f64, z: &f64, w: f64) -> Result<f64> {
        check_weight(w)?;
        // Endpoints are returned exactly.
        Ok(if w == 1.0 { *z } else { x + w * (z - x) })
    }
}

/// ℝᵐ with the Euclidean norm.
#[derive(Debug, Clone, Copy)]
pub struct Euclidean {
    pub dim: usize,
}

impl Euclidean {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(GmError::invalid("Euclidean dimension must be at least 1"));
        }
        Ok(Self { dim })
    }

    fn check(&self, v: &[f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(GmError::invalid(format!(
                "expected a {}-dimensional vector, got {}",
                self.dim,
                v.len()
            )));
        }
        Ok(())
    }
}

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

impl Space for Euclidean {
    type Object = Vec<f64>;

    fn name(&self) -> &'static str {
        "vector"
    }

    fn distance(&self, a: &Vec<f64>, b: &Vec<f64>) -> Result<f64> {
        self.check(a)?;
        self.check(b)?;
        Ok(euclidean_distance(a, b))
    }

    fn weighted_mean(&self, x: &Vec<f64>, z: &Vec<f64>, w: f64) -> Result<Vec<f64>> {
        check_weight(w)?;
        self.check(x)?;
        self.check(z)?;
        if w == 1.0 {
            return Ok(z.clone());
        }
        Ok(x.iter().zip(z).map(|(a, b)| a + w * (b - a)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_weighted_mean() {
        assert!((RealLine.weighted_mean(&0.0, &10.0, 0.3).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(RealLine.weighted_mean(&-2.5, &7.0, 0.0).unwrap(), -2.5);
        assert_eq!(RealLine.weighted_mean(&-2.5, &7.0, 1.0).unwrap(), 7.0);
        assert!(RealLine.weighted_mean(&0.0, &1.0, 1.5).is_err());
    }

    #[test]
    fn vector_distance_and_mean() {
        let e = Euclidean::new(2).unwrap();
        assert_eq!(e.distance(&vec![0.0, 0.0], &vec![3.0, 4.0]).unwrap(), 5.0);
        assert!(e.distance(&vec![0.0], &vec![3.0, 4.0]).is_err());
        let y = e.weighted_mean(&vec![0.0, 0.0], &vec![3.0, 4.0], 0.2).unwrap();
        assert!((e.distance(&vec![0.0, 0.0], &y).unwrap() - 1.0).abs() < 1e-12);
        assert!(Euclidean::new(0).is_err());
    }
}
