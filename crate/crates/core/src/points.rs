//! Points of the open unit ball and of its boundary sphere.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// How far a sphere point's squared norm may drift from 1.
pub const SPHERE_NORM_TOL: f64 = 1e-12;

/// A point of the open unit ball in `C^n` (strictly inside).
#[derive(Debug, Clone, PartialEq)]
pub struct BallPoint {
    coords: Vec<Complex64>,
}

impl BallPoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("ball point needs dimension >= 1".into()));
        }
        let norm_sq: f64 = coords.iter().map(|z| z.norm_sqr()).sum();
        if !(norm_sq < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "point with |z|^2 = {norm_sq} is not inside the open unit ball"
            )));
        }
        Ok(BallPoint { coords })
    }

    /// The origin of `C^n`.
    pub fn origin(dim: usize) -> Self {
        BallPoint { coords: vec![Complex64::ZERO; dim] }
    }

    /// Convenience constructor for the disc (n = 1).
    pub fn disc(z: Complex64) -> Result<Self> {
        BallPoint::new(vec![z])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Evaluates the monomial `z^alpha` at this point.
    pub fn monomial(&self, alpha: &crate::multiindex::MultiIndex) -> Complex64 {
        monomial_at(&self.coords, alpha.exponents())
    }
}

/// A point of the unit sphere in `C^n`, the boundary of the ball.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<Complex64>,
}

impl SpherePoint {
    pub fn new(coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("sphere point needs dimension >= 1".into()));
        }
        let norm_sq: f64 = coords.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > SPHERE_NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "point with |z|^2 = {norm_sq} is not on the unit sphere"
            )));
        }
        Ok(SpherePoint { coords })
    }

    /// Builds a point from unnormalized coordinates by scaling to norm 1.
    pub fn normalize(coords: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = coords.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        Ok(SpherePoint {
            coords: coords.into_iter().map(|z| z / norm).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    /// Evaluates the monomial `z^alpha` at this point.
    pub fn monomial(&self, alpha: &crate::multiindex::MultiIndex) -> Complex64 {
        monomial_at(&self.coords, alpha.exponents())
    }
}

pub(crate) fn monomial_at(coords: &[Complex64], exponents: &[u32]) -> Complex64 {
    debug_assert_eq!(coords.len(), exponents.len());
    let mut acc = Complex64::ONE;
    for (z, &e) in coords.iter().zip(exponents) {
        acc *= z.powu(e);
    }
    acc
}

/// Hermitian pairing `<z, w> = sum_i z_i conj(w_i)`.
pub(crate) fn hermitian_dot(z: &[Complex64], w: &[Complex64]) -> Complex64 {
    z.iter().zip(w).map(|(a, b)| a * b.conj()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiindex::MultiIndex;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ball_point_rejects_boundary() {
        assert!(BallPoint::new(vec![c(1.0, 0.0)]).is_err());
        assert!(BallPoint::new(vec![c(0.6, 0.0), c(0.0, 0.8)]).is_err());
        assert!(BallPoint::new(vec![c(0.5, 0.0)]).is_ok());
    }

    #[test]
    fn sphere_point_norm_window() {
        assert!(SpherePoint::new(vec![c(1.0, 0.0)]).is_ok());
        assert!(SpherePoint::new(vec![c(0.9999, 0.0)]).is_err());
        let p = SpherePoint::normalize(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        assert!((p.coords()[0].re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn monomial_evaluation() {
        let z = BallPoint::new(vec![c(0.5, 0.0), c(0.0, 0.5)]).unwrap();
        let a = MultiIndex::new(vec![2, 1]);
        let got = z.monomial(&a);
        let want = c(0.25, 0.0) * c(0.0, 0.5);
        assert!((got - want).norm() < 1e-15);
    }
}
