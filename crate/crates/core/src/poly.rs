//! Sparse polynomials in several complex variables.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

/// Coefficients below this magnitude are treated as zero when normalizing.
const COEFF_EPS: f64 = 0.0;

/// A polynomial `p(z) = sum_a c_a z^a` stored as a sparse map from
/// multi-indices to nonzero coefficients. Terms iterate in the canonical
/// graded order of [`MultiIndex`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    dim: usize,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl ComplexPoly {
    /// The zero polynomial in `dim` variables.
    pub fn zero(dim: usize) -> Self {
        ComplexPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        let mut p = ComplexPoly::zero(dim);
        p.set(MultiIndex::zero(dim), c);
        p
    }

    /// The coordinate polynomial `z_{var}`.
    pub fn variable(dim: usize, var: usize) -> Self {
        let mut p = ComplexPoly::zero(dim);
        p.set(MultiIndex::unit(dim, var), Complex64::ONE);
        p
    }

    pub fn monomial(alpha: MultiIndex, coeff: Complex64) -> Self {
        let mut p = ComplexPoly::zero(alpha.dim());
        p.set(alpha, coeff);
        p
    }

    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Complex64)>,
    {
        let mut p = ComplexPoly::zero(dim);
        for (alpha, c) in terms {
            if alpha.dim() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "term {alpha} does not have dimension {dim}"
                )));
            }
            let cur = p.coeff(&alpha) + c;
            p.set(alpha, cur);
        }
        Ok(p)
    }

    fn set(&mut self, alpha: MultiIndex, c: Complex64) {
        debug_assert_eq!(alpha.dim(), self.dim);
        if c.norm_sqr() <= COEFF_EPS {
            self.terms.remove(&alpha);
        } else {
            self.terms.insert(alpha, c);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest total degree among stored terms; `None` for the zero
    /// polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::degree).max()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        self.terms.get(alpha).copied().unwrap_or(Complex64::ZERO)
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    pub fn eval(&self, coords: &[Complex64]) -> Result<Complex64> {
        if coords.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "evaluating a {}-variable polynomial at a point of dimension {}",
                self.dim,
                coords.len()
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|(alpha, c)| c * crate::points::monomial_at(coords, alpha.exponents()))
            .sum())
    }

    pub fn add(&self, other: &ComplexPoly) -> Result<ComplexPoly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (alpha, c) in &other.terms {
            let cur = out.coeff(alpha) + c;
            out.set(alpha.clone(), cur);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ComplexPoly) -> Result<ComplexPoly> {
        self.add(&other.scale(-Complex64::ONE))
    }

    pub fn scale(&self, c: Complex64) -> ComplexPoly {
        if c == Complex64::ZERO {
            return ComplexPoly::zero(self.dim);
        }
        ComplexPoly {
            dim: self.dim,
            terms: self.terms.iter().map(|(a, v)| (a.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &ComplexPoly) -> Result<ComplexPoly> {
        self.check_dim(other)?;
        let mut out = ComplexPoly::zero(self.dim);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let idx = a.checked_add(b)?;
                let cur = out.coeff(&idx) + ca * cb;
                out.set(idx, cur);
            }
        }
        Ok(out)
    }

    /// Drops all terms with `|alpha| > max_degree`.
    pub fn truncate(&self, max_degree: u32) -> ComplexPoly {
        ComplexPoly {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.degree() <= max_degree)
                .map(|(a, c)| (a.clone(), *c))
                .collect(),
        }
    }

    fn check_dim(&self, other: &ComplexPoly) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "polynomial dimensions {} and {} differ",
                self.dim, other.dim
            )));
        }
        Ok(())
    }
}
