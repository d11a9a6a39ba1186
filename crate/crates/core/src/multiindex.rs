//! Multi-indices for monomials in several complex variables.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Exponent vector of a monomial `z^a = z_1^{a_1} … z_n^{a_n}`.
///
/// Ordered by total degree first; ties are broken so that within a degree
/// the variable `z_1` dominates, e.g. for `n = 2`:
/// `1 < z1 < z2 < z1² < z1·z2 < z2²`. Every basis and coefficient map in
/// this crate iterates in that order, so matrices are reproducible across
/// runs and platforms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The multi-index of the coordinate monomial `z_{var}`.
    pub fn unit(dim: usize, var: usize) -> Self {
        let mut e = vec![0; dim];
        e[var] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Total degree `|a|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `a!`, the product of the entry factorials.
    pub fn factorial(&self) -> BigUint {
        self.0.iter().map(|&k| factorial(u64::from(k))).product()
    }

    /// Componentwise sum, defined only for equal dimensions.
    pub fn checked_add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "multi-index dimensions {} and {} differ",
                self.dim(),
                other.dim()
            )));
        }
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// Componentwise difference, `None` if any entry would go negative.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        if self.dim() != other.dim() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            // Reverse the tuple comparison so that z1-heavy exponents come
            // first within a degree.
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn factorial(k: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 2..=k {
        acc *= i;
    }
    acc
}

/// All multi-indices of dimension `dim` with total degree at most `max_deg`,
/// in the canonical order.
pub fn indices_up_to_degree(dim: usize, max_deg: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for deg in 0..=max_deg {
        let mut current = vec![0u32; dim];
        fill(dim, 0, deg, &mut current, &mut out);
    }
    out
}

fn fill(dim: usize, pos: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if pos == dim - 1 {
        current[pos] = remaining;
        out.push(MultiIndex::new(current.clone()));
        return;
    }
    // Descending leading exponent matches the canonical tie-break.
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(dim, pos + 1, remaining - e, current, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_graded_with_z1_first() {
        let basis = indices_up_to_degree(2, 2);
        let expected: Vec<Vec<u32>> = vec![
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![2, 0],
            vec![1, 1],
            vec![0, 2],
        ];
        let got: Vec<Vec<u32>> = basis.iter().map(|a| a.exponents().to_vec()).collect();
        assert_eq!(got, expected);
        // enumeration agrees with Ord
        let mut sorted = basis.clone();
        sorted.sort();
        assert_eq!(sorted, basis);
    }

    #[test]
    fn count_is_binomial() {
        // |{|a| <= m}| = C(n+m, n)
        assert_eq!(indices_up_to_degree(2, 1).len(), 3);
        assert_eq!(indices_up_to_degree(2, 2).len(), 6);
        assert_eq!(indices_up_to_degree(3, 4).len(), 35);
    }

    #[test]
    fn factorial_of_index() {
        let a = MultiIndex::new(vec![3, 1, 0]);
        assert_eq!(a.factorial(), BigUint::from(6u32));
        assert_eq!(a.degree(), 4);
    }

    #[test]
    fn add_and_sub() {
        let a = MultiIndex::new(vec![2, 1]);
        let b = MultiIndex::new(vec![1, 1]);
        assert_eq!(a.checked_add(&b).unwrap().exponents(), &[3, 2]);
        assert_eq!(a.checked_sub(&b).unwrap().exponents(), &[1, 0]);
        assert!(b.checked_sub(&a).is_none());
        assert!(a.checked_add(&MultiIndex::zero(3)).is_err());
    }
}
