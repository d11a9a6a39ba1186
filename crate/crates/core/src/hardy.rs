//! The Hardy space of the unit ball: Szegő kernel evaluation, exact inner
//! products of polynomials, and Gram matrices of kernel functions.

use nalgebra::DMatrix;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::points::{hermitian_dot, BallPoint};
use crate::poly::ComplexPoly;
use crate::sphere::monomial_integral;

/// Gram matrices with reciprocal condition number below this are rejected:
/// clustered nodes are a caller error worth surfacing, not noise to absorb.
pub const GRAM_RCOND_MIN: f64 = 1e-12;

/// The Szegő kernel `S_n(z, w) = (1 - <z, w>)^{-n}`.
pub fn szego_kernel(z: &BallPoint, w: &BallPoint) -> Result<Complex64> {
    if z.dim() != w.dim() {
        return Err(Error::DimensionMismatch(format!(
            "kernel arguments of dimension {} and {}",
            z.dim(),
            w.dim()
        )));
    }
    let base = Complex64::ONE - hermitian_dot(z.coords(), w.coords());
    // both points are interior, so base is bounded away from 0
    Ok(cpow(base, z.dim()).inv())
}

fn cpow(base: Complex64, exp: usize) -> Complex64 {
    let mut acc = Complex64::ONE;
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

/// Coefficient of `z^alpha conj(w)^alpha` in the power series of the Szegő
/// kernel, namely `binom(n-1+|alpha|, n-1) * |alpha|! / alpha!`.
///
/// Computed by binomial/multinomial recurrences rather than through the
/// monomial integrals, so the two routes check each other: the product of
/// this coefficient with the diagonal monomial integral is exactly 1.
pub fn szego_series_coeff(alpha: &MultiIndex, n: usize) -> Result<BigRational> {
    if n == 0 || alpha.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "multi-index of dimension {} against ambient dimension {n}",
            alpha.dim()
        )));
    }
    let k = u64::from(alpha.degree());
    // binom(n-1+k, n-1) via the multiplicative recurrence
    let mut binom = BigUint::from(1u32);
    for i in 1..=(n as u64 - 1) {
        binom = binom * (k + i) / i;
    }
    // multinomial k! / alpha! via repeated binomials over partial sums
    let mut multinomial = BigUint::from(1u32);
    let mut partial = 0u64;
    for &e in alpha.exponents() {
        let e = u64::from(e);
        partial += e;
        // binom(partial, e)
        let mut c = BigUint::from(1u32);
        for i in 1..=e {
            c = c * (partial - e + i) / i;
        }
        multinomial *= c;
    }
    Ok(BigRational::from(BigInt::from(binom * multinomial)))
}

/// Exact Hardy-space inner product of two polynomials,
/// `<p, q> = sum_a p_a conj(q_a) |z^a|^2`.
///
/// The value is exact up to coefficient rounding; in particular it is
/// exactly zero whenever the supports are disjoint.
pub fn h2_inner(p: &ComplexPoly, q: &ComplexPoly) -> Result<Complex64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial dimensions {} and {} differ",
            p.dim(),
            q.dim()
        )));
    }
    let n = p.dim();
    let mut acc = Complex64::ZERO;
    for (alpha, a) in p.terms() {
        let b = q.coeff(alpha);
        if b != Complex64::ZERO {
            acc += a * b.conj() * monomial_integral(alpha, alpha, n)?;
        }
    }
    Ok(acc)
}

/// A finite combination `sum_j c_j S_n(., z_j)` of kernel functions.
#[derive(Debug, Clone)]
pub struct KernelCombo {
    points: Vec<BallPoint>,
    coeffs: Vec<Complex64>,
}

impl KernelCombo {
    pub fn new(points: Vec<BallPoint>, coeffs: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() || points.len() != coeffs.len() {
            return Err(Error::InvalidArgument(format!(
                "kernel combination needs matching nonempty points ({}) and coefficients ({})",
                points.len(),
                coeffs.len()
            )));
        }
        check_distinct(&points)?;
        Ok(KernelCombo { points, coeffs })
    }

    pub fn points(&self) -> &[BallPoint] {
        &self.points
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor requires at least one node
    }

    /// Taylor coefficient of the combination along `z^alpha`, namely
    /// `sum_j c_j * series_coeff(alpha) * conj(z_j^alpha)`.
    pub fn taylor_coeff(&self, alpha: &MultiIndex) -> Result<Complex64> {
        let series = crate::sphere::rational_to_f64(&szego_series_coeff(alpha, self.dim())?);
        let mut acc = Complex64::ZERO;
        for (z, c) in self.points.iter().zip(&self.coeffs) {
            acc += c * z.monomial(alpha).conj();
        }
        Ok(acc * series)
    }
}

pub(crate) fn check_distinct(points: &[BallPoint]) -> Result<()> {
    for i in 0..points.len() {
        for j in 0..i {
            if points[i] == points[j] {
                return Err(Error::InvalidArgument(format!(
                    "points {j} and {i} coincide"
                )));
            }
        }
    }
    Ok(())
}

/// Evaluates a kernel combination at a point of the ball.
pub fn eval_kernel_combo(f: &KernelCombo, z: &BallPoint) -> Result<Complex64> {
    if z.dim() != f.dim() {
        return Err(Error::DimensionMismatch(format!(
            "combination of dimension {} evaluated at a point of dimension {}",
            f.dim(),
            z.dim()
        )));
    }
    let mut acc = Complex64::ZERO;
    for (w, c) in f.points().iter().zip(f.coeffs()) {
        acc += c * szego_kernel(z, w)?;
    }
    Ok(acc)
}

/// A square matrix that is Hermitian by construction: entry `(j, i)` is
/// stored as the exact conjugate of entry `(i, j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Builds the matrix from the upper triangle returned by `f`; the lower
    /// triangle mirrors it by conjugation, and the diagonal keeps only its
    /// real part.
    pub fn from_fn<F>(dim: usize, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> Complex64,
    {
        let mut data = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                if i == j {
                    data[(i, i)] = Complex64::new(v.re, 0.0);
                } else {
                    data[(i, j)] = v;
                    data[(j, i)] = v.conj();
                }
            }
        }
        HermitianMatrix { data }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    /// Ascending real eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .data
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Minimum eigenvalue at least `-tol * max_abs_entry`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol * self.max_abs_entry().max(1e-300)
    }
}

/// Cholesky factorization `G = L L*` of a Hermitian positive definite
/// matrix, reporting the failing pivot when the matrix is not numerically
/// positive definite.
pub(crate) fn cholesky_lower(h: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = h.nrows();
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::IllConditioned {
                pivot: j,
                detail: format!("factorization pivot {d:.3e} is not positive"),
            });
        }
        let djj = d.sqrt();
        l[(j, j)] = Complex64::new(djj, 0.0);
        for i in (j + 1)..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / djj;
        }
    }
    Ok(l)
}

/// Solves a Hermitian positive definite system through [`cholesky_lower`].
pub(crate) fn cholesky_solve(
    h: &DMatrix<Complex64>,
    rhs: &nalgebra::DVector<Complex64>,
) -> Result<nalgebra::DVector<Complex64>> {
    let l = cholesky_lower(h)?;
    let mut x = rhs.clone();
    let ok = l.solve_lower_triangular_mut(&mut x);
    debug_assert!(ok);
    let ok = l.adjoint().solve_upper_triangular_mut(&mut x);
    debug_assert!(ok);
    Ok(x)
}

/// The Gram matrix of Szegő kernel functions at a node set, with its
/// Cholesky factor cached for reuse by projections and operator norms.
#[derive(Debug, Clone)]
pub struct KernelGram {
    points: Vec<BallPoint>,
    gram: HermitianMatrix,
    factor: DMatrix<Complex64>,
    rcond: f64,
}

impl KernelGram {
    pub fn points(&self) -> &[BallPoint] {
        &self.points
    }

    pub fn gram(&self) -> &HermitianMatrix {
        &self.gram
    }

    /// Lower-triangular `L` with `G = L L*`.
    pub fn factor(&self) -> &DMatrix<Complex64> {
        &self.factor
    }

    /// Reciprocal condition number estimate (ratio of extreme eigenvalues).
    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Solves `G x = rhs` through the cached factor.
    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let mut x = nalgebra::DVector::from_column_slice(rhs);
        let solved_lower = self.factor.solve_lower_triangular_mut(&mut x);
        debug_assert!(solved_lower);
        let solved_upper = self.factor.adjoint().solve_upper_triangular_mut(&mut x);
        debug_assert!(solved_upper);
        x.iter().copied().collect()
    }
}

/// Builds the kernel Gram matrix `[S_n(z_i, z_j)]` of a distinct node set
/// and factors it.
pub fn kernel_gram(points: &[BallPoint]) -> Result<KernelGram> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("at least one node is required".into()));
    }
    let n = points[0].dim();
    if points.iter().any(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch("nodes of mixed dimension".into()));
    }
    check_distinct(points)?;
    let m = points.len();
    let gram = HermitianMatrix::from_fn(m, |i, j| {
        szego_kernel(&points[i], &points[j]).expect("dimensions verified")
    });
    let factor = cholesky_lower(gram.matrix())?;
    let ev = gram.eigenvalues();
    let rcond = ev[0] / ev[m - 1];
    if !(rcond >= GRAM_RCOND_MIN) {
        // smallest factorization pivot localizes the near-collision
        let pivot = (0..m)
            .min_by(|&a, &b| {
                factor[(a, a)]
                    .re
                    .partial_cmp(&factor[(b, b)].re)
                    .expect("pivots are finite")
            })
            .unwrap_or(0);
        return Err(Error::IllConditioned {
            pivot,
            detail: format!("Gram reciprocal condition {rcond:.3e} below {GRAM_RCOND_MIN:.0e}"),
        });
    }
    Ok(KernelGram { points: points.to_vec(), gram, factor, rcond })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::sphere::monomial_integral_exact;
    use num_traits::One;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc(x: f64) -> BallPoint {
        BallPoint::disc(c(x, 0.0)).unwrap()
    }

    #[test]
    fn kernel_at_origin_is_one() {
        let z = BallPoint::origin(3);
        let w = BallPoint::new(vec![c(0.2, 0.1), c(0.0, 0.3), c(-0.4, 0.0)]).unwrap();
        assert_eq!(szego_kernel(&z, &w).unwrap(), Complex64::ONE);
    }

    #[test]
    fn kernel_diagonal_values() {
        let z = BallPoint::new(vec![c(0.5, 0.0), c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(szego_kernel(&z, &z).unwrap().re, 16.0 / 9.0, epsilon = 1e-15);
        let d = disc(0.5);
        assert_abs_diff_eq!(szego_kernel(&d, &d).unwrap().re, 4.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn kernel_conjugate_symmetry() {
        let z = BallPoint::new(vec![c(0.2, 0.3), c(-0.1, 0.4)]).unwrap();
        let w = BallPoint::new(vec![c(-0.3, 0.1), c(0.2, 0.2)]).unwrap();
        let a = szego_kernel(&z, &w).unwrap();
        let b = szego_kernel(&w, &z).unwrap();
        assert!((a - b.conj()).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn kernel_diagonal_dominates_one() {
        let z = BallPoint::new(vec![c(0.2, 0.3), c(-0.1, 0.4)]).unwrap();
        assert!(szego_kernel(&z, &z).unwrap().re > 1.0);
        let o = BallPoint::origin(2);
        assert_eq!(szego_kernel(&o, &o).unwrap(), Complex64::ONE);
    }

    #[test]
    fn series_coefficient_inverts_monomial_integral() {
        for (exps, n) in [
            (vec![0, 0], 2),
            (vec![1, 0], 2),
            (vec![2, 3], 2),
            (vec![1, 1, 4], 3),
            (vec![5], 1),
        ] {
            let a = MultiIndex::new(exps);
            let coeff = szego_series_coeff(&a, n).unwrap();
            let integral = monomial_integral_exact(&a, &a, n).unwrap();
            assert!((coeff * integral).is_one(), "failed at {a} n={n}");
        }
    }

    #[test]
    fn inner_product_basics() {
        let n = 2;
        let z1 = ComplexPoly::variable(n, 0);
        let z2 = ComplexPoly::variable(n, 1);
        let one = ComplexPoly::constant(n, Complex64::ONE);
        assert_eq!(h2_inner(&z1, &z2).unwrap(), Complex64::ZERO);
        assert_abs_diff_eq!(h2_inner(&z1, &z1).unwrap().re, 0.5, epsilon = 0.0);
        assert_eq!(h2_inner(&one, &one).unwrap(), Complex64::ONE);
        let q = ComplexPoly::constant(1, Complex64::ONE);
        assert!(h2_inner(&one, &q).is_err());
    }

    #[test]
    fn gram_single_origin() {
        let g = kernel_gram(&[BallPoint::origin(2)]).unwrap();
        assert_eq!(g.gram().entry(0, 0), Complex64::ONE);
    }

    #[test]
    fn gram_two_nodes_on_disc() {
        let g = kernel_gram(&[disc(0.0), disc(0.5)]).unwrap();
        assert_eq!(g.gram().entry(0, 0), Complex64::ONE);
        assert_eq!(g.gram().entry(0, 1), Complex64::ONE);
        assert_abs_diff_eq!(g.gram().entry(1, 1).re, 4.0 / 3.0, epsilon = 1e-15);
        // exact Hermitian storage
        assert_eq!(g.gram().entry(1, 0), g.gram().entry(0, 1).conj());
    }

    #[test]
    fn gram_is_positive_definite() {
        let pts = vec![
            BallPoint::new(vec![c(0.1, 0.2), c(0.3, 0.0)]).unwrap(),
            BallPoint::new(vec![c(-0.4, 0.1), c(0.0, 0.2)]).unwrap(),
            BallPoint::new(vec![c(0.0, 0.0), c(0.5, -0.3)]).unwrap(),
        ];
        let g = kernel_gram(&pts).unwrap();
        assert!(g.gram().min_eigenvalue() > 0.0);
        // factor reproduces the matrix
        let rec = g.factor() * g.factor().adjoint();
        assert!((rec - g.gram().matrix()).norm() < 1e-12);
    }

    #[test]
    fn coincident_nodes_are_ill_conditioned() {
        let a = disc(0.3);
        let b = BallPoint::disc(c(0.3 + 1e-13, 0.0)).unwrap();
        match kernel_gram(&[a, b]) {
            Err(Error::IllConditioned { .. }) => {}
            other => panic!("expected ill-conditioned error, got {other:?}"),
        }
        // exactly equal points are rejected as invalid input
        assert!(kernel_gram(&[disc(0.3), disc(0.3)]).is_err());
    }

    #[test]
    fn combo_evaluation() {
        // S_n(., 0) is identically 1
        let combo = KernelCombo::new(vec![BallPoint::origin(2)], vec![c(0.7, -0.2)]).unwrap();
        let z = BallPoint::new(vec![c(0.1, 0.1), c(0.2, 0.0)]).unwrap();
        assert_abs_diff_eq!(
            (eval_kernel_combo(&combo, &z).unwrap() - c(0.7, -0.2)).norm(),
            0.0,
            epsilon = 1e-15
        );

        let combo = KernelCombo::new(
            vec![disc(0.0), disc(0.5)],
            vec![c(-1.5, 0.0), c(1.5, 0.0)],
        )
        .unwrap();
        let at_half = eval_kernel_combo(&combo, &disc(0.5)).unwrap();
        assert_abs_diff_eq!(at_half.re, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(at_half.im, 0.0, epsilon = 1e-15);
        let at_zero = eval_kernel_combo(&combo, &disc(0.0)).unwrap();
        assert_abs_diff_eq!(at_zero.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn gram_solve_roundtrip() {
        let pts = vec![disc(0.0), disc(0.5), disc(-0.3)];
        let g = kernel_gram(&pts).unwrap();
        let rhs = vec![c(1.0, 0.5), c(-0.2, 0.1), c(0.0, -1.0)];
        let x = g.solve(&rhs);
        let xv = nalgebra::DVector::from_column_slice(&x);
        let back = g.gram().matrix() * xv;
        for (a, b) in back.iter().zip(&rhs) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
