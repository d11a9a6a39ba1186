//! Finite-dimensional quotient modules of the Hardy space, orthogonal
//! projections onto them, and compressed multiplication operators with
//! their Gram-weighted operator norms.
//!
//! Two families of modules are represented: spans of kernel functions at a
//! distinct node set, and polynomial truncations at a maximal total degree.
//! Bases are ordered canonically (see [`MultiIndex`]) so every matrix here
//! is reproducible across runs.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::hardy::{h2_inner, kernel_gram, HermitianMatrix, KernelCombo, KernelGram};
use crate::multiindex::{indices_up_to_degree, MultiIndex};
use crate::points::BallPoint;
use crate::poly::ComplexPoly;
use crate::sphere::monomial_integral;

/// Span of the kernel functions at a distinct node set, kept in the raw
/// kernel basis. Orthonormalization happens only inside the operator norm,
/// through the cached Gram factor; this keeps adjoint-diagonal structure
/// exact.
#[derive(Debug, Clone)]
pub struct KernelSpan {
    gram: KernelGram,
}

impl KernelSpan {
    pub fn points(&self) -> &[BallPoint] {
        self.gram.points()
    }

    pub fn gram(&self) -> &HermitianMatrix {
        self.gram.gram()
    }

    pub fn factor(&self) -> &DMatrix<Complex64> {
        self.gram.factor()
    }

    pub fn rcond(&self) -> f64 {
        self.gram.rcond()
    }

    /// Module dimension (number of nodes).
    pub fn len(&self) -> usize {
        self.gram.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gram.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.points()[0].dim()
    }

    pub(crate) fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        self.gram.solve(rhs)
    }
}

/// Polynomials of total degree at most `max_degree` in `ambient_dim`
/// variables, with the canonical monomial basis and its exact norms.
#[derive(Debug, Clone)]
pub struct PolySpace {
    max_degree: u32,
    ambient_dim: usize,
    basis: Vec<MultiIndex>,
    norms: Vec<f64>,
}

impl PolySpace {
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Monomial exponents in canonical order.
    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    /// Exact Hardy-space norms of the basis monomials.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    /// Module dimension, `C(n + m, n)`.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }
}

/// A finite-dimensional quotient module in either representation.
#[derive(Debug, Clone)]
pub enum QuotientModuleRep {
    KernelSpan(KernelSpan),
    PolySpace(PolySpace),
}

impl QuotientModuleRep {
    pub fn len(&self) -> usize {
        match self {
            QuotientModuleRep::KernelSpan(q) => q.len(),
            QuotientModuleRep::PolySpace(q) => q.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ambient_dim(&self) -> usize {
        match self {
            QuotientModuleRep::KernelSpan(q) => q.ambient_dim(),
            QuotientModuleRep::PolySpace(q) => q.ambient_dim(),
        }
    }
}

impl From<KernelSpan> for QuotientModuleRep {
    fn from(q: KernelSpan) -> Self {
        QuotientModuleRep::KernelSpan(q)
    }
}

impl From<PolySpace> for QuotientModuleRep {
    fn from(q: PolySpace) -> Self {
        QuotientModuleRep::PolySpace(q)
    }
}

/// Builds the kernel span at a distinct node set.
pub fn build_qz(points: &[BallPoint]) -> Result<KernelSpan> {
    Ok(KernelSpan { gram: kernel_gram(points)? })
}

/// Builds the degree-`m` polynomial truncation module in `n` variables.
pub fn build_qm(m: u32, n: usize) -> Result<PolySpace> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let basis = indices_up_to_degree(n, m);
    let norms = basis
        .iter()
        .map(|alpha| monomial_integral(alpha, alpha, n).map(f64::sqrt))
        .collect::<Result<Vec<_>>>()?;
    Ok(PolySpace { max_degree: m, ambient_dim: n, basis, norms })
}

/// Projection onto a kernel span from the values a function takes at the
/// nodes: the combination `g = sum c_j S_n(., z_j)` with `G c = values`
/// reproduces those values.
pub fn project_qz(values: &[Complex64], q: &KernelSpan) -> Result<KernelCombo> {
    if values.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} values against {} nodes",
            values.len(),
            q.len()
        )));
    }
    let coeffs = q.solve(values);
    let combo = KernelCombo::new(q.points().to_vec(), coeffs)?;
    // residual guard: the factored solve should reproduce node values
    let scale = values.iter().map(|v| v.norm()).fold(1.0, f64::max);
    for (z, v) in q.points().iter().zip(values) {
        let got = crate::hardy::eval_kernel_combo(&combo, z)?;
        if (got - v).norm() > 1e-10 * scale {
            return Err(Error::IllConditioned {
                pivot: 0,
                detail: format!(
                    "projection residual {:.3e} exceeds 1e-10 relative",
                    (got - v).norm() / scale
                ),
            });
        }
    }
    Ok(combo)
}

/// Projection onto the degree-`m` truncation: keeps terms of total degree
/// at most `m` verbatim and drops the rest.
pub fn project_qm(p: &ComplexPoly, m: u32) -> ComplexPoly {
    p.truncate(m)
}

/// The matrix of a module map in a declared basis, together with that
/// basis. When the map was built from pointwise multiplier values on a
/// kernel span, the values are retained: the adjoint is then exactly
/// diagonal, and the operator norm can be cross-checked independently.
#[derive(Debug, Clone)]
pub struct CompressedOp {
    module: QuotientModuleRep,
    matrix: DMatrix<Complex64>,
    adjoint_diag: Option<Vec<Complex64>>,
}

impl CompressedOp {
    pub fn module(&self) -> &QuotientModuleRep {
        &self.module
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Multiplier values at the nodes for adjoint-diagonal operators.
    pub fn adjoint_diag(&self) -> Option<&[Complex64]> {
        self.adjoint_diag.as_deref()
    }

    /// Matrix of the adjoint in the module basis. For adjoint-diagonal
    /// operators on kernel spans this is exactly `diag(conj(values))`.
    pub fn adjoint_matrix(&self) -> DMatrix<Complex64> {
        match (&self.module, &self.adjoint_diag) {
            (QuotientModuleRep::KernelSpan(_), Some(values)) => {
                DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                    values.len(),
                    values.iter().map(|w| w.conj()),
                ))
            }
            (QuotientModuleRep::KernelSpan(q), None) => {
                // B = G^{-1} A^* G in a non-orthonormal basis
                let ag = self.matrix.adjoint() * q.gram().matrix();
                solve_gram(q, &ag)
            }
            (QuotientModuleRep::PolySpace(_), _) => self.matrix.adjoint(),
        }
    }

    pub fn compose(&self, other: &CompressedOp) -> Result<CompressedOp> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "composing operators of dimension {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(CompressedOp {
            module: self.module.clone(),
            matrix: &self.matrix * &other.matrix,
            adjoint_diag: None,
        })
    }
}

fn solve_gram(q: &KernelSpan, rhs: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let l = q.factor();
    let y = l
        .solve_lower_triangular(rhs)
        .expect("cached factor has positive diagonal");
    l.adjoint()
        .solve_upper_triangular(&y)
        .expect("cached factor has positive diagonal")
}

/// Compression of multiplication by `p` to a polynomial truncation module,
/// in the orthonormalized monomial basis `z^a / |z^a|`:
/// `entry(c, b) = <p z^b, z^c> / (|z^b| |z^c|)`.
pub fn compress_on_qm(p: &ComplexPoly, q: &PolySpace) -> Result<CompressedOp> {
    if p.dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "multiplier in {} variables against a module over {} variables",
            p.dim(),
            q.ambient_dim()
        )));
    }
    let d = q.len();
    let mut matrix = DMatrix::zeros(d, d);
    for (b, beta) in q.basis().iter().enumerate() {
        let shifted = p.mul(&ComplexPoly::monomial(beta.clone(), Complex64::ONE))?;
        for (r, gamma) in q.basis().iter().enumerate() {
            let inner = h2_inner(&shifted, &ComplexPoly::monomial(gamma.clone(), Complex64::ONE))?;
            matrix[(r, b)] = inner / (q.norms()[b] * q.norms()[r]);
        }
    }
    Ok(CompressedOp {
        module: QuotientModuleRep::PolySpace(q.clone()),
        matrix,
        adjoint_diag: None,
    })
}

/// Compression of a multiplier given by its values at the nodes of a
/// kernel span. The adjoint acts diagonally on the kernel basis with
/// eigenvalues `conj(values_i)`, so the matrix of the map itself is
/// `G^{-1} diag(values) G`.
pub fn compress_on_qz(values: &[Complex64], q: &KernelSpan) -> Result<CompressedOp> {
    if values.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} multiplier values against {} nodes",
            values.len(),
            q.len()
        )));
    }
    let m = q.len();
    let mut dg = q.gram().matrix().clone();
    for i in 0..m {
        for j in 0..m {
            dg[(i, j)] *= values[i];
        }
    }
    let matrix = solve_gram(q, &dg);
    Ok(CompressedOp {
        module: QuotientModuleRep::KernelSpan(q.clone()),
        matrix,
        adjoint_diag: Some(values.to_vec()),
    })
}

/// The module map of an interpolation problem: the operator on the kernel
/// span at `points` whose adjoint scales each kernel function by the
/// conjugated target value. Linear in `values`.
pub fn module_map(points: &[BallPoint], values: &[Complex64]) -> Result<CompressedOp> {
    let q = build_qz(points)?;
    compress_on_qz(values, &q)
}

/// Operator norm with respect to the module's inner product.
///
/// In an orthonormal basis this is the largest singular value of the
/// stored matrix; in a kernel basis it is the largest singular value of
/// `L* A L^{-*}` where `G = L L*`. For adjoint-diagonal operators the norm
/// is recomputed independently as the smallest `t >= 0` making
/// `[(t^2 - w_i conj(w_j)) G_ij]` positive semidefinite; the two routes
/// must agree to `1e-6` or an internal-consistency error is raised.
pub fn gram_operator_norm(op: &CompressedOp, cfg: &Config) -> Result<f64> {
    let sigma = match op.module() {
        QuotientModuleRep::PolySpace(_) => largest_singular_value(op.matrix().clone()),
        QuotientModuleRep::KernelSpan(q) => {
            let l = q.factor();
            // L* A L^{-*} = (L^{-1} A* L)^*; same singular values either way
            let y = op.matrix().adjoint() * l;
            let z = l
                .solve_lower_triangular(&y)
                .expect("cached factor has positive diagonal");
            largest_singular_value(z)
        }
    };
    if let (QuotientModuleRep::KernelSpan(q), Some(values)) = (op.module(), op.adjoint_diag()) {
        let t_psd = smallest_psd_scale(q.gram(), values, cfg)?;
        if (sigma - t_psd).abs() > 1e-6 * sigma.max(1.0) {
            return Err(Error::InternalConsistency(format!(
                "factored norm {sigma:.12e} and feasibility-scale norm {t_psd:.12e} disagree"
            )));
        }
    }
    Ok(sigma)
}

fn largest_singular_value(m: DMatrix<Complex64>) -> f64 {
    if m.iter().all(|z| *z == Complex64::ZERO) {
        return 0.0;
    }
    nalgebra::SVD::new(m, false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Smallest `t >= 0` such that `[(t^2 - w_i conj(w_j)) g_ij]` is positive
/// semidefinite, by bisection. `g` must be positive definite.
pub(crate) fn smallest_psd_scale(
    g: &HermitianMatrix,
    w: &[Complex64],
    cfg: &Config,
) -> Result<f64> {
    if w.len() != g.dim() {
        return Err(Error::DimensionMismatch(format!(
            "{} values against a {}x{} matrix",
            w.len(),
            g.dim(),
            g.dim()
        )));
    }
    let scaled = |t: f64| -> HermitianMatrix {
        let tsq = t * t;
        HermitianMatrix::from_fn(g.dim(), |i, j| {
            (tsq - w[i] * w[j].conj()) * g.entry(i, j)
        })
    };
    let ev = g.eigenvalues();
    // The eigenvalue of the scaled matrix moves by at least
    // lambda_min(g) * d(t^2), so this threshold keeps the accepted t
    // within ~tol_psd/t* of the crossing even for ill-conditioned g.
    let tau = cfg.tol_psd * ev[0].max(1e-300);
    let psd = |t: f64| scaled(t).min_eigenvalue() >= -tau;

    if psd(0.0) {
        return Ok(0.0);
    }
    let cond = ev[ev.len() - 1] / ev[0];
    let w_max = w.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut hi = w_max * cond.sqrt() + 1.0;
    let mut lo = 0.0;
    if !psd(hi) {
        return Err(Error::SolverFailure(format!(
            "feasibility bracket [{lo}, {hi}] does not contain a semidefinite point"
        )));
    }
    for _ in 0..60 {
        if hi - lo <= cfg.tol_bisect {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if psd(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}
