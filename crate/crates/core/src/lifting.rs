//! Quantitative lifting verdicts: perturbation membership tests, the
//! operator-norm necessary condition, the unit-norm polynomial criterion,
//! constrained sup-norm upper bounds, and two-sided distance brackets.

use num_complex::Complex64;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::hardy::{eval_kernel_combo, KernelCombo};
use crate::interpolation::{InterpolationData, RationalFn1D};
use crate::minimax::solve_min_supnorm;
use crate::multiindex::indices_up_to_degree;
use crate::points::BallPoint;
use crate::poly::ComplexPoly;
use crate::quotient::{gram_operator_norm, module_map, QuotientModuleRep};
use crate::sphere::{poly_l2_norm_sq, poly_sphere_norm, sphere_grid, Estimate, NormOrder};

/// Values below this are treated as zero when inverting into a distance;
/// the corresponding bracket endpoint becomes infinite.
const DISTANCE_EPS: f64 = 1e-14;

/// Outcome of a feasibility analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible,
    Undetermined,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Feasible => "Feasible",
            Verdict::Infeasible => "Infeasible",
            Verdict::Undetermined => "Undetermined",
        }
    }
}

/// Outcome of the unit-norm polynomial criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitLiftVerdict {
    Lift,
    NoLift,
    Undetermined,
}

impl UnitLiftVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            UnitLiftVerdict::Lift => "Lift",
            UnitLiftVerdict::NoLift => "NoLift",
            UnitLiftVerdict::Undetermined => "Undetermined",
        }
    }
}

/// Whether a sup-norm upper bound is certified or heuristic.
///
/// On the circle the grid maximum of a degree-`d` polynomial inflated by
/// `1/cos(pi*d/N)` dominates the true supremum, so the bound is certified.
/// No analogous finite certificate is used in dimension two and up.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpperBoundKind {
    Certified,
    Heuristic,
}

impl UpperBoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            UpperBoundKind::Certified => "certified upper bound",
            UpperBoundKind::Heuristic => "heuristic upper bound",
        }
    }
}

/// A function given by polynomial coefficients, as a kernel combination,
/// or as a disc rational function; both sides of the perturbation test
/// accept any form.
#[derive(Debug, Clone)]
pub enum Analytic {
    Poly(ComplexPoly),
    Kernel(KernelCombo),
    Rational(RationalFn1D),
}

impl Analytic {
    pub fn dim(&self) -> usize {
        match self {
            Analytic::Poly(p) => p.dim(),
            Analytic::Kernel(k) => k.dim(),
            Analytic::Rational(_) => 1,
        }
    }

    pub fn eval(&self, z: &BallPoint) -> Result<Complex64> {
        match self {
            Analytic::Poly(p) => p.eval(z.coords()),
            Analytic::Kernel(k) => eval_kernel_combo(k, z),
            Analytic::Rational(r) => {
                if z.dim() != 1 {
                    return Err(Error::DimensionMismatch(
                        "rational functions are univariate".into(),
                    ));
                }
                Ok(r.eval(z.coords()[0]))
            }
        }
    }

    /// Taylor coefficient along `z^alpha`.
    fn taylor_coeff(&self, alpha: &crate::multiindex::MultiIndex) -> Result<Complex64> {
        match self {
            Analytic::Poly(p) => Ok(p.coeff(alpha)),
            Analytic::Kernel(k) => k.taylor_coeff(alpha),
            Analytic::Rational(r) => {
                let k = alpha.degree();
                Ok(r.taylor_coeffs(k)[k as usize])
            }
        }
    }
}

/// Decides whether `psi - phi` lies in the orthogonal complement of the
/// module.
///
/// For a kernel span this means `phi` matches `psi` at every node; for a
/// degree truncation it means every coefficient of `psi - phi` of total
/// degree at most `m` vanishes (within `tol`, absolute).
pub fn perturbation_check(
    psi: &Analytic,
    phi: &Analytic,
    q: &QuotientModuleRep,
    tol: f64,
) -> Result<bool> {
    if psi.dim() != phi.dim() || phi.dim() != q.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "psi in {} variables, phi in {}, module over {}",
            psi.dim(),
            phi.dim(),
            q.ambient_dim()
        )));
    }
    match q {
        QuotientModuleRep::KernelSpan(span) => {
            for z in span.points() {
                if (psi.eval(z)? - phi.eval(z)?).norm() > tol {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        QuotientModuleRep::PolySpace(space) => {
            for alpha in space.basis() {
                if (psi.taylor_coeff(alpha)? - phi.taylor_coeff(alpha)?).norm() > tol {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// The necessary condition for a contractive lift: the Gram-weighted norm
/// of the module map must not exceed 1.
#[derive(Debug, Clone, Copy)]
pub struct NecessaryCheck {
    pub opnorm: f64,
    pub pass: bool,
}

pub fn lift_necessary_check(data: &InterpolationData, cfg: &Config) -> Result<NecessaryCheck> {
    cfg.validate()?;
    let op = module_map(data.points(), data.values())?;
    let opnorm = gram_operator_norm(&op, cfg)?;
    Ok(NecessaryCheck { opnorm, pass: opnorm <= 1.0 + cfg.tol_psd })
}

/// Result of the unit-norm polynomial criterion: a polynomial of unit
/// Hardy norm multiplies contractively on its truncation module exactly
/// when its boundary modulus is constantly 1, which is decided through the
/// L¹/L² comparison.
#[derive(Debug, Clone)]
pub struct UnitLiftOutcome {
    pub l1: Estimate,
    pub l2: f64,
    /// Largest deviation of `|p|` from 1 over the evaluation grid.
    pub grid_deviation: f64,
    pub verdict: UnitLiftVerdict,
}

pub fn unit_l2_lift_test(p: &ComplexPoly, m: u32, cfg: &Config) -> Result<UnitLiftOutcome> {
    cfg.validate()?;
    if p.is_zero() {
        return Err(Error::InvalidArgument("the zero polynomial has no unit norm".into()));
    }
    let deg = p.degree().unwrap_or(0);
    if m < deg {
        return Err(Error::InvalidArgument(format!(
            "truncation degree {m} is below the polynomial degree {deg}"
        )));
    }
    let l2 = poly_l2_norm_sq(p)?.sqrt();
    if (l2 - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "polynomial norm {l2} is not 1 within 1e-10; normalize first"
        )));
    }
    let l1 = poly_sphere_norm(p, NormOrder::L1, cfg)?;
    let grid_deviation = sphere_grid(p.dim(), cfg)
        .iter()
        .map(|zeta| (p.eval(zeta.coords()).expect("dimension checked").norm() - 1.0).abs())
        .fold(0.0, f64::max);

    let verdict = if l1.value >= 1.0 - 3.0 * l1.std_error && grid_deviation <= cfg.solver_tol {
        UnitLiftVerdict::Lift
    } else if l1.value + 3.0 * l1.std_error < 1.0 {
        UnitLiftVerdict::NoLift
    } else {
        UnitLiftVerdict::Undetermined
    };
    Ok(UnitLiftOutcome { l1, l2, grid_deviation, verdict })
}

/// An upper bound on the minimal interpolant sup-norm, with the witness
/// that produced it.
#[derive(Debug, Clone)]
pub struct SupNormBound {
    /// Inflated grid maximum of the witness.
    pub value: f64,
    pub witness: ComplexPoly,
    pub kind: UpperBoundKind,
    /// Raw (uninflated) grid maximum of the witness.
    pub grid_max: f64,
    /// Largest node interpolation error of the witness.
    pub node_residual: f64,
}

/// Minimizes the grid maximum of `|q|` over polynomials `q` of total
/// degree at most `degree` interpolating the data, then inflates the
/// optimum into an upper bound for the sup-norm of the witness.
///
/// The witness is post-corrected to interpolate the nodes to machine
/// precision (minimum-norm coefficient update), so its true sup-norm
/// dominates the minimal interpolant sup-norm of the data.
pub fn min_supnorm_upper(
    data: &InterpolationData,
    degree: u32,
    cfg: &Config,
) -> Result<SupNormBound> {
    cfg.validate()?;
    if degree > cfg.max_degree {
        return Err(Error::InvalidArgument(format!(
            "degree {degree} exceeds the configured maximum {}",
            cfg.max_degree
        )));
    }
    let n = data.ambient_dim();
    let basis = indices_up_to_degree(n, degree);
    let grid = sphere_grid(n, cfg);
    let outcome = solve_min_supnorm(&basis, data.points(), data.values(), &grid, degree)?;

    let mut witness = ComplexPoly::from_terms(
        n,
        basis.iter().cloned().zip(outcome.coeffs.iter().copied()),
    )?;
    witness = correct_to_exact_interpolation(&witness, &basis, data)?;

    let node_residual = data
        .points()
        .iter()
        .zip(data.values())
        .map(|(z, w)| (witness.eval(z.coords()).expect("dimensions agree") - w).norm())
        .fold(0.0, f64::max);
    let grid_max = grid
        .iter()
        .map(|zeta| witness.eval(zeta.coords()).expect("dimensions agree").norm())
        .fold(0.0, f64::max);

    let bernstein = circle_inflation(degree, cfg.grid_points_per_dim)?;
    let inflation = match cfg.inflation_factor {
        Some(f) => f,
        None if n == 1 => bernstein,
        None => 1.02,
    };
    let kind = if n == 1 && inflation >= bernstein - 1e-15 {
        UpperBoundKind::Certified
    } else {
        UpperBoundKind::Heuristic
    };
    Ok(SupNormBound {
        value: inflation * grid_max,
        witness,
        kind,
        grid_max,
        node_residual,
    })
}

fn circle_inflation(degree: u32, grid_points: usize) -> Result<f64> {
    let cosine = (std::f64::consts::PI * f64::from(degree) / grid_points as f64).cos();
    if cosine <= 0.5 {
        return Err(Error::InvalidArgument(format!(
            "grid of {grid_points} points is too coarse for degree {degree}"
        )));
    }
    Ok(cosine.recip())
}

/// Minimum-norm coefficient update making the witness match the node
/// values exactly (up to rounding): solve `(V V*) y = r`, add `V* y`.
fn correct_to_exact_interpolation(
    witness: &ComplexPoly,
    basis: &[crate::multiindex::MultiIndex],
    data: &InterpolationData,
) -> Result<ComplexPoly> {
    use nalgebra::{DMatrix, DVector};
    let m = data.len();
    let v = DMatrix::from_fn(m, basis.len(), |i, k| data.points()[i].monomial(&basis[k]));
    let residual = DVector::from_fn(m, |i, _| {
        data.values()[i] - witness.eval(data.points()[i].coords()).expect("dimensions agree")
    });
    let vvh = &v * v.adjoint();
    let y = crate::hardy::cholesky_solve(&vvh, &residual)?;
    let delta = v.adjoint() * y;
    let correction = ComplexPoly::from_terms(
        data.ambient_dim(),
        basis.iter().cloned().zip(delta.iter().copied()),
    )?;
    witness.add(&correction)
}

/// Two-sided feasibility analysis of interpolation data.
#[derive(Debug, Clone)]
pub struct LiftReport {
    /// Gram-weighted norm of the module map; every contractive lift needs
    /// this at most 1.
    pub opnorm_lower: f64,
    /// Inflated sup-norm of the best interpolating witness found.
    pub supnorm_upper: f64,
    pub upper_bound_kind: UpperBoundKind,
    /// `[1/supnorm_upper, 1/opnorm_lower]`, with infinite endpoints where
    /// the inverted quantity vanishes.
    pub distance_bracket: (f64, f64),
    pub verdict: Verdict,
    pub witness: Option<ComplexPoly>,
    pub witness_residual: f64,
}

/// Assembles the operator-norm lower bound and the sup-norm upper bound
/// into a distance bracket and a verdict.
pub fn distance_report(data: &InterpolationData, degree: u32, cfg: &Config) -> Result<LiftReport> {
    let necessary = lift_necessary_check(data, cfg)?;
    let upper = min_supnorm_upper(data, degree, cfg)?;

    if necessary.opnorm > upper.value + cfg.solver_tol {
        return Err(Error::InternalConsistency(format!(
            "operator norm {:.12e} exceeds the sup-norm upper bound {:.12e}",
            necessary.opnorm, upper.value
        )));
    }
    let invert = |x: f64| if x > DISTANCE_EPS { 1.0 / x } else { f64::INFINITY };
    let bracket = (invert(upper.value), invert(necessary.opnorm));

    let verdict = if upper.value <= 1.0 + cfg.solver_tol {
        Verdict::Feasible
    } else if necessary.opnorm > 1.0 + cfg.tol_psd {
        Verdict::Infeasible
    } else {
        Verdict::Undetermined
    };
    Ok(LiftReport {
        opnorm_lower: necessary.opnorm,
        supnorm_upper: upper.value,
        upper_bound_kind: upper.kind,
        distance_bracket: bracket,
        verdict,
        witness_residual: upper.node_residual,
        witness: Some(upper.witness),
    })
}
