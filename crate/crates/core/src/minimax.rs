//! Conic formulation of the constrained sup-norm minimization: among
//! polynomials of a fixed degree interpolating given node values, minimize
//! the largest modulus over a finite evaluation set.
//!
//! Variables are the real and imaginary parts of the coefficients plus the
//! bound `t`; node interpolation is a zero cone and each evaluation point
//! contributes one three-dimensional second-order cone
//! `(t, Re q, Im q)`.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::points::{BallPoint, SpherePoint};

pub(crate) struct MinimaxOutcome {
    pub coeffs: Vec<Complex64>,
}

pub(crate) fn solve_min_supnorm(
    basis: &[MultiIndex],
    nodes: &[BallPoint],
    values: &[Complex64],
    grid: &[SpherePoint],
    degree: u32,
) -> Result<MinimaxOutcome> {
    let m = nodes.len();
    let d = basis.len();
    let nvars = 2 * d + 1;
    let col_t = 2 * d;

    let node_monomials: Vec<Vec<Complex64>> = nodes
        .iter()
        .map(|z| basis.iter().map(|a| z.monomial(a)).collect())
        .collect();
    check_node_rank(&node_monomials, m, degree)?;
    let grid_monomials: Vec<Vec<Complex64>> = grid
        .iter()
        .map(|zeta| basis.iter().map(|a| zeta.monomial(a)).collect())
        .collect();

    let nrows = 2 * m + 3 * grid.len();
    let mut colptr = Vec::with_capacity(nvars + 1);
    let mut rowval = Vec::new();
    let mut nzval = Vec::new();
    let push = |rowval: &mut Vec<usize>, nzval: &mut Vec<f64>, row: usize, v: f64| {
        if v != 0.0 {
            rowval.push(row);
            nzval.push(v);
        }
    };

    for k in 0..d {
        // real part of coefficient k
        colptr.push(rowval.len());
        for (i, row_vals) in node_monomials.iter().enumerate() {
            push(&mut rowval, &mut nzval, 2 * i, row_vals[k].re);
            push(&mut rowval, &mut nzval, 2 * i + 1, row_vals[k].im);
        }
        for (s, row_vals) in grid_monomials.iter().enumerate() {
            let base = 2 * m + 3 * s;
            push(&mut rowval, &mut nzval, base + 1, -row_vals[k].re);
            push(&mut rowval, &mut nzval, base + 2, -row_vals[k].im);
        }
        // imaginary part of coefficient k
        colptr.push(rowval.len());
        for (i, row_vals) in node_monomials.iter().enumerate() {
            push(&mut rowval, &mut nzval, 2 * i, -row_vals[k].im);
            push(&mut rowval, &mut nzval, 2 * i + 1, row_vals[k].re);
        }
        for (s, row_vals) in grid_monomials.iter().enumerate() {
            let base = 2 * m + 3 * s;
            push(&mut rowval, &mut nzval, base + 1, row_vals[k].im);
            push(&mut rowval, &mut nzval, base + 2, -row_vals[k].re);
        }
    }
    // the bound variable heads every second-order cone
    colptr.push(rowval.len());
    for s in 0..grid.len() {
        push(&mut rowval, &mut nzval, 2 * m + 3 * s, -1.0);
    }
    colptr.push(rowval.len());

    let a = CscMatrix::new(nrows, nvars, colptr, rowval, nzval);
    let p = CscMatrix::<f64>::zeros((nvars, nvars));
    let mut q = vec![0.0; nvars];
    q[col_t] = 1.0;
    let mut b = vec![0.0; nrows];
    for (i, w) in values.iter().enumerate() {
        b[2 * i] = w.re;
        b[2 * i + 1] = w.im;
    }

    let mut cones: Vec<SupportedConeT<f64>> = Vec::with_capacity(grid.len() + 1);
    cones.push(SupportedConeT::ZeroConeT(2 * m));
    cones.extend((0..grid.len()).map(|_| SupportedConeT::SecondOrderConeT(3)));

    let settings = DefaultSettingsBuilder::default()
        .verbose(false)
        .build()
        .map_err(|e| Error::SolverFailure(format!("bad solver settings: {e}")))?;
    let mut solver = DefaultSolver::new(&p, &q, &a, &b, &cones, settings)
        .map_err(|e| Error::SolverFailure(format!("solver rejected the problem: {e}")))?;
    solver.solve();

    match solver.solution.status {
        SolverStatus::Solved | SolverStatus::AlmostSolved => {}
        SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
            return Err(Error::InfeasibleDegree {
                degree,
                hint: (m as u32).saturating_sub(1),
            });
        }
        other => {
            return Err(Error::SolverFailure(format!(
                "sup-norm minimization ended with status {other:?}"
            )));
        }
    }

    let x = &solver.solution.x;
    let coeffs = (0..d).map(|k| Complex64::new(x[2 * k], x[2 * k + 1])).collect();
    Ok(MinimaxOutcome { coeffs })
}

/// The interpolation constraints are solvable at this degree exactly when
/// the node-evaluation matrix has full row rank.
fn check_node_rank(node_monomials: &[Vec<Complex64>], m: usize, degree: u32) -> Result<()> {
    use crate::hardy::HermitianMatrix;
    let vvh = HermitianMatrix::from_fn(m, |i, j| {
        node_monomials[i]
            .iter()
            .zip(&node_monomials[j])
            .map(|(a, b)| a * b.conj())
            .sum()
    });
    let ev = vvh.eigenvalues();
    let lambda_max = ev[m - 1].max(1.0);
    if !(ev[0] > 1e-12 * lambda_max) {
        return Err(Error::InfeasibleDegree {
            degree,
            hint: (m as u32).saturating_sub(1),
        });
    }
    Ok(())
}
